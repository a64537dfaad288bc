use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twk_core::cochain::CellSite;
use twk_core::dgresolution::ComplexObj;
use twk_core::equivariant::{
    degenerate_cells, face_cell, mc_check_equiv, mor_diff_equiv, mor_diff_equiv_at, strict_from_cocycle, EquivariantComplex,
    FaceSide,
};
use twk_core::exactalg::{GradedMap, GradedModule, Matrix, Ring};
use twk_core::random::{self, Backend, Params};
use twk_core::simplicial::{Group, GroupAction};

fn equivariant(r: &mut ChaCha8Rng, b: usize, action: GroupAction) -> EquivariantComplex {
    random::random_equivariant(r, &Backend::ALL[b % 3].ring(), action, &Params::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn generated_objects_are_valid_and_normalized(seed in any::<u64>(), b in 0usize..3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let action = random::random_action(&mut r);
        let e = equivariant(&mut r, b, action);
        prop_assert!(mc_check_equiv(&e).passed());
        for k in 2..=3 {
            for c in degenerate_cells(e.action(), k) {
                prop_assert!(e.phi().get(&c).is_none(), "nonzero at degenerate {:?}", c);
            }
        }
    }

    /// The engine's differential agrees with the term-by-term sum and squares to zero.
    #[test]
    fn morphism_differential(seed in any::<u64>(), b in 0usize..3, m in -1i32..=1) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let action = random::random_action(&mut r);
        let (s, t) = (equivariant(&mut r, b, action.clone()), equivariant(&mut r, b, action));
        let theta = random::random_cochain(&mut r, s.site(), s.family(), t.family(), m, 2, 0.4);
        let d = mor_diff_equiv(&s, &t, &theta).unwrap();
        for k in 0..=2 {
            for c in s.site().cells(k) {
                let want = mor_diff_equiv_at(&s, &t, &theta, &c);
                let got = d.get(&c).cloned().unwrap_or_else(|| GradedMap::zero(want.ring(), want.source(), want.target(), want.degree()));
                prop_assert_eq!(got, want, "cell {:?}", c);
            }
        }
        prop_assert!(mor_diff_equiv(&s, &t, &d).unwrap().is_zero());
    }

    /// Iterated fronts and backs are fronts and backs, and they meet at the
    /// expected point.
    #[test]
    fn front_and_back_compose(seed in any::<u64>(), k in 0usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let a = random::random_action(&mut r);
        for c in a.level(k) {
            for p in 0..=k {
                let (f, bk) = (face_cell(&a, FaceSide::Front, &c, p).unwrap(), face_cell(&a, FaceSide::Back, &c, p).unwrap());
                prop_assert_eq!(a.vertex(&f, p), a.vertex(&c, p));
                prop_assert_eq!(bk[0], a.vertex(&c, k - p));
                prop_assert_eq!(a.vertex(&bk, p), a.vertex(&c, k));
                for q in 0..=p {
                    prop_assert_eq!(face_cell(&a, FaceSide::Front, &f, q).unwrap(), face_cell(&a, FaceSide::Front, &c, q).unwrap());
                    prop_assert_eq!(face_cell(&a, FaceSide::Back, &bk, q).unwrap(), face_cell(&a, FaceSide::Back, &c, q).unwrap());
                }
            }
        }
    }

    /// Rank-one scalar data: the strict constructor accepts exactly the cocycles,
    /// and the validator agrees.
    #[test]
    fn strict_iff_cocycle(seed in any::<u64>(), order in 1usize..=3, regular in any::<bool>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let q = Ring::rationals();
        let g = Group::cyclic(order);
        let action = Arc::new(if regular { GroupAction::regular(g.clone()) } else { GroupAction::trivial(g.clone(), 2) });
        let n = action.carrier();
        // a genuine cocycle c(x, g) = u(x) / u(x·g), then maybe one entry spoiled
        let u: Vec<i64> = (0..n).map(|_| [1, 2, -3][r.gen_range(0..3)]).collect();
        let mut c: BTreeMap<(usize, usize), (i64, i64)> = BTreeMap::new();
        for x in 0..n {
            for h in 0..order {
                c.insert((x, h), (u[x], u[action.act(x, h)]));
            }
        }
        if order > 1 && r.gen_bool(0.5) {
            let x = r.gen_range(0..n);
            let h = r.gen_range(1..order);
            c.get_mut(&(x, h)).unwrap().0 *= 5;
        }
        let unit = GradedModule::unit();
        let scalar = |(a, b): (i64, i64)| {
            let v = q.mul(&q.from_i64(a), &q.inv(&q.from_i64(b)).unwrap());
            GradedMap::from_blocks(&q, &unit, &unit, 0, [(0, Matrix::from_rows(&q, vec![vec![v]]).unwrap())]).unwrap()
        };
        let value = |x: usize, h: usize| {
            let (a, b) = c[&(x, h)];
            q.mul(&q.from_i64(a), &q.inv(&q.from_i64(b)).unwrap())
        };
        let brute = (0..n).all(|x| (0..order).all(|g1| (0..order).all(|g2| {
            value(x, g.mul(g1, g2)) == q.mul(&value(x, g1), &value(action.act(x, g1), g2))
        })));
        let maps: BTreeMap<(usize, usize), GradedMap> = c.iter().map(|(k, v)| (*k, scalar(*v))).collect();
        let objects = vec![ComplexObj::zero_diff(&q, &unit); n];
        let strict = strict_from_cocycle(action.clone(), &q, objects.clone(), &maps);
        prop_assert_eq!(strict.is_ok(), brute);
        let comps = maps.iter().map(|(&(x, h), m)| (vec![x, h], m.clone())).collect();
        let loose = EquivariantComplex::from_components(action, &q, objects, comps).unwrap();
        prop_assert_eq!(mc_check_equiv(&loose).passed(), brute);
    }

    /// Over the trivial group only the unit components survive.
    #[test]
    fn trivial_group(seed in any::<u64>(), b in 0usize..3, points in 1usize..=3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let e = equivariant(&mut r, b, GroupAction::trivial(Group::cyclic(1), points));
        prop_assert!(mc_check_equiv(&e).passed());
        for (cell, m) in e.phi().components() {
            prop_assert_eq!(cell.len(), 2);
            prop_assert_eq!(m, &GradedMap::identity(e.site().ring(cell), &e.family()[cell[0]]));
        }
    }
}
