use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twk_core::cohomology::{assemble_hom, cech_oracle, default_window, hom_cohomology, p1_line_bundle, p1_units, projective_line, AssembledComplex};
use twk_core::random::{self, Backend, Params};

fn squares_to_zero(c: &AssembledComplex) -> bool {
    c.slices.iter().all(|s| {
        s.diffs.iter().all(|(m, d)| match s.diffs.get(&(m + 1)) {
            Some(next) => next.mul(d).unwrap().is_zero(),
            None => true,
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn line_bundle_hom_complexes_square_to_zero(a in -4i32..=4, b in -4i32..=4) {
        let p1 = projective_line();
        let (s, t) = (p1_line_bundle(&p1, a), p1_line_bundle(&p1, b));
        let w = default_window(&[&s, &t]);
        prop_assert!(squares_to_zero(&assemble_hom(&s, &t, -1..=2, w).unwrap()));
    }

    #[test]
    fn random_hom_complexes_square_to_zero(seed in any::<u64>(), b in 0usize..2) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let cover = random::cover_with_opens(&mut r, [Backend::Rationals, Backend::F101][b], 3, 0.8);
        let p = Params { max_rank: 1, ..Params::default() };
        let (s, t) = (random::random_tw(&mut r, &cover, &p).unwrap(), random::random_tw(&mut r, &cover, &p).unwrap());
        prop_assert!(squares_to_zero(&assemble_hom(&s, &t, -2..=2, 0).unwrap()));
    }

    /// Per weight, `Hom(O(a), O(b))` matches the alternating Čech complex of `O(b − a)`.
    #[test]
    fn agrees_with_alternating_cech(a in -4i32..=4, b in -4i32..=4) {
        let p1 = projective_line();
        let (s, t) = (p1_line_bundle(&p1, a), p1_line_bundle(&p1, b));
        let w = default_window(&[&s, &t]);
        let ours = hom_cohomology(&s, &t, 0..=1, Some(w)).unwrap();
        let theirs = cech_oracle(&p1, &p1_units(&p1, b - a), 0..=1, w).unwrap();
        let nz = |r: &twk_core::cohomology::CohomologyReport| r.nonzero().map(|(m, w, v)| (m, w.clone(), v)).collect::<Vec<_>>();
        prop_assert_eq!(nz(&ours), nz(&theirs));
    }

    /// `h⁰ − h¹ = n + 1` and `h⁰ h¹ = 0` for `O(n)`.
    #[test]
    fn riemann_roch(n in -6i32..=6) {
        let p1 = projective_line();
        let c = hom_cohomology(&p1_line_bundle(&p1, 0), &p1_line_bundle(&p1, n), 0..=1, None).unwrap();
        let (h0, h1) = (c.total(0) as i32, c.total(1) as i32);
        prop_assert_eq!(h0 - h1, n + 1);
        prop_assert_eq!(h0 * h1, 0);
    }
}
