use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twk_core::cochain::{CellSite, Cochain};
use twk_core::dgresolution::{mc_check_simplex, sigma_pushforward};
use twk_core::exactalg::GradedMap;
use twk_core::random::{self, Backend, Params};
use twk_core::simplicial::OrdinalMap;
use twk_core::totalization::{mc_check_tot, simplex_at, tot_mor_diff, tot_to_twisted, twisted_to_tot};
use twk_core::twisted::{mc_check_tw, tw_mor_diff, TwPerfComplex};

fn object(r: &mut ChaCha8Rng, b: Backend) -> TwPerfComplex {
    let cover = random::cover_with_opens(r, b, 3, 0.8);
    random::random_tw(r, &cover, &Params::default()).unwrap()
}

/// Adds a unit to one entry of a random component at levels 0..=2.
fn perturb(r: &mut ChaCha8Rng, t: &TwPerfComplex) -> Option<TwPerfComplex> {
    let site = t.site();
    let k = r.gen_range(0..=2);
    let cells = site.cells(k);
    let cell = cells.get(r.gen_range(0..cells.len().max(1)))?.clone();
    let (s, tg, q) = t.a().slot(site, &cell);
    let ring = site.ring(&cell);
    let degs: Vec<i32> = s.degrees().map(|(d, _)| d).filter(|d| tg.rank(d + q) > 0).collect();
    let d = *degs.get(r.gen_range(0..degs.len().max(1)))?;
    let old = t.a().get(&cell).cloned().unwrap_or_else(|| GradedMap::zero(ring, &s, &tg, q));
    let mut block = old.block(d);
    let (i, j) = (r.gen_range(0..tg.rank(d + q)), r.gen_range(0..s.rank(d)));
    block.set(i, j, ring.add(block.get(i, j), &ring.one()));
    let mut m = old;
    m.set_block(d, block).ok()?;
    t.with_component(&cell, m).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn conversion_round_trips(seed in any::<u64>(), b in 0usize..3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let t = object(&mut r, Backend::ALL[b]);
        let back = tot_to_twisted(&twisted_to_tot(&t).unwrap()).unwrap();
        prop_assert_eq!(back.a().first_difference(t.a()), None);
    }

    /// Both validators accept and reject the same objects.
    #[test]
    fn validators_agree(seed in any::<u64>(), b in 0usize..3) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let t = object(&mut r, Backend::ALL[b]);
        let candidates: Vec<TwPerfComplex> = std::iter::once(t.clone()).chain(perturb(&mut r, &t)).collect();
        for c in candidates {
            let tw = mc_check_tw(&c).passed();
            let tot = mc_check_tot(&twisted_to_tot(&c).unwrap()).passed();
            prop_assert_eq!(tw, tot);
        }
    }

    #[test]
    fn morphism_differentials_agree(seed in any::<u64>(), b in 0usize..3, m in -1i32..=1) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let cover = random::cover_with_opens(&mut r, Backend::ALL[b], 3, 0.8);
        let (t, u) = (random::random_tw(&mut r, &cover, &Params::default()).unwrap(), random::random_tw(&mut r, &cover, &Params::default()).unwrap());
        let theta: Cochain = random::random_cochain(&mut r, t.site(), t.locals(), u.locals(), m, 2, 0.4);
        let tw = tw_mor_diff(&t, &u, &theta).unwrap();
        let tot = tot_mor_diff(&twisted_to_tot(&t).unwrap(), &twisted_to_tot(&u).unwrap(), &theta).unwrap();
        prop_assert_eq!(tw.first_difference(&tot), None);
    }

    /// Every cell carries a valid object on its simplex, and pushing it along
    /// `σ` gives the object of the pulled-back cell.
    #[test]
    fn cell_objects_are_functorial(seed in any::<u64>(), b in 0usize..2, n in 0usize..=2, k in 0usize..=2, pick in any::<usize>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        // constant coefficient rings, so both sides live over the same ring
        let t = object(&mut r, [Backend::Rationals, Backend::F101][b]);
        let tot = twisted_to_tot(&t).unwrap();
        let cells = t.site().cells(n);
        let cell = &cells[pick % cells.len()];
        let s = simplex_at(&tot, cell).unwrap();
        prop_assert!(mc_check_simplex(&s).passed());
        let maps = OrdinalMap::all(k, n);
        let sigma = &maps[(pick / 7) % maps.len()];
        let pulled: Vec<usize> = sigma.values().iter().map(|i| cell[*i]).collect();
        prop_assert_eq!(sigma_pushforward(sigma, &s).unwrap(), simplex_at(&tot, &pulled).unwrap());
    }
}
