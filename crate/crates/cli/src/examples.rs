//! The named example manifests, built from library fixtures.

use std::collections::BTreeMap;
use std::sync::Arc;

use anyhow::{bail, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twk_core::cohomology::{p1_line_bundle, projective_line};
use twk_core::dgresolution::constant_embed;
use twk_core::equivariant::fixtures;
use twk_core::exactalg::Ring;
use twk_core::random::{self, Params};
use twk_core::simplicial::{all_subsets, RingedCover};
use twk_core::twisted::line_bundle;

use crate::manifest::{action_spec, cover_spec, equivariant_spec, simplex_spec, twisted_spec, Manifest, Options};
use crate::selftest::known_bad;

pub const NAMES: [&str; 3] = ["p1-line-bundles", "z2-sign-rep", "three-open-nerve"];

/// `O(n)` for `|n| ≤ 5` on ℙ¹, plus a copy of `O(3)` whose transition is doubled.
fn p1_line_bundles() -> Manifest {
    let p1 = projective_line();
    let mut objects = BTreeMap::new();
    for n in -5..=5 {
        objects.insert(format!("O({n})"), twisted_spec(&p1_line_bundle(&p1, n)));
    }
    objects.insert("O(3)-perturbed".into(), twisted_spec(&known_bad()));
    Manifest { cover: Some(cover_spec(&p1)), objects, ..Manifest::default() }
}

/// `ℤ/2` fixtures: sign and swap representations, a broken cocycle and its
/// homotopy repair, plus a constant object on the 1-simplex.
fn z2_sign_rep() -> Manifest {
    let q = Ring::rationals();
    let sign = fixtures::sign_rep(&q);
    let swap = fixtures::point_swap(&q);
    let repaired = fixtures::homotopy_repaired(&q, true);
    let actions = [("z2-point".to_string(), action_spec(sign.action())), ("z2-swap".to_string(), action_spec(swap.action()))].into();
    let objects = [
        ("sign".to_string(), equivariant_spec(&sign, "z2-point")),
        ("swap".to_string(), equivariant_spec(&swap, "z2-swap")),
        ("broken".to_string(), equivariant_spec(&fixtures::broken_cocycle(&q), "z2-point")),
        ("repaired".to_string(), equivariant_spec(&repaired, "z2-point")),
        ("unrepaired".to_string(), equivariant_spec(&fixtures::homotopy_repaired(&q, false), "z2-point")),
        ("edge".to_string(), simplex_spec(&constant_embed(&repaired.objects()[0], 1))),
    ]
    .into();
    Manifest { actions, objects, ..Manifest::default() }
}

/// Three pairwise overlapping opens over `F_7`: the trivial bundle and a seeded
/// random twisted complex.
fn three_open_nerve() -> Manifest {
    let f7 = Ring::prime_field(7).expect("7 is prime");
    let cover = Arc::new(RingedCover::constant(3, &f7, all_subsets(3)).expect("complete cover"));
    let ones = [(0, 1), (0, 2), (1, 2)].into_iter().map(|p| (p, f7.one())).collect();
    let trivial = line_bundle(cover.clone(), &ones).expect("units everywhere");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let params = Params { max_opens: 3, amplitude: 2, max_rank: 2, density: 0.5 };
    let random = random::random_tw(&mut rng, &cover, &params).expect("generator");
    let objects = [("O".to_string(), twisted_spec(&trivial)), ("random".to_string(), twisted_spec(&random))].into();
    let options = Options { seed: Some(7), probes: Some(8), ..Options::default() };
    Manifest { cover: Some(cover_spec(&cover)), objects, options, ..Manifest::default() }
}

pub fn example(name: &str) -> Result<Manifest> {
    Ok(match name {
        "p1-line-bundles" => p1_line_bundles(),
        "z2-sign-rep" => z2_sign_rep(),
        "three-open-nerve" => three_open_nerve(),
        _ => bail!("unknown example {name:?}; expected one of {NAMES:?}"),
    })
}
