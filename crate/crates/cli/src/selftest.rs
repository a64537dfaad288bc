//! Seeded property suites behind `twk selftest`.
//!
//! Trial `i` of a suite draws from its own ChaCha stream, so a single trial can
//! be replayed from `(seed, suite, i)` alone.

use anyhow::{anyhow, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use twk_core::cochain::{self, CechSite, CellSite, Cochain, NondecreasingSite};
use twk_core::cohomology::{p1_line_bundle, projective_line};
use twk_core::dgresolution::{cochain_d, shuffle_mul, ComplexObj};
use twk_core::exactalg::Ring;
use twk_core::random::{self, Backend, Params};
use twk_core::simplicial::{CechNerve, GroupAction, SimplicialSet};
use twk_core::totalization::matching_witness;
use twk_core::twisted::{mc_check_tw, tw_mor_diff, TwPerfComplex};

use crate::manifest::{self, action_spec, cover_spec, morphism_spec, twisted_manifest, Label, Manifest, Replay};

pub const SUITES: [&str; 6] = ["mc", "d2", "leibniz", "assoc", "matching", "simplicial"];

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub seed: u64,
    pub trials: usize,
    /// Highest simplicial level for the bookkeeping suites.
    pub levels: usize,
    pub inject_bad: bool,
}

pub struct Failure {
    pub trial: usize,
    pub message: String,
    pub reproducer: Manifest,
}

pub struct SuiteResult {
    pub suite: &'static str,
    pub trials: usize,
    pub failure: Option<Failure>,
}

fn trial_rng(seed: u64, suite: usize, trial: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((suite as u64) << 32) | trial as u64);
    r
}

fn backend(trial: usize) -> Backend {
    Backend::ALL[trial % Backend::ALL.len()]
}

fn params() -> Params {
    Params::default()
}

type Trial = std::result::Result<(), (String, Manifest)>;

fn fail(msg: impl Into<String>, m: Manifest) -> Trial {
    Err((msg.into(), m))
}

/// `O(3)` on ℙ¹ with the transition doubled, so the cocycle fails on `(U0,U1,U0)`.
pub fn known_bad() -> TwPerfComplex {
    let p1 = projective_line();
    let o3 = p1_line_bundle(&p1, 3);
    let g = o3.a().get(&[0, 1]).expect("transition").clone();
    let two = o3.site().ring(&[0, 1]).from_i64(2);
    o3.with_component(&[0, 1], g.scale(&two)).expect("same slot")
}

fn suite_mc(r: &mut ChaCha8Rng, trial: usize, cfg: &Config) -> Result<Trial> {
    let t = if cfg.inject_bad && trial == 0 {
        known_bad()
    } else {
        let cover = random::random_cover(r, backend(trial), 4);
        random::random_tw(r, &cover, &params())?
    };
    let report = mc_check_tw(&t);
    if report.passed() {
        return Ok(Ok(()));
    }
    Ok(fail(format!("counterexample fails validation: {report}"), twisted_manifest("counterexample", &t)))
}

fn suite_d2(r: &mut ChaCha8Rng, trial: usize) -> Result<Trial> {
    let cover = random::random_cover(r, backend(trial), 4);
    let t = random::random_tw(r, &cover, &params())?;
    let u = random::random_tw(r, &cover, &params())?;
    let m = r.gen_range(-1..=1);
    let theta = random::random_cochain(r, t.site(), t.locals(), u.locals(), m, 2, 0.4);
    let dd = tw_mor_diff(&t, &u, &tw_mor_diff(&t, &u, &theta)?)?;
    if dd.is_zero() {
        return Ok(Ok(()));
    }
    let names = cover.names().to_vec();
    let mut man = twisted_manifest("source", &t);
    man.objects.insert("target".into(), manifest::twisted_spec(&u));
    man.morphisms.insert("theta".into(), morphism_spec("source", "target", &theta, |i| Label::Name(names[i].clone())));
    Ok(fail(format!("d∘d ≠ 0 at {:?}", dd.first_nonzero().map(|x| x.0.clone())), man))
}

fn complexes(r: &mut ChaCha8Rng, ring: &Ring, fam: &cochain::Family) -> Vec<ComplexObj> {
    fam.iter().map(|m| random::random_complex(r, ring, m)).collect()
}

/// Three composable random cochains over either site kind.
struct Triple {
    x: Cochain,
    y: Cochain,
    z: Cochain,
    fams: Vec<cochain::Family>,
}

fn triple<S: CellSite + ?Sized>(r: &mut ChaCha8Rng, site: &S, nv: usize) -> Triple {
    let fams: Vec<_> = (0..4).map(|_| random::random_family(r, nv, &params())).collect();
    let (p, q, s) = (r.gen_range(-1..=1), r.gen_range(-1..=1), r.gen_range(-1..=1));
    let z = random::random_cochain(r, site, &fams[0], &fams[1], p, 2, 0.4);
    let y = random::random_cochain(r, site, &fams[1], &fams[2], q, 2, 0.4);
    let x = random::random_cochain(r, site, &fams[2], &fams[3], s, 2, 0.4);
    Triple { x, y, z, fams }
}

fn sign(deg: i32) -> bool {
    deg.rem_euclid(2) == 0
}

fn suite_leibniz(r: &mut ChaCha8Rng, trial: usize) -> Result<Trial> {
    let b = backend(trial);
    let site = CechSite::new(random::random_cover(r, b, 4));
    let Triple { x, y, .. } = triple(r, &site, site.vertex_count());
    let d = |c: &Cochain| cochain::delta(&site, c);
    let mul = |a: &Cochain, c: &Cochain| cochain::mul(&site, a, c);
    let rhs = mul(&d(&x), &y)?.add(&mul(&x, &d(&y))?.signed(sign(x.degree())))?;
    if d(&mul(&x, &y)?) != rhs {
        return Ok(fail(format!("{b:?}: δ(xy) ≠ δx·y ± x·δy"), Manifest::default()));
    }
    let ring = b.ring();
    let n = r.gen_range(1..=2);
    let site = NondecreasingSite { n, ring: ring.clone() };
    let Triple { x, y, fams, .. } = triple(r, &site, n + 1);
    let objs: Vec<_> = fams.iter().map(|f| complexes(r, &ring, f)).collect();
    let mul = |a: &Cochain, c: &Cochain| shuffle_mul(&site, a, c);
    let dd = |c: &Cochain, i: usize| cochain_d(&site, c, &objs[i], &objs[i + 1]);
    let lhs = cochain_d(&site, &mul(&x, &y)?, &objs[1], &objs[3]);
    let rhs = mul(&dd(&x, 2), &y)?.add(&mul(&x, &dd(&y, 1))?.signed(sign(x.degree())))?;
    if lhs != rhs {
        return Ok(fail(format!("{b:?}: D(xy) ≠ Dx·y ± x·Dy on Δ{n}"), Manifest::default()));
    }
    Ok(Ok(()))
}

fn suite_assoc(r: &mut ChaCha8Rng, trial: usize) -> Result<Trial> {
    let b = backend(trial);
    let site = CechSite::new(random::random_cover(r, b, 4));
    let t = triple(r, &site, site.vertex_count());
    if let Some(msg) = assoc_unit(&site, &t)? {
        return Ok(fail(format!("{b:?} twisted: {msg}"), Manifest::default()));
    }
    let n = r.gen_range(1..=3);
    let site = NondecreasingSite { n, ring: b.ring() };
    let t = triple(r, &site, n + 1);
    if let Some(msg) = assoc_unit(&site, &t)? {
        return Ok(fail(format!("{b:?} Δ{n}: {msg}"), Manifest::default()));
    }
    Ok(Ok(()))
}

fn assoc_unit<S: CellSite + ?Sized>(site: &S, t: &Triple) -> Result<Option<&'static str>> {
    let mul = |a: &Cochain, c: &Cochain| cochain::mul(site, a, c);
    if mul(&mul(&t.x, &t.y)?, &t.z)? != mul(&t.x, &mul(&t.y, &t.z)?)? {
        return Ok(Some("product not associative"));
    }
    let (one2, one3) = (Cochain::identity(site, &t.fams[2]), Cochain::identity(site, &t.fams[3]));
    if mul(&t.x, &one2)? != t.x || mul(&one3, &t.x)? != t.x {
        return Ok(Some("unit law fails"));
    }
    Ok(None)
}

fn suite_matching(r: &mut ChaCha8Rng, cfg: &Config) -> Result<Trial> {
    let n = r.gen_range(1..=4);
    let cover = random::cover_with_opens(r, Backend::Rationals, n, 0.6);
    let nerve = CechNerve(&cover);
    for k in 0..=cfg.levels {
        let w = matching_witness(&nerve, k)?;
        let all = cover.nerve_level(k).len();
        if w.factors.len() != (1usize << k) - 1 || !w.is_projection(all) {
            let man = Manifest { cover: Some(cover_spec(&cover)), ..Manifest::default() };
            return Ok(fail(format!("level {k}: {} factors, projection {}", w.factors.len(), w.is_projection(all)), man));
        }
    }
    Ok(Ok(()))
}

/// Face/degeneracy identities on every cell up to `levels`.
fn identities<S: SimplicialSet + ?Sized>(s: &S, levels: usize) -> Option<String> {
    for k in 0..=levels {
        for c in s.cells(k) {
            for j in 0..=k {
                for i in 0..j {
                    if k >= 2 && s.face(&s.face(&c, k, j), k - 1, i) != s.face(&s.face(&c, k, i), k - 1, j - 1) {
                        return Some(format!("∂_{i}∂_{j} at {c:?}"));
                    }
                }
                for i in 0..=j {
                    if s.degeneracy(&s.degeneracy(&c, k, j), k + 1, i) != s.degeneracy(&s.degeneracy(&c, k, i), k + 1, j + 1) {
                        return Some(format!("σ_{i}σ_{j} at {c:?}"));
                    }
                }
                let sc = s.degeneracy(&c, k, j);
                for i in 0..=k + 1 {
                    let lhs = s.face(&sc, k + 1, i);
                    let rhs = if i < j {
                        s.degeneracy(&s.face(&c, k, i), k - 1, j - 1)
                    } else if i == j || i == j + 1 {
                        c.clone()
                    } else {
                        s.degeneracy(&s.face(&c, k, i - 1), k - 1, j)
                    };
                    if lhs != rhs {
                        return Some(format!("∂_{i}σ_{j} at {c:?}"));
                    }
                }
            }
        }
    }
    None
}

fn suite_simplicial(r: &mut ChaCha8Rng, cfg: &Config) -> Result<Trial> {
    let levels = cfg.levels.min(3);
    let action: GroupAction = random::random_action(r);
    if let Some(msg) = identities(&action, levels) {
        let man = Manifest { actions: [("action".to_string(), action_spec(&action))].into(), ..Manifest::default() };
        return Ok(fail(format!("[X/G]: {msg}"), man));
    }
    let n = r.gen_range(1..=3);
    let cover = random::cover_with_opens(r, Backend::Rationals, n, 0.7);
    if let Some(msg) = identities(&CechNerve(&cover), levels) {
        let man = Manifest { cover: Some(cover_spec(&cover)), ..Manifest::default() };
        return Ok(fail(format!("Čech nerve: {msg}"), man));
    }
    Ok(Ok(()))
}

fn run_trial(suite: usize, trial: usize, cfg: &Config) -> Result<Trial> {
    let mut r = trial_rng(cfg.seed, suite, trial);
    match SUITES[suite] {
        "mc" => suite_mc(&mut r, trial, cfg),
        "d2" => suite_d2(&mut r, trial),
        "leibniz" => suite_leibniz(&mut r, trial),
        "assoc" => suite_assoc(&mut r, trial),
        "matching" => suite_matching(&mut r, cfg),
        "simplicial" => suite_simplicial(&mut r, cfg),
        _ => unreachable!(),
    }
}

fn failure(suite: usize, trial: usize, cfg: &Config, (message, mut reproducer): (String, Manifest)) -> Failure {
    reproducer.options.seed = Some(cfg.seed);
    reproducer.options.selftest = Some(Replay {
        suite: SUITES[suite].to_string(),
        seed: cfg.seed,
        trial,
        inject_bad: cfg.inject_bad,
    });
    Failure { trial, message, reproducer }
}

/// Runs every suite, stopping each at its first failure.
pub fn run(cfg: &Config) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();
    for (s, name) in SUITES.iter().enumerate() {
        let mut res = SuiteResult { suite: name, trials: 0, failure: None };
        for trial in 0..cfg.trials {
            res.trials += 1;
            if let Err(f) = run_trial(s, trial, cfg)? {
                res.failure = Some(failure(s, trial, cfg, f));
                break;
            }
        }
        out.push(res);
    }
    Ok(out)
}

/// Reruns the single trial recorded in a reproducer.
pub fn replay(m: &Manifest, levels: usize) -> Result<SuiteResult> {
    let rep = m.options.selftest.as_ref().ok_or_else(|| anyhow!("manifest carries no self-test record"))?;
    let s = SUITES.iter().position(|n| *n == rep.suite).ok_or_else(|| anyhow!("unknown suite {:?}", rep.suite))?;
    let cfg = Config { seed: rep.seed, trials: rep.trial + 1, levels, inject_bad: rep.inject_bad };
    let failure = match run_trial(s, rep.trial, &cfg)? {
        Ok(()) => None,
        Err(f) => Some(failure(s, rep.trial, &cfg, f)),
    };
    Ok(SuiteResult { suite: SUITES[s], trials: 1, failure })
}

pub fn to_json(results: &[SuiteResult]) -> Result<Value> {
    let suites = results
        .iter()
        .map(|r| {
            Ok(json!({
                "suite": r.suite,
                "trials": r.trials,
                "pass": r.failure.is_none(),
                "failure": match &r.failure {
                    None => Value::Null,
                    Some(f) => json!({"trial": f.trial, "message": f.message, "reproducer": serde_json::to_value(&f.reproducer)?}),
                },
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({"pass": results.iter().all(|r| r.failure.is_none()), "suites": suites}))
}
