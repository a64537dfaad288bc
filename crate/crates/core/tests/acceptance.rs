//! Ten exact acceptance checks, one printed line each. Runs without the libtest
//! harness so the lines always appear; exits nonzero if any check fails.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twk_core::cochain::{self, CechSite, CellSite, Cochain, NondecreasingSite};
use twk_core::cohomology::{cech_oracle, hom_cohomology, p1_line_bundle, p1_units, projective_line};
use twk_core::dgresolution::{self, cochain_d, mor_diff, shuffle_mul, sigma_pushforward, ComplexObj};
use twk_core::equivariant::{fixtures, mc_check_equiv, mc_residual_equiv, EquivariantComplex};
use twk_core::exactalg::{hom_differential, GradedMap, Ring};
use twk_core::random::{self, Backend, Params};
use twk_core::report::Finding;
use twk_core::simplicial::{CechNerve, Group, GroupAction, OrdinalMap, RingedCover};
use twk_core::totalization::{matching_witness, mc_check_tot, tot_mor_diff, tot_to_twisted, twisted_to_tot};
use twk_core::twisted::{mc_check_tw, mc_residual, tw_mor_diff, TwPerfComplex};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn params() -> Params {
    Params::default()
}

fn component(c: &Cochain, cell: &[usize], like: &GradedMap) -> GradedMap {
    c.get(cell).cloned().unwrap_or_else(|| GradedMap::zero(like.ring(), like.source(), like.target(), like.degree()))
}

fn complexes(rng: &mut ChaCha8Rng, ring: &Ring, fam: &cochain::Family) -> Vec<ComplexObj> {
    fam.iter().map(|m| random::random_complex(rng, ring, m)).collect()
}

fn c1_d_squared() -> Check {
    let mut r = rng(101);
    let mut nontrivial = 0;
    for backend in Backend::ALL {
        for i in 0..100 {
            let cover = random::random_cover(&mut r, backend, 4);
            let t = random::random_tw(&mut r, &cover, &params()).map_err(|e| e.to_string())?;
            let u = random::random_tw(&mut r, &cover, &params()).map_err(|e| e.to_string())?;
            ensure(mc_check_tw(&t).passed() && mc_check_tw(&u).passed(), || format!("{backend:?} #{i}: generator produced an invalid object"))?;
            let m = r.gen_range(-1..=1);
            let theta = random::random_cochain(&mut r, t.site(), t.locals(), u.locals(), m, 2, 0.4);
            let d = tw_mor_diff(&t, &u, &theta).map_err(|e| e.to_string())?;
            nontrivial += usize::from(!d.is_zero());
            let dd = tw_mor_diff(&t, &u, &d).map_err(|e| e.to_string())?;
            ensure(dd.is_zero(), || format!("{backend:?} #{i}: d∘d ≠ 0 at {:?}", dd.first_nonzero().map(|x| x.0)))?;
        }
    }
    Ok(format!("300 objects, {nontrivial} nonzero dθ"))
}

fn leibniz_and_assoc_simplex(r: &mut ChaCha8Rng, backend: Backend) -> Result<(), String> {
    let ring = backend.ring();
    let n = r.gen_range(1..=2);
    let site = NondecreasingSite { n, ring: ring.clone() };
    let fams: Vec<_> = (0..4).map(|_| random::random_family(r, n + 1, &params())).collect();
    let objs: Vec<_> = fams.iter().map(|f| complexes(r, &ring, f)).collect();
    let (p, q, s) = (r.gen_range(-1..=1), r.gen_range(-1..=1), r.gen_range(-1..=1));
    let z = random::random_cochain(r, &site, &fams[0], &fams[1], p, 2, 0.5);
    let y = random::random_cochain(r, &site, &fams[1], &fams[2], q, 2, 0.5);
    let x = random::random_cochain(r, &site, &fams[2], &fams[3], s, 2, 0.5);
    let mul = |a: &Cochain, b: &Cochain| shuffle_mul(&site, a, b).unwrap();
    let dd = |c: &Cochain, i: usize| cochain_d(&site, c, &objs[i], &objs[i + 1]);
    let dxy = cochain_d(&site, &mul(&x, &y), &objs[1], &objs[3]);
    let rhs = mul(&dd(&x, 2), &y).add(&mul(&x, &dd(&y, 1)).signed(s.rem_euclid(2) == 0)).unwrap();
    ensure(dxy == rhs, || format!("{backend:?}: D(xy) ≠ Dx·y ± x·Dy"))?;
    ensure(mul(&mul(&x, &y), &z) == mul(&x, &mul(&y, &z)), || format!("{backend:?}: Δn product not associative"))?;
    let one2 = Cochain::identity(&site, &fams[2]);
    let one3 = Cochain::identity(&site, &fams[3]);
    ensure(mul(&x, &one2) == x && mul(&one3, &x) == x, || format!("{backend:?}: Δn unit fails"))
}

fn leibniz_and_assoc_twisted(r: &mut ChaCha8Rng, backend: Backend) -> Result<(), String> {
    let cover = random::random_cover(r, backend, 4);
    let site = CechSite::new(cover);
    let nv = site.vertex_count();
    let fams: Vec<_> = (0..4).map(|_| random::random_family(r, nv, &params())).collect();
    let (p, q, s) = (r.gen_range(-1..=1), r.gen_range(-1..=1), r.gen_range(-1..=1));
    let z = random::random_cochain(r, &site, &fams[0], &fams[1], p, 2, 0.4);
    let y = random::random_cochain(r, &site, &fams[1], &fams[2], q, 2, 0.4);
    let x = random::random_cochain(r, &site, &fams[2], &fams[3], s, 2, 0.4);
    let mul = |a: &Cochain, b: &Cochain| cochain::mul(&site, a, b).unwrap();
    let d = |c: &Cochain| cochain::delta(&site, c);
    let rhs = mul(&d(&x), &y).add(&mul(&x, &d(&y)).signed(s.rem_euclid(2) == 0)).unwrap();
    ensure(d(&mul(&x, &y)) == rhs, || format!("{backend:?}: δ(xy) ≠ δx·y ± x·δy"))?;
    ensure(mul(&mul(&x, &y), &z) == mul(&x, &mul(&y, &z)), || format!("{backend:?}: twisted product not associative"))?;
    let one2 = Cochain::identity(&site, &fams[2]);
    let one3 = Cochain::identity(&site, &fams[3]);
    ensure(mul(&x, &one2) == x && mul(&one3, &x) == x, || format!("{backend:?}: twisted unit fails"))
}

fn c2_leibniz_assoc() -> Check {
    let mut r = rng(202);
    for backend in Backend::ALL {
        for _ in 0..100 {
            leibniz_and_assoc_simplex(&mut r, backend)?;
            leibniz_and_assoc_twisted(&mut r, backend)?;
        }
    }
    Ok("100 Δn triples and 100 twisted triples per backend".into())
}

fn c3_squares() -> Check {
    let mut r = rng(303);
    for backend in Backend::ALL {
        let ring = backend.ring();
        for i in 0..100 {
            let site = CechSite::new(random::random_cover(&mut r, backend, 4));
            let nv = site.vertex_count();
            let (f, g) = (random::random_family(&mut r, nv, &params()), random::random_family(&mut r, nv, &params()));
            let m = r.gen_range(-2..=2);
            let u = random::random_cochain(&mut r, &site, &f, &g, m, 2, 0.5);
            let dd = cochain::delta(&site, &cochain::delta(&site, &u));
            ensure(dd.is_zero(), || format!("{backend:?} #{i}: δ∘δ ≠ 0"))?;
            let n = r.gen_range(1..=3);
            let site = NondecreasingSite { n, ring: ring.clone() };
            let (f, g) = (random::random_family(&mut r, n + 1, &params()), random::random_family(&mut r, n + 1, &params()));
            let (ef, eg) = (complexes(&mut r, &ring, &f), complexes(&mut r, &ring, &g));
            let u = random::random_cochain(&mut r, &site, &f, &g, m, 3, 0.5);
            let dd = cochain_d(&site, &cochain_d(&site, &u, &ef, &eg), &ef, &eg);
            ensure(dd.is_zero(), || format!("{backend:?} #{i}: D∘D ≠ 0"))?;
        }
    }
    Ok("100 Čech and 100 Δn cochains per backend".into())
}

/// Adds a nonzero constant to one entry of the component at `cell`.
fn perturb<S: CellSite + ?Sized>(r: &mut ChaCha8Rng, site: &S, a: &Cochain, cell: &[usize]) -> Option<GradedMap> {
    let (s, t, q) = a.slot(site, cell);
    let ring = site.ring(cell);
    let slots: Vec<(i32, usize, usize)> =
        s.degrees().flat_map(|(d, c)| (0..t.rank(d + q)).flat_map(move |i| (0..c).map(move |j| (d, i, j)))).collect();
    if slots.is_empty() {
        return None;
    }
    let (d, i, j) = slots[r.gen_range(0..slots.len())];
    let old = a.get(cell).cloned().unwrap_or_else(|| GradedMap::zero(ring, &s, &t, q));
    let mut block = old.block(d);
    let c = ring.from_i64([1, -1, 2, 3][r.gen_range(0..4)]);
    block.set(i, j, ring.add(block.get(i, j), &c));
    let mut out = old;
    out.set_block(d, block).ok()?;
    Some(out)
}

fn probes_detect(t: &TwPerfComplex, reference: &TwPerfComplex) -> Result<bool, String> {
    let err = |e: twk_core::Error| e.to_string();
    for (src, tgt) in [(t, reference), (t, t)] {
        let mut probes = random::elementary_probes(t.site(), src.locals(), tgt.locals());
        if std::ptr::eq(src, tgt) {
            probes.push(twk_core::twisted::tw_identity(t));
        }
        for p in probes {
            let d = tw_mor_diff(src, tgt, &p).map_err(err)?;
            if !tw_mor_diff(src, tgt, &d).map_err(err)?.is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn c4_mc_duality() -> Check {
    let mut r = rng(404);
    let mut trials = 0;
    let mut degenerate = 0;
    for backend in Backend::ALL {
        let mut done = 0;
        while done < 50 {
            let n = r.gen_range(2..=3);
            let cover = random::cover_with_opens(&mut r, backend, n, 1.0);
            let t = random::random_tw(&mut r, &cover, &params()).map_err(|e| e.to_string())?;
            ensure(mc_check_tw(&t).passed() && !probes_detect(&t, &t)?, || format!("{backend:?}: valid object flagged"))?;
            let level = r.gen_range(0..=2);
            let cells = t.site().cells(level);
            let cell = cells[r.gen_range(0..cells.len())].clone();
            let Some(m) = perturb(&mut r, t.site(), t.a(), &cell) else { continue };
            let bad = t.with_component(&cell, m).map_err(|e| e.to_string())?;
            let residual = !mc_residual(&bad).is_zero();
            let probed = probes_detect(&bad, &t)?;
            ensure(residual == probed, || format!("{backend:?}: perturbation at {cell:?} residual={residual} probe={probed}"))?;
            if !residual {
                // another MC solution, e.g. an idempotent a_ii; only non-degeneracy can object
                ensure(!mc_check_tw(&bad).passed(), || format!("{backend:?}: perturbation at {cell:?} went unnoticed"))?;
                degenerate += 1;
            }
            done += 1;
        }
        trials += done;
    }
    let mut r = rng(405);
    for backend in Backend::ALL {
        for _ in 0..50 {
            let s = random::random_simplex(&mut r, &backend.ring(), 3, &params()).map_err(|e| e.to_string())?;
            let level = r.gen_range(1..=2);
            let cells: Vec<_> = s.site().cells(level).into_iter().filter(|c| !random::has_adjacent_repeat(c)).collect();
            let cell = cells[r.gen_range(0..cells.len())].clone();
            let Some(m) = perturb(&mut r, s.site(), s.phi(), &cell) else { continue };
            let mut phi = s.phi().clone();
            phi.set(s.site(), &cell, m).map_err(|e| e.to_string())?;
            let bad = dgresolution::SimplexObj::new(s.ring(), s.objects().to_vec(), phi).map_err(|e| e.to_string())?;
            let residual = !dgresolution::mc_residual(&bad).is_zero();
            let mut probed = false;
            for p in random::elementary_probes(s.site(), bad.family(), s.family()) {
                let d = mor_diff(&bad, &s, &p).map_err(|e| e.to_string())?;
                probed |= !mor_diff(&bad, &s, &d).map_err(|e| e.to_string())?.is_zero();
            }
            ensure(residual && probed, || format!("{backend:?}: Δ3 perturbation at {cell:?} residual={residual} probe={probed}"))?;
            trials += 1;
        }
    }
    Ok(format!(
        "{trials} perturbations: residual and probes agree on all; {} caught by both, {degenerate} non-invertible MC solutions rejected",
        trials - degenerate
    ))
}

fn roundtrip(t: &TwPerfComplex, u: &TwPerfComplex, theta: &Cochain) -> Result<(), String> {
    let err = |e: twk_core::Error| e.to_string();
    let tot = twisted_to_tot(t).map_err(err)?;
    let back = tot_to_twisted(&tot).map_err(err)?;
    ensure(back.a() == t.a(), || "tot_to_twisted ∘ twisted_to_tot ≠ id".into())?;
    let again = twisted_to_tot(&back).map_err(err)?;
    ensure(again.phi() == tot.phi() && again.diffs() == tot.diffs(), || "twisted_to_tot ∘ tot_to_twisted ≠ id".into())?;
    ensure(mc_check_tot(&tot).passed() == mc_check_tw(t).passed(), || "validators disagree".into())?;
    let tu = twisted_to_tot(u).map_err(err)?;
    let a = tot_mor_diff(&tot, &tu, theta).map_err(err)?;
    let b = tw_mor_diff(t, u, theta).map_err(err)?;
    ensure(a == b, || format!("morphism differentials differ at {:?}", a.first_difference(&b)))
}

fn c5_roundtrip() -> Check {
    let p1 = projective_line();
    let mut r = rng(505);
    let bundles: Vec<_> = (-5..=5).map(|n| p1_line_bundle(&p1, n)).collect();
    for t in &bundles {
        for u in &bundles {
            let m = r.gen_range(0..=1);
            let theta = random::random_cochain(&mut r, t.site(), t.locals(), u.locals(), m, 1, 0.7);
            roundtrip(t, u, &theta)?;
        }
    }
    let mut count = 0;
    for backend in Backend::ALL {
        for _ in 0..8 {
            let cover = random::cover_with_opens(&mut r, backend, 3, 1.0);
            let t = random::random_tw(&mut r, &cover, &params()).map_err(|e| e.to_string())?;
            let u = random::random_tw(&mut r, &cover, &params()).map_err(|e| e.to_string())?;
            let m = r.gen_range(-1..=1);
            let theta = random::random_cochain(&mut r, t.site(), t.locals(), u.locals(), m, 2, 0.4);
            roundtrip(&t, &u, &theta)?;
            let cell = vec![0, 1, 2];
            if let Some(m) = perturb(&mut r, t.site(), t.a(), &cell) {
                let bad = t.with_component(&cell, m).map_err(|e| e.to_string())?;
                roundtrip(&bad, &u, &theta)?;
            }
            count += 1;
        }
    }
    Ok(format!("11 line bundles and {count} random objects on 3 opens"))
}

fn c6_p1() -> Check {
    let start = Instant::now();
    let p1 = projective_line();
    let o = p1_line_bundle(&p1, 0);
    let mut cases = 0;
    for n in 0..=5 {
        let r = hom_cohomology(&o, &p1_line_bundle(&p1, n), 0..=1, None).map_err(|e| e.to_string())?;
        ensure(r.total(0) == (n + 1) as usize, || format!("H⁰(O({n})) = {}", r.total(0)))?;
        let oracle = cech_oracle(&p1, &p1_units(&p1, n), 0..=1, r.window).map_err(|e| e.to_string())?;
        ensure(r.entries == oracle.entries, || format!("O({n}) differs from the classical complex"))?;
        cases += 1;
    }
    for n in 2..=5 {
        let r = hom_cohomology(&o, &p1_line_bundle(&p1, -n), 0..=1, None).map_err(|e| e.to_string())?;
        ensure(r.total(1) == (n - 1) as usize, || format!("H¹(O(-{n})) = {}", r.total(1)))?;
        let oracle = cech_oracle(&p1, &p1_units(&p1, -n), 0..=1, r.window).map_err(|e| e.to_string())?;
        ensure(r.entries == oracle.entries, || format!("O(-{n}) differs from the classical complex"))?;
        cases += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs_f64() < 5.0, || format!("took {elapsed:?}"))?;
    Ok(format!("{cases} bundles in {:.2?}", elapsed))
}

/// Nondegenerate `k`-cells of the Čech nerve, counted directly.
fn nondegenerate_count(cover: &RingedCover, k: usize) -> usize {
    cover.nerve_level(k).into_iter().filter(|c| c.windows(2).all(|w| w[0] != w[1])).count()
}

fn c7_matching() -> Check {
    let cover = RingedCover::complete(3, &Ring::rationals()).map_err(|e| e.to_string())?;
    let nerve = CechNerve(&cover);
    for k in 0..=4 {
        let w = matching_witness(&nerve, k).map_err(|e| e.to_string())?;
        let all = cover.nerve_level(k).len();
        ensure(w.factors.len() == (1 << k) - 1, || format!("k={k}: {} factors", w.factors.len()))?;
        for (sigma, size) in &w.factors {
            ensure(sigma.is_surjective() && sigma.target() < k, || format!("k={k}: bad label {sigma:?}"))?;
            ensure(*size == nondegenerate_count(&cover, sigma.target()), || format!("k={k}: factor {sigma:?} has size {size}"))?;
        }
        ensure(w.free.len() == nondegenerate_count(&cover, k), || format!("k={k}: free part"))?;
        let degenerate: usize = w.factors.iter().map(|(_, s)| s).sum();
        ensure(w.free.len() + degenerate == all, || format!("k={k}: sizes do not add up"))?;
        ensure(w.is_projection(all), || format!("k={k}: matching map is not the projection"))?;
    }
    Ok("levels 0..=4, factor counts 0, 1, 3, 7, 15".into())
}

/// Arbitrary normalized φ at levels 1 and 2 over a random action.
fn arbitrary_equivariant(r: &mut ChaCha8Rng, action: GroupAction) -> Result<EquivariantComplex, String> {
    let ring = Ring::rationals();
    let action = Arc::new(action);
    let site = cochain::ActionSite { action: action.clone(), ring: ring.clone() };
    let m = random::random_module(r, &params());
    let fam = cochain::family(vec![m.clone(); action.carrier()]);
    let objects: Vec<_> = (0..action.carrier()).map(|_| random::random_complex(r, &ring, &m)).collect();
    let e = action.group().identity();
    let mut phi = Cochain::zero(1, &fam, &fam);
    for k in 1..=2 {
        for c in site.cells(k) {
            let x = if c[1..].contains(&e) {
                if k == 1 {
                    GradedMap::identity(&ring, &m)
                } else {
                    continue;
                }
            } else {
                random::random_map(r, &ring, &m, &m, 1 - k as i32, 0.5)
            };
            phi.set(&site, &c, x).map_err(|e| e.to_string())?;
        }
    }
    EquivariantComplex::new(action, &ring, objects, phi).map_err(|e| e.to_string())
}

fn c8_equivariant() -> Check {
    let q = Ring::rationals();
    ensure(mc_check_equiv(&fixtures::sign_rep(&q)).passed(), || "sign representation fails".into())?;
    ensure(mc_check_equiv(&fixtures::point_swap(&q)).passed(), || "point swap fails".into())?;
    let bad = mc_check_equiv(&fixtures::broken_cocycle(&q));
    ensure(
        bad.findings.iter().any(|f| matches!(f, Finding::Residual { cell, .. } if cell.len() == 3))
            && bad.first_residual().is_some_and(|(c, _)| c.len() == 3),
        || "broken cocycle not caught at k = 2".into(),
    )?;
    let fixed = fixtures::homotopy_repaired(&q, true);
    ensure(fixed.phi().level_part(2).len() > 0 && mc_check_equiv(&fixed).passed(), || "repaired object fails".into())?;
    let mut r = rng(808);
    let mut checked = 0;
    for order in 1..=3 {
        let g = Group::cyclic(order);
        let actions = [
            GroupAction::trivial(g.clone(), 2),
            GroupAction::regular(g.clone()),
            GroupAction::new(g.clone(), {
                let mut act: Vec<Vec<usize>> = (0..order).map(|x| (0..order).map(|h| g.mul(x, h)).collect()).collect();
                if order < 3 {
                    act.push(vec![order; order]);
                }
                act
            })
            .map_err(|e| e.to_string())?,
        ];
        for action in actions {
            for _ in 0..4 {
                let e = arbitrary_equivariant(&mut r, action.clone())?;
                let res = mc_residual_equiv(&e);
                let a = e.action();
                let d = |x: usize| e.objects()[x].diff().clone();
                let m = &e.family()[0];
                let phi = |c: &[usize]| {
                    let q = 2 - c.len() as i32;
                    Some(e.phi().get(c).cloned().unwrap_or_else(|| GradedMap::zero(&Ring::rationals(), m, m, q)))
                };
                for c in a.level(1) {
                    let (x, y) = (c[0], a.act(c[0], c[1]));
                    let f = phi(&c).unwrap();
                    let want = hom_differential(&d(x), &f, &d(y)).unwrap().neg();
                    ensure(component(&res, &c, &want) == want, || format!("k=1 expansion differs at {c:?}"))?;
                    checked += 1;
                }
                for c in a.level(2) {
                    let (x, g1, g2) = (c[0], c[1], c[2]);
                    let xg = a.act(x, g1);
                    let xgh = a.act(xg, g2);
                    let outer = phi(&[x, a.group().mul(g1, g2)]).unwrap();
                    let mut want = phi(&[x, g1]).unwrap().compose(&phi(&[xg, g2]).unwrap()).unwrap().sub(&outer).unwrap();
                    if let Some(h) = phi(&c) {
                        want = want.add(&hom_differential(&d(x), &h, &d(xgh)).unwrap()).unwrap();
                    }
                    ensure(component(&res, &c, &want) == want, || format!("k=2 expansion differs at {c:?}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("fixtures behave; {checked} expanded components match"))
}

fn c9_delta1() -> Check {
    let mut r = rng(909);
    let mut count = 0;
    for backend in Backend::ALL {
        let ring = backend.ring();
        for _ in 0..20 {
            let s = random::random_simplex(&mut r, &ring, 1, &params()).map_err(|e| e.to_string())?;
            let t = random::random_simplex(&mut r, &ring, 1, &params()).map_err(|e| e.to_string())?;
            let m = r.gen_range(-1..=2);
            let site = s.site();
            let mut theta = Cochain::zero(m, s.family(), t.family());
            for cell in [vec![0], vec![1], vec![0, 1]] {
                let (src, tgt, q) = theta.slot(site, &cell);
                theta.set(site, &cell, random::random_map(&mut r, &ring, &src, &tgt, q, 0.6)).map_err(|e| e.to_string())?;
            }
            let dt = mor_diff(&s, &t, &theta).map_err(|e| e.to_string())?;
            let (ds, dtg) = (s.diffs(), t.diffs());
            let th = |c: &[usize]| {
                let (src, tgt, q) = theta.slot(site, c);
                component(&theta, c, &GradedMap::zero(&ring, &src, &tgt, q))
            };
            for i in 0..2 {
                let want = hom_differential(&dtg[i], &th(&[i]), &ds[i]).unwrap();
                ensure(component(&dt, &[i], &want) == want, || format!("vertex {i}, m = {m}"))?;
            }
            let psi01 = t.phi().get(&[0, 1]).unwrap();
            let phi01 = s.phi().get(&[0, 1]).unwrap();
            let want = hom_differential(&dtg[0], &th(&[0, 1]), &ds[1])
                .unwrap()
                .neg()
                .add(&psi01.compose(&th(&[1])).unwrap())
                .unwrap()
                .sub(&th(&[0]).compose(phi01).unwrap())
                .unwrap();
            ensure(component(&dt, &[0, 1], &want) == want, || format!("edge component, m = {m}"))?;
            for c in [vec![0, 0], vec![1, 1]] {
                ensure(dt.get(&c).is_none(), || format!("degenerate component at {c:?}, m = {m}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} random (θ⁰₀, θ⁰₁, θ¹₀₁) match"))
}

fn c10_simplicial() -> Check {
    let mut identities = 0;
    for order in 1..=3 {
        let g = Group::cyclic(order);
        for nx in 1..=3 {
            for action in all_actions(&g, nx) {
                identities += check_identities(&action)?;
            }
        }
    }
    let mut factorizations = 0;
    for n in 0..4 {
        for m in 0..4 {
            for f in OrdinalMap::all(n, m) {
                let (e, mono) = f.epi_mono_factor();
                ensure(e.is_surjective() && mono.is_injective() && mono.compose(&e).unwrap() == f, || format!("{f:?} factorization"))?;
                let mut found = 0;
                for k in 0..=n.min(m) {
                    for e2 in OrdinalMap::all(n, k).into_iter().filter(|x| x.is_surjective()) {
                        for m2 in OrdinalMap::all(k, m).into_iter().filter(|x| x.is_injective()) {
                            if m2.compose(&e2).unwrap() == f {
                                found += 1;
                            }
                        }
                    }
                }
                ensure(found == 1, || format!("{f:?} has {found} epi–mono factorizations"))?;
                factorizations += 1;
            }
        }
    }
    let mut r = rng(1010);
    let mut functorial = 0;
    for backend in Backend::ALL {
        for l in 0..=2 {
            let s = random::random_simplex(&mut r, &backend.ring(), l, &params()).map_err(|e| e.to_string())?;
            for m in 0..=2 {
                for n in 0..=2 {
                    for tau in OrdinalMap::all(m, l) {
                        for sigma in OrdinalMap::all(n, m) {
                            let whole = sigma_pushforward(&tau.compose(&sigma).unwrap(), &s).map_err(|e| e.to_string())?;
                            let stepwise = sigma_pushforward(&sigma, &sigma_pushforward(&tau, &s).map_err(|e| e.to_string())?)
                                .map_err(|e| e.to_string())?;
                            ensure(whole == stepwise, || format!("(τσ)_* ≠ σ_* τ_* for τ={tau:?}, σ={sigma:?}"))?;
                            functorial += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{identities} identities, {factorizations} factorizations, {functorial} pushforward pairs"))
}

/// Every right action of `g` (cyclic, generated by 1) on `nx` points.
fn all_actions(g: &Group, nx: usize) -> Vec<GroupAction> {
    let mut out = Vec::new();
    let perms = permutations(nx);
    for p in perms {
        let mut act = vec![vec![0; g.order()]; nx];
        for (x, row) in act.iter_mut().enumerate() {
            let mut y = x;
            for h in 0..g.order() {
                row[h] = y;
                y = p[y];
            }
        }
        if let Ok(a) = GroupAction::new(g.clone(), act) {
            out.push(a);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn check_identities(a: &GroupAction) -> Result<usize, String> {
    let mut count = 0;
    let face = |c: &[usize], i: usize| a.face(c, i).unwrap();
    let degen = |c: &[usize], i: usize| a.degeneracy(c, i).unwrap();
    let grp = a.group();
    for k in 0..=3usize {
        let cells: BTreeSet<Vec<usize>> = a.level(k).into_iter().collect();
        for c in &cells {
            if k >= 1 {
                // direct face formulas
                for i in 0..=k {
                    let want: Vec<usize> = if i == 0 {
                        [vec![a.act(c[0], c[1])], c[2..].to_vec()].concat()
                    } else if i == k {
                        c[..k].to_vec()
                    } else {
                        [c[..i].to_vec(), vec![grp.mul(c[i], c[i + 1])], c[i + 2..].to_vec()].concat()
                    };
                    ensure(face(c, i) == want, || format!("d_{i}{c:?}"))?;
                    count += 1;
                }
            }
            if k >= 2 {
                for j in 0..=k {
                    for i in 0..j {
                        ensure(face(&face(c, j), i) == face(&face(c, i), j - 1), || format!("d_i d_j at {c:?}"))?;
                        count += 1;
                    }
                }
            }
            for j in 0..=k {
                for i in 0..=j {
                    ensure(degen(&degen(c, j), i) == degen(&degen(c, i), j + 1), || format!("s_i s_j at {c:?}"))?;
                    count += 1;
                }
                let s = degen(c, j);
                for i in 0..=k + 1 {
                    let lhs = face(&s, i);
                    let rhs = if i < j {
                        degen(&face(c, i), j - 1)
                    } else if i == j || i == j + 1 {
                        c.clone()
                    } else {
                        degen(&face(c, i - 1), j)
                    };
                    ensure(lhs == rhs, || format!("d_{i} s_{j} at {c:?}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

fn main() {
    let checks: [(&str, fn() -> Check); 10] = [
        ("differential squares to zero", c1_d_squared),
        ("Leibniz, associativity and unit", c2_leibniz_assoc),
        ("δ∘δ = 0 and D∘D = 0", c3_squares),
        ("MC residual ⇔ d² on probes", c4_mc_duality),
        ("Tot ↔ Tw roundtrip", c5_roundtrip),
        ("ℙ¹ line bundle cohomology", c6_p1),
        ("matching witness", c7_matching),
        ("equivariant suite", c8_equivariant),
        ("Δ1 morphism differential", c9_delta1),
        ("simplicial bookkeeping", c10_simplicial),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{:.2?}]", i + 1, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
