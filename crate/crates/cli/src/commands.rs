//! One function per subcommand. Each returns an [`Outcome`]; input problems are errors.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use anyhow::{anyhow, bail, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use twk_core::cohomology::hom_cohomology;
use twk_core::dgresolution::{mc_check_simplex, mor_diff};
use twk_core::equivariant::{mc_check_equiv, mor_diff_equiv};
use twk_core::random;
use twk_core::report::{Finding, McReport};
use twk_core::simplicial::{CechNerve, RingedCover};
use twk_core::totalization::{matching_witness, mc_check_tot, tot_mor_diff, tot_to_twisted, twisted_to_tot};
use twk_core::twisted::{mc_check_tw, tw_mor_diff, TwPerfComplex};

use crate::manifest::{block_specs, Manifest, Object};

/// What a command found: a verdict, a human report and the same data as JSON.
pub struct Outcome {
    pub pass: bool,
    pub text: String,
    pub json: Value,
}

fn cell_names(cover: Option<&RingedCover>, cell: &[usize]) -> String {
    match cover {
        Some(c) => format!("({})", cell.iter().map(|i| c.names()[*i].as_str()).collect::<Vec<_>>().join(",")),
        None => format!("{cell:?}"),
    }
}

fn finding_json(f: &Finding, cover: Option<&RingedCover>) -> Value {
    let name = |c: &[usize]| cell_names(cover, c);
    match f {
        Finding::NotAComplex { vertex } => json!({"kind": "not_a_complex", "vertex": vertex}),
        Finding::Residual { cell, residual } => {
            json!({"kind": "residual", "cell": name(cell), "blocks": block_specs(residual)})
        }
        Finding::UnitViolated { cell } => json!({"kind": "unit_violated", "cell": name(cell)}),
        Finding::DegenerateNonzero { cell } => json!({"kind": "degenerate_nonzero", "cell": name(cell)}),
        Finding::NotInvertible { cell } => json!({"kind": "not_invertible", "cell": name(cell)}),
        Finding::Malformed(s) => json!({"kind": "malformed", "detail": s}),
    }
}

fn finding_text(f: &Finding, cover: Option<&RingedCover>) -> String {
    match f {
        Finding::Residual { cell, residual } => {
            let mut s = format!("nonzero MC residual at {}", cell_names(cover, cell));
            for b in block_specs(residual) {
                let _ = write!(s, "\n      from degree {}: {:?}", b.degree, b.rows);
            }
            s
        }
        Finding::UnitViolated { cell } => format!("component at {} must be the identity", cell_names(cover, cell)),
        Finding::DegenerateNonzero { cell } => format!("component at degenerate {} must vanish", cell_names(cover, cell)),
        Finding::NotInvertible { cell } => format!("component at {} is not invertible up to homotopy", cell_names(cover, cell)),
        other => other.to_string(),
    }
}

fn mc_outcome(name: &str, kind: &str, report: &McReport, cover: Option<&RingedCover>) -> Outcome {
    let pass = report.passed();
    let mut text = format!("{kind} object {name}: {}\n", if pass { "valid" } else { "INVALID" });
    let _ = writeln!(text, "  levels checked: 0..={}", report.max_level);
    for f in &report.findings {
        let _ = writeln!(text, "  {}", finding_text(f, cover));
    }
    if !report.inconclusive.is_empty() {
        let cells: Vec<String> = report.inconclusive.iter().map(|c| cell_names(cover, c)).collect();
        let _ = writeln!(text, "  invertibility undecided over the base ring at {}", cells.join(" "));
    }
    let json = json!({
        "object": name,
        "kind": kind,
        "pass": pass,
        "max_level": report.max_level,
        "first_failure": report.findings.first().map(|f| finding_json(f, cover)),
        "findings": report.findings.iter().map(|f| finding_json(f, cover)).collect::<Vec<_>>(),
        "inconclusive": report.inconclusive.iter().map(|c| cell_names(cover, c)).collect::<Vec<_>>(),
    });
    Outcome { pass, text, json }
}

pub fn check_object(name: &str, obj: &Object) -> Outcome {
    match obj {
        Object::Twisted(t) => mc_outcome(name, "twisted", &mc_check_tw(t), Some(t.cover())),
        Object::Equivariant(e) => mc_outcome(name, "equivariant", &mc_check_equiv(e), None),
        Object::Simplex(s) => mc_outcome(name, "simplex", &mc_check_simplex(s), None),
    }
}

/// `twk validate`: objects are checked for the MC equation and non-degeneracy,
/// morphisms for `d∘d = 0`.
pub fn validate(m: &Manifest, name: &str) -> Result<Outcome> {
    if m.objects.contains_key(name) {
        return Ok(check_object(name, &m.object(name)?));
    }
    if !m.morphisms.contains_key(name) {
        bail!("no object or morphism named {name:?}");
    }
    let (src, tgt, theta) = m.morphism(name)?;
    let dd = match (&src, &tgt) {
        (Object::Twisted(s), Object::Twisted(t)) => {
            let d = tw_mor_diff(s, t, &theta)?;
            tw_mor_diff(s, t, &d)?
        }
        (Object::Equivariant(s), Object::Equivariant(t)) => mor_diff_equiv(s, t, &mor_diff_equiv(s, t, &theta)?)?,
        (Object::Simplex(s), Object::Simplex(t)) => mor_diff(s, t, &mor_diff(s, t, &theta)?)?,
        _ => unreachable!("kinds checked when the morphism was built"),
    };
    let cover = match &src {
        Object::Twisted(s) => Some(s.cover().as_ref()),
        _ => None,
    };
    let first = dd.first_nonzero().map(|(c, f)| (cell_names(cover, c), block_specs(f)));
    let pass = first.is_none();
    let text = match &first {
        None => format!("morphism {name}: d∘d = 0\n"),
        Some((c, _)) => format!("morphism {name}: d∘d ≠ 0, first at {c}\n"),
    };
    let json = json!({
        "morphism": name,
        "pass": pass,
        "first_failure": first.map(|(c, b)| json!({"cell": c, "blocks": b})),
    });
    Ok(Outcome { pass, text, json })
}

fn twisted(m: &Manifest, name: &str) -> Result<TwPerfComplex> {
    match m.object(name)? {
        Object::Twisted(t) => Ok(t),
        other => bail!("{name:?} is a {} object; a twisted one is required", other.kind()),
    }
}

/// Degrees where `Hom(src, tgt)` can have cohomology.
fn natural_degrees(src: &TwPerfComplex, tgt: &TwPerfComplex) -> RangeInclusive<i32> {
    let bounds = |t: &TwPerfComplex| {
        let lo = t.locals().iter().filter_map(|m| m.min_degree()).min().unwrap_or(0);
        let hi = t.locals().iter().filter_map(|m| m.max_degree()).max().unwrap_or(0);
        (lo, hi)
    };
    let ((slo, shi), (tlo, thi)) = (bounds(src), bounds(tgt));
    let top = src.cover().nerve().map(|s| s.len() as i32 - 1).max().unwrap_or(0);
    (tlo - shi)..=(thi - slo + top)
}

/// `twk cohomology`.
pub fn cohomology(m: &Manifest, from: &str, to: &str, window: Option<i32>, degrees: Option<[i32; 2]>) -> Result<Outcome> {
    let (s, t) = (twisted(m, from)?, twisted(m, to)?);
    for (name, obj) in [(from, &s), (to, &t)] {
        let r = mc_check_tw(obj);
        if !r.passed() {
            let mut out = mc_outcome(name, "twisted", &r, Some(obj.cover()));
            out.text = format!("refusing to compute cohomology: {name} does not validate\n{}", out.text);
            return Ok(out);
        }
    }
    let degrees = match degrees.or(m.options.degrees) {
        Some([lo, hi]) if lo <= hi => lo..=hi,
        Some(d) => bail!("empty degree range {d:?}"),
        None => natural_degrees(&s, &t),
    };
    let report = hom_cohomology(&s, &t, degrees.clone(), window.or(m.options.window))?;
    let mut text = format!("H^*(Hom({from}, {to})), weight window {}\n", report.window);
    let mut totals = Vec::new();
    for d in degrees {
        let n = report.total(d);
        let _ = writeln!(text, "  degree {d:>3}: {n}");
        totals.push(json!({"degree": d, "dim": n}));
    }
    let entries: Vec<Value> = report.nonzero().map(|(d, w, n)| json!({"degree": d, "weight": w, "dim": n})).collect();
    if !entries.is_empty() {
        let _ = writeln!(text, "  nonzero (degree, weight, dim):");
        for (d, w, n) in report.nonzero() {
            let _ = writeln!(text, "    {d:>3} {w:?} {n}");
        }
    }
    let json = json!({"from": from, "to": to, "window": report.window, "pass": true, "degrees": totals, "entries": entries});
    Ok(Outcome { pass: true, text, json })
}

/// `twk roundtrip`: Tw → Tot → Tw and back, plus agreement of both morphism
/// differentials on seeded random endomorphisms.
pub fn roundtrip(m: &Manifest, name: &str, probes: usize) -> Result<Outcome> {
    let t = twisted(m, name)?;
    let cover = t.cover().clone();
    let tot = twisted_to_tot(&t)?;
    let back = tot_to_twisted(&tot)?;
    let mut problems: Vec<String> = Vec::new();
    if let Some(c) = back.a().first_difference(t.a()) {
        problems.push(format!("object components differ at {}", cell_names(Some(&cover), &c)));
    }
    let again = twisted_to_tot(&back)?;
    if again.phi() != tot.phi() || again.diffs() != tot.diffs() {
        problems.push("totalization data changes after a round trip".into());
    }
    let (tw_ok, tot_ok) = (mc_check_tw(&t).passed(), mc_check_tot(&tot).passed());
    if tw_ok != tot_ok {
        problems.push(format!("validators disagree: twisted {tw_ok}, totalization {tot_ok}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(m.options.seed.unwrap_or(0));
    for i in 0..probes {
        let degree = (i % 3) as i32 - 1;
        let theta = random::random_cochain(&mut rng, t.site(), t.locals(), t.locals(), degree, 2, 0.5);
        let a = tw_mor_diff(&t, &t, &theta)?;
        let b = tot_mor_diff(&tot, &tot, &theta)?;
        if let Some(c) = a.first_difference(&b) {
            problems.push(format!("probe {i}: morphism differentials differ at {}", cell_names(Some(&cover), &c)));
            break;
        }
    }
    let pass = problems.is_empty();
    let mut text = format!("roundtrip {name}: {}\n", if pass { "identical" } else { "MISMATCH" });
    let _ = writeln!(text, "  {} components, validators agree ({}), {probes} morphism probes", t.a().len(), if tw_ok { "valid" } else { "invalid" });
    for p in &problems {
        let _ = writeln!(text, "  {p}");
    }
    let json = json!({"object": name, "pass": pass, "components": t.a().len(), "valid": tw_ok, "probes": probes, "problems": problems});
    Ok(Outcome { pass, text, json })
}

/// `twk equivariant`: the MC check plus a per-level residual summary.
pub fn equivariant(m: &Manifest, name: &str) -> Result<Outcome> {
    let e = match m.object(name)? {
        Object::Equivariant(e) => e,
        other => bail!("{name:?} is a {} object; an equivariant one is required", other.kind()),
    };
    let report = mc_check_equiv(&e);
    let mut out = mc_outcome(name, "equivariant", &report, None);
    let residual = twk_core::equivariant::mc_residual_equiv(&e);
    let levels: Vec<Value> = (1..=report.max_level)
        .map(|k| {
            let bad = residual.components().filter(|(c, _)| c.len() == k + 1).count();
            json!({"level": k, "nonzero_residuals": bad})
        })
        .collect();
    let group = e.action().group().order();
    let carrier = e.action().carrier();
    let mut head = format!("|G| = {group}, |X| = {carrier}\n");
    for l in &levels {
        let _ = writeln!(head, "  level {}: {} nonzero residual components", l["level"], l["nonzero_residuals"]);
    }
    out.text = format!("{head}{}", out.text);
    out.json["group_order"] = json!(group);
    out.json["carrier"] = json!(carrier);
    out.json["levels"] = Value::Array(levels);
    Ok(out)
}

/// `twk nerve`: level-`k` tuples and the matching-object witness.
pub fn nerve(m: &Manifest, level: usize) -> Result<Outcome> {
    let cover = m.cover()?;
    let tuples = cover.nerve_level(level);
    let names: Vec<String> = tuples.iter().map(|c| cell_names(Some(&cover), c)).collect();
    let witness = matching_witness(&CechNerve(&cover), level).map_err(|e| anyhow!("{e}"))?;
    let projection = witness.is_projection(tuples.len());
    let expected = (1usize << level) - 1;
    let pass = projection && witness.factors.len() == expected;
    let mut text = format!("level {level}: {} tuples, {} nondegenerate\n", tuples.len(), witness.free.len());
    let _ = writeln!(
        text,
        "  matching object: {} surjection factors (expected {expected}), product projection: {}",
        witness.factors.len(),
        if projection { "yes" } else { "NO" }
    );
    for (sigma, size) in &witness.factors {
        let _ = writeln!(text, "    {:?} ↠ [{}]: {size} cells", sigma.values(), sigma.target());
    }
    let _ = writeln!(text, "  {}", names.join(" "));
    let factors: Vec<Value> =
        witness.factors.iter().map(|(s, n)| json!({"surjection": s.values(), "target": s.target(), "size": n})).collect();
    let json = json!({
        "level": level,
        "pass": pass,
        "tuples": names,
        "nondegenerate": witness.free.len(),
        "factors": factors,
        "projection": projection,
    });
    Ok(Outcome { pass, text, json })
}
