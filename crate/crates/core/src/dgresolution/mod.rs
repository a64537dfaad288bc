//! The simplicial resolution `Δ_n(B)` of the dg-category of bounded complexes of
//! finite free modules over one ring.

use std::sync::Arc;

use crate::cochain::{self, family, Cell, CellSite, Cochain, Family, NondecreasingSite};
use crate::error::{Error, Result};
use crate::exactalg::{GradedMap, GradedModule, Ring, RingHom};
use crate::homotopy::{homotopy_invertible, Invertibility};
use crate::par;
use crate::report::{Finding, McReport};
use crate::simplicial::OrdinalMap;

/// A bounded complex of finite free modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexObj {
    diff: GradedMap,
}

impl ComplexObj {
    pub fn new(diff: GradedMap) -> Result<Self> {
        let c = ComplexObj::unchecked(diff)?;
        if !c.is_complex() {
            return Err(Error::Invariant("d∘d ≠ 0".into()));
        }
        Ok(c)
    }

    /// Shape checks only; `d∘d` is left to the caller's validator.
    pub fn unchecked(diff: GradedMap) -> Result<Self> {
        if diff.degree() != 1 || diff.source() != diff.target() {
            return Err(Error::Shape("a differential is a degree-1 endomorphism".into()));
        }
        Ok(ComplexObj { diff })
    }

    pub fn zero_diff(ring: &Ring, module: &GradedModule) -> Self {
        ComplexObj { diff: GradedMap::zero(ring, module, module, 1) }
    }

    pub fn ring(&self) -> &Ring {
        self.diff.ring()
    }

    pub fn module(&self) -> &GradedModule {
        self.diff.source()
    }

    pub fn diff(&self) -> &GradedMap {
        &self.diff
    }

    pub fn is_complex(&self) -> bool {
        self.diff.compose(&self.diff).map(|x| x.is_zero()).unwrap_or(false)
    }

    pub fn apply_hom(&self, h: &RingHom) -> Result<ComplexObj> {
        Ok(ComplexObj { diff: self.diff.apply_hom(h)? })
    }

    pub fn amplitude(&self) -> Option<(i32, i32)> {
        Some((self.module().min_degree()?, self.module().max_degree()?))
    }
}

/// Components vanish above this level: `φ^{k,1−k} : E_j → E_i` needs
/// `1 − k ≥ min − max`.
pub fn truncation_bound<'a>(modules: impl IntoIterator<Item = &'a GradedModule>) -> usize {
    let mut lo = i32::MAX;
    let mut hi = i32::MIN;
    for m in modules {
        if let (Some(a), Some(b)) = (m.min_degree(), m.max_degree()) {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    if lo > hi {
        0
    } else {
        (hi - lo + 1) as usize
    }
}

/// An object of `Δ_n(B)`: complexes `E_0, …, E_n` and `φ^{k,1−k}_I` over
/// nondecreasing `I`, stored as a degree-1 cochain with no level-0 part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexObj {
    site: NondecreasingSite,
    objects: Vec<ComplexObj>,
    phi: Cochain,
}

impl SimplexObj {
    pub fn new(ring: &Ring, objects: Vec<ComplexObj>, phi: Cochain) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::Shape("Δ_n needs at least one object".into()));
        }
        let site = NondecreasingSite { n: objects.len() - 1, ring: ring.clone() };
        let fam = family(objects.iter().map(|o| o.module().clone()).collect());
        if objects.iter().any(|o| o.ring() != ring) {
            return Err(Error::RingMismatch { expected: ring.to_string(), found: "object ring".into() });
        }
        if phi.degree() != 1 || *phi.source() != fam || *phi.target() != fam {
            return Err(Error::Shape("φ must be a degree-1 cochain on the object family".into()));
        }
        if phi.levels().contains(&0) {
            return Err(Error::Shape("φ has no level-0 components".into()));
        }
        if let Some((c, _)) = phi.components().find(|(c, _)| !site.contains(c)) {
            return Err(Error::OutOfRange(format!("{c:?} is not a nondecreasing index into [{}]", site.n)));
        }
        Ok(SimplexObj { site, objects, phi })
    }

    /// Builds `φ` from explicit components.
    pub fn from_components(ring: &Ring, objects: Vec<ComplexObj>, comps: Vec<(Cell, GradedMap)>) -> Result<Self> {
        let fam = family(objects.iter().map(|o| o.module().clone()).collect());
        let site = NondecreasingSite { n: objects.len().saturating_sub(1), ring: ring.clone() };
        let mut phi = Cochain::zero(1, &fam, &fam);
        for (c, m) in comps {
            phi.set(&site, &c, m)?;
        }
        SimplexObj::new(ring, objects, phi)
    }

    pub fn n(&self) -> usize {
        self.site.n
    }

    pub fn ring(&self) -> &Ring {
        &self.site.ring
    }

    pub fn site(&self) -> &NondecreasingSite {
        &self.site
    }

    pub fn objects(&self) -> &[ComplexObj] {
        &self.objects
    }

    pub fn phi(&self) -> &Cochain {
        &self.phi
    }

    pub fn family(&self) -> &Family {
        self.phi.source()
    }

    pub fn diffs(&self) -> Vec<GradedMap> {
        self.objects.iter().map(|o| o.diff().clone()).collect()
    }

    pub fn truncation_bound(&self) -> usize {
        truncation_bound(self.family().iter())
    }
}

/// `D` of a cochain between the families of `src` and `tgt`.
pub fn cochain_d(site: &NondecreasingSite, x: &Cochain, src: &[ComplexObj], tgt: &[ComplexObj]) -> Cochain {
    let ds: Vec<GradedMap> = src.iter().map(|o| o.diff().clone()).collect();
    let dt: Vec<GradedMap> = tgt.iter().map(|o| o.diff().clone()).collect();
    cochain::big_d(site, x, &ds, &dt)
}

pub fn shuffle_mul(site: &NondecreasingSite, phi: &Cochain, eta: &Cochain) -> Result<Cochain> {
    cochain::mul(site, phi, eta)
}

/// `Dφ + φ·φ`.
pub fn mc_residual(s: &SimplexObj) -> Cochain {
    let d = cochain_d(&s.site, &s.phi, &s.objects, &s.objects);
    let sq = cochain::mul(&s.site, &s.phi, &s.phi).expect("same family");
    d.add(&sq).expect("parallel")
}

fn has_adjacent_repeat(cell: &[usize]) -> bool {
    cell.windows(2).any(|w| w[0] == w[1])
}

/// Full validation: residual, identity on `φ_{ii}`, vanishing over repeated
/// indices for `k ≥ 2`, and homotopy invertibility of every `φ_{ij}`.
pub fn mc_check_simplex(s: &SimplexObj) -> McReport {
    let mut report = McReport { max_level: s.truncation_bound() + 1, ..McReport::default() };
    for (v, o) in s.objects.iter().enumerate() {
        if !o.is_complex() {
            report.findings.push(Finding::NotAComplex { vertex: v });
        }
    }
    for (cell, r) in mc_residual(s).components() {
        report.findings.push(Finding::Residual { cell: cell.clone(), residual: r.clone() });
    }
    let ring = s.ring();
    for i in 0..=s.n() {
        let cell = vec![i, i];
        let id = GradedMap::identity(ring, s.objects[i].module());
        let actual = s.phi.get(&cell).cloned().unwrap_or_else(|| GradedMap::zero(ring, &id.source().clone(), &id.target().clone(), 0));
        if actual != id {
            report.findings.push(Finding::UnitViolated { cell });
        }
    }
    for (cell, _) in s.phi.components() {
        if cell.len() >= 3 && has_adjacent_repeat(cell) {
            report.findings.push(Finding::DegenerateNonzero { cell: cell.clone() });
        }
    }
    let pairs: Vec<Cell> = (0..=s.n()).flat_map(|i| (i + 1..=s.n()).map(move |j| vec![i, j])).collect();
    let statuses = par::map(&pairs, |cell| {
        let (i, j) = (cell[0], cell[1]);
        let f = s
            .phi
            .get(cell)
            .cloned()
            .unwrap_or_else(|| GradedMap::zero(ring, s.objects[j].module(), s.objects[i].module(), 0));
        homotopy_invertible(&f, s.objects[j].diff(), s.objects[i].diff())
    });
    for (cell, st) in pairs.into_iter().zip(statuses) {
        report.record_invertibility(cell, st);
    }
    report
}

/// `dθ = Dθ + ψ·θ − (−1)^m θ·φ` for `θ : (E, φ) → (F, ψ)`.
pub fn mor_diff(s: &SimplexObj, t: &SimplexObj, theta: &Cochain) -> Result<Cochain> {
    if theta.source() != s.family() || theta.target() != t.family() || s.n() != t.n() || s.ring() != t.ring() {
        return Err(Error::Shape("morphism families do not match the objects".into()));
    }
    let m = theta.degree();
    let d = cochain_d(&s.site, theta, &s.objects, &t.objects);
    let left = cochain::mul(&s.site, &t.phi, theta)?;
    let right = cochain::mul(&s.site, theta, &s.phi)?;
    d.add(&left)?.add(&right.signed(m.rem_euclid(2) == 1))
}

pub fn identity_mor(s: &SimplexObj) -> Cochain {
    Cochain::identity(&s.site, s.family())
}

fn pushforward_cochain(
    sigma: &OrdinalMap,
    site: &NondecreasingSite,
    x: &Cochain,
    source: &Family,
    target: &Family,
) -> Cochain {
    let mut out = Cochain::zero(x.degree(), source, target);
    for k in x.levels() {
        for cell in site.cells(k) {
            let image: Cell = cell.iter().map(|i| sigma.apply(*i)).collect();
            if let Some(m) = x.get(&image) {
                out.insert_unchecked(cell, m.clone());
            }
        }
    }
    out
}

/// `σ_*` for `σ : [n] → [m]`, sending an object of `Δ_m` to one of `Δ_n`.
pub fn sigma_pushforward(sigma: &OrdinalMap, s: &SimplexObj) -> Result<SimplexObj> {
    if sigma.target() != s.n() {
        return Err(Error::Shape(format!("{sigma} does not land in [{}]", s.n())));
    }
    let report = mc_check_simplex(s);
    if let Some(f) = report
        .findings
        .iter()
        .find(|f| matches!(f, Finding::UnitViolated { .. } | Finding::DegenerateNonzero { .. }))
    {
        return Err(Error::Invariant(format!("cannot push forward: {f}")));
    }
    let objects: Vec<ComplexObj> = sigma.values().iter().map(|i| s.objects[*i].clone()).collect();
    let fam = family(objects.iter().map(|o| o.module().clone()).collect());
    let site = NondecreasingSite { n: sigma.source(), ring: s.ring().clone() };
    let phi = pushforward_cochain(sigma, &site, &s.phi, &fam, &fam);
    SimplexObj::new(s.ring(), objects, phi)
}

/// `σ_*` on a morphism `θ : s → t`, landing between `σ_* s` and `σ_* t`.
pub fn sigma_pushforward_mor(sigma: &OrdinalMap, s: &SimplexObj, t: &SimplexObj, theta: &Cochain) -> Result<Cochain> {
    let src = family(sigma.values().iter().map(|i| s.family()[*i].clone()).collect());
    let tgt = family(sigma.values().iter().map(|i| t.family()[*i].clone()).collect());
    let site = NondecreasingSite { n: sigma.source(), ring: s.ring().clone() };
    Ok(pushforward_cochain(sigma, &site, theta, &src, &tgt))
}

/// All `E_i = E`, `φ^{1,0} = id`, higher components zero.
pub fn constant_embed(e: &ComplexObj, n: usize) -> SimplexObj {
    let ring = e.ring().clone();
    let objects = vec![e.clone(); n + 1];
    let fam = family(vec![e.module().clone(); n + 1]);
    let site = NondecreasingSite { n, ring: ring.clone() };
    let mut phi = Cochain::zero(1, &fam, &fam);
    for cell in site.cells(1) {
        phi.insert_unchecked(cell, GradedMap::identity(&ring, e.module()));
    }
    SimplexObj { site, objects, phi }
}

/// Convenience: the status of `φ_{ij}` alone.
pub fn edge_invertibility(s: &SimplexObj, i: usize, j: usize) -> Invertibility {
    let ring = s.ring();
    let f = s
        .phi
        .get(&[i, j])
        .cloned()
        .unwrap_or_else(|| GradedMap::zero(ring, s.objects[j].module(), s.objects[i].module(), 0));
    homotopy_invertible(&f, s.objects[j].diff(), s.objects[i].diff())
}

pub fn shared_family(modules: Vec<GradedModule>) -> Family {
    Arc::new(modules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Matrix;

    fn acyclic_pair(ring: &Ring) -> ComplexObj {
        let m = GradedModule::new([(-1, 1), (0, 1)]);
        ComplexObj::new(GradedMap::from_blocks(ring, &m, &m, 1, [(-1, Matrix::identity(ring, 1))]).unwrap()).unwrap()
    }

    #[test]
    fn constant_object_passes() {
        let q = Ring::rationals();
        let s = constant_embed(&acyclic_pair(&q), 2);
        assert!(mc_check_simplex(&s).passed());
        assert!(mc_residual(&s).get(&[0, 1, 2]).is_none());
    }

    #[test]
    fn zero_edge_on_nonacyclic_complex_is_degenerate() {
        let q = Ring::rationals();
        let e = ComplexObj::zero_diff(&q, &GradedModule::unit());
        let mut s = constant_embed(&e, 1);
        s.phi.remove(&[0, 1]);
        let r = mc_check_simplex(&s);
        assert!(r.findings.contains(&Finding::NotInvertible { cell: vec![0, 1] }));
    }

    #[test]
    fn pushforward_along_identity_and_vertex() {
        let q = Ring::rationals();
        let s = constant_embed(&acyclic_pair(&q), 2);
        assert_eq!(sigma_pushforward(&OrdinalMap::identity(2), &s).unwrap(), s);
        let v = sigma_pushforward(&OrdinalMap::new(vec![1], 2).unwrap(), &s).unwrap();
        assert_eq!(v.objects(), &s.objects()[1..2]);
        assert!(v.phi().is_zero() || v.phi().levels() == [1].into());
    }
}
