//! Twisted complexes over a ringed cover.
//!
//! The structure cochain `a` is stored with its level-0 part: `a_{(i)}` is the
//! differential of `E_i`. Morphisms and the Maurer–Cartan residual are computed
//! by the cochain engine over tuples of the nerve; `literal_residual` evaluates
//! the same equation one tuple at a time from explicit sums, as a cross-check.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cochain::{self, family, CechSite, Cell, CellSite, Cochain, Family};
use crate::dgresolution::truncation_bound;
use crate::error::{Error, Result};
use crate::exactalg::{hom_differential, Elem, GradedMap, GradedModule, Matrix};
use crate::homotopy::homotopy_invertible;
use crate::par;
use crate::report::{Finding, McReport};
use crate::simplicial::RingedCover;

#[derive(Clone, Debug)]
pub struct TwPerfComplex {
    site: CechSite,
    a: Cochain,
}

impl PartialEq for TwPerfComplex {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.site.cover, &other.site.cover) && self.a == other.a
    }
}

impl TwPerfComplex {
    /// Shape checks only; use [`mc_check_tw`] for the equations.
    pub fn new(cover: Arc<RingedCover>, a: Cochain) -> Result<Self> {
        let site = CechSite::new(cover);
        if a.degree() != 1 || a.source() != a.target() || a.source().len() != site.vertex_count() {
            return Err(Error::Shape("a must be a degree-1 endomorphism cochain, one module per open".into()));
        }
        for (c, m) in a.components() {
            if !site.contains(c) {
                return Err(Error::OutOfRange(format!("{c:?} is not in the nerve")));
            }
            let (s, t, q) = a.slot(&site, c);
            if *m.source() != s || *m.target() != t || m.degree() != q || m.ring() != site.ring(c) {
                return Err(Error::Shape(format!("component at {c:?} has the wrong shape or ring")));
            }
        }
        Ok(TwPerfComplex { site, a })
    }

    /// Builds `a` from explicit components, validating each slot.
    pub fn from_components(cover: Arc<RingedCover>, locals: Vec<GradedModule>, comps: Vec<(Cell, GradedMap)>) -> Result<Self> {
        let site = CechSite::new(cover.clone());
        if locals.len() != site.vertex_count() {
            return Err(Error::Shape("one local module per open".into()));
        }
        let fam = family(locals);
        let mut a = Cochain::zero(1, &fam, &fam);
        for (c, m) in comps {
            a.set(&site, &c, m)?;
        }
        TwPerfComplex::new(cover, a)
    }

    pub fn cover(&self) -> &Arc<RingedCover> {
        &self.site.cover
    }

    pub fn site(&self) -> &CechSite {
        &self.site
    }

    pub fn a(&self) -> &Cochain {
        &self.a
    }

    pub fn locals(&self) -> &Family {
        self.a.source()
    }

    pub fn differential(&self, i: usize) -> GradedMap {
        cochain::vertex_parts(&self.site, &self.a).swap_remove(i)
    }

    pub fn truncation_bound(&self) -> usize {
        truncation_bound(self.locals().iter())
    }

    /// A copy with one component replaced (zero removes it).
    pub fn with_component(&self, cell: &[usize], m: GradedMap) -> Result<Self> {
        let mut a = self.a.clone();
        a.set(&self.site, cell, m)?;
        Ok(TwPerfComplex { site: self.site.clone(), a })
    }
}

pub fn delta(site: &CechSite, u: &Cochain) -> Cochain {
    cochain::delta(site, u)
}

pub fn tw_compose(site: &CechSite, u: &Cochain, v: &Cochain) -> Result<Cochain> {
    cochain::mul(site, u, v)
}

pub fn tw_identity(t: &TwPerfComplex) -> Cochain {
    Cochain::identity(&t.site, t.locals())
}

/// `δa + a·a`.
pub fn mc_residual(t: &TwPerfComplex) -> Cochain {
    let sq = cochain::mul(&t.site, &t.a, &t.a).expect("endomorphism");
    delta(&t.site, &t.a).add(&sq).expect("parallel")
}

/// The equation at one tuple, summed term by term:
/// `Σ_{j=1}^{k−1} (−1)^j a_{…î_j…} + Σ_{l=0}^{k} (−1)^{(1−l)(k−l)} a_{i_0…i_l} a_{i_l…i_k}`.
pub fn literal_residual(t: &TwPerfComplex, tuple: &[usize]) -> GradedMap {
    let site = &t.site;
    let k = tuple.len() - 1;
    let (s, tg, q) = (t.locals()[tuple[k]].clone(), t.locals()[tuple[0]].clone(), 2 - k as i32);
    let ring = site.ring(tuple);
    let mut acc = GradedMap::zero(ring, &s, &tg, q);
    for j in 1..k {
        let mut face = tuple.to_vec();
        face.remove(j);
        if let Some(m) = t.a.get(&face) {
            let term = site.restrict(m, &face, tuple).signed(j % 2 == 0);
            acc = acc.add(&term).expect("slot");
        }
    }
    for l in 0..=k {
        let (f, b) = (&tuple[..=l], &tuple[l..]);
        if let (Some(x), Some(y)) = (t.a.get(f), t.a.get(b)) {
            let sign = ((1 - l as i64) * (k - l) as i64).rem_euclid(2) == 0;
            let term = site.restrict(x, f, tuple).compose(&site.restrict(y, b, tuple)).expect("composable");
            acc = acc.add(&term.signed(sign)).expect("slot");
        }
    }
    acc
}

/// Residual findings for every tuple, then non-degeneracy of each `a^{1,0}_{ii}`
/// on `(E_i, a^{0,1}_i)`.
pub fn mc_check_tw(t: &TwPerfComplex) -> McReport {
    let mut report = McReport { max_level: 2 * t.truncation_bound() + 1, ..McReport::default() };
    for (cell, r) in mc_residual(t).components() {
        if cell.len() == 1 {
            report.findings.push(Finding::NotAComplex { vertex: cell[0] });
        }
        report.findings.push(Finding::Residual { cell: cell.clone(), residual: r.clone() });
    }
    let opens: Vec<usize> = (0..t.site.vertex_count()).collect();
    let statuses = par::map(&opens, |i| {
        let d = t.differential(*i);
        let cell = [*i, *i];
        let f = t.a.get(&cell).cloned().unwrap_or_else(|| GradedMap::zero(d.ring(), d.source(), d.target(), 0));
        homotopy_invertible(&f, &d, &d)
    });
    for (i, st) in opens.into_iter().zip(statuses) {
        report.record_invertibility(vec![i, i], st);
    }
    report
}

/// `d f = δf + b·f − (−1)^{|f|} f·a` for `f : (E, a) → (F, b)`.
pub fn tw_mor_diff(src: &TwPerfComplex, tgt: &TwPerfComplex, f: &Cochain) -> Result<Cochain> {
    if !Arc::ptr_eq(src.cover(), tgt.cover()) && src.cover().nerve().ne(tgt.cover().nerve()) {
        return Err(Error::Shape("objects live on different covers".into()));
    }
    cochain::mor_d(&src.site, f, &src.a, &tgt.a)
}

/// Rank-one object in degree 0 with `a^{1,0}_{ij} = g_{ij}`. Missing pairs are
/// filled by `g_{ii} = 1` and `g_{ji} = g_{ij}^{-1}`.
pub fn line_bundle(cover: Arc<RingedCover>, units: &BTreeMap<(usize, usize), Elem>) -> Result<TwPerfComplex> {
    let site = CechSite::new(cover.clone());
    let n = site.vertex_count();
    let m = GradedModule::unit();
    let mut g: BTreeMap<(usize, usize), Elem> = BTreeMap::new();
    for (&(i, j), u) in units {
        if !site.contains(&[i, j]) {
            return Err(Error::InvalidCover(format!("({i},{j}) is not in the nerve")));
        }
        let ring = site.ring(&[i, j]);
        if !ring.contains(u) {
            return Err(Error::RingMismatch { expected: ring.to_string(), found: "transition literal".into() });
        }
        if !ring.is_unit(u) {
            return Err(Error::NotAUnit(format!("g_{i}{j} = {}", ring.fmt_elem(u))));
        }
        g.insert((i, j), u.clone());
    }
    for cell in site.cells(1) {
        let (i, j) = (cell[0], cell[1]);
        if g.contains_key(&(i, j)) {
            continue;
        }
        let ring = site.ring(&cell);
        let v = if i == j {
            ring.one()
        } else if let Some(u) = g.get(&(j, i)) {
            ring.inv(u).ok_or_else(|| Error::NotAUnit(ring.fmt_elem(u)))?
        } else {
            return Err(Error::InvalidCover(format!("no transition for ({i},{j})")));
        };
        g.insert((i, j), v);
    }
    for cell in site.cells(2) {
        let (i, j, k) = (cell[0], cell[1], cell[2]);
        let ring = site.ring(&cell);
        let r = |a: usize, b: usize| {
            let h = cover.restriction(&[a, b], &cell);
            h.apply(&g[&(a, b)])
        };
        if ring.mul(&r(i, j), &r(j, k)) != r(i, k) {
            return Err(Error::Invariant(format!("cocycle condition fails on ({i},{j},{k})")));
        }
    }
    let fam = family(vec![m.clone(); n]);
    let mut a = Cochain::zero(1, &fam, &fam);
    for ((i, j), u) in g {
        let ring = site.ring(&[i, j]);
        let block = Matrix::from_rows(ring, vec![vec![u]])?;
        a.set(&site, &[i, j], GradedMap::from_blocks(ring, &m, &m, 0, [(0, block)])?)?;
    }
    TwPerfComplex::new(cover, a)
}

/// Both sides of `a_{ii} − a_{ij} a_{ji} = d(a_{iji})`, evaluated over `U_{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyRelation {
    pub lhs: GradedMap,
    pub rhs: GradedMap,
}

impl HomotopyRelation {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn homotopy_relation_check(t: &TwPerfComplex, i: usize, j: usize) -> Result<HomotopyRelation> {
    let site = &t.site;
    let cell = [i, j, i];
    if !site.contains(&cell) {
        return Err(Error::InvalidCover(format!("{{{i},{j}}} is not in the nerve")));
    }
    let ring = site.ring(&cell).clone();
    let e = &t.locals()[i];
    let get = |c: &[usize], q: i32| {
        let (s, tg) = (&t.locals()[*c.last().unwrap()], &t.locals()[c[0]]);
        t.a.get(c)
            .map(|m| site.restrict(m, c, &cell))
            .unwrap_or_else(|| GradedMap::zero(&ring, s, tg, q))
    };
    let lhs = get(&[i, i], 0).sub(&get(&[i, j], 0).compose(&get(&[j, i], 0))?)?;
    let d = get(&[i], 1);
    let h = get(&cell, -1);
    let rhs = hom_differential(&d, &h, &d)?;
    debug_assert_eq!(lhs.source(), e);
    Ok(HomotopyRelation { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Ring;

    fn two_open(ring: &Ring) -> Arc<RingedCover> {
        Arc::new(RingedCover::complete(2, ring).unwrap())
    }

    #[test]
    fn trivial_bundle_is_valid() {
        let q = Ring::rationals();
        let t = line_bundle(two_open(&q), &BTreeMap::new().into_iter().chain([((0, 1), q.one())]).collect()).unwrap();
        assert!(mc_check_tw(&t).passed());
        assert!(homotopy_relation_check(&t, 0, 1).unwrap().holds());
    }

    #[test]
    fn literal_matches_engine() {
        let q = Ring::rationals();
        let t = line_bundle(two_open(&q), &[((0, 1), q.from_i64(3))].into()).unwrap();
        let bad = t
            .with_component(&[0, 1, 0], {
                let m = GradedModule::unit();
                GradedMap::zero(&q, &m, &m, -1)
            })
            .unwrap();
        let bad = bad
            .with_component(&[0, 0], {
                let m = GradedModule::unit();
                GradedMap::from_blocks(&q, &m, &m, 0, [(0, Matrix::from_i64(&q, &[&[2]]))]).unwrap()
            })
            .unwrap();
        let r = mc_residual(&bad);
        for k in 0..4 {
            for c in bad.site().cells(k) {
                let lit = literal_residual(&bad, &c);
                assert_eq!(r.get(&c).cloned().unwrap_or_else(|| GradedMap::zero(&q, lit.source(), lit.target(), lit.degree())), lit, "{c:?}");
            }
        }
        assert!(!mc_check_tw(&bad).passed());
    }

    #[test]
    fn morphism_differential_squares_to_zero() {
        let q = Ring::rationals();
        let cover = Arc::new(RingedCover::complete(3, &q).unwrap());
        let units = [((0, 1), q.from_i64(2)), ((1, 2), q.from_i64(3)), ((0, 2), q.from_i64(6))].into();
        let t = line_bundle(cover, &units).unwrap();
        let m = GradedModule::unit();
        let mut f = Cochain::zero(0, t.a().source(), t.a().source());
        f.set(t.site(), &[1], GradedMap::identity(&q, &m)).unwrap();
        let mut g = Cochain::zero(1, t.a().source(), t.a().source());
        g.set(t.site(), &[0, 2], GradedMap::identity(&q, &m)).unwrap();
        for x in [f, g] {
            let d = tw_mor_diff(&t, &t, &x).unwrap();
            assert!(!d.is_zero());
            let dd = tw_mor_diff(&t, &t, &d).unwrap();
            assert!(dd.truncated(|p| p < 4).is_zero());
        }
        assert!(tw_mor_diff(&t, &t, &tw_identity(&t)).unwrap().is_zero());
    }

    #[test]
    fn broken_cocycle_is_rejected() {
        let q = Ring::rationals();
        let cover = Arc::new(RingedCover::complete(3, &q).unwrap());
        let units = [((0, 1), q.from_i64(2)), ((1, 2), q.from_i64(3)), ((0, 2), q.from_i64(5))].into();
        assert!(matches!(line_bundle(cover, &units), Err(Error::Invariant(_))));
    }
}
