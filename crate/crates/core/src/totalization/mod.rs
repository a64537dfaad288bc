//! Totalization of strict cosimplicial dg-data.
//!
//! An object is a level-0 object `E` plus one standard morphism per level. All
//! other components are obtained by pulling cells back along ordinal maps, so
//! the checks here go through `SimplicialSet::pull` rather than tuple slicing.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::cochain::{self, family, ActionSite, CechSite, Cell, CellSite, Cochain, Family, NondecreasingSite};
use crate::dgresolution::{truncation_bound, ComplexObj, SimplexObj};
use crate::error::{Error, Result};
use crate::exactalg::{hom_differential, GradedMap};
use crate::homotopy::homotopy_invertible;
use crate::par;
use crate::report::{Finding, McReport};
use crate::simplicial::{matching_surjections, OrdinalMap, SimplicialSet, SplitDecomposition};
use crate::twisted::TwPerfComplex;

/// A site whose cells also carry the simplicial structure maps.
pub trait TotSite: CellSite + SimplicialSet {}
impl<T: CellSite + SimplicialSet> TotSite for T {}

#[derive(Clone, Debug)]
pub enum CosimplicialBackend {
    Cech(CechSite),
    Equivariant(ActionSite),
}

impl CosimplicialBackend {
    pub fn site(&self) -> &dyn TotSite {
        match self {
            CosimplicialBackend::Cech(s) => s,
            CosimplicialBackend::Equivariant(s) => s,
        }
    }

    pub fn matching_witness(&self, k: usize) -> Result<MatchingWitness> {
        matching_witness(self.site(), k)
    }
}

fn vertex_of(site: &dyn TotSite, cell: &[usize], i: usize) -> usize {
    let n = cell.len() - 1;
    site.pull(&OrdinalMap::new(vec![i], n).expect("vertex in range"), cell)[0]
}

fn inclusion(values: impl IntoIterator<Item = usize>, k: usize) -> OrdinalMap {
    OrdinalMap::new(values.into_iter().collect(), k).expect("monotone inclusion")
}

#[derive(Clone, Debug)]
pub struct TotObject {
    backend: CosimplicialBackend,
    diffs: Vec<GradedMap>,
    phi: Cochain,
}

impl TotObject {
    pub fn new(backend: CosimplicialBackend, diffs: Vec<GradedMap>, phi: Cochain) -> Result<Self> {
        let site = backend.site();
        if diffs.len() != site.vertex_count() || phi.source().len() != diffs.len() {
            return Err(Error::Shape("one level-0 complex per vertex".into()));
        }
        for (v, d) in diffs.iter().enumerate() {
            if d.source() != &phi.source()[v] || d.degree() != 1 || d.ring() != site.ring(&[v]) {
                return Err(Error::Shape(format!("differential at vertex {v} does not match")));
            }
        }
        if phi.degree() != 1 || phi.source() != phi.target() || phi.levels().contains(&0) {
            return Err(Error::Shape("standard morphisms live in levels ≥ 1 with total degree 1".into()));
        }
        Ok(TotObject { backend, diffs, phi })
    }

    pub fn backend(&self) -> &CosimplicialBackend {
        &self.backend
    }

    pub fn family(&self) -> &Family {
        self.phi.source()
    }

    pub fn diffs(&self) -> &[GradedMap] {
        &self.diffs
    }

    /// Standard morphisms, keyed by level-`k` cell.
    pub fn phi(&self) -> &Cochain {
        &self.phi
    }

    /// `φ` together with the level-0 differentials.
    pub fn full(&self) -> Cochain {
        cochain::with_differentials(&self.phi, &self.diffs)
    }

    pub fn truncation_bound(&self) -> usize {
        truncation_bound(self.family().iter())
    }
}

/// `d^n_i(E)` over every `n`-cell: the level-0 complex at vertex `i`, restricted.
pub fn object_component(t: &TotObject, n: usize, i: usize) -> Result<BTreeMap<Cell, ComplexObj>> {
    if i > n {
        return Err(Error::OutOfRange(format!("vertex {i} of [{n}]")));
    }
    let site = t.backend.site();
    CellSite::cells(site, n)
        .into_iter()
        .map(|c| {
            let v = vertex_of(site, &c, i);
            let d = site.restrict(&t.diffs[v], &[v], &c);
            Ok((c, ComplexObj::unchecked(d)?))
        })
        .collect()
}

/// `σ_*` of the standard morphism at an `n`-cell: the level-`k` component over
/// `pull(σ_I, cell)`, restricted to the ring of `cell`. `None` when zero.
pub fn expand_standard(t: &TotObject, index: &[usize], cell: &[usize]) -> Result<Option<GradedMap>> {
    expand(t.backend.site(), &t.phi, index, cell)
}

fn expand(site: &dyn TotSite, x: &Cochain, index: &[usize], cell: &[usize]) -> Result<Option<GradedMap>> {
    let sigma = OrdinalMap::from_tuple(index, cell.len() - 1)?;
    let pulled = site.pull(&sigma, cell);
    Ok(x.get(&pulled).map(|m| site.restrict(m, &pulled, cell)))
}

/// The object of `Δ_n` over the ring of an `n`-cell, with every nondecreasing
/// component expanded from standard morphisms.
pub fn simplex_at(t: &TotObject, cell: &[usize]) -> Result<SimplexObj> {
    let site = t.backend.site();
    let n = cell.len() - 1;
    let ring = site.ring(cell).clone();
    let objects: Vec<ComplexObj> = (0..=n)
        .map(|i| {
            let v = vertex_of(site, cell, i);
            ComplexObj::unchecked(site.restrict(&t.diffs[v], &[v], cell))
        })
        .collect::<Result<_>>()?;
    let local = NondecreasingSite { n, ring: ring.clone() };
    let fam = family(objects.iter().map(|o| o.module().clone()).collect());
    let mut phi = Cochain::zero(1, &fam, &fam);
    for k in t.phi.levels() {
        for index in local.cells(k) {
            if let Some(m) = expand(site, &t.phi, &index, cell)? {
                phi.insert_unchecked(index, m);
            }
        }
    }
    SimplexObj::new(&ring, objects, phi)
}

/// The expansion of a morphism to the `Δ_n` cochain at an `n`-cell.
pub fn expand_morphism(t: &TotObject, u: &TotObject, theta: &Cochain, cell: &[usize]) -> Result<Cochain> {
    let site = t.backend.site();
    let n = cell.len() - 1;
    let local = NondecreasingSite { n, ring: site.ring(cell).clone() };
    let pick = |x: &TotObject| family((0..=n).map(|i| x.family()[vertex_of(site, cell, i)].clone()).collect());
    let mut out = Cochain::zero(theta.degree(), &pick(t), &pick(u));
    for k in theta.levels() {
        for index in local.cells(k) {
            if let Some(m) = expand(site, theta, &index, cell)? {
                out.insert_unchecked(index, m);
            }
        }
    }
    Ok(out)
}

/// The equation of level `k` at one cell, read through pullbacks:
/// `(−1)^k d φ^k + Σ_j (−1)^j ∂_j^* φ^{k−1} + Σ_j (−1)^{(1−j)(k−j)} ρ^* φ^j · τ^* φ^{k−j}`.
pub fn tot_residual_at(t: &TotObject, cell: &[usize]) -> GradedMap {
    let site = t.backend.site();
    let k = cell.len() - 1;
    let ring = site.ring(cell);
    let (first, last) = (vertex_of(site, cell, 0), vertex_of(site, cell, k));
    let fam = t.family();
    let mut acc = GradedMap::zero(ring, &fam[last], &fam[first], 2 - k as i32);
    let add = |acc: &mut GradedMap, m: GradedMap| *acc = acc.add(&m).expect("slot");
    if let Some(p) = t.phi.get(cell) {
        let dt = site.restrict(&t.diffs[first], &[first], cell);
        let ds = site.restrict(&t.diffs[last], &[last], cell);
        add(&mut acc, hom_differential(&dt, p, &ds).expect("shape").signed(k % 2 == 0));
    }
    for j in 1..k {
        let face = site.pull(&OrdinalMap::coface(k, j), cell);
        if let Some(p) = t.phi.get(&face) {
            add(&mut acc, site.restrict(p, &face, cell).signed(j % 2 == 0));
        }
    }
    for j in 1..k {
        let front = site.pull(&inclusion(0..=j, k), cell);
        let back = site.pull(&inclusion(j..=k, k), cell);
        if let (Some(x), Some(y)) = (t.phi.get(&front), t.phi.get(&back)) {
            let sign = ((1 - j as i64) * (k - j) as i64).rem_euclid(2) == 0;
            let term = site.restrict(x, &front, cell).compose(&site.restrict(y, &back, cell)).expect("composable");
            add(&mut acc, term.signed(sign));
        }
    }
    acc
}

/// Levels where some term of the residual can be nonzero.
fn residual_levels(phi: &Cochain) -> BTreeSet<usize> {
    let lv = phi.levels();
    let mut out: BTreeSet<usize> = lv.iter().flat_map(|a| [*a, a + 1]).collect();
    for a in &lv {
        for b in &lv {
            out.insert(a + b);
        }
    }
    out.into_iter().filter(|k| *k >= 1).collect()
}

/// Residual at every cell of every relevant level, the unit and degenerate
/// conditions along codegeneracies, and invertibility of `φ^{1,0}`.
pub fn mc_check_tot(t: &TotObject) -> McReport {
    let site = t.backend.site();
    let mut report = McReport { max_level: 2 * t.truncation_bound() + 1, ..McReport::default() };
    for (v, d) in t.diffs.iter().enumerate() {
        if !d.compose(d).map(|x| x.is_zero()).unwrap_or(false) {
            report.findings.push(Finding::NotAComplex { vertex: v });
        }
    }
    for k in residual_levels(&t.phi) {
        let cells = CellSite::cells(site, k);
        let found = par::filter_map(&cells, |c| {
            let r = tot_residual_at(t, c);
            (!r.is_zero()).then(|| Finding::Residual { cell: c.clone(), residual: r })
        });
        report.findings.extend(found);
    }
    for v in CellSite::cells(site, 0) {
        let c = site.pull(&OrdinalMap::codegeneracy(0, 0), &v);
        let id = GradedMap::identity(site.ring(&c), &t.family()[v[0]]);
        if t.phi.get(&c) != Some(&id) {
            report.findings.push(Finding::UnitViolated { cell: c });
        }
    }
    let mut degenerate = BTreeSet::new();
    for k in t.phi.levels().into_iter().filter(|k| *k >= 2) {
        for y in CellSite::cells(site, k - 1) {
            for i in 0..k {
                degenerate.insert(site.pull(&OrdinalMap::codegeneracy(k - 1, i), &y));
            }
        }
    }
    for c in degenerate {
        if t.phi.get(&c).is_some() {
            report.findings.push(Finding::DegenerateNonzero { cell: c });
        }
    }
    let edges = CellSite::cells(site, 1);
    let statuses = par::map(&edges, |c| {
        let (a, b) = (vertex_of(site, c, 0), vertex_of(site, c, 1));
        let dt = site.restrict(&t.diffs[a], &[a], c);
        let ds = site.restrict(&t.diffs[b], &[b], c);
        let f = t.phi.get(c).cloned().unwrap_or_else(|| GradedMap::zero(site.ring(c), ds.source(), dt.source(), 0));
        homotopy_invertible(&f, &ds, &dt)
    });
    for (c, st) in edges.into_iter().zip(statuses) {
        report.record_invertibility(c, st);
    }
    report
}

/// Differential of a morphism `θ : t → u`, computed level by level in `Δ_k`
/// at each `k`-cell and read off at the index `(0, …, k)`.
pub fn tot_mor_diff(t: &TotObject, u: &TotObject, theta: &Cochain) -> Result<Cochain> {
    if theta.source() != t.family() || theta.target() != u.family() {
        return Err(Error::Shape("morphism families do not match the objects".into()));
    }
    let site = t.backend.site();
    let lt = theta.levels();
    let lphi: BTreeSet<usize> = t.phi.levels().union(&u.phi.levels()).copied().collect();
    let mut levels: BTreeSet<usize> = lt.iter().flat_map(|a| [*a, a + 1]).collect();
    for a in &lt {
        for b in &lphi {
            levels.insert(a + b);
        }
    }
    let mut out = Cochain::zero(theta.degree() + 1, theta.source(), theta.target());
    for k in levels {
        let cells = CellSite::cells(site, k);
        let top: Cell = (0..=k).collect();
        let results = par::map(&cells, |c| -> Result<Option<(Cell, GradedMap)>> {
            let s = simplex_at(t, c)?;
            let r = simplex_at(u, c)?;
            let th = expand_morphism(t, u, theta, c)?;
            let a = cochain::with_differentials(s.phi(), &s.diffs());
            let b = cochain::with_differentials(r.phi(), &r.diffs());
            let m = cochain::mor_d_at(s.site(), &th, &a, &b, &top);
            Ok((!m.is_zero()).then(|| (c.clone(), m)))
        });
        for r in results {
            if let Some((c, m)) = r? {
                out.insert_unchecked(c, m);
            }
        }
    }
    Ok(out)
}

pub fn tot_to_twisted(t: &TotObject) -> Result<TwPerfComplex> {
    match &t.backend {
        CosimplicialBackend::Cech(s) => TwPerfComplex::new(s.cover.clone(), t.full()),
        CosimplicialBackend::Equivariant(_) => Err(Error::Unsupported("twisted complexes need a Čech backend".into())),
    }
}

pub fn twisted_to_tot(w: &TwPerfComplex) -> Result<TotObject> {
    let diffs: Vec<GradedMap> = (0..w.locals().len()).map(|i| w.differential(i)).collect();
    let phi = w.a().truncated(|p| p >= 1);
    TotObject::new(CosimplicialBackend::Cech(CechSite::new(Arc::clone(w.cover()))), diffs, phi)
}

/// Level `k` of a split source, read against its `k`-th matching object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingWitness {
    pub level: usize,
    /// Cells of the free part (nondegenerate `k`-cells).
    pub free: Vec<Cell>,
    /// One label per monotone surjection `[k] ↠ [n]`, `n < k`, with its factor size.
    pub factors: Vec<(OrdinalMap, usize)>,
    /// Equivalence classes of the matching diagram, each named by the cell it yields.
    pub classes: Vec<Cell>,
    /// The classes are exactly the degenerate `k`-cells, each hit once.
    pub bijective: bool,
}

impl MatchingWitness {
    /// The matching map forgets the free factor and keeps every class
    /// coordinate: a product projection, hence surjective on each hom component.
    pub fn is_projection(&self, all_cells: usize) -> bool {
        self.bijective && self.free.len() + self.classes.len() == all_cells
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Computes `M_k = lim_{[k] ↠ [n], n < k} X_n` on cells: pairs `(σ, c)` are glued
/// along `(ρσ, c') ~ (σ, ρ^* c')`, and each class is sent to `σ^* c`.
pub fn matching_witness<S: SimplicialSet + ?Sized>(s: &S, k: usize) -> Result<MatchingWitness> {
    let split = SplitDecomposition::compute(s, k)?;
    let level = split.level(k);
    let surj = matching_surjections(k);
    let mut ids: HashMap<(Vec<usize>, Cell), usize> = HashMap::new();
    let mut nodes: Vec<(OrdinalMap, Cell)> = Vec::new();
    for sigma in &surj {
        for c in s.cells(sigma.target()) {
            ids.insert((sigma.values().to_vec(), c.clone()), nodes.len());
            nodes.push((sigma.clone(), c));
        }
    }
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    for (sigma, _) in nodes.clone() {
        let n = sigma.target();
        for m in 0..n {
            for rho in OrdinalMap::all(n, m).into_iter().filter(|r| r.is_surjective()) {
                for c2 in s.cells(m) {
                    let a = ids[&(rho.compose(&sigma)?.values().to_vec(), c2.clone())];
                    let b = ids[&(sigma.values().to_vec(), s.pull(&rho, &c2))];
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                    }
                }
            }
        }
    }
    let mut class_cell: BTreeMap<usize, Cell> = BTreeMap::new();
    let mut consistent = true;
    for (i, (sigma, c)) in nodes.iter().enumerate() {
        let r = find(&mut parent, i);
        let image = s.pull(sigma, c);
        match class_cell.get(&r) {
            Some(prev) if *prev != image => consistent = false,
            Some(_) => {}
            None => {
                class_cell.insert(r, image);
            }
        }
    }
    let classes: Vec<Cell> = class_cell.into_values().collect();
    let distinct: BTreeSet<&Cell> = classes.iter().collect();
    let degenerate: BTreeSet<&Cell> =
        level.factors.iter().filter(|f| !f.sigma.is_identity()).map(|f| &f.image).collect();
    let bijective = consistent && distinct.len() == classes.len() && distinct == degenerate;
    let factors = surj
        .iter()
        .map(|sigma| (sigma.clone(), level.factors.iter().filter(|f| f.sigma == *sigma).count()))
        .collect();
    Ok(MatchingWitness { level: k, free: level.nondegenerate.clone(), factors, classes, bijective })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Ring;
    use crate::simplicial::{CechNerve, RingedCover};

    #[test]
    fn two_open_level_one() {
        let q = Ring::rationals();
        let cover = RingedCover::complete(2, &q).unwrap();
        let w = matching_witness(&CechNerve(&cover), 1).unwrap();
        assert_eq!(w.free, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(w.factors.len(), 1);
        assert_eq!(w.classes, vec![vec![0, 0], vec![1, 1]]);
        assert!(w.is_projection(4));
    }
}
