//! Bigraded cochains indexed by cells, with the three operations every
//! construction in the crate is assembled from: the inner-face differential,
//! the Hom-complex differential applied componentwise, and the split product.
//!
//! A component over a level-`p` cell maps the source module at the cell's last
//! vertex to the target module at its first vertex, with degree `|u| − p`.

pub mod site;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{hom_differential, GradedMap, GradedModule};
use crate::par;

pub use site::{ActionSite, CechSite, Cell, CellSite, NondecreasingSite};

pub type Family = Arc<Vec<GradedModule>>;

pub fn family(modules: Vec<GradedModule>) -> Family {
    Arc::new(modules)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: i32,
    source: Family,
    target: Family,
    comps: BTreeMap<Cell, GradedMap>,
}

/// True when `Hom^q(E_v, F_w)` vanishes for every pair of vertices.
fn degree_is_empty(source: &[GradedModule], target: &[GradedModule], q: i32) -> bool {
    source.iter().all(|s| target.iter().all(|t| GradedMap::space_is_zero(s, t, q)))
}

impl Cochain {
    pub fn zero(degree: i32, source: &Family, target: &Family) -> Self {
        Cochain { degree, source: source.clone(), target: target.clone(), comps: BTreeMap::new() }
    }

    /// The unit: identity in bidegree `(0, 0)` at every vertex.
    pub fn identity<S: CellSite + ?Sized>(site: &S, fam: &Family) -> Self {
        let mut c = Cochain::zero(0, fam, fam);
        for v in 0..site.vertex_count() {
            let cell = vec![v];
            let m = GradedMap::identity(site.ring(&cell), &fam[v]);
            if !m.is_zero() {
                c.comps.insert(cell, m);
            }
        }
        c
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn source(&self) -> &Family {
        &self.source
    }

    pub fn target(&self) -> &Family {
        &self.target
    }

    pub fn get(&self, cell: &[usize]) -> Option<&GradedMap> {
        self.comps.get(cell)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Cell, &GradedMap)> {
        self.comps.iter()
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Simplicial levels carrying a nonzero component.
    pub fn levels(&self) -> BTreeSet<usize> {
        self.comps.keys().map(|c| c.len() - 1).collect()
    }

    /// Only the components at simplicial level `p`.
    pub fn level_part(&self, p: usize) -> Cochain {
        let comps = self.comps.iter().filter(|(c, _)| c.len() == p + 1).map(|(c, m)| (c.clone(), m.clone())).collect();
        Cochain { comps, ..Cochain::zero(self.degree, &self.source, &self.target) }
    }

    /// Components at levels in `range`.
    pub fn truncated(&self, keep: impl Fn(usize) -> bool) -> Cochain {
        let comps = self.comps.iter().filter(|(c, _)| keep(c.len() - 1)).map(|(c, m)| (c.clone(), m.clone())).collect();
        Cochain { comps, ..Cochain::zero(self.degree, &self.source, &self.target) }
    }

    /// The shape a component at `cell` must have, as (source, target, degree).
    pub fn slot<S: CellSite + ?Sized>(&self, site: &S, cell: &[usize]) -> (GradedModule, GradedModule, i32) {
        (
            self.source[site.last(cell)].clone(),
            self.target[site.first(cell)].clone(),
            self.degree - site.level(cell) as i32,
        )
    }

    /// Inserts (or replaces) a component after checking cell, shape and ring.
    pub fn set<S: CellSite + ?Sized>(&mut self, site: &S, cell: &[usize], m: GradedMap) -> Result<()> {
        if !site.contains(cell) {
            return Err(Error::OutOfRange(format!("{cell:?} is not a cell of the site")));
        }
        let (s, t, q) = self.slot(site, cell);
        if *m.source() != s || *m.target() != t || m.degree() != q {
            return Err(Error::Shape(format!(
                "component at {cell:?} must be a degree-{q} map {s} -> {t}, got {}",
                m
            )));
        }
        if m.ring() != site.ring(cell) {
            return Err(Error::RingMismatch { expected: site.ring(cell).to_string(), found: m.ring().to_string() });
        }
        if m.is_zero() {
            self.comps.remove(cell);
        } else {
            self.comps.insert(cell.to_vec(), m);
        }
        Ok(())
    }

    pub(crate) fn insert_unchecked(&mut self, cell: Cell, m: GradedMap) {
        if m.is_zero() {
            self.comps.remove(&cell);
        } else {
            self.comps.insert(cell, m);
        }
    }

    pub fn remove(&mut self, cell: &[usize]) -> Option<GradedMap> {
        self.comps.remove(cell)
    }

    fn check_parallel(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.source != other.source || self.target != other.target {
            return Err(Error::Shape("cochains are not parallel".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_parallel(other)?;
        let mut out = self.clone();
        for (c, m) in &other.comps {
            let sum = match out.comps.get(c) {
                Some(a) => a.add(m)?,
                None => m.clone(),
            };
            out.insert_unchecked(c.clone(), sum);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Cochain {
        Cochain { comps: self.comps.iter().map(|(c, m)| (c.clone(), m.neg())).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.neg())
    }

    pub fn signed(&self, positive: bool) -> Cochain {
        if positive {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// First cell (in key order) where the two cochains differ.
    pub fn first_difference(&self, other: &Cochain) -> Option<Cell> {
        let keys: BTreeSet<&Cell> = self.comps.keys().chain(other.comps.keys()).collect();
        keys.into_iter().find(|k| self.comps.get(*k) != other.comps.get(*k)).cloned()
    }

    pub fn first_nonzero(&self) -> Option<(&Cell, &GradedMap)> {
        self.comps.iter().next()
    }

    pub fn map_components(&self, f: impl Fn(&Cell, &GradedMap) -> GradedMap) -> Cochain {
        let mut out = Cochain::zero(self.degree, &self.source, &self.target);
        for (c, m) in &self.comps {
            out.insert_unchecked(c.clone(), f(c, m));
        }
        out
    }
}

fn sign(odd: bool) -> bool {
    !odd
}

/// `(δu)_{c} = Σ_{j=1}^{p} (−1)^j u_{∂_j c}` over cells `c` of level `p + 1`,
/// each term restricted to the ring of `c`. The outer faces never appear.
pub fn delta<S: CellSite + ?Sized>(site: &S, u: &Cochain) -> Cochain {
    let mut out = Cochain::zero(u.degree + 1, &u.source, &u.target);
    for p in u.levels() {
        if p == 0 {
            continue;
        }
        let k = p + 1;
        let q = u.degree + 1 - k as i32;
        if degree_is_empty(&u.source, &u.target, q) {
            continue;
        }
        let cells = site.cells(k);
        let results = par::filter_map(&cells, |cell| delta_at(site, u, cell).map(|a| (cell.clone(), a)));
        for (c, m) in results {
            out.insert_unchecked(c, m);
        }
    }
    out
}

/// One component of `δu`, or `None` when it vanishes.
pub fn delta_at<S: CellSite + ?Sized>(site: &S, u: &Cochain, cell: &[usize]) -> Option<GradedMap> {
    let k = cell.len() - 1;
    let mut acc: Option<GradedMap> = None;
    for j in 1..k {
        let face = site.inner_face(cell, j);
        if let Some(m) = u.comps.get(&face) {
            let term = site.restrict(m, &face, cell).signed(j % 2 == 0);
            match &mut acc {
                None => acc = Some(term),
                Some(a) => a.add_assign_unchecked(&term),
            }
        }
    }
    acc.filter(|a| !a.is_zero())
}

/// Componentwise `(−1)^p d_B` where `d_B(f) = d_F ∘ f − (−1)^{|f|} f ∘ d_E`, using
/// the vertex differentials restricted to each cell.
pub fn hom_d<S: CellSite + ?Sized>(site: &S, u: &Cochain, d_source: &[GradedMap], d_target: &[GradedMap]) -> Cochain {
    let items: Vec<(&Cell, &GradedMap)> = u.comps.iter().collect();
    let results = par::filter_map(&items, |(cell, m)| {
        let (first, last) = (site.first(cell), site.last(cell));
        let dt = site.restrict(&d_target[first], &[first], cell);
        let ds = site.restrict(&d_source[last], &[last], cell);
        let v = hom_differential(&dt, m, &ds).expect("component shapes");
        let v = v.signed((cell.len() - 1) % 2 == 0);
        (!v.is_zero()).then(|| ((*cell).clone(), v))
    });
    let mut out = Cochain::zero(u.degree + 1, &u.source, &u.target);
    for (c, m) in results {
        out.insert_unchecked(c, m);
    }
    out
}

/// `(u·v)_c = Σ_l (−1)^{q r} u_{front(c,l)} ∘ v_{back(c,l)}` with `q = |u| − l` and
/// `r = k − l`, both factors restricted to the ring of `c`.
pub fn mul<S: CellSite + ?Sized>(site: &S, u: &Cochain, v: &Cochain) -> Result<Cochain> {
    if u.source != v.target {
        return Err(Error::Shape("product of cochains with incompatible families".into()));
    }
    let degree = u.degree + v.degree;
    let mut out = Cochain::zero(degree, &v.source, &u.target);
    let lu = u.levels();
    let lv = v.levels();
    let out_levels: BTreeSet<usize> = lu.iter().flat_map(|a| lv.iter().map(move |b| a + b)).collect();
    for k in out_levels {
        if degree_is_empty(&v.source, &u.target, degree - k as i32) {
            continue;
        }
        let cells = site.cells(k);
        let results = par::filter_map(&cells, |cell| mul_at(site, u, v, cell).map(|a| (cell.clone(), a)));
        for (c, m) in results {
            out.insert_unchecked(c, m);
        }
    }
    Ok(out)
}

/// One component of `u·v`, or `None` when it vanishes.
pub fn mul_at<S: CellSite + ?Sized>(site: &S, u: &Cochain, v: &Cochain, cell: &[usize]) -> Option<GradedMap> {
    let k = cell.len() - 1;
    let mut acc: Option<GradedMap> = None;
    for l in 0..=k {
        let front = site.front(cell, l);
        let Some(a) = u.comps.get(&front) else { continue };
        let back = site.back(cell, l);
        let Some(b) = v.comps.get(&back) else { continue };
        let a = site.restrict(a, &front, cell);
        let b = site.restrict(b, &back, cell);
        let q = u.degree - l as i32;
        let r = (k - l) as i32;
        let term = a.compose(&b).expect("composable components").signed(sign((q * r).rem_euclid(2) == 1));
        match &mut acc {
            None => acc = Some(term),
            Some(x) => x.add_assign_unchecked(&term),
        }
    }
    acc.filter(|a| !a.is_zero())
}

/// `D = (−1)^p d_B + δ`, the differential on cochains with values in a dg-category.
pub fn big_d<S: CellSite + ?Sized>(site: &S, u: &Cochain, d_source: &[GradedMap], d_target: &[GradedMap]) -> Cochain {
    hom_d(site, u, d_source, d_target).add(&delta(site, u)).expect("parallel cochains")
}

/// `δθ + b·θ − (−1)^m θ·a` where `a`, `b` are degree-1 cochains whose level-0
/// parts are the vertex differentials. Over any site this equals
/// `Dθ + b_{≥1}·θ − (−1)^m θ·a_{≥1}`.
pub fn mor_d<S: CellSite + ?Sized>(site: &S, theta: &Cochain, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    if theta.source != a.source || theta.target != b.source {
        return Err(Error::Shape("morphism families do not match the objects".into()));
    }
    let left = mul(site, b, theta)?;
    let right = mul(site, theta, a)?;
    delta(site, theta).add(&left)?.add(&right.signed(theta.degree.rem_euclid(2) == 1))
}

/// One component of [`mor_d`], zero when it vanishes.
pub fn mor_d_at<S: CellSite + ?Sized>(site: &S, theta: &Cochain, a: &Cochain, b: &Cochain, cell: &[usize]) -> GradedMap {
    let (s, t, q) = Cochain::zero(theta.degree + 1, &theta.source, &theta.target).slot(site, cell);
    let mut acc = GradedMap::zero(site.ring(cell), &s, &t, q);
    let odd = theta.degree.rem_euclid(2) == 1;
    for (term, positive) in [(delta_at(site, theta, cell), true), (mul_at(site, b, theta, cell), true), (mul_at(site, theta, a, cell), odd)] {
        if let Some(x) = term {
            acc.add_assign_unchecked(&x.signed(positive));
        }
    }
    acc
}

/// Adds vertex differentials as level-0 components of a level-≥1 cochain.
pub fn with_differentials(phi: &Cochain, diffs: &[GradedMap]) -> Cochain {
    let mut out = phi.clone();
    for (v, d) in diffs.iter().enumerate() {
        out.insert_unchecked(vec![v], d.clone());
    }
    out
}

/// The level-0 components of `a`, one per vertex (zero where absent).
pub fn vertex_parts<S: CellSite + ?Sized>(site: &S, a: &Cochain) -> Vec<GradedMap> {
    (0..site.vertex_count())
        .map(|v| {
            a.get(&[v]).cloned().unwrap_or_else(|| {
                GradedMap::zero(site.ring(&[v]), &a.source[v], &a.target[v], a.degree)
            })
        })
        .collect()
}
