//! Cohomology of Hom complexes between twisted complexes.
//!
//! Over fields the Hom complex in each total degree is finite-dimensional and
//! assembled directly. Over Laurent rings the data must be weight-homogeneous:
//! every restriction sends variables to monomials, every structure entry is a
//! monomial, and then each weight slice is a finite complex over the base
//! field. A classical alternating Čech complex for line bundles is provided as
//! an oracle written without the cochain engine.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::cochain::{CellSite, Cochain};
use crate::error::{Error, Result};
use crate::exactalg::weight::solve_potentials;
use crate::exactalg::{base_ring, Elem, GradedMap, GradedModule, Matrix, Ring, RingHom};
use crate::par;
use crate::simplicial::{IndexSet, RingedCover};
use crate::twisted::{line_bundle, tw_mor_diff, TwPerfComplex};

/// Integer matrix stored by columns: `cols[i]` is the image of unit vector `i`.
type IntMap = Vec<Vec<i32>>;

fn apply(l: &IntMap, dim: usize, u: &[i32]) -> Vec<i32> {
    let mut out = vec![0; dim];
    for (i, x) in u.iter().enumerate() {
        for (o, c) in out.iter_mut().zip(&l[i]) {
            *o += x * c;
        }
    }
    out
}

/// `L·A` where `A` has columns in the source coordinates of `L`.
fn compose(l: &IntMap, dim: usize, a: &IntMap) -> IntMap {
    a.iter().map(|col| apply(l, dim, col)).collect()
}

/// Inverse of a signed permutation, if `l` is one.
fn signed_perm_inverse(l: &IntMap, dim: usize) -> Option<IntMap> {
    if l.len() != dim {
        return None;
    }
    let mut inv = vec![vec![0; dim]; dim];
    let mut seen = vec![false; dim];
    for (i, col) in l.iter().enumerate() {
        let nz: Vec<(usize, i32)> = col.iter().copied().enumerate().filter(|(_, x)| *x != 0).collect();
        match nz.as_slice() {
            [(r, s)] if s.abs() == 1 && !seen[*r] => {
                seen[*r] = true;
                inv[*r][i] = *s;
            }
            _ => return None,
        }
    }
    Some(inv)
}

/// Exponent columns of a monomial ring map, or `None` if some image is not a monomial.
fn exponent_matrix(h: &RingHom) -> Option<IntMap> {
    let tgt = h.target();
    h.images()
        .iter()
        .map(|e| {
            let terms = tgt.terms(e);
            (terms.len() == 1).then(|| terms[0].0.clone())
        })
        .collect()
}

/// A grading of every ring of the cover by a common lattice `ℤ^dim`.
#[derive(Clone, Debug)]
pub struct RingWeights {
    pub dim: usize,
    maps: BTreeMap<IndexSet, IntMap>,
    inverses: BTreeMap<IndexSet, IntMap>,
}

impl RingWeights {
    pub fn compute(cover: &RingedCover) -> Result<Self> {
        let sets: Vec<IndexSet> = cover.nerve().cloned().collect();
        let ring = |s: &IndexSet| cover.ring_of_set(s).expect("nerve set");
        let dim = sets.iter().map(|s| ring(s).nvars()).max().unwrap_or(0);
        if sets.iter().any(|s| ring(s).nvars() != dim) {
            return Err(Error::Unsupported("weights need the same number of variables on every intersection".into()));
        }
        let mut maps: BTreeMap<IndexSet, IntMap> = BTreeMap::new();
        let identity: IntMap = (0..dim).map(|i| (0..dim).map(|j| i32::from(i == j)).collect()).collect();
        let covering: Vec<(IndexSet, IndexSet, IntMap)> = sets
            .iter()
            .flat_map(|s| sets.iter().filter(move |t| t.len() == s.len() + 1 && s.iter().all(|x| t.contains(x))).map(move |t| (s, t)))
            .map(|(s, t)| {
                exponent_matrix(cover.restriction(s, t))
                    .map(|a| (s.clone(), t.clone(), a))
                    .ok_or_else(|| Error::Unsupported(format!("restriction {s:?} ⊂ {t:?} is not monomial")))
            })
            .collect::<Result<_>>()?;
        let mut order = sets.clone();
        order.sort_by_key(|s| std::cmp::Reverse(s.len()));
        for seed in &order {
            if maps.contains_key(seed) {
                continue;
            }
            maps.insert(seed.clone(), identity.clone());
            let mut changed = true;
            while changed {
                changed = false;
                for (s, t, a) in &covering {
                    match (maps.get(s).cloned(), maps.get(t).cloned()) {
                        (None, Some(lt)) => {
                            maps.insert(s.clone(), compose(&lt, dim, a));
                            changed = true;
                        }
                        (Some(ls), None) => {
                            let inv = signed_perm_inverse(a, dim)
                                .ok_or_else(|| Error::Unsupported(format!("cannot lift weights along {s:?} ⊂ {t:?}")))?;
                            maps.insert(t.clone(), compose(&ls, dim, &inv));
                            changed = true;
                        }
                        (Some(ls), Some(lt)) if compose(&lt, dim, a) != ls => {
                            return Err(Error::Unsupported(format!("restrictions {s:?} ⊂ {t:?} admit no common grading")));
                        }
                        _ => {}
                    }
                }
            }
        }
        let inverses = maps
            .iter()
            .map(|(s, l)| {
                signed_perm_inverse(l, dim)
                    .map(|i| (s.clone(), i))
                    .ok_or_else(|| Error::Unsupported(format!("grading on {s:?} is not invertible")))
            })
            .collect::<Result<_>>()?;
        Ok(RingWeights { dim, maps, inverses })
    }

    /// Weight of the monomial `x^u` in the ring over `tuple`.
    pub fn weight(&self, tuple: &[usize], u: &[i32]) -> Vec<i32> {
        let s = crate::simplicial::underlying_set(tuple);
        apply(&self.maps[&s], self.dim, u)
    }

    /// The unique exponent of weight `w` over `tuple`.
    pub fn exponent(&self, tuple: &[usize], w: &[i32]) -> Vec<i32> {
        let s = crate::simplicial::underlying_set(tuple);
        apply(&self.inverses[&s], self.dim, w)
    }
}

/// Shifts `ω` on the basis of each local module making every entry of `a`
/// weight-homogeneous of weight 0. Keyed by `(open, degree)`.
pub fn basis_weights(t: &TwPerfComplex, rw: &RingWeights) -> Result<BTreeMap<(usize, i32), Vec<Vec<i32>>>> {
    let locals = t.locals();
    let mut offsets = BTreeMap::new();
    let mut total = 0;
    for (i, m) in locals.iter().enumerate() {
        for (d, r) in m.degrees() {
            offsets.insert((i, d), total);
            total += r;
        }
    }
    let site = t.site();
    let mut edges = Vec::new();
    for (cell, m) in t.a().components() {
        let (first, last) = (cell[0], *cell.last().unwrap());
        let ring = site.ring(cell);
        for (d, b) in m.blocks() {
            let q = m.degree();
            for (r, c, e) in b.entries() {
                let terms = ring.terms(e);
                if terms.is_empty() {
                    continue;
                }
                if terms.len() != 1 {
                    return Err(Error::Unsupported(format!("entry at {cell:?} is not a monomial")));
                }
                let cn = offsets[&(last, d)] + c;
                let rn = offsets[&(first, d + q)] + r;
                edges.push((cn, rn, rw.weight(cell, &terms[0].0)));
            }
        }
    }
    let omega = solve_potentials(total, rw.dim, &edges)
        .ok_or_else(|| Error::Unsupported("structure maps admit no weight grading".into()))?;
    Ok(offsets
        .into_iter()
        .map(|((i, d), off)| ((i, d), omega[off..off + locals[i].rank(d)].to_vec()))
        .collect())
}

/// One coordinate of `Hom^m(E, F)` in a weight slice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Slot {
    cell: Vec<usize>,
    degree: i32,
    row: usize,
    col: usize,
}

/// Per weight, the finite complex `Hom^m_w → Hom^{m+1}_w` over the base field.
#[derive(Clone, Debug)]
pub struct AssembledComplex {
    pub base: Ring,
    pub degrees: RangeInclusive<i32>,
    pub slices: Vec<WeightSlice>,
}

#[derive(Clone, Debug)]
pub struct WeightSlice {
    pub weight: Vec<i32>,
    /// `dims[m]` for `m` from one below to one above the requested range.
    pub dims: BTreeMap<i32, usize>,
    /// `diffs[m] : Hom^m_w → Hom^{m+1}_w`.
    pub diffs: BTreeMap<i32, Matrix>,
}

struct HomSpace<'a> {
    src: &'a TwPerfComplex,
    tgt: &'a TwPerfComplex,
    rw: RingWeights,
    ws: BTreeMap<(usize, i32), Vec<Vec<i32>>>,
    wt: BTreeMap<(usize, i32), Vec<Vec<i32>>>,
    qrange: Option<(i32, i32)>,
}

impl HomSpace<'_> {
    fn slots(&self, m: i32, w: &[i32]) -> Vec<(Slot, Vec<i32>)> {
        let Some((qlo, qhi)) = self.qrange else { return Vec::new() };
        let site = self.src.site();
        let mut out = Vec::new();
        for q in qlo..=qhi {
            let p = m - q;
            if p < 0 {
                continue;
            }
            for cell in site.cells(p as usize) {
                let (first, last) = (cell[0], *cell.last().unwrap());
                let ring = site.ring(&cell);
                for (d, cs) in self.src.locals()[last].degrees() {
                    let rt = self.tgt.locals()[first].rank(d + q);
                    for r in 0..rt {
                        for c in 0..cs {
                            let shift: Vec<i32> = (0..self.rw.dim)
                                .map(|i| w[i] - self.wt[&(first, d + q)][r][i] + self.ws[&(last, d)][c][i])
                                .collect();
                            let u = self.rw.exponent(&cell, &shift);
                            if u.iter().enumerate().all(|(i, x)| !ring.is_polynomial_var(i) || *x >= 0) {
                                out.push((Slot { cell: cell.clone(), degree: d, row: r, col: c }, u));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    fn basis_cochain(&self, m: i32, slot: &Slot, u: &[i32]) -> Cochain {
        let site = self.src.site();
        let ring = site.ring(&slot.cell);
        let (first, last) = (slot.cell[0], *slot.cell.last().unwrap());
        let q = m - (slot.cell.len() as i32 - 1);
        let (s, t) = (&self.src.locals()[last], &self.tgt.locals()[first]);
        let mut b = Matrix::zeros(ring, t.rank(slot.degree + q), s.rank(slot.degree));
        let one = ring.base().one();
        let x = if ring.is_field() { ring.constant(one) } else { ring.monomial(one, u.to_vec()).expect("allowed exponent") };
        b.set(slot.row, slot.col, x);
        let g = GradedMap::from_blocks(ring, s, t, q, [(slot.degree, b)]).expect("slot shape");
        let mut c = Cochain::zero(m, self.src.locals(), self.tgt.locals());
        c.set(site, &slot.cell, g).expect("slot");
        c
    }

    fn differential(&self, m: i32, w: &[i32], rows: &[(Slot, Vec<i32>)], cols: &[(Slot, Vec<i32>)]) -> Result<Matrix> {
        let base = base_ring(self.src.site().ring(&[0]));
        let index: HashMap<&Slot, usize> = rows.iter().enumerate().map(|(i, (s, _))| (s, i)).collect();
        let columns = par::map(cols, |(slot, u)| -> Result<Vec<(usize, Elem)>> {
            let x = self.basis_cochain(m, slot, u);
            let dx = tw_mor_diff(self.src, self.tgt, &x)?;
            let mut col = Vec::new();
            for (cell, g) in dx.components() {
                let ring = self.src.site().ring(cell);
                for (d, b) in g.blocks() {
                    for (r, c, e) in b.entries() {
                        let key = Slot { cell: cell.clone(), degree: d, row: r, col: c };
                        for (exp, coeff) in ring.terms(e) {
                            match index.get(&key) {
                                Some(i) if rows[*i].1 == exp => col.push((*i, Elem::F(coeff))),
                                _ => {
                                    return Err(Error::Invariant(format!(
                                        "differential leaves weight {w:?} at {cell:?}"
                                    )))
                                }
                            }
                        }
                    }
                }
            }
            Ok(col)
        });
        let mut mat = Matrix::zeros(&base, rows.len(), cols.len());
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col? {
                mat.set(i, j, v);
            }
        }
        Ok(mat)
    }
}

/// Range of Hom-degrees `q` with `Hom^q(E_i, F_j)` possibly nonzero.
fn q_range(src: &[GradedModule], tgt: &[GradedModule]) -> Option<(i32, i32)> {
    let lo = |ms: &[GradedModule]| ms.iter().filter_map(|m| m.min_degree()).min();
    let hi = |ms: &[GradedModule]| ms.iter().filter_map(|m| m.max_degree()).max();
    Some((lo(tgt)? - hi(src)?, hi(tgt)? - lo(src)?))
}

/// Largest absolute exponent appearing in the structure maps of either object.
pub fn max_exponent(objects: &[&TwPerfComplex]) -> i32 {
    objects
        .iter()
        .flat_map(|t| t.a().components().map(|(_, m)| m.support()).collect::<Vec<_>>())
        .flatten()
        .flat_map(|e| e.into_iter())
        .map(i32::abs)
        .max()
        .unwrap_or(0)
}

/// `|w| ≤ 2·(max exponent) + 4` in every coordinate.
pub fn default_window(objects: &[&TwPerfComplex]) -> i32 {
    2 * max_exponent(objects) + 4
}

fn weight_box(dim: usize, radius: i32) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out.into_iter().flat_map(|w| (-radius..=radius).map(move |x| [w.clone(), vec![x]].concat())).collect();
    }
    out
}

pub fn assemble_hom(src: &TwPerfComplex, tgt: &TwPerfComplex, degrees: RangeInclusive<i32>, window: i32) -> Result<AssembledComplex> {
    if !Arc::ptr_eq(src.cover(), tgt.cover()) {
        return Err(Error::Shape("Hom needs both objects on the same cover".into()));
    }
    let rw = RingWeights::compute(src.cover())?;
    let ws = basis_weights(src, &rw)?;
    let wt = basis_weights(tgt, &rw)?;
    let qrange = q_range(src.locals(), tgt.locals());
    let space = HomSpace { src, tgt, rw, ws, wt, qrange };
    let base = base_ring(src.site().ring(&[0]));
    let (lo, hi) = (*degrees.start(), *degrees.end());
    let mut slices = Vec::new();
    for w in weight_box(space.rw.dim, window) {
        let bases: BTreeMap<i32, Vec<(Slot, Vec<i32>)>> = (lo - 1..=hi + 1).map(|m| (m, space.slots(m, &w))).collect();
        let mut diffs = BTreeMap::new();
        for m in lo - 1..=hi {
            diffs.insert(m, space.differential(m, &w, &bases[&(m + 1)], &bases[&m])?);
        }
        let dims = bases.iter().map(|(m, b)| (*m, b.len())).collect();
        slices.push(WeightSlice { weight: w, dims, diffs });
    }
    Ok(AssembledComplex { base, degrees, slices })
}

/// Dimensions per `(degree, weight)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CohomologyReport {
    pub entries: BTreeMap<(i32, Vec<i32>), usize>,
    pub window: i32,
}

impl CohomologyReport {
    pub fn total(&self, m: i32) -> usize {
        self.entries.iter().filter(|((d, _), _)| *d == m).map(|(_, v)| v).sum()
    }

    /// Nonzero entries only.
    pub fn nonzero(&self) -> impl Iterator<Item = (i32, &Vec<i32>, usize)> {
        self.entries.iter().filter(|(_, v)| **v > 0).map(|((m, w), v)| (*m, w, *v))
    }
}

fn slice_cohomology(dims: &BTreeMap<i32, usize>, diffs: &BTreeMap<i32, Matrix>, m: i32) -> Result<usize> {
    let out = diffs[&m].field_rank()?;
    let inc = diffs[&(m - 1)].field_rank()?;
    Ok(dims[&m] - out - inc)
}

pub fn cohomology_dims(c: &AssembledComplex, window: i32) -> Result<CohomologyReport> {
    let mut entries = BTreeMap::new();
    for s in &c.slices {
        for m in c.degrees.clone() {
            entries.insert((m, s.weight.clone()), slice_cohomology(&s.dims, &s.diffs, m)?);
        }
    }
    Ok(CohomologyReport { entries, window })
}

/// `Hom` cohomology in the given degrees with the default window unless one is given.
pub fn hom_cohomology(
    src: &TwPerfComplex,
    tgt: &TwPerfComplex,
    degrees: RangeInclusive<i32>,
    window: Option<i32>,
) -> Result<CohomologyReport> {
    let w = window.unwrap_or_else(|| default_window(&[src, tgt]));
    cohomology_dims(&assemble_hom(src, tgt, degrees, w)?, w)
}

/// Classical Čech cohomology of a line bundle with transition units
/// `g_{ij}` (`s_i = g_{ij} s_j`), per weight, using increasing tuples and the
/// full alternating differential.
pub fn cech_oracle(
    cover: &RingedCover,
    units: &BTreeMap<(usize, usize), Elem>,
    degrees: RangeInclusive<i32>,
    window: i32,
) -> Result<CohomologyReport> {
    let n = cover.len();
    let rw = RingWeights::compute(cover)?;
    let g = |i: usize, j: usize| -> Result<Elem> {
        let ring = cover.ring(&[i, j]);
        if i == j {
            return Ok(ring.one());
        }
        if let Some(u) = units.get(&(i, j)) {
            return Ok(u.clone());
        }
        let u = units.get(&(j, i)).ok_or_else(|| Error::InvalidCover(format!("no transition for ({i},{j})")))?;
        ring.inv(u).ok_or_else(|| Error::NotAUnit(ring.fmt_elem(u)))
    };
    // ω_j − ω_i = weight(g_ij)
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if cover.in_nerve(&[i, j]) {
                let terms = cover.ring(&[i, j]).terms(&g(i, j)?);
                if terms.len() != 1 {
                    return Err(Error::Unsupported("transition is not a monomial".into()));
                }
                edges.push((j, i, rw.weight(&[i, j], &terms[0].0)));
            }
        }
    }
    let omega = solve_potentials(n, rw.dim, &edges).ok_or_else(|| Error::Invariant("cocycle has no grading".into()))?;
    let increasing = |p: usize| -> Vec<Vec<usize>> {
        cover.nerve().filter(|s| s.len() == p + 1).cloned().collect()
    };
    let base = base_ring(cover.ring(&[0]));
    let (lo, hi) = (*degrees.start(), *degrees.end());
    let mut entries = BTreeMap::new();
    for w in weight_box(rw.dim, window) {
        // C^p_w: one monomial per increasing tuple, when allowed
        let basis = |p: i32| -> Vec<(Vec<usize>, Vec<i32>)> {
            if p < 0 {
                return Vec::new();
            }
            increasing(p as usize)
                .into_iter()
                .filter_map(|s| {
                    let shift: Vec<i32> = w.iter().zip(&omega[s[0]]).map(|(a, b)| a - b).collect();
                    let u = rw.exponent(&s, &shift);
                    let ring = cover.ring(&s);
                    u.iter().enumerate().all(|(i, x)| !ring.is_polynomial_var(i) || *x >= 0).then_some((s, u))
                })
                .collect()
        };
        let mut spaces = BTreeMap::new();
        for p in lo - 1..=hi + 1 {
            spaces.insert(p, basis(p));
        }
        let mut ranks = BTreeMap::new();
        for p in lo - 1..=hi {
            let (src, dst) = (&spaces[&p], &spaces[&(p + 1)]);
            let mut mat = Matrix::zeros(&base, dst.len(), src.len());
            for (j, (s, u)) in src.iter().enumerate() {
                let rs = cover.ring(s);
                let x = if rs.is_field() { rs.one() } else { rs.monomial(rs.base().one(), u.clone())? };
                for (i, (t, v)) in dst.iter().enumerate() {
                    // s is the face of t omitting position k
                    let Some(k) = (0..t.len()).find(|k| {
                        let mut f = t.clone();
                        f.remove(*k);
                        f == *s
                    }) else {
                        continue;
                    };
                    let rt = cover.ring(t);
                    let mut y = cover.restriction(s, t).apply(&x);
                    if k == 0 {
                        y = rt.mul(&cover.restriction(&[t[0], t[1]], t).apply(&g(t[0], t[1])?), &y);
                    }
                    if k % 2 == 1 {
                        y = rt.neg(&y);
                    }
                    mat.set(i, j, Elem::F(rt.coefficient(&y, if rt.is_field() { &[] } else { v })));
                }
            }
            ranks.insert(p, mat.field_rank()?);
        }
        for p in lo..=hi {
            entries.insert((p, w.clone()), spaces[&p].len() - ranks[&p] - ranks[&(p - 1)]);
        }
    }
    Ok(CohomologyReport { entries, window })
}

/// `ℙ¹` with `U_0 = Spec ℚ[t]`, `U_1 = Spec ℚ[s]`, `U_{01} = Spec ℚ[t, t⁻¹]`, `s ↦ t⁻¹`.
pub fn projective_line() -> Arc<RingedCover> {
    let r0: Ring = "Q[t]".parse().expect("ring");
    let r1: Ring = "Q[s]".parse().expect("ring");
    let r01: Ring = "Q[t,t^-1]".parse().expect("ring");
    let base = r01.base();
    let t = r01.monomial(base.one(), vec![1]).expect("t");
    let tinv = r01.monomial(base.one(), vec![-1]).expect("t^-1");
    let h0 = RingHom::new(r0.clone(), r01.clone(), vec![t]).expect("t ↦ t");
    let h1 = RingHom::new(r1.clone(), r01.clone(), vec![tinv]).expect("s ↦ t^-1");
    let rings = [(vec![0], r0), (vec![1], r1), (vec![0, 1], r01)].into();
    Arc::new(
        RingedCover::new(
            vec!["U0".into(), "U1".into()],
            vec![vec![0], vec![1], vec![0, 1]],
            rings,
            vec![(vec![0], vec![0, 1], h0), (vec![1], vec![0, 1], h1)],
        )
        .expect("ℙ¹ cover"),
    )
}

/// Transition data of `O(n)`: `g_{01} = tⁿ`.
pub fn p1_units(cover: &RingedCover, n: i32) -> BTreeMap<(usize, usize), Elem> {
    let r = cover.ring(&[0, 1]);
    [((0, 1), r.monomial(r.base().one(), vec![n]).expect("monomial"))].into()
}

pub fn p1_line_bundle(cover: &Arc<RingedCover>, n: i32) -> TwPerfComplex {
    line_bundle(cover.clone(), &p1_units(cover, n)).expect("tⁿ is a unit")
}
