//! Deciding whether a closed degree-0 map between bounded free complexes is a
//! homotopy equivalence, via acyclicity of its mapping cone.
//!
//! Over a field this is a rank count. Over a Laurent ring the cone is acyclic
//! iff every weight slice is, when the data admits a basis grading; slices only
//! change inside the box spanned by the basis weights, so checking that box is
//! exhaustive. Data with no grading is specialized at rational points: a
//! non-acyclic specialization proves failure (bounded exact complexes of free
//! modules are split), otherwise the answer is inconclusive.

use std::collections::BTreeSet;

use crate::exactalg::weight::solve_potentials;
use crate::exactalg::{base_ring, Elem, GradedMap, GradedModule, Matrix, Ring, RingHom};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invertibility {
    Invertible,
    NotInvertible,
    /// No grading and every tried specialization was acyclic.
    Inconclusive,
}

/// Degree-`n` differential of `cone(f)`, `C^n = E^{n+1} ⊕ F^n`,
/// `d(e, y) = (−d_E e, f e + d_F y)`.
struct Cone {
    dims: Vec<usize>,
    /// Consecutive cone differentials, lowest degree first.
    diffs: Vec<Matrix>,
    /// Global node id of each basis vector of `C^{degrees[i]}`.
    nodes: Vec<Vec<usize>>,
}

fn cone(f: &GradedMap, d_src: &GradedMap, d_tgt: &GradedMap) -> Cone {
    let ring = f.ring();
    let e = f.source();
    let t = f.target();
    let lo = e.min_degree().map(|d| d - 1).into_iter().chain(t.min_degree()).min().unwrap_or(0);
    let hi = e.max_degree().map(|d| d - 1).into_iter().chain(t.max_degree()).max().unwrap_or(0);
    // node ids: E basis first (flattened), then F basis
    let e_total = e.total_rank();
    let e_node = |d: i32, i: usize| e.offset(d) + i;
    let f_node = |d: i32, i: usize| e_total + t.offset(d) + i;
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    let mut nodes = Vec::new();
    for n in lo - 1..=hi + 1 {
        let (ea, fa) = (e.rank(n + 1), t.rank(n));
        let (eb, fb) = (e.rank(n + 2), t.rank(n + 1));
        let de = d_src.block(n + 1).neg();
        let fm = f.block(n + 1);
        let dt = d_tgt.block(n);
        let m = Matrix::block(ring, &[eb, fb], &[ea, fa], &[vec![Some(&de), None], vec![Some(&fm), Some(&dt)]]);
        dims.push(ea + fa);
        diffs.push(m);
        nodes.push((0..ea).map(|i| e_node(n + 1, i)).chain((0..fa).map(|i| f_node(n, i))).collect());
    }
    Cone { dims, diffs, nodes }
}

fn field_acyclic(dims: &[usize], diffs: &[Matrix]) -> bool {
    let ranks: Vec<usize> = diffs.iter().map(|m| m.field_rank().expect("field matrix")).collect();
    (0..dims.len()).all(|i| {
        let incoming = if i == 0 { 0 } else { ranks[i - 1] };
        dims[i] == ranks[i] + incoming
    })
}

/// Monomial grading of the cone basis, if every entry is a single monomial.
fn grading(c: &Cone, ring: &Ring, total_nodes: usize) -> Option<Vec<Vec<i32>>> {
    let mut edges = Vec::new();
    for (i, m) in c.diffs.iter().enumerate() {
        let rows = c.nodes.get(i + 1).cloned().unwrap_or_default();
        for (r, col, e) in m.entries() {
            let terms = ring.terms(e);
            match terms.len() {
                0 => {}
                1 => edges.push((c.nodes[i][col], rows[r], terms[0].0.clone())),
                _ => return None,
            }
        }
    }
    solve_potentials(total_nodes, ring.nvars(), &edges)
}

fn allowed(ring: &Ring, exp: &[i32]) -> bool {
    exp.iter().enumerate().all(|(i, x)| !ring.is_polynomial_var(i) || *x >= 0)
}

fn slice_acyclic(c: &Cone, ring: &Ring, omega: &[Vec<i32>], w: &[i32]) -> bool {
    let base = base_ring(ring);
    let members: Vec<Vec<usize>> = c
        .nodes
        .iter()
        .map(|ns| {
            ns.iter()
                .enumerate()
                .filter(|(_, n)| {
                    let ex: Vec<i32> = w.iter().zip(&omega[**n]).map(|(a, b)| a - b).collect();
                    allowed(ring, &ex)
                })
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let dims: Vec<usize> = members.iter().map(Vec::len).collect();
    let mut diffs = Vec::new();
    for (i, m) in c.diffs.iter().enumerate() {
        let empty = Vec::new();
        let rows = members.get(i + 1).unwrap_or(&empty);
        let cols = &members[i];
        let mut s = Matrix::zeros(&base, rows.len(), cols.len());
        for (a, r) in rows.iter().enumerate() {
            for (b, col) in cols.iter().enumerate() {
                let nr = c.nodes[i + 1][*r];
                let nc = c.nodes[i][*col];
                let u: Vec<i32> = omega[nc].iter().zip(&omega[nr]).map(|(x, y)| x - y).collect();
                s.set(a, b, Elem::F(ring.coefficient(m.get(*r, *col), &u)));
            }
        }
        diffs.push(s);
    }
    field_acyclic(&dims, &diffs)
}

fn specializations(ring: &Ring) -> Vec<Vec<Elem>> {
    let base = base_ring(ring);
    let n = ring.nvars();
    let pts: Vec<Elem> = [1i64, 2, -1, 3, 5, -2, 7]
        .iter()
        .map(|v| base.from_i64(*v))
        .filter(|e| !base.is_zero(e))
        .collect();
    let mut out = Vec::new();
    for shift in 0..pts.len() {
        out.push((0..n).map(|i| pts[(shift + i) % pts.len()].clone()).collect());
    }
    out
}

/// Whether `f : (E, d_E) → (F, d_F)` (closed, degree 0) is a homotopy equivalence.
pub fn homotopy_invertible(f: &GradedMap, d_src: &GradedMap, d_tgt: &GradedMap) -> Invertibility {
    let ring = f.ring().clone();
    if f.source() == f.target() && *f == GradedMap::identity(&ring, f.source()) {
        return Invertibility::Invertible;
    }
    let c = cone(f, d_src, d_tgt);
    if ring.is_field() {
        return if field_acyclic(&c.dims, &c.diffs) {
            Invertibility::Invertible
        } else {
            Invertibility::NotInvertible
        };
    }
    let total_nodes = f.source().total_rank() + f.target().total_rank();
    if let Some(omega) = grading(&c, &ring, total_nodes) {
        let dim = ring.nvars();
        let mut lo = vec![0i32; dim];
        let mut hi = vec![0i32; dim];
        for (k, w) in omega.iter().enumerate() {
            for i in 0..dim {
                if k == 0 || w[i] < lo[i] {
                    lo[i] = w[i];
                }
                if k == 0 || w[i] > hi[i] {
                    hi[i] = w[i];
                }
            }
        }
        let mut boxes: BTreeSet<Vec<i32>> = BTreeSet::new();
        boxes.insert(Vec::new());
        for i in 0..dim {
            let range: Vec<i32> = if ring.is_polynomial_var(i) { (lo[i]..=hi[i]).collect() } else { vec![lo[i]] };
            boxes = boxes
                .into_iter()
                .flat_map(|b| {
                    range.iter().map(move |x| {
                        let mut v = b.clone();
                        v.push(*x);
                        v
                    })
                })
                .collect();
        }
        let ok = boxes.iter().all(|w| slice_acyclic(&c, &ring, &omega, w));
        return if ok { Invertibility::Invertible } else { Invertibility::NotInvertible };
    }
    let base = base_ring(&ring);
    for images in specializations(&ring) {
        let Ok(h) = RingHom::new(ring.clone(), base.clone(), images) else { continue };
        let diffs: Vec<Matrix> = c.diffs.iter().map(|m| m.apply_hom(&h).expect("ring matches")).collect();
        if !field_acyclic(&c.dims, &diffs) {
            return Invertibility::NotInvertible;
        }
    }
    Invertibility::Inconclusive
}

/// Accepts `(g, h, h')` with `f g − 1 = d h` and `g f − 1 = d h'`.
pub fn check_witness(
    f: &GradedMap,
    g: &GradedMap,
    h: &GradedMap,
    h_prime: &GradedMap,
    d_src: &GradedMap,
    d_tgt: &GradedMap,
) -> bool {
    let ring = f.ring();
    let fg = f.compose(g).and_then(|x| x.sub(&GradedMap::identity(ring, f.target())));
    let gf = g.compose(f).and_then(|x| x.sub(&GradedMap::identity(ring, f.source())));
    let dh = crate::exactalg::hom_differential(d_tgt, h, d_tgt);
    let dh2 = crate::exactalg::hom_differential(d_src, h_prime, d_src);
    matches!((fg, dh), (Ok(a), Ok(b)) if a == b) && matches!((gf, dh2), (Ok(a), Ok(b)) if a == b)
}

/// Cohomology dimensions of `(E, d)` over a field.
pub fn field_cohomology(module: &GradedModule, d: &GradedMap) -> Vec<(i32, usize)> {
    module
        .degrees()
        .map(|(n, r)| {
            let out = d.block(n).field_rank().expect("field");
            let inc = d.block(n - 1).field_rank().expect("field");
            (n, r - out - inc)
        })
        .collect()
}
