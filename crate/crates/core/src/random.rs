//! Seeded generators for property tests, the self-test command and benches.
//!
//! Valid objects come from gauge transformations of constant ones:
//! `a' = g·a·g⁻¹ − (δg)·g⁻¹` for an invertible degree-0 cochain `g`, which
//! preserves the Maurer–Cartan equation exactly. Higher parts of `g` vanish on
//! degenerate cells so normalization survives.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::cochain::{self, family, ActionSite, CechSite, CellSite, Cochain, Family, NondecreasingSite};
use crate::dgresolution::{ComplexObj, SimplexObj};
use crate::equivariant::EquivariantComplex;
use crate::error::{Error, Result};
use crate::exactalg::{Elem, GradedMap, GradedModule, Matrix, Ring, RingHom};
use crate::simplicial::{Group, GroupAction, IndexSet, RingedCover};
use crate::twisted::TwPerfComplex;

/// The three coefficient backends exercised by the property suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Rationals,
    F101,
    Laurent,
}

impl Backend {
    pub const ALL: [Backend; 3] = [Backend::Rationals, Backend::F101, Backend::Laurent];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Rationals => "Q",
            Backend::F101 => "F101",
            Backend::Laurent => "Q[t,t^-1]",
        }
    }

    pub fn ring(self) -> Ring {
        match self {
            Backend::Rationals => Ring::rationals(),
            Backend::F101 => Ring::prime_field(101).expect("101 is prime"),
            Backend::Laurent => "Q[t,t^-1]".parse().expect("ring"),
        }
    }
}

/// Size knobs shared by all generators.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    pub max_opens: usize,
    /// Number of consecutive degrees a module may occupy.
    pub amplitude: usize,
    pub max_rank: usize,
    /// Probability that an entry of a random map is nonzero.
    pub density: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params { max_opens: 4, amplitude: 3, max_rank: 2, density: 0.5 }
    }
}

fn coeff<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    let c = rng.gen_range(1..=4);
    if rng.gen_bool(0.5) {
        -c
    } else {
        c
    }
}

/// A small element with at most two monomials.
pub fn random_elem<R: Rng + ?Sized>(rng: &mut R, ring: &Ring) -> Elem {
    if ring.is_field() {
        return ring.from_i64(coeff(rng));
    }
    let mut acc = ring.zero();
    for _ in 0..rng.gen_range(1..=2) {
        let exps = (0..ring.nvars())
            .map(|i| if ring.is_polynomial_var(i) { rng.gen_range(0..=2) } else { rng.gen_range(-2..=2) })
            .collect();
        let m = ring.monomial(ring.base().from_i64(coeff(rng)), exps).expect("exponents in range");
        acc = ring.add(&acc, &m);
    }
    acc
}

/// A unit: nonzero constant times a Laurent monomial.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, ring: &Ring) -> Elem {
    if ring.is_field() {
        return ring.from_i64(coeff(rng));
    }
    let exps = (0..ring.nvars())
        .map(|i| if ring.is_polynomial_var(i) { 0 } else { rng.gen_range(-2..=2) })
        .collect();
    ring.monomial(ring.base().from_i64(coeff(rng)), exps).expect("exponents in range")
}

pub fn random_module<R: Rng + ?Sized>(rng: &mut R, p: &Params) -> GradedModule {
    let lo = rng.gen_range(-1..=0);
    loop {
        let m = GradedModule::new((0..p.amplitude as i32).map(|i| (lo + i, rng.gen_range(0..=p.max_rank))));
        if !m.is_zero() {
            return m;
        }
    }
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, ring: &Ring, rows: usize, cols: usize, density: f64) -> Matrix {
    let mut m = Matrix::zeros(ring, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(density) {
                m.set(i, j, random_elem(rng, ring));
            }
        }
    }
    m
}

pub fn random_map<R: Rng + ?Sized>(
    rng: &mut R,
    ring: &Ring,
    src: &GradedModule,
    tgt: &GradedModule,
    degree: i32,
    density: f64,
) -> GradedMap {
    let blocks: Vec<(i32, Matrix)> = src
        .degrees()
        .filter(|(d, _)| tgt.rank(d + degree) > 0)
        .map(|(d, r)| (d, random_matrix(rng, ring, tgt.rank(d + degree), r, density)))
        .collect();
    GradedMap::from_blocks(ring, src, tgt, degree, blocks).expect("block shapes")
}

/// A differential in normal form: in each degree the first basis vectors span
/// the image from below and some of the rest map onto new basis vectors above.
pub fn standard_differential<R: Rng + ?Sized>(rng: &mut R, ring: &Ring, m: &GradedModule) -> GradedMap {
    let mut used = 0;
    let mut blocks = Vec::new();
    let degs: Vec<(i32, usize)> = m.degrees().collect();
    for (d, r) in degs {
        let above = m.rank(d + 1);
        let free = r - used;
        let k = rng.gen_range(0..=free.min(above));
        if k > 0 {
            let mut b = Matrix::zeros(ring, above, r);
            for i in 0..k {
                b.set(i, used + i, ring.one());
            }
            blocks.push((d, b));
        }
        used = k;
    }
    GradedMap::from_blocks(ring, m, m, 1, blocks).expect("block shapes")
}

/// A random complex: a normal-form differential conjugated by a random
/// invertible matrix in each degree.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, ring: &Ring, m: &GradedModule) -> ComplexObj {
    let d = standard_differential(rng, ring, m);
    let (g, gi) = random_automorphism(rng, ring, m, 0.5);
    let d = g.compose(&d).and_then(|x| x.compose(&gi)).expect("shapes");
    ComplexObj::new(d).expect("conjugate of a differential")
}

/// `N ↦ Σ (−N)^k` for nilpotent `N`.
fn unipotent_inverse(m: &Matrix) -> Matrix {
    let ring = m.ring();
    let n = m.rows();
    let nil = m.sub(&Matrix::identity(ring, n)).expect("square");
    let mut term = Matrix::identity(ring, n);
    let mut acc = term.clone();
    for _ in 0..n {
        term = term.mul(&nil).expect("square").neg();
        acc = acc.add(&term).expect("square");
    }
    acc
}

/// `(I + U)(I + L)` with `U` strictly upper (ring entries) and `L` strictly
/// lower (constants), together with its inverse.
pub fn random_automorphism<R: Rng + ?Sized>(rng: &mut R, ring: &Ring, m: &GradedModule, density: f64) -> (GradedMap, GradedMap) {
    let mut fwd = Vec::new();
    let mut inv = Vec::new();
    for (d, r) in m.degrees() {
        let mut u = Matrix::identity(ring, r);
        let mut l = Matrix::identity(ring, r);
        for i in 0..r {
            for j in 0..r {
                if i < j && rng.gen_bool(density) {
                    u.set(i, j, random_elem(rng, ring));
                }
                if i > j && rng.gen_bool(density) {
                    l.set(i, j, ring.from_i64(coeff(rng)));
                }
            }
        }
        fwd.push((d, u.mul(&l).expect("square")));
        inv.push((d, unipotent_inverse(&l).mul(&unipotent_inverse(&u)).expect("square")));
    }
    (
        GradedMap::from_blocks(ring, m, m, 0, fwd).expect("shapes"),
        GradedMap::from_blocks(ring, m, m, 0, inv).expect("shapes"),
    )
}

/// Tuples with a repeated adjacent index.
pub fn has_adjacent_repeat(cell: &[usize]) -> bool {
    cell.windows(2).any(|w| w[0] == w[1])
}

/// The constant object: one complex `(M, d)` at every vertex, identity along
/// every level-1 cell, nothing above.
pub fn constant_full<S: CellSite + ?Sized>(site: &S, m: &GradedModule, d: &GradedMap) -> Cochain {
    let fam = family(vec![m.clone(); site.vertex_count()]);
    let mut a = Cochain::zero(1, &fam, &fam);
    let base = d.ring().clone();
    for c in site.cells(0) {
        let lifted = lift(d, &base, site.ring(&c));
        a.set(site, &c, lifted).expect("vertex slot");
    }
    for c in site.cells(1) {
        a.set(site, &c, GradedMap::identity(site.ring(&c), m)).expect("edge slot");
    }
    a
}

fn lift(f: &GradedMap, from: &Ring, to: &Ring) -> GradedMap {
    if from == to {
        return f.clone();
    }
    let h = RingHom::from_base(from, to).expect("base embeds");
    f.apply_hom(&h).expect("base embeds")
}

/// A random invertible degree-0 cochain over `fam → fam` and its inverse.
/// Components above level 0 sit on nondegenerate cells only.
pub fn random_gauge<S: CellSite + ?Sized, R: Rng + ?Sized>(
    rng: &mut R,
    site: &S,
    fam: &Family,
    degenerate: &dyn Fn(&[usize]) -> bool,
    max_level: usize,
    density: f64,
) -> Result<(Cochain, Cochain)> {
    let mut g0 = Cochain::zero(0, fam, fam);
    let mut g0inv = Cochain::zero(0, fam, fam);
    for c in site.cells(0) {
        let (f, i) = random_automorphism(rng, site.ring(&c), &fam[c[0]], density);
        g0.set(site, &c, f)?;
        g0inv.set(site, &c, i)?;
    }
    let mut higher = Cochain::zero(0, fam, fam);
    for k in 1..=max_level {
        for c in site.cells(k) {
            if degenerate(&c) || !rng.gen_bool(density) {
                continue;
            }
            let (s, t) = (&fam[site.last(&c)], &fam[site.first(&c)]);
            if GradedMap::space_is_zero(s, t, -(k as i32)) {
                continue;
            }
            higher.set(site, &c, random_map(rng, site.ring(&c), s, t, -(k as i32), density))?;
        }
    }
    let g = g0.add(&higher)?;
    // (g0 + n)⁻¹ = Σ (−g0⁻¹ n)^j g0⁻¹
    let x = cochain::mul(site, &g0inv, &higher)?;
    let mut term = g0inv.clone();
    let mut inv = g0inv;
    for _ in 0..64 {
        term = cochain::mul(site, &x, &term)?.neg();
        if term.is_zero() {
            return Ok((g, inv));
        }
        inv = inv.add(&term)?;
    }
    Err(Error::Invariant("gauge inverse series did not terminate".into()))
}

/// `g·a·g⁻¹ − (δg)·g⁻¹`.
pub fn gauge_transform<S: CellSite + ?Sized>(site: &S, a: &Cochain, g: &Cochain, ginv: &Cochain) -> Result<Cochain> {
    let conj = cochain::mul(site, &cochain::mul(site, g, a)?, ginv)?;
    let shift = cochain::mul(site, &cochain::delta(site, g), ginv)?;
    conj.sub(&shift)
}

/// A valid full structure `a` on `site` obtained by gauging a constant object.
pub fn random_structure<S: CellSite + ?Sized, R: Rng + ?Sized>(
    rng: &mut R,
    site: &S,
    base: &Ring,
    m: &GradedModule,
    degenerate: &dyn Fn(&[usize]) -> bool,
    density: f64,
) -> Result<Cochain> {
    let d = standard_differential(rng, base, m);
    let a = constant_full(site, m, &d);
    let levels = m.max_degree().zip(m.min_degree()).map_or(0, |(hi, lo)| (hi - lo) as usize + 1);
    let (g, gi) = random_gauge(rng, site, a.source(), degenerate, levels, density)?;
    gauge_transform(site, &a, &g, &gi)
}

/// A random cover with at most `max_opens` opens. Field backends use one ring
/// throughout; the Laurent backend glues copies of `Q[t]` or `Q[t,t^-1]`
/// along `t ↦ t^{±1}` so restrictions are monomial.
pub fn random_cover<R: Rng + ?Sized>(rng: &mut R, backend: Backend, max_opens: usize) -> Arc<RingedCover> {
    let n = rng.gen_range(1..=max_opens.max(1));
    cover_with_opens(rng, backend, n, 0.75)
}

/// A cover with exactly `n` opens; each admissible intersection is kept with
/// probability `keep` (1.0 gives the complete nerve).
pub fn cover_with_opens<R: Rng + ?Sized>(rng: &mut R, backend: Backend, n: usize, keep: f64) -> Arc<RingedCover> {
    let mut nerve: Vec<IndexSet> = (0..n).map(|i| vec![i]).collect();
    for size in 2..=n {
        let candidates: Vec<IndexSet> = subsets(n, size);
        for s in candidates {
            let faces_in = (0..s.len()).all(|d| {
                let mut f = s.clone();
                f.remove(d);
                nerve.contains(&f)
            });
            if faces_in && rng.gen_bool(keep) {
                nerve.push(s);
            }
        }
    }
    let names = (0..n).map(|i| format!("U{i}")).collect();
    let base = backend.ring();
    if backend != Backend::Laurent {
        let rings = nerve.iter().map(|s| (s.clone(), base.clone())).collect();
        return Arc::new(RingedCover::new(names, nerve, rings, Vec::new()).expect("cover"));
    }
    let poly: Ring = "Q[t]".parse().expect("ring");
    let sign: BTreeMap<IndexSet, i32> = nerve.iter().map(|s| (s.clone(), if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    let rings: BTreeMap<IndexSet, Ring> = nerve
        .iter()
        .map(|s| (s.clone(), if s.len() == 1 && n > 1 && rng.gen_bool(0.3) { poly.clone() } else { base.clone() }))
        .collect();
    let mut res = Vec::new();
    for s in &nerve {
        for t in &nerve {
            if t.len() == s.len() + 1 && s.iter().all(|x| t.contains(x)) {
                let rt = &rings[t];
                let img = rt.monomial(rt.base().one(), vec![sign[s] * sign[t]]).expect("Laurent target");
                res.push((s.clone(), t.clone(), RingHom::new(rings[s].clone(), rt.clone(), vec![img]).expect("hom")));
            }
        }
    }
    Arc::new(RingedCover::new(names, nerve, rings, res).expect("cover"))
}

fn subsets(n: usize, size: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    go(0, n, size, &mut cur, &mut out);
    out
}

pub fn random_tw<R: Rng + ?Sized>(rng: &mut R, cover: &Arc<RingedCover>, p: &Params) -> Result<TwPerfComplex> {
    let site = CechSite::new(cover.clone());
    let base = crate::exactalg::base_ring(site.ring(&[0]));
    let m = random_module(rng, p);
    let a = random_structure(rng, &site, &base, &m, &has_adjacent_repeat, p.density)?;
    TwPerfComplex::new(cover.clone(), a)
}

pub fn random_simplex<R: Rng + ?Sized>(rng: &mut R, ring: &Ring, n: usize, p: &Params) -> Result<SimplexObj> {
    let site = NondecreasingSite { n, ring: ring.clone() };
    let m = random_module(rng, p);
    let a = random_structure(rng, &site, ring, &m, &has_adjacent_repeat, p.density)?;
    let objects = cochain::vertex_parts(&site, &a)
        .into_iter()
        .map(|d| ComplexObj::new(d))
        .collect::<Result<Vec<_>>>()?;
    SimplexObj::new(ring, objects, a.truncated(|l| l > 0))
}

/// A random group of order at most 3 acting on at most 3 points.
pub fn random_action<R: Rng + ?Sized>(rng: &mut R) -> GroupAction {
    let g = Group::cyclic(rng.gen_range(1..=3));
    match rng.gen_range(0..3) {
        0 => GroupAction::trivial(g, rng.gen_range(1..=3)),
        1 => GroupAction::regular(g),
        _ => {
            // a free orbit plus a fixed point
            let n = g.order();
            let mut act: Vec<Vec<usize>> = (0..n).map(|x| (0..n).map(|h| g.mul(x, h)).collect()).collect();
            if n < 3 {
                act.push(vec![n; n]);
            }
            GroupAction::new(g, act).expect("action")
        }
    }
}

pub fn random_equivariant<R: Rng + ?Sized>(rng: &mut R, ring: &Ring, action: GroupAction, p: &Params) -> Result<EquivariantComplex> {
    let action = Arc::new(action);
    let site = ActionSite { action: action.clone(), ring: ring.clone() };
    let m = random_module(rng, p);
    let e = action.group().identity();
    let degenerate = move |c: &[usize]| c[1..].contains(&e);
    let a = random_structure(rng, &site, ring, &m, &degenerate, p.density)?;
    let objects = cochain::vertex_parts(&site, &a)
        .into_iter()
        .map(|d| ComplexObj::new(d))
        .collect::<Result<Vec<_>>>()?;
    EquivariantComplex::new(action, ring, objects, a.truncated(|l| l > 0))
}

/// A random degree-`degree` cochain with components up to `max_level`.
pub fn random_cochain<S: CellSite + ?Sized, R: Rng + ?Sized>(
    rng: &mut R,
    site: &S,
    source: &Family,
    target: &Family,
    degree: i32,
    max_level: usize,
    density: f64,
) -> Cochain {
    let mut c = Cochain::zero(degree, source, target);
    for k in 0..=max_level {
        let q = degree - k as i32;
        for cell in site.cells(k) {
            let (s, t) = (&source[site.last(&cell)], &target[site.first(&cell)]);
            if GradedMap::space_is_zero(s, t, q) || !rng.gen_bool(density) {
                continue;
            }
            c.set(site, &cell, random_map(rng, site.ring(&cell), s, t, q, density)).expect("slot");
        }
    }
    c
}

pub fn random_family<R: Rng + ?Sized>(rng: &mut R, n: usize, p: &Params) -> Family {
    family((0..n).map(|_| random_module(rng, p)).collect())
}

/// Elementary level-0 cochains of degree 0: one matrix unit per vertex,
/// degree and entry, for maps between two families.
pub fn elementary_probes<S: CellSite + ?Sized>(site: &S, source: &Family, target: &Family) -> Vec<Cochain> {
    let mut out = Vec::new();
    for c in site.cells(0) {
        let (s, t) = (&source[c[0]], &target[c[0]]);
        let ring = site.ring(&c);
        for (d, r) in s.degrees() {
            for i in 0..t.rank(d) {
                for j in 0..r {
                    let mut b = Matrix::zeros(ring, t.rank(d), r);
                    b.set(i, j, ring.one());
                    let mut x = Cochain::zero(0, source, target);
                    x.set(site, &c, GradedMap::from_blocks(ring, s, t, 0, [(d, b)]).expect("shape")).expect("slot");
                    out.push(x);
                }
            }
        }
    }
    out
}
