//! Equivariant twisted complexes for a finite group acting on a finite set.
//!
//! Cells of level `k` are `[x, g_1, …, g_k]`; a component over such a cell maps
//! `E_{x·g_1⋯g_k}` to `E_x`. Validation goes through the totalization checker
//! with the action backend.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cochain::{self, family, ActionSite, Cell, CellSite, Cochain, Family};
use crate::dgresolution::ComplexObj;
use crate::error::{Error, Result};
use crate::exactalg::{hom_differential, GradedMap, GradedModule, Matrix, Ring};
use crate::report::McReport;
use crate::simplicial::{Group, GroupAction, OrdinalMap, SimplicialSet};
use crate::totalization::{mc_check_tot, CosimplicialBackend, TotObject};

#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    site: ActionSite,
    objects: Vec<ComplexObj>,
    phi: Cochain,
}

impl EquivariantComplex {
    pub fn new(action: Arc<GroupAction>, ring: &Ring, objects: Vec<ComplexObj>, phi: Cochain) -> Result<Self> {
        let site = ActionSite { action, ring: ring.clone() };
        if objects.len() != site.vertex_count() {
            return Err(Error::Shape("one complex per point".into()));
        }
        let fam = family(objects.iter().map(|o| o.module().clone()).collect());
        if phi.degree() != 1 || *phi.source() != fam || *phi.target() != fam || phi.levels().contains(&0) {
            return Err(Error::Shape("φ must be a degree-1 cochain in levels ≥ 1 on the point family".into()));
        }
        for (c, m) in phi.components() {
            let (s, t, q) = phi.slot(&site, c);
            if !site.contains(c) || *m.source() != s || *m.target() != t || m.degree() != q || m.ring() != ring {
                return Err(Error::Shape(format!("component at {c:?} has the wrong shape")));
            }
        }
        Ok(EquivariantComplex { site, objects, phi })
    }

    /// Builds `φ` from `(cell, map)` pairs, validating each slot.
    pub fn from_components(
        action: Arc<GroupAction>,
        ring: &Ring,
        objects: Vec<ComplexObj>,
        comps: Vec<(Cell, GradedMap)>,
    ) -> Result<Self> {
        let site = ActionSite { action: action.clone(), ring: ring.clone() };
        let fam = family(objects.iter().map(|o| o.module().clone()).collect());
        let mut phi = Cochain::zero(1, &fam, &fam);
        for (c, m) in comps {
            phi.set(&site, &c, m)?;
        }
        EquivariantComplex::new(action, ring, objects, phi)
    }

    pub fn site(&self) -> &ActionSite {
        &self.site
    }

    pub fn action(&self) -> &GroupAction {
        &self.site.action
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

    pub fn full(&self) -> Cochain {
        cochain::with_differentials(&self.phi, &self.diffs())
    }

    pub fn as_tot(&self) -> TotObject {
        TotObject::new(CosimplicialBackend::Equivariant(self.site.clone()), self.diffs(), self.phi.clone())
            .expect("shapes were validated")
    }

    pub fn with_component(&self, cell: &[usize], m: GradedMap) -> Result<Self> {
        let mut phi = self.phi.clone();
        phi.set(&self.site, cell, m)?;
        Ok(EquivariantComplex { phi, ..self.clone() })
    }
}

/// Which face map a pullback goes along.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceSide {
    /// `ρ_{k,p}`: keeps `(x, g_1, …, g_p)`.
    Front,
    /// `τ_{k,p}`: `(x·g_1⋯g_{k−p}, g_{k−p+1}, …, g_k)`.
    Back,
}

/// The `p`-cell a `k`-cell is sent to by `ρ_{k,p}` or `τ_{k,p}`.
pub fn face_cell(action: &GroupAction, side: FaceSide, cell: &[usize], p: usize) -> Result<Cell> {
    match side {
        FaceSide::Front => action.front(cell, p),
        FaceSide::Back => action.back(cell, p),
    }
}

/// `ρ^*_{k,p} E` or `τ^*_{k,p} E` over every `k`-cell: the module read at the
/// first point of the image cell.
pub fn rho_tau_pullback(e: &EquivariantComplex, side: FaceSide, k: usize, p: usize) -> Result<BTreeMap<Cell, GradedModule>> {
    if p > k {
        return Err(Error::OutOfRange(format!("p = {p} > k = {k}")));
    }
    e.action()
        .level(k)
        .into_iter()
        .map(|c| {
            let image = face_cell(e.action(), side, &c, p)?;
            Ok((c, e.family()[image[0]].clone()))
        })
        .collect()
}

/// `ρ^*_{k,p}` or `τ^*_{k,p}` of a level-`p` cochain, as a level-`k` cochain.
pub fn pull_level(action: &GroupAction, side: FaceSide, x: &Cochain, k: usize, p: usize) -> Result<BTreeMap<Cell, GradedMap>> {
    let mut out = BTreeMap::new();
    for c in action.level(k) {
        let image = face_cell(action, side, &c, p)?;
        if let Some(m) = x.get(&image) {
            out.insert(c, m.clone());
        }
    }
    Ok(out)
}

pub fn mc_check_equiv(e: &EquivariantComplex) -> McReport {
    mc_check_tot(&e.as_tot())
}

/// `Dφ + φ·φ` over the action site.
pub fn mc_residual_equiv(e: &EquivariantComplex) -> Cochain {
    let d = cochain::big_d(&e.site, &e.phi, &e.diffs(), &e.diffs());
    d.add(&cochain::mul(&e.site, &e.phi, &e.phi).expect("endomorphism")).expect("parallel")
}

/// `dθ = Dθ + ψ·θ − (−1)^m θ·φ` for `θ : (E, φ) → (F, ψ)`: the target's
/// structure acts on the left.
pub fn mor_diff_equiv(src: &EquivariantComplex, tgt: &EquivariantComplex, theta: &Cochain) -> Result<Cochain> {
    if !Arc::ptr_eq(&src.site.action, &tgt.site.action) && src.action().table() != tgt.action().table() {
        return Err(Error::Shape("objects over different actions".into()));
    }
    cochain::mor_d(&src.site, theta, &src.full(), &tgt.full())
}

/// The same differential summed term by term over one `k`-cell:
/// `(−1)^k dθ^k + Σ_j (−1)^j ∂_j^*θ^{k−1} + Σ_l (−1)^{(1−l)(k−l)} ρ^*ψ^l τ^*θ^{k−l}
///  − (−1)^m Σ_l (−1)^{(m−l)(k−l)} ρ^*θ^l τ^*φ^{k−l}`.
pub fn mor_diff_equiv_at(src: &EquivariantComplex, tgt: &EquivariantComplex, theta: &Cochain, cell: &[usize]) -> GradedMap {
    let a = src.action();
    let ring = &src.site.ring;
    let k = cell.len() - 1;
    let m = theta.degree();
    let (x, y) = (cell[0], a.vertex(cell, k));
    let mut acc = GradedMap::zero(ring, &src.family()[y], &tgt.family()[x], m + 1 - k as i32);
    let mut add = |g: GradedMap| acc = acc.add(&g).expect("slot");
    if let Some(t) = theta.get(cell) {
        add(hom_differential(tgt.objects[x].diff(), t, src.objects[y].diff()).expect("shape").signed(k % 2 == 0));
    }
    for j in 1..k {
        if let Some(t) = theta.get(&a.face(cell, j).expect("cell")) {
            add(t.signed(j % 2 == 0));
        }
    }
    let front = |l: usize| a.front(cell, l).expect("cell");
    let back = |l: usize| a.back(cell, l).expect("cell");
    for l in 1..=k {
        if let (Some(p), Some(t)) = (tgt.phi.get(&front(l)), theta.get(&back(k - l))) {
            let s = ((1 - l as i64) * (k - l) as i64).rem_euclid(2) == 0;
            add(p.compose(t).expect("composable").signed(s));
        }
    }
    for l in 0..k {
        if let (Some(t), Some(p)) = (theta.get(&front(l)), src.phi.get(&back(k - l))) {
            let s = ((m as i64 - l as i64) * (k - l) as i64).rem_euclid(2) == 0;
            add(t.compose(p).expect("composable").signed(s == (m.rem_euclid(2) == 1)));
        }
    }
    acc
}

/// A strict equivariant structure: `φ^{1,0}` from a closed, invertible cocycle
/// `φ_{(x,g)} : E_{x·g} → E_x`, higher components zero.
pub fn strict_from_cocycle(
    action: Arc<GroupAction>,
    ring: &Ring,
    objects: Vec<ComplexObj>,
    phi: &BTreeMap<(usize, usize), GradedMap>,
) -> Result<EquivariantComplex> {
    let group = action.group().clone();
    let get = |x: usize, g: usize| {
        phi.get(&(x, g)).ok_or_else(|| Error::Invariant(format!("φ missing at (x={x}, g={g})")))
    };
    for x in 0..action.carrier() {
        for g in 0..group.order() {
            let f = get(x, g)?;
            let (dx, dy) = (objects[x].diff(), objects[action.act(x, g)].diff());
            if f.degree() != 0 || !hom_differential(dx, f, dy)?.is_zero() {
                return Err(Error::Invariant(format!("φ at (x={x}, g={g}) is not a closed degree-0 map")));
            }
            for (d, b) in f.blocks() {
                if b.rows() != b.cols() || b.try_inverse().is_none() {
                    return Err(Error::Invariant(format!("φ at (x={x}, g={g}) is not invertible in degree {d}")));
                }
            }
            if f.source().total_rank() != f.blocks().map(|(_, b)| b.cols()).sum::<usize>() {
                return Err(Error::Invariant(format!("φ at (x={x}, g={g}) is not invertible")));
            }
        }
        if *get(x, group.identity())? != GradedMap::identity(ring, objects[x].module()) {
            return Err(Error::Invariant(format!("φ at (x={x}, e) is not the identity")));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let lhs = get(x, group.mul(g, h))?;
                let rhs = get(x, g)?.compose(get(action.act(x, g), h)?)?;
                if *lhs != rhs {
                    return Err(Error::Invariant(format!("cocycle condition fails at (x={x}, {g}, {h})")));
                }
            }
        }
    }
    let comps = phi.iter().map(|(&(x, g), m)| (vec![x, g], m.clone())).collect();
    EquivariantComplex::from_components(action, ring, objects, comps)
}

/// The degenerate cells of level `k`, i.e. those containing the identity.
pub fn degenerate_cells(action: &GroupAction, k: usize) -> Vec<Cell> {
    if k == 0 {
        return Vec::new();
    }
    let mut out: Vec<Cell> = action
        .level(k - 1)
        .iter()
        .flat_map(|c| (0..k).map(move |i| action.pull(&OrdinalMap::codegeneracy(k - 1, i), c)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Small worked examples.
pub mod fixtures {
    use super::*;

    fn scalar_map(ring: &Ring, v: i64) -> GradedMap {
        let m = GradedModule::unit();
        GradedMap::from_blocks(ring, &m, &m, 0, [(0, Matrix::from_i64(ring, &[&[v]]))]).expect("1x1")
    }

    fn point_object(ring: &Ring) -> ComplexObj {
        ComplexObj::zero_diff(ring, &GradedModule::unit())
    }

    /// `ℤ/2` acting trivially on a point, `K` in degree 0, `g ↦ −1`.
    pub fn sign_rep(ring: &Ring) -> EquivariantComplex {
        let action = Arc::new(GroupAction::trivial(Group::cyclic(2), 1));
        let phi = [((0, 0), scalar_map(ring, 1)), ((0, 1), scalar_map(ring, -1))].into();
        strict_from_cocycle(action, ring, vec![point_object(ring)], &phi).expect("valid cocycle")
    }

    /// `ℤ/2` swapping two points, `K` at each, all transition maps `1`.
    pub fn point_swap(ring: &Ring) -> EquivariantComplex {
        let action = Arc::new(GroupAction::regular(Group::cyclic(2)));
        let phi = (0..2).flat_map(|x| (0..2).map(move |g| ((x, g), g))).map(|(k, _)| (k, scalar_map(ring, 1))).collect();
        strict_from_cocycle(action, ring, vec![point_object(ring); 2], &phi).expect("valid cocycle")
    }

    /// `ℤ/2` on a point with `g ↦ 2`: `φ_g φ_g ≠ φ_e`.
    pub fn broken_cocycle(ring: &Ring) -> EquivariantComplex {
        let action = Arc::new(GroupAction::trivial(Group::cyclic(2), 1));
        let comps = vec![(vec![0, 0], scalar_map(ring, 1)), (vec![0, 1], scalar_map(ring, 2))];
        EquivariantComplex::from_components(action, ring, vec![point_object(ring)], comps).expect("shapes")
    }

    /// The complex `K⟨w⟩ → K⟨u, v⟩`, `w ↦ v`, in degrees −1, 0, with
    /// `φ_g : u ↦ u + v`. `φ_g² ≠ 1`, but the defect `u ↦ 2v` is the boundary of
    /// `φ^{2,−1}_{(g,g)} : u ↦ −2w`. Without that component the check fails.
    pub fn homotopy_repaired(ring: &Ring, with_homotopy: bool) -> EquivariantComplex {
        let action = Arc::new(GroupAction::trivial(Group::cyclic(2), 1));
        let m = GradedModule::new([(-1, 1), (0, 2)]);
        // degree-0 basis (u, v); columns are images
        let d = GradedMap::from_blocks(ring, &m, &m, 1, [(-1, Matrix::from_i64(ring, &[&[0], &[1]]))]).expect("d");
        let e = ComplexObj::new(d).expect("d² = 0");
        let id = GradedMap::identity(ring, &m);
        let g = GradedMap::from_blocks(
            ring,
            &m,
            &m,
            0,
            [(-1, Matrix::identity(ring, 1)), (0, Matrix::from_i64(ring, &[&[1, 0], &[1, 1]]))],
        )
        .expect("φ_g");
        let h = GradedMap::from_blocks(ring, &m, &m, -1, [(0, Matrix::from_i64(ring, &[&[-2, 0]]))]).expect("h");
        let mut comps = vec![(vec![0, 0], id), (vec![0, 1], g)];
        if with_homotopy {
            comps.push((vec![0, 1, 1], h));
        }
        EquivariantComplex::from_components(action, ring, vec![e], comps).expect("shapes")
    }
}
