use std::sync::Arc;

use crate::exactalg::{GradedMap, Ring};
use crate::simplicial::{GroupAction, OrdinalMap, RingedCover, SimplicialSet};

pub type Cell = Vec<usize>;

/// Where cochain components live: cells with a first and last vertex, front/back
/// splittings, inner faces, and a ring per cell with restrictions from subcells.
pub trait CellSite: Sync {
    fn vertex_count(&self) -> usize;
    fn cells(&self, k: usize) -> Vec<Cell>;
    fn contains(&self, cell: &[usize]) -> bool;
    fn first(&self, cell: &[usize]) -> usize;
    fn last(&self, cell: &[usize]) -> usize;
    /// Vertices `0..=l`.
    fn front(&self, cell: &[usize], l: usize) -> Cell;
    /// Vertices `l..=k`.
    fn back(&self, cell: &[usize], l: usize) -> Cell;
    /// Drops vertex `j`, `0 < j < k`.
    fn inner_face(&self, cell: &[usize], j: usize) -> Cell;
    fn ring(&self, cell: &[usize]) -> &Ring;
    /// Moves a component from the ring of `from` to the ring of `to`, where `from`
    /// is a face-like subcell of `to`.
    fn restrict(&self, f: &GradedMap, from: &[usize], to: &[usize]) -> GradedMap;

    fn level(&self, cell: &[usize]) -> usize {
        cell.len() - 1
    }
}

/// Nondecreasing tuples in `0..=n` over a single ring: the index cells of `Δ_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondecreasingSite {
    pub n: usize,
    pub ring: Ring,
}

impl CellSite for NondecreasingSite {
    fn vertex_count(&self) -> usize {
        self.n + 1
    }

    fn cells(&self, k: usize) -> Vec<Cell> {
        OrdinalMap::all(k, self.n).into_iter().map(|s| s.values().to_vec()).collect()
    }

    fn contains(&self, cell: &[usize]) -> bool {
        !cell.is_empty() && cell.iter().all(|v| *v <= self.n) && cell.windows(2).all(|w| w[0] <= w[1])
    }

    fn first(&self, cell: &[usize]) -> usize {
        cell[0]
    }

    fn last(&self, cell: &[usize]) -> usize {
        *cell.last().unwrap()
    }

    fn front(&self, cell: &[usize], l: usize) -> Cell {
        cell[..=l].to_vec()
    }

    fn back(&self, cell: &[usize], l: usize) -> Cell {
        cell[l..].to_vec()
    }

    fn inner_face(&self, cell: &[usize], j: usize) -> Cell {
        let mut c = cell.to_vec();
        c.remove(j);
        c
    }

    fn ring(&self, _cell: &[usize]) -> &Ring {
        &self.ring
    }

    fn restrict(&self, f: &GradedMap, _from: &[usize], _to: &[usize]) -> GradedMap {
        f.clone()
    }
}

/// Tuples of cover indices whose underlying set is in the nerve.
#[derive(Clone, Debug)]
pub struct CechSite {
    pub cover: Arc<RingedCover>,
}

impl CechSite {
    pub fn new(cover: Arc<RingedCover>) -> Self {
        CechSite { cover }
    }
}

impl CellSite for CechSite {
    fn vertex_count(&self) -> usize {
        self.cover.len()
    }

    fn cells(&self, k: usize) -> Vec<Cell> {
        self.cover.nerve_level(k)
    }

    fn contains(&self, cell: &[usize]) -> bool {
        cell.iter().all(|i| *i < self.cover.len()) && self.cover.in_nerve(cell)
    }

    fn first(&self, cell: &[usize]) -> usize {
        cell[0]
    }

    fn last(&self, cell: &[usize]) -> usize {
        *cell.last().unwrap()
    }

    fn front(&self, cell: &[usize], l: usize) -> Cell {
        cell[..=l].to_vec()
    }

    fn back(&self, cell: &[usize], l: usize) -> Cell {
        cell[l..].to_vec()
    }

    fn inner_face(&self, cell: &[usize], j: usize) -> Cell {
        let mut c = cell.to_vec();
        c.remove(j);
        c
    }

    fn ring(&self, cell: &[usize]) -> &Ring {
        self.cover.ring(cell)
    }

    fn restrict(&self, f: &GradedMap, from: &[usize], to: &[usize]) -> GradedMap {
        f.apply_hom(self.cover.restriction(from, to)).expect("restriction source matches component ring")
    }
}

/// Cells `[x, g_1, …, g_k]` of `[X/G]` over one coefficient ring.
#[derive(Clone, Debug)]
pub struct ActionSite {
    pub action: Arc<GroupAction>,
    pub ring: Ring,
}

impl CellSite for ActionSite {
    fn vertex_count(&self) -> usize {
        self.action.carrier()
    }

    fn cells(&self, k: usize) -> Vec<Cell> {
        self.action.level(k)
    }

    fn contains(&self, cell: &[usize]) -> bool {
        !cell.is_empty()
            && cell[0] < self.action.carrier()
            && cell[1..].iter().all(|g| *g < self.action.group().order())
    }

    fn first(&self, cell: &[usize]) -> usize {
        cell[0]
    }

    fn last(&self, cell: &[usize]) -> usize {
        self.action.vertex(cell, cell.len() - 1)
    }

    fn front(&self, cell: &[usize], l: usize) -> Cell {
        cell[..=l].to_vec()
    }

    fn back(&self, cell: &[usize], l: usize) -> Cell {
        let k = cell.len() - 1;
        self.action.back(cell, k - l).expect("valid cell")
    }

    fn inner_face(&self, cell: &[usize], j: usize) -> Cell {
        self.action.face(cell, j).expect("valid cell")
    }

    fn ring(&self, _cell: &[usize]) -> &Ring {
        &self.ring
    }

    fn restrict(&self, f: &GradedMap, _from: &[usize], _to: &[usize]) -> GradedMap {
        f.clone()
    }
}

impl SimplicialSet for ActionSite {
    fn cells(&self, k: usize) -> Vec<Vec<usize>> {
        self.action.level(k)
    }

    fn pull(&self, sigma: &OrdinalMap, cell: &[usize]) -> Vec<usize> {
        self.action.pull(sigma, cell)
    }
}

impl SimplicialSet for CechSite {
    fn cells(&self, k: usize) -> Vec<Vec<usize>> {
        self.cover.nerve_level(k)
    }

    fn pull(&self, sigma: &OrdinalMap, cell: &[usize]) -> Vec<usize> {
        sigma.values().iter().map(|j| cell[*j]).collect()
    }
}
