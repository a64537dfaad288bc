//! Ordinal maps, Čech nerves, `[X/G]`, and split decompositions.

pub mod cover;
pub mod group;
pub mod ordinal;
pub mod split;

pub use cover::{all_subsets, underlying_set, IndexSet, RingedCover};
pub use group::{Group, GroupAction};
pub use ordinal::{matching_surjections, OrdinalMap};
pub use split::{FiberProduct, PointCover, Refinement, SplitDecomposition, SplitFactor};

/// A simplicial set with finitely many cells per level, cells encoded as `Vec<usize>`.
pub trait SimplicialSet: Sync {
    fn cells(&self, k: usize) -> Vec<Vec<usize>>;

    /// Action of `σ : [n] → [k]` taking a `k`-cell to an `n`-cell.
    fn pull(&self, sigma: &OrdinalMap, cell: &[usize]) -> Vec<usize>;

    fn face(&self, cell: &[usize], k: usize, i: usize) -> Vec<usize> {
        self.pull(&OrdinalMap::coface(k, i), cell)
    }

    fn degeneracy(&self, cell: &[usize], k: usize, i: usize) -> Vec<usize> {
        self.pull(&OrdinalMap::codegeneracy(k, i), cell)
    }
}

/// Čech nerve of a ringed cover: `k`-cells are tuples `(i_0, …, i_k)` in the nerve.
pub struct CechNerve<'a>(pub &'a RingedCover);

impl SimplicialSet for CechNerve<'_> {
    fn cells(&self, k: usize) -> Vec<Vec<usize>> {
        self.0.nerve_level(k)
    }

    fn pull(&self, sigma: &OrdinalMap, cell: &[usize]) -> Vec<usize> {
        sigma.values().iter().map(|j| cell[*j]).collect()
    }
}

impl SimplicialSet for GroupAction {
    fn cells(&self, k: usize) -> Vec<Vec<usize>> {
        self.level(k)
    }

    fn pull(&self, sigma: &OrdinalMap, cell: &[usize]) -> Vec<usize> {
        let g = self.group();
        let v = sigma.values();
        let mut out = vec![self.vertex(cell, v[0])];
        for w in v.windows(2) {
            out.push(g.product(&cell[w[0] + 1..=w[1]]));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_pull_matches_faces_and_degeneracies() {
        let a = GroupAction::regular(Group::cyclic(3));
        for k in 1..=3 {
            for c in a.level(k) {
                for i in 0..=k {
                    assert_eq!(SimplicialSet::face(&a, &c, k, i), a.face(&c, i).unwrap());
                }
            }
        }
        for k in 0..=2 {
            for c in a.level(k) {
                for i in 0..=k {
                    assert_eq!(SimplicialSet::degeneracy(&a, &c, k, i), a.degeneracy(&c, i).unwrap());
                }
            }
        }
    }
}
