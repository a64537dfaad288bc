use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::simplicial::ordinal::OrdinalMap;
use crate::simplicial::SimplicialSet;

/// One summand of a split level: the image of a nondegenerate cell under a surjection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitFactor {
    pub sigma: OrdinalMap,
    pub cell: Vec<usize>,
    pub image: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SplitLevel {
    pub nondegenerate: Vec<Vec<usize>>,
    pub factors: Vec<SplitFactor>,
    index: HashMap<Vec<usize>, usize>,
}

/// Levels `0..=max` written as `∐_{σ : [k] ↠ [n]} N_n`.
#[derive(Clone, Debug)]
pub struct SplitDecomposition {
    levels: Vec<SplitLevel>,
}

/// Cells of level `k` not in the image of any degeneracy.
pub fn nondegenerate_cells<S: SimplicialSet + ?Sized>(s: &S, k: usize) -> Vec<Vec<usize>> {
    let cells = s.cells(k);
    if k == 0 {
        return cells;
    }
    let mut degenerate = BTreeSet::new();
    for y in s.cells(k - 1) {
        for i in 0..k {
            degenerate.insert(s.pull(&OrdinalMap::codegeneracy(k - 1, i), &y));
        }
    }
    cells.into_iter().filter(|c| !degenerate.contains(c)).collect()
}

impl SplitDecomposition {
    /// Uses the nondegenerate cells of `s` as the free part.
    pub fn compute<S: SimplicialSet + ?Sized>(s: &S, max_level: usize) -> Result<Self> {
        let n: Vec<Vec<Vec<usize>>> = (0..=max_level).map(|k| nondegenerate_cells(s, k)).collect();
        SplitDecomposition::from_free_parts(s, n)
    }

    /// Checks that `free[n]` (for all `n`) generate each level freely.
    pub fn from_free_parts<S: SimplicialSet + ?Sized>(s: &S, free: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let mut levels = Vec::with_capacity(free.len());
        for k in 0..free.len() {
            let cells = s.cells(k);
            let cell_set: BTreeSet<&Vec<usize>> = cells.iter().collect();
            let mut factors = Vec::new();
            let mut index = HashMap::new();
            for sigma in OrdinalMap::surjections_from(k) {
                for c in &free[sigma.target()] {
                    let image = s.pull(&sigma, c);
                    if !cell_set.contains(&image) {
                        return Err(Error::Invariant(format!("{image:?} is not a level-{k} cell")));
                    }
                    if index.insert(image.clone(), factors.len()).is_some() {
                        return Err(Error::Invariant(format!(
                            "level {k}: {image:?} is hit twice, degeneracies are not free"
                        )));
                    }
                    factors.push(SplitFactor { sigma: sigma.clone(), cell: c.clone(), image });
                }
            }
            if factors.len() != cells.len() {
                return Err(Error::Invariant(format!(
                    "level {k}: {} summands for {} cells",
                    factors.len(),
                    cells.len()
                )));
            }
            levels.push(SplitLevel { nondegenerate: free[k].clone(), factors, index });
        }
        Ok(SplitDecomposition { levels })
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &SplitLevel {
        &self.levels[k]
    }
}

impl SplitLevel {
    /// The unique `(σ, c)` with `image = σ^* c`.
    pub fn decompose(&self, cell: &[usize]) -> Option<&SplitFactor> {
        self.index.get(cell).map(|i| &self.factors[*i])
    }
}

/// A cover of a finite point set by subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCover {
    points: usize,
    opens: Vec<BTreeSet<usize>>,
}

impl PointCover {
    pub fn new(points: usize, opens: Vec<Vec<usize>>) -> Result<Self> {
        let opens: Vec<BTreeSet<usize>> = opens.into_iter().map(|o| o.into_iter().collect()).collect();
        if opens.iter().any(|o| o.iter().any(|p| *p >= points)) {
            return Err(Error::InvalidCover("open mentions an unknown point".into()));
        }
        let covered: BTreeSet<usize> = opens.iter().flatten().copied().collect();
        if covered.len() != points {
            return Err(Error::InvalidCover("opens do not cover every point".into()));
        }
        Ok(PointCover { points, opens })
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opens.is_empty()
    }

    pub fn open(&self, i: usize) -> &BTreeSet<usize> {
        &self.opens[i]
    }

    /// Points in `∩ U_{i_j}`.
    pub fn intersection(&self, tuple: &[usize]) -> BTreeSet<usize> {
        let mut it = tuple.iter();
        let Some(first) = it.next() else { return (0..self.points).collect() };
        let mut acc = self.opens[*first].clone();
        for i in it {
            acc = acc.intersection(&self.opens[*i]).copied().collect();
        }
        acc
    }
}

impl SimplicialSet for PointCover {
    fn cells(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..=k {
            out = out
                .into_iter()
                .flat_map(|c: Vec<usize>| {
                    (0..self.len()).map(move |i| {
                        let mut d = c.clone();
                        d.push(i);
                        d
                    })
                })
                .filter(|c| !self.intersection(c).is_empty())
                .collect();
        }
        out
    }

    fn pull(&self, sigma: &OrdinalMap, cell: &[usize]) -> Vec<usize> {
        sigma.values().iter().map(|j| cell[*j]).collect()
    }
}

/// A cover together with an index map into a coarser cover with `U_a ⊆ V_{map(a)}`.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub cover: PointCover,
    pub map: Vec<usize>,
}

impl Refinement {
    pub fn new(cover: PointCover, base: &PointCover, map: Vec<usize>) -> Result<Self> {
        if map.len() != cover.len() || cover.points != base.points {
            return Err(Error::InvalidCover("refinement map has the wrong shape".into()));
        }
        for (a, b) in map.iter().enumerate() {
            if *b >= base.len() || !cover.open(a).is_subset(base.open(*b)) {
                return Err(Error::InvalidCover(format!("open {a} is not inside base open {b}")));
            }
        }
        Ok(Refinement { cover, map })
    }

    pub fn image(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|a| self.map[*a]).collect()
    }
}

/// Levelwise fiber product `U ×_V W` of two refinements of one base; a level-`m`
/// cell is `J ++ K` with `|J| = |K| = m + 1`.
pub struct FiberProduct {
    pub base: PointCover,
    pub left: Refinement,
    pub right: Refinement,
}

impl FiberProduct {
    pub fn new(base: PointCover, left: Refinement, right: Refinement) -> Result<Self> {
        if left.cover.points != base.points || right.cover.points != base.points {
            return Err(Error::InvalidCover("mismatched base".into()));
        }
        Ok(FiberProduct { base, left, right })
    }

    pub fn split_cell<'c>(&self, cell: &'c [usize]) -> (&'c [usize], &'c [usize]) {
        cell.split_at(cell.len() / 2)
    }

    /// The free part of level `m` by the triple-surjection recipe: decompose the
    /// two legs and their common image in the base, and drop triples whose
    /// surjections all factor through the same codegeneracy `[m] → [m-1]`.
    pub fn starred_free_part(&self, max_level: usize) -> Result<Vec<Vec<Vec<usize>>>> {
        let du = SplitDecomposition::compute(&self.left.cover, max_level)?;
        let dv = SplitDecomposition::compute(&self.base, max_level)?;
        let dw = SplitDecomposition::compute(&self.right.cover, max_level)?;
        let mut out = Vec::new();
        for m in 0..=max_level {
            let mut k = Vec::new();
            for cell in self.cells(m) {
                let (j, l) = self.split_cell(&cell);
                let s1 = &du.level(m).decompose(j).expect("split").sigma;
                let s2 = &dv.level(m).decompose(&self.left.image(j)).expect("split").sigma;
                let s3 = &dw.level(m).decompose(l).expect("split").sigma;
                let common = (0..m).any(|i| {
                    s1.factors_through_codegeneracy(i)
                        && s2.factors_through_codegeneracy(i)
                        && s3.factors_through_codegeneracy(i)
                });
                if !common {
                    k.push(cell);
                }
            }
            out.push(k);
        }
        Ok(out)
    }

    pub fn split(&self, max_level: usize) -> Result<SplitDecomposition> {
        SplitDecomposition::from_free_parts(self, self.starred_free_part(max_level)?)
    }
}

impl SimplicialSet for FiberProduct {
    fn cells(&self, m: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let right = self.right.cover.cells(m);
        for j in self.left.cover.cells(m) {
            let img = self.left.image(&j);
            let uj = self.left.cover.intersection(&j);
            for l in &right {
                if self.right.image(l) == img && !uj.is_disjoint(&self.right.cover.intersection(l)) {
                    let mut c = j.clone();
                    c.extend_from_slice(l);
                    out.push(c);
                }
            }
        }
        out
    }

    fn pull(&self, sigma: &OrdinalMap, cell: &[usize]) -> Vec<usize> {
        let (j, l) = self.split_cell(cell);
        sigma.values().iter().map(|x| j[*x]).chain(sigma.values().iter().map(|x| l[*x])).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> (PointCover, PointCover, PointCover) {
        // points 0..4 on a line; base has one open, refinements have two each
        let base = PointCover::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let a = PointCover::new(4, vec![vec![0, 1, 2], vec![2, 3]]).unwrap();
        let b = PointCover::new(4, vec![vec![0, 1], vec![1, 2, 3]]).unwrap();
        (base, a, b)
    }

    #[test]
    fn product_level_zero_is_pairwise_intersections() {
        let (base, a, b) = line();
        let fp = FiberProduct::new(
            base.clone(),
            Refinement::new(a.clone(), &base, vec![0, 0]).unwrap(),
            Refinement::new(b.clone(), &base, vec![0, 0]).unwrap(),
        )
        .unwrap();
        let lvl0 = fp.cells(0);
        let brute: Vec<Vec<usize>> = (0..2)
            .flat_map(|i| (0..2).map(move |j| vec![i, j]))
            .filter(|c| !a.open(c[0]).is_disjoint(b.open(c[1])))
            .collect();
        assert_eq!(lvl0, brute);
        let split = fp.split(3).unwrap();
        assert_eq!(split.level(0).nondegenerate, lvl0);
    }

    #[test]
    fn level_one_count_matches_pairing() {
        let (base, a, b) = line();
        let fp = FiberProduct::new(
            base.clone(),
            Refinement::new(a.clone(), &base, vec![0, 0]).unwrap(),
            Refinement::new(b.clone(), &base, vec![0, 0]).unwrap(),
        )
        .unwrap();
        let mut brute = 0;
        for j in a.cells(1) {
            for l in b.cells(1) {
                if !a.intersection(&j).is_disjoint(&b.intersection(&l)) {
                    brute += 1;
                }
            }
        }
        assert_eq!(fp.cells(1).len(), brute);
    }
}
