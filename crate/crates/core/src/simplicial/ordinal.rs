use std::fmt;

use crate::error::{Error, Result};

/// Weakly monotone map `[n] → [m]`, stored as its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrdinalMap {
    target: usize,
    values: Vec<usize>,
}

impl OrdinalMap {
    /// `values[j] = σ(j)`; the source is `[values.len() - 1]`.
    pub fn new(values: Vec<usize>, target: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Shape("ordinal map needs a nonempty source".into()));
        }
        if values.iter().any(|v| *v > target) {
            return Err(Error::OutOfRange(format!("{values:?} into [{target}]")));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invariant(format!("{values:?} is not monotone")));
        }
        Ok(OrdinalMap { target, values })
    }

    pub fn identity(n: usize) -> Self {
        OrdinalMap { target: n, values: (0..=n).collect() }
    }

    /// Coface `d^i : [n-1] → [n]` skipping `i`.
    pub fn coface(n: usize, i: usize) -> Self {
        assert!(n >= 1 && i <= n);
        OrdinalMap { target: n, values: (0..=n).filter(|j| *j != i).collect() }
    }

    /// Codegeneracy `s^i : [n+1] → [n]` hitting `i` twice.
    pub fn codegeneracy(n: usize, i: usize) -> Self {
        assert!(i <= n);
        OrdinalMap { target: n, values: (0..=n + 1).map(|j| if j <= i { j } else { j - 1 }).collect() }
    }

    /// The unique monotone map with `σ(j) = t[j]`.
    pub fn from_tuple(t: &[usize], target: usize) -> Result<Self> {
        OrdinalMap::new(t.to_vec(), target)
    }

    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, j: usize) -> usize {
        self.values[j]
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &OrdinalMap) -> Result<OrdinalMap> {
        if g.target != self.source() {
            return Err(Error::Shape(format!("[{}] vs [{}]", g.target, self.source())));
        }
        Ok(OrdinalMap { target: self.target, values: g.values.iter().map(|v| self.values[*v]).collect() })
    }

    pub fn is_surjective(&self) -> bool {
        self.values[0] == 0
            && *self.values.last().unwrap() == self.target
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_identity(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// `self = mono ∘ epi` with `epi` surjective and `mono` injective.
    pub fn epi_mono_factor(&self) -> (OrdinalMap, OrdinalMap) {
        let mut image: Vec<usize> = self.values.clone();
        image.dedup();
        let epi = self.values.iter().map(|v| image.binary_search(v).unwrap()).collect();
        let r = image.len() - 1;
        (OrdinalMap { target: r, values: epi }, OrdinalMap { target: self.target, values: image })
    }

    /// Every monotone map `[n] → [m]`, lexicographically.
    pub fn all(n: usize, m: usize) -> Vec<OrdinalMap> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; n + 1];
        loop {
            out.push(OrdinalMap { target: m, values: cur.clone() });
            let Some(pos) = (0..=n).rev().find(|&j| cur[j] < m) else { break };
            let v = cur[pos] + 1;
            for slot in cur.iter_mut().skip(pos) {
                *slot = v;
            }
        }
        out
    }

    /// Monotone surjections out of `[k]` onto every `[n]` with `n ≤ k`.
    pub fn surjections_from(k: usize) -> Vec<OrdinalMap> {
        (0..=k).rev().flat_map(|n| OrdinalMap::all(k, n).into_iter().filter(|s| s.is_surjective())).collect()
    }

    /// Whether `self` factors as `g ∘ s^i` for the codegeneracy `s^i : [k] → [k-1]`.
    pub fn factors_through_codegeneracy(&self, i: usize) -> bool {
        i + 1 < self.values.len() && self.values[i] == self.values[i + 1]
    }
}

/// Monotone surjections `[k] → [n]` with `n < k`; these index the matching object.
pub fn matching_surjections(k: usize) -> Vec<OrdinalMap> {
    OrdinalMap::surjections_from(k).into_iter().filter(|s| s.target() < k).collect()
}

impl fmt::Display for OrdinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->[{}]", self.values, self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_of_001() {
        let f = OrdinalMap::new(vec![0, 0, 1], 1).unwrap();
        let (e, m) = f.epi_mono_factor();
        assert_eq!(e.values(), &[0, 0, 1]);
        assert!(m.is_identity());
        assert_eq!(m.compose(&e).unwrap(), f);
    }

    #[test]
    fn tuple_into_ordinal() {
        assert_eq!(OrdinalMap::from_tuple(&[0, 2], 2).unwrap().values(), &[0, 2]);
        assert_eq!(OrdinalMap::from_tuple(&[1, 1], 1).unwrap().values(), &[1, 1]);
        assert!(OrdinalMap::from_tuple(&[2, 1], 2).is_err());
        assert!(OrdinalMap::from_tuple(&[0, 3], 2).is_err());
        let hits: Vec<_> = OrdinalMap::all(1, 2).into_iter().filter(|s| s.values() == [0, 2]).collect();
        assert_eq!(hits.len(), 1);
    }

    #[test]
    fn matching_counts() {
        assert_eq!(matching_surjections(0).len(), 0);
        assert_eq!(matching_surjections(1).len(), 1);
        assert_eq!(matching_surjections(2).len(), 3);
        assert_eq!(matching_surjections(3).len(), 7);
    }

    #[test]
    fn coface_after_codegeneracy() {
        // d^1_0 then s^0 on [1]: [0] → [1] → [0]
        let d = OrdinalMap::coface(1, 0);
        let s = OrdinalMap::codegeneracy(0, 0);
        assert_eq!(s.compose(&d).unwrap(), OrdinalMap::identity(0));
    }
}
