use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exactalg::{Ring, RingHom};

/// Sorted, duplicate-free set of cover indices.
pub type IndexSet = Vec<usize>;

pub fn underlying_set(tuple: &[usize]) -> IndexSet {
    let s: BTreeSet<usize> = tuple.iter().copied().collect();
    s.into_iter().collect()
}

/// Finite cover recorded combinatorially: which intersections are nonempty,
/// the ring on each, and restriction maps between them.
#[derive(Clone, Debug)]
pub struct RingedCover {
    names: Vec<String>,
    nerve: BTreeSet<IndexSet>,
    rings: BTreeMap<IndexSet, Ring>,
    restrictions: BTreeMap<(IndexSet, IndexSet), RingHom>,
}

fn is_subset(s: &[usize], t: &[usize]) -> bool {
    s.iter().all(|x| t.binary_search(x).is_ok())
}

impl RingedCover {
    /// `restrictions` lists maps for some pairs `S ⊂ T`; every covering pair
    /// (`|T| = |S| + 1`) must be given unless both rings coincide, in which case the
    /// identity is used. All other pairs are composites, checked for agreement.
    pub fn new(
        names: Vec<String>,
        nerve_sets: Vec<IndexSet>,
        rings: BTreeMap<IndexSet, Ring>,
        restrictions: Vec<(IndexSet, IndexSet, RingHom)>,
    ) -> Result<Self> {
        let n = names.len();
        let mut nerve = BTreeSet::new();
        for s in nerve_sets {
            let sorted = underlying_set(&s);
            if sorted.len() != s.len() || s.is_empty() {
                return Err(Error::InvalidCover(format!("{s:?} is not a nonempty set")));
            }
            if sorted.iter().any(|i| *i >= n) {
                return Err(Error::InvalidCover(format!("{s:?} mentions an unknown index")));
            }
            nerve.insert(sorted);
        }
        for i in 0..n {
            if !nerve.contains(&vec![i]) {
                return Err(Error::InvalidCover(format!("open {} missing from the nerve", names[i])));
            }
        }
        for s in &nerve {
            for drop in 0..s.len() {
                if s.len() > 1 {
                    let mut f = s.clone();
                    f.remove(drop);
                    if !nerve.contains(&f) {
                        return Err(Error::InvalidCover(format!("{s:?} in nerve but face {f:?} is not")));
                    }
                }
            }
            if !rings.contains_key(s) {
                return Err(Error::InvalidCover(format!("no ring for {s:?}")));
            }
        }
        let mut given: BTreeMap<(IndexSet, IndexSet), RingHom> = BTreeMap::new();
        for (s, t, h) in restrictions {
            let (s, t) = (underlying_set(&s), underlying_set(&t));
            if !nerve.contains(&s) || !nerve.contains(&t) || !is_subset(&s, &t) || s == t {
                return Err(Error::InvalidCover(format!("restriction {s:?} -> {t:?} is not a proper inclusion")));
            }
            if h.source() != &rings[&s] || h.target() != &rings[&t] {
                return Err(Error::InvalidCover(format!("restriction {s:?} -> {t:?} has the wrong rings")));
            }
            given.insert((s, t), h);
        }
        let mut res: BTreeMap<(IndexSet, IndexSet), RingHom> = BTreeMap::new();
        let mut by_size: Vec<&IndexSet> = nerve.iter().collect();
        by_size.sort_by_key(|s| s.len());
        for t in &by_size {
            res.insert(((*t).clone(), (*t).clone()), RingHom::identity(&rings[*t]));
        }
        // Fill pairs in order of increasing |T| - |S|.
        for gap in 1..=n {
            for s in &by_size {
                for t in &by_size {
                    if t.len() != s.len() + gap || !is_subset(s, t) {
                        continue;
                    }
                    let key = ((*s).clone(), (*t).clone());
                    let h = if gap == 1 {
                        match given.get(&key) {
                            Some(h) => h.clone(),
                            None if rings[*s] == rings[*t] => RingHom::identity(&rings[*s]),
                            None => {
                                return Err(Error::InvalidCover(format!("missing restriction {s:?} -> {t:?}")))
                            }
                        }
                    } else {
                        // every S ⊂ M ⊂ T with |M| = |S| + 1 must give the same composite
                        let mut composite: Option<RingHom> = None;
                        for x in t.iter().filter(|x| s.binary_search(x).is_err()) {
                            let m = underlying_set(&s.iter().copied().chain([*x]).collect::<Vec<_>>());
                            let c = res[&(m.clone(), (*t).clone())].after(&res[&((*s).clone(), m.clone())])?;
                            match &composite {
                                None => composite = Some(c),
                                Some(prev) if *prev == c => {}
                                Some(_) => {
                                    return Err(Error::InvalidCover(format!(
                                        "restrictions {s:?} -> {t:?} are not functorial"
                                    )))
                                }
                            }
                        }
                        let c = composite.expect("gap ≥ 2 has intermediates");
                        if let Some(g) = given.get(&key) {
                            if *g != c {
                                return Err(Error::InvalidCover(format!(
                                    "given restriction {s:?} -> {t:?} disagrees with the composite"
                                )));
                            }
                        }
                        c
                    };
                    res.insert(key, h);
                }
            }
        }
        Ok(RingedCover { names, nerve, rings, restrictions: res })
    }

    /// All intersections share one ring and every restriction is the identity.
    pub fn constant(n: usize, ring: &Ring, nerve_sets: Vec<IndexSet>) -> Result<Self> {
        let names = (0..n).map(|i| format!("U{i}")).collect();
        let mut rings = BTreeMap::new();
        for s in &nerve_sets {
            rings.insert(underlying_set(s), ring.clone());
        }
        RingedCover::new(names, nerve_sets, rings, Vec::new())
    }

    /// `n` opens with every intersection nonempty.
    pub fn complete(n: usize, ring: &Ring) -> Result<Self> {
        RingedCover::constant(n, ring, all_subsets(n))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nerve(&self) -> impl Iterator<Item = &IndexSet> {
        self.nerve.iter()
    }

    pub fn in_nerve(&self, tuple: &[usize]) -> bool {
        !tuple.is_empty() && self.nerve.contains(&underlying_set(tuple))
    }

    /// Ring over the underlying set of `tuple`.
    pub fn ring(&self, tuple: &[usize]) -> &Ring {
        &self.rings[&underlying_set(tuple)]
    }

    pub fn ring_of_set(&self, s: &[usize]) -> Option<&Ring> {
        self.rings.get(s)
    }

    /// Restriction from the ring of `sub` to the ring of `sup` (tuples; sets must nest).
    pub fn restriction(&self, sub: &[usize], sup: &[usize]) -> &RingHom {
        &self.restrictions[&(underlying_set(sub), underlying_set(sup))]
    }

    /// All tuples of length `k + 1` whose underlying set lies in the nerve, lexicographic.
    pub fn nerve_level(&self, k: usize) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut cur: Vec<usize> = Vec::with_capacity(k + 1);
        fn rec(c: &RingedCover, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k + 1 {
                out.push(cur.clone());
                return;
            }
            for i in 0..n {
                cur.push(i);
                if c.in_nerve(cur) {
                    rec(c, n, k, cur, out);
                }
                cur.pop();
            }
        }
        if n > 0 {
            rec(self, n, k, &mut cur, &mut out);
        }
        out
    }
}

/// Every nonempty subset of `0..n`.
pub fn all_subsets(n: usize) -> Vec<IndexSet> {
    (1u32..(1 << n)).map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect()).collect()
}
