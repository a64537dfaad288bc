use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::hom::RingHom;
use crate::exactalg::matrix::{base_ring, Matrix};
use crate::exactalg::ring::{Elem, Exponent, Ring};

/// Finite free graded module, recorded by its rank in each degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedModule {
    ranks: BTreeMap<i32, usize>,
}

impl GradedModule {
    pub fn new(pairs: impl IntoIterator<Item = (i32, usize)>) -> Self {
        let mut ranks = BTreeMap::new();
        for (d, r) in pairs {
            if r > 0 {
                *ranks.entry(d).or_insert(0) += r;
            }
        }
        GradedModule { ranks }
    }

    pub fn zero() -> Self {
        GradedModule::default()
    }

    /// Rank one in degree 0.
    pub fn unit() -> Self {
        GradedModule::new([(0, 1)])
    }

    pub fn rank(&self, d: i32) -> usize {
        self.ranks.get(&d).copied().unwrap_or(0)
    }

    pub fn degrees(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.ranks.iter().map(|(d, r)| (*d, *r))
    }

    pub fn is_zero(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.ranks.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.ranks.keys().next_back().copied()
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        GradedModule::new(self.degrees().chain(other.degrees()))
    }

    /// Offset of degree `d` in the flattened basis (degrees ascending).
    pub fn offset(&self, d: i32) -> usize {
        self.ranks.range(..d).map(|(_, r)| r).sum()
    }
}

impl fmt::Display for GradedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees().map(|(d, r)| format!("{d}:{r}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Homogeneous map of degree `q`; `blocks[d]` sends degree `d` to degree `d + q`.
/// Zero blocks are never stored, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    ring: Ring,
    source: GradedModule,
    target: GradedModule,
    degree: i32,
    blocks: BTreeMap<i32, Matrix>,
}

impl GradedMap {
    pub fn zero(ring: &Ring, source: &GradedModule, target: &GradedModule, degree: i32) -> Self {
        GradedMap {
            ring: ring.clone(),
            source: source.clone(),
            target: target.clone(),
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(ring: &Ring, m: &GradedModule) -> Self {
        let blocks = m.degrees().map(|(d, r)| (d, Matrix::identity(ring, r))).collect();
        GradedMap { ring: ring.clone(), source: m.clone(), target: m.clone(), degree: 0, blocks }
    }

    pub fn from_blocks(
        ring: &Ring,
        source: &GradedModule,
        target: &GradedModule,
        degree: i32,
        blocks: impl IntoIterator<Item = (i32, Matrix)>,
    ) -> Result<Self> {
        let mut f = GradedMap::zero(ring, source, target, degree);
        for (d, m) in blocks {
            f.set_block(d, m)?;
        }
        Ok(f)
    }

    pub fn set_block(&mut self, d: i32, m: Matrix) -> Result<()> {
        if *m.ring() != self.ring {
            return Err(Error::RingMismatch { expected: self.ring.to_string(), found: m.ring().to_string() });
        }
        let shape = (self.target.rank(d + self.degree), self.source.rank(d));
        if (m.rows(), m.cols()) != shape {
            return Err(Error::Shape(format!(
                "block at degree {d} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                shape.0,
                shape.1
            )));
        }
        if m.is_zero() {
            self.blocks.remove(&d);
        } else {
            self.blocks.insert(d, m);
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn source(&self) -> &GradedModule {
        &self.source
    }

    pub fn target(&self) -> &GradedModule {
        &self.target
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn blocks(&self) -> impl Iterator<Item = (i32, &Matrix)> {
        self.blocks.iter().map(|(d, m)| (*d, m))
    }

    /// The block out of degree `d`, zero-filled when absent.
    pub fn block(&self, d: i32) -> Matrix {
        self.blocks
            .get(&d)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(&self.ring, self.target.rank(d + self.degree), self.source.rank(d)))
    }

    pub fn stored_block(&self, d: i32) -> Option<&Matrix> {
        self.blocks.get(&d)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Whether `Hom^q(source, target)` is the zero space.
    pub fn space_is_zero(source: &GradedModule, target: &GradedModule, q: i32) -> bool {
        source.degrees().all(|(d, _)| target.rank(d + q) == 0)
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &GradedMap) -> Result<GradedMap> {
        if g.target != self.source {
            return Err(Error::Shape(format!("compose: {} vs {}", g.target, self.source)));
        }
        if g.ring != self.ring {
            return Err(Error::RingMismatch { expected: self.ring.to_string(), found: g.ring.to_string() });
        }
        let mut out = GradedMap::zero(&self.ring, &g.source, &self.target, self.degree + g.degree);
        for (d, gm) in &g.blocks {
            if let Some(fm) = self.blocks.get(&(d + g.degree)) {
                let p = fm.mul(gm)?;
                if !p.is_zero() {
                    out.blocks.insert(*d, p);
                }
            }
        }
        Ok(out)
    }

    fn check_parallel(&self, other: &GradedMap) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(Error::Shape(format!(
                "maps {} -> {} (deg {}) and {} -> {} (deg {}) are not parallel",
                self.source, self.target, self.degree, other.source, other.target, other.degree
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch { expected: self.ring.to_string(), found: other.ring.to_string() });
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.check_parallel(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &GradedMap) {
        for (d, m) in &other.blocks {
            match self.blocks.get(d) {
                Some(a) => {
                    let s = a.add(m).expect("parallel blocks");
                    if s.is_zero() {
                        self.blocks.remove(d);
                    } else {
                        self.blocks.insert(*d, s);
                    }
                }
                None => {
                    self.blocks.insert(*d, m.clone());
                }
            }
        }
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedMap {
        GradedMap { blocks: self.blocks.iter().map(|(d, m)| (*d, m.neg())).collect(), ..self.clone_shell() }
    }

    /// Multiplies by `±1` without touching entries when the sign is positive.
    pub fn signed(&self, positive: bool) -> GradedMap {
        if positive {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn scale(&self, c: &Elem) -> GradedMap {
        let mut out = self.clone_shell();
        for (d, m) in &self.blocks {
            let s = m.scale(c);
            if !s.is_zero() {
                out.blocks.insert(*d, s);
            }
        }
        out
    }

    fn clone_shell(&self) -> GradedMap {
        GradedMap::zero(&self.ring, &self.source, &self.target, self.degree)
    }

    pub fn apply_hom(&self, h: &RingHom) -> Result<GradedMap> {
        if h.is_identity() && *h.source() == self.ring {
            return Ok(self.clone());
        }
        let mut out = GradedMap::zero(h.target(), &self.source, &self.target, self.degree);
        for (d, m) in &self.blocks {
            let img = m.apply_hom(h)?;
            if !img.is_zero() {
                out.blocks.insert(*d, img);
            }
        }
        Ok(out)
    }

    /// Base-field coefficients of the monomial `x^w` in every block.
    pub fn weight_component(&self, w: &[i32]) -> Result<GradedMap> {
        if self.ring.is_field() {
            return Err(Error::NotLaurent(self.ring.to_string()));
        }
        let base = base_ring(&self.ring);
        let mut out = GradedMap::zero(&base, &self.source, &self.target, self.degree);
        for (d, m) in &self.blocks {
            let c = m.weight_component(w)?;
            if !c.is_zero() {
                out.blocks.insert(*d, c);
            }
        }
        Ok(out)
    }

    pub fn support(&self) -> BTreeSet<Exponent> {
        self.blocks.values().flat_map(|m| m.support()).collect()
    }

    /// The whole map as one matrix on the flattened bases.
    pub fn flatten(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, self.target.total_rank(), self.source.total_rank());
        for (d, m) in &self.blocks {
            let r0 = self.target.offset(d + self.degree);
            let c0 = self.source.offset(*d);
            for (i, j, e) in m.entries() {
                out.set(r0 + i, c0 + j, e.clone());
            }
        }
        out
    }

    /// Changes the recorded ring to an equal one (used after structural comparisons).
    pub fn with_ring(mut self, ring: &Ring) -> Result<GradedMap> {
        if *ring != self.ring {
            return Err(Error::RingMismatch { expected: ring.to_string(), found: self.ring.to_string() });
        }
        self.ring = ring.clone();
        Ok(self)
    }
}

/// Differential of the Hom complex: `d_t ∘ f − (−1)^{|f|} f ∘ d_s`.
pub fn hom_differential(d_target: &GradedMap, f: &GradedMap, d_source: &GradedMap) -> Result<GradedMap> {
    let left = d_target.compose(f)?;
    let right = f.compose(d_source)?;
    if f.degree().rem_euclid(2) == 0 {
        left.sub(&right)
    } else {
        left.add(&right)
    }
}

impl fmt::Display for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg {} map {} -> {}", self.degree, self.source, self.target)?;
        for (d, m) in &self.blocks {
            write!(f, "; [{d}] {m}")?;
        }
        Ok(())
    }
}
