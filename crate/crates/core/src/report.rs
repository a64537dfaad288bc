use std::fmt;

use crate::cochain::Cell;
use crate::exactalg::GradedMap;
use crate::homotopy::Invertibility;

/// A reason an object fails validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Finding {
    /// A local complex whose differential does not square to zero.
    NotAComplex { vertex: usize },
    /// Nonzero Maurer–Cartan residual at a cell.
    Residual { cell: Cell, residual: GradedMap },
    /// `φ^{1,0}` over a degenerate 1-cell is not the identity.
    UnitViolated { cell: Cell },
    /// A component of level ≥ 2 over a degenerate cell is nonzero.
    DegenerateNonzero { cell: Cell },
    /// `φ^{1,0}` (or `a^{1,0}`) over `cell` is not a homotopy equivalence.
    NotInvertible { cell: Cell },
    /// Malformed data (wrong levels, degrees or families).
    Malformed(String),
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::NotAComplex { vertex } => write!(f, "d∘d ≠ 0 on the local complex at vertex {vertex}"),
            Finding::Residual { cell, residual } => write!(f, "MC residual at {cell:?}: {residual}"),
            Finding::UnitViolated { cell } => write!(f, "component at {cell:?} must be the identity"),
            Finding::DegenerateNonzero { cell } => write!(f, "component at degenerate cell {cell:?} must vanish"),
            Finding::NotInvertible { cell } => write!(f, "component at {cell:?} is not invertible up to homotopy"),
            Finding::Malformed(s) => write!(f, "malformed: {s}"),
        }
    }
}

/// Outcome of a Maurer–Cartan validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct McReport {
    pub findings: Vec<Finding>,
    /// Non-degeneracy checks that could not be decided.
    pub inconclusive: Vec<Cell>,
    /// Highest simplicial level at which the residual can be nonzero.
    pub max_level: usize,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn first_residual(&self) -> Option<(&Cell, &GradedMap)> {
        self.findings.iter().find_map(|f| match f {
            Finding::Residual { cell, residual } => Some((cell, residual)),
            _ => None,
        })
    }

    pub fn has_residual(&self) -> bool {
        self.first_residual().is_some()
    }

    pub(crate) fn record_invertibility(&mut self, cell: Cell, status: Invertibility) {
        match status {
            Invertibility::Invertible => {}
            Invertibility::NotInvertible => self.findings.push(Finding::NotInvertible { cell }),
            Invertibility::Inconclusive => self.inconclusive.push(cell),
        }
    }
}

impl fmt::Display for McReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "pass (levels ≤ {})", self.max_level)?;
        } else {
            write!(f, "FAIL: {}", self.findings[0])?;
            if self.findings.len() > 1 {
                write!(f, " (+{} more)", self.findings.len() - 1)?;
            }
        }
        if !self.inconclusive.is_empty() {
            write!(f, "; invertibility inconclusive at {:?}", self.inconclusive)?;
        }
        Ok(())
    }
}
