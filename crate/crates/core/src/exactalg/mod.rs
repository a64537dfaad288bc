//! Exact coefficient rings, matrices and graded maps.

pub mod field;
pub mod graded;
pub mod hom;
pub mod matrix;
pub mod parse;
pub mod weight;
pub mod ring;

pub use field::{BaseField, FieldElem};
pub use graded::{hom_differential, GradedMap, GradedModule};
pub use hom::RingHom;
pub use matrix::{base_ring, Matrix};
pub use parse::{format_scalar, parse_scalar};
pub use ring::{Elem, Exponent, LaurentDesc, Ring, RingDesc, Scalar};
