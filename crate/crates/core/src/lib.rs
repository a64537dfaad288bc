pub mod cochain;
pub mod cohomology;
pub mod dgresolution;
pub mod equivariant;
pub mod error;
pub mod exactalg;
pub mod homotopy;
pub mod par;
pub mod random;
pub mod report;
pub mod simplicial;
pub mod totalization;
pub mod twisted;

pub use error::{Error, Result};
