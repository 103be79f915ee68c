//! Exact-arithmetic workbench for the ((3,3,2))₃ code, the 4-qutrit AME state,
//! their transversal-gate and local-symmetry groups, the Weyl-group invariants,
//! and Kempf–Ness criticality.
//!
//! Sites are indexed from 0 throughout the library; site 0 is the slowest index
//! of a state's amplitude array.

pub mod constants;
pub mod correspondence;
pub mod cyclo;
pub mod error;
pub mod groups;
pub mod invariants;
pub mod io;
pub mod kempfness;
pub mod linalg;
pub mod qecc;
pub mod tensor;

pub use cyclo::{Cyclo, DEFAULT_CONDUCTOR};
pub use error::{Error, Result};
pub use linalg::Matrix;
pub use tensor::{DensityOperator, LocalOperator, PureState};
