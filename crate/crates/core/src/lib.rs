//! Finite-dimensional frame and Riesz-basis algebra over complex scalars:
//! frame operators and duals, Parseval normalization, Naimark dilation,
//! operator decompositions into unitaries and isomorphisms, l1-norm
//! diagnostics, and generators for explicit frame families.

pub mod check;
pub mod constructions;
pub mod decompose;
pub mod ell1;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod random;

pub use check::Check;
pub use error::{Error, Result};
pub use frames::{DilationResult, Frame, FrameBounds};
pub use linalg::{CMatrix, CVector, TolerancePolicy};
