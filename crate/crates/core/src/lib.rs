//! Fractional maximal operators and Lorentz norms on homogeneous trees,
//! computed in arbitrary precision.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod io;
pub mod lorentz;
pub mod maximal;
pub mod numerics;
pub mod theory;

pub use error::{Error, Result};
pub use geometry::{TreeParams, VertexAddress};
pub use lorentz::{FiniteFunction, LorentzIndex, RadialFunction, Tail};
pub use maximal::{MaximalParams, RadialKernel, RadiusPolicy};
pub use numerics::LogScalar;
pub use rug::Integer;
