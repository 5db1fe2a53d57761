//! Dense real linear-algebra kernels: tolerance-based rank, orthonormal
//! bases, ordered generalized real Schur forms and generalized
//! Sylvester/Lyapunov solvers.

mod basic;
mod qz;
mod sylvester;

pub use basic::*;
pub use qz::{gschur, gschur_ordered, GschurResult};
pub use sylvester::{glyap, gsylv_separation, GsylvSolution};
