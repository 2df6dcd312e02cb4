//! Exact-arithmetic workbench for metric symplectic Lie algebras.
//!
//! Everything is computed over arbitrary-precision rationals; there are no
//! floating-point numbers and no tolerances anywhere. The crate builds up
//! from exact linear algebra (`matrix`, `poly`, `jordan`, `subspace`)
//! through Lie-theoretic structures (`lie`, `pair`), the cochain calculus
//! (`cochain`), the quadratic-extension machinery (`quadext`), and the
//! low-dimensional catalog with its verification pipeline (`catalog`).

pub mod catalog;
pub mod cochain;
pub mod error;
pub mod jordan;
pub mod lie;
pub mod matrix;
pub mod pair;
pub mod poly;
pub mod quadext;
pub mod report;
pub mod sampling;
pub mod subspace;

pub use error::{Error, Result};
pub use jordan::{char_poly, is_nilpotent, jordan_chevalley, min_poly, JordanChevalley};
pub use matrix::{kernel_basis, rat, ratio, signature, solve_linear, Matrix, Rat};
pub use poly::Poly;
pub use report::{Check, Report};
pub use subspace::Subspace;
