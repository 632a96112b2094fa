//! Numerical toolkit for Ingham-type uncertainty principles.
//!
//! The crate is organised bottom-up:
//!
//! - [`grid`]: uniform-grid functions, Fourier transforms with the kernel
//!   `exp(-2πi x·ξ)`, norms, convolution and slice transforms.
//! - [`quadrature`]: adaptive Gauss-Kronrod and composite Gauss-Legendre rules.
//! - [`weights`]: decay profiles ψ and the criterion integral `∫₁^∞ ψ(t)/t² dt`.
//! - [`synthesis`]: Ingham products of sinc factors, mollification and the
//!   weighted-`L^q` convolution reduction.
//! - [`vanish`]: half-space support tests and the log⁺/log⁻ log-integral machinery.
//! - [`nilpotent`]: structure-constant Lie algebras, BCH products, coadjoint
//!   forms, jump indices and Pfaffians.
//! - [`heisenberg`]: Schrödinger-model Fourier transforms on `H_n`, the
//!   Plancherel formula and the central-convolution construction.
//! - [`cli`]: the `ingham` command-line front end.

pub mod cli;
pub mod error;
pub mod grid;
pub mod heisenberg;
pub mod io;
pub mod nilpotent;
pub mod quadrature;
pub mod synthesis;
pub mod vanish;
pub mod weights;

mod piecewise;

pub use error::{Error, ErrorKind, Result};
