//! Homotopy probability on the flat 3-torus.
//!
//! The crate is organised bottom-up:
//!
//! - [`graded`]: exact graded-commutative parameter rings (`t`, `dt`, `ε`, `dε`, markers)
//!   with Koszul signs and the ring differential.
//! - [`torus`]: spectral exterior calculus on `[0, 2π)³`: forms, `d`, `⋆`, `δ`, wedge,
//!   vector-calculus correspondences, expectation, harmonic projection and a Poisson solver.
//! - [`decorated`]: forms tensored with a parameter ring, the terminating exponential and
//!   the total differential `δ ⊗ 1 + 1 ⊗ d_R`.
//! - [`hrv`]: builders and residual checkers for the mass, vorticity and Euler
//!   identifications, statistics, helicity and the density homotopy construction.
//! - [`gaussian`]: exact homotopy Gaussian moments by δ-exactness.
//! - [`zoo`]: closed-form fluid states (ABC, shear, Taylor–Green, transport).
//! - [`cli`]: configuration, JSON reports and the command implementations behind `hpt`.

pub mod cli;
pub mod decorated;
pub mod error;
pub mod gaussian;
pub mod graded;
pub mod hrv;
pub mod torus;
pub mod zoo;

pub use error::{Error, Result};
