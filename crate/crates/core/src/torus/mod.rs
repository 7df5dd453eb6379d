//! Spectral exterior calculus on the flat torus `[0, 2π)³`.

mod bv;
mod form;
mod grid;
mod io;
mod ops;
mod random;

pub use bv::bv_seven_term_residual;
pub use form::{component_count, Form, VectorField};
pub use grid::Grid;
pub use io::{format_form, parse_form, read_form, write_form};
pub use ops::{
    codifferential, cross, curl, divergence, expectation, exterior_derivative, flat, gradient,
    harmonic_projection, hodge_star, integrate, poisson_solve, sharp, wedge,
};
pub use random::random_bandlimited;
