//! Exterior calculus operators on the flat torus.
//!
//! Derivatives are spectral: transform, multiply by `i k`, transform back. They are
//! exact to round-off for fields whose Fourier support stays below the Nyquist mode.

use rustfft::num_complex::Complex64;

use super::form::{Form, VectorField};
use super::grid::Grid;
use crate::{Error, Result};

/// Spectral partial derivatives `∂_axis` applied in Fourier space.
fn apply_ik(grid: &Grid, spec: &[Complex64], axis: usize) -> Vec<Complex64> {
    let n = grid.n();
    let mut out = vec![Complex64::default(); spec.len()];
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let idx = grid.index(i, j, k);
                let wave = match axis {
                    0 => grid.derivative_wavenumber(i),
                    1 => grid.derivative_wavenumber(j),
                    _ => grid.derivative_wavenumber(k),
                };
                out[idx] = spec[idx] * Complex64::new(0.0, wave);
            }
        }
    }
    out
}

fn combine(a: &[Complex64], b: &[Complex64], sa: f64, sb: f64) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| x * sa + y * sb).collect()
}

/// `d: Ω^k → Ω^{k+1}`. Errors on 3-forms.
pub fn exterior_derivative(form: &Form) -> Result<Form> {
    let grid = form.grid();
    let comps = match form.degree() {
        0 => {
            let spec = grid.forward(form.component(0));
            (0..3).map(|axis| grid.inverse(apply_ik(grid, &spec, axis))).collect()
        }
        1 => {
            let s: Vec<_> = form.components().iter().map(|c| grid.forward(c)).collect();
            let d = |comp: usize, axis: usize| apply_ik(grid, &s[comp], axis);
            vec![
                grid.inverse(combine(&d(2, 1), &d(1, 2), 1.0, -1.0)),
                grid.inverse(combine(&d(0, 2), &d(2, 0), 1.0, -1.0)),
                grid.inverse(combine(&d(1, 0), &d(0, 1), 1.0, -1.0)),
            ]
        }
        2 => {
            let mut total = vec![Complex64::default(); grid.len()];
            for axis in 0..3 {
                let spec = grid.forward(form.component(axis));
                for (t, v) in total.iter_mut().zip(apply_ik(grid, &spec, axis)) {
                    *t += v;
                }
            }
            vec![grid.inverse(total)]
        }
        k => return Err(Error::DegreeOverflow(k + 1)),
    };
    Form::from_components(grid, form.degree() + 1, comps)
}

/// `⋆: Ω^k → Ω^{3−k}`. In the chosen frame bases this keeps the component arrays.
pub fn hodge_star(form: &Form) -> Form {
    Form::from_components(form.grid(), 3 - form.degree(), form.components().to_vec())
        .expect("hodge star preserves component count")
}

/// `δ = (−1)^{3k+1} ⋆ d ⋆` on k-forms.
///
/// There are no (−1)-forms, so the codifferential of a function is reported as
/// the zero function.
pub fn codifferential(form: &Form) -> Form {
    let k = form.degree();
    if k == 0 {
        return Form::zero(form.grid(), 0);
    }
    let inner = exterior_derivative(&hodge_star(form)).expect("⋆ of a k ≥ 1 form has degree ≤ 2");
    let out = hodge_star(&inner);
    if (3 * k + 1) % 2 == 0 {
        out
    } else {
        out.scale(-1.0)
    }
}

/// Pointwise exterior product. Errors when the degrees sum past 3.
pub fn wedge(a: &Form, b: &Form) -> Result<Form> {
    if *a.grid() != *b.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = a.grid();
    let p = |x: &[f64], y: &[f64]| grid.product(x, y);
    let sub = |x: Vec<f64>, y: Vec<f64>| -> Vec<f64> { x.iter().zip(&y).map(|(u, v)| u - v).collect() };
    let degree = a.degree() + b.degree();
    let comps = match (a.degree(), b.degree()) {
        (0, _) => b.components().iter().map(|c| p(a.component(0), c)).collect(),
        (_, 0) => a.components().iter().map(|c| p(c, b.component(0))).collect(),
        (1, 1) => {
            let (x, y) = (a.components(), b.components());
            vec![
                sub(p(&x[1], &y[2]), p(&x[2], &y[1])),
                sub(p(&x[2], &y[0]), p(&x[0], &y[2])),
                sub(p(&x[0], &y[1]), p(&x[1], &y[0])),
            ]
        }
        (1, 2) | (2, 1) => {
            let mut total = vec![0.0; grid.len()];
            for i in 0..3 {
                for (t, v) in total.iter_mut().zip(p(a.component(i), b.component(i))) {
                    *t += v;
                }
            }
            vec![total]
        }
        _ => return Err(Error::DegreeOverflow(degree)),
    };
    Form::from_components(grid, degree, comps)
}

/// `u ↦ u♭`: identity on components in the orthonormal frame.
pub fn flat(u: &VectorField) -> Form {
    Form::from_components(u.grid(), 1, u.components().to_vec()).expect("three components")
}

/// `ω ↦ ω♯` for 1-forms.
pub fn sharp(form: &Form) -> Result<VectorField> {
    if form.degree() != 1 {
        return Err(Error::DegreeError { expected: 1, found: form.degree() as i32 });
    }
    let c = form.components();
    VectorField::new(form.grid(), [c[0].clone(), c[1].clone(), c[2].clone()])
}

/// `∇f = (df)♯`.
pub fn gradient(f: &Form) -> Result<VectorField> {
    if f.degree() != 0 {
        return Err(Error::DegreeError { expected: 0, found: f.degree() as i32 });
    }
    sharp(&exterior_derivative(f)?)
}

/// `div u = δ(u♭)`.
pub fn divergence(u: &VectorField) -> Form {
    codifferential(&flat(u))
}

/// `curl u = (⋆ d u♭)♯`.
pub fn curl(u: &VectorField) -> VectorField {
    let d = exterior_derivative(&flat(u)).expect("1-form");
    sharp(&hodge_star(&d)).expect("⋆ of a 2-form is a 1-form")
}

/// `u × v = (⋆(u♭ ∧ v♭))♯`.
pub fn cross(u: &VectorField, v: &VectorField) -> VectorField {
    let w = wedge(&flat(u), &flat(v)).expect("1 ∧ 1 fits");
    sharp(&hodge_star(&w)).expect("⋆ of a 2-form is a 1-form")
}

/// `∫_M ω` for a 3-form (grid sum times cell volume).
pub fn integrate(form: &Form) -> Result<f64> {
    if form.degree() != 3 {
        return Err(Error::DegreeError { expected: 3, found: form.degree() as i32 });
    }
    Ok(form.component(0).iter().sum::<f64>() * form.grid().cell_volume())
}

/// Unit-volume expectation: `∫ ⋆f / (2π)³` on functions, zero on higher forms.
pub fn expectation(form: &Form) -> f64 {
    if form.degree() != 0 {
        return 0.0;
    }
    integrate(&hodge_star(form)).expect("⋆ of a function is a 3-form") / form.grid().volume()
}

/// Orthogonal projection onto harmonic forms, which on the flat torus are the
/// constant-coefficient forms.
pub fn harmonic_projection(form: &Form) -> Form {
    Form::constant(form.grid(), form.degree(), &form.component_means())
}

/// Solves `δ d φ = h` for zero-mean `φ`, mode by mode.
///
/// `δ d` on functions is the sum of second derivatives, so each mode is divided
/// by `−|k|²`. Errors when `|mean(h)| > tol_mean`.
pub fn poisson_solve(h: &Form, tol_mean: f64) -> Result<Form> {
    if h.degree() != 0 {
        return Err(Error::DegreeError { expected: 0, found: h.degree() as i32 });
    }
    let mean = h.component_means()[0];
    if mean.abs() > tol_mean {
        return Err(Error::MeanError { mean, tol: tol_mean });
    }
    let grid = h.grid();
    let n = grid.n();
    let mut spec = grid.forward(h.component(0));
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                let idx = grid.index(i, j, k);
                let k2 = [i, j, k].iter().map(|&m| grid.derivative_wavenumber(m).powi(2)).sum::<f64>();
                spec[idx] = if k2 == 0.0 { Complex64::default() } else { spec[idx] / -k2 };
            }
        }
    }
    Form::from_components(grid, 0, vec![grid.inverse(spec)])
}
