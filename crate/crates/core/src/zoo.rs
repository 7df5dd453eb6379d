//! Closed-form fluid states on the torus and random divergence-free fields.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::decorated::Family;
use crate::hrv::FluidState;
use crate::torus::{divergence, flat, gradient, random_bandlimited, sharp, Form, Grid, VectorField};
use crate::{Error, Result};

/// `amplitude · cos(k·x + phase)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mode {
    pub amplitude: f64,
    pub k: [i32; 3],
    pub phase: f64,
}

impl Mode {
    pub fn new(amplitude: f64, k: [i32; 3], phase: f64) -> Mode {
        Mode { amplitude, k, phase }
    }

    fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        let arg = self.k[0] as f64 * x + self.k[1] as f64 * y + self.k[2] as f64 * z + self.phase;
        self.amplitude * arg.cos()
    }
}

/// A positive density profile with Fourier support at wavenumber at most 2.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub mean: f64,
    pub modes: Vec<Mode>,
}

const PROFILE_CHECK_N: usize = 32;

impl Profile {
    pub fn new(mean: f64, modes: Vec<Mode>) -> Result<Profile> {
        if let Some(m) = modes.iter().find(|m| m.k.iter().any(|k| k.abs() > 2)) {
            return Err(Error::ConstructionError(format!("profile mode {:?} exceeds wavenumber 2", m.k)));
        }
        let p = Profile { mean, modes };
        let grid = Grid::new(PROFILE_CHECK_N)?;
        let min = Form::function(&grid, |x, y, z| p.eval(x, y, z)).min_value();
        if min <= 0.0 {
            return Err(Error::DensityError(min));
        }
        Ok(p)
    }

    /// `1 + 0.25 sin x + 0.2 cos 2y + 0.1 cos(x + z)`.
    pub fn default_transport() -> Profile {
        Profile::new(
            1.0,
            vec![
                Mode::new(0.25, [1, 0, 0], -std::f64::consts::FRAC_PI_2),
                Mode::new(0.2, [0, 2, 0], 0.0),
                Mode::new(0.1, [1, 0, 1], 0.0),
            ],
        )
        .expect("default profile is positive")
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> f64 {
        self.mean + self.modes.iter().map(|m| m.eval(x, y, z)).sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticField {
    /// Arnold–Beltrami–Childress flow, `curl u = u`, with `p = −|u|²/2`.
    Abc { a: f64, b: f64, c: f64 },
    /// `u = (a sin y, 0, 0)`, `p = 0`.
    Shear { amplitude: f64 },
    /// Planar Taylor–Green cell with pressure `c₁ cos 2x + c₂ cos 2y`.
    TaylorGreen { c1: f64, c2: f64 },
    /// `ρ = g(x − u₀t)`, `u = u₀`, `p = 0`.
    Transport { profile: Profile, u0: [f64; 3] },
}

pub fn abc_flow(a: f64, b: f64, c: f64) -> AnalyticField {
    AnalyticField::Abc { a, b, c }
}

pub fn shear_flow(amplitude: f64) -> AnalyticField {
    AnalyticField::Shear { amplitude }
}

pub const DEFAULT_TRANSPORT_VELOCITY: [f64; 3] = [0.5, 0.25, -0.25];

pub fn transport_solution(profile: Profile, u0: [f64; 3]) -> AnalyticField {
    AnalyticField::Transport { profile, u0 }
}

const TAYLOR_GREEN_FIT_N: usize = 32;
const TAYLOR_GREEN_FIT_TOL: f64 = 1e-8;

/// The Taylor–Green cell with its pressure fitted by least squares over
/// `p = c₁ cos 2x + c₂ cos 2y` against the momentum residual.
pub fn taylor_green_2d() -> Result<AnalyticField> {
    let grid = Grid::new(TAYLOR_GREEN_FIT_N)?;
    let sample = |c1, c2| AnalyticField::TaylorGreen { c1, c2 }.sample(&grid, &[0.0]);
    let r0 = euler_momentum_residual(&sample(0.0, 0.0)?)?.remove(0);
    let g1 = &euler_momentum_residual(&sample(1.0, 0.0)?)?[0];
    let g2 = &euler_momentum_residual(&sample(0.0, 1.0)?)?[0];
    let basis = [g1.sub(&r0), g2.sub(&r0)];
    let dot = |a: &VectorField, b: &VectorField| -> f64 {
        a.components().iter().zip(b.components()).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>()).sum()
    };
    let m = [[dot(&basis[0], &basis[0]), dot(&basis[0], &basis[1])], [dot(&basis[1], &basis[0]), dot(&basis[1], &basis[1])]];
    let rhs = [-dot(&basis[0], &r0), -dot(&basis[1], &r0)];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() < f64::EPSILON {
        return Err(Error::ConstructionError("singular pressure fit".into()));
    }
    let c1 = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
    let c2 = (m[0][0] * rhs[1] - m[1][0] * rhs[0]) / det;
    let residual = euler_momentum_residual(&sample(c1, c2)?)?[0].sup_norm();
    if residual > TAYLOR_GREEN_FIT_TOL {
        return Err(Error::ConstructionError(format!("pressure fit leaves residual {residual:e}")));
    }
    Ok(AnalyticField::TaylorGreen { c1, c2 })
}

impl AnalyticField {
    pub fn name(&self) -> &'static str {
        match self {
            AnalyticField::Abc { .. } => "abc",
            AnalyticField::Shear { .. } => "shear",
            AnalyticField::TaylorGreen { .. } => "taylor-green",
            AnalyticField::Transport { .. } => "transport",
        }
    }

    pub fn parameters(&self) -> BTreeMap<String, f64> {
        let mut p = BTreeMap::new();
        match self {
            AnalyticField::Abc { a, b, c } => {
                p.insert("A".into(), *a);
                p.insert("B".into(), *b);
                p.insert("C".into(), *c);
            }
            AnalyticField::Shear { amplitude } => {
                p.insert("amplitude".into(), *amplitude);
            }
            AnalyticField::TaylorGreen { c1, c2 } => {
                p.insert("c1".into(), *c1);
                p.insert("c2".into(), *c2);
            }
            AnalyticField::Transport { profile, u0 } => {
                p.insert("mean".into(), profile.mean);
                for (i, v) in u0.iter().enumerate() {
                    p.insert(format!("u0_{i}"), *v);
                }
            }
        }
        p
    }

    pub fn is_steady(&self) -> bool {
        !matches!(self, AnalyticField::Transport { .. })
    }

    pub fn density(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        match self {
            AnalyticField::Transport { profile, u0 } => profile.eval(x - u0[0] * t, y - u0[1] * t, z - u0[2] * t),
            _ => 1.0,
        }
    }

    pub fn velocity(&self, x: f64, y: f64, z: f64, _t: f64) -> [f64; 3] {
        match self {
            AnalyticField::Abc { a, b, c } => {
                [a * z.sin() + c * y.cos(), b * x.sin() + a * z.cos(), c * y.sin() + b * x.cos()]
            }
            AnalyticField::Shear { amplitude } => [amplitude * y.sin(), 0.0, 0.0],
            AnalyticField::TaylorGreen { .. } => [x.sin() * y.cos(), -x.cos() * y.sin(), 0.0],
            AnalyticField::Transport { u0, .. } => *u0,
        }
    }

    pub fn pressure(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        match self {
            AnalyticField::Abc { .. } => {
                let u = self.velocity(x, y, z, t);
                -0.5 * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2])
            }
            AnalyticField::TaylorGreen { c1, c2 } => c1 * (2.0 * x).cos() + c2 * (2.0 * y).cos(),
            _ => 0.0,
        }
    }

    pub fn sample(&self, grid: &Arc<Grid>, times: &[f64]) -> Result<FluidState> {
        let rho = times.iter().map(|&t| Form::function(grid, |x, y, z| self.density(x, y, z, t))).collect();
        let u = times.iter().map(|&t| VectorField::from_fn(grid, |x, y, z| self.velocity(x, y, z, t))).collect();
        let p = times.iter().map(|&t| Form::function(grid, |x, y, z| self.pressure(x, y, z, t))).collect();
        FluidState::new(times.to_vec(), rho, u, p)
    }
}

/// `n + 1` equally spaced times on `[0, t_end]`.
pub fn uniform_times(t_end: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t_end * i as f64 / n as f64).collect()
}

fn velocity_rate(s: &FluidState) -> Result<Vec<VectorField>> {
    let fam = Family::new(s.times.clone(), s.u.iter().map(flat).collect())?;
    fam.time_derivative().forms().iter().map(sharp).collect()
}

/// `(u·∇)u`, componentwise from the gradients of the velocity components.
pub fn advection(u: &VectorField) -> Result<VectorField> {
    let grid = u.grid();
    let grads = u
        .components()
        .iter()
        .map(|c| gradient(&Form::from_components(grid, 0, vec![c.clone()])?))
        .collect::<Result<Vec<_>>>()?;
    let mut out = [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, uj) in u.components().iter().enumerate() {
            let d = &grads[i].components()[j];
            for (o, (a, b)) in row.iter_mut().zip(uj.iter().zip(d)) {
                *o += a * b;
            }
        }
    }
    VectorField::new(grid, out)
}

/// `∂_t u + (u·∇)u + ∇p/ρ` per sample time, in plain vector calculus.
pub fn euler_momentum_residual(s: &FluidState) -> Result<Vec<VectorField>> {
    let rates = velocity_rate(s)?;
    s.u.iter()
        .zip(&s.p)
        .zip(&s.rho)
        .zip(rates)
        .map(|(((u, p), rho), rate)| {
            let adv = advection(u)?;
            let gp = gradient(p)?.times_function(&rho.map(|r| 1.0 / r));
            let [a, b, c] = rate.into_components();
            let sum = |k: usize, base: Vec<f64>| -> Vec<f64> {
                base.iter().zip(&adv.components()[k]).zip(&gp.components()[k]).map(|((x, y), z)| x + y + z).collect()
            };
            VectorField::new(u.grid(), [sum(0, a), sum(1, b), sum(2, c)])
        })
        .collect()
}

/// `∂_t ρ + div(ρu)` per sample time.
pub fn mass_residual(s: &FluidState) -> Result<Vec<Form>> {
    let rate = s.density().time_derivative();
    s.u.iter()
        .zip(&s.rho)
        .zip(rate.forms())
        .map(|((u, rho), r)| r.try_add(&divergence(&u.times_function(rho))))
        .collect()
}

/// A random divergence-free velocity with Fourier support `|k|_∞ ≤ kmax`.
pub fn random_divfree(grid: &Arc<Grid>, kmax: usize, seed: u64) -> Result<VectorField> {
    sharp(&random_bandlimited(grid, 1, kmax, seed, true)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{curl, divergence};

    /// Hand-differentiated ABC components: `∂_j u_i`.
    fn abc_jacobian(a: f64, b: f64, c: f64, x: f64, y: f64, z: f64) -> [[f64; 3]; 3] {
        [
            [0.0, -c * y.sin(), a * z.cos()],
            [b * x.cos(), 0.0, -a * z.sin()],
            [-b * x.sin(), c * y.cos(), 0.0],
        ]
    }

    #[test]
    fn abc_is_divergence_free_and_beltrami() {
        let g = Grid::new(32).unwrap();
        let (a, b, c) = (1.0, 1.0, 1.0);
        let field = abc_flow(a, b, c);
        let s = field.sample(&g, &[0.0]).unwrap();
        let u = &s.u[0];
        let div = divergence(u);
        let w = curl(u);
        for (idx, [x, y, z]) in g.points() {
            let jac = abc_jacobian(a, b, c, x, y, z);
            let div_oracle = jac[0][0] + jac[1][1] + jac[2][2];
            let curl_oracle = [jac[2][1] - jac[1][2], jac[0][2] - jac[2][0], jac[1][0] - jac[0][1]];
            assert!((div.component(0)[idx] - div_oracle).abs() < 1e-12);
            let uv = field.velocity(x, y, z, 0.0);
            for k in 0..3 {
                assert!((w.components()[k][idx] - curl_oracle[k]).abs() < 1e-12);
                assert!((curl_oracle[k] - uv[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn abc_momentum_residual() {
        let g = Grid::new(32).unwrap();
        let s = abc_flow(1.0, 0.7, 0.3).sample(&g, &[0.0]).unwrap();
        assert!(euler_momentum_residual(&s).unwrap()[0].sup_norm() <= 1e-10);
    }

    #[test]
    fn shear_is_divergence_free() {
        let g = Grid::new(16).unwrap();
        let s = shear_flow(1.0).sample(&g, &[0.0]).unwrap();
        assert!(divergence(&s.u[0]).sup_norm() < 1e-14);
        assert!(euler_momentum_residual(&s).unwrap()[0].sup_norm() <= 1e-12);
    }

    #[test]
    fn taylor_green_fit() {
        let AnalyticField::TaylorGreen { c1, c2 } = taylor_green_2d().unwrap() else { panic!() };
        assert!((c1 - 0.25).abs() < 1e-12 && (c2 - 0.25).abs() < 1e-12, "{c1} {c2}");
        let g = Grid::new(16).unwrap();
        let s = AnalyticField::TaylorGreen { c1, c2 }.sample(&g, &[0.0]).unwrap();
        assert!(divergence(&s.u[0]).sup_norm() < 1e-13);
        assert!(s.u[0].components()[2].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn transport_is_exact() {
        let g = Grid::new(32).unwrap();
        let field = transport_solution(Profile::default_transport(), DEFAULT_TRANSPORT_VELOCITY);
        let s = field.sample(&g, &uniform_times(1.0, 64)).unwrap();
        let mass = mass_residual(&s).unwrap().iter().map(Form::sup_norm).fold(0.0, f64::max);
        assert!(mass <= 1e-8, "{mass:e}");
        let mom = euler_momentum_residual(&s).unwrap().iter().map(VectorField::sup_norm).fold(0.0, f64::max);
        assert!(mom <= 1e-12);
        let e0 = crate::torus::expectation(&s.rho[0]);
        let e1 = crate::torus::expectation(&s.rho[64]);
        assert!((e0 - e1).abs() < 1e-10);
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(Profile::new(0.1, vec![Mode::new(0.5, [1, 0, 0], 0.0)]), Err(Error::DensityError(_))));
        assert!(matches!(Profile::new(2.0, vec![Mode::new(0.5, [3, 0, 0], 0.0)]), Err(Error::ConstructionError(_))));
    }

    #[test]
    fn random_divfree_properties() {
        let g = Grid::new(16).unwrap();
        let u = random_divfree(&g, 3, 11).unwrap();
        assert!(divergence(&u).sup_norm() <= 1e-12);
        assert_eq!(random_divfree(&g, 3, 11).unwrap().components(), u.components());
        assert!(random_divfree(&g, 5, 11).is_err());
    }
}
