//! Seeded checks of the exterior-calculus identities on random band-limited forms.

use std::sync::Arc;

use serde::Serialize;

use crate::torus::{
    bv_seven_term_residual, codifferential, curl, divergence, expectation, exterior_derivative, gradient,
    hodge_star, random_bandlimited, sharp, Form, Grid,
};
use crate::Result;

#[derive(Clone, Debug)]
pub struct DecConfig {
    pub n: usize,
    pub kmax: usize,
    pub samples: usize,
    pub seed: u64,
    /// Negative control: use `−δ` in place of `δ`.
    pub flip_codifferential_sign: bool,
}

impl Default for DecConfig {
    fn default() -> Self {
        DecConfig { n: 16, kmax: 2, samples: 10, seed: 0, flip_codifferential_sign: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Largest relative deviation over all samples.
    pub max: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub pass: bool,
}

pub const TOL_DELTA_SQUARED: f64 = 1e-12;
pub const TOL_IDENTITY: f64 = 1e-10;

/// Per-form wavenumber keeping a threefold product below the Nyquist mode.
pub fn bv_wavenumber(n: usize, kmax: usize) -> usize {
    kmax.min((n / 2 - 1) / 3)
}

struct Suite {
    grid: Arc<Grid>,
    cfg: DecConfig,
}

impl Suite {
    fn random(&self, degree: usize, kmax: usize, case: usize, slot: u64) -> Result<Form> {
        let seed = self
            .cfg
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add((case as u64) << 8)
            .wrapping_add(slot * 16 + degree as u64);
        random_bandlimited(&self.grid, degree, kmax, seed, false)
    }

    fn delta(&self, f: &Form) -> Form {
        let d = codifferential(f);
        if self.cfg.flip_codifferential_sign {
            d.scale(-1.0)
        } else {
            d
        }
    }

    fn check(&self, name: &str, tolerance: f64, mut f: impl FnMut(usize) -> Result<Vec<f64>>) -> Result<CheckResult> {
        let mut max: f64 = 0.0;
        let mut cases = 0;
        for case in 0..self.cfg.samples {
            for v in f(case)? {
                max = max.max(if v.is_nan() { f64::INFINITY } else { v });
                cases += 1;
            }
        }
        Ok(CheckResult { name: name.into(), max, tolerance, cases, pass: max <= tolerance })
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a
    } else {
        a / b
    }
}

pub fn run_dec_suite(cfg: &DecConfig) -> Result<Vec<CheckResult>> {
    let grid = Grid::new(cfg.n)?;
    let s = Suite { grid, cfg: cfg.clone() };
    let k = cfg.kmax;
    let mut out = Vec::new();

    out.push(s.check("delta-squared", TOL_DELTA_SQUARED, |case| {
        (1..=3)
            .map(|deg| {
                let w = s.random(deg, k, case, 0)?;
                Ok(ratio(s.delta(&s.delta(&w)).sup_norm(), w.sup_norm()))
            })
            .collect()
    })?);

    out.push(s.check("star-star", 0.0, |case| {
        (0..=3)
            .map(|deg| {
                let w = s.random(deg, k, case, 1)?;
                Ok((&hodge_star(&hodge_star(&w)) - &w).sup_norm())
            })
            .collect()
    })?);

    out.push(s.check("curl-grad", TOL_IDENTITY, |case| {
        let f = s.random(0, k, case, 2)?;
        Ok(vec![ratio(curl(&gradient(&f)?).sup_norm(), f.sup_norm())])
    })?);

    out.push(s.check("div-curl", TOL_IDENTITY, |case| {
        let u = sharp(&s.random(1, k, case, 3)?)?;
        Ok(vec![ratio(divergence(&curl(&u)).sup_norm(), u.sup_norm())])
    })?);

    out.push(s.check("adjointness", TOL_IDENTITY, |case| {
        (1..=3)
            .map(|deg| {
                let a = s.random(deg - 1, k, case, 4)?;
                let b = s.random(deg, k, case, 5)?;
                let da = exterior_derivative(&a)?;
                let db = s.delta(&b);
                let scale = da.l2_norm() * b.l2_norm() + a.l2_norm() * db.l2_norm();
                Ok(ratio((da.l2_inner(&b) + a.l2_inner(&db)).abs(), scale))
            })
            .collect()
    })?);

    out.push(s.check("expectation-delta", TOL_DELTA_SQUARED, |case| {
        let a = s.random(1, k, case, 6)?;
        Ok(vec![ratio(expectation(&s.delta(&a)).abs(), a.sup_norm())])
    })?);

    let kb = bv_wavenumber(cfg.n, k);
    out.push(s.check("bv-seven-term", TOL_IDENTITY, |case| {
        let mut residuals = Vec::new();
        for (p, q, r) in [(0, 1, 1), (1, 1, 1), (0, 0, 2), (1, 2, 0), (0, 1, 2), (1, 0, 1)] {
            let unit = |deg, slot| -> Result<Form> {
                let f = s.random(deg, kb, case, slot)?;
                let m = f.sup_norm();
                Ok(if m > 0.0 { f.scale(1.0 / m) } else { f })
            };
            let (a, b, c) = (unit(p, 7)?, unit(q, 8)?, unit(r, 9)?);
            residuals.push(bv_seven_term_residual(&a, &b, &c));
        }
        Ok(residuals)
    })?);

    Ok(out)
}
