use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use super::form::{component_count, Form};
use super::grid::Grid;
use crate::{Error, Result};

/// Deterministic pseudo-random form with Fourier support on `|k|_∞ ≤ kmax`.
///
/// Coefficients are uniform in `[-1, 1]` (real and imaginary parts) per mode and
/// component. With `divergence_free` (1-forms only) each mode's coefficient
/// vector is projected orthogonally to its wavevector, so `δ` of the result
/// vanishes mode by mode.
pub fn random_bandlimited(
    grid: &Arc<Grid>,
    degree: usize,
    kmax: usize,
    seed: u64,
    divergence_free: bool,
) -> Result<Form> {
    let limit = grid.n() / 4;
    if kmax > limit {
        return Err(Error::BandLimitError { kmax, limit });
    }
    if degree > 3 {
        return Err(Error::DegreeOverflow(degree));
    }
    if divergence_free && degree != 1 {
        return Err(Error::Precondition("divergence-free sampling applies to 1-forms only".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ncomp = component_count(degree);
    let n = grid.n() as i64;
    let scale = grid.len() as f64;
    let mut specs = vec![vec![Complex64::default(); grid.len()]; ncomp];
    let km = kmax as i64;
    let wrap = |k: i64| k.rem_euclid(n) as usize;

    for kz in -km..=km {
        for ky in -km..=km {
            for kx in -km..=km {
                // one representative per ±k pair; the zero mode is real
                let key = (kz, ky, kx);
                if key < (0, 0, 0) {
                    continue;
                }
                let mut coeffs: Vec<Complex64> = (0..ncomp)
                    .map(|_| {
                        let re = rng.gen_range(-1.0..=1.0);
                        let im = if key == (0, 0, 0) { 0.0 } else { rng.gen_range(-1.0..=1.0) };
                        Complex64::new(re, im)
                    })
                    .collect();
                if divergence_free && key != (0, 0, 0) {
                    let kv = [kx as f64, ky as f64, kz as f64];
                    let k2: f64 = kv.iter().map(|v| v * v).sum();
                    let dot: Complex64 = coeffs.iter().zip(&kv).map(|(c, k)| c * k).sum();
                    for (c, k) in coeffs.iter_mut().zip(&kv) {
                        *c -= dot * (*k / k2);
                    }
                }
                let idx = grid.index(wrap(kx), wrap(ky), wrap(kz));
                let neg = grid.index(wrap(-kx), wrap(-ky), wrap(-kz));
                for (spec, c) in specs.iter_mut().zip(&coeffs) {
                    if key == (0, 0, 0) {
                        spec[idx] = c * scale;
                    } else {
                        spec[idx] = c * scale;
                        spec[neg] = c.conj() * scale;
                    }
                }
            }
        }
    }
    let comps = specs.into_iter().map(|s| grid.inverse(s)).collect();
    Form::from_components(grid, degree, comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::codifferential;

    #[test]
    fn divergence_free_projection() {
        let g = Grid::new(16).unwrap();
        for seed in 0..5 {
            let a = random_bandlimited(&g, 1, 4, seed, true).unwrap();
            assert!(a.sup_norm() > 0.1);
            assert!(codifferential(&a).sup_norm() <= 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn deterministic() {
        let g = Grid::new(16).unwrap();
        let a = random_bandlimited(&g, 2, 3, 42, false).unwrap();
        let b = random_bandlimited(&g, 2, 3, 42, false).unwrap();
        assert_eq!(a.components(), b.components());
        let c = random_bandlimited(&g, 2, 3, 43, false).unwrap();
        assert_ne!(a.components(), c.components());
    }

    #[test]
    fn kmax_zero_is_constant() {
        let g = Grid::new(8).unwrap();
        let a = random_bandlimited(&g, 1, 0, 7, false).unwrap();
        for c in a.components() {
            let first = c[0];
            assert!(c.iter().all(|v| (v - first).abs() < 1e-15));
        }
    }

    #[test]
    fn band_limit_enforced() {
        let g = Grid::new(8).unwrap();
        assert!(matches!(
            random_bandlimited(&g, 0, 3, 1, false),
            Err(Error::BandLimitError { kmax: 3, limit: 2 })
        ));
        assert!(random_bandlimited(&g, 2, 1, 1, true).is_err());
    }
}
