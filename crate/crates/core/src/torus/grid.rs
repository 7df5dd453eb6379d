use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

#[derive(Clone)]
struct Plans {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Plans {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Plans { n, fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n) }
    }

    /// In-place unnormalised 3-D transform of an `n³` buffer laid out with x fastest.
    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.n;
        let fft = if inverse { &self.inv } else { &self.fwd };
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(buf, &mut scratch);

        let mut line = vec![Complex64::default(); n];
        for k in 0..n {
            for i in 0..n {
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = buf[i + n * (j + n * k)];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    buf[i + n * (j + n * k)] = *v;
                }
            }
        }
        for j in 0..n {
            for i in 0..n {
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = buf[i + n * (j + n * k)];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    buf[i + n * (j + n * k)] = *v;
                }
            }
        }
    }
}

/// Periodic collocation grid on `[0, 2π)³` with `n` points per axis.
///
/// Plans are created once per grid and shared; every transform allocates its
/// own scratch, so a grid can be used from several threads at once.
pub struct Grid {
    n: usize,
    dealias: usize,
    plans: Plans,
    fine: Option<Plans>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n", &self.n).field("dealias", &self.dealias).finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.dealias == other.dealias
    }
}

impl Grid {
    pub fn new(n: usize) -> Result<Arc<Grid>> {
        Self::with_dealias(n, 1)
    }

    /// A grid whose pointwise products are evaluated on a `factor`-times finer grid
    /// and truncated back.
    pub fn with_dealias(n: usize, factor: usize) -> Result<Arc<Grid>> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        if factor == 0 {
            return Err(Error::Precondition("dealias factor must be at least 1".into()));
        }
        let fine = (factor > 1).then(|| Plans::new(n * factor));
        Ok(Arc::new(Grid { n, dealias: factor, plans: Plans::new(n), fine }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dealias_factor(&self) -> usize {
        self.dealias
    }

    /// Number of grid points, `n³`.
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Total volume `(2π)³`.
    pub fn volume(&self) -> f64 {
        (2.0 * PI).powi(3)
    }

    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n * (j + self.n * k)
    }

    /// Iterates over `(flat index, [x, y, z])`.
    pub fn points(&self) -> impl Iterator<Item = (usize, [f64; 3])> + '_ {
        let n = self.n;
        (0..self.len()).map(move |idx| {
            let i = idx % n;
            let j = (idx / n) % n;
            let k = idx / (n * n);
            (idx, [self.coord(i), self.coord(j), self.coord(k)])
        })
    }

    /// Signed integer wavenumber of FFT index `j` (Nyquist reported as `+n/2`).
    pub fn mode(&self, j: usize) -> i64 {
        let n = self.n as i64;
        let j = j as i64;
        if j <= n / 2 {
            j
        } else {
            j - n
        }
    }

    /// Wavenumber used for spectral differentiation; the Nyquist mode is dropped.
    pub(crate) fn derivative_wavenumber(&self, j: usize) -> f64 {
        if j == self.n / 2 {
            0.0
        } else {
            self.mode(j) as f64
        }
    }

    pub(crate) fn forward(&self, data: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.plans.transform(&mut buf, false);
        buf
    }

    /// Normalised inverse transform, keeping the real part.
    pub(crate) fn inverse(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.plans.transform(&mut spec, true);
        let norm = 1.0 / self.len() as f64;
        spec.iter().map(|c| c.re * norm).collect()
    }

    /// Pointwise product, dealiased when the grid carries an oversampling factor.
    pub(crate) fn product(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        match &self.fine {
            None => a.iter().zip(b).map(|(x, y)| x * y).collect(),
            Some(fine) => {
                let fa = self.upsample(fine, a);
                let fb = self.upsample(fine, b);
                let mut prod: Vec<Complex64> =
                    fa.iter().zip(&fb).map(|(x, y)| Complex64::new(x * y, 0.0)).collect();
                fine.transform(&mut prod, false);
                self.downsample(fine, &prod)
            }
        }
    }

    fn upsample(&self, fine: &Plans, data: &[f64]) -> Vec<f64> {
        let n = self.n;
        let m = fine.n;
        let coarse = self.forward(data);
        let mut spec = vec![Complex64::default(); m * m * m];
        let scale = 1.0 / self.len() as f64;
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let (Some(fi), Some(fj), Some(fk)) =
                        (self.fine_index(i, m), self.fine_index(j, m), self.fine_index(k, m))
                    else {
                        continue;
                    };
                    spec[fi + m * (fj + m * fk)] = coarse[self.index(i, j, k)] * scale;
                }
            }
        }
        fine.transform(&mut spec, true);
        spec.iter().map(|c| c.re).collect()
    }

    fn downsample(&self, fine: &Plans, spec: &[Complex64]) -> Vec<f64> {
        let n = self.n;
        let m = fine.n;
        let fine_norm = 1.0 / (m * m * m) as f64;
        let mut coarse = vec![Complex64::default(); self.len()];
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let (Some(fi), Some(fj), Some(fk)) =
                        (self.fine_index(i, m), self.fine_index(j, m), self.fine_index(k, m))
                    else {
                        continue;
                    };
                    coarse[self.index(i, j, k)] =
                        spec[fi + m * (fj + m * fk)] * fine_norm * self.len() as f64;
                }
            }
        }
        self.inverse(coarse)
    }

    /// Fine-grid FFT index of coarse index `j`; `None` for the coarse Nyquist mode.
    fn fine_index(&self, j: usize, m: usize) -> Option<usize> {
        if j == self.n / 2 {
            return None;
        }
        let k = self.mode(j);
        Some(if k >= 0 { k as usize } else { (m as i64 + k) as usize })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(Grid::new(4).is_err());
        assert!(Grid::new(12).is_err());
        assert!(Grid::new(16).is_ok());
    }

    #[test]
    fn transform_round_trip() {
        let g = Grid::new(8).unwrap();
        let data: Vec<f64> = (0..g.len()).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
        let back = g.inverse(g.forward(&data));
        for (a, b) in data.iter().zip(&back) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn dealiased_product_removes_alias() {
        // sin(3x)·sin(3x) = (1 − cos 6x)/2; on n = 8 the cos 6x mode aliases onto cos 2x.
        let plain = Grid::new(8).unwrap();
        let fine = Grid::with_dealias(8, 2).unwrap();
        let f: Vec<f64> = plain.points().map(|(_, p)| (3.0 * p[0]).sin()).collect();
        let aliased = plain.product(&f, &f);
        let clean = fine.product(&f, &f);
        let max_dev_aliased = aliased.iter().map(|v| (v - 0.5).abs()).fold(0.0, f64::max);
        let max_dev_clean = clean.iter().map(|v| (v - 0.5).abs()).fold(0.0, f64::max);
        assert!(max_dev_aliased > 0.4);
        assert!(max_dev_clean < 1e-12);
    }
}
