use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::grid::Grid;
use crate::{Error, Result};

/// Number of frame components of a k-form in three dimensions.
pub fn component_count(degree: usize) -> usize {
    match degree {
        0 | 3 => 1,
        1 | 2 => 3,
        _ => 0,
    }
}

/// A differential form on the flat torus sampled on the collocation grid.
///
/// Frame bases: `dx, dy, dz` for 1-forms, `dy∧dz, dz∧dx, dx∧dy` for 2-forms and
/// `dx∧dy∧dz` for 3-forms. With this ordering the Hodge star is the identity
/// on component arrays.
#[derive(Clone)]
pub struct Form {
    grid: Arc<Grid>,
    degree: usize,
    comps: Vec<Vec<f64>>,
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Form")
            .field("degree", &self.degree)
            .field("n", &self.grid.n())
            .field("sup", &self.sup_norm())
            .finish()
    }
}

impl Form {
    pub fn zero(grid: &Arc<Grid>, degree: usize) -> Form {
        assert!(degree <= 3, "form degree {degree} out of range");
        Form {
            grid: grid.clone(),
            degree,
            comps: vec![vec![0.0; grid.len()]; component_count(degree)],
        }
    }

    pub fn from_components(grid: &Arc<Grid>, degree: usize, comps: Vec<Vec<f64>>) -> Result<Form> {
        if degree > 3 {
            return Err(Error::DegreeOverflow(degree));
        }
        if comps.len() != component_count(degree) || comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::Precondition(format!(
                "expected {} components of length {}",
                component_count(degree),
                grid.len()
            )));
        }
        Ok(Form { grid: grid.clone(), degree, comps })
    }

    /// Samples `f(x, y, z)`, which must return `component_count(degree)` values.
    pub fn from_fn(grid: &Arc<Grid>, degree: usize, f: impl Fn(f64, f64, f64) -> Vec<f64>) -> Form {
        let mut out = Form::zero(grid, degree);
        for (idx, [x, y, z]) in grid.points() {
            let vals = f(x, y, z);
            assert_eq!(vals.len(), out.comps.len(), "component count mismatch");
            for (c, v) in out.comps.iter_mut().zip(vals) {
                c[idx] = v;
            }
        }
        out
    }

    pub fn function(grid: &Arc<Grid>, f: impl Fn(f64, f64, f64) -> f64) -> Form {
        Form::from_fn(grid, 0, |x, y, z| vec![f(x, y, z)])
    }

    pub fn constant(grid: &Arc<Grid>, degree: usize, values: &[f64]) -> Form {
        assert_eq!(values.len(), component_count(degree));
        Form {
            grid: grid.clone(),
            degree,
            comps: values.iter().map(|&v| vec![v; grid.len()]).collect(),
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &[f64] {
        &self.comps[i]
    }

    pub fn into_components(self) -> Vec<Vec<f64>> {
        self.comps
    }

    pub fn same_shape(&self, other: &Form) -> bool {
        self.degree == other.degree && *self.grid == *other.grid
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Form {
        Form {
            grid: self.grid.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.iter().map(|&v| f(v)).collect()).collect(),
        }
    }

    fn zip_with(&self, other: &Form, f: impl Fn(f64, f64) -> f64) -> Form {
        assert!(self.same_shape(other), "form shape mismatch: {self:?} vs {other:?}");
        Form {
            grid: self.grid.clone(),
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
                .collect(),
        }
    }

    pub fn try_add(&self, other: &Form) -> Result<Form> {
        self.check_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form> {
        self.check_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn check_shape(&self, other: &Form) -> Result<()> {
        if *self.grid != *other.grid {
            Err(Error::GridMismatch)
        } else if self.degree != other.degree {
            Err(Error::DegreeError { expected: self.degree as i32, found: other.degree as i32 })
        } else {
            Ok(())
        }
    }

    pub fn scale(&self, s: f64) -> Form {
        self.map(|v| v * s)
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: f64, other: &Form) {
        assert!(self.same_shape(other), "form shape mismatch");
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += s * y;
            }
        }
    }

    /// Pointwise multiplication by a function (a 0-form). Not dealiased.
    pub fn times_function(&self, f: &Form) -> Form {
        assert_eq!(f.degree, 0, "multiplier must be a function");
        assert!(*self.grid == *f.grid, "grid mismatch");
        let g = &f.comps[0];
        Form {
            grid: self.grid.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.iter().zip(g).map(|(a, b)| a * b).collect()).collect(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.comps.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Minimum over all components and points.
    pub fn min_value(&self) -> f64 {
        self.comps.iter().flatten().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Grid mean of each frame component.
    pub fn component_means(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.iter().sum::<f64>() / c.len() as f64).collect()
    }

    /// `L²` inner product `∫ ⟨a, b⟩ dV` in the flat orthonormal frame.
    pub fn l2_inner(&self, other: &Form) -> f64 {
        assert!(self.same_shape(other), "form shape mismatch");
        let dot: f64 = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .sum();
        dot * self.grid.cell_volume()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_inner(self).sqrt()
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        self.scale(-1.0)
    }
}

impl Mul<&Form> for f64 {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        rhs.scale(self)
    }
}

/// A vector field in the frame `e_x, e_y, e_z`.
#[derive(Clone)]
pub struct VectorField {
    grid: Arc<Grid>,
    comps: [Vec<f64>; 3],
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField").field("n", &self.grid.n()).finish()
    }
}

impl VectorField {
    pub fn new(grid: &Arc<Grid>, comps: [Vec<f64>; 3]) -> Result<VectorField> {
        if comps.iter().any(|c| c.len() != grid.len()) {
            return Err(Error::Precondition("component length mismatch".into()));
        }
        Ok(VectorField { grid: grid.clone(), comps })
    }

    pub fn zero(grid: &Arc<Grid>) -> VectorField {
        VectorField { grid: grid.clone(), comps: std::array::from_fn(|_| vec![0.0; grid.len()]) }
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> VectorField {
        let mut out = VectorField::zero(grid);
        for (idx, [x, y, z]) in grid.points() {
            let v = f(x, y, z);
            for c in 0..3 {
                out.comps[c][idx] = v[c];
            }
        }
        out
    }

    /// The constant field `e_axis`.
    pub fn unit(grid: &Arc<Grid>, axis: usize) -> VectorField {
        let mut out = VectorField::zero(grid);
        out.comps[axis].iter_mut().for_each(|v| *v = 1.0);
        out
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<f64>; 3] {
        &self.comps
    }

    pub fn into_components(self) -> [Vec<f64>; 3] {
        self.comps
    }

    /// Pointwise multiplication by a function.
    pub fn times_function(&self, f: &Form) -> VectorField {
        assert_eq!(f.degree(), 0);
        let g = f.component(0);
        VectorField {
            grid: self.grid.clone(),
            comps: std::array::from_fn(|c| self.comps[c].iter().zip(g).map(|(a, b)| a * b).collect()),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.comps.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            grid: self.grid.clone(),
            comps: std::array::from_fn(|c| {
                self.comps[c].iter().zip(&other.comps[c]).map(|(a, b)| a - b).collect()
            }),
        }
    }
}
