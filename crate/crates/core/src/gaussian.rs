//! The homotopy Gaussian on ℝ: elements `f + g·η` with polynomial `f`, `g`,
//! differential `δ(gη) = g′ − x·g`, and moments computed from `E ∘ δ = 0`.

use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::{Error, Result};

/// Dense polynomial in `x` with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly(Vec<BigRational>);

impl Poly {
    pub fn new(coeffs: Vec<BigRational>) -> Poly {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    pub fn from_integers(coeffs: &[i64]) -> Poly {
        Poly::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly::monomial(0)
    }

    /// `xⁿ`.
    pub fn monomial(n: usize) -> Poly {
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        Poly(c)
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn times_x(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = Vec::with_capacity(self.0.len() + 1);
        c.push(BigRational::zero());
        c.extend(self.0.iter().cloned());
        Poly(c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, s: &BigRational) -> Poly {
        Poly::new(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `f + g·η`, with `f` the 0-form part and `g` the coefficient of the 1-form `η`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GaussianElement {
    pub f: Poly,
    pub g: Poly,
}

impl GaussianElement {
    pub fn function(f: Poly) -> Self {
        GaussianElement { f, g: Poly::zero() }
    }

    pub fn one_form(g: Poly) -> Self {
        GaussianElement { f: Poly::zero(), g }
    }
}

/// `δ(f + gη) = g′ − x·g`.
pub fn g_delta(a: &GaussianElement) -> GaussianElement {
    GaussianElement::function(a.g.derivative().sub(&a.g.times_x()))
}

/// `E(xⁿ)` from `0 = E(δ(x^{n−1}η)) = (n−1)E(x^{n−2}) − E(xⁿ)`.
pub fn g_moment(n: usize) -> BigRational {
    if n % 2 == 1 {
        return BigRational::zero();
    }
    let mut m = BigInt::one();
    let mut k = 2;
    while k <= n {
        m *= BigInt::from(k - 1);
        k += 2;
    }
    BigRational::from_integer(m)
}

/// `E(f)` for an element with no `η` part.
pub fn g_reduce(a: &GaussianElement) -> Result<BigRational> {
    if !a.g.is_zero() {
        return Err(Error::Precondition("expectation is taken on the 0-form part only".into()));
    }
    Ok(a.f.coeffs().iter().enumerate().map(|(n, c)| c * g_moment(n)).sum())
}

/// Rows `(n, E(xⁿ))` for `n = 0..=n_max`.
pub fn moment_table(n_max: usize) -> Vec<(usize, BigRational)> {
    (0..=n_max).map(|n| (n, g_moment(n))).collect()
}
