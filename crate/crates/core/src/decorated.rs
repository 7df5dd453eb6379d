//! Forms tensored with a graded parameter ring.
//!
//! A [`Decorated`] element is a finite map from ring monomials to coefficients
//! of some [`Coefficient`] type, homogeneous of a fixed total degree
//! (form degree plus monomial degree). Two coefficient types are provided:
//!
//! - [`Family`]: numerical forms sampled at a list of times, used for fluid data;
//! - [`FormPoly`]: exact polynomials in named symbolic forms, used to check sign
//!   patterns of products and exponentials without any numerics.
//!
//! Products carry the Koszul sign `(ω⊗r)(η⊗s) = (−1)^{|r||η|} (ω∧η)⊗(rs)`, and the
//! total differential is `δ(ω⊗r) = δω⊗r + (−1)^{deg ω} ω⊗d_R r`. Dependence on the
//! interval variable `t` lives in the sampled families: `d_R t = dt` contributes
//! `(−1)^{deg ω} ∂_t ω ⊗ dt·r`, with `∂_t` evaluated by finite differences.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::graded::{monomial_differential, Monomial, RingSpec, Variable};
use crate::torus::{codifferential, wedge, Form, Grid};
use crate::{Error, Result};

const EXP_SAFETY_CAP: usize = 64;

pub trait Coefficient: Clone + fmt::Debug {
    /// Data shared by all coefficients of one element (grid, time samples).
    type Context: Clone + fmt::Debug + PartialEq;

    fn context(&self) -> Self::Context;
    fn compatible(a: &Self::Context, b: &Self::Context) -> Result<()>;
    fn zero(ctx: &Self::Context, degree: usize) -> Self;
    fn one(ctx: &Self::Context) -> Self;
    fn form_degree(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &BigRational) -> Self;
    /// `None` when the form degree of the product exceeds 3.
    fn wedge(&self, other: &Self) -> Option<Self>;
    /// Pointwise exponential of a 0-form.
    fn exp_scalar(&self) -> Self;
}

fn parity(n: i64) -> bool {
    n.rem_euclid(2) == 1
}

fn sign_rational(negative: bool) -> BigRational {
    if negative {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

/// A homogeneous element of `Ω•(M) ⊗ R`.
#[derive(Clone, Debug)]
pub struct Decorated<C: Coefficient> {
    ring: RingSpec,
    degree: i32,
    ctx: C::Context,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient + PartialEq> PartialEq for Decorated<C> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.degree == other.degree
            && self.ctx == other.ctx
            && self.terms == other.terms
    }
}

impl<C: Coefficient> Decorated<C> {
    pub fn zero(ring: RingSpec, ctx: C::Context, degree: i32) -> Self {
        Decorated { ring, degree, ctx, terms: BTreeMap::new() }
    }

    pub fn one(ring: RingSpec, ctx: C::Context) -> Self {
        let mut out = Self::zero(ring, ctx, 0);
        let one = C::one(&out.ctx);
        out.insert(Monomial::one(), one);
        out
    }

    /// Builds an element from terms, checking ring membership, contexts and
    /// that every term has total degree `degree`. Repeated monomials are summed.
    pub fn from_terms(
        ring: RingSpec,
        ctx: C::Context,
        degree: i32,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Result<Self> {
        let mut out = Self::zero(ring, ctx, degree);
        for (m, c) in terms {
            out.check_term(&m, &c)?;
            if ring.retains(&m) {
                out.insert(m, c);
            }
        }
        Ok(out)
    }

    fn check_term(&self, m: &Monomial, c: &C) -> Result<()> {
        if !self.ring.contains_monomial(m) {
            return Err(Error::ForeignMonomial(m.to_string()));
        }
        C::compatible(&self.ctx, &c.context())?;
        let found = c.form_degree() as i32 + m.degree();
        if found != self.degree {
            return Err(Error::DegreeError { expected: self.degree, found });
        }
        Ok(())
    }

    fn insert(&mut self, m: Monomial, c: C) {
        let merged = match self.terms.remove(&m) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(m, merged);
        }
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    /// Total degree shared by all terms.
    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn context(&self) -> &C::Context {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn get(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        C::compatible(&self.ctx, &other.ctx)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeError { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = Self::zero(self.ring, self.ctx.clone(), self.degree);
        if !s.is_zero() {
            for (m, c) in &self.terms {
                out.insert(m.clone(), c.scale(s));
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Graded product. Terms whose form degree would exceed 3, or whose
    /// monomial vanishes or is truncated, are dropped.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.ring, self.ctx.clone(), self.degree + other.degree);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let Some((s, m)) = ma.mul(mb) else { continue };
                if !self.ring.retains(&m) {
                    continue;
                }
                let Some(w) = a.wedge(b) else { continue };
                let negative = (s < 0) ^ (parity(ma.degree() as i64) && parity(b.form_degree() as i64));
                out.insert(m, if negative { w.scale(&-BigRational::one()) } else { w });
            }
        }
        Ok(out)
    }

    /// Coefficient of the empty monomial, which must be a 0-form.
    fn split_scalar(&self) -> (Option<C>, Self) {
        let mut rest = self.clone();
        let scalar = rest.terms.remove(&Monomial::one());
        (scalar, rest)
    }

    /// `exp(f + N) = e^f Σ Nⁿ/n!`, the sum terminating by nilpotence and
    /// form-degree truncation.
    pub fn exp(&self) -> Result<Self> {
        if self.degree != 0 {
            return Err(Error::DegreeError { expected: 0, found: self.degree });
        }
        let (scalar, nilpotent) = self.split_scalar();
        let mut sum = Self::one(self.ring, self.ctx.clone());
        let mut power = sum.clone();
        for n in 1..=EXP_SAFETY_CAP {
            power = power.mul(&nilpotent)?.scale(&BigRational::new(BigInt::one(), BigInt::from(n)));
            if power.is_empty() {
                break;
            }
            sum = sum.add(&power)?;
        }
        Ok(match scalar {
            Some(f) => {
                let ef = Decorated::from_terms(self.ring, self.ctx.clone(), 0, [(Monomial::one(), f.exp_scalar())])?;
                ef.mul(&sum)?
            }
            None => sum,
        })
    }
}

impl<C: Coefficient> fmt::Display for Decorated<C>
where
    C: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c})⊗{m}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Numerical time-sampled families

/// A form sampled at increasing times. A single sample is a static form.
#[derive(Clone, Debug)]
pub struct Family {
    grid: Arc<Grid>,
    times: Arc<Vec<f64>>,
    degree: usize,
    forms: Vec<Form>,
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.times == other.times
            && self.degree == other.degree
            && self.forms.iter().zip(&other.forms).all(|(a, b)| a.components() == b.components())
    }
}

impl Family {
    pub fn new(times: Arc<Vec<f64>>, forms: Vec<Form>) -> Result<Family> {
        let first = forms.first().ok_or(Error::SampleMismatch)?;
        if forms.len() != times.len() || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::SampleMismatch);
        }
        let (grid, degree) = (first.grid().clone(), first.degree());
        if forms.iter().any(|f| !f.same_shape(first)) {
            return Err(Error::GridMismatch);
        }
        Ok(Family { grid, times, degree, forms })
    }

    pub fn constant(times: Arc<Vec<f64>>, form: Form) -> Family {
        let forms = vec![form; times.len()];
        Family { grid: forms[0].grid().clone(), times, degree: forms[0].degree(), forms }
    }

    /// A single-sample family at `t = 0`.
    pub fn fixed(form: Form) -> Family {
        Family::constant(Arc::new(vec![0.0]), form)
    }

    pub fn from_fn(times: Arc<Vec<f64>>, f: impl Fn(f64) -> Form) -> Result<Family> {
        let forms = times.iter().map(|&t| f(t)).collect();
        Family::new(times, forms)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn times(&self) -> &Arc<Vec<f64>> {
        &self.times
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn at(&self, i: usize) -> &Form {
        &self.forms[i]
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn map(&self, f: impl Fn(&Form) -> Form) -> Family {
        let forms: Vec<Form> = self.forms.iter().map(f).collect();
        Family { grid: self.grid.clone(), times: self.times.clone(), degree: forms[0].degree(), forms }
    }

    pub fn try_map(&self, f: impl Fn(&Form) -> Result<Form>) -> Result<Family> {
        let forms = self.forms.iter().map(f).collect::<Result<Vec<_>>>()?;
        Family::new(self.times.clone(), forms)
    }

    pub fn zip_map(&self, other: &Family, f: impl Fn(&Form, &Form) -> Result<Form>) -> Result<Family> {
        if self.times != other.times {
            return Err(Error::SampleMismatch);
        }
        let forms = self.forms.iter().zip(&other.forms).map(|(a, b)| f(a, b)).collect::<Result<Vec<_>>>()?;
        Family::new(self.times.clone(), forms)
    }

    pub fn sup_norms(&self) -> Vec<f64> {
        self.forms.iter().map(Form::sup_norm).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norms().into_iter().fold(0.0, f64::max)
    }

    pub fn codifferential(&self) -> Family {
        self.map(codifferential)
    }

    /// `∂_t` by finite differences on the nearest five samples (fourth order
    /// for uniform interior samples, one-sided stencils at the ends).
    pub fn time_derivative(&self) -> Family {
        let m = self.len();
        if m == 1 {
            return self.map(|f| f.scale(0.0));
        }
        let width = m.min(5);
        let forms = (0..m)
            .map(|i| {
                let start = i.saturating_sub(width / 2).min(m - width);
                let stencil = &self.times[start..start + width];
                let weights = fd_weights(self.times[i], stencil);
                let mut acc = Form::zero(&self.grid, self.degree);
                for (j, w) in weights.iter().enumerate() {
                    acc.axpy(*w, &self.forms[start + j]);
                }
                acc
            })
            .collect();
        Family { grid: self.grid.clone(), times: self.times.clone(), degree: self.degree, forms }
    }
}

/// Weights of the first derivative at `z` from values at the nodes `x` (Fornberg).
pub fn fd_weights(z: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![[0.0f64; 2]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|w| w[1]).collect()
}

/// Grid and sample times shared by the terms of a numerical element.
#[derive(Clone, Debug, PartialEq)]
pub struct Samples {
    pub grid: Arc<Grid>,
    pub times: Arc<Vec<f64>>,
}

impl Coefficient for Family {
    type Context = Samples;

    fn context(&self) -> Samples {
        Samples { grid: self.grid.clone(), times: self.times.clone() }
    }

    fn compatible(a: &Samples, b: &Samples) -> Result<()> {
        if a.grid != b.grid {
            Err(Error::GridMismatch)
        } else if a.times != b.times {
            Err(Error::SampleMismatch)
        } else {
            Ok(())
        }
    }

    fn zero(ctx: &Samples, degree: usize) -> Family {
        Family::constant(ctx.times.clone(), Form::zero(&ctx.grid, degree))
    }

    fn one(ctx: &Samples) -> Family {
        Family::constant(ctx.times.clone(), Form::constant(&ctx.grid, 0, &[1.0]))
    }

    fn form_degree(&self) -> usize {
        self.degree
    }

    fn is_zero(&self) -> bool {
        self.forms.iter().all(|f| f.components().iter().all(|c| c.iter().all(|v| *v == 0.0)))
    }

    fn add(&self, other: &Family) -> Family {
        let forms = self.forms.iter().zip(&other.forms).map(|(a, b)| a + b).collect();
        Family { forms, ..self.clone() }
    }

    fn scale(&self, c: &BigRational) -> Family {
        let s = c.to_f64().unwrap_or(f64::NAN);
        self.map(|f| f.scale(s))
    }

    fn wedge(&self, other: &Family) -> Option<Family> {
        if self.degree + other.degree > 3 {
            return None;
        }
        let forms: Vec<Form> =
            self.forms.iter().zip(&other.forms).map(|(a, b)| wedge(a, b).expect("degree checked")).collect();
        Some(Family { grid: self.grid.clone(), times: self.times.clone(), degree: forms[0].degree(), forms })
    }

    fn exp_scalar(&self) -> Family {
        self.map(|f| f.map(f64::exp))
    }
}

pub type DecoratedForm = Decorated<Family>;

impl Decorated<Family> {
    pub fn samples(&self) -> &Samples {
        &self.ctx
    }

    /// Convenience: build from `(monomial, family)` pairs. Monomials must not
    /// contain `t`, since time dependence lives in the families.
    pub fn numeric(
        ring: RingSpec,
        samples: Samples,
        degree: i32,
        terms: impl IntoIterator<Item = (Monomial, Family)>,
    ) -> Result<Self> {
        let terms: Vec<_> = terms.into_iter().collect();
        if let Some((m, _)) = terms.iter().find(|(m, _)| m.contains(Variable::T)) {
            return Err(Error::ForeignMonomial(m.to_string()));
        }
        Decorated::from_terms(ring, samples, degree, terms)
    }

    /// The coefficient of `m`, or the zero form of the inferred degree when absent.
    pub fn coefficient_of(&self, m: &Monomial) -> Result<Family> {
        if !self.ring.contains_monomial(m) || m.contains(Variable::T) {
            return Err(Error::ForeignMonomial(m.to_string()));
        }
        if let Some(c) = self.terms.get(m) {
            return Ok(c.clone());
        }
        let k = self.degree - m.degree();
        if !(0..=3).contains(&k) {
            return Err(Error::DegreeError { expected: self.degree, found: m.degree() });
        }
        Ok(Family::zero(&self.ctx, k as usize))
    }

    /// Like [`coefficient_of`](Self::coefficient_of) but from raw powers, which
    /// must already be canonical.
    pub fn coefficient_of_powers(&self, powers: &[(Variable, u32)]) -> Result<Family> {
        self.coefficient_of(&Monomial::try_from_powers(powers)?)
    }

    /// The total differential `δ_M ⊗ 1 + 1 ⊗ d_R`, with `d_R t = dt` acting
    /// through `∂_t` of the sampled families.
    pub fn delta_total(&self) -> Result<Self> {
        let mut out = Self::zero(self.ring, self.ctx.clone(), self.degree - 1);
        let dt = Monomial::var(Variable::Dt);
        for (m, c) in &self.terms {
            if c.degree > 0 {
                out.insert(m.clone(), c.codifferential());
            }
            let odd = c.degree % 2 == 1;
            for (coef, image) in monomial_differential(&self.ring, m) {
                if self.ring.retains(&image) {
                    let s = BigRational::from_integer(BigInt::from(coef)) * sign_rational(odd);
                    out.insert(image, c.scale(&s));
                }
            }
            if self.ring.interval && c.len() > 1 {
                if let Some((s, image)) = dt.mul(m) {
                    out.insert(image, c.time_derivative().scale(&sign_rational(odd ^ (s < 0))));
                }
            }
        }
        Ok(out)
    }

    /// `log(a₀ + M) = log a₀ + Σ (−1)^{n+1} (M/a₀)ⁿ / n` for a total-degree-zero
    /// element with positive scalar part `a₀`.
    pub fn log(&self) -> Result<Self> {
        if self.degree != 0 {
            return Err(Error::DegreeError { expected: 0, found: self.degree });
        }
        let (scalar, rest) = self.split_scalar();
        let a0 = scalar.ok_or(Error::DensityError(0.0))?;
        let min = a0.forms.iter().map(Form::min_value).fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            return Err(Error::DensityError(min));
        }
        let inv = Decorated::from_terms(self.ring, self.ctx.clone(), 0, [(Monomial::one(), a0.map(|f| f.map(|v| 1.0 / v)))])?;
        let x = inv.mul(&rest)?;
        let mut out = Decorated::from_terms(self.ring, self.ctx.clone(), 0, [(Monomial::one(), a0.map(|f| f.map(f64::ln)))])?;
        let mut power = Self::one(self.ring, self.ctx.clone());
        for n in 1..=EXP_SAFETY_CAP {
            power = power.mul(&x)?;
            if power.is_empty() {
                break;
            }
            let sign = if n % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            out = out.add(&power.scale(&BigRational::new(sign, BigInt::from(n))))?;
        }
        Ok(out)
    }

    /// Largest sup-norm over all terms and samples.
    pub fn sup_norm(&self) -> f64 {
        self.terms.values().map(Family::sup_norm).fold(0.0, f64::max)
    }

    /// The sub-sum of terms whose monomial avoids `v`.
    pub fn without_variable(&self, v: Variable) -> Self {
        let mut out = Self::zero(self.ring, self.ctx.clone(), self.degree);
        for (m, c) in &self.terms {
            if !m.contains(v) {
                out.insert(m.clone(), c.clone());
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Exact symbolic forms

/// A named symbolic form of fixed degree.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub name: String,
    pub degree: usize,
}

/// A homogeneous rational polynomial in wedge products of [`Symbol`]s.
///
/// Words are kept sorted by symbol name with Koszul signs; a repeated odd
/// symbol vanishes, and so does any word of form degree above 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormPoly {
    degree: usize,
    terms: BTreeMap<Vec<Symbol>, BigRational>,
}

impl FormPoly {
    pub fn zero(degree: usize) -> FormPoly {
        FormPoly { degree, terms: BTreeMap::new() }
    }

    pub fn constant(c: BigRational) -> FormPoly {
        let mut p = FormPoly::zero(0);
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn symbol(name: &str, degree: usize) -> FormPoly {
        assert!(degree <= 3, "symbolic form degree must be at most 3");
        let mut p = FormPoly::zero(degree);
        p.terms.insert(vec![Symbol { name: name.into(), degree }], BigRational::one());
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Symbol>, &BigRational)> {
        self.terms.iter()
    }

    fn insert(&mut self, word: Vec<Symbol>, c: BigRational) {
        let entry = self.terms.entry(word).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Sorts a word by bubble sort, tracking the Koszul sign. `None` if it vanishes.
    fn normalize(mut word: Vec<Symbol>) -> Option<(bool, Vec<Symbol>)> {
        let mut negative = false;
        for i in 0..word.len() {
            for j in 0..word.len() - 1 - i {
                if word[j] > word[j + 1] {
                    negative ^= word[j].degree % 2 == 1 && word[j + 1].degree % 2 == 1;
                    word.swap(j, j + 1);
                }
            }
        }
        if word.windows(2).any(|w| w[0] == w[1] && w[0].degree % 2 == 1) {
            return None;
        }
        Some((negative, word))
    }

    pub fn wedge(&self, other: &FormPoly) -> Option<FormPoly> {
        let degree = self.degree + other.degree;
        if degree > 3 {
            return None;
        }
        let mut out = FormPoly::zero(degree);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let word: Vec<Symbol> = wa.iter().chain(wb).cloned().collect();
                if let Some((negative, word)) = Self::normalize(word) {
                    let c = ca * cb;
                    out.insert(word, if negative { -c } else { c });
                }
            }
        }
        Some(out)
    }

    pub fn add(&self, other: &FormPoly) -> FormPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> FormPoly {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, s: &BigRational) -> FormPoly {
        let mut out = FormPoly::zero(self.degree);
        if !s.is_zero() {
            for (w, c) in &self.terms {
                out.terms.insert(w.clone(), c * s);
            }
        }
        out
    }
}

impl fmt::Display for FormPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let word = if w.is_empty() {
                String::new()
            } else {
                w.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join("∧")
            };
            let (neg, mag) = (c.is_negative(), c.abs());
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sep)?;
            match (mag.is_one(), word.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{word}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}·{word}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Coefficient for FormPoly {
    type Context = ();

    fn context(&self) {}

    fn compatible(_: &(), _: &()) -> Result<()> {
        Ok(())
    }

    fn zero(_: &(), degree: usize) -> FormPoly {
        FormPoly::zero(degree)
    }

    fn one(_: &()) -> FormPoly {
        FormPoly::constant(BigRational::one())
    }

    fn form_degree(&self) -> usize {
        self.degree
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &FormPoly) -> FormPoly {
        FormPoly::add(self, other)
    }

    fn scale(&self, c: &BigRational) -> FormPoly {
        FormPoly::scale(self, c)
    }

    fn wedge(&self, other: &FormPoly) -> Option<FormPoly> {
        FormPoly::wedge(self, other)
    }

    /// The exponential of a symbolic function is the new symbol `exp(…)`.
    fn exp_scalar(&self) -> FormPoly {
        if self.terms.is_empty() {
            return FormPoly::constant(BigRational::one());
        }
        FormPoly::symbol(&format!("exp({self})"), 0)
    }
}

pub type SymbolicForm = Decorated<FormPoly>;
