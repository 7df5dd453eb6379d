//! Graded parameter rings with Koszul signs.
//!
//! Variables are ordered canonically as `t, dt, ε, dε, s_1, s_2, …`; every
//! monomial is stored in that order and every product is normalised to it,
//! picking up a factor `-1` for each transposition of two odd variables.
//! Degrees follow the homological convention of the codifferential: `t` and
//! the statistics markers have degree 0, `dt` and `ε` degree −1, `dε` degree −2.
//! The ring differential `d_R` has degree −1 and is a graded derivation.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Zero};

use crate::{Error, Result};

/// A generator of a parameter ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variable {
    T,
    Dt,
    Eps,
    DEps,
    /// Degree-zero statistics marker `s_i` (1-based index).
    Marker(u16),
}

impl Variable {
    pub fn degree(self) -> i32 {
        match self {
            Variable::T | Variable::Marker(_) => 0,
            Variable::Dt | Variable::Eps => -1,
            Variable::DEps => -2,
        }
    }

    pub fn is_odd(self) -> bool {
        self.degree().rem_euclid(2) == 1
    }

    /// Odd variables square to zero; `t`, `dε` and markers do not.
    pub fn is_nilpotent(self) -> bool {
        self.is_odd()
    }

    pub fn name(self) -> String {
        match self {
            Variable::T => "t".into(),
            Variable::Dt => "dt".into(),
            Variable::Eps => "eps".into(),
            Variable::DEps => "deps".into(),
            Variable::Marker(i) => format!("s{i}"),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A canonically ordered product of variables with positive exponents.
///
/// Odd variables appear with exponent one. The sign picked up while
/// normalising a product is returned alongside the monomial rather than
/// stored in it, so equal monomials always compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Variable, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Variable) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Accepts only canonical input: strictly increasing variables, positive
    /// exponents and no odd variable raised above the first power.
    pub fn try_from_powers(powers: &[(Variable, u32)]) -> Result<Self> {
        let m = Monomial(powers.to_vec());
        let ordered = powers.windows(2).all(|w| w[0].0 < w[1].0);
        let exps_ok = powers.iter().all(|&(v, e)| e >= 1 && (!v.is_odd() || e == 1));
        if ordered && exps_ok {
            Ok(m)
        } else {
            Err(Error::NonCanonical(render_powers(powers)))
        }
    }

    /// Normalises an arbitrary word of variables. Returns `None` when an odd
    /// variable is repeated (the product vanishes).
    pub fn from_word(word: &[Variable]) -> Option<(i32, Monomial)> {
        word.iter().try_fold((1, Monomial::one()), |(s, acc), &v| {
            let (s2, m) = acc.mul(&Monomial::var(v))?;
            Some((s * s2, m))
        })
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&(v, e)| v.degree() * e as i32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Variable) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |&(_, e)| e)
    }

    pub fn contains(&self, v: Variable) -> bool {
        self.exponent(v) > 0
    }

    pub fn powers(&self) -> &[(Variable, u32)] {
        &self.0
    }

    pub fn marker_order(&self) -> u32 {
        self.0.iter().filter(|(v, _)| matches!(v, Variable::Marker(_))).map(|&(_, e)| e).sum()
    }

    /// Graded-commutative product `self · other`, normalised. The returned
    /// sign counts the odd variables of `other` that move past larger odd
    /// variables of `self`.
    pub fn mul(&self, other: &Monomial) -> Option<(i32, Monomial)> {
        let mut swaps = 0usize;
        for &(y, _) in other.0.iter().filter(|(v, _)| v.is_odd()) {
            for &(x, _) in self.0.iter().filter(|(v, _)| v.is_odd()) {
                if x == y {
                    return None;
                }
                if x > y {
                    swaps += 1;
                }
            }
        }
        let mut merged: BTreeMap<Variable, u32> = self.0.iter().copied().collect();
        for &(v, e) in &other.0 {
            *merged.entry(v).or_insert(0) += e;
        }
        let sign = if swaps % 2 == 0 { 1 } else { -1 };
        Some((sign, Monomial(merged.into_iter().collect())))
    }

    /// The monomial with `v` removed entirely.
    pub fn without(&self, v: Variable) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }
}

fn render_powers(powers: &[(Variable, u32)]) -> String {
    if powers.is_empty() {
        return "1".into();
    }
    powers
        .iter()
        .map(|&(v, e)| if e == 1 { v.name() } else { format!("{}^{e}", v.name()) })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_powers(&self.0))
    }
}

/// The differential graded base rings used by the fluid identifications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    /// ℝ
    Real,
    /// ℝ[ε], `d_R ε = 0`
    Eps,
    /// ℝ[ε, dε], `d_R ε = dε`
    EpsDEps,
}

impl BaseRing {
    pub fn name(self) -> &'static str {
        match self {
            BaseRing::Real => "R",
            BaseRing::Eps => "R[eps]",
            BaseRing::EpsDEps => "R[eps,deps]",
        }
    }
}

/// A parameter ring: a base ring, optionally extended by the interval
/// variables `(t, dt)` and by degree-zero statistics markers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub base: BaseRing,
    pub interval: bool,
    pub markers: u16,
    /// Highest power of `t` retained.
    pub t_max: u32,
    /// Highest total marker order retained.
    pub marker_order: u32,
}

impl RingSpec {
    pub const DEFAULT_T_MAX: u32 = 16;
    pub const DEFAULT_MARKER_ORDER: u32 = 4;

    pub fn new(base: BaseRing) -> Self {
        RingSpec {
            base,
            interval: false,
            markers: 0,
            t_max: Self::DEFAULT_T_MAX,
            marker_order: Self::DEFAULT_MARKER_ORDER,
        }
    }

    pub fn with_interval(mut self) -> Self {
        self.interval = true;
        self
    }

    pub fn with_markers(mut self, markers: u16) -> Self {
        self.markers = markers;
        self
    }

    pub fn with_t_max(mut self, t_max: u32) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn variables(&self) -> Vec<Variable> {
        let mut vars = Vec::new();
        if self.interval {
            vars.extend([Variable::T, Variable::Dt]);
        }
        match self.base {
            BaseRing::Real => {}
            BaseRing::Eps => vars.push(Variable::Eps),
            BaseRing::EpsDEps => vars.extend([Variable::Eps, Variable::DEps]),
        }
        vars.extend((1..=self.markers).map(Variable::Marker));
        vars
    }

    pub fn contains(&self, v: Variable) -> bool {
        match v {
            Variable::T | Variable::Dt => self.interval,
            Variable::Eps => self.base != BaseRing::Real,
            Variable::DEps => self.base == BaseRing::EpsDEps,
            Variable::Marker(i) => i >= 1 && i <= self.markers,
        }
    }

    /// Image of a generator under `d_R`, `None` meaning zero.
    pub fn differential_of(&self, v: Variable) -> Option<Variable> {
        match v {
            Variable::T => Some(Variable::Dt),
            Variable::Eps if self.base == BaseRing::EpsDEps => Some(Variable::DEps),
            _ => None,
        }
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        m.powers().iter().all(|&(v, _)| self.contains(v))
    }

    /// Whether a monomial survives truncation.
    pub fn retains(&self, m: &Monomial) -> bool {
        m.exponent(Variable::T) <= self.t_max && m.marker_order() <= self.marker_order
    }

    pub fn name(&self) -> String {
        let mut s = self.base.name().to_string();
        if self.interval {
            s.push_str("[[t,dt]]");
        }
        if self.markers > 0 {
            s.push_str(&format!("[[s1..s{}]]", self.markers));
        }
        s
    }
}

/// An exact element of a parameter ring.
#[derive(Clone, Debug, PartialEq)]
pub struct RingElement {
    ring: RingSpec,
    terms: BTreeMap<Monomial, BigRational>,
}

impl RingElement {
    pub fn zero(ring: RingSpec) -> Self {
        RingElement { ring, terms: BTreeMap::new() }
    }

    pub fn one(ring: RingSpec) -> Self {
        Self::constant(ring, BigRational::one())
    }

    pub fn constant(ring: RingSpec, c: BigRational) -> Self {
        let mut e = Self::zero(ring);
        e.add_term(Monomial::one(), c);
        e
    }

    pub fn var(ring: RingSpec, v: Variable) -> Result<Self> {
        Self::monomial(ring, Monomial::var(v), BigRational::one())
    }

    pub fn monomial(ring: RingSpec, m: Monomial, c: BigRational) -> Result<Self> {
        if !ring.contains_monomial(&m) {
            return Err(Error::ForeignMonomial(m.to_string()));
        }
        let mut e = Self::zero(ring);
        e.add_term(m, c);
        Ok(e)
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Total degree if every term has the same degree; zero has no degree.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() || !self.ring.retains(&m) {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn check_ring(&self, other: &RingElement) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &RingElement) -> Result<RingElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RingElement {
        self.scale(&-BigRational::one())
    }

    pub fn scale(&self, c: &BigRational) -> RingElement {
        let mut out = Self::zero(self.ring);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Graded-commutative product with Koszul signs and truncation.
    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.check_ring(other)?;
        let mut out = Self::zero(self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = ma.mul(mb) {
                    out.add_term(m, ca * cb * BigRational::from_integer(BigInt::from(sign)));
                }
            }
        }
        Ok(out)
    }

    /// The ring differential, extended from the generators as a graded
    /// derivation of degree −1.
    pub fn differential(&self) -> RingElement {
        let mut out = Self::zero(self.ring);
        for (m, c) in &self.terms {
            for (coef, image) in monomial_differential(&self.ring, m) {
                out.add_term(image, c * BigRational::from_integer(BigInt::from(coef)));
            }
        }
        out
    }
}

/// `d_R` of a single monomial as a list of `(integer coefficient, monomial)`.
pub(crate) fn monomial_differential(ring: &RingSpec, m: &Monomial) -> Vec<(i64, Monomial)> {
    let powers = m.powers();
    let mut out = Vec::new();
    for (i, &(v, e)) in powers.iter().enumerate() {
        let Some(dv) = ring.differential_of(v) else { continue };
        let prefix = Monomial(powers[..i].to_vec());
        let suffix = Monomial(powers[i + 1..].to_vec());
        let rest = if e > 1 { Monomial(vec![(v, e - 1)]) } else { Monomial::one() };
        let prefix_sign = if prefix.degree().rem_euclid(2) == 0 { 1 } else { -1 };
        let product = prefix
            .mul(&rest)
            .and_then(|(s1, a)| a.mul(&Monomial::var(dv)).map(|(s2, b)| (s1 * s2, b)))
            .and_then(|(s, b)| b.mul(&suffix).map(|(s3, c)| (s * s3, c)));
        if let Some((sign, image)) = product {
            out.push((prefix_sign * sign as i64 * e as i64, image));
        }
    }
    out
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if m.is_one() { c.to_string() } else { format!("({c})*{m}") })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
