//! Collections and homotopies of homotopy random variables built from fluid data.
//!
//! A homotopy over `R[[t, dt]]` with `R = ℝ[ε, dε]` is stored slot by slot,
//!
//! ```text
//! f + X dt + V ε + π dtε + σ dε + Φ dtdε + Ψ εdε,
//! ```
//!
//! each slot a time-sampled [`Family`]. The residual of a collection or
//! homotopy is `δ(exp 𝒳)`, split into its monomial coefficients; each
//! coefficient is one of the named equations below.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::decorated::{DecoratedForm, Decorated, Family, Samples};
use crate::graded::{BaseRing, Monomial, RingSpec, Variable};
use crate::torus::{
    codifferential, exterior_derivative, expectation, flat, hodge_star, integrate, poisson_solve, wedge,
    Form, Grid, VectorField,
};
use crate::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const TOL_MASS: f64 = 1e-10;

/// Named coefficient equations of `δ(exp 𝒳)`, by monomial.
pub const EQUATIONS: [(&str, &[Variable]); 8] = [
    ("mass", &[Variable::Dt]),
    ("vorticity-divergence", &[Variable::Eps]),
    ("vorticity", &[Variable::Dt, Variable::Eps]),
    ("V-equation", &[Variable::DEps]),
    ("momentum", &[Variable::Dt, Variable::DEps]),
    ("trivial-equation", &[Variable::Eps, Variable::DEps]),
    ("Psi-equation", &[Variable::DEps, Variable::DEps]),
    ("helicity-equation", &[Variable::Dt, Variable::Eps, Variable::DEps]),
];

fn word(vars: &[Variable]) -> Monomial {
    Monomial::from_word(vars).expect("equation monomials are nonzero").1
}

/// The equations that can appear for elements of `ring`.
pub fn equations_for(ring: &RingSpec) -> Vec<(&'static str, Monomial)> {
    EQUATIONS
        .iter()
        .map(|(name, vars)| (*name, word(vars)))
        .filter(|(_, m)| ring.contains_monomial(m))
        .collect()
}

pub fn equation_monomial(name: &str) -> Option<Monomial> {
    EQUATIONS.iter().find(|(n, _)| *n == name).map(|(_, v)| word(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Lemma {
    Mass,
    Vorticity,
    Euler,
}

impl Lemma {
    pub fn name(self) -> &'static str {
        match self {
            Lemma::Mass => "mass",
            Lemma::Vorticity => "vorticity",
            Lemma::Euler => "euler",
        }
    }
}

impl FromStr for Lemma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Lemma> {
        match s {
            "mass" => Ok(Lemma::Mass),
            "vorticity" => Ok(Lemma::Vorticity),
            "euler" => Ok(Lemma::Euler),
            other => Err(Error::Parse(format!("unknown lemma {other:?}"))),
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Density, velocity and pressure sampled at increasing times.
#[derive(Clone, Debug)]
pub struct FluidState {
    pub grid: Arc<Grid>,
    pub times: Arc<Vec<f64>>,
    pub rho: Vec<Form>,
    pub u: Vec<VectorField>,
    pub p: Vec<Form>,
}

impl FluidState {
    pub fn new(times: Vec<f64>, rho: Vec<Form>, u: Vec<VectorField>, p: Vec<Form>) -> Result<FluidState> {
        let m = times.len();
        if m == 0 || rho.len() != m || u.len() != m || p.len() != m || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::SampleMismatch);
        }
        let grid = rho[0].grid().clone();
        let same = |g: &Arc<Grid>| **g == *grid;
        if !rho.iter().all(|f| same(f.grid()) && f.degree() == 0)
            || !p.iter().all(|f| same(f.grid()) && f.degree() == 0)
            || !u.iter().all(|v| same(v.grid()))
        {
            return Err(Error::GridMismatch);
        }
        let min = rho.iter().map(Form::min_value).fold(f64::INFINITY, f64::min);
        if min <= 0.0 {
            return Err(Error::DensityError(min));
        }
        Ok(FluidState { grid, times: Arc::new(times), rho, u, p })
    }

    pub fn samples(&self) -> Samples {
        Samples { grid: self.grid.clone(), times: self.times.clone() }
    }

    fn family(&self, forms: Vec<Form>) -> Family {
        Family::new(self.times.clone(), forms).expect("validated on construction")
    }

    pub fn density(&self) -> Family {
        self.family(self.rho.clone())
    }

    pub fn velocity(&self) -> Family {
        self.family(self.u.iter().map(flat).collect())
    }

    pub fn pressure(&self) -> Family {
        self.family(self.p.clone())
    }

    /// Multiplies the density by `1 + t`, which breaks mass conservation.
    pub fn with_density_growth(&self) -> FluidState {
        let rho = self.rho.iter().zip(self.times.iter()).map(|(r, t)| r.scale(1.0 + t)).collect();
        FluidState { rho, ..self.clone() }
    }
}

/// Slots of a homotopy `f + X dt + V ε + π dtε + σ dε + Φ dtdε + Ψ εdε`.
#[derive(Clone, Debug)]
pub struct HomotopyData {
    pub base: BaseRing,
    pub samples: Samples,
    pub f: Family,
    pub x: Option<Family>,
    pub v: Option<Family>,
    pub pi: Option<Family>,
    pub sigma: Option<Family>,
    pub phi: Option<Family>,
    pub psi: Option<Family>,
}

impl HomotopyData {
    pub fn ring(&self) -> RingSpec {
        RingSpec::new(self.base).with_interval()
    }

    pub fn times(&self) -> &[f64] {
        &self.samples.times
    }

    fn slots(&self) -> Vec<(&'static str, Monomial, Option<&Family>)> {
        use Variable::{DEps, Dt, Eps};
        vec![
            ("f", Monomial::one(), Some(&self.f)),
            ("X", word(&[Dt]), self.x.as_ref()),
            ("V", word(&[Eps]), self.v.as_ref()),
            ("pi", word(&[Dt, Eps]), self.pi.as_ref()),
            ("sigma", word(&[DEps]), self.sigma.as_ref()),
            ("Phi", word(&[Dt, DEps]), self.phi.as_ref()),
            ("Psi", word(&[Eps, DEps]), self.psi.as_ref()),
        ]
    }

    pub fn slot(&self, name: &str) -> Option<&Family> {
        self.slots().into_iter().find(|(n, _, _)| *n == name).and_then(|(_, _, f)| f)
    }

    pub fn to_decorated(&self) -> Result<DecoratedForm> {
        let terms = self.slots().into_iter().filter_map(|(_, m, f)| f.map(|f| (m, f.clone())));
        Decorated::numeric(self.ring(), self.samples.clone(), 0, terms)
    }

    /// The collection at each sample time: the homotopy with `dt = 0`.
    pub fn collection(&self) -> Result<DecoratedForm> {
        Ok(self.to_decorated()?.without_variable(Variable::Dt))
    }

    pub fn density(&self) -> Family {
        self.f.map(|f| f.map(f64::exp))
    }

    /// Pressure `⋆(ρΦ)`.
    pub fn pressure(&self) -> Result<Family> {
        let phi = self.phi.as_ref().ok_or(Error::SlotError("Phi"))?;
        self.density().zip_map(phi, |r, p| Ok(hodge_star(&p.times_function(r))))
    }
}

/// A collection over `ℝ`, `ℝ[ε]` or `ℝ[ε, dε]` at a single time, optionally
/// with degree-zero statistics markers `s_i g_i`.
#[derive(Clone, Debug)]
pub struct CollectionSpec {
    pub base: BaseRing,
    pub f: Form,
    pub v: Option<Form>,
    pub sigma: Option<Form>,
    pub psi: Option<Form>,
    pub markers: Vec<Form>,
}

impl CollectionSpec {
    pub fn real(f: Form) -> CollectionSpec {
        CollectionSpec { base: BaseRing::Real, f, v: None, sigma: None, psi: None, markers: Vec::new() }
    }

    pub fn eps(f: Form, v: Form) -> CollectionSpec {
        CollectionSpec { base: BaseRing::Eps, v: Some(v), ..CollectionSpec::real(f) }
    }

    /// The `ℝ[ε, dε]` collection determined by `(f, σ)`: `V = δ(ρσ)/ρ`, `Ψ = −V∧σ`.
    pub fn eps_deps(f: Form, sigma: Form) -> Result<CollectionSpec> {
        let rho = f.map(f64::exp);
        let v = codifferential(&sigma.times_function(&rho)).times_function(&rho.map(|r| 1.0 / r));
        let psi = -&wedge(&v, &sigma)?;
        Ok(CollectionSpec { base: BaseRing::EpsDEps, v: Some(v), sigma: Some(sigma), psi: Some(psi), ..CollectionSpec::real(f) })
    }

    pub fn with_markers(mut self, markers: Vec<Form>) -> CollectionSpec {
        self.markers = markers;
        self
    }

    pub fn ring(&self) -> RingSpec {
        RingSpec::new(self.base).with_markers(self.markers.len() as u16)
    }

    pub fn to_decorated(&self) -> Result<DecoratedForm> {
        use Variable::{DEps, Eps};
        let grid = self.f.grid().clone();
        let samples = Samples { grid, times: Arc::new(vec![0.0]) };
        let mut terms = vec![(Monomial::one(), Family::fixed(self.f.clone()))];
        let mut push = |m: Monomial, f: &Option<Form>| {
            if let Some(f) = f {
                terms.push((m, Family::fixed(f.clone())));
            }
        };
        push(word(&[Eps]), &self.v);
        push(word(&[DEps]), &self.sigma);
        push(word(&[Eps, DEps]), &self.psi);
        for (i, g) in self.markers.iter().enumerate() {
            terms.push((Monomial::var(Variable::Marker(i as u16 + 1)), Family::fixed(g.clone())));
        }
        Decorated::numeric(self.ring(), samples, 0, terms)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationResidual {
    pub name: String,
    pub monomial: String,
    pub per_sample: Vec<f64>,
}

impl EquationResidual {
    pub fn max(&self) -> f64 {
        self.per_sample.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub times: Vec<f64>,
    pub equations: Vec<EquationResidual>,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn equation(&self, name: &str) -> Option<&EquationResidual> {
        self.equations.iter().find(|e| e.name == name)
    }

    pub fn max(&self) -> f64 {
        self.equations.iter().map(EquationResidual::max).fold(0.0, f64::max)
    }
}

/// Coefficients of `δ(exp 𝒳)`: the named equations of the ring, followed by any
/// other monomial that occurs, each as a family.
pub fn residual_families(x: &DecoratedForm) -> Result<Vec<(String, Monomial, Family)>> {
    let d = x.exp()?.delta_total()?;
    let ring = x.ring();
    let mut out = Vec::new();
    for (name, m) in equations_for(&ring) {
        out.push((name.to_string(), m.clone(), d.coefficient_of(&m)?));
    }
    for (m, c) in d.terms() {
        if !out.iter().any(|(_, n, _)| n == m) {
            out.push((m.to_string(), m.clone(), c.clone()));
        }
    }
    Ok(out)
}

fn report(x: &DecoratedForm, tol: f64) -> Result<ResidualReport> {
    let scale = x.exp()?.sup_norm().max(1.0);
    let tolerance = tol * scale;
    let equations: Vec<EquationResidual> = residual_families(x)?
        .into_iter()
        .map(|(name, m, c)| EquationResidual { name, monomial: m.to_string(), per_sample: c.sup_norms() })
        .collect();
    let pass = equations.iter().all(|e| e.per_sample.iter().all(|r| *r <= tolerance));
    Ok(ResidualReport { times: x.samples().times.to_vec(), equations, tolerance, pass })
}

/// Residuals of `δ(exp 𝒳) = 0` for a single-time collection. The tolerance is
/// scaled by `max(1, sup-norm of exp 𝒳)`.
pub fn collection_residual(c: &CollectionSpec, tol: f64) -> Result<ResidualReport> {
    report(&c.to_decorated()?, tol)
}

/// Residuals of `δ(exp 𝒳) = 0` for a homotopy at every sample time.
pub fn homotopy_residual(h: &HomotopyData, tol: f64) -> Result<ResidualReport> {
    report(&h.to_decorated()?, tol)
}

fn log_density(s: &FluidState) -> Result<Family> {
    let min = s.rho.iter().map(Form::min_value).fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        return Err(Error::DensityError(min));
    }
    Ok(s.density().map(|r| r.map(f64::ln)))
}

fn empty(base: BaseRing, samples: Samples, f: Family) -> HomotopyData {
    HomotopyData { base, samples, f, x: None, v: None, pi: None, sigma: None, phi: None, psi: None }
}

/// `f = log ρ`, `X = u♭` over `ℝ[[t, dt]]`.
pub fn build_mass_homotopy(s: &FluidState) -> Result<HomotopyData> {
    let mut h = empty(BaseRing::Real, s.samples(), log_density(s)?);
    h.x = Some(s.velocity());
    Ok(h)
}

fn kinetic(x: &Form) -> Form {
    codifferential(&wedge(x, &hodge_star(x)).expect("1 + 2 <= 3")).scale(0.5)
}

/// `f = 0`, `X = u♭`, `V = −⋆dX`, `π = ½δ(X∧⋆X)` over `ℝ[ε][[t, dt]]`.
pub fn build_vorticity_homotopy(times: Vec<f64>, u: &[VectorField]) -> Result<HomotopyData> {
    let grid = u.first().ok_or(Error::SampleMismatch)?.grid().clone();
    let times = Arc::new(times);
    let x = Family::new(times.clone(), u.iter().map(flat).collect())?;
    let v = x.try_map(|x| Ok(-&hodge_star(&exterior_derivative(x)?)))?;
    let pi = x.map(kinetic);
    let samples = Samples { grid: grid.clone(), times: times.clone() };
    let f = Family::constant(times, Form::zero(&grid, 0));
    let mut h = empty(BaseRing::Eps, samples, f);
    h.x = Some(x);
    h.v = Some(v);
    h.pi = Some(pi);
    Ok(h)
}

/// The identifications `X = u♭`, `V = −⋆d(ρX)/ρ`, `π = ½δ(X∧⋆X) − δ(X)⋆X`,
/// `σ = ⋆X`, `Φ = ⋆p/ρ`, `Ψ = X∧dX` over `ℝ[ε, dε][[t, dt]]`.
pub fn build_euler_homotopy(s: &FluidState) -> Result<HomotopyData> {
    let f = log_density(s)?;
    let rho = s.density();
    let inv = rho.map(|r| r.map(|v| 1.0 / v));
    let x = s.velocity();
    let v = x.zip_map(&rho, |x, r| Ok(-&hodge_star(&exterior_derivative(&x.times_function(r))?)))?;
    let v = v.zip_map(&inv, |v, i| Ok(v.times_function(i)))?;
    let pi = x.map(|x| {
        let sx = hodge_star(x);
        &kinetic(x) - &sx.times_function(&codifferential(x))
    });
    let sigma = x.map(hodge_star);
    let phi = s.pressure().zip_map(&inv, |p, i| Ok(hodge_star(&p.times_function(i))))?;
    let psi = x.try_map(|x| wedge(x, &exterior_derivative(x)?))?;
    let mut h = empty(BaseRing::EpsDEps, s.samples(), f);
    h.x = Some(x);
    h.v = Some(v);
    h.pi = Some(pi);
    h.sigma = Some(sigma);
    h.phi = Some(phi);
    h.psi = Some(psi);
    Ok(h)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintEntry {
    pub name: String,
    pub per_sample: Vec<f64>,
    /// Informational entries are reported but do not decide pass/fail.
    pub primary: bool,
}

impl ConstraintEntry {
    pub fn max(&self) -> f64 {
        self.per_sample.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintReport {
    pub lemma: Lemma,
    pub entries: Vec<ConstraintEntry>,
}

impl ConstraintReport {
    pub fn entry(&self, name: &str) -> Option<&ConstraintEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.entries.iter().filter(|e| e.primary).all(|e| e.max() <= tol)
    }
}

fn slot<'a>(h: &'a HomotopyData, name: &'static str) -> Result<&'a Family> {
    h.slot(name).ok_or(Error::SlotError(name))
}

fn deviation(a: &Family, b: &Family) -> Result<Vec<f64>> {
    Ok(a.zip_map(b, |a, b| a.try_sub(b))?.sup_norms())
}

/// Sup-norm deviation from each constraint of the lemma.
///
/// For the vorticity lemma the vorticity constraint is checked as `V = −⋆dX`;
/// the literal `V = ⋆X` (whose sides have different degrees) is reported as an
/// informational entry comparing component arrays.
pub fn constraint_check(h: &HomotopyData, lemma: Lemma) -> Result<ConstraintReport> {
    let mut entries = Vec::new();
    let mut push = |name: &str, per_sample: Vec<f64>, primary: bool| {
        entries.push(ConstraintEntry { name: name.into(), per_sample, primary });
    };
    match lemma {
        Lemma::Mass => {}
        Lemma::Vorticity => {
            let x = slot(h, "X")?;
            let v = slot(h, "V")?;
            let pi = slot(h, "pi")?;
            push("constant and uniform density constraint", h.f.sup_norms(), true);
            let curl = x.try_map(|x| Ok(-&hodge_star(&exterior_derivative(x)?)))?;
            push("vorticity constraint", deviation(v, &curl)?, true);
            let literal = v
                .forms()
                .iter()
                .zip(x.forms())
                .map(|(v, x)| {
                    let sx = hodge_star(x);
                    v.components()
                        .iter()
                        .zip(sx.components())
                        .flat_map(|(a, b)| a.iter().zip(b).map(|(a, b)| (a - b).abs()))
                        .fold(0.0, f64::max)
                })
                .collect();
            push("vorticity constraint (literal V = *X)", literal, false);
            push("kinetic constraint", deviation(pi, &x.map(kinetic))?, true);
        }
        Lemma::Euler => {
            let x = slot(h, "X")?;
            let sigma = slot(h, "sigma")?;
            let pi = slot(h, "pi")?;
            push("velocity constraint", deviation(sigma, &x.map(hodge_star))?, true);
            let modified = x.map(|x| &kinetic(x) - &hodge_star(x).times_function(&codifferential(x)));
            push("modified kinetic constraint", deviation(pi, &modified)?, true);
        }
    }
    Ok(ConstraintReport { lemma, entries })
}

/// Real-valued statistics `E(exp 𝒳)` restricted to `dt = 0`, per sample time.
#[derive(Clone, Debug, Serialize)]
pub struct StatisticsReport {
    pub times: Vec<f64>,
    /// Monomial → expectation per sample; only monomials with 0-form coefficients.
    pub entries: BTreeMap<String, Vec<f64>>,
    pub mass: Vec<f64>,
}

/// Applies `E` monomial-wise to `exp 𝒳` (with `dt = 0`). Only coefficients of
/// form degree 0 can have nonzero expectation, so only those are listed.
pub fn statistics(x: &DecoratedForm) -> Result<StatisticsReport> {
    let e = x.without_variable(Variable::Dt).exp()?;
    let mut entries = BTreeMap::new();
    for (m, c) in e.terms() {
        if c.degree() == 0 {
            entries.insert(m.to_string(), c.forms().iter().map(expectation).collect());
        }
    }
    let mass = e.coefficient_of(&Monomial::one())?.forms().iter().map(expectation).collect();
    Ok(StatisticsReport { times: x.samples().times.to_vec(), entries, mass })
}

/// Labels of the constant-form basis used by [`cohomology_statistics`].
pub const COHOMOLOGY_BASIS: [&str; 8] = ["1", "dx", "dy", "dz", "dydz", "dzdx", "dxdy", "dV"];

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub times: Vec<f64>,
    pub basis: [&'static str; 8],
    /// Monomial → per sample, the harmonic part in the constant-form basis.
    pub entries: BTreeMap<String, Vec<[f64; 8]>>,
}

fn basis_offset(degree: usize) -> usize {
    [0, 1, 4, 7][degree]
}

/// Harmonic projection of every coefficient of `exp 𝒳` (with `dt = 0`).
pub fn cohomology_statistics(x: &DecoratedForm) -> Result<CohomologyReport> {
    let e = x.without_variable(Variable::Dt).exp()?;
    let mut entries = BTreeMap::new();
    for (m, c) in e.terms() {
        let rows = c
            .forms()
            .iter()
            .map(|f| {
                let mut row = [0.0; 8];
                for (i, mean) in f.component_means().into_iter().enumerate() {
                    row[basis_offset(f.degree()) + i] = mean;
                }
                row
            })
            .collect();
        entries.insert(m.to_string(), rows);
    }
    Ok(CohomologyReport { times: x.samples().times.to_vec(), basis: COHOMOLOGY_BASIS, entries })
}

/// `∫ Ψ` over the torus (not normalised by its volume), per sample time.
pub fn helicity(h: &HomotopyData) -> Result<Vec<f64>> {
    slot(h, "Psi")?.forms().iter().map(integrate).collect()
}

#[derive(Clone, Debug)]
pub struct DensityHomotopy {
    pub homotopy: HomotopyData,
    /// The 1-form with `δY = e^{f1} − e^{f0}`.
    pub y: Form,
    pub masses: [f64; 2],
}

/// The homotopy `f(t) = log ρ_t`, `X(t) = −Y/ρ_t` with `ρ_t = (1−t)e^{f0} + t e^{f1}`
/// and `δY = e^{f1} − e^{f0}`, between two functions of equal mass.
pub fn construct_density_homotopy(f0: &Form, f1: &Form, times: Vec<f64>) -> Result<DensityHomotopy> {
    if f0.grid() != f1.grid() {
        return Err(Error::GridMismatch);
    }
    if f0.degree() != 0 || f1.degree() != 0 {
        return Err(Error::DegreeError { expected: 0, found: f0.degree().max(f1.degree()) as i32 });
    }
    let rho0 = f0.map(f64::exp);
    let rho1 = f1.map(f64::exp);
    let (m0, m1) = (expectation(&rho0), expectation(&rho1));
    let scale = m0.abs().max(m1.abs());
    if (m0 - m1).abs() > TOL_MASS * scale {
        return Err(Error::MassError { m0, m1, tol: TOL_MASS });
    }
    let h = rho1.try_sub(&rho0)?;
    let phi = poisson_solve(&h, TOL_MASS * scale + f64::EPSILON)?;
    let y = exterior_derivative(&phi)?;
    let defect = (&codifferential(&y) - &h).sup_norm();
    if defect > TOL_MASS * scale.max(1.0) {
        return Err(Error::Precondition(format!(
            "density difference is not resolved on the grid (defect {defect:e} at the Nyquist modes)"
        )));
    }
    let times = Arc::new(times);
    let rho_t = Family::from_fn(times.clone(), |t| &rho0.scale(1.0 - t) + &rho1.scale(t))?;
    let f = rho_t.map(|r| r.map(f64::ln));
    let x = rho_t.map(|r| (-&y).times_function(&r.map(|v| 1.0 / v)));
    let samples = Samples { grid: f0.grid().clone(), times };
    let mut homotopy = empty(BaseRing::Real, samples, f);
    homotopy.x = Some(x);
    Ok(DensityHomotopy { homotopy, y, masses: [m0, m1] })
}
