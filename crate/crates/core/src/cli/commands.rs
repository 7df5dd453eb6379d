use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use super::config::{check_grid_size, check_positive};
use super::dec::{run_dec_suite, DecConfig};
use super::report::Report;
use crate::gaussian::moment_table;
use crate::hrv::{
    build_euler_homotopy, build_mass_homotopy, build_vorticity_homotopy, constraint_check,
    construct_density_homotopy, helicity, homotopy_residual, statistics, FluidState, HomotopyData, Lemma,
};
use crate::torus::{expectation, flat, read_form, sharp, write_form, Grid};
use crate::zoo::{
    abc_flow, shear_flow, taylor_green_2d, transport_solution, uniform_times, AnalyticField, Profile,
    DEFAULT_TRANSPORT_VELOCITY,
};
use crate::{Error, Result};

pub const GAUSSIAN_N_MAX: usize = 40;

pub fn cmd_check_dec(cfg: &DecConfig) -> Result<Report> {
    check_grid_size(cfg.n)?;
    let start = Instant::now();
    let mut report = Report::new("check-dec");
    report.config("n", cfg.n);
    report.config("kmax", cfg.kmax);
    report.config("samples", cfg.samples);
    report.config("seed", cfg.seed);
    report.config("flip_codifferential_sign", cfg.flip_codifferential_sign);
    let checks = run_dec_suite(cfg)?;
    report.pass = checks.iter().all(|c| c.pass);
    report.result("bv_wavenumber", super::dec::bv_wavenumber(cfg.n, cfg.kmax));
    report.result("checks", &checks);
    report.timing("total_seconds", start.elapsed().as_secs_f64());
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct FieldChoice {
    pub name: String,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub amplitude: f64,
}

impl FieldChoice {
    pub fn resolve(&self) -> Result<AnalyticField> {
        match self.name.as_str() {
            "abc" => Ok(abc_flow(self.a, self.b, self.c)),
            "shear" => Ok(shear_flow(self.amplitude)),
            "taylor-green" => taylor_green_2d(),
            "transport" => Ok(transport_solution(Profile::default_transport(), DEFAULT_TRANSPORT_VELOCITY)),
            other => Err(Error::Parse(format!("unknown field {other:?}"))),
        }
    }
}

fn sample_times(dt: f64, t_end: f64) -> Result<Vec<f64>> {
    check_positive("dt", dt)?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::Precondition(format!("t-end must be nonnegative, got {t_end}")));
    }
    let steps = (t_end / dt).round();
    if (steps * dt - t_end).abs() > 1e-9 * t_end.max(1.0) {
        return Err(Error::Precondition(format!("t-end {t_end} is not a multiple of dt {dt}")));
    }
    Ok(if steps == 0.0 { vec![0.0] } else { uniform_times(t_end, steps as usize) })
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub field: Option<FieldChoice>,
    pub manifest: Option<PathBuf>,
    pub lemma: Lemma,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub tol: f64,
    pub perturb_density: bool,
}

fn build(lemma: Lemma, state: &FluidState) -> Result<HomotopyData> {
    match lemma {
        Lemma::Mass => build_mass_homotopy(state),
        Lemma::Vorticity => build_vorticity_homotopy(state.times.to_vec(), &state.u),
        Lemma::Euler => build_euler_homotopy(state),
    }
}

fn spread(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn cmd_verify(cfg: &VerifyConfig) -> Result<Report> {
    check_positive("tol", cfg.tol)?;
    let start = Instant::now();
    let mut report = Report::new("verify");
    report.config("lemma", cfg.lemma);
    report.config("tol", cfg.tol);
    report.config("perturb_density", cfg.perturb_density);

    let (mut state, field) = match (&cfg.field, &cfg.manifest) {
        (Some(_), Some(_)) => return Err(Error::Precondition("give either --field or --manifest".into())),
        (None, None) => return Err(Error::Precondition("--field or --manifest is required".into())),
        (Some(choice), None) => {
            check_grid_size(cfg.n)?;
            let field = choice.resolve()?;
            let times = sample_times(cfg.dt, cfg.t_end)?;
            report.config("field", field.name());
            report.config("parameters", field.parameters());
            report.config("n", cfg.n);
            report.config("dt", cfg.dt);
            report.config("t_end", cfg.t_end);
            (field.sample(&Grid::new(cfg.n)?, &times)?, Some(field))
        }
        (None, Some(path)) => {
            report.config("manifest", path.display().to_string());
            let state = read_manifest(path)?;
            report.config("n", state.grid.n());
            (state, None)
        }
    };
    if cfg.perturb_density {
        state = state.with_density_growth();
    }
    report.timing("sample_seconds", start.elapsed().as_secs_f64());

    let h = build(cfg.lemma, &state)?;
    let residuals = homotopy_residual(&h, cfg.tol)?;
    report.timing("residual_seconds", start.elapsed().as_secs_f64());
    let constraints = constraint_check(&h, cfg.lemma)?;
    let constraints_pass = constraints.passes(cfg.tol);
    let stats = statistics(&h.collection()?)?;
    report.result("times", state.times.as_slice());
    report.result("residuals", &residuals);
    report.result("constraints", &constraints);
    report.result("constraints_pass", constraints_pass);
    report.result("mass", &stats.mass);
    report.result("mass_spread", spread(&stats.mass));
    report.result("statistics", &stats.entries);
    if h.psi.is_some() {
        let hel = helicity(&h)?;
        report.result("helicity_spread", spread(&hel));
        report.result("helicity", hel);
        if let Some(AnalyticField::Abc { a, b, c }) = field {
            report.result("helicity_reference", (a * a + b * b + c * c) * (2.0 * std::f64::consts::PI).powi(3));
        }
    }
    report.pass = residuals.pass && constraints_pass;
    report.timing("total_seconds", start.elapsed().as_secs_f64());
    Ok(report)
}

pub fn cmd_gaussian(n_max: usize) -> Result<Report> {
    if n_max > GAUSSIAN_N_MAX {
        return Err(Error::Precondition(format!("n-max must be at most {GAUSSIAN_N_MAX}")));
    }
    let mut report = Report::new("gaussian");
    report.config("n_max", n_max);
    let rows: Vec<_> = moment_table(n_max).into_iter().map(|(n, m)| json!({ "n": n, "moment": m.to_string() })).collect();
    report.result("moments", rows);
    report.timings = None;
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct HomotopyConfig {
    pub f0: PathBuf,
    pub f1: PathBuf,
    pub samples: usize,
    pub tol: f64,
}

pub const ENDPOINT_TOL: f64 = 1e-10;

pub fn cmd_homotopy(cfg: &HomotopyConfig) -> Result<Report> {
    check_positive("tol", cfg.tol)?;
    if cfg.samples < 2 {
        return Err(Error::Precondition("at least two samples are needed".into()));
    }
    let start = Instant::now();
    let mut report = Report::new("homotopy");
    report.config("f0", cfg.f0.display().to_string());
    report.config("f1", cfg.f1.display().to_string());
    report.config("samples", cfg.samples);
    report.config("tol", cfg.tol);
    let f0 = read_form(&cfg.f0, None)?;
    let f1 = read_form(&cfg.f1, Some(f0.grid()))?;
    let times = uniform_times(1.0, cfg.samples - 1);
    let d = construct_density_homotopy(&f0, &f1, times)?;
    let residuals = homotopy_residual(&d.homotopy, cfg.tol)?;
    let f = &d.homotopy.f;
    let endpoints = [(f.at(0) - &f0).sup_norm(), (f.at(f.len() - 1) - &f1).sup_norm()];
    let mass: Vec<f64> = d.homotopy.density().forms().iter().map(expectation).collect();
    let mass_spread = spread(&mass);
    report.result("masses", d.masses);
    report.result("y_sup_norm", d.y.sup_norm());
    report.result("residuals", &residuals);
    report.result("endpoint_mismatch", endpoints);
    report.result("mass", &mass);
    report.result("mass_spread", mass_spread);
    report.pass = residuals.pass
        && endpoints.iter().all(|e| *e <= ENDPOINT_TOL)
        && mass_spread <= crate::hrv::TOL_MASS * d.masses[0].abs().max(1.0);
    report.timing("total_seconds", start.elapsed().as_secs_f64());
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct ExportConfig {
    pub field: FieldChoice,
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub dir: PathBuf,
}

/// Writes one file per quantity and sample time, and `manifest.txt` listing
/// `t rho u p` per line (paths relative to the manifest).
pub fn write_manifest(dir: &Path, state: &FluidState) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let mut manifest = String::new();
    for (i, t) in state.times.iter().enumerate() {
        let names = [format!("rho_{i:04}.txt"), format!("u_{i:04}.txt"), format!("p_{i:04}.txt")];
        write_form(dir.join(&names[0]), &state.rho[i])?;
        write_form(dir.join(&names[1]), &flat(&state.u[i]))?;
        write_form(dir.join(&names[2]), &state.p[i])?;
        let _ = writeln!(manifest, "{t:e} {} {} {}", names[0], names[1], names[2]);
    }
    let path = dir.join("manifest.txt");
    fs::write(&path, manifest)?;
    Ok(path)
}

pub fn read_manifest(path: &Path) -> Result<FluidState> {
    let base = path.parent().unwrap_or(Path::new("."));
    let text = fs::read_to_string(path)?;
    let (mut times, mut rho, mut u, mut p) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut grid = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [t, r, v, q] = parts[..] else {
            return Err(Error::Parse(format!("manifest line {}: expected `t rho u p`", lineno + 1)));
        };
        times.push(t.parse().map_err(|_| Error::Parse(format!("manifest line {}: bad time {t:?}", lineno + 1)))?);
        let rf = read_form(base.join(r), grid.as_ref())?;
        grid.get_or_insert_with(|| rf.grid().clone());
        let vf = read_form(base.join(v), grid.as_ref())?;
        let qf = read_form(base.join(q), grid.as_ref())?;
        if rf.degree() != 0 || vf.degree() != 1 || qf.degree() != 0 {
            return Err(Error::Parse(format!("manifest line {}: expected degrees 0, 1, 0", lineno + 1)));
        }
        rho.push(rf);
        u.push(sharp(&vf)?);
        p.push(qf);
    }
    FluidState::new(times, rho, u, p)
}

pub fn cmd_export(cfg: &ExportConfig) -> Result<Report> {
    check_grid_size(cfg.n)?;
    let field = cfg.field.resolve()?;
    let times = sample_times(cfg.dt, cfg.t_end)?;
    let state = field.sample(&Grid::new(cfg.n)?, &times)?;
    let manifest = write_manifest(&cfg.dir, &state)?;
    let mut report = Report::new("export");
    report.config("field", field.name());
    report.config("parameters", field.parameters());
    report.config("n", cfg.n);
    report.config("dt", cfg.dt);
    report.config("t_end", cfg.t_end);
    report.result("manifest", manifest.display().to_string());
    report.result("samples", times.len());
    report.timings = None;
    Ok(report)
}

