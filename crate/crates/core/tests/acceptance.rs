//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::process::Command;

use hpt_fluid::cli::dec::{bv_wavenumber, run_dec_suite, CheckResult, DecConfig};
use hpt_fluid::decorated::{Decorated, Family, FormPoly, SymbolicForm};
use hpt_fluid::gaussian::{g_delta, g_moment, g_reduce, GaussianElement, Poly};
use hpt_fluid::graded::{BaseRing, Monomial, RingSpec, Variable};
use hpt_fluid::hrv::{
    build_euler_homotopy, build_mass_homotopy, build_vorticity_homotopy, constraint_check,
    construct_density_homotopy, helicity, homotopy_residual, residual_families, HomotopyData, Lemma,
    DEFAULT_TOLERANCE,
};
use hpt_fluid::torus::{expectation, Grid};
use hpt_fluid::zoo::{
    abc_flow, shear_flow, taylor_green_2d, transport_solution, uniform_times, AnalyticField, Mode, Profile,
    DEFAULT_TRANSPORT_VELOCITY,
};
use hpt_fluid::Error;
use nalgebra::{DMatrix, SymmetricEigen};
use num::{BigInt, BigRational, One, Zero};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn fail<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn summary(checks: &[CheckResult], names: &[&str]) -> Vec<String> {
    names
        .iter()
        .map(|n| {
            let c = checks.iter().find(|c| c.name == *n).expect("check present");
            format!("{}={:.1e}/{}", c.name, c.max, c.cases)
        })
        .collect()
}

fn operator_identities() -> Outcome {
    let names = ["delta-squared", "star-star", "curl-grad", "div-curl", "adjointness"];
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [16, 32] {
        let cfg = DecConfig { n, kmax: n / 4, samples: 50, seed: 11, flip_codifferential_sign: false };
        let checks = run_dec_suite(&cfg).map_err(fail)?;
        for name in names {
            let c = checks.iter().find(|c| c.name == name).unwrap();
            ok &= c.max <= 1e-10;
        }
        parts.push(format!("N={n}: {}", summary(&checks, &names).join(" ")));
    }
    ensure(ok, parts.join("; "))
}

fn bv_relation() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [16, 32] {
        let kmax = n / 4;
        let cfg = DecConfig { n, kmax, samples: 50, seed: 12, flip_codifferential_sign: false };
        let checks = run_dec_suite(&cfg).map_err(fail)?;
        let c = checks.iter().find(|c| c.name == "bv-seven-term").unwrap();
        let k = bv_wavenumber(n, kmax);
        ok &= c.max <= 1e-10 && 3 * k < n / 2 && c.cases >= 50;
        parts.push(format!("N={n} k={k}: max {:.1e} over {} triples", c.max, c.cases));
    }
    ensure(ok, parts.join("; "))
}

fn word(vars: &[Variable]) -> Monomial {
    let (sign, m) = Monomial::from_word(vars).unwrap();
    assert_eq!(sign, 1);
    m
}

fn symbolic_exponential() -> Outcome {
    use Variable::{DEps, Dt, Eps};
    let ring = RingSpec::new(BaseRing::EpsDEps).with_interval();
    let s = FormPoly::symbol;
    let generic: Vec<(Vec<Variable>, FormPoly)> = vec![
        (vec![], s("f", 0)),
        (vec![Dt], s("X", 1)),
        (vec![Eps], s("V", 1)),
        (vec![Dt, Eps], s("pi", 2)),
        (vec![DEps], s("sigma", 2)),
        (vec![Dt, DEps], s("Phi", 3)),
        (vec![Eps, DEps], s("Psi", 3)),
    ];
    let h: SymbolicForm = Decorated::from_terms(ring, (), 0, generic.into_iter().map(|(w, p)| (word(&w), p)))
        .map_err(fail)?;
    let got = h.exp().map_err(fail)?;

    // ρ + ρX dt + ρV ε + ρ(−XV + π) dtε + ρσ dε + ρ(Xσ + Φ) dtdε + ρ(Vσ + Ψ) εdε
    let rho = s("exp(f)", 0);
    let w = |a: &FormPoly, b: &FormPoly| a.wedge(b).unwrap();
    let (x, v, sigma) = (s("X", 1), s("V", 1), s("sigma", 2));
    let expected_terms: Vec<(Vec<Variable>, FormPoly)> = vec![
        (vec![], rho.clone()),
        (vec![Dt], w(&rho, &x)),
        (vec![Eps], w(&rho, &v)),
        (vec![Dt, Eps], w(&rho, &w(&x, &v).neg().add(&s("pi", 2)))),
        (vec![DEps], w(&rho, &sigma)),
        (vec![Dt, DEps], w(&rho, &w(&x, &sigma).add(&s("Phi", 3)))),
        (vec![Eps, DEps], w(&rho, &w(&v, &sigma).add(&s("Psi", 3)))),
    ];
    let expected: SymbolicForm =
        Decorated::from_terms(ring, (), 0, expected_terms.into_iter().map(|(w, p)| (word(&w), p))).map_err(fail)?;
    ensure(got == expected, format!("{} terms: {got}", got.len()))
}

fn transport_state(n: usize, times: &[f64]) -> Result<hpt_fluid::hrv::FluidState, String> {
    let field = transport_solution(Profile::default_transport(), DEFAULT_TRANSPORT_VELOCITY);
    field.sample(&Grid::new(n).map_err(fail)?, times).map_err(fail)
}

fn mass_lemma() -> Outcome {
    let times = uniform_times(1.0, 64);
    let state = transport_state(32, &times)?;
    let good = homotopy_residual(&build_mass_homotopy(&state).map_err(fail)?, DEFAULT_TOLERANCE).map_err(fail)?;
    let bad = homotopy_residual(&build_mass_homotopy(&state.with_density_growth()).map_err(fail)?, DEFAULT_TOLERANCE)
        .map_err(fail)?;
    let ok = good.max() <= DEFAULT_TOLERANCE && !bad.pass && bad.max() >= 100.0 * DEFAULT_TOLERANCE;
    ensure(ok, format!("transport {:.2e}, perturbed {:.2e} ({:.1e}x tolerance)", good.max(), bad.max(), bad.max() / DEFAULT_TOLERANCE))
}

fn vorticity_lemma() -> Outcome {
    let times = uniform_times(0.25, 16);
    let g = Grid::new(32).map_err(fail)?;
    let mut parts = Vec::new();
    let mut ok = true;
    for field in [abc_flow(1.0, 1.0, 1.0), shear_flow(1.0)] {
        let state = field.sample(&g, &times).map_err(fail)?;
        let h = build_vorticity_homotopy(times.clone(), &state.u).map_err(fail)?;
        let r = homotopy_residual(&h, DEFAULT_TOLERANCE).map_err(fail)?;
        let c = constraint_check(&h, Lemma::Vorticity).map_err(fail)?;
        let primary: Vec<_> = c.entries.iter().filter(|e| e.primary).collect();
        let cmax = primary.iter().map(|e| e.max()).fold(0.0, f64::max);
        ok &= r.max() <= DEFAULT_TOLERANCE && primary.len() == 3 && cmax <= DEFAULT_TOLERANCE;
        parts.push(format!("{}: residual {:.1e}, constraints {:.1e}", field.name(), r.max(), cmax));
    }
    ensure(ok, parts.join("; "))
}

fn family<'a>(fams: &'a [(String, Monomial, Family)], name: &str) -> &'a Family {
    &fams.iter().find(|(n, _, _)| n == name).expect("equation present").2
}

fn gap(a: &Family, b: &Family) -> f64 {
    a.zip_map(b, |a, b| a.try_sub(b)).unwrap().sup_norm()
}

/// Largest violation of the relations between the coefficient equations.
fn redundancy(h: &HomotopyData) -> Result<f64, String> {
    let fams = residual_families(&h.to_decorated().map_err(fail)?).map_err(fail)?;
    let r = |n| family(&fams, n);
    let neg = |f: &Family| f.map(|x| -x);
    let rel = [
        gap(&r("V-equation").codifferential(), &neg(r("vorticity-divergence"))),
        gap(r("helicity-equation"), &r("Psi-equation").time_derivative()),
        gap(r("trivial-equation"), &neg(&r("Psi-equation").codifferential())),
        gap(
            r("vorticity"),
            &r("V-equation").time_derivative().zip_map(&r("momentum").codifferential(), |a, b| a.try_sub(b)).map_err(fail)?,
        ),
    ];
    Ok(rel.into_iter().fold(0.0, f64::max))
}

fn euler_lemma() -> Outcome {
    let g = Grid::new(32).map_err(fail)?;
    let mut parts = Vec::new();
    let mut ok = true;
    let cases: Vec<(AnalyticField, Vec<f64>)> = vec![
        (abc_flow(1.0, 1.0, 1.0), uniform_times(0.25, 16)),
        (taylor_green_2d().map_err(fail)?, uniform_times(0.25, 16)),
        (transport_solution(Profile::default_transport(), DEFAULT_TRANSPORT_VELOCITY), uniform_times(1.0, 64)),
    ];
    for (field, times) in cases {
        let state = field.sample(&g, &times).map_err(fail)?;
        let h = build_euler_homotopy(&state).map_err(fail)?;
        let r = homotopy_residual(&h, DEFAULT_TOLERANCE).map_err(fail)?;
        let c = constraint_check(&h, Lemma::Euler).map_err(fail)?;
        let cmax = c.entries.iter().map(|e| e.max()).fold(0.0, f64::max);
        let red = redundancy(&h)?;
        ok &= r.max() <= DEFAULT_TOLERANCE && cmax <= DEFAULT_TOLERANCE && red <= 1e-9 && r.equations.len() == 8;
        parts.push(format!("{}: residual {:.1e}, constraints {:.1e}, redundancy {:.1e}", field.name(), r.max(), cmax, red));
    }
    ensure(ok, parts.join("; "))
}

/// `∫ u·curl u` for an ABC flow: `curl u = u`, and each of the six trigonometric
/// terms of `|u|²` averages to 1/2 while the cross terms average to 0.
fn abc_helicity_oracle(a: f64, b: f64, c: f64) -> f64 {
    let mean = 2.0 * (a * a + b * b + c * c) / 2.0;
    mean * (2.0 * PI).powi(3)
}

fn helicity_check() -> Outcome {
    let g = Grid::new(32).map_err(fail)?;
    let times = uniform_times(0.125, 8);
    let mut parts = Vec::new();
    let mut ok = true;
    for (a, b, c) in [(1.0, 1.0, 1.0), (1.0, 0.5, 0.25), (0.3, 1.2, -0.7)] {
        let state = abc_flow(a, b, c).sample(&g, &times).map_err(fail)?;
        let hel = helicity(&build_euler_homotopy(&state).map_err(fail)?).map_err(fail)?;
        let oracle = abc_helicity_oracle(a, b, c);
        let rel = hel.iter().map(|h| ((h - oracle) / oracle).abs()).fold(0.0, f64::max);
        ok &= rel <= 1e-8;
        parts.push(format!("ABC({a},{b},{c}) rel {rel:.1e}"));
    }
    let state = shear_flow(1.0).sample(&g, &times).map_err(fail)?;
    let shear = helicity(&build_euler_homotopy(&state).map_err(fail)?).map_err(fail)?;
    let smax = shear.iter().map(|h| h.abs()).fold(0.0, f64::max);
    ok &= smax <= 1e-10;
    parts.push(format!("shear {smax:.1e}"));
    ensure(ok, parts.join("; "))
}

fn log_profile(g: &std::sync::Arc<Grid>, p: &Profile) -> hpt_fluid::torus::Form {
    hpt_fluid::torus::Form::function(g, |x, y, z| p.eval(x, y, z).ln())
}

fn density_homotopy() -> Outcome {
    let g = Grid::new(16).map_err(fail)?;
    let f0 = log_profile(&g, &Profile::default_transport());
    let other = Profile::new(
        1.0,
        vec![Mode::new(0.3, [1, -1, 0], 0.4), Mode::new(0.2, [0, 2, 1], -1.1), Mode::new(0.15, [2, 0, -2], 2.0)],
    )
    .map_err(fail)?;
    let f1 = log_profile(&g, &other);
    let d = construct_density_homotopy(&f0, &f1, uniform_times(1.0, 10)).map_err(fail)?;
    let h = &d.homotopy;
    let masses: Vec<f64> = h.density().forms().iter().map(expectation).collect();
    let hi = masses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = masses.iter().copied().fold(f64::INFINITY, f64::min);
    let spread = (hi - lo) / d.masses[0];
    let end0 = (h.f.at(0) - &f0).sup_norm();
    let end1 = (h.f.at(h.f.len() - 1) - &f1).sup_norm();
    let residual = homotopy_residual(h, DEFAULT_TOLERANCE).map_err(fail)?;
    let unequal = construct_density_homotopy(&f0, &f1.map(|v| v + 0.05), uniform_times(1.0, 10));
    let rejected = matches!(unequal, Err(Error::MassError { .. }));
    let ok = masses.len() == 11 && spread <= 1e-10 && end0 <= 1e-10 && end1 <= 1e-10 && rejected && residual.pass;
    ensure(
        ok,
        format!("mass spread {spread:.1e}, endpoints {end0:.1e}/{end1:.1e}, residual {:.1e}, unequal rejected {rejected}", residual.max()),
    )
}

/// Nodes and weights of the `n`-point rule for the standard normal density,
/// from the eigen-decomposition of the probabilists' Hermite Jacobi matrix.
fn golub_welsch(n: usize) -> Vec<(f64, f64)> {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = (i as f64).sqrt();
        j[(i, i - 1)] = b;
        j[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(j);
    (0..n).map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2))).collect()
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_string().parse::<f64>().unwrap() / r.denom().to_string().parse::<f64>().unwrap()
}

fn gaussian() -> Outcome {
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    let mut ok = g_moment(1).is_zero() && g_moment(2) == BigRational::one();

    let mut df = BigInt::one();
    for k in 1..=20i64 {
        df *= BigInt::from(2 * k - 1);
        ok &= g_moment(2 * k as usize) == BigRational::from_integer(df.clone());
    }

    let rule = golub_welsch(24);
    let mut worst: f64 = 0.0;
    for k in 0..=8 {
        let quad: f64 = rule.iter().map(|(x, w)| w * x.powi(2 * k)).sum();
        let exact = rational_to_f64(&g_moment(2 * k as usize));
        worst = worst.max(((quad - exact) / exact).abs());
    }
    ok &= worst <= 1e-12;

    let mut exact_forms = true;
    for n in 0..=40 {
        let e = g_reduce(&g_delta(&GaussianElement::one_form(Poly::monomial(n)))).map_err(fail)?;
        exact_forms &= e.is_zero();
    }
    let mixed = Poly::new((0..=40).map(|i| int(i * i - 17) / int(i + 1)).collect());
    exact_forms &= g_reduce(&g_delta(&GaussianElement::one_form(mixed))).map_err(fail)?.is_zero();
    ok &= exact_forms;

    ensure(ok, format!("double factorials to k=20, quadrature rel {worst:.1e} to k=8, E(delta) = 0 to degree 40: {exact_forms}"))
}

fn run_hpt(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hpt")).args(args).output().map_err(fail)?;
    if out.status.code() != Some(0) {
        return Err(format!("{args:?} exited with {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 3] = [
        &["check-dec", "--n", "16", "--samples", "5", "--seed", "42", "--omit-timings"],
        &["verify", "--field", "abc", "--lemma", "euler", "--n", "16", "--dt", "0.0625", "--t-end", "0.25", "--omit-timings"],
        &["gaussian", "--n-max", "20", "--omit-timings"],
    ];
    let mut ok = true;
    for args in runs {
        let a = run_hpt(args)?;
        let b = run_hpt(args)?;
        ok &= a == b && !a.is_empty();
    }
    let other = run_hpt(&["check-dec", "--n", "16", "--samples", "5", "--seed", "43", "--omit-timings"])?;
    let base = run_hpt(runs[0])?;
    ok &= other != base;
    ensure(ok, format!("{} commands byte-identical across runs, other seed differs", runs.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("operator identities", operator_identities),
        ("seven-term relation", bv_relation),
        ("symbolic exponential", symbolic_exponential),
        ("mass lemma", mass_lemma),
        ("vorticity lemma", vorticity_lemma),
        ("euler lemma", euler_lemma),
        ("helicity", helicity_check),
        ("density homotopy", density_homotopy),
        ("gaussian moments", gaussian),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
