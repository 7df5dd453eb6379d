use std::sync::Arc;

use hpt_fluid::hrv::{
    build_euler_homotopy, build_mass_homotopy, build_vorticity_homotopy, constraint_check,
    construct_density_homotopy, homotopy_residual, statistics, FluidState, HomotopyData, Lemma, DEFAULT_TOLERANCE,
};
use hpt_fluid::torus::{expectation, harmonic_projection, random_bandlimited, sharp, Form, Grid, VectorField};
use hpt_fluid::zoo::{
    abc_flow, euler_momentum_residual, mass_residual, random_divfree, shear_flow, taylor_green_2d,
    transport_solution, uniform_times, AnalyticField, Profile, DEFAULT_TRANSPORT_VELOCITY,
};
use proptest::prelude::*;

fn grid() -> Arc<Grid> {
    Grid::new(16).unwrap()
}

fn state(field: &AnalyticField, times: &[f64]) -> FluidState {
    field.sample(&grid(), times).unwrap()
}

fn with_pressure(s: &FluidState, f: impl Fn(&Form) -> Form) -> FluidState {
    FluidState::new(s.times.to_vec(), s.rho.clone(), s.u.clone(), s.p.iter().map(f).collect()).unwrap()
}

#[test]
fn shipped_fields_solve_euler_in_vector_calculus() {
    let times = uniform_times(0.5, 32);
    let transport = transport_solution(Profile::default_transport(), DEFAULT_TRANSPORT_VELOCITY);
    for field in [abc_flow(1.0, 0.7, 0.4), shear_flow(0.8), taylor_green_2d().unwrap(), transport] {
        let s = state(&field, &times);
        let m = euler_momentum_residual(&s).unwrap().iter().map(VectorField::sup_norm).fold(0.0, f64::max);
        let r = mass_residual(&s).unwrap().iter().map(Form::sup_norm).fold(0.0, f64::max);
        assert!(m < 1e-8 && r < 1e-8, "{}: momentum {m:e}, mass {r:e}", field.name());
    }
}

#[test]
fn euler_rejects_wrong_pressure() {
    let times = uniform_times(0.25, 16);
    let s = state(&abc_flow(1.0, 1.0, 1.0), &times);
    let g = grid();
    let bump = Form::function(&g, |x, y, _| 0.1 * x.cos() * y.sin());
    let bad = with_pressure(&s, |p| p + &bump);
    let r = homotopy_residual(&build_euler_homotopy(&bad).unwrap(), DEFAULT_TOLERANCE).unwrap();
    assert!(!r.pass);
    assert!(r.equation("momentum").unwrap().max() > 1e-3);
    assert!(r.equation("mass").unwrap().max() < 1e-12);
}

#[test]
fn taylor_green_needs_its_fitted_pressure() {
    let times = uniform_times(0.25, 16);
    let s = state(&taylor_green_2d().unwrap(), &times);
    let flipped = with_pressure(&s, |p| -p);
    assert!(homotopy_residual(&build_euler_homotopy(&s).unwrap(), DEFAULT_TOLERANCE).unwrap().pass);
    assert!(!homotopy_residual(&build_euler_homotopy(&flipped).unwrap(), DEFAULT_TOLERANCE).unwrap().pass);
}

#[test]
fn euler_converse_recovers_the_state() {
    let times = uniform_times(0.25, 16);
    let s = state(&transport_solution(Profile::default_transport(), [0.3, -0.2, 0.1]), &times);
    let h = build_euler_homotopy(&s).unwrap();
    assert!(homotopy_residual(&h, DEFAULT_TOLERANCE).unwrap().pass);
    assert!(constraint_check(&h, Lemma::Euler).unwrap().passes(DEFAULT_TOLERANCE));

    let rho = h.density().forms().to_vec();
    let u: Vec<VectorField> = h.x.as_ref().unwrap().forms().iter().map(|x| sharp(x).unwrap()).collect();
    let p = h.pressure().unwrap().forms().to_vec();
    let back = FluidState::new(times.clone(), rho, u, p).unwrap();
    for i in 0..times.len() {
        assert!((&back.rho[i] - &s.rho[i]).sup_norm() < 1e-12);
        assert!(back.u[i].sub(&s.u[i]).sup_norm() < 1e-12);
        assert!((&back.p[i] - &s.p[i]).sup_norm() < 1e-12);
    }
    let m = euler_momentum_residual(&back).unwrap().iter().map(VectorField::sup_norm).fold(0.0, f64::max);
    assert!(m < 1e-8, "{m:e}");
}

#[test]
fn vorticity_rejects_unsteady_field_held_fixed() {
    let g = grid();
    let u = random_divfree(&g, 2, 9).unwrap();
    let times = uniform_times(0.25, 8);
    let frozen = vec![u; times.len()];
    let h = build_vorticity_homotopy(times, &frozen).unwrap();
    let r = homotopy_residual(&h, DEFAULT_TOLERANCE).unwrap();
    assert!(!r.pass);
    assert!(r.equation("vorticity").unwrap().max() > 1e-3);
    assert!(constraint_check(&h, Lemma::Vorticity).unwrap().passes(DEFAULT_TOLERANCE));
}

#[test]
fn vorticity_accepts_scaled_beltrami_fields() {
    let times = uniform_times(0.25, 8);
    for field in [abc_flow(0.2, -1.3, 0.5), shear_flow(2.5)] {
        let s = state(&field, &times);
        let h = build_vorticity_homotopy(times.clone(), &s.u).unwrap();
        assert!(homotopy_residual(&h, DEFAULT_TOLERANCE).unwrap().pass, "{}", field.name());
    }
}

#[test]
fn mass_rejects_mislabelled_velocity() {
    let times = uniform_times(0.5, 32);
    let s = state(&transport_solution(Profile::default_transport(), DEFAULT_TRANSPORT_VELOCITY), &times);
    let still = vec![VectorField::zero(&s.grid); times.len()];
    let wrong = FluidState::new(times, s.rho.clone(), still, s.p.clone()).unwrap();
    let r = homotopy_residual(&build_mass_homotopy(&wrong).unwrap(), DEFAULT_TOLERANCE).unwrap();
    assert!(!r.pass);
    assert!(r.max() > 1e-2);
}

#[test]
fn mass_statistic_is_conserved() {
    let times = uniform_times(1.0, 32);
    let s = state(&transport_solution(Profile::default_transport(), DEFAULT_TRANSPORT_VELOCITY), &times);
    let h = build_euler_homotopy(&s).unwrap();
    let stats = statistics(&h.collection().unwrap()).unwrap();
    assert_eq!(stats.mass.len(), times.len());
    for m in &stats.mass {
        assert!((m - stats.mass[0]).abs() < 1e-12);
    }
    let grown = statistics(&build_mass_homotopy(&s.with_density_growth()).unwrap().collection().unwrap()).unwrap();
    assert!((grown.mass.last().unwrap() - 2.0 * grown.mass[0]).abs() < 1e-12);
}

#[test]
fn density_homotopy_between_shifted_bumps() {
    let g = grid();
    let f0 = Form::function(&g, |x, _, _| (1.0 + 0.1 * x.sin()).ln());
    let f1 = Form::function(&g, |_, y, _| (1.0 + 0.1 * y.sin()).ln());
    let d = construct_density_homotopy(&f0, &f1, uniform_times(1.0, 10)).unwrap();
    let r = homotopy_residual(&d.homotopy, DEFAULT_TOLERANCE).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.times.len(), 11);
    assert!((d.masses[0] - 1.0).abs() < 1e-14 && (d.masses[1] - 1.0).abs() < 1e-14);
    let masses: Vec<f64> = d.homotopy.density().forms().iter().map(expectation).collect();
    assert!(masses.iter().all(|m| (m - 1.0).abs() < 1e-12));

    let same = construct_density_homotopy(&f0, &f0, uniform_times(1.0, 4)).unwrap();
    assert_eq!(same.y.sup_norm(), 0.0);
    let heavier = f1.map(|v| v + 1.1f64.ln());
    assert!(matches!(
        construct_density_homotopy(&f0, &heavier, uniform_times(1.0, 4)),
        Err(hpt_fluid::Error::MassError { .. })
    ));
}

const SLOTS: [(&str, usize); 7] = [("f", 0), ("X", 1), ("V", 1), ("pi", 2), ("sigma", 2), ("Phi", 3), ("Psi", 3)];

fn perturb(h: &HomotopyData, slot: &str, bump: &Form) -> HomotopyData {
    let mut out = h.clone();
    let target = match slot {
        "f" => &mut out.f,
        "X" => out.x.as_mut().unwrap(),
        "V" => out.v.as_mut().unwrap(),
        "pi" => out.pi.as_mut().unwrap(),
        "sigma" => out.sigma.as_mut().unwrap(),
        "Phi" => out.phi.as_mut().unwrap(),
        _ => out.psi.as_mut().unwrap(),
    };
    *target = target.map(|f| f + bump);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn any_single_slot_perturbation_breaks_euler(seed in any::<u64>()) {
        let times = uniform_times(0.125, 4);
        let s = state(&abc_flow(1.0, 0.8, 0.6), &times);
        let h = build_euler_homotopy(&s).unwrap();
        prop_assert!(homotopy_residual(&h, DEFAULT_TOLERANCE).unwrap().pass);
        for (i, (slot, degree)) in SLOTS.into_iter().enumerate() {
            let raw = random_bandlimited(&s.grid, degree, 2, seed.wrapping_add(i as u64), false).unwrap();
            let bump = &raw - &harmonic_projection(&raw);
            let bump = bump.scale(1e-3 / bump.sup_norm());
            let r = homotopy_residual(&perturb(&h, slot, &bump), DEFAULT_TOLERANCE).unwrap();
            prop_assert!(r.max() > 100.0 * r.tolerance, "{slot}: {:e}", r.max());
        }
    }
}
