//! Qualitative regime checks: antibunching windows at low population,
//! squeezing dips early in the evolution, super-Poissonian statistics at
//! high population, and the coupling/anharmonicity trends the sweep command
//! is meant to surface.

use num_complex::Complex64;

use kerrmodes::dynamics::{coherent_state, Propagator, TimeGrid};
use kerrmodes::fockspace::FockBasis;
use kerrmodes::model::{build_hamiltonian, ModelParams};
use kerrmodes::observables::{diagnostics, StateDiagnostics};
use kerrmodes::spectral::eigendecompose;

fn trajectory(rotation: f64, beta: f64, alpha: f64, m_cut: usize) -> (Vec<f64>, Vec<StateDiagnostics>) {
    let params = ModelParams::from_rotation(1.0, 0.5, rotation, beta, beta).unwrap();
    let basis = FockBasis::new(m_cut);
    let h = build_hamiltonian(&params, basis).unwrap();
    let eig = eigendecompose(&h).unwrap();
    let a = Complex64::new(alpha, 0.0);
    let psi0 = coherent_state(a, a, basis).unwrap();
    let prop = Propagator::new(&psi0, &eig).unwrap();
    let times = TimeGrid::from_duration(30.0, 301).unwrap().times();
    let rows = times
        .iter()
        .map(|&t| diagnostics(&prop.state_at(t), &psi0).unwrap())
        .collect();
    (times, rows)
}

#[test]
fn squeezing_dips_early_for_small_alpha() {
    // alpha = 0.5, omega = 0.15, beta = 0.1: both mode-2 shifted ratios go
    // negative in short intervals early in the evolution
    let (times, rows) = trajectory(0.15, 0.1, 0.5, 16);
    let early = times.iter().position(|&t| t > 10.0).unwrap();
    let min_dq2 = rows[..early].iter().map(|r| r.dq2).fold(f64::INFINITY, f64::min);
    let min_dp2 = rows[..early].iter().map(|r| r.dp2).fold(f64::INFINITY, f64::min);
    assert!(min_dq2 < 0.0, "dQ2 never dips below zero (min {min_dq2})");
    assert!(min_dp2 < 0.0, "dP2 never dips below zero (min {min_dp2})");
}

#[test]
fn antibunching_appears_at_low_population_only_transiently_at_high() {
    // alpha = 0.5: D1 < 0 in recurring intervals
    let (_, low) = trajectory(0.15, 0.1, 0.5, 16);
    let negative_samples = low.iter().filter(|r| r.d1 < -1e-6).count();
    assert!(
        negative_samples > 10,
        "expected recurring antibunching windows, found {negative_samples} samples"
    );
    // alpha = 2: after the transient the mode statistics settle super-Poissonian
    let (times, high) = trajectory(0.15, 0.1, 2.0, 24);
    let late: Vec<&StateDiagnostics> = times
        .iter()
        .zip(&high)
        .filter(|(&t, _)| t >= 20.0)
        .map(|(_, r)| r)
        .collect();
    let mean_d1 = late.iter().map(|r| r.d1).sum::<f64>() / late.len() as f64;
    assert!(mean_d1 > 0.0, "late-window mean D1 = {mean_d1} not super-Poissonian");
    let late_negative = late.iter().filter(|r| r.d1 < 0.0).count();
    assert!(
        late_negative * 10 < late.len(),
        "antibunching persists late at high population ({late_negative}/{})",
        late.len()
    );
}

#[test]
fn stronger_coupling_oscillates_faster() {
    // the initial population exchange runs on the normal-mode beat, so the
    // first mode-2 population maximum arrives earlier at omega = 0.45
    let first_peak = |rows: &[StateDiagnostics]| {
        rows.windows(3)
            .position(|w| w[1].n2 > w[0].n2 && w[1].n2 > w[2].n2)
            .map(|i| i + 1)
            .expect("no interior maximum of N2")
    };
    let (times, weak) = trajectory(0.15, 0.1, 1.0, 16);
    let (_, strong) = trajectory(0.45, 0.1, 1.0, 16);
    let t_weak = times[first_peak(&weak)];
    let t_strong = times[first_peak(&strong)];
    assert!(
        t_strong < t_weak,
        "first N2 peak at omega=0.45 ({t_strong}) not earlier than omega=0.15 ({t_weak})"
    );
}

#[test]
fn anharmonicity_barely_moves_the_vacuum_curves() {
    // from the vacuum the Kerr terms act only through virtually excited
    // pairs: the beta = 0 and beta = 0.1 entanglement curves stay small and
    // close, while at alpha = 1 the same beta change reshapes the curve at
    // the bit scale
    let e12_gap = |alpha: f64, m_cut: usize| {
        let (_, without) = trajectory(0.15, 0.0, alpha, m_cut);
        let (_, with) = trajectory(0.15, 0.1, alpha, m_cut);
        without
            .iter()
            .zip(&with)
            .map(|(a, b)| (a.e12 - b.e12).abs())
            .fold(0.0f64, f64::max)
    };
    let vacuum_gap = e12_gap(0.0, 12);
    let displaced_gap = e12_gap(1.0, 16);
    assert!(
        vacuum_gap < 0.1 && displaced_gap > 0.5,
        "beta sensitivity: vacuum {vacuum_gap:.3}, alpha=1 {displaced_gap:.3}"
    );
    assert!(
        vacuum_gap * 10.0 < displaced_gap,
        "vacuum curves ({vacuum_gap:.3}) not an order of magnitude closer than displaced ones ({displaced_gap:.3})"
    );
}
