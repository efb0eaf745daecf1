//! Command implementations: spectrum, evolve, converge, sweep and the
//! short-time check. Each emits a CSV (file or stdout), an optional SVG, and
//! a run report.

use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64;

use kerrmodes::dynamics::{
    coherent_state_with_threshold, Propagator, StateVector, TimeGrid,
};
use kerrmodes::fockspace::{adjoint, FockBasis, Mode};
use kerrmodes::model::{build_hamiltonian, normal_frequencies, NormalModes};
use kerrmodes::observables::{diagnostics, mode_moments, StateDiagnostics};
use kerrmodes::shorttime::{
    heisenberg_expansion, interior_max_abs, interior_max_abs_diff, short_time_population,
    INTERIOR_MARGIN,
};
use kerrmodes::spectral::{self, cache, eigendecompose, EigenSystem};
use kerrmodes::{Error, ModelParams};

use crate::config::RunConfig;
use crate::csvout::{fmt_f64, fmt_opt, CsvSink};
use crate::report::{fmt_complex, RunReport};
use crate::svg::{Panel, Series};
use crate::CliError;

/// Successive-difference threshold declaring a convergence study converged.
pub const CONVERGENCE_TOL: f64 = 1e-4;

/// Fixed column set of the evolve CSV.
pub const EVOLVE_COLUMNS: &[&str] = &[
    "t", "E12", "dS1", "dS2", "N1", "N2", "Ntot_half", "varN1", "varN2", "D1", "D2", "mandelQ1",
    "mandelQ2", "fano1", "fano2", "g2_1", "g2_2", "dQ1", "dP1", "dQ2", "dP2", "f1", "f2", "norm",
    "edge_weight",
];

pub struct Resolved {
    pub config: RunConfig,
    pub params: ModelParams,
    pub basis: FockBasis,
    pub normal: NormalModes,
}

pub fn resolve(config: RunConfig) -> Result<Resolved, CliError> {
    config.validate_numerics()?;
    let params = config.params()?;
    let basis = FockBasis::new(config.m_cut);
    let normal = normal_frequencies(&params);
    Ok(Resolved {
        config,
        params,
        basis,
        normal,
    })
}

fn numerical(e: Error) -> CliError {
    match e {
        Error::Truncation { weight, threshold } => CliError::Truncation(format!(
            "truncation weight {weight:.3e} exceeds threshold {threshold:.3e}; increase m_cut"
        )),
        other => CliError::Numerical(other.to_string()),
    }
}

/// Eigendecomposition, through the binary cache when a directory is given.
/// Cache entries failing re-verification are recomputed and rewritten.
fn eigensystem_for(
    params: &ModelParams,
    basis: FockBasis,
    cache_dir: Option<&Path>,
    report: &mut RunReport,
) -> Result<EigenSystem, CliError> {
    let h = build_hamiltonian(params, basis).map_err(numerical)?;
    let mut status = "off".to_string();
    let mut cached_path: Option<PathBuf> = None;
    if let Some(dir) = cache_dir {
        let key = cache::cache_key(params, basis.m_cut());
        let path = dir.join(format!("{}.eig", cache::key_hex(&key)));
        if path.is_file() {
            match cache::read(&path, &key) {
                Ok(eig) => match spectral::verify(&eig, &h) {
                    Ok(certs) if certs.all_ok() => {
                        report.push("eigen_cache", "hit");
                        report.push_f64("eigen_residual", eig.residual());
                        report.push_f64("orthonormality_defect", eig.orthonormality_defect());
                        return Ok(eig);
                    }
                    _ => status = "stale".to_string(),
                },
                Err(_) => status = "unreadable".to_string(),
            }
        } else {
            status = "miss".to_string();
        }
        cached_path = Some(path);
    }
    let eig = eigendecompose(&h).map_err(numerical)?;
    if let (Some(dir), Some(path)) = (cache_dir, cached_path.as_ref()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Numerical(format!("cannot create cache dir: {e}")))?;
        let key = cache::cache_key(params, basis.m_cut());
        cache::write(path, &key, &eig).map_err(numerical)?;
    }
    report.push("eigen_cache", status);
    report.push_f64("eigen_residual", eig.residual());
    report.push_f64("orthonormality_defect", eig.orthonormality_defect());
    Ok(eig)
}

fn initial_state(resolved: &Resolved) -> Result<StateVector, CliError> {
    coherent_state_with_threshold(
        Complex64::new(resolved.config.alpha1_re, resolved.config.alpha1_im),
        Complex64::new(resolved.config.alpha2_re, resolved.config.alpha2_im),
        resolved.basis,
        resolved.config.truncation_weight_threshold,
    )
    .map_err(numerical)
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

pub fn cmd_spectrum(resolved: &Resolved, cache_dir: Option<&Path>) -> Result<(), CliError> {
    let mut report = RunReport::new("spectrum");
    report.push_params(&resolved.params, &resolved.normal);
    report.push("dim", resolved.basis.dim().to_string());
    let eig = eigensystem_for(&resolved.params, resolved.basis, cache_dir, &mut report)?;

    let mut sink = CsvSink::open(resolved.config.csv_path.as_deref())?;
    let to_stderr = sink.to_stdout;
    sink.preamble("spectrum", &resolved.config.echo_entries(&resolved.params))?;
    sink.comment(&format!(
        "omega_plus = {}",
        fmt_complex(resolved.normal.omega_plus)
    ))?;
    sink.comment(&format!(
        "omega_minus = {}",
        fmt_complex(resolved.normal.omega_minus)
    ))?;
    sink.comment(&format!("delta = {}", fmt_complex(resolved.normal.delta)))?;
    sink.comment(&format!("stable = {}", resolved.normal.stable))?;
    sink.header(&["index", "energy"])?;
    for (index, energy) in eig.energies().iter().enumerate() {
        sink.row(&[index.to_string(), fmt_f64(*energy)])?;
    }
    sink.finish()?;

    if let Some(svg_path) = &resolved.config.svg_path {
        let points: Vec<(f64, f64)> = eig
            .energies()
            .iter()
            .enumerate()
            .map(|(i, &e)| (i as f64, e))
            .collect();
        let doc = crate::svg::render(
            "truncated spectrum",
            "index",
            &[Panel {
                title: "energy".into(),
                series: vec![Series {
                    label: "E".into(),
                    points,
                }],
            }],
        );
        write_svg(svg_path, &doc)?;
        report.push("svg", svg_path.display().to_string());
    }
    report.push("csv", csv_label(&resolved.config));
    report.emit("ok", to_stderr);
    Ok(())
}

// ---------------------------------------------------------------------------
// evolve
// ---------------------------------------------------------------------------

pub struct EvolveData {
    pub times: Vec<f64>,
    pub rows: Vec<StateDiagnostics>,
    pub truncation_weight: f64,
    pub max_edge_weight: f64,
    pub eigen_residual: f64,
}

/// Shared evolution core: eigendecompose, prepare, walk the grid.
pub fn evolve_rows(
    resolved: &Resolved,
    cache_dir: Option<&Path>,
    report: &mut RunReport,
) -> Result<EvolveData, CliError> {
    let eig = eigensystem_for(&resolved.params, resolved.basis, cache_dir, report)?;
    let psi0 = initial_state(resolved)?;
    let grid = TimeGrid::from_duration(resolved.config.t_max, resolved.config.n_points)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let prop = Propagator::new(&psi0, &eig).map_err(numerical)?;
    let times = grid.times();
    let mut rows = Vec::with_capacity(times.len());
    let mut max_edge_weight = 0.0f64;
    for &t in &times {
        let state = prop.state_at(t);
        let row = diagnostics(&state, &psi0).map_err(numerical)?;
        max_edge_weight = max_edge_weight.max(row.edge_weight);
        rows.push(row);
    }
    Ok(EvolveData {
        times,
        rows,
        truncation_weight: psi0.truncation_weight(),
        max_edge_weight,
        eigen_residual: eig.residual(),
    })
}

pub fn diagnostics_fields(t: f64, row: &StateDiagnostics) -> Vec<String> {
    vec![
        fmt_f64(t),
        fmt_f64(row.e12),
        fmt_f64(row.ds1),
        fmt_f64(row.ds2),
        fmt_f64(row.n1),
        fmt_f64(row.n2),
        fmt_f64(row.ntot_half),
        fmt_f64(row.var_n1),
        fmt_f64(row.var_n2),
        fmt_f64(row.d1),
        fmt_f64(row.d2),
        fmt_opt(row.mandel_q1),
        fmt_opt(row.mandel_q2),
        fmt_opt(row.fano1),
        fmt_opt(row.fano2),
        fmt_opt(row.g2_1),
        fmt_opt(row.g2_2),
        fmt_f64(row.dq1),
        fmt_f64(row.dp1),
        fmt_f64(row.dq2),
        fmt_f64(row.dp2),
        fmt_f64(row.f1),
        fmt_f64(row.f2),
        fmt_f64(row.norm),
        fmt_f64(row.edge_weight),
    ]
}

pub fn cmd_evolve(resolved: &Resolved, cache_dir: Option<&Path>) -> Result<(), CliError> {
    let mut report = RunReport::new("evolve");
    report.push_params(&resolved.params, &resolved.normal);
    report.push("m_cut", resolved.basis.m_cut().to_string());
    report.push("dim", resolved.basis.dim().to_string());
    let data = evolve_rows(resolved, cache_dir, &mut report)?;
    report.push_f64("truncation_weight", data.truncation_weight);
    report.push_f64("max_edge_weight", data.max_edge_weight);

    let mut sink = CsvSink::open(resolved.config.csv_path.as_deref())?;
    let to_stderr = sink.to_stdout;
    sink.preamble("evolve", &resolved.config.echo_entries(&resolved.params))?;
    sink.comment(&format!(
        "omega_plus = {}",
        fmt_complex(resolved.normal.omega_plus)
    ))?;
    sink.comment(&format!(
        "omega_minus = {}",
        fmt_complex(resolved.normal.omega_minus)
    ))?;
    sink.comment(&format!("stable = {}", resolved.normal.stable))?;
    sink.header(EVOLVE_COLUMNS)?;
    for (t, row) in data.times.iter().zip(&data.rows) {
        sink.row(&diagnostics_fields(*t, row))?;
    }
    sink.finish()?;
    report.push("csv", csv_label(&resolved.config));

    if let Some(svg_path) = &resolved.config.svg_path {
        let doc = crate::svg::render("coherent-state evolution", "t [1/omega1]", &evolve_panels(&data));
        write_svg(svg_path, &doc)?;
        report.push("svg", svg_path.display().to_string());
    }

    if data.max_edge_weight > resolved.config.edge_weight_threshold {
        report.push("truncation_converged", "false");
        report.emit(
            &format!(
                "truncation-unconverged: max edge weight {:.3e} exceeds threshold {:.3e}; rerun with larger m_cut",
                data.max_edge_weight, resolved.config.edge_weight_threshold
            ),
            to_stderr,
        );
        return Err(CliError::Reported(3));
    }
    report.push("truncation_converged", "true");
    report.emit("ok", to_stderr);
    Ok(())
}

fn evolve_panels(data: &EvolveData) -> Vec<Panel> {
    let series = |pick: &dyn Fn(&StateDiagnostics) -> f64, label: &str| Series {
        label: label.into(),
        points: data
            .times
            .iter()
            .zip(&data.rows)
            .map(|(&t, row)| (t, pick(row)))
            .collect(),
    };
    vec![
        Panel {
            title: "entanglement entropy".into(),
            series: vec![series(&|r| r.e12, "E12")],
        },
        Panel {
            title: "non-gaussianity".into(),
            series: vec![series(&|r| r.ds1, "dS1"), series(&|r| r.ds2, "dS2")],
        },
        Panel {
            title: "occupation".into(),
            series: vec![
                series(&|r| r.n1, "N1"),
                series(&|r| r.n2, "N2"),
                series(&|r| r.ntot_half, "N/2"),
            ],
        },
        Panel {
            title: "squeezing ratios (mode 2)".into(),
            series: vec![series(&|r| r.dq2, "dQ2"), series(&|r| r.dp2, "dP2")],
        },
    ]
}

// ---------------------------------------------------------------------------
// converge
// ---------------------------------------------------------------------------

pub fn cmd_converge(
    resolved: &Resolved,
    m_list: &[usize],
    cache_dir: Option<&Path>,
) -> Result<(), CliError> {
    if m_list.is_empty() {
        return Err(CliError::Config("--m-list must not be empty".into()));
    }
    if m_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config(
            "--m-list must be strictly ascending".into(),
        ));
    }
    let mut report = RunReport::new("converge");
    report.push_params(&resolved.params, &resolved.normal);

    let probe_times: Vec<f64> = [0.2, 0.5, 0.8]
        .iter()
        .map(|f| f * resolved.config.t_max)
        .collect();

    struct Block {
        m_cut: usize,
        dim: usize,
        truncation_weight: f64,
        probes: Vec<(f64, StateDiagnostics)>,
    }
    let mut blocks: Vec<Block> = Vec::new();
    let mut max_residual = 0.0f64;
    for &m_cut in m_list {
        let basis = FockBasis::new(m_cut);
        let mut scratch = RunReport::new("converge-point");
        let eig = eigensystem_for(&resolved.params, basis, cache_dir, &mut scratch)?;
        max_residual = max_residual.max(eig.residual());
        // the whole point of the study is to watch under-resolved cutoffs, so
        // the state is built with the threshold bypassed and the weight recorded
        let psi0 = coherent_state_with_threshold(
            Complex64::new(resolved.config.alpha1_re, resolved.config.alpha1_im),
            Complex64::new(resolved.config.alpha2_re, resolved.config.alpha2_im),
            basis,
            f64::INFINITY,
        )
        .map_err(numerical)?;
        let prop = Propagator::new(&psi0, &eig).map_err(numerical)?;
        let mut probes = Vec::new();
        for &t in &probe_times {
            let state = prop.state_at(t);
            probes.push((t, diagnostics(&state, &psi0).map_err(numerical)?));
        }
        blocks.push(Block {
            m_cut,
            dim: basis.dim(),
            truncation_weight: psi0.truncation_weight(),
            probes,
        });
    }

    // max successive difference over (probe, observable) pairs
    let observables = |row: &StateDiagnostics| [row.e12, row.n1, row.n2];
    let mut diffs: Vec<Option<f64>> = vec![None];
    for pair in blocks.windows(2) {
        let mut max_diff = 0.0f64;
        for ((_, a), (_, b)) in pair[0].probes.iter().zip(&pair[1].probes) {
            for (x, y) in observables(a).iter().zip(observables(b).iter()) {
                max_diff = max_diff.max((x - y).abs());
            }
        }
        diffs.push(Some(max_diff));
    }
    let converged = matches!(diffs.last(), Some(Some(d)) if *d < CONVERGENCE_TOL);

    let mut sink = CsvSink::open(resolved.config.csv_path.as_deref())?;
    let to_stderr = sink.to_stdout;
    sink.preamble("converge", &resolved.config.echo_entries(&resolved.params))?;
    for (block, diff) in blocks.iter().zip(&diffs) {
        if let Some(d) = diff {
            sink.comment(&format!(
                "max_diff m_cut={} vs previous: {}",
                block.m_cut,
                fmt_f64(*d)
            ))?;
        }
    }
    sink.comment(&format!(
        "converged = {converged} (threshold {})",
        fmt_f64(CONVERGENCE_TOL)
    ))?;
    sink.header(&[
        "m_cut",
        "dim",
        "truncation_weight",
        "max_diff_vs_prev",
        "t",
        "E12",
        "N1",
        "N2",
    ])?;
    for (block, diff) in blocks.iter().zip(&diffs) {
        for (t, row) in &block.probes {
            sink.row(&[
                block.m_cut.to_string(),
                block.dim.to_string(),
                fmt_f64(block.truncation_weight),
                diff.map(fmt_f64).unwrap_or_default(),
                fmt_f64(*t),
                fmt_f64(row.e12),
                fmt_f64(row.n1),
                fmt_f64(row.n2),
            ])?;
        }
    }
    sink.finish()?;

    report.push(
        "m_list",
        m_list
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    report.push("converged", converged.to_string());
    report.push_f64("max_eigen_residual", max_residual);
    report.push("csv", csv_label(&resolved.config));
    report.emit("ok", to_stderr);
    Ok(())
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAxis {
    Omega,
    Beta,
    Alpha,
}

impl SweepAxis {
    pub fn key(self) -> &'static str {
        match self {
            SweepAxis::Omega => "omega",
            SweepAxis::Beta => "beta",
            SweepAxis::Alpha => "alpha",
        }
    }

    /// Apply the swept value onto a copy of the base configuration.
    pub fn apply(self, config: &mut RunConfig, value: f64) {
        match self {
            SweepAxis::Omega => {
                config.omega = Some(value);
                config.lambda1 = None;
                config.lambda2 = None;
            }
            SweepAxis::Beta => {
                config.beta1 = value;
                config.beta2 = value;
            }
            SweepAxis::Alpha => {
                config.alpha1_re = value;
                config.alpha2_re = value;
                config.alpha1_im = 0.0;
                config.alpha2_im = 0.0;
            }
        }
    }
}

pub fn cmd_sweep(
    resolved: &Resolved,
    axis: SweepAxis,
    values: &[f64],
    jobs: Option<usize>,
    cache_dir: Option<&Path>,
) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::Config("--values must not be empty".into()));
    }
    let jobs = jobs
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    let mut report = RunReport::new("sweep");
    report.push("axis", axis.key());
    report.push(
        "values",
        values
            .iter()
            .map(|v| fmt_f64(*v))
            .collect::<Vec<_>>()
            .join(","),
    );
    report.push("jobs", jobs.to_string());

    // per-point configs resolved up front so config errors surface before work
    let mut points = Vec::new();
    for &value in values {
        let mut config = resolved.config.clone();
        axis.apply(&mut config, value);
        config.csv_path = None;
        config.svg_path = None;
        points.push((value, resolve(config)?));
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Numerical(format!("thread pool: {e}")))?;
    let results: Vec<(f64, Result<EvolveData, CliError>)> = pool.install(|| {
        use rayon::prelude::*;
        points
            .par_iter()
            .map(|(value, point)| {
                let mut scratch = RunReport::new("sweep-point");
                (
                    *value,
                    evolve_rows(point, cache_dir, &mut scratch),
                )
            })
            .collect()
    });

    let mut sink = CsvSink::open(resolved.config.csv_path.as_deref())?;
    let to_stderr = sink.to_stdout;
    sink.preamble("sweep", &resolved.config.echo_entries(&resolved.params))?;
    sink.comment(&format!("axis = {}", axis.key()))?;
    let mut columns = vec![axis.key()];
    columns.extend_from_slice(EVOLVE_COLUMNS);
    sink.header(&columns)?;

    let mut failures = Vec::new();
    let mut successes = 0usize;
    for (value, outcome) in &results {
        match outcome {
            Ok(data) => {
                successes += 1;
                for (t, row) in data.times.iter().zip(&data.rows) {
                    let mut fields = vec![fmt_f64(*value)];
                    fields.extend(diagnostics_fields(*t, row));
                    sink.row(&fields)?;
                }
            }
            Err(err) => failures.push((*value, err.message())),
        }
    }
    sink.finish()?;

    // one E12 curve per sweep value
    if let Some(svg_path) = &resolved.config.svg_path {
        let mut series = Vec::new();
        for (value, outcome) in &results {
            if let Ok(data) = outcome {
                series.push(Series {
                    label: format!("{} = {}", axis.key(), value),
                    points: data
                        .times
                        .iter()
                        .zip(&data.rows)
                        .map(|(&t, row)| (t, row.e12))
                        .collect(),
                });
            }
        }
        let doc = crate::svg::render(
            "sweep: entanglement entropy",
            "t [1/omega1]",
            &[Panel {
                title: "E12".into(),
                series,
            }],
        );
        write_svg(svg_path, &doc)?;
        report.push("svg", svg_path.display().to_string());
    }

    for (value, message) in &failures {
        report.push(
            &format!("failed[{}={}]", axis.key(), fmt_f64(*value)),
            message.clone(),
        );
    }
    let max_residual = results
        .iter()
        .filter_map(|(_, r)| r.as_ref().ok().map(|d| d.eigen_residual))
        .fold(0.0f64, f64::max);
    report.push_f64("max_eigen_residual", max_residual);
    report.push("points_ok", successes.to_string());
    report.push("points_failed", failures.len().to_string());
    report.push("csv", csv_label(&resolved.config));

    if successes == 0 {
        report.emit("error: every sweep point failed", to_stderr);
        let code = results
            .iter()
            .find_map(|(_, r)| r.as_ref().err().map(|e| e.exit_code()))
            .unwrap_or(4);
        return Err(CliError::Reported(code));
    }
    report.emit("ok", to_stderr);
    Ok(())
}

// ---------------------------------------------------------------------------
// shorttime-check
// ---------------------------------------------------------------------------

/// Cutoff for the operator-level checks; kept modest because the exact
/// Heisenberg operator costs dense dim³ conjugations per probe time.
const OPERATOR_CHECK_M_CUT: usize = 10;
/// Probe ladder in units of 1/ω₁, halved twice.
const SHORT_TIMES: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

pub fn cmd_shorttime_check(
    resolved: &Resolved,
    cache_dir: Option<&Path>,
) -> Result<(), CliError> {
    if resolved.config.alpha1_im != 0.0 || resolved.config.alpha2_im != 0.0 {
        return Err(CliError::Config(
            "shorttime-check requires real alpha1/alpha2 (the population expansion is derived for real amplitudes)".into(),
        ));
    }
    let mut report = RunReport::new("shorttime-check");
    report.push_params(&resolved.params, &resolved.normal);

    // population route at the configured cutoff
    let eig = eigensystem_for(&resolved.params, resolved.basis, cache_dir, &mut report)?;
    let psi0 = initial_state(resolved)?;
    let prop = Propagator::new(&psi0, &eig).map_err(numerical)?;
    let population_errors: Vec<f64> = SHORT_TIMES
        .iter()
        .map(|&t| {
            let exact = mode_moments(&prop.state_at(t), Mode::One)
                .map(|m| m.mean_n)
                .map_err(numerical)?;
            let approx = short_time_population(
                resolved.config.alpha1_re,
                resolved.config.alpha2_re,
                &resolved.params,
                t,
            );
            Ok((exact - approx).abs())
        })
        .collect::<Result<_, CliError>>()?;

    // operator routes at the reduced cutoff
    let op_basis = FockBasis::new(resolved.basis.m_cut().min(OPERATOR_CHECK_M_CUT));
    let h_op = build_hamiltonian(&resolved.params, op_basis).map_err(numerical)?;
    let eig_op = eigendecompose(&h_op).map_err(numerical)?;
    let expansion = heisenberg_expansion(&resolved.params, op_basis, Mode::One).map_err(numerical)?;
    let mut operator_errors = Vec::new();
    let mut commutator_errors = Vec::new();
    for &t in &SHORT_TIMES {
        let exact = heisenberg_exact(expansion.order0(), &eig_op, t);
        let approx = expansion.at(t);
        operator_errors.push(
            interior_max_abs_diff(&exact, &approx, op_basis, INTERIOR_MARGIN).map_err(numerical)?,
        );
        let approx_dag = adjoint(&approx);
        let mut comm = approx.dot(&approx_dag) - approx_dag.dot(&approx);
        for i in 0..op_basis.dim() {
            comm[[i, i]] -= Complex64::new(1.0, 0.0);
        }
        commutator_errors
            .push(interior_max_abs(&comm, op_basis, INTERIOR_MARGIN).map_err(numerical)?);
    }

    let mut sink = CsvSink::open(resolved.config.csv_path.as_deref())?;
    let to_stderr = sink.to_stdout;
    sink.preamble(
        "shorttime-check",
        &resolved.config.echo_entries(&resolved.params),
    )?;
    sink.comment(&format!("operator_check_m_cut = {}", op_basis.m_cut()))?;
    sink.comment("ratio = error(2t)/error(t), cubic convergence sits near 8")?;
    sink.header(&["check", "t", "error", "ratio"])?;
    for (label, errors) in [
        ("population", &population_errors),
        ("operator", &operator_errors),
        ("commutator", &commutator_errors),
    ] {
        for (k, &err) in errors.iter().enumerate() {
            let ratio = if k == 0 {
                String::new()
            } else {
                fmt_f64(errors[k - 1] / err)
            };
            sink.row(&[
                label.to_string(),
                fmt_f64(SHORT_TIMES[k]),
                fmt_f64(err),
                ratio,
            ])?;
        }
    }
    sink.finish()?;

    for (label, errors) in [
        ("population", &population_errors),
        ("operator", &operator_errors),
        ("commutator", &commutator_errors),
    ] {
        for k in 1..errors.len() {
            report.push_f64(
                &format!("{label}_ratio_{}", k),
                errors[k - 1] / errors[k],
            );
        }
    }
    report.push("csv", csv_label(&resolved.config));
    report.emit("ok", to_stderr);
    Ok(())
}

/// Exact Heisenberg operator e^{iHt} A e^{−iHt} through the eigenbasis.
fn heisenberg_exact(a: &Array2<Complex64>, eig: &EigenSystem, t: f64) -> Array2<Complex64> {
    let n = eig.dim();
    let v = eig.vectors();
    let vd = adjoint(v);
    let mut in_eigen = vd.dot(a).dot(v);
    for mu in 0..n {
        for nu in 0..n {
            let phase =
                Complex64::from_polar(1.0, (eig.energies()[mu] - eig.energies()[nu]) * t);
            in_eigen[[mu, nu]] *= phase;
        }
    }
    v.dot(&in_eigen).dot(&vd)
}

fn csv_label(config: &RunConfig) -> String {
    config
        .csv_path
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "stdout".to_string())
}

fn write_svg(path: &Path, doc: &str) -> Result<(), CliError> {
    std::fs::write(path, doc)
        .map_err(|e| CliError::Numerical(format!("cannot write '{}': {e}", path.display())))
}
