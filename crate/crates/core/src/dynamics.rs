//! Coherent-state preparation and spectral time evolution.
//!
//! Evolution is exact respectralization: the initial state is projected onto
//! the eigenbasis once, every requested time applies fresh phases
//! e^{−iEνt} and returns to the product basis, so there is no step-to-step
//! accumulation error and grid points are independent of one another.

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{FockBasis, Operator};
use crate::spectral::EigenSystem;

/// Default bound on the probability mass a coherent state may lose to the cutoff.
pub const DEFAULT_TRUNCATION_THRESHOLD: f64 = 1e-8;
/// States are normalized to within this bound at construction.
pub const NORM_TOL: f64 = 1e-12;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Normalized amplitude vector over the two-mode product basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    amplitudes: Array1<Complex64>,
    basis: FockBasis,
    truncation_weight: f64,
}

impl StateVector {
    /// Normalize raw amplitudes into a state. The recorded truncation weight
    /// is zero; use [`coherent_state`] for cutoff bookkeeping.
    pub fn from_amplitudes(raw: Array1<Complex64>, basis: FockBasis) -> Result<Self> {
        if raw.len() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                actual: raw.len(),
            });
        }
        let norm2: f64 = raw.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::Domain(
                "cannot normalize a zero or non-finite amplitude vector".into(),
            ));
        }
        let scale = 1.0 / norm2.sqrt();
        Ok(Self {
            amplitudes: raw.mapv(|z| z * scale),
            basis,
            truncation_weight: 0.0,
        })
    }

    /// Internal constructor for vectors already normalized by construction
    /// (spectral evolution preserves the norm up to the certificate defect).
    pub(crate) fn from_normalized(
        amplitudes: Array1<Complex64>,
        basis: FockBasis,
        truncation_weight: f64,
    ) -> Self {
        Self {
            amplitudes,
            basis,
            truncation_weight,
        }
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Probability removed by the cutoff before renormalization.
    pub fn truncation_weight(&self) -> f64 {
        self.truncation_weight
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Amplitude ⟨n1, n2|Ψ⟩.
    pub fn amplitude(&self, n1: usize, n2: usize) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.index(n1, n2)?])
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        if self.basis != other.basis {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.overlap(other)?.norm_sqr())
    }

    /// ⟨Ψ|O|Ψ⟩.
    pub fn expectation(&self, op: &Operator) -> Result<Complex64> {
        if op.basis() != self.basis {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: op.dim(),
            });
        }
        let m = op.matrix();
        let mut acc = C_ZERO;
        for r in 0..self.dim() {
            let mut row_acc = C_ZERO;
            let row = m.row(r);
            let row = row.as_slice().expect("standard layout");
            for (h, a) in row.iter().zip(self.amplitudes.iter()) {
                row_acc += h * a;
            }
            acc += self.amplitudes[r].conj() * row_acc;
        }
        Ok(acc)
    }
}

/// Product Fock state |n1, n2⟩.
pub fn fock_state(n1: usize, n2: usize, basis: FockBasis) -> Result<StateVector> {
    let mut amplitudes = Array1::from_elem(basis.dim(), C_ZERO);
    amplitudes[basis.index(n1, n2)?] = Complex64::new(1.0, 0.0);
    Ok(StateVector {
        amplitudes,
        basis,
        truncation_weight: 0.0,
    })
}

/// Coherent product state |α₁, α₂⟩ truncated to the basis and renormalized,
/// with the removed probability recorded. Exceeding the default weight
/// threshold of 1e−8 is an error advising a larger cutoff.
pub fn coherent_state(
    alpha1: Complex64,
    alpha2: Complex64,
    basis: FockBasis,
) -> Result<StateVector> {
    coherent_state_with_threshold(alpha1, alpha2, basis, DEFAULT_TRUNCATION_THRESHOLD)
}

/// [`coherent_state`] with an explicit truncation-weight threshold.
pub fn coherent_state_with_threshold(
    alpha1: Complex64,
    alpha2: Complex64,
    basis: FockBasis,
    threshold: f64,
) -> Result<StateVector> {
    let d = basis.mode_dim();
    // c_n = α^n/√(n!) by the stable recurrence c_{n+1} = c_n α/√(n+1)
    let ladder = |alpha: Complex64| {
        let mut c = Vec::with_capacity(d);
        c.push(Complex64::new(1.0, 0.0));
        for n in 1..d {
            let prev = c[n - 1];
            c.push(prev * alpha / Complex64::new((n as f64).sqrt(), 0.0));
        }
        c
    };
    let l1 = ladder(alpha1);
    let l2 = ladder(alpha2);
    let gauss = (-(alpha1.norm_sqr() + alpha2.norm_sqr()) / 2.0).exp();

    let mut amplitudes = Array1::from_elem(basis.dim(), C_ZERO);
    let mut kept = 0.0f64;
    for (k, (n1, n2)) in basis.iter_occupations().enumerate() {
        let a = l1[n1] * l2[n2] * gauss;
        kept += a.norm_sqr();
        amplitudes[k] = a;
    }
    let truncation_weight = (1.0 - kept).max(0.0);
    if truncation_weight > threshold {
        return Err(Error::Truncation {
            weight: truncation_weight,
            threshold,
        });
    }
    let scale = 1.0 / kept.sqrt();
    Ok(StateVector {
        amplitudes: amplitudes.mapv(|z| z * scale),
        basis,
        truncation_weight,
    })
}

/// Uniform time grid in units of 1/ω₁.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_points: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_points: usize) -> Result<Self> {
        if t_end <= t_start || t_end.is_nan() || t_start.is_nan() {
            return Err(Error::Domain(format!(
                "time grid needs t_end > t_start, got [{t_start}, {t_end}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::Domain(format!(
                "time grid needs at least 2 points, got {n_points}"
            )));
        }
        Ok(Self {
            t_start,
            t_end,
            n_points,
        })
    }

    /// Grid over [0, t_max].
    pub fn from_duration(t_max: f64, n_points: usize) -> Result<Self> {
        Self::new(0.0, t_max, n_points)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.t_end - self.t_start) / (self.n_points - 1) as f64
    }

    pub fn times(&self) -> Vec<f64> {
        let dt = self.spacing();
        (0..self.n_points)
            .map(|i| self.t_start + dt * i as f64)
            .collect()
    }
}

/// Initial state projected once onto an eigenbasis; states at arbitrary times
/// come from fresh phase applications.
pub struct Propagator<'a> {
    eig: &'a EigenSystem,
    coeffs: Array1<Complex64>,
    basis: FockBasis,
    truncation_weight: f64,
}

impl<'a> Propagator<'a> {
    pub fn new(state0: &StateVector, eig: &'a EigenSystem) -> Result<Self> {
        if eig.dim() != state0.dim() {
            return Err(Error::DimensionMismatch {
                expected: state0.dim(),
                actual: eig.dim(),
            });
        }
        Ok(Self {
            eig,
            coeffs: eig.project(state0.amplitudes())?,
            basis: state0.basis(),
            truncation_weight: state0.truncation_weight(),
        })
    }

    /// |Ψ(t)⟩ = Σν e^{−iEνt} ⟨ν|Ψ₀⟩ |ν⟩.
    pub fn state_at(&self, t: f64) -> StateVector {
        let n = self.coeffs.len();
        let mut phased = Array1::from_elem(n, C_ZERO);
        for nu in 0..n {
            let phase = Complex64::from_polar(1.0, -self.eig.energies()[nu] * t);
            phased[nu] = phase * self.coeffs[nu];
        }
        let amplitudes = self
            .eig
            .synthesize(&phased)
            .expect("dimensions checked at construction");
        StateVector::from_normalized(amplitudes, self.basis, self.truncation_weight)
    }
}

/// Single-time spectral evolution; see [`Propagator`] for many times.
pub fn evolve(state0: &StateVector, eig: &EigenSystem, t: f64) -> Result<StateVector> {
    Ok(Propagator::new(state0, eig)?.state_at(t))
}

/// Expectation values on a time grid, one row per time, one column per
/// observable, ordered by time regardless of evaluation order.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub values: Vec<Vec<Complex64>>,
}

pub fn time_series(
    state0: &StateVector,
    eig: &EigenSystem,
    observables: &[Operator],
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    for op in observables {
        if op.basis() != state0.basis() {
            return Err(Error::DimensionMismatch {
                expected: state0.dim(),
                actual: op.dim(),
            });
        }
    }
    let prop = Propagator::new(state0, eig)?;
    let times = grid.times();
    let mut values = Vec::with_capacity(times.len());
    for &t in &times {
        let state = prop.state_at(t);
        let row = observables
            .iter()
            .map(|op| state.expectation(op))
            .collect::<Result<Vec<_>>>()?;
        values.push(row);
    }
    Ok(TimeSeries { times, values })
}

/// Probability on the top shell (n₁ = m_cut or n₂ = m_cut); the
/// truncation-convergence monitor for evolved states.
pub fn edge_occupation(state: &StateVector) -> f64 {
    let basis = state.basis();
    let m_cut = basis.m_cut();
    basis
        .iter_occupations()
        .enumerate()
        .filter(|(_, (n1, n2))| *n1 == m_cut || *n2 == m_cut)
        .map(|(k, _)| state.amplitudes()[k].norm_sqr())
        .sum()
}
