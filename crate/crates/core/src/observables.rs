//! Scalar diagnostics of an evolved two-mode state: reduced densities,
//! entanglement entropy E₁₂ = S(ρ₁) = S(ρ₂), the gaussian-reference entropy
//! S_g(f) built on the symplectic eigenvalue of the single-mode covariance
//! matrix, the non-gaussianity indicator ΔSᵢ = S_g(fᵢ) − S(ρᵢ), number
//! statistics D/Q/F/g², and shifted squeezing ratios against the t = 0
//! variances. Entropies are in bits.

use ndarray::Array2;
use num_complex::Complex64;

use crate::dynamics::{edge_occupation, StateVector};
use crate::error::{Error, Result};
use crate::fockspace::Mode;
use crate::spectral;

/// Reduced-density eigenvalues below this contribute zero entropy (0·log 0).
pub const ENTROPY_EIGENVALUE_FLOOR: f64 = 1e-14;
/// Reduced-density eigenvalues below −this are a numerical error.
pub const NEGATIVITY_TOL: f64 = 1e-10;
/// Tr ρ must be 1 within this bound.
pub const TRACE_TOL: f64 = 1e-10;
/// S(ρ₁) and S(ρ₂) must agree within this bound for a pure two-mode state.
pub const ENTROPY_CROSS_TOL: f64 = 1e-8;
/// The covariance radicand may dip below zero by at most this much before the
/// state is declared unphysical.
pub const RADICAND_TOL: f64 = 1e-9;
/// ΔSᵢ may dip below zero by at most this much (gaussian states maximize
/// entropy at fixed covariance).
pub const NONGAUSSIANITY_TOL: f64 = 1e-9;
/// The ratio indicators Q, F and g² are reported as undefined when ⟨N⟩ sits
/// at or below this floor; spectral round-trips leave ~1e−34 of rounding
/// noise on an exact vacuum, and ratios against it are meaningless.
pub const RATIO_MEAN_N_FLOOR: f64 = 1e-12;

const LN_2: f64 = std::f64::consts::LN_2;

/// Reduced density matrix of one mode, (m_cut+1) × (m_cut+1).
#[derive(Debug, Clone)]
pub struct ReducedDensity {
    matrix: Array2<Complex64>,
    mode: Mode,
}

impl ReducedDensity {
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.matrix[[i, i]]).sum()
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.matrix[[i, j]] * self.matrix[[j, i]]).re;
            }
        }
        acc
    }

    /// Ascending eigenvalues, checked nonnegative within tolerance.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let (values, _) = spectral::hermitian_eigen(&self.matrix)?;
        if let Some(p) = values.first() {
            if *p < -NEGATIVITY_TOL {
                return Err(Error::Invariant(format!(
                    "reduced density of mode {} has eigenvalue {p:.3e}",
                    self.mode
                )));
            }
        }
        Ok(values)
    }
}

/// Trace out the other mode: ρᵢ = Tr_j |Ψ⟩⟨Ψ|.
pub fn partial_trace(state: &StateVector, mode: Mode) -> Result<ReducedDensity> {
    let basis = state.basis();
    let d = basis.mode_dim();
    let psi = state.amplitudes();
    let mut rho = Array2::from_elem((d, d), Complex64::new(0.0, 0.0));
    match mode {
        Mode::One => {
            for i in 0..d {
                for j in i..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..d {
                        acc += psi[i * d + k] * psi[j * d + k].conj();
                    }
                    rho[[i, j]] = acc;
                    rho[[j, i]] = acc.conj();
                }
            }
        }
        Mode::Two => {
            for i in 0..d {
                for j in i..d {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..d {
                        acc += psi[k * d + i] * psi[k * d + j].conj();
                    }
                    rho[[i, j]] = acc;
                    rho[[j, i]] = acc.conj();
                }
            }
        }
    }
    let out = ReducedDensity { matrix: rho, mode };
    let trace_defect = (out.trace() - Complex64::new(1.0, 0.0)).norm();
    if trace_defect > TRACE_TOL {
        return Err(Error::Invariant(format!(
            "Tr ρ_{mode} deviates from 1 by {trace_defect:.3e}"
        )));
    }
    Ok(out)
}

/// Von Neumann entropy −Tr ρ log₂ ρ in bits.
pub fn entropy_of_density(rho: &ReducedDensity) -> Result<f64> {
    let values = rho.eigenvalues()?;
    let mut s = 0.0;
    for p in values {
        if p > ENTROPY_EIGENVALUE_FLOOR {
            s -= p * p.ln() / LN_2;
        }
    }
    Ok(s)
}

/// Entanglement entropy E₁₂ = S(ρ₁) = S(ρ₂) of a pure two-mode state, in
/// bits, with the equality of the two mode entropies cross-checked.
pub fn entanglement_entropy(state: &StateVector) -> Result<f64> {
    let s1 = entropy_of_density(&partial_trace(state, Mode::One)?)?;
    let s2 = entropy_of_density(&partial_trace(state, Mode::Two)?)?;
    if (s1 - s2).abs() > ENTROPY_CROSS_TOL {
        return Err(Error::Invariant(format!(
            "S(ρ₁) = {s1} and S(ρ₂) = {s2} differ beyond {ENTROPY_CROSS_TOL:.0e}"
        )));
    }
    Ok(s1)
}

/// First and second field moments of one mode.
#[derive(Debug, Clone, Copy)]
pub struct ModeMoments {
    /// ⟨a⟩
    pub mean_a: Complex64,
    /// ⟨a†a⟩
    pub mean_n: f64,
    /// ⟨a²⟩
    pub mean_a2: Complex64,
    /// ⟨N²⟩
    pub mean_n2: f64,
    pub mode: Mode,
}

/// Field moments of the chosen mode, evaluated directly on the amplitudes.
pub fn mode_moments(state: &StateVector, mode: Mode) -> Result<ModeMoments> {
    let basis = state.basis();
    let d = basis.mode_dim();
    let psi = state.amplitudes();
    let idx = |n1: usize, n2: usize| n1 * d + n2;

    let mut mean_a = Complex64::new(0.0, 0.0);
    let mut mean_a2 = Complex64::new(0.0, 0.0);
    let mut mean_n = 0.0f64;
    let mut mean_n2 = 0.0f64;
    for n1 in 0..d {
        for n2 in 0..d {
            let amp = psi[idx(n1, n2)];
            let prob = amp.norm_sqr();
            let n = match mode {
                Mode::One => n1,
                Mode::Two => n2,
            } as f64;
            mean_n += n * prob;
            mean_n2 += n * n * prob;
            // ⟨a⟩: ⟨n−1|a|n⟩ = √n, ⟨a²⟩: ⟨n−2|a²|n⟩ = √(n(n−1))
            match mode {
                Mode::One => {
                    if n1 >= 1 {
                        mean_a += psi[idx(n1 - 1, n2)].conj() * (n1 as f64).sqrt() * amp;
                    }
                    if n1 >= 2 {
                        mean_a2 += psi[idx(n1 - 2, n2)].conj()
                            * ((n1 * (n1 - 1)) as f64).sqrt()
                            * amp;
                    }
                }
                Mode::Two => {
                    if n2 >= 1 {
                        mean_a += psi[idx(n1, n2 - 1)].conj() * (n2 as f64).sqrt() * amp;
                    }
                    if n2 >= 2 {
                        mean_a2 += psi[idx(n1, n2 - 2)].conj()
                            * ((n2 * (n2 - 1)) as f64).sqrt()
                            * amp;
                    }
                }
            }
        }
    }
    let moments = ModeMoments {
        mean_a,
        mean_n,
        mean_a2,
        mean_n2,
        mode,
    };
    if moments.mean_n < moments.mean_a.norm_sqr() - 1e-10 {
        return Err(Error::Invariant(format!(
            "⟨N⟩ = {} below |⟨a⟩|² = {}",
            moments.mean_n,
            moments.mean_a.norm_sqr()
        )));
    }
    if moments.mean_n2 < moments.mean_n * moments.mean_n - 1e-10 {
        return Err(Error::Invariant(format!(
            "⟨N²⟩ = {} below ⟨N⟩² = {}",
            moments.mean_n2,
            moments.mean_n * moments.mean_n
        )));
    }
    Ok(moments)
}

/// Cross-mode moments feeding the Ehrenfest identities.
#[derive(Debug, Clone, Copy)]
pub struct CrossMoments {
    /// ⟨a₂†a₁⟩
    pub hop: Complex64,
    /// ⟨a₁a₂⟩
    pub pair: Complex64,
}

pub fn cross_moments(state: &StateVector) -> CrossMoments {
    let basis = state.basis();
    let d = basis.mode_dim();
    let psi = state.amplitudes();
    let idx = |n1: usize, n2: usize| n1 * d + n2;

    let mut hop = Complex64::new(0.0, 0.0);
    let mut pair = Complex64::new(0.0, 0.0);
    for n1 in 1..d {
        for n2 in 0..d {
            let amp = psi[idx(n1, n2)];
            // a₂†a₁|n₁,n₂⟩ = √(n₁(n₂+1)) |n₁−1, n₂+1⟩
            if n2 + 1 < d {
                hop += psi[idx(n1 - 1, n2 + 1)].conj()
                    * ((n1 * (n2 + 1)) as f64).sqrt()
                    * amp;
            }
            // a₁a₂|n₁,n₂⟩ = √(n₁n₂) |n₁−1, n₂−1⟩
            if n2 >= 1 {
                pair += psi[idx(n1 - 1, n2 - 1)].conj() * ((n1 * n2) as f64).sqrt() * amp;
            }
        }
    }
    CrossMoments { hop, pair }
}

/// Symplectic eigenvalue of the single-mode covariance matrix:
/// f = √((⟨a†a⟩ − |⟨a⟩|² + ½)² − |⟨a²⟩ − ⟨a⟩²|²) − ½,
/// zero for coherent states, n̄ for thermal ones.
pub fn symplectic_f(moments: &ModeMoments) -> Result<f64> {
    let centered_n = moments.mean_n - moments.mean_a.norm_sqr() + 0.5;
    let centered_a2 = moments.mean_a2 - moments.mean_a * moments.mean_a;
    let radicand = centered_n * centered_n - centered_a2.norm_sqr();
    if radicand < -RADICAND_TOL {
        return Err(Error::Unphysical(format!(
            "covariance radicand {radicand:.3e} below −{RADICAND_TOL:.0e} on mode {}",
            moments.mode
        )));
    }
    // rounding can push the radicand slightly under the vacuum floor of 1/4;
    // clamp the result at the coherent-state value 0
    Ok((radicand.max(0.0).sqrt() - 0.5).max(0.0))
}

/// Gaussian-state entropy S_g(f) = −f log₂ f + (1+f) log₂(1+f) in bits,
/// continuously extended by S_g(0) = 0.
pub fn gaussian_entropy(f: f64) -> Result<f64> {
    if f < 0.0 {
        return Err(Error::Domain(format!(
            "gaussian entropy needs f >= 0, got {f}"
        )));
    }
    if f == 0.0 {
        return Ok(0.0);
    }
    Ok((-f * f.ln() + (1.0 + f) * (1.0 + f).ln()) / LN_2)
}

/// Non-gaussianity indicator ΔSᵢ = S_g(fᵢ) − S(ρᵢ) of the chosen mode.
pub fn nongaussianity(state: &StateVector, mode: Mode) -> Result<f64> {
    let moments = mode_moments(state, mode)?;
    let f = symplectic_f(&moments)?;
    let s_gauss = gaussian_entropy(f)?;
    let s = entropy_of_density(&partial_trace(state, mode)?)?;
    let delta = s_gauss - s;
    if delta < -NONGAUSSIANITY_TOL {
        return Err(Error::Invariant(format!(
            "ΔS_{mode} = {delta:.3e} below −{NONGAUSSIANITY_TOL:.0e}"
        )));
    }
    Ok(delta)
}

/// Number statistics of one mode. The ratio indicators are `None` when
/// ⟨N⟩ vanishes (to within [`RATIO_MEAN_N_FLOOR`]) and leaves them undefined.
#[derive(Debug, Clone, Copy)]
pub struct NumberStatistics {
    pub mean_n: f64,
    /// Δ²N = ⟨N²⟩ − ⟨N⟩²
    pub var_n: f64,
    /// D = Δ²N − ⟨N⟩; negative D signals sub-Poissonian statistics (antibunching)
    pub d: f64,
    /// Mandel Q = D/⟨N⟩
    pub mandel_q: Option<f64>,
    /// Fano F = Δ²N/⟨N⟩ = 1 + Q
    pub fano: Option<f64>,
    /// g²(0) = 1 + D/⟨N⟩²
    pub g2: Option<f64>,
}

pub fn number_statistics(state: &StateVector, mode: Mode) -> Result<NumberStatistics> {
    Ok(number_statistics_from_moments(&mode_moments(state, mode)?))
}

pub fn number_statistics_from_moments(moments: &ModeMoments) -> NumberStatistics {
    let mean_n = moments.mean_n;
    let var_n = moments.mean_n2 - mean_n * mean_n;
    let d = var_n - mean_n;
    let (mandel_q, fano, g2) = if mean_n > RATIO_MEAN_N_FLOOR {
        (
            Some(d / mean_n),
            Some(1.0 + d / mean_n),
            Some(1.0 + d / (mean_n * mean_n)),
        )
    } else {
        (None, None, None)
    };
    NumberStatistics {
        mean_n,
        var_n,
        d,
        mandel_q,
        fano,
        g2,
    }
}

/// Variances of the dimensionless quadratures x = (a+a†)/√2 and
/// p = −i(a−a†)/√2, from the field moments.
pub fn quadrature_variances(moments: &ModeMoments) -> (f64, f64) {
    let re_a = moments.mean_a.re;
    let im_a = moments.mean_a.im;
    let var_q = moments.mean_a2.re + moments.mean_n + 0.5 - 2.0 * re_a * re_a;
    let var_p = -moments.mean_a2.re + moments.mean_n + 0.5 - 2.0 * im_a * im_a;
    (var_q, var_p)
}

/// Shifted squeezing ratios ΔO = √(var_t(O)/var₀(O)) − 1 for O ∈ {Q, P}.
/// Negative values signal squeezing relative to the initial state. The ratio
/// is invariant under any constant rescaling of the quadratures, so the
/// dimensionless convention carries no loss.
#[derive(Debug, Clone, Copy)]
pub struct SqueezingRatios {
    pub d_q: f64,
    pub d_p: f64,
}

pub fn squeezing_ratios(
    state_t: &StateVector,
    state_0: &StateVector,
    mode: Mode,
) -> Result<SqueezingRatios> {
    if state_t.basis() != state_0.basis() {
        return Err(Error::DimensionMismatch {
            expected: state_0.dim(),
            actual: state_t.dim(),
        });
    }
    let m_t = mode_moments(state_t, mode)?;
    let m_0 = mode_moments(state_0, mode)?;
    squeezing_ratios_from_moments(&m_t, &m_0)
}

pub fn squeezing_ratios_from_moments(
    moments_t: &ModeMoments,
    moments_0: &ModeMoments,
) -> Result<SqueezingRatios> {
    let (vq_t, vp_t) = quadrature_variances(moments_t);
    let (vq_0, vp_0) = quadrature_variances(moments_0);
    if vq_0 <= 0.0 || vp_0 <= 0.0 || vq_0.is_nan() || vp_0.is_nan() {
        return Err(Error::Invariant(format!(
            "degenerate reference variances ({vq_0}, {vp_0}); physical states keep both above the vacuum level"
        )));
    }
    Ok(SqueezingRatios {
        d_q: (vq_t / vq_0).sqrt() - 1.0,
        d_p: (vp_t / vp_0).sqrt() - 1.0,
    })
}

/// Every scalar the evolve CSV carries for one time point.
#[derive(Debug, Clone, Copy)]
pub struct StateDiagnostics {
    pub e12: f64,
    pub ds1: f64,
    pub ds2: f64,
    pub n1: f64,
    pub n2: f64,
    pub ntot_half: f64,
    pub var_n1: f64,
    pub var_n2: f64,
    pub d1: f64,
    pub d2: f64,
    pub mandel_q1: Option<f64>,
    pub mandel_q2: Option<f64>,
    pub fano1: Option<f64>,
    pub fano2: Option<f64>,
    pub g2_1: Option<f64>,
    pub g2_2: Option<f64>,
    pub dq1: f64,
    pub dp1: f64,
    pub dq2: f64,
    pub dp2: f64,
    pub f1: f64,
    pub f2: f64,
    pub norm: f64,
    pub edge_weight: f64,
}

/// Full diagnostic row of `state_t`, with squeezing referenced to `state_0`.
pub fn diagnostics(state_t: &StateVector, state_0: &StateVector) -> Result<StateDiagnostics> {
    let m1 = mode_moments(state_t, Mode::One)?;
    let m2 = mode_moments(state_t, Mode::Two)?;
    let s1 = entropy_of_density(&partial_trace(state_t, Mode::One)?)?;
    let s2 = entropy_of_density(&partial_trace(state_t, Mode::Two)?)?;
    if (s1 - s2).abs() > ENTROPY_CROSS_TOL {
        return Err(Error::Invariant(format!(
            "S(ρ₁) = {s1} and S(ρ₂) = {s2} differ beyond {ENTROPY_CROSS_TOL:.0e}"
        )));
    }
    let f1 = symplectic_f(&m1)?;
    let f2 = symplectic_f(&m2)?;
    let stats1 = number_statistics_from_moments(&m1);
    let stats2 = number_statistics_from_moments(&m2);
    let sq1 = squeezing_ratios_from_moments(&m1, &mode_moments(state_0, Mode::One)?)?;
    let sq2 = squeezing_ratios_from_moments(&m2, &mode_moments(state_0, Mode::Two)?)?;
    Ok(StateDiagnostics {
        e12: s1,
        ds1: gaussian_entropy(f1)? - s1,
        ds2: gaussian_entropy(f2)? - s2,
        n1: m1.mean_n,
        n2: m2.mean_n,
        ntot_half: 0.5 * (m1.mean_n + m2.mean_n),
        var_n1: stats1.var_n,
        var_n2: stats2.var_n,
        d1: stats1.d,
        d2: stats2.d,
        mandel_q1: stats1.mandel_q,
        mandel_q2: stats2.mandel_q,
        fano1: stats1.fano,
        fano2: stats2.fano,
        g2_1: stats1.g2,
        g2_2: stats2.g2,
        dq1: sq1.d_q,
        dp1: sq1.d_p,
        dq2: sq2.d_q,
        dp2: sq2.d_p,
        f1,
        f2,
        norm: state_t.norm(),
        edge_weight: edge_occupation(state_t),
    })
}
