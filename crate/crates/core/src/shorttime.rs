//! Second-order short-time machinery for the Heisenberg field operators and
//! the exact initial-rate identities.
//!
//! The t⁰/t¹/t² coefficient operators of aᵢ(t) are assembled twice: once
//! term-by-term from the printed derivative lists
//!
//! ```text
//! ȧ₁ = −iω₁a₁ + λ₁a₂ + λ₂a₂† − 2iβ₁a₁†a₁²
//! ä₁ = −(ω₁²+λ₁²−λ₂²)a₁ − iλ₁(ω₁+ω₂)a₂ − iλ₂(ω₁−ω₂)a₂† − 4β₁ω₁a₁†a₁²
//!      − 2iβ₂a₂†(λ₁a₂−λ₂a₂†)a₂ − 4iβ₁a₁†a₁(λ₁a₂+λ₂a₂†)
//!      − 2iβ₁a₁²(λ₁a₂†+λ₂a₂) − 4β₁²a₁†a₁a₁†a₁²
//! ```
//!
//! (and the mode-swapped partners), and once from the direct commutators
//! i[H, a] and −½[H, [H, a]]. The two routes must agree on the interior
//! subspace, where truncation artifacts cannot reach; the commutator route is
//! the ground truth and a disagreement is an assembly error, which localizes
//! transcription slips in the long printed term lists.

use ndarray::Array2;
use num_complex::Complex64;

use crate::dynamics::StateVector;
use crate::error::{Error, Result};
use crate::fockspace::{adjoint, embed_pair, mode_annihilator, mode_number, FockBasis, Mode};
use crate::model::{build_hamiltonian, ModelParams};
use crate::observables::cross_moments;

/// Shells stripped from each mode when comparing operators on the interior.
pub const INTERIOR_MARGIN: usize = 4;
/// Bound on the term-list vs commutator disagreement (interior max-abs).
pub const EXPANSION_CHECK_TOL: f64 = 1e-9;

const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coefficient operators of aᵢ(t) ≈ order0 + t·order1 + t²·order2.
#[derive(Debug, Clone)]
pub struct ShortTimeExpansion {
    order0: Array2<Complex64>,
    order1: Array2<Complex64>,
    order2: Array2<Complex64>,
    mode: Mode,
    basis: FockBasis,
}

impl ShortTimeExpansion {
    /// The bare annihilator of the mode.
    pub fn order0(&self) -> &Array2<Complex64> {
        &self.order0
    }

    /// ȧ(0) as a product-basis matrix.
    pub fn order1(&self) -> &Array2<Complex64> {
        &self.order1
    }

    /// ä(0)/2 as a product-basis matrix.
    pub fn order2(&self) -> &Array2<Complex64> {
        &self.order2
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    /// Assembled a(t) = order0 + t·order1 + t²·order2.
    pub fn at(&self, t: f64) -> Array2<Complex64> {
        let mut out = self.order0.clone();
        out.zip_mut_with(&self.order1, |acc, &v| *acc += t * v);
        out.zip_mut_with(&self.order2, |acc, &v| *acc += t * t * v);
        out
    }
}

/// Assemble the second-order expansion of the chosen mode's annihilator and
/// verify it against the direct commutator route.
pub fn heisenberg_expansion(
    params: &ModelParams,
    basis: FockBasis,
    mode: Mode,
) -> Result<ShortTimeExpansion> {
    let d = basis.mode_dim();
    let a = mode_annihilator(d);
    let ad = adjoint(&a);
    let n = mode_number(d);
    let id = Array2::<Complex64>::eye(d);
    let a2 = a.dot(&a);
    let ada2 = ad.dot(&a2); // a†a²
    let ad2a = ad.dot(&ad).dot(&a); // a†²a
    let quartic = ad.dot(&a).dot(&ada2); // a†a a†a²

    let w1 = params.omega1();
    let w2 = params.omega2();
    let l1 = params.lambda1();
    let l2 = params.lambda2();
    let b1 = params.beta1();
    let b2 = params.beta2();

    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let dim = basis.dim();
    let sum = |terms: &[(Complex64, Array2<Complex64>)]| -> Result<Array2<Complex64>> {
        let mut acc = Array2::from_elem((dim, dim), C_ZERO);
        for (factor, m) in terms {
            acc.zip_mut_with(m, |out, &v| *out += factor * v);
        }
        Ok(acc)
    };

    // single-mode combinations appearing in the β·λ cross terms
    let l1_a_plus_l2_ad = a.mapv(|z| re(l1) * z) + ad.mapv(|z| re(l2) * z);
    let l1_ad_plus_l2_a = ad.mapv(|z| re(l1) * z) + a.mapv(|z| re(l2) * z);
    let l1_a_minus_l2_ad = a.mapv(|z| re(l1) * z) - ad.mapv(|z| re(l2) * z);
    let l1_ad_minus_l2_a = ad.mapv(|z| re(l1) * z) - a.mapv(|z| re(l2) * z);

    let (order0, order1, ddot) = match mode {
        Mode::One => {
            let order0 = embed_pair(&a, &id, basis)?;
            let order1 = sum(&[
                (im(-w1), embed_pair(&a, &id, basis)?),
                (re(l1), embed_pair(&id, &a, basis)?),
                (re(l2), embed_pair(&id, &ad, basis)?),
                (im(-2.0 * b1), embed_pair(&ada2, &id, basis)?),
            ])?;
            let ddot = sum(&[
                (re(-(w1 * w1 + l1 * l1 - l2 * l2)), embed_pair(&a, &id, basis)?),
                (im(-l1 * (w1 + w2)), embed_pair(&id, &a, basis)?),
                (im(-l2 * (w1 - w2)), embed_pair(&id, &ad, basis)?),
                (re(-4.0 * b1 * w1), embed_pair(&ada2, &id, basis)?),
                // −2iβ₂a₂†(λ₁a₂−λ₂a₂†)a₂ = −2iβ₂(λ₁a₂†a₂² − λ₂a₂†²a₂)
                (im(-2.0 * b2 * l1), embed_pair(&id, &ada2, basis)?),
                (im(2.0 * b2 * l2), embed_pair(&id, &ad2a, basis)?),
                // −4iβ₁a₁†a₁(λ₁a₂+λ₂a₂†)
                (im(-4.0 * b1), embed_pair(&n, &l1_a_plus_l2_ad, basis)?),
                // −2iβ₁a₁²(λ₁a₂†+λ₂a₂)
                (im(-2.0 * b1), embed_pair(&a2, &l1_ad_plus_l2_a, basis)?),
                (re(-4.0 * b1 * b1), embed_pair(&quartic, &id, basis)?),
            ])?;
            (order0, order1, ddot)
        }
        Mode::Two => {
            let order0 = embed_pair(&id, &a, basis)?;
            let order1 = sum(&[
                (im(-w2), embed_pair(&id, &a, basis)?),
                (re(-l1), embed_pair(&a, &id, basis)?),
                (re(l2), embed_pair(&ad, &id, basis)?),
                (im(-2.0 * b2), embed_pair(&id, &ada2, basis)?),
            ])?;
            let ddot = sum(&[
                (re(-(w2 * w2 + l1 * l1 - l2 * l2)), embed_pair(&id, &a, basis)?),
                (im(l1 * (w1 + w2)), embed_pair(&a, &id, basis)?),
                (im(l2 * (w1 - w2)), embed_pair(&ad, &id, basis)?),
                (re(-4.0 * b2 * w2), embed_pair(&id, &ada2, basis)?),
                // +2iβ₁a₁†(λ₁a₁+λ₂a₁†)a₁ = 2iβ₁(λ₁a₁†a₁² + λ₂a₁†²a₁)
                (im(2.0 * b1 * l1), embed_pair(&ada2, &id, basis)?),
                (im(2.0 * b1 * l2), embed_pair(&ad2a, &id, basis)?),
                // +4iβ₂a₂†a₂(λ₁a₁−λ₂a₁†)
                (im(4.0 * b2), embed_pair(&l1_a_minus_l2_ad, &n, basis)?),
                // +2iβ₂a₂²(λ₁a₁†−λ₂a₁)
                (im(2.0 * b2), embed_pair(&l1_ad_minus_l2_a, &a2, basis)?),
                (re(-4.0 * b2 * b2), embed_pair(&id, &quartic, basis)?),
            ])?;
            (order0, order1, ddot)
        }
    };
    let order2 = ddot.mapv(|z| 0.5 * z);

    // ground truth: order1 = i[H, a], order2 = −½[H, [H, a]]
    let h = build_hamiltonian(params, basis)?;
    let hm = h.matrix();
    let c1_raw = hm.dot(&order0) - order0.dot(hm);
    let c1 = c1_raw.mapv(|z| Complex64::new(0.0, 1.0) * z);
    let c2 = (hm.dot(&c1_raw) - c1_raw.dot(hm)).mapv(|z| re(-0.5) * z);
    let defect1 = interior_max_abs_diff(&order1, &c1, basis, INTERIOR_MARGIN)?;
    let defect2 = interior_max_abs_diff(&order2, &c2, basis, INTERIOR_MARGIN)?;
    let defect = defect1.max(defect2);
    if defect > EXPANSION_CHECK_TOL {
        return Err(Error::ExpansionMismatch { defect });
    }

    Ok(ShortTimeExpansion {
        order0,
        order1,
        order2,
        mode,
        basis,
    })
}

/// Second-order population of mode 1 from a real coherent product state:
///
/// ```text
/// ⟨N₁(t)⟩ ≈ α₁² + 2α₁α₂(λ₁+λ₂)t + [−(λ₁²−λ₂²)α₁² + (λ₁+λ₂)²α₂² + λ₂²]t²
/// ```
///
/// The t² coefficient is ½⟨d²N₁/dt²⟩|₀ = ⟨ȧ₁†ȧ₁⟩ + Re⟨a₁†ä₁⟩ with the
/// operator products normal-ordered before substituting real α; the reordering
/// of ȧ₁†ȧ₁ contributes (λ₁+λ₂)²α₂² + λ₂² (the λ₂² survives even from the
/// vacuum: pair creation populates the mode quadratically). The β·λ cross
/// terms and every pure-β piece cancel, so no β enters.
pub fn short_time_population(alpha1: f64, alpha2: f64, params: &ModelParams, t: f64) -> f64 {
    let l1 = params.lambda1();
    let l2 = params.lambda2();
    let sum = l1 + l2;
    let quadratic =
        -(l1 * l1 - l2 * l2) * alpha1 * alpha1 + sum * sum * alpha2 * alpha2 + l2 * l2;
    alpha1 * alpha1 + 2.0 * alpha1 * alpha2 * sum * t + quadratic * t * t
}

/// Exact t = 0 rates for a real coherent product state.
///
/// d⟨N₁⟩/dt = 2α₁α₂(λ₁+λ₂), d⟨N₂⟩/dt = 2α₁α₂(−λ₁+λ₂),
/// d⟨N/2⟩/dt = 2λ₂α₁α₂, the variance rates equal the population rates, and
/// dDᵢ/dt = 0. All are independent of β.
#[derive(Debug, Clone, Copy)]
pub struct InitialRates {
    pub d_n1: f64,
    pub d_n2: f64,
    pub d_ntot_half: f64,
    pub d_var_n1: f64,
    pub d_var_n2: f64,
    pub d_d1: f64,
    pub d_d2: f64,
}

pub fn initial_rates(alpha1: f64, alpha2: f64, params: &ModelParams) -> InitialRates {
    let l1 = params.lambda1();
    let l2 = params.lambda2();
    let d_n1 = 2.0 * alpha1 * alpha2 * (l1 + l2);
    let d_n2 = 2.0 * alpha1 * alpha2 * (-l1 + l2);
    InitialRates {
        d_n1,
        d_n2,
        d_ntot_half: 2.0 * l2 * alpha1 * alpha2,
        d_var_n1: d_n1,
        d_var_n2: d_n2,
        d_d1: 0.0,
        d_d2: 0.0,
    }
}

/// Ehrenfest right-hand sides evaluated on a state:
/// d⟨Nᵢ⟩/dt = 2Re[(−1)^{i+1}λ₁⟨a₂†a₁⟩ + λ₂⟨a₁a₂⟩] and
/// d⟨N/2⟩/dt = 2λ₂Re⟨a₁a₂⟩, for comparison against finite differences of the
/// spectral time series.
#[derive(Debug, Clone, Copy)]
pub struct EhrenfestRates {
    pub d_n1: f64,
    pub d_n2: f64,
    pub d_ntot_half: f64,
}

pub fn ehrenfest_check(state: &StateVector, params: &ModelParams) -> EhrenfestRates {
    let l1 = params.lambda1();
    let l2 = params.lambda2();
    let cm = cross_moments(state);
    let hop_re = cm.hop.re;
    let pair_re = cm.pair.re;
    EhrenfestRates {
        d_n1: 2.0 * (l1 * hop_re + l2 * pair_re),
        d_n2: 2.0 * (-l1 * hop_re + l2 * pair_re),
        d_ntot_half: 2.0 * l2 * pair_re,
    }
}

/// max |m[r, c]| over rows/columns whose occupations satisfy
/// nᵢ ≤ m_cut − margin in both modes. Truncation artifacts live at the top
/// shells, so interior comparisons see the untruncated algebra.
pub fn interior_max_abs(m: &Array2<Complex64>, basis: FockBasis, margin: usize) -> Result<f64> {
    if m.nrows() != basis.dim() || m.ncols() != basis.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            actual: m.nrows().max(m.ncols()),
        });
    }
    let Some(limit) = basis.m_cut().checked_sub(margin) else {
        return Ok(0.0);
    };
    let interior: Vec<usize> = basis
        .iter_occupations()
        .enumerate()
        .filter(|(_, (n1, n2))| *n1 <= limit && *n2 <= limit)
        .map(|(k, _)| k)
        .collect();
    let mut max = 0.0f64;
    for &r in &interior {
        for &c in &interior {
            max = max.max(m[[r, c]].norm());
        }
    }
    Ok(max)
}

/// Interior max-abs of a − b.
pub fn interior_max_abs_diff(
    a: &Array2<Complex64>,
    b: &Array2<Complex64>,
    basis: FockBasis,
    margin: usize,
) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: b.nrows(),
        });
    }
    interior_max_abs(&(a - b), basis, margin)
}
