//! Physical parameters, Hamiltonian assembly and normal-mode analysis.
//!
//! Units: ħ = 1 and ω₁ is the frequency unit, so every coupling is quoted in
//! units of ω₁ and times in 1/ω₁. The Hamiltonian is
//!
//! ```text
//! H = ω₁(N₁+½) + ω₂(N₂+½) − iλ₁(a₂†a₁ − a₁†a₂) − iλ₂(a₁a₂ − a₁†a₂†)
//!     + β₁ a₁†²a₁² + β₂ a₂†²a₂²
//! ```
//!
//! with λ₁ the boson-interchange strength and λ₂ the pair creation/annihilation
//! strength. Both may be given directly or derived from a rotation frequency ω
//! via λ₁ = (ω/2)(√(ω₁/ω₂) + √(ω₂/ω₁)), λ₂ = (ω/2)(√(ω₁/ω₂) − √(ω₂/ω₁)).
//!
//! All anharmonic strengths β are taken in units of ω₁ throughout, including in
//! figure-caption presets where some captions quote β against other scales.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::{embed_pair, mode_annihilator, mode_kerr, mode_number, FockBasis, Operator};

/// Physical couplings and Kerr strengths, in units of ω₁ with ħ = 1.
///
/// Invariants: ω₁ ≥ ω₂ > 0 (equality is the isotropic limit), β ≥ 0, λ ≥ 0.
/// The rotation frequency is retained when the couplings came through the
/// ω ↦ (λ₁, λ₂) map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    omega1: f64,
    omega2: f64,
    lambda1: f64,
    lambda2: f64,
    beta1: f64,
    beta2: f64,
    rotation: Option<f64>,
}

impl ModelParams {
    /// Parameters with the quadratic coupling specified as a rotation frequency ω.
    pub fn from_rotation(
        omega1: f64,
        omega2: f64,
        rotation: f64,
        beta1: f64,
        beta2: f64,
    ) -> Result<Self> {
        check_frequencies(omega1, omega2)?;
        check_kerr(beta1, beta2)?;
        let (lambda1, lambda2) = couplings_from_rotation(rotation, omega1, omega2)?;
        Ok(Self {
            omega1,
            omega2,
            lambda1,
            lambda2,
            beta1,
            beta2,
            rotation: Some(rotation),
        })
    }

    /// Parameters with the quadratic couplings given directly. Permits the
    /// λ₂ > λ₁ regime that the rotation map cannot reach.
    pub fn from_couplings(
        omega1: f64,
        omega2: f64,
        lambda1: f64,
        lambda2: f64,
        beta1: f64,
        beta2: f64,
    ) -> Result<Self> {
        check_frequencies(omega1, omega2)?;
        check_kerr(beta1, beta2)?;
        if lambda1 < 0.0 || lambda2 < 0.0 {
            return Err(Error::Domain(format!(
                "couplings must be nonnegative, got lambda1 = {lambda1}, lambda2 = {lambda2}"
            )));
        }
        Ok(Self {
            omega1,
            omega2,
            lambda1,
            lambda2,
            beta1,
            beta2,
            rotation: None,
        })
    }

    pub fn omega1(&self) -> f64 {
        self.omega1
    }

    pub fn omega2(&self) -> f64 {
        self.omega2
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    /// Rotation frequency ω when the couplings came through the map.
    pub fn rotation(&self) -> Option<f64> {
        self.rotation
    }

    /// Copy with the Kerr strengths replaced.
    pub fn with_kerr(&self, beta1: f64, beta2: f64) -> Result<Self> {
        check_kerr(beta1, beta2)?;
        Ok(Self {
            beta1,
            beta2,
            ..*self
        })
    }
}

fn check_frequencies(omega1: f64, omega2: f64) -> Result<()> {
    if omega1 <= 0.0 || omega2 <= 0.0 || omega1.is_nan() || omega2.is_nan() {
        return Err(Error::Domain(format!(
            "mode frequencies must be positive, got omega1 = {omega1}, omega2 = {omega2}"
        )));
    }
    if omega2 > omega1 {
        return Err(Error::Domain(format!(
            "expected omega1 >= omega2 > 0, got omega1 = {omega1} < omega2 = {omega2}"
        )));
    }
    Ok(())
}

fn check_kerr(beta1: f64, beta2: f64) -> Result<()> {
    if beta1 < 0.0 || beta2 < 0.0 {
        return Err(Error::Domain(format!(
            "Kerr strengths must be nonnegative, got beta1 = {beta1}, beta2 = {beta2}"
        )));
    }
    Ok(())
}

/// Map the rotation frequency ω onto the quadratic couplings:
/// λ₁ = (ω/2)(√(ω₁/ω₂) + √(ω₂/ω₁)), λ₂ = (ω/2)(√(ω₁/ω₂) − √(ω₂/ω₁)).
pub fn couplings_from_rotation(rotation: f64, omega1: f64, omega2: f64) -> Result<(f64, f64)> {
    check_frequencies(omega1, omega2)?;
    if rotation < 0.0 {
        return Err(Error::Domain(format!(
            "rotation frequency must be nonnegative, got {rotation}"
        )));
    }
    let r = (omega1 / omega2).sqrt();
    let r_inv = (omega2 / omega1).sqrt();
    Ok((0.5 * rotation * (r + r_inv), 0.5 * rotation * (r - r_inv)))
}

/// Energy of level n of a single uncoupled Kerr oscillator:
/// E⁰ₙ = ω(n + ½) + β n(n − 1), with spacing E⁰ₙ₊₁ − E⁰ₙ = ω + 2βn.
pub fn kerr_level_energy(n: usize, omega: f64, beta: f64) -> f64 {
    let nf = n as f64;
    omega * (nf + 0.5) + beta * nf * (nf - 1.0)
}

/// Normal frequencies ω± of the quadratic part and the stability flag.
///
/// ω±² = (ω₁² + ω₂²)/2 + λ₁² − λ₂² ± Δ with
/// Δ = √(((ω₁² − ω₂²)/2)² + λ₁²(ω₁+ω₂)² − λ₂²(ω₁−ω₂)²). The frequencies are
/// complex outside the dynamically stable regions. The positive-definite
/// (energetically stable) regime is λ₁ + λ₂ < √(ω₁ω₂), equivalently ω < ω₂
/// under the rotation map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModes {
    pub omega_plus: Complex64,
    pub omega_minus: Complex64,
    pub delta: Complex64,
    pub stable: bool,
}

pub fn normal_frequencies(params: &ModelParams) -> NormalModes {
    let w1 = params.omega1;
    let w2 = params.omega2;
    let l1 = params.lambda1;
    let l2 = params.lambda2;

    let half_diff = 0.5 * (w1 * w1 - w2 * w2);
    let radicand = half_diff * half_diff + l1 * l1 * (w1 + w2) * (w1 + w2)
        - l2 * l2 * (w1 - w2) * (w1 - w2);
    let delta = Complex64::new(radicand, 0.0).sqrt();
    let base = 0.5 * (w1 * w1 + w2 * w2) + l1 * l1 - l2 * l2;
    let wp2 = Complex64::new(base, 0.0) + delta;
    let omega_plus = wp2.sqrt();

    // The minus branch suffers catastrophic cancellation near the stability
    // border, so it is taken from the factored product
    //   ω₊²ω₋² = (ω₁ω₂ − (λ₁+λ₂)²)(ω₁ω₂ − (λ₁−λ₂)²)
    // which under the rotation map reduces to (ω₁² − ω²)(ω₂² − ω²) with
    // exact zeros at ω = ω₂ and ω = ω₁.
    let product = match params.rotation {
        Some(w) => (w1 - w) * (w1 + w) * (w2 - w) * (w2 + w),
        None => {
            let s = l1 + l2;
            let d = l1 - l2;
            (w1 * w2 - s * s) * (w1 * w2 - d * d)
        }
    };
    let omega_minus = if wp2.norm() > 0.0 {
        (Complex64::new(product, 0.0) / wp2).sqrt()
    } else {
        Complex64::new(0.0, 0.0)
    };

    let stable = l1 + l2 < (w1 * w2).sqrt();
    NormalModes {
        omega_plus,
        omega_minus,
        delta,
        stable,
    }
}

/// Assemble the truncated Hamiltonian from the raw coefficient set.
///
/// Exposed separately from [`build_hamiltonian`] so the sign-gauge
/// equivalences (λᵢ → −λᵢ jointly, or λ₂ → −λ₂ alone) can be exercised
/// outside the sign conventions enforced by [`ModelParams`].
pub fn assemble_hamiltonian_raw(
    omega1: f64,
    omega2: f64,
    lambda1: f64,
    lambda2: f64,
    beta1: f64,
    beta2: f64,
    basis: FockBasis,
) -> Result<Operator> {
    let d = basis.mode_dim();
    let a = mode_annihilator(d);
    let ad = crate::fockspace::adjoint(&a);
    let n = mode_number(d);
    let kerr = mode_kerr(d);
    let id = Array2::<Complex64>::eye(d);

    let c = Complex64::new(0.0, 0.0);
    let mut h = Array2::from_elem((basis.dim(), basis.dim()), c);

    let mut add = |factor: Complex64, m: Array2<Complex64>| {
        h.zip_mut_with(&m, |acc, &v| *acc += factor * v);
    };

    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);

    // ω₁(N₁ + ½) + ω₂(N₂ + ½)
    add(re(omega1), embed_pair(&n, &id, basis)?);
    add(re(omega2), embed_pair(&id, &n, basis)?);
    add(re(0.5 * (omega1 + omega2)), embed_pair(&id, &id, basis)?);
    // −iλ₁(a₂†a₁ − a₁†a₂)
    add(im(-lambda1), embed_pair(&a, &ad, basis)?);
    add(im(lambda1), embed_pair(&ad, &a, basis)?);
    // −iλ₂(a₁a₂ − a₁†a₂†)
    add(im(-lambda2), embed_pair(&a, &a, basis)?);
    add(im(lambda2), embed_pair(&ad, &ad, basis)?);
    // β₁ a₁†²a₁² + β₂ a₂†²a₂²
    add(re(beta1), embed_pair(&kerr, &id, basis)?);
    add(re(beta2), embed_pair(&id, &kerr, basis)?);

    Operator::hermitian(h, basis)
}

/// Truncated Hamiltonian for the given parameters, flagged and verified Hermitian.
pub fn build_hamiltonian(params: &ModelParams, basis: FockBasis) -> Result<Operator> {
    assemble_hamiltonian_raw(
        params.omega1,
        params.omega2,
        params.lambda1,
        params.lambda2,
        params.beta1,
        params.beta2,
        basis,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::Mode;

    #[test]
    fn rotation_map_limits() {
        // no rotation
        let (l1, l2) = couplings_from_rotation(0.0, 1.0, 0.5).unwrap();
        assert_eq!((l1, l2), (0.0, 0.0));
        // isotropic limit: λ₂ vanishes, λ₁ = ω
        let (l1, l2) = couplings_from_rotation(0.3, 1.0, 1.0).unwrap();
        assert_eq!(l1, 0.3);
        assert_eq!(l2, 0.0);
    }

    #[test]
    fn rotation_map_anisotropic_values() {
        // ω₁ = 1, ω₂ = 0.5, ω = 0.15
        let (l1, l2) = couplings_from_rotation(0.15, 1.0, 0.5).unwrap();
        assert!((l1 - 0.15909902576697317).abs() < 1e-15);
        assert!((l2 - 0.05303300858899107).abs() < 1e-15);
        // independent algebraic route: λ₁ = ω(ω₁+ω₂)/(2√(ω₁ω₂)),
        // λ₂ = ω(ω₁−ω₂)/(2√(ω₁ω₂))
        let root = (1.0f64 * 0.5).sqrt();
        assert!((l1 - 0.15 * 1.5 / (2.0 * root)).abs() < 1e-15);
        assert!((l2 - 0.15 * 0.5 / (2.0 * root)).abs() < 1e-15);
    }

    #[test]
    fn rotation_map_rejects_bad_domains() {
        assert!(couplings_from_rotation(-0.1, 1.0, 0.5).is_err());
        assert!(couplings_from_rotation(0.1, 0.0, 0.5).is_err());
        assert!(couplings_from_rotation(0.1, 1.0, -0.5).is_err());
        assert!(couplings_from_rotation(0.1, 0.5, 1.0).is_err());
    }

    #[test]
    fn kerr_levels() {
        assert_eq!(kerr_level_energy(0, 1.0, 0.3), 0.5);
        // n(n−1) vanishes at n = 1 for any β
        assert_eq!(kerr_level_energy(1, 1.0, 0.0), 1.5);
        assert_eq!(kerr_level_energy(1, 1.0, 7.0), 1.5);
        assert!((kerr_level_energy(3, 1.0, 0.2) - 4.7).abs() < 1e-14);
        // level spacing ω + 2βn
        let spacing = kerr_level_energy(4, 1.0, 0.2) - kerr_level_energy(3, 1.0, 0.2);
        assert!((spacing - (1.0 + 2.0 * 0.2 * 3.0)).abs() < 1e-14);
    }

    #[test]
    fn normal_frequencies_isotropic_split() {
        let params = ModelParams::from_rotation(1.0, 1.0, 0.3, 0.0, 0.0).unwrap();
        let nm = normal_frequencies(&params);
        assert!(nm.stable);
        assert!((nm.omega_plus.re - 1.3).abs() < 1e-12);
        assert!((nm.omega_minus.re - 0.7).abs() < 1e-12);
        assert_eq!(nm.omega_plus.im, 0.0);
        assert_eq!(nm.omega_minus.im, 0.0);
    }

    #[test]
    fn normal_frequencies_boundary_of_stability() {
        // ω = ω₂ puts the system exactly on the border with ω₋ = 0
        let params = ModelParams::from_rotation(1.0, 0.5, 0.5, 0.0, 0.0).unwrap();
        let nm = normal_frequencies(&params);
        assert!(nm.omega_minus.norm() <= 1e-10, "omega_minus = {:?}", nm.omega_minus);
        assert!(!nm.stable);
    }

    #[test]
    fn normal_frequencies_uncoupled_limit() {
        let params = ModelParams::from_rotation(1.0, 0.5, 0.0, 0.0, 0.0).unwrap();
        let nm = normal_frequencies(&params);
        assert!((nm.omega_plus.re - 1.0).abs() < 1e-14);
        assert!((nm.omega_minus.re - 0.5).abs() < 1e-14);
        assert!(nm.stable);
    }

    #[test]
    fn normal_frequencies_unstable_window_is_flagged() {
        let params = ModelParams::from_rotation(1.0, 0.5, 0.7, 0.0, 0.0).unwrap();
        let nm = normal_frequencies(&params);
        assert!(!nm.stable);
        // in ω₂ < ω < ω₁ one squared frequency is negative
        assert!(nm.omega_minus.im.abs() > 0.0);
    }

    #[test]
    fn normal_frequencies_hopping_only_exact_split() {
        // λ₂ = 0 and ω₁ = ω₂ reduce to ω± = ω₁ ± λ₁
        let params = ModelParams::from_couplings(1.0, 1.0, 0.25, 0.0, 0.0, 0.0).unwrap();
        let nm = normal_frequencies(&params);
        assert!((nm.omega_plus.re - 1.25).abs() < 4e-16);
        assert!((nm.omega_minus.re - 0.75).abs() < 4e-16);
    }

    #[test]
    fn hamiltonian_uncoupled_diagonal() {
        let basis = FockBasis::new(3);
        let params = ModelParams::from_couplings(1.0, 0.5, 0.0, 0.0, 0.0, 0.0).unwrap();
        let h = build_hamiltonian(&params, basis).unwrap();
        for (k, (n1, n2)) in basis.iter_occupations().enumerate() {
            let expected = 1.0 * (n1 as f64 + 0.5) + 0.5 * (n2 as f64 + 0.5);
            assert!((h.matrix()[[k, k]].re - expected).abs() < 1e-14);
            assert!(h.matrix()[[k, k]].im.abs() < 1e-15);
        }
        let off = h
            .matrix()
            .indexed_iter()
            .filter(|((i, j), _)| i != j)
            .map(|(_, z)| z.norm())
            .fold(0.0f64, f64::max);
        assert_eq!(off, 0.0);
    }

    #[test]
    fn hamiltonian_hopping_element() {
        // ⟨(0,1)| H |(1,0)⟩ = −iλ₁ when λ₂ = β = 0
        let basis = FockBasis::new(2);
        let lambda1 = 0.37;
        let params = ModelParams::from_couplings(1.0, 0.5, lambda1, 0.0, 0.0, 0.0).unwrap();
        let h = build_hamiltonian(&params, basis).unwrap();
        let e = h.element((0, 1), (1, 0)).unwrap();
        assert!((e - Complex64::new(0.0, -lambda1)).norm() < 1e-15);
        // brute-force route: assemble −iλ₁(a₂†a₁ − a₁†a₂) from product-space matrices
        let a1 = crate::fockspace::annihilator(basis, Mode::One);
        let a2 = crate::fockspace::annihilator(basis, Mode::Two);
        let hop = a2.adjoint().matrix().dot(a1.matrix()) - a1.adjoint().matrix().dot(a2.matrix());
        let row = basis.index(0, 1).unwrap();
        let col = basis.index(1, 0).unwrap();
        let brute = Complex64::new(0.0, -lambda1) * hop[[row, col]];
        assert!((e - brute).norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_kerr_diagonal_entry() {
        // λ = 0, β₁ = 0.1: entry at (n₁, n₂) = (2, 1) is 2.5 + 0.2 plus the mode-2 part
        let basis = FockBasis::new(3);
        let params = ModelParams::from_couplings(1.0, 0.5, 0.0, 0.0, 0.1, 0.0).unwrap();
        let h = build_hamiltonian(&params, basis).unwrap();
        let k = basis.index(2, 1).unwrap();
        let expected = 2.7 + kerr_level_energy(1, 0.5, 0.0);
        assert!((h.matrix()[[k, k]].re - expected).abs() < 1e-14);
        // and against the Kerr level formula directly
        let alt = kerr_level_energy(2, 1.0, 0.1) + kerr_level_energy(1, 0.5, 0.0);
        assert!((h.matrix()[[k, k]].re - alt).abs() < 1e-14);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::from_rotation(1.0, 1.5, 0.1, 0.0, 0.0).is_err());
        assert!(ModelParams::from_rotation(1.0, 0.5, 0.1, -0.1, 0.0).is_err());
        assert!(ModelParams::from_couplings(1.0, 0.5, -0.1, 0.0, 0.0, 0.0).is_err());
        // λ₂ > λ₁ is allowed through the direct route
        let p = ModelParams::from_couplings(1.0, 0.5, 0.1, 0.3, 0.0, 0.0).unwrap();
        assert_eq!(p.lambda2(), 0.3);
        assert_eq!(p.rotation(), None);
    }
}
