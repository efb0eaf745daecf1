//! Truncated two-mode Fock basis and field operators as dense matrices.
//!
//! Occupations run `0..=m_cut` in each mode (per-mode dimension `m_cut + 1`),
//! and the product state |n1, n2⟩ sits at index `n1 * (m_cut + 1) + n2`.
//! Ladder matrices follow a|n⟩ = √n |n−1⟩; the creation operator is the
//! adjoint and annihilates the top state |m_cut⟩ by truncation, so the
//! canonical commutator holds exactly on the subspace with n ≤ m_cut − 1
//! and the defect is confined to the top shell.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Operators flagged Hermitian must satisfy max|M − M†| below this bound.
pub const HERMITICITY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncated two-mode product basis with the row-major index convention
/// k = n1·(m_cut+1) + n2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    m_cut: usize,
}

impl FockBasis {
    pub fn new(m_cut: usize) -> Self {
        Self { m_cut }
    }

    /// Maximum occupation per mode.
    pub fn m_cut(&self) -> usize {
        self.m_cut
    }

    /// Per-mode dimension, m_cut + 1.
    pub fn mode_dim(&self) -> usize {
        self.m_cut + 1
    }

    /// Total product-space dimension, (m_cut + 1)².
    pub fn dim(&self) -> usize {
        self.mode_dim() * self.mode_dim()
    }

    /// Basis index of |n1, n2⟩.
    pub fn index(&self, n1: usize, n2: usize) -> Result<usize> {
        if n1 > self.m_cut || n2 > self.m_cut {
            return Err(Error::OccupationOutOfRange {
                n1,
                n2,
                m_cut: self.m_cut,
            });
        }
        Ok(n1 * self.mode_dim() + n2)
    }

    /// Occupations (n1, n2) of a basis index; inverse of [`FockBasis::index`].
    pub fn occupations(&self, index: usize) -> Result<(usize, usize)> {
        if index >= self.dim() {
            return Err(Error::IndexOutOfRange {
                index,
                dim: self.dim(),
            });
        }
        let d = self.mode_dim();
        Ok((index / d, index % d))
    }

    /// Occupation pairs in index order.
    pub fn iter_occupations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let d = self.mode_dim();
        (0..self.dim()).map(move |k| (k / d, k % d))
    }
}

/// One of the two bosonic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    One,
    Two,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::One, Mode::Two];

    pub fn other(self) -> Mode {
        match self {
            Mode::One => Mode::Two,
            Mode::Two => Mode::One,
        }
    }

    /// 1-based label, matching the physics notation.
    pub fn label(self) -> usize {
        match self {
            Mode::One => 1,
            Mode::Two => 2,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Dense operator on the two-mode product space.
#[derive(Debug, Clone)]
pub struct Operator {
    matrix: Array2<Complex64>,
    basis: FockBasis,
    hermitian: bool,
}

impl Operator {
    /// Wrap a matrix without a Hermiticity claim.
    pub fn new(matrix: Array2<Complex64>, basis: FockBasis) -> Result<Self> {
        check_shape(&matrix, basis)?;
        Ok(Self {
            matrix,
            basis,
            hermitian: false,
        })
    }

    /// Wrap a matrix flagged Hermitian, verifying max|M − M†| ≤ 1e−12.
    pub fn hermitian(matrix: Array2<Complex64>, basis: FockBasis) -> Result<Self> {
        check_shape(&matrix, basis)?;
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITICITY_TOL {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self {
            matrix,
            basis,
            hermitian: true,
        })
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.matrix
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// M†, carrying the Hermitian flag over.
    pub fn adjoint(&self) -> Operator {
        Operator {
            matrix: adjoint(&self.matrix),
            basis: self.basis,
            hermitian: self.hermitian,
        }
    }

    /// Matrix element ⟨n1', n2'| M |n1, n2⟩.
    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> Result<Complex64> {
        let row = self.basis.index(bra.0, bra.1)?;
        let col = self.basis.index(ket.0, ket.1)?;
        Ok(self.matrix[[row, col]])
    }
}

fn check_shape(matrix: &Array2<Complex64>, basis: FockBasis) -> Result<()> {
    let dim = basis.dim();
    if matrix.nrows() != dim || matrix.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: matrix.nrows().max(matrix.ncols()),
        });
    }
    Ok(())
}

/// max |M − M†| over all entries.
pub fn hermiticity_defect(matrix: &Array2<Complex64>) -> f64 {
    let n = matrix.nrows();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((matrix[[i, j]] - matrix[[j, i]].conj()).norm());
        }
    }
    defect
}

/// Conjugate transpose.
pub fn adjoint(matrix: &Array2<Complex64>) -> Array2<Complex64> {
    matrix.t().mapv(|z| z.conj())
}

/// Single-mode annihilation matrix of dimension `mode_dim`: a|n⟩ = √n |n−1⟩.
pub fn mode_annihilator(mode_dim: usize) -> Array2<Complex64> {
    let mut a = Array2::from_elem((mode_dim, mode_dim), ZERO);
    for n in 1..mode_dim {
        a[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Single-mode number matrix, diag(0, 1, …, m_cut). Exact integer diagonal.
pub fn mode_number(mode_dim: usize) -> Array2<Complex64> {
    let mut n = Array2::from_elem((mode_dim, mode_dim), ZERO);
    for k in 0..mode_dim {
        n[[k, k]] = Complex64::new(k as f64, 0.0);
    }
    n
}

/// Single-mode Kerr matrix a†²a², diag(n(n−1)). Exact integer diagonal.
pub fn mode_kerr(mode_dim: usize) -> Array2<Complex64> {
    let mut k = Array2::from_elem((mode_dim, mode_dim), ZERO);
    for n in 0..mode_dim {
        k[[n, n]] = Complex64::new((n * n.saturating_sub(1)) as f64, 0.0);
    }
    k
}

/// Kronecker product op1 ⊗ op2 matching the k = n1·d + n2 index convention
/// (mode 1 is the slow factor).
pub fn embed_pair(
    op1: &Array2<Complex64>,
    op2: &Array2<Complex64>,
    basis: FockBasis,
) -> Result<Array2<Complex64>> {
    let d = basis.mode_dim();
    for (m, label) in [(op1, "mode-1"), (op2, "mode-2")] {
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::Domain(format!(
                "{label} factor is {}x{}, expected {d}x{d}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    let dim = basis.dim();
    let mut out = Array2::from_elem((dim, dim), ZERO);
    for i1 in 0..d {
        for j1 in 0..d {
            let f = op1[[i1, j1]];
            if f == ZERO {
                continue;
            }
            for i2 in 0..d {
                for j2 in 0..d {
                    out[[i1 * d + i2, j1 * d + j2]] = f * op2[[i2, j2]];
                }
            }
        }
    }
    Ok(out)
}

/// Embed a single-mode matrix on the chosen mode, identity on the other.
pub fn embed(op: &Array2<Complex64>, mode: Mode, basis: FockBasis) -> Result<Array2<Complex64>> {
    let id = Array2::eye(basis.mode_dim());
    match mode {
        Mode::One => embed_pair(op, &id, basis),
        Mode::Two => embed_pair(&id, op, basis),
    }
}

/// Annihilation operator of the chosen mode on the product space.
pub fn annihilator(basis: FockBasis, mode: Mode) -> Operator {
    let a = mode_annihilator(basis.mode_dim());
    let matrix = embed(&a, mode, basis).expect("square factors by construction");
    Operator {
        matrix,
        basis,
        hermitian: false,
    }
}

/// Creation operator of the chosen mode: the adjoint of [`annihilator`].
pub fn creator(basis: FockBasis, mode: Mode) -> Operator {
    annihilator(basis, mode).adjoint()
}

/// Number operator N = a†a of the chosen mode.
pub fn number_op(basis: FockBasis, mode: Mode) -> Operator {
    let n = mode_number(basis.mode_dim());
    let matrix = embed(&n, mode, basis).expect("square factors by construction");
    Operator {
        matrix,
        basis,
        hermitian: true,
    }
}

/// Dimensionless quadratures x = (a + a†)/√2 and p = −i(a − a†)/√2 of the
/// chosen mode. Any constant rescaling cancels in the variance ratios these
/// feed, so the physical mass/frequency prefactors are omitted.
pub fn quadrature_ops(basis: FockBasis, mode: Mode) -> (Operator, Operator) {
    let d = basis.mode_dim();
    let a = mode_annihilator(d);
    let ad = adjoint(&a);
    let inv_sqrt2 = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    let minus_i = Complex64::new(0.0, -1.0);
    let x = (&a + &ad).mapv(|z| z * inv_sqrt2);
    let p = (&a - &ad).mapv(|z| z * minus_i * inv_sqrt2);
    let xm = embed(&x, mode, basis).expect("square factors by construction");
    let pm = embed(&p, mode, basis).expect("square factors by construction");
    (
        Operator {
            matrix: xm,
            basis,
            hermitian: true,
        },
        Operator {
            matrix: pm,
            basis,
            hermitian: true,
        },
    )
}

/// Identity on the product space.
pub fn identity_op(basis: FockBasis) -> Operator {
    Operator {
        matrix: Array2::eye(basis.dim()),
        basis,
        hermitian: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn commutator(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
        a.dot(b) - b.dot(a)
    }

    #[test]
    fn index_examples() {
        let basis = FockBasis::new(2);
        assert_eq!(basis.index(0, 0).unwrap(), 0);
        assert_eq!(basis.index(1, 2).unwrap(), 5);
        assert!(basis.index(3, 0).is_err());
        assert!(basis.index(0, 3).is_err());
    }

    #[test]
    fn index_round_trip_is_bijective() {
        let basis = FockBasis::new(3);
        assert_eq!(basis.dim(), 16);
        for k in 0..basis.dim() {
            let (n1, n2) = basis.occupations(k).unwrap();
            assert_eq!(basis.index(n1, n2).unwrap(), k);
        }
        for n1 in 0..=3 {
            for n2 in 0..=3 {
                let k = basis.index(n1, n2).unwrap();
                assert_eq!(basis.occupations(k).unwrap(), (n1, n2));
            }
        }
        assert!(basis.occupations(16).is_err());
    }

    #[test]
    fn annihilator_ladder_elements() {
        let basis = FockBasis::new(3);
        let a1 = annihilator(basis, Mode::One);
        let a2 = annihilator(basis, Mode::Two);
        // ⟨(0,0)| a1 |(1,0)⟩ = √1
        let e = a1.element((0, 0), (1, 0)).unwrap();
        assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        // ⟨(0,1)| a2 |(0,2)⟩ = √2
        let e = a2.element((0, 1), (0, 2)).unwrap();
        assert!((e - Complex64::new(2.0f64.sqrt(), 0.0)).norm() < 1e-15);
        // a annihilates the vacuum of its own mode
        let e = a1.element((0, 0), (0, 1)).unwrap();
        assert_eq!(e, ZERO);
    }

    #[test]
    fn canonical_commutator_holds_below_top_shell() {
        let basis = FockBasis::new(4);
        for mode in Mode::BOTH {
            let a = annihilator(basis, mode);
            let c = commutator(a.matrix(), a.adjoint().matrix());
            for (k, (n1, n2)) in basis.iter_occupations().enumerate() {
                let n_mode = match mode {
                    Mode::One => n1,
                    Mode::Two => n2,
                };
                let expected = if n_mode < basis.m_cut() {
                    1.0
                } else {
                    // truncation defect at the top shell: aa†|m⟩ = 0
                    -(basis.m_cut() as f64)
                };
                assert!((c[[k, k]] - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
            // off-diagonal entries vanish everywhere
            for i in 0..basis.dim() {
                for j in 0..basis.dim() {
                    if i != j {
                        assert!(c[[i, j]].norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn operators_on_distinct_modes_commute() {
        let basis = FockBasis::new(3);
        let ops1 = [
            annihilator(basis, Mode::One),
            creator(basis, Mode::One),
            number_op(basis, Mode::One),
        ];
        let ops2 = [
            annihilator(basis, Mode::Two),
            creator(basis, Mode::Two),
            number_op(basis, Mode::Two),
        ];
        for m1 in &ops1 {
            for m2 in &ops2 {
                let c = commutator(m1.matrix(), m2.matrix());
                let max = c.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
                assert!(max <= 1e-12, "cross-mode commutator defect {max}");
            }
        }
    }

    #[test]
    fn number_operator_has_exact_integer_diagonal() {
        let basis = FockBasis::new(5);
        let n1 = number_op(basis, Mode::One);
        let n2 = number_op(basis, Mode::Two);
        for (k, (occ1, occ2)) in basis.iter_occupations().enumerate() {
            assert_eq!(n1.matrix()[[k, k]], Complex64::new(occ1 as f64, 0.0));
            assert_eq!(n2.matrix()[[k, k]], Complex64::new(occ2 as f64, 0.0));
        }
        let e = n1.element((2, 0), (2, 0)).unwrap();
        assert_eq!(e, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn vacuum_quadrature_variance_is_half() {
        let basis = FockBasis::new(6);
        let (x, _) = quadrature_ops(basis, Mode::One);
        let x2 = x.matrix().dot(x.matrix());
        let k = basis.index(0, 0).unwrap();
        assert!((x2[[k, k]] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn quadrature_commutator_is_i_on_interior() {
        let basis = FockBasis::new(5);
        for mode in Mode::BOTH {
            let (x, p) = quadrature_ops(basis, mode);
            let c = commutator(x.matrix(), p.matrix());
            for (k, (n1, n2)) in basis.iter_occupations().enumerate() {
                let n_mode = match mode {
                    Mode::One => n1,
                    Mode::Two => n2,
                };
                if n_mode < basis.m_cut() {
                    assert!(
                        (c[[k, k]] - Complex64::new(0.0, 1.0)).norm() < 1e-12,
                        "[x,p] != i at occupation {n_mode}"
                    );
                }
            }
        }
    }

    #[test]
    fn hermitian_flag_rejects_asymmetric_matrices() {
        let basis = FockBasis::new(1);
        let mut m = Array2::from_elem((4, 4), ZERO);
        m[[0, 1]] = Complex64::new(1.0, 0.0);
        match Operator::hermitian(m, basis) {
            Err(Error::NotHermitian { defect }) => assert!(defect > 0.9),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn embed_rejects_wrong_shapes() {
        let basis = FockBasis::new(2);
        let wrong = Array2::from_elem((2, 2), ZERO);
        assert!(embed(&wrong, Mode::One, basis).is_err());
    }
}
