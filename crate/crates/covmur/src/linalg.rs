//! Dense complex-matrix substrate: Hermitian operators, spectra, positivity,
//! and conjugation by (anti)unitaries.
//!
//! Everything downstream — effects, states, group representations, distance
//! evaluators — is built on the two validated types here:
//!
//! - [`HermitianOperator`]: a self-adjoint matrix, hermitised and checked at
//!   construction, with eigenvalue queries backed by a dense Hermitian
//!   eigendecomposition.
//! - [`DensityOperator`]: a positive, trace-one Hermitian operator.
//!
//! Symmetry operations act by conjugation. Following Wigner's classification
//! they are either unitary, `A ↦ U†AU`, or antiunitary, `A ↦ U†ĀU` where `Ā`
//! is the entrywise complex conjugate in the computational basis.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{CovmurError, Result};
use crate::tol;

/// Complex double-precision scalar.
pub type C64 = Complex<f64>;
/// Dense dynamically-sized complex matrix.
pub type CMat = DMatrix<C64>;

/// The `dim × dim` identity matrix.
pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

/// The `dim × dim` zero matrix.
pub fn zeros(dim: usize) -> CMat {
    CMat::zeros(dim, dim)
}

/// Largest entrywise modulus, `max_{ij} |M_ij|`.
pub fn max_abs_entry(m: &CMat) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Hermiticity defect `max |M - M†|` (entrywise).
pub fn hermiticity_defect(m: &CMat) -> f64 {
    max_abs_entry(&(m - m.adjoint()))
}

/// Unitarity defect `max |U†U - I|` (entrywise).
pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    max_abs_entry(&(u.adjoint() * u - identity(n)))
}

/// Real scalar as a complex number.
pub fn cr(x: f64) -> C64 {
    Complex::new(x, 0.0)
}

/// A validated self-adjoint complex matrix.
///
/// Construction checks the hermiticity defect against [`tol::HERMITICITY`]
/// and stores the hermitised part `(M + M†)/2`, so eigenvalues of the stored
/// matrix are real by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    mat: CMat,
}

impl HermitianOperator {
    /// Validate and wrap a matrix. Fails if it is non-square or its
    /// hermiticity defect exceeds [`tol::HERMITICITY`].
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(CovmurError::DimensionMismatch {
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        let defect = hermiticity_defect(&mat);
        if !(defect <= tol::HERMITICITY) {
            return Err(CovmurError::NotHermitian {
                defect,
                tol: tol::HERMITICITY,
            });
        }
        Ok(Self::wrap(mat))
    }

    /// Wrap without a defect check; used internally where hermiticity is
    /// guaranteed by algebra (sums, real scalings, conjugations of Hermitian
    /// inputs). Still hermitises to keep rounding from accumulating.
    pub(crate) fn wrap(mat: CMat) -> Self {
        let herm = (&mat + mat.adjoint()) * cr(0.5);
        Self { mat: herm }
    }

    /// Zero operator.
    pub fn zero(dim: usize) -> Self {
        Self { mat: zeros(dim) }
    }

    /// Identity operator.
    pub fn identity(dim: usize) -> Self {
        Self { mat: identity(dim) }
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut eigs: Vec<f64> = self
            .mat
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).expect("real eigenvalues"));
        eigs
    }

    /// Ascending eigenvalues together with matching eigenvector columns.
    pub fn eigen_pairs(&self) -> (Vec<f64>, CMat) {
        let se = self.mat.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| {
            se.eigenvalues[i]
                .partial_cmp(&se.eigenvalues[j])
                .expect("real eigenvalues")
        });
        let eigs: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let vecs = CMat::from_fn(self.dim(), self.dim(), |r, c| se.eigenvectors[(r, order[c])]);
        (eigs, vecs)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        *self
            .eigenvalues()
            .first()
            .expect("operators are at least 1×1")
    }

    /// Largest eigenvalue.
    pub fn max_eigenvalue(&self) -> f64 {
        *self
            .eigenvalues()
            .last()
            .expect("operators are at least 1×1")
    }

    /// Operator norm: largest |eigenvalue|.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues()
            .iter()
            .map(|l| l.abs())
            .fold(0.0, f64::max)
    }

    /// Positive semidefiniteness test: min eigenvalue ≥ -tol.
    pub fn is_positive(&self, tolerance: f64) -> bool {
        self.min_eigenvalue() >= -tolerance
    }

    /// Trace (real for Hermitian operators).
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Conjugation by a symmetry operation: `U†AU`, or `U†ĀU` when
    /// `antiunitary` is set. Fails if `u` is not unitary within
    /// [`tol::UNITARITY`] or sizes do not match.
    pub fn conjugate(&self, u: &CMat, antiunitary: bool) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(CovmurError::DimensionMismatch {
                expected: self.dim(),
                got: u.nrows(),
            });
        }
        let defect = unitarity_defect(u);
        if !(defect <= tol::UNITARITY) {
            return Err(CovmurError::NotUnitary {
                defect,
                tol: tol::UNITARITY,
            });
        }
        let base = if antiunitary {
            self.mat.conjugate()
        } else {
            self.mat.clone()
        };
        Ok(Self::wrap(u.adjoint() * base * u))
    }

    /// Expectation value `tr(Aρ)` (real part; the imaginary part vanishes
    /// for Hermitian `A` and `ρ`).
    pub fn expectation(&self, rho: &DensityOperator) -> f64 {
        (self.mat.clone() * rho.operator().matrix()).trace().re
    }

    /// `self + other`.
    pub fn add(&self, other: &Self) -> Self {
        Self::wrap(&self.mat + &other.mat)
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Self {
        Self::wrap(&self.mat - &other.mat)
    }

    /// `self · s` for a real scalar.
    pub fn scale(&self, s: f64) -> Self {
        Self::wrap(&self.mat * cr(s))
    }

    /// Largest entrywise |self - other|.
    pub fn entry_distance(&self, other: &Self) -> f64 {
        max_abs_entry(&(&self.mat - &other.mat))
    }

    /// `M^{-1/2}` for a strictly positive operator, via eigendecomposition.
    /// Fails with [`CovmurError::NotPositive`] if any eigenvalue is ≤ floor.
    pub fn inverse_sqrt(&self, floor: f64) -> Result<CMat> {
        let (eigs, vecs) = self.eigen_pairs();
        if eigs[0] <= floor {
            return Err(CovmurError::NotPositive {
                min_eigenvalue: eigs[0],
            });
        }
        let diag = CMat::from_fn(self.dim(), self.dim(), |r, c| {
            if r == c {
                cr(1.0 / eigs[r].sqrt())
            } else {
                cr(0.0)
            }
        });
        Ok(&vecs * diag * vecs.adjoint())
    }
}

/// A positive, trace-one Hermitian operator (a quantum state).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
}

impl DensityOperator {
    /// Validate positivity (min eigenvalue ≥ -[`tol::DENSITY_POSITIVITY`])
    /// and unit trace (within [`tol::TRACE_ONE`]).
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let min_eig = op.min_eigenvalue();
        if min_eig < -tol::DENSITY_POSITIVITY {
            return Err(CovmurError::NotPositive {
                min_eigenvalue: min_eig,
            });
        }
        let trace = op.trace();
        if (trace - 1.0).abs() > tol::TRACE_ONE {
            return Err(CovmurError::TraceNotOne { trace });
        }
        Ok(Self { op })
    }

    /// Pure state |ψ⟩⟨ψ| from a (not necessarily normalised) vector.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let norm_sq: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(CovmurError::Domain(
                "pure state requires a nonzero vector".into(),
            ));
        }
        let dim = psi.len();
        let mat = CMat::from_fn(dim, dim, |r, c| psi[r] * psi[c].conj() / cr(norm_sq));
        Self::new(HermitianOperator::wrap(mat))
    }

    /// The maximally mixed state I/dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    /// Underlying Hermitian operator.
    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.op.dim()
    }
}
