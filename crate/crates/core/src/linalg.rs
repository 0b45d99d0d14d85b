//! Dense complex linear algebra kernel: spectral factorization, polar
//! decomposition, Hermitian matrix roots, norms, and invertibility margins.
//!
//! Everything here is pure; matrices are dense `nalgebra` storage over
//! `Complex64`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Inner product with the convention of being linear in the first argument
/// and conjugate-linear in the second: `⟨x, y⟩ = Σ xᵢ · conj(yᵢ)`.
pub fn inner(x: &CVector, y: &CVector) -> Complex64 {
    y.dotc(x)
}

/// Tolerances shared by every numerical identity check.
///
/// `identity_tol` absorbs rounding error in identities that are exact in
/// exact arithmetic. The effective rank tolerance scales with the operator
/// norm of the matrix under test: `rank_tol(‖T‖) = rank_tol_factor · ‖T‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub identity_tol: f64,
    pub rank_tol_factor: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            identity_tol: 1e-10,
            rank_tol_factor: 1e-12,
        }
    }
}

impl TolerancePolicy {
    pub fn new(identity_tol: f64, rank_tol_factor: f64) -> Result<Self> {
        if !(identity_tol > 0.0) || !(rank_tol_factor > 0.0) {
            return Err(Error::InvalidInput(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(Self {
            identity_tol,
            rank_tol_factor,
        })
    }

    /// Effective rank tolerance for a matrix of the given operator norm.
    pub fn rank_tol(&self, operator_norm: f64) -> f64 {
        self.rank_tol_factor * operator_norm
    }
}

/// Full singular value decomposition `input = left · diag(σ) · right*`,
/// with `σ` sorted descending and `left`, `right` unitary.
#[derive(Debug, Clone)]
pub struct SpectralFactorization {
    pub left: CMatrix,
    pub singular_values: Vec<f64>,
    pub right: CMatrix,
}

impl SpectralFactorization {
    pub fn largest(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn smallest(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// Reassembles `left · diag(σ) · right*`.
    pub fn reassemble(&self) -> CMatrix {
        let k = self.singular_values.len();
        let mut scaled = self.left.columns(0, k).into_owned();
        for (j, s) in self.singular_values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*s);
        }
        &scaled * self.right.columns(0, k).adjoint()
    }
}

fn ensure_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput("matrix has non-finite entries".into()))
    }
}

fn ensure_nonempty(m: &CMatrix) -> Result<()> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::InvalidInput("matrix is empty".into()));
    }
    Ok(())
}

fn ensure_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeError(format!(
            "expected square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

/// Computes the full SVD. Singular values come out sorted descending.
pub fn spectral_factorize(m: &CMatrix) -> Result<SpectralFactorization> {
    ensure_nonempty(m)?;
    ensure_finite(m)?;
    let svd = m.clone().svd(true, true);
    let left = svd.u.expect("svd requested u");
    let v_t = svd.v_t.expect("svd requested v_t");
    Ok(SpectralFactorization {
        left,
        singular_values: svd.singular_values.as_slice().to_vec(),
        right: v_t.adjoint(),
    })
}

/// Largest singular value of `t`.
pub fn operator_norm(t: &CMatrix) -> Result<f64> {
    Ok(spectral_factorize(t)?.largest())
}

/// Smallest singular value of a square matrix; the caller decides
/// invertibility by comparing against the rank tolerance.
pub fn invertibility_margin(t: &CMatrix) -> Result<f64> {
    ensure_square(t)?;
    Ok(spectral_factorize(t)?.smallest())
}

/// Polar decomposition `t = w · p` with `p = (t*t)^{1/2}` Hermitian PSD.
///
/// Computed from the SVD `t = U Σ V*` as `w = U V*`, `p = V Σ V*`, so `w`
/// is unitary for every square input, including rank-deficient ones (the
/// partial isometry is completed on the kernel by the SVD's full bases).
pub fn polar_decompose(t: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    ensure_square(t)?;
    let f = spectral_factorize(t)?;
    let w = &f.left * f.right.adjoint();
    let mut scaled = f.right.clone();
    for (j, s) in f.singular_values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(*s);
    }
    let p = &scaled * f.right.adjoint();
    Ok((w, p))
}

/// Maximum entry-wise deviation of `m` from its own adjoint.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

fn check_hermitian(m: &CMatrix, policy: &TolerancePolicy) -> Result<()> {
    ensure_square(m)?;
    ensure_finite(m)?;
    let scale = m.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    let dev = hermitian_deviation(m);
    if dev > policy.identity_tol * scale {
        return Err(Error::NotHermitian { deviation: dev });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues sorted ascending,
/// columns of the returned matrix are the matching orthonormal eigenvectors.
pub fn hermitian_eigen(m: &CMatrix, policy: &TolerancePolicy) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(m, policy)?;
    // Symmetrize first so the solver sees an exactly Hermitian matrix.
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    Ok((values, vectors))
}

fn hermitian_function(
    m: &CMatrix,
    policy: &TolerancePolicy,
    f: impl Fn(f64) -> f64,
) -> Result<CMatrix> {
    let (values, q) = hermitian_eigen(m, policy)?;
    let mut scaled = q.clone();
    for (j, lambda) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(f(*lambda));
    }
    Ok(&scaled * q.adjoint())
}

/// Hermitian PSD square root: returns `r` with `r² = p`.
///
/// Eigenvalues in `[-identity_tol, 0)` are clamped to zero; anything more
/// negative is rejected as not PSD.
pub fn psd_sqrt(p: &CMatrix, policy: &TolerancePolicy) -> Result<CMatrix> {
    let (values, _) = hermitian_eigen(p, policy)?;
    let min = values.first().copied().unwrap_or(0.0);
    if min < -policy.identity_tol {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    hermitian_function(p, policy, |l| l.max(0.0).sqrt())
}

/// Inverse square root of a Hermitian positive definite matrix:
/// returns `r` with `r · s · r = I`.
pub fn pd_inv_sqrt(s: &CMatrix, policy: &TolerancePolicy) -> Result<CMatrix> {
    let (values, _) = hermitian_eigen(s, policy)?;
    let min = values.first().copied().unwrap_or(0.0);
    let max = values.last().copied().unwrap_or(0.0);
    if min <= policy.rank_tol(max.abs()) {
        return Err(Error::SingularOperator { margin: min });
    }
    hermitian_function(s, policy, |l| 1.0 / l.sqrt())
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Extends the orthonormal columns of `start` to a full orthonormal basis
/// of `C^d`, drawing completion directions first from `candidates`, then
/// from the standard basis. Returns a `d × d` unitary whose leading columns
/// are `start` unchanged.
///
/// Uses modified Gram-Schmidt with one re-orthogonalization pass; candidate
/// directions that are numerically dependent on the running basis are
/// skipped.
pub fn complete_orthonormal_basis(
    start: &[CVector],
    dim: usize,
    candidates: &[CVector],
) -> Result<CMatrix> {
    if start.len() > dim {
        return Err(Error::ShapeError(format!(
            "{} starting vectors exceed dimension {dim}",
            start.len()
        )));
    }
    let mut cols: Vec<CVector> = start.to_vec();
    for c in cols.iter() {
        if c.len() != dim {
            return Err(Error::ShapeError(format!(
                "starting vector has length {}, expected {dim}",
                c.len()
            )));
        }
    }
    let standard = (0..dim).map(|i| {
        let mut e = CVector::zeros(dim);
        e[i] = Complex64::new(1.0, 0.0);
        e
    });
    for cand in candidates.iter().cloned().chain(standard) {
        if cols.len() == dim {
            break;
        }
        if cand.len() != dim {
            return Err(Error::ShapeError(format!(
                "candidate vector has length {}, expected {dim}",
                cand.len()
            )));
        }
        let mut v = cand;
        for _ in 0..2 {
            for q in &cols {
                let coeff = inner(&v, q);
                v -= q.map(|z| z * coeff);
            }
        }
        let n = v.norm();
        if n > 1e-8 {
            v.unscale_mut(n);
            cols.push(v);
        }
    }
    if cols.len() != dim {
        return Err(Error::InvalidInput(
            "failed to complete an orthonormal basis (degenerate candidates)".into(),
        ));
    }
    Ok(CMatrix::from_columns(&cols))
}

/// Row-major serialization schema for a complex matrix:
/// `{"rows": r, "cols": c, "entries": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixManifest {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(f64, f64)>,
}

impl MatrixManifest {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push((z.re, z.im));
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::ShapeError(format!(
                "{} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        let m = CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let (re, im) = self.entries[i * self.cols + j];
            Complex64::new(re, im)
        });
        ensure_finite(&m)?;
        Ok(m)
    }
}
