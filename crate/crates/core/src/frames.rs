//! Frame and Riesz-basis algebra: frame operators, optimal bounds, canonical
//! duals, Parseval normalization, Naimark dilation, the quadratic
//! perturbation criterion, projected-energy bounds, and Riesz-sequence
//! extension.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{
    self, complete_orthonormal_basis, inner, CMatrix, CVector, TolerancePolicy,
};
use crate::random;

/// An ordered finite family of vectors in `C^dim`. The family is only
/// *asserted* to be a frame or Riesz basis by the operations that check it.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    dim: usize,
    vectors: Vec<CVector>,
}

impl Frame {
    pub fn new(dim: usize, vectors: Vec<CVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::ShapeError(format!(
                    "vector {i} has length {}, expected {dim}",
                    v.len()
                )));
            }
            if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "vector {i} has non-finite entries"
                )));
            }
        }
        Ok(Self { dim, vectors })
    }

    /// Standard orthonormal basis of `C^dim`.
    pub fn standard_basis(dim: usize) -> Self {
        let vectors = (0..dim)
            .map(|i| {
                let mut e = CVector::zeros(dim);
                e[i] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        Self { dim, vectors }
    }

    /// Frame whose vectors are the columns of `synthesis`.
    pub fn from_synthesis(synthesis: &CMatrix) -> Self {
        Self {
            dim: synthesis.nrows(),
            vectors: synthesis.column_iter().map(|c| c.into_owned()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn vector(&self, n: usize) -> &CVector {
        &self.vectors[n]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CVector> {
        self.vectors.iter()
    }
}

/// Manifest schema: `{"dim": d, "vectors": [[[re, im], ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct FrameManifest {
    dim: usize,
    vectors: Vec<Vec<(f64, f64)>>,
}

impl Serialize for Frame {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let manifest = FrameManifest {
            dim: self.dim,
            vectors: self
                .vectors
                .iter()
                .map(|v| v.iter().map(|z| (z.re, z.im)).collect())
                .collect(),
        };
        manifest.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Frame {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let manifest = FrameManifest::deserialize(deserializer)?;
        let vectors = manifest
            .vectors
            .into_iter()
            .map(|entries| {
                CVector::from_vec(
                    entries
                        .into_iter()
                        .map(|(re, im)| Complex64::new(re, im))
                        .collect(),
                )
            })
            .collect();
        Frame::new(manifest.dim, vectors).map_err(D::Error::custom)
    }
}

/// Optimal frame bounds: extreme eigenvalues of the frame operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Result of `is_riesz_basis`: the verdict plus the smallest singular value
/// of the synthesis operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszCheck {
    pub is_riesz_basis: bool,
    pub margin: f64,
}

/// Naimark dilation of a Parseval frame: an orthonormal basis of `C^N`
/// whose first `embedding_dim` coordinates reproduce the frame vectors.
#[derive(Debug, Clone)]
pub struct DilationResult {
    pub ambient_dim: usize,
    pub basis: Frame,
    pub embedding_dim: usize,
}

fn ensure_nonempty(f: &Frame) -> Result<()> {
    if f.is_empty() {
        return Err(Error::InvalidInput("frame has no vectors".into()));
    }
    Ok(())
}

/// `dim × N` matrix whose `n`-th column is the `n`-th frame vector.
pub fn synthesis_matrix(f: &Frame) -> CMatrix {
    if f.is_empty() {
        return CMatrix::zeros(f.dim(), 0);
    }
    CMatrix::from_columns(&f.vectors)
}

/// Frame operator `S = Σ xₙ xₙ*` as a `dim × dim` Hermitian PSD matrix.
pub fn frame_operator(f: &Frame) -> Result<CMatrix> {
    ensure_nonempty(f)?;
    let a = synthesis_matrix(f);
    Ok(&a * a.adjoint())
}

/// Optimal frame bounds: the extreme eigenvalues of the frame operator.
/// Fails with `NotAFrame` when the family does not span.
pub fn frame_bounds(f: &Frame, policy: &TolerancePolicy) -> Result<FrameBounds> {
    let s = frame_operator(f)?;
    let (values, _) = linalg::hermitian_eigen(&s, policy)?;
    let lower = values.first().copied().unwrap_or(0.0);
    let upper = values.last().copied().unwrap_or(0.0);
    if lower <= policy.rank_tol(upper.abs()) {
        return Err(Error::NotAFrame { margin: lower });
    }
    Ok(FrameBounds { lower, upper })
}

fn frame_operator_inverse(f: &Frame, policy: &TolerancePolicy) -> Result<CMatrix> {
    let s = frame_operator(f)?;
    let (values, q) = linalg::hermitian_eigen(&s, policy)?;
    let lower = values.first().copied().unwrap_or(0.0);
    let upper = values.last().copied().unwrap_or(0.0);
    if lower <= policy.rank_tol(upper.abs()) {
        return Err(Error::NotAFrame { margin: lower });
    }
    let mut scaled = q.clone();
    for (j, lambda) in values.iter().enumerate() {
        scaled.column_mut(j).scale_mut(1.0 / lambda);
    }
    Ok(&scaled * q.adjoint())
}

/// Canonical dual frame `{S⁻¹ xₙ}`.
pub fn canonical_dual(f: &Frame, policy: &TolerancePolicy) -> Result<Frame> {
    let s_inv = frame_operator_inverse(f, policy)?;
    Frame::new(f.dim(), f.iter().map(|x| &s_inv * x).collect())
}

/// Parseval normalization `{S^{-1/2} xₙ}`; the output frame operator is the
/// identity within tolerance.
pub fn parseval_normalize(f: &Frame, policy: &TolerancePolicy) -> Result<Frame> {
    let s = frame_operator(f)?;
    let r = linalg::pd_inv_sqrt(&s, policy).map_err(|e| match e {
        Error::SingularOperator { margin } => Error::NotAFrame { margin },
        other => other,
    })?;
    Frame::new(f.dim(), f.iter().map(|x| &r * x).collect())
}

/// Frame expansion `Σₙ ⟨x, dₙ⟩ xₙ` of `x` through the dual family `d`.
pub fn reconstruct(f: &Frame, dual: &Frame, x: &CVector) -> Result<CVector> {
    if f.dim() != dual.dim() || f.len() != dual.len() {
        return Err(Error::ShapeError(format!(
            "frame ({}, {}) and dual ({}, {}) differ",
            f.dim(),
            f.len(),
            dual.dim(),
            dual.len()
        )));
    }
    if x.len() != f.dim() {
        return Err(Error::ShapeError(format!(
            "vector length {} does not match dimension {}",
            x.len(),
            f.dim()
        )));
    }
    let mut acc = CVector::zeros(f.dim());
    for (xv, dv) in f.iter().zip(dual.iter()) {
        acc += xv.map(|z| z * inner(x, dv));
    }
    Ok(acc)
}

/// A family is a Riesz basis iff it is square (`N = dim`) and its synthesis
/// operator is invertible within the rank tolerance. Degenerate inputs
/// return `false` rather than an error.
pub fn is_riesz_basis(f: &Frame, policy: &TolerancePolicy) -> RieszCheck {
    if f.is_empty() {
        return RieszCheck {
            is_riesz_basis: false,
            margin: 0.0,
        };
    }
    let a = synthesis_matrix(f);
    let fact = match linalg::spectral_factorize(&a) {
        Ok(fact) => fact,
        Err(_) => {
            return RieszCheck {
                is_riesz_basis: false,
                margin: 0.0,
            }
        }
    };
    let margin = fact.smallest();
    let square = f.len() == f.dim();
    RieszCheck {
        is_riesz_basis: square && margin > policy.rank_tol(fact.largest()),
        margin,
    }
}

/// Biorthogonal dual basis of a Riesz basis: the columns of the
/// inverse-adjoint of the synthesis matrix. Coincides with the canonical
/// dual on Riesz bases.
pub fn dual_basis(e: &Frame, policy: &TolerancePolicy) -> Result<Frame> {
    let check = is_riesz_basis(e, policy);
    if !check.is_riesz_basis {
        return Err(Error::NotRieszBasis {
            margin: check.margin,
        });
    }
    let a = synthesis_matrix(e);
    let inv = a
        .clone()
        .try_inverse()
        .ok_or(Error::NotRieszBasis {
            margin: check.margin,
        })?;
    Ok(Frame::from_synthesis(&inv.adjoint()))
}

/// Naimark dilation with the library's fixed completion seed.
pub fn naimark_dilate(f: &Frame, policy: &TolerancePolicy) -> Result<DilationResult> {
    naimark_dilate_with_seed(f, policy, random::DEFAULT_SEED)
}

/// Dilates a Parseval frame of `N` vectors in `C^d` to an orthonormal basis
/// of `C^N` whose first `d` coordinates reproduce the frame exactly.
///
/// The transposed synthesis matrix has orthonormal columns for a Parseval
/// frame; it is completed to an `N × N` unitary by orthonormalizing seeded
/// random directions against it. Basis vector `n` is row `n` of that
/// unitary.
pub fn naimark_dilate_with_seed(
    f: &Frame,
    policy: &TolerancePolicy,
    seed: u64,
) -> Result<DilationResult> {
    ensure_nonempty(f)?;
    let d = f.dim();
    let n = f.len();
    if n < d {
        return Err(Error::ShapeError(format!(
            "cannot dilate {n} vectors in dimension {d}"
        )));
    }
    let s = frame_operator(f)?;
    let deviation = (s - linalg::identity(d)).norm();
    if deviation > policy.identity_tol {
        return Err(Error::NotParseval { deviation });
    }
    let transposed = synthesis_matrix(f).transpose(); // N × d, orthonormal columns
    let start: Vec<CVector> = transposed.column_iter().map(|c| c.into_owned()).collect();
    let mut rng = random::rng(seed);
    let candidates: Vec<CVector> = (0..n - d)
        .map(|_| random::gaussian_vector(n, &mut rng))
        .collect();
    let completed = complete_orthonormal_basis(&start, n, &candidates)?;
    let basis = Frame::new(
        n,
        (0..n)
            .map(|row| completed.row(row).transpose())
            .collect::<Vec<_>>(),
    )?;
    Ok(DilationResult {
        ambient_dim: n,
        basis,
        embedding_dim: d,
    })
}

/// Image family `{T eₙ}`; a frame exactly when `T` is surjective.
pub fn frame_from_operator(t: &CMatrix, e: &Frame) -> Result<Frame> {
    if t.ncols() != e.dim() {
        return Err(Error::ShapeError(format!(
            "operator is {}x{} but frame has dimension {}",
            t.nrows(),
            t.ncols(),
            e.dim()
        )));
    }
    Frame::new(t.nrows(), e.iter().map(|v| t * v).collect())
}

/// Quadratic perturbation criterion: if `Σ ‖eₙ - xₙ‖² < A` with `A` the
/// lower bound of the Riesz basis `e`, then `x` is a Riesz basis. Returns
/// whether the hypothesis holds; `true` certifies the conclusion.
pub fn riesz_perturbation_check(e: &Frame, x: &Frame, policy: &TolerancePolicy) -> Result<bool> {
    if e.dim() != x.dim() || e.len() != x.len() {
        return Err(Error::ShapeError(format!(
            "families ({}, {}) and ({}, {}) differ",
            e.dim(),
            e.len(),
            x.dim(),
            x.len()
        )));
    }
    let check = is_riesz_basis(e, policy);
    if !check.is_riesz_basis {
        return Err(Error::NotRieszBasis {
            margin: check.margin,
        });
    }
    let bounds = frame_bounds(e, policy)?;
    let sum: f64 = e
        .iter()
        .zip(x.iter())
        .map(|(ev, xv)| (ev - xv).norm_squared())
        .sum();
    Ok(sum < bounds.lower)
}

/// Energy of a frame under orthogonal projection onto a subspace, with the
/// bound `B · dim(S)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBound {
    pub energy: f64,
    pub bound: f64,
}

/// Computes `Σₙ ‖P_S xₙ‖²` for the subspace spanned by the given orthonormal
/// list, together with the bound `B · dim(S)`.
pub fn projected_energy_bound(
    f: &Frame,
    subspace: &[CVector],
    policy: &TolerancePolicy,
) -> Result<EnergyBound> {
    if subspace.is_empty() {
        return Err(Error::InvalidSubspace("empty spanning list".into()));
    }
    for v in subspace {
        if v.len() != f.dim() {
            return Err(Error::InvalidSubspace(format!(
                "subspace vector has length {}, expected {}",
                v.len(),
                f.dim()
            )));
        }
    }
    for (i, a) in subspace.iter().enumerate() {
        for (j, b) in subspace.iter().enumerate() {
            let g = inner(a, b);
            let target = if i == j { 1.0 } else { 0.0 };
            if (g - Complex64::new(target, 0.0)).norm() > policy.identity_tol * 10.0 {
                return Err(Error::InvalidSubspace(format!(
                    "spanning list is not orthonormal at pair ({i}, {j})"
                )));
            }
        }
    }
    let bounds = frame_bounds(f, policy)?;
    let energy: f64 = f
        .iter()
        .map(|x| {
            subspace
                .iter()
                .map(|s| inner(x, s).norm_sqr())
                .sum::<f64>()
        })
        .sum();
    Ok(EnergyBound {
        energy,
        bound: bounds.upper * subspace.len() as f64,
    })
}

/// Extends a Riesz sequence spanning a proper subspace to a Riesz basis of
/// the full space. The output keeps the input vectors as its last block and
/// prepends an orthonormal basis of the orthogonal complement of their span.
pub fn extend_riesz_sequence(z: &Frame, policy: &TolerancePolicy) -> Result<Frame> {
    ensure_nonempty(z)?;
    let d = z.dim();
    let m = z.len();
    if m >= d {
        return Err(Error::ShapeError(format!(
            "{m} vectors cannot span a proper subspace of dimension {d}"
        )));
    }
    let a = synthesis_matrix(z);
    let gram = a.adjoint() * &a;
    let (values, _) = linalg::hermitian_eigen(&gram, policy)?;
    let min = values.first().copied().unwrap_or(0.0);
    let max = values.last().copied().unwrap_or(0.0);
    if min <= policy.rank_tol(max.abs()) {
        return Err(Error::NotRieszSequence { margin: min });
    }
    // Orthonormalize the span, then complete with standard-basis directions;
    // the completion columns beyond the span are the complement basis.
    let span_cols = orthonormalize_columns(&a)?;
    let full = complete_orthonormal_basis(&span_cols, d, &[])?;
    let mut vectors: Vec<CVector> = (span_cols.len()..d)
        .map(|j| full.column(j).into_owned())
        .collect();
    vectors.extend(z.iter().cloned());
    Frame::new(d, vectors)
}

/// Modified Gram-Schmidt over the columns of `a`, dropping numerically
/// dependent directions.
fn orthonormalize_columns(a: &CMatrix) -> Result<Vec<CVector>> {
    let mut cols: Vec<CVector> = Vec::new();
    for j in 0..a.ncols() {
        let mut v = a.column(j).into_owned();
        let original = v.norm();
        for _ in 0..2 {
            for q in &cols {
                let coeff = inner(&v, q);
                v -= q.map(|z| z * coeff);
            }
        }
        if v.norm() > 1e-10 * original.max(1.0) {
            let n = v.norm();
            v.unscale_mut(n);
            cols.push(v);
        }
    }
    Ok(cols)
}
