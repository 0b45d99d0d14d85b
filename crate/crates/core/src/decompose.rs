//! Constructive operator decompositions: splitting a contractive isomorphism
//! into two unitaries, writing an arbitrary operator as a scalar multiple of
//! a unitary plus a topological isomorphism, and turning a square Bessel
//! system into a sum of two Riesz bases.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frames::{self, Frame};
use crate::linalg::{self, CMatrix, TolerancePolicy};

/// Two unitaries averaging to the decomposed contraction: `T = (U + V) / 2`.
#[derive(Debug, Clone)]
pub struct UnitarySplit {
    pub u: CMatrix,
    pub v: CMatrix,
}

/// The triple realizing `T = a (U + S)` with `U` unitary and `S` a
/// topological isomorphism whose singular values lie in `[1/2, 5/2]`.
#[derive(Debug, Clone)]
pub struct CasazzaDecomposition {
    pub a: f64,
    pub u: CMatrix,
    pub s: CMatrix,
    pub epsilon: f64,
}

/// Two Riesz bases summing vector-wise to the decomposed family. `scale` is
/// the multiple `a`; the Gram matrix of `y` equals `scale² · I`.
#[derive(Debug, Clone)]
pub struct RieszPair {
    pub y: Frame,
    pub z: Frame,
    pub scale: f64,
}

pub const DEFAULT_EPSILON: f64 = 0.5;

/// Splits a contractive topological isomorphism into two unitaries:
/// `T = (U + V) / 2`.
///
/// Steps: polar `T = WP`, then `Q = (I - P²)^{1/2}` and `V' = P + iQ`, which
/// is unitary because `Q` commutes with `P`; the result is `(WV', WV'*)`.
/// Inputs with norm inside `(1, 1 + identity_tol]` are rescaled to norm one
/// so that rounding from upstream normalization cannot trip the
/// precondition.
pub fn unitary_split(t: &CMatrix, policy: &TolerancePolicy) -> Result<UnitarySplit> {
    if t.nrows() != t.ncols() {
        return Err(Error::ShapeError(format!(
            "expected square matrix, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    let fact = linalg::spectral_factorize(t)?;
    let norm = fact.largest();
    if norm > 1.0 + policy.identity_tol {
        return Err(Error::NormTooLarge { norm });
    }
    let margin = fact.smallest();
    if margin <= policy.rank_tol(norm) {
        return Err(Error::NotIsomorphism { margin });
    }
    let scaled;
    let t = if norm > 1.0 {
        scaled = t.unscale(norm);
        &scaled
    } else {
        t
    };

    let (w, p) = linalg::polar_decompose(t)?;
    let i = linalg::identity(t.nrows());
    let q = linalg::psd_sqrt(&(&i - &p * &p), policy)?;
    let v_prime = &p + q.map(|z| z * Complex64::i());
    Ok(UnitarySplit {
        u: &w * &v_prime,
        v: &w * v_prime.adjoint(),
    })
}

/// Decomposes an arbitrary square operator as `T = a (U + S)`.
///
/// Steps: `W = (3/4) I + ((1-ε)/4) T/‖T‖`, split `W = (U + V)/2`, then
/// `a = 2‖T‖/(1-ε)` and `S = V - (3/2) I`. Since `V` is unitary, the
/// singular values of `S` lie in `[1/2, 5/2]`, so `S` is always a
/// topological isomorphism. The zero operator takes the degenerate branch
/// `a = 0`, `U = S = I`.
pub fn casazza_decompose(
    t: &CMatrix,
    epsilon: f64,
    policy: &TolerancePolicy,
) -> Result<CasazzaDecomposition> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon { epsilon });
    }
    if t.nrows() != t.ncols() {
        return Err(Error::ShapeError(format!(
            "expected square matrix, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    let norm = linalg::operator_norm(t)?;
    let dim = t.nrows();
    let i = linalg::identity(dim);
    if norm == 0.0 {
        return Ok(CasazzaDecomposition {
            a: 0.0,
            u: i.clone(),
            s: i,
            epsilon,
        });
    }
    let w = i.scale(0.75) + t.unscale(norm).scale((1.0 - epsilon) / 4.0);
    let split = unitary_split(&w, policy)?;
    let a = 2.0 * norm / (1.0 - epsilon);
    let s = &split.v - i.scale(1.5);
    Ok(CasazzaDecomposition {
        a,
        u: split.u,
        s,
        epsilon,
    })
}

/// Writes a square Bessel family `{xₙ}` as `xₙ = yₙ + zₙ` with both `{yₙ}`
/// and `{zₙ}` Riesz bases.
///
/// The operator sending the standard basis to the family is decomposed as
/// `a (U + S)`; then `yₙ = a U eₙ` and `zₙ = a S eₙ`, making `{yₙ}` a
/// multiple of an orthonormal basis. The all-zero family cannot take the
/// operator route (`a = 0` would force `S = -U`, not an isomorphism), so it
/// is decomposed directly as `yₙ = eₙ/2`, `zₙ = -eₙ/2`.
pub fn bessel_to_riesz_pair(f: &Frame, policy: &TolerancePolicy) -> Result<RieszPair> {
    if f.len() != f.dim() {
        return Err(Error::ShapeError(format!(
            "need a square family, got {} vectors in dimension {}",
            f.len(),
            f.dim()
        )));
    }
    let t = frames::synthesis_matrix(f);
    let decomposition = casazza_decompose(&t, DEFAULT_EPSILON, policy)?;
    if decomposition.a == 0.0 {
        let basis = Frame::standard_basis(f.dim());
        let y = Frame::new(f.dim(), basis.iter().map(|e| e.scale(0.5)).collect())?;
        let z = Frame::new(f.dim(), basis.iter().map(|e| e.scale(-0.5)).collect())?;
        return Ok(RieszPair { y, z, scale: 0.5 });
    }
    let a = Complex64::new(decomposition.a, 0.0);
    let y = Frame::from_synthesis(&decomposition.u.map(|v| v * a));
    let z = Frame::from_synthesis(&decomposition.s.map(|v| v * a));
    Ok(RieszPair {
        y,
        z,
        scale: decomposition.a,
    })
}
