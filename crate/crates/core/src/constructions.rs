//! Generators for explicit frame and vector families, parameterized by
//! truncation budgets, with every identity that is exact at the truncation
//! verified at build time.
//!
//! The ambient space of a truncated family is `C^{n_max}`; the doubly
//! indexed families enumerate their vectors in blocks by basis index `n`,
//! then weight index `j`. Coefficient streams for growth diagnostics index
//! the full (untruncated) enumeration and are exposed in closed form, so
//! divergence ladders can outrun any truncation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::decompose::{self, RieszPair};
use crate::ell1::{self, Ell1Report};
use crate::error::{Error, Result};
use crate::frames::{self, Frame};
use crate::linalg::{self, inner, CMatrix, CVector, TolerancePolicy};
use crate::random;

/// Normalization constant `√6 / π`; the weights `(√6/π)/j` are square
/// summable to one while their plain sums grow like the harmonic series.
pub const SQRT_6_OVER_PI: f64 = 0.779_696_801_233_676;

/// Cap on the total vector count of a generated family.
pub const MAX_FAMILY_VECTORS: usize = 10_000_000;

/// Cap on the square-model dimension for decomposition-backed families.
pub const MAX_SQUARE_MODEL_DIM: usize = 2_000;

/// Families this module can generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    EmptyHf,
    NbbEmptyHf,
    PConvergent,
    HarmonicVector,
    DivergentBasis,
    IntersectionPair,
}

/// Family-specific parameters; the constructors validate which fields their
/// family requires.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
}

/// Parametric description of a frame family plus its truncation budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameFamilySpec {
    pub family: FamilyKind,
    #[serde(default)]
    pub params: FamilyParams,
    #[serde(default)]
    pub seed: u64,
}

/// A truncated family together with the named identities that were verified
/// exactly (up to rounding) at this truncation.
#[derive(Debug, Clone)]
pub struct TruncatedFamily {
    pub frame: Frame,
    pub family_meta: FrameFamilySpec,
    pub exact_identities: Vec<Check>,
}

impl TruncatedFamily {
    pub fn all_identities_hold(&self) -> bool {
        self.exact_identities.iter().all(|c| c.pass)
    }
}

/// Riesz basis engineered to give one fixed vector a divergent coefficient
/// stream, together with the unitary transport that fixes that vector.
#[derive(Debug, Clone)]
pub struct DivergentBasis {
    pub family: TruncatedFamily,
    /// Unitary `L` with `L x = x`; the returned basis is `L` applied to the
    /// reference dilation basis.
    pub transport: CMatrix,
}

/// Two Riesz bases summing to a frame with trivially intersecting summable
/// ranges, plus growth diagnostics for a coordinate probe.
#[derive(Debug, Clone)]
pub struct IntersectionPair {
    pub e: Frame,
    pub r: Frame,
    pub left_report: Ell1Report,
    pub right_e_report: Ell1Report,
    pub right_r_report: Ell1Report,
    pub checks: Vec<Check>,
}

/// Coefficient stream `scale · (√6/π) / n`, the harmonic profile shared by
/// the divergent constructions.
pub fn harmonic_stream(scale: f64) -> impl Iterator<Item = f64> {
    (1u64..).map(move |n| scale * SQRT_6_OVER_PI / n as f64)
}

/// Coefficient stream `scale · (√6/π) / n²`, a square-summable contrast.
pub fn inverse_square_stream(scale: f64) -> impl Iterator<Item = f64> {
    (1u64..).map(move |n| scale * SQRT_6_OVER_PI / (n as f64 * n as f64))
}

/// Upper bound for `ζ(s)`, `s > 1`: a partial sum plus the integral tail
/// majorant. Accurate to ~1e-12 for `s ≥ 2` and always an upper bound.
pub fn zeta_upper(s: f64) -> f64 {
    let cutoff = 10_000u64;
    let partial: f64 = (1..=cutoff).map(|n| (n as f64).powf(-s)).sum();
    partial + (cutoff as f64).powf(1.0 - s) / (s - 1.0)
}

/// Smallest integer strictly greater than `(2-p) / (4(p-1))`, the least
/// legal block exponent for the p-convergent family.
pub fn select_k(p: f64) -> Result<u32> {
    if !(p > 1.0 && p < 2.0) {
        return Err(Error::InvalidP { p });
    }
    let threshold = (2.0 - p) / (4.0 * (p - 1.0));
    Ok(threshold.floor() as u32 + 1)
}

fn standard_vector(dim: usize, i: usize) -> CVector {
    let mut e = CVector::zeros(dim);
    e[i] = Complex64::new(1.0, 0.0);
    e
}

/// Parseval frame of `Σ_{n ≤ n_max} n^{2k}` vectors in `C^{n_max}`: block
/// `n` repeats `n^{-k} eₙ` exactly `n^{2k}` times, so each block contributes
/// `eₙ eₙ*` to the frame operator and the family is Parseval at every
/// truncation.
pub fn p_convergent_frame(
    p: f64,
    n_max: usize,
    k: Option<u32>,
    policy: &TolerancePolicy,
) -> Result<TruncatedFamily> {
    let k_min = select_k(p)?;
    let k = k.unwrap_or(k_min);
    if k < k_min {
        return Err(Error::InvalidP { p });
    }
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    let mut total: u128 = 0;
    for n in 1..=n_max {
        total += (n as u128).pow(2 * k);
        if total > MAX_FAMILY_VECTORS as u128 {
            return Err(Error::BudgetTooLarge {
                requested: total as usize,
                max: MAX_FAMILY_VECTORS,
            });
        }
    }

    let mut vectors = Vec::with_capacity(total as usize);
    for n in 1..=n_max {
        let weight = (n as f64).powi(-(k as i32));
        let mut v = CVector::zeros(n_max);
        v[n - 1] = Complex64::new(weight, 0.0);
        let copies = (n as u128).pow(2 * k) as usize;
        for _ in 0..copies {
            vectors.push(v.clone());
        }
    }
    let frame = Frame::new(n_max, vectors)?;

    let mut checks = Vec::new();
    let s = frames::frame_operator(&frame)?;
    checks.push(Check::le(
        "parseval",
        (s - linalg::identity(n_max)).norm(),
        1e-12,
    ));

    // Worst p-th power frame-expansion sum over seeded unit probes, against
    // the Holder bound ζ(4k(p-1)/(2-p))^{(2-p)/2} for unit vectors.
    let exponent = 4.0 * k as f64 * (p - 1.0) / (2.0 - p);
    let holder_bound = zeta_upper(exponent).powf((2.0 - p) / 2.0);
    let mut rng = random::rng(0);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let x = random::unit_vector(n_max, &mut rng);
        worst = worst.max(p_power_expansion_sum(&frame, &x, p));
    }
    checks.push(Check::le(
        "p_sum_bound",
        worst,
        holder_bound + policy.identity_tol,
    ));

    let trace: f64 = frame.iter().map(|v| v.norm_squared()).sum();
    checks.push(Check::near("trace_equals_dim", trace, n_max as f64, 1e-12));

    // Σ ‖xₙ‖^{2p} telescopes to Σ n^{-2k(p-1)}.
    let measured_2p: f64 = frame.iter().map(|v| v.norm().powf(2.0 * p)).sum();
    let expected_2p: f64 = (1..=n_max)
        .map(|n| (n as f64).powf(-2.0 * k as f64 * (p - 1.0)))
        .sum();
    checks.push(Check::near(
        "norm_power_sum",
        measured_2p,
        expected_2p,
        1e-12 * expected_2p.max(1.0),
    ));

    Ok(TruncatedFamily {
        frame,
        family_meta: FrameFamilySpec {
            family: FamilyKind::PConvergent,
            params: FamilyParams {
                p: Some(p),
                k: Some(k),
                n_max: Some(n_max),
                ..FamilyParams::default()
            },
            seed: 0,
        },
        exact_identities: checks,
    })
}

/// `Σₙ ‖⟨x, xₙ⟩ xₙ‖^p` for a self-dual (Parseval) expansion.
pub fn p_power_expansion_sum(frame: &Frame, x: &CVector, p: f64) -> f64 {
    frame
        .iter()
        .map(|v| (inner(x, v).norm() * v.norm()).powf(p))
        .sum()
}

/// Tight frame `{a_j eₙ : n ≤ n_max, j ≤ j_max}` with weights
/// `a_j = (√6/π)/j`: square sums converge (frame operator is `c·I` with
/// `c → 1`), plain sums diverge, so the summable range shrinks to zero as
/// the truncation grows. The per-basis-vector coefficient stream is
/// `harmonic_stream(1.0)`.
pub fn empty_hf_frame(n_max: usize, j_max: usize, policy: &TolerancePolicy) -> Result<TruncatedFamily> {
    if n_max == 0 || j_max == 0 {
        return Err(Error::InvalidInput("budgets must be at least 1".into()));
    }
    let weights: Vec<f64> = (1..=j_max).map(|j| SQRT_6_OVER_PI / j as f64).collect();
    let mut vectors = Vec::with_capacity(n_max * j_max);
    for n in 0..n_max {
        for w in &weights {
            let mut v = CVector::zeros(n_max);
            v[n] = Complex64::new(*w, 0.0);
            vectors.push(v);
        }
    }
    let frame = Frame::new(n_max, vectors)?;

    // Independent partial sum for the tight constant.
    let c = (6.0 / (std::f64::consts::PI * std::f64::consts::PI))
        * (1..=j_max).map(|j| 1.0 / (j as f64 * j as f64)).sum::<f64>();
    let s = frames::frame_operator(&frame)?;
    let deviation = (s - linalg::identity(n_max).scale(c)).norm();
    let checks = vec![Check::le("tight_frame", deviation, policy.identity_tol)];

    Ok(TruncatedFamily {
        frame,
        family_meta: FrameFamilySpec {
            family: FamilyKind::EmptyHf,
            params: FamilyParams {
                n_max: Some(n_max),
                j_max: Some(j_max),
                ..FamilyParams::default()
            },
            seed: 0,
        },
        exact_identities: checks,
    })
}

/// Tight-frame constant of the truncated family: `(6/π²) Σ_{j ≤ j_max} j⁻²`.
pub fn empty_hf_tight_constant(j_max: usize) -> f64 {
    (6.0 / (std::f64::consts::PI * std::f64::consts::PI))
        * (1..=j_max).map(|j| 1.0 / (j as f64 * j as f64)).sum::<f64>()
}

/// Embeds the truncated doubly-indexed family as a square system on its own
/// enumeration coordinates: the `(n, j)`-th standard vector of `C^N`
/// (`N = n_max · j_max`) is sent to `a_j eₙ` zero-padded to length `N`.
pub fn empty_hf_embedded_square(n_max: usize, j_max: usize) -> Result<Frame> {
    let n_total = n_max
        .checked_mul(j_max)
        .filter(|n| *n <= MAX_SQUARE_MODEL_DIM)
        .ok_or(Error::BudgetTooLarge {
            requested: n_max.saturating_mul(j_max),
            max: MAX_SQUARE_MODEL_DIM,
        })?;
    let mut vectors = Vec::with_capacity(n_total);
    for n in 0..n_max {
        for j in 1..=j_max {
            let mut v = CVector::zeros(n_total);
            v[n] = Complex64::new(SQRT_6_OVER_PI / j as f64, 0.0);
            vectors.push(v);
        }
    }
    Frame::new(n_total, vectors)
}

/// Norm-bounded-below frame with the same vanishing summable range: the
/// enumeration `{yₙ} ∪ {zₙ}` of the two Riesz bases that sum to the
/// embedded family.
pub fn nbb_empty_hf_frame(
    n_max: usize,
    j_max: usize,
    policy: &TolerancePolicy,
) -> Result<TruncatedFamily> {
    let embedded = empty_hf_embedded_square(n_max, j_max)?;
    let pair = decompose::bessel_to_riesz_pair(&embedded, policy)?;
    let n_total = embedded.dim();

    let mut vectors = Vec::with_capacity(2 * n_total);
    vectors.extend(pair.y.iter().cloned());
    vectors.extend(pair.z.iter().cloned());
    let union = Frame::new(n_total, vectors)?;

    let mut checks = Vec::new();
    // Riesz bases have no short vectors: every norm is at least a/2 here
    // (y-vectors have norm a, z-vectors at least a·σ_min(S) ≥ a/2).
    let min_norm = union.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    checks.push(Check::le(
        "norm_bounded_below",
        pair.scale * 0.5 - min_norm,
        policy.identity_tol,
    ));

    // Triangle comparison ‖x‖₁,orig ≤ ‖x‖₁,union on seeded probes.
    let mut rng = random::rng(1);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..20 {
        let x = random::gaussian_vector(n_total, &mut rng);
        let lhs = ell1::ell1_norm(&x, &embedded)?;
        let rhs = ell1::ell1_norm(&x, &union)?;
        worst = worst.max(lhs - rhs);
    }
    checks.push(Check::le("triangle_ell1", worst, 1e-10));

    // The union contains a Riesz basis, so it passes the frame test.
    let bounds = frames::frame_bounds(&union, policy)?;
    checks.push(Check::le(
        "union_frame_lower_bound",
        policy.rank_tol(bounds.upper) - bounds.lower,
        0.0,
    ));

    Ok(TruncatedFamily {
        frame: union,
        family_meta: FrameFamilySpec {
            family: FamilyKind::NbbEmptyHf,
            params: FamilyParams {
                n_max: Some(n_max),
                j_max: Some(j_max),
                ..FamilyParams::default()
            },
            seed: 0,
        },
        exact_identities: checks,
    })
}

/// Truncation of the unit vector `y₀ = (√6/π) Σ (1/n) eₙ`.
pub fn harmonic_vector(n_max: usize) -> Result<CVector> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    Ok(CVector::from_fn(n_max, |i, _| {
        Complex64::new(SQRT_6_OVER_PI / (i + 1) as f64, 0.0)
    }))
}

/// Builds a Riesz basis of `C^budget` whose coefficient stream against `x`
/// is exactly `‖x‖ (√6/π)/n`, so the l1-norm of `x` grows without bound
/// along the basis enumeration, together with the unitary transport fixing
/// `x`.
///
/// Model: embed `x` (zero-padded) with unit direction `u`; the rank-one
/// frame `{aₙ u}` is completed to a Riesz basis by placing the weight
/// column alongside an orthonormal basis of its complement, and the
/// transport swaps one seeded orthonormal basis of `u^⊥` for another while
/// leaving `span{x}` pointwise fixed.
pub fn divergent_basis_for_vector(x: &CVector, budget: usize, seed: u64) -> Result<DivergentBasis> {
    let norm_x = x.norm();
    if norm_x == 0.0 {
        return Err(Error::ZeroVector);
    }
    if budget < x.len() {
        return Err(Error::ShapeError(format!(
            "budget {budget} is smaller than the vector dimension {}",
            x.len()
        )));
    }
    if budget > MAX_SQUARE_MODEL_DIM {
        return Err(Error::BudgetTooLarge {
            requested: budget,
            max: MAX_SQUARE_MODEL_DIM,
        });
    }
    let b = budget;
    let mut padded = CVector::zeros(b);
    padded.rows_mut(0, x.len()).copy_from(x);
    let u = padded.unscale(norm_x);

    let weights = CVector::from_fn(b, |i, _| {
        Complex64::new(SQRT_6_OVER_PI / (i + 1) as f64, 0.0)
    });
    let weight_norm = weights.norm();

    let mut rng = random::rng(seed);
    // Orthonormal complement of the weight column (coefficient side).
    let q_candidates: Vec<CVector> = (0..b - 1).map(|_| random::gaussian_vector(b, &mut rng)).collect();
    let coeff_basis =
        linalg::complete_orthonormal_basis(&[weights.unscale(weight_norm)], b, &q_candidates)?;
    // Coefficient rows [a | Q]: restore the unnormalized weight column.
    let mut coeff = coeff_basis;
    coeff.column_mut(0).copy_from(&weights);

    // Two orthonormal bases of u-perp; the transport maps one to the other.
    let z_candidates: Vec<CVector> = (0..b - 1).map(|_| random::gaussian_vector(b, &mut rng)).collect();
    let z_frame = linalg::complete_orthonormal_basis(&[u.clone()], b, &z_candidates)?;
    let y_candidates: Vec<CVector> = (0..b - 1).map(|_| random::gaussian_vector(b, &mut rng)).collect();
    let y_frame = linalg::complete_orthonormal_basis(&[u.clone()], b, &y_candidates)?;

    // Reference dilation basis: vector n expands with coefficients
    // (aₙ, Q[n, ·]) in the frame (u, z₁, …). Synthesis columns are
    // [u | Z] · coeffᵀ.
    let reference_synthesis = &z_frame * coeff.transpose();
    // Transport L = u u* + Y Z*: unitary, fixes span{x} exactly.
    let z_perp = z_frame.columns(1, b - 1);
    let y_perp = y_frame.columns(1, b - 1);
    let transport = &u * u.adjoint() + y_perp * z_perp.adjoint();
    let synthesis = &transport * reference_synthesis;
    let frame = Frame::from_synthesis(&synthesis);

    let mut checks = Vec::new();
    let mut worst_term = 0.0_f64;
    for (n, v) in frame.iter().enumerate() {
        let coeff_mag = inner(&padded, v).norm();
        let expected = norm_x * SQRT_6_OVER_PI / (n + 1) as f64;
        worst_term = worst_term.max((coeff_mag - expected).abs());
    }
    checks.push(Check::le("coefficient_stream", worst_term, 1e-12 * norm_x.max(1.0)));
    checks.push(Check::le(
        "fixes_vector",
        (&transport * &padded - &padded).norm(),
        1e-10 * norm_x.max(1.0),
    ));
    let policy = TolerancePolicy::default();
    let riesz = frames::is_riesz_basis(&frame, &policy);
    checks.push(Check::le(
        "riesz_margin",
        if riesz.is_riesz_basis { 0.0 } else { 1.0 },
        0.0,
    ));

    Ok(DivergentBasis {
        family: TruncatedFamily {
            frame,
            family_meta: FrameFamilySpec {
                family: FamilyKind::DivergentBasis,
                params: FamilyParams {
                    budget: Some(budget),
                    ..FamilyParams::default()
                },
                seed,
            },
            exact_identities: checks,
        },
        transport,
    })
}

/// Applies the Bessel-to-Riesz-pair decomposition to the embedded family,
/// producing two Riesz bases whose summable ranges can only intersect
/// trivially, with growth diagnostics for the first coordinate probe.
pub fn intersection_trivial_pair(
    n_max: usize,
    j_max: usize,
    policy: &TolerancePolicy,
) -> Result<IntersectionPair> {
    let embedded = empty_hf_embedded_square(n_max, j_max)?;
    let pair: RieszPair = decompose::bessel_to_riesz_pair(&embedded, policy)?;
    let n_total = embedded.dim();

    let mut checks = Vec::new();
    let mut worst_sum = 0.0_f64;
    for n in 0..n_total {
        let sum = pair.y.vector(n) + pair.z.vector(n);
        worst_sum = worst_sum.max((sum - embedded.vector(n)).norm());
    }
    checks.push(Check::le("sum_identity", worst_sum, 1e-10));

    // Triangle display ‖x‖₁,F ≤ ‖x‖₁,E + ‖x‖₁,R on seeded probes.
    let mut rng = random::rng(2);
    let mut worst_triangle = f64::NEG_INFINITY;
    for _ in 0..50 {
        let x = random::gaussian_vector(n_total, &mut rng);
        let lhs = ell1::ell1_norm(&x, &embedded)?;
        let rhs =
            ell1::ell1_norm(&x, &pair.y)? + ell1::ell1_norm(&x, &pair.z)?;
        worst_triangle = worst_triangle.max(lhs - rhs);
    }
    checks.push(Check::le("triangle_ell1", worst_triangle, 1e-10));

    // Growth diagnostics for the probe e₁ over budgets inside the model:
    // the probe meets block n = 1, so its stream against the embedded
    // family is the harmonic profile truncated at j_max.
    let probe = standard_vector(n_total, 0);
    let budgets = in_model_budgets(j_max.min(n_total));
    let left_stream = embedded.iter().map(|v| inner(&probe, v).norm());
    let left_report = ell1::ell1_partial_sums(left_stream, &budgets)?;
    let right_budgets = in_model_budgets(n_total);
    let e_stream = pair.y.iter().map(|v| inner(&probe, v).norm());
    let right_e_report = ell1::ell1_partial_sums(e_stream, &right_budgets)?;
    let r_stream = pair.z.iter().map(|v| inner(&probe, v).norm());
    let right_r_report = ell1::ell1_partial_sums(r_stream, &right_budgets)?;

    // Triangle forces the right-hand streams to dominate half the left one
    // at every shared budget.
    let mut worst_domination = f64::NEG_INFINITY;
    for (idx, b) in budgets.iter().enumerate() {
        let left_sum = left_report.partial_sums[idx];
        let e_sum: f64 = pair
            .y
            .iter()
            .take(*b)
            .map(|v| inner(&probe, v).norm())
            .sum();
        let r_sum: f64 = pair
            .z
            .iter()
            .take(*b)
            .map(|v| inner(&probe, v).norm())
            .sum();
        worst_domination = worst_domination.max(left_sum / 2.0 - e_sum.max(r_sum));
    }
    checks.push(Check::le("growth_domination", worst_domination, 1e-10));

    Ok(IntersectionPair {
        e: pair.y,
        r: pair.z,
        left_report,
        right_e_report,
        right_r_report,
        checks,
    })
}

/// Geometric budget ladder `{top/8, top/4, top/2, top}` clipped to valid
/// indices.
fn in_model_budgets(top: usize) -> Vec<usize> {
    let mut budgets: Vec<usize> = [top / 8, top / 4, top / 2, top]
        .into_iter()
        .filter(|b| *b >= 1)
        .collect();
    budgets.dedup();
    budgets
}

/// Unitary acting as the identity on the span of the given orthonormal list
/// and as a seeded Haar rotation on its orthogonal complement. Transporting
/// a Riesz basis through it preserves l1-norms of vectors in the fixed
/// subspace.
pub fn fixing_unitary(
    s_basis: &[CVector],
    dim_total: usize,
    seed: u64,
    policy: &TolerancePolicy,
) -> Result<CMatrix> {
    if s_basis.is_empty() {
        return Err(Error::InvalidSubspace("empty spanning list".into()));
    }
    let m = s_basis.len();
    if m > dim_total {
        return Err(Error::InvalidSubspace(format!(
            "{m} vectors cannot be orthonormal in dimension {dim_total}"
        )));
    }
    for v in s_basis {
        if v.len() != dim_total {
            return Err(Error::InvalidSubspace(format!(
                "subspace vector has length {}, expected {dim_total}",
                v.len()
            )));
        }
    }
    for (i, a) in s_basis.iter().enumerate() {
        for (j, b) in s_basis.iter().enumerate() {
            let g = inner(a, b);
            let target = if i == j { 1.0 } else { 0.0 };
            if (g - Complex64::new(target, 0.0)).norm() > policy.identity_tol * 10.0 {
                return Err(Error::InvalidSubspace(format!(
                    "spanning list is not orthonormal at pair ({i}, {j})"
                )));
            }
        }
    }
    if m == dim_total {
        return Ok(linalg::identity(dim_total));
    }
    let mut rng = random::rng(seed);
    let candidates: Vec<CVector> = (0..dim_total - m)
        .map(|_| random::gaussian_vector(dim_total, &mut rng))
        .collect();
    let full = linalg::complete_orthonormal_basis(s_basis, dim_total, &candidates)?;
    let complement = full.columns(m, dim_total - m).into_owned();
    let rotation = random::haar_unitary(dim_total - m, &mut rng);
    let s_mat = CMatrix::from_columns(s_basis);
    Ok(&s_mat * s_mat.adjoint() + &complement * rotation * complement.adjoint())
}

/// Outcome of building a family from its parametric description.
#[derive(Debug, Clone)]
pub enum BuiltFamily {
    Family(TruncatedFamily),
    Basis(DivergentBasis),
    Pair(IntersectionPair),
}

fn require(field: Option<usize>, name: &str, family: &str) -> Result<usize> {
    field.ok_or_else(|| {
        Error::InvalidInput(format!("family {family} requires parameter {name}"))
    })
}

/// Dispatches a `FrameFamilySpec` to its generator.
pub fn build_family(spec: &FrameFamilySpec, policy: &TolerancePolicy) -> Result<BuiltFamily> {
    match spec.family {
        FamilyKind::EmptyHf => {
            let n_max = require(spec.params.n_max, "n_max", "empty_hf")?;
            let j_max = require(spec.params.j_max, "j_max", "empty_hf")?;
            Ok(BuiltFamily::Family(empty_hf_frame(n_max, j_max, policy)?))
        }
        FamilyKind::NbbEmptyHf => {
            let n_max = require(spec.params.n_max, "n_max", "nbb_empty_hf")?;
            let j_max = require(spec.params.j_max, "j_max", "nbb_empty_hf")?;
            Ok(BuiltFamily::Family(nbb_empty_hf_frame(n_max, j_max, policy)?))
        }
        FamilyKind::PConvergent => {
            let p = spec.params.p.ok_or_else(|| {
                Error::InvalidInput("family p_convergent requires parameter p".into())
            })?;
            let n_max = require(spec.params.n_max, "n_max", "p_convergent")?;
            Ok(BuiltFamily::Family(p_convergent_frame(
                p,
                n_max,
                spec.params.k,
                policy,
            )?))
        }
        FamilyKind::HarmonicVector => {
            let n_max = require(spec.params.n_max, "n_max", "harmonic_vector")?;
            let y0 = harmonic_vector(n_max)?;
            let frame = Frame::new(n_max, vec![y0.clone()])?;
            // Independent zeta partial sum for the squared norm.
            let expected: f64 = (6.0 / (std::f64::consts::PI * std::f64::consts::PI))
                * (1..=n_max).map(|n| 1.0 / (n as f64 * n as f64)).sum::<f64>();
            let checks = vec![Check::near(
                "norm_squared",
                y0.norm_squared(),
                expected,
                1e-12,
            )];
            Ok(BuiltFamily::Family(TruncatedFamily {
                frame,
                family_meta: spec.clone(),
                exact_identities: checks,
            }))
        }
        FamilyKind::DivergentBasis => {
            let budget = require(spec.params.budget, "budget", "divergent_basis")?;
            let x = standard_vector(1, 0);
            Ok(BuiltFamily::Basis(divergent_basis_for_vector(
                &x, budget, spec.seed,
            )?))
        }
        FamilyKind::IntersectionPair => {
            let n_max = require(spec.params.n_max, "n_max", "intersection_pair")?;
            let j_max = require(spec.params.j_max, "j_max", "intersection_pair")?;
            Ok(BuiltFamily::Pair(intersection_trivial_pair(
                n_max, j_max, policy,
            )?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ell1::GrowthClass;

    fn policy() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn select_k_examples() {
        // (2-p)/(4(p-1)): 0.25, ~0.028, 2.25.
        assert_eq!(select_k(1.5).unwrap(), 1);
        assert_eq!(select_k(1.9).unwrap(), 1);
        assert_eq!(select_k(1.1).unwrap(), 3);
        assert!(matches!(select_k(1.0), Err(Error::InvalidP { .. })));
        assert!(matches!(select_k(2.0), Err(Error::InvalidP { .. })));
    }

    #[test]
    fn p_convergent_block_count_and_parseval() {
        let fam = p_convergent_frame(1.5, 3, Some(1), &policy()).unwrap();
        assert_eq!(fam.frame.len(), 1 + 4 + 9);
        assert_eq!(fam.frame.dim(), 3);
        assert!(fam.all_identities_hold(), "{:?}", fam.exact_identities);

        let single = p_convergent_frame(1.5, 1, None, &policy()).unwrap();
        assert_eq!(single.frame.len(), 1);
        assert!(single.all_identities_hold());
    }

    #[test]
    fn p_convergent_holder_bound_with_zeta4() {
        // For p = 1.5, k = 1 the bound is ζ(4)^{1/4} = (π⁴/90)^{1/4}.
        let zeta4 = std::f64::consts::PI.powi(4) / 90.0;
        assert!((zeta_upper(4.0) - zeta4).abs() <= 1e-12);
        let fam = p_convergent_frame(1.5, 3, Some(1), &policy()).unwrap();
        let mut rng = random::rng(9);
        let bound = zeta4.powf(0.25);
        for _ in 0..50 {
            let x = random::unit_vector(3, &mut rng);
            assert!(p_power_expansion_sum(&fam.frame, &x, 1.5) <= bound + 1e-10);
        }
    }

    #[test]
    fn p_convergent_rejects_bad_parameters() {
        assert!(matches!(
            p_convergent_frame(2.5, 3, None, &policy()),
            Err(Error::InvalidP { .. })
        ));
        // k below the legal floor for p = 1.1 (needs k >= 3).
        assert!(matches!(
            p_convergent_frame(1.1, 3, Some(1), &policy()),
            Err(Error::InvalidP { .. })
        ));
        // Budget overflow: n_max = 100, k = 3 gives more than 1e7 vectors.
        assert!(matches!(
            p_convergent_frame(1.1, 100, Some(3), &policy()),
            Err(Error::BudgetTooLarge { .. })
        ));
    }

    #[test]
    fn empty_hf_tight_constant_matches_partial_sum() {
        let fam = empty_hf_frame(3, 100, &policy()).unwrap();
        assert!(fam.all_identities_hold(), "{:?}", fam.exact_identities);
        // Frozen from the independent oracle: (6/π²) Σ_{j≤100} j⁻².
        let c = empty_hf_tight_constant(100);
        assert!((c - 0.9939510240173948).abs() <= 1e-12);
        let bounds = frames::frame_bounds(&fam.frame, &policy()).unwrap();
        assert!((bounds.lower - c).abs() <= 1e-10);
        assert!((bounds.upper - c).abs() <= 1e-10);
    }

    #[test]
    fn empty_hf_constant_increases_to_one() {
        let mut prev = 0.0;
        for j_max in [100usize, 1_000, 10_000] {
            let c = empty_hf_tight_constant(j_max);
            assert!(c > prev);
            assert!(c < 1.0);
            prev = c;
        }
        assert!(1.0 - prev < 1e-4);
    }

    #[test]
    fn empty_hf_stream_is_log_divergent() {
        let report =
            ell1::ell1_partial_sums(harmonic_stream(1.0), &ell1::DEFAULT_BUDGETS).unwrap();
        assert_eq!(report.classification, GrowthClass::LogDivergent);
    }

    #[test]
    fn nbb_union_checks_hold() {
        let fam = nbb_empty_hf_frame(3, 8, &policy()).unwrap();
        assert!(fam.all_identities_hold(), "{:?}", fam.exact_identities);
        assert_eq!(fam.frame.len(), 2 * 24);
        let min_norm = fam
            .frame
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min);
        assert!(min_norm > 0.0);
    }

    #[test]
    fn nbb_rejects_oversized_models() {
        assert!(matches!(
            nbb_empty_hf_frame(100, 100, &policy()),
            Err(Error::BudgetTooLarge { .. })
        ));
    }

    #[test]
    fn harmonic_vector_values() {
        let y = harmonic_vector(1).unwrap();
        assert!((y[0].re - SQRT_6_OVER_PI).abs() <= 1e-15);

        let y = harmonic_vector(100).unwrap();
        // Frozen oracle value of (6/π²) H^{(2)}_100.
        assert!((y.norm_squared() - 0.9939510240173948).abs() <= 1e-12);
    }

    #[test]
    fn harmonic_vector_ell1_contrast() {
        // Against the standard basis the l1-norm is the scaled harmonic sum;
        // against an orthonormal basis containing y0/‖y0‖ it is ‖y0‖.
        let n = 100;
        let y = harmonic_vector(n).unwrap();
        let basis = Frame::standard_basis(n);
        let measured = ell1::ell1_norm(&y, &basis).unwrap();
        assert!((measured - 4.044581657295099).abs() <= 1e-12);

        let unit = y.unscale(y.norm());
        let adapted = linalg::complete_orthonormal_basis(&[unit], n, &[]).unwrap();
        let adapted_frame = Frame::from_synthesis(&adapted);
        let measured_adapted = ell1::ell1_norm(&y, &adapted_frame).unwrap();
        assert!((measured_adapted - y.norm()).abs() <= 1e-10);
    }

    #[test]
    fn divergent_basis_invariants() {
        let x = standard_vector(4, 0);
        let result = divergent_basis_for_vector(&x, 100, 5).unwrap();
        assert!(
            result.family.all_identities_hold(),
            "{:?}",
            result.family.exact_identities
        );
        let riesz = frames::is_riesz_basis(&result.family.frame, &policy());
        assert!(riesz.is_riesz_basis);

        // Coefficient sums match the scaled harmonic numbers.
        let mut padded = CVector::zeros(100);
        padded[0] = Complex64::new(1.0, 0.0);
        let total: f64 = result
            .family
            .frame
            .iter()
            .map(|v| inner(&padded, v).norm())
            .sum();
        assert!((total - 4.044581657295099).abs() <= 1e-10);

        // Transport is unitary and fixes x exactly.
        let t = &result.transport;
        assert!((t.adjoint() * t - linalg::identity(100)).norm() <= 1e-10);
        assert!((t * &padded - &padded).norm() <= 1e-12);
    }

    #[test]
    fn divergent_basis_rejects_zero_vector() {
        let x = CVector::zeros(3);
        assert!(matches!(
            divergent_basis_for_vector(&x, 10, 0),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn divergent_basis_deterministic_per_seed() {
        let x = standard_vector(2, 1);
        let a = divergent_basis_for_vector(&x, 16, 3).unwrap();
        let b = divergent_basis_for_vector(&x, 16, 3).unwrap();
        assert_eq!(a.family.frame, b.family.frame);
        let c = divergent_basis_for_vector(&x, 16, 4).unwrap();
        assert_ne!(a.family.frame, c.family.frame);
    }

    #[test]
    fn intersection_pair_checks_and_growth() {
        let pair = intersection_trivial_pair(2, 64, &policy()).unwrap();
        assert!(pair.checks.iter().all(|c| c.pass), "{:?}", pair.checks);
        assert!(frames::is_riesz_basis(&pair.e, &policy()).is_riesz_basis);
        assert!(frames::is_riesz_basis(&pair.r, &policy()).is_riesz_basis);
        // The left probe stream grows; so does at least one right stream.
        assert!(pair.left_report.classification.is_divergent());
        assert!(
            pair.right_e_report.classification.is_divergent()
                || pair.right_r_report.classification.is_divergent(),
            "left {:?}, rights {:?} / {:?}",
            pair.left_report.classification,
            pair.right_e_report.classification,
            pair.right_r_report.classification
        );
    }

    #[test]
    fn fixing_unitary_block_structure() {
        let whole: Vec<CVector> = Frame::standard_basis(3).iter().cloned().collect();
        let t = fixing_unitary(&whole, 3, 0, &policy()).unwrap();
        assert_eq!(t, linalg::identity(3));

        let s = vec![standard_vector(3, 0)];
        let t = fixing_unitary(&s, 3, 7, &policy()).unwrap();
        assert!((t.adjoint() * &t - linalg::identity(3)).norm() <= 1e-10);
        assert!((&t * &s[0] - &s[0]).norm() <= 1e-12);
        // First row/column pinned to e1.
        assert!((t[(0, 0)] - Complex64::new(1.0, 0.0)).norm() <= 1e-12);
        assert!(t[(0, 1)].norm() <= 1e-12);
        assert!(t[(1, 0)].norm() <= 1e-12);
    }

    #[test]
    fn fixing_unitary_preserves_ell1_on_fixed_subspace() {
        let mut rng = random::rng(21);
        let e = random::riesz_basis(5, &mut rng);
        let s = random::orthonormal_set(5, 2, &mut rng);
        let t = fixing_unitary(&s, 5, 13, &policy()).unwrap();
        let te = frames::frame_from_operator(&t, &e).unwrap();
        for _ in 0..10 {
            // x in span(S): transported and original l1-norms agree.
            let coeffs = random::gaussian_vector(2, &mut rng);
            let mut x = CVector::zeros(5);
            for (j, sv) in s.iter().enumerate() {
                x += sv.map(|z| z * coeffs[j]);
            }
            let lhs = ell1::ell1_norm(&x, &te).unwrap();
            let rhs = ell1::ell1_norm(&(t.adjoint() * &x), &e).unwrap();
            let plain = ell1::ell1_norm(&x, &e).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10);
            assert!((rhs - plain).abs() <= 1e-10);
        }
    }

    #[test]
    fn fixing_unitary_rejects_non_orthonormal() {
        let s = vec![standard_vector(3, 0).scale(2.0)];
        assert!(matches!(
            fixing_unitary(&s, 3, 0, &policy()),
            Err(Error::InvalidSubspace(_))
        ));
    }

    #[test]
    fn family_spec_json_round_trip() {
        let spec = FrameFamilySpec {
            family: FamilyKind::PConvergent,
            params: FamilyParams {
                p: Some(1.5),
                k: Some(1),
                n_max: Some(3),
                ..FamilyParams::default()
            },
            seed: 7,
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"family\":\"p_convergent\""));
        let back: FrameFamilySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn build_family_dispatch_and_missing_params() {
        let spec = FrameFamilySpec {
            family: FamilyKind::EmptyHf,
            params: FamilyParams {
                n_max: Some(2),
                j_max: Some(10),
                ..FamilyParams::default()
            },
            seed: 0,
        };
        match build_family(&spec, &policy()).unwrap() {
            BuiltFamily::Family(f) => assert_eq!(f.frame.len(), 20),
            _ => panic!("expected a plain family"),
        }

        let missing = FrameFamilySpec {
            family: FamilyKind::EmptyHf,
            params: FamilyParams::default(),
            seed: 0,
        };
        assert!(matches!(
            build_family(&missing, &policy()),
            Err(Error::InvalidInput(_))
        ));
    }
}
