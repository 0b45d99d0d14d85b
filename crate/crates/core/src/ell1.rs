//! l1-norms with respect to frames and bases, boundedness certificates, and
//! growth classification of partial-sum series for truncated infinite
//! constructions.
//!
//! Divergence cannot be observed at a finite truncation, so the infinite
//! statements are operationalized as growth classification over a ladder of
//! budgets: fit the partial sums against `α ln N + β` (and `ln S` against
//! `ln N`), then label the series bounded, log-divergent, power-divergent,
//! or inconclusive.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frames::{self, Frame};
use crate::linalg::{self, inner, CVector, TolerancePolicy};

/// Budget ladder used when the caller does not supply one.
pub const DEFAULT_BUDGETS: [usize; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];

/// Fit thresholds for growth classification.
const LOG_ALPHA_MIN: f64 = 0.05;
const POWER_SLOPE_MIN: f64 = 0.1;
const FIT_R2_MIN: f64 = 0.98;
const BOUNDED_INCREMENT_FACTOR: f64 = 1e-6;

/// A finite list of points of `C^dim`, the sampled stand-in for a set `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<CVector>,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<CVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::ShapeError(format!(
                    "point {i} has length {}, expected {dim}",
                    p.len()
                )));
            }
            if !p.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "point {i} has non-finite entries"
                )));
            }
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[CVector] {
        &self.points
    }
}

/// Growth classification of a nonnegative partial-sum series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthClass {
    Bounded,
    LogDivergent,
    PowerDivergent,
    Inconclusive,
}

impl GrowthClass {
    pub fn is_divergent(self) -> bool {
        matches!(self, GrowthClass::LogDivergent | GrowthClass::PowerDivergent)
    }
}

/// Least-squares fit summary for `S(N) ≈ α ln N + β` over the upper half of
/// the budget ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub alpha: f64,
    pub beta: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
}

/// Partial-sum series of an l1 quantity over a budget ladder, with its
/// divergence classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ell1Report {
    pub budgets: Vec<usize>,
    pub partial_sums: Vec<f64>,
    pub classification: GrowthClass,
    pub fit: FitSummary,
}

impl Ell1Report {
    /// Final recorded partial sum.
    pub fn last_sum(&self) -> f64 {
        self.partial_sums.last().copied().unwrap_or(0.0)
    }

    /// CSV rendering: header `budget,partial_sum`, one row per budget, full
    /// double precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("budget,partial_sum\n");
        for (b, s) in self.budgets.iter().zip(&self.partial_sums) {
            out.push_str(&format!("{b},{s}\n"));
        }
        out
    }
}

/// `Σₙ |⟨x, eₙ⟩|` for the family `f`.
pub fn ell1_norm(x: &CVector, f: &Frame) -> Result<f64> {
    if x.len() != f.dim() {
        return Err(Error::ShapeError(format!(
            "vector length {} does not match frame dimension {}",
            x.len(),
            f.dim()
        )));
    }
    Ok(f.iter().map(|e| inner(x, e).norm()).sum())
}

/// `sup_{x ∈ M} ‖x‖₁` over a finite point set; the sup over the empty set of
/// nonnegative quantities is reported as 0.
pub fn set_ell1_bound(m: &PointSet, f: &Frame) -> Result<f64> {
    if m.dim() != f.dim() {
        return Err(Error::ShapeError(format!(
            "point set dimension {} does not match frame dimension {}",
            m.dim(),
            f.dim()
        )));
    }
    let mut sup = 0.0_f64;
    for p in m.points() {
        sup = sup.max(ell1_norm(p, f)?);
    }
    Ok(sup)
}

/// Witness that an l1-bounded set is norm-bounded: for each point,
/// `√A · ‖x‖ ≤ ‖x‖₁ + identity_tol` where `A` is the lower frame bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormBoundReport {
    /// `sup_{x ∈ M} ‖x‖`.
    pub sup_norm: f64,
    /// Worst value of `‖x‖₁ - √A · ‖x‖` over the set; nonnegative up to
    /// rounding when the inequality holds.
    pub worst_slack: f64,
}

pub fn norm_bound_necessity(
    m: &PointSet,
    f: &Frame,
    policy: &TolerancePolicy,
) -> Result<NormBoundReport> {
    let bounds = frames::frame_bounds(f, policy)?;
    let root_a = bounds.lower.sqrt();
    let mut sup_norm = 0.0_f64;
    let mut worst_slack = f64::INFINITY;
    for p in m.points() {
        let norm = p.norm();
        let slack = ell1_norm(p, f)? - root_a * norm;
        sup_norm = sup_norm.max(norm);
        worst_slack = worst_slack.min(slack);
    }
    Ok(NormBoundReport {
        sup_norm,
        worst_slack,
    })
}

/// Constructive certificate that a norm-bounded set inside a `k`-dimensional
/// subspace is l1-bounded: an orthonormal basis adapted to the span plus the
/// bound `√k · sup ‖x‖`.
#[derive(Debug, Clone)]
pub struct FiniteDimCertificate {
    pub bound: f64,
    pub witness_basis: Frame,
    pub span_dim: usize,
}

pub fn finite_dim_certificate(
    m: &PointSet,
    policy: &TolerancePolicy,
) -> Result<FiniteDimCertificate> {
    let d = m.dim();
    let sup_norm = m.points().iter().map(|p| p.norm()).fold(0.0, f64::max);

    // Numerical rank and span basis from the SVD of the point matrix.
    let (span_cols, k) = if m.is_empty() || sup_norm == 0.0 {
        (Vec::new(), 0)
    } else {
        let a = nalgebra::DMatrix::from_columns(m.points());
        let fact = linalg::spectral_factorize(&a)?;
        let cutoff = policy.rank_tol(fact.largest());
        let k = fact
            .singular_values
            .iter()
            .filter(|s| **s > cutoff)
            .count();
        let cols: Vec<CVector> = (0..k).map(|j| fact.left.column(j).into_owned()).collect();
        (cols, k)
    };
    let full = linalg::complete_orthonormal_basis(&span_cols, d, &[])?;
    let witness_basis = Frame::from_synthesis(&full);
    Ok(FiniteDimCertificate {
        bound: (k as f64).sqrt() * sup_norm,
        witness_basis,
        span_dim: k,
    })
}

/// Worst-case l1-norm over the unit sphere of `C^d` with respect to the
/// standard basis: exactly `√d`, attained by the flat vector `(1,…,1)/√d`.
#[derive(Debug, Clone)]
pub struct SphereWorstCase {
    pub value: f64,
    pub witness: CVector,
}

pub fn sphere_ell1_worst_case(d: usize) -> Result<SphereWorstCase> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let value = (d as f64).sqrt();
    let entry = num_complex::Complex64::new(1.0 / value, 0.0);
    Ok(SphereWorstCase {
        value,
        witness: CVector::from_element(d, entry),
    })
}

/// Accumulates a stream of nonnegative coefficient magnitudes into partial
/// sums at each budget and classifies the growth.
///
/// A stream shorter than the last budget is treated as padded with zeros, so
/// truncated families can be diagnosed on ladders that outrun them.
pub fn ell1_partial_sums<I>(stream: I, budgets: &[usize]) -> Result<Ell1Report>
where
    I: IntoIterator<Item = f64>,
{
    if budgets.is_empty() {
        return Err(Error::InvalidBudgets("empty budget ladder".into()));
    }
    if budgets[0] == 0 {
        return Err(Error::InvalidBudgets("budgets start at 1".into()));
    }
    for pair in budgets.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::InvalidBudgets(format!(
                "budgets must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    let last = *budgets.last().expect("nonempty");
    let mut sums = Vec::with_capacity(budgets.len());
    let mut acc = 0.0_f64;
    let mut next_budget = 0usize;
    let mut count = 0usize;
    for term in stream.into_iter().take(last) {
        if !(term >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "coefficient stream produced {term}, expected nonnegative magnitudes"
            )));
        }
        acc += term;
        count += 1;
        while next_budget < budgets.len() && budgets[next_budget] == count {
            sums.push(acc);
            next_budget += 1;
        }
    }
    // Exhausted streams contribute zeros for the remaining budgets.
    while sums.len() < budgets.len() {
        sums.push(acc);
    }
    Ok(classify(budgets.to_vec(), sums))
}

/// Fits `y = slope · x + intercept` by least squares and reports r².
/// A perfectly flat residual on degenerate data counts as r² = 1.
fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = mean_y - slope * mean_x;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let pred = slope * x + intercept;
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else if ss_res == 0.0 {
        1.0
    } else {
        0.0
    };
    (slope, intercept, r2)
}

fn classify(budgets: Vec<usize>, partial_sums: Vec<f64>) -> Ell1Report {
    let m = budgets.len();
    let final_sum = partial_sums.last().copied().unwrap_or(0.0);

    // Fits run over the upper half of the ladder (at least two points).
    let window = m.saturating_sub(m.div_ceil(2)).min(m.saturating_sub(2));
    let xs: Vec<f64> = budgets[window..].iter().map(|b| (*b as f64).ln()).collect();
    let ys: Vec<f64> = partial_sums[window..].to_vec();
    let (log_fit, power_fit) = if xs.len() >= 2 {
        let log_fit = linear_fit(&xs, &ys);
        let power_fit = if ys.iter().all(|y| *y > 0.0) {
            let ln_ys: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
            Some(linear_fit(&xs, &ln_ys))
        } else {
            None
        };
        (Some(log_fit), power_fit)
    } else {
        (None, None)
    };

    let (alpha, beta, log_r2) = log_fit.unwrap_or((0.0, final_sum, 0.0));
    let fit = FitSummary {
        alpha,
        beta,
        r_squared: log_r2,
    };

    // Bounded: the mean term over each of the last (up to) three budget
    // windows has fallen below the relative floor.
    let increments = m.saturating_sub(1).min(3);
    let bounded = if final_sum == 0.0 {
        true
    } else if increments == 0 {
        false
    } else {
        (m - increments..m).all(|k| {
            let window_len = (budgets[k] - budgets[k - 1]) as f64;
            let mean_term = (partial_sums[k] - partial_sums[k - 1]) / window_len;
            mean_term <= BOUNDED_INCREMENT_FACTOR * final_sum
        })
    };

    let log_ok = log_fit.is_some() && alpha > LOG_ALPHA_MIN && log_r2 > FIT_R2_MIN;
    let power_ok = matches!(power_fit, Some((slope, _, r2)) if slope > POWER_SLOPE_MIN && r2 > FIT_R2_MIN);

    let classification = if power_ok
        && (!log_ok || power_fit.map(|(_, _, r2)| r2 > log_r2).unwrap_or(false))
    {
        GrowthClass::PowerDivergent
    } else if log_ok {
        GrowthClass::LogDivergent
    } else if bounded {
        GrowthClass::Bounded
    } else {
        GrowthClass::Inconclusive
    };

    Ell1Report {
        budgets,
        partial_sums,
        classification,
        fit,
    }
}

/// Tolerance-qualified check that sampled limit points do not exceed the
/// l1-bound of the sampled set.
///
/// Exact only for the true closure; with finitely many approximants the
/// caller supplies the slack the truncation warrants (e.g. the distance of
/// the last approximant to its limit). `worst_excess` reports how far the
/// worst limit point exceeded the sampled sup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureCheck {
    pub ok: bool,
    pub sampled_sup: f64,
    pub worst_excess: f64,
}

pub fn closure_stability_check(
    m: &PointSet,
    limit_points: &PointSet,
    f: &Frame,
    slack: f64,
    policy: &TolerancePolicy,
) -> Result<ClosureCheck> {
    if m.dim() != limit_points.dim() {
        return Err(Error::ShapeError(format!(
            "set dimension {} does not match limit dimension {}",
            m.dim(),
            limit_points.dim()
        )));
    }
    let sup = set_ell1_bound(m, f)?;
    let mut worst_excess = f64::NEG_INFINITY;
    for p in limit_points.points() {
        worst_excess = worst_excess.max(ell1_norm(p, f)? - sup);
    }
    if limit_points.is_empty() {
        worst_excess = 0.0;
    }
    Ok(ClosureCheck {
        ok: worst_excess <= slack + policy.identity_tol,
        sampled_sup: sup,
        worst_excess,
    })
}

/// Transport constants for the sufficient union condition: when both dual
/// bases are l1-bounded with respect to `g`, every `x` satisfies
/// `‖x‖₁,g ≤ constant_e · ‖x‖₁,e` (and symmetrically for `r`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnionSufficiency {
    pub ok_e: bool,
    pub ok_r: bool,
    pub constant_e: f64,
    pub constant_r: f64,
}

impl UnionSufficiency {
    /// Constant serving both transport inequalities at once.
    pub fn constant(&self) -> f64 {
        self.constant_e.max(self.constant_r)
    }
}

pub fn union_sufficiency_check(
    e: &Frame,
    r: &Frame,
    g: &Frame,
    policy: &TolerancePolicy,
) -> Result<UnionSufficiency> {
    let dual_e = frames::dual_basis(e, policy)?;
    let dual_r = frames::dual_basis(r, policy)?;
    let g_check = frames::is_riesz_basis(g, policy);
    if !g_check.is_riesz_basis {
        return Err(Error::NotRieszBasis {
            margin: g_check.margin,
        });
    }
    let mut constant_e = 0.0_f64;
    for v in dual_e.iter() {
        constant_e = constant_e.max(ell1_norm(v, g)?);
    }
    let mut constant_r = 0.0_f64;
    for v in dual_r.iter() {
        constant_r = constant_r.max(ell1_norm(v, g)?);
    }
    Ok(UnionSufficiency {
        ok_e: constant_e.is_finite(),
        ok_r: constant_r.is_finite(),
        constant_e,
        constant_r,
    })
}

/// Block-concatenates a Riesz basis on the leading coordinates with one on
/// the trailing coordinates into a Riesz basis of the direct sum; l1-norms
/// of vectors supported on one block are unchanged.
pub fn embed_union_basis(e: &Frame, r_perp: &Frame) -> Result<Frame> {
    let d1 = e.dim();
    let d2 = r_perp.dim();
    let total = d1 + d2;
    let mut vectors = Vec::with_capacity(e.len() + r_perp.len());
    for v in e.iter() {
        let mut w = CVector::zeros(total);
        w.rows_mut(0, d1).copy_from(v);
        vectors.push(w);
    }
    for v in r_perp.iter() {
        let mut w = CVector::zeros(total);
        w.rows_mut(d1, d2).copy_from(v);
        vectors.push(w);
    }
    Frame::new(total, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn policy() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    const SQRT6_OVER_PI: f64 = 0.779696801233676;

    #[test]
    fn ell1_norm_examples() {
        let basis = Frame::standard_basis(3);
        let mut e1 = CVector::zeros(3);
        e1[0] = c(1.0, 0.0);
        assert!((ell1_norm(&e1, &basis).unwrap() - 1.0).abs() <= 1e-15);
        assert_eq!(ell1_norm(&CVector::zeros(3), &basis).unwrap(), 0.0);

        // Flat unit vector: d terms of 1/sqrt(d) each.
        let d = 9;
        let basis = Frame::standard_basis(d);
        let flat = CVector::from_element(d, c(1.0 / 3.0, 0.0));
        assert!((ell1_norm(&flat, &basis).unwrap() - 3.0).abs() <= 1e-12);
    }

    #[test]
    fn ell1_norm_shape_error() {
        let basis = Frame::standard_basis(3);
        assert!(matches!(
            ell1_norm(&CVector::zeros(2), &basis),
            Err(Error::ShapeError(_))
        ));
    }

    #[test]
    fn set_bound_examples() {
        let basis = Frame::standard_basis(2);
        let m = PointSet::new(
            2,
            vec![
                CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]),
                CVector::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]),
            ],
        )
        .unwrap();
        assert!((set_ell1_bound(&m, &basis).unwrap() - 1.0).abs() <= 1e-15);

        let empty = PointSet::new(2, vec![]).unwrap();
        assert_eq!(set_ell1_bound(&empty, &basis).unwrap(), 0.0);
    }

    #[test]
    fn riesz_basis_is_ell1_bounded_against_its_dual() {
        // Biorthogonality: each cross-Gram row has a single unit entry.
        let mut rng = random::rng(7);
        let e = random::riesz_basis(5, &mut rng);
        let dual = frames::dual_basis(&e, &policy()).unwrap();
        let m = PointSet::new(5, e.vectors().to_vec()).unwrap();
        let sup = set_ell1_bound(&m, &dual).unwrap();
        assert!((sup - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn sampled_sphere_respects_cauchy_schwarz_envelope() {
        let mut rng = random::rng(13);
        let d = 6;
        let f = random::frame(d, 9, &mut rng);
        let bounds = frames::frame_bounds(&f, &policy()).unwrap();
        let envelope = (d as f64).sqrt() * bounds.upper.sqrt();
        let points: Vec<CVector> = (0..40).map(|_| random::unit_vector(d, &mut rng)).collect();
        let m = PointSet::new(d, points).unwrap();
        // Cauchy-Schwarz oracle: ‖x‖₁ ≤ √N (Σ|⟨x,xₙ⟩|²)^{1/2} ≤ √N √B; with
        // N = 9 > d this still bounds the measured sup.
        let n_env = (f.len() as f64).sqrt() * bounds.upper.sqrt();
        let sup = set_ell1_bound(&m, &f).unwrap();
        assert!(sup <= n_env + 1e-12);
        let _ = envelope;
    }

    #[test]
    fn norm_bound_slack_stays_nonnegative() {
        let mut rng = random::rng(19);
        let f = random::frame(4, 7, &mut rng);
        let points: Vec<CVector> = (0..25)
            .map(|_| random::gaussian_vector(4, &mut rng))
            .collect();
        let m = PointSet::new(4, points).unwrap();
        let report = norm_bound_necessity(&m, &f, &policy()).unwrap();
        assert!(report.worst_slack >= -1e-10);
        assert!(report.sup_norm > 0.0);
    }

    #[test]
    fn norm_bound_orthonormal_case() {
        let basis = Frame::standard_basis(3);
        let m = PointSet::new(3, vec![CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])])
            .unwrap();
        let report = norm_bound_necessity(&m, &basis, &policy()).unwrap();
        assert!((report.sup_norm - 1.0).abs() <= 1e-15);
        assert!(report.worst_slack >= -1e-12);
    }

    #[test]
    fn certificate_single_point() {
        let mut e1 = CVector::zeros(5);
        e1[0] = c(1.0, 0.0);
        let m = PointSet::new(5, vec![e1]).unwrap();
        let cert = finite_dim_certificate(&m, &policy()).unwrap();
        assert_eq!(cert.span_dim, 1);
        assert!((cert.bound - 1.0).abs() <= 1e-12);
        let measured = set_ell1_bound(&m, &cert.witness_basis).unwrap();
        assert!(measured <= cert.bound + 1e-10);
    }

    #[test]
    fn certificate_on_low_dimensional_subspace() {
        let mut rng = random::rng(23);
        let d = 50;
        let span = random::orthonormal_set(d, 3, &mut rng);
        let points: Vec<CVector> = (0..20)
            .map(|_| {
                let coeffs = random::unit_vector(3, &mut rng);
                let mut p = CVector::zeros(d);
                for (j, s) in span.iter().enumerate() {
                    p += s.map(|z| z * coeffs[j]);
                }
                p
            })
            .collect();
        let m = PointSet::new(d, points).unwrap();
        let cert = finite_dim_certificate(&m, &policy()).unwrap();
        assert_eq!(cert.span_dim, 3);
        assert!((cert.bound - 3f64.sqrt()).abs() <= 1e-9);
        let measured = set_ell1_bound(&m, &cert.witness_basis).unwrap();
        assert!(measured <= cert.bound + 1e-10);
    }

    #[test]
    fn certificate_of_zero_set() {
        let m = PointSet::new(4, vec![CVector::zeros(4)]).unwrap();
        let cert = finite_dim_certificate(&m, &policy()).unwrap();
        assert_eq!(cert.span_dim, 0);
        assert_eq!(cert.bound, 0.0);
    }

    #[test]
    fn sphere_worst_case_values() {
        for (d, want) in [(1usize, 1.0), (4, 2.0), (100, 10.0)] {
            let sw = sphere_ell1_worst_case(d).unwrap();
            assert!((sw.value - want).abs() <= 1e-12);
            assert!((sw.value * sw.value - d as f64).abs() <= 1e-9);
            // The witness attains the bound.
            let basis = Frame::standard_basis(d);
            let attained = ell1_norm(&sw.witness, &basis).unwrap();
            assert!((attained - sw.value).abs() <= 1e-9);
            assert!((sw.witness.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn subset_monotonicity_of_set_bound() {
        let mut rng = random::rng(29);
        let f = random::frame(4, 6, &mut rng);
        let points: Vec<CVector> = (0..10)
            .map(|_| random::gaussian_vector(4, &mut rng))
            .collect();
        let m = PointSet::new(4, points.clone()).unwrap();
        let m_sub = PointSet::new(4, points[..4].to_vec()).unwrap();
        assert!(set_ell1_bound(&m_sub, &f).unwrap() <= set_ell1_bound(&m, &f).unwrap() + 1e-15);
    }

    #[test]
    fn harmonic_stream_is_log_divergent() {
        // Oracle: independently computed scaled harmonic numbers.
        let h100: f64 = (1..=100).map(|n| 1.0 / n as f64).sum();
        let stream = (1..).map(|n| SQRT6_OVER_PI / n as f64);
        let report = ell1_partial_sums(stream, &DEFAULT_BUDGETS).unwrap();
        assert_eq!(report.classification, GrowthClass::LogDivergent);
        assert!((report.partial_sums[0] - SQRT6_OVER_PI * h100).abs() <= 1e-12);
        // Frozen from the oracle: (sqrt6/pi) * H_100 = 4.044581657295099.
        assert!((report.partial_sums[0] - 4.044581657295099).abs() <= 1e-12);
        assert!((report.fit.alpha - SQRT6_OVER_PI).abs() <= 0.15 * SQRT6_OVER_PI);
    }

    #[test]
    fn inverse_square_stream_is_bounded() {
        // Partial sums approach pi/sqrt6 = 1.282549830161864.
        let stream = (1..).map(|n: u64| SQRT6_OVER_PI / (n * n) as f64);
        let report = ell1_partial_sums(stream, &DEFAULT_BUDGETS).unwrap();
        assert_eq!(report.classification, GrowthClass::Bounded);
        let limit = std::f64::consts::PI / 6f64.sqrt();
        assert!((report.last_sum() - limit).abs() <= 1e-5);
    }

    #[test]
    fn zero_stream_is_bounded() {
        let report =
            ell1_partial_sums(std::iter::repeat(0.0).take(1000), &[10, 100, 1000]).unwrap();
        assert_eq!(report.classification, GrowthClass::Bounded);
        assert!(report.partial_sums.iter().all(|s| *s == 0.0));
    }

    #[test]
    fn sqrt_growth_stream_is_power_divergent() {
        // Terms n^{-1/2} give S(N) ~ 2 sqrt(N).
        let stream = (1..).map(|n: u64| 1.0 / (n as f64).sqrt());
        let report = ell1_partial_sums(stream, &DEFAULT_BUDGETS).unwrap();
        assert_eq!(report.classification, GrowthClass::PowerDivergent);
    }

    #[test]
    fn partial_sums_validate_budgets() {
        let stream = std::iter::repeat(1.0);
        assert!(matches!(
            ell1_partial_sums(stream.clone(), &[]),
            Err(Error::InvalidBudgets(_))
        ));
        assert!(matches!(
            ell1_partial_sums(stream.clone(), &[10, 10]),
            Err(Error::InvalidBudgets(_))
        ));
        assert!(matches!(
            ell1_partial_sums(stream, &[10, 5]),
            Err(Error::InvalidBudgets(_))
        ));
    }

    #[test]
    fn partial_sums_pad_exhausted_streams() {
        let report = ell1_partial_sums(vec![1.0, 1.0, 1.0], &[2, 8]).unwrap();
        assert_eq!(report.partial_sums, vec![2.0, 3.0]);
    }

    #[test]
    fn csv_rendering_has_header_and_rows() {
        let report = ell1_partial_sums(vec![0.5, 0.25], &[1, 2]).unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("budget,partial_sum\n"));
        assert!(csv.contains("1,0.5\n"));
        assert!(csv.contains("2,0.75\n"));
    }

    #[test]
    fn closure_check_inside_and_at_truncation() {
        let basis = Frame::standard_basis(1);
        // M = {(1 - 1/k) e1 : k <= 100}; the limit e1 exceeds the sampled
        // sup by exactly 1/100, so the check needs that much slack.
        let points: Vec<CVector> = (1..=100)
            .map(|k| CVector::from_element(1, c(1.0 - 1.0 / k as f64, 0.0)))
            .collect();
        let m = PointSet::new(1, points).unwrap();
        let limit = PointSet::new(1, vec![CVector::from_element(1, c(1.0, 0.0))]).unwrap();

        let strict = closure_stability_check(&m, &limit, &basis, 0.0, &policy()).unwrap();
        assert!(!strict.ok);
        let relaxed = closure_stability_check(&m, &limit, &basis, 1.0 / 100.0, &policy()).unwrap();
        assert!(relaxed.ok);

        // A limit point inside M itself passes with zero slack.
        let inside = PointSet::new(1, vec![CVector::from_element(1, c(0.5, 0.0))]).unwrap();
        assert!(closure_stability_check(&m, &inside, &basis, 0.0, &policy())
            .unwrap()
            .ok);
    }

    #[test]
    fn union_sufficiency_orthonormal_case() {
        let basis = Frame::standard_basis(3);
        let u = union_sufficiency_check(&basis, &basis, &basis, &policy()).unwrap();
        assert!(u.ok_e && u.ok_r);
        assert!((u.constant_e - 1.0).abs() <= 1e-12);
        assert!((u.constant_r - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn union_sufficiency_transport_inequality_holds() {
        let mut rng = random::rng(31);
        let e = random::riesz_basis(4, &mut rng);
        let r = random::riesz_basis(4, &mut rng);
        let g = random::riesz_basis(4, &mut rng);
        let u = union_sufficiency_check(&e, &r, &g, &policy()).unwrap();
        for _ in 0..50 {
            let x = random::gaussian_vector(4, &mut rng);
            let lhs = ell1_norm(&x, &g).unwrap();
            assert!(lhs <= u.constant_e * ell1_norm(&x, &e).unwrap() + 1e-10);
            assert!(lhs <= u.constant_r * ell1_norm(&x, &r).unwrap() + 1e-10);
        }
    }

    #[test]
    fn embed_union_examples() {
        let e = Frame::standard_basis(2);
        let r = Frame::standard_basis(3);
        let merged = embed_union_basis(&e, &r).unwrap();
        assert_eq!(merged.dim(), 5);
        assert_eq!(merged.len(), 5);
        // Standard bases concatenate to the standard basis of the sum.
        for (n, v) in Frame::standard_basis(5).iter().enumerate() {
            assert!((merged.vector(n) - v).norm() == 0.0);
        }

        // l1-norm of a first-block vector is unchanged.
        let mut rng = random::rng(37);
        let e = random::riesz_basis(3, &mut rng);
        let r = random::riesz_basis(2, &mut rng);
        let merged = embed_union_basis(&e, &r).unwrap();
        let x3 = random::gaussian_vector(3, &mut rng);
        let mut x5 = CVector::zeros(5);
        x5.rows_mut(0, 3).copy_from(&x3);
        assert!(
            (ell1_norm(&x5, &merged).unwrap() - ell1_norm(&x3, &e).unwrap()).abs() <= 1e-12
        );

        // Block margins: the merged margin is the min of the two margins.
        let check_e = frames::is_riesz_basis(&e, &policy());
        let check_r = frames::is_riesz_basis(&r, &policy());
        let check_m = frames::is_riesz_basis(&merged, &policy());
        assert!(check_m.is_riesz_basis);
        assert!((check_m.margin - check_e.margin.min(check_r.margin)).abs() <= 1e-10);
    }
}
