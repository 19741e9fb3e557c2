//! Closed-form generalization-bound calculators: the relative VC deviation
//! bound for empirical risk minimizers, its numeric inversion into sample
//! complexity, moment-based deviation bounds for polynomial losses, and
//! small checkable utilities.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{empirical_risk, eval_loss, Dataset, LossSpec, Separator};

/// The moment factor `a(p) = 2^{−1/p} ((p−1)/(p−2))^{(p−1)/p}`, `p > 2`.
pub fn a_of_p(p: f64) -> Result<f64> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(Error::invalid(format!(
            "moment order must satisfy p > 2, got {p}"
        )));
    }
    Ok(2f64.powf(-1.0 / p) * ((p - 1.0) / (p - 2.0)).powf((p - 1.0) / p))
}

/// VC confidence term `ℰ = 4 (h (ln(2n/h) + 1) − ln(δ/8)) / n`.
pub fn vc_epsilon(n: u64, h: u32, delta: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    if h == 0 {
        return Err(Error::invalid("VC dimension must be at least 1"));
    }
    validate_delta(delta)?;
    let n = n as f64;
    let h = h as f64;
    Ok(4.0 * (h * ((2.0 * n / h).ln() + 1.0) - (delta / 8.0).ln()) / n)
}

pub(crate) fn validate_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!(
            "failure probability must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// VC dimension of affine functions on `ℝ^d`.
pub fn vc_dim_affine(d: u32) -> u32 {
    d + 1
}

/// VC dimension bound for the hinge-loss family over affine separators on
/// `ℝ^d`: the loss is monotone in `1 − y g(x)`, itself affine in the
/// `(y·x, y)` coordinates, so the family separates at most `d + 2` points.
pub fn vc_dim_hinge_loss_family(d: u32) -> u32 {
    d + 2
}

/// Inputs for the relative deviation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VapnikBoundInputs {
    /// Sample size.
    pub n: u64,
    /// VC dimension of the loss family.
    pub h: u32,
    /// Failure probability in (0, 1).
    pub delta: f64,
    /// Moment order, strictly greater than 2.
    pub p: f64,
    /// Moment ratio `sup ‖L‖_p / ‖L‖₁ ≥ 1`.
    pub tau: f64,
    /// Minimal in-class risk `J ≥ 0`.
    pub min_risk: f64,
}

impl VapnikBoundInputs {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("sample size must be at least 1"));
        }
        if self.h == 0 {
            return Err(Error::invalid("VC dimension must be at least 1"));
        }
        validate_delta(self.delta)?;
        if !(self.p > 2.0) {
            return Err(Error::invalid("moment order must satisfy p > 2"));
        }
        if !(self.tau >= 1.0) {
            return Err(Error::invalid(
                "moment ratio must be at least 1 (p-norm dominates 1-norm)",
            ));
        }
        if !(self.min_risk >= 0.0) || !self.min_risk.is_finite() {
            return Err(Error::invalid(
                "minimal risk must be finite and non-negative",
            ));
        }
        Ok(())
    }
}

/// Evaluated relative bound. `bound_value` is `+∞` exactly when the
/// denominator `(1 − τ a(p) √ℰ)₊` vanishes; the `O(1/n)` remainder is
/// dropped and flagged in `dropped_terms_note`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub vc_epsilon: f64,
    pub a_p: f64,
    pub bound_value: f64,
    pub in_valid_regime: bool,
    pub dropped_terms_note: &'static str,
}

impl BoundReport {
    pub fn summary_line(&self) -> String {
        format!(
            "bound={:.6e} regime={} E={:.6e} a_p={:.6e} dropped={}",
            self.bound_value,
            self.in_valid_regime,
            self.vc_epsilon,
            self.a_p,
            self.dropped_terms_note
        )
    }
}

/// Absolute form of the relative deviation bound on the excess risk of an
/// empirical risk minimizer: `J · τ a(p) √ℰ / (1 − τ a(p) √ℰ)₊`, holding
/// with probability at least `1 − δ` for any non-negative loss.
pub fn vapnik_relative_bound(inputs: &VapnikBoundInputs) -> Result<BoundReport> {
    inputs.validate()?;
    let eps = vc_epsilon(inputs.n, inputs.h, inputs.delta)?;
    let a_p = a_of_p(inputs.p)?;
    let v = inputs.tau * a_p * eps.sqrt();
    let in_valid_regime = v < 1.0;
    let bound_value = if in_valid_regime {
        inputs.min_risk * v / (1.0 - v)
    } else {
        f64::INFINITY
    };
    Ok(BoundReport {
        vc_epsilon: eps,
        a_p,
        bound_value,
        in_valid_regime,
        dropped_terms_note: "O(1/n)",
    })
}

const MAX_COMPLEXITY: u64 = 1 << 62;

/// Smallest sample size `n` whose bound value is at most `eps`, found by
/// exponential bracketing followed by binary search on the decreasing tail.
pub fn info_complexity_numeric(
    eps: f64,
    delta: f64,
    h: u32,
    min_risk: f64,
    tau: f64,
    p: f64,
) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(Error::invalid("target accuracy must be positive"));
    }
    let bound_at = |n: u64| -> Result<f64> {
        Ok(vapnik_relative_bound(&VapnikBoundInputs {
            n,
            h,
            delta,
            p,
            tau,
            min_risk,
        })?
        .bound_value)
    };
    if bound_at(1)? <= eps {
        return Ok(1);
    }
    let mut hi = 1u64;
    loop {
        hi = hi.saturating_mul(2);
        if bound_at(hi)? <= eps {
            break;
        }
        if hi >= MAX_COMPLEXITY {
            return Err(Error::UnboundedComplexity);
        }
    }
    let mut lo = hi / 2; // bound(lo) > eps, bound(hi) <= eps
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if bound_at(mid)? <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Leading-term sample complexity `(d+2)(2Jτa)² (2 ln(1/ε) + ln ln(1/ε))/ε²`.
///
/// Valid only as `ε → 0`; requires `ε < 1/e` so the iterated logarithm is
/// defined. The failure probability enters the exact inversion but not the
/// displayed leading terms, so the value carries a fixed-`δ` caveat.
pub fn info_complexity_asymptotic(
    eps: f64,
    delta: f64,
    d: u32,
    min_risk: f64,
    tau: f64,
    p: f64,
) -> Result<f64> {
    validate_delta(delta)?;
    if !(eps > 0.0) {
        return Err(Error::invalid("target accuracy must be positive"));
    }
    if eps >= std::f64::consts::E.recip() {
        return Err(Error::OutOfRegime(format!(
            "asymptotic form requires eps < 1/e, got {eps}"
        )));
    }
    let a = a_of_p(p)?;
    let log_inv = (1.0 / eps).ln();
    let lead = 2.0 * min_risk * tau * a;
    Ok(f64::from(d + 2) * lead * lead * (2.0 * log_inv + log_inv.ln()) / (eps * eps))
}

/// Single-function deviation bound `σ / √(δ n)`.
pub fn chebyshev_deviation_bound(sigma: f64, delta: f64, n: u64) -> Result<f64> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::invalid(
            "standard deviation must be finite and non-negative",
        ));
    }
    validate_delta(delta)?;
    if n == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    Ok(sigma / (delta * n as f64).sqrt())
}

/// A deviation bound together with the confidence level at which it holds
/// simultaneously over the hypothesis class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationBound {
    pub bound: f64,
    /// `1 − (term count) · δ`, clamped at 0.
    pub confidence: f64,
    /// True when the stated confidence clamps to zero.
    pub vacuous: bool,
}

/// Inputs for the class-uniform polynomial deviation bound.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyDeviationInputs {
    /// Coefficients `c_ij` of the loss polynomial in `(g, y)`.
    pub coeffs: BTreeMap<(u32, u32), f64>,
    /// `ℓ¹` constraint on the affine class: `|w|₁ + |b| ≤ 2M`.
    pub l1_bound: f64,
    /// Moments `d_i = E[(|x| + 1)^{2i}]`, indexed by `i = 0..=k`.
    pub moments: Vec<f64>,
    pub delta: f64,
    pub n: u64,
    /// Number of distinct monomial terms in `x` appearing in the loss.
    pub term_count: usize,
}

impl PolyDeviationInputs {
    fn validate(&self) -> Result<()> {
        if !(self.l1_bound > 0.0) || !self.l1_bound.is_finite() {
            return Err(Error::invalid("constraint bound M must be positive"));
        }
        validate_delta(self.delta)?;
        if self.n == 0 {
            return Err(Error::invalid("sample size must be at least 1"));
        }
        if self.term_count == 0 {
            return Err(Error::invalid("term count must be at least 1"));
        }
        for (&(i, _), &c) in &self.coeffs {
            if !c.is_finite() {
                return Err(Error::invalid("coefficients must be finite"));
            }
            if c != 0.0 && (i as usize) >= self.moments.len() {
                return Err(Error::invalid(format!(
                    "moment d_{i} required but only {} moments supplied",
                    self.moments.len()
                )));
            }
        }
        for (i, &m) in self.moments.iter().enumerate() {
            if !(m >= 1.0) {
                return Err(Error::invalid(format!(
                    "moment d_{i} = {m} must be at least 1 since (|x|+1)^{{2i}} ≥ 1"
                )));
            }
        }
        Ok(())
    }
}

/// Uniform deviation bound for a polynomial loss over the `ℓ¹`-constrained
/// affine class: `Σ |c_ij| √d_i (2M)^i / √(δ n)`, holding simultaneously
/// for every separator in the class with probability at least `1 − ℓδ`.
pub fn poly_risk_deviation_bound(inputs: &PolyDeviationInputs) -> Result<DeviationBound> {
    inputs.validate()?;
    let two_m = 2.0 * inputs.l1_bound;
    let mut sum = 0.0;
    for (&(i, _j), &c) in &inputs.coeffs {
        if c == 0.0 {
            continue;
        }
        sum += c.abs() * inputs.moments[i as usize].sqrt() * two_m.powi(i as i32);
    }
    let bound = sum / (inputs.delta * inputs.n as f64).sqrt();
    let raw_conf = 1.0 - inputs.term_count as f64 * inputs.delta;
    Ok(DeviationBound {
        bound,
        confidence: raw_conf.max(0.0),
        vacuous: raw_conf <= 0.0,
    })
}

/// Distribution-free deviation bound for a clipped polynomial loss:
/// `(Σ_{1 ≤ i+j ≤ k} |c_ij| M₀^i + |c₀₀ − C| / 2) / √(δ n)`, holding
/// simultaneously over the class with probability at least `1 − mδ`.
/// No moment of the data distribution appears.
pub fn clipped_poly_deviation_bound(
    coeffs: &BTreeMap<(u32, u32), f64>,
    g_bound: f64,
    outside_value: f64,
    delta: f64,
    n: u64,
    term_count: usize,
) -> Result<DeviationBound> {
    if !(g_bound > 0.0) || !g_bound.is_finite() {
        return Err(Error::invalid("clipping bound M0 must be positive"));
    }
    if !outside_value.is_finite() {
        return Err(Error::invalid("outside value must be finite"));
    }
    validate_delta(delta)?;
    if n == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    if term_count == 0 {
        return Err(Error::invalid("term count must be at least 1"));
    }
    let mut sum = 0.0;
    let mut c00 = 0.0;
    for (&(i, j), &c) in coeffs {
        if !c.is_finite() {
            return Err(Error::invalid("coefficients must be finite"));
        }
        if i == 0 && j == 0 {
            c00 = c;
        } else if c != 0.0 {
            sum += c.abs() * g_bound.powi(i as i32);
        }
    }
    sum += (c00 - outside_value).abs() / 2.0;
    let raw_conf = 1.0 - term_count as f64 * delta;
    Ok(DeviationBound {
        bound: sum / (delta * n as f64).sqrt(),
        confidence: raw_conf.max(0.0),
        vacuous: raw_conf <= 0.0,
    })
}

/// Empirical moments `d_i = (1/n) Σ_j (|x_j| + 1)^{2i}` for `i = 0..=k`,
/// with `|x|` the Euclidean norm. `d₀ = 1` exactly.
pub fn estimate_moments(data: &Dataset, k: u32) -> Result<Vec<f64>> {
    let mut moments = vec![0.0; k as usize + 1];
    moments[0] = 1.0;
    for i in 1..=k as usize {
        let mut acc = 0.0;
        for s in data.samples() {
            let norm = s.x().iter().map(|v| v * v).sum::<f64>().sqrt();
            acc += (norm + 1.0).powi(2 * i as i32);
        }
        moments[i] = acc / data.len() as f64;
    }
    Ok(moments)
}

/// Result of checking `|f(arg min g) − min f| ≤ 2 sup |f − g|` on a finite
/// set. The inequality is a theorem, so `holds` is always true for correct
/// inputs; a false return flags an implementation bug.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InfSwapCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// Index of the minimizer of `g` (ties broken by lowest index).
    pub argmin_index: usize,
}

/// Evaluate both sides of the minimizer-swap inequality on a finite set.
pub fn check_inf_swap(f_values: &[f64], g_values: &[f64]) -> Result<InfSwapCheck> {
    if f_values.is_empty() || f_values.len() != g_values.len() {
        return Err(Error::DimensionMismatch {
            expected: f_values.len().max(1),
            got: g_values.len(),
        });
    }
    let mut argmin_g = 0usize;
    for (i, &g) in g_values.iter().enumerate() {
        if g < g_values[argmin_g] {
            argmin_g = i;
        }
    }
    let inf_f = f_values.iter().copied().fold(f64::INFINITY, f64::min);
    let lhs = (f_values[argmin_g] - inf_f).abs();
    let rhs = 2.0
        * f_values
            .iter()
            .zip(g_values)
            .map(|(f, g)| (f - g).abs())
            .fold(0.0, f64::max);
    Ok(InfSwapCheck {
        holds: lhs <= rhs,
        lhs,
        rhs,
        argmin_index: argmin_g,
    })
}

/// Plug-in estimate of the moment ratio `sup ‖L‖_p / ‖L‖₁` over a finite
/// grid of candidate separators, evaluated on the given data. Local to the
/// sampled distribution; always at least 1 by the power-mean inequality.
pub fn plug_in_tau<S: Separator>(
    data: &Dataset,
    candidates: &[S],
    loss: &LossSpec,
    p: f64,
) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::invalid("at least one candidate separator required"));
    }
    if !(p > 2.0) {
        return Err(Error::invalid("moment order must satisfy p > 2"));
    }
    let mut tau: f64 = 1.0;
    for sep in candidates {
        let mut mean_p = 0.0;
        let mut mean_1 = 0.0;
        for s in data.samples() {
            let l = eval_loss(loss, sep.eval(s.x())?, s.y())?;
            mean_p += l.abs().powf(p);
            mean_1 += l.abs();
        }
        let n = data.len() as f64;
        mean_p /= n;
        mean_1 /= n;
        if mean_1 > 0.0 {
            tau = tau.max(mean_p.powf(1.0 / p) / mean_1);
        }
    }
    Ok(tau)
}

/// Plug-in estimate of the minimal in-class risk: the smallest empirical
/// risk among the candidate separators.
pub fn plug_in_min_risk<S: Separator>(
    data: &Dataset,
    candidates: &[S],
    loss: &LossSpec,
) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::invalid("at least one candidate separator required"));
    }
    let mut best = f64::INFINITY;
    for sep in candidates {
        best = best.min(empirical_risk(data, sep, loss)?);
    }
    Ok(best)
}

/// Shattering helper for tests and demos: whether the affine sign family on
/// `ℝ^d` separates the given points (every label assignment realized).
pub fn affine_shatters(points: &[Vec<f64>]) -> bool {
    let n = points.len();
    if n == 0 {
        return true;
    }
    if n > 20 {
        return false; // exhaustive check is infeasible; callers keep n small
    }
    let d = points[0].len();
    (0u32..(1 << n)).all(|mask| {
        let labels: Vec<f64> = (0..n)
            .map(|i| if mask & (1 << i) != 0 { 1.0 } else { -1.0 })
            .collect();
        affine_realizes(points, &labels, d)
    })
}

// Small LP-free feasibility check: a labeling is realizable iff strictly
// separable; found by a perceptron run with margin boosting. Adequate for
// the tiny point sets used in tests.
fn affine_realizes(points: &[Vec<f64>], labels: &[f64], d: usize) -> bool {
    let mut w = vec![0.0; d + 1];
    for _ in 0..200_000 {
        let mut updated = false;
        for (x, &y) in points.iter().zip(labels) {
            let mut g = w[d];
            for (wi, xi) in w[..d].iter().zip(x) {
                g += wi * xi;
            }
            if y * g <= 1e-12 {
                for (wi, xi) in w[..d].iter_mut().zip(x) {
                    *wi += y * xi;
                }
                w[d] += y;
                updated = true;
            }
        }
        if !updated {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    const REL: f64 = 1e-9;

    fn assert_rel(got: f64, want: f64) {
        assert!(
            (got - want).abs() <= REL * want.abs().max(1e-300),
            "got {got}, want {want}"
        );
    }

    #[test]
    fn a_of_p_frozen_values() {
        // independently computed with 40-digit arithmetic
        assert_rel(a_of_p(3.0).unwrap(), 1.2599210498948732);
        assert_rel(a_of_p(4.0).unwrap(), 1.1397535284773888);
        assert!(a_of_p(2.0).is_err());
        assert!(a_of_p(1.5).is_err());
    }

    #[test]
    fn a_of_p_tends_to_one_from_above() {
        let a10 = a_of_p(10.0).unwrap();
        let a100 = a_of_p(100.0).unwrap();
        let a1000 = a_of_p(1000.0).unwrap();
        assert!(a10 > a100 && a100 > a1000 && a1000 > 1.0);
        assert_rel(a10, 1.0373714004169437);
        assert_rel(a100, 1.0031242462597165);
        assert_rel(a1000, 1.0003074008921663);
    }

    #[test]
    fn a_of_p_exceeds_its_first_factor() {
        for p in [2.1, 2.5, 3.0, 5.0, 20.0, 500.0] {
            let a = a_of_p(p).unwrap();
            assert!(a.is_finite());
            assert!(a > 2f64.powf(-1.0 / p));
        }
    }

    #[test]
    fn vc_epsilon_frozen_value_and_monotonicity() {
        assert_rel(vc_epsilon(1000, 10, 0.05).unwrap(), 0.2722333899228568);
        // decreasing in n beyond the hump
        let mut prev = f64::INFINITY;
        for j in 4..=40 {
            let v = vc_epsilon(1u64 << j, 10, 0.05).unwrap();
            assert!(v < prev, "not decreasing at n=2^{j}");
            prev = v;
        }
        assert!(prev < 1e-6);
        // smaller delta → larger value
        assert!(vc_epsilon(1000, 10, 0.01).unwrap() > vc_epsilon(1000, 10, 0.05).unwrap());
    }

    #[test]
    fn vc_dims() {
        assert_eq!(vc_dim_affine(9), 10);
        assert_eq!(vc_dim_hinge_loss_family(9), 11);
        assert_eq!(vc_dim_affine(1), 2);
        assert_eq!(vc_dim_hinge_loss_family(1), 3);
    }

    #[test]
    fn affine_signs_shatter_three_points_not_four_in_plane() {
        use rand::Rng;
        let mut rng = crate::seed::rng_from(37);
        for _ in 0..5 {
            // three points in general position
            let pts: Vec<Vec<f64>> = (0..3)
                .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
                .collect();
            assert!(affine_shatters(&pts), "3 points should shatter: {pts:?}");
        }
        for _ in 0..5 {
            let pts: Vec<Vec<f64>> = (0..4)
                .map(|_| vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)])
                .collect();
            assert!(
                !affine_shatters(&pts),
                "4 points should not shatter: {pts:?}"
            );
        }
    }

    #[test]
    fn relative_bound_regimes() {
        // out of regime: tau*a*sqrt(E) >= 1 at tiny n
        let out = vapnik_relative_bound(&VapnikBoundInputs {
            n: 10,
            h: 10,
            delta: 0.05,
            p: 4.0,
            tau: 2.0,
            min_risk: 1.0,
        })
        .unwrap();
        assert!(!out.in_valid_regime);
        assert!(out.bound_value.is_infinite());

        // zero minimal risk → zero bound in regime
        let zero = vapnik_relative_bound(&VapnikBoundInputs {
            n: 1_000_000,
            h: 3,
            delta: 0.05,
            p: 4.0,
            tau: 2.0,
            min_risk: 0.0,
        })
        .unwrap();
        assert!(zero.in_valid_regime);
        assert_eq!(zero.bound_value, 0.0);
    }

    #[test]
    fn relative_bound_frozen_value() {
        let report = vapnik_relative_bound(&VapnikBoundInputs {
            n: 1_000_000,
            h: 3,
            delta: 0.05,
            p: 4.0,
            tau: 2.0,
            min_risk: 0.1,
        })
        .unwrap();
        assert!(report.in_valid_regime);
        // two independent evaluation routes agree to 1e-12 relative:
        // frozen high-precision value of J·v/(1−v)
        let want = 3.272293084472039e-3;
        assert!(
            (report.bound_value - want).abs() <= 1e-12 * want,
            "got {}",
            report.bound_value
        );
        assert_rel(report.vc_epsilon, 1.9322124065920862e-4);
    }

    #[test]
    fn numeric_inversion_round_trip() {
        let (delta, h, j, tau, p) = (0.05, 3u32, 1.0, 2.0, 4.0);
        let bound_at = |n: u64| {
            vapnik_relative_bound(&VapnikBoundInputs {
                n,
                h,
                delta,
                p,
                tau,
                min_risk: j,
            })
            .unwrap()
            .bound_value
        };
        for eps in [0.5, 0.2, 0.1, 0.05, 0.01] {
            let n = info_complexity_numeric(eps, delta, h, j, tau, p).unwrap();
            assert!(bound_at(n) <= eps, "eps={eps} n={n}");
            if n > 1 {
                assert!(bound_at(n - 1) > eps, "eps={eps} n={n}");
            }
        }
        // monotone: smaller eps → larger n
        let mut prev = 0;
        for eps in [0.5, 0.2, 0.1, 0.05, 0.02, 0.01] {
            let n = info_complexity_numeric(eps, delta, h, j, tau, p).unwrap();
            assert!(n >= prev);
            prev = n;
        }
        // zero minimal risk: the bound is 0 once in regime... but at n = 1
        // it is infinite for any inputs, so the smallest feasible n is the
        // regime-entry point; with J = 0 that is where the bound first
        // drops to 0 ≤ eps
        let n0 = info_complexity_numeric(1e-9, delta, h, 0.0, tau, p).unwrap();
        let entry = vapnik_relative_bound(&VapnikBoundInputs {
            n: n0,
            h,
            delta,
            p,
            tau,
            min_risk: 0.0,
        })
        .unwrap();
        assert!(entry.in_valid_regime);
        assert_eq!(entry.bound_value, 0.0);
        // a huge eps is satisfied at the first in-regime n
        let n_huge = info_complexity_numeric(1e12, delta, h, j, tau, p).unwrap();
        assert!(bound_at(n_huge) <= 1e12 && bound_at(n_huge - 1) > 1e12);
    }

    #[test]
    fn relative_bound_is_nonincreasing_on_the_tail() {
        let bound_at = |n: u64| {
            vapnik_relative_bound(&VapnikBoundInputs {
                n,
                h: 5,
                delta: 0.05,
                p: 4.0,
                tau: 2.0,
                min_risk: 0.7,
            })
            .unwrap()
        };
        let mut entered = false;
        let mut prev = f64::INFINITY;
        for j in 0..40 {
            let report = bound_at(100 + (1u64 << j));
            if report.in_valid_regime {
                entered = true;
                assert!(report.bound_value <= prev, "bound grew after regime entry");
                prev = report.bound_value;
            } else {
                assert!(!entered, "left the regime after entering it on the tail");
            }
        }
        assert!(entered);
    }

    #[test]
    fn inversion_round_trip_consistency() {
        // for any in-regime n*, inverting the bound value at n* yields at
        // most n*
        let (delta, h, j, tau, p) = (0.05, 4u32, 0.6, 1.8, 4.0);
        for n_star in [500u64, 2_000, 50_000, 1_000_000] {
            let report = vapnik_relative_bound(&VapnikBoundInputs {
                n: n_star,
                h,
                delta,
                p,
                tau,
                min_risk: j,
            })
            .unwrap();
            if !report.in_valid_regime {
                continue;
            }
            let n = info_complexity_numeric(report.bound_value, delta, h, j, tau, p).unwrap();
            assert!(n <= n_star, "inverting bound({n_star}) gave {n}");
        }
    }

    #[test]
    fn asymptotic_frozen_value_and_regime() {
        let v = info_complexity_asymptotic(0.1, 0.05, 1, 1.0, 2.0, 4.0).unwrap();
        assert_rel(v, 33915.511115867368);
        // linear in (d+2): d=4 gives (6/3)x the d=1 value
        let v2 = info_complexity_asymptotic(0.1, 0.05, 4, 1.0, 2.0, 4.0).unwrap();
        assert_rel(v2 / v, 2.0);
        assert!(matches!(
            info_complexity_asymptotic(0.5, 0.05, 1, 1.0, 2.0, 4.0),
            Err(Error::OutOfRegime(_))
        ));
        // dominated by the 2 ln(1/eps)/eps^2 term as eps → 0
        let mut prev_ratio = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6, 1e-8] {
            let full = info_complexity_asymptotic(eps, 0.05, 1, 1.0, 2.0, 4.0).unwrap();
            let first =
                3.0 * (4.0 * a_of_p(4.0).unwrap()).powi(2) * 2.0 * (1.0 / eps).ln() / (eps * eps);
            let ratio = full / first;
            assert!(ratio > 1.0 && ratio < prev_ratio);
            prev_ratio = ratio;
        }
    }

    #[test]
    fn chebyshev_examples() {
        assert_rel(chebyshev_deviation_bound(2.0, 0.04, 10_000).unwrap(), 0.1);
        assert_eq!(chebyshev_deviation_bound(0.0, 0.5, 10).unwrap(), 0.0);
        let b1 = chebyshev_deviation_bound(1.0, 0.1, 100).unwrap();
        let b4 = chebyshev_deviation_bound(1.0, 0.1, 400).unwrap();
        assert_rel(b1 / b4, 2.0);
    }

    #[test]
    fn poly_bound_reduces_to_chebyshev_for_constant_loss() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0u32, 0u32), 3.0);
        let out = poly_risk_deviation_bound(&PolyDeviationInputs {
            coeffs,
            l1_bound: 5.0,
            moments: vec![1.0],
            delta: 0.04,
            n: 10_000,
            term_count: 1,
        })
        .unwrap();
        assert_rel(out.bound, 3.0 / 20.0);
        assert_rel(out.confidence, 1.0 - 0.04);
        assert!(!out.vacuous);
    }

    #[test]
    fn poly_bound_scales_with_constraint_radius() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((2u32, 0u32), 1.0);
        let mk = |m: f64| {
            poly_risk_deviation_bound(&PolyDeviationInputs {
                coeffs: coeffs.clone(),
                l1_bound: m,
                moments: vec![1.0, 2.0, 5.0],
                delta: 0.05,
                n: 100,
                term_count: 3,
            })
            .unwrap()
            .bound
        };
        // the i = 2 term carries (2M)^2, so doubling M quadruples it
        assert_rel(mk(2.0) / mk(1.0), 4.0);
    }

    #[test]
    fn poly_bound_matches_term_expansion_oracle() {
        // squared error (g−y)² = g² − 2gy + y² with synthetic moments
        let mut coeffs = BTreeMap::new();
        coeffs.insert((2u32, 0u32), 1.0);
        coeffs.insert((1u32, 1u32), -2.0);
        coeffs.insert((0u32, 2u32), 1.0);
        let moments = vec![1.0, 3.0, 17.0];
        let (m, delta, n) = (1.5, 0.02, 400u64);
        let out = poly_risk_deviation_bound(&PolyDeviationInputs {
            coeffs,
            l1_bound: m,
            moments: moments.clone(),
            delta,
            n,
            term_count: 6,
        })
        .unwrap();
        // oracle: write out the three terms by hand
        let two_m = 2.0 * m;
        let by_hand = (1.0 * moments[2].sqrt() * two_m * two_m
            + 2.0 * moments[1].sqrt() * two_m
            + 1.0 * moments[0].sqrt())
            / (delta * n as f64).sqrt();
        assert_rel(out.bound, by_hand);
    }

    #[test]
    fn poly_bound_vacuous_confidence_flag() {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0u32, 0u32), 1.0);
        let out = poly_risk_deviation_bound(&PolyDeviationInputs {
            coeffs,
            l1_bound: 1.0,
            moments: vec![1.0],
            delta: 0.3,
            n: 100,
            term_count: 5,
        })
        .unwrap();
        assert!(out.vacuous);
        assert_eq!(out.confidence, 0.0);
    }

    #[test]
    fn clipped_bound_examples() {
        // constant loss equal to the outside value → zero deviation
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0u32, 0u32), 4.0);
        let out = clipped_poly_deviation_bound(&coeffs, 1.0, 4.0, 0.05, 100, 1).unwrap();
        assert_eq!(out.bound, 0.0);

        // M0=1, single c20=1, C=0, delta=0.01, n=1e4 → 1/sqrt(100) = 0.1
        let mut coeffs = BTreeMap::new();
        coeffs.insert((2u32, 0u32), 1.0);
        let out = clipped_poly_deviation_bound(&coeffs, 1.0, 0.0, 0.01, 10_000, 1).unwrap();
        assert_rel(out.bound, 0.1);
        assert_rel(out.confidence, 0.99);
    }

    #[test]
    fn moment_estimates() {
        let zeros = Dataset::from_parts(vec![vec![0.0, 0.0]; 3], vec![1.0, -1.0, 1.0]).unwrap();
        assert_eq!(estimate_moments(&zeros, 3).unwrap(), vec![1.0; 4]);

        let unit = Dataset::from_parts(vec![vec![1.0]], vec![1.0]).unwrap();
        let m = estimate_moments(&unit, 3).unwrap();
        for (i, &v) in m.iter().enumerate() {
            assert_rel(v, 4f64.powi(i as i32));
        }

        // brute-force re-summation on random data
        use rand::Rng;
        let mut rng = crate::seed::rng_from(4);
        let xs: Vec<Vec<f64>> = (0..40)
            .map(|_| (0..3).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let ys = vec![1.0; 40];
        let data = Dataset::from_parts(xs.clone(), ys).unwrap();
        let m = estimate_moments(&data, 4).unwrap();
        for i in 0..=4usize {
            let oracle: f64 = xs
                .iter()
                .map(|x| {
                    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                    (norm + 1.0).powi(2 * i as i32)
                })
                .sum::<f64>()
                / 40.0;
            let got = if i == 0 { 1.0 } else { m[i] };
            assert!((got - oracle).abs() <= 1e-12 * oracle.abs());
        }
    }

    #[test]
    fn inf_swap_examples() {
        let f = [3.0, 1.0, 2.0];
        let check = check_inf_swap(&f, &f).unwrap();
        assert!(check.holds);
        assert_eq!(check.lhs, 0.0);
        assert_eq!(check.argmin_index, 1);

        // shifted function shares the argmin: lhs 0, rhs 2|c|
        let g: Vec<f64> = f.iter().map(|v| v + 0.75).collect();
        let check = check_inf_swap(&f, &g).unwrap();
        assert!(check.holds);
        assert_eq!(check.lhs, 0.0);
        assert_rel(check.rhs, 1.5);

        assert!(check_inf_swap(&f, &[1.0]).is_err());
        assert!(check_inf_swap(&[], &[]).is_err());
    }

    #[test]
    fn inf_swap_randomized() {
        use rand::Rng;
        let mut rng = crate::seed::rng_from(99);
        for _ in 0..20_000 {
            let len = rng.random_range(1..=100);
            let f: Vec<f64> = (0..len).map(|_| rng.random_range(-10.0..10.0)).collect();
            let g: Vec<f64> = (0..len).map(|_| rng.random_range(-10.0..10.0)).collect();
            assert!(check_inf_swap(&f, &g).unwrap().holds);
        }
    }
}
