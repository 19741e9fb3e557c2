//! Two-Gaussian classification laboratory: reproducible sampling, the
//! closed-form optimal quadratic decision surface, Monte Carlo and exact
//! weighted-risk evaluation, the covariance-difference criterion, and
//! algorithmic-error estimation for polynomial separator classes.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::model::{AffineSeparator, Classifier, Dataset, LabeledSample, LossSpec};
use crate::seed::{derive_seed, rng_from};
use crate::solver::{train_polynomial, SolverConfig, TrainedModel};

/// Largest supported feature dimension for the Gaussian laboratory.
pub const MAX_GAUSSIAN_DIM: usize = 64;

fn std_normal_cdf(x: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("unit normal").cdf(x)
}

fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// One class-conditional Gaussian `N(μ, Σ)` with Σ symmetric positive
/// definite. The Cholesky factor, precision matrix, and log-determinant are
/// cached at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianClass {
    mean: DVector<f64>,
    covariance: DMatrix<f64>,
    chol_l: DMatrix<f64>,
    precision: DMatrix<f64>,
    log_det: f64,
}

impl GaussianClass {
    pub fn new(mean: Vec<f64>, covariance_rows: Vec<Vec<f64>>) -> Result<Self> {
        let d = mean.len();
        if d == 0 || d > MAX_GAUSSIAN_DIM {
            return Err(Error::invalid(format!(
                "dimension must lie in 1..={MAX_GAUSSIAN_DIM}"
            )));
        }
        if covariance_rows.len() != d || covariance_rows.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: covariance_rows.len(),
            });
        }
        if mean.iter().any(|v| !v.is_finite())
            || covariance_rows.iter().flatten().any(|v| !v.is_finite())
        {
            return Err(Error::invalid("Gaussian parameters must be finite"));
        }
        let flat: Vec<f64> = covariance_rows.into_iter().flatten().collect();
        let sigma = DMatrix::from_row_slice(d, d, &flat);
        for i in 0..d {
            for j in 0..d {
                if (sigma[(i, j)] - sigma[(j, i)]).abs() > 1e-12 {
                    return Err(Error::NotSpd);
                }
            }
        }
        let sym = (&sigma + sigma.transpose()) * 0.5;
        let chol = sym.clone().cholesky().ok_or(Error::NotSpd)?;
        let chol_l: DMatrix<f64> = chol.l();
        let log_det = 2.0 * (0..d).map(|i| chol_l[(i, i)].ln()).sum::<f64>();
        let precision = chol.inverse();
        Ok(Self {
            mean: DVector::from_vec(mean),
            covariance: sym,
            chol_l,
            precision,
            log_det,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn precision(&self) -> &DMatrix<f64> {
        &self.precision
    }

    /// Log density at `x`; kept in log space so distant points and high
    /// dimensions do not underflow.
    pub fn log_density(&self, x: &[f64]) -> Result<f64> {
        let d = self.dim();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x.len(),
            });
        }
        let diff = DVector::from_row_slice(x) - &self.mean;
        // solve L z = diff, then the quadratic form is ‖z‖²
        let z = self
            .chol_l
            .clone()
            .solve_lower_triangular(&diff)
            .ok_or(Error::NotSpd)?;
        let quad = z.norm_squared();
        Ok(-0.5 * (d as f64 * (2.0 * std::f64::consts::PI).ln() + self.log_det + quad))
    }

    fn sample_into<R: Rng>(&self, rng: &mut R, out: &mut Vec<f64>) {
        let d = self.dim();
        let z: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
        out.clear();
        for i in 0..d {
            let mut acc = self.mean[i];
            for j in 0..=i {
                acc += self.chol_l[(i, j)] * z[j];
            }
            out.push(acc);
        }
    }
}

/// A pair of class-conditional Gaussians with risk weights `β` and sampling
/// priors `π`. The weights enter the risk functional; the priors drive
/// label sampling. Both default to the same values but are independent.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPair {
    pos: GaussianClass,
    neg: GaussianClass,
    beta1: f64,
    beta2: f64,
    prior1: f64,
    prior2: f64,
}

impl GaussianPair {
    pub fn new(pos: GaussianClass, neg: GaussianClass, beta1: f64, beta2: f64) -> Result<Self> {
        let (prior1, prior2) = (beta1, beta2);
        Self::with_priors(pos, neg, beta1, beta2, prior1, prior2)
    }

    pub fn with_priors(
        pos: GaussianClass,
        neg: GaussianClass,
        beta1: f64,
        beta2: f64,
        prior1: f64,
        prior2: f64,
    ) -> Result<Self> {
        if pos.dim() != neg.dim() {
            return Err(Error::DimensionMismatch {
                expected: pos.dim(),
                got: neg.dim(),
            });
        }
        for (name, a, b) in [("risk weights", beta1, beta2), ("priors", prior1, prior2)] {
            if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                return Err(Error::invalid(format!("{name} must lie in [0, 1]")));
            }
            if (a + b - 1.0).abs() > 1e-12 {
                return Err(Error::invalid(format!("{name} must sum to 1")));
            }
        }
        Ok(Self {
            pos,
            neg,
            beta1,
            beta2,
            prior1,
            prior2,
        })
    }

    pub fn dim(&self) -> usize {
        self.pos.dim()
    }

    pub fn positive(&self) -> &GaussianClass {
        &self.pos
    }

    pub fn negative(&self) -> &GaussianClass {
        &self.neg
    }

    pub fn weights(&self) -> (f64, f64) {
        (self.beta1, self.beta2)
    }

    pub fn priors(&self) -> (f64, f64) {
        (self.prior1, self.prior2)
    }

    /// Log of `β·ρ(x)` for each class; the sign of the difference drives
    /// the optimal classification.
    pub fn weighted_log_densities(&self, x: &[f64]) -> Result<(f64, f64)> {
        let lp = self.pos.log_density(x)? + self.beta1.ln();
        let ln = self.neg.log_density(x)? + self.beta2.ln();
        Ok((lp, ln))
    }
}

/// Quadratic decision surface `q(x) = xᵀAx + b·x + c` with the convention
/// that `q(x) ≤ 0` classifies positive.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticSurface {
    quad: DMatrix<f64>,
    linear: DVector<f64>,
    offset: f64,
}

impl QuadraticSurface {
    pub fn new(quad: DMatrix<f64>, linear: DVector<f64>, offset: f64) -> Result<Self> {
        let d = linear.len();
        if quad.nrows() != d || quad.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: quad.nrows(),
            });
        }
        for i in 0..d {
            for j in 0..d {
                if (quad[(i, j)] - quad[(j, i)]).abs() > 1e-12 {
                    return Err(Error::invalid("quadratic term must be symmetric"));
                }
            }
        }
        Ok(Self {
            quad,
            linear,
            offset,
        })
    }

    pub fn quad(&self) -> &DMatrix<f64> {
        &self.quad
    }

    pub fn linear(&self) -> &DVector<f64> {
        &self.linear
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let d = self.linear.len();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x.len(),
            });
        }
        let xv = DVector::from_row_slice(x);
        Ok((&self.quad * &xv).dot(&xv) + self.linear.dot(&xv) + self.offset)
    }

    pub fn to_text(&self) -> String {
        let d = self.linear.len();
        let mut out = String::new();
        let _ = writeln!(out, "quad d={d}");
        for i in 0..d {
            let row: Vec<String> = (0..d)
                .map(|j| format!("{:.16e}", self.quad[(i, j)]))
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        let b: Vec<String> = (0..d).map(|i| format!("{:.16e}", self.linear[i])).collect();
        let _ = writeln!(out, "{}", b.join(" "));
        let _ = writeln!(out, "{:.16e}", self.offset);
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty surface file".into(),
        })?;
        let d: usize = header
            .strip_prefix("quad d=")
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse {
                line: 1,
                msg: "expected header `quad d=<d>`".into(),
            })?;
        let mut parse_row = |lineno: usize, want: usize| -> Result<Vec<f64>> {
            let line = lines.next().ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "unexpected end of surface file".into(),
            })?;
            let row: Vec<f64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad number {t}"),
                    })
                })
                .collect::<Result<_>>()?;
            if row.len() != want {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected {want} values, got {}", row.len()),
                });
            }
            Ok(row)
        };
        let mut quad = DMatrix::zeros(d, d);
        for i in 0..d {
            let row = parse_row(i + 2, d)?;
            for (j, v) in row.into_iter().enumerate() {
                quad[(i, j)] = v;
            }
        }
        let linear = DVector::from_vec(parse_row(d + 2, d)?);
        let offset = parse_row(d + 3, 1)?[0];
        QuadraticSurface::new(quad, linear, offset)
    }
}

impl Classifier for QuadraticSurface {
    fn input_dim(&self) -> usize {
        self.linear.len()
    }

    /// `q(x) ≤ 0` classifies positive: at such points the weighted positive
    /// density is at least the weighted negative density.
    fn classify(&self, x: &[f64]) -> Result<f64> {
        Ok(if self.eval(x)? <= 0.0 { 1.0 } else { -1.0 })
    }
}

/// Draw a reproducible labeled sample: each label is `+1` with probability
/// `π₁`, then `x` comes from the corresponding class via the Cholesky
/// transform of independent standard normals.
pub fn sample_pair(pair: &GaussianPair, n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let mut rng = rng_from(seed);
    let mut samples = Vec::with_capacity(n);
    let mut buf = Vec::with_capacity(pair.dim());
    for _ in 0..n {
        let u: f64 = rng.random();
        let (class, label) = if u < pair.prior1 {
            (&pair.pos, 1.0)
        } else {
            (&pair.neg, -1.0)
        };
        class.sample_into(&mut rng, &mut buf);
        samples.push(LabeledSample::new(buf.clone(), label)?);
    }
    Dataset::new(samples, pair.dim())
}

/// The risk-optimal decision surface for the weighted misclassification
/// risk: `q(x) ≤ 0 ⇔ β₁ρ₁(x) ≥ β₂ρ₂(x)` with
/// `A = Σ₁⁻¹ − Σ₂⁻¹`, `b = −2(Σ₁⁻¹μ₁ − Σ₂⁻¹μ₂)` and
/// `c = μ₁ᵀΣ₁⁻¹μ₁ − μ₂ᵀΣ₂⁻¹μ₂ + ln(β₂² det Σ₁ / (β₁² det Σ₂))`.
///
/// The constant is derived from the log-density comparison (twice the
/// difference of log densities), which makes the sign equivalence above
/// exact; it is verified against direct density comparison in tests.
pub fn bayes_quadratic_surface(pair: &GaussianPair) -> Result<QuadraticSurface> {
    let (beta1, beta2) = pair.weights();
    if beta1 <= 0.0 || beta2 <= 0.0 {
        return Err(Error::invalid(
            "optimal surface requires strictly positive risk weights",
        ));
    }
    let p1 = pair.pos.precision();
    let p2 = pair.neg.precision();
    let quad = {
        let a = p1 - p2;
        (&a + a.transpose()) * 0.5
    };
    let p1m1 = p1 * &pair.pos.mean;
    let p2m2 = p2 * &pair.neg.mean;
    let linear = (&p1m1 - &p2m2) * -2.0;
    let offset = pair.pos.mean.dot(&p1m1) - pair.neg.mean.dot(&p2m2)
        + (pair.pos.log_det - pair.neg.log_det)
        + 2.0 * (beta2.ln() - beta1.ln());
    QuadraticSurface::new(quad, linear, offset)
}

/// A Monte Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRisk {
    pub estimate: f64,
    pub standard_error: f64,
}

/// Monte Carlo estimate of the weighted risk
/// `β₁ P₁(classified −1) + β₂ P₂(classified +1)`.
///
/// Each class-conditional error probability is estimated from `n_mc` draws
/// of that class (the weights enter only as multipliers), using
/// independent sub-streams derived from `seed`.
pub fn weighted_risk_mc<C: Classifier + ?Sized>(
    pair: &GaussianPair,
    classifier: &C,
    n_mc: usize,
    seed: u64,
) -> Result<McRisk> {
    if n_mc < 100 {
        return Err(Error::invalid("n_mc must be at least 100"));
    }
    let (beta1, beta2) = pair.weights();
    let mut buf = Vec::with_capacity(pair.dim());
    let mut error_fraction = |class: &GaussianClass, wrong_label: f64, salt: u64| -> Result<f64> {
        let mut rng = rng_from(derive_seed(seed, salt));
        let mut errors = 0usize;
        for _ in 0..n_mc {
            class.sample_into(&mut rng, &mut buf);
            if classifier.classify(&buf)? == wrong_label {
                errors += 1;
            }
        }
        Ok(errors as f64 / n_mc as f64)
    };
    let p1 = error_fraction(&pair.pos, -1.0, 1)?;
    let p2 = error_fraction(&pair.neg, 1.0, 2)?;
    let n = n_mc as f64;
    let var = beta1 * beta1 * p1 * (1.0 - p1) / n + beta2 * beta2 * p2 * (1.0 - p2) / n;
    Ok(McRisk {
        estimate: beta1 * p1 + beta2 * p2,
        standard_error: var.sqrt(),
    })
}

/// Exact weighted risk of an affine separator when both classes share one
/// covariance: `w·x + b` is univariate Gaussian under each class, so both
/// class-conditional error probabilities are normal tail values.
pub fn affine_weighted_risk_exact(pair: &GaussianPair, sep: &AffineSeparator) -> Result<f64> {
    let d = pair.dim();
    if sep.w.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: sep.w.len(),
        });
    }
    let diff = (pair.pos.covariance() - pair.neg.covariance()).abs().max();
    if diff > 1e-10 {
        return Err(Error::NotApplicable(format!(
            "exact affine risk requires equal covariances (max difference {diff:.2e})"
        )));
    }
    let w = DVector::from_row_slice(&sep.w);
    let s2 = (pair.pos.covariance() * &w).dot(&w);
    if !(s2 > 0.0) {
        return Err(Error::invalid("exact affine risk requires w ≠ 0"));
    }
    let s = s2.sqrt();
    let m1 = w.dot(&pair.pos.mean) + sep.b;
    let m2 = w.dot(&pair.neg.mean) + sep.b;
    let (beta1, beta2) = pair.weights();
    // positive class errs when g < 0; negative class errs when g ≥ 0
    Ok(beta1 * std_normal_cdf(-m1 / s) + beta2 * (1.0 - std_normal_cdf(-m2 / s)))
}

/// Exact squared-loss risk `E (g(x) − y)²` of an affine separator under the
/// pair's sampling mixture (priors, labels ±1). Closed form from the class
/// means and covariances; used as the evaluation oracle in rate
/// experiments.
pub fn squared_risk_exact(pair: &GaussianPair, sep: &AffineSeparator) -> Result<f64> {
    let d = pair.dim();
    if sep.w.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: sep.w.len(),
        });
    }
    let w = DVector::from_row_slice(&sep.w);
    let (pi1, pi2) = pair.priors();
    let mut risk = 0.0;
    for (pi, class, y) in [(pi1, &pair.pos, 1.0), (pi2, &pair.neg, -1.0)] {
        let mean = w.dot(&class.mean) + sep.b - y;
        let var = (class.covariance() * &w).dot(&w);
        risk += pi * (mean * mean + var);
    }
    Ok(risk)
}

/// Population least-squares optimum over affine separators for the pair's
/// sampling mixture, with its exact risk.
pub fn squared_risk_minimizer(pair: &GaussianPair) -> Result<(AffineSeparator, f64)> {
    let d = pair.dim();
    let (pi1, pi2) = pair.priors();
    let mut h = DMatrix::zeros(d + 1, d + 1);
    let mut v = DVector::zeros(d + 1);
    for (pi, class, y) in [(pi1, &pair.pos, 1.0), (pi2, &pair.neg, -1.0)] {
        let mu = &class.mean;
        for i in 0..d {
            for j in 0..d {
                h[(i, j)] += pi * (class.covariance()[(i, j)] + mu[i] * mu[j]);
            }
            h[(i, d)] += pi * mu[i];
            h[(d, i)] += pi * mu[i];
            v[i] += pi * y * mu[i];
        }
        h[(d, d)] += pi;
        v[d] += pi * y;
    }
    let theta = h
        .lu()
        .solve(&v)
        .ok_or_else(|| Error::invalid("population second-moment matrix is singular"))?;
    let sep = AffineSeparator::new(theta.as_slice()[..d].to_vec(), theta[d])?;
    let risk = squared_risk_exact(pair, &sep)?;
    Ok((sep, risk))
}

/// Exact hinge risk `E (1 − y g(x))₊` of an affine separator under the
/// pair's sampling mixture: each class contributes a censored-normal mean.
pub fn hinge_risk_exact(pair: &GaussianPair, sep: &AffineSeparator) -> Result<f64> {
    let d = pair.dim();
    if sep.w.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: sep.w.len(),
        });
    }
    let w = DVector::from_row_slice(&sep.w);
    let (pi1, pi2) = pair.priors();
    let mut risk = 0.0;
    for (pi, class, y) in [(pi1, &pair.pos, 1.0), (pi2, &pair.neg, -1.0)] {
        let m = 1.0 - y * (w.dot(&class.mean) + sep.b);
        let s2 = (class.covariance() * &w).dot(&w);
        let contribution = if s2 > 0.0 {
            let s = s2.sqrt();
            m * std_normal_cdf(m / s) + s * std_normal_pdf(m / s)
        } else {
            m.max(0.0)
        };
        risk += pi * contribution;
    }
    Ok(risk)
}

/// Matrix norm choice for the covariance-difference criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixNorm {
    Frobenius,
    Spectral,
}

/// Size of `‖Σ₁⁻¹ − Σ₂⁻¹‖`: small values mean a quadratic separator adds
/// little over an affine one. Frobenius is the default choice.
pub fn precision_difference_norm(pair: &GaussianPair, norm: MatrixNorm) -> Result<f64> {
    let diff = pair.pos.precision() - pair.neg.precision();
    Ok(match norm {
        MatrixNorm::Frobenius => diff.norm(),
        MatrixNorm::Spectral => diff
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(0.0, f64::max),
    })
}

/// Estimated approximation error of the degree-`k` class together with the
/// quantities it was computed from.
#[derive(Debug, Clone)]
pub struct AlgErrorEstimate {
    /// `max(raw, 0)` — the reported approximation-error estimate.
    pub estimate: f64,
    /// Signed difference of the two risk estimates.
    pub raw: f64,
    pub standard_error: f64,
    pub model_risk: McRisk,
    pub bayes_risk: McRisk,
    /// The hinge-trained degree-`k` reference model.
    pub model: TrainedModel,
}

/// Estimate the approximation error of the degree-`k` polynomial class:
/// weighted risk of a hinge model trained on `n_train` samples minus the
/// optimal surface's weighted risk. Both risks are evaluated with the same
/// derived Monte Carlo streams so the difference is low-variance; the raw
/// signed value is kept alongside the clamped estimate.
pub fn algorithmic_error_estimate(
    pair: &GaussianPair,
    k: u32,
    n_train: usize,
    n_mc: usize,
    seed: u64,
    solver: &SolverConfig,
) -> Result<AlgErrorEstimate> {
    if k == 0 {
        return Err(Error::invalid("degree must be at least 1"));
    }
    let data = sample_pair(pair, n_train, derive_seed(seed, 0xA1))?;
    let mut config = solver.clone();
    config.seed = derive_seed(seed, 0xA2);
    let model = train_polynomial(&data, k, &LossSpec::Hinge, &config)?;
    let surface = bayes_quadratic_surface(pair)?;
    let eval_seed = derive_seed(seed, 0xA3);
    let model_risk = weighted_risk_mc(pair, &model.separator, n_mc, eval_seed)?;
    let bayes_risk = weighted_risk_mc(pair, &surface, n_mc, eval_seed)?;
    let raw = model_risk.estimate - bayes_risk.estimate;
    let standard_error = model_risk.standard_error.hypot(bayes_risk.standard_error);
    Ok(AlgErrorEstimate {
        estimate: raw.max(0.0),
        raw,
        standard_error,
        model_risk,
        bayes_risk,
        model,
    })
}

/// Taylor remainder bound `A · r^{K+1} / (K+1)!` on the approximation error
/// left after matching all derivatives up to order `K` on a radius-`r`
/// ball, given a uniform directional-derivative bound `A`.
pub fn taylor_remainder_bound(derivative_bound: f64, radius: f64, order: u32) -> Result<f64> {
    if !(derivative_bound >= 0.0) || !derivative_bound.is_finite() {
        return Err(Error::invalid(
            "derivative bound must be finite and non-negative",
        ));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::invalid("radius must be finite and non-negative"));
    }
    let mut acc = derivative_bound;
    for j in 1..=order as u64 + 1 {
        acc *= radius / j as f64;
    }
    Ok(acc)
}
