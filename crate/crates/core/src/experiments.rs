//! Experiment harnesses: log-log rate fitting, the error decomposition into
//! estimation and approximation parts, degree-versus-sample-size search,
//! the combined risk bound for lifted polynomial classes, and deviation
//! rate checks.

use rand_distr::{Binomial, Distribution};

use crate::bounds::{plug_in_min_risk, plug_in_tau, vapnik_relative_bound, VapnikBoundInputs};
use crate::error::{Error, Result};
use crate::gaussian::{
    algorithmic_error_estimate, sample_pair, squared_risk_exact, squared_risk_minimizer,
    GaussianPair,
};
use crate::model::{monomial_count, AffineSeparator, LossSpec, SeparatorModel};
use crate::seed::{derive_seed, rng_from};
use crate::solver::{train_linear, train_polynomial, SolverConfig};

/// Least-squares fit of `ln error` against `ln n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    /// Fitted slope: the empirical decay exponent.
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<(u64, f64)>,
}

/// Ordinary least squares on `(ln n, ln error)`. Requires at least four
/// points with distinct `n ≥ 1` and strictly positive errors.
pub fn fit_rate(points: &[(u64, f64)]) -> Result<RateFit> {
    if points.len() < 4 {
        return Err(Error::invalid("rate fit requires at least 4 points"));
    }
    for &(n, e) in points {
        if n == 0 {
            return Err(Error::invalid("sample sizes must be at least 1"));
        }
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::invalid(format!(
                "errors must be positive and finite for the log fit, got {e}"
            )));
        }
    }
    let mut seen = points.iter().map(|&(n, _)| n).collect::<Vec<_>>();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != points.len() {
        return Err(Error::invalid("sample sizes must be distinct"));
    }

    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, e)| e.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let exponent = sxy / sxx;
    let intercept = ybar - exponent * xbar;
    let ss_tot: f64 = ys.iter().map(|y| (y - ybar) * (y - ybar)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let fit = intercept + exponent * x;
            (y - fit) * (y - fit)
        })
        .sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok(RateFit {
        exponent,
        intercept,
        r_squared,
        points: points.to_vec(),
    })
}

/// Shared parameters for the decomposition experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentParams {
    /// Independent training datasets per estimate.
    pub trials: usize,
    /// Monte Carlo draws per class for each risk evaluation.
    pub n_mc: usize,
    /// Training-set size for the large-sample in-class reference model.
    pub ref_train_n: usize,
    /// Sample size for the plug-in moment-ratio and minimal-risk estimates.
    pub plug_in_n: usize,
    pub delta: f64,
    pub p: f64,
    pub solver: SolverConfig,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            trials: 200,
            n_mc: 20_000,
            ref_train_n: 100_000,
            plug_in_n: 4_096,
            delta: 0.05,
            p: 4.0,
            solver: SolverConfig::default(),
        }
    }
}

/// Estimated error decomposition at one `(n, k)` cell.
///
/// All risks are weighted misclassification risks estimated by Monte
/// Carlo. `e_total = e_inf + e_alg` holds by construction up to the
/// clamping of `e_alg` at zero, which never exceeds its standard error.
/// The in-class reference risk is the ERM model trained on `ref_train_n`
/// samples, a proxy labeled as such: the exact in-class optimum is not
/// computable.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport {
    pub n: usize,
    pub k: u32,
    /// Estimation error: mean trained-model risk minus reference risk.
    pub e_inf: f64,
    pub e_inf_se: f64,
    /// Approximation error of the degree-`k` class.
    pub e_alg: f64,
    pub e_alg_se: f64,
    /// Mean trained-model risk minus optimal-surface risk.
    pub e_total: f64,
    pub e_total_se: f64,
    /// Combined risk bound for the lifted class at these plug-in constants.
    pub bound_rhs: f64,
}

impl DecompositionReport {
    pub const CSV_HEADER: &'static str =
        "n,k,e_inf,e_inf_se,e_alg,e_alg_se,e_total,e_total_se,bound";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.n,
            self.k,
            self.e_inf,
            self.e_inf_se,
            self.e_alg,
            self.e_alg_se,
            self.e_total,
            self.e_total_se,
            self.bound_rhs
        )
    }
}

/// Estimate the decomposition of the expected excess risk of degree-`k`
/// training at sample size `n` over `params.trials` independent seeded
/// datasets.
pub fn estimate_error_decomposition(
    pair: &GaussianPair,
    loss: &LossSpec,
    n: usize,
    k: u32,
    params: &ExperimentParams,
    seed: u64,
) -> Result<DecompositionReport> {
    if params.trials < 10 {
        return Err(Error::invalid(
            "decomposition estimates need at least 10 trials",
        ));
    }
    let reference = algorithmic_error_estimate(
        pair,
        k,
        params.ref_train_n,
        params.n_mc,
        derive_seed(seed, 0x5EED_0001),
        &params.solver,
    )?;

    let mut risks = Vec::with_capacity(params.trials);
    let mut models: Vec<SeparatorModel> = Vec::new();
    for trial in 0..params.trials {
        let data = sample_pair(pair, n, derive_seed(seed, 0x1000 + trial as u64))?;
        let mut config = params.solver.clone();
        config.seed = derive_seed(seed, 0x2000 + trial as u64);
        let model = train_polynomial(&data, k, loss, &config)?;
        let mc = crate::gaussian::weighted_risk_mc(
            pair,
            &model.separator,
            params.n_mc,
            derive_seed(seed, 0x3000 + trial as u64),
        )?;
        risks.push(mc.estimate);
        if models.len() < 8 {
            models.push(model.separator);
        }
    }
    let m = risks.len() as f64;
    let mean = risks.iter().sum::<f64>() / m;
    let var = risks.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (m - 1.0);
    let se_mean = (var / m).sqrt();

    let e_inf = mean - reference.model_risk.estimate;
    let e_inf_se = se_mean.hypot(reference.model_risk.standard_error);
    let e_alg = reference.estimate;
    let e_alg_se = reference.standard_error;
    let e_total = mean - reference.bayes_risk.estimate;
    let e_total_se = se_mean.hypot(reference.bayes_risk.standard_error);

    // Plug-in constants for the combined bound, local to this pair.
    let eval_data = sample_pair(pair, params.plug_in_n, derive_seed(seed, 0x5EED_0002))?;
    let tau_k = plug_in_tau(&eval_data, &models, loss, params.p)?;
    let j_k = plug_in_min_risk(&eval_data, &models, loss)?;
    let bound_rhs = lifted_class_risk_bound(
        pair.dim(),
        n as u64,
        k,
        params.delta,
        params.p,
        tau_k,
        j_k,
        e_alg,
        None,
    )?;

    Ok(DecompositionReport {
        n,
        k,
        e_inf,
        e_inf_se,
        e_alg,
        e_alg_se,
        e_total,
        e_total_se,
        bound_rhs,
    })
}

/// Combined risk bound for the degree-`k` lifted class:
/// `J_k τ_k a(p) √ℰ / (1 − τ_k a(p) √ℰ)₊ + e_alg(k)`, with the `O(1/n)`
/// remainder dropped. The VC dimension defaults to the monomial count plus
/// one (the loss-family adjustment, matching `d + 2` at `k = 1`); pass
/// `h_override` to use a different value. Returns `+∞` out of regime.
#[allow(clippy::too_many_arguments)]
pub fn lifted_class_risk_bound(
    d: usize,
    n: u64,
    k: u32,
    delta: f64,
    p: f64,
    tau_k: f64,
    j_k: f64,
    e_alg_k: f64,
    h_override: Option<u32>,
) -> Result<f64> {
    if !(e_alg_k >= 0.0) {
        return Err(Error::invalid("approximation error must be non-negative"));
    }
    let h = match h_override {
        Some(h) => h,
        None => {
            let count = monomial_count(d, k)?;
            u32::try_from(count + 1)
                .map_err(|_| Error::Overflow("VC dimension of the lifted class".into()))?
        }
    };
    let report = vapnik_relative_bound(&VapnikBoundInputs {
        n,
        h,
        delta,
        p,
        tau: tau_k,
        min_risk: j_k,
    })?;
    Ok(report.bound_value + e_alg_k)
}

/// Result of the degree search at fixed sample size.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleSearchReport {
    pub best_k: u32,
    pub table: Vec<DecompositionReport>,
}

/// Estimate the decomposition for every degree `1..=k_max` and return the
/// degree minimizing estimated total error (ties to the smaller degree).
///
/// Every degree is evaluated with the same seed, so all rows share their
/// trial datasets and Monte Carlo streams: the degree comparison is paired
/// and common evaluation noise cancels from the differences.
pub fn scale_search(
    pair: &GaussianPair,
    loss: &LossSpec,
    n: usize,
    k_max: u32,
    params: &ExperimentParams,
    seed: u64,
) -> Result<ScaleSearchReport> {
    if k_max == 0 {
        return Err(Error::invalid("k_max must be at least 1"));
    }
    let mut table = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        table.push(estimate_error_decomposition(
            pair, loss, n, k, params, seed,
        )?);
    }
    let mut best_k = 1;
    let mut best = f64::INFINITY;
    for report in &table {
        if report.e_total < best {
            best = report.e_total;
            best_k = report.k;
        }
    }
    Ok(ScaleSearchReport { best_k, table })
}

/// Configuration for the deviation-rate lower-bound check: a fixed
/// two-valued loss (value `loss_values.1` with probability `event_prob`,
/// else `loss_values.0`) observed through `n` i.i.d. draws.
#[derive(Debug, Clone, PartialEq)]
pub struct RateLowerBoundConfig {
    pub loss_values: (f64, f64),
    pub event_prob: f64,
    pub n_values: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for RateLowerBoundConfig {
    fn default() -> Self {
        Self {
            loss_values: (0.0, 1.0),
            event_prob: 0.3,
            n_values: vec![128, 256, 512, 1024, 2048, 4096, 8192, 16384],
            trials: 400,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateLowerBoundReport {
    pub fit: RateFit,
    /// True when the fitted exponent is at least −0.6, i.e. the deviation
    /// decays no faster than roughly `1/√n`.
    pub passed: bool,
}

/// Measure `|R − R̂|` for a fixed non-constant loss and check that the
/// fitted decay exponent is at least −0.6. The empirical mean of a
/// two-valued loss is a scaled binomial, which is sampled directly.
pub fn rate_optimality_check(cfg: &RateLowerBoundConfig) -> Result<RateLowerBoundReport> {
    let (v0, v1) = cfg.loss_values;
    if v0 == v1 {
        return Err(Error::invalid(
            "deviation of a constant loss is identically zero; the check requires a non-constant loss",
        ));
    }
    if !(cfg.event_prob > 0.0 && cfg.event_prob < 1.0) {
        return Err(Error::invalid(
            "event probability must lie strictly in (0, 1)",
        ));
    }
    if cfg.trials == 0 {
        return Err(Error::invalid("at least one trial required"));
    }
    let spread = (v1 - v0).abs();
    let mut points = Vec::with_capacity(cfg.n_values.len());
    for (ni, &n) in cfg.n_values.iter().enumerate() {
        let binom = Binomial::new(n, cfg.event_prob)
            .map_err(|e| Error::invalid(format!("binomial parameters: {e}")))?;
        let mut rng = rng_from(derive_seed(cfg.seed, ni as u64));
        let mut acc = 0.0;
        for _ in 0..cfg.trials {
            let count = binom.sample(&mut rng) as f64;
            acc += (count / n as f64 - cfg.event_prob).abs() * spread;
        }
        points.push((n, acc / cfg.trials as f64));
    }
    let fit = fit_rate(&points)?;
    Ok(RateLowerBoundReport {
        passed: fit.exponent >= -0.6,
        fit,
    })
}

/// Configuration for the squared-loss excess-risk rate experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredRateConfig {
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub solver: SolverConfig,
}

impl Default for SquaredRateConfig {
    fn default() -> Self {
        Self {
            n_values: vec![128, 256, 512, 1024, 2048, 4096, 8192, 16384],
            trials: 200,
            seed: 0,
            solver: SolverConfig {
                max_iterations: 4_000,
                ..SolverConfig::default()
            },
        }
    }
}

/// Outcome of the squared-loss rate experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredRateReport {
    pub fit: RateFit,
    /// Population least-squares optimum the excess is measured against.
    pub minimizer: AffineSeparator,
    pub best_risk: f64,
    /// Per-point standard errors of the mean excess.
    pub point_se: Vec<f64>,
}

/// Excess squared-loss risk of empirical risk minimization on samples from
/// the pair, as a function of the sample size. Both the per-model risk and
/// the in-class optimum are evaluated in closed form, so the measured
/// excess carries no Monte Carlo evaluation noise.
pub fn squared_excess_rate(
    pair: &GaussianPair,
    cfg: &SquaredRateConfig,
) -> Result<SquaredRateReport> {
    if cfg.n_values.len() < 4 {
        return Err(Error::invalid(
            "rate experiment requires at least 4 sample sizes",
        ));
    }
    if cfg.trials < 2 {
        return Err(Error::invalid("rate experiment requires at least 2 trials"));
    }
    let (minimizer, best_risk) = squared_risk_minimizer(pair)?;
    let mut points = Vec::with_capacity(cfg.n_values.len());
    let mut point_se = Vec::with_capacity(cfg.n_values.len());
    for (ni, &n) in cfg.n_values.iter().enumerate() {
        let mut excesses = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let salt = (ni as u64) << 32 | trial as u64;
            let data = sample_pair(pair, n, derive_seed(cfg.seed, salt))?;
            let mut config = cfg.solver.clone();
            config.seed = derive_seed(cfg.seed, salt ^ 0xFFFF);
            let model = train_linear(&data, &LossSpec::Squared, &config)?;
            let sep = match &model.separator {
                SeparatorModel::Affine(a) => a.clone(),
                SeparatorModel::Polynomial(_) => unreachable!("train_linear returns affine"),
            };
            excesses.push(squared_risk_exact(pair, &sep)? - best_risk);
        }
        let m = excesses.len() as f64;
        let mean = excesses.iter().sum::<f64>() / m;
        let var = excesses
            .iter()
            .map(|e| (e - mean) * (e - mean))
            .sum::<f64>()
            / (m - 1.0);
        points.push((n as u64, mean));
        point_se.push((var / m).sqrt());
    }
    Ok(SquaredRateReport {
        fit: fit_rate(&points)?,
        minimizer,
        best_risk,
        point_se,
    })
}

/// Mean over `trials` of the per-dataset deviation between empirical and
/// true risk of a fixed separator, evaluated by simulating a finite-support
/// loss distribution. Shared helper for deviation experiments and tests.
pub fn mean_abs_deviation_two_valued(
    n: u64,
    event_prob: f64,
    spread: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if !(event_prob > 0.0 && event_prob < 1.0) {
        return Err(Error::invalid(
            "event probability must lie strictly in (0, 1)",
        ));
    }
    let binom = Binomial::new(n, event_prob)
        .map_err(|e| Error::invalid(format!("binomial parameters: {e}")))?;
    let mut rng = rng_from(seed);
    let mut acc = 0.0;
    for _ in 0..trials {
        let count = binom.sample(&mut rng) as f64;
        acc += (count / n as f64 - event_prob).abs() * spread;
    }
    Ok(acc / trials as f64)
}
