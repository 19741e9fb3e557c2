//! Empirical risk minimization over affine and lifted-polynomial separator
//! classes, plus greedy forward feature selection.
//!
//! The optimizer is averaged projected subgradient descent with step
//! `η₀/√t`. When the class is constrained, iterates are projected onto the
//! set `|w|₁ + |b| ≤ 2M`, the exact quantity controlled by the uniform
//! polynomial deviation bound; the looser box `|w|₁ < M, |b| < M` is
//! contained in it. Squared loss uses precomputed second-moment statistics
//! so each iteration is independent of the sample count; the iterates are
//! algebraically identical to the direct per-sample path.
//!
//! Training is deterministic given `(data, loss, config)`. The optimizer
//! tracks the best of the running average and the current iterate at
//! periodic checkpoints and returns the best candidate seen; when the
//! objective stalls below `tolerance` the run stops early and the model is
//! marked converged.

use crate::error::{Error, Result};
use crate::model::{
    empirical_risk, lift, monomial_count, AffineSeparator, Dataset, LossSpec, PolynomialSeparator,
    SeparatorModel,
};
use crate::seed::derive_seed;

/// Optimizer settings. `l1_bound` is the constraint radius `M`; `None`
/// trains over the unconstrained class.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Step scale `η₀` in the schedule `η₀/√t`.
    pub step_scale: f64,
    pub l1_bound: Option<f64>,
    pub seed: u64,
    /// Relative objective-stall threshold for early stopping.
    pub tolerance: f64,
    /// Hard cap on the lifted monomial dimension.
    pub lift_dim_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
            step_scale: 1.0,
            l1_bound: None,
            seed: 0,
            tolerance: 1e-8,
            lift_dim_cap: 100_000,
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations must be positive"));
        }
        if !(self.step_scale > 0.0) || !self.step_scale.is_finite() {
            return Err(Error::invalid("step_scale must be positive"));
        }
        if let Some(m) = self.l1_bound {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::invalid("l1_bound must be positive when set"));
            }
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        Ok(())
    }

    /// Copy with a sub-seed derived for the given task index.
    pub fn with_derived_seed(&self, salt: u64) -> Self {
        let mut c = self.clone();
        c.seed = derive_seed(self.seed, salt);
        c
    }
}

/// A trained separator with optimizer diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub separator: SeparatorModel,
    pub final_empirical_risk: f64,
    pub iterations_used: usize,
    /// True when the objective stalled below tolerance before the budget
    /// ran out; false means best-iterate-so-far with a convergence warning.
    pub converged: bool,
    /// False for losses where subgradient descent is only a heuristic
    /// (non-convex polynomial losses).
    pub exact_for_loss: bool,
    /// Objective value of the best candidate at each checkpoint.
    pub objective_trace: Option<Vec<f64>>,
}

impl TrainedModel {
    pub fn summary_line(&self) -> String {
        format!(
            "risk={:.6e} iters={} converged={}",
            self.final_empirical_risk, self.iterations_used, self.converged
        )
    }
}

trait Objective {
    fn dim(&self) -> usize;
    fn value(&self, theta: &[f64]) -> f64;
    /// Writes one subgradient into `grad`.
    fn subgradient(&self, theta: &[f64], grad: &mut [f64]);
}

/// Direct per-sample objective for arbitrary losses.
struct SampleObjective<'a> {
    data: &'a Dataset,
    loss: &'a LossSpec,
}

impl Objective for SampleObjective<'_> {
    fn dim(&self) -> usize {
        self.data.dim() + 1
    }

    fn value(&self, theta: &[f64]) -> f64 {
        let d = self.data.dim();
        let mut acc = 0.0;
        for s in self.data.samples() {
            let mut g = theta[d];
            for (w, x) in theta[..d].iter().zip(s.x()) {
                g += w * x;
            }
            acc += self.loss.eval(g, s.y()).unwrap_or(f64::INFINITY);
        }
        acc / self.data.len() as f64
    }

    fn subgradient(&self, theta: &[f64], grad: &mut [f64]) {
        let d = self.data.dim();
        grad.fill(0.0);
        for s in self.data.samples() {
            let mut g = theta[d];
            for (w, x) in theta[..d].iter().zip(s.x()) {
                g += w * x;
            }
            let dl = self.loss.subgradient_g(g, s.y());
            if dl != 0.0 {
                for (gi, x) in grad[..d].iter_mut().zip(s.x()) {
                    *gi += dl * x;
                }
                grad[d] += dl;
            }
        }
        let inv = 1.0 / self.data.len() as f64;
        for g in grad.iter_mut() {
            *g *= inv;
        }
    }
}

/// Squared loss via second-moment statistics:
/// `f(θ) = θᵀHθ − 2vᵀθ + c` with `H = E[x̃x̃ᵀ]`, `v = E[x̃y]`, `c = E[y²]`,
/// where `x̃ = (x, 1)`.
struct QuadraticObjective {
    h: Vec<f64>, // row-major (d+1)×(d+1)
    v: Vec<f64>,
    c: f64,
    dim: usize,
}

impl QuadraticObjective {
    fn build(data: &Dataset) -> Self {
        let d = data.dim();
        let dim = d + 1;
        let mut h = vec![0.0; dim * dim];
        let mut v = vec![0.0; dim];
        let mut c = 0.0;
        for s in data.samples() {
            let x = s.x();
            for i in 0..d {
                for j in 0..d {
                    h[i * dim + j] += x[i] * x[j];
                }
                h[i * dim + d] += x[i];
                h[d * dim + i] += x[i];
                v[i] += x[i] * s.y();
            }
            h[d * dim + d] += 1.0;
            v[d] += s.y();
            c += s.y() * s.y();
        }
        let inv = 1.0 / data.len() as f64;
        h.iter_mut().for_each(|e| *e *= inv);
        v.iter_mut().for_each(|e| *e *= inv);
        c *= inv;
        Self { h, v, c, dim }
    }
}

impl Objective for QuadraticObjective {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, theta: &[f64]) -> f64 {
        let mut quad = 0.0;
        let mut lin = 0.0;
        for i in 0..self.dim {
            let mut row = 0.0;
            for j in 0..self.dim {
                row += self.h[i * self.dim + j] * theta[j];
            }
            quad += theta[i] * row;
            lin += self.v[i] * theta[i];
        }
        quad - 2.0 * lin + self.c
    }

    fn subgradient(&self, theta: &[f64], grad: &mut [f64]) {
        for i in 0..self.dim {
            let mut row = 0.0;
            for j in 0..self.dim {
                row += self.h[i * self.dim + j] * theta[j];
            }
            grad[i] = 2.0 * (row - self.v[i]);
        }
    }
}

/// Projection of `v` onto the l1 ball of the given radius (Duchi et al.'s
/// sort-based algorithm). No-op when the point is already inside.
fn project_l1(v: &mut [f64], radius: f64) {
    let norm: f64 = v.iter().map(|x| x.abs()).sum();
    if norm <= radius {
        return;
    }
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in mags.iter().enumerate() {
        cumsum += u;
        let candidate = (cumsum - radius) / (j + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        } else {
            break;
        }
    }
    for x in v.iter_mut() {
        *x = x.signum() * (x.abs() - theta).max(0.0);
    }
}

fn run_subgradient(
    obj: &dyn Objective,
    config: &SolverConfig,
) -> (Vec<f64>, usize, bool, Vec<f64>) {
    let dim = obj.dim();
    let radius = config.l1_bound.map(|m| 2.0 * m);
    let mut theta = vec![0.0; dim];
    if let Some(r) = radius {
        project_l1(&mut theta, r);
    }
    let mut grad = vec![0.0; dim];
    let mut avg_sum = vec![0.0; dim];
    let mut avg = vec![0.0; dim];

    let check_every = (config.max_iterations / 256).clamp(1, 500);
    let patience = 8usize;

    let mut best_theta = theta.clone();
    let mut best_value = obj.value(&theta);
    let mut trace = vec![best_value];
    let mut stalled_checks = 0usize;
    let mut iterations = 0usize;
    let mut converged = false;

    for t in 1..=config.max_iterations {
        iterations = t;
        obj.subgradient(&theta, &mut grad);
        let step = config.step_scale / (t as f64).sqrt();
        for (th, g) in theta.iter_mut().zip(&grad) {
            *th -= step * g;
        }
        if let Some(r) = radius {
            project_l1(&mut theta, r);
        }
        for (s, th) in avg_sum.iter_mut().zip(&theta) {
            *s += th;
        }

        if t % check_every == 0 || t == config.max_iterations {
            let inv = 1.0 / t as f64;
            for (a, s) in avg.iter_mut().zip(&avg_sum) {
                *a = s * inv;
            }
            if let Some(r) = radius {
                // the l1 ball is convex, so the average is feasible; guard
                // against accumulated rounding anyway
                project_l1(&mut avg, r);
            }
            let prev_best = best_value;
            for cand in [&avg, &theta] {
                let val = obj.value(cand);
                if val.is_finite() && val < best_value {
                    best_value = val;
                    best_theta.copy_from_slice(cand);
                }
            }
            trace.push(best_value);
            let scale = best_value.abs().max(1.0);
            if prev_best - best_value <= config.tolerance * scale {
                stalled_checks += 1;
                if stalled_checks >= patience {
                    converged = true;
                    break;
                }
            } else {
                stalled_checks = 0;
            }
        }
    }

    (best_theta, iterations, converged, trace)
}

/// Per-coordinate root-mean-square magnitudes, floored away from zero so
/// constant-zero columns stay untouched.
fn column_rms(data: &Dataset) -> Vec<f64> {
    let d = data.dim();
    let mut sq = vec![0.0; d];
    for s in data.samples() {
        for (acc, x) in sq.iter_mut().zip(s.x()) {
            *acc += x * x;
        }
    }
    let inv = 1.0 / data.len() as f64;
    sq.into_iter()
        .map(|v| {
            let rms = (v * inv).sqrt();
            if rms > 0.0 {
                rms
            } else {
                1.0
            }
        })
        .collect()
}

/// Train an affine separator by empirical risk minimization.
///
/// Exact (up to optimizer accuracy) for convex losses; non-convex
/// polynomial losses are accepted best-effort and flagged on the returned
/// model.
///
/// Unconstrained training equilibrates each coordinate by its root mean
/// square before descending and maps the coefficients back afterwards:
/// the hypothesis class and minimizer are unchanged, but one global step
/// scale then serves columns of very different magnitudes (lifted
/// monomials spread over orders of magnitude). Constrained training works
/// in the original coordinates so the projection controls the true
/// `|w|₁ + |b|`.
pub fn train_linear(
    data: &Dataset,
    loss: &LossSpec,
    config: &SolverConfig,
) -> Result<TrainedModel> {
    config.validate()?;
    if matches!(loss, LossSpec::Hinge) {
        data.validate_classification()?;
    }
    let d = data.dim();
    let scales = if config.l1_bound.is_none() {
        Some(column_rms(data))
    } else {
        None
    };
    let scaled_storage;
    let work: &Dataset = match &scales {
        None => data,
        Some(s) => {
            let xs = data
                .samples()
                .iter()
                .map(|smp| smp.x().iter().zip(s).map(|(x, r)| x / r).collect())
                .collect();
            let ys = data.samples().iter().map(|smp| smp.y()).collect();
            scaled_storage = Dataset::from_parts(xs, ys)?;
            &scaled_storage
        }
    };
    let (mut theta, iterations, converged, trace) = match loss {
        LossSpec::Squared if d <= 1024 => {
            let obj = QuadraticObjective::build(work);
            run_subgradient(&obj, config)
        }
        _ => {
            let obj = SampleObjective { data: work, loss };
            run_subgradient(&obj, config)
        }
    };
    if let Some(s) = &scales {
        for (t, r) in theta[..d].iter_mut().zip(s) {
            *t /= r;
        }
    }
    let separator = AffineSeparator::new(theta[..d].to_vec(), theta[d])?;
    let final_empirical_risk = empirical_risk(data, &separator, loss)?;
    Ok(TrainedModel {
        separator: SeparatorModel::Affine(separator),
        final_empirical_risk,
        iterations_used: iterations,
        converged,
        exact_for_loss: loss.convex_in_g(),
        objective_trace: Some(trace),
    })
}

/// Train a degree-`k` polynomial separator by lifting every sample to its
/// monomial vector and training an affine separator in the lifted space.
/// The affine offset plays the role of the constant monomial's weight.
pub fn train_polynomial(
    data: &Dataset,
    k: u32,
    loss: &LossSpec,
    config: &SolverConfig,
) -> Result<TrainedModel> {
    config.validate()?;
    if k == 0 {
        return Err(Error::invalid("polynomial degree must be at least 1"));
    }
    let lifted_dim = monomial_count(data.dim(), k)?;
    if lifted_dim > config.lift_dim_cap {
        return Err(Error::DimensionCap {
            dim: lifted_dim,
            cap: config.lift_dim_cap,
        });
    }
    let mut xs = Vec::with_capacity(data.len());
    let mut ys = Vec::with_capacity(data.len());
    for s in data.samples() {
        let full = lift(s.x(), k)?;
        xs.push(full[1..].to_vec()); // offset stands in for the constant monomial
        ys.push(s.y());
    }
    let lifted = Dataset::from_parts(xs, ys)?;
    let linear = train_linear(&lifted, loss, config)?;
    let (w, b) = match linear.separator {
        SeparatorModel::Affine(a) => (a.w, a.b),
        SeparatorModel::Polynomial(_) => unreachable!("train_linear returns affine"),
    };
    let mut coeffs = Vec::with_capacity(lifted_dim);
    coeffs.push(b);
    coeffs.extend_from_slice(&w);
    let separator = PolynomialSeparator::new(data.dim(), k, coeffs)?;
    let final_empirical_risk = empirical_risk(data, &separator, loss)?;
    Ok(TrainedModel {
        separator: SeparatorModel::Polynomial(separator),
        final_empirical_risk,
        iterations_used: linear.iterations_used,
        converged: linear.converged,
        exact_for_loss: linear.exact_for_loss,
        objective_trace: linear.objective_trace,
    })
}

/// Greedy forward feature selection by cross-validated empirical risk.
///
/// Repeatedly adds the coordinate whose inclusion minimizes the
/// `folds`-fold cross-validated risk of an affine model trained on the
/// selected coordinates; ties break to the lowest index. Fold assignment
/// comes from one seeded shuffle; every candidate evaluation derives its
/// own solver seed, so results do not depend on evaluation order.
pub fn select_features(
    data: &Dataset,
    target_count: usize,
    loss: &LossSpec,
    config: &SolverConfig,
    folds: usize,
) -> Result<Vec<usize>> {
    config.validate()?;
    let d = data.dim();
    if target_count == 0 || target_count > d {
        return Err(Error::invalid(format!(
            "target feature count must lie in 1..={d}, got {target_count}"
        )));
    }
    if folds < 2 {
        return Err(Error::invalid("cross-validation requires at least 2 folds"));
    }
    if folds > data.len() {
        return Err(Error::invalid(format!(
            "{folds} folds exceed {} samples",
            data.len()
        )));
    }

    // One shuffle fixes the fold partition for the whole selection run.
    let mut order: Vec<usize> = (0..data.len()).collect();
    {
        use rand::seq::SliceRandom;
        let mut rng = crate::seed::rng_from(derive_seed(config.seed, 0xF0_1D));
        order.shuffle(&mut rng);
    }
    let fold_of: Vec<usize> = {
        let mut f = vec![0usize; data.len()];
        for (pos, &i) in order.iter().enumerate() {
            f[i] = pos % folds;
        }
        f
    };
    let fold_indices: Vec<Vec<usize>> = (0..folds)
        .map(|f| (0..data.len()).filter(|&i| fold_of[i] == f).collect())
        .collect();
    let complement_indices: Vec<Vec<usize>> = (0..folds)
        .map(|f| (0..data.len()).filter(|&i| fold_of[i] != f).collect())
        .collect();

    let mut chosen: Vec<usize> = Vec::with_capacity(target_count);
    for round in 0..target_count {
        let mut best: Option<(usize, f64)> = None;
        for cand in 0..d {
            if chosen.contains(&cand) {
                continue;
            }
            let mut cols = chosen.clone();
            cols.push(cand);
            let mut cv = 0.0;
            for f in 0..folds {
                let train = data.subset(&complement_indices[f])?.select_columns(&cols)?;
                let held = data.subset(&fold_indices[f])?.select_columns(&cols)?;
                let salt = (round as u64) << 32 | (cand as u64) << 8 | f as u64;
                let model = train_linear(&train, loss, &config.with_derived_seed(salt))?;
                cv += empirical_risk(&held, &model.separator, loss)?;
            }
            cv /= folds as f64;
            if best.is_none_or(|(_, b)| cv < b) {
                best = Some((cand, cv));
            }
        }
        chosen.push(best.expect("at least one candidate per round").0);
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Classifier;

    fn quick(max_iterations: usize) -> SolverConfig {
        SolverConfig {
            max_iterations,
            ..SolverConfig::default()
        }
    }

    #[test]
    fn separable_pair_reaches_zero_hinge_risk() {
        let data = Dataset::from_parts(vec![vec![-1.0], vec![1.0]], vec![-1.0, 1.0]).unwrap();
        let model = train_linear(&data, &LossSpec::Hinge, &quick(20_000)).unwrap();
        assert!(
            model.final_empirical_risk <= 0.01,
            "{}",
            model.summary_line()
        );
        if let SeparatorModel::Affine(a) = &model.separator {
            assert!(a.w[0] > 0.0);
        }
    }

    #[test]
    fn squared_loss_recovers_exact_line() {
        // labels exactly on y = 2x + 1
        let xs: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 5.0 - 2.0]).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x[0] + 1.0).collect();
        let data = Dataset::from_parts(xs, ys).unwrap();
        let model = train_linear(&data, &LossSpec::Squared, &quick(50_000)).unwrap();
        assert!(model.final_empirical_risk < 1e-3);
        if let SeparatorModel::Affine(a) = &model.separator {
            assert!((a.w[0] - 2.0).abs() < 1e-3, "w = {}", a.w[0]);
            assert!((a.b - 1.0).abs() < 1e-3, "b = {}", a.b);
        }
    }

    #[test]
    fn l1_constraint_is_enforced_exactly() {
        let data = Dataset::from_parts(
            vec![vec![-5.0], vec![-4.0], vec![4.0], vec![5.0]],
            vec![-1.0, -1.0, 1.0, 1.0],
        )
        .unwrap();
        let mut config = quick(5_000);
        config.l1_bound = Some(0.01);
        let model = train_linear(&data, &LossSpec::Hinge, &config).unwrap();
        if let SeparatorModel::Affine(a) = &model.separator {
            let norm: f64 = a.w.iter().map(|v| v.abs()).sum::<f64>() + a.b.abs();
            assert!(norm <= 0.02 + 1e-12, "norm = {norm}");
        }
    }

    #[test]
    fn training_is_bit_deterministic() {
        let xs: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64 * 0.37).sin(), (i as f64 * 0.71).cos()])
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| if x[0] + x[1] > 0.1 { 1.0 } else { -1.0 })
            .collect();
        let data = Dataset::from_parts(xs, ys).unwrap();
        let a = train_linear(&data, &LossSpec::Hinge, &quick(3_000)).unwrap();
        let b = train_linear(&data, &LossSpec::Hinge, &quick(3_000)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn least_squares_matches_closed_form_oracle() {
        use rand::Rng;
        let mut rng = crate::seed::rng_from(31);
        for d in 1..=3usize {
            for trial in 0..3 {
                let n = 20 + 10 * trial;
                let xs: Vec<Vec<f64>> = (0..n)
                    .map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect())
                    .collect();
                let ys: Vec<f64> = xs
                    .iter()
                    .map(|x| {
                        x.iter()
                            .enumerate()
                            .map(|(j, v)| (j as f64 + 0.5) * v)
                            .sum::<f64>()
                            - 0.7
                            + rng.random_range(-0.5..0.5)
                    })
                    .collect();
                let data = Dataset::from_parts(xs.clone(), ys.clone()).unwrap();

                // normal-equation oracle (Gaussian elimination, test-only)
                let dim = d + 1;
                let mut h = vec![vec![0.0; dim + 1]; dim];
                for (x, &y) in xs.iter().zip(&ys) {
                    let mut xt: Vec<f64> = x.clone();
                    xt.push(1.0);
                    for i in 0..dim {
                        for j in 0..dim {
                            h[i][j] += xt[i] * xt[j];
                        }
                        h[i][dim] += xt[i] * y;
                    }
                }
                for col in 0..dim {
                    let piv = (col..dim)
                        .max_by(|&a, &b| h[a][col].abs().partial_cmp(&h[b][col].abs()).unwrap());
                    let piv = piv.unwrap();
                    h.swap(col, piv);
                    let p = h[col][col];
                    for j in col..=dim {
                        h[col][j] /= p;
                    }
                    for r in 0..dim {
                        if r != col {
                            let factor = h[r][col];
                            for j in col..=dim {
                                h[r][j] -= factor * h[col][j];
                            }
                        }
                    }
                }
                let theta_star: Vec<f64> = (0..dim).map(|i| h[i][dim]).collect();
                let oracle_sep =
                    AffineSeparator::new(theta_star[..d].to_vec(), theta_star[d]).unwrap();
                let oracle_risk = empirical_risk(&data, &oracle_sep, &LossSpec::Squared).unwrap();

                let model = train_linear(&data, &LossSpec::Squared, &quick(50_000)).unwrap();
                assert!(
                    model.final_empirical_risk <= oracle_risk + 1e-4,
                    "d={d}: {} vs oracle {}",
                    model.final_empirical_risk,
                    oracle_risk
                );
            }
        }
    }

    #[test]
    fn polynomial_degree_one_matches_linear() {
        let xs: Vec<Vec<f64>> = (0..25)
            .map(|i| vec![(i as f64 * 0.41).sin(), (i as f64 * 0.13).cos()])
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| if x[0] > x[1] { 1.0 } else { -1.0 })
            .collect();
        let data = Dataset::from_parts(xs, ys).unwrap();
        let lin = train_linear(&data, &LossSpec::Hinge, &quick(2_000)).unwrap();
        let poly = train_polynomial(&data, 1, &LossSpec::Hinge, &quick(2_000)).unwrap();
        let (w, b) = match &lin.separator {
            SeparatorModel::Affine(a) => (a.w.clone(), a.b),
            _ => unreachable!(),
        };
        let coeffs = match &poly.separator {
            SeparatorModel::Polynomial(p) => p.coeffs().to_vec(),
            _ => unreachable!(),
        };
        assert!((coeffs[0] - b).abs() <= 1e-9 * b.abs().max(1.0));
        for (c, w) in coeffs[1..].iter().zip(&w) {
            assert!((c - w).abs() <= 1e-9 * w.abs().max(1.0));
        }
    }

    #[test]
    fn xor_needs_the_quadratic_lift() {
        let xs = vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ];
        let ys: Vec<f64> = xs.iter().map(|x| f64::signum(x[0] * x[1])).collect();
        let data = Dataset::from_parts(xs.clone(), ys.clone()).unwrap();

        // brute-force oracle: no affine separator gets hinge risk below 0.45
        let mut best_affine = f64::INFINITY;
        let steps = 30;
        for iw1 in -steps..=steps {
            for iw2 in -steps..=steps {
                for ib in -steps..=steps {
                    let sep = AffineSeparator::new(
                        vec![iw1 as f64 / 6.0, iw2 as f64 / 6.0],
                        ib as f64 / 6.0,
                    )
                    .unwrap();
                    let r = empirical_risk(&data, &sep, &LossSpec::Hinge).unwrap();
                    best_affine = best_affine.min(r);
                }
            }
        }
        assert!(best_affine >= 0.45, "grid best {best_affine}");

        let lin = train_linear(&data, &LossSpec::Hinge, &quick(10_000)).unwrap();
        assert!(lin.final_empirical_risk >= 0.45);

        let quad = train_polynomial(&data, 2, &LossSpec::Hinge, &quick(10_000)).unwrap();
        assert!(
            quad.final_empirical_risk < 0.05,
            "{}",
            quad.final_empirical_risk
        );
    }

    #[test]
    fn concentric_circles_separate_at_degree_two() {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for i in 0..40 {
            let angle = i as f64 * std::f64::consts::TAU / 40.0;
            // inner circle radius 0.5 labeled +1, outer radius 2 labeled -1;
            // g = 1 − ‖x‖² separates exactly
            xs.push(vec![0.5 * angle.cos(), 0.5 * angle.sin()]);
            ys.push(1.0);
            xs.push(vec![2.0 * angle.cos(), 2.0 * angle.sin()]);
            ys.push(-1.0);
        }
        let data = Dataset::from_parts(xs, ys).unwrap();
        let quad = train_polynomial(&data, 2, &LossSpec::Hinge, &quick(20_000)).unwrap();
        let c = crate::model::confusion(&data, &quad.separator).unwrap();
        assert_eq!(c.error_count(), 0, "risk {}", quad.final_empirical_risk);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let data = Dataset::from_parts(vec![vec![0.5; 8]; 4], vec![1.0, -1.0, 1.0, -1.0]).unwrap();
        let mut config = quick(10);
        config.lift_dim_cap = 20;
        assert!(matches!(
            train_polynomial(&data, 3, &LossSpec::Hinge, &config),
            Err(Error::DimensionCap { .. })
        ));
    }

    #[test]
    fn selection_finds_the_informative_coordinate() {
        use rand::Rng;
        let mut rng = crate::seed::rng_from(77);
        let xs: Vec<Vec<f64>> = (0..120)
            .map(|_| (0..5).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| if x[3] >= 0.0 { 1.0 } else { -1.0 })
            .collect();
        let data = Dataset::from_parts(xs, ys).unwrap();
        let sel = select_features(&data, 1, &LossSpec::Hinge, &quick(2_000), 5).unwrap();
        assert_eq!(sel, vec![3]);
    }

    #[test]
    fn selection_with_full_count_returns_all_indices() {
        let xs: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64).sin(), (i as f64 * 0.5).cos(), i as f64 / 30.0])
            .collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| if x[2] > 0.5 { 1.0 } else { -1.0 })
            .collect();
        let data = Dataset::from_parts(xs, ys).unwrap();
        let sel = select_features(&data, 3, &LossSpec::Hinge, &quick(1_000), 3).unwrap();
        let mut sorted = sel.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }

    #[test]
    fn duplicated_column_is_not_selected_twice_before_new_signal() {
        use rand::Rng;
        let mut rng = crate::seed::rng_from(13);
        // col0 = col1 (informative), col2 = second independent signal
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for _ in 0..160 {
            let a: f64 = rng.random_range(-1.0..1.0);
            let b: f64 = rng.random_range(-1.0..1.0);
            xs.push(vec![a, a, b]);
            ys.push(if a + 0.8 * b >= 0.0 { 1.0 } else { -1.0 });
        }
        let data = Dataset::from_parts(xs, ys).unwrap();
        let sel = select_features(&data, 2, &LossSpec::Hinge, &quick(2_000), 5).unwrap();
        assert_eq!(sel.len(), 2);
        // after one of the duplicates, the fresh signal must come next
        assert!(sel.contains(&2), "selected {sel:?}");
        assert!(!(sel.contains(&0) && sel.contains(&1)), "selected {sel:?}");
    }

    #[test]
    fn selection_rejects_bad_arguments() {
        let data = Dataset::from_parts(vec![vec![1.0], vec![2.0]], vec![1.0, -1.0]).unwrap();
        assert!(select_features(&data, 2, &LossSpec::Hinge, &quick(10), 2).is_err());
        assert!(select_features(&data, 0, &LossSpec::Hinge, &quick(10), 2).is_err());
        assert!(select_features(&data, 1, &LossSpec::Hinge, &quick(10), 1).is_err());
        assert!(select_features(&data, 1, &LossSpec::Hinge, &quick(10), 3).is_err());
    }

    #[test]
    fn final_risk_matches_recomputation() {
        let xs: Vec<Vec<f64>> = (0..15).map(|i| vec![i as f64 / 7.0 - 1.0]).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| if x[0] > 0.2 { 1.0 } else { -1.0 })
            .collect();
        let data = Dataset::from_parts(xs, ys).unwrap();
        let model = train_linear(&data, &LossSpec::Hinge, &quick(1_000)).unwrap();
        let again = empirical_risk(&data, &model.separator, &LossSpec::Hinge).unwrap();
        assert!(
            (model.final_empirical_risk - again).abs() <= 1e-9 * again.abs().max(f64::MIN_POSITIVE)
        );
    }

    #[test]
    fn l1_projection_unit() {
        let mut v = vec![3.0, -1.0];
        project_l1(&mut v, 2.0);
        let norm: f64 = v.iter().map(|x| x.abs()).sum();
        assert!((norm - 2.0).abs() < 1e-12);
        assert!(v[0] > 0.0 && v[1] <= 0.0);

        let mut inside = vec![0.5, -0.25];
        project_l1(&mut inside, 2.0);
        assert_eq!(inside, vec![0.5, -0.25]);
    }

    #[test]
    fn trained_classifier_classifies() {
        let data = Dataset::from_parts(vec![vec![-1.0], vec![1.0]], vec![-1.0, 1.0]).unwrap();
        let model = train_linear(&data, &LossSpec::Hinge, &quick(5_000)).unwrap();
        assert_eq!(model.separator.classify(&[2.0]).unwrap(), 1.0);
        assert_eq!(model.separator.classify(&[-2.0]).unwrap(), -1.0);
    }
}
