//! Domain types and risk functionals: labeled samples, datasets, losses,
//! separators, monomial lifting, empirical risk, and confusion counts.

pub mod lift;
pub mod loss;
pub mod separator;

pub use lift::{lift, monomial_count, multi_indices};
pub use loss::{eval_loss, ClippedPolynomialLoss, LossSpec, PolyCoeffs, PolynomialLoss};
pub use separator::{AffineSeparator, Classifier, PolynomialSeparator, Separator, SeparatorModel};

use crate::error::{Error, Result};

/// One observation `(x, y)`. Classification losses require `y ∈ {−1, +1}`;
/// squared loss accepts any real label.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    x: Vec<f64>,
    y: f64,
}

impl LabeledSample {
    pub fn new(x: Vec<f64>, y: f64) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::invalid("feature vector must be non-empty"));
        }
        if x.iter().any(|v| !v.is_finite()) || !y.is_finite() {
            return Err(Error::invalid("sample entries must be finite"));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }
}

/// An ordered, non-empty collection of samples of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<LabeledSample>,
    dim: usize,
}

impl Dataset {
    pub fn new(samples: Vec<LabeledSample>, dim: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("dataset must contain at least one sample"));
        }
        for s in &samples {
            if s.x.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: s.x.len(),
                });
            }
        }
        Ok(Self { samples, dim })
    }

    pub fn from_parts(xs: Vec<Vec<f64>>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        let dim = xs.first().map(|x| x.len()).unwrap_or(0);
        let samples = xs
            .into_iter()
            .zip(ys)
            .map(|(x, y)| LabeledSample::new(x, y))
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(samples, dim)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false: construction requires at least one sample.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn samples(&self) -> &[LabeledSample] {
        &self.samples
    }

    /// Errors unless every label is −1 or +1.
    pub fn validate_classification(&self) -> Result<()> {
        for (i, s) in self.samples.iter().enumerate() {
            if s.y != 1.0 && s.y != -1.0 {
                return Err(Error::invalid(format!(
                    "sample {i} has label {}; classification requires -1 or +1",
                    s.y
                )));
            }
        }
        Ok(())
    }

    /// Dataset restricted to the given feature columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<Dataset> {
        if cols.is_empty() {
            return Err(Error::invalid("column selection must be non-empty"));
        }
        for &c in cols {
            if c >= self.dim {
                return Err(Error::invalid(format!(
                    "column {c} out of range for dimension {}",
                    self.dim
                )));
            }
        }
        let samples = self
            .samples
            .iter()
            .map(|s| LabeledSample {
                x: cols.iter().map(|&c| s.x[c]).collect(),
                y: s.y,
            })
            .collect();
        Dataset::new(samples, cols.len())
    }

    /// Dataset containing the samples at `idx`, in that order.
    pub fn subset(&self, idx: &[usize]) -> Result<Dataset> {
        let samples = idx
            .iter()
            .map(|&i| {
                self.samples
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::invalid(format!("sample index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(samples, self.dim)
    }
}

/// Classification outcome counts; positive means predicted label `+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub true_neg: usize,
    pub false_pos: usize,
    pub false_neg: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }

    pub fn error_count(&self) -> usize {
        self.false_pos + self.false_neg
    }

    pub fn error_rate(&self) -> f64 {
        self.error_count() as f64 / self.total() as f64
    }
}

/// Mean loss of the separator over the dataset.
pub fn empirical_risk<S: Separator + ?Sized>(
    data: &Dataset,
    sep: &S,
    loss: &LossSpec,
) -> Result<f64> {
    let mut acc = 0.0;
    for s in data.samples() {
        acc += eval_loss(loss, sep.eval(&s.x)?, s.y)?;
    }
    Ok(acc / data.len() as f64)
}

/// Class-weighted misclassification risk
/// `β₁ · P̂(error | y = +1) + β₂ · P̂(error | y = −1)`.
///
/// Samples with decision value exactly zero count as classified positive,
/// consistent with [`Classifier`]. Errors if either class is absent, since
/// the conditional fraction would then have an empty denominator.
pub fn weighted_empirical_risk<C: Classifier + ?Sized>(
    data: &Dataset,
    classifier: &C,
    beta1: f64,
    beta2: f64,
) -> Result<f64> {
    validate_weights(beta1, beta2)?;
    data.validate_classification()?;
    let mut pos = 0usize;
    let mut neg = 0usize;
    let mut pos_err = 0usize;
    let mut neg_err = 0usize;
    for s in data.samples() {
        let predicted = classifier.classify(&s.x)?;
        if s.y == 1.0 {
            pos += 1;
            if predicted < 0.0 {
                pos_err += 1;
            }
        } else {
            neg += 1;
            if predicted > 0.0 {
                neg_err += 1;
            }
        }
    }
    if pos == 0 {
        return Err(Error::UndefinedClassRisk { label: 1.0 });
    }
    if neg == 0 {
        return Err(Error::UndefinedClassRisk { label: -1.0 });
    }
    Ok(beta1 * pos_err as f64 / pos as f64 + beta2 * neg_err as f64 / neg as f64)
}

pub(crate) fn validate_weights(beta1: f64, beta2: f64) -> Result<()> {
    if !(beta1 >= 0.0) || !(beta2 >= 0.0) {
        return Err(Error::invalid("risk weights must be non-negative"));
    }
    if (beta1 + beta2 - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!(
            "risk weights must sum to 1, got {beta1} + {beta2}"
        )));
    }
    Ok(())
}

/// Confusion counts of the classifier on a classification dataset.
pub fn confusion<C: Classifier + ?Sized>(
    data: &Dataset,
    classifier: &C,
) -> Result<ConfusionCounts> {
    data.validate_classification()?;
    let mut c = ConfusionCounts {
        true_pos: 0,
        true_neg: 0,
        false_pos: 0,
        false_neg: 0,
    };
    for s in data.samples() {
        let predicted = classifier.classify(&s.x)?;
        match (predicted >= 0.0, s.y > 0.0) {
            (true, true) => c.true_pos += 1,
            (true, false) => c.false_pos += 1,
            (false, true) => c.false_neg += 1,
            (false, false) => c.true_neg += 1,
        }
    }
    Ok(c)
}
