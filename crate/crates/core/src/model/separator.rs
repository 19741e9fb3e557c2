//! Affine and polynomial separators, classification, and the line-oriented
//! text format used to persist trained models.
//!
//! Text format: a header line `affine d=<d>` or `poly d=<d> k=<k>`, then one
//! coefficient per line as `(<exponents>) <value>` in the fixed monomial
//! order (constant first). Values are printed with 17 significant digits so
//! a write/read round trip is exact.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::lift::{eval_monomial, monomial_count, multi_indices};

/// `g(x) = w·x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSeparator {
    pub w: Vec<f64>,
    pub b: f64,
}

impl AffineSeparator {
    pub fn new(w: Vec<f64>, b: f64) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::invalid("weight vector must be non-empty"));
        }
        if !b.is_finite() || w.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("separator coefficients must be finite"));
        }
        Ok(Self { w, b })
    }
}

/// `g(x) = Σ_{|α| ≤ k} c_α x^α` with coefficients stored in the fixed
/// monomial order. Evaluation agrees with applying the equivalent affine
/// separator to the lifted feature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialSeparator {
    input_dim: usize,
    degree: u32,
    coeffs: Vec<f64>,
    indices: Vec<Vec<u32>>,
}

impl PolynomialSeparator {
    pub fn new(input_dim: usize, degree: u32, coeffs: Vec<f64>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("polynomial degree must be at least 1"));
        }
        let expected = monomial_count(input_dim, degree)?;
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("separator coefficients must be finite"));
        }
        let indices = multi_indices(input_dim, degree)?;
        Ok(Self {
            input_dim,
            degree,
            coeffs,
            indices,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn indices(&self) -> &[Vec<u32>] {
        &self.indices
    }
}

/// Anything that maps a feature vector to a real decision value.
pub trait Separator {
    fn input_dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> Result<f64>;
}

impl Separator for AffineSeparator {
    fn input_dim(&self) -> usize {
        self.w.len()
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.w.len() {
            return Err(Error::DimensionMismatch {
                expected: self.w.len(),
                got: x.len(),
            });
        }
        let mut acc = 0.0;
        for (wi, xi) in self.w.iter().zip(x) {
            acc += wi * xi;
        }
        Ok(acc + self.b)
    }
}

impl Separator for PolynomialSeparator {
    fn input_dim(&self) -> usize {
        self.input_dim
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim,
                got: x.len(),
            });
        }
        let mut acc = 0.0;
        for (c, alpha) in self.coeffs.iter().zip(&self.indices) {
            acc += c * eval_monomial(x, alpha);
        }
        Ok(acc)
    }
}

/// Maps a feature vector to a label in `{−1, +1}`.
pub trait Classifier {
    fn input_dim(&self) -> usize;
    fn classify(&self, x: &[f64]) -> Result<f64>;
}

/// Separators classify positive exactly when `g(x) ≥ 0`; the tie `g(x) = 0`
/// is positive.
impl<S: Separator> Classifier for S {
    fn input_dim(&self) -> usize {
        Separator::input_dim(self)
    }

    fn classify(&self, x: &[f64]) -> Result<f64> {
        Ok(if self.eval(x)? >= 0.0 { 1.0 } else { -1.0 })
    }
}

/// A separator of either family, as produced by training.
#[derive(Debug, Clone, PartialEq)]
pub enum SeparatorModel {
    Affine(AffineSeparator),
    Polynomial(PolynomialSeparator),
}

impl Separator for SeparatorModel {
    fn input_dim(&self) -> usize {
        match self {
            SeparatorModel::Affine(s) => Separator::input_dim(s),
            SeparatorModel::Polynomial(s) => Separator::input_dim(s),
        }
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            SeparatorModel::Affine(s) => s.eval(x),
            SeparatorModel::Polynomial(s) => s.eval(x),
        }
    }
}

fn fmt_value(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_index(alpha: &[u32]) -> String {
    let mut s = String::from("(");
    for (i, a) in alpha.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{a}");
    }
    s.push(')');
    s
}

impl SeparatorModel {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            SeparatorModel::Affine(s) => {
                let d = s.w.len();
                let _ = writeln!(out, "affine d={d}");
                let indices = multi_indices(d, 1).expect("affine index set");
                let _ = writeln!(out, "{} {}", fmt_index(&indices[0]), fmt_value(s.b));
                for (i, alpha) in indices.iter().enumerate().skip(1) {
                    let _ = writeln!(out, "{} {}", fmt_index(alpha), fmt_value(s.w[i - 1]));
                }
            }
            SeparatorModel::Polynomial(s) => {
                let _ = writeln!(out, "poly d={} k={}", s.input_dim, s.degree);
                for (c, alpha) in s.coeffs.iter().zip(&s.indices) {
                    let _ = writeln!(out, "{} {}", fmt_index(alpha), fmt_value(*c));
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty model file".into(),
        })?;
        let mut parts = header.split_whitespace();
        let kind = parts.next().unwrap_or("");
        let parse_kv = |tok: Option<&str>, key: &str, line: usize| -> Result<usize> {
            let tok = tok.ok_or_else(|| Error::Parse {
                line,
                msg: format!("missing {key}=<value>"),
            })?;
            let val = tok
                .strip_prefix(&format!("{key}="))
                .ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("expected {key}=<value>, got {tok}"),
                })?;
            val.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("bad {key} value {val}"),
            })
        };
        match kind {
            "affine" => {
                let d = parse_kv(parts.next(), "d", 1)?;
                let coeffs = read_coeffs(&mut lines, d, 1)?;
                Ok(SeparatorModel::Affine(AffineSeparator::new(
                    coeffs[1..].to_vec(),
                    coeffs[0],
                )?))
            }
            "poly" => {
                let d = parse_kv(parts.next(), "d", 1)?;
                let k = parse_kv(parts.next(), "k", 1)? as u32;
                let coeffs = read_coeffs(&mut lines, d, k)?;
                Ok(SeparatorModel::Polynomial(PolynomialSeparator::new(
                    d, k, coeffs,
                )?))
            }
            other => Err(Error::Parse {
                line: 1,
                msg: format!("unknown model kind {other:?}"),
            }),
        }
    }
}

fn read_coeffs<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    d: usize,
    k: u32,
) -> Result<Vec<f64>> {
    let indices = multi_indices(d, k)?;
    let mut coeffs = Vec::with_capacity(indices.len());
    for alpha in &indices {
        let (idx, line) = lines.next().ok_or_else(|| Error::Parse {
            line: 0,
            msg: "unexpected end of model file".into(),
        })?;
        let lineno = idx + 1;
        let close = line.find(')').ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "expected (<multi-index>) <value>".into(),
        })?;
        let idx_part = &line[..close + 1];
        let trimmed = idx_part
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "expected (<multi-index>) <value>".into(),
            })?;
        let got: Vec<u32> = trimmed
            .split_whitespace()
            .map(|t| {
                t.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad exponent {t}"),
                })
            })
            .collect::<Result<_>>()?;
        if &got != alpha {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("multi-index {got:?} out of order; expected {alpha:?}"),
            });
        }
        let value: f64 = line[close + 1..].trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: "bad coefficient value".into(),
        })?;
        coeffs.push(value);
    }
    Ok(coeffs)
}
