//! Loss families: hinge, squared error, general polynomial in `(g, y)`,
//! and clipped polynomial (polynomial inside a rectangle, constant outside).

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Coefficients of a polynomial in `(g, y)`: key `(i, j)` maps to the
/// coefficient of `g^i y^j`.
pub type PolyCoeffs = BTreeMap<(u32, u32), f64>;

/// General polynomial loss `L(g, y) = Σ c_ij g^i y^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialLoss {
    coeffs: PolyCoeffs,
    degree: u32,
}

impl PolynomialLoss {
    pub fn new(coeffs: PolyCoeffs, degree: u32) -> Result<Self> {
        validate_coeffs(&coeffs, degree)?;
        Ok(Self { coeffs, degree })
    }

    pub fn coeffs(&self) -> &PolyCoeffs {
        &self.coeffs
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

/// Polynomial loss clipped to the rectangle `|g| ≤ g_bound`, `|y| ≤ y_bound`;
/// takes the constant `outside_value` everywhere else.
#[derive(Debug, Clone, PartialEq)]
pub struct ClippedPolynomialLoss {
    coeffs: PolyCoeffs,
    degree: u32,
    g_bound: f64,
    y_bound: f64,
    outside_value: f64,
}

impl ClippedPolynomialLoss {
    pub fn new(
        coeffs: PolyCoeffs,
        degree: u32,
        g_bound: f64,
        y_bound: f64,
        outside_value: f64,
    ) -> Result<Self> {
        validate_coeffs(&coeffs, degree)?;
        if !(g_bound > 0.0) || !g_bound.is_finite() {
            return Err(Error::invalid("clipped loss requires g_bound > 0"));
        }
        if !(y_bound >= 1.0) || !y_bound.is_finite() {
            return Err(Error::invalid("clipped loss requires y_bound >= 1"));
        }
        if !outside_value.is_finite() {
            return Err(Error::invalid("outside value must be finite"));
        }
        Ok(Self {
            coeffs,
            degree,
            g_bound,
            y_bound,
            outside_value,
        })
    }

    pub fn coeffs(&self) -> &PolyCoeffs {
        &self.coeffs
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn g_bound(&self) -> f64 {
        self.g_bound
    }

    pub fn y_bound(&self) -> f64 {
        self.y_bound
    }

    pub fn outside_value(&self) -> f64 {
        self.outside_value
    }

    pub fn contains(&self, g: f64, y: f64) -> bool {
        g.abs() <= self.g_bound && y.abs() <= self.y_bound
    }
}

fn validate_coeffs(coeffs: &PolyCoeffs, degree: u32) -> Result<()> {
    for (&(i, j), &c) in coeffs {
        if !c.is_finite() {
            return Err(Error::invalid(format!(
                "coefficient c_{i}{j} is not finite"
            )));
        }
        if c != 0.0 && i + j > degree {
            return Err(Error::invalid(format!(
                "term g^{i} y^{j} exceeds declared degree {degree}"
            )));
        }
    }
    Ok(())
}

/// A loss specification; see [`eval_loss`] for the evaluation rules.
#[derive(Debug, Clone, PartialEq)]
pub enum LossSpec {
    /// `(1 − y·g)₊` with labels in `{−1, +1}`.
    Hinge,
    /// `(g − y)²`.
    Squared,
    Polynomial(PolynomialLoss),
    ClippedPolynomial(ClippedPolynomialLoss),
}

impl LossSpec {
    /// Whether the subgradient method is exact for this loss (convex in `g`).
    /// General polynomials are accepted best-effort.
    pub fn convex_in_g(&self) -> bool {
        matches!(self, LossSpec::Hinge | LossSpec::Squared)
    }

    pub fn eval(&self, g_value: f64, y: f64) -> Result<f64> {
        eval_loss(self, g_value, y)
    }

    /// One subgradient of `L(·, y)` at `g`. At hinge kinks the flat side is
    /// chosen; outside a clipped region the loss is constant so the
    /// subgradient is zero.
    pub(crate) fn subgradient_g(&self, g: f64, y: f64) -> f64 {
        match self {
            LossSpec::Hinge => {
                if 1.0 - y * g > 0.0 {
                    -y
                } else {
                    0.0
                }
            }
            LossSpec::Squared => 2.0 * (g - y),
            LossSpec::Polynomial(p) => poly_grad_g(p.coeffs(), g, y),
            LossSpec::ClippedPolynomial(p) => {
                if p.contains(g, y) {
                    poly_grad_g(p.coeffs(), g, y)
                } else {
                    0.0
                }
            }
        }
    }
}

fn poly_eval(coeffs: &PolyCoeffs, g: f64, y: f64) -> f64 {
    coeffs
        .iter()
        .map(|(&(i, j), &c)| c * g.powi(i as i32) * y.powi(j as i32))
        .sum()
}

fn poly_grad_g(coeffs: &PolyCoeffs, g: f64, y: f64) -> f64 {
    coeffs
        .iter()
        .filter(|(&(i, _), _)| i > 0)
        .map(|(&(i, j), &c)| c * i as f64 * g.powi(i as i32 - 1) * y.powi(j as i32))
        .sum()
}

/// Evaluate a loss at `(g_value, y)`.
pub fn eval_loss(loss: &LossSpec, g_value: f64, y: f64) -> Result<f64> {
    if !g_value.is_finite() || !y.is_finite() {
        return Err(Error::invalid("loss arguments must be finite"));
    }
    match loss {
        LossSpec::Hinge => {
            if y != 1.0 && y != -1.0 {
                return Err(Error::invalid(format!(
                    "hinge loss requires labels in {{-1, +1}}, got {y}"
                )));
            }
            Ok((1.0 - y * g_value).max(0.0))
        }
        LossSpec::Squared => Ok((g_value - y) * (g_value - y)),
        LossSpec::Polynomial(p) => Ok(poly_eval(p.coeffs(), g_value, y)),
        LossSpec::ClippedPolynomial(p) => {
            if p.contains(g_value, y) {
                Ok(poly_eval(p.coeffs(), g_value, y))
            } else {
                Ok(p.outside_value())
            }
        }
    }
}

/// Convenience constructor for the squared-error loss written as the
/// polynomial `g² − 2gy + y²`.
pub fn squared_as_polynomial() -> PolynomialLoss {
    let mut c = PolyCoeffs::new();
    c.insert((2, 0), 1.0);
    c.insert((1, 1), -2.0);
    c.insert((0, 2), 1.0);
    PolynomialLoss::new(c, 2).expect("static coefficients are valid")
}
