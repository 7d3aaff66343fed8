//! Closed Newton-Cotes rules on `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{GpwError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadratureRule {
    /// Five points, exact to degree 5.
    Boole5,
    /// Seven points, exact to degree 7.
    Weddle7,
    /// Ten points, exact to degree 9.
    NewtonCotes10,
}

impl QuadratureRule {
    pub const ALL: [QuadratureRule; 3] = [QuadratureRule::Boole5, QuadratureRule::Weddle7, QuadratureRule::NewtonCotes10];

    pub fn id(self) -> &'static str {
        match self {
            QuadratureRule::Boole5 => "boole5",
            QuadratureRule::Weddle7 => "weddle7",
            QuadratureRule::NewtonCotes10 => "nc10",
        }
    }

    pub fn exactness(self) -> usize {
        match self {
            QuadratureRule::Boole5 => 5,
            QuadratureRule::Weddle7 => 7,
            QuadratureRule::NewtonCotes10 => 9,
        }
    }

    fn integer_weights(self) -> (&'static [f64], f64) {
        match self {
            QuadratureRule::Boole5 => (&[7.0, 32.0, 12.0, 32.0, 7.0], 90.0),
            QuadratureRule::Weddle7 => (&[41.0, 216.0, 27.0, 272.0, 27.0, 216.0, 41.0], 840.0),
            QuadratureRule::NewtonCotes10 => (
                &[2857.0, 15741.0, 1080.0, 19344.0, 5778.0, 5778.0, 19344.0, 1080.0, 15741.0, 2857.0],
                89600.0,
            ),
        }
    }
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for QuadratureRule {
    type Err = GpwError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "boole5" | "boole" => Ok(QuadratureRule::Boole5),
            "weddle7" | "weddle" => Ok(QuadratureRule::Weddle7),
            "nc10" | "newtoncotes10" | "newton-cotes10" => Ok(QuadratureRule::NewtonCotes10),
            _ => Err(GpwError::Parse(format!("unknown quadrature rule '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeQuadrature {
    rule: QuadratureRule,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl EdgeQuadrature {
    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `int_0^1 f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }

    /// Largest relative error on the monomials `t^k`, `k <= degree`.
    pub fn monomial_defect(&self, degree: usize) -> f64 {
        (0..=degree)
            .map(|k| {
                let exact = 1.0 / (k + 1) as f64;
                ((self.integrate(|t| t.powi(k as i32)) - exact) / exact).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Builds the rule and checks its exactness.
pub fn make_quadrature(rule: QuadratureRule) -> EdgeQuadrature {
    let (ints, denom) = rule.integer_weights();
    let m = ints.len() - 1;
    let q = EdgeQuadrature {
        rule,
        nodes: (0..=m).map(|i| i as f64 / m as f64).collect(),
        weights: ints.iter().map(|w| w / denom).collect(),
    };
    let defect = q.monomial_defect(rule.exactness());
    assert!(defect <= 1e-12, "{rule} weights fail the exactness check ({defect:e})");
    q
}
