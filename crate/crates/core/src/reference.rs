//! Independent oracles: the closed-form level path of a linear function and
//! finite-difference derivatives.
//!
//! Nothing here goes through the tracer or the jet arithmetic.

use thiserror::Error;

use crate::complexjet::{Complex, I};
use crate::expr::ExprNode;
use crate::tracer::TraceResult;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReferenceError {
    #[error("linear coefficient must be nonzero")]
    ZeroSlope,
    #[error("seed {0} is the zero of the linear function")]
    SeedAtZero(Complex),
}

/// `f(z) = a·z + b` traced from `z0` at arc length `s0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCase {
    a: Complex,
    b: Complex,
    z0: Complex,
    s0: f64,
}

impl LinearCase {
    pub fn new(a: Complex, b: Complex, z0: Complex, s0: f64) -> Result<Self, ReferenceError> {
        if !(a.norm() > 0.0) {
            return Err(ReferenceError::ZeroSlope);
        }
        if !((z0 + b / a).norm() > 0.0) {
            return Err(ReferenceError::SeedAtZero(z0));
        }
        Ok(Self { a, b, z0, s0 })
    }

    pub fn a(&self) -> Complex {
        self.a
    }

    pub fn b(&self) -> Complex {
        self.b
    }

    pub fn seed(&self) -> Complex {
        self.z0
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    /// The zero `-b/a`, centre of every level circle.
    pub fn center(&self) -> Complex {
        -self.b / self.a
    }

    /// Radius of the level circle through the seed.
    pub fn radius(&self) -> f64 {
        (self.z0 + self.b / self.a).norm()
    }

    /// `a*z + b` as an expression tree.
    pub fn function(&self) -> ExprNode {
        ExprNode::Add(
            Box::new(ExprNode::Mul(
                Box::new(ExprNode::Const(self.a)),
                Box::new(ExprNode::Var),
            )),
            Box::new(ExprNode::Const(self.b)),
        )
    }
}

/// `p(s) = (z0 + b/a)·exp(i·(s - s0)/|z0 + b/a|) - b/a`.
pub fn linear_level_path(case: &LinearCase, s: f64) -> Complex {
    let offset = case.z0 + case.b / case.a;
    offset * (I * ((s - case.s0) / offset.norm())).exp() - case.b / case.a
}

/// Central differences `((f(z+h) - f(z-h))/(2h), (f(z+h) - 2f(z) + f(z-h))/h²)`.
pub fn finite_diff_derivs<E>(
    f: impl Fn(Complex) -> Result<Complex, E>,
    z: Complex,
    h: f64,
) -> Result<(Complex, Complex), E> {
    let fp = f(z + h)?;
    let f0 = f(z)?;
    let fm = f(z - h)?;
    Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
}

/// Largest `||f(z)| - c|` over a trace.
pub fn max_drift(result: &TraceResult) -> f64 {
    result
        .points
        .iter()
        .map(|p| p.drift.abs())
        .fold(0.0, f64::max)
}
