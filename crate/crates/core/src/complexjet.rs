//! Complex values and second-order forward-mode jets.
//!
//! A [`Jet2`] carries `(f(z), f'(z), f''(z))` through arithmetic so that a
//! single pass over an expression tree yields the value and both derivatives
//! exactly up to rounding. Every operation checks its result for finiteness
//! and reports overflow as [`JetError::NonFinite`] instead of letting NaN
//! leak into a traced path.

use num_complex::Complex64;
use thiserror::Error;

/// A point or value in the complex plane.
pub type Complex = Complex64;

/// The imaginary unit.
pub const I: Complex = Complex::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("non-finite value")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, JetError>;

#[inline]
pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Rejects NaN and infinite components.
#[inline]
pub fn finite(z: Complex) -> Result<Complex> {
    if is_finite(z) {
        Ok(z)
    } else {
        Err(JetError::NonFinite)
    }
}

/// Integer power by square-and-multiply.
///
/// Shared by the plain complex evaluator and the jet evaluator so that the
/// value component of a jet is bit-identical to the plain evaluation.
pub(crate) fn pow_by_squaring<T: Copy>(
    base: T,
    n: u32,
    one: T,
    mul: impl Fn(T, T) -> Result<T>,
) -> Result<T> {
    let mut acc = one;
    let mut sq = base;
    let mut k = n;
    let mut first = true;
    while k > 0 {
        if k & 1 == 1 {
            acc = if first { sq } else { mul(acc, sq)? };
            first = false;
        }
        k >>= 1;
        if k > 0 {
            sq = mul(sq, sq)?;
        }
    }
    Ok(acc)
}

/// Complex integer power with the same operation order as [`Jet2::powi`].
pub fn complex_powi(z: Complex, n: i32) -> Result<Complex> {
    let one = Complex::new(1.0, 0.0);
    let p = pow_by_squaring(z, n.unsigned_abs(), one, |a, b| finite(a * b))?;
    if n >= 0 {
        Ok(p)
    } else {
        complex_div(one, p)
    }
}

pub fn complex_div(a: Complex, b: Complex) -> Result<Complex> {
    if b.re == 0.0 && b.im == 0.0 {
        return Err(JetError::DivisionByZero);
    }
    finite(a / b)
}

/// The elementary functions understood by expressions and jets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elementary {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
}

impl Elementary {
    pub const ALL: [Elementary; 8] = [
        Elementary::Exp,
        Elementary::Log,
        Elementary::Sin,
        Elementary::Cos,
        Elementary::Tan,
        Elementary::Sinh,
        Elementary::Cosh,
        Elementary::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Log => "log",
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Tan => "tan",
            Elementary::Sinh => "sinh",
            Elementary::Cosh => "cosh",
            Elementary::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Plain complex evaluation. `log` is the principal branch.
    pub fn apply(self, z: Complex) -> Result<Complex> {
        let u = match self {
            Elementary::Exp => z.exp(),
            Elementary::Log => {
                if z.re == 0.0 && z.im == 0.0 {
                    return Err(JetError::Domain("log(0)"));
                }
                z.ln()
            }
            Elementary::Sin => z.sin(),
            Elementary::Cos => z.cos(),
            Elementary::Tan => {
                let c = z.cos();
                if c.re == 0.0 && c.im == 0.0 {
                    return Err(JetError::Domain("tan at a pole"));
                }
                z.tan()
            }
            Elementary::Sinh => z.sinh(),
            Elementary::Cosh => z.cosh(),
            Elementary::Tanh => {
                let c = z.cosh();
                if c.re == 0.0 && c.im == 0.0 {
                    return Err(JetError::Domain("tanh at a pole"));
                }
                z.tanh()
            }
        };
        finite(u)
    }

    /// `(u(z), u'(z), u''(z))`.
    fn derivatives(self, z: Complex) -> Result<(Complex, Complex, Complex)> {
        let u = self.apply(z)?;
        let one = Complex::new(1.0, 0.0);
        let (d1, d2) = match self {
            Elementary::Exp => (u, u),
            Elementary::Log => {
                let r = one / z;
                (r, -r * r)
            }
            Elementary::Sin => (z.cos(), -u),
            Elementary::Cos => (-z.sin(), -u),
            Elementary::Tan => {
                let sec2 = one + u * u;
                (sec2, 2.0 * u * sec2)
            }
            Elementary::Sinh => (z.cosh(), u),
            Elementary::Cosh => (z.sinh(), u),
            Elementary::Tanh => {
                let sech2 = one - u * u;
                (sech2, -2.0 * u * sech2)
            }
        };
        Ok((u, finite(d1)?, finite(d2)?))
    }
}

/// Truncated Taylor data `(f(z), f'(z), f''(z))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub v: Complex,
    pub d1: Complex,
    pub d2: Complex,
}

// fallible arithmetic cannot implement the operator traits
#[allow(clippy::should_implement_trait)]
impl Jet2 {
    pub const fn new(v: Complex, d1: Complex, d2: Complex) -> Self {
        Self { v, d1, d2 }
    }

    /// The independent variable at `z`: `(z, 1, 0)`.
    pub fn variable(z: Complex) -> Self {
        Self::new(z, Complex::new(1.0, 0.0), Complex::new(0.0, 0.0))
    }

    /// A constant: `(c, 0, 0)`.
    pub fn constant(c: Complex) -> Self {
        let zero = Complex::new(0.0, 0.0);
        Self::new(c, zero, zero)
    }

    pub fn is_finite(&self) -> bool {
        is_finite(self.v) && is_finite(self.d1) && is_finite(self.d2)
    }

    fn checked(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(JetError::NonFinite)
        }
    }

    pub fn add(self, b: Jet2) -> Result<Jet2> {
        Jet2::new(self.v + b.v, self.d1 + b.d1, self.d2 + b.d2).checked()
    }

    pub fn sub(self, b: Jet2) -> Result<Jet2> {
        Jet2::new(self.v - b.v, self.d1 - b.d1, self.d2 - b.d2).checked()
    }

    pub fn neg(self) -> Jet2 {
        Jet2::new(-self.v, -self.d1, -self.d2)
    }

    /// Leibniz rule to second order.
    pub fn mul(self, b: Jet2) -> Result<Jet2> {
        let a = self;
        Jet2::new(
            a.v * b.v,
            a.v * b.d1 + a.d1 * b.v,
            a.v * b.d2 + 2.0 * a.d1 * b.d1 + a.d2 * b.v,
        )
        .checked()
    }

    /// Quotient rule to second order. Fails when `b.v` is exactly zero.
    pub fn div(self, b: Jet2) -> Result<Jet2> {
        let q = complex_div(self.v, b.v)?;
        let d1 = (self.d1 - q * b.d1) / b.v;
        let d2 = (self.d2 - 2.0 * d1 * b.d1 - q * b.d2) / b.v;
        Jet2::new(q, d1, d2).checked()
    }

    /// `u(a)` for an elementary `u`, via the second-order chain rule.
    pub fn elementary(self, func: Elementary) -> Result<Jet2> {
        let (u, du, ddu) = func.derivatives(self.v)?;
        Jet2::new(u, du * self.d1, ddu * self.d1 * self.d1 + du * self.d2).checked()
    }

    pub fn exp(self) -> Result<Jet2> {
        self.elementary(Elementary::Exp)
    }

    pub fn log(self) -> Result<Jet2> {
        self.elementary(Elementary::Log)
    }

    pub fn sin(self) -> Result<Jet2> {
        self.elementary(Elementary::Sin)
    }

    pub fn cos(self) -> Result<Jet2> {
        self.elementary(Elementary::Cos)
    }

    pub fn tan(self) -> Result<Jet2> {
        self.elementary(Elementary::Tan)
    }

    pub fn sinh(self) -> Result<Jet2> {
        self.elementary(Elementary::Sinh)
    }

    pub fn cosh(self) -> Result<Jet2> {
        self.elementary(Elementary::Cosh)
    }

    pub fn tanh(self) -> Result<Jet2> {
        self.elementary(Elementary::Tanh)
    }

    /// Integer power by square-and-multiply; negative `n` divides 1 by `a^|n|`.
    pub fn powi(self, n: i32) -> Result<Jet2> {
        let one = Jet2::constant(Complex::new(1.0, 0.0));
        let p = pow_by_squaring(self, n.unsigned_abs(), one, Jet2::mul)?;
        if n >= 0 {
            Ok(p)
        } else {
            one.div(p)
        }
    }
}
