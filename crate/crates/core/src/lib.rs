//! Tracing arc-length-parameterized level paths `|f(z)| = c` of analytic
//! functions given as expressions in `z`.
//!
//! ```
//! use levelpath::{trace, Complex, ExprNode, Termination, TraceConfig};
//!
//! let f: ExprNode = "z".parse().unwrap();
//! let mut cfg = TraceConfig::new(f, Complex::new(1.0, 0.0));
//! cfg.arc_budget = 7.0;
//! let result = trace(&cfg).unwrap();
//! assert_eq!(result.termination, Termination::ClosedLoop);
//! ```

// `!(x > y)` is used deliberately so NaN falls into the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexjet;
pub mod expr;
pub mod reference;
pub mod tracer;

pub use complexjet::{Complex, Elementary, Jet2, JetError};
pub use expr::{parse, tokenize, ExprError, ExprNode, Token, TokenKind};
pub use reference::{finite_diff_derivs, linear_level_path, max_drift, LinearCase};
pub use tracer::{
    correct, curvature, squared_relation_residual, tangent, tangent_log, trace, ConfigError,
    Exponential, Form, JetEval, LevelFunction, LevelPoint, Method, Orientation, Termination,
    TraceConfig, TraceError, TraceResult, Tracer,
};
