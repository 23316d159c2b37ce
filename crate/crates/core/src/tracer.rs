//! Arc-length tracing of modulus level paths `|f(z)| = c`.
//!
//! The tangent field is `p' = σ·i·conj(w)/|w|` with `w = f'(p)·conj(f(p))`,
//! which has unit modulus, so integrating it in `s` walks the level set at
//! unit speed. When `f = exp(g)` the same field reduces to
//! `σ·i·conj(g')/|g'|`. The second derivative
//!
//! ```text
//! p'' = -c²·conj(f''·p'²) / (2·f'·conj(f)²) - f''·p'² / (2·f') - conj(f'/f)
//! ```
//!
//! drives the order-2 Taylor step and is cross-checked against finite
//! differences of the tangent in the tests.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::complexjet::{finite, Complex, Jet2, JetError, I};
use crate::expr::ExprNode;

pub const DEFAULT_STEP: f64 = 0.01;
pub const DEFAULT_ARC_BUDGET: f64 = 10.0;
pub const DEFAULT_CORRECTOR_TOL: f64 = 1e-10;
pub const DEFAULT_CORRECTOR_MAX_ITER: usize = 5;
pub const DEFAULT_SINGULAR_EPS: f64 = 1e-8;

/// Allowed deviation of `|t|` from 1 for a tangent passed into [`curvature`].
const UNIT_TANGENT_TOL: f64 = 1e-8;
/// Closure is not tested before `s` reaches this many steps.
const CLOSURE_WARMUP_STEPS: f64 = 10.0;
/// Arc lengths this close to the budget (relative to `h`) snap onto it.
const BUDGET_SNAP: f64 = 1e-9;

/// Anything that yields `(f(z), f'(z), f''(z))`.
pub trait JetEval {
    fn jet(&self, z: Complex) -> Result<Jet2, JetError>;
}

impl JetEval for ExprNode {
    fn jet(&self, z: Complex) -> Result<Jet2, JetError> {
        self.eval_jet(z)
    }
}

impl<F> JetEval for F
where
    F: Fn(Complex) -> Result<Jet2, JetError>,
{
    fn jet(&self, z: Complex) -> Result<Jet2, JetError> {
        self(z)
    }
}

/// `f = exp(g)` for a jet evaluator of `g`.
#[derive(Debug, Clone, Copy)]
pub struct Exponential<'a, E: ?Sized>(pub &'a E);

impl<E: JetEval + ?Sized> JetEval for Exponential<'_, E> {
    fn jet(&self, z: Complex) -> Result<Jet2, JetError> {
        self.0.jet(z)?.exp()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("singular proximity at {z}: |f| = {modulus:e}, |f'| = {derivative:e}")]
    SingularProximity {
        z: Complex,
        modulus: f64,
        derivative: f64,
    },
    #[error(
        "corrector stopped at {z} after {iterations} iterations with ||f| - c| = {residual:e}"
    )]
    CorrectorFailure {
        z: Complex,
        residual: f64,
        iterations: usize,
    },
    #[error("tangent {0} does not have unit modulus")]
    NonUnitTangent(Complex),
    #[error("evaluation failed at {z}: {source}")]
    Evaluation { z: Complex, source: JetError },
}

impl TraceError {
    pub fn termination(&self) -> Termination {
        match self {
            TraceError::SingularProximity { .. } => Termination::SingularProximity,
            TraceError::CorrectorFailure { .. } => Termination::CorrectorFailure,
            TraceError::NonUnitTangent(_) | TraceError::Evaluation { .. } => {
                Termination::NonFiniteValue
            }
        }
    }
}

fn eval<E: JetEval + ?Sized>(f: &E, z: Complex) -> Result<Jet2, TraceError> {
    f.jet(z)
        .map_err(|source| TraceError::Evaluation { z, source })
}

fn nonfinite(z: Complex) -> TraceError {
    TraceError::Evaluation {
        z,
        source: JetError::NonFinite,
    }
}

fn ensure_regular(z: Complex, jet: &Jet2, eps: f64) -> Result<(), TraceError> {
    let modulus = jet.v.norm();
    let derivative = jet.d1.norm();
    if modulus > eps && derivative > eps {
        Ok(())
    } else {
        Err(TraceError::SingularProximity {
            z,
            modulus,
            derivative,
        })
    }
}

/// Direction of travel along the level path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// `σ = +1`: the region where `|f| < c` lies on the left.
    #[default]
    Forward,
    /// `σ = -1`: the same path traversed the other way.
    Reverse,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Forward => 1.0,
            Orientation::Reverse => -1.0,
        }
    }
}

impl FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+1" | "1" => Ok(Orientation::Forward),
            "-1" => Ok(Orientation::Reverse),
            other => Err(format!("orientation must be +1 or -1, got {other:?}")),
        }
    }
}

/// How the configured expression relates to `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Form {
    /// The expression is `f`.
    #[default]
    Direct,
    /// The expression is `g` with `f = exp(g)`.
    Log,
}

impl FromStr for Form {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Form::Direct),
            "log" => Ok(Form::Log),
            other => Err(format!("form must be direct or log, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    Euler,
    #[default]
    Rk4,
    Taylor2,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Euler => "euler",
            Method::Rk4 => "rk4",
            Method::Taylor2 => "taylor2",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euler" => Ok(Method::Euler),
            "rk4" => Ok(Method::Rk4),
            "taylor2" => Ok(Method::Taylor2),
            other => Err(format!(
                "method must be euler, rk4 or taylor2, got {other:?}"
            )),
        }
    }
}

/// Unit tangent of the level path of `f` through `z`.
pub fn tangent<E: JetEval + ?Sized>(
    f: &E,
    z: Complex,
    orientation: Orientation,
    singular_eps: f64,
) -> Result<Complex, TraceError> {
    let jet = eval(f, z)?;
    ensure_regular(z, &jet, singular_eps)?;
    // i·conj(f'·conj(f))/|f'·conj(f)|, normalized factor by factor to avoid overflow
    let t = orientation.sign() * I * (jet.d1.conj() / jet.d1.norm()) * (jet.v / jet.v.norm());
    let t = finite(t).map_err(|_| nonfinite(z))?;
    debug_assert!((t.norm() - 1.0).abs() <= 1e-12);
    Ok(t)
}

/// Unit tangent of the level path of `exp(g)` through `z`, from `g` alone.
pub fn tangent_log<E: JetEval + ?Sized>(
    g: &E,
    z: Complex,
    orientation: Orientation,
    singular_eps: f64,
) -> Result<Complex, TraceError> {
    let jet = eval(g, z)?;
    let derivative = jet.d1.norm();
    if !(derivative > singular_eps) {
        return Err(TraceError::SingularProximity {
            z,
            modulus: jet.v.exp().norm(),
            derivative,
        });
    }
    let t = orientation.sign() * I * jet.d1.conj() / derivative;
    finite(t).map_err(|_| nonfinite(z))
}

/// Second arc-length derivative `p''` at `z` for unit tangent `t` on level `c`.
pub fn curvature<E: JetEval + ?Sized>(
    f: &E,
    z: Complex,
    t: Complex,
    c: f64,
    singular_eps: f64,
) -> Result<Complex, TraceError> {
    let jet = eval(f, z)?;
    ensure_regular(z, &jet, singular_eps)?;
    if !((t.norm() - 1.0).abs() <= UNIT_TANGENT_TOL) {
        return Err(TraceError::NonUnitTangent(t));
    }
    let Jet2 { v, d1, d2 } = jet;
    let bent = d2 * t * t;
    let across = -(c * c) * bent.conj() / (2.0 * d1 * v.conj() * v.conj());
    let along = -bent / (2.0 * d1);
    // conj(f'/f): the third coefficient term of the order-2 series
    let log_deriv = -(d1 / v).conj();
    finite(across + along + log_deriv).map_err(|_| nonfinite(z))
}

/// `|f'·conj(f)²·t² + c²·conj(f')|`, which vanishes for the exact tangent on level `c`.
pub fn squared_relation_residual<E: JetEval + ?Sized>(
    f: &E,
    z: Complex,
    t: Complex,
    c: f64,
    singular_eps: f64,
) -> Result<f64, TraceError> {
    let jet = eval(f, z)?;
    ensure_regular(z, &jet, singular_eps)?;
    let fc = jet.v.conj();
    let r = (jet.d1 * fc * fc * t * t + c * c * jet.d1.conj()).norm();
    if r.is_finite() {
        Ok(r)
    } else {
        Err(nonfinite(z))
    }
}

/// Newton projection of `z` onto `|f| = c` along the modulus gradient.
pub fn correct<E: JetEval + ?Sized>(
    f: &E,
    z: Complex,
    c: f64,
    tol: f64,
    max_iter: usize,
    singular_eps: f64,
) -> Result<Complex, TraceError> {
    let mut z = z;
    for iterations in 0..=max_iter {
        let jet = eval(f, z)?;
        ensure_regular(z, &jet, singular_eps)?;
        let modulus = jet.v.norm();
        let residual = (modulus - c).abs();
        if residual <= tol {
            return Ok(z);
        }
        if iterations == max_iter {
            return Err(TraceError::CorrectorFailure {
                z,
                residual,
                iterations,
            });
        }
        let slope = jet.d1.norm();
        let normal = (jet.d1.conj() / slope) * (jet.v / modulus);
        let excess = (modulus - c) * (modulus + c);
        z -= (excess / (2.0 * slope * modulus)) * normal;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(nonfinite(z));
        }
    }
    unreachable!("loop returns on its last iteration")
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("step must be positive and finite, got {0}")]
    Step(f64),
    #[error("arc length must be positive and finite, got {0}")]
    ArcBudget(f64),
    #[error("{0} must be positive and finite")]
    Tolerance(&'static str),
    #[error("seed {seed} is singular: |f| = {modulus:e}, |f'| = {derivative:e} (threshold {threshold:e})")]
    SingularSeed {
        seed: String,
        modulus: f64,
        derivative: f64,
        threshold: f64,
    },
    #[error("cannot evaluate f at seed {seed}: {source}")]
    SeedEvaluation { seed: String, source: JetError },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceConfig {
    pub function: ExprNode,
    pub form: Form,
    pub seed: Complex,
    pub orientation: Orientation,
    /// Arc length per step.
    pub step: f64,
    /// Total arc length to trace.
    pub arc_budget: f64,
    pub method: Method,
    pub corrector_enabled: bool,
    pub corrector_tol: f64,
    pub corrector_max_iter: usize,
    pub singular_eps: f64,
    /// Defaults to `step / 2`.
    pub closure_tol: Option<f64>,
    /// Defaults to `ceil(arc_budget / step) + 16`.
    pub max_steps: Option<usize>,
}

impl TraceConfig {
    pub fn new(function: ExprNode, seed: Complex) -> Self {
        Self {
            function,
            form: Form::Direct,
            seed,
            orientation: Orientation::Forward,
            step: DEFAULT_STEP,
            arc_budget: DEFAULT_ARC_BUDGET,
            method: Method::Rk4,
            corrector_enabled: true,
            corrector_tol: DEFAULT_CORRECTOR_TOL,
            corrector_max_iter: DEFAULT_CORRECTOR_MAX_ITER,
            singular_eps: DEFAULT_SINGULAR_EPS,
            closure_tol: None,
            max_steps: None,
        }
    }

    pub fn closure_tol(&self) -> f64 {
        self.closure_tol.unwrap_or(self.step / 2.0)
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
            .unwrap_or_else(|| (self.arc_budget / self.step).ceil() as usize + 16)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPoint {
    /// Arc length from the seed.
    pub s: f64,
    pub z: Complex,
    /// `|f(z)|`.
    pub modulus: f64,
    /// `|f(z)| - c`.
    pub drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    ArcBudgetExhausted,
    ClosedLoop,
    SingularProximity,
    CorrectorFailure,
    MaxSteps,
    NonFiniteValue,
}

impl Termination {
    pub fn name(self) -> &'static str {
        match self {
            Termination::ArcBudgetExhausted => "ArcBudgetExhausted",
            Termination::ClosedLoop => "ClosedLoop",
            Termination::SingularProximity => "SingularProximity",
            Termination::CorrectorFailure => "CorrectorFailure",
            Termination::MaxSteps => "MaxSteps",
            Termination::NonFiniteValue => "NonFiniteValue",
        }
    }

    /// Whether the trace ended for a reason other than a numerical failure.
    pub fn is_success(self) -> bool {
        matches!(
            self,
            Termination::ArcBudgetExhausted | Termination::ClosedLoop
        )
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceResult {
    /// Never empty; the first point is the seed at `s = 0`.
    pub points: Vec<LevelPoint>,
    pub termination: Termination,
    /// The level `c = |f(seed)|`.
    pub level: f64,
    /// The step error behind a failure termination.
    pub error: Option<TraceError>,
}

/// The function being traced, seen as `f` regardless of how it was given.
#[derive(Debug, Clone, Copy)]
pub struct LevelFunction<'a> {
    pub expr: &'a ExprNode,
    pub form: Form,
}

impl JetEval for LevelFunction<'_> {
    fn jet(&self, z: Complex) -> Result<Jet2, JetError> {
        match self.form {
            Form::Direct => self.expr.eval_jet(z),
            Form::Log => Exponential(self.expr).jet(z),
        }
    }
}

impl LevelFunction<'_> {
    pub fn tangent(
        &self,
        z: Complex,
        orientation: Orientation,
        singular_eps: f64,
    ) -> Result<Complex, TraceError> {
        match self.form {
            Form::Direct => tangent(self.expr, z, orientation, singular_eps),
            Form::Log => {
                let jet = eval(self, z)?;
                ensure_regular(z, &jet, singular_eps)?;
                tangent_log(self.expr, z, orientation, singular_eps)
            }
        }
    }
}

/// A validated configuration together with its level `c`.
#[derive(Debug, Clone)]
pub struct Tracer<'a> {
    cfg: &'a TraceConfig,
    field: LevelFunction<'a>,
    level: f64,
    seed_tangent: Complex,
}

fn positive(x: f64) -> bool {
    x > 0.0 && x.is_finite()
}

impl<'a> Tracer<'a> {
    pub fn new(cfg: &'a TraceConfig) -> Result<Self, ConfigError> {
        if !positive(cfg.step) {
            return Err(ConfigError::Step(cfg.step));
        }
        if !positive(cfg.arc_budget) {
            return Err(ConfigError::ArcBudget(cfg.arc_budget));
        }
        if !positive(cfg.corrector_tol) {
            return Err(ConfigError::Tolerance("corrector tolerance"));
        }
        if !positive(cfg.singular_eps) {
            return Err(ConfigError::Tolerance("singular threshold"));
        }
        if !positive(cfg.closure_tol()) {
            return Err(ConfigError::Tolerance("closure tolerance"));
        }
        let field = LevelFunction {
            expr: &cfg.function,
            form: cfg.form,
        };
        let seed = cfg.seed;
        let jet = field
            .jet(seed)
            .map_err(|source| ConfigError::SeedEvaluation {
                seed: seed.to_string(),
                source,
            })?;
        let singular = |modulus: f64, derivative: f64| ConfigError::SingularSeed {
            seed: seed.to_string(),
            modulus,
            derivative,
            threshold: cfg.singular_eps,
        };
        let (modulus, derivative) = (jet.v.norm(), jet.d1.norm());
        if !(modulus > cfg.singular_eps && derivative > cfg.singular_eps) {
            return Err(singular(modulus, derivative));
        }
        let seed_tangent = field
            .tangent(seed, cfg.orientation, cfg.singular_eps)
            .map_err(|e| match e {
                TraceError::Evaluation { source, .. } => ConfigError::SeedEvaluation {
                    seed: seed.to_string(),
                    source,
                },
                TraceError::SingularProximity {
                    modulus,
                    derivative,
                    ..
                } => singular(modulus, derivative),
                _ => singular(modulus, derivative),
            })?;
        Ok(Self {
            cfg,
            field,
            level: modulus,
            seed_tangent,
        })
    }

    pub fn config(&self) -> &TraceConfig {
        self.cfg
    }

    /// `c = |f(seed)|`.
    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn function(&self) -> LevelFunction<'a> {
        self.field
    }

    pub fn tangent_at(&self, z: Complex) -> Result<Complex, TraceError> {
        self.field
            .tangent(z, self.cfg.orientation, self.cfg.singular_eps)
    }

    pub fn curvature_at(&self, z: Complex, t: Complex) -> Result<Complex, TraceError> {
        curvature(&self.field, z, t, self.level, self.cfg.singular_eps)
    }

    pub fn correct(&self, z: Complex) -> Result<Complex, TraceError> {
        correct(
            &self.field,
            z,
            self.level,
            self.cfg.corrector_tol,
            self.cfg.corrector_max_iter,
            self.cfg.singular_eps,
        )
    }

    fn euler(&self, z: Complex, h: f64) -> Result<Complex, TraceError> {
        let next = z + h * self.tangent_at(z)?;
        finite(next).map_err(|_| nonfinite(z))
    }

    fn rk4(&self, z: Complex, h: f64) -> Result<Complex, TraceError> {
        let k1 = self.tangent_at(z)?;
        let k2 = self.tangent_at(z + 0.5 * h * k1)?;
        let k3 = self.tangent_at(z + 0.5 * h * k2)?;
        let k4 = self.tangent_at(z + h * k3)?;
        // a stage slope opposing k1 means a stage point landed across a critical point
        for (k, stage) in [
            (k2, z + 0.5 * h * k1),
            (k3, z + 0.5 * h * k2),
            (k4, z + h * k3),
        ] {
            if (k * k1.conj()).re <= 0.0 {
                let jet = eval(&self.field, stage)?;
                return Err(TraceError::SingularProximity {
                    z: stage,
                    modulus: jet.v.norm(),
                    derivative: jet.d1.norm(),
                });
            }
        }
        let next = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        finite(next).map_err(|_| nonfinite(z))
    }

    fn taylor2(&self, z: Complex, h: f64) -> Result<Complex, TraceError> {
        let t = self.tangent_at(z)?;
        let bend = self.curvature_at(z, t)?;
        let next = z + h * t + (0.5 * h * h) * bend;
        finite(next).map_err(|_| nonfinite(z))
    }

    /// Moves `z` by arc length `h` with the configured method, without correction.
    pub fn advance(&self, z: Complex, h: f64) -> Result<Complex, TraceError> {
        match self.cfg.method {
            Method::Euler => self.euler(z, h),
            Method::Rk4 => self.rk4(z, h),
            Method::Taylor2 => self.taylor2(z, h),
        }
    }

    fn step_length(&self, s: f64) -> f64 {
        self.cfg.step.min(self.cfg.arc_budget - s).max(0.0)
    }

    pub fn step_euler(&self, s: f64, z: Complex) -> Result<(f64, Complex), TraceError> {
        let h = self.step_length(s);
        Ok((s + h, self.euler(z, h)?))
    }

    pub fn step_rk4(&self, s: f64, z: Complex) -> Result<(f64, Complex), TraceError> {
        let h = self.step_length(s);
        Ok((s + h, self.rk4(z, h)?))
    }

    pub fn step_taylor2(&self, s: f64, z: Complex) -> Result<(f64, Complex), TraceError> {
        let h = self.step_length(s);
        Ok((s + h, self.taylor2(z, h)?))
    }

    /// One step with the configured method: `(s + h', z_next)` with `h' = min(h, L - s)`.
    pub fn step(&self, s: f64, z: Complex) -> Result<(f64, Complex), TraceError> {
        let h = self.step_length(s);
        Ok((s + h, self.advance(z, h)?))
    }

    fn advance_corrected(&self, z: Complex, h: f64) -> Result<Complex, TraceError> {
        let next = self.advance(z, h)?;
        if self.cfg.corrector_enabled {
            self.correct(next)
        } else {
            Ok(next)
        }
    }

    fn point(&self, s: f64, z: Complex) -> Result<LevelPoint, TraceError> {
        let modulus = eval(&self.field, z)?.v.norm();
        if !modulus.is_finite() {
            return Err(nonfinite(z));
        }
        Ok(LevelPoint {
            s,
            z,
            modulus,
            drift: modulus - self.level,
        })
    }

    /// A tangent turning by more than a right angle within one step means the
    /// step jumped across a critical point of `f`, where the field flips.
    fn ensure_no_reversal(
        &self,
        p: LevelPoint,
        t: Complex,
        t_prev: Complex,
    ) -> Result<(), TraceError> {
        if (t * t_prev.conj()).re > 0.0 {
            return Ok(());
        }
        let derivative = eval(&self.field, p.z)?.d1.norm();
        Err(TraceError::SingularProximity {
            z: p.z,
            modulus: p.modulus,
            derivative,
        })
    }

    pub fn trace(&self) -> TraceResult {
        let cfg = self.cfg;
        let (h, budget) = (cfg.step, cfg.arc_budget);
        let seed = cfg.seed;
        let warmup = CLOSURE_WARMUP_STEPS * h;
        let closure_tol = cfg.closure_tol();
        let max_steps = cfg.max_steps();

        let mut points = vec![LevelPoint {
            s: 0.0,
            z: seed,
            modulus: self.level,
            drift: 0.0,
        }];
        let mut error = None;
        let mut steps = 0usize;
        let (mut s, mut z) = (0.0, seed);
        let mut t_prev = self.seed_tangent;

        let termination = loop {
            if s >= budget {
                break Termination::ArcBudgetExhausted;
            }
            if steps >= max_steps {
                break Termination::MaxSteps;
            }
            // s is derived from the step count so that it does not accumulate rounding
            let mut s_next = ((steps + 1) as f64 * h).min(budget);
            if budget - s_next <= BUDGET_SNAP * h {
                s_next = budget;
            }
            let next = self
                .advance_corrected(z, s_next - s)
                .and_then(|z| Ok((self.point(s_next, z)?, self.tangent_at(z)?)))
                .and_then(|(p, t)| self.ensure_no_reversal(p, t, t_prev).map(|_| (p, t)));
            let (next, t) = match next {
                Ok(v) => v,
                Err(e) => {
                    let t = e.termination();
                    error = Some(e);
                    break t;
                }
            };
            steps += 1;
            s = next.s;
            z = next.z;
            t_prev = t;
            points.push(next);

            if s >= warmup
                && (z - seed).norm() < closure_tol
                && (t * self.seed_tangent.conj()).re > 0.0
            {
                self.close_loop(&mut points, t);
                break Termination::ClosedLoop;
            }
        };

        TraceResult {
            points,
            termination,
            level: self.level,
            error,
        }
    }

    /// Replaces the tail of a closed trace so that it ends on the seed.
    ///
    /// The remaining arc is estimated by projecting `seed - z` onto the
    /// tangent and refined by re-stepping. If the last point already overshot
    /// the seed it is dropped and the closing step starts one point earlier.
    fn close_loop(&self, points: &mut Vec<LevelPoint>, t_last: Complex) {
        let seed = self.cfg.seed;
        let last = *points.last().expect("trace has points");
        let ahead = ((seed - last.z) * t_last.conj()).re;
        let (base, popped, mut arc) = if ahead >= 0.0 || points.len() < 3 {
            (last, None, ahead.max(0.0))
        } else {
            points.pop();
            let base = *points.last().expect("trace has points");
            (base, Some(last), last.s - base.s + ahead)
        };

        let mut closing = None;
        for _ in 0..4 {
            // the closing step never runs past the arc budget
            arc = arc.min(self.cfg.arc_budget - base.s);
            if !(arc > 0.0) {
                closing = None;
                break;
            }
            let attempt = self
                .advance_corrected(base.z, arc)
                .and_then(|z| Ok((z, self.tangent_at(z)?)));
            let Ok((z, t)) = attempt else {
                closing = None;
                break;
            };
            let miss = ((seed - z) * t.conj()).re;
            closing = Some((arc, z));
            if miss.abs() <= 1e-14 * self.cfg.step.max(1.0) {
                break;
            }
            arc += miss;
        }

        match closing.map(|(arc, z)| self.point(base.s + arc, z)) {
            Some(Ok(p)) => points.push(p),
            _ => {
                if let Some(p) = popped {
                    points.push(p);
                }
            }
        }
    }
}

/// Validates `cfg` and traces the level path through its seed.
pub fn trace(cfg: &TraceConfig) -> Result<TraceResult, ConfigError> {
    Ok(Tracer::new(cfg)?.trace())
}
