use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levelpath::{
    curvature, squared_relation_residual, tangent_log, trace, Complex, ExprNode, Form,
    LevelFunction, Method, Orientation, TraceConfig,
};
use rayon::prelude::*;

use crate::literal::parse_complex_literal;
use crate::output::{number, write_records, OutputFormat, TraceRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_TRACE_FAILURE: i32 = 2;
pub const EXIT_WRITE: i32 = 3;

const SYNTAX: &str = "\
EXPRESSION SYNTAX:
  expr   := term (('+' | '-') term)*
  term   := factor (('*' | '/') factor)*
  factor := '-' factor | atom ('^' '-'? INT)?
  atom   := NUMBER | 'i' | 'z' | NAME '(' expr ')' | '(' expr ')'
  NAME   := exp | log | sin | cos | tan | sinh | cosh | tanh

  '^' binds tighter than unary minus (-z^2 is -(z^2)) and takes only an
  integer literal exponent; write general powers as exp(w*log(z)). There is
  no implicit multiplication: write 2*z and 2*i. log is the principal branch.

COMPLEX LITERALS:
  A, Bi, A+Bi, A-Bi, i, -i with decimal A and B and no spaces, e.g. 1.5-0.5i

EXIT STATUS:
  0 trace finished (arc length used up or loop closed)
  1 invalid arguments, expression or seed
  2 trace stopped early (singular point, corrector failure, step limit,
    non-finite value); partial output is still written
  3 output could not be written";

#[derive(Debug, Parser)]
#[command(
    name = "levelpath",
    version,
    about = "Trace level curves |f(z)| = c of analytic functions by arc length"
)]
#[command(after_help = SYNTAX)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace the level path through one seed.
    Trace(TraceArgs),
    /// Trace the level paths through several seeds.
    Sweep(SweepArgs),
    /// Print tangent, curvature, squared-relation residual and modulus at a point.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Euler,
    Rk4,
    Taylor2,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Euler => Method::Euler,
            MethodArg::Rk4 => Method::Rk4,
            MethodArg::Taylor2 => Method::Taylor2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    /// The expression is f.
    Direct,
    /// The expression is g and f = exp(g).
    Log,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Direct => Form::Direct,
            FormArg::Log => Form::Log,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

fn parse_orientation(s: &str) -> Result<Orientation, String> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Expression for f (or g with --form log) in the variable z.
    #[arg(short = 'f', long = "function", allow_hyphen_values = true)]
    pub function: String,
    #[arg(long, value_enum, default_value = "direct")]
    pub form: FormArg,
    /// +1 or -1.
    #[arg(long, default_value = "+1", value_parser = parse_orientation, allow_hyphen_values = true)]
    pub orientation: Orientation,
}

#[derive(Debug, Args)]
pub struct TraceOptions {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Arc length per step.
    #[arg(long, default_value_t = levelpath::tracer::DEFAULT_STEP)]
    pub step: f64,
    /// Arc length to trace.
    #[arg(long, default_value_t = levelpath::tracer::DEFAULT_ARC_BUDGET)]
    pub length: f64,
    #[arg(long, value_enum, default_value = "rk4")]
    pub method: MethodArg,
    /// Newton projection back onto the level after each step.
    #[arg(long, value_enum, default_value = "on")]
    pub corrector: Switch,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub options: TraceOptions,
    /// Starting point z0.
    #[arg(long, allow_hyphen_values = true)]
    pub seed: String,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub options: TraceOptions,
    /// Starting points separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub seeds: String,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Point to probe.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Trace(args) => run_trace(&args, stdout, stderr),
        Command::Sweep(args) => run_sweep(&args, stdout, stderr),
        Command::Probe(args) => run_probe(&args, stdout, stderr),
    }
}

/// Parses arguments and runs, mapping usage errors to exit status 1.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, stdout, stderr),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_CONFIG
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            }
        }
    }
}

fn parse_function(text: &str, stderr: &mut dyn Write) -> Option<ExprNode> {
    match text.parse() {
        Ok(e) => Some(e),
        Err(e) => {
            let _ = writeln!(stderr, "error: in expression {text:?}: {e}");
            None
        }
    }
}

fn config(options: &TraceOptions, function: ExprNode, seed: Complex) -> TraceConfig {
    TraceConfig {
        form: options.function.form.into(),
        orientation: options.function.orientation,
        step: options.step,
        arc_budget: options.length,
        method: options.method.into(),
        corrector_enabled: options.corrector == Switch::On,
        ..TraceConfig::new(function, seed)
    }
}

fn trace_one(
    options: &TraceOptions,
    function: &ExprNode,
    index: usize,
    seed_text: &str,
) -> Result<TraceRecord, String> {
    let seed = parse_complex_literal(seed_text).map_err(|e| e.to_string())?;
    let cfg = config(options, function.clone(), seed);
    let result = trace(&cfg).map_err(|e| e.to_string())?;
    Ok(TraceRecord {
        index,
        function: options.function.function.clone(),
        seed: seed_text.to_string(),
        method: cfg.method,
        orientation: cfg.orientation,
        result,
    })
}

fn emit(
    options: &TraceOptions,
    records: &[TraceRecord],
    sweep: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> bool {
    let written = match &options.out {
        Some(path) => File::create(path).and_then(|file| {
            let mut w = BufWriter::new(file);
            write_records(&mut w, options.format, records, sweep)?;
            w.flush()
        }),
        None => write_records(stdout, options.format, records, sweep).and_then(|_| stdout.flush()),
    };
    match written {
        Ok(()) => true,
        Err(e) => {
            let target = options
                .out
                .as_ref()
                .map_or("standard output".to_string(), |p| p.display().to_string());
            let _ = writeln!(stderr, "error: writing {target}: {e}");
            false
        }
    }
}

fn warn_failure(rec: &TraceRecord, stderr: &mut dyn Write) {
    let detail = rec
        .result
        .error
        .as_ref()
        .map(|e| format!(": {e}"))
        .unwrap_or_default();
    let _ = writeln!(
        stderr,
        "warning: trace {} from {} stopped with {} after {} points{detail}",
        rec.index,
        rec.seed,
        rec.result.termination,
        rec.result.points.len()
    );
}

pub fn run_trace(args: &TraceArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let Some(function) = parse_function(&args.options.function.function, stderr) else {
        return EXIT_CONFIG;
    };
    let record = match trace_one(&args.options, &function, 0, &args.seed) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let success = record.result.termination.is_success();
    if !success {
        warn_failure(&record, stderr);
    }
    if !emit(
        &args.options,
        std::slice::from_ref(&record),
        false,
        stdout,
        stderr,
    ) {
        return EXIT_WRITE;
    }
    if success {
        EXIT_OK
    } else {
        EXIT_TRACE_FAILURE
    }
}

pub fn run_sweep(args: &SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let Some(function) = parse_function(&args.options.function.function, stderr) else {
        return EXIT_CONFIG;
    };
    if args.seeds.is_empty() {
        let _ = writeln!(stderr, "error: --seeds is empty");
        return EXIT_CONFIG;
    }
    let seeds: Vec<&str> = args.seeds.split(';').collect();
    let outcomes: Vec<Result<TraceRecord, String>> = seeds
        .par_iter()
        .enumerate()
        .map(|(index, seed)| trace_one(&args.options, &function, index, seed))
        .collect();

    let mut records = Vec::with_capacity(outcomes.len());
    let mut successes = 0;
    for (index, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(rec) => {
                if rec.result.termination.is_success() {
                    successes += 1;
                } else {
                    warn_failure(&rec, stderr);
                }
                records.push(rec);
            }
            Err(e) => {
                let _ = writeln!(
                    stderr,
                    "warning: seed {index} ({:?}) skipped: {e}",
                    seeds[index]
                );
            }
        }
    }
    if !emit(&args.options, &records, true, stdout, stderr) {
        return EXIT_WRITE;
    }
    if successes > 0 {
        EXIT_OK
    } else {
        EXIT_TRACE_FAILURE
    }
}

fn complex_json(z: Complex) -> String {
    format!("{{\"re\":{},\"im\":{}}}", number(z.re), number(z.im))
}

pub fn run_probe(args: &ProbeArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let Some(expr) = parse_function(&args.function.function, stderr) else {
        return EXIT_CONFIG;
    };
    let z = match parse_complex_literal(&args.at) {
        Ok(z) => z,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let eps = levelpath::tracer::DEFAULT_SINGULAR_EPS;
    let field = LevelFunction {
        expr: &expr,
        form: args.function.form.into(),
    };
    let orientation = args.function.orientation;
    let probed = (|| {
        let t = match field.form {
            Form::Direct => field.tangent(z, orientation, eps)?,
            Form::Log => tangent_log(&expr, z, orientation, eps)?,
        };
        let modulus = levelpath::JetEval::jet(&field, z)
            .map_err(|source| levelpath::TraceError::Evaluation { z, source })?
            .v
            .norm();
        let bend = curvature(&field, z, t, modulus, eps)?;
        let residual = squared_relation_residual(&field, z, t, modulus, eps)?;
        Ok::<_, levelpath::TraceError>((t, bend, residual, modulus))
    })();
    match probed {
        Ok((t, bend, residual, modulus)) => {
            let line = format!(
                "{{\"tangent\":{},\"curvature\":{},\"residual\":{},\"modulus\":{}}}",
                complex_json(t),
                complex_json(bend),
                number(residual),
                number(modulus)
            );
            match writeln!(stdout, "{line}").and_then(|_| stdout.flush()) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: writing standard output: {e}");
                    EXIT_WRITE
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}: {e}", e.termination());
            EXIT_TRACE_FAILURE
        }
    }
}
