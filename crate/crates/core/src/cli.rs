//! Command-line front end.
//!
//! Every subcommand builds a serializable report. JSON mode prints it as one
//! line; text mode renders the same value as `key: value` lines, so both
//! modes always carry the same verdicts. Failures print a structured error
//! and map onto exit codes 2 (bad input), 3 (precondition), 4 (budget) and
//! 5 (verification).

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::classify::{
    classify_rad_clean, normalize_invertible_trace, trace_property_check, Case, Classification,
    Condition, Method, Reason, Reduction, TraceProperty,
};
use crate::error::{Error, Result};
use crate::mat2::{Mat2, MonicQuadratic};
use crate::oracle::{self, Budget, OracleReport, Predicate, Selection};
use crate::quadratic::{solve_split_quadratic, solve_x2_plus_x, Evidence};
use crate::rings::Ring;
use crate::series;

#[derive(Parser, Debug)]
#[command(
    name = "radclean",
    version,
    about = "Strongly rad-clean 2x2 matrices over local rings"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    All,
    Clean,
    RadClean,
    JClean,
    Quasipolar,
}

impl From<Check> for Selection {
    fn from(c: Check) -> Self {
        match c {
            Check::All => Selection::All,
            Check::Clean => Selection::Only(Predicate::Clean),
            Check::RadClean => Selection::Only(Predicate::RadClean),
            Check::JClean => Selection::Only(Predicate::JClean),
            Check::Quasipolar => Selection::Only(Predicate::Quasipolar),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide strong rad-cleanness and strong cleanness of a matrix.
    Classify {
        #[arg(long)]
        ring: String,
        /// Matrix literal "a,b;c,d".
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Include the decomposition A = E + U.
        #[arg(long)]
        witness: bool,
    },
    /// Split t^2 + mu*t + lambda with mu a unit and lambda radical.
    Roots {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Radical root of x^2 + x = c.
    Solve {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Lift a radical root from the base ring to a power series ring.
    Lift {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        /// Root over the base ring.
        #[arg(long, allow_hyphen_values = true)]
        b0: String,
    },
    /// Cross-check closed-form criteria against brute force over Zmod.
    Oracle {
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value_t = Check::All)]
        check: Check,
        #[arg(long, default_value_t = Budget::default().max_modulus)]
        max_modulus: u64,
    },
    /// Check that every matrix with unit trace is strongly rad-clean.
    TraceProperty {
        #[arg(long)]
        ring: String,
        /// Pair budget: the exhaustive limit for Zmod, the sample size otherwise.
        #[arg(long, default_value_t = 100)]
        samples: u64,
    },
    /// Conjugate a matrix with unit trace into companion form.
    Normalize {
        #[arg(long)]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
    },
}

type Rows = [[String; 2]; 2];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsJson {
    pub alpha: String,
    pub beta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    #[serde(rename = "E")]
    pub e: Rows,
    #[serde(rename = "U")]
    pub u: Rows,
    pub verified: Vec<Condition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub ring: String,
    pub matrix: Rows,
    pub trace: String,
    pub det: String,
    pub case: Case,
    pub strongly_rad_clean: bool,
    pub strongly_clean: bool,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roots: Option<RootsJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
}

impl ClassifyReport {
    pub fn new(a: &Mat2, c: &Classification, with_witness: bool) -> Self {
        Self {
            ring: a.ring().to_string(),
            matrix: a.rows(),
            trace: a.trace().to_string(),
            det: a.det().to_string(),
            case: c.case,
            strongly_rad_clean: c.strongly_rad_clean,
            strongly_clean: c.strongly_clean,
            method: c.method,
            reason: c.reason,
            roots: c.roots.as_ref().map(|r| RootsJson {
                alpha: r.alpha.to_string(),
                beta: r.beta.to_string(),
            }),
            witness: c
                .witness
                .as_ref()
                .filter(|_| with_witness)
                .map(|w| WitnessJson {
                    e: w.e.rows(),
                    u: w.u.rows(),
                    verified: w.transcript.clone(),
                }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsReport {
    pub ring: String,
    pub mu: String,
    pub lambda: String,
    pub alpha: String,
    pub beta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub ring: String,
    pub c: String,
    pub x: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    pub ring: String,
    pub mu: String,
    pub lambda: String,
    pub b0: String,
    pub root: String,
    pub residual: String,
    pub residual_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleJson {
    pub lambda: String,
    pub mu: String,
    pub matrix: Rows,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePropertyReport {
    pub ring: String,
    pub holds: bool,
    pub pairs_checked: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<Evidence>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeReport {
    pub ring: String,
    pub matrix: Rows,
    pub reduction: Reduction,
    pub transform: Rows,
    pub form: Rows,
    /// Whether `form` is similar to the input (false only for a
    /// row-reduced invertible matrix).
    pub similar: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        Self {
            error: e.kind().to_owned(),
            message: e.to_string(),
            exit_code: e.exit_code(),
        }
    }
}

fn classify(ring: &str, matrix: &str, witness: bool) -> Result<ClassifyReport> {
    let ring = Ring::parse(ring)?;
    let a = Mat2::parse(&ring, matrix)?;
    let c = if ring.is_series() {
        series::classify_series_matrix(&a)?
    } else {
        classify_rad_clean(&a)?
    };
    Ok(ClassifyReport::new(&a, &c, witness))
}

fn roots(ring: &str, mu: &str, lambda: &str) -> Result<RootsReport> {
    let ring = Ring::parse(ring)?;
    let q = MonicQuadratic::new(ring.parse_elem(mu)?, ring.parse_elem(lambda)?)?;
    let r = solve_split_quadratic(&q)?;
    Ok(RootsReport {
        ring: ring.to_string(),
        mu: q.mu().to_string(),
        lambda: q.lam().to_string(),
        alpha: r.alpha.to_string(),
        beta: r.beta.to_string(),
    })
}

fn solve(ring: &str, c: &str) -> Result<SolveReport> {
    let ring = Ring::parse(ring)?;
    let c = ring.parse_elem(c)?;
    let x = solve_x2_plus_x(&c)?;
    Ok(SolveReport {
        ring: ring.to_string(),
        c: c.to_string(),
        x: x.to_string(),
    })
}

fn lift(ring: &str, mu: &str, lambda: &str, b0: &str) -> Result<LiftReport> {
    let ring = Ring::parse(ring)?;
    let base = ring
        .base()
        .ok_or_else(|| Error::PreconditionViolated(format!("{ring} is not a power series ring")))?;
    let mu = ring.parse_elem(mu)?;
    let lam = ring.parse_elem(lambda)?;
    let b0 = base.parse_elem(b0)?;
    let y = series::lift_root_recurrence(&mu, &lam, &b0)?;
    let residual = series::residual(&mu, &lam, &y)?;
    Ok(LiftReport {
        ring: ring.to_string(),
        mu: mu.to_string(),
        lambda: lam.to_string(),
        b0: b0.to_string(),
        root: y.to_string(),
        residual_zero: residual.is_zero(),
        residual: residual.to_string(),
    })
}

fn oracle(ring: &str, check: Check, max_modulus: u64) -> Result<OracleReport> {
    let ring = Ring::parse(ring)?;
    oracle::exhaustive_cross_check(&ring, check.into(), Budget { max_modulus })
}

fn trace_property(ring: &str, samples: u64) -> Result<TracePropertyReport> {
    let ring = Ring::parse(ring)?;
    Ok(match trace_property_check(&ring, samples)? {
        TraceProperty::Holds {
            evidence,
            pairs_checked,
        } => TracePropertyReport {
            ring: ring.to_string(),
            holds: true,
            pairs_checked,
            evidence: Some(evidence),
            counterexample: None,
        },
        TraceProperty::Counterexample {
            lambda,
            mu,
            matrix,
            pairs_checked,
        } => TracePropertyReport {
            ring: ring.to_string(),
            holds: false,
            pairs_checked,
            evidence: None,
            counterexample: Some(CounterexampleJson {
                lambda: lambda.to_string(),
                mu: mu.to_string(),
                matrix: matrix.rows(),
            }),
        },
    })
}

fn normalize(ring: &str, matrix: &str) -> Result<NormalizeReport> {
    let ring = Ring::parse(ring)?;
    let a = Mat2::parse(&ring, matrix)?;
    let n = normalize_invertible_trace(&a)?;
    Ok(NormalizeReport {
        ring: ring.to_string(),
        matrix: a.rows(),
        reduction: n.reduction,
        transform: n.transform.rows(),
        form: n.form.rows(),
        similar: n.reduction != Reduction::UnitDiagonal,
    })
}

fn dispatch(command: &Command) -> Result<Value> {
    fn json<T: Serialize>(r: Result<T>) -> Result<Value> {
        Ok(serde_json::to_value(r?).expect("reports serialize"))
    }
    match command {
        Command::Classify {
            ring,
            matrix,
            witness,
        } => json(classify(ring, matrix, *witness)),
        Command::Roots { ring, mu, lambda } => json(roots(ring, mu, lambda)),
        Command::Solve { ring, c } => json(solve(ring, c)),
        Command::Lift {
            ring,
            mu,
            lambda,
            b0,
        } => json(lift(ring, mu, lambda, b0)),
        Command::Oracle {
            ring,
            check,
            max_modulus,
        } => json(oracle(ring, *check, *max_modulus)),
        Command::TraceProperty { ring, samples } => json(trace_property(ring, *samples)),
        Command::Normalize { ring, matrix } => json(normalize(ring, matrix)),
    }
}

fn is_matrix(v: &Value) -> Option<String> {
    let rows = v.as_array().filter(|r| r.len() == 2)?;
    let mut out = Vec::with_capacity(2);
    for row in rows {
        let cells = row.as_array().filter(|c| c.len() == 2)?;
        let cells: Option<Vec<&str>> = cells.iter().map(Value::as_str).collect();
        out.push(cells?.join(","));
    }
    Some(out.join(";"))
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".to_owned()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let Value::Object(map) = v else {
        out.push_str(&format!(
            "{pad}{}\n",
            scalar(v).or_else(|| is_matrix(v)).unwrap_or_default()
        ));
        return;
    };
    for (key, value) in map {
        if let Some(s) = scalar(value).or_else(|| is_matrix(value)) {
            out.push_str(&format!("{pad}{key}: {s}\n"));
        } else if let Value::Array(items) = value {
            let flat: Option<Vec<String>> = items
                .iter()
                .map(|i| scalar(i).or_else(|| is_matrix(i)))
                .collect();
            match flat {
                Some(flat) => out.push_str(&format!("{pad}{key}: [{}]\n", flat.join(", "))),
                None => {
                    out.push_str(&format!("{pad}{key}:\n"));
                    for item in items {
                        out.push_str(&format!("{pad}  -\n"));
                        render_text(item, indent + 2, out);
                    }
                }
            }
        } else {
            out.push_str(&format!("{pad}{key}:\n"));
            render_text(value, indent + 1, out);
        }
    }
}

fn emit(v: &Value, format: Format, sink: &mut dyn Write) {
    let text = match format {
        Format::Json => format!("{v}\n"),
        Format::Text => {
            let mut s = String::new();
            render_text(v, 0, &mut s);
            s
        }
    };
    // a closed pipe is not worth a panic
    let _ = sink.write_all(text.as_bytes());
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => {
            emit(&report, cli.format, out);
            0
        }
        Err(e) => {
            let report = serde_json::to_value(ErrorReport::from(&e)).expect("reports serialize");
            emit(&report, cli.format, err);
            e.exit_code()
        }
    }
}
