//! The `alambda` command line.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 input error, 3 normal form
//! reached early, 4 budget exhausted.

use std::ffi::OsString;
use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{canonicalize, AlgebraicTerm};
use crate::conservativity::{self, Equivalence, Report};
use crate::error::{Error, Result};
use crate::mashup::{self, Derivation, Proof, Verdict};
use crate::reduction::{beta_reaches, leftmost_step, AlgTrace, Reach, SplitPolicy};
use crate::semiring::SemiringId;
use crate::syntax::{parse, parse_pure, PureTerm};

pub const FORMAT_VERSION: u64 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NORMAL: i32 = 3;
pub const EXIT_UNKNOWN: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Demo {
    /// A reduction whose pure choices cannot be lifted back.
    #[value(name = "claim21")]
    Lifting,
    /// A half-split step leaving the pure terms.
    #[value(name = "subars")]
    Split,
    /// The fixpoint chain giving 0 ↔ σ over the integers.
    Inconsistency,
}

#[derive(Debug, Parser)]
#[command(name = "alambda", version, about = "Algebraic λ-calculus toolkit")]
pub struct Cli {
    /// Coefficient semiring.
    #[arg(long, global = true, default_value = "nat")]
    pub semiring: SemiringId,
    /// Search budget, in expanded terms.
    #[arg(long, global = true, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    /// Which coefficient splits reduction searches enumerate.
    #[arg(long, global = true, default_value = "full")]
    pub split: SplitPolicy,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical form of a term.
    Canon { term: String },
    /// Reduce with the leftmost strategy, full splits.
    Reduce {
        term: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Search for a β-reduction between two pure terms.
    Beta { from: String, to: String },
    /// Search for a mashup derivation of `subject ⊩ goal`.
    Prove { subject: String, goal: String },
    /// Check a derivation record (`-` reads standard input).
    Check { file: String },
    /// Turn an algebraic trace record into a β-reduction certificate.
    Conserve { file: String },
    /// Search for evidence that two pure terms are convertible.
    Equiv { left: String, right: String },
    /// Print the support of a term.
    Support { term: String },
    /// Print the pure terms obtained by choosing one summand everywhere.
    LambdaSupport { term: String },
    /// Run a built-in demonstration.
    Demo {
        name: Demo,
        /// The term σ used by the inconsistency demo.
        #[arg(long, default_value = "y")]
        sigma: String,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut session = Session { cli: &cli, out };
    match session.dispatch() {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidTrace(_) | Error::InvalidStep(_) | Error::InvalidDerivation { .. } => {
                    EXIT_NEGATIVE
                }
                _ => EXIT_INPUT,
            }
        }
    }
}

struct Session<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

fn io_error(e: std::io::Error) -> Error {
    Error::usage(format!("i/o error: {e}"))
}

impl Session<'_> {
    fn semiring(&self) -> SemiringId {
        self.cli.semiring
    }

    fn fuel(&self) -> usize {
        usize::try_from(self.cli.fuel).unwrap_or(usize::MAX)
    }

    fn json(&self) -> bool {
        self.cli.format == Format::JsonLines
    }

    fn term(&self, text: &str) -> Result<AlgebraicTerm> {
        let text = read_arg(text)?;
        canonicalize(&parse(&text, self.semiring())?, self.semiring())
    }

    fn pure(&self, text: &str) -> Result<PureTerm> {
        parse_pure(&read_arg(text)?)
    }

    fn line(&mut self, text: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", text.as_ref()).map_err(io_error)
    }

    fn record(&mut self, kind: &str, fields: Value) -> Result<()> {
        let mut obj = json!({ "version": FORMAT_VERSION, "record": kind });
        if let (Some(o), Value::Object(extra)) = (obj.as_object_mut(), fields) {
            o.extend(extra);
        }
        self.line(obj.to_string())
    }

    fn header(&mut self) -> Result<()> {
        let (s, fuel, split) = (self.semiring(), self.cli.fuel, self.cli.split);
        if self.json() {
            self.record(
                "header",
                json!({ "semiring": s, "fuel": fuel, "split": split.name() }),
            )
        } else {
            self.line(format!("# semiring {s}, fuel {fuel}, split {split}"))
        }
    }

    fn dispatch(&mut self) -> Result<i32> {
        if !self.cli.split.is_valid_for(self.semiring()) {
            return Err(Error::usage(format!(
                "split policy `{}` does not apply to {}",
                self.cli.split,
                self.semiring()
            )));
        }
        match &self.cli.command {
            Command::Canon { term } => self.canon(term),
            Command::Reduce { term, steps } => self.reduce(term, *steps),
            Command::Beta { from, to } => self.beta(from, to),
            Command::Prove { subject, goal } => self.prove(subject, goal),
            Command::Check { file } => self.check(file),
            Command::Conserve { file } => self.conserve(file),
            Command::Equiv { left, right } => self.equiv(left, right),
            Command::Support { term } => self.support(term, false),
            Command::LambdaSupport { term } => self.support(term, true),
            Command::Demo { name, sigma } => self.demo(*name, sigma),
        }
    }

    fn canon(&mut self, text: &str) -> Result<i32> {
        let t = self.term(text)?;
        if self.json() {
            self.record("term", json!({ "text": t.to_string(), "term": t }))?;
        } else {
            self.line(t.to_string())?;
        }
        Ok(EXIT_OK)
    }

    fn reduce(&mut self, text: &str, steps: usize) -> Result<i32> {
        let start = self.term(text)?;
        self.semiring().require_positive()?;
        let mut trace = AlgTrace::empty(start);
        while trace.len() < steps {
            match leftmost_step(trace.end()) {
                Some(r) => trace.push(r),
                None => break,
            }
        }
        let early = trace.len() < steps;
        self.header()?;
        if self.json() {
            self.record(
                "trace",
                json!({ "end": trace.end().to_string(), "normal": early, "trace": trace }),
            )?;
        } else {
            self.line(trace.to_string())?;
            if early {
                self.line(format!("normal form reached after {} step(s)", trace.len()))?;
            }
        }
        Ok(if early { EXIT_NORMAL } else { EXIT_OK })
    }

    fn beta(&mut self, from: &str, to: &str) -> Result<i32> {
        let (m, n) = (self.pure(from)?, self.pure(to)?);
        let outcome = beta_reaches(&m, &n, self.fuel());
        self.header()?;
        let (verdict, code) = match &outcome {
            Reach::Found(_) => ("reachable", EXIT_OK),
            Reach::Unreachable { .. } => ("unreachable", EXIT_NEGATIVE),
            Reach::Unknown { .. } => ("unknown", EXIT_UNKNOWN),
        };
        if self.json() {
            let trace = match &outcome {
                Reach::Found(t) => json!(t),
                _ => Value::Null,
            };
            self.record("beta", json!({ "verdict": verdict, "trace": trace }))?;
        } else {
            match outcome {
                Reach::Found(t) => self.line(format!("{t}\n{} step(s)", t.len()))?,
                Reach::Unreachable { explored } => {
                    self.line(format!("unreachable: all {explored} reducts explored"))?
                }
                Reach::Unknown { explored } => {
                    self.line(format!("unknown: budget exhausted after {explored} terms"))?
                }
            }
        }
        Ok(code)
    }

    fn prove(&mut self, subject: &str, goal: &str) -> Result<i32> {
        let m = self.pure(subject)?;
        let sigma = self.term(goal)?;
        let proof = mashup::prove(&m, &sigma, self.fuel());
        self.header()?;
        let code = match proof {
            Proof::Proved(d) => {
                let d = Derivation::Mashup(d);
                let j = mashup::check(&d).into_result()?;
                if self.json() {
                    self.record(
                        "derivation",
                        json!({ "conclusion": j.to_string(), "derivation": d }),
                    )?;
                } else {
                    self.line(j.to_string())?;
                    self.line(mashup::render(&d).trim_end())?;
                }
                EXIT_OK
            }
            Proof::Refuted => {
                self.verdict_line("refuted", "no derivation exists")?;
                EXIT_NEGATIVE
            }
            Proof::Unknown => {
                self.verdict_line("unknown", "budget exhausted")?;
                EXIT_UNKNOWN
            }
        };
        Ok(code)
    }

    fn verdict_line(&mut self, verdict: &str, text: &str) -> Result<()> {
        if self.json() {
            self.record("verdict", json!({ "verdict": verdict }))
        } else {
            self.line(format!("{verdict}: {text}"))
        }
    }

    fn check(&mut self, file: &str) -> Result<i32> {
        let d: Derivation = read_record(file, "derivation", "derivation")?;
        let verdict = mashup::check(&d);
        let code = match &verdict {
            Verdict::Valid(j) => {
                if self.json() {
                    self.record("check", json!({ "valid": true, "conclusion": j.to_string() }))?;
                } else {
                    self.line(format!("valid: {j}"))?;
                }
                EXIT_OK
            }
            Verdict::Invalid { path, reason } => {
                if self.json() {
                    self.record("check", json!({ "valid": false, "path": path, "reason": reason }))?;
                } else {
                    self.line(format!("invalid at {path}: {reason}"))?;
                }
                EXIT_NEGATIVE
            }
        };
        Ok(code)
    }

    fn conserve(&mut self, file: &str) -> Result<i32> {
        let trace: AlgTrace = read_record(file, "trace", "trace")?;
        let cert = conservativity::conserve(&trace)?;
        cert.verify()?;
        if self.json() {
            self.record(
                "certificate",
                json!({
                    "source": cert.source.to_string(),
                    "target": cert.target.to_string(),
                    "certificate": cert,
                }),
            )?;
        } else {
            self.line(format!("{} ~>* {}", cert.source, cert.target))?;
            self.line(format!("algebraic steps: {}", cert.alg.len()))?;
            for (i, d) in cert.derivations.iter().enumerate() {
                let j = d.judgement()?;
                self.line(format!("  [{i}] {j}"))?;
            }
            self.line(format!("β-trace ({} step(s)): {}", cert.beta.len(), cert.beta))?;
        }
        Ok(EXIT_OK)
    }

    fn equiv(&mut self, left: &str, right: &str) -> Result<i32> {
        let (m, n) = (self.pure(left)?, self.pure(right)?);
        let outcome = conservativity::equiv_check(&m, &n, self.semiring(), self.fuel(), self.cli.split)?;
        self.header()?;
        let code = match outcome {
            Equivalence::Equivalent(e) => {
                if self.json() {
                    self.record(
                        "equivalence",
                        json!({
                            "verdict": "equivalent",
                            "meet": e.join.meet.to_string(),
                            "k": e.k,
                            "reduct": e.reduct.to_string(),
                            "left": e.left.beta,
                            "right": e.right.beta,
                        }),
                    )?;
                } else {
                    self.line(format!("equivalent: common algebraic reduct {}", e.join.meet))?;
                    self.line(format!("k = {}, reduct {}", e.k, e.reduct))?;
                    self.line(format!("left:  {}", e.left.beta))?;
                    self.line(format!("right: {}", e.right.beta))?;
                }
                EXIT_OK
            }
            Equivalence::NotJoinable => {
                self.verdict_line("not-joinable", "both reduction graphs exhausted without meeting")?;
                EXIT_NEGATIVE
            }
            Equivalence::Unknown { stage } => {
                self.verdict_line("unknown", &format!("budget exhausted during the {stage} search"))?;
                EXIT_UNKNOWN
            }
        };
        Ok(code)
    }

    fn support(&mut self, text: &str, choices: bool) -> Result<i32> {
        let t = self.term(text)?;
        let items: Vec<String> = if choices {
            t.lambda_support().iter().map(ToString::to_string).collect()
        } else {
            t.support().iter().map(ToString::to_string).collect()
        };
        if self.json() {
            let kind = if choices { "lambda-support" } else { "support" };
            self.record(kind, json!({ "terms": items }))?;
        } else {
            for i in items {
                self.line(i)?;
            }
        }
        Ok(EXIT_OK)
    }

    fn demo(&mut self, name: Demo, sigma: &str) -> Result<i32> {
        let report = match name {
            Demo::Lifting => conservativity::lifting_counterexample().report(),
            Demo::Split => conservativity::split_witness().report(),
            Demo::Inconsistency => conservativity::inconsistency(&read_arg(sigma)?)?.report(),
        };
        self.emit_report(&report)?;
        Ok(if report.confirmed { EXIT_OK } else { EXIT_NEGATIVE })
    }

    fn emit_report(&mut self, report: &Report) -> Result<()> {
        if self.json() {
            self.record("report", json!({ "report": report }))
        } else {
            write!(self.out, "{report}").map_err(io_error)
        }
    }
}

/// A term argument, or the contents of a file when written `@path`.
fn read_arg(text: &str) -> Result<String> {
    match text.strip_prefix('@') {
        Some(path) => read_source(path).map(|s| s.trim().to_string()),
        None => Ok(text.to_string()),
    }
}

fn read_source(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(io_error)?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::usage(format!("{path}: {e}")))?;
    }
    Ok(s)
}

/// The payload `field` of the first record of type `kind` in a
/// line-delimited file.
fn read_record<T: serde::de::DeserializeOwned>(path: &str, kind: &str, field: &str) -> Result<T> {
    let text = read_source(path)?;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(line)
            .map_err(|e| Error::usage(format!("{path}:{}: {e}", i + 1)))?;
        if v.get("record").and_then(Value::as_str) != Some(kind) {
            continue;
        }
        match v.get("version").and_then(Value::as_u64) {
            Some(FORMAT_VERSION) => {}
            other => {
                return Err(Error::usage(format!("{path}:{}: unsupported version {other:?}", i + 1)))
            }
        }
        let payload = v
            .get(field)
            .cloned()
            .ok_or_else(|| Error::usage(format!("{path}:{}: missing `{field}`", i + 1)))?;
        return serde_json::from_value(payload)
            .map_err(|e| Error::usage(format!("{path}:{}: {e}", i + 1)));
    }
    Err(Error::usage(format!("{path}: no `{kind}` record")))
}

/// A single line-delimited record, for callers building files by hand.
pub fn to_record(kind: &str, field: &str, payload: &impl Serialize) -> Result<String> {
    let v = serde_json::to_value(payload).map_err(|e| Error::usage(e.to_string()))?;
    let mut obj = json!({ "version": FORMAT_VERSION, "record": kind });
    obj.as_object_mut().expect("object").insert(field.to_string(), v);
    Ok(obj.to_string())
}
