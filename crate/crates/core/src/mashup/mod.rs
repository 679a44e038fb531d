//! Mashup judgements: a pure term `M` against a simple term (`M ⊢ σ`) or an
//! algebraic term (`M ⊩ σ`).
//!
//! Derivations carry explicit β-traces for every `M →Λ* …` premise, so
//! [`check`] needs no search and [`extract`] is concatenation.

mod transform;
mod prove;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraicTerm, SimpleTerm};
use crate::error::{Error, Result};
use crate::reduction::BetaTrace;
use crate::semiring::{Coefficient, SemiringId};
use crate::syntax::{PureTerm, Var};

pub use transform::{
    admissible_app, admissible_lam, admissible_plus, admissible_s, extract, precompose,
    precompose_simple, refl, refl_simple, step_derivation, step_simple, subst_derivation,
    subst_simple, support_join, support_split,
};
pub use prove::{prove, prove_simple, OutOfFuel, Proof, Search};

/// A derivation of `M ⊢ σ` with `σ` simple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum SimpleDerivation {
    /// `M →Λ* x` gives `M ⊢ x`.
    Var { trace: BetaTrace, var: Var },
    /// `M →Λ* λx.N` and `N ⊢ τ` give `M ⊢ λx.τ`.
    Lam {
        trace: BetaTrace,
        body: Box<SimpleDerivation>,
    },
    /// `M →Λ* (N)P`, `N ⊢ τ` and `P ⊩ ρ` give `M ⊢ (τ)ρ`.
    App {
        trace: BetaTrace,
        fun: Box<SimpleDerivation>,
        arg: Box<MashupDerivation>,
    },
}

/// A derivation of `M ⊩ σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum MashupDerivation {
    /// `M ⊩ 0`.
    Zero { subject: PureTerm, semiring: SemiringId },
    /// `M ⊢ σ` and `M ⊩ τ` give `M ⊩ a.σ + τ`.
    Plus {
        coeff: Coefficient,
        head: SimpleDerivation,
        tail: Box<MashupDerivation>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Derivation {
    Simple(SimpleDerivation),
    Mashup(MashupDerivation),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Judgement {
    Simple { subject: PureTerm, term: SimpleTerm },
    Mashup { subject: PureTerm, term: AlgebraicTerm },
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgement::Simple { subject, term } => write!(f, "{subject} ⊢ {term}"),
            Judgement::Mashup { subject, term } => write!(f, "{subject} ⊩ {term}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid(Judgement),
    Invalid { path: String, reason: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }

    pub fn into_result(self) -> Result<Judgement> {
        match self {
            Verdict::Valid(j) => Ok(j),
            Verdict::Invalid { path, reason } => Err(Error::InvalidDerivation { path, reason }),
        }
    }
}

impl SimpleDerivation {
    pub fn subject(&self) -> &PureTerm {
        match self {
            SimpleDerivation::Var { trace, .. }
            | SimpleDerivation::Lam { trace, .. }
            | SimpleDerivation::App { trace, .. } => &trace.start,
        }
    }

    pub fn trace(&self) -> &BetaTrace {
        match self {
            SimpleDerivation::Var { trace, .. }
            | SimpleDerivation::Lam { trace, .. }
            | SimpleDerivation::App { trace, .. } => trace,
        }
    }

    /// The right-hand side, read off the tree without replaying traces.
    pub fn conclusion(&self) -> Result<SimpleTerm> {
        Ok(match self {
            SimpleDerivation::Var { var, .. } => SimpleTerm::Var(var.clone()),
            SimpleDerivation::Lam { body, .. } => SimpleTerm::lam(body.conclusion()?),
            SimpleDerivation::App { fun, arg, .. } => {
                SimpleTerm::app(fun.conclusion()?, arg.conclusion()?)
            }
        })
    }

    pub fn judgement(&self) -> Result<Judgement> {
        Ok(Judgement::Simple {
            subject: self.subject().clone(),
            term: self.conclusion()?,
        })
    }

    pub fn shift(&self, amount: usize, cutoff: usize) -> SimpleDerivation {
        match self {
            SimpleDerivation::Var { trace, var } => SimpleDerivation::Var {
                trace: trace.shift(amount, cutoff),
                var: var.shift(amount, cutoff),
            },
            SimpleDerivation::Lam { trace, body } => SimpleDerivation::Lam {
                trace: trace.shift(amount, cutoff),
                body: Box::new(body.shift(amount, cutoff + 1)),
            },
            SimpleDerivation::App { trace, fun, arg } => SimpleDerivation::App {
                trace: trace.shift(amount, cutoff),
                fun: Box::new(fun.shift(amount, cutoff)),
                arg: Box::new(arg.shift(amount, cutoff)),
            },
        }
    }

    /// Number of rule instances.
    pub fn size(&self) -> usize {
        match self {
            SimpleDerivation::Var { .. } => 1,
            SimpleDerivation::Lam { body, .. } => 1 + body.size(),
            SimpleDerivation::App { fun, arg, .. } => 1 + fun.size() + arg.size(),
        }
    }
}

impl MashupDerivation {
    pub fn subject(&self) -> &PureTerm {
        match self {
            MashupDerivation::Zero { subject, .. } => subject,
            MashupDerivation::Plus { head, .. } => head.subject(),
        }
    }

    pub fn semiring(&self) -> SemiringId {
        match self {
            MashupDerivation::Zero { semiring, .. } => *semiring,
            MashupDerivation::Plus { coeff, .. } => coeff.semiring(),
        }
    }

    /// The right-hand side, read off the tree without replaying traces.
    pub fn conclusion(&self) -> Result<AlgebraicTerm> {
        match self {
            MashupDerivation::Zero { semiring, .. } => Ok(AlgebraicTerm::zero(*semiring)),
            MashupDerivation::Plus { coeff, head, tail } => {
                AlgebraicTerm::monomial(coeff.clone(), head.conclusion()?).add(&tail.conclusion()?)
            }
        }
    }

    pub fn judgement(&self) -> Result<Judgement> {
        Ok(Judgement::Mashup {
            subject: self.subject().clone(),
            term: self.conclusion()?,
        })
    }

    /// The `(+)` premises, outermost first.
    pub fn parts(&self) -> Vec<(&Coefficient, &SimpleDerivation)> {
        let mut out = Vec::new();
        let mut d = self;
        while let MashupDerivation::Plus { coeff, head, tail } = d {
            out.push((coeff, head));
            d = tail;
        }
        out
    }

    pub fn shift(&self, amount: usize, cutoff: usize) -> MashupDerivation {
        match self {
            MashupDerivation::Zero { subject, semiring } => MashupDerivation::Zero {
                subject: subject.shift(amount, cutoff),
                semiring: *semiring,
            },
            MashupDerivation::Plus { coeff, head, tail } => MashupDerivation::Plus {
                coeff: coeff.clone(),
                head: head.shift(amount, cutoff),
                tail: Box::new(tail.shift(amount, cutoff)),
            },
        }
    }

    pub fn size(&self) -> usize {
        match self {
            MashupDerivation::Zero { .. } => 1,
            MashupDerivation::Plus { head, tail, .. } => 1 + head.size() + tail.size(),
        }
    }
}

impl Derivation {
    pub fn subject(&self) -> &PureTerm {
        match self {
            Derivation::Simple(d) => d.subject(),
            Derivation::Mashup(d) => d.subject(),
        }
    }
}

impl From<SimpleDerivation> for Derivation {
    fn from(d: SimpleDerivation) -> Self {
        Derivation::Simple(d)
    }
}

impl From<MashupDerivation> for Derivation {
    fn from(d: MashupDerivation) -> Self {
        Derivation::Mashup(d)
    }
}

/// Indented rendering, one rule instance per line.
pub fn render(d: &Derivation) -> String {
    let mut out = String::new();
    match d {
        Derivation::Simple(d) => render_simple(d, 0, &mut out),
        Derivation::Mashup(d) => render_mashup(d, 0, &mut out),
    }
    out
}

fn trace_note(t: &BetaTrace) -> String {
    match t.len() {
        0 => format!("{}", t.start),
        1 => format!("{} →β {} (1 step)", t.start, t.end()),
        n => format!("{} →β* {} ({n} steps)", t.start, t.end()),
    }
}

fn render_simple(d: &SimpleDerivation, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let rule = match d {
        SimpleDerivation::Var { .. } => "(v)",
        SimpleDerivation::Lam { .. } => "(λ)",
        SimpleDerivation::App { .. } => "(a)",
    };
    out.push_str(&format!("{pad}{rule} {}\n", trace_note(d.trace())));
    match d {
        SimpleDerivation::Var { .. } => {}
        SimpleDerivation::Lam { body, .. } => render_simple(body, depth + 1, out),
        SimpleDerivation::App { fun, arg, .. } => {
            render_simple(fun, depth + 1, out);
            render_mashup(arg, depth + 1, out);
        }
    }
}

fn render_mashup(d: &MashupDerivation, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match d {
        MashupDerivation::Zero { subject, .. } => out.push_str(&format!("{pad}(0) {subject}\n")),
        MashupDerivation::Plus { coeff, head, tail } => {
            out.push_str(&format!("{pad}(+) {coeff}\n"));
            render_simple(head, depth + 1, out);
            render_mashup(tail, depth + 1, out);
        }
    }
}

type Checked<T> = std::result::Result<T, (String, String)>;

fn invalid<T>(path: &str, reason: impl Into<String>) -> Checked<T> {
    Err((path.to_string(), reason.into()))
}

/// Validates every node against its rule, replaying every embedded trace.
pub fn check(d: &Derivation) -> Verdict {
    let outcome = match d {
        Derivation::Simple(d) => check_simple(d, "$").map(|(j, _)| j),
        Derivation::Mashup(d) => check_mashup(d, "$"),
    };
    match outcome {
        Ok(j) => Verdict::Valid(j),
        Err((path, reason)) => Verdict::Invalid { path, reason },
    }
}

pub fn check_simple_derivation(d: &SimpleDerivation) -> Verdict {
    check(&Derivation::Simple(d.clone()))
}

pub fn check_mashup_derivation(d: &MashupDerivation) -> Verdict {
    check(&Derivation::Mashup(d.clone()))
}

fn replay(trace: &BetaTrace, path: &str) -> Checked<PureTerm> {
    trace.replay().or_else(|e| invalid(path, e.to_string()))
}

/// Returns the judgement and the semirings occurring in its right-hand side.
fn check_simple(d: &SimpleDerivation, path: &str) -> Checked<(Judgement, BTreeSet<SemiringId>)> {
    let subject = d.subject().clone();
    let end = replay(d.trace(), path)?;
    let (term, semirings) = match d {
        SimpleDerivation::Var { var, .. } => {
            if end != PureTerm::Var(var.clone()) {
                return invalid(path, format!("trace ends at {end}, not at the claimed variable"));
            }
            (SimpleTerm::Var(var.clone()), BTreeSet::new())
        }
        SimpleDerivation::Lam { body, .. } => {
            let PureTerm::Lam(n) = &end else {
                return invalid(path, format!("trace ends at {end}, not at an abstraction"));
            };
            let sub = format!("{path}.body");
            let (j, semirings) = check_simple(body, &sub)?;
            let Judgement::Simple { subject: s, term } = j else { unreachable!() };
            if s != **n {
                return invalid(&sub, format!("subject {s} is not the abstraction body {}", n));
            }
            (SimpleTerm::lam(term), semirings)
        }
        SimpleDerivation::App { fun, arg, .. } => {
            let PureTerm::App(n, p) = &end else {
                return invalid(path, format!("trace ends at {end}, not at an application"));
            };
            let fun_path = format!("{path}.fun");
            let (j, mut semirings) = check_simple(fun, &fun_path)?;
            let Judgement::Simple { subject: s, term: tau } = j else { unreachable!() };
            if s != **n {
                return invalid(&fun_path, format!("subject {s} is not the function part {n}"));
            }
            let arg_path = format!("{path}.arg");
            let Judgement::Mashup { subject: s, term: rho } = check_mashup(arg, &arg_path)? else {
                unreachable!()
            };
            if s != **p {
                return invalid(&arg_path, format!("subject {s} is not the argument part {p}"));
            }
            semirings.insert(rho.semiring());
            if semirings.len() > 1 {
                return invalid(path, "mixed semirings in the right-hand side");
            }
            (SimpleTerm::app(tau, rho), semirings)
        }
    };
    Ok((Judgement::Simple { subject, term }, semirings))
}

fn check_mashup(d: &MashupDerivation, path: &str) -> Checked<Judgement> {
    match d {
        MashupDerivation::Zero { subject, semiring } => Ok(Judgement::Mashup {
            subject: subject.clone(),
            term: AlgebraicTerm::zero(*semiring),
        }),
        MashupDerivation::Plus { coeff, head, tail } => {
            let head_path = format!("{path}.head");
            let (j, semirings) = check_simple(head, &head_path)?;
            let Judgement::Simple { subject, term: tau } = j else { unreachable!() };
            let tail_path = format!("{path}.tail");
            let Judgement::Mashup { subject: s, term: rest } = check_mashup(tail, &tail_path)? else {
                unreachable!()
            };
            if s != subject {
                return invalid(&tail_path, format!("subject {s} differs from {subject}"));
            }
            let semiring = coeff.semiring();
            if semirings.iter().any(|&r| r != semiring) || rest.semiring() != semiring {
                return invalid(path, "mixed semirings in the right-hand side");
            }
            let term = AlgebraicTerm::monomial(coeff.clone(), tau)
                .add(&rest)
                .or_else(|e| invalid(path, e.to_string()))?;
            Ok(Judgement::Mashup { subject, term })
        }
    }
}
