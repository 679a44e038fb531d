//! Constructive transformers on mashup derivations. Each one returns a
//! derivation whose conclusion is fixed by its inputs; none of them search.

use std::collections::BTreeMap;

use super::{MashupDerivation, SimpleDerivation};
use crate::algebra::{AlgebraicTerm, SimpleTerm};
use crate::error::{Error, Result};
use crate::reduction::{AlgStep, BetaTrace, Redex};
use crate::semiring::{Coefficient, SemiringId};
use crate::syntax::{PureTerm, Var};

fn mismatch(msg: impl Into<String>) -> Error {
    Error::usage(msg)
}

/// One `⊢`-derivation per support element of the conclusion of `d`.
pub fn support_split(d: &MashupDerivation) -> Result<BTreeMap<SimpleTerm, SimpleDerivation>> {
    let support = d.conclusion()?.support();
    let mut out = BTreeMap::new();
    for (_, head) in d.parts() {
        let u = head.conclusion()?;
        if support.contains(&u) && !out.contains_key(&u) {
            out.insert(u, head.clone());
        }
    }
    debug_assert_eq!(out.len(), support.len());
    Ok(out)
}

/// `M ⊩ target` from `M ⊢ u` for every `u` in the support of `target`,
/// as a chain of `(+)` nodes ending in `(0)`.
pub fn support_join(
    subject: &PureTerm,
    target: &AlgebraicTerm,
    parts: &BTreeMap<SimpleTerm, SimpleDerivation>,
) -> Result<MashupDerivation> {
    let mut d = MashupDerivation::Zero {
        subject: subject.clone(),
        semiring: target.semiring(),
    };
    for (u, c) in target.iter().rev() {
        let head = parts
            .get(u)
            .ok_or_else(|| mismatch(format!("no derivation for support element {u}")))?;
        if head.subject() != subject {
            return Err(mismatch(format!(
                "part for {u} has subject {}, expected {subject}",
                head.subject()
            )));
        }
        d = MashupDerivation::Plus {
            coeff: c.clone(),
            head: head.clone(),
            tail: Box::new(d),
        };
    }
    Ok(d)
}

/// `M ⊢ σ` gives `M ⊩ σ`, as `1.σ + 0`.
pub fn admissible_s(d: SimpleDerivation, semiring: SemiringId) -> MashupDerivation {
    let subject = d.subject().clone();
    MashupDerivation::Plus {
        coeff: Coefficient::one(semiring),
        head: d,
        tail: Box::new(MashupDerivation::Zero { subject, semiring }),
    }
}

/// `M →Λ* λx.N` and `N ⊩ τ` give `M ⊩ λx.τ`.
pub fn admissible_lam(trace: &BetaTrace, d: &MashupDerivation) -> Result<MashupDerivation> {
    let PureTerm::Lam(n) = trace.end() else {
        return Err(mismatch(format!("trace ends at {}, not at an abstraction", trace.end())));
    };
    if &**n != d.subject() {
        return Err(mismatch(format!("body {n} is not the subject {}", d.subject())));
    }
    let tau = d.conclusion()?;
    let parts = support_split(d)?
        .into_iter()
        .map(|(u, body)| {
            let part = SimpleDerivation::Lam {
                trace: trace.clone(),
                body: Box::new(body),
            };
            (SimpleTerm::lam(u), part)
        })
        .collect();
    support_join(&trace.start, &tau.map_keys(SimpleTerm::lam), &parts)
}

/// `M →Λ* (N)P`, `N ⊩ τ` and `P ⊩ ρ` give `M ⊩ (τ)ρ`.
pub fn admissible_app(
    trace: &BetaTrace,
    fun: &MashupDerivation,
    arg: &MashupDerivation,
) -> Result<MashupDerivation> {
    let PureTerm::App(n, p) = trace.end() else {
        return Err(mismatch(format!("trace ends at {}, not at an application", trace.end())));
    };
    if &**n != fun.subject() || &**p != arg.subject() {
        return Err(mismatch(format!(
            "premises concern {} and {}, the trace ends at {}",
            fun.subject(),
            arg.subject(),
            trace.end()
        )));
    }
    if fun.semiring() != arg.semiring() {
        return Err(Error::MixedSemirings(fun.semiring(), arg.semiring()));
    }
    let tau = fun.conclusion()?;
    let rho = arg.conclusion()?;
    let parts = support_split(fun)?
        .into_iter()
        .map(|(u, f)| {
            let part = SimpleDerivation::App {
                trace: trace.clone(),
                fun: Box::new(f),
                arg: Box::new(arg.clone()),
            };
            (SimpleTerm::app(u, rho.clone()), part)
        })
        .collect();
    let target = tau.map_keys(|u| SimpleTerm::app(u, rho.clone()));
    support_join(&trace.start, &target, &parts)
}

/// `M ⊩ σ` and `M ⊩ τ` give `M ⊩ a.σ + τ`.
pub fn admissible_plus(
    a: &Coefficient,
    left: &MashupDerivation,
    right: &MashupDerivation,
) -> Result<MashupDerivation> {
    if left.subject() != right.subject() {
        return Err(mismatch(format!(
            "subjects differ: {} and {}",
            left.subject(),
            right.subject()
        )));
    }
    let target = left.conclusion()?.scale(a)?.add(&right.conclusion()?)?;
    let mut parts = support_split(right)?;
    for (u, d) in support_split(left)? {
        parts.entry(u).or_insert(d);
    }
    support_join(left.subject(), &target, &parts)
}

/// `M ⊢ M`, with empty traces throughout.
pub fn refl_simple(m: &PureTerm, semiring: SemiringId) -> SimpleDerivation {
    let trace = BetaTrace::empty(m.clone());
    match m {
        PureTerm::Var(v) => SimpleDerivation::Var {
            trace,
            var: v.clone(),
        },
        PureTerm::Lam(b) => SimpleDerivation::Lam {
            trace,
            body: Box::new(refl_simple(b, semiring)),
        },
        PureTerm::App(f, a) => SimpleDerivation::App {
            trace,
            fun: Box::new(refl_simple(f, semiring)),
            arg: Box::new(refl(a, semiring)),
        },
    }
}

/// `M ⊩ M`.
pub fn refl(m: &PureTerm, semiring: SemiringId) -> MashupDerivation {
    admissible_s(refl_simple(m, semiring), semiring)
}

/// A β-trace from the subject of `d` to `n`, given `d : M ⊩ n`.
pub fn extract(d: &MashupDerivation, n: &PureTerm) -> Result<BetaTrace> {
    let goal = SimpleTerm::embed(n, d.semiring());
    if d.conclusion()? != AlgebraicTerm::singleton(goal.clone(), d.semiring()) {
        return Err(mismatch(format!(
            "derivation concludes {}, not the pure term {n}",
            d.conclusion()?
        )));
    }
    let parts = support_split(d)?;
    extract_simple(&parts[&goal], n)
}

fn extract_simple(d: &SimpleDerivation, n: &PureTerm) -> Result<BetaTrace> {
    let trace = d.trace().clone();
    match (d, n) {
        (SimpleDerivation::Var { .. }, PureTerm::Var(_)) => Ok(trace),
        (SimpleDerivation::Lam { body, .. }, PureTerm::Lam(n1)) => {
            let inner = extract_simple(body, n1)?;
            trace.then(&inner.under_lam())
        }
        (SimpleDerivation::App { fun, arg, .. }, PureTerm::App(n1, n2)) => {
            let PureTerm::App(_, p) = trace.end().clone() else {
                return Err(mismatch("application node whose trace ends elsewhere"));
            };
            let t1 = extract_simple(fun, n1)?;
            let t2 = extract(arg, n2)?;
            trace.then(&t1.in_fun(&p))?.then(&t2.in_arg(n1))
        }
        _ => Err(mismatch(format!("derivation shape does not match {n}"))),
    }
}

/// `M →Λ* M'` and `M' ⊢ σ` give `M ⊢ σ`.
pub fn precompose_simple(trace: &BetaTrace, d: &SimpleDerivation) -> Result<SimpleDerivation> {
    let prefix = |t: &BetaTrace| trace.clone().then(t);
    Ok(match d {
        SimpleDerivation::Var { trace: t, var } => SimpleDerivation::Var {
            trace: prefix(t)?,
            var: var.clone(),
        },
        SimpleDerivation::Lam { trace: t, body } => SimpleDerivation::Lam {
            trace: prefix(t)?,
            body: body.clone(),
        },
        SimpleDerivation::App { trace: t, fun, arg } => SimpleDerivation::App {
            trace: prefix(t)?,
            fun: fun.clone(),
            arg: arg.clone(),
        },
    })
}

/// `M →Λ* M'` and `M' ⊩ σ` give `M ⊩ σ`.
pub fn precompose(trace: &BetaTrace, d: &MashupDerivation) -> Result<MashupDerivation> {
    if trace.end() != d.subject() {
        return Err(mismatch(format!(
            "trace ends at {}, derivation concerns {}",
            trace.end(),
            d.subject()
        )));
    }
    Ok(match d {
        MashupDerivation::Zero { semiring, .. } => MashupDerivation::Zero {
            subject: trace.start.clone(),
            semiring: *semiring,
        },
        MashupDerivation::Plus { coeff, head, tail } => MashupDerivation::Plus {
            coeff: coeff.clone(),
            head: precompose_simple(trace, head)?,
            tail: Box::new(precompose(trace, tail)?),
        },
    })
}

/// `M ⊢ σ` and `P ⊩ ρ` give `M[P/x] ⊩ σ[ρ/x]`.
///
/// A bound target is removed β-style (outer indices drop by one).
pub fn subst_simple(
    d: &SimpleDerivation,
    target: &Var,
    dp: &MashupDerivation,
) -> Result<MashupDerivation> {
    let p = dp.subject();
    let trace = d.trace().subst(target, p);
    match d {
        SimpleDerivation::Var { var, .. } => match var.after_subst(target) {
            None => precompose(&trace, dp),
            Some(v) => Ok(admissible_s(SimpleDerivation::Var { trace, var: v }, dp.semiring())),
        },
        SimpleDerivation::Lam { body, .. } => {
            let inner = subst_simple(body, &target.shift(1, 0), &dp.shift(1, 0))?;
            admissible_lam(&trace, &inner)
        }
        SimpleDerivation::App { fun, arg, .. } => {
            let f = subst_simple(fun, target, dp)?;
            let a = subst_derivation(arg, target, dp)?;
            admissible_app(&trace, &f, &a)
        }
    }
}

/// `M ⊩ σ` and `P ⊩ ρ` give `M[P/x] ⊩ σ[ρ/x]`.
pub fn subst_derivation(
    d: &MashupDerivation,
    target: &Var,
    dp: &MashupDerivation,
) -> Result<MashupDerivation> {
    if d.semiring() != dp.semiring() {
        return Err(Error::MixedSemirings(d.semiring(), dp.semiring()));
    }
    match d {
        MashupDerivation::Zero { subject, semiring } => Ok(MashupDerivation::Zero {
            subject: subject.subst(target, dp.subject()),
            semiring: *semiring,
        }),
        MashupDerivation::Plus { coeff, head, tail } => {
            let h = subst_simple(head, target, dp)?;
            let t = subst_derivation(tail, target, dp)?;
            admissible_plus(coeff, &h, &t)
        }
    }
}

/// `M ⊢ σ` and `σ → σ'` at `redex` give `M ⊩ σ'`.
pub fn step_simple(d: &SimpleDerivation, redex: &Redex, semiring: SemiringId) -> Result<MashupDerivation> {
    semiring.require_positive()?;
    let shape = || mismatch(format!("derivation of {} does not fit the redex", d.subject()));
    match (redex, d) {
        (Redex::Beta, SimpleDerivation::App { trace, fun, arg }) => {
            let SimpleDerivation::Lam { trace: inner, body } = &**fun else {
                return Err(shape());
            };
            let p = arg.subject();
            let contracted = subst_simple(body, &Var::Bound(0), arg)?;
            let mut path = trace.clone().then(&inner.in_fun(p))?;
            path.push(Vec::new())?;
            precompose(&path, &contracted)
        }
        (Redex::Body(r), SimpleDerivation::Lam { trace, body }) => {
            admissible_lam(trace, &step_simple(body, r, semiring)?)
        }
        (Redex::Fun(r), SimpleDerivation::App { trace, fun, arg }) => {
            admissible_app(trace, &step_simple(fun, r, semiring)?, arg)
        }
        (Redex::Arg(step), SimpleDerivation::App { trace, fun, arg }) => {
            let f = admissible_s((**fun).clone(), semiring);
            admissible_app(trace, &f, &step_derivation(arg, step)?)
        }
        _ => Err(shape()),
    }
}

/// `M ⊩ σ` and `σ ~→ σ'` give `M ⊩ σ'`. Needs a positive semiring, which
/// guarantees that the selected term and the context stay inside the
/// support of `σ`.
pub fn step_derivation(d: &MashupDerivation, step: &AlgStep) -> Result<MashupDerivation> {
    let semiring = d.semiring();
    semiring.require_positive()?;
    let sigma = d.conclusion()?;
    let source = step.source()?;
    if source != sigma {
        return Err(mismatch(format!("step starts at {source}, derivation concludes {sigma}")));
    }
    let parts = support_split(d)?;
    let head = parts
        .get(&step.selected)
        .ok_or_else(|| mismatch(format!("{} is not in the support", step.selected)))?;
    let context = support_join(d.subject(), &step.context, &parts)?;
    let reduced = step_simple(head, &step.redex, semiring)?;
    admissible_plus(&step.split, &reduced, &context)
}
