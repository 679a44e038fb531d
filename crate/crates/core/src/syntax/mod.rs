//! Raw terms of the algebraic calculus and the pure λ-fragment.
//!
//! Binding is nameless: `Var::Bound(k)` refers to the `k`-th enclosing
//! binder (0 = innermost). Surface names exist only in the parser and the
//! printer, so structural equality is α-equivalence.

mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::semiring::Coefficient;

pub use parse::{parse, parse_pure};
pub(crate) use print::Namer;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Bound(usize),
    Free(String),
}

/// Outcome of looking up a variable against a substitution target.
pub(crate) enum Lookup {
    Hit,
    Miss(Var),
}

impl Var {
    pub fn free(name: impl Into<String>) -> Self {
        Var::Free(name.into())
    }

    pub fn shift(&self, amount: usize, cutoff: usize) -> Var {
        match self {
            Var::Bound(k) if *k >= cutoff => Var::Bound(k + amount),
            v => v.clone(),
        }
    }

    /// Resolves `self` against `target` seen under `depth` binders.
    ///
    /// A bound target is removed by the substitution (β-style), so bound
    /// indices above it are decremented. A free target is replaced in place.
    pub(crate) fn lookup(&self, target: &Var, depth: usize) -> Lookup {
        match (self, target) {
            (Var::Bound(k), Var::Bound(j)) => {
                let j = j + depth;
                match (*k).cmp(&j) {
                    std::cmp::Ordering::Equal => Lookup::Hit,
                    std::cmp::Ordering::Greater => Lookup::Miss(Var::Bound(k - 1)),
                    std::cmp::Ordering::Less => Lookup::Miss(Var::Bound(*k)),
                }
            }
            (Var::Free(a), Var::Free(b)) if a == b => Lookup::Hit,
            _ => Lookup::Miss(self.clone()),
        }
    }

    /// The image of `self` when `target` is substituted by something else.
    pub fn after_subst(&self, target: &Var) -> Option<Var> {
        match self.lookup(target, 0) {
            Lookup::Hit => None,
            Lookup::Miss(v) => Some(v),
        }
    }
}

/// A pure λ-term (the set Λ).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PureTerm {
    Var(Var),
    Lam(Box<PureTerm>),
    App(Box<PureTerm>, Box<PureTerm>),
}

impl PureTerm {
    pub fn var(name: impl Into<String>) -> Self {
        PureTerm::Var(Var::Free(name.into()))
    }

    pub fn bound(index: usize) -> Self {
        PureTerm::Var(Var::Bound(index))
    }

    pub fn lam(body: PureTerm) -> Self {
        PureTerm::Lam(Box::new(body))
    }

    pub fn app(fun: PureTerm, arg: PureTerm) -> Self {
        PureTerm::App(Box::new(fun), Box::new(arg))
    }

    pub fn size(&self) -> usize {
        match self {
            PureTerm::Var(_) => 1,
            PureTerm::Lam(b) => 1 + b.size(),
            PureTerm::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn shift(&self, amount: usize, cutoff: usize) -> PureTerm {
        if amount == 0 {
            return self.clone();
        }
        match self {
            PureTerm::Var(v) => PureTerm::Var(v.shift(amount, cutoff)),
            PureTerm::Lam(b) => PureTerm::lam(b.shift(amount, cutoff + 1)),
            PureTerm::App(f, a) => PureTerm::app(f.shift(amount, cutoff), a.shift(amount, cutoff)),
        }
    }

    /// `self[with/target]`. With `target = Bound(0)` this is the β-contractum
    /// of `(λ.self) with`.
    pub fn subst(&self, target: &Var, with: &PureTerm) -> PureTerm {
        self.subst_at(target, with, 0)
    }

    fn subst_at(&self, target: &Var, with: &PureTerm, depth: usize) -> PureTerm {
        match self {
            PureTerm::Var(v) => match v.lookup(target, depth) {
                Lookup::Hit => with.shift(depth, 0),
                Lookup::Miss(v) => PureTerm::Var(v),
            },
            PureTerm::Lam(b) => PureTerm::lam(b.subst_at(target, with, depth + 1)),
            PureTerm::App(f, a) => PureTerm::app(
                f.subst_at(target, with, depth),
                a.subst_at(target, with, depth),
            ),
        }
    }

    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            PureTerm::Var(Var::Free(n)) => {
                out.insert(n.clone());
            }
            PureTerm::Var(Var::Bound(_)) => {}
            PureTerm::Lam(b) => b.collect_free(out),
            PureTerm::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
        }
    }

    pub fn to_raw(&self) -> RawTerm {
        match self {
            PureTerm::Var(v) => RawTerm::Var(v.clone()),
            PureTerm::Lam(b) => RawTerm::Lam(Box::new(b.to_raw())),
            PureTerm::App(f, a) => RawTerm::App(Box::new(f.to_raw()), Box::new(a.to_raw())),
        }
    }
}

impl fmt::Display for PureTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_raw().fmt(f)
    }
}

/// A raw term of the algebraic calculus, before quotienting by algebraic
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawTerm {
    Var(Var),
    Lam(Box<RawTerm>),
    App(Box<RawTerm>, Box<RawTerm>),
    Zero,
    Sum(Box<RawTerm>, Box<RawTerm>),
    Scale(Coefficient, Box<RawTerm>),
}

impl RawTerm {
    pub fn var(name: impl Into<String>) -> Self {
        RawTerm::Var(Var::Free(name.into()))
    }

    pub fn lam(body: RawTerm) -> Self {
        RawTerm::Lam(Box::new(body))
    }

    pub fn app(fun: RawTerm, arg: RawTerm) -> Self {
        RawTerm::App(Box::new(fun), Box::new(arg))
    }

    pub fn sum(left: RawTerm, right: RawTerm) -> Self {
        RawTerm::Sum(Box::new(left), Box::new(right))
    }

    pub fn scale(coeff: Coefficient, body: RawTerm) -> Self {
        RawTerm::Scale(coeff, Box::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            RawTerm::Var(_) | RawTerm::Zero => 1,
            RawTerm::Lam(b) | RawTerm::Scale(_, b) => 1 + b.size(),
            RawTerm::App(l, r) | RawTerm::Sum(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Whether the term lies in the Var/Lam/App fragment. A `Scale` node
    /// disqualifies the term even when its coefficient is 1.
    pub fn is_pure(&self) -> bool {
        self.to_pure().is_some()
    }

    pub fn to_pure(&self) -> Option<PureTerm> {
        Some(match self {
            RawTerm::Var(v) => PureTerm::Var(v.clone()),
            RawTerm::Lam(b) => PureTerm::lam(b.to_pure()?),
            RawTerm::App(f, a) => PureTerm::app(f.to_pure()?, a.to_pure()?),
            RawTerm::Zero | RawTerm::Sum(..) | RawTerm::Scale(..) => return None,
        })
    }

    pub fn coefficients(&self) -> Vec<&Coefficient> {
        let mut out = Vec::new();
        self.collect_coefficients(&mut out);
        out
    }

    fn collect_coefficients<'a>(&'a self, out: &mut Vec<&'a Coefficient>) {
        match self {
            RawTerm::Var(_) | RawTerm::Zero => {}
            RawTerm::Lam(b) => b.collect_coefficients(out),
            RawTerm::Scale(c, b) => {
                out.push(c);
                b.collect_coefficients(out);
            }
            RawTerm::App(l, r) | RawTerm::Sum(l, r) => {
                l.collect_coefficients(out);
                r.collect_coefficients(out);
            }
        }
    }

    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            RawTerm::Var(Var::Free(n)) => {
                out.insert(n.clone());
            }
            RawTerm::Var(Var::Bound(_)) | RawTerm::Zero => {}
            RawTerm::Lam(b) | RawTerm::Scale(_, b) => b.collect_free(out),
            RawTerm::App(l, r) | RawTerm::Sum(l, r) => {
                l.collect_free(out);
                r.collect_free(out);
            }
        }
    }
}

impl From<PureTerm> for RawTerm {
    fn from(t: PureTerm) -> Self {
        t.to_raw()
    }
}

/// α-equivalence. Terms are stored namelessly, so this is structural
/// equality.
pub fn alpha_eq(t: &RawTerm, u: &RawTerm) -> bool {
    t == u
}

impl fmt::Display for RawTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut namer = Namer::new(self.free_names());
        f.write_str(&namer.render(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::SemiringId;

    fn p(s: &str) -> RawTerm {
        parse(s, SemiringId::Nat).unwrap()
    }

    #[test]
    fn alpha_equivalence_examples() {
        assert!(alpha_eq(&p("λx.x"), &p("λy.y")));
        assert!(alpha_eq(&p("λx.λy.(x)y"), &p("λy.λx.(y)x")));
        assert!(!alpha_eq(&p("λx.λy.x"), &p("λx.λy.y")));
    }

    #[test]
    fn purity_examples() {
        assert!(p("λx.(x)x").is_pure());
        assert!(!p("y + z").is_pure());
        assert!(!p("1.x").is_pure());
    }

    #[test]
    fn substitution_is_capture_avoiding() {
        // (λy.x)[y/x] = λy'.y
        let body = parse_pure("λy.x").unwrap();
        let out = body.subst(&Var::free("x"), &PureTerm::var("y"));
        assert_eq!(out, PureTerm::lam(PureTerm::var("y")));
        assert_eq!(out.to_string(), "λx.y");
    }

    #[test]
    fn beta_substitution_decrements_outer_indices() {
        // body of λ.λ.(1)(2) with index 0 := z, seen from outside: λ.(z)(1)
        let body = PureTerm::lam(PureTerm::app(PureTerm::bound(1), PureTerm::bound(2)));
        let out = body.subst(&Var::Bound(0), &PureTerm::var("z"));
        assert_eq!(
            out,
            PureTerm::lam(PureTerm::app(PureTerm::var("z"), PureTerm::bound(1)))
        );
    }
}
