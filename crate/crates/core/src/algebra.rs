//! Algebraic terms as canonical elements of the free module over simple
//! terms.
//!
//! A `SimpleTerm` has no sum at top level; sums only survive in argument
//! positions. An `AlgebraicTerm` is a finite map from simple terms to
//! non-zero coefficients, so two raw terms are algebraically equal iff
//! their canonical maps are identical.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semiring::{Coefficient, SemiringId};
use crate::syntax::{Lookup, Namer, PureTerm, RawTerm, Var};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimpleTerm {
    Var(Var),
    Lam(Box<SimpleTerm>),
    App(Box<SimpleTerm>, AlgebraicTerm),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlgebraicRepr", into = "AlgebraicRepr")]
pub struct AlgebraicTerm {
    semiring: SemiringId,
    terms: BTreeMap<SimpleTerm, Coefficient>,
}

impl SimpleTerm {
    pub fn var(name: impl Into<String>) -> Self {
        SimpleTerm::Var(Var::Free(name.into()))
    }

    pub fn lam(body: SimpleTerm) -> Self {
        SimpleTerm::Lam(Box::new(body))
    }

    pub fn app(fun: SimpleTerm, arg: AlgebraicTerm) -> Self {
        SimpleTerm::App(Box::new(fun), arg)
    }

    /// The simple image of a pure term in `semiring`.
    pub fn embed(m: &PureTerm, semiring: SemiringId) -> Self {
        match m {
            PureTerm::Var(v) => SimpleTerm::Var(v.clone()),
            PureTerm::Lam(b) => SimpleTerm::lam(SimpleTerm::embed(b, semiring)),
            PureTerm::App(f, a) => {
                SimpleTerm::app(SimpleTerm::embed(f, semiring), AlgebraicTerm::embed(a, semiring))
            }
        }
    }

    pub fn as_pure(&self) -> Option<PureTerm> {
        Some(match self {
            SimpleTerm::Var(v) => PureTerm::Var(v.clone()),
            SimpleTerm::Lam(b) => PureTerm::lam(b.as_pure()?),
            SimpleTerm::App(f, a) => PureTerm::app(f.as_pure()?, a.as_pure()?),
        })
    }

    pub fn size(&self) -> usize {
        match self {
            SimpleTerm::Var(_) => 1,
            SimpleTerm::Lam(b) => 1 + b.size(),
            SimpleTerm::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn shift(&self, amount: usize, cutoff: usize) -> SimpleTerm {
        if amount == 0 {
            return self.clone();
        }
        match self {
            SimpleTerm::Var(v) => SimpleTerm::Var(v.shift(amount, cutoff)),
            SimpleTerm::Lam(b) => SimpleTerm::lam(b.shift(amount, cutoff + 1)),
            SimpleTerm::App(f, a) => {
                SimpleTerm::app(f.shift(amount, cutoff), a.shift(amount, cutoff))
            }
        }
    }

    /// `self[r/target]`, re-canonicalized: a sum landing in function position
    /// distributes over the surrounding applications and abstractions.
    pub fn subst(&self, target: &Var, r: &AlgebraicTerm) -> AlgebraicTerm {
        self.subst_at(target, r, 0)
    }

    fn subst_at(&self, target: &Var, r: &AlgebraicTerm, depth: usize) -> AlgebraicTerm {
        match self {
            SimpleTerm::Var(v) => match v.lookup(target, depth) {
                Lookup::Hit => r.shift(depth, 0),
                Lookup::Miss(v) => AlgebraicTerm::singleton(SimpleTerm::Var(v), r.semiring),
            },
            SimpleTerm::Lam(b) => b.subst_at(target, r, depth + 1).map_keys(SimpleTerm::lam),
            SimpleTerm::App(f, a) => {
                let arg = a.subst_at(target, r, depth);
                f.subst_at(target, r, depth)
                    .map_keys(|u| SimpleTerm::app(u, arg.clone()))
            }
        }
    }

    pub fn lambda_support(&self) -> BTreeSet<PureTerm> {
        match self {
            SimpleTerm::Var(v) => BTreeSet::from([PureTerm::Var(v.clone())]),
            SimpleTerm::Lam(b) => b.lambda_support().into_iter().map(PureTerm::lam).collect(),
            SimpleTerm::App(f, a) => {
                let args = a.lambda_support();
                let mut out = BTreeSet::new();
                for m in f.lambda_support() {
                    for n in &args {
                        out.insert(PureTerm::app(m.clone(), n.clone()));
                    }
                }
                out
            }
        }
    }

    pub fn readback(&self) -> RawTerm {
        match self {
            SimpleTerm::Var(v) => RawTerm::Var(v.clone()),
            SimpleTerm::Lam(b) => RawTerm::lam(b.readback()),
            SimpleTerm::App(f, a) => RawTerm::app(f.readback(), a.readback()),
        }
    }

    pub(crate) fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            SimpleTerm::Var(Var::Free(n)) => {
                out.insert(n.clone());
            }
            SimpleTerm::Var(Var::Bound(_)) => {}
            SimpleTerm::Lam(b) => b.collect_free(out),
            SimpleTerm::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
        }
    }
}

impl fmt::Display for SimpleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut free = BTreeSet::new();
        self.collect_free(&mut free);
        f.write_str(&Namer::new(free).render(&self.readback()))
    }
}

impl AlgebraicTerm {
    /// The empty combination 𝟎.
    pub fn zero(semiring: SemiringId) -> Self {
        AlgebraicTerm {
            semiring,
            terms: BTreeMap::new(),
        }
    }

    pub fn singleton(u: SimpleTerm, semiring: SemiringId) -> Self {
        Self::monomial(Coefficient::one(semiring), u)
    }

    pub fn monomial(c: Coefficient, u: SimpleTerm) -> Self {
        let semiring = c.semiring();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(u, c);
        }
        AlgebraicTerm { semiring, terms }
    }

    /// Builds a combination from `(coefficient, simple term)` pairs, summing
    /// repeated keys.
    pub fn from_terms(
        semiring: SemiringId,
        pairs: impl IntoIterator<Item = (Coefficient, SimpleTerm)>,
    ) -> Result<Self> {
        let mut acc = AlgebraicTerm::zero(semiring);
        for (c, u) in pairs {
            if c.semiring() != semiring {
                return Err(Error::MixedSemirings(semiring, c.semiring()));
            }
            acc.add_monomial(c, u);
        }
        Ok(acc)
    }

    /// `{m ↦ 1}` for a pure term `m`.
    pub fn embed(m: &PureTerm, semiring: SemiringId) -> Self {
        Self::singleton(SimpleTerm::embed(m, semiring), semiring)
    }

    pub fn semiring(&self) -> SemiringId {
        self.semiring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&SimpleTerm, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, u: &SimpleTerm) -> Option<&Coefficient> {
        self.terms.get(u)
    }

    pub fn support(&self) -> BTreeSet<SimpleTerm> {
        self.terms.keys().cloned().collect()
    }

    pub fn size(&self) -> usize {
        self.terms.keys().map(SimpleTerm::size).sum::<usize>() + self.terms.len()
    }

    pub fn add(&self, other: &AlgebraicTerm) -> Result<AlgebraicTerm> {
        if self.semiring != other.semiring {
            return Err(Error::MixedSemirings(self.semiring, other.semiring));
        }
        let mut acc = self.clone();
        for (u, c) in &other.terms {
            acc.add_monomial(c.clone(), u.clone());
        }
        Ok(acc)
    }

    pub fn scale(&self, a: &Coefficient) -> Result<AlgebraicTerm> {
        if self.semiring != a.semiring() {
            return Err(Error::MixedSemirings(a.semiring(), self.semiring));
        }
        let mut out = AlgebraicTerm::zero(self.semiring);
        for (u, c) in &self.terms {
            let prod = a.mul(c)?;
            if !prod.is_zero() {
                out.terms.insert(u.clone(), prod);
            }
        }
        Ok(out)
    }

    /// `a.u + self`, in place.
    fn add_monomial(&mut self, c: Coefficient, u: SimpleTerm) {
        let sum = match self.terms.remove(&u) {
            Some(old) => old.add(&c).expect("coefficients share the term's semiring"),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(u, sum);
        }
    }

    /// Sum inside the term's own semiring, for combinations this crate
    /// built itself.
    pub(crate) fn plus(&self, other: &AlgebraicTerm) -> AlgebraicTerm {
        self.add(other).expect("operands share a semiring")
    }

    pub(crate) fn times(&self, a: &Coefficient) -> AlgebraicTerm {
        self.scale(a).expect("operands share a semiring")
    }

    /// Applies an injective map to every support element.
    pub(crate) fn map_keys(&self, f: impl Fn(SimpleTerm) -> SimpleTerm) -> AlgebraicTerm {
        AlgebraicTerm {
            semiring: self.semiring,
            terms: self.terms.iter().map(|(u, c)| (f(u.clone()), c.clone())).collect(),
        }
    }

    /// Linear extension of `f` over the support.
    pub fn flat_map(&self, mut f: impl FnMut(&SimpleTerm) -> AlgebraicTerm) -> AlgebraicTerm {
        let mut out = AlgebraicTerm::zero(self.semiring);
        for (u, c) in &self.terms {
            out = out.plus(&f(u).times(c));
        }
        out
    }

    /// `self` with the coefficient of `u` replaced by `c` (removed when zero).
    pub fn with_coefficient(&self, u: &SimpleTerm, c: Coefficient) -> AlgebraicTerm {
        let mut out = self.clone();
        out.terms.remove(u);
        if !c.is_zero() {
            out.terms.insert(u.clone(), c);
        }
        out
    }

    pub fn shift(&self, amount: usize, cutoff: usize) -> AlgebraicTerm {
        if amount == 0 {
            return self.clone();
        }
        self.map_keys(|u| u.shift(amount, cutoff))
    }

    pub fn subst(&self, target: &Var, r: &AlgebraicTerm) -> AlgebraicTerm {
        self.subst_at(target, r, 0)
    }

    fn subst_at(&self, target: &Var, r: &AlgebraicTerm, depth: usize) -> AlgebraicTerm {
        let mut out = AlgebraicTerm::zero(self.semiring);
        for (u, c) in &self.terms {
            out = out.plus(&u.subst_at(target, r, depth).times(c));
        }
        out
    }

    /// The pure term `m` with `embed(m) = self`, if there is one.
    pub fn as_pure(&self) -> Option<PureTerm> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((u, c)), None) if c.is_one() => u.as_pure(),
            _ => None,
        }
    }

    /// The finite set of pure terms obtained by choosing one support element
    /// in every sum, recursively through argument positions.
    pub fn lambda_support(&self) -> BTreeSet<PureTerm> {
        self.terms.keys().flat_map(SimpleTerm::lambda_support).collect()
    }

    /// A raw term denoting `self`: the left-nested sum of `c.u` in canonical
    /// order, with `1.` omitted.
    pub fn readback(&self) -> RawTerm {
        self.terms
            .iter()
            .map(|(u, c)| {
                if c.is_one() {
                    u.readback()
                } else {
                    RawTerm::scale(c.clone(), u.readback())
                }
            })
            .reduce(RawTerm::sum)
            .unwrap_or(RawTerm::Zero)
    }

    pub(crate) fn collect_free(&self, out: &mut BTreeSet<String>) {
        for u in self.terms.keys() {
            u.collect_free(out);
        }
    }
}

impl fmt::Display for AlgebraicTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut free = BTreeSet::new();
        self.collect_free(&mut free);
        f.write_str(&Namer::new(free).render(&self.readback()))
    }
}

/// The canonical form of the algebraic-equality class of `t`.
pub fn canonicalize(t: &RawTerm, semiring: SemiringId) -> Result<AlgebraicTerm> {
    Ok(match t {
        RawTerm::Var(v) => AlgebraicTerm::singleton(SimpleTerm::Var(v.clone()), semiring),
        RawTerm::Lam(b) => canonicalize(b, semiring)?.map_keys(SimpleTerm::lam),
        RawTerm::App(f, a) => {
            let arg = canonicalize(a, semiring)?;
            canonicalize(f, semiring)?.map_keys(|u| SimpleTerm::app(u, arg.clone()))
        }
        RawTerm::Zero => AlgebraicTerm::zero(semiring),
        RawTerm::Sum(l, r) => canonicalize(l, semiring)?.add(&canonicalize(r, semiring)?)?,
        RawTerm::Scale(c, b) => canonicalize(b, semiring)?.scale(c)?,
    })
}

#[derive(Serialize, Deserialize)]
struct AlgebraicRepr {
    semiring: SemiringId,
    terms: Vec<TermEntry>,
}

#[derive(Serialize, Deserialize)]
struct TermEntry {
    coeff: Coefficient,
    term: SimpleTerm,
}

impl From<AlgebraicTerm> for AlgebraicRepr {
    fn from(t: AlgebraicTerm) -> Self {
        AlgebraicRepr {
            semiring: t.semiring,
            terms: t
                .terms
                .into_iter()
                .map(|(term, coeff)| TermEntry { coeff, term })
                .collect(),
        }
    }
}

impl TryFrom<AlgebraicRepr> for AlgebraicTerm {
    type Error = Error;

    fn try_from(r: AlgebraicRepr) -> Result<Self> {
        let mut out = AlgebraicTerm::zero(r.semiring);
        for TermEntry { coeff, term } in r.terms {
            if coeff.semiring() != r.semiring {
                return Err(Error::MixedSemirings(r.semiring, coeff.semiring()));
            }
            if coeff.is_zero() || out.terms.contains_key(&term) {
                return Err(Error::usage(format!("non-canonical combination entry `{term}`")));
            }
            out.terms.insert(term, coeff);
        }
        Ok(out)
    }
}
