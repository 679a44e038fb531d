//! Reduction relations and bounded searches over them.
//!
//! * β on pure terms, with explicit redex positions ([`BetaTrace`]).
//! * `→` on simple terms, witnessed by a [`Redex`] path.
//! * `~→` on algebraic terms: `a.τ + ρ ~→ a.τ' + ρ` with `τ → τ'` and
//!   `a ≠ 0`, witnessed by an [`AlgStep`].
//!
//! The decomposition `σ = a.τ + ρ` ranges over infinitely many splits in
//! general; enumeration is restricted by a [`SplitPolicy`]. Reachability is
//! only semi-decidable, so every search reports [`Reach::Unknown`] when its
//! budget runs out.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraicTerm, SimpleTerm};
use crate::error::{Error, Result};
use crate::semiring::{Coefficient, SemiringId};
use crate::syntax::{PureTerm, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dir {
    Body,
    Fun,
    Arg,
}

/// Path from the root of a pure term to a redex.
pub type Position = Vec<Dir>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reach<T> {
    Found(T),
    /// The whole reachable graph was explored without success.
    Unreachable { explored: usize },
    /// The budget ran out.
    Unknown { explored: usize },
}

impl<T> Reach<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Reach::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Reach::Found(_))
    }
}

// ---------------------------------------------------------------------------
// β on pure terms

/// Contracts the β-redex at `pos`, if there is one.
pub fn contract_at(m: &PureTerm, pos: &[Dir]) -> Option<PureTerm> {
    match (pos.split_first(), m) {
        (None, PureTerm::App(f, a)) => match &**f {
            PureTerm::Lam(b) => Some(b.subst(&Var::Bound(0), a)),
            _ => None,
        },
        (Some((Dir::Body, rest)), PureTerm::Lam(b)) => Some(PureTerm::lam(contract_at(b, rest)?)),
        (Some((Dir::Fun, rest)), PureTerm::App(f, a)) => {
            Some(PureTerm::app(contract_at(f, rest)?, (**a).clone()))
        }
        (Some((Dir::Arg, rest)), PureTerm::App(f, a)) => {
            Some(PureTerm::app((**f).clone(), contract_at(a, rest)?))
        }
        _ => None,
    }
}

/// All one-step β-reducts, leftmost-outermost first.
pub fn beta_reducts(m: &PureTerm) -> Vec<(Position, PureTerm)> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    collect_redexes(m, &mut path, &mut out);
    out.into_iter()
        .map(|pos| {
            let r = contract_at(m, &pos).expect("collected positions are redexes");
            (pos, r)
        })
        .collect()
}

fn collect_redexes(m: &PureTerm, path: &mut Position, out: &mut Vec<Position>) {
    match m {
        PureTerm::Var(_) => {}
        PureTerm::Lam(b) => {
            path.push(Dir::Body);
            collect_redexes(b, path, out);
            path.pop();
        }
        PureTerm::App(f, a) => {
            if matches!(**f, PureTerm::Lam(_)) {
                out.push(path.clone());
            }
            path.push(Dir::Fun);
            collect_redexes(f, path, out);
            path.pop();
            path.push(Dir::Arg);
            collect_redexes(a, path, out);
            path.pop();
        }
    }
}

pub fn is_beta_normal(m: &PureTerm) -> bool {
    match m {
        PureTerm::Var(_) => true,
        PureTerm::Lam(b) => is_beta_normal(b),
        PureTerm::App(f, a) => {
            !matches!(**f, PureTerm::Lam(_)) && is_beta_normal(f) && is_beta_normal(a)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BetaStep {
    pub position: Position,
    pub result: PureTerm,
}

/// A witness of `start →Λ* end`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BetaTrace {
    pub start: PureTerm,
    pub steps: Vec<BetaStep>,
}

impl BetaTrace {
    pub fn empty(start: PureTerm) -> Self {
        BetaTrace {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &PureTerm {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    /// Contracts the redex at `position` in the current endpoint.
    pub fn push(&mut self, position: Position) -> Result<()> {
        let result = contract_at(self.end(), &position).ok_or_else(|| {
            Error::InvalidTrace(format!("no redex at {position:?} in {}", self.end()))
        })?;
        self.steps.push(BetaStep { position, result });
        Ok(())
    }

    /// Replays every step from scratch, returning the endpoint.
    pub fn replay(&self) -> Result<PureTerm> {
        let mut current = self.start.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let next = contract_at(&current, &step.position).ok_or_else(|| {
                Error::InvalidTrace(format!("step {i}: no redex at {:?} in {current}", step.position))
            })?;
            if next != step.result {
                return Err(Error::InvalidTrace(format!(
                    "step {i}: contracting {:?} in {current} gives {next}, not {}",
                    step.position, step.result
                )));
            }
            current = next;
        }
        Ok(current)
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn then(mut self, other: &BetaTrace) -> Result<BetaTrace> {
        if self.end() != &other.start {
            return Err(Error::InvalidTrace(format!(
                "cannot append a trace from {} to one ending at {}",
                other.start,
                self.end()
            )));
        }
        self.steps.extend(other.steps.iter().cloned());
        Ok(self)
    }

    fn map_context(&self, dir: Dir, wrap: impl Fn(&PureTerm) -> PureTerm) -> BetaTrace {
        BetaTrace {
            start: wrap(&self.start),
            steps: self
                .steps
                .iter()
                .map(|s| {
                    let mut position = vec![dir];
                    position.extend_from_slice(&s.position);
                    BetaStep {
                        position,
                        result: wrap(&s.result),
                    }
                })
                .collect(),
        }
    }

    /// The same reduction under `λ`.
    pub fn under_lam(&self) -> BetaTrace {
        self.map_context(Dir::Body, |t| PureTerm::lam(t.clone()))
    }

    /// The same reduction in function position of `(·)arg`.
    pub fn in_fun(&self, arg: &PureTerm) -> BetaTrace {
        self.map_context(Dir::Fun, |t| PureTerm::app(t.clone(), arg.clone()))
    }

    /// The same reduction in argument position of `(fun)·`.
    pub fn in_arg(&self, fun: &PureTerm) -> BetaTrace {
        self.map_context(Dir::Arg, |t| PureTerm::app(fun.clone(), t.clone()))
    }

    /// Substitution commutes with β, at unchanged positions.
    pub fn subst(&self, target: &Var, with: &PureTerm) -> BetaTrace {
        BetaTrace {
            start: self.start.subst(target, with),
            steps: self
                .steps
                .iter()
                .map(|s| BetaStep {
                    position: s.position.clone(),
                    result: s.result.subst(target, with),
                })
                .collect(),
        }
    }

    pub fn shift(&self, amount: usize, cutoff: usize) -> BetaTrace {
        BetaTrace {
            start: self.start.shift(amount, cutoff),
            steps: self
                .steps
                .iter()
                .map(|s| BetaStep {
                    position: s.position.clone(),
                    result: s.result.shift(amount, cutoff),
                })
                .collect(),
        }
    }
}

impl fmt::Display for BetaTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for s in &self.steps {
            write!(f, " →β {}", s.result)?;
        }
        Ok(())
    }
}

/// Breadth-first search for `m →Λ* n` expanding at most `fuel` terms.
pub fn beta_reaches(m: &PureTerm, n: &PureTerm, fuel: usize) -> Reach<BetaTrace> {
    if m == n {
        return Reach::Found(BetaTrace::empty(m.clone()));
    }
    let mut parents: HashMap<PureTerm, Option<(PureTerm, Position)>> = HashMap::new();
    parents.insert(m.clone(), None);
    let mut queue = VecDeque::from([m.clone()]);
    let mut explored = 0;
    while let Some(t) = queue.pop_front() {
        if explored == fuel {
            return Reach::Unknown { explored };
        }
        explored += 1;
        for (pos, r) in beta_reducts(&t) {
            if parents.contains_key(&r) {
                continue;
            }
            parents.insert(r.clone(), Some((t.clone(), pos)));
            if &r == n {
                return Reach::Found(rebuild_beta(&parents, m, n));
            }
            queue.push_back(r);
        }
    }
    Reach::Unreachable { explored }
}

fn rebuild_beta(
    parents: &HashMap<PureTerm, Option<(PureTerm, Position)>>,
    start: &PureTerm,
    end: &PureTerm,
) -> BetaTrace {
    let mut steps = Vec::new();
    let mut cur = end.clone();
    while let Some(Some((prev, pos))) = parents.get(&cur) {
        steps.push(BetaStep {
            position: pos.clone(),
            result: cur.clone(),
        });
        cur = prev.clone();
    }
    steps.reverse();
    BetaTrace {
        start: start.clone(),
        steps,
    }
}

/// The full β-reduction graph of `m`, if it has at most `fuel` nodes.
pub fn beta_graph(m: &PureTerm, fuel: usize) -> Option<Vec<PureTerm>> {
    let mut seen = std::collections::HashSet::from([m.clone()]);
    let mut order = vec![m.clone()];
    let mut i = 0;
    while i < order.len() {
        if i == fuel {
            return None;
        }
        for (_, r) in beta_reducts(&order[i]) {
            if seen.insert(r.clone()) {
                order.push(r);
            }
        }
        i += 1;
    }
    Some(order)
}

// ---------------------------------------------------------------------------
// → on simple terms and ~→ on algebraic terms

/// Where a `→` step happens inside a simple term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Redex {
    /// `(λx.τ)ρ → τ[ρ/x]`.
    Beta,
    /// Under an abstraction.
    Body(Box<Redex>),
    /// `(τ)ρ → (τ')ρ`, distributed over the reduct of `τ`.
    Fun(Box<Redex>),
    /// `(τ)ρ → (τ)ρ'` with `ρ ~→ ρ'`.
    Arg(Box<AlgStep>),
}

/// One `~→` step: `a.τ + ρ ~→ a.τ' + ρ` with `τ → τ'` at `redex`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgStep {
    pub selected: SimpleTerm,
    pub split: Coefficient,
    pub context: AlgebraicTerm,
    pub redex: Redex,
}

impl Redex {
    /// The reduct of `t` at this position.
    pub fn apply(&self, t: &SimpleTerm) -> Result<AlgebraicTerm> {
        match (self, t) {
            (Redex::Beta, SimpleTerm::App(f, rho)) => match &**f {
                SimpleTerm::Lam(body) => Ok(body.subst(&Var::Bound(0), rho)),
                _ => Err(Error::step(format!("{t} is not a β-redex"))),
            },
            (Redex::Body(r), SimpleTerm::Lam(b)) => Ok(r.apply(b)?.map_keys(SimpleTerm::lam)),
            (Redex::Fun(r), SimpleTerm::App(f, rho)) => {
                Ok(r.apply(f)?.map_keys(|u| SimpleTerm::app(u, rho.clone())))
            }
            (Redex::Arg(step), SimpleTerm::App(f, rho)) => {
                let rho2 = step.apply_to(rho)?;
                Ok(AlgebraicTerm::singleton(
                    SimpleTerm::app((**f).clone(), rho2),
                    rho.semiring(),
                ))
            }
            _ => Err(Error::step(format!("redex path {self:?} does not fit {t}"))),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Redex::Beta => 0,
            Redex::Body(r) | Redex::Fun(r) => 1 + r.depth(),
            Redex::Arg(s) => 1 + s.redex.depth(),
        }
    }
}

impl AlgStep {
    /// Reduces the whole coefficient of `selected` in `sigma`.
    pub fn full(sigma: &AlgebraicTerm, selected: &SimpleTerm, redex: Redex) -> Result<AlgStep> {
        let split = sigma
            .coefficient(selected)
            .ok_or_else(|| Error::step(format!("{selected} is not in the support of {sigma}")))?
            .clone();
        Ok(AlgStep {
            selected: selected.clone(),
            context: sigma.with_coefficient(selected, Coefficient::zero(sigma.semiring())),
            split,
            redex,
        })
    }

    /// `a.τ + ρ`.
    pub fn source(&self) -> Result<AlgebraicTerm> {
        AlgebraicTerm::monomial(self.split.clone(), self.selected.clone()).add(&self.context)
    }

    /// `τ'`, the `→`-reduct of the selected term.
    pub fn reduct(&self) -> Result<AlgebraicTerm> {
        self.redex.apply(&self.selected)
    }

    /// `a.τ' + ρ`.
    pub fn target(&self) -> Result<AlgebraicTerm> {
        if self.split.is_zero() {
            return Err(Error::step("split coefficient must be non-zero"));
        }
        self.reduct()?.scale(&self.split)?.add(&self.context)
    }

    /// Checks that this step starts at `sigma` and returns its target.
    pub fn apply_to(&self, sigma: &AlgebraicTerm) -> Result<AlgebraicTerm> {
        let source = self.source()?;
        if &source != sigma {
            return Err(Error::step(format!(
                "step decomposes {source}, expected {sigma}"
            )));
        }
        self.target()
    }
}

/// Which decompositions `c = a + b` of a coefficient are enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitPolicy {
    /// Only `a = c`.
    Full,
    /// `a = c`, plus every `a ∈ 1..c` for `nat` coefficients `c ≤ cap`
    /// (only `a = 1` above the cap).
    Unit { cap: u64 },
    /// `a = c`, plus `a = c/2` for `rat+` coefficients.
    Half,
}

impl SplitPolicy {
    pub const DEFAULT_UNIT_CAP: u64 = 8;

    pub fn unit() -> Self {
        SplitPolicy::Unit {
            cap: Self::DEFAULT_UNIT_CAP,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SplitPolicy::Full => "full",
            SplitPolicy::Unit { .. } => "unit",
            SplitPolicy::Half => "half",
        }
    }

    pub fn is_valid_for(&self, s: SemiringId) -> bool {
        match self {
            SplitPolicy::Full => true,
            SplitPolicy::Unit { .. } => s == SemiringId::Nat,
            SplitPolicy::Half => s == SemiringId::NonnegRat,
        }
    }

    /// Pairs `(a, b)` with `a + b = c` and `a ≠ 0`, full split first.
    pub fn splits(&self, c: &Coefficient) -> Vec<(Coefficient, Coefficient)> {
        let s = c.semiring();
        let mut out = vec![(c.clone(), Coefficient::zero(s))];
        match self {
            SplitPolicy::Full => {}
            SplitPolicy::Unit { cap } => {
                if let Some(n) = c.as_u64() {
                    let parts: Vec<u64> = if n <= *cap {
                        (1..n).collect()
                    } else {
                        vec![1]
                    };
                    for a in parts {
                        out.push((Coefficient::from_u64(a, s), Coefficient::from_u64(n - a, s)));
                    }
                } else if s == SemiringId::Nat {
                    let one = Coefficient::one(s);
                    let rest = c.checked_sub(&one).expect("non-zero natural");
                    out.push((one, rest));
                }
            }
            SplitPolicy::Half => {
                if let Some(h) = c.half() {
                    out.push((h.clone(), h));
                }
            }
        }
        out
    }
}

impl fmt::Display for SplitPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplitPolicy::Unit { cap } if *cap != Self::DEFAULT_UNIT_CAP => write!(f, "unit(cap {cap})"),
            p => f.write_str(p.name()),
        }
    }
}

impl FromStr for SplitPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(SplitPolicy::Full),
            "unit" => Ok(SplitPolicy::unit()),
            "half" => Ok(SplitPolicy::Half),
            other => Err(Error::usage(format!("unknown split policy `{other}`"))),
        }
    }
}

/// An enumerated `~→` step with its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgReduct {
    pub step: AlgStep,
    pub reduct: AlgebraicTerm,
    pub result: AlgebraicTerm,
}

/// All `→` steps of a simple term, leftmost-outermost first. Steps inside
/// argument positions enumerate splits per `policy`.
pub fn simple_steps(t: &SimpleTerm, policy: SplitPolicy) -> Vec<(Redex, AlgebraicTerm)> {
    match t {
        SimpleTerm::Var(_) => Vec::new(),
        SimpleTerm::Lam(b) => simple_steps(b, policy)
            .into_iter()
            .map(|(r, red)| (Redex::Body(Box::new(r)), red.map_keys(SimpleTerm::lam)))
            .collect(),
        SimpleTerm::App(f, rho) => {
            let mut out = Vec::new();
            if let SimpleTerm::Lam(body) = &**f {
                out.push((Redex::Beta, body.subst(&Var::Bound(0), rho)));
            }
            for (r, red) in simple_steps(f, policy) {
                out.push((
                    Redex::Fun(Box::new(r)),
                    red.map_keys(|u| SimpleTerm::app(u, rho.clone())),
                ));
            }
            for ar in alg_reducts(rho, policy) {
                let red = AlgebraicTerm::singleton(SimpleTerm::app((**f).clone(), ar.result), rho.semiring());
                out.push((Redex::Arg(Box::new(ar.step)), red));
            }
            out
        }
    }
}

/// One-step `→`-reducts of a simple term (argument steps use full splits).
pub fn simple_reducts(t: &SimpleTerm) -> Vec<AlgebraicTerm> {
    simple_steps(t, SplitPolicy::Full)
        .into_iter()
        .map(|(_, r)| r)
        .collect()
}

/// One-step `~→`-reducts under `policy`.
pub fn alg_reducts(sigma: &AlgebraicTerm, policy: SplitPolicy) -> Vec<AlgReduct> {
    let mut out = Vec::new();
    for (tau, c) in sigma.iter() {
        let steps = simple_steps(tau, policy);
        if steps.is_empty() {
            continue;
        }
        for (a, b) in policy.splits(c) {
            let context = sigma.with_coefficient(tau, b);
            for (redex, reduct) in &steps {
                let result = reduct.times(&a).plus(&context);
                out.push(AlgReduct {
                    step: AlgStep {
                        selected: tau.clone(),
                        split: a.clone(),
                        context: context.clone(),
                        redex: redex.clone(),
                    },
                    reduct: reduct.clone(),
                    result,
                });
            }
        }
    }
    out
}

/// The first full-split step in canonical order, if any.
pub fn leftmost_step(sigma: &AlgebraicTerm) -> Option<AlgReduct> {
    for (tau, _) in sigma.iter() {
        if let Some((redex, _)) = simple_steps(tau, SplitPolicy::Full).into_iter().next() {
            let step = AlgStep::full(sigma, tau, redex).expect("tau is in the support");
            let reduct = step.reduct().expect("enumerated step applies");
            let result = step.target().expect("enumerated step applies");
            return Some(AlgReduct { step, reduct, result });
        }
    }
    None
}

impl SimpleTerm {
    pub fn has_redex(&self) -> bool {
        match self {
            SimpleTerm::Var(_) => false,
            SimpleTerm::Lam(b) => b.has_redex(),
            SimpleTerm::App(f, rho) => {
                matches!(**f, SimpleTerm::Lam(_))
                    || f.has_redex()
                    || rho.iter().any(|(u, _)| u.has_redex())
            }
        }
    }
}

/// Normality for `~→`. Under positivity this coincides with the absence of
/// β-redexes, which is what is checked.
pub fn is_normal(sigma: &AlgebraicTerm) -> Result<bool> {
    sigma.semiring().require_positive()?;
    Ok(sigma.iter().all(|(u, _)| !u.has_redex()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgTraceStep {
    pub step: AlgStep,
    pub reduct: AlgebraicTerm,
    pub result: AlgebraicTerm,
}

/// A witness of `start ~→* end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgTrace {
    pub start: AlgebraicTerm,
    pub steps: Vec<AlgTraceStep>,
}

impl AlgTrace {
    pub fn empty(start: AlgebraicTerm) -> Self {
        AlgTrace {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &AlgebraicTerm {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn push(&mut self, r: AlgReduct) {
        self.steps.push(AlgTraceStep {
            step: r.step,
            reduct: r.reduct,
            result: r.result,
        });
    }

    /// Appends `step` after checking it applies to the current endpoint.
    pub fn push_step(&mut self, step: AlgStep) -> Result<()> {
        let result = step.apply_to(self.end())?;
        let reduct = step.reduct()?;
        self.steps.push(AlgTraceStep {
            step,
            reduct,
            result,
        });
        Ok(())
    }

    pub fn then(mut self, other: &AlgTrace) -> Result<AlgTrace> {
        if self.end() != &other.start {
            return Err(Error::InvalidTrace(format!(
                "cannot append a trace from {} to one ending at {}",
                other.start,
                self.end()
            )));
        }
        self.steps.extend(other.steps.iter().cloned());
        Ok(self)
    }

    /// Revalidates every step from scratch: decomposition, reduct, and
    /// recombination.
    pub fn validate(&self) -> Result<()> {
        let mut current = self.start.clone();
        for (i, s) in self.steps.iter().enumerate() {
            let fail = |msg: String| Error::InvalidTrace(format!("step {i}: {msg}"));
            let source = s.step.source().map_err(|e| fail(e.to_string()))?;
            if source != current {
                return Err(fail(format!("decomposition {source} does not match {current}")));
            }
            let reduct = s.step.reduct().map_err(|e| fail(e.to_string()))?;
            if reduct != s.reduct {
                return Err(fail(format!("recorded reduct {} but the redex gives {reduct}", s.reduct)));
            }
            let result = s.step.target().map_err(|e| fail(e.to_string()))?;
            if result != s.result {
                return Err(fail(format!("recorded result {} but recombination gives {result}", s.result)));
            }
            current = result;
        }
        Ok(())
    }
}

impl fmt::Display for AlgTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.start)?;
        for s in &self.steps {
            write!(f, "\n  ~> {}    [{} of {}]", s.result, s.step.split, s.step.selected)?;
        }
        Ok(())
    }
}

/// Breadth-first exploration state for `~→`.
struct Explorer {
    root: AlgebraicTerm,
    parents: HashMap<AlgebraicTerm, Option<(AlgebraicTerm, AlgTraceStep)>>,
    queue: VecDeque<AlgebraicTerm>,
}

impl Explorer {
    fn new(root: &AlgebraicTerm) -> Self {
        Explorer {
            root: root.clone(),
            parents: HashMap::from([(root.clone(), None)]),
            queue: VecDeque::from([root.clone()]),
        }
    }

    fn contains(&self, t: &AlgebraicTerm) -> bool {
        self.parents.contains_key(t)
    }

    /// Expands the next queued term; returns the newly discovered reducts.
    fn expand(&mut self, policy: SplitPolicy) -> Option<Vec<AlgebraicTerm>> {
        let t = self.queue.pop_front()?;
        let mut fresh = Vec::new();
        for r in alg_reducts(&t, policy) {
            if self.parents.contains_key(&r.result) {
                continue;
            }
            let result = r.result.clone();
            let step = AlgTraceStep {
                step: r.step,
                reduct: r.reduct,
                result: r.result,
            };
            self.parents.insert(result.clone(), Some((t.clone(), step)));
            self.queue.push_back(result.clone());
            fresh.push(result);
        }
        Some(fresh)
    }

    fn trace_to(&self, end: &AlgebraicTerm) -> AlgTrace {
        let mut steps = Vec::new();
        let mut cur = end.clone();
        while let Some(Some((prev, step))) = self.parents.get(&cur) {
            steps.push(step.clone());
            cur = prev.clone();
        }
        steps.reverse();
        AlgTrace {
            start: self.root.clone(),
            steps,
        }
    }
}

/// Breadth-first search for `s ~→* t`.
pub fn alg_reaches(
    s: &AlgebraicTerm,
    t: &AlgebraicTerm,
    fuel: usize,
    policy: SplitPolicy,
) -> Result<Reach<AlgTrace>> {
    if s.semiring() != t.semiring() {
        return Err(Error::MixedSemirings(s.semiring(), t.semiring()));
    }
    s.semiring().require_positive()?;
    let mut ex = Explorer::new(s);
    if s == t {
        return Ok(Reach::Found(AlgTrace::empty(s.clone())));
    }
    let mut explored = 0;
    while !ex.queue.is_empty() {
        if explored == fuel {
            return Ok(Reach::Unknown { explored });
        }
        explored += 1;
        let fresh = ex.expand(policy).expect("queue is non-empty");
        if fresh.iter().any(|r| r == t) {
            return Ok(Reach::Found(ex.trace_to(t)));
        }
    }
    Ok(Reach::Unreachable { explored })
}

/// A common reduct of two algebraic terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Join {
    pub meet: AlgebraicTerm,
    pub left: AlgTrace,
    pub right: AlgTrace,
}

/// Bidirectional breadth-first search for a common `~→*`-reduct, expanding
/// at most `fuel` terms in total.
pub fn joinable(
    s: &AlgebraicTerm,
    t: &AlgebraicTerm,
    fuel: usize,
    policy: SplitPolicy,
) -> Result<Reach<Join>> {
    if s.semiring() != t.semiring() {
        return Err(Error::MixedSemirings(s.semiring(), t.semiring()));
    }
    s.semiring().require_positive()?;
    let mut left = Explorer::new(s);
    let mut right = Explorer::new(t);
    let join = |left: &Explorer, right: &Explorer, meet: &AlgebraicTerm| Join {
        meet: meet.clone(),
        left: left.trace_to(meet),
        right: right.trace_to(meet),
    };
    if s == t {
        return Ok(Reach::Found(join(&left, &right, s)));
    }
    let mut explored = 0;
    let mut left_turn = true;
    loop {
        let use_left = match (left.queue.is_empty(), right.queue.is_empty()) {
            (true, true) => return Ok(Reach::Unreachable { explored }),
            (true, false) => false,
            (false, true) => true,
            (false, false) => left_turn,
        };
        left_turn = !left_turn;
        if explored == fuel {
            return Ok(Reach::Unknown { explored });
        }
        explored += 1;
        let (this, other) = if use_left {
            (&mut left, &right)
        } else {
            (&mut right, &left)
        };
        let fresh = this.expand(policy).expect("queue is non-empty");
        if let Some(meet) = fresh.into_iter().find(|r| other.contains(r)) {
            return Ok(Reach::Found(join(&left, &right, &meet)));
        }
    }
}

// ---------------------------------------------------------------------------
// Parallel reduction

/// Contracts every β-redex of `m` simultaneously.
pub fn parallel_pure(m: &PureTerm) -> PureTerm {
    match m {
        PureTerm::Var(_) => m.clone(),
        PureTerm::Lam(b) => PureTerm::lam(parallel_pure(b)),
        PureTerm::App(f, a) => match &**f {
            PureTerm::Lam(b) => parallel_pure(b).subst(&Var::Bound(0), &parallel_pure(a)),
            _ => PureTerm::app(parallel_pure(f), parallel_pure(a)),
        },
    }
}

pub fn parallel_simple(t: &SimpleTerm, semiring: SemiringId) -> AlgebraicTerm {
    match t {
        SimpleTerm::Var(_) => AlgebraicTerm::singleton(t.clone(), semiring),
        SimpleTerm::Lam(b) => parallel_simple(b, semiring).map_keys(SimpleTerm::lam),
        SimpleTerm::App(f, rho) => {
            let arg = parallel_reduce(rho);
            match &**f {
                SimpleTerm::Lam(b) => parallel_simple(b, semiring).subst(&Var::Bound(0), &arg),
                _ => parallel_simple(f, semiring).map_keys(|u| SimpleTerm::app(u, arg.clone())),
            }
        }
    }
}

/// Parallel reduction extended linearly to combinations.
pub fn parallel_reduce(sigma: &AlgebraicTerm) -> AlgebraicTerm {
    sigma.flat_map(|u| parallel_simple(u, sigma.semiring()))
}

pub fn parallel_reduce_n(sigma: &AlgebraicTerm, k: usize) -> AlgebraicTerm {
    (0..k).fold(sigma.clone(), |s, _| parallel_reduce(&s))
}
