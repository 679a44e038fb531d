//! Translating algebraic reductions between pure terms into β-reductions,
//! and the worked examples around that translation.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{canonicalize, AlgebraicTerm, SimpleTerm};
use crate::error::{Error, Result};
use crate::mashup::{self, MashupDerivation};
use crate::reduction::{
    alg_reaches, beta_graph, beta_reaches, is_beta_normal, joinable, parallel_pure,
    parallel_reduce_n, AlgStep, AlgTrace, BetaTrace, Join, Reach, Redex, SplitPolicy,
};
use crate::semiring::{Coefficient, SemiringId};
use crate::syntax::{parse, parse_pure, PureTerm};

/// Evidence that `embed(source) ~→* embed(target)` implies
/// `source →Λ* target`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub source: PureTerm,
    pub target: PureTerm,
    pub alg: AlgTrace,
    /// `derivations[i]` concludes `source ⊩ (state i of alg)`.
    pub derivations: Vec<MashupDerivation>,
    pub beta: BetaTrace,
}

/// Builds the certificate: reflexivity, one derivation step per algebraic
/// step, then extraction of the β-trace.
pub fn conserve(alg: &AlgTrace) -> Result<Certificate> {
    let semiring = alg.start.semiring();
    semiring.require_positive()?;
    alg.validate()?;
    let source = alg
        .start
        .as_pure()
        .ok_or_else(|| Error::usage(format!("trace starts at {}, not a pure term", alg.start)))?;
    let target = alg
        .end()
        .as_pure()
        .ok_or_else(|| Error::usage(format!("trace ends at {}, not a pure term", alg.end())))?;
    let mut derivations = vec![mashup::refl(&source, semiring)];
    for s in &alg.steps {
        let next = mashup::step_derivation(derivations.last().expect("non-empty"), &s.step)?;
        derivations.push(next);
    }
    let beta = mashup::extract(derivations.last().expect("non-empty"), &target)?;
    Ok(Certificate {
        source,
        target,
        alg: alg.clone(),
        derivations,
        beta,
    })
}

impl Certificate {
    /// Rechecks every component independently of how it was built.
    pub fn verify(&self) -> Result<()> {
        self.alg.validate()?;
        let semiring = self.alg.start.semiring();
        if self.alg.start != AlgebraicTerm::embed(&self.source, semiring)
            || self.alg.end() != &AlgebraicTerm::embed(&self.target, semiring)
        {
            return Err(Error::usage("algebraic trace endpoints differ from the certificate"));
        }
        if self.derivations.len() != self.alg.len() + 1 {
            return Err(Error::usage("one derivation per trace state expected"));
        }
        let states = std::iter::once(&self.alg.start).chain(self.alg.steps.iter().map(|s| &s.result));
        for (i, (d, state)) in self.derivations.iter().zip(states).enumerate() {
            let j = mashup::check_mashup_derivation(d).into_result()?;
            let expected = mashup::Judgement::Mashup {
                subject: self.source.clone(),
                term: state.clone(),
            };
            if j != expected {
                return Err(Error::usage(format!("derivation {i} concludes {j}, expected {expected}")));
            }
        }
        if self.beta.start != self.source || self.beta.replay()? != self.target {
            return Err(Error::InvalidTrace(format!(
                "β-trace does not lead from {} to {}",
                self.source, self.target
            )));
        }
        Ok(())
    }
}

/// Evidence that two pure terms are algebraically convertible, together
/// with the β-reductions that make them β-convertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivEvidence {
    pub join: Join,
    /// Number of steps on the left side of the join.
    pub k: usize,
    /// `m` after `k` rounds of parallel reduction.
    pub reduct: PureTerm,
    /// `join.meet ~→* embed(reduct)`.
    pub to_reduct: AlgTrace,
    /// `m →Λ* reduct`.
    pub left: Certificate,
    /// `n →Λ* reduct`.
    pub right: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent(Box<EquivEvidence>),
    /// A search ran out of budget at the named stage.
    Unknown { stage: &'static str },
    /// Both reduction graphs were explored completely without meeting.
    NotJoinable,
}

/// Looks for a common reduct of `m` and `n`, then turns it into a common
/// β-reduct: with `k` steps on `m`'s side, the meet reduces to `m↓^k`, and
/// both algebraic traces into `m↓^k` are converted to β-traces.
pub fn equiv_check(
    m: &PureTerm,
    n: &PureTerm,
    semiring: SemiringId,
    fuel: usize,
    policy: SplitPolicy,
) -> Result<Equivalence> {
    semiring.require_positive()?;
    let em = AlgebraicTerm::embed(m, semiring);
    let en = AlgebraicTerm::embed(n, semiring);
    let join = match joinable(&em, &en, fuel, policy)? {
        Reach::Found(j) => j,
        Reach::Unknown { .. } => return Ok(Equivalence::Unknown { stage: "join" }),
        Reach::Unreachable { .. } => return Ok(Equivalence::NotJoinable),
    };
    let k = join.left.len();
    let reduct = (0..k).fold(m.clone(), |t, _| parallel_pure(&t));
    let target = AlgebraicTerm::embed(&reduct, semiring);
    debug_assert_eq!(parallel_reduce_n(&em, k), target);
    let to_reduct = match alg_reaches(&join.meet, &target, fuel, policy)? {
        Reach::Found(t) => t,
        _ => return Ok(Equivalence::Unknown { stage: "reduct" }),
    };
    let left = conserve(&join.left.clone().then(&to_reduct)?)?;
    let right = conserve(&join.right.clone().then(&to_reduct)?)?;
    Ok(Equivalence::Equivalent(Box::new(EquivEvidence {
        join,
        k,
        reduct,
        to_reduct,
        left,
        right,
    })))
}

// ---------------------------------------------------------------------------
// Reports

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

/// A rendered demonstration: labelled sections and a final verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub sections: Vec<Section>,
    pub verdict: String,
    pub confirmed: bool,
}

impl Report {
    fn new(name: &str) -> Self {
        Report {
            name: name.to_string(),
            sections: Vec::new(),
            verdict: String::new(),
            confirmed: false,
        }
    }

    fn section(&mut self, title: &str, lines: Vec<String>) {
        self.sections.push(Section {
            title: title.to_string(),
            lines,
        });
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "== {} ==", self.name)?;
        for s in &self.sections {
            writeln!(f, "{}:", s.title)?;
            for l in &s.lines {
                writeln!(f, "  {l}")?;
            }
        }
        writeln!(f, "verdict: {}", self.verdict)
    }
}

fn set_line(terms: &BTreeSet<PureTerm>) -> String {
    let items: Vec<String> = terms.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn trace_lines(t: &AlgTrace) -> Vec<String> {
    let mut out = vec![t.start.to_string()];
    out.extend(t.steps.iter().map(|s| format!("~> {}", s.result)));
    out
}

// ---------------------------------------------------------------------------
// A broken lifting property

/// A reduction `σ ~→ σ'` with a choice `M' ∈ Λ(σ')` that no choice in
/// `Λ(σ)` β-reduces to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingCounterexample {
    pub sigma: AlgebraicTerm,
    pub sigma_prime: AlgebraicTerm,
    pub step: AlgStep,
    pub choices: BTreeSet<PureTerm>,
    pub choices_prime: BTreeSet<PureTerm>,
    pub witness: PureTerm,
    /// The complete β-reduction graph of every element of `choices`.
    pub graphs: Vec<(PureTerm, Vec<PureTerm>)>,
    pub fuel: usize,
}

impl LiftingCounterexample {
    pub fn witness_is_choice(&self) -> bool {
        self.choices_prime.contains(&self.witness)
    }

    /// Whether some element of `choices` reaches the witness; `None` when a
    /// search ran out of budget.
    pub fn witness_reachable(&self) -> Option<bool> {
        let mut any = false;
        for m in &self.choices {
            match beta_reaches(m, &self.witness, self.fuel) {
                Reach::Found(_) => any = true,
                Reach::Unknown { .. } => return None,
                Reach::Unreachable { .. } => {}
            }
        }
        Some(any)
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new("lifting counterexample");
        r.section(
            "reduction",
            vec![
                format!("σ  = {}", self.sigma),
                format!("σ' = {}", self.sigma_prime),
            ],
        );
        r.section("Λ(σ)", vec![set_line(&self.choices)]);
        r.section("Λ(σ')", vec![set_line(&self.choices_prime)]);
        r.section(
            "witness",
            vec![format!(
                "M' = {} {} Λ(σ')",
                self.witness,
                if self.witness_is_choice() { "∈" } else { "∉" }
            )],
        );
        let mut lines = vec![format!("budget: {} terms per search", self.fuel)];
        for (m, graph) in &self.graphs {
            let nodes: Vec<String> = graph.iter().map(ToString::to_string).collect();
            let normal: BTreeSet<PureTerm> = graph.iter().filter(|t| is_beta_normal(t)).cloned().collect();
            lines.push(format!("{m}: graph {{{}}}, normal forms {}", nodes.join(", "), set_line(&normal)));
        }
        r.section("reduction graphs", lines);
        let reachable = self.witness_reachable();
        r.confirmed = self.witness_is_choice() && reachable == Some(false);
        r.verdict = match reachable {
            Some(false) => format!("no element of Λ(σ) β-reduces to {}; the lifting claim fails", self.witness),
            Some(true) => "some element of Λ(σ) reaches the witness".to_string(),
            None => "unknown: budget exhausted".to_string(),
        };
        r
    }
}

/// `σ = (λx.(x)x)(y + z) ~→ (y + z)(y + z)` over `nat`, with `M' = (y)z`.
pub fn lifting_counterexample() -> LiftingCounterexample {
    const FUEL: usize = 1000;
    let nat = SemiringId::Nat;
    let sigma = canonicalize(&parse("(λx.(x)x)(y + z)", nat).expect("fixed input"), nat)
        .expect("fixed input");
    let (selected, _) = sigma.iter().next().expect("one simple term");
    let step = AlgStep::full(&sigma, selected, Redex::Beta).expect("head redex");
    let sigma_prime = step.target().expect("head redex");
    let choices = sigma.lambda_support();
    let graphs = choices
        .iter()
        .map(|m| (m.clone(), beta_graph(m, FUEL).expect("finite reduction graph")))
        .collect();
    LiftingCounterexample {
        choices_prime: sigma_prime.lambda_support(),
        witness: parse_pure("(y)z").expect("fixed input"),
        sigma,
        sigma_prime,
        step,
        choices,
        graphs,
        fuel: FUEL,
    }
}

// ---------------------------------------------------------------------------
// Pure terms are not closed under algebraic reduction

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub term: PureTerm,
    pub start: AlgebraicTerm,
    pub step: AlgStep,
    pub result: AlgebraicTerm,
}

impl SplitWitness {
    pub fn report(&self) -> Report {
        let mut r = Report::new("half-split step leaves the pure terms");
        r.section(
            "step",
            vec![
                format!("M = {}", self.term),
                format!(
                    "M = {}.M + {}.M ~> {}",
                    self.step.split, self.step.split, self.result
                ),
            ],
        );
        let back = self.start.as_pure();
        let out = self.result.as_pure();
        r.section(
            "purity",
            vec![
                format!(
                    "start: {}",
                    back.as_ref().map_or("not pure".to_string(), |m| format!("pure, {m}"))
                ),
                format!(
                    "result: {}",
                    out.as_ref().map_or("not pure".to_string(), |m| format!("pure, {m}"))
                ),
            ],
        );
        r.confirmed = back.as_ref() == Some(&self.term) && out.is_none();
        r.verdict = if r.confirmed {
            "a pure term reduces outside the pure terms".to_string()
        } else {
            "not confirmed".to_string()
        };
        r
    }
}

/// `M = (λx.x)y` over `rat+`, reducing one half of `M`.
pub fn split_witness() -> SplitWitness {
    let rat = SemiringId::NonnegRat;
    let term = parse_pure("(λx.x)y").expect("fixed input");
    let start = AlgebraicTerm::embed(&term, rat);
    let selected = SimpleTerm::embed(&term, rat);
    let half = Coefficient::rat(1, 2).expect("positive");
    let step = AlgStep {
        context: AlgebraicTerm::monomial(half.clone(), selected.clone()),
        selected,
        split: half,
        redex: Redex::Beta,
    };
    let result = step.apply_to(&start).expect("valid split");
    SplitWitness {
        term,
        start,
        step,
        result,
    }
}

// ---------------------------------------------------------------------------
// Inconsistency with negative coefficients

/// `(λf.(λx.(f)((x)x))λx.(f)((x)x))`.
pub fn fixpoint_combinator() -> PureTerm {
    parse_pure("λf.(λx.(f)((x)x))λx.(f)((x)x)").expect("fixed input")
}

/// `∞σ = (Y)λx.(σ + x)`.
pub fn infinity(sigma: &AlgebraicTerm) -> SimpleTerm {
    let s = sigma.semiring();
    let x = AlgebraicTerm::singleton(SimpleTerm::Var(crate::syntax::Var::Bound(0)), s);
    let body = sigma.shift(1, 0).plus(&x).map_keys(SimpleTerm::lam);
    SimpleTerm::app(SimpleTerm::embed(&fixpoint_combinator(), s), body)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency {
    pub sigma: AlgebraicTerm,
    pub infinity: AlgebraicTerm,
    /// `∞σ ~→* σ + Θ`.
    pub forward: AlgTrace,
    /// `σ + ∞σ ~→ σ + Θ`.
    pub backward: AlgTrace,
    pub int_sigma: AlgebraicTerm,
    /// `∞σ + (−1).∞σ`, canonically.
    pub int_cancelled: AlgebraicTerm,
    /// `σ + ∞σ + (−1).∞σ`, canonically.
    pub int_shifted: AlgebraicTerm,
    /// The forward chain with `(−1).∞σ` added everywhere.
    pub int_forward: AlgTrace,
    pub int_backward: AlgTrace,
}

/// The scripted chain `∞σ ~→* σ + Θ ←~ σ + ∞σ`; every step is a head
/// β-step on a whole support element.
fn fixpoint_chain(sigma: &AlgebraicTerm) -> Result<(AlgebraicTerm, AlgTrace, AlgTrace)> {
    let inf = infinity(sigma);
    let start = AlgebraicTerm::singleton(inf.clone(), sigma.semiring());
    let mut forward = AlgTrace::empty(start.clone());
    forward.push_step(AlgStep::full(&start, &inf, Redex::Beta)?)?;
    let theta = forward.end().clone();
    let identity = SimpleTerm::lam(SimpleTerm::Var(crate::syntax::Var::Bound(0)));
    let mut last = None;
    for (t, _) in theta.iter() {
        let reduct = Redex::Beta.apply(t)?;
        let is_last = matches!(reduct.iter().next(), Some((SimpleTerm::App(f, _), _)) if **f == identity);
        if is_last {
            last = Some(t.clone());
            continue;
        }
        head_twice(&mut forward, t)?;
    }
    let last = last.ok_or_else(|| Error::step("unfolding lost the identity branch"))?;
    head_twice(&mut forward, &last)?;
    let meet = sigma.plus(&theta);
    if forward.end() != &meet {
        return Err(Error::step(format!("forward chain ends at {}, expected {meet}", forward.end())));
    }
    let back_start = sigma.plus(&start);
    let mut backward = AlgTrace::empty(back_start.clone());
    backward.push_step(AlgStep::full(&back_start, &inf, Redex::Beta)?)?;
    if backward.end() != &meet {
        return Err(Error::step("backward step misses the meeting point"));
    }
    Ok((start, forward, backward))
}

fn head_twice(trace: &mut AlgTrace, t: &SimpleTerm) -> Result<()> {
    let state = trace.end().clone();
    trace.push_step(AlgStep::full(&state, t, Redex::Beta)?)?;
    let mid = trace.steps.last().expect("just pushed").reduct.clone();
    let (u, _) = mid.iter().next().ok_or_else(|| Error::step("empty reduct"))?;
    let state = trace.end().clone();
    trace.push_step(AlgStep::full(&state, u, Redex::Beta)?)
}

/// Adds `c` to every state of `t`, keeping each step's redex.
fn lift(t: &AlgTrace, c: &AlgebraicTerm) -> Result<AlgTrace> {
    let mut out = AlgTrace::empty(t.start.add(c)?);
    for s in &t.steps {
        let mut step = s.step.clone();
        step.context = step.context.add(c)?;
        out.push_step(step)?;
    }
    Ok(out)
}

/// Builds the chains for `sigma`, read once over `nat` and once over `int`.
pub fn inconsistency(sigma: &str) -> Result<Inconsistency> {
    let nat = canonicalize(&parse(sigma, SemiringId::Nat)?, SemiringId::Nat)?;
    let (infinity, forward, backward) = fixpoint_chain(&nat)?;

    let int = canonicalize(&parse(sigma, SemiringId::Int)?, SemiringId::Int)?;
    let (int_inf, int_fwd, int_bwd) = fixpoint_chain(&int)?;
    let minus = int_inf.scale(&Coefficient::int(-1))?;
    let int_cancelled = int_inf.add(&minus)?;
    let int_shifted = int.add(&int_inf)?.add(&minus)?;
    let int_forward = lift(&int_fwd, &minus)?;
    let int_backward = lift(&int_bwd, &minus)?;
    Ok(Inconsistency {
        sigma: nat,
        infinity,
        forward,
        backward,
        int_sigma: int,
        int_cancelled,
        int_shifted,
        int_forward,
        int_backward,
    })
}

impl Inconsistency {
    /// Revalidates both chains and the module identities.
    pub fn verify(&self) -> Result<()> {
        for t in [&self.forward, &self.backward, &self.int_forward, &self.int_backward] {
            t.validate()?;
        }
        let checks = [
            (self.forward.end() == self.backward.end(), "nat chains meet"),
            (self.forward.start == self.infinity, "nat chain starts at ∞σ"),
            (
                self.backward.start == self.sigma.plus(&self.infinity),
                "nat backward chain starts at σ + ∞σ",
            ),
            (self.int_cancelled.is_zero(), "∞σ + (−1).∞σ = 0"),
            (self.int_shifted == self.int_sigma, "σ + ∞σ + (−1).∞σ = σ"),
            (self.int_forward.start.is_zero(), "int chain starts at 0"),
            (self.int_backward.start == self.int_sigma, "int backward chain starts at σ"),
            (self.int_forward.end() == self.int_backward.end(), "int chains meet"),
        ];
        for (ok, what) in checks {
            if !ok {
                return Err(Error::InvalidTrace(format!("check failed: {what}")));
            }
        }
        Ok(())
    }

    pub fn report(&self) -> Report {
        let mut r = Report::new("inconsistency with negative coefficients");
        r.section(
            "setup",
            vec![
                format!("Y  = {}", fixpoint_combinator()),
                format!("σ  = {}", self.sigma),
                format!("∞σ = {}", self.infinity),
            ],
        );
        r.section("nat: ∞σ ~>* σ + Θ", trace_lines(&self.forward));
        r.section("nat: σ + ∞σ ~>* σ + Θ", trace_lines(&self.backward));
        r.section(
            "int: identities",
            vec![
                format!("∞σ + (-1).∞σ = {}", self.int_cancelled),
                format!("σ + ∞σ + (-1).∞σ = {}", self.int_shifted),
            ],
        );
        r.section("int: 0 ~>* σ + Θ - ∞σ", trace_lines(&self.int_forward));
        r.section("int: σ ~>* σ + Θ - ∞σ", trace_lines(&self.int_backward));
        let ok = self.verify();
        r.confirmed = ok.is_ok();
        r.verdict = match ok {
            Ok(()) => format!("0 ↔ {} over int; every step replayed", self.int_sigma),
            Err(e) => format!("not confirmed: {e}"),
        };
        r
    }
}
