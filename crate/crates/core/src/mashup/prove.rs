//! Bottom-up search for mashup derivations.
//!
//! A `⊢` goal explores the β-reduction graph of the subject breadth-first
//! and tries every reduct whose head matches the goal. Expanding one term
//! costs one unit of fuel; the budget is shared by the whole search for a
//! simple goal, and running out aborts that search. Searches are
//! deterministic, so a success at some fuel is reproduced at any larger
//! fuel.

use std::collections::{HashMap, VecDeque};

use super::{transform, MashupDerivation, SimpleDerivation};
use crate::algebra::{AlgebraicTerm, SimpleTerm};
use crate::reduction::{beta_reducts, BetaStep, BetaTrace, Position};
use crate::syntax::PureTerm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    Proved(MashupDerivation),
    /// The search space was exhausted: no derivation exists.
    Refuted,
    Unknown,
}

impl Proof {
    pub fn derivation(self) -> Option<MashupDerivation> {
        match self {
            Proof::Proved(d) => Some(d),
            _ => None,
        }
    }
}

/// The search budget ran out before an answer was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutOfFuel;

pub type Search<T> = Result<Option<T>, OutOfFuel>;

struct Prover {
    fuel: usize,
    memo: HashMap<(PureTerm, SimpleTerm), Option<SimpleDerivation>>,
}

/// Searches for `m ⊩ goal` through its support: one independent search per
/// support element, each with budget `fuel`.
pub fn prove(m: &PureTerm, goal: &AlgebraicTerm, fuel: usize) -> Proof {
    let mut parts = std::collections::BTreeMap::new();
    let mut unknown = false;
    for (u, _) in goal.iter() {
        match prove_simple(m, u, fuel) {
            Ok(Some(d)) => {
                parts.insert(u.clone(), d);
            }
            Ok(None) => return Proof::Refuted,
            Err(OutOfFuel) => unknown = true,
        }
    }
    if unknown {
        return Proof::Unknown;
    }
    Proof::Proved(transform::support_join(m, goal, &parts).expect("one part per support element"))
}

/// Searches for `m ⊢ goal`. `Ok(None)` means no derivation exists;
/// `Err(OutOfFuel)` means the budget ran out.
pub fn prove_simple(m: &PureTerm, goal: &SimpleTerm, fuel: usize) -> Search<SimpleDerivation> {
    let mut p = Prover {
        fuel,
        memo: HashMap::new(),
    };
    p.simple(m, goal)
}

fn shape_matches(t: &PureTerm, goal: &SimpleTerm) -> bool {
    match (t, goal) {
        (PureTerm::Var(v), SimpleTerm::Var(w)) => v == w,
        (PureTerm::Lam(_), SimpleTerm::Lam(_)) | (PureTerm::App(..), SimpleTerm::App(..)) => true,
        _ => false,
    }
}

impl Prover {
    fn spend(&mut self) -> Result<(), OutOfFuel> {
        if self.fuel == 0 {
            return Err(OutOfFuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn simple(&mut self, m: &PureTerm, goal: &SimpleTerm) -> Search<SimpleDerivation> {
        let key = (m.clone(), goal.clone());
        if let Some(known) = self.memo.get(&key) {
            return Ok(known.clone());
        }
        let found = self.search(m, goal)?;
        self.memo.insert(key, found.clone());
        Ok(found)
    }

    fn search(&mut self, m: &PureTerm, goal: &SimpleTerm) -> Search<SimpleDerivation> {
        let mut parents: HashMap<PureTerm, Option<(PureTerm, Position)>> = HashMap::new();
        parents.insert(m.clone(), None);
        let mut queue = VecDeque::from([m.clone()]);
        while let Some(t) = queue.pop_front() {
            if shape_matches(&t, goal) {
                if let Some(d) = self.close(&t, goal, || trace_to(&parents, m, &t))? {
                    return Ok(Some(d));
                }
            }
            self.spend()?;
            for (pos, r) in beta_reducts(&t) {
                if !parents.contains_key(&r) {
                    parents.insert(r.clone(), Some((t.clone(), pos)));
                    queue.push_back(r);
                }
            }
        }
        Ok(None)
    }

    /// Tries to finish a derivation whose trace ends at `t`.
    fn close(
        &mut self,
        t: &PureTerm,
        goal: &SimpleTerm,
        trace: impl FnOnce() -> BetaTrace,
    ) -> Search<SimpleDerivation> {
        Ok(match (t, goal) {
            (PureTerm::Var(v), SimpleTerm::Var(_)) => Some(SimpleDerivation::Var {
                trace: trace(),
                var: v.clone(),
            }),
            (PureTerm::Lam(n), SimpleTerm::Lam(tau)) => self.simple(n, tau)?.map(|body| {
                SimpleDerivation::Lam {
                    trace: trace(),
                    body: Box::new(body),
                }
            }),
            (PureTerm::App(n, p), SimpleTerm::App(tau, rho)) => {
                let Some(fun) = self.simple(n, tau)? else {
                    return Ok(None);
                };
                let Some(arg) = self.mashup(p, rho)? else {
                    return Ok(None);
                };
                Some(SimpleDerivation::App {
                    trace: trace(),
                    fun: Box::new(fun),
                    arg: Box::new(arg),
                })
            }
            _ => None,
        })
    }

    fn mashup(&mut self, m: &PureTerm, goal: &AlgebraicTerm) -> Search<MashupDerivation> {
        let mut parts = std::collections::BTreeMap::new();
        for (u, _) in goal.iter() {
            match self.simple(m, u)? {
                Some(d) => {
                    parts.insert(u.clone(), d);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(
            transform::support_join(m, goal, &parts).expect("one part per support element"),
        ))
    }
}

fn trace_to(
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
