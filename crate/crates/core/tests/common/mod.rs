//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use alambda::algebra::{canonicalize, AlgebraicTerm};
use alambda::mashup::{self, MashupDerivation};
use alambda::reduction::{alg_reducts, beta_reducts, AlgTrace, BetaTrace, SplitPolicy};
use alambda::semiring::{Coefficient, SemiringId};
use alambda::syntax::{PureTerm, RawTerm, Var};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FREE: [&str; 3] = ["x", "y", "z"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn var(rng: &mut ChaCha8Rng, depth: usize) -> Var {
    let k = rng.gen_range(0..FREE.len() + depth);
    if k < depth {
        Var::Bound(k)
    } else {
        Var::free(FREE[k - depth])
    }
}

/// A pure term with exactly `size` nodes, biased towards β-redexes.
pub fn pure_of_size(rng: &mut ChaCha8Rng, size: usize, depth: usize) -> PureTerm {
    match size {
        0 | 1 => PureTerm::Var(var(rng, depth)),
        2 => PureTerm::lam(pure_of_size(rng, 1, depth + 1)),
        _ if rng.gen_bool(0.3) => PureTerm::lam(pure_of_size(rng, size - 1, depth + 1)),
        _ => {
            let left = rng.gen_range(1..size - 1);
            let fun = if left >= 2 && rng.gen_bool(0.5) {
                PureTerm::lam(pure_of_size(rng, left - 1, depth + 1))
            } else {
                pure_of_size(rng, left, depth)
            };
            PureTerm::app(fun, pure_of_size(rng, size - 1 - left, depth))
        }
    }
}

/// A closed-over-`FREE` pure term of size at most `max`.
pub fn pure(rng: &mut ChaCha8Rng, max: usize) -> PureTerm {
    let size = rng.gen_range(1..=max);
    pure_of_size(rng, size, 0)
}

pub fn coefficient(rng: &mut ChaCha8Rng, s: SemiringId) -> Coefficient {
    match s {
        SemiringId::Nat => Coefficient::nat(rng.gen_range(0u32..4)),
        SemiringId::NonnegRat => {
            Coefficient::rat(rng.gen_range(0i64..5), rng.gen_range(1i64..4)).expect("non-negative")
        }
        SemiringId::Bool => Coefficient::boolean(rng.gen_bool(0.6)),
        SemiringId::Int => Coefficient::int(rng.gen_range(-3i64..4)),
    }
}

pub fn nonzero_coefficient(rng: &mut ChaCha8Rng, s: SemiringId) -> Coefficient {
    loop {
        let c = coefficient(rng, s);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A raw term with at most `size` nodes, using every constructor.
pub fn raw(rng: &mut ChaCha8Rng, size: usize, depth: usize, s: SemiringId) -> RawTerm {
    if size <= 1 {
        return if rng.gen_bool(0.15) {
            RawTerm::Zero
        } else {
            RawTerm::Var(var(rng, depth))
        };
    }
    match rng.gen_range(0..4) {
        0 => RawTerm::lam(raw(rng, size - 1, depth + 1, s)),
        1 => RawTerm::scale(coefficient(rng, s), raw(rng, size - 1, depth, s)),
        k => {
            let left = rng.gen_range(1..size);
            let l = raw(rng, left, depth, s);
            let r = raw(rng, size - left, depth, s);
            if k == 2 {
                RawTerm::app(l, r)
            } else {
                RawTerm::sum(l, r)
            }
        }
    }
}

/// Positions of every subterm, with the number of enclosing binders.
pub fn positions(t: &RawTerm) -> Vec<(Vec<usize>, usize)> {
    fn go(t: &RawTerm, path: &mut Vec<usize>, depth: usize, out: &mut Vec<(Vec<usize>, usize)>) {
        out.push((path.clone(), depth));
        let children: Vec<(&RawTerm, usize)> = match t {
            RawTerm::Var(_) | RawTerm::Zero => vec![],
            RawTerm::Lam(b) => vec![(b, depth + 1)],
            RawTerm::Scale(_, b) => vec![(b, depth)],
            RawTerm::App(l, r) | RawTerm::Sum(l, r) => vec![(l, depth), (r, depth)],
        };
        for (i, (c, d)) in children.into_iter().enumerate() {
            path.push(i);
            go(c, path, d, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), 0, &mut out);
    out
}

pub fn replace(t: &RawTerm, path: &[usize], new: &RawTerm) -> RawTerm {
    let Some((&i, rest)) = path.split_first() else {
        return new.clone();
    };
    match (t, i) {
        (RawTerm::Lam(b), 0) => RawTerm::lam(replace(b, rest, new)),
        (RawTerm::Scale(c, b), 0) => RawTerm::scale(c.clone(), replace(b, rest, new)),
        (RawTerm::App(l, r), 0) => RawTerm::app(replace(l, rest, new), (**r).clone()),
        (RawTerm::App(l, r), 1) => RawTerm::app((**l).clone(), replace(r, rest, new)),
        (RawTerm::Sum(l, r), 0) => RawTerm::sum(replace(l, rest, new), (**r).clone()),
        (RawTerm::Sum(l, r), 1) => RawTerm::sum((**l).clone(), replace(r, rest, new)),
        _ => panic!("position does not exist"),
    }
}

/// A canonical algebraic term from a raw term of size at most `size`.
pub fn algebraic(rng: &mut ChaCha8Rng, size: usize, s: SemiringId) -> AlgebraicTerm {
    let t = raw_with_redexes(rng, size, 0, s);
    canonicalize(&t, s).expect("generated in one semiring")
}

/// Like [`raw`], but application heads are abstractions half of the time.
pub fn raw_with_redexes(rng: &mut ChaCha8Rng, size: usize, depth: usize, s: SemiringId) -> RawTerm {
    if size <= 1 {
        return RawTerm::Var(var(rng, depth));
    }
    match rng.gen_range(0..5) {
        0 => RawTerm::lam(raw_with_redexes(rng, size - 1, depth + 1, s)),
        1 => RawTerm::scale(nonzero_coefficient(rng, s), raw_with_redexes(rng, size - 1, depth, s)),
        2 => {
            let left = rng.gen_range(1..size);
            RawTerm::sum(
                raw_with_redexes(rng, left, depth, s),
                raw_with_redexes(rng, size - left, depth, s),
            )
        }
        _ => {
            let left = rng.gen_range(1..size);
            let fun = if left >= 2 && rng.gen_bool(0.6) {
                RawTerm::lam(raw_with_redexes(rng, left - 1, depth + 1, s))
            } else {
                raw_with_redexes(rng, left, depth, s)
            };
            RawTerm::app(fun, raw_with_redexes(rng, size - left, depth, s))
        }
    }
}

/// Up to `steps` random `~→` steps from `start`.
pub fn alg_walk(rng: &mut ChaCha8Rng, start: AlgebraicTerm, steps: usize, policy: SplitPolicy) -> AlgTrace {
    let mut t = AlgTrace::empty(start);
    for _ in 0..steps {
        let mut options = alg_reducts(t.end(), policy);
        if options.is_empty() {
            break;
        }
        let i = rng.gen_range(0..options.len());
        t.push(options.swap_remove(i));
    }
    t
}

/// Up to `steps` random β-steps from `m`.
pub fn beta_walk(rng: &mut ChaCha8Rng, m: &PureTerm, steps: usize) -> BetaTrace {
    let mut t = BetaTrace::empty(m.clone());
    for _ in 0..steps {
        let options = beta_reducts(t.end());
        let Some((pos, _)) = options.choose(rng) else { break };
        t.push(pos.clone()).expect("enumerated redex");
    }
    t
}

/// `m ⊩ σ` for a random `σ` with `embed(m) ~→* σ`.
pub fn derivation(
    rng: &mut ChaCha8Rng,
    m: &PureTerm,
    steps: usize,
    s: SemiringId,
    policy: SplitPolicy,
) -> MashupDerivation {
    let walk = alg_walk(rng, AlgebraicTerm::embed(m, s), steps, policy);
    let mut d = mashup::refl(m, s);
    for st in &walk.steps {
        d = mashup::step_derivation(&d, &st.step).expect("valid step on a valid derivation");
    }
    d
}

/// Every pure term with at most `max` nodes whose free variables are in
/// `FREE`.
pub fn all_pure_terms(max: usize) -> Vec<PureTerm> {
    fn of_size(size: usize, depth: usize, memo: &mut std::collections::HashMap<(usize, usize), Vec<PureTerm>>) -> Vec<PureTerm> {
        if let Some(v) = memo.get(&(size, depth)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            out.extend((0..depth).map(PureTerm::bound));
            out.extend(FREE.iter().map(|n| PureTerm::var(*n)));
        } else {
            out.extend(of_size(size - 1, depth + 1, memo).into_iter().map(PureTerm::lam));
            for left in 1..size - 1 {
                let fs = of_size(left, depth, memo);
                let args = of_size(size - 1 - left, depth, memo);
                for f in &fs {
                    for a in &args {
                        out.push(PureTerm::app(f.clone(), a.clone()));
                    }
                }
            }
        }
        memo.insert((size, depth), out.clone());
        out
    }
    let mut memo = std::collections::HashMap::new();
    (1..=max).flat_map(|n| of_size(n, 0, &mut memo)).collect()
}
