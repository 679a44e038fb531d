//! One-step reduction `~→` on algebraic terms: enumerating steps under the
//! different split policies, following the leftmost strategy, and parallel
//! reduction.

use alambda::reduction::{alg_reducts, leftmost_step, parallel_reduce, AlgTrace, SplitPolicy};
use alambda::semiring::SemiringId;
use alambda::{canonicalize, parse, Result};

pub fn run() -> Result<()> {
    let s = SemiringId::Nat;
    let sigma = canonicalize(&parse("2.(λx.(x)x)y + (λx.x)z", s)?, s)?;
    println!("σ = {sigma}");
    for policy in [SplitPolicy::Full, SplitPolicy::unit()] {
        println!("one-step reducts, {policy} splits:");
        for r in alg_reducts(&sigma, policy) {
            println!("  ~> {}   (split {} of {})", r.result, r.step.split, r.step.selected);
        }
    }

    let mut trace = AlgTrace::empty(sigma.clone());
    while let Some(step) = leftmost_step(trace.end()) {
        trace.push(step);
    }
    trace.validate()?;
    println!("leftmost reduction to normal form:\n{trace}");

    println!("parallel: {sigma} => {}", parallel_reduce(&sigma));
    assert_eq!(&parallel_reduce(&sigma), trace.end());

    // Over the non-negative rationals a summand can be split in half.
    let q = SemiringId::NonnegRat;
    let tau = canonicalize(&parse("(λx.x)y", q)?, q)?;
    for r in alg_reducts(&tau, SplitPolicy::Half) {
        println!("rat+: {tau} ~> {}", r.result);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
