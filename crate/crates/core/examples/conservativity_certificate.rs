//! Turning an algebraic reduction between pure terms into an ordinary
//! β-reduction, with every intermediate derivation kept as evidence.

use alambda::conservativity::conserve;
use alambda::reduction::{alg_reducts, AlgTrace, SplitPolicy};
use alambda::semiring::SemiringId;
use alambda::{parse_pure, AlgebraicTerm, Result};

pub fn run() -> Result<()> {
    let s = SemiringId::Nat;
    let m = parse_pure("(λx.(x)x)((λa.a)y)")?;

    // Always take the step with the smallest result. That reduces the
    // argument once before copying it, so the β-trace has to reduce
    // both copies separately.
    let mut trace = AlgTrace::empty(AlgebraicTerm::embed(&m, s));
    while trace.end().as_pure() != parse_pure("(y)y").ok() {
        let next = alg_reducts(trace.end(), SplitPolicy::unit())
            .into_iter()
            .min_by_key(|r| r.result.size())
            .expect("not yet normal");
        trace.push(next);
    }
    println!("algebraic trace:\n{trace}");

    let cert = conserve(&trace)?;
    cert.verify()?;
    for (i, d) in cert.derivations.iter().enumerate() {
        println!("state {i}: {}", alambda::mashup::check_mashup_derivation(d).into_result()?);
    }
    println!("β-trace: {}", cert.beta);
    assert_eq!(cert.beta.replay()?, cert.target);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
