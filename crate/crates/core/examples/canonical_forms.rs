//! Parsing terms and computing canonical forms over different semirings.
//!
//! Abstraction and application are linear in the function position, so
//! `λx.(M + N)` and `(M + N)P` both spread over the sum, while an argument
//! `(M)(N + P)` is kept as a sum.

use alambda::semiring::SemiringId;
use alambda::{canonicalize, parse, Result};

pub fn run() -> Result<()> {
    let examples = [
        ("λx.0", SemiringId::Nat),
        ("λx.(x + 2.y)", SemiringId::Nat),
        ("(3.f + g)a", SemiringId::Nat),
        ("(f)(a + b) + (f)(b + a)", SemiringId::Nat),
        ("1/2.x + 1/3.x", SemiringId::NonnegRat),
        ("x + x", SemiringId::Bool),
        ("x + -1.x", SemiringId::Int),
    ];
    for (text, s) in examples {
        let raw = parse(text, s)?;
        let sigma = canonicalize(&raw, s)?;
        println!("{s:>5}  {text:<26} = {sigma}");
        println!("       support {:?}", sigma.support().iter().map(ToString::to_string).collect::<Vec<_>>());
    }

    // The pure choices of a term resolve every sum, including those in
    // argument position.
    let sigma = canonicalize(&parse("(λx.(x)x)(y + z)", SemiringId::Nat)?, SemiringId::Nat)?;
    let choices: Vec<String> = sigma.lambda_support().iter().map(ToString::to_string).collect();
    println!("Λ({sigma}) = {{{}}}", choices.join(", "));
    assert_eq!(choices.len(), 2);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
