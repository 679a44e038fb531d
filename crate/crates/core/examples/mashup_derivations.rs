//! Searching for, rendering, serializing and checking mashup derivations
//! `M ⊩ σ`, which relate a pure term to the algebraic terms it can be
//! pasted together from.

use alambda::mashup::{self, check, render, Derivation, MashupDerivation, Proof};
use alambda::semiring::SemiringId;
use alambda::{canonicalize, parse, parse_pure, Result};

pub fn run() -> Result<()> {
    let s = SemiringId::Nat;
    let m = parse_pure("(λx.(x)x)((λa.a)y)")?;
    let goal = canonicalize(&parse("2.(y)y + ((λa.a)y)y", s)?, s)?;

    // Each summand of the goal is a different β-reduct of `m`; the
    // derivation pastes the paths together.
    let proof = mashup::prove(&m, &goal, 1000);
    let d = Derivation::from(proof.derivation().expect("provable"));
    println!("{}", render(&d));
    println!("checker: {}", check(&d).into_result()?);

    // Derivations are plain data: they survive a JSON round trip and the
    // checker catches tampering.
    let json = serde_json::to_string(&d).expect("serializable");
    let back: Derivation = serde_json::from_str(&json).expect("deserializable");
    assert_eq!(back, d);
    let forged = json.replacen(r#""free":"y""#, r#""free":"w""#, 1);
    let forged: Derivation = serde_json::from_str(&forged).expect("deserializable");
    println!("forged copy: valid = {}", check(&forged).is_valid());
    assert!(!check(&forged).is_valid());

    // A term outside the β-reduction graph of `m` is refuted outright.
    let unreachable = canonicalize(&parse("(y)z", s)?, s)?;
    let refuted = matches!(mashup::prove(&m, &unreachable, 1000), Proof::Refuted);
    println!("{m} ⊩ {unreachable} refuted: {refuted}");
    assert!(refuted);

    let refl: MashupDerivation = mashup::refl(&m, s);
    println!("reflexivity: {}", mashup::check_mashup_derivation(&refl).into_result()?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
