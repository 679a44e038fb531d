//! Probing semirings for the positivity condition: `a + b = 0` only when
//! `a = b = 0`.

use alambda::semiring::{positivity_probe, Coefficient, PositivityVerdict, SemiringId};
use alambda::Result;

pub fn run() -> Result<()> {
    for s in [SemiringId::Nat, SemiringId::NonnegRat, SemiringId::Bool, SemiringId::Int] {
        let small: Vec<Coefficient> = ["0", "1", "-1", "2", "-2", "1/2", "T", "F"]
            .iter()
            .filter_map(|t| Coefficient::parse(t, s).ok())
            .collect();
        let pairs: Vec<_> = small
            .iter()
            .flat_map(|a| small.iter().map(move |b| (a.clone(), b.clone())))
            .collect();
        match positivity_probe(s, &pairs)? {
            PositivityVerdict::Positive => println!("{s}: positive on {} pairs", pairs.len()),
            PositivityVerdict::CounterexamplePair(a, b) => println!("{s}: {a} + {b} = 0"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
