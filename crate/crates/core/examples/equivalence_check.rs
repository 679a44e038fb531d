//! Showing two pure terms convertible: find a common algebraic reduct,
//! then convert both algebraic reductions into β-reductions.

use alambda::conservativity::{equiv_check, Equivalence};
use alambda::reduction::SplitPolicy;
use alambda::semiring::SemiringId;
use alambda::{parse_pure, Result};

pub fn run() -> Result<()> {
    let pairs = [("(λx.(x)x)z", "(λy.(z)y)z"), ("(λx.λy.x)a b", "a"), ("x", "y")];
    for (l, r) in pairs {
        let (m, n) = (parse_pure(l)?, parse_pure(r)?);
        match equiv_check(&m, &n, SemiringId::Nat, 2000, SplitPolicy::Full)? {
            Equivalence::Equivalent(e) => {
                println!("{m} = {n}: common β-reduct {} after {} parallel steps", e.reduct, e.k);
                println!("  {}", e.left.beta);
                println!("  {}", e.right.beta);
            }
            Equivalence::NotJoinable => println!("{m} ≠ {n}: reduction graphs exhausted"),
            Equivalence::Unknown { stage } => println!("{m} ? {n}: budget ran out at {stage}"),
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
