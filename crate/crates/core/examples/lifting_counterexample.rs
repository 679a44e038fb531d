//! A single algebraic step whose pure choices afterwards are not all
//! β-reducts of pure choices before: `(λx.(x)x)(y + z)` reduces to a sum
//! containing `(y)z`, yet neither `(λx.(x)x)y` nor `(λx.(x)x)z` reaches it.

use alambda::conservativity::lifting_counterexample;
use alambda::Result;

pub fn run() -> Result<()> {
    let c = lifting_counterexample();
    print!("{}", c.report());
    assert!(c.witness_is_choice());
    assert_eq!(c.witness_reachable(), Some(false));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
