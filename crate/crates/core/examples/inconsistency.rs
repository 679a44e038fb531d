//! Why coefficients must be positive: with a fixpoint term `∞σ` that
//! reduces to `σ + ∞σ`, negative coefficients let `0` and `σ` reach a
//! common term.

use alambda::conservativity::inconsistency;
use alambda::Result;

pub fn run() -> Result<()> {
    for sigma in ["y", "λa.a"] {
        let inc = inconsistency(sigma)?;
        inc.verify()?;
        print!("{}", inc.report());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
