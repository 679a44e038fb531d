//! Over the non-negative rationals a pure term can reduce to something
//! that is not pure: split `(λx.x)y` in half and reduce only one half.

use alambda::conservativity::split_witness;
use alambda::Result;

pub fn run() -> Result<()> {
    let w = split_witness();
    print!("{}", w.report());
    assert!(w.start.as_pure().is_some());
    assert!(w.result.as_pure().is_none());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
