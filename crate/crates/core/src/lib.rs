//! An executable algebraic λ-calculus: terms with coefficients in a
//! semiring, their reduction relations, and the translation of algebraic
//! reductions back into ordinary β-reductions.

pub mod algebra;
pub mod cli;
pub mod conservativity;
pub mod error;
pub mod mashup;
pub mod reduction;
pub mod semiring;
pub mod syntax;

pub use algebra::{canonicalize, AlgebraicTerm, SimpleTerm};
pub use error::{Error, Result};
pub use semiring::{Coefficient, SemiringId};
pub use syntax::{parse, parse_pure, PureTerm, RawTerm, Var};
