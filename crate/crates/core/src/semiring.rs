//! Exact coefficient arithmetic for the four supported semirings.
//!
//! `Nat`, `NonnegRat` and `Bool` are positive (`a + b = 0` forces
//! `a = b = 0`). `Int` is not, and is only admitted for module-level
//! arithmetic: every reduction-theoretic operation in this crate refuses it.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SemiringId {
    #[serde(rename = "nat")]
    Nat,
    #[serde(rename = "rat+")]
    NonnegRat,
    #[serde(rename = "bool")]
    Bool,
    #[serde(rename = "int")]
    Int,
}

impl SemiringId {
    pub const ALL: [SemiringId; 4] = [
        SemiringId::Nat,
        SemiringId::NonnegRat,
        SemiringId::Bool,
        SemiringId::Int,
    ];

    /// Positivity is metadata here; `positivity_probe` is how the test suite
    /// keeps it honest.
    pub fn is_positive(self) -> bool {
        !matches!(self, SemiringId::Int)
    }

    pub fn name(self) -> &'static str {
        match self {
            SemiringId::Nat => "nat",
            SemiringId::NonnegRat => "rat+",
            SemiringId::Bool => "bool",
            SemiringId::Int => "int",
        }
    }

    pub fn require_positive(self) -> Result<()> {
        if self.is_positive() {
            Ok(())
        } else {
            Err(Error::PositivityRequired(self))
        }
    }
}

impl fmt::Display for SemiringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemiringId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nat" => Ok(SemiringId::Nat),
            "rat+" | "rat" => Ok(SemiringId::NonnegRat),
            "bool" => Ok(SemiringId::Bool),
            "int" => Ok(SemiringId::Int),
            other => Err(Error::usage(format!("unknown semiring `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Value {
    Nat(BigUint),
    Rat(BigRational),
    Bool(bool),
    Int(BigInt),
}

/// An element of one of the supported semirings.
///
/// Values are kept normalized (fractions in lowest terms with a positive
/// denominator), so derived equality is semiring equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coefficient(Value);

impl Coefficient {
    pub fn zero(s: SemiringId) -> Self {
        Coefficient(match s {
            SemiringId::Nat => Value::Nat(BigUint::zero()),
            SemiringId::NonnegRat => Value::Rat(BigRational::zero()),
            SemiringId::Bool => Value::Bool(false),
            SemiringId::Int => Value::Int(BigInt::zero()),
        })
    }

    pub fn one(s: SemiringId) -> Self {
        Coefficient(match s {
            SemiringId::Nat => Value::Nat(BigUint::one()),
            SemiringId::NonnegRat => Value::Rat(BigRational::one()),
            SemiringId::Bool => Value::Bool(true),
            SemiringId::Int => Value::Int(BigInt::one()),
        })
    }

    pub fn nat(n: impl Into<BigUint>) -> Self {
        Coefficient(Value::Nat(n.into()))
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Coefficient(Value::Int(n.into()))
    }

    pub fn boolean(b: bool) -> Self {
        Coefficient(Value::Bool(b))
    }

    pub fn rat(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let (numer, denom) = (numer.into(), denom.into());
        if denom.is_zero() {
            return Err(Error::usage("zero denominator"));
        }
        Self::from_ratio(BigRational::new(numer, denom))
    }

    fn from_ratio(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidCoefficient {
                literal: r.to_string(),
                semiring: SemiringId::NonnegRat,
            });
        }
        Ok(Coefficient(Value::Rat(r)))
    }

    /// Embeds a small natural number into any semiring (`n · 1`).
    pub fn from_u64(n: u64, s: SemiringId) -> Self {
        Coefficient(match s {
            SemiringId::Nat => Value::Nat(BigUint::from(n)),
            SemiringId::NonnegRat => Value::Rat(BigRational::from_integer(BigInt::from(n))),
            SemiringId::Bool => Value::Bool(n != 0),
            SemiringId::Int => Value::Int(BigInt::from(n)),
        })
    }

    pub fn semiring(&self) -> SemiringId {
        match self.0 {
            Value::Nat(_) => SemiringId::Nat,
            Value::Rat(_) => SemiringId::NonnegRat,
            Value::Bool(_) => SemiringId::Bool,
            Value::Int(_) => SemiringId::Int,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Value::Nat(n) => n.is_zero(),
            Value::Rat(r) => r.is_zero(),
            Value::Bool(b) => !b,
            Value::Int(i) => i.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Coefficient::one(self.semiring())
    }

    pub fn add(&self, other: &Coefficient) -> Result<Coefficient> {
        Ok(Coefficient(match (&self.0, &other.0) {
            (Value::Nat(a), Value::Nat(b)) => Value::Nat(a + b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a || *b),
            (Value::Int(a), Value::Int(b)) => Value::Int(a + b),
            _ => return Err(Error::MixedSemirings(self.semiring(), other.semiring())),
        }))
    }

    pub fn mul(&self, other: &Coefficient) -> Result<Coefficient> {
        Ok(Coefficient(match (&self.0, &other.0) {
            (Value::Nat(a), Value::Nat(b)) => Value::Nat(a * b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (Value::Bool(a), Value::Bool(b)) => Value::Bool(*a && *b),
            (Value::Int(a), Value::Int(b)) => Value::Int(a * b),
            _ => return Err(Error::MixedSemirings(self.semiring(), other.semiring())),
        }))
    }

    /// Additive inverse, only defined in `Int`.
    pub fn neg(&self) -> Option<Coefficient> {
        match &self.0 {
            Value::Int(i) => Some(Coefficient(Value::Int(-i))),
            _ if self.is_zero() => Some(self.clone()),
            _ => None,
        }
    }

    /// `Some(self - other)` when a `d` with `other + d = self` exists and is
    /// unique in the ordered semirings; `None` otherwise.
    pub fn checked_sub(&self, other: &Coefficient) -> Option<Coefficient> {
        match (&self.0, &other.0) {
            (Value::Nat(a), Value::Nat(b)) if a >= b => Some(Coefficient(Value::Nat(a - b))),
            (Value::Rat(a), Value::Rat(b)) if a >= b => Some(Coefficient(Value::Rat(a - b))),
            (Value::Int(a), Value::Int(b)) => Some(Coefficient(Value::Int(a - b))),
            _ => None,
        }
    }

    /// Half of a rational coefficient.
    pub fn half(&self) -> Option<Coefficient> {
        match &self.0 {
            Value::Rat(r) => Some(Coefficient(Value::Rat(
                r / BigRational::from_integer(BigInt::from(2)),
            ))),
            _ => None,
        }
    }

    /// The value as a machine integer, for `Nat` coefficients that fit.
    pub fn as_u64(&self) -> Option<u64> {
        match &self.0 {
            Value::Nat(n) => u64::try_from(n).ok(),
            _ => None,
        }
    }

    /// Parses a coefficient literal: `-?[0-9]+` (minus only in `int`),
    /// `[0-9]+/[1-9][0-9]*` (only in `rat+`), `T`/`F` (only in `bool`).
    pub fn parse(text: &str, s: SemiringId) -> Result<Coefficient> {
        let bad = || Error::InvalidCoefficient {
            literal: text.to_string(),
            semiring: s,
        };
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        match s {
            SemiringId::Bool => match text {
                "T" => Ok(Coefficient::boolean(true)),
                "F" => Ok(Coefficient::boolean(false)),
                _ => Err(bad()),
            },
            SemiringId::Nat => {
                if !digits(text) {
                    return Err(bad());
                }
                Ok(Coefficient::nat(text.parse::<BigUint>().map_err(|_| bad())?))
            }
            SemiringId::Int => {
                let body = text.strip_prefix('-').unwrap_or(text);
                if !digits(body) {
                    return Err(bad());
                }
                Ok(Coefficient::int(text.parse::<BigInt>().map_err(|_| bad())?))
            }
            SemiringId::NonnegRat => {
                let (num, den) = match text.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (text, None),
                };
                if !digits(num) {
                    return Err(bad());
                }
                let numer: BigInt = num.parse().map_err(|_| bad())?;
                let denom: BigInt = match den {
                    Some(d) if digits(d) && !d.starts_with('0') => d.parse().map_err(|_| bad())?,
                    Some(_) => return Err(bad()),
                    None => BigInt::one(),
                };
                Coefficient::rat(numer, denom)
            }
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Rat(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Value::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Bool(b) => f.write_str(if *b { "T" } else { "F" }),
            Value::Int(i) => write!(f, "{i}"),
        }
    }
}

// Serialized as `"<semiring>:<literal>"`, e.g. `"rat+:1/2"`.
impl Serialize for Coefficient {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{}:{}", self.semiring(), self))
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        let (s, lit) = text
            .split_once(':')
            .ok_or_else(|| serde::de::Error::custom(format!("malformed coefficient `{text}`")))?;
        let s: SemiringId = s.parse().map_err(serde::de::Error::custom)?;
        Coefficient::parse(lit, s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PositivityVerdict {
    Positive,
    CounterexamplePair(Coefficient, Coefficient),
}

/// Searches `samples` for a pair `(a, b) ≠ (0, 0)` with `a + b = 0`.
pub fn positivity_probe(
    s: SemiringId,
    samples: &[(Coefficient, Coefficient)],
) -> Result<PositivityVerdict> {
    let zero = Coefficient::zero(s);
    for (a, b) in samples {
        for c in [a, b] {
            if c.semiring() != s {
                return Err(Error::MixedSemirings(s, c.semiring()));
            }
        }
        if a.add(b)? == zero && !(a.is_zero() && b.is_zero()) {
            return Ok(PositivityVerdict::CounterexamplePair(a.clone(), b.clone()));
        }
    }
    Ok(PositivityVerdict::Positive)
}
