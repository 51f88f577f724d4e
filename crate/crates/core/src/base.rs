//! Totally real base fields of quaternion algebras and their primes.

use std::fmt;

use crate::quadratic::{QuadField, QuadPrime};
use crate::quartic::{QuarticField, QuarticPrime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseField {
    Rational,
    Quadratic(QuadField),
    /// A totally real quartic field with a declared real quadratic subfield.
    Quartic(QuarticField),
}

impl BaseField {
    pub fn degree(&self) -> u32 {
        match self {
            BaseField::Rational => 1,
            BaseField::Quadratic(_) => 2,
            BaseField::Quartic(_) => 4,
        }
    }

    /// Absolute discriminant.
    pub fn discriminant(&self) -> i128 {
        match self {
            BaseField::Rational => 1,
            BaseField::Quadratic(k) => k.discriminant() as i128,
            BaseField::Quartic(k) => k.discriminant(),
        }
    }

    /// The quadratic field `Q(sqrt(d))` that the base is, or contains as its
    /// declared subfield.
    pub fn quadratic_part(&self) -> Option<QuadField> {
        match self {
            BaseField::Rational => None,
            BaseField::Quadratic(k) => Some(*k),
            BaseField::Quartic(k) => Some(k.subfield()),
        }
    }

    /// Whether `sqrt(d)` is known to lie in the field.
    pub fn contains_sqrt(&self, d: i64) -> bool {
        self.quadratic_part().is_some_and(|k| k.d() == d)
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rational => f.write_str("Q"),
            BaseField::Quadratic(k) => write!(f, "{k}"),
            BaseField::Quartic(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasePrime {
    Rational(u64),
    Quadratic(QuadPrime),
    Quartic(QuarticPrime),
}

impl BasePrime {
    /// The rational prime below.
    pub fn p(&self) -> u64 {
        match self {
            BasePrime::Rational(p) => *p,
            BasePrime::Quadratic(q) => q.p,
            BasePrime::Quartic(q) => q.p,
        }
    }

    pub fn residue_degree(&self) -> u32 {
        match self {
            BasePrime::Rational(_) => 1,
            BasePrime::Quadratic(q) => q.residue_degree(),
            BasePrime::Quartic(q) => q.f,
        }
    }

    pub fn ramification_index(&self) -> u32 {
        match self {
            BasePrime::Rational(_) => 1,
            BasePrime::Quadratic(q) => q.ramification_index(),
            BasePrime::Quartic(q) => q.e,
        }
    }

    pub fn norm(&self) -> u64 {
        self.p().pow(self.residue_degree())
    }
}

impl fmt::Display for BasePrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePrime::Rational(p) => write!(f, "{p}"),
            BasePrime::Quadratic(q) => write!(f, "{q}"),
            BasePrime::Quartic(q) => write!(f, "{q}"),
        }
    }
}

impl From<QuadPrime> for BasePrime {
    fn from(q: QuadPrime) -> Self {
        BasePrime::Quadratic(q)
    }
}

impl From<QuarticPrime> for BasePrime {
    fn from(q: QuarticPrime) -> Self {
        BasePrime::Quartic(q)
    }
}
