//! Real quadratic fields `Q(sqrt(d))`: discriminants, prime decomposition,
//! residue fields and the second generalized Bernoulli number.

use std::fmt;

use crate::arith::integer::{is_prime, is_squarefree, kronecker, sqrt_mod};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// `Q(sqrt(d))` with `d > 1` squarefree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: i64,
    disc: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Splitting::Split => "split",
            Splitting::Inert => "inert",
            Splitting::Ramified => "ramified",
        })
    }
}

/// Which of the two conjugate primes over a split rational prime is meant.
/// Non-split primes are their own conjugate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConjugateTag {
    First,
    Second,
    SelfConjugate,
}

/// A prime ideal of a real quadratic field, described by the rational prime
/// below it. Ideal generators are never needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadPrime {
    pub field: QuadField,
    pub p: u64,
    pub splitting: Splitting,
    pub tag: ConjugateTag,
}

impl QuadPrime {
    pub fn residue_degree(&self) -> u32 {
        match self.splitting {
            Splitting::Inert => 2,
            _ => 1,
        }
    }

    pub fn ramification_index(&self) -> u32 {
        match self.splitting {
            Splitting::Ramified => 2,
            _ => 1,
        }
    }

    pub fn norm(&self) -> u64 {
        self.p.pow(self.residue_degree())
    }

    /// The Galois conjugate prime.
    pub fn conjugate(&self) -> QuadPrime {
        let tag = match self.tag {
            ConjugateTag::First => ConjugateTag::Second,
            ConjugateTag::Second => ConjugateTag::First,
            ConjugateTag::SelfConjugate => ConjugateTag::SelfConjugate,
        };
        QuadPrime { tag, ..*self }
    }
}

impl fmt::Display for QuadPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag {
            ConjugateTag::First => write!(f, "p{}", self.p),
            ConjugateTag::Second => write!(f, "p{}'", self.p),
            ConjugateTag::SelfConjugate => write!(f, "q{}", self.p),
        }
    }
}

impl QuadField {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 1 || !is_squarefree(d as u64) {
            return Err(Error::NotSquarefree(d));
        }
        let disc = if d % 4 == 1 { d } else { 4 * d };
        Ok(QuadField { d, disc })
    }

    /// The field with fundamental discriminant `disc`.
    pub fn from_discriminant(disc: i64) -> Result<Self> {
        let d = if disc % 4 == 0 { disc / 4 } else { disc };
        let field =
            Self::new(d).map_err(|_| Error::InvalidArgument(format!("{disc} is not a fundamental discriminant")))?;
        if field.disc != disc {
            return Err(Error::InvalidArgument(format!("{disc} is not a fundamental discriminant")));
        }
        Ok(field)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Fundamental discriminant `D`.
    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    /// Quadratic character `chi_D(n) = (D | n)`.
    pub fn character(&self, n: i64) -> i32 {
        kronecker(self.disc, n)
    }

    /// Classifies `p` by `kronecker(D, p)`. A split prime is returned with the
    /// `First` tag; see [`QuadField::primes_above`] for both.
    pub fn splitting_type(&self, p: u64) -> Result<QuadPrime> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let (splitting, tag) = match self.character(p as i64) {
            1 => (Splitting::Split, ConjugateTag::First),
            -1 => (Splitting::Inert, ConjugateTag::SelfConjugate),
            _ => (Splitting::Ramified, ConjugateTag::SelfConjugate),
        };
        Ok(QuadPrime { field: *self, p, splitting, tag })
    }

    pub fn primes_above(&self, p: u64) -> Result<Vec<QuadPrime>> {
        let q = self.splitting_type(p)?;
        Ok(match q.splitting {
            Splitting::Split => vec![q, q.conjugate()],
            _ => vec![q],
        })
    }

    /// Checks a caller-supplied prime description against the field.
    pub fn validate_prime(&self, q: &QuadPrime) -> Result<()> {
        if q.field != *self {
            return Err(Error::InconsistentPrime(format!(
                "prime over {} belongs to Q(sqrt({})), not Q(sqrt({}))",
                q.p, q.field.d, self.d
            )));
        }
        let actual = self.splitting_type(q.p)?;
        if actual.splitting != q.splitting {
            return Err(Error::InconsistentPrime(format!(
                "{} is {} in Q(sqrt({})), not {}",
                q.p, actual.splitting, self.d, q.splitting
            )));
        }
        let tag_ok = match q.splitting {
            Splitting::Split => q.tag != ConjugateTag::SelfConjugate,
            _ => q.tag == ConjugateTag::SelfConjugate,
        };
        if !tag_ok {
            return Err(Error::InconsistentPrime(format!(
                "conjugate tag {:?} does not fit a {} prime",
                q.tag, q.splitting
            )));
        }
        Ok(())
    }

    /// `B_{2,chi}` as `D * sum_{a=1}^{D} chi(a) B_2(a/D)` with
    /// `B_2(x) = x^2 - x + 1/6`.
    pub fn bernoulli2_polynomial_sum(&self) -> Rational {
        let dd = self.disc;
        let sixth = Rational::new(1, 6);
        let sum: Rational = (1..=dd)
            .filter_map(|a| {
                let chi = self.character(a);
                (chi != 0).then(|| {
                    let x = Rational::new(a as i128, dd as i128);
                    Rational::from(chi) * (x * x - x + sixth)
                })
            })
            .sum();
        Rational::from(dd) * sum
    }

    /// `B_{2,chi}` as `(1/D) * sum_{a=1}^{D-1} chi(a) a^2` (valid for even characters).
    pub fn bernoulli2_square_sum(&self) -> Rational {
        let dd = self.disc;
        let sum: i128 = (1..dd).map(|a| self.character(a) as i128 * (a as i128) * (a as i128)).sum();
        Rational::new(sum, dd as i128)
    }

    /// The second generalized Bernoulli number of the field's character.
    pub fn bernoulli2(&self) -> Rational {
        let b = self.bernoulli2_square_sum();
        assert_eq!(b, self.bernoulli2_polynomial_sum(), "Bernoulli formulas disagree for D = {}", self.disc);
        b
    }

    /// The residue field `O_k / q` and the image of `sqrt(d)` (or of the
    /// integral generator `(1 + sqrt(d))/2` at `p = 2`).
    pub fn residue_image_sqrt_d(&self, q: &QuadPrime) -> Result<ResidueField> {
        self.validate_prime(q)?;
        let p = q.p;
        let d = self.d;
        let d_mod = d.rem_euclid(p as i64) as u64;
        Ok(match q.splitting {
            Splitting::Inert if p == 2 => {
                // D = 5 mod 8: O_k = Z[w], w^2 - w + (1 - d)/4 = 0 with (1 - d)/4 odd.
                ResidueField::Extension { p, generator: Generator::Omega, min_poly: [1, 1] }
            }
            Splitting::Inert => {
                ResidueField::Extension { p, generator: Generator::SqrtD, min_poly: [(p - d_mod) % p, 0] }
            }
            Splitting::Split if p == 2 => {
                // D = 1 mod 8: w^2 - w = (d - 1)/4 is even, so w maps to 0 or 1.
                let omega = match q.tag {
                    ConjugateTag::First => 0,
                    _ => 1,
                };
                ResidueField::Prime { p, generator: Generator::Omega, image: omega }
            }
            Splitting::Split => {
                let r = sqrt_mod(d_mod, p).expect("split prime has a square root of d");
                let r = r.min(p - r);
                let image = match q.tag {
                    ConjugateTag::First => r,
                    _ => (p - r) % p,
                };
                ResidueField::Prime { p, generator: Generator::SqrtD, image }
            }
            Splitting::Ramified => {
                // p | d gives 0; for p = 2 with d = 3 mod 4, sqrt(d) is a root of (x - 1)^2.
                ResidueField::Prime { p, generator: Generator::SqrtD, image: d_mod % p }
            }
        })
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

/// The element of `O_k` whose image describes the residue field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    SqrtD,
    /// `(1 + sqrt(d))/2`, used at `p = 2` when `d = 1 mod 4`.
    Omega,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueField {
    /// `F_p` with the image of the generator.
    Prime { p: u64, generator: Generator, image: u64 },
    /// `F_p[t]/(t^2 + min_poly[1] t + min_poly[0])`, `t` the image of the generator.
    Extension { p: u64, generator: Generator, min_poly: [u64; 2] },
}

impl ResidueField {
    pub fn order(&self) -> u64 {
        match *self {
            ResidueField::Prime { p, .. } => p,
            ResidueField::Extension { p, .. } => p * p,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        assert_eq!(QuadField::new(17).unwrap().discriminant(), 17);
        assert_eq!(QuadField::new(2).unwrap().discriminant(), 8);
        assert_eq!(QuadField::new(7).unwrap().discriminant(), 28);
        assert_eq!(QuadField::new(6).unwrap().discriminant(), 24);
        assert_eq!(QuadField::new(12), Err(Error::NotSquarefree(12)));
        assert_eq!(QuadField::new(1), Err(Error::NotSquarefree(1)));
        assert_eq!(QuadField::new(-5), Err(Error::NotSquarefree(-5)));
        assert_eq!(QuadField::from_discriminant(28).unwrap().d(), 7);
        assert!(QuadField::from_discriminant(7).is_err());
        assert!(QuadField::from_discriminant(12).unwrap().d() == 3);
    }

    #[test]
    fn splitting_examples() {
        let k33 = QuadField::new(33).unwrap();
        assert_eq!(k33.splitting_type(2).unwrap().splitting, Splitting::Split);
        assert_eq!(k33.splitting_type(11).unwrap().splitting, Splitting::Ramified);
        let k13 = QuadField::new(13).unwrap();
        assert_eq!(k13.splitting_type(3).unwrap().splitting, Splitting::Split);
        let k17 = QuadField::new(17).unwrap();
        assert_eq!(k17.splitting_type(17).unwrap().splitting, Splitting::Ramified);
        assert_eq!(k17.splitting_type(3).unwrap().splitting, Splitting::Inert);
        assert_eq!(k17.splitting_type(4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn bernoulli_examples() {
        let b = |d| QuadField::new(d).unwrap().bernoulli2();
        assert_eq!(b(17), Rational::from(8));
        assert_eq!(b(5), Rational::new(4, 5));
        assert_eq!(b(33), Rational::from(24));
        assert_eq!(b(2), Rational::from(2));
        assert_eq!(b(6), Rational::from(12));
    }

    #[test]
    fn bernoulli_formulas_agree_up_to_400() {
        for d in 2..=400 {
            if let Ok(k) = QuadField::new(d) {
                if k.discriminant() <= 400 {
                    let b = k.bernoulli2_square_sum();
                    assert_eq!(b, k.bernoulli2_polynomial_sum(), "D = {}", k.discriminant());
                    assert!(b.is_positive(), "D = {}", k.discriminant());
                }
            }
        }
    }

    #[test]
    fn splitting_matches_brute_force_squares() {
        // Oracle: p odd, p not dividing d, splits iff d is a square mod p.
        for d in (2..100).filter(|&d| is_squarefree(d)) {
            let k = QuadField::new(d as i64).unwrap();
            for p in crate::arith::integer::primes_up_to(499) {
                let q = k.splitting_type(p).unwrap();
                if p == 2 || d % p == 0 {
                    continue;
                }
                let square = (1..p).any(|x| x * x % p == d % p);
                assert_eq!(q.splitting == Splitting::Split, square, "d = {d}, p = {p}");
                assert_eq!(q.splitting == Splitting::Inert, !square);
            }
        }
    }

    #[test]
    fn conjugate_tags() {
        let k = QuadField::new(33).unwrap();
        let above2 = k.primes_above(2).unwrap();
        assert_eq!(above2.len(), 2);
        assert_eq!(above2[0].tag, ConjugateTag::First);
        assert_eq!(above2[1].tag, ConjugateTag::Second);
        assert_eq!(above2[0].conjugate(), above2[1]);
        let above11 = k.primes_above(11).unwrap();
        assert_eq!(above11.len(), 1);
        assert_eq!(above11[0].tag, ConjugateTag::SelfConjugate);
        assert_eq!(above11[0].conjugate(), above11[0]);
    }

    #[test]
    fn residue_fields() {
        let k33 = QuadField::new(33).unwrap();
        let q11 = k33.splitting_type(11).unwrap();
        assert_eq!(
            k33.residue_image_sqrt_d(&q11).unwrap(),
            ResidueField::Prime { p: 11, generator: Generator::SqrtD, image: 0 }
        );
        let k17 = QuadField::new(17).unwrap();
        let p2 = k17.splitting_type(2).unwrap();
        assert_eq!(k17.residue_image_sqrt_d(&p2).unwrap().order(), 2);

        // 3 is split in Q(sqrt(10)); an inert claim is inconsistent.
        let k10 = QuadField::new(10).unwrap();
        let bogus = QuadPrime { field: k10, p: 3, splitting: Splitting::Inert, tag: ConjugateTag::SelfConjugate };
        assert!(matches!(k10.residue_image_sqrt_d(&bogus), Err(Error::InconsistentPrime(_))));

        let k2 = QuadField::new(2).unwrap();
        let q3 = k2.splitting_type(3).unwrap();
        assert_eq!(
            k2.residue_image_sqrt_d(&q3).unwrap(),
            ResidueField::Extension { p: 3, generator: Generator::SqrtD, min_poly: [1, 0] }
        );

        let k7 = QuadField::new(7).unwrap();
        let p3 = k7.splitting_type(3).unwrap();
        match k7.residue_image_sqrt_d(&p3).unwrap() {
            ResidueField::Prime { image, .. } => assert_eq!(image * image % 3, 1),
            other => panic!("unexpected {other:?}"),
        }
        assert_ne!(k7.residue_image_sqrt_d(&p3).unwrap(), k7.residue_image_sqrt_d(&p3.conjugate()).unwrap());
    }
}
