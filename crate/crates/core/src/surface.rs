//! Chern invariants of smooth Shimura surfaces `X`, of the quotient
//! `Z = X/sigma` by an involution of the second kind, and of the fixed curve.

use std::fmt;

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Invariants of `X` determined by its Euler number `e`:
/// `c1^2 = 2 c2 = 8 (1 + p_g)`, `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub e: i64,
    pub c1sq: i64,
    pub chi: i64,
    pub pg: i64,
    pub q: i64,
}

pub fn shimura_surface_invariants(e: i64) -> Result<SurfaceInvariants> {
    if e <= 0 || e % 4 != 0 {
        return Err(Error::Geometry(format!("Euler number {e} must be a positive multiple of 4")));
    }
    Ok(SurfaceInvariants { e, c1sq: 2 * e, chi: e / 4, pg: e / 4 - 1, q: 0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneralType {
    Yes,
    No,
    /// `K^2 > 0` but the quotient is only known to be of general type for `e <= 36`.
    Undetermined,
}

impl fmt::Display for GeneralType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneralType::Yes => "yes",
            GeneralType::No => "no",
            GeneralType::Undetermined => "undetermined",
        })
    }
}

/// Invariants of `Z = X/sigma` when the fixed curve has arithmetic genus `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuotientInvariants {
    pub g: i64,
    pub ksq: i64,
    pub c2: i64,
    pub pg: i64,
    pub q: i64,
    pub general_type: GeneralType,
}

impl fmt::Display for QuotientInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K² = {}, c₂ = {}, p_g = {}, q = {}, general type: {}",
            self.ksq, self.c2, self.pg, self.q, self.general_type
        )
    }
}

pub fn quotient_invariants(e: i64, g: i64) -> Result<QuotientInvariants> {
    if e <= 0 || e % 4 != 0 {
        return Err(Error::Geometry(format!("Euler number {e} must be a positive multiple of 4")));
    }
    if g < 2 || 4 * g > e - 4 {
        return Err(Error::Geometry(format!("genus {g} outside 2 <= g <= (e - 4)/4 = {}", (e - 4) / 4)));
    }
    if (e - 4 - 4 * g) % 8 != 0 {
        return Err(Error::Geometry(format!("p_g = (e - 4 - 4g)/8 is not integral for e = {e}, g = {g}")));
    }
    let ksq = e + 5 * (1 - g);
    let general_type = if ksq <= 0 {
        GeneralType::No
    } else if e <= 36 {
        GeneralType::Yes
    } else {
        GeneralType::Undetermined
    };
    Ok(QuotientInvariants { g, ksq, c2: e / 2 + 1 - g, pg: (e - 4 - 4 * g) / 8, q: 0, general_type })
}

/// All admissible fixed-curve genera for `e`, ascending.
pub fn quotient_table(e: i64) -> Vec<QuotientInvariants> {
    (2..=(e - 4).div_euclid(4)).filter_map(|g| quotient_invariants(e, g).ok()).collect()
}

/// Quotient invariants for `p_g(X) = 2, …, 8`, where the fixed curve has
/// genus `p_g(X)` and `c1(Z)^2 = 9 - p_g(X)`, `c2(Z) = 3 + p_g(X)`.
pub fn quotient_for_pg(pg_x: i64) -> Result<QuotientInvariants> {
    if !(2..=8).contains(&pg_x) {
        return Err(Error::Geometry(format!("p_g(X) = {pg_x} outside [2, 8]")));
    }
    let z = quotient_invariants(4 * (1 + pg_x), pg_x)?;
    assert_eq!((z.ksq, z.c2, z.pg, z.q), (9 - pg_x, 3 + pg_x, 0, 0));
    Ok(z)
}

/// Self-intersection and canonical degree of a fixed curve of arithmetic genus `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveData {
    pub g: i64,
    pub csq: i64,
    pub kc: i64,
}

pub fn fixed_curve_numbers(g: i64) -> Result<CurveData> {
    if g < 2 {
        return Err(Error::Geometry(format!("fixed curve genus {g} < 2 on a ball quotient")));
    }
    Ok(CurveData { g, csq: 2 - 2 * g, kc: 4 * (g - 1) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveGenus {
    /// Valid only when the group is torsion-free.
    Genus(i64),
    /// Orbifold Euler characteristic when no genus `>= 2` fits.
    Orbifold(Rational),
}

impl fmt::Display for CurveGenus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveGenus::Genus(g) => write!(f, "genus {g} (valid for torsion-free groups)"),
            CurveGenus::Orbifold(chi) => write!(f, "orbifold Euler characteristic {chi}"),
        }
    }
}

/// Shimura curve over `Q` from an indefinite algebra ramified at `ram_primes`:
/// `chi = -(index/6) prod (p - 1)`.
pub fn shimura_curve_genus(ram_primes: &[u64], index: u64) -> Result<CurveGenus> {
    if !ram_primes.len().is_multiple_of(2) || ram_primes.is_empty() {
        return Err(Error::InvalidAlgebra(format!(
            "an indefinite algebra over Q ramifies at an even positive number of primes, got {}",
            ram_primes.len()
        )));
    }
    if index == 0 {
        return Err(Error::InvalidArgument("index must be positive".into()));
    }
    let prod: i128 = ram_primes.iter().map(|&p| p as i128 - 1).product();
    let chi = -Rational::new(index as i128 * prod, 6);
    match chi.to_integer() {
        Some(c) if c % 2 == 0 && (2 - c) / 2 >= 2 => Ok(CurveGenus::Genus(((2 - c) / 2) as i64)),
        _ => Ok(CurveGenus::Orbifold(chi)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_examples() {
        assert_eq!(shimura_surface_invariants(24).unwrap().pg, 5);
        assert_eq!(shimura_surface_invariants(28).unwrap().pg, 6);
        assert_eq!(shimura_surface_invariants(4).unwrap().pg, 0);
        assert!(shimura_surface_invariants(26).is_err());
        let x = shimura_surface_invariants(36).unwrap();
        assert_eq!((x.c1sq, x.chi, x.q), (72, 9, 0));
    }

    #[test]
    fn quotient_examples() {
        let t = |e, g| {
            let z = quotient_invariants(e, g).unwrap();
            (z.ksq, z.c2, z.pg)
        };
        assert_eq!(t(12, 2), (7, 5, 0));
        assert_eq!(t(24, 5), (4, 8, 0));
        assert_eq!(t(36, 8), (1, 11, 0));
        assert_eq!(t(20, 2), (15, 9, 1));
        assert!(quotient_invariants(12, 1).is_err());
        assert!(quotient_invariants(24, 4).is_err());
        assert_eq!(quotient_invariants(44, 2).unwrap().general_type, GeneralType::Undetermined);
    }

    #[test]
    fn tables() {
        let ks: Vec<i64> = quotient_table(28).iter().map(|z| z.ksq).collect();
        assert_eq!(ks, vec![23, 13, 3]);
        assert_eq!(quotient_table(12).len(), 1);
        assert!(quotient_table(8).is_empty());
        for e in (12..=36).step_by(4) {
            for z in quotient_table(e) {
                assert_eq!(z.ksq + z.c2, 12 * (1 + z.pg));
                if z.pg == 0 {
                    assert!((1..=7).contains(&z.ksq));
                }
            }
        }
    }

    #[test]
    fn quotient_for_pg_examples() {
        for p in 2..=8 {
            let z = quotient_for_pg(p).unwrap();
            assert_eq!(z.ksq + z.c2, 12);
        }
        assert!(quotient_for_pg(1).is_err());
        assert!(quotient_for_pg(9).is_err());
    }

    #[test]
    fn curves() {
        assert_eq!(fixed_curve_numbers(2).unwrap(), CurveData { g: 2, csq: -2, kc: 4 });
        assert_eq!(fixed_curve_numbers(5).unwrap(), CurveData { g: 5, csq: -8, kc: 16 });
        assert!(fixed_curve_numbers(1).is_err());
        assert_eq!(shimura_curve_genus(&[2, 5], 12).unwrap(), CurveGenus::Genus(5));
        assert_eq!(shimura_curve_genus(&[2, 5], 1).unwrap(), CurveGenus::Orbifold(Rational::new(-2, 3)));
        assert_eq!(shimura_curve_genus(&[2, 3], 6).unwrap(), CurveGenus::Genus(2));
        assert!(shimura_curve_genus(&[2], 6).is_err());
    }
}
