//! Quaternion algebras over totally real fields, involutions of the second
//! kind, congruence subgroups and Euler numbers of the attached Shimura
//! surfaces.

use std::f64::consts::PI;
use std::fmt;

use crate::arith::integer::{gcd_u64, prime_power};
use crate::arith::{recognize_rational, Rational, RecognitionFailure};
use crate::base::{BaseField, BasePrime};
use crate::error::{Error, Result};
use crate::quadratic::{QuadField, QuadPrime, Splitting};
use crate::quartic::{zeta2_euler_product, QuarticField};
use crate::surface::{quotient_table, shimura_surface_invariants, QuotientInvariants, SurfaceInvariants};
use crate::torsion::{
    borel_torsion_verdict, full_torsion_verdict, principal_torsion_verdict, unipotent_torsion_verdict,
    TorsionAssessment, TorsionVerdict,
};

/// Largest denominator accepted when recognizing a floating Euler number.
pub const DEFAULT_MAX_DEN: u64 = 10_000;
/// Prime bound for the zeta estimate of quartic fields.
pub const DEFAULT_ZETA_BOUND: u64 = 100_000;

/// A quaternion algebra, given by its base field and finite ramification.
/// Surface algebras over a quadratic field are unramified at both real
/// places; over a quartic field they ramify at two of the four.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternionAlgebraData {
    base: BaseField,
    ram_finite: Vec<BasePrime>,
    ram_infinite: u32,
    infinite_conjugate_asserted: bool,
}

fn prime_key(q: &BasePrime) -> (u64, u32, u32, String) {
    (q.p(), q.residue_degree(), q.ramification_index(), q.to_string())
}

impl QuaternionAlgebraData {
    /// An indefinite algebra over `Q` ramified at the given primes.
    pub fn over_rationals(primes: &[u64]) -> Result<Self> {
        let mut ps = primes.to_vec();
        ps.sort_unstable();
        ps.dedup();
        if ps.len() != primes.len() {
            return Err(Error::InvalidAlgebra("repeated ramified prime".into()));
        }
        if let Some(&p) = ps.iter().find(|&&p| !crate::arith::is_prime(p)) {
            return Err(Error::NotPrime(p));
        }
        if ps.is_empty() || !ps.len().is_multiple_of(2) {
            return Err(Error::InvalidAlgebra(format!(
                "an indefinite division algebra over Q ramifies at an even positive number of primes, got {}",
                ps.len()
            )));
        }
        Ok(QuaternionAlgebraData {
            base: BaseField::Rational,
            ram_finite: ps.into_iter().map(BasePrime::Rational).collect(),
            ram_infinite: 0,
            infinite_conjugate_asserted: false,
        })
    }

    /// An algebra over a real quadratic field unramified at both real places.
    pub fn over_quadratic(k: QuadField, primes: &[QuadPrime]) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::InvalidAlgebra(
                "no finite ramification: the algebra is M_2(k) and the surface is not compact".into(),
            ));
        }
        for q in primes {
            k.validate_prime(q)?;
        }
        let mut ram: Vec<BasePrime> = primes.iter().map(|&q| q.into()).collect();
        ram.sort_by_key(prime_key);
        if ram.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidAlgebra("repeated ramified prime".into()));
        }
        if !ram.len().is_multiple_of(2) {
            return Err(Error::InvalidAlgebra(format!(
                "{} ramified places: the number of ramified places must be even",
                ram.len()
            )));
        }
        Ok(QuaternionAlgebraData {
            base: BaseField::Quadratic(k),
            ram_finite: ram,
            ram_infinite: 0,
            infinite_conjugate_asserted: true,
        })
    }

    /// Ramified at both primes over each given rational prime, which must split in `k`.
    pub fn over_quadratic_split_primes(k: QuadField, rational_primes: &[u64]) -> Result<Self> {
        let mut primes = Vec::new();
        for &p in rational_primes {
            let above = k.primes_above(p)?;
            if above[0].splitting != Splitting::Split {
                return Err(Error::InvalidAlgebra(format!(
                    "{p} is {} in {k}; an involution of the second kind needs ramification at conjugate pairs of split primes",
                    above[0].splitting
                )));
            }
            primes.extend(above);
        }
        Self::over_quadratic(k, &primes)
    }

    /// The algebra over a quartic field ramified exactly at two real places
    /// and nowhere else. Whether those places are swapped by `Gal(k/l)` is
    /// taken from the caller.
    pub fn over_quartic(k: QuarticField, infinite_conjugate_asserted: bool) -> Self {
        QuaternionAlgebraData {
            base: BaseField::Quartic(k),
            ram_finite: Vec::new(),
            ram_infinite: 2,
            infinite_conjugate_asserted,
        }
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn ram_finite(&self) -> &[BasePrime] {
        &self.ram_finite
    }

    pub fn ram_infinite(&self) -> u32 {
        self.ram_infinite
    }

    pub fn infinite_conjugate_asserted(&self) -> bool {
        self.infinite_conjugate_asserted
    }

    /// Distinct rational primes below the finite ramification.
    pub fn ram_rational_primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.ram_finite.iter().map(|q| q.p()).collect();
        ps.dedup();
        ps
    }

    /// Checks that `q` is a prime of the base field.
    pub fn validate_prime(&self, q: &BasePrime) -> Result<()> {
        match (&self.base, q) {
            (BaseField::Rational, BasePrime::Rational(p)) if crate::arith::is_prime(*p) => Ok(()),
            (BaseField::Quadratic(k), BasePrime::Quadratic(qq)) => k.validate_prime(qq),
            (BaseField::Quartic(k), BasePrime::Quartic(qq)) => {
                if k.primes_above(qq.p)?.contains(qq) {
                    Ok(())
                } else {
                    Err(Error::InconsistentPrime(format!("{qq} is not a prime of {k}")))
                }
            }
            _ => Err(Error::InconsistentPrime(format!("{q} is not a prime of {}", self.base))),
        }
    }
}

impl fmt::Display for QuaternionAlgebraData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ram: Vec<String> = self.ram_finite.iter().map(|q| q.to_string()).collect();
        write!(f, "A({}; {{{}}}", self.base, ram.join(", "))?;
        if self.ram_infinite > 0 {
            write!(f, "; {} real places", self.ram_infinite)?;
        }
        f.write_str(")")
    }
}

/// A boolean check together with its justification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub ok: bool,
    pub reason: String,
}

impl Check {
    fn yes(reason: impl Into<String>) -> Self {
        Check { ok: true, reason: reason.into() }
    }

    fn no(reason: impl Into<String>) -> Self {
        Check { ok: false, reason: reason.into() }
    }
}

pub fn involution_exists(a: &QuaternionAlgebraData) -> Check {
    match a.base() {
        BaseField::Rational => Check::no("Q has no nontrivial automorphism"),
        BaseField::Quadratic(_) => {
            for r in a.ram_finite() {
                let BasePrime::Quadratic(q) = r else { unreachable!() };
                if q.splitting != Splitting::Split {
                    return Check::no(format!("{q} is {} over Q, so it equals its conjugate", q.splitting));
                }
                let conj: BasePrime = q.conjugate().into();
                if !a.ram_finite().contains(&conj) {
                    return Check::no(format!("{q} is ramified but its conjugate {} is not", q.conjugate()));
                }
            }
            Check::yes(
                "ramified primes form conjugate pairs over split primes; the real-place condition is automatic over a quadratic field",
            )
        }
        BaseField::Quartic(_) => {
            if a.infinite_conjugate_asserted() {
                Check::yes("no finite ramification; the ramified real places are conjugate under Gal(k/l) by assertion")
            } else {
                Check::no("conjugacy of the ramified real places under Gal(k/l) was not asserted")
            }
        }
    }
}

/// Existence of a maximal order invariant under the involution. It fails
/// only when `k/l` is unramified and `|Ram(A)| = 2 mod 4`; the count here
/// includes ramified real places.
pub fn invariant_order_exists(a: &QuaternionAlgebraData) -> Check {
    let (d_k, d_l) = match a.base() {
        BaseField::Rational => return Check::no("no involution of the second kind over Q"),
        BaseField::Quadratic(k) => (k.discriminant() as i128, 1i128),
        BaseField::Quartic(k) => (k.discriminant(), k.subfield().discriminant() as i128),
    };
    let places = a.ram_finite().len() as u32 + a.ram_infinite();
    if d_k != d_l * d_l {
        Check::yes(format!("k/l is ramified (d_k = {d_k} != {})", d_l * d_l))
    } else if places % 4 == 2 {
        Check::no(format!("k/l is unramified and |Ram(A)| = {places} = 2 mod 4"))
    } else {
        Check::yes(format!("k/l is unramified but |Ram(A)| = {places} = 0 mod 4"))
    }
}

/// Whether the level prime is fixed by the involution, i.e. non-split over `l`.
pub fn level_invariance_ok(a: &QuaternionAlgebraData, q: &BasePrime) -> Result<Check> {
    a.validate_prime(q)?;
    Ok(match q {
        BasePrime::Rational(_) => Check::no("no involution of the second kind over Q"),
        BasePrime::Quadratic(qq) => match qq.splitting {
            Splitting::Split => {
                Check::no(format!("{qq} is split over Q, so the involution moves it to {}", qq.conjugate()))
            }
            s => Check::yes(format!("{qq} is {s} over Q")),
        },
        BasePrime::Quartic(qq) => {
            let BaseField::Quartic(k) = a.base() else { unreachable!() };
            if k.is_fixed_by_conjugation(qq)? {
                Check::yes(format!("{qq} is the only prime of k over its prime of l"))
            } else {
                Check::no(format!("the prime of l below {qq} splits in k"))
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupKind {
    Full,
    Borel,
    Unipotent,
    Principal,
}

impl fmt::Display for SubgroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubgroupKind::Full => "full",
            SubgroupKind::Borel => "borel",
            SubgroupKind::Unipotent => "unipotent",
            SubgroupKind::Principal => "principal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgroupSpec {
    pub kind: SubgroupKind,
    pub level: Option<BasePrime>,
}

impl SubgroupSpec {
    pub fn full() -> Self {
        SubgroupSpec { kind: SubgroupKind::Full, level: None }
    }

    pub fn at(kind: SubgroupKind, q: impl Into<BasePrime>) -> Self {
        SubgroupSpec { kind, level: Some(q.into()) }
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            None => write!(f, "{}", self.kind),
            Some(q) => write!(f, "{} at {q}", self.kind),
        }
    }
}

/// Index in `Gamma(1)` of a congruence subgroup of level `q` with `N(q) = s`;
/// the reduction mod `q` has image `PSL_2(F_s)` of order `s(s^2 - 1)/t`.
pub fn subgroup_index(kind: SubgroupKind, s: u64) -> Result<u64> {
    if kind == SubgroupKind::Full {
        return Ok(1);
    }
    if prime_power(s).is_none() {
        return Err(Error::NotPrimePower(s));
    }
    let t = gcd_u64(s - 1, 2);
    Ok(match kind {
        SubgroupKind::Full => 1,
        SubgroupKind::Borel => s + 1,
        SubgroupKind::Unipotent => (s * s - 1) / t,
        SubgroupKind::Principal => s * (s * s - 1) / t,
    })
}

/// `index * B_2/12 * prod (p - 1)^2` over the rational primes below `Ram(A)`.
pub fn euler_number_quadratic(a: &QuaternionAlgebraData, index: u64) -> Result<Rational> {
    let BaseField::Quadratic(k) = a.base() else {
        return Err(Error::InvalidAlgebra(format!("{} is not a real quadratic field", a.base())));
    };
    let pairs: Rational = a.ram_rational_primes().iter().map(|&p| Rational::from((p - 1) * (p - 1))).product();
    Ok(Rational::from(index) * k.bernoulli2() / Rational::from(12i64) * pairs)
}

/// A floating Euler number with its recognized exact value.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerEstimate {
    pub approx: f64,
    /// The true value lies in `[approx, approx + error_bound]`.
    pub error_bound: f64,
    pub exact: std::result::Result<Rational, RecognitionFailure>,
}

/// `index * d_k^{3/2} zeta_k(2) / (2^{2n-3} pi^{2n}) * prod (N P - 1)^2`,
/// one norm per conjugate pair of ramified primes. `zeta_rel_err` bounds the
/// relative error of the lower estimate `zeta2`.
pub fn euler_number_general(
    d_k: i128,
    n: u32,
    zeta2: f64,
    zeta_rel_err: f64,
    ram_norms: &[u64],
    index: u64,
    max_den: u64,
) -> Result<EulerEstimate> {
    if n < 2 || zeta2.is_nan() || zeta2 <= 1.0 || zeta_rel_err < 0.0 || d_k <= 0 {
        return Err(Error::InvalidArgument("need n >= 2, zeta2 > 1, d_k > 0".into()));
    }
    let pairs: f64 = ram_norms.iter().map(|&m| ((m - 1) as f64).powi(2)).product();
    let approx =
        index as f64 * (d_k as f64).powf(1.5) * zeta2 / (2f64.powi(2 * n as i32 - 3) * PI.powi(2 * n as i32)) * pairs;
    let error_bound = approx * zeta_rel_err + approx * 1e-12;
    let exact = recognize_rational(approx, max_den, error_bound);
    Ok(EulerEstimate { approx, error_bound, exact })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerValue {
    pub exact: Option<Rational>,
    pub approx: f64,
    pub error_bound: f64,
    pub failure: Option<RecognitionFailure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub algebra: String,
    pub subgroup: SubgroupSpec,
    pub involution: Check,
    pub invariant_order: Check,
    pub level_invariance: Check,
    pub index: u64,
    pub euler: EulerValue,
    pub torsion: TorsionAssessment,
    pub admissible_type: Option<i64>,
    pub surface: Option<SurfaceInvariants>,
    pub quotients: Vec<QuotientInvariants>,
    pub notes: Vec<String>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.admissible_type.is_some()
    }
}

pub fn admissibility_report(a: &QuaternionAlgebraData, spec: &SubgroupSpec) -> Result<AdmissibilityReport> {
    admissibility_report_with(a, spec, DEFAULT_ZETA_BOUND)
}

pub fn admissibility_report_with(
    a: &QuaternionAlgebraData,
    spec: &SubgroupSpec,
    zeta_bound: u64,
) -> Result<AdmissibilityReport> {
    if let BaseField::Rational = a.base() {
        return Err(Error::InvalidAlgebra("surface algebras live over a quadratic or quartic field".into()));
    }
    let mut notes = Vec::new();
    let involution = involution_exists(a);
    let invariant_order = invariant_order_exists(a);
    notes.push("|Ram(A)| in the invariant-order test counts ramified real places".to_string());

    let (index, level_invariance, torsion) = match (spec.kind, spec.level) {
        (SubgroupKind::Full, _) => (1, Check::yes("no level"), full_torsion_verdict(a)),
        (kind, Some(q)) => {
            let index = subgroup_index(kind, q.norm())?;
            let level = level_invariance_ok(a, &q)?;
            let torsion = match kind {
                SubgroupKind::Borel => borel_torsion_verdict(a, &q)?,
                SubgroupKind::Unipotent => unipotent_torsion_verdict(a, &q)?,
                SubgroupKind::Principal => principal_torsion_verdict(a, &q)?,
                SubgroupKind::Full => unreachable!(),
            };
            (index, level, torsion)
        }
        (kind, None) => return Err(Error::InvalidLevel(format!("{kind} subgroup needs a level prime"))),
    };

    let euler = match a.base() {
        BaseField::Quadratic(_) => {
            let e = euler_number_quadratic(a, index)?;
            EulerValue { exact: Some(e), approx: e.to_f64(), error_bound: 0.0, failure: None }
        }
        BaseField::Quartic(k) => {
            let zeta = zeta2_euler_product(k, zeta_bound)?;
            // Recognize the covolume of Gamma(1), then scale: the window grows with the index.
            let est = euler_number_general(k.discriminant(), 4, zeta.value, zeta.error_bound, &[], 1, DEFAULT_MAX_DEN)?;
            notes.push(format!(
                "zeta_k(2) ≈ {:.9} from primes up to {zeta_bound} (relative error ≤ {:.2e})",
                zeta.value, zeta.error_bound
            ));
            let scale = Rational::from(index);
            EulerValue {
                exact: est.exact.clone().ok().map(|e| e * scale),
                approx: est.approx * index as f64,
                error_bound: est.error_bound * index as f64,
                failure: est.exact.err(),
            }
        }
        BaseField::Rational => unreachable!(),
    };

    let admissible_type = match euler.exact.and_then(|e| e.to_integer()) {
        Some(e)
            if involution.ok
                && invariant_order.ok
                && level_invariance.ok
                && torsion.verdict == TorsionVerdict::CertifiedFree
                && e > 0
                && e % 4 == 0 =>
        {
            Some(e as i64)
        }
        _ => None,
    };
    let surface = admissible_type.map(|e| shimura_surface_invariants(e).expect("e is a positive multiple of 4"));
    let quotients = admissible_type.map(quotient_table).unwrap_or_default();
    if admissible_type.is_some() {
        notes.push("π₁(X/σ) is finite".to_string());
    }
    Ok(AdmissibilityReport {
        algebra: a.to_string(),
        subgroup: *spec,
        involution,
        invariant_order,
        level_invariance,
        index,
        euler,
        torsion,
        admissible_type,
        surface,
        quotients,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a33() -> (QuadField, QuaternionAlgebraData) {
        let k = QuadField::new(33).unwrap();
        (k, QuaternionAlgebraData::over_quadratic_split_primes(k, &[2]).unwrap())
    }

    #[test]
    fn construction_rules() {
        let k17 = QuadField::new(17).unwrap();
        let p2 = k17.splitting_type(2).unwrap();
        assert!(QuaternionAlgebraData::over_quadratic(k17, &[p2]).is_err());
        assert!(QuaternionAlgebraData::over_quadratic(k17, &[]).is_err());
        assert!(QuaternionAlgebraData::over_quadratic(k17, &[p2, p2]).is_err());
        assert!(QuaternionAlgebraData::over_quadratic_split_primes(k17, &[3]).is_err());
        assert!(QuaternionAlgebraData::over_rationals(&[2]).is_err());
        assert!(QuaternionAlgebraData::over_rationals(&[2, 4]).is_err());
        assert!(QuaternionAlgebraData::over_rationals(&[2, 5]).is_ok());
    }

    #[test]
    fn involutions() {
        let (_, a) = a33();
        assert!(involution_exists(&a).ok);
        // Two ramified primes that are not conjugate.
        let k17 = QuadField::new(17).unwrap();
        let p2 = k17.splitting_type(2).unwrap();
        let p13 = k17.splitting_type(13).unwrap();
        let a = QuaternionAlgebraData::over_quadratic(k17, &[p2, p13]).unwrap();
        assert!(!involution_exists(&a).ok);
        // Two inert primes equal their conjugates.
        let q3 = k17.splitting_type(3).unwrap();
        let q5 = k17.splitting_type(5).unwrap();
        let a = QuaternionAlgebraData::over_quadratic(k17, &[q3, q5]).unwrap();
        assert!(!involution_exists(&a).ok);
    }

    #[test]
    fn invariant_orders_and_levels() {
        let (k, a) = a33();
        assert!(invariant_order_exists(&a).ok);
        let q11: BasePrime = k.splitting_type(11).unwrap().into();
        assert!(level_invariance_ok(&a, &q11).unwrap().ok);
        let p2: BasePrime = k.splitting_type(2).unwrap().into();
        assert!(!level_invariance_ok(&a, &p2).unwrap().ok);
    }

    #[test]
    fn indices() {
        assert_eq!(subgroup_index(SubgroupKind::Borel, 11).unwrap(), 12);
        assert_eq!(subgroup_index(SubgroupKind::Unipotent, 29).unwrap(), 420);
        assert_eq!(subgroup_index(SubgroupKind::Borel, 17).unwrap(), 18);
        assert_eq!(subgroup_index(SubgroupKind::Principal, 2).unwrap(), 6);
        assert_eq!(subgroup_index(SubgroupKind::Full, 6).unwrap(), 1);
        assert_eq!(subgroup_index(SubgroupKind::Borel, 6), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn euler_numbers() {
        let (_, a) = a33();
        assert_eq!(euler_number_quadratic(&a, 1).unwrap(), Rational::from(2i64));
        assert_eq!(euler_number_quadratic(&a, 12).unwrap(), Rational::from(24i64));
        let k17 = QuadField::new(17).unwrap();
        let a17 = QuaternionAlgebraData::over_quadratic_split_primes(k17, &[2]).unwrap();
        assert_eq!(euler_number_quadratic(&a17, 1).unwrap(), Rational::new(2, 3));
        let k7 = QuadField::new(7).unwrap();
        let a28 = QuaternionAlgebraData::over_quadratic_split_primes(k7, &[3]).unwrap();
        assert_eq!(euler_number_quadratic(&a28, 1).unwrap(), Rational::new(16, 3));
    }

    #[test]
    fn general_formula_at_degree_two() {
        let k = QuadField::new(33).unwrap();
        let b = k.bernoulli2().to_f64();
        let zeta = PI.powi(4) * b / (6.0 * 33f64.powf(1.5));
        let est = euler_number_general(33, 2, zeta, 1e-12, &[2], 1, DEFAULT_MAX_DEN).unwrap();
        assert_eq!(est.exact, Ok(Rational::from(2i64)));
    }

    #[test]
    fn report_for_type_24() {
        let (k, a) = a33();
        let q11 = k.splitting_type(11).unwrap();
        let r = admissibility_report(&a, &SubgroupSpec::at(SubgroupKind::Borel, q11)).unwrap();
        assert_eq!(r.admissible_type, Some(24));
        assert_eq!(r.surface.unwrap().pg, 5);
        assert_eq!(r.quotients.len(), 2);
    }
}
