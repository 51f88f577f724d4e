//! Splitting of primes in cyclotomic quadratic extensions `k(xi_n)/k` and the
//! torsion criteria built on it.
//!
//! An element of order `m` in `Gamma(1) = O^1/{±1}` generates `k(xi_n)` with
//! `n` fixed by `m`: 2 → 4, 3 → 3, 4 → 8, 5 → 5, 6 → 12. Such an element exists
//! iff `xi_n + xi_n^-1 ∈ k` and every finite ramified prime of the algebra is
//! non-split in `k(xi_n)`. In a Borel subgroup of level `q` one needs in
//! addition that `q` splits in `k(xi_n)`.

use std::fmt;

use crate::arith::integer::{euler_phi, fundamental_discriminant, kronecker, multiplicative_order, pow_mod};
use crate::base::{BaseField, BasePrime};
use crate::error::{Error, Result};
use crate::quadratic::Splitting;
use crate::quaternion::QuaternionAlgebraData;

/// Verdict for a prime of `k` in `k(xi_n)`.
pub type SplitVerdict = Splitting;

/// Field discriminants of the real cyclotomic quartic fields `Q(zeta_n)^+`,
/// `n ∈ {15, 16, 20, 24}`, where orders beyond `{2, …, 6}` could embed.
const EXCEPTIONAL_QUARTICS: [(i128, u32); 4] = [(1125, 15), (2048, 8), (2000, 10), (2304, 12)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionOrder {
    /// Element order in `Gamma(1)`.
    pub m: u32,
    /// Order of the root of unity realizing it.
    pub n: u32,
}

impl TorsionOrder {
    pub fn new(m: u32) -> Result<Self> {
        let n = match m {
            2 => 4,
            3 => 3,
            4 => 8,
            5 => 5,
            6 => 12,
            _ => return Err(Error::UnsupportedRootOrder(m)),
        };
        Ok(TorsionOrder { m, n })
    }

    /// `d` with `sqrt(d)` required in `k`, if any.
    pub fn field_condition(&self) -> Option<i64> {
        sqrt_condition(self.n)
    }
}

fn sqrt_condition(n: u32) -> Option<i64> {
    match n {
        8 => Some(2),
        5 => Some(5),
        12 => Some(3),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PossibleOrders {
    pub orders: Vec<TorsionOrder>,
    /// Set when further orders might embed and are not decided here.
    pub undecided: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorsionVerdict {
    CertifiedFree,
    CertifiedTorsion(u32),
    Unknown(String),
}

impl fmt::Display for TorsionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorsionVerdict::CertifiedFree => f.write_str("certified torsion-free"),
            TorsionVerdict::CertifiedTorsion(m) => write!(f, "contains torsion of order {m}"),
            TorsionVerdict::Unknown(why) => write!(f, "unknown ({why})"),
        }
    }
}

/// The splitting data behind one element order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderFinding {
    pub order: TorsionOrder,
    pub ram_verdicts: Vec<(BasePrime, SplitVerdict)>,
    /// Whether the order occurs in `Gamma(1)`.
    pub in_gamma1: bool,
    pub level_verdict: Option<SplitVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionAssessment {
    pub verdict: TorsionVerdict,
    pub findings: Vec<OrderFinding>,
}

pub fn possible_torsion_orders(base: &BaseField) -> PossibleOrders {
    let mut ms = vec![2, 3];
    let mut undecided = None;
    match base {
        BaseField::Rational => {}
        BaseField::Quadratic(_) | BaseField::Quartic(_) => {
            for (d, m) in [(2, 4), (5, 5), (3, 6)] {
                if base.contains_sqrt(d) {
                    ms.push(m);
                }
            }
        }
    }
    if let BaseField::Quartic(k) = base {
        if let Some(&(disc, m)) = EXCEPTIONAL_QUARTICS.iter().find(|(d, _)| *d == k.discriminant()) {
            undecided = Some(format!("field discriminant {disc} allows elements of order {m} that are not analysed"));
        }
    }
    ms.sort_unstable();
    PossibleOrders { orders: ms.into_iter().map(|m| TorsionOrder::new(m).unwrap()).collect(), undecided }
}

/// `(e, f)` of `p` in `Q(sqrt(a), sqrt(b))` for independent non-squares `a, b`,
/// read off the characters of the three quadratic subfields.
fn biquadratic_local(a: i64, b: i64, p: u64) -> Result<(u32, u32)> {
    let chars: Vec<i32> = [a, b, a * b]
        .iter()
        .map(|&x| fundamental_discriminant(x).map(|dd| kronecker(dd, p as i64)))
        .collect::<Result<_>>()?;
    let unramified = chars.iter().filter(|&&c| c != 0).count();
    let split = chars.iter().filter(|&&c| c == 1).count();
    // Inertia I and decomposition D inside the Klein four-group: p is
    // unramified in exactly the subfields fixed by subgroups containing I
    // (3, 1, 0 of them for |I| = 1, 2, 4) and splits in those fixed by
    // subgroups containing D.
    let inertia = match unramified {
        3 => 1,
        1 => 2,
        0 => 4,
        _ => unreachable!("inconsistent biquadratic characters {chars:?}"),
    };
    let decomposition = match split {
        3 => 1,
        1 => 2,
        0 => 4,
        _ => unreachable!("inconsistent biquadratic characters {chars:?}"),
    };
    Ok((inertia, decomposition / inertia))
}

fn relative_verdict(e_l: u32, f_l: u32, q: &BasePrime) -> SplitVerdict {
    let e = e_l / q.ramification_index();
    let f = f_l / q.residue_degree();
    if e == 2 {
        Splitting::Ramified
    } else if f == 2 {
        Splitting::Inert
    } else {
        Splitting::Split
    }
}

/// Splitting of `q` in `k(xi_n)/k`.
pub fn cyclotomic_splitting(base: &BaseField, q: &BasePrime, n: u32) -> Result<SplitVerdict> {
    let radicand: i64 = match n {
        3 => -3,
        4 => -1,
        5 | 8 | 12 => 0,
        _ => return Err(Error::UnsupportedRootOrder(n)),
    };
    let p = q.p();
    if let BaseField::Rational = base {
        if radicand == 0 {
            return Err(Error::FieldCondition(format!("Q(xi_{n}) is not quadratic over Q")));
        }
        let dm = if n == 3 { -3 } else { -4 };
        return Ok(match kronecker(dm, p as i64) {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        });
    }
    if radicand == 0 {
        let need = sqrt_condition(n).unwrap();
        if !base.contains_sqrt(need) {
            return Err(Error::FieldCondition(format!("xi_{n} needs sqrt({need}) in {base}")));
        }
    }
    let f_q = q.residue_degree();
    if !(n as u64).is_multiple_of(p) {
        if radicand != 0 && p != 2 {
            // Euler's criterion for the radicand in O_k/q.
            let nq = p.pow(f_q);
            let r = radicand.rem_euclid(p as i64) as u64;
            return Ok(if pow_mod(r, (nq - 1) / 2, p) == 1 { Splitting::Split } else { Splitting::Inert });
        }
        // Frobenius of q acts on xi_n as p^f.
        let order = multiplicative_order(p, n as u64).expect("p coprime to n");
        return Ok(if (f_q as u64).is_multiple_of(order) { Splitting::Split } else { Splitting::Inert });
    }
    match base {
        BaseField::Quadratic(k) if radicand != 0 => {
            let (e_l, f_l) = biquadratic_local(k.d(), radicand, p)?;
            Ok(relative_verdict(e_l, f_l, q))
        }
        BaseField::Quadratic(_) => {
            // k is the maximal real subfield of Q(zeta_n).
            let mut n_prime = n as u64;
            let mut pa = 1;
            while n_prime.is_multiple_of(p) {
                n_prime /= p;
                pa *= p;
            }
            let e_l = euler_phi(pa) as u32;
            let f_l = multiplicative_order(p, n_prime).unwrap_or(1) as u32;
            Ok(relative_verdict(e_l, f_l, q))
        }
        _ => {
            let mut pa = 1;
            let mut rest = n as u64;
            while rest.is_multiple_of(p) {
                rest /= p;
                pa *= p;
            }
            let e_cyc = euler_phi(pa) as u32;
            if !q.ramification_index().is_multiple_of(e_cyc) {
                Ok(Splitting::Ramified)
            } else {
                Err(Error::Undecided(format!("{q} over {p} in k(xi_{n}) needs the local structure at {p}")))
            }
        }
    }
}

fn nonsplit(v: SplitVerdict) -> bool {
    v != Splitting::Split
}

fn order_findings(a: &QuaternionAlgebraData, level: Option<&BasePrime>) -> (Vec<OrderFinding>, Option<String>) {
    let possible = possible_torsion_orders(a.base());
    let mut undecided = possible.undecided.clone();
    let mut out = Vec::new();
    for order in possible.orders {
        let mut ram_verdicts = Vec::new();
        let mut decided = true;
        for r in a.ram_finite() {
            match cyclotomic_splitting(a.base(), r, order.n) {
                Ok(v) => ram_verdicts.push((*r, v)),
                Err(e) => {
                    decided = false;
                    undecided.get_or_insert_with(|| e.to_string());
                }
            }
        }
        let in_gamma1 = decided && ram_verdicts.iter().all(|(_, v)| nonsplit(*v));
        let level_verdict = match level {
            Some(q) if in_gamma1 => match cyclotomic_splitting(a.base(), q, order.n) {
                Ok(v) => Some(v),
                Err(e) => {
                    undecided.get_or_insert_with(|| e.to_string());
                    None
                }
            },
            _ => None,
        };
        out.push(OrderFinding { order, ram_verdicts, in_gamma1, level_verdict });
    }
    (out, undecided)
}

/// Element orders occurring in `Gamma(1)`.
pub fn gamma1_torsion_orders(a: &QuaternionAlgebraData) -> Vec<u32> {
    order_findings(a, None).0.iter().filter(|f| f.in_gamma1).map(|f| f.order.m).collect()
}

/// Torsion in `Gamma(1)` itself.
pub fn full_torsion_verdict(a: &QuaternionAlgebraData) -> TorsionAssessment {
    let (findings, undecided) = order_findings(a, None);
    let verdict = match (findings.iter().find(|f| f.in_gamma1), undecided) {
        (Some(f), _) => TorsionVerdict::CertifiedTorsion(f.order.m),
        (None, None) => TorsionVerdict::CertifiedFree,
        (None, Some(why)) => TorsionVerdict::Unknown(why),
    };
    TorsionAssessment { verdict, findings }
}

fn check_level(a: &QuaternionAlgebraData, q: &BasePrime) -> Result<()> {
    if a.ram_rational_primes().contains(&q.p()) {
        return Err(Error::InvalidLevel(format!(
            "{q} lies over {}, which is below a ramified prime of the algebra",
            q.p()
        )));
    }
    a.validate_prime(q)
}

pub fn borel_torsion_verdict(a: &QuaternionAlgebraData, q: &BasePrime) -> Result<TorsionAssessment> {
    check_level(a, q)?;
    let (findings, undecided) = order_findings(a, Some(q));
    let torsion = findings.iter().find(|f| f.in_gamma1 && f.level_verdict == Some(Splitting::Split));
    let verdict = match (torsion, undecided) {
        (Some(f), _) => TorsionVerdict::CertifiedTorsion(f.order.m),
        (None, None) => TorsionVerdict::CertifiedFree,
        (None, Some(why)) => TorsionVerdict::Unknown(why),
    };
    Ok(TorsionAssessment { verdict, findings })
}

fn is_power_of(m: u32, p: u64) -> bool {
    let mut m = m as u64;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// Torsion in the principal congruence subgroup `Gamma(q)`. An element of
/// prime order in `Gamma(q)` has order equal to the residue characteristic.
pub fn principal_torsion_verdict(a: &QuaternionAlgebraData, q: &BasePrime) -> Result<TorsionAssessment> {
    let borel = borel_torsion_verdict(a, q)?;
    let verdict = principal_from_borel(&borel, q.p());
    Ok(TorsionAssessment { verdict, findings: borel.findings })
}

fn principal_from_borel(borel: &TorsionAssessment, p: u64) -> TorsionVerdict {
    if borel.verdict == TorsionVerdict::CertifiedFree {
        return TorsionVerdict::CertifiedFree;
    }
    if let TorsionVerdict::Unknown(why) = &borel.verdict {
        return TorsionVerdict::Unknown(why.clone());
    }
    let survivors: Vec<&OrderFinding> =
        borel.findings.iter().filter(|f| f.in_gamma1 && is_power_of(f.order.m, p)).collect();
    if survivors.is_empty() {
        return TorsionVerdict::CertifiedFree;
    }
    // xi_4 - 1 and xi_3 - 1 have reduced norm 2 and 3, so once xi embeds in
    // the Borel order at q (q split in k(xi)), its image is congruent to 1.
    let automatic =
        survivors.iter().find(|f| (f.order.m as u64) == p && p <= 3 && f.level_verdict == Some(Splitting::Split));
    match automatic {
        Some(f) => TorsionVerdict::CertifiedTorsion(f.order.m),
        None => TorsionVerdict::Unknown(format!(
            "an element of order {} may survive the congruence modulo q",
            survivors[0].order.m
        )),
    }
}

/// Torsion in the unipotent subgroup `Gamma^U(q)`: a torsion element either
/// has order divisible by the residue characteristic or lies in `Gamma(q)`.
pub fn unipotent_torsion_verdict(a: &QuaternionAlgebraData, q: &BasePrime) -> Result<TorsionAssessment> {
    let borel = borel_torsion_verdict(a, q)?;
    let p = q.p();
    let verdict = match &borel.verdict {
        TorsionVerdict::CertifiedFree => TorsionVerdict::CertifiedFree,
        TorsionVerdict::Unknown(why) => TorsionVerdict::Unknown(why.clone()),
        TorsionVerdict::CertifiedTorsion(_) => {
            let divisible = borel.findings.iter().any(|f| f.in_gamma1 && (f.order.m as u64).is_multiple_of(p));
            if !divisible {
                TorsionVerdict::CertifiedFree
            } else {
                match principal_from_borel(&borel, p) {
                    TorsionVerdict::CertifiedTorsion(m) => TorsionVerdict::CertifiedTorsion(m),
                    _ => TorsionVerdict::Unknown(format!("torsion of order divisible by {p} is not excluded")),
                }
            }
        }
    };
    Ok(TorsionAssessment { verdict, findings: borel.findings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::integer::primes_up_to;
    use crate::quadratic::QuadField;

    fn quad(d: i64) -> (QuadField, BaseField) {
        let k = QuadField::new(d).unwrap();
        (k, BaseField::Quadratic(k))
    }

    fn prime(k: QuadField, p: u64) -> BasePrime {
        k.splitting_type(p).unwrap().into()
    }

    #[test]
    fn possible_orders() {
        let ms = |d| possible_torsion_orders(&quad(d).1).orders.iter().map(|o| o.m).collect::<Vec<_>>();
        assert_eq!(ms(17), vec![2, 3]);
        assert_eq!(ms(2), vec![2, 3, 4]);
        assert_eq!(ms(5), vec![2, 3, 5]);
        assert_eq!(ms(3), vec![2, 3, 6]);
        let q = possible_torsion_orders(&BaseField::Rational);
        assert_eq!(q.orders.len(), 2);
        assert!(q.undecided.is_none());
    }

    #[test]
    fn splitting_examples() {
        let (k33, b33) = quad(33);
        let q11 = prime(k33, 11);
        assert_eq!(cyclotomic_splitting(&b33, &q11, 4).unwrap(), Splitting::Inert);
        assert_eq!(cyclotomic_splitting(&b33, &q11, 3).unwrap(), Splitting::Inert);

        let (k17, b17) = quad(17);
        assert_eq!(cyclotomic_splitting(&b17, &prime(k17, 17), 4).unwrap(), Splitting::Split);
        assert_eq!(cyclotomic_splitting(&b17, &prime(k17, 2), 4).unwrap(), Splitting::Ramified);

        let (k2, b2) = quad(2);
        assert_eq!(cyclotomic_splitting(&b2, &prime(k2, 7), 3).unwrap(), Splitting::Split);
        assert_eq!(cyclotomic_splitting(&b2, &prime(k2, 7), 8).unwrap(), Splitting::Inert);
        assert_eq!(cyclotomic_splitting(&b2, &prime(k2, 2), 8).unwrap(), Splitting::Ramified);

        assert!(matches!(cyclotomic_splitting(&b17, &prime(k17, 2), 5), Err(Error::FieldCondition(_))));
        assert_eq!(cyclotomic_splitting(&b17, &prime(k17, 2), 7), Err(Error::UnsupportedRootOrder(7)));
    }

    #[test]
    fn rational_base() {
        let q = BaseField::Rational;
        assert_eq!(cyclotomic_splitting(&q, &BasePrime::Rational(5), 4).unwrap(), Splitting::Split);
        assert_eq!(cyclotomic_splitting(&q, &BasePrime::Rational(11), 3).unwrap(), Splitting::Inert);
        assert_eq!(cyclotomic_splitting(&q, &BasePrime::Rational(3), 3).unwrap(), Splitting::Ramified);
    }

    #[test]
    fn biquadratic_cyclotomic_fields() {
        // Q(zeta_8) = Q(sqrt 2, i): 2 is totally ramified.
        assert_eq!(biquadratic_local(2, -1, 2).unwrap(), (4, 1));
        // Q(zeta_12) = Q(sqrt 3, sqrt -3): e = f = 2 at both 2 and 3.
        assert_eq!(biquadratic_local(3, -3, 2).unwrap(), (2, 2));
        assert_eq!(biquadratic_local(3, -3, 3).unwrap(), (2, 2));
        // Q(sqrt 5, sqrt -3) inside Q(zeta_15): 3 has e = 2, f = 2.
        assert_eq!(biquadratic_local(5, -3, 3).unwrap(), (2, 2));
        // Q(sqrt 17, i): 2 splits in Q(sqrt 17) and ramifies in Q(i).
        assert_eq!(biquadratic_local(17, -1, 2).unwrap(), (2, 1));
    }

    #[test]
    fn biquadratic_unramified_matches_frobenius() {
        // Away from the discriminant, Frobenius has order 2 iff some
        // subfield character is -1.
        for d in [2i64, 3, 5, 6, 7, 10, 13, 17, 33] {
            for m in [-1i64, -3] {
                for p in primes_up_to(200).into_iter().filter(|&p| p > 3 && (d * m) % p as i64 != 0) {
                    let (e, f) = biquadratic_local(d, m, p).unwrap();
                    assert_eq!(e, 1);
                    let inert_somewhere =
                        [d, m, d * m].iter().any(|&x| kronecker(fundamental_discriminant(x).unwrap(), p as i64) == -1);
                    assert_eq!(f == 2, inert_somewhere, "d = {d}, m = {m}, p = {p}");
                }
            }
        }
    }

    #[test]
    fn euler_criterion_matches_square_search() {
        for d in [2i64, 5, 13, 17, 33] {
            let (k, b) = quad(d);
            for p in primes_up_to(100).into_iter().filter(|&p| p > 3) {
                for q in k.primes_above(p).unwrap() {
                    let bp: BasePrime = q.into();
                    for (n, m) in [(3u32, -3i64), (4, -1)] {
                        let v = cyclotomic_splitting(&b, &bp, n).unwrap();
                        let r = m.rem_euclid(p as i64) as u64;
                        let square = if bp.residue_degree() == 2 { true } else { (1..p).any(|x| x * x % p == r) };
                        assert_eq!(v == Splitting::Split, square, "d = {d}, q = {q}, n = {n}");
                    }
                }
            }
        }
    }
}
