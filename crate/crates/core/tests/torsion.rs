use proptest::prelude::*;

use shimura_core::arith::integer::{is_prime, multiplicative_order, primes_up_to};
use shimura_core::*;

fn quad(d: i64) -> QuadField {
    QuadField::new(d).unwrap()
}

fn split_primes(k: QuadField, bound: u64) -> Vec<u64> {
    primes_up_to(bound).into_iter().filter(|&p| k.splitting_type(p).unwrap().splitting == Splitting::Split).collect()
}

fn orders(k: QuadField) -> Vec<u32> {
    possible_torsion_orders(&BaseField::Quadratic(k)).orders.iter().map(|o| o.m).collect()
}

/// `Q(zeta_n)`: a prime `p` not dividing `n` has residue degree `ord(p mod n)`.
#[test]
fn cyclotomic_degree_oracle() {
    for (d, n) in [(2i64, 8u32), (5, 5), (3, 12)] {
        let k = quad(d);
        let base = BaseField::Quadratic(k);
        for p in primes_up_to(400).into_iter().filter(|p| !(n as u64).is_multiple_of(*p)) {
            let f_cyc = multiplicative_order(p, n as u64).unwrap();
            for q in k.primes_above(p).unwrap() {
                let got = cyclotomic_splitting(&base, &q.into(), n).unwrap();
                let f = q.residue_degree() as u64;
                let want = if f_cyc == f { Splitting::Split } else { Splitting::Inert };
                assert_eq!(got, want, "{q} of {k} in zeta_{n}");
            }
        }
    }
}

#[test]
fn rational_base_uses_kronecker() {
    let base = BaseField::Rational;
    for p in primes_up_to(200) {
        let v4 = cyclotomic_splitting(&base, &BasePrime::Rational(p), 4).unwrap();
        let v3 = cyclotomic_splitting(&base, &BasePrime::Rational(p), 3).unwrap();
        let expect = |c: i32| match c {
            1 => Splitting::Split,
            -1 => Splitting::Inert,
            _ => Splitting::Ramified,
        };
        assert_eq!(v4, expect(kronecker(-4, p as i64)));
        assert_eq!(v3, expect(kronecker(-3, p as i64)));
    }
}

#[test]
fn curve_algebra_orders() {
    let a = QuaternionAlgebraData::over_rationals(&[2, 5]).unwrap();
    assert_eq!(gamma1_torsion_orders(&a), vec![3]);
    let t = borel_torsion_verdict(&a, &BasePrime::Rational(11)).unwrap();
    assert_eq!(t.verdict, TorsionVerdict::CertifiedFree);
}

#[test]
fn field_conditions() {
    let k = quad(17);
    let q = k.splitting_type(13).unwrap();
    assert!(cyclotomic_splitting(&BaseField::Quadratic(k), &q.into(), 8).is_err());
    assert!(cyclotomic_splitting(&BaseField::Quadratic(k), &q.into(), 7).is_err());
    assert_eq!(orders(quad(2)), vec![2, 3, 4]);
    assert_eq!(orders(quad(5)), vec![2, 3, 5]);
    assert_eq!(orders(quad(3)), vec![2, 3, 6]);
}

fn algebra_case() -> impl Strategy<Value = (i64, Vec<u64>, u64)> {
    (2i64..120)
        .prop_filter("squarefree", |&d| QuadField::new(d).is_ok())
        .prop_flat_map(|d| {
            let split = split_primes(quad(d), 40);
            let n = split.len();
            (Just(d), Just(split), 0..n.max(1), 3u64..200)
        })
        .prop_filter("has a split prime", |(_, split, _, _)| !split.is_empty())
        .prop_filter("level prime", |(_, split, i, l)| is_prime(*l) && *l != split[*i])
        .prop_map(|(d, split, i, l)| (d, vec![split[i]], l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gamma1_orders_are_possible((d, ram, _) in algebra_case()) {
        let k = quad(d);
        let a = QuaternionAlgebraData::over_quadratic_split_primes(k, &ram).unwrap();
        let possible = orders(k);
        prop_assert!(gamma1_torsion_orders(&a).iter().all(|m| possible.contains(m)));
    }

    #[test]
    fn congruence_verdicts_are_monotone((d, ram, l) in algebra_case()) {
        let k = quad(d);
        let a = QuaternionAlgebraData::over_quadratic_split_primes(k, &ram).unwrap();
        for q in k.primes_above(l).unwrap() {
            let q: BasePrime = q.into();
            let borel = borel_torsion_verdict(&a, &q).unwrap();
            prop_assert!(!matches!(borel.verdict, TorsionVerdict::Unknown(_)));
            if borel.verdict == TorsionVerdict::CertifiedFree {
                let u = unipotent_torsion_verdict(&a, &q).unwrap().verdict;
                let p = principal_torsion_verdict(&a, &q).unwrap().verdict;
                prop_assert!(!matches!(u, TorsionVerdict::CertifiedTorsion(_)));
                prop_assert!(!matches!(p, TorsionVerdict::CertifiedTorsion(_)));
            }
        }
    }
}
