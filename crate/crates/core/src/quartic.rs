//! Totally real quartic fields given by a monic defining polynomial.
//!
//! Everything is read off the polynomial: the discriminant from a Sylvester
//! resultant, total reality from a Sturm sequence, and prime decomposition
//! from factorization modulo `p` (Dedekind's criterion). No order or ideal
//! arithmetic is performed.

use std::fmt;

use crate::arith::integer::{factorize, primes_up_to};
use crate::arith::{poly_factor_mod_p, PolyModP, Rational};
use crate::error::{Error, Result};
use crate::quadratic::{QuadField, Splitting};

/// Number fields whose prime decomposition can be listed as `(f, e)` pairs.
pub trait PrimeShapes {
    fn degree(&self) -> u32;

    /// `(residue degree, ramification index)` of each prime over `p`, sorted.
    fn prime_shapes(&self, p: u64) -> Result<Vec<(u32, u32)>>;
}

impl PrimeShapes for QuadField {
    fn degree(&self) -> u32 {
        2
    }

    fn prime_shapes(&self, p: u64) -> Result<Vec<(u32, u32)>> {
        Ok(match self.splitting_type(p)?.splitting {
            Splitting::Split => vec![(1, 1), (1, 1)],
            Splitting::Inert => vec![(2, 1)],
            Splitting::Ramified => vec![(1, 2)],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticField {
    coeffs: [i64; 5],
    disc_poly: i128,
    field_disc: i128,
    index: u64,
    subfield: QuadField,
}

/// A prime of a quartic field, identified by its position in the sorted
/// list of shapes over `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuarticPrime {
    pub p: u64,
    pub f: u32,
    pub e: u32,
    pub position: usize,
}

impl QuarticPrime {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }
}

impl fmt::Display for QuarticPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}.{} (f = {}, e = {})", self.p, self.position, self.f, self.e)
    }
}

impl QuarticField {
    /// `coeffs` lists `c4, c3, c2, c1, c0` with `c4 = 1`. `field_disc` may be
    /// supplied when the polynomial discriminant carries an index factor.
    pub fn new(coeffs: [i64; 5], subfield_d: i64, field_disc: Option<i128>) -> Result<Self> {
        if coeffs[0] != 1 {
            return Err(Error::NotMonic);
        }
        if coeffs.iter().any(|c| c.abs() > 1_000_000) {
            return Err(Error::InvalidQuartic("coefficients must be at most 10^6 in absolute value".into()));
        }
        if !is_irreducible(&coeffs) {
            return Err(Error::InvalidQuartic("polynomial is reducible over Q".into()));
        }
        let disc_poly = discriminant(&coeffs)?;
        let real_roots = count_real_roots(&coeffs)?;
        if real_roots != 4 {
            return Err(Error::InvalidQuartic(format!(
                "polynomial has {real_roots} real roots, so the field is not totally real"
            )));
        }
        let (field_disc, index) = resolve_index(&coeffs, disc_poly, field_disc)?;
        let subfield = QuadField::new(subfield_d)?;
        let dl = subfield.discriminant() as i128;
        if field_disc % (dl * dl) != 0 {
            return Err(Error::InvalidQuartic(format!(
                "{subfield} cannot be a subfield: {}^2 does not divide {field_disc}",
                dl
            )));
        }
        Ok(QuarticField { coeffs, disc_poly, field_disc, index, subfield })
    }

    pub fn coeffs(&self) -> [i64; 5] {
        self.coeffs
    }

    pub fn poly_discriminant(&self) -> i128 {
        self.disc_poly
    }

    pub fn discriminant(&self) -> i128 {
        self.field_disc
    }

    /// `[O_k : Z[x]/(f)]`.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn subfield(&self) -> QuadField {
        self.subfield
    }

    /// Sorted `(f, e)` pairs of the primes over `p`.
    pub fn quartic_splitting(&self, p: u64) -> Result<Vec<(u32, u32)>> {
        if self.index.is_multiple_of(p) {
            return Err(Error::DedekindInapplicable(p));
        }
        let f = PolyModP::from_desc(p, &self.coeffs);
        let mut shapes: Vec<(u32, u32)> =
            poly_factor_mod_p(&f)?.iter().map(|(g, m)| (g.degree().unwrap_or(0) as u32, *m)).collect();
        shapes.sort_unstable();
        Ok(shapes)
    }

    pub fn primes_above(&self, p: u64) -> Result<Vec<QuarticPrime>> {
        Ok(self
            .quartic_splitting(p)?
            .into_iter()
            .enumerate()
            .map(|(position, (f, e))| QuarticPrime { p, f, e, position })
            .collect())
    }

    /// Whether `q` is the only prime of `k` over the prime of the quadratic
    /// subfield below it, i.e. fixed by the nontrivial automorphism of `k/l`.
    pub fn is_fixed_by_conjugation(&self, q: &QuarticPrime) -> Result<bool> {
        let below = match self.subfield.splitting_type(q.p)?.splitting {
            Splitting::Split => 1,
            _ => 2,
        };
        Ok(q.e * q.f == 2 * below)
    }

    /// True iff no prime of the subfield over `p` splits in `k`.
    pub fn subfield_prime_nonsplit(&self, p: u64) -> Result<bool> {
        let g_l = self.subfield.primes_above(p)?.len();
        Ok(self.quartic_splitting(p)?.len() == g_l)
    }
}

impl PrimeShapes for QuarticField {
    fn degree(&self) -> u32 {
        4
    }

    fn prime_shapes(&self, p: u64) -> Result<Vec<(u32, u32)>> {
        self.quartic_splitting(p)
    }
}

impl fmt::Display for QuarticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Q[x]/(x^4")?;
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { '-' } else { '+' };
            let a = c.unsigned_abs();
            let coef = if a == 1 && i < 4 { String::new() } else { a.to_string() };
            let var = match 4 - i {
                0 => String::new(),
                1 => "x".to_string(),
                n => format!("x^{n}"),
            };
            write!(f, " {sign} {coef}{var}")?;
        }
        write!(f, "), d_k = {}", self.field_disc)
    }
}

/// Truncated Euler product for `zeta_k(2)`. The true value lies in
/// `[value, value * (1 + error_bound)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub prime_bound: u64,
    /// Primes left out because Dedekind's criterion does not apply there.
    pub skipped: Vec<u64>,
}

pub fn zeta2_euler_product<K: PrimeShapes + ?Sized>(field: &K, prime_bound: u64) -> Result<ZetaEstimate> {
    if prime_bound < 100 {
        return Err(Error::InvalidArgument("prime bound must be at least 100".into()));
    }
    let n = field.degree() as f64;
    let mut log_value = 0.0f64;
    let mut log_skipped = 0.0f64;
    let mut skipped = Vec::new();
    for p in primes_up_to(prime_bound) {
        let pf = p as f64;
        match field.prime_shapes(p) {
            Ok(shapes) => {
                for (f, _) in shapes {
                    log_value -= (-pf.powi(-2 * f as i32)).ln_1p();
                }
            }
            Err(Error::DedekindInapplicable(_)) => {
                skipped.push(p);
                log_skipped -= n * (-pf.powi(-2)).ln_1p();
            }
            Err(e) => return Err(e),
        }
    }
    // Each local factor is at most (1 - p^-2)^-n, and sum_{m > B} m^-2 <= 1/B.
    let b = prime_bound as f64;
    let tail = n / b / (1.0 - b.powi(-2));
    let error_bound = (tail + log_skipped).exp_m1() + 1e-12;
    Ok(ZetaEstimate { value: log_value.exp(), error_bound, prime_bound, skipped })
}

fn checked(x: Option<i128>) -> Result<i128> {
    x.ok_or_else(|| Error::InvalidQuartic("coefficients too large for 128-bit arithmetic".into()))
}

fn determinant(mut m: Vec<Vec<i128>>) -> Result<i128> {
    // Fraction-free Bareiss elimination.
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n.saturating_sub(1) {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = checked(m[i][j].checked_mul(m[k][k]))?;
                let b = checked(m[i][k].checked_mul(m[k][j]))?;
                m[i][j] = checked(a.checked_sub(b))? / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Discriminant of a monic quartic (leading-first coefficients) as the
/// resultant of `f` and `f'`.
pub fn discriminant(coeffs: &[i64; 5]) -> Result<i128> {
    let f: Vec<i128> = coeffs.iter().map(|&c| c as i128).collect();
    let df: Vec<i128> = (0..4).map(|i| f[i] * (4 - i) as i128).collect();
    let mut rows = Vec::with_capacity(7);
    for shift in 0..3 {
        let mut row = vec![0i128; 7];
        row[shift..shift + 5].copy_from_slice(&f);
        rows.push(row);
    }
    for shift in 0..4 {
        let mut row = vec![0i128; 7];
        row[shift..shift + 4].copy_from_slice(&df);
        rows.push(row);
    }
    // disc = (-1)^(n(n-1)/2) res(f, f') / lc(f) with n = 4 and lc = 1.
    determinant(rows)
}

type RatPoly = Vec<Rational>;

fn trim(p: &mut RatPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn rat_rem(a: &RatPoly, b: &RatPoly) -> Result<RatPoly> {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = *b.last().expect("nonzero divisor");
    let overflow = || Error::InvalidQuartic("Sturm sequence overflowed 128-bit rationals".into());
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let q = r.last().unwrap().checked_mul(&lb.recip()).ok_or_else(overflow)?;
        for (i, c) in b.iter().enumerate() {
            let t = q.checked_mul(c).ok_or_else(overflow)?;
            r[shift + i] = r[shift + i].checked_add(&(-t)).ok_or_else(overflow)?;
        }
        r.pop();
        trim(&mut r);
    }
    Ok(r)
}

/// Number of distinct real roots via a Sturm sequence.
pub fn count_real_roots(coeffs: &[i64; 5]) -> Result<u32> {
    let mut p0: RatPoly = coeffs.iter().rev().map(|&c| Rational::from(c)).collect();
    trim(&mut p0);
    let mut p1: RatPoly = p0.iter().enumerate().skip(1).map(|(i, c)| *c * Rational::from(i as i64)).collect();
    trim(&mut p1);
    let mut seq = vec![p0.clone()];
    while !p1.is_empty() {
        seq.push(p1.clone());
        let r: RatPoly = rat_rem(&p0, &p1)?.into_iter().map(|c| -c).collect();
        p0 = p1;
        p1 = r;
    }
    let changes = |signs: Vec<bool>| signs.windows(2).filter(|w| w[0] != w[1]).count() as i64;
    let at_pos: Vec<bool> = seq.iter().map(|p| p.last().unwrap().is_positive()).collect();
    let at_neg: Vec<bool> = seq.iter().map(|p| p.last().unwrap().is_positive() == ((p.len() - 1) % 2 == 0)).collect();
    Ok((changes(at_neg) - changes(at_pos)) as u32)
}

fn eval(coeffs: &[i64; 5], x: i128) -> Option<i128> {
    coeffs.iter().try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c as i128))
}

fn signed_divisors(n: i64) -> Vec<i64> {
    let mut divs = vec![1i64];
    for (p, k) in factorize(n.unsigned_abs()).unwrap_or_default() {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = 1i64;
            for _ in 0..=k {
                next.push(d * pk);
                pk *= p as i64;
            }
        }
        divs = next;
    }
    divs.iter().flat_map(|&d| [d, -d]).collect()
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Irreducibility of a monic integer quartic over Q: no integer root and no
/// factorization into two monic integer quadratics.
pub fn is_irreducible(coeffs: &[i64; 5]) -> bool {
    let [_, c3, c2, c1, c0] = coeffs.map(|c| c as i128);
    if c0 == 0 {
        return false;
    }
    let divisors = signed_divisors(coeffs[4]);
    if divisors.iter().any(|&r| eval(coeffs, r as i128) == Some(0)) {
        return false;
    }
    // (x^2 + a x + b)(x^2 + c x + d) with b d = c0, a + c = c3.
    for &b in &divisors {
        let b = b as i128;
        let d = c0 / b;
        let candidates: Vec<i128> = if d != b {
            let num = c1 - b * c3;
            if num % (d - b) != 0 {
                continue;
            }
            vec![num / (d - b)]
        } else {
            if c1 != b * c3 {
                continue;
            }
            let disc = c3 * c3 - 4 * (c2 - 2 * b);
            match isqrt(disc) {
                Some(s) if (c3 + s) % 2 == 0 => vec![(c3 + s) / 2, (c3 - s) / 2],
                _ => continue,
            }
        };
        for a in candidates {
            let c = c3 - a;
            if b + d + a * c == c2 && a * d + b * c == c1 {
                return false;
            }
        }
    }
    true
}

fn lift(g: &PolyModP) -> Vec<i128> {
    g.coeffs().iter().map(|&c| c as i128).collect()
}

fn int_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Dedekind's criterion: whether `p` divides the index `[O_k : Z[x]/(f)]`.
pub fn dedekind_divides_index(coeffs: &[i64; 5], p: u64) -> Result<bool> {
    let f_bar = PolyModP::from_desc(p, coeffs);
    let factors = poly_factor_mod_p(&f_bar)?;
    let one = PolyModP::constant(p, 1);
    let g_bar = factors.iter().fold(one.clone(), |acc, (g, _)| acc.mul(g));
    let h_bar = factors.iter().fold(one, |acc, (g, m)| (1..*m).fold(acc, |a, _| a.mul(g)));
    let mut gh = int_mul(&lift(&g_bar), &lift(&h_bar));
    let f_int: Vec<i128> = coeffs.iter().rev().map(|&c| c as i128).collect();
    gh.resize(gh.len().max(f_int.len()), 0);
    let quotient: Vec<i64> = gh
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let diff = c - f_int.get(i).copied().unwrap_or(0);
            debug_assert_eq!(diff % p as i128, 0);
            ((diff / p as i128).rem_euclid(p as i128)) as i64
        })
        .collect();
    let f1 = PolyModP::new(p, &quotient);
    let common = f1.gcd(&g_bar).gcd(&h_bar);
    Ok(common.degree().unwrap_or(0) > 0)
}

fn resolve_index(coeffs: &[i64; 5], disc_poly: i128, hint: Option<i128>) -> Result<(i128, u64)> {
    if disc_poly <= 0 || disc_poly > i64::MAX as i128 {
        return Err(Error::InvalidQuartic(format!("discriminant {disc_poly} out of range")));
    }
    let suspects: Vec<u64> =
        factorize(disc_poly as u64)?.into_iter().filter(|&(_, k)| k >= 2).map(|(p, _)| p).collect();
    let mut dividing = Vec::new();
    for &p in &suspects {
        if dedekind_divides_index(coeffs, p)? {
            dividing.push(p);
        }
    }
    match hint {
        None if dividing.is_empty() => Ok((disc_poly, 1)),
        None => Err(Error::InvalidQuartic(format!(
            "the polynomial index is divisible by {dividing:?}; supply the field discriminant"
        ))),
        Some(h) => {
            let bad = || Error::InvalidQuartic(format!("field discriminant {h} is inconsistent with {disc_poly}"));
            if h <= 0 || disc_poly % h != 0 {
                return Err(bad());
            }
            let index = isqrt(disc_poly / h).ok_or_else(bad)? as u64;
            let index_primes: Vec<u64> = factorize(index)?.into_iter().map(|(p, _)| p).collect();
            if index_primes != dividing {
                return Err(bad());
            }
            Ok((h, index))
        }
    }
}
