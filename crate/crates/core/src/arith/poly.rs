//! Dense polynomials over a prime field and their factorization
//! (squarefree decomposition, distinct-degree, Cantor-Zassenhaus).

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::integer::{is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

pub const MAX_PRIME: u64 = 1_000_000;
pub const MAX_DEGREE: usize = 8;

/// Polynomial over `F_p`; `coeffs[i]` is the coefficient of `x^i`.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyModP {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyModP {
    /// From coefficients in ascending degree order; integers are reduced mod `p`.
    pub fn new(p: u64, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        Self::from_residues(p, coeffs)
    }

    /// From coefficients listed leading-first, e.g. `[1, -1, -3, 1, 1]`.
    pub fn from_desc(p: u64, coeffs: &[i64]) -> Self {
        let asc: Vec<i64> = coeffs.iter().rev().copied().collect();
        Self::new(p, &asc)
    }

    fn from_residues(p: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyModP { p, coeffs }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::from_residues(p, vec![c % p])
    }

    fn x(p: u64) -> Self {
        Self::from_residues(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Coefficients in ascending degree order.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    fn make_monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.inv(self.leading());
        self.scale(inv)
    }

    fn scale(&self, c: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect();
        Self::from_residues(self.p, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + b) % self.p
            })
            .collect();
        Self::from_residues(self.p, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::from_residues(self.p, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::from_residues(self.p, Vec::new());
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Self::from_residues(self.p, out)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let p = self.p;
        let mut rem = self.coeffs.clone();
        let dd = divisor.deg();
        if rem.len() <= dd {
            return (Self::from_residues(p, Vec::new()), self.clone());
        }
        let inv_lead = self.inv(divisor.leading());
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], inv_lead, p);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p - mul_mod(c, d, p)) % p;
            }
        }
        rem.truncate(dd);
        (Self::from_residues(p, quot), Self::from_residues(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn derivative(&self) -> Self {
        let coeffs =
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p)).collect();
        Self::from_residues(self.p, coeffs)
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, mut exp: u128, modulus: &Self) -> Self {
        let mut result = Self::constant(self.p, 1).rem(modulus);
        let mut base = self.rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            exp >>= 1;
        }
        result
    }

    /// For `f(x) = g(x^p)` returns `g` (coefficients are their own p-th roots in `F_p`).
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        let coeffs = self.coeffs.iter().step_by(p).copied().collect();
        Self::from_residues(self.p, coeffs)
    }

    /// Coefficients leading-first, used for the canonical factor ordering.
    fn desc(&self) -> Vec<u64> {
        self.coeffs.iter().rev().copied().collect()
    }
}

impl fmt::Display for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        write!(f, " (mod {})", self.p)
    }
}

impl fmt::Debug for PolyModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn squarefree_decomposition(f: &PolyModP) -> Vec<(PolyModP, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    let fp = f.derivative();
    if fp.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = f.gcd(&fp);
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.deg() > 0 {
            out.push((z.make_monic(), i));
        }
        i += 1;
        w = y;
        c = c.div_rem(&w).0;
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

fn distinct_degree(f: &PolyModP) -> Vec<(PolyModP, usize)> {
    let p = f.p;
    let x = PolyModP::x(p);
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(p as u128, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
            out.push((g, d));
        }
    }
    if rest.deg() > 0 {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

/// Splits a product of distinct monic irreducibles of common degree `d`.
fn equal_degree(f: &PolyModP, d: usize, rng: &mut ChaCha8Rng) -> Vec<PolyModP> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let p = f.p;
    loop {
        let coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        let a = PolyModP::from_residues(p, coeffs);
        if a.deg() == 0 {
            continue;
        }
        let b = if p == 2 {
            // Trace map a + a^2 + ... + a^(2^(d-1)).
            let mut term = a.rem(f);
            let mut acc = term.clone();
            for _ in 1..d {
                term = term.mul(&term).rem(f);
                acc = acc.add(&term);
            }
            acc
        } else {
            // a^((p^d - 1)/2) = (a * a^p * ... * a^(p^(d-1)))^((p-1)/2)
            let mut frob = a.rem(f);
            let mut norm = frob.clone();
            for _ in 1..d {
                frob = frob.pow_mod(p as u128, f);
                norm = norm.mul(&frob).rem(f);
            }
            norm.pow_mod(((p - 1) / 2) as u128, f).sub(&PolyModP::constant(p, 1))
        };
        let g = f.gcd(&b);
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_rem(&g).0;
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}

/// Factors a monic polynomial over `F_p` into monic irreducibles with
/// multiplicities. Factors are sorted by degree, then by coefficients
/// leading-first.
pub fn poly_factor_mod_p(f: &PolyModP) -> Result<Vec<(PolyModP, u32)>> {
    let p = f.p;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p > MAX_PRIME {
        return Err(Error::InvalidArgument(format!("prime {p} exceeds {MAX_PRIME}")));
    }
    if f.is_zero() || f.deg() == 0 || !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.deg() > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!("degree {} exceeds {MAX_DEGREE}", f.deg())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let mut out = Vec::new();
    for (sqf, mult) in squarefree_decomposition(f) {
        for (block, d) in distinct_degree(&sqf) {
            for g in equal_degree(&block, d, &mut rng) {
                out.push((g, mult));
            }
        }
    }
    out.sort_by_key(|(a, ma)| (a.deg(), a.desc(), *ma));
    Ok(out)
}
