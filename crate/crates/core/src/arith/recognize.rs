//! Rational recognition of floating-point values via continued fractions.

use std::fmt;

use super::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecognitionFailure {
    /// No convergent with an admissible denominator lies within tolerance.
    NoCandidate,
    /// Several convergents lie within twice the tolerance.
    Ambiguous(Vec<Rational>),
    /// Non-finite input or non-positive tolerance.
    BadInput,
}

impl fmt::Display for RecognitionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecognitionFailure::NoCandidate => write!(f, "no rational candidate within tolerance"),
            RecognitionFailure::Ambiguous(c) => {
                let list: Vec<String> = c.iter().map(|r| r.to_string()).collect();
                write!(f, "ambiguous candidates {}", list.join(", "))
            }
            RecognitionFailure::BadInput => write!(f, "non-finite value or non-positive tolerance"),
        }
    }
}

/// Continued-fraction convergents of `x` with denominator at most `max_den`.
pub fn convergents(x: f64, max_den: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h_prev, mut h) = (1i128, x.floor() as i128);
    let (mut k_prev, mut k) = (0i128, 1i128);
    let mut frac = x - x.floor();
    out.push(Rational::new(h, k));
    for _ in 0..64 {
        if frac.abs() < 1e-300 {
            break;
        }
        let y = 1.0 / frac;
        if !y.is_finite() || y > 1e18 {
            break;
        }
        let a = y.floor() as i128;
        frac = y - y.floor();
        let h_next = a * h + h_prev;
        let k_next = a * k + k_prev;
        if k_next > max_den as i128 {
            break;
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        out.push(Rational::new(h, k));
    }
    out
}

/// Returns the unique convergent `r` of `x` with `den(r) <= max_den` and
/// `|x - r| <= tol`, provided no other convergent lies within `2 * tol`.
pub fn recognize_rational(x: f64, max_den: u64, tol: f64) -> Result<Rational, RecognitionFailure> {
    if !x.is_finite() || tol.is_nan() || tol <= 0.0 {
        return Err(RecognitionFailure::BadInput);
    }
    let near: Vec<Rational> =
        convergents(x, max_den).into_iter().filter(|r| (x - r.to_f64()).abs() <= 2.0 * tol).collect();
    match near.as_slice() {
        [] => Err(RecognitionFailure::NoCandidate),
        [r] if (x - r.to_f64()).abs() <= tol => Ok(*r),
        [_] => Err(RecognitionFailure::NoCandidate),
        _ => Err(RecognitionFailure::Ambiguous(near)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(recognize_rational(0.0666666671, 100, 1e-6), Ok(Rational::new(1, 15)));
        assert_eq!(recognize_rational(0.5, 10, 1e-9), Ok(Rational::new(1, 2)));
        assert!(recognize_rational(0.1234, 3, 1e-9).is_err());
    }

    #[test]
    fn negative_and_integral_values() {
        assert_eq!(recognize_rational(-2.0 / 3.0, 100, 1e-9), Ok(Rational::new(-2, 3)));
        assert_eq!(recognize_rational(28.0000000001, 10_000, 1e-6), Ok(Rational::from_integer(28)));
    }

    #[test]
    fn margin_rejects_close_pairs() {
        // 1/3 and 10/31 are both convergents of 0.3225 and both within 2 * 0.01.
        match recognize_rational(0.3225, 100, 0.01) {
            Err(RecognitionFailure::Ambiguous(c)) => assert!(c.len() >= 2),
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn bad_input() {
        assert_eq!(recognize_rational(f64::NAN, 10, 1e-3), Err(RecognitionFailure::BadInput));
        assert_eq!(recognize_rational(0.5, 10, 0.0), Err(RecognitionFailure::BadInput));
    }
}
