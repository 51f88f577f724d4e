//! Exact arithmetic kernel.

pub mod integer;
pub mod poly;
pub mod rational;
pub mod recognize;

pub use integer::{factorize, fundamental_discriminant, is_prime, kronecker, square_part};
pub use poly::{poly_factor_mod_p, PolyModP};
pub use rational::Rational;
pub use recognize::{recognize_rational, RecognitionFailure};
