//! Base-2 logarithms of exact big numbers.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// `log2(x)`; `-inf` for zero.
pub fn log2_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let shift = x.bits().saturating_sub(64);
    let top = (x >> shift).to_u64().unwrap();
    libm::log2(top as f64) + shift as f64
}

/// `log2(r)` for a non-negative rational; `-inf` for zero.
pub fn log2_ratio(r: &BigRational) -> f64 {
    assert!(r.numer().sign() != Sign::Minus, "log2 of a negative number");
    let to_u = |v: &BigInt| v.magnitude().clone();
    log2_biguint(&to_u(r.numer())) - log2_biguint(&to_u(r.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn powers_of_two_are_exact() {
        for e in [0u32, 1, 63, 64, 65, 1000] {
            assert_eq!(log2_biguint(&(BigUint::one() << e)), e as f64);
        }
        let r = BigRational::new(BigInt::one(), BigInt::one() << 37u32);
        assert_eq!(log2_ratio(&r), -37.0);
    }

    #[test]
    fn matches_float_for_small_values() {
        for v in [3u64, 10, 997, 123_456_789] {
            assert!((log2_biguint(&BigUint::from(v)) - libm::log2(v as f64)).abs() < 1e-12);
        }
    }
}
