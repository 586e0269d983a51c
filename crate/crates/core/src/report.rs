//! Serialization helpers shared by the report types. Big integers and exact
//! rationals are written as decimal strings; they routinely exceed 64 bits.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serializer;

pub fn ser_biguint<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_str_radix(10))
}

pub fn ser_biguint_vec<S: Serializer>(values: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(|v| v.to_str_radix(10)))
}

pub fn ser_rational<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(value))
}

/// `p/q` in lowest terms, or `p` when the denominator is one.
pub fn rational_string(value: &BigRational) -> String {
    if value.denom() == &BigInt::from(1) {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal expansion of `value` rounded half away from zero to `places`
/// fractional digits.
pub fn rational_decimal(value: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = value * BigRational::from_integer(scale.clone());
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let twice = r.abs() * 2u32;
    let mut digits = q.abs();
    if twice >= scaled.denom().abs() {
        digits += 1u32;
    }
    let negative = value.is_negative() && !digits.is_zero();
    let (int_part, frac_part) = digits.div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if places > 0 {
        let frac = frac_part.to_string();
        out.push('.');
        out.push_str(&"0".repeat(places - frac.len()));
        out.push_str(&frac);
    }
    out
}

pub fn rational_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals() {
        assert_eq!(rational_decimal(&q(1, 3), 5), "0.33333");
        assert_eq!(rational_decimal(&q(2, 3), 3), "0.667");
        assert_eq!(rational_decimal(&q(-1, 8), 2), "-0.13");
        assert_eq!(rational_decimal(&q(-1, 1000), 2), "0.00");
        assert_eq!(rational_decimal(&q(7, 1), 0), "7");
        assert_eq!(rational_decimal(&q(12, 16), 4), "0.7500");
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_string(&q(12, 16)), "3/4");
        assert_eq!(rational_string(&q(4, 2)), "2");
    }
}
