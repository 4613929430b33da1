//! Small helpers around `BigRational` / `BigUint`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{LabError, Result};

pub fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_biguint(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

/// `base^exp` for a possibly negative integer exponent.
pub fn pow(base: &BigRational, exp: i64) -> BigRational {
    if exp == 0 {
        return BigRational::one();
    }
    let e = u32::try_from(exp.unsigned_abs()).expect("exponent too large");
    let p = num_traits::pow(base.clone(), e as usize);
    if exp < 0 {
        p.recip()
    } else {
        p
    }
}

/// Renders a rational as `"num/den"`, or `"num"` for integers.
pub fn format(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"3"`, `"3/4"` or a finite decimal such as `"0.25"` exactly.
pub fn parse(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || LabError::InvalidParameter(format!("not a rational number: {text:?}"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| bad())?
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let frac_part = BigRational::new(frac_num, scale);
        let whole = BigRational::from_integer(whole);
        return Ok(if negative {
            whole - frac_part
        } else {
            whole + frac_part
        });
    }
    let n: BigInt = text.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Natural logarithm of a positive rational, accurate for huge numerators
/// and denominators.
pub fn ln(r: &BigRational) -> f64 {
    assert!(r > &BigRational::zero(), "logarithm of a non-positive rational");
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ if r.is_zero() => 0.0,
        _ => {
            let sign = if r < &BigRational::zero() { -1.0 } else { 1.0 };
            sign * ln(&num_traits::Signed::abs(r)).exp()
        }
    }
}

pub fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub fn ser_opt_rational<S: serde::Serializer>(
    r: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format(r)),
        None => s.serialize_none(),
    }
}

pub fn ser_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("2").unwrap(), int(2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(format(&int(16)), "16");
        assert_eq!(format(&ratio(9, 8)), "9/8");
    }

    #[test]
    fn negative_powers_invert() {
        assert_eq!(pow(&ratio(2, 3), -2), ratio(9, 4));
        assert_eq!(pow(&ratio(2, 3), 0), int(1));
    }

    #[test]
    fn log_of_huge_ratio() {
        let big = BigRational::from_integer(num_traits::pow(BigInt::from(3u32), 2000));
        let expected = 2000.0 * 3f64.ln();
        assert!((ln(&big) - expected).abs() < 1e-9 * expected);
    }
}
