//! Exact-arithmetic helpers: logarithms of big numbers, rational parsing,
//! and exact cost weights `e^{-s|F|}`.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Natural log of a positive big integer, accurate to f64 precision.
pub fn ln_biguint(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln of zero");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64-bit head");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    assert!(x.is_positive(), "ln of non-positive rational");
    ln_biguint(x.numer().magnitude()) - ln_biguint(x.denom().magnitude())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let Some(v) = x.to_f64().filter(|v| v.is_finite() && *v != 0.0) {
        return v;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln_rational(&x.abs()).exp()
}

/// Exact value of a finite f64 (every finite double is a dyadic rational).
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3/10"`, `"-2"`, or a decimal literal such as `"0.25"` into an
/// exact rational. Decimals are read exactly in base ten.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, fracpart)) = t.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches('-'), fracpart);
        let mag: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fracpart.len());
        let v = BigRational::new(mag, den);
        return Ok(if negative { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// The exponent `s` of a Carathéodory sum `Σ e^{-s|F_{n_i}|}`.
///
/// `LogRatio { base, per }` stands for `s = ln(base) / per`; its weights are
/// exact whenever `per` divides the set size. All other weights are the
/// exact rational value of the f64 `exp(-s·size)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Real(f64),
    LogRatio { base: (i64, i64), per: u64 },
}

impl Exponent {
    pub fn real(s: f64) -> Self {
        Exponent::Real(s)
    }

    /// `s = ln(num/den) / per`.
    pub fn log_ratio(num: i64, den: i64, per: u64) -> Self {
        assert!(num > 0 && den > 0 && per > 0);
        Exponent::LogRatio { base: (num, den), per }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Exponent::Real(s) => s,
            Exponent::LogRatio { base: (n, d), per } => (ln_rational(&frac(n, d))) / per as f64,
        }
    }

    /// Exact rational weight `e^{-s·size}`.
    pub fn weight(&self, size: usize) -> BigRational {
        match *self {
            Exponent::LogRatio { base: (n, d), per } if (size as u64).is_multiple_of(per) => {
                let k = (size as u64 / per) as usize;
                let b = frac(d, n);
                num_traits::pow(b, k)
            }
            _ => rational_from_f64(self.weight_f64(size)),
        }
    }

    pub fn weight_f64(&self, size: usize) -> f64 {
        (-self.value() * size as f64).exp()
    }

    pub fn shifted(&self, delta: f64) -> Exponent {
        Exponent::Real(self.value() + delta)
    }
}

/// Parses a nonnegative rational into `Ratio<u64>` (e.g. a radius `"1/8"`).
pub fn parse_ratio_u64(text: &str) -> Result<num_rational::Ratio<u64>> {
    let r = parse_rational(text)?;
    match (r.numer().to_u64(), r.denom().to_u64()) {
        (Some(n), Some(d)) => Ok(num_rational::Ratio::new(n, d)),
        _ => Err(Error::Parse(format!("not a small nonnegative rational: {text:?}"))),
    }
}

impl Exponent {
    /// Reads `"0.5"`, `"ln(2)"`, `"ln(55)/8"` or `"log(3/2)/4"`.
    pub fn parse(text: &str) -> Result<Exponent> {
        let t = text.trim();
        let bad = || Error::Parse(format!("not an exponent: {text:?}"));
        let body = t.strip_prefix("ln(").or_else(|| t.strip_prefix("log("));
        let Some(body) = body else {
            return t.parse::<f64>().map(Exponent::real).map_err(|_| bad());
        };
        let (arg, rest) = body.split_once(')').ok_or_else(bad)?;
        let per = match rest.trim() {
            "" => 1,
            r => r
                .strip_prefix('/')
                .ok_or_else(bad)?
                .trim()
                .parse::<u64>()
                .map_err(|_| bad())?,
        };
        let base = parse_rational(arg)?;
        match (base.numer().to_i64(), base.denom().to_i64()) {
            (Some(n), Some(d)) if n > 0 && per > 0 => Ok(Exponent::log_ratio(n, d, per)),
            _ => Err(bad()),
        }
    }
}

/// Serializes a rational as its `"p/q"` string.
pub fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

pub fn ser_rationals<S: serde::Serializer>(xs: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(format_rational))
}

/// Sign helper for comparing a rational with zero.
pub fn is_nonnegative(x: &BigRational) -> bool {
    x.numer().sign() != Sign::Minus
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_of_huge_integer() {
        let x = num_traits::pow(BigUint::from(3u32), 2000);
        let expected = 2000.0 * 3f64.ln();
        assert!((ln_biguint(&x) - expected).abs() < 1e-9);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3/10").unwrap(), frac(3, 10));
        assert_eq!(parse_rational("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn log_ratio_weights_are_exact() {
        let s = Exponent::log_ratio(2, 1, 1);
        assert_eq!(s.weight(3), frac(1, 8));
        let s = Exponent::log_ratio(55, 1, 8);
        assert_eq!(s.weight(8), frac(1, 55));
        assert_eq!(s.weight(16), frac(1, 3025));
        assert!((s.value() - 55f64.ln() / 8.0).abs() < 1e-15);
    }

    #[test]
    fn exponent_literals() {
        assert_eq!(Exponent::parse("ln(55)/8").unwrap(), Exponent::log_ratio(55, 1, 8));
        assert_eq!(Exponent::parse("log(3/2)").unwrap(), Exponent::log_ratio(3, 2, 1));
        assert_eq!(Exponent::parse("0.25").unwrap(), Exponent::real(0.25));
        assert!(Exponent::parse("ln(0)").is_err());
        assert!(Exponent::parse("ln(2)*3").is_err());
        assert_eq!(parse_ratio_u64("1/8").unwrap(), num_rational::Ratio::new(1, 8));
        assert!(parse_ratio_u64("-1/8").is_err());
    }

    #[test]
    fn real_weights_match_float() {
        let s = Exponent::real(0.37);
        let w = s.weight(5);
        assert_eq!(rational_to_f64(&w), (-0.37f64 * 5.0).exp());
        assert_eq!(Exponent::real(0.0).weight(9), int(1));
    }
}
