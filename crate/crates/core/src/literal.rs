//! Numeric literal grammar shared by every config field.
//!
//! ```text
//! real    := sign? number ('/' number)?          "3/2", "-0.25", "1e-3"
//! angle   := real | sign? (number '*'?)? 'pi' ('/' number)?
//!                                                 "pi/2", "-2*pi/3", "0"
//! complex := term (('+' | '-') term)*             "1/2-3*i", "2i", "-i"
//! term    := real | (number '*'?)? 'i'
//! ```
//!
//! Decimals and exponents are converted to exact rationals, so `0.99` is
//! `99/100`. Exponents are limited to `|e| <= 64`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Pow, Zero};
use thiserror::Error;

use crate::algebra::{Angle, GaussRat, Real, Scalar};

const MAX_LITERAL_LEN: usize = 128;
const MAX_EXPONENT: i64 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("empty literal")]
    Empty,
    #[error("literal longer than {MAX_LITERAL_LEN} characters")]
    TooLong,
    #[error("malformed number `{0}`")]
    BadNumber(String),
    #[error("division by zero in `{0}`")]
    ZeroDenominator(String),
    #[error("exponent out of range in `{0}`")]
    ExponentRange(String),
    #[error("`pi` is only allowed in angle literals: `{0}`")]
    UnexpectedPi(String),
    #[error("imaginary unit is only allowed in coefficient literals: `{0}`")]
    UnexpectedImaginary(String),
}

fn check_len(s: &str) -> Result<&str, LiteralError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(LiteralError::Empty);
    }
    if t.len() > MAX_LITERAL_LEN {
        return Err(LiteralError::TooLong);
    }
    Ok(t)
}

/// Unsigned decimal such as `12`, `0.5`, `.5`, `3e-2`.
fn parse_unsigned_decimal(s: &str) -> Result<BigRational, LiteralError> {
    let bad = || LiteralError::BadNumber(s.to_string());
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp_txt = &s[pos + 1..];
            let exp: i64 = exp_txt.parse().map_err(|_| bad())?;
            if exp.abs() > MAX_EXPONENT {
                return Err(LiteralError::ExponentRange(s.to_string()));
            }
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * Pow::pow(&ten, scale as u64))
    } else {
        BigRational::new(numer, Pow::pow(&ten, (-scale) as u64))
    };
    Ok(value)
}

fn split_sign(s: &str) -> (bool, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        (true, rest.trim_start())
    } else if let Some(rest) = s.strip_prefix('+') {
        (false, rest.trim_start())
    } else {
        (false, s)
    }
}

fn parse_unsigned_ratio(s: &str) -> Result<BigRational, LiteralError> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_unsigned_decimal(n.trim())?;
            let d = parse_unsigned_decimal(d.trim())?;
            if d.is_zero() {
                return Err(LiteralError::ZeroDenominator(s.to_string()));
            }
            Ok(n / d)
        }
        None => parse_unsigned_decimal(s),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, LiteralError> {
    let t = check_len(s)?;
    if t.contains("pi") {
        return Err(LiteralError::UnexpectedPi(t.to_string()));
    }
    let (neg, body) = split_sign(t);
    let v = parse_unsigned_ratio(body)?;
    Ok(if neg { -v } else { v })
}

pub fn parse_real(s: &str) -> Result<Real, LiteralError> {
    parse_rational(s).map(Real::Rational)
}

/// Angle literal; bare numbers are radians.
pub fn parse_angle(s: &str) -> Result<Angle, LiteralError> {
    let t = check_len(s)?;
    let Some(pos) = t.find("pi") else {
        let r = parse_rational(t)?;
        if r.is_zero() {
            return Ok(Angle::zero());
        }
        return Ok(Angle::from_radians(crate::algebra::scalar::rat_to_f64(&r)));
    };
    let (neg, _) = split_sign(t);
    let head = t[..pos].trim();
    let (_, head) = split_sign(head);
    let head = head.trim_end();
    let head = head.strip_suffix('*').unwrap_or(head).trim_end();
    let coef = if head.is_empty() {
        BigRational::one()
    } else {
        parse_unsigned_ratio(head)?
    };
    let tail = t[pos + 2..].trim();
    let den = if tail.is_empty() {
        BigRational::one()
    } else {
        let d = tail
            .strip_prefix('/')
            .ok_or_else(|| LiteralError::BadNumber(t.to_string()))?;
        let d = parse_unsigned_decimal(d.trim())?;
        if d.is_zero() {
            return Err(LiteralError::ZeroDenominator(t.to_string()));
        }
        d
    };
    let q = coef / den;
    Ok(Angle::from_pi_multiple(if neg { -q } else { q }))
}

/// Splits `a+b-c` into signed terms, leaving exponent signs (`1e-3`) alone.
fn split_terms(t: &str) -> Vec<(bool, &str)> {
    let bytes = t.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if (c == b'+' || c == b'-') && i > 0 {
            let prev = t[..i].trim_end().bytes().last();
            let after_exp = matches!(prev, Some(b'e') | Some(b'E'))
                && t[..i].trim_end().len() >= 2
                && t[..i].trim_end().as_bytes()[t[..i].trim_end().len() - 2].is_ascii_digit();
            if !after_exp && prev.is_some() && prev != Some(b'/') && prev != Some(b'*') {
                out.push((neg, t[start..i].trim()));
                neg = c == b'-';
                start = i + 1;
            }
        } else if (c == b'+' || c == b'-') && i == 0 {
            neg = c == b'-';
            start = 1;
        }
        i += 1;
    }
    out.push((neg, t[start..].trim()));
    out
}

/// Complex coefficient literal.
pub fn parse_scalar(s: &str) -> Result<Scalar, LiteralError> {
    let t = check_len(s)?;
    if t.contains("pi") {
        return Err(LiteralError::UnexpectedPi(t.to_string()));
    }
    let mut re = BigRational::zero();
    let mut im = BigRational::zero();
    for (neg, term) in split_terms(t) {
        if term.is_empty() {
            return Err(LiteralError::BadNumber(t.to_string()));
        }
        let (imag, body) = match term.strip_suffix('i') {
            Some(b) => {
                let b = b.trim_end();
                (true, b.strip_suffix('*').unwrap_or(b).trim_end())
            }
            None => (false, term),
        };
        let v = if imag && body.is_empty() {
            BigRational::one()
        } else {
            parse_unsigned_ratio(body)?
        };
        let v = if neg { -v } else { v };
        if imag {
            im += v;
        } else {
            re += v;
        }
    }
    Ok(Scalar::Exact(GaussRat::new(re, im)))
}

/// Real-valued literal that rejects an imaginary part.
pub fn parse_real_scalar(s: &str) -> Result<Real, LiteralError> {
    match parse_scalar(s)? {
        Scalar::Exact(g) if g.im.is_zero() => Ok(Real::Rational(g.re)),
        _ => Err(LiteralError::UnexpectedImaginary(s.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("0.99").unwrap(), q(99, 100));
        assert_eq!(parse_rational("-3/2").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5e1").unwrap(), q(25, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e999").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn angle_forms() {
        assert_eq!(parse_angle("pi/2").unwrap(), Angle::pi_fraction(1, 2));
        assert_eq!(parse_angle("-2*pi/3").unwrap(), Angle::pi_fraction(-2, 3));
        assert_eq!(parse_angle("2pi/3").unwrap(), Angle::pi_fraction(2, 3));
        assert_eq!(parse_angle("pi").unwrap(), Angle::pi_fraction(1, 1));
        assert_eq!(parse_angle("0").unwrap(), Angle::zero());
        assert!((parse_angle("0.5").unwrap().radians() - 0.5).abs() < 1e-15);
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("pi*2").is_err());
    }

    #[test]
    fn complex_forms() {
        let z = parse_scalar("1/2-3*i").unwrap();
        assert_eq!(z, Scalar::Exact(GaussRat::new(q(1, 2), q(-3, 1))));
        assert_eq!(parse_scalar("-i").unwrap(), Scalar::Exact(GaussRat::new(q(0, 1), q(-1, 1))));
        assert_eq!(parse_scalar("2i").unwrap(), Scalar::Exact(GaussRat::new(q(0, 1), q(2, 1))));
        assert_eq!(parse_scalar("1e-2+1").unwrap(), Scalar::Exact(GaussRat::new(q(101, 100), q(0, 1))));
        assert!(parse_scalar("1+").is_err());
        assert!(parse_scalar("pi").is_err());
        assert!(parse_real_scalar("1+i").is_err());
    }

    #[test]
    fn display_reparses() {
        for txt in ["1/2-3*i", "-7/3", "i", "-i", "5*i", "2+i"] {
            let v = parse_scalar(txt).unwrap();
            assert_eq!(parse_scalar(&v.to_string()).unwrap(), v, "{txt}");
        }
        for txt in ["pi/2", "-2*pi/3", "0", "pi", "-pi/4"] {
            let a = parse_angle(txt).unwrap();
            assert_eq!(parse_angle(&a.to_string()).unwrap(), a, "{txt}");
        }
    }
}
