//! Coefficient arithmetic: exact Gaussian rationals with a floating fallback.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::Complex;

pub type C64 = Complex<f64>;

/// A complex number `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact quotient; `None` when dividing by zero.
    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let n = rhs.norm_sqr();
        let num = self.clone() * rhs.conj();
        Some(Self::new(num.re / &n, num.im / n))
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self::new(re, im)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

/// A coefficient that stays exact as long as every input was exact.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(GaussRat),
    Float(C64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(GaussRat::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(GaussRat::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(GaussRat::from_int(v))
    }

    pub fn rational(r: BigRational) -> Self {
        Scalar::Exact(GaussRat::real(r))
    }

    pub fn float(re: f64) -> Self {
        Scalar::Float(C64::new(re, 0.0))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(g) => g.is_zero(),
            Scalar::Float(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Scalar::Exact(g) => g.to_c64(),
            Scalar::Float(c) => *c,
        }
    }

    pub fn as_exact(&self) -> Option<&GaussRat> {
        match self {
            Scalar::Exact(g) => Some(g),
            Scalar::Float(_) => None,
        }
    }

    pub fn pow(&self, p: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..p {
            acc = acc * self.clone();
        }
        acc
    }

    pub fn abs(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl From<GaussRat> for Scalar {
    fn from(g: GaussRat) -> Self {
        Scalar::Exact(g)
    }
}

impl From<C64> for Scalar {
    fn from(c: C64) -> Self {
        Scalar::Float(c)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            (a, b) => Scalar::Float(a.to_c64() + b.to_c64()),
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            (a, b) => Scalar::Float(a.to_c64() * b.to_c64()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Self {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Float(c) => Scalar::Float(-c),
        }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_float(v: f64) -> String {
    // `{:?}` keeps a decimal point or exponent so the text re-parses as the same value.
    format!("{v:?}")
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(g) => {
                if g.im.is_zero() {
                    return f.write_str(&fmt_rat(&g.re));
                }
                let im_abs = g.im.abs();
                let im_txt = if im_abs.is_one() {
                    "i".to_string()
                } else {
                    format!("{}*i", fmt_rat(&im_abs))
                };
                if g.re.is_zero() {
                    if g.im.is_negative() {
                        write!(f, "-{im_txt}")
                    } else {
                        f.write_str(&im_txt)
                    }
                } else {
                    let sign = if g.im.is_negative() { '-' } else { '+' };
                    write!(f, "{}{sign}{im_txt}", fmt_rat(&g.re))
                }
            }
            Scalar::Float(c) => {
                if c.im == 0.0 {
                    f.write_str(&fmt_float(c.re))
                } else {
                    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
                    write!(f, "{}{sign}{}*i", fmt_float(c.re), fmt_float(c.im.abs()))
                }
            }
        }
    }
}

/// A real parameter such as a dilation or a coefficient magnitude.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Rational(BigRational),
    Float(f64),
}

impl Real {
    pub fn from_int(v: i64) -> Self {
        Real::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Rational(r) => rat_to_f64(r),
            Real::Float(v) => *v,
        }
    }

    pub fn to_scalar(&self) -> Scalar {
        match self {
            Real::Rational(r) => Scalar::rational(r.clone()),
            Real::Float(v) => Scalar::float(*v),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Real::Rational(r) => r.is_one(),
            Real::Float(v) => *v == 1.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Real::Rational(r) => r.is_positive(),
            Real::Float(v) => *v > 0.0,
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rational(r) => f.write_str(&fmt_rat(r)),
            Real::Float(v) => f.write_str(&fmt_float(*v)),
        }
    }
}

/// An angle in radians, carried exactly when it is a rational multiple of π.
#[derive(Clone, Debug)]
pub struct Angle {
    pi_multiple: Option<BigRational>,
    radians: f64,
}

impl Angle {
    pub fn zero() -> Self {
        Self::pi_fraction(0, 1)
    }

    pub fn pi_fraction(num: i64, den: i64) -> Self {
        Self::from_pi_multiple(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_pi_multiple(q: BigRational) -> Self {
        let radians = rat_to_f64(&q) * std::f64::consts::PI;
        Self { pi_multiple: Some(q), radians }
    }

    pub fn from_radians(radians: f64) -> Self {
        if radians == 0.0 {
            return Self::zero();
        }
        Self { pi_multiple: None, radians }
    }

    pub fn radians(&self) -> f64 {
        self.radians
    }

    pub fn pi_multiple(&self) -> Option<&BigRational> {
        self.pi_multiple.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        match &self.pi_multiple {
            Some(q) => q.is_zero(),
            None => self.radians == 0.0,
        }
    }

    pub fn neg(&self) -> Angle {
        match &self.pi_multiple {
            Some(q) => Angle::from_pi_multiple(-q.clone()),
            None => Angle::from_radians(-self.radians),
        }
    }

    pub fn add(&self, other: &Angle) -> Angle {
        match (&self.pi_multiple, &other.pi_multiple) {
            (Some(a), Some(b)) => Angle::from_pi_multiple(a + b),
            _ => Angle::from_radians(self.radians + other.radians),
        }
    }

    /// `(cos, sin)`, exact when the angle is a multiple of π/2.
    pub fn cos_sin(&self) -> (Scalar, Scalar) {
        if let Some(q) = &self.pi_multiple {
            let twice = q * BigRational::from_integer(BigInt::from(2));
            if twice.is_integer() {
                let quarter = twice
                    .to_integer()
                    .mod_floor_i64(4);
                let (c, s) = match quarter {
                    0 => (1, 0),
                    1 => (0, 1),
                    2 => (-1, 0),
                    _ => (0, -1),
                };
                return (Scalar::from_int(c), Scalar::from_int(s));
            }
        }
        let (s, c) = self.radians.sin_cos();
        (Scalar::float(c), Scalar::float(s))
    }

    /// Strict comparison of absolute values, exact when both are π-multiples.
    pub fn abs_lt(&self, other: &Angle) -> bool {
        match (&self.pi_multiple, &other.pi_multiple) {
            (Some(a), Some(b)) => a.abs().cmp(&b.abs()) == Ordering::Less,
            _ => self.radians.abs() < other.radians.abs() - 1e-12,
        }
    }
}

impl PartialEq for Angle {
    fn eq(&self, other: &Self) -> bool {
        match (&self.pi_multiple, &other.pi_multiple) {
            (Some(a), Some(b)) => a == b,
            (None, None) => self.radians == other.radians,
            _ => false,
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pi_multiple {
            Some(q) if q.is_zero() => f.write_str("0"),
            Some(q) => {
                let n = q.numer();
                let d = q.denom();
                let head = if n.is_one() {
                    "pi".to_string()
                } else if *n == -BigInt::one() {
                    "-pi".to_string()
                } else {
                    format!("{n}*pi")
                };
                if d.is_one() {
                    f.write_str(&head)
                } else {
                    write!(f, "{head}/{d}")
                }
            }
            None => f.write_str(&fmt_float(self.radians)),
        }
    }
}

trait ModFloorI64 {
    fn mod_floor_i64(&self, m: i64) -> i64;
}

impl ModFloorI64 for BigInt {
    fn mod_floor_i64(&self, m: i64) -> i64 {
        use num::Integer;
        self.mod_floor(&BigInt::from(m)).to_i64().unwrap_or(0)
    }
}
