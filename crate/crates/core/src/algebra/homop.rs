//! Homogeneous constant-coefficient differential operators in two variables.
//!
//! Operators act through plain partial derivatives: the symbol of
//! `∂^a/∂y1^a ∂^b/∂y2^b` is `ζ1^a ζ2^b`. The Fourier convention `D = -i∂`
//! only rescales rows by powers of `-i`, which leaves every zero set and
//! rank computed here unchanged.

use std::fmt;

use super::scalar::{Angle, Real, Scalar, C64};
use super::AlgebraError;

/// Symbol `Σ c[i] ζ1^(d-i) ζ2^i` of a homogeneous operator of degree `d`.
///
/// Coefficients are stored densely, ordered by the power of `ζ1` descending;
/// this is also the column order used when operators are vectorized.
#[derive(Clone, Debug, PartialEq)]
pub struct HomOp {
    degree: u32,
    coeffs: Vec<Scalar>,
}

impl HomOp {
    pub fn zero(degree: u32) -> Self {
        Self { degree, coeffs: vec![Scalar::zero(); degree as usize + 1] }
    }

    pub fn constant(c: Scalar) -> Self {
        Self { degree: 0, coeffs: vec![c] }
    }

    pub fn identity() -> Self {
        Self::constant(Scalar::one())
    }

    /// `c · ζ1^a1 ζ2^a2`.
    pub fn monomial(a1: u32, a2: u32, c: Scalar) -> Self {
        let mut op = Self::zero(a1 + a2);
        op.coeffs[a2 as usize] = c;
        op
    }

    pub fn from_terms<I>(degree: u32, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (u32, u32, Scalar)>,
    {
        let mut op = Self::zero(degree);
        for (a1, a2, c) in terms {
            if a1 + a2 != degree {
                return Err(AlgebraError::DegreeMismatch { expected: degree, found: a1 + a2 });
            }
            let slot = &mut op.coeffs[a2 as usize];
            *slot = slot.clone() + c;
        }
        Ok(op)
    }

    /// Coefficients indexed by the power of `ζ2`, i.e. `P(1, τ) = Σ c[i] τ^i`.
    pub fn from_dense(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a homogeneous operator has at least one coefficient");
        Self { degree: coeffs.len() as u32 - 1, coeffs }
    }

    /// The Laplacian `ζ1² + ζ2²`.
    pub fn laplacian() -> Self {
        Self::from_dense(vec![Scalar::one(), Scalar::zero(), Scalar::one()])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, a1: u32, a2: u32) -> Scalar {
        if a1 + a2 != self.degree {
            return Scalar::zero();
        }
        self.coeffs[a2 as usize].clone()
    }

    /// Nonzero terms as `(a1, a2, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Scalar)> + '_ {
        let d = self.degree;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (d - i as u32, i as u32, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn evaluate(&self, z1: C64, z2: C64) -> C64 {
        let d = self.degree as i32;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_c64() * z1.powi(d - i as i32) * z2.powi(i as i32))
            .sum()
    }

    /// Value of `P(1, τ)`.
    pub fn at_slope(&self, tau: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * tau + c.to_c64())
    }

    pub fn scale(&self, s: &Scalar) -> HomOp {
        Self { degree: self.degree, coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn try_add(&self, other: &HomOp) -> Result<HomOp, AlgebraError> {
        if self.degree != other.degree {
            return Err(AlgebraError::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Self { degree: self.degree, coeffs })
    }

    /// Symbol product, i.e. operator composition.
    pub fn compose(&self, other: &HomOp) -> HomOp {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let slot = &mut out.coeffs[i + j];
                *slot = slot.clone() + a.clone() * b.clone();
            }
        }
        out
    }

    /// `(∂/∂d)^p ∘ self`, the symbol multiplied by `(d1 ζ1 + d2 ζ2)^p`.
    pub fn directional_power(&self, dir: &Direction, p: u32) -> HomOp {
        let lin = HomOp::from_dense(vec![dir.cos.clone(), dir.sin.clone()]);
        let mut out = self.clone();
        for _ in 0..p {
            out = lin.compose(&out);
        }
        out
    }

    /// Operator obtained by differentiating `(B u)(G y)` `p` times along `ray`,
    /// where `G` rotates counter-clockwise by `rotation` and dilates by `dilation`,
    /// then evaluating at `y` instead of `G y`: `χ^p ((Rτ)·∇)^p ∘ B`.
    pub fn pullback_hat(&self, ray: &Direction, rotation: &Angle, dilation: &Real, p: u32) -> HomOp {
        let turned = ray.rotated(rotation);
        self.directional_power(&turned, p).scale(&dilation.to_scalar().pow(p))
    }

    /// Multiplies by the monomial `ζ1^a1 ζ2^a2` (i.e. applies `D^ξ`).
    pub fn times_monomial(&self, a1: u32, a2: u32) -> HomOp {
        HomOp::monomial(a1, a2, Scalar::one()).compose(self)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs).fold(0.0, f64::max)
    }
}

impl fmt::Display for HomOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a1, a2, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if a1 > 0 {
                write!(f, "·ζ1^{a1}")?;
            }
            if a2 > 0 {
                write!(f, "·ζ2^{a2}")?;
            }
        }
        if first {
            write!(f, "0[deg {}]", self.degree)?;
        }
        Ok(())
    }
}

/// Unit vector `(cos θ, sin θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    angle: Angle,
    cos: Scalar,
    sin: Scalar,
}

impl Direction {
    pub fn new(angle: Angle) -> Self {
        let (cos, sin) = angle.cos_sin();
        Self { angle, cos, sin }
    }

    pub fn angle(&self) -> &Angle {
        &self.angle
    }

    pub fn components(&self) -> (Scalar, Scalar) {
        (self.cos.clone(), self.sin.clone())
    }

    pub fn rotated(&self, by: &Angle) -> Direction {
        Direction::new(self.angle.add(by))
    }
}
