//! p-adic floating-point numbers with a fixed significand length.
//!
//! A float is `p^e s` with `e_min <= e <= e_max` and `s` a unit taken in the
//! balanced range of residues modulo `p^N`, or one of the specials zero,
//! infinity and NaN. Every operation returns the rounding of the exact
//! result, so there is a single rounding rule and no rounding mode.
//!
//! Overflow happens when the exponent is too *small* (the value is too large
//! p-adically) and gives infinity; underflow gives zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{PadicError, Result};
use crate::scalar::{
    mod_inverse, pow_p, residue_digits, split_rational, split_unit, PadicScalar, Precision,
    PrimeContext, Rational,
};

/// Encoded float `(e, s)`. Normalized encodings are unique, so derived
/// equality is equality of values (and NaN equals NaN).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PFloat {
    pub e: i64,
    pub s: BigInt,
}

/// What a normalized encoding stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FloatKind {
    Finite,
    Zero,
    Infinity,
    NaN,
}

/// Parameters of a float system: prime, significand length and exponent
/// range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PFloatSystem {
    ctx: PrimeContext,
    n: u32,
    e_min: i64,
    e_max: i64,
}

impl PFloatSystem {
    pub const DEFAULT_DIGITS: u32 = 53;
    pub const DEFAULT_E_MIN: i64 = -(1 << 30);
    pub const DEFAULT_E_MAX: i64 = 1 << 30;

    pub fn new(ctx: &PrimeContext, n: u32, e_min: i64, e_max: i64) -> Result<Self> {
        if n == 0 {
            return Err(PadicError::InvalidParameter("significand length must be positive".into()));
        }
        if e_min >= e_max {
            return Err(PadicError::InvalidParameter(format!(
                "exponent range [{e_min}, {e_max}] is empty or a single point"
            )));
        }
        Ok(PFloatSystem { ctx: *ctx, n, e_min, e_max })
    }

    /// `n` significand digits and the default exponent range.
    pub fn with_digits(ctx: &PrimeContext, n: u32) -> Result<Self> {
        Self::new(ctx, n, Self::DEFAULT_E_MIN, Self::DEFAULT_E_MAX)
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn digits(&self) -> u32 {
        self.n
    }

    pub fn e_min(&self) -> i64 {
        self.e_min
    }

    pub fn e_max(&self) -> i64 {
        self.e_max
    }

    fn modulus(&self) -> BigInt {
        pow_p(self.p(), self.n as u64)
    }

    /// The representative of `a` modulo `p^N` in the balanced range.
    ///
    /// For odd p the range is `[-(p^N-1)/2, (p^N-1)/2]`, which holds one
    /// representative of every class. For p = 2 it is
    /// `[-2^(N-1), 2^(N-1) - 1]`, whose only boundary element is even and
    /// never occurs as a significand.
    pub fn balanced(&self, a: &BigInt) -> BigInt {
        let m = self.modulus();
        let r = a.mod_floor(&m);
        let half: BigInt = (&m - 1u32) / 2u32;
        if r > half {
            r - m
        } else {
            r
        }
    }

    pub fn zero(&self) -> PFloat {
        PFloat { e: self.e_max, s: BigInt::zero() }
    }

    pub fn infinity(&self) -> PFloat {
        PFloat { e: self.e_min - 1, s: BigInt::one() }
    }

    pub fn nan(&self) -> PFloat {
        PFloat { e: self.e_min - 1, s: BigInt::zero() }
    }

    pub fn kind(&self, x: &PFloat) -> FloatKind {
        if x.e < self.e_min {
            if x.s.is_zero() {
                FloatKind::NaN
            } else {
                FloatKind::Infinity
            }
        } else if x.s.is_zero() {
            FloatKind::Zero
        } else {
            FloatKind::Finite
        }
    }

    /// Normalization of an arbitrary pair `(e, s)`.
    pub fn normalize(&self, e: i64, s: &BigInt) -> PFloat {
        let mut e = e;
        let mut s = s.clone();
        loop {
            if e < self.e_min {
                return if s.is_zero() { self.nan() } else { self.infinity() };
            }
            if e > self.e_max || s.is_zero() {
                return self.zero();
            }
            let (k, unit) = split_unit(&s, self.p());
            let reduced = self.balanced(&unit);
            if k == 0 && reduced == s {
                return PFloat { e, s };
            }
            e += k as i64;
            s = reduced;
        }
    }

    /// The float nearest to a rational: infinity on overflow, zero on
    /// underflow.
    pub fn round(&self, x: &Rational) -> PFloat {
        if x.is_zero() {
            return self.zero();
        }
        let (v, a, b) = split_rational(x, self.p());
        if v < self.e_min {
            return self.infinity();
        }
        if v > self.e_max {
            return self.zero();
        }
        let m = self.modulus();
        let inv = mod_inverse(&b, &m).expect("unit denominator");
        PFloat { e: v, s: self.balanced(&(a * inv)) }
    }

    /// Rounding of an integer.
    pub fn from_int(&self, n: impl Into<BigInt>) -> PFloat {
        self.round(&Rational::from_integer(n.into()))
    }

    /// Rounding of the representative of a scalar; an inexact zero rounds
    /// to zero.
    pub fn from_scalar(&self, x: &PadicScalar) -> PFloat {
        self.round(&x.to_rational())
    }

    /// The exact value of a finite float or zero.
    pub fn to_rational(&self, x: &PFloat) -> Option<Rational> {
        match self.kind(x) {
            FloatKind::Zero => Some(Rational::zero()),
            FloatKind::Finite => Some(
                PadicScalar::from_parts(&self.ctx, x.e, x.s.clone(), Precision::Exact).to_rational(),
            ),
            _ => None,
        }
    }

    /// A finite float read as the ball of its `N` significand digits.
    pub fn to_scalar(&self, x: &PFloat) -> Option<PadicScalar> {
        match self.kind(x) {
            FloatKind::Finite => Some(PadicScalar::from_parts(
                &self.ctx,
                x.e,
                x.s.clone(),
                Precision::Finite(x.e + self.n as i64),
            )),
            FloatKind::Zero => Some(PadicScalar::exact_zero(&self.ctx)),
            _ => None,
        }
    }

    pub fn neg(&self, x: &PFloat) -> PFloat {
        match self.kind(x) {
            FloatKind::Finite => self.normalize(x.e, &-&x.s),
            _ => x.clone(),
        }
    }

    pub fn add(&self, x: &PFloat, y: &PFloat) -> PFloat {
        use FloatKind::*;
        match (self.kind(x), self.kind(y)) {
            (NaN, _) | (_, NaN) => self.nan(),
            (Infinity, _) | (_, Infinity) => self.infinity(),
            (Zero, _) => y.clone(),
            (_, Zero) => x.clone(),
            (Finite, Finite) => {
                if x.e == y.e {
                    let sum = &x.s + &y.s;
                    if sum.is_zero() {
                        return self.zero();
                    }
                    let (v, unit) = split_unit(&sum, self.p());
                    if v as i64 > self.e_max - x.e {
                        return self.zero();
                    }
                    PFloat { e: x.e + v as i64, s: self.balanced(&unit) }
                } else {
                    let (lo, hi) = if x.e < y.e { (x, y) } else { (y, x) };
                    let gap = hi.e - lo.e;
                    if gap >= self.n as i64 {
                        return lo.clone();
                    }
                    let s = &lo.s + &hi.s * pow_p(self.p(), gap as u64);
                    PFloat { e: lo.e, s: self.balanced(&s) }
                }
            }
        }
    }

    pub fn sub(&self, x: &PFloat, y: &PFloat) -> PFloat {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &PFloat, y: &PFloat) -> PFloat {
        use FloatKind::*;
        match (self.kind(x), self.kind(y)) {
            (NaN, _) | (_, NaN) => self.nan(),
            (Zero, Infinity) | (Infinity, Zero) => self.nan(),
            (Infinity, _) | (_, Infinity) => self.infinity(),
            (Zero, _) | (_, Zero) => self.zero(),
            (Finite, Finite) => {
                let e = x.e + y.e;
                if e > self.e_max {
                    self.zero()
                } else if e < self.e_min {
                    self.infinity()
                } else {
                    PFloat { e, s: self.balanced(&(&x.s * &y.s)) }
                }
            }
        }
    }

    pub fn div(&self, x: &PFloat, y: &PFloat) -> PFloat {
        use FloatKind::*;
        match (self.kind(x), self.kind(y)) {
            (NaN, _) | (_, NaN) => self.nan(),
            (Zero, Zero) | (Infinity, Infinity) => self.nan(),
            (_, Zero) => self.infinity(),
            (_, Infinity) => self.zero(),
            (Infinity, _) => self.infinity(),
            (Zero, _) => self.zero(),
            (Finite, Finite) => {
                let e = x.e - y.e;
                if e < self.e_min {
                    self.infinity()
                } else if e > self.e_max {
                    self.zero()
                } else {
                    let inv = mod_inverse(&y.s, &self.modulus()).expect("unit significand");
                    PFloat { e, s: self.balanced(&(&x.s * inv)) }
                }
            }
        }
    }

    /// Valuation of a finite float; `None` for the specials and zero.
    pub fn valuation(&self, x: &PFloat) -> Option<i64> {
        (self.kind(x) == FloatKind::Finite).then_some(x.e)
    }

    /// Digit style: the `N` significand digits (residue modulo `p^N`) and the
    /// shift marker, or `0`, `Infinity`, `NaN`.
    pub fn print(&self, x: &PFloat) -> String {
        match self.kind(x) {
            FloatKind::NaN => "NaN".into(),
            FloatKind::Infinity => "Infinity".into(),
            FloatKind::Zero => "0".into(),
            FloatKind::Finite => {
                let digits = residue_digits(&x.s, self.p(), self.n as usize);
                if x.e == 0 {
                    digits
                } else {
                    format!("{digits} * {}^{}", self.p(), x.e)
                }
            }
        }
    }
}
