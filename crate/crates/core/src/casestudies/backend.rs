//! Number systems the experiments run in, behind one arithmetic interface.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{PadicError, Result};
use crate::pfloat::{FloatKind, PFloat, PFloatSystem};
use crate::scalar::{
    print_digits, rational_valuation, PadicScalar, Precision, PrimeContext, Rational,
};
use crate::zealous::{zadd, zdiv, zmul, zsub};

/// Tag naming the arithmetic a value was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Zealous,
    Relaxed,
    PFloat,
    RationalOracle,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Zealous => "zealous",
            Backend::Relaxed => "relaxed",
            Backend::PFloat => "pfloat",
            Backend::RationalOracle => "rational-oracle",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Commutative ring operations. Every operation may fail, since interval
/// arithmetic over different primes or exhausted precision is an error.
pub trait Ring {
    type Elem: Clone + fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
}

/// A p-adic number system: ring operations, division and conversions.
pub trait Arith: Ring {
    fn backend(&self) -> Backend;
    fn ctx(&self) -> PrimeContext;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Embed a scalar known to some precision.
    fn from_scalar(&self, x: &PadicScalar) -> Self::Elem;
    /// Embed an exactly known rational.
    fn from_rational(&self, r: &Rational) -> Self::Elem;
    /// Division; dividing by a value indistinguishable from zero is an
    /// [`PadicError::InexactZeroDivision`].
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// True when the value cannot be told apart from zero.
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// True when the value is known to be exactly zero.
    fn is_exact_zero(&self, a: &Self::Elem) -> bool;
    /// Valuation of a value distinguishable from zero.
    fn valuation(&self, a: &Self::Elem) -> Option<i64>;
    /// The value with the precision the backend claims for it.
    fn to_scalar(&self, a: &Self::Elem) -> Result<PadicScalar>;
    /// Digit-style rendering.
    fn render(&self, a: &Self::Elem) -> String;
}

/// Interval arithmetic on [`PadicScalar`].
#[derive(Debug, Clone, Copy)]
pub struct ZealousArith {
    ctx: PrimeContext,
}

impl ZealousArith {
    pub fn new(ctx: &PrimeContext) -> Self {
        ZealousArith { ctx: *ctx }
    }
}

impl Ring for ZealousArith {
    type Elem = PadicScalar;
    fn zero(&self) -> PadicScalar {
        PadicScalar::exact_zero(&self.ctx)
    }
    fn one(&self) -> PadicScalar {
        PadicScalar::exact(&self.ctx, 1)
    }
    fn add(&self, a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
        zadd(a, b)
    }
    fn sub(&self, a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
        zsub(a, b)
    }
    fn mul(&self, a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
        zmul(a, b)
    }
    fn neg(&self, a: &PadicScalar) -> PadicScalar {
        a.neg()
    }
}

impl Arith for ZealousArith {
    fn backend(&self) -> Backend {
        Backend::Zealous
    }
    fn ctx(&self) -> PrimeContext {
        self.ctx
    }
    fn from_int(&self, n: i64) -> PadicScalar {
        PadicScalar::exact(&self.ctx, n)
    }
    fn from_scalar(&self, x: &PadicScalar) -> PadicScalar {
        x.clone()
    }
    fn from_rational(&self, r: &Rational) -> PadicScalar {
        exact_scalar(&self.ctx, r)
    }
    fn div(&self, a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
        zdiv(a, b)
    }
    fn is_zero(&self, a: &PadicScalar) -> bool {
        a.is_indistinguishable_from_zero()
    }
    fn is_exact_zero(&self, a: &PadicScalar) -> bool {
        a.is_exact_zero()
    }
    fn valuation(&self, a: &PadicScalar) -> Option<i64> {
        (!a.is_indistinguishable_from_zero()).then(|| a.v())
    }
    fn to_scalar(&self, a: &PadicScalar) -> Result<PadicScalar> {
        Ok(a.clone())
    }
    fn render(&self, a: &PadicScalar) -> String {
        print_digits(a)
    }
}

/// p-adic floating-point arithmetic.
#[derive(Debug, Clone, Copy)]
pub struct PFloatArith {
    sys: PFloatSystem,
}

impl PFloatArith {
    pub fn new(sys: PFloatSystem) -> Self {
        PFloatArith { sys }
    }

    /// Floats with `digits` significand digits and the default exponent range.
    pub fn with_digits(ctx: &PrimeContext, digits: u32) -> Result<Self> {
        Ok(PFloatArith { sys: PFloatSystem::with_digits(ctx, digits)? })
    }

    pub fn system(&self) -> &PFloatSystem {
        &self.sys
    }

    fn finite_or_error(&self, x: PFloat) -> Result<PFloat> {
        match self.sys.kind(&x) {
            FloatKind::Infinity | FloatKind::NaN => Err(PadicError::InexactZeroDivision),
            _ => Ok(x),
        }
    }
}

impl Ring for PFloatArith {
    type Elem = PFloat;
    fn zero(&self) -> PFloat {
        self.sys.zero()
    }
    fn one(&self) -> PFloat {
        self.sys.from_int(1)
    }
    fn add(&self, a: &PFloat, b: &PFloat) -> Result<PFloat> {
        self.finite_or_error(self.sys.add(a, b))
    }
    fn sub(&self, a: &PFloat, b: &PFloat) -> Result<PFloat> {
        self.finite_or_error(self.sys.sub(a, b))
    }
    fn mul(&self, a: &PFloat, b: &PFloat) -> Result<PFloat> {
        self.finite_or_error(self.sys.mul(a, b))
    }
    fn neg(&self, a: &PFloat) -> PFloat {
        self.sys.neg(a)
    }
}

impl Arith for PFloatArith {
    fn backend(&self) -> Backend {
        Backend::PFloat
    }
    fn ctx(&self) -> PrimeContext {
        self.sys.ctx()
    }
    fn from_int(&self, n: i64) -> PFloat {
        self.sys.from_int(n)
    }
    fn from_scalar(&self, x: &PadicScalar) -> PFloat {
        self.sys.from_scalar(x)
    }
    fn from_rational(&self, r: &Rational) -> PFloat {
        self.sys.round(r)
    }
    fn div(&self, a: &PFloat, b: &PFloat) -> Result<PFloat> {
        if self.sys.kind(b) == FloatKind::Zero {
            return Err(PadicError::InexactZeroDivision);
        }
        self.finite_or_error(self.sys.div(a, b))
    }
    fn is_zero(&self, a: &PFloat) -> bool {
        self.sys.kind(a) == FloatKind::Zero
    }
    fn is_exact_zero(&self, a: &PFloat) -> bool {
        self.is_zero(a)
    }
    fn valuation(&self, a: &PFloat) -> Option<i64> {
        self.sys.valuation(a)
    }
    fn to_scalar(&self, a: &PFloat) -> Result<PadicScalar> {
        self.sys.to_scalar(a).ok_or(PadicError::InexactZeroDivision)
    }
    fn render(&self, a: &PFloat) -> String {
        self.sys.print(a)
    }
}

/// Exact arithmetic over the rationals, used as the reference.
#[derive(Debug, Clone, Copy)]
pub struct ExactArith {
    ctx: PrimeContext,
}

impl ExactArith {
    pub fn new(ctx: &PrimeContext) -> Self {
        ExactArith { ctx: *ctx }
    }
}

impl Ring for ExactArith {
    type Elem = Rational;
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        Ok(a + b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        Ok(a - b)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        Ok(a * b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
}

impl Arith for ExactArith {
    fn backend(&self) -> Backend {
        Backend::RationalOracle
    }
    fn ctx(&self) -> PrimeContext {
        self.ctx
    }
    fn from_int(&self, n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }
    fn from_scalar(&self, x: &PadicScalar) -> Rational {
        x.to_rational()
    }
    fn from_rational(&self, r: &Rational) -> Rational {
        r.clone()
    }
    fn div(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if b.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        Ok(a / b)
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_exact_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn valuation(&self, a: &Rational) -> Option<i64> {
        rational_valuation(a, &self.ctx).finite()
    }
    fn to_scalar(&self, a: &Rational) -> Result<PadicScalar> {
        Ok(exact_scalar(&self.ctx, a))
    }
    fn render(&self, a: &Rational) -> String {
        if a.denom().is_one() || (-a.denom()).is_one() {
            a.to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom().abs())
        }
    }
}

/// Relative precision given to exact rationals that have no finite p-adic
/// expansion when they are turned into scalars.
pub const EXACT_RATIONAL_DIGITS: i64 = 64;

/// A rational as a scalar: exact when it is `p^v` times an integer,
/// otherwise with [`EXACT_RATIONAL_DIGITS`] relative digits.
pub fn exact_scalar(ctx: &PrimeContext, r: &Rational) -> PadicScalar {
    if let Ok(x) = PadicScalar::from_rational(ctx, r, Precision::Exact) {
        return x;
    }
    let v = rational_valuation(r, ctx).finite().expect("nonzero rational");
    PadicScalar::from_rational(ctx, r, Precision::Finite(v + EXACT_RATIONAL_DIGITS)).expect("finite precision")
}

/// Polynomials (coefficient vectors, constant term first) over a ring.
/// Lengths are structural: no coefficient is ever dropped, so the degree of
/// a product is the sum of the degrees whatever the coefficients are.
#[derive(Debug, Clone, Copy)]
pub struct PolyRing<'a, R: Ring> {
    pub base: &'a R,
}

impl<'a, R: Ring> PolyRing<'a, R> {
    pub fn new(base: &'a R) -> Self {
        PolyRing { base }
    }

    pub fn constant(&self, c: R::Elem) -> Vec<R::Elem> {
        vec![c]
    }
}

impl<R: Ring> Ring for PolyRing<'_, R> {
    type Elem = Vec<R::Elem>;
    fn zero(&self) -> Vec<R::Elem> {
        vec![self.base.zero()]
    }
    fn one(&self) -> Vec<R::Elem> {
        vec![self.base.one()]
    }
    fn add(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Result<Vec<R::Elem>> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => self.base.add(x, y),
                (Some(x), None) | (None, Some(x)) => Ok(x.clone()),
                (None, None) => unreachable!(),
            })
            .collect()
    }
    fn sub(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Result<Vec<R::Elem>> {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Vec<R::Elem>, b: &Vec<R::Elem>) -> Result<Vec<R::Elem>> {
        let mut out: Vec<Option<R::Elem>> = vec![None; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let t = self.base.mul(x, y)?;
                out[i + j] = Some(match out[i + j].take() {
                    Some(acc) => self.base.add(&acc, &t)?,
                    None => t,
                });
            }
        }
        Ok(out.into_iter().map(|c| c.expect("every slot is hit")).collect())
    }
    fn neg(&self, a: &Vec<R::Elem>) -> Vec<R::Elem> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
}
