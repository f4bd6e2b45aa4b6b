//! Integer and rational helpers: base-p expansions, valuations, modular inverses.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::context::{pow_p, PrimeContext};
use crate::error::{PadicError, Result};

/// Exact rationals, always reduced with a positive denominator.
pub type Rational = BigRational;

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Sum of two valuations, absorbing at infinity.
    pub fn add(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// Little-endian base-p digits of `n`; the empty sequence for zero.
pub fn to_base_p(n: &BigUint, ctx: &PrimeContext) -> Vec<u64> {
    digits_le(n, ctx.p())
}

pub(crate) fn digits_le(n: &BigUint, p: u64) -> Vec<u64> {
    if n.is_zero() {
        return Vec::new();
    }
    if p <= 256 {
        return n.to_radix_le(p as u32).into_iter().map(u64::from).collect();
    }
    let pb = BigUint::from(p);
    let mut out = Vec::new();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&pb);
        out.push(r.to_u64().expect("digit below p"));
        rest = q;
    }
    out
}

/// Reassemble little-endian digits into an integer.
pub fn from_base_p(digits: &[u64], ctx: &PrimeContext) -> BigUint {
    let pb = BigUint::from(ctx.p());
    digits
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, &d| acc * &pb + BigUint::from(d))
}

/// Exactly `count` little-endian digits of `n mod p^count` (n may be negative).
pub(crate) fn low_digits(n: &BigInt, p: u64, count: usize) -> Vec<u64> {
    let m = pow_p(p, count as u64);
    let r = n.mod_floor(&m);
    let mut d = digits_le(&r.to_biguint().expect("nonnegative residue"), p);
    d.resize(count, 0);
    d
}

/// The p-adic valuation of an integer.
pub fn valuation(n: &BigInt, ctx: &PrimeContext) -> Valuation {
    match val_int(n, ctx.p()) {
        Some(v) => Valuation::Finite(v as i64),
        None => Valuation::Infinite,
    }
}

pub(crate) fn val_int(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    if p == 2 {
        return n.trailing_zeros();
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut rest = n.clone();
    loop {
        let (q, r) = rest.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        rest = q;
    }
}

/// Split a nonzero integer as `p^k * u` with `u` prime to p.
pub(crate) fn split_unit(n: &BigInt, p: u64) -> (u64, BigInt) {
    let k = val_int(n, p).expect("split_unit on zero");
    if k == 0 {
        return (0, n.clone());
    }
    (k, n / pow_p(p, k))
}

/// Valuation of `n!` by Legendre's formula.
pub fn legendre_factorial_valuation(n: u64, ctx: &PrimeContext) -> u64 {
    let p = ctx.p();
    let mut total = 0;
    let mut q = n / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total
}

/// Valuation of a rational number.
pub fn rational_valuation(r: &Rational, ctx: &PrimeContext) -> Valuation {
    if r.is_zero() {
        return Valuation::Infinite;
    }
    let vn = val_int(r.numer(), ctx.p()).unwrap() as i64;
    let vd = val_int(r.denom(), ctx.p()).unwrap() as i64;
    Valuation::Finite(vn - vd)
}

/// Inverse of `a` modulo `m`, if it exists, in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// The residue of `r` modulo `p^n`, in `[0, p^n)`. The denominator must be prime to p.
pub fn rational_mod_pn(r: &Rational, ctx: &PrimeContext, n: u64) -> Result<BigInt> {
    let m = ctx.pow(n);
    let inv = mod_inverse(r.denom(), &m).ok_or_else(|| {
        PadicError::Domain(format!("denominator of {r} is divisible by {}", ctx.p()))
    })?;
    Ok((r.numer() * inv).mod_floor(&m))
}

/// Split a nonzero rational as `p^v * (a / b)` with `a`, `b` prime to p.
pub(crate) fn split_rational(r: &Rational, p: u64) -> (i64, BigInt, BigInt) {
    let (vn, a) = split_unit(r.numer(), p);
    let (vd, b) = split_unit(r.denom(), p);
    (vn as i64 - vd as i64, a, b)
}

/// `p^k` as a rational, for any sign of `k`.
pub(crate) fn rational_pow(p: u64, k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(pow_p(p, k as u64))
    } else {
        Rational::new(BigInt::one(), pow_p(p, k.unsigned_abs()))
    }
}

