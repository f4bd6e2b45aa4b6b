use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::arith::{rational_pow, split_rational, split_unit, Rational, Valuation};
use super::context::{pow_p, PrimeContext};
use crate::error::{PadicError, Result};

/// Absolute precision of a scalar: a finite exponent `N` (the value is known
/// modulo `p^N`) or `Exact`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Precision {
    Finite(i64),
    Exact,
}

impl Precision {
    pub fn finite(self) -> Option<i64> {
        match self {
            Precision::Finite(n) => Some(n),
            Precision::Exact => None,
        }
    }
}

/// The number `p^v * s` known modulo `p^N`.
///
/// Values are kept canonical at construction:
///
/// * inexact zero is `(v, s, N) = (N, 0, N)`,
/// * other inexact values have `v < N`, `0 <= s < p^(N-v)` and `s` prime to p,
/// * exact values have `s` prime to p (and any sign), or `(v, s) = (0, 0)`.
///
/// Canonical form makes structural equality coincide with equality of the
/// represented subsets of Qp.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    p: u64,
    v: i64,
    s: BigInt,
    n: Precision,
}

impl PadicScalar {
    /// Build `p^v * s + O(p^N)` (or an exact value) and canonicalize it.
    pub fn from_parts(ctx: &PrimeContext, v: i64, s: BigInt, n: Precision) -> Self {
        Self::canonical(ctx.p(), v, s, n)
    }

    pub(crate) fn canonical(p: u64, v: i64, s: BigInt, n: Precision) -> Self {
        match n {
            Precision::Exact => {
                if s.is_zero() {
                    return PadicScalar { p, v: 0, s, n };
                }
                let (k, u) = split_unit(&s, p);
                PadicScalar { p, v: v + k as i64, s: u, n }
            }
            Precision::Finite(cap) => {
                if s.is_zero() {
                    return Self::inexact_zero_p(p, cap);
                }
                let (k, u) = split_unit(&s, p);
                let v = v + k as i64;
                if v >= cap {
                    return Self::inexact_zero_p(p, cap);
                }
                let m = pow_p(p, (cap - v) as u64);
                PadicScalar { p, v, s: u.mod_floor(&m), n }
            }
        }
    }

    fn inexact_zero_p(p: u64, n: i64) -> Self {
        PadicScalar { p, v: n, s: BigInt::zero(), n: Precision::Finite(n) }
    }

    /// The exact integer `value`.
    pub fn exact(ctx: &PrimeContext, value: impl Into<BigInt>) -> Self {
        Self::canonical(ctx.p(), 0, value.into(), Precision::Exact)
    }

    /// The exact value `p^v * s`.
    pub fn exact_shifted(ctx: &PrimeContext, s: impl Into<BigInt>, v: i64) -> Self {
        Self::canonical(ctx.p(), v, s.into(), Precision::Exact)
    }

    pub fn exact_zero(ctx: &PrimeContext) -> Self {
        Self::exact(ctx, 0)
    }

    /// `O(p^n)`.
    pub fn inexact_zero(ctx: &PrimeContext, n: i64) -> Self {
        Self::inexact_zero_p(ctx.p(), n)
    }

    /// `value + O(p^n)`.
    pub fn with_precision(ctx: &PrimeContext, value: impl Into<BigInt>, n: i64) -> Self {
        Self::canonical(ctx.p(), 0, value.into(), Precision::Finite(n))
    }

    /// A rational value known modulo `p^n`. Fails when `n` is finite and the
    /// rational cannot be reduced (never happens: any rational lies in Qp).
    pub fn from_rational(ctx: &PrimeContext, r: &Rational, n: Precision) -> Result<Self> {
        Self::from_rational_p(ctx.p(), r, n)
    }

    pub(crate) fn from_rational_p(p: u64, r: &Rational, n: Precision) -> Result<Self> {
        if r.is_zero() {
            return Ok(match n {
                Precision::Exact => PadicScalar { p, v: 0, s: BigInt::zero(), n },
                Precision::Finite(cap) => Self::inexact_zero_p(p, cap),
            });
        }
        let (v, a, b) = split_rational(r, p);
        match n {
            Precision::Exact => {
                if b.is_one() {
                    Ok(Self::canonical(p, v, a, n))
                } else if (-&b).is_one() {
                    Ok(Self::canonical(p, v, -a, n))
                } else {
                    Err(PadicError::Domain(format!(
                        "{r} has no exact representation p^v*s with s an integer"
                    )))
                }
            }
            Precision::Finite(cap) => {
                if v >= cap {
                    return Ok(Self::inexact_zero_p(p, cap));
                }
                let m = pow_p(p, (cap - v) as u64);
                let inv = super::arith::mod_inverse(&b, &m).expect("unit denominator");
                Ok(Self::canonical(p, v, a * inv, n))
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Valuation; the precision `N` for an inexact zero, infinity for exact zero.
    pub fn valuation(&self) -> Valuation {
        if self.is_exact_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.v)
        }
    }

    /// The raw exponent `v` of the canonical triple.
    pub fn v(&self) -> i64 {
        self.v
    }

    /// The unit part `s` of the canonical triple.
    pub fn unit(&self) -> &BigInt {
        &self.s
    }

    pub fn precision(&self) -> Precision {
        self.n
    }

    /// Absolute precision `N`, `None` when exact.
    pub fn abs_prec(&self) -> Option<i64> {
        self.n.finite()
    }

    /// Relative precision `N - v`, `None` when exact.
    pub fn rel_prec(&self) -> Option<i64> {
        self.n.finite().map(|n| n - self.v)
    }

    pub fn is_exact(&self) -> bool {
        self.n == Precision::Exact
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.s.is_zero()
    }

    /// True when zero belongs to the represented set.
    pub fn is_indistinguishable_from_zero(&self) -> bool {
        self.s.is_zero()
    }

    /// The representative `p^v * s` as a rational.
    pub fn to_rational(&self) -> Rational {
        Rational::from_integer(self.s.clone()) * rational_pow(self.p, self.v)
    }

    /// The representative as an integer, when `v >= 0`.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.v < 0 && !self.s.is_zero() {
            return None;
        }
        if self.s.is_zero() {
            return Some(BigInt::zero());
        }
        Some(&self.s * pow_p(self.p, self.v as u64))
    }

    /// The residue of the value modulo `p^k`, in `[0, p^k)`; requires `v >= 0`.
    pub fn residue(&self, k: u64) -> Option<BigInt> {
        self.to_integer().map(|x| x.mod_floor(&pow_p(self.p, k)))
    }

    /// Lower the absolute precision to at most `n`.
    pub fn truncate(&self, n: i64) -> Self {
        let cap = match self.n {
            Precision::Finite(m) => m.min(n),
            Precision::Exact => n,
        };
        Self::canonical(self.p, self.v, self.s.clone(), Precision::Finite(cap))
    }

    /// Forget the precision: the canonical representative as an exact value
    /// (unknown digits filled with zeros).
    pub fn lift_exact(&self) -> Self {
        Self::canonical(self.p, self.v, self.s.clone(), Precision::Exact)
    }

    /// The representative re-declared at absolute precision `n`, filling any
    /// unknown digit with zero.
    pub fn lift_to(&self, n: i64) -> Self {
        self.lift_exact().truncate(n)
    }

    pub fn neg(&self) -> Self {
        Self::canonical(self.p, self.v, -&self.s, self.n)
    }

    /// True when the two sets share an element, i.e. the values agree modulo
    /// the smaller of the two precisions.
    pub fn agrees_with(&self, other: &PadicScalar) -> bool {
        let n = self.n.min(other.n);
        let diff = self.to_rational() - other.to_rational();
        match n {
            Precision::Exact => diff.is_zero(),
            Precision::Finite(n) => match super::arith::rational_valuation(
                &diff,
                &PrimeContext::new(self.p).expect("prime"),
            ) {
                Valuation::Infinite => true,
                Valuation::Finite(v) => v >= n,
            },
        }
    }

    pub(crate) fn check_same_prime(&self, other: &PadicScalar) -> Result<()> {
        if self.p != other.p {
            return Err(PadicError::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// True for a value of valuation zero.
    pub fn is_unit(&self) -> bool {
        self.v == 0 && !self.s.is_zero()
    }

    pub fn is_negative_exact(&self) -> bool {
        self.is_exact() && self.s.is_negative()
    }
}

impl std::fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::literal::print_arithmetic(self))
    }
}
