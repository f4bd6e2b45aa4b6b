//! Interval ("zealous") arithmetic: every value is a ball `a + O(p^N)` and
//! every operation returns exactly the image of its operand balls.
//!
//! For `I = p^v s + O(p^N)` and `I' = p^v' s' + O(p^N')`:
//!
//! * `I ± I'` is known at `O(p^min(N, N'))`,
//! * `I × I'` at `O(p^min(v + N', N + v'))`,
//! * `I ÷ I'` at `O(p^min(v + N' - 2v', N - v'))`.
//!
//! Exact operands take part at the precision of the other operand plus a
//! configurable headroom.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{PadicError, Result};
use crate::scalar::{mod_inverse, pow_p, PadicScalar, Precision};

/// Extra digits given to an exact operand combined with an inexact one, and
/// the relative precision of a quotient of exact values that is not exact.
pub const DEFAULT_HEADROOM: i64 = 64;

/// Interval arithmetic with an explicit headroom for exact operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Zealous {
    pub headroom: i64,
}

impl Default for Zealous {
    fn default() -> Self {
        Zealous { headroom: DEFAULT_HEADROOM }
    }
}

/// `(v, s)` with `p^v s = p^v1 s1 + p^v2 s2`, no normalization.
fn aligned_sum(p: u64, v1: i64, s1: &BigInt, v2: i64, s2: &BigInt) -> (i64, BigInt) {
    if v1 <= v2 {
        (v1, s1 + s2 * pow_p(p, (v2 - v1) as u64))
    } else {
        (v2, s1 * pow_p(p, (v1 - v2) as u64) + s2)
    }
}

impl Zealous {
    pub fn new(headroom: i64) -> Self {
        Zealous { headroom }
    }

    /// Absolute precisions of the two operands, exact ones coerced to the
    /// partner's precision plus the headroom. `None` when both are exact.
    fn precisions(&self, a: &PadicScalar, b: &PadicScalar) -> Option<(i64, i64)> {
        match (a.precision(), b.precision()) {
            (Precision::Exact, Precision::Exact) => None,
            (Precision::Finite(n), Precision::Exact) => Some((n, n + self.headroom)),
            (Precision::Exact, Precision::Finite(n)) => Some((n + self.headroom, n)),
            (Precision::Finite(n), Precision::Finite(m)) => Some((n, m)),
        }
    }

    pub fn add(&self, a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
        a.check_same_prime(b)?;
        let p = a.p();
        let (v, s) = aligned_sum(p, a.v(), a.unit(), b.v(), b.unit());
        let n = match self.precisions(a, b) {
            None => Precision::Exact,
            Some((n1, n2)) => Precision::Finite(n1.min(n2)),
        };
        Ok(PadicScalar::canonical(p, v, s, n))
    }

    pub fn sub(&self, a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
        self.add(a, &b.neg())
    }

    pub fn neg(&self, a: &PadicScalar) -> PadicScalar {
        a.neg()
    }

    pub fn mul(&self, a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
        a.check_same_prime(b)?;
        let p = a.p();
        if a.is_exact_zero() || b.is_exact_zero() {
            return Ok(PadicScalar::canonical(p, 0, BigInt::zero(), Precision::Exact));
        }
        let v = a.v() + b.v();
        let s = a.unit() * b.unit();
        let n = match self.precisions(a, b) {
            None => Precision::Exact,
            Some((n1, n2)) => Precision::Finite((a.v() + n2).min(n1 + b.v())),
        };
        Ok(PadicScalar::canonical(p, v, s, n))
    }

    pub fn div(&self, a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
        a.check_same_prime(b)?;
        let p = a.p();
        if b.is_exact_zero() {
            return Err(PadicError::DivisionByZero);
        }
        if b.is_indistinguishable_from_zero() {
            return Err(PadicError::InexactZeroDivision);
        }
        if a.is_exact_zero() {
            return Ok(a.clone());
        }
        let v = a.v() - b.v();
        let n = match self.precisions(a, b) {
            None => {
                if b.unit().abs().is_one() {
                    let s = a.unit() * b.unit();
                    return Ok(PadicScalar::canonical(p, v, s, Precision::Exact));
                }
                v + self.headroom
            }
            Some((n1, n2)) => (a.v() + n2 - 2 * b.v()).min(n1 - b.v()),
        };
        if n <= v || a.unit().is_zero() {
            return Ok(PadicScalar::canonical(p, v, BigInt::zero(), Precision::Finite(n)));
        }
        let m = pow_p(p, (n - v) as u64);
        let inv = mod_inverse(b.unit(), &m).expect("unit part is prime to p");
        let s = (a.unit() * inv).mod_floor(&m);
        Ok(PadicScalar::canonical(p, v, s, Precision::Finite(n)))
    }

    /// `1 / a`.
    pub fn inv(&self, a: &PadicScalar) -> Result<PadicScalar> {
        let one = PadicScalar::canonical(a.p(), 0, BigInt::one(), Precision::Exact);
        self.div(&one, a)
    }

    /// `a^p` with the extra digit of precision that the p-th power gains on
    /// a unit: `(a + O(p^N))^p = a^p + O(p^(N+1))`.
    pub fn pow_p(&self, a: &PadicScalar) -> Result<PadicScalar> {
        if a.v() != 0 || a.is_indistinguishable_from_zero() {
            return Err(PadicError::Domain(format!(
                "the p-th power gain needs a unit, got valuation {}",
                a.valuation()
            )));
        }
        let p = a.p();
        let s = num_traits::pow(a.unit().clone(), p as usize);
        let n = match a.precision() {
            Precision::Exact => Precision::Exact,
            Precision::Finite(n) => Precision::Finite(n + 1),
        };
        Ok(PadicScalar::canonical(p, 0, s, n))
    }

    /// `a^k` by repeated squaring with interval multiplication.
    pub fn pow(&self, a: &PadicScalar, k: u64) -> Result<PadicScalar> {
        let mut result = PadicScalar::canonical(a.p(), 0, BigInt::one(), Precision::Exact);
        let mut base = a.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }
}

pub fn zadd(a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
    Zealous::default().add(a, b)
}

pub fn zsub(a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
    Zealous::default().sub(a, b)
}

pub fn zmul(a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
    Zealous::default().mul(a, b)
}

pub fn zdiv(a: &PadicScalar, b: &PadicScalar) -> Result<PadicScalar> {
    Zealous::default().div(a, b)
}

pub fn zneg(a: &PadicScalar) -> PadicScalar {
    a.neg()
}

pub fn zinv(a: &PadicScalar) -> Result<PadicScalar> {
    Zealous::default().inv(a)
}

pub fn zpow_p(a: &PadicScalar) -> Result<PadicScalar> {
    Zealous::default().pow_p(a)
}

pub fn zpow(a: &PadicScalar, k: u64) -> Result<PadicScalar> {
    Zealous::default().pow(a, k)
}

macro_rules! binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl std::ops::$trait<&PadicScalar> for &PadicScalar {
            type Output = PadicScalar;
            /// Panics when the operands live over different primes.
            fn $method(self, rhs: &PadicScalar) -> PadicScalar {
                $f(self, rhs).expect("operands over the same prime")
            }
        }
    };
}

binop!(Add, add, zadd);
binop!(Sub, sub, zsub);
binop!(Mul, mul, zmul);

impl std::ops::Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        PadicScalar::neg(self)
    }
}
