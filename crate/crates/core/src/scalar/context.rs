use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::{PadicError, Result};

/// The prime every computation is carried out over, plus the search bound
/// used when looking for the first nonzero digit of a lazily defined value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    val_cap: u64,
}

impl PrimeContext {
    pub const DEFAULT_VAL_CAP: u64 = 1 << 16;

    pub fn new(p: u64) -> Result<Self> {
        Self::with_val_cap(p, Self::DEFAULT_VAL_CAP)
    }

    pub fn with_val_cap(p: u64, val_cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(PadicError::NotPrime(p));
        }
        if val_cap == 0 {
            return Err(PadicError::InvalidParameter("val_cap must be positive".into()));
        }
        Ok(PrimeContext { p, val_cap })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn val_cap(&self) -> u64 {
        self.val_cap
    }

    /// `p^k` as a big integer.
    pub fn pow(&self, k: u64) -> BigInt {
        pow_p(self.p, k)
    }
}

pub(crate) fn pow_p(p: u64, k: u64) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    Pow::pow(BigInt::from(p), k)
}

/// Trial division up to the square root.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}
