//! Lazy p-adic integers as digit streams, with relaxed (on-line) arithmetic.
//!
//! A [`LazyNumber`] is a node of a computation DAG. It owns a cache of the
//! digits produced so far and a producer that computes the next digit from
//! the digits of its operands. Digits are produced strictly in order, and
//! the sum, difference and product producers read operand digits of index at
//! most `n` while producing digit `n`.
//!
//! The product uses the block paving of the quadrant of index pairs: on
//! digit `n`, for every level `l` such that `2^l` divides `n + 2`, at most two
//! squares of side `2^l` with a corner on the anti-diagonal `i + j = n` are
//! multiplied as polynomials in a formal variable `t` and added to a carry
//! polynomial, which is never evaluated at `t = p`.
//!
//! Only Zp is modelled. A DAG must not be queried from several threads at
//! once; nodes may be moved between threads.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, MutexGuard, Weak};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{PadicError, Result};
use crate::scalar::{mod_inverse, pow_p, PadicScalar, PrimeContext};

/// Below this block length polynomial products are schoolbook.
pub const KARATSUBA_THRESHOLD: usize = 32;

/// Largest prime for which block products run on machine integers.
const SMALL_PRIME_LIMIT: u64 = 1 << 30;

/// A lazily computed element of Zp.
#[derive(Clone)]
pub struct LazyNumber {
    node: Arc<Node>,
}

struct Node {
    ctx: PrimeContext,
    digits: Mutex<Vec<u64>>,
    producer: Mutex<Producer>,
    demand: AtomicUsize,
}

type Oracle = Box<dyn FnMut(usize) -> Result<BigInt> + Send>;
type DigitRule = Box<dyn FnMut(usize, &DigitView<'_>) -> Result<u64> + Send>;

enum Producer {
    Constant { rest: BigInt },
    Add { x: LazyNumber, y: LazyNumber, carry: u64 },
    Sub { x: LazyNumber, y: LazyNumber, borrow: bool },
    Mul(Box<MulState>),
    ShiftLeft { x: LazyNumber, k: usize },
    ShiftRight { x: LazyNumber, k: usize },
    FixedPoint { body: Option<LazyNumber> },
    SelfRef { target: Weak<Node> },
    Rule { rule: DigitRule },
    External { oracle: Oracle, precision: usize, buffer: Vec<u64>, queries: Vec<usize> },
}

/// A square of the multiplication paving: cells `(i, j)` with
/// `i0 <= i < i0 + size` and `j0 <= j < j0 + size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PavingSquare {
    pub digit: usize,
    pub i0: usize,
    pub j0: usize,
    pub size: usize,
}

/// Instrumentation of a relaxed product.
#[derive(Debug, Clone, Default)]
pub struct MulStats {
    /// Operand digits read, over all digits produced.
    pub touches: u64,
    /// Operand reads of an index above the digit being produced.
    pub online_violations: u64,
    /// Squares processed, in order (only when recording).
    pub paving: Vec<PavingSquare>,
    /// After each digit: degree and largest coefficient of the carry
    /// polynomial (only when recording).
    pub carry_log: Vec<(usize, BigUint)>,
}

struct MulState {
    x: LazyNumber,
    y: LazyNumber,
    carry: VecDeque<BigUint>,
    record: bool,
    stats: MulStats,
}

/// Read access to the digits already produced by a digit-rule number.
pub struct DigitView<'a> {
    node: &'a Node,
    current: usize,
}

impl DigitView<'_> {
    /// Digit `i` of the number being defined; only `i < n` is allowed while
    /// producing digit `n`.
    pub fn get(&self, i: usize) -> Result<u64> {
        if i >= self.current {
            return Err(PadicError::ContractionViolation { index: i, current: self.current });
        }
        Ok(self.node.lock_digits()[i])
    }

    /// Index of the digit being produced.
    pub fn current(&self) -> usize {
        self.current
    }
}

/// Outcome of a truncated equality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    /// The first `n` digits agree; says nothing about later digits.
    EqualUpTo(usize),
    /// First index where the digits differ.
    DifferAt(usize),
}

impl Node {
    fn lock_digits(&self) -> MutexGuard<'_, Vec<u64>> {
        self.digits.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn ensure(&self, len: usize) -> Result<()> {
        if self.lock_digits().len() >= len {
            return Ok(());
        }
        let mut producer = self.producer.lock().unwrap_or_else(|e| e.into_inner());
        loop {
            let n = self.lock_digits().len();
            if n >= len {
                return Ok(());
            }
            let d = producer.next(n, self)?;
            debug_assert!(d < self.ctx.p());
            self.lock_digits().push(d);
        }
    }
}

impl Producer {
    fn next(&mut self, n: usize, node: &Node) -> Result<u64> {
        let p = node.ctx.p();
        match self {
            Producer::Constant { rest } => {
                let (q, r) = rest.div_mod_floor(&BigInt::from(p));
                *rest = q;
                Ok(r.to_u64().expect("digit below p"))
            }
            Producer::Add { x, y, carry } => {
                let s = x.digit(n)? as u128 + y.digit(n)? as u128 + *carry as u128;
                *carry = (s / p as u128) as u64;
                Ok((s % p as u128) as u64)
            }
            Producer::Sub { x, y, borrow } => {
                let a = x.digit(n)? as i128;
                let b = y.digit(n)? as i128 + *borrow as i128;
                *borrow = a < b;
                Ok(if a < b { (a + p as i128 - b) as u64 } else { (a - b) as u64 })
            }
            Producer::Mul(state) => state.next(n, p),
            Producer::ShiftLeft { x, k } => {
                if n < *k {
                    Ok(0)
                } else {
                    x.digit(n - *k)
                }
            }
            Producer::ShiftRight { x, k } => x.digit(n + *k),
            Producer::FixedPoint { body } => {
                body.as_ref().expect("fixed point body installed").digit(n)
            }
            Producer::SelfRef { target } => {
                let target = target.upgrade().ok_or_else(|| {
                    PadicError::InvalidParameter("fixed point dropped while in use".into())
                })?;
                let digits = target.lock_digits();
                digits
                    .get(n)
                    .copied()
                    .ok_or(PadicError::ContractionViolation { index: n, current: digits.len() })
            }
            Producer::Rule { rule } => rule(n, &DigitView { node, current: n }),
            Producer::External { oracle, precision, buffer, queries } => {
                if n >= buffer.len() {
                    let prec = (n + 1).max(2 * *precision);
                    let value = oracle(prec)?;
                    *precision = prec;
                    queries.push(prec);
                    *buffer = crate::scalar::low_digits(&value, p, prec);
                }
                Ok(buffer[n])
            }
        }
    }
}

impl MulState {
    fn read(&mut self, from_x: bool, start: usize, len: usize, n: usize) -> Result<Vec<u64>> {
        self.stats.touches += len as u64;
        if start + len > n + 1 {
            self.stats.online_violations += (start + len - (n + 1).max(start)) as u64;
        }
        let operand = if from_x { &self.x } else { &self.y };
        operand.digit_range(start, start + len)
    }

    fn next(&mut self, n: usize, p: u64) -> Result<u64> {
        let mut m = n + 2;
        let mut level = 0;
        let mut blocks = Vec::new();
        while m > 1 {
            let size = 1usize << level;
            let a0 = size - 1;
            let b0 = (m - 1) * size - 1;
            let xs = self.read(true, a0, size, n)?;
            let ys = self.read(false, b0, size, n)?;
            blocks.push(block_product(&xs, &ys, p));
            if self.record {
                self.stats.paving.push(PavingSquare { digit: n, i0: a0, j0: b0, size });
            }
            if m > 2 {
                let ys = self.read(false, a0, size, n)?;
                let xs = self.read(true, b0, size, n)?;
                blocks.push(block_product(&xs, &ys, p));
                if self.record {
                    self.stats.paving.push(PavingSquare { digit: n, i0: b0, j0: a0, size });
                }
            }
            if m % 2 == 1 {
                break;
            }
            m /= 2;
            level += 1;
        }
        for block in blocks {
            if self.carry.len() < block.len() {
                self.carry.resize(block.len(), BigUint::zero());
            }
            for (c, b) in self.carry.iter_mut().zip(block) {
                *c += b;
            }
        }
        let s0 = self.carry.pop_front().unwrap_or_default();
        let (q, r) = s0.div_rem(&BigUint::from(p));
        match self.carry.front_mut() {
            Some(c) => *c += q,
            None if !q.is_zero() => self.carry.push_back(q),
            None => {}
        }
        if self.record {
            let max = self.carry.iter().max().cloned().unwrap_or_default();
            self.stats.carry_log.push((self.carry.len().saturating_sub(1), max));
        }
        Ok(r.to_u64().expect("digit below p"))
    }
}

/// Product of two digit blocks of equal length as a polynomial in `t`.
fn block_product(xs: &[u64], ys: &[u64], p: u64) -> Vec<BigUint> {
    if p <= SMALL_PRIME_LIMIT {
        let a: Vec<i128> = xs.iter().map(|&d| d as i128).collect();
        let b: Vec<i128> = ys.iter().map(|&d| d as i128).collect();
        karatsuba(&a, &b)
            .into_iter()
            .map(|c| BigUint::from(u128::try_from(c).expect("nonnegative coefficient")))
            .collect()
    } else {
        let mut out = vec![BigUint::zero(); xs.len() + ys.len() - 1];
        for (i, &a) in xs.iter().enumerate() {
            for (j, &b) in ys.iter().enumerate() {
                out[i + j] += BigUint::from(a) * BigUint::from(b);
            }
        }
        out
    }
}

fn schoolbook(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Karatsuba product of two equal-length coefficient vectors.
fn karatsuba(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len();
    if n < KARATSUBA_THRESHOLD || n % 2 == 1 || b.len() != n {
        return schoolbook(a, b);
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let sa: Vec<i128> = a0.iter().zip(a1).map(|(x, y)| x + y).collect();
    let sb: Vec<i128> = b0.iter().zip(b1).map(|(x, y)| x + y).collect();
    let z1 = karatsuba(&sa, &sb);
    let mut out = vec![0i128; 2 * n - 1];
    for (i, c) in z0.iter().enumerate() {
        out[i] += c;
        out[i + h] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        out[i + 2 * h] += c;
        out[i + h] -= c;
    }
    for (i, c) in z1.iter().enumerate() {
        out[i + h] += c;
    }
    out
}

impl LazyNumber {
    fn from_producer(ctx: &PrimeContext, producer: Producer) -> Self {
        LazyNumber {
            node: Arc::new(Node {
                ctx: *ctx,
                digits: Mutex::new(Vec::new()),
                producer: Mutex::new(producer),
                demand: AtomicUsize::new(0),
            }),
        }
    }

    /// The expansion of an integer; negative integers have digits `p - 1`
    /// from some index on.
    pub fn constant(ctx: &PrimeContext, value: impl Into<BigInt>) -> Self {
        Self::from_producer(ctx, Producer::Constant { rest: value.into() })
    }

    /// A number given by an oracle returning a representative of the value
    /// modulo `p^k` for a requested `k`. The oracle is queried at doubling
    /// precisions and its answers are cached.
    pub fn external(
        ctx: &PrimeContext,
        oracle: impl FnMut(usize) -> Result<BigInt> + Send + 'static,
    ) -> Self {
        Self::from_producer(
            ctx,
            Producer::External {
                oracle: Box::new(oracle),
                precision: 0,
                buffer: Vec::new(),
                queries: Vec::new(),
            },
        )
    }

    /// A number defined digit by digit; the rule producing digit `n` may
    /// read digits `< n` of the number itself through the view.
    pub fn from_rule(
        ctx: &PrimeContext,
        rule: impl FnMut(usize, &DigitView<'_>) -> Result<u64> + Send + 'static,
    ) -> Self {
        Self::from_producer(ctx, Producer::Rule { rule: Box::new(rule) })
    }

    pub fn ctx(&self) -> PrimeContext {
        self.node.ctx
    }

    pub fn p(&self) -> u64 {
        self.node.ctx.p()
    }

    /// Digit `n`, producing and caching all digits below it first.
    pub fn digit(&self, n: usize) -> Result<u64> {
        self.node.demand.fetch_max(n + 1, Ordering::Relaxed);
        self.node.ensure(n + 1)?;
        Ok(self.node.lock_digits()[n])
    }

    /// Digits `lo..hi`.
    pub fn digit_range(&self, lo: usize, hi: usize) -> Result<Vec<u64>> {
        if hi == 0 {
            return Ok(Vec::new());
        }
        self.node.demand.fetch_max(hi, Ordering::Relaxed);
        self.node.ensure(hi)?;
        Ok(self.node.lock_digits()[lo..hi].to_vec())
    }

    /// The first `count` digits, little-endian.
    pub fn digits(&self, count: usize) -> Result<Vec<u64>> {
        self.digit_range(0, count)
    }

    /// The value modulo `p^count`, in `[0, p^count)`.
    pub fn residue(&self, count: usize) -> Result<BigInt> {
        let ds = self.digits(count)?;
        let pb = BigInt::from(self.p());
        Ok(ds.iter().rev().fold(BigInt::zero(), |acc, &d| acc * &pb + BigInt::from(d)))
    }

    /// The value as a scalar known modulo `p^count`.
    pub fn to_scalar(&self, count: usize) -> Result<PadicScalar> {
        Ok(PadicScalar::with_precision(&self.ctx(), self.residue(count)?, count as i64))
    }

    /// Number of digits cached so far.
    pub fn cached_len(&self) -> usize {
        self.node.lock_digits().len()
    }

    /// One more than the largest digit index ever requested from this node.
    pub fn demand(&self) -> usize {
        self.node.demand.load(Ordering::Relaxed)
    }

    /// Instrumentation of a product node; `None` for other producers.
    pub fn mul_stats(&self) -> Option<MulStats> {
        match &*self.node.producer.lock().unwrap_or_else(|e| e.into_inner()) {
            Producer::Mul(state) => Some(state.stats.clone()),
            _ => None,
        }
    }

    /// Precisions at which an oracle-backed number has been queried.
    pub fn oracle_queries(&self) -> Option<Vec<usize>> {
        match &*self.node.producer.lock().unwrap_or_else(|e| e.into_inner()) {
            Producer::External { queries, .. } => Some(queries.clone()),
            _ => None,
        }
    }

    fn check_same_prime(&self, other: &LazyNumber) -> Result<()> {
        if self.p() != other.p() {
            return Err(PadicError::PrimeMismatch(self.p(), other.p()));
        }
        Ok(())
    }
}

impl std::fmt::Debug for LazyNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LazyNumber")
            .field("p", &self.p())
            .field("cached", &self.node.lock_digits().len())
            .finish()
    }
}

pub fn lazy_add(x: &LazyNumber, y: &LazyNumber) -> Result<LazyNumber> {
    x.check_same_prime(y)?;
    Ok(LazyNumber::from_producer(
        &x.ctx(),
        Producer::Add { x: x.clone(), y: y.clone(), carry: 0 },
    ))
}

pub fn lazy_sub(x: &LazyNumber, y: &LazyNumber) -> Result<LazyNumber> {
    x.check_same_prime(y)?;
    Ok(LazyNumber::from_producer(
        &x.ctx(),
        Producer::Sub { x: x.clone(), y: y.clone(), borrow: false },
    ))
}

pub fn lazy_neg(x: &LazyNumber) -> LazyNumber {
    let zero = LazyNumber::constant(&x.ctx(), 0);
    lazy_sub(&zero, x).expect("same prime")
}

pub fn lazy_mul(x: &LazyNumber, y: &LazyNumber) -> Result<LazyNumber> {
    mul_node(x, y, false)
}

/// A product that also records its paving squares and carry sizes.
pub fn lazy_mul_recorded(x: &LazyNumber, y: &LazyNumber) -> Result<LazyNumber> {
    mul_node(x, y, true)
}

fn mul_node(x: &LazyNumber, y: &LazyNumber, record: bool) -> Result<LazyNumber> {
    x.check_same_prime(y)?;
    Ok(LazyNumber::from_producer(
        &x.ctx(),
        Producer::Mul(Box::new(MulState {
            x: x.clone(),
            y: y.clone(),
            carry: VecDeque::new(),
            record,
            stats: MulStats::default(),
        })),
    ))
}

/// `p^k x`.
pub fn lazy_shift_left(x: &LazyNumber, k: usize) -> LazyNumber {
    LazyNumber::from_producer(&x.ctx(), Producer::ShiftLeft { x: x.clone(), k })
}

/// `(x - (x mod p^k)) / p^k`: the digits of `x` from index `k` on.
pub fn lazy_shift_right(x: &LazyNumber, k: usize) -> LazyNumber {
    LazyNumber::from_producer(&x.ctx(), Producer::ShiftRight { x: x.clone(), k })
}

/// The fixed point of the map built by `body` from a reference to the
/// result itself. Producing digit `n` of the result may only read digits
/// `< n` through that reference; a deeper read fails with
/// [`PadicError::ContractionViolation`].
pub fn lazy_fixed_point(
    ctx: &PrimeContext,
    body: impl FnOnce(&LazyNumber) -> Result<LazyNumber>,
) -> Result<LazyNumber> {
    let fixed = LazyNumber::from_producer(ctx, Producer::FixedPoint { body: None });
    let self_ref = LazyNumber::from_producer(
        ctx,
        Producer::SelfRef { target: Arc::downgrade(&fixed.node) },
    );
    let built = body(&self_ref)?;
    if built.p() != ctx.p() {
        return Err(PadicError::PrimeMismatch(ctx.p(), built.p()));
    }
    *fixed.node.producer.lock().unwrap_or_else(|e| e.into_inner()) =
        Producer::FixedPoint { body: Some(built) };
    Ok(fixed)
}

/// Index of the first nonzero digit, searched up to the context's cap.
pub fn lazy_val(x: &LazyNumber) -> Result<u64> {
    let cap = x.ctx().val_cap();
    for k in 0..cap {
        if x.digit(k as usize)? != 0 {
            return Ok(k);
        }
    }
    Err(PadicError::ValuationCapExceeded(cap))
}

/// Compare the first `bound` digits.
pub fn lazy_is_equal(x: &LazyNumber, y: &LazyNumber, bound: usize) -> Result<Agreement> {
    x.check_same_prime(y)?;
    for k in 0..bound {
        if x.digit(k)? != y.digit(k)? {
            return Ok(Agreement::DifferAt(k));
        }
    }
    Ok(Agreement::EqualUpTo(bound))
}

/// `a / b` in Zp.
///
/// The valuation `k` of `b` is found by a bounded search; the low `k` digits
/// of `a` must vanish. After dividing both by `p^k`, and multiplying both by
/// an inverse `c` of the new digit 0 of `b` modulo p when that digit is not
/// 1, the quotient is the fixed point of `x -> a - p b' x` where
/// `b = 1 + p b'`.
pub fn lazy_div(a: &LazyNumber, b: &LazyNumber) -> Result<LazyNumber> {
    a.check_same_prime(b)?;
    let ctx = a.ctx();
    let p = ctx.p();
    let k = lazy_val(b)? as usize;
    for i in 0..k {
        if a.digit(i)? != 0 {
            return Err(PadicError::Domain(format!(
                "quotient is not in Z{p}: numerator has valuation {i}, denominator {k}"
            )));
        }
    }
    let (mut a, mut b) = if k > 0 {
        (lazy_shift_right(a, k), lazy_shift_right(b, k))
    } else {
        (a.clone(), b.clone())
    };
    let b0 = b.digit(0)?;
    if b0 != 1 {
        let c = mod_inverse(&BigInt::from(b0), &pow_p(p, 1)).expect("nonzero digit is a unit");
        let c = LazyNumber::constant(&ctx, c);
        a = lazy_mul(&a, &c)?;
        b = lazy_mul(&b, &c)?;
    }
    let b_hi = lazy_shift_right(&b, 1);
    lazy_fixed_point(&ctx, |x| {
        let t = lazy_shift_left(&lazy_mul(&b_hi, x)?, 1);
        lazy_sub(&a, &t)
    })
}
