//! Newton iteration over Zp: root lifting, inverses and square roots.
//!
//! Every solver certifies its output from the quadratic rate of convergence
//! of Newton's scheme. After `i` steps from a seed `a` with `k = val f'(a)`
//! and `e = val f(a) > 2k`, the iterate agrees with the root to at least
//! `k + 2^i (e - 2k)` digits. The loop stops as soon as this count reaches
//! the requested precision, or when the interval precision of the iterates
//! caps below it.
//!
//! Two ways of carrying iterates are offered. The interval way keeps each
//! iterate as computed by zealous arithmetic. The zero-fill way keeps only
//! the certified digits of each iterate, sets the others to zero and treats
//! the result as exact; this avoids the precision lost by divisions in the
//! recurrence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{PadicError, Result};
use crate::lattice::PMatrix;
use crate::relaxed::LazyNumber;
use crate::scalar::{mod_inverse, parse_scalar, pow_p, print_scalar, PadicScalar, Precision, PrimeContext, PrintStyle};
use crate::zealous::{zadd, zdiv, zmul, zsub};

/// Relative digits given to an exact input whose root is not exact.
pub const EXACT_INPUT_DIGITS: i64 = 64;

/// A polynomial with scalar coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PPolynomial {
    p: u64,
    coefficients: Vec<PadicScalar>,
}

impl PPolynomial {
    /// Trailing exact zeros are dropped; the zero polynomial keeps a single
    /// coefficient.
    pub fn new(ctx: &PrimeContext, coefficients: Vec<PadicScalar>) -> Result<Self> {
        if let Some(bad) = coefficients.iter().find(|c| c.p() != ctx.p()) {
            return Err(PadicError::PrimeMismatch(ctx.p(), bad.p()));
        }
        let mut coefficients = coefficients;
        while coefficients.len() > 1 && coefficients.last().is_some_and(|c| c.is_exact_zero()) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(PadicScalar::exact_zero(ctx));
        }
        Ok(PPolynomial { p: ctx.p(), coefficients })
    }

    pub fn from_ints(ctx: &PrimeContext, coefficients: &[i64]) -> Self {
        Self::new(ctx, coefficients.iter().map(|&c| PadicScalar::exact(ctx, c)).collect()).expect("same prime")
    }

    /// Comma-separated scalar literals, constant term first.
    pub fn parse(text: &str, ctx: &PrimeContext) -> Result<Self> {
        let coefficients =
            text.split(',').map(|c| parse_scalar(c.trim(), ctx)).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, coefficients)
    }

    pub fn print(&self, style: PrintStyle) -> String {
        self.coefficients.iter().map(|c| print_scalar(c, style)).collect::<Vec<_>>().join(", ")
    }

    pub fn ctx(&self) -> PrimeContext {
        PrimeContext::new(self.p).expect("prime")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Index of the last stored coefficient.
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[PadicScalar] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> PadicScalar {
        self.coefficients.get(i).cloned().unwrap_or_else(|| PadicScalar::exact_zero(&self.ctx()))
    }

    pub fn leading(&self) -> &PadicScalar {
        self.coefficients.last().expect("nonempty")
    }

    /// Horner evaluation in interval arithmetic.
    pub fn eval(&self, x: &PadicScalar) -> Result<PadicScalar> {
        let mut acc = PadicScalar::exact_zero(&self.ctx());
        for c in self.coefficients.iter().rev() {
            acc = zadd(&zmul(&acc, x)?, c)?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> PPolynomial {
        let ctx = self.ctx();
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| zmul(&PadicScalar::exact(&ctx, i as i64), c).expect("same prime"))
            .collect();
        PPolynomial::new(&ctx, coefficients).expect("same prime")
    }

    /// The divided derivative of order `k`: the coefficient of `h^k` in
    /// `f(X + h)`, as a polynomial in `X`.
    pub fn divided_derivative(&self, k: usize) -> PPolynomial {
        let ctx = self.ctx();
        let coefficients = (k..self.coefficients.len())
            .map(|i| {
                let binom = binomial(i as u64, k as u64);
                zmul(&PadicScalar::exact(&ctx, binom), &self.coefficients[i]).expect("same prime")
            })
            .collect();
        PPolynomial::new(&ctx, coefficients).expect("same prime")
    }

    /// Smallest absolute precision of a coefficient (`None` if exact).
    pub fn min_precision(&self) -> Option<i64> {
        self.coefficients.iter().filter_map(|c| c.abs_prec()).min()
    }

    /// True when every coefficient lies in Zp.
    pub fn is_integral(&self) -> bool {
        self.coefficients.iter().all(|c| c.is_indistinguishable_from_zero() || c.v() >= 0)
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// How iterates are carried from one step to the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterateMode {
    /// Keep each iterate with its interval precision.
    Interval,
    /// Keep only the certified digits, zero-fill the rest, and continue
    /// with an exact value.
    ZeroFill,
}

/// One Newton iterate with its certified digit count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonStep {
    pub value: PadicScalar,
    /// Digits guaranteed correct by the convergence rate.
    pub certified: i64,
}

/// A lifted root together with its iterates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonOutcome {
    pub value: PadicScalar,
    pub steps: Vec<NewtonStep>,
}

/// Digits known correct in an iterate: the certified count capped by its
/// interval precision.
fn correct_digits(step: &NewtonStep) -> i64 {
    step.value.abs_prec().map_or(step.certified, |n| n.min(step.certified))
}

/// Runs `x -> step(x)` from the exact seed `x0` with certified digit counts
/// `certified(i)`. With a target the result is returned at that precision
/// or the loop fails; without one, iteration stops when further steps
/// cannot add known digits and the best iterate is returned.
fn drive(
    x0: PadicScalar,
    certified: impl Fn(u32) -> i64,
    mut step: impl FnMut(&PadicScalar) -> Result<PadicScalar>,
    mode: IterateMode,
    target: Option<i64>,
) -> Result<NewtonOutcome> {
    let mut steps = vec![NewtonStep { value: x0, certified: certified(0) }];
    let mut i = 0u32;
    loop {
        let last = steps.last().expect("nonempty");
        let correct = correct_digits(last);
        match target {
            Some(n) if correct >= n => {
                let value = last.value.truncate(n);
                return Ok(NewtonOutcome { value, steps });
            }
            _ => {}
        }
        let capped = last.value.abs_prec().is_some_and(|prec| last.certified >= prec);
        if capped {
            if let Some(n) = target {
                return Err(PadicError::PrecisionInsufficient(format!(
                    "iterates are known to {correct} digits, below the requested {n}"
                )));
            }
            let value = last.value.clone();
            return Ok(NewtonOutcome { value, steps });
        }
        let carried = match mode {
            IterateMode::Interval => last.value.clone(),
            IterateMode::ZeroFill => last.value.truncate(correct).lift_exact(),
        };
        let next = step(&carried)?;
        i += 1;
        if i > 64 {
            return Err(PadicError::InvalidParameter("Newton iteration did not terminate".into()));
        }
        if let Some(last) = steps.last_mut() {
            if mode == IterateMode::ZeroFill {
                last.value = carried;
            }
        }
        // An exact fixed point is an exact root.
        if next.is_exact() && steps.last().is_some_and(|s| s.value == next) {
            steps.push(NewtonStep { value: next.clone(), certified: i64::MAX });
            let value = match target {
                Some(n) => next.truncate(n).lift_exact(),
                None => next,
            };
            return Ok(NewtonOutcome { value, steps });
        }
        steps.push(NewtonStep { value: next, certified: certified(i) });
    }
}

/// Certified digits after `i` steps: `k + 2^i (e - 2k)`, saturating.
fn quadratic_rate(k: i64, e: i64) -> impl Fn(u32) -> i64 {
    move |i| {
        let gain = (e - 2 * k).saturating_mul(1i64.checked_shl(i.min(62)).unwrap_or(i64::MAX));
        k.saturating_add(gain)
    }
}

/// Lower bound on the valuation of `x`: its valuation, or its precision if
/// it is indistinguishable from zero; `None` for an exact zero.
fn valuation_bound(x: &PadicScalar) -> Option<i64> {
    if x.is_exact_zero() {
        None
    } else {
        Some(x.v())
    }
}

/// Checks `val f(a) > 2 val f'(a)` and returns `(k, e)`.
fn hensel_hypothesis(f: &PPolynomial, a: &PadicScalar) -> Result<(i64, Option<i64>)> {
    let fa = f.eval(a)?;
    let da = f.derivative().eval(a)?;
    if da.is_indistinguishable_from_zero() {
        return Err(PadicError::HenselHypothesisFailure);
    }
    let k = da.v();
    let e = valuation_bound(&fa);
    if e.is_some_and(|e| e <= 2 * k) {
        return Err(PadicError::HenselHypothesisFailure);
    }
    Ok((k, e))
}

/// The root of `f` in the ball around `a` given by Hensel's lemma, to
/// absolute precision `n`, with each iterate zero-filled past its certified
/// digits.
pub fn hensel_lift(f: &PPolynomial, a: &PadicScalar, n: i64) -> Result<PadicScalar> {
    Ok(hensel_lift_traced(f, a, n, IterateMode::ZeroFill)?.value)
}

/// [`hensel_lift`] with a choice of iterate handling, returning every
/// iterate.
pub fn hensel_lift_traced(f: &PPolynomial, a: &PadicScalar, n: i64, mode: IterateMode) -> Result<NewtonOutcome> {
    if !f.is_integral() || (!a.is_indistinguishable_from_zero() && a.v() < 0) {
        return Err(PadicError::Domain("Hensel lifting needs integral data".into()));
    }
    let seed = a.lift_exact();
    let (k, e) = hensel_hypothesis(f, &seed)?;
    let Some(e) = e else {
        return Ok(NewtonOutcome { value: seed.truncate(n).lift_exact(), steps: vec![] });
    };
    let df = f.derivative();
    let step = |x: &PadicScalar| -> Result<PadicScalar> { zsub(x, &zdiv(&f.eval(x)?, &df.eval(x)?)?) };
    drive(seed, quadratic_rate(k, e), step, mode, Some(n))
}

/// `1/c` for a unit `c`, to absolute precision `n`, by `x -> 2x - c x^2`
/// from the inverse of the first digit.
pub fn newton_inverse(c: &PadicScalar, n: i64) -> Result<PadicScalar> {
    Ok(newton_inverse_traced(c, n)?.value)
}

/// [`newton_inverse`] with every iterate.
pub fn newton_inverse_traced(c: &PadicScalar, n: i64) -> Result<NewtonOutcome> {
    if c.is_indistinguishable_from_zero() || c.v() != 0 {
        return Err(PadicError::Domain("Newton inversion needs a unit".into()));
    }
    let ctx = PrimeContext::new(c.p())?;
    let pb = BigInt::from(c.p());
    let seed = mod_inverse(&c.unit().mod_floor(&pb), &pb).expect("unit digit");
    let two = PadicScalar::exact(&ctx, 2);
    let step = |x: &PadicScalar| -> Result<PadicScalar> { zsub(&zmul(&two, x)?, &zmul(c, &zmul(x, x)?)?) };
    drive(PadicScalar::exact(&ctx, seed), |i| 1i64.checked_shl(i.min(62)).unwrap_or(i64::MAX), step, IterateMode::ZeroFill, Some(n))
}

/// The inverse of a lazy unit as a lazy number. Digits are produced by
/// Newton inversion of a truncation of `c`, with the working precision
/// doubled on each request.
pub fn newton_inverse_lazy(c: &LazyNumber) -> Result<LazyNumber> {
    if c.digit(0)? == 0 {
        return Err(PadicError::Domain("Newton inversion needs a unit".into()));
    }
    let source = c.clone();
    Ok(LazyNumber::external(&c.ctx(), move |prec| {
        let x = newton_inverse(&source.to_scalar(prec)?, prec as i64)?;
        Ok(x.to_integer().expect("integral"))
    }))
}

/// Inverse of a matrix over Zp that is invertible modulo p, to absolute
/// precision `n`, by `X -> 2X - X C X` from the inverse modulo p.
pub fn newton_matrix_inverse(c: &PMatrix, n: i64) -> Result<PMatrix> {
    if !c.is_square() {
        return Err(PadicError::Dimension("inverse of a non-square matrix".into()));
    }
    if c.entries().iter().any(|x| !x.is_indistinguishable_from_zero() && x.v() < 0) {
        return Err(PadicError::Domain("matrix entries must lie in Zp".into()));
    }
    let ctx = c.ctx();
    let p = ctx.p();
    let d = c.rows();
    let residues: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            c.row(i)
                .iter()
                .map(|x| if x.is_indistinguishable_from_zero() { BigInt::zero() } else { x.residue(1).expect("integral") })
                .collect()
        })
        .collect();
    let seed = inverse_mod_p(&residues, p)
        .ok_or_else(|| PadicError::Domain("matrix is singular modulo p".into()))?;
    let mut x = PMatrix::from_fn(&ctx, d, d, |i, j| PadicScalar::exact(&ctx, seed[i][j].clone()))?;
    let two = PadicScalar::exact(&ctx, 2);
    let mut certified = 1i64;
    while certified < n {
        let next = x.scale(&two)?.sub(&x.mul(c)?.mul(&x)?)?;
        let cap = next.min_precision().unwrap_or(i64::MAX);
        let correct = (2 * certified).min(cap);
        if correct <= certified {
            return Err(PadicError::PrecisionInsufficient(format!(
                "matrix is known to {cap} digits, below the requested {n}"
            )));
        }
        certified = correct;
        x = next.truncate(correct).lift_exact();
    }
    Ok(x.truncate(n))
}

/// Gauss-Jordan elimination over the residue field.
fn inverse_mod_p(m: &[Vec<BigInt>], p: u64) -> Option<Vec<Vec<BigInt>>> {
    let d = m.len();
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigInt> = row.iter().map(|x| x.mod_floor(&pb)).collect();
            r.extend((0..d).map(|j| BigInt::from((i == j) as u32)));
            r
        })
        .collect();
    for j in 0..d {
        let piv = (j..d).find(|&i| !a[i][j].is_zero())?;
        a.swap(j, piv);
        let inv = mod_inverse(&a[j][j], &pb)?;
        for k in 0..2 * d {
            a[j][k] = (&a[j][k] * &inv).mod_floor(&pb);
        }
        for i in 0..d {
            if i != j && !a[i][j].is_zero() {
                let f = a[i][j].clone();
                for k in 0..2 * d {
                    let t = (&a[i][k] - &f * &a[j][k]).mod_floor(&pb);
                    a[i][k] = t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[d..].to_vec()).collect())
}

/// How square-root iterates are carried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqrtVariant {
    /// `x -> (x + c/x)/2` in interval arithmetic throughout.
    NaiveZealous,
    /// The same recurrence with every iterate zero-filled past its
    /// certified digits.
    ZeroLift,
}

/// A square root of `c` with all iterates. At p = 2 this is the root
/// congruent to 1 modulo 4 of the unit part (times `2^(v/2)`); at odd p it
/// lifts the smallest square root modulo p of the unit part.
///
/// The precision of the output follows from the precision of `c`: an exact
/// `c` that is not the square of an integer is given [`EXACT_INPUT_DIGITS`]
/// relative digits first.
pub fn padic_sqrt_traced(c: &PadicScalar, variant: SqrtVariant) -> Result<NewtonOutcome> {
    let p = c.p();
    let ctx = PrimeContext::new(p)?;
    if c.is_exact_zero() {
        return Ok(NewtonOutcome { value: c.clone(), steps: vec![] });
    }
    if c.is_indistinguishable_from_zero() {
        let half = c.abs_prec().expect("inexact") / 2;
        return Ok(NewtonOutcome { value: PadicScalar::inexact_zero(&ctx, half), steps: vec![] });
    }
    let v = c.v();
    if v % 2 != 0 {
        return Err(PadicError::NotASquare);
    }
    // Unit part, at its own relative precision.
    let unit_prec = match c.rel_prec() {
        Some(r) => Precision::Finite(r),
        None => Precision::Exact,
    };
    if let Some(root) = exact_integer_sqrt(c) {
        return Ok(NewtonOutcome { value: root, steps: vec![] });
    }
    let u = match unit_prec {
        Precision::Finite(r) => PadicScalar::from_parts(&ctx, 0, c.unit().clone(), Precision::Finite(r)),
        Precision::Exact => PadicScalar::from_parts(&ctx, 0, c.unit().clone(), Precision::Finite(EXACT_INPUT_DIGITS)),
    };
    let seed = sqrt_seed(&u)?;
    let f = PPolynomial::new(&ctx, vec![u.neg(), PadicScalar::exact_zero(&ctx), PadicScalar::exact(&ctx, 1)])?;
    let (k, e) = hensel_hypothesis(&f, &PadicScalar::exact(&ctx, seed.clone()))?;
    let e = e.unwrap_or(i64::MAX / 4);
    let half = PadicScalar::exact(&ctx, 2);
    let step = |x: &PadicScalar| -> Result<PadicScalar> { zdiv(&zadd(x, &zdiv(&u, x)?)?, &half) };
    let mode = match variant {
        SqrtVariant::NaiveZealous => IterateMode::Interval,
        SqrtVariant::ZeroLift => IterateMode::ZeroFill,
    };
    let mut outcome = drive(PadicScalar::exact(&ctx, seed), quadratic_rate(k, e), step, mode, None)?;
    let last = outcome.steps.last().expect("nonempty");
    let known = correct_digits(last);
    let root = last.value.truncate(known);
    outcome.value = zmul(&root, &PadicScalar::exact_shifted(&ctx, 1, v / 2))?;
    Ok(outcome)
}

/// A square root of `c`; see [`padic_sqrt_traced`].
pub fn padic_sqrt(c: &PadicScalar, variant: SqrtVariant) -> Result<PadicScalar> {
    Ok(padic_sqrt_traced(c, variant)?.value)
}

/// The root when `c` is the exact square of an integer times an even
/// power of p, chosen with the same normalization as the lifted roots.
fn exact_integer_sqrt(c: &PadicScalar) -> Option<PadicScalar> {
    if !c.is_exact() || c.unit().is_negative() {
        return None;
    }
    let r = c.unit().sqrt();
    if &(&r * &r) != c.unit() {
        return None;
    }
    let ctx = PrimeContext::new(c.p()).ok()?;
    let p = c.p();
    // Pick the sign matching the seed rule.
    let r = if p == 2 {
        if (&r % 4u32) == BigInt::one() { r } else { -r }
    } else {
        let rp = r.mod_floor(&BigInt::from(p));
        let smallest = smallest_sqrt_mod_p(&(&r * &r).mod_floor(&BigInt::from(p)), p)?;
        if rp == smallest { r } else { -r }
    };
    Some(PadicScalar::exact_shifted(&ctx, r, c.v() / 2))
}

/// Seed for the unit part `u`: 1 at p = 2 (requires `u = 1 mod 8`), the
/// smallest square root modulo p otherwise.
fn sqrt_seed(u: &PadicScalar) -> Result<BigInt> {
    let p = u.p();
    if p == 2 {
        if u.rel_prec().is_some_and(|r| r < 3) {
            return Err(PadicError::PrecisionInsufficient("a 2-adic square root needs the unit known modulo 8".into()));
        }
        if u.unit().mod_floor(&BigInt::from(8)) != BigInt::one() {
            return Err(PadicError::NotASquare);
        }
        return Ok(BigInt::one());
    }
    let r = u.unit().mod_floor(&BigInt::from(p));
    smallest_sqrt_mod_p(&r, p).ok_or(PadicError::NotASquare)
}

/// Smallest `x` in `[0, p)` with `x^2 = a mod p`, for an odd prime p and
/// `a` prime to p. Exhaustive search below 2^16, Tonelli-Shanks above.
pub fn smallest_sqrt_mod_p(a: &BigInt, p: u64) -> Option<BigInt> {
    let a = a.mod_floor(&BigInt::from(p)).to_u64()?;
    if a == 0 {
        return Some(BigInt::zero());
    }
    if p < 1 << 16 {
        return (1..p).find(|x| x * x % p == a).map(BigInt::from);
    }
    let r = tonelli_shanks(a, p)?;
    Some(BigInt::from(r.min(p - r)))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Largest `k` with `p^k` dividing `x - y` for integers, capped at `cap`.
pub fn agreeing_digits(x: &BigInt, y: &BigInt, p: u64, cap: u64) -> u64 {
    let diff = x - y;
    (0..cap).find(|&k| !diff.is_multiple_of(&pow_p(p, k + 1))).unwrap_or(cap)
}
