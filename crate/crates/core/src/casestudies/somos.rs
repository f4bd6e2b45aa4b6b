//! The Somos-4 sequence `u_(n+4) = (u_(n+1) u_(n+3) + u_(n+2)^2) / u_n`
//! computed in every arithmetic, with a stabilized variant that keeps the
//! precision of the seeds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::adaptive::{run_adaptive, ChainStep, Lift, StepChain, StepPlan};
use super::backend::{exact_scalar, Arith, Backend, ExactArith, PFloatArith, ZealousArith};
use super::report::ExperimentReport;
use crate::error::{PadicError, Result};
use crate::lattice::{PMatrix, PrecisionLattice};
use crate::relaxed::{lazy_add, lazy_div, lazy_mul, LazyNumber};
use crate::scalar::{PadicScalar, Precision, PrimeContext, Rational};
use crate::zealous::{zadd, zdiv, zmul};

/// How the sequence is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SomosMode {
    /// Unroll the recurrence in interval arithmetic.
    NaiveZealous,
    /// Unroll the recurrence in p-adic floating point with as many digits
    /// as the seeds' precision.
    NaivePFloat,
    /// Unroll the recurrence on lazy numbers and read the term to the
    /// seeds' precision.
    NaiveLazy,
    /// Interval arithmetic with re-lifting before every step.
    StabilizedZealous,
    /// The stabilized computation behind a lazy number, restarted with
    /// doubled precision when it fails.
    StabilizedLazy,
    /// Exact rational computation reduced modulo `p^N`.
    RationalOracle,
}

impl SomosMode {
    pub const ALL: [SomosMode; 6] = [
        SomosMode::NaiveZealous,
        SomosMode::NaivePFloat,
        SomosMode::NaiveLazy,
        SomosMode::StabilizedZealous,
        SomosMode::StabilizedLazy,
        SomosMode::RationalOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SomosMode::NaiveZealous => "naive-zealous",
            SomosMode::NaivePFloat => "naive-pfloat",
            SomosMode::NaiveLazy => "naive-lazy",
            SomosMode::StabilizedZealous => "stabilized-zealous",
            SomosMode::StabilizedLazy => "stabilized-lazy",
            SomosMode::RationalOracle => "rational-oracle",
        }
    }

    pub fn backend(self) -> Backend {
        match self {
            SomosMode::NaiveZealous | SomosMode::StabilizedZealous => Backend::Zealous,
            SomosMode::NaivePFloat => Backend::PFloat,
            SomosMode::NaiveLazy | SomosMode::StabilizedLazy => Backend::Relaxed,
            SomosMode::RationalOracle => Backend::RationalOracle,
        }
    }
}

impl fmt::Display for SomosMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SomosMode {
    type Err = PadicError;
    fn from_str(s: &str) -> Result<Self> {
        SomosMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| PadicError::InvalidParameter(format!("unknown Somos mode {s:?}")))
    }
}

/// Terms `u_1, u_2, ...` computed before the recurrence stopped, and the
/// error that stopped it early, if any.
#[derive(Debug, Clone)]
pub struct SomosTrace<E> {
    pub terms: Vec<E>,
    pub failure: Option<PadicError>,
}

impl<E> SomosTrace<E> {
    /// Index (from 1) of the term whose computation failed.
    pub fn failed_at(&self) -> Option<usize> {
        self.failure.as_ref().map(|_| self.terms.len() + 1)
    }

    /// Term `u_n`, indices from 1.
    pub fn term(&self, n: usize) -> Option<&E> {
        n.checked_sub(1).and_then(|i| self.terms.get(i))
    }
}

/// One step of the recurrence on a window `(x, y, z, t)`.
pub fn somos_next<A: Arith>(a: &A, x: &A::Elem, y: &A::Elem, z: &A::Elem, t: &A::Elem) -> Result<A::Elem> {
    let num = a.add(&a.mul(y, t)?, &a.mul(z, z)?)?;
    a.div(&num, x)
}

/// Unroll the recurrence up to `u_n` in a backend, keeping every term and
/// stopping at the first failure.
pub fn somos_naive<A: Arith>(a: &A, seeds: [A::Elem; 4], n: usize) -> SomosTrace<A::Elem> {
    let mut terms: Vec<A::Elem> = seeds.into_iter().take(n.max(1)).collect();
    while terms.len() < n {
        let k = terms.len();
        match somos_next(a, &terms[k - 4], &terms[k - 3], &terms[k - 2], &terms[k - 1]) {
            Ok(u) => terms.push(u),
            Err(e) => return SomosTrace { terms, failure: Some(e) },
        }
    }
    SomosTrace { terms, failure: None }
}

/// Exact terms `u_1, ..., u_n` over the rationals.
pub fn somos_exact(seeds: [Rational; 4], n: usize) -> Result<Vec<Rational>> {
    let ex = ExactArith::new(&PrimeContext::new(2)?);
    let trace = somos_naive(&ex, seeds, n);
    match trace.failure {
        Some(e) => Err(e),
        None => Ok(trace.terms),
    }
}

/// Terms `u_1, ..., u_n` on lazy numbers built from the seed values.
pub fn somos_lazy_terms(ctx: &PrimeContext, seeds: &[LazyNumber; 4], n: usize) -> Result<Vec<LazyNumber>> {
    let mut terms: Vec<LazyNumber> = seeds.iter().take(n.max(1)).cloned().collect();
    while terms.len() < n {
        let k = terms.len();
        let (x, y, z, t) = (&terms[k - 4], &terms[k - 3], &terms[k - 2], &terms[k - 1]);
        if x.p() != ctx.p() {
            return Err(PadicError::PrimeMismatch(ctx.p(), x.p()));
        }
        let num = lazy_add(&lazy_mul(y, t)?, &lazy_mul(z, z)?)?;
        terms.push(lazy_div(&num, x)?);
    }
    Ok(terms)
}

fn window_valuation(x: &PadicScalar) -> i64 {
    if x.is_exact_zero() {
        i64::MAX / 8
    } else {
        x.v()
    }
}

/// The stabilized Somos computation as a chain of `n - 4` steps for seeds
/// known modulo `p^prec`. Before each step the next term is precomputed at
/// the current precision, `v` is the sum of the valuations of the next
/// window, a [`PadicError::PrecisionError`] is raised when `v >= prec`, and
/// the window is zero-filled to `prec + v + val(x)` digits.
pub fn somos_chain(ctx: &PrimeContext, n: usize, prec: i64) -> Result<StepChain> {
    if n < 5 {
        return Err(PadicError::InvalidParameter("the recurrence starts at u_5".into()));
    }
    let ctx = *ctx;
    let steps = (0..n - 4)
        .map(|_| {
            let evaluate = |s: &[PadicScalar]| -> Result<Vec<PadicScalar>> {
                let u = zdiv(&zadd(&zmul(&s[1], &s[3])?, &zmul(&s[2], &s[2])?)?, &s[0])?;
                Ok(vec![s[1].clone(), s[2].clone(), s[3].clone(), u])
            };
            let plan = move |s: &[PadicScalar]| -> Result<StepPlan> {
                let u = zdiv(&zadd(&zmul(&s[1], &s[3])?, &zmul(&s[2], &s[2])?)?, &s[0]).map_err(|e| match e {
                    PadicError::InexactZeroDivision => {
                        PadicError::PrecisionError { valuation: window_valuation(&s[0]), precision: prec }
                    }
                    other => other,
                })?;
                let v = [&s[1], &s[2], &s[3], &u].iter().map(|x| window_valuation(x)).fold(0i64, i64::saturating_add);
                if v >= prec {
                    return Err(PadicError::PrecisionError { valuation: v, precision: prec });
                }
                let lift = prec + v + window_valuation(&s[0]);
                Ok(StepPlan {
                    lift: vec![Lift::ZeroFillTo(lift); 4],
                    h_min: PrecisionLattice::diagonal(&ctx, &[prec + v; 4]),
                    h_max: PrecisionLattice::diagonal(&ctx, &[prec; 4]),
                })
            };
            ChainStep::new(4, 4, evaluate, plan)
        })
        .collect();
    StepChain::new(steps)
}

fn common_precision(seeds: &[PadicScalar; 4]) -> Result<i64> {
    seeds
        .iter()
        .filter_map(|s| s.abs_prec())
        .min()
        .ok_or_else(|| PadicError::InvalidParameter("seeds must carry a finite precision".into()))
}

fn require_units(seeds: &[PadicScalar; 4]) -> Result<()> {
    if seeds.iter().all(|s| s.is_unit()) {
        Ok(())
    } else {
        Err(PadicError::InvalidParameter("the stabilized recurrence needs unit seeds".into()))
    }
}

/// `u_n` at the seeds' precision `O(p^N)` by the stabilized algorithm.
pub fn somos_stabilized(seeds: &[PadicScalar; 4], n: usize) -> Result<PadicScalar> {
    require_units(seeds)?;
    let prec = common_precision(seeds)?;
    if n <= 4 {
        return Ok(seeds[n.max(1) - 1].truncate(prec));
    }
    let ctx = PrimeContext::new(seeds[0].p())?;
    let chain = somos_chain(&ctx, n, prec)?;
    let out = run_adaptive(&chain, seeds, &PrecisionLattice::diagonal(&ctx, &[prec; 4]))?;
    Ok(out[3].clone())
}

/// `u_n` as a lazy number: a request for `k` digits runs the stabilized
/// algorithm on the seeds read to `k` digits, doubling the precision after
/// every [`PadicError::PrecisionError`].
pub fn somos_stabilized_lazy(seeds: &[LazyNumber; 4], n: usize) -> LazyNumber {
    let ctx = seeds[0].ctx();
    let seeds = seeds.clone();
    LazyNumber::external(&ctx, move |k| {
        let mut prec = k.max(1);
        loop {
            let read = |s: &LazyNumber| s.to_scalar(prec);
            let window = [read(&seeds[0])?, read(&seeds[1])?, read(&seeds[2])?, read(&seeds[3])?];
            match somos_stabilized(&window, n) {
                Ok(u) => {
                    return u.residue(k as u64).ok_or_else(|| {
                        PadicError::PrecisionInsufficient(format!("u_{n} is not an integer"))
                    })
                }
                Err(PadicError::PrecisionError { .. }) if prec < (1 << 20) => prec *= 2,
                Err(e) => return Err(e),
            }
        }
    })
}

/// `u_n` modulo `p^prec` from the exact rational sequence.
pub fn somos_oracle(ctx: &PrimeContext, seeds: [Rational; 4], n: usize, prec: i64) -> Result<PadicScalar> {
    let terms = somos_exact(seeds, n)?;
    PadicScalar::from_rational(ctx, &terms[n - 1], Precision::Finite(prec))
}

/// Result of [`somos`].
#[derive(Debug, Clone)]
pub struct SomosOutcome {
    pub value: PadicScalar,
    /// For the lazy modes: one more than the largest digit index read from
    /// each seed.
    pub seed_demand: Option<[usize; 4]>,
    pub report: ExperimentReport,
}

fn seed_integers(seeds: &[PadicScalar; 4]) -> Result<[BigInt; 4]> {
    let get = |s: &PadicScalar| {
        s.lift_exact()
            .to_integer()
            .ok_or_else(|| PadicError::InvalidParameter("lazy seeds must be p-adic integers".into()))
    };
    Ok([get(&seeds[0])?, get(&seeds[1])?, get(&seeds[2])?, get(&seeds[3])?])
}

/// `u_n` for seeds known modulo `p^N` (the smallest seed precision) in the
/// chosen mode, with a report comparing it to the exact value modulo
/// `p^N`.
pub fn somos(seeds: &[PadicScalar; 4], n: usize, mode: SomosMode) -> Result<SomosOutcome> {
    if n == 0 {
        return Err(PadicError::InvalidParameter("terms are numbered from 1".into()));
    }
    let ctx = PrimeContext::new(seeds[0].p())?;
    let prec = common_precision(seeds)?;
    let exact_seeds = [0, 1, 2, 3].map(|i| seeds[i].lift_exact().to_rational());
    let mut seed_demand = None;
    let value = match mode {
        SomosMode::NaiveZealous => finish(&ZealousArith::new(&ctx), seeds.clone(), n)?,
        SomosMode::NaivePFloat => {
            let a = PFloatArith::with_digits(&ctx, prec.max(1) as u32)?;
            finish(&a, [0, 1, 2, 3].map(|i| a.from_scalar(&seeds[i])), n)?
        }
        SomosMode::NaiveLazy => {
            let lazy = seed_integers(seeds)?.map(|s| LazyNumber::constant(&ctx, s));
            let terms = somos_lazy_terms(&ctx, &lazy, n)?;
            let u = terms[n - 1].to_scalar(prec.max(0) as usize)?;
            seed_demand = Some([0, 1, 2, 3].map(|i| lazy[i].demand()));
            u
        }
        SomosMode::StabilizedZealous => somos_stabilized(seeds, n)?,
        SomosMode::StabilizedLazy => {
            require_units(seeds)?;
            let lazy = seed_integers(seeds)?.map(|s| LazyNumber::constant(&ctx, s));
            let u = somos_stabilized_lazy(&lazy, n).to_scalar(prec.max(0) as usize)?;
            seed_demand = Some([0, 1, 2, 3].map(|i| lazy[i].demand()));
            u
        }
        SomosMode::RationalOracle => somos_oracle(&ctx, exact_seeds.clone(), n, prec)?,
    };
    let reference = somos_oracle(&ctx, exact_seeds, n, prec).ok();
    let mut report = ExperimentReport::new(format!("somos n={n} p={} N={prec} mode={mode}", ctx.p()));
    report.record(format!("u{n}"), mode.backend(), &value, reference.as_ref());
    Ok(SomosOutcome { value, seed_demand, report })
}

fn finish<A: Arith>(a: &A, seeds: [A::Elem; 4], n: usize) -> Result<PadicScalar> {
    let trace = somos_naive(a, seeds, n);
    match trace.failure {
        Some(e) => Err(e),
        None => a.to_scalar(&trace.terms[n - 1]),
    }
}

/// Jacobian of `(a, b, c, d) -> (u_(i+1), ..., u_(i+4))` at exact seeds, by
/// forward differentiation of the recurrence. Row `r` holds the
/// derivatives with respect to seed `r`.
pub fn somos_jacobian_exact(seeds: [Rational; 4], i: usize) -> Result<Vec<Vec<Rational>>> {
    let mut window: Vec<(Rational, [Rational; 4])> = (0..4)
        .map(|k| {
            let mut g: [Rational; 4] = std::array::from_fn(|_| Rational::zero());
            g[k] = Rational::one();
            (seeds[k].clone(), g)
        })
        .collect();
    for _ in 0..i {
        let (x, y, z, t) = (&window[0], &window[1], &window[2], &window[3]);
        if x.0.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let num = &y.0 * &t.0 + &z.0 * &z.0;
        let u = &num / &x.0;
        let g: [Rational; 4] = std::array::from_fn(|k| {
            let dnum = &y.1[k] * &t.0 + &y.0 * &t.1[k] + Rational::from_integer(BigInt::from(2)) * &z.0 * &z.1[k];
            (dnum - &u * &x.1[k]) / &x.0
        });
        window.remove(0);
        window.push((u, g));
    }
    Ok((0..4).map(|r| (0..4).map(|c| window[c].1[r].clone()).collect()).collect())
}

/// [`somos_jacobian_exact`] as a scalar matrix.
pub fn somos_jacobian(ctx: &PrimeContext, seeds: [Rational; 4], i: usize) -> Result<PMatrix> {
    let j = somos_jacobian_exact(seeds, i)?;
    let entries = j.iter().flatten().map(|x| exact_scalar(ctx, x)).collect();
    PMatrix::new(ctx, 4, 4, entries)
}
