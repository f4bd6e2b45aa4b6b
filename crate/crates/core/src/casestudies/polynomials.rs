//! Polynomial experiments: Bézout coefficients by the extended Euclidean
//! algorithm, evaluation at the first integers and interpolation by finite
//! differences. Polynomials are coefficient vectors, constant term first.

use num_traits::{One, Zero};

use super::backend::{exact_scalar, Arith, ExactArith, PolyRing, Ring, ZealousArith};
use crate::error::{PadicError, Result};
use crate::lattice::PMatrix;
use crate::newton::PPolynomial;
use crate::scalar::{PadicScalar, PrimeContext, Rational};

/// Coefficient vector of a scalar polynomial embedded in a backend.
pub fn embed_poly<A: Arith>(a: &A, f: &PPolynomial) -> Vec<A::Elem> {
    f.coefficients().iter().map(|c| a.from_scalar(c)).collect()
}

/// A backend coefficient vector as a scalar polynomial with the claimed
/// precisions.
pub fn to_poly<A: Arith>(a: &A, f: &[A::Elem]) -> Result<PPolynomial> {
    let coefficients = f.iter().map(|c| a.to_scalar(c)).collect::<Result<Vec<_>>>()?;
    PPolynomial::new(&a.ctx(), coefficients)
}

fn trim<A: Arith>(a: &A, f: &mut Vec<A::Elem>) {
    while f.len() > 1 && a.is_exact_zero(f.last().expect("nonempty")) {
        f.pop();
    }
}

fn is_zero_poly<A: Arith>(a: &A, f: &[A::Elem]) -> bool {
    f.iter().all(|c| a.is_exact_zero(c))
}

/// Euclidean division `f = q g + r` with `deg r < deg g`. The leading
/// coefficient of every partial remainder is eliminated structurally, so an
/// inexact remainder never keeps a spurious top coefficient; exact zeros at
/// the top of the remainder are trimmed.
pub fn poly_divmod<A: Arith>(a: &A, f: &[A::Elem], g: &[A::Elem]) -> Result<(Vec<A::Elem>, Vec<A::Elem>)> {
    let dg = g.len() - 1;
    let lc = &g[dg];
    if f.len() <= dg {
        return Ok((vec![a.zero()], f.to_vec()));
    }
    let mut r = f.to_vec();
    let mut q = vec![a.zero(); f.len() - dg];
    for k in (0..q.len()).rev() {
        let c = a.div(&r[k + dg], lc)?;
        for i in 0..dg {
            r[k + i] = a.sub(&r[k + i], &a.mul(&c, &g[i])?)?;
        }
        r.truncate(k + dg);
        q[k] = c;
    }
    if r.is_empty() {
        r.push(a.zero());
    }
    trim(a, &mut r);
    Ok((q, r))
}

fn pad<A: Arith>(a: &A, mut f: Vec<A::Elem>, len: usize) -> Vec<A::Elem> {
    while f.len() < len {
        f.push(a.zero());
    }
    f.truncate(len.max(1));
    f
}

/// Bézout coefficients `(U, V)` with `U P + V Q = 1`, `deg U < deg Q` and
/// `deg V < deg P`, by the plain extended Euclidean algorithm followed by a
/// division by the last nonzero remainder.
pub fn bezout<A: Arith>(a: &A, p: &[A::Elem], q: &[A::Elem]) -> Result<(Vec<A::Elem>, Vec<A::Elem>)> {
    let ring = PolyRing::new(a);
    let (mut r0, mut r1) = (p.to_vec(), q.to_vec());
    trim(a, &mut r0);
    trim(a, &mut r1);
    let (mut s0, mut s1) = (vec![a.one()], vec![a.zero()]);
    let (mut t0, mut t1) = (vec![a.zero()], vec![a.one()]);
    while r1.len() > 1 {
        let (quo, rem) = poly_divmod(a, &r0, &r1)?;
        let mut s2 = ring.sub(&s0, &ring.mul(&quo, &s1)?)?;
        let mut t2 = ring.sub(&t0, &ring.mul(&quo, &t1)?)?;
        trim(a, &mut s2);
        trim(a, &mut t2);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if is_zero_poly(a, &r1) {
        return Err(PadicError::Domain("the polynomials have a common factor".into()));
    }
    let c = r1[0].clone();
    let u = s1.iter().map(|x| a.div(x, &c)).collect::<Result<Vec<_>>>()?;
    let v = t1.iter().map(|x| a.div(x, &c)).collect::<Result<Vec<_>>>()?;
    let du = (q.len() - 1).max(1);
    let dv = (p.len() - 1).max(1);
    Ok((pad(a, u, du), pad(a, v, dv)))
}

/// Bézout coefficients of two scalar polynomials in a backend.
pub fn bezout_poly<A: Arith>(a: &A, p: &PPolynomial, q: &PPolynomial) -> Result<(PPolynomial, PPolynomial)> {
    let (u, v) = bezout(a, &embed_poly(a, p), &embed_poly(a, q))?;
    Ok((to_poly(a, &u)?, to_poly(a, &v)?))
}

/// Extra digits used by [`bezout_reference`].
pub const BEZOUT_BOOST: i64 = 40;

/// Bézout coefficients at the input precision `O(p^N)`, obtained by running
/// the zealous Euclidean algorithm on zero-filled lifts of the inputs to
/// `N + boost` digits and truncating back to `N`. This is valid because the
/// coefficients are rational functions of the inputs whose differential is
/// integral when the resultant is a unit; an output known to less than `N`
/// digits after the boost is reported as an error.
pub fn bezout_reference(p: &PPolynomial, q: &PPolynomial, boost: i64) -> Result<(PPolynomial, PPolynomial)> {
    let n = p
        .min_precision()
        .into_iter()
        .chain(q.min_precision())
        .min()
        .ok_or_else(|| PadicError::InvalidParameter("exact inputs need no precision reference".into()))?;
    let lift = |f: &PPolynomial| -> Result<PPolynomial> {
        let cs = f.coefficients().iter().map(|c| if c.is_exact() { c.clone() } else { c.lift_to(n + boost) }).collect();
        PPolynomial::new(&f.ctx(), cs)
    };
    let z = ZealousArith::new(&p.ctx());
    let (u, v) = bezout_poly(&z, &lift(p)?, &lift(q)?)?;
    let cut = |f: &PPolynomial| -> Result<PPolynomial> {
        if f.coefficients().iter().any(|c| c.abs_prec().is_some_and(|m| m < n)) {
            return Err(PadicError::PrecisionInsufficient(format!(
                "a Bézout coefficient is known to fewer than {n} digits after a boost of {boost}"
            )));
        }
        PPolynomial::new(&f.ctx(), f.coefficients().iter().map(|c| c.truncate(n)).collect())
    };
    Ok((cut(&u)?, cut(&v)?))
}

fn exact_poly(f: &PPolynomial) -> Vec<Rational> {
    f.coefficients().iter().map(|c| c.to_rational()).collect()
}

fn rational_mod(ex: &ExactArith, f: &[Rational], g: &[Rational]) -> Result<Vec<Rational>> {
    Ok(poly_divmod(ex, f, g)?.1)
}

/// First-order variation of the Bézout coefficients: with
/// `dR = -U dP - V dQ`, `dU = U dR mod Q` and `dV = V dR mod P`. All
/// polynomials are exact, constant term first; `P` and `Q` are monic.
pub fn bezout_differential(
    ctx: &PrimeContext,
    p: &[Rational],
    q: &[Rational],
    u: &[Rational],
    v: &[Rational],
    dp: &[Rational],
    dq: &[Rational],
) -> Result<(Vec<Rational>, Vec<Rational>)> {
    let ex = ExactArith::new(ctx);
    let ring = PolyRing::new(&ex);
    let dr = ring.neg(&ring.add(&ring.mul(&u.to_vec(), &dp.to_vec())?, &ring.mul(&v.to_vec(), &dq.to_vec())?)?);
    let du = rational_mod(&ex, &ring.mul(&u.to_vec(), &dr)?, q)?;
    let dv = rational_mod(&ex, &ring.mul(&v.to_vec(), &dr)?, p)?;
    Ok((pad(&ex, du, q.len() - 1), pad(&ex, dv, p.len() - 1)))
}

/// Jacobian of `(P, Q) -> (U, V)` for monic `P, Q` of degree `d` at their
/// exact representatives. Rows are the non-leading coefficients of `P`
/// then `Q`, columns those of `U` then `V`, each from degree `d - 1` down
/// to the constant term.
pub fn bezout_jacobian(p: &PPolynomial, q: &PPolynomial) -> Result<PMatrix> {
    let ctx = p.ctx();
    let d = p.degree();
    if q.degree() != d || d == 0 {
        return Err(PadicError::Dimension("Bézout Jacobian needs two polynomials of the same positive degree".into()));
    }
    let ex = ExactArith::new(&ctx);
    let (pe, qe) = (exact_poly(p), exact_poly(q));
    let (u, v) = bezout(&ex, &pe, &qe)?;
    let mut entries = Vec::with_capacity(4 * d * d);
    for which in 0..2 {
        for k in (0..d).rev() {
            let mut dp = vec![Rational::zero(); d];
            let mut dq = vec![Rational::zero(); d];
            if which == 0 {
                dp[k] = Rational::one();
            } else {
                dq[k] = Rational::one();
            }
            let (du, dv) = bezout_differential(&ctx, &pe, &qe, &u, &v, &dp, &dq)?;
            for c in du.iter().rev().chain(dv.iter().rev()) {
                entries.push(exact_scalar(&ctx, c));
            }
        }
    }
    PMatrix::new(&ctx, 2 * d, 2 * d, entries)
}

/// The Bézout Jacobian restricted to the hyperplane where the leading
/// coefficients of `U` and `V` are opposite (as `U P + V Q` has no term of
/// degree `2d - 1`): the column of the leading coefficient of `V` is
/// dropped.
pub fn bezout_jacobian_on_hyperplane(p: &PPolynomial, q: &PPolynomial) -> Result<PMatrix> {
    let j = bezout_jacobian(p, q)?;
    let d = p.degree();
    let keep: Vec<usize> = (0..2 * d).filter(|&c| c != d).collect();
    PMatrix::from_fn(&j.ctx(), j.rows(), keep.len(), |r, c| j.get(r, keep[c]).clone())
}

/// `P(0), P(1), ..., P(d)` by Horner's scheme, for `d` the length of the
/// coefficient vector minus one.
pub fn evaluate_at_first_integers<A: Arith>(a: &A, f: &[A::Elem]) -> Result<Vec<A::Elem>> {
    (0..f.len() as i64)
        .map(|x| {
            let xe = a.from_int(x);
            let mut acc = f.last().cloned().unwrap_or_else(|| a.zero());
            for c in f.iter().rev().skip(1) {
                acc = a.add(&a.mul(&acc, &xe)?, c)?;
            }
            Ok(acc)
        })
        .collect()
}

/// The polynomial of degree at most `d` taking the values `y_0, ..., y_d`
/// at `0, ..., d`. The iterated differences `c_n = Delta^n y (0)` are the
/// coordinates in the binomial basis; the expansion is nested as
/// `c_0 + X (c_1 + (X - 1)/2 (c_2 + (X - 2)/3 (...)))`, dividing by the
/// integer `n` at each level.
pub fn interpolate_divided_differences<A: Arith>(a: &A, values: &[A::Elem]) -> Result<Vec<A::Elem>> {
    if values.is_empty() {
        return Err(PadicError::InvalidParameter("no value to interpolate".into()));
    }
    let d = values.len() - 1;
    let mut row = values.to_vec();
    let mut diffs = vec![row[0].clone()];
    for _ in 0..d {
        row = row.windows(2).map(|w| a.sub(&w[1], &w[0])).collect::<Result<Vec<_>>>()?;
        diffs.push(row[0].clone());
    }
    let mut acc = vec![diffs[d].clone()];
    for n in (1..=d).rev() {
        let shift = a.from_int(n as i64 - 1);
        let mut next = Vec::with_capacity(acc.len() + 1);
        for k in 0..=acc.len() {
            let lower = if k > 0 { Some(&acc[k - 1]) } else { None };
            let here = acc.get(k);
            let c = match (lower, here) {
                (Some(lo), Some(h)) => a.sub(lo, &a.mul(&shift, h)?)?,
                (Some(lo), None) => lo.clone(),
                (None, Some(h)) => a.neg(&a.mul(&shift, h)?),
                (None, None) => unreachable!(),
            };
            next.push(c);
        }
        let ne = a.from_int(n as i64);
        acc = next.iter().map(|c| a.div(c, &ne)).collect::<Result<Vec<_>>>()?;
        acc[0] = a.add(&acc[0], &diffs[n - 1])?;
    }
    Ok(acc)
}

/// Evaluate a scalar polynomial at `0, ..., deg` and interpolate back, in
/// one backend.
pub fn round_trip<A: Arith>(a: &A, f: &PPolynomial) -> Result<PPolynomial> {
    let values = evaluate_at_first_integers(a, &embed_poly(a, f))?;
    to_poly(a, &interpolate_divided_differences(a, &values)?)
}

/// Scalars from exact rationals, for reporting exact results.
pub fn exact_coefficients(ctx: &PrimeContext, f: &[Rational]) -> Vec<PadicScalar> {
    f.iter().map(|c| exact_scalar(ctx, c)).collect()
}
