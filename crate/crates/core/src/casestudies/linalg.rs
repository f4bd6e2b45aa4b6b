//! Linear algebra experiments: determinant, characteristic polynomial, LU
//! factorization, Hilbert matrices and Vandermonde lattices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::backend::{exact_scalar, Arith, ExactArith, PolyRing, Ring};
use super::report::ExperimentReport;
use crate::error::{PadicError, Result};
use crate::lattice::{det_via_smith, PMatrix, PrecisionLattice};
use crate::pfloat::PFloatSystem;
use crate::scalar::{legendre_factorial_valuation, PadicScalar, PrimeContext, Rational};

use super::backend::PFloatArith;

/// A dense matrix over the elements of some ring.
pub type Table<E> = Vec<Vec<E>>;

/// Entries of a scalar matrix embedded in a backend.
pub fn embed<A: Arith>(a: &A, m: &PMatrix) -> Table<A::Elem> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| a.from_scalar(x)).collect()).collect()
}

/// Entries of a table turned back into scalars with their claimed precision.
pub fn to_scalars<A: Arith>(a: &A, t: &Table<A::Elem>) -> Result<Table<PadicScalar>> {
    t.iter().map(|row| row.iter().map(|x| a.to_scalar(x)).collect()).collect()
}

/// Determinant by Bird's division-free iteration: with `mu(X)` the upper
/// triangular matrix carrying the strict upper part of `X` and, on the
/// diagonal, minus the sums of the trailing diagonal entries of `X`,
/// iterate `X <- mu(X) A` starting from `A`; after `d - 1` rounds the top
/// left entry is `(-1)^(d-1) det A`.
pub fn det_bird<R: Ring>(r: &R, a: &Table<R::Elem>) -> Result<R::Elem> {
    let d = a.len();
    if d == 0 {
        return Ok(r.one());
    }
    if a.iter().any(|row| row.len() != d) {
        return Err(PadicError::Dimension("determinant of a non-square matrix".into()));
    }
    let mut x = a.clone();
    for _ in 1..d {
        let mut diag = vec![r.zero(); d];
        let mut trailing = r.zero();
        for i in (0..d).rev() {
            diag[i] = r.neg(&trailing);
            trailing = r.add(&trailing, &x[i][i])?;
        }
        let mut next = Vec::with_capacity(d);
        for i in 0..d {
            let mut row = Vec::with_capacity(d);
            for j in 0..d {
                let mut acc = r.mul(&diag[i], &a[i][j])?;
                for k in i + 1..d {
                    acc = r.add(&acc, &r.mul(&x[i][k], &a[k][j])?)?;
                }
                row.push(acc);
            }
            next.push(row);
        }
        x = next;
    }
    let top = x[0][0].clone();
    Ok(if d % 2 == 0 { r.neg(&top) } else { top })
}

/// Determinant by fraction-free elimination: after step `k` every entry
/// of the trailing block is a `(k + 1) x (k + 1)` minor of `A`, and each
/// division by the previous pivot is exact over the integers. A pivot that
/// is zero in the backend is replaced by a lower row whose entry is not,
/// with a sign change.
pub fn det_fraction_free<A: Arith>(a: &A, m: &Table<A::Elem>) -> Result<A::Elem> {
    let d = m.len();
    if d == 0 {
        return Ok(a.one());
    }
    if m.iter().any(|row| row.len() != d) {
        return Err(PadicError::Dimension("determinant of a non-square matrix".into()));
    }
    let mut w = m.clone();
    let mut negate = false;
    let mut previous = a.one();
    for k in 0..d - 1 {
        if a.is_zero(&w[k][k]) {
            match (k + 1..d).find(|&i| !a.is_zero(&w[i][k])) {
                Some(i) => {
                    w.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(a.zero()),
            }
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let cross = a.sub(&a.mul(&w[i][j], &w[k][k])?, &a.mul(&w[i][k], &w[k][j])?)?;
                w[i][j] = a.div(&cross, &previous)?;
            }
        }
        previous = w[k][k].clone();
    }
    let det = w[d - 1][d - 1].clone();
    Ok(if negate { a.neg(&det) } else { det })
}

/// Determinant of a square scalar matrix computed without division in the
/// given backend, by [`det_bird`].
pub fn det_division_free<A: Arith>(a: &A, m: &PMatrix) -> Result<A::Elem> {
    det_bird(a, &embed(a, m))
}

/// Determinant at optimal precision, from a Smith-type diagonalization.
pub fn det_optimal(m: &PMatrix) -> Result<PadicScalar> {
    det_via_smith(m)
}

/// `X I - M` over the polynomial ring of a backend.
fn characteristic_matrix<R: Ring>(r: &R, m: &Table<R::Elem>) -> Table<Vec<R::Elem>> {
    let d = m.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let c = r.neg(&m[i][j]);
                    if i == j {
                        vec![c, r.one()]
                    } else {
                        vec![c]
                    }
                })
                .collect()
        })
        .collect()
}

/// Characteristic polynomial `det(X I - M)` of a table, constant term
/// first, computed as a division-free determinant over the polynomial ring.
pub fn charpoly_table<R: Ring>(r: &R, m: &Table<R::Elem>) -> Result<Vec<R::Elem>> {
    let d = m.len();
    if d == 0 {
        return Ok(vec![r.one()]);
    }
    let ring = PolyRing::new(r);
    let mut poly = det_bird(&ring, &characteristic_matrix(r, m))?;
    poly.truncate(d + 1);
    Ok(poly)
}

/// Characteristic polynomial of a scalar matrix in a backend, constant
/// term first (the leading coefficient is an exact 1).
pub fn charpoly<A: Arith>(a: &A, m: &PMatrix) -> Result<Vec<A::Elem>> {
    if !m.is_square() {
        return Err(PadicError::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    charpoly_table(a, &embed(a, m))
}

fn exact_entries(m: &PMatrix) -> Table<Rational> {
    m.to_rationals()
}

fn minor<E: Clone>(t: &Table<E>, i: usize, j: usize) -> Table<E> {
    t.iter()
        .enumerate()
        .filter(|(r, _)| *r != i)
        .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
        .collect()
}

fn sign(i: usize, j: usize) -> i64 {
    if (i + j).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Gradient of the determinant at the exact representative of `M`: row
/// `(i, j)` (row-major) holds the cofactor `(-1)^(i+j) det M_ij`.
pub fn det_jacobian(m: &PMatrix) -> Result<PMatrix> {
    if !m.is_square() {
        return Err(PadicError::Dimension("determinant of a non-square matrix".into()));
    }
    let ctx = m.ctx();
    let ex = ExactArith::new(&ctx);
    let t = exact_entries(m);
    let d = m.rows();
    let mut entries = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let c = det_bird(&ex, &minor(&t, i, j))? * Rational::from_integer(BigInt::from(sign(i, j)));
            entries.push(exact_scalar(&ctx, &c));
        }
    }
    PMatrix::new(&ctx, d * d, 1, entries)
}

/// Jacobian of `M -> det(X I - M) - X^d` at the exact representative of
/// `M`. Row `(i, j)` (row-major) holds the partial derivatives with respect
/// to the entry `(i, j)`; the columns are the coefficients of `X^(d-1)`,
/// ..., `X`, `1`. The derivative is `-(-1)^(i+j)` times the characteristic
/// minor obtained by erasing row `i` and column `j` of `X I - M`.
pub fn charpoly_jacobian(m: &PMatrix) -> Result<PMatrix> {
    if !m.is_square() {
        return Err(PadicError::Dimension("characteristic polynomial of a non-square matrix".into()));
    }
    let ctx = m.ctx();
    let ex = ExactArith::new(&ctx);
    let ring = PolyRing::new(&ex);
    let d = m.rows();
    let xm = characteristic_matrix(&ex, &exact_entries(m));
    let mut entries = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            let poly = det_bird(&ring, &minor(&xm, i, j))?;
            let factor = Rational::from_integer(BigInt::from(-sign(i, j)));
            for k in (0..d).rev() {
                let c = poly.get(k).cloned().unwrap_or_else(Rational::zero);
                entries.push(exact_scalar(&ctx, &(c * &factor)));
            }
        }
    }
    PMatrix::new(&ctx, d * d, d, entries)
}

/// Unit lower triangular `L` and upper triangular `U` with `M = L U`.
#[derive(Debug, Clone)]
pub struct LuFactors<E> {
    pub l: Table<E>,
    pub u: Table<E>,
}

/// LU factorization by Gaussian elimination on columns: scale the current
/// column so that its diagonal entry becomes 1, then clear the rest of the
/// current row with column operations, and continue with the trailing
/// block. The transformed matrix is `L`; the operations undone give `U`.
pub fn lu_factor<A: Arith>(a: &A, m: &PMatrix) -> Result<LuFactors<A::Elem>> {
    if !m.is_square() {
        return Err(PadicError::Dimension("LU factorization of a non-square matrix".into()));
    }
    lu_factor_table(a, &embed(a, m))
}

/// [`lu_factor`] on a table of backend values.
pub fn lu_factor_table<A: Arith>(a: &A, m: &Table<A::Elem>) -> Result<LuFactors<A::Elem>> {
    let d = m.len();
    let mut w = m.clone();
    let mut u = vec![vec![a.zero(); d]; d];
    for k in 0..d {
        let pivot = w[k][k].clone();
        if k + 1 < d && a.is_zero(&pivot) {
            return Err(PadicError::PrecisionInsufficient(format!(
                "leading principal minor of size {} vanishes at the working precision",
                k + 1
            )));
        }
        u[k][k] = pivot.clone();
        for i in k + 1..d {
            w[i][k] = a.div(&w[i][k], &pivot)?;
        }
        w[k][k] = a.one();
        for j in k + 1..d {
            let c = w[k][j].clone();
            u[k][j] = c.clone();
            for i in k + 1..d {
                w[i][j] = a.sub(&w[i][j], &a.mul(&c, &w[i][k])?)?;
            }
            w[k][j] = a.zero();
        }
    }
    Ok(LuFactors { l: w, u })
}

fn exact_mul(a: &Table<Rational>, b: &Table<Rational>) -> Table<Rational> {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(Rational::zero(), |acc, t| acc + &a[i][t] * &b[t][j])).collect())
        .collect()
}

/// Inverse by Gauss-Jordan elimination, pivoting on an entry of smallest
/// valuation in each column (first such row on ties).
pub fn invert<A: Arith>(a: &A, m: &Table<A::Elem>) -> Result<Table<A::Elem>> {
    let d = m.len();
    let mut w = m.clone();
    let mut inv: Table<A::Elem> =
        (0..d).map(|i| (0..d).map(|j| if i == j { a.one() } else { a.zero() }).collect()).collect();
    for c in 0..d {
        let mut best: Option<(i64, usize)> = None;
        for r in c..d {
            if let Some(v) = a.valuation(&w[r][c]) {
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, r));
                }
            }
        }
        let (_, r) = best.ok_or_else(|| {
            PadicError::PrecisionInsufficient(format!("column {c} has no entry distinguishable from zero"))
        })?;
        w.swap(c, r);
        inv.swap(c, r);
        let pivot = w[c][c].clone();
        for j in 0..d {
            w[c][j] = a.div(&w[c][j], &pivot)?;
            inv[c][j] = a.div(&inv[c][j], &pivot)?;
        }
        for r in 0..d {
            if r == c {
                continue;
            }
            let f = w[r][c].clone();
            if a.is_exact_zero(&f) {
                continue;
            }
            for j in 0..d {
                w[r][j] = a.sub(&w[r][j], &a.mul(&f, &w[c][j])?)?;
                inv[r][j] = a.sub(&inv[r][j], &a.mul(&f, &inv[c][j])?)?;
            }
        }
    }
    Ok(inv)
}

/// First-order variation `(dL, dU)` of the LU factors of the exact
/// representative of `M` in the direction `dM`.
pub fn lu_differential(m: &PMatrix, dm: &Table<Rational>) -> Result<(Table<Rational>, Table<Rational>)> {
    let ctx = m.ctx();
    let f = lu_factor(&ExactArith::new(&ctx), &m.lift_exact())?;
    lu_differential_at(&ctx, &f.l, &f.u, dm)
}

/// First-order variation of exact LU factors: with `X = L^-1 dM U^-1`,
/// `dL = L Lo(X)` and `dU = Up(X) U`, where `Lo` keeps the strictly lower
/// part and `Up` the rest.
pub fn lu_differential_at(
    ctx: &PrimeContext,
    l: &Table<Rational>,
    u: &Table<Rational>,
    dm: &Table<Rational>,
) -> Result<(Table<Rational>, Table<Rational>)> {
    let d = l.len();
    let ex = ExactArith::new(ctx);
    let x = exact_mul(&exact_mul(&invert(&ex, l)?, dm), &invert(&ex, u)?);
    let lo: Table<Rational> =
        (0..d).map(|i| (0..d).map(|j| if i > j { x[i][j].clone() } else { Rational::zero() }).collect()).collect();
    let up: Table<Rational> =
        (0..d).map(|i| (0..d).map(|j| if i <= j { x[i][j].clone() } else { Rational::zero() }).collect()).collect();
    Ok((exact_mul(l, &lo), exact_mul(&up, u)))
}

/// Positions `(i, j)`, `i > j`, of the free entries of `L`, row by row.
pub fn lower_positions(d: usize) -> Vec<(usize, usize)> {
    (0..d).flat_map(|i| (0..i).map(move |j| (i, j))).collect()
}

/// Jacobian of `M -> L` at the exact representative of `M`: one row per
/// entry of `M` (row-major), one column per free entry of `L` in the order
/// of [`lower_positions`].
pub fn lu_jacobian(m: &PMatrix) -> Result<PMatrix> {
    let ctx = m.ctx();
    let ex = ExactArith::new(&ctx);
    let d = m.rows();
    let f = lu_factor(&ex, &m.lift_exact())?;
    let cols = lower_positions(d);
    let mut entries = Vec::with_capacity(d * d * cols.len());
    for i in 0..d {
        for j in 0..d {
            let mut dm = vec![vec![Rational::zero(); d]; d];
            dm[i][j] = Rational::one();
            let (dl, _) = lu_differential_at(&ctx, &f.l, &f.u, &dm)?;
            for &(r, c) in &cols {
                entries.push(exact_scalar(&ctx, &dl[r][c]));
            }
        }
    }
    PMatrix::new(&ctx, d * d, cols.len(), entries)
}

/// The Hilbert matrix `(1 / (i + j - 1))`, indices from 1.
pub fn hilbert_matrix(n: usize) -> Table<Rational> {
    (1..=n)
        .map(|i| (1..=n).map(|j| Rational::new(BigInt::one(), BigInt::from(i + j - 1))).collect())
        .collect()
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// The exact inverse of the Hilbert matrix from its closed formula
/// `(-1)^(i+j) (i+j-1) C(n+i-1, n-j) C(n+j-1, n-i) C(i+j-2, i-1)^2`.
pub fn hilbert_inverse_exact(n: usize) -> Table<BigInt> {
    let n64 = n as u64;
    (1..=n64)
        .map(|i| {
            (1..=n64)
                .map(|j| {
                    let c = binomial(i + j - 2, i - 1);
                    let v = BigInt::from(i + j - 1)
                        * binomial(n64 + i - 1, n64 - j)
                        * binomial(n64 + j - 1, n64 - i)
                        * &c
                        * &c;
                    if (i + j) % 2 == 0 {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect()
}

/// Invert the Hilbert matrix of size `n` in p-adic floating point and
/// compare every entry with the exact inverse. The report has one record
/// per entry, `inv[i,j]` with indices from 1.
pub fn hilbert_experiment(n: usize, sys: &PFloatSystem) -> Result<ExperimentReport> {
    if n < 2 {
        return Err(PadicError::InvalidParameter("Hilbert experiment needs n >= 2".into()));
    }
    let a = PFloatArith::new(*sys);
    let ctx = sys.ctx();
    let h: Table<_> = hilbert_matrix(n).iter().map(|row| row.iter().map(|x| a.from_rational(x)).collect()).collect();
    let inv = invert(&a, &h)?;
    let exact = hilbert_inverse_exact(n);
    let mut report = ExperimentReport::new(format!("hilbert n={n} p={} N={}", sys.p(), sys.digits()));
    for i in 0..n {
        for j in 0..n {
            let computed = a.to_scalar(&inv[i][j])?;
            let reference = PadicScalar::exact(&ctx, exact[i][j].clone());
            report.record(format!("inv[{},{}]", i + 1, j + 1), a.backend(), &computed, Some(&reference));
        }
    }
    Ok(report)
}

/// Lattice spanned by the evaluations at `0, 1, ..., d` of the monomials
/// `1, X, ..., X^d`: the rows of the Vandermonde matrix.
pub fn vandermonde_lattice(ctx: &PrimeContext, d: usize) -> Result<PrecisionLattice> {
    let rows: Vec<Vec<PadicScalar>> = (0..=d as u32)
        .map(|k| (0..=d).map(|i| PadicScalar::exact(ctx, BigInt::from(i).pow(k))).collect())
        .collect();
    PrecisionLattice::new(PMatrix::from_rows(ctx, rows)?)
}

/// Diffused digits of evaluation at `0, ..., d`, read off the lattice.
pub fn vandermonde_diffused_digits(ctx: &PrimeContext, d: usize) -> Result<i64> {
    vandermonde_lattice(ctx, d)?.diffused_digits()
}

/// `val(1! 2! ... d!)` from Legendre's formula.
pub fn factorial_product_valuation(ctx: &PrimeContext, d: u64) -> u64 {
    (1..=d).map(|n| legendre_factorial_valuation(n, ctx)).sum()
}
