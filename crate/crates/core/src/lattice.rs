//! Matrices over Qp and lattices used as precision data.
//!
//! A lattice of Qp^d is stored through a square generator matrix whose rows
//! span it over Zp. Its Hermite normal form is upper triangular with exact
//! powers of p on the diagonal and entries above each pivot reduced modulo
//! that pivot; two generator matrices of the same lattice have the same
//! Hermite form.
//!
//! Row reductions run in interval arithmetic, so they report the precision
//! actually available on every entry.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{PadicError, Result};
use crate::scalar::{
    parse_arithmetic, parse_digits, parse_scalar, pow_p, print_scalar, PadicScalar, Precision, PrimeContext, PrintStyle, Rational,
};
use crate::zealous::{zadd, zdiv, zmul, zsub};

/// A rectangular matrix of scalars over a single prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<PadicScalar>,
}

fn exact_int(p: u64, n: i64) -> PadicScalar {
    PadicScalar::canonical(p, 0, BigInt::from(n), Precision::Exact)
}

fn exact_power(p: u64, k: i64) -> PadicScalar {
    PadicScalar::canonical(p, k, BigInt::one(), Precision::Exact)
}

/// Valuation used when comparing entries: an inexact zero counts as its
/// precision, an exact zero as `None` (infinity).
fn sort_key(x: &PadicScalar) -> Option<i64> {
    if x.is_exact_zero() {
        None
    } else {
        Some(x.v())
    }
}

impl PMatrix {
    pub fn new(ctx: &PrimeContext, rows: usize, cols: usize, entries: Vec<PadicScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(PadicError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.p() != ctx.p()) {
            return Err(PadicError::PrimeMismatch(ctx.p(), bad.p()));
        }
        Ok(PMatrix { p: ctx.p(), rows, cols, entries })
    }

    pub fn from_rows(ctx: &PrimeContext, rows: Vec<Vec<PadicScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(PadicError::Dimension("rows of different lengths".into()));
        }
        Self::new(ctx, r, c, rows.into_iter().flatten().collect())
    }

    /// A matrix of exact integers.
    pub fn from_ints(ctx: &PrimeContext, rows: &[Vec<i64>]) -> Result<Self> {
        let p = ctx.p();
        Self::from_rows(
            ctx,
            rows.iter().map(|r| r.iter().map(|&x| exact_int(p, x)).collect()).collect(),
        )
    }

    pub fn from_fn(
        ctx: &PrimeContext,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> PadicScalar,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(ctx, rows, cols, entries)
    }

    pub fn identity(ctx: &PrimeContext, d: usize) -> Self {
        let p = ctx.p();
        Self::from_fn(ctx, d, d, |i, j| exact_int(p, (i == j) as i64)).expect("square")
    }

    pub fn zeros(ctx: &PrimeContext, rows: usize, cols: usize) -> Self {
        let p = ctx.p();
        Self::from_fn(ctx, rows, cols, |_, _| exact_int(p, 0)).expect("shape")
    }

    /// `diag(p^k_1, ..., p^k_d)` with exact entries.
    pub fn diagonal_powers(ctx: &PrimeContext, exponents: &[i64]) -> Self {
        let p = ctx.p();
        let d = exponents.len();
        Self::from_fn(ctx, d, d, |i, j| {
            if i == j {
                exact_power(p, exponents[i])
            } else {
                exact_int(p, 0)
            }
        })
        .expect("square")
    }

    pub fn ctx(&self) -> PrimeContext {
        PrimeContext::new(self.p).expect("prime")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: PadicScalar) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[PadicScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[PadicScalar] {
        &self.entries
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn transpose(&self) -> Self {
        PMatrix {
            p: self.p,
            rows: self.cols,
            cols: self.rows,
            entries: (0..self.cols)
                .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
                .map(|(i, j)| self.get(i, j).clone())
                .collect(),
        }
    }

    /// Rows `lo..hi`.
    pub fn row_block(&self, lo: usize, hi: usize) -> Self {
        PMatrix {
            p: self.p,
            rows: hi - lo,
            cols: self.cols,
            entries: self.entries[lo * self.cols..hi * self.cols].to_vec(),
        }
    }

    pub fn map(&self, mut f: impl FnMut(&PadicScalar) -> PadicScalar) -> Self {
        PMatrix { p: self.p, rows: self.rows, cols: self.cols, entries: self.entries.iter().map(&mut f).collect() }
    }

    /// Every entry lowered to absolute precision at most `n`.
    pub fn truncate(&self, n: i64) -> Self {
        self.map(|x| x.truncate(n))
    }

    /// Every entry replaced by its representative, as an exact value.
    pub fn lift_exact(&self) -> Self {
        self.map(|x| x.lift_exact())
    }

    /// Interval product.
    pub fn mul(&self, other: &PMatrix) -> Result<PMatrix> {
        if self.cols != other.rows {
            return Err(PadicError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = exact_int(self.p, 0);
                for k in 0..self.cols {
                    acc = zadd(&acc, &zmul(self.get(i, k), other.get(k, j))?)?;
                }
                out.push(acc);
            }
        }
        Ok(PMatrix { p: self.p, rows: self.rows, cols: other.cols, entries: out })
    }

    fn zip(&self, other: &PMatrix, f: impl Fn(&PadicScalar, &PadicScalar) -> Result<PadicScalar>) -> Result<PMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(PadicError::Dimension("shapes differ".into()));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect::<Result<_>>()?;
        Ok(PMatrix { p: self.p, rows: self.rows, cols: self.cols, entries })
    }

    pub fn add(&self, other: &PMatrix) -> Result<PMatrix> {
        self.zip(other, zadd)
    }

    pub fn sub(&self, other: &PMatrix) -> Result<PMatrix> {
        self.zip(other, zsub)
    }

    pub fn scale(&self, c: &PadicScalar) -> Result<PMatrix> {
        let entries = self.entries.iter().map(|x| zmul(c, x)).collect::<Result<_>>()?;
        Ok(PMatrix { p: self.p, rows: self.rows, cols: self.cols, entries })
    }

    /// Smallest valuation of an entry of column `j`; inexact zeros count as
    /// their precision, exact zeros are skipped. `None` if the column is
    /// exactly zero.
    pub fn column_min_valuation(&self, j: usize) -> Option<i64> {
        (0..self.rows).filter_map(|i| sort_key(self.get(i, j))).min()
    }

    /// Smallest valuation in row `i`, with the same conventions.
    pub fn row_min_valuation(&self, i: usize) -> Option<i64> {
        (0..self.cols).filter_map(|j| sort_key(self.get(i, j))).min()
    }

    /// Smallest absolute precision of an entry (`None` if all are exact).
    pub fn min_precision(&self) -> Option<i64> {
        self.entries.iter().filter_map(|x| x.abs_prec()).min()
    }

    /// Entries as exact rationals (their representatives).
    pub fn to_rationals(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|x| x.to_rational()).collect()).collect()
    }

    pub fn from_rationals(ctx: &PrimeContext, rows: &[Vec<Rational>], n: Precision) -> Result<Self> {
        Self::from_rows(
            ctx,
            rows.iter()
                .map(|r| r.iter().map(|x| PadicScalar::from_rational(ctx, x, n)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Inverse by Gauss-Jordan elimination in interval arithmetic, pivoting
    /// on the entry of smallest valuation of each column.
    pub fn inverse(&self) -> Result<PMatrix> {
        if !self.is_square() {
            return Err(PadicError::Dimension("inverse of a non-square matrix".into()));
        }
        let d = self.rows;
        let ctx = self.ctx();
        let mut a = self.clone();
        let mut inv = PMatrix::identity(&ctx, d);
        for j in 0..d {
            let piv = choose_pivot(&a, j, j..d)?;
            a.swap_rows(j, piv);
            inv.swap_rows(j, piv);
            let pivot = a.get(j, j).clone();
            for k in 0..d {
                a.set(j, k, zdiv(a.get(j, k), &pivot)?);
                inv.set(j, k, zdiv(inv.get(j, k), &pivot)?);
            }
            for i in 0..d {
                if i == j || a.get(i, j).is_exact_zero() {
                    continue;
                }
                let f = a.get(i, j).clone();
                for k in 0..d {
                    a.set(i, k, zsub(a.get(i, k), &zmul(&f, a.get(j, k))?)?);
                    inv.set(i, k, zsub(inv.get(i, k), &zmul(&f, inv.get(j, k))?)?);
                }
                a.set(i, j, exact_int(self.p, 0));
            }
        }
        Ok(inv)
    }

    /// Parse the text format: rows separated by `;`, entries by `,`, each
    /// entry a scalar literal in either style.
    pub fn parse(text: &str, ctx: &PrimeContext) -> Result<Self> {
        Self::parse_entries(text, ctx, parse_scalar)
    }

    /// Parse with every entry read in the given style, which settles the
    /// reading of bare digit strings such as `10`.
    pub fn parse_as(text: &str, ctx: &PrimeContext, style: PrintStyle) -> Result<Self> {
        match style {
            PrintStyle::Arithmetic => Self::parse_entries(text, ctx, parse_arithmetic),
            PrintStyle::Digits => Self::parse_entries(text, ctx, parse_digits),
        }
    }

    fn parse_entries(
        text: &str,
        ctx: &PrimeContext,
        entry: fn(&str, &PrimeContext) -> Result<PadicScalar>,
    ) -> Result<Self> {
        let rows = text
            .split(';')
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(|r| r.split(',').map(|e| entry(e.trim(), ctx)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(ctx, rows)
    }

    /// Render in the text format accepted by [`PMatrix::parse`].
    pub fn print(&self, style: PrintStyle) -> String {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| print_scalar(x, style)).collect::<Vec<_>>().join(", "))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Row index in `range` of the entry of column `j` with smallest valuation,
/// lowest row first on ties. Fails when that valuation is not certified:
/// when every candidate is indistinguishable from zero, or when an inexact
/// zero of the column is known to lower precision than the chosen valuation.
fn choose_pivot(a: &PMatrix, j: usize, range: std::ops::Range<usize>) -> Result<usize> {
    let mut best: Option<(i64, usize)> = None;
    let mut blur = i64::MAX;
    for i in range {
        let x = a.get(i, j);
        if x.is_exact_zero() {
            continue;
        }
        if x.is_indistinguishable_from_zero() {
            blur = blur.min(x.v());
            continue;
        }
        if best.is_none_or(|(v, _)| x.v() < v) {
            best = Some((x.v(), i));
        }
    }
    match best {
        Some((v, i)) if v <= blur => Ok(i),
        Some((v, _)) => Err(PadicError::PrecisionInsufficient(format!(
            "column {j}: an entry known only modulo p^{blur} may have valuation below the pivot's {v}"
        ))),
        None => Err(PadicError::PrecisionInsufficient(format!(
            "column {j} has no entry distinguishable from zero"
        ))),
    }
}

/// Hermite normal form of an `n x m` matrix with `n >= m` of rank `m`: the
/// `m x m` upper triangular matrix whose rows span the same Zp-module.
///
/// For every column the entry of smallest valuation (lowest row on ties) is
/// swapped up, its row is divided by the unit part of the pivot so that the
/// pivot becomes an exact power `p^n_j`, and the entries below are cleared.
/// Then, column by column, the entries above each pivot are reduced modulo
/// the pivot; a reduced entry is exact when its precision reaches `n_j` and
/// is left untouched otherwise.
pub fn hermite_nf(m: &PMatrix) -> Result<PMatrix> {
    let (n, cols) = (m.rows, m.cols);
    if n < cols {
        return Err(PadicError::Dimension(format!("Hermite form of a {n}x{cols} matrix needs rows >= columns")));
    }
    let p = m.p;
    let mut a = m.clone();
    for j in 0..cols {
        let piv = choose_pivot(&a, j, j..n)?;
        a.swap_rows(j, piv);
        let v = a.get(j, j).v();
        let unit = zdiv(a.get(j, j), &exact_power(p, v))?;
        for k in j + 1..cols {
            a.set(j, k, zdiv(a.get(j, k), &unit)?);
        }
        a.set(j, j, exact_power(p, v));
        for i in j + 1..n {
            if a.get(i, j).is_exact_zero() {
                continue;
            }
            let f = zdiv(a.get(i, j), &exact_power(p, v))?;
            for k in j + 1..cols {
                a.set(i, k, zsub(a.get(i, k), &zmul(&f, a.get(j, k))?)?);
            }
            a.set(i, j, exact_int(p, 0));
        }
    }
    for j in 1..cols {
        let nj = a.get(j, j).v();
        for i in 0..j {
            let x = a.get(i, j).clone();
            if x.abs_prec().is_some_and(|prec| prec < nj) {
                continue;
            }
            let r = reduce_mod_power(&x, nj);
            let q = zdiv(&zsub(&x, &r)?, &exact_power(p, nj))?;
            for k in j + 1..cols {
                a.set(i, k, zsub(a.get(i, k), &zmul(&q, a.get(j, k))?)?);
            }
            a.set(i, j, r);
        }
    }
    Ok(a.row_block(0, cols))
}

/// The exact representative of `x` modulo `p^n`: `p^v (s mod p^(n-v))`, a
/// rational with `0 <= r < p^n`. Requires `x` known modulo `p^n`.
fn reduce_mod_power(x: &PadicScalar, n: i64) -> PadicScalar {
    let p = x.p();
    if x.is_indistinguishable_from_zero() || x.v() >= n {
        return exact_int(p, 0);
    }
    let s = x.unit().mod_floor(&pow_p(p, (n - x.v()) as u64));
    PadicScalar::canonical(p, x.v(), s, Precision::Exact)
}

/// Diagonal entries of a Smith-type factorization `M = P diag(a_i) Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Entries with nondecreasing valuations.
    pub diagonal: Vec<PadicScalar>,
    /// `det(P) det(Q)`, the sign relating the product of the diagonal to
    /// the determinant.
    pub sign: i32,
}

/// Diagonalize by choosing, at each step, an entry of smallest valuation in
/// the whole remaining block (lowest row, then lowest column, on ties) and
/// clearing its row and column. No precision is lost: every multiplier lies
/// in Zp.
pub fn smith_diagonalize(m: &PMatrix) -> Result<SmithForm> {
    if !m.is_square() {
        return Err(PadicError::Dimension("Smith form of a non-square matrix".into()));
    }
    let d = m.rows;
    let p = m.p;
    let mut a = m.clone();
    let mut sign = 1;
    let mut diagonal = Vec::with_capacity(d);
    for t in 0..d {
        let mut best: Option<(i64, usize, usize)> = None;
        let mut blur = i64::MAX;
        for i in t..d {
            for k in t..d {
                let x = a.get(i, k);
                if x.is_exact_zero() {
                    continue;
                }
                if x.is_indistinguishable_from_zero() {
                    blur = blur.min(x.v());
                } else if best.is_none_or(|(v, _, _)| x.v() < v) {
                    best = Some((x.v(), i, k));
                }
            }
        }
        let (v, i, k) = best.ok_or_else(|| {
            PadicError::PrecisionInsufficient(format!("remaining {}x{} block is indistinguishable from zero", d - t, d - t))
        })?;
        if v > blur {
            return Err(PadicError::PrecisionInsufficient(format!(
                "an entry known modulo p^{blur} may have valuation below the pivot's {v}"
            )));
        }
        if i != t {
            a.swap_rows(t, i);
            sign = -sign;
        }
        if k != t {
            a.swap_cols(t, k);
            sign = -sign;
        }
        let pivot = a.get(t, t).clone();
        for i in t + 1..d {
            if a.get(i, t).is_exact_zero() {
                continue;
            }
            let f = zdiv(a.get(i, t), &pivot)?;
            for k in t + 1..d {
                a.set(i, k, zsub(a.get(i, k), &zmul(&f, a.get(t, k))?)?);
            }
            a.set(i, t, exact_int(p, 0));
        }
        for k in t + 1..d {
            a.set(t, k, exact_int(p, 0));
        }
        diagonal.push(pivot);
    }
    Ok(SmithForm { diagonal, sign })
}

/// Determinant as `sign * product of the Smith diagonal`.
pub fn det_via_smith(m: &PMatrix) -> Result<PadicScalar> {
    let form = smith_diagonalize(m)?;
    let mut acc = exact_int(m.p, form.sign as i64);
    for x in &form.diagonal {
        acc = zmul(&acc, x)?;
    }
    Ok(acc)
}

/// A full-rank Zp-module of Qp^d given by generator rows.
#[derive(Debug)]
pub struct PrecisionLattice {
    generators: PMatrix,
    hermite: OnceLock<PMatrix>,
}

impl Clone for PrecisionLattice {
    fn clone(&self) -> Self {
        let hermite = OnceLock::new();
        if let Some(h) = self.hermite.get() {
            let _ = hermite.set(h.clone());
        }
        PrecisionLattice { generators: self.generators.clone(), hermite }
    }
}

impl PrecisionLattice {
    pub fn new(generators: PMatrix) -> Result<Self> {
        if !generators.is_square() {
            return Err(PadicError::Dimension("lattice generators must form a square matrix".into()));
        }
        Ok(PrecisionLattice { generators, hermite: OnceLock::new() })
    }

    /// `p^k_1 Zp + ... + p^k_d Zp`.
    pub fn diagonal(ctx: &PrimeContext, exponents: &[i64]) -> Self {
        Self::new(PMatrix::diagonal_powers(ctx, exponents)).expect("square")
    }

    pub fn dim(&self) -> usize {
        self.generators.rows
    }

    pub fn generators(&self) -> &PMatrix {
        &self.generators
    }

    /// The Hermite normal form of the generators, computed once.
    pub fn hermite(&self) -> Result<&PMatrix> {
        if let Some(h) = self.hermite.get() {
            return Ok(h);
        }
        let h = hermite_nf(&self.generators)?;
        Ok(self.hermite.get_or_init(|| h))
    }

    /// Exponents `n_i` of the Hermite diagonal.
    pub fn hermite_exponents(&self) -> Result<Vec<i64>> {
        let h = self.hermite()?;
        Ok((0..self.dim()).map(|i| h.get(i, i).v()).collect())
    }

    /// Valuation of the determinant of any generator matrix.
    pub fn det_valuation(&self) -> Result<i64> {
        Ok(self.hermite_exponents()?.iter().sum())
    }

    /// Smallest valuation of each coordinate over the lattice: the exponents
    /// of the smallest diagonal lattice containing it.
    pub fn coordinate_valuations(&self) -> Result<Vec<i64>> {
        (0..self.dim())
            .map(|j| {
                self.generators
                    .column_min_valuation(j)
                    .ok_or(PadicError::SurjectivityFailure(j))
            })
            .collect()
    }

    /// Number of digits of precision lost when the lattice is replaced by
    /// the smallest diagonal lattice containing it: the valuation of the
    /// determinant minus the sum of the coordinate valuations.
    pub fn diffused_digits(&self) -> Result<i64> {
        let coords: i64 = self.coordinate_valuations()?.iter().sum();
        Ok(self.det_valuation()? - coords)
    }

    /// Membership by back-substitution against the Hermite form.
    pub fn contains(&self, vector: &[PadicScalar]) -> Result<bool> {
        let h = self.hermite()?;
        let d = self.dim();
        if vector.len() != d {
            return Err(PadicError::Dimension(format!("vector of length {} in dimension {d}", vector.len())));
        }
        let mut rest = vector.to_vec();
        for j in 0..d {
            let c = zdiv(&rest[j], h.get(j, j))?;
            if !c.is_indistinguishable_from_zero() && c.v() < 0 {
                return Ok(false);
            }
            if c.abs_prec().is_some_and(|n| n < 0) {
                return Err(PadicError::PrecisionInsufficient(format!(
                    "coordinate {j} of the vector is not known to the precision of the lattice"
                )));
            }
            for k in j..d {
                rest[k] = zsub(&rest[k], &zmul(&c, h.get(j, k))?)?;
            }
        }
        Ok(rest.iter().all(|x| x.is_indistinguishable_from_zero()))
    }

    /// True when every generator of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &PrecisionLattice) -> Result<bool> {
        for i in 0..other.dim() {
            if !self.contains(other.generators.row(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when `p^k Zp^d` is contained in the lattice.
    pub fn contains_ball(&self, k: i64) -> Result<bool> {
        let ctx = self.generators.ctx();
        let d = self.dim();
        for i in 0..d {
            let e: Vec<PadicScalar> =
                (0..d).map(|j| if i == j { exact_power(ctx.p(), k) } else { exact_int(ctx.p(), 0) }).collect();
            if !self.contains(&e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The dual lattice, spanned by the rows of the transpose of the inverse.
    pub fn dual(&self) -> Result<PrecisionLattice> {
        PrecisionLattice::new(self.generators.inverse()?.transpose())
    }
}

/// Forward propagation through a Jacobian.
#[derive(Debug, Clone)]
pub struct ForwardPrecision {
    /// Per-output absolute precision `M_j`.
    pub output_precision: Vec<i64>,
    /// The image of the input precision lattice.
    pub image: PrecisionLattice,
}

/// Image of the diagonal lattice `p^N_1 Zp + ... + p^N_n Zp` by the linear
/// map with `n x m` matrix `J` (row vectors): the rows of
/// `A = diag(p^N_i) J` generate it, and `M_j` is the smallest valuation of
/// column `j` of `A`.
pub fn propagate_forward(jacobian: &PMatrix, input_precision: &[i64]) -> Result<ForwardPrecision> {
    let (n, m) = (jacobian.rows, jacobian.cols);
    if input_precision.len() != n {
        return Err(PadicError::Dimension(format!(
            "{} input precisions for a Jacobian with {n} rows",
            input_precision.len()
        )));
    }
    let ctx = jacobian.ctx();
    let a = PMatrix::diagonal_powers(&ctx, input_precision).mul(jacobian)?;
    let mut output_precision = Vec::with_capacity(m);
    for j in 0..m {
        let has_signal = (0..n).any(|i| !a.get(i, j).is_indistinguishable_from_zero());
        if !has_signal {
            return Err(PadicError::SurjectivityFailure(j));
        }
        output_precision.push(a.column_min_valuation(j).expect("nonzero column"));
    }
    let image = PrecisionLattice::new(hermite_nf(&a)?)?;
    Ok(ForwardPrecision { output_precision, image })
}

/// Input precisions `N_i` that guarantee output precisions `M_j` to first
/// order: `N_i = max_j (M_j - val J_ij)`. `None` marks an input the outputs
/// do not depend on.
pub fn propagate_backward(jacobian: &PMatrix, target_precision: &[i64]) -> Result<Vec<Option<i64>>> {
    if target_precision.len() != jacobian.cols {
        return Err(PadicError::Dimension(format!(
            "{} target precisions for a Jacobian with {} columns",
            target_precision.len(),
            jacobian.cols
        )));
    }
    Ok((0..jacobian.rows)
        .map(|i| {
            (0..jacobian.cols)
                .filter(|&j| !jacobian.get(i, j).is_indistinguishable_from_zero())
                .map(|j| target_precision[j] - jacobian.get(i, j).v())
                .max()
        })
        .collect())
}

/// Hypotheses of the precision lemma for a polynomial map with p-integral
/// coefficients at a p-integral point, with radius `r = p^-k`: the lattice
/// `H` lies in the ball `p^k Zp^n` and its image by the differential `J`
/// contains the ball `p^(2k-1) Zp^m`.
pub fn preclemma_poly_check(jacobian: &PMatrix, h: &PrecisionLattice, k: i64) -> Result<bool> {
    let gens = h.generators();
    if gens.cols != jacobian.rows {
        return Err(PadicError::Dimension("lattice and Jacobian dimensions differ".into()));
    }
    let inside = gens.entries().iter().all(|x| x.is_exact_zero() || x.v() >= k);
    if !inside {
        return Ok(false);
    }
    let image = PrecisionLattice::new(hermite_nf(&gens.mul(jacobian)?)?)?;
    image.contains_ball(2 * k - 1)
}

/// `p^v` as an exact scalar.
pub fn power_of_p(ctx: &PrimeContext, v: i64) -> PadicScalar {
    exact_power(ctx.p(), v)
}

/// True when the Hermite form is diagonal (no diffused digit).
pub fn is_diagonal(m: &PMatrix) -> bool {
    (0..m.rows).all(|i| (0..m.cols).all(|j| i == j || m.get(i, j).is_indistinguishable_from_zero()))
}

impl PMatrix {
    /// True when every entry is exactly zero.
    pub fn is_exact_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_exact_zero())
    }

    /// The value of every entry as an exact integer, if possible.
    pub fn to_integers(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_integer()).collect::<Option<Vec<_>>>())
            .collect()
    }

    /// Largest absolute precision any entry could be re-declared at.
    pub fn is_zero_at_precision(&self) -> bool {
        self.entries.iter().all(|x| x.is_indistinguishable_from_zero() || x.unit().is_zero())
    }
}
