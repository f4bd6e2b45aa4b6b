//! Text forms of scalars.
//!
//! Arithmetic style: `[-]s [* p^v] [+ O(p^N)]`, with `s` in base 10; without
//! the `O(..)` term the literal is exact.
//!
//! Digit style: base-p digits, most significant first, `...` marking an
//! inexact value, an optional radix point and an optional shift marker
//! `* p^k`. For p > 10 each digit is written in base 10 and digits are
//! separated by `|`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::arith::{digits_le, low_digits};
use super::context::{pow_p, PrimeContext};
use super::value::{PadicScalar, Precision};
use crate::error::{PadicError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrintStyle {
    Arithmetic,
    Digits,
}

pub fn print_scalar(x: &PadicScalar, style: PrintStyle) -> String {
    match style {
        PrintStyle::Arithmetic => print_arithmetic(x),
        PrintStyle::Digits => print_digits(x),
    }
}

pub fn print_arithmetic(x: &PadicScalar) -> String {
    let p = x.p();
    let mut out = x.unit().to_string();
    if !x.unit().is_zero() && x.v() != 0 {
        out.push_str(&format!(" * {p}^{}", x.v()));
    }
    if let Some(n) = x.abs_prec() {
        out.push_str(&format!(" + O({p}^{n})"));
    }
    out
}

/// Render most-significant-first digits, inserting a radix point before the
/// last `frac` digits.
fn render(msb_first: &[u64], p: u64, frac: usize) -> String {
    let sep = if p > 10 { "|" } else { "" };
    let int_len = msb_first.len() - frac;
    let join = |ds: &[u64]| ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(sep);
    let mut out = join(&msb_first[..int_len]);
    if frac > 0 {
        out.push('.');
        out.push_str(&join(&msb_first[int_len..]));
    }
    out
}

fn msb(n: &BigInt, p: u64, count: usize) -> Vec<u64> {
    let mut d = low_digits(n, p, count);
    d.reverse();
    d
}

pub fn print_digits(x: &PadicScalar) -> String {
    let p = x.p();
    let v = x.v();
    let s = x.unit();
    match x.precision() {
        Precision::Exact => {
            if s.is_zero() {
                return "0".into();
            }
            if s.is_negative() {
                let mag = digits_le(&s.abs().to_biguint().unwrap(), p).len() as i64 + v.max(0);
                return print_digits_width(x, (mag + 8) as usize);
            }
            let count = digits_le(&s.to_biguint().unwrap(), p).len() as i64;
            if v >= 0 {
                let value = s * pow_p(p, v as u64);
                let n = digits_le(&value.to_biguint().unwrap(), p).len();
                render(&msb(&value, p, n), p, 0)
            } else {
                let frac = (-v) as usize;
                let total = (count as usize).max(frac + 1);
                render(&msb(s, p, total), p, frac)
            }
        }
        Precision::Finite(n) => {
            if s.is_zero() {
                if n > 0 {
                    return format!("...{}", render(&vec![0; n as usize], p, 0));
                }
                return format!("...0 * {p}^{}", n - 1);
            }
            let rel = (n - v) as usize;
            if v >= 0 {
                if v as usize > rel {
                    format!("...{} * {p}^{v}", render(&msb(s, p, rel), p, 0))
                } else {
                    let value = s * pow_p(p, v as u64);
                    format!("...{}", render(&msb(&value, p, n as usize), p, 0))
                }
            } else if n > 0 {
                format!("...{}", render(&msb(s, p, rel), p, (-v) as usize))
            } else {
                format!("...{} * {p}^{v}", render(&msb(s, p, rel), p, 0))
            }
        }
    }
}

/// Digit style truncated to the `width` integer-side digits of lowest weight,
/// always prefixed with `...`. Negative exact integers are printed this way
/// (their expansion is infinite).
pub fn print_digits_width(x: &PadicScalar, width: usize) -> String {
    let p = x.p();
    let v = x.v();
    if x.unit().is_zero() {
        return format!("...{}", render(&vec![0; width], p, 0));
    }
    if v >= 0 {
        let value = x.unit() * pow_p(p, v as u64);
        format!("...{}", render(&msb(&value, p, width), p, 0))
    } else {
        let frac = (-v) as usize;
        format!("...{}", render(&msb(x.unit(), p, width + frac), p, frac))
    }
}

/// Parse any literal. Text starting with `...` or containing `.` or `|` is
/// read in digit style, everything else in arithmetic style.
pub fn parse_scalar(text: &str, ctx: &PrimeContext) -> Result<PadicScalar> {
    let t = text.trim();
    if t.starts_with("...") || t.contains('.') || t.contains('|') {
        parse_digits(text, ctx)
    } else {
        parse_arithmetic(text, ctx)
    }
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { chars: text.char_indices().collect(), pos: 0, text }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|c| c.0).unwrap_or(self.text.len())
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn error(&self, msg: impl Into<String>) -> PadicError {
        PadicError::Syntax { pos: self.offset(), msg: msg.into() }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|c| c.1).collect();
        Ok(s.parse::<BigInt>().expect("decimal digits"))
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let at = self.offset();
        let u = self.uint()?;
        let v: i64 = u
            .try_into()
            .map_err(|_| PadicError::Syntax { pos: at, msg: "exponent out of range".into() })?;
        Ok(if neg { -v } else { v })
    }

    fn prime_power(&mut self, p: u64) -> Result<i64> {
        let at = self.offset();
        let base = self.uint()?;
        if base != BigInt::from(p) {
            return Err(PadicError::Syntax { pos: at, msg: format!("expected the prime {p}") });
        }
        self.expect('^')?;
        self.int()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

pub fn parse_arithmetic(text: &str, ctx: &PrimeContext) -> Result<PadicScalar> {
    let p = ctx.p();
    let mut c = Cursor::new(text);
    let neg = c.eat('-');
    let mut s = c.uint()?;
    if neg {
        s = -s;
    }
    let mut v = 0;
    if c.eat('*') {
        v = c.prime_power(p)?;
    }
    let mut n = Precision::Exact;
    if c.eat('+') {
        c.expect('O')?;
        c.expect('(')?;
        n = Precision::Finite(c.prime_power(p)?);
        c.expect(')')?;
    }
    if !c.at_end() {
        return Err(c.error("unexpected trailing input"));
    }
    Ok(PadicScalar::from_parts(ctx, v, s, n))
}

/// Parse a digit-style literal; without a leading `...` the value is exact.
pub fn parse_digits(text: &str, ctx: &PrimeContext) -> Result<PadicScalar> {
    let p = ctx.p();
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    let (inexact, body_start) = if t.starts_with("...") { (true, 3) } else { (false, 0) };
    let rest = &t[body_start..];
    let (body, shift) = match rest.find('*') {
        Some(i) => {
            let mut c = Cursor::new(&rest[i + 1..]);
            let k = c.prime_power(p).map_err(|e| offset_error(e, lead + body_start + i + 1))?;
            if !c.at_end() {
                return Err(offset_error(c.error("unexpected trailing input"), lead + body_start + i + 1));
            }
            (rest[..i].trim_end(), k)
        }
        None => (rest, 0),
    };
    let base = lead + body_start;
    let (int_part, frac_part) = match body.find('.') {
        Some(i) => (&body[..i], Some((&body[i + 1..], i + 1))),
        None => (body, None),
    };
    let int_digits = parse_digit_run(int_part, p, base)?;
    if int_digits.is_empty() {
        return Err(PadicError::Syntax { pos: base, msg: "expected digits".into() });
    }
    let frac_digits = match frac_part {
        Some((f, off)) => {
            let d = parse_digit_run(f, p, base + off)?;
            if d.is_empty() {
                return Err(PadicError::Syntax { pos: base + off, msg: "expected digits after '.'".into() });
            }
            d
        }
        None => Vec::new(),
    };
    let pb = BigInt::from(p);
    let s = int_digits
        .iter()
        .chain(frac_digits.iter())
        .fold(BigInt::zero(), |acc, &d| acc * &pb + BigInt::from(d));
    let v = shift - frac_digits.len() as i64;
    let n = if inexact {
        Precision::Finite(int_digits.len() as i64 + shift)
    } else {
        Precision::Exact
    };
    Ok(PadicScalar::from_parts(ctx, v, s, n))
}

fn offset_error(e: PadicError, by: usize) -> PadicError {
    match e {
        PadicError::Syntax { pos, msg } => PadicError::Syntax { pos: pos + by, msg },
        other => other,
    }
}

fn parse_digit_run(run: &str, p: u64, base: usize) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    if run.contains('|') || p > 10 {
        let mut off = 0;
        for tok in run.split('|') {
            let d: u64 = tok.trim().parse().map_err(|_| PadicError::Syntax {
                pos: base + off,
                msg: format!("bad digit '{tok}'"),
            })?;
            if d >= p {
                return Err(PadicError::Syntax { pos: base + off, msg: format!("digit {d} is not below {p}") });
            }
            out.push(d);
            off += tok.len() + 1;
        }
    } else {
        for (i, ch) in run.char_indices() {
            let d = ch.to_digit(10).map(u64::from).filter(|&d| d < p).ok_or_else(|| {
                PadicError::Syntax { pos: base + i, msg: format!("'{ch}' is not a base-{p} digit") }
            })?;
            out.push(d);
        }
    }
    Ok(out)
}

/// The residue `value mod p^width` rendered as exactly `width` digits with a
/// leading `...`, as in the experiment tables.
pub fn residue_digits(value: &BigInt, p: u64, width: usize) -> String {
    let r = value.mod_floor(&pow_p(p, width as u64));
    format!("...{}", render(&msb(&r, p, width), p, 0))
}
