//! Fixed inputs of the experiments, as 2-adic digit strings known modulo
//! `2^10` unless stated otherwise.

use crate::error::Result;
use crate::lattice::PMatrix;
use crate::newton::PPolynomial;
use crate::scalar::{parse_digits, PadicScalar, PrimeContext};

/// A 4x4 matrix `P D Q` with `P, Q` invertible over Z2 and `D` diagonal
/// with entries `2^0, 2^2, 2^3, 2^5`; rows separated by `;`.
pub const EXAMPLE_MATRIX: &str = "...0101110000, ...0011100000, ...1011001000, ...0011000100; \
    ...1101011001, ...1101000111, ...0111001010, ...0101110101; \
    ...0111100011, ...1011100101, ...0010100110, ...1111110111; \
    ...0000111101, ...1101110011, ...0011010010, ...1001100001";

/// Non-leading coefficients of the first monic quartic of the Bézout
/// experiment, from `X^3` down to the constant term.
pub const BEZOUT_P: [&str; 4] = ["...1101111111", "...0011110011", "...1001001100", "...0010111010"];

/// Non-leading coefficients of the second monic quartic, from `X^3` down.
pub const BEZOUT_Q: [&str; 4] = ["...0101001011", "...0111001111", "...0100010000", "...1101000111"];

/// Coefficients of the degree-8 polynomial of the evaluation/interpolation
/// round trip, from `X^8` down.
pub const INTERPOLATION_DEG8: [&str; 9] = [
    "...0111001110",
    "...0101010001",
    "...1000001100",
    "...1010001101",
    "...1111000100",
    "...0011101101",
    "...1010010111",
    "...0011011010",
    "...0001011110",
];

/// Coefficients of the degree-19 polynomial of the round trip, from `X^19`
/// down.
pub const INTERPOLATION_DEG19: [&str; 20] = [
    "...0101101001",
    "...1101000011",
    "...0011001110",
    "...1001011010",
    "...0011100111",
    "...0110101110",
    "...0111111001",
    "...1011010111",
    "...0100000100",
    "...0000110000",
    "...1110101010",
    "...1111101100",
    "...0100010001",
    "...0101010000",
    "...0111101111",
    "...1100010011",
    "...0100000001",
    "...1000010010",
    "...0000100000",
    "...0001111110",
];

/// Set bits of the 2-adic input of the square-root example, known modulo
/// `2^20`.
pub const SQRT_INPUT_BITS: [u32; 10] = [0, 3, 4, 5, 10, 13, 16, 17, 18, 19];

/// Seeds of the two Somos-4 sequences studied.
pub const SOMOS_SEEDS_STABLE: [i64; 4] = [1, 1, 1, 1];
pub const SOMOS_SEEDS_UNSTABLE: [i64; 4] = [1, 1, 1, 3];

pub fn two_adic() -> PrimeContext {
    PrimeContext::new(2).expect("2 is prime")
}

pub fn example_matrix() -> PMatrix {
    PMatrix::parse(EXAMPLE_MATRIX, &two_adic()).expect("well-formed fixture")
}

/// A polynomial from digit strings listed from the leading coefficient
/// down, with an optional exact leading 1 prepended.
pub fn polynomial_from_digits(ctx: &PrimeContext, descending: &[&str], monic: bool) -> Result<PPolynomial> {
    let mut coefficients = descending
        .iter()
        .rev()
        .map(|t| parse_digits(t, ctx))
        .collect::<Result<Vec<_>>>()?;
    if monic {
        coefficients.push(PadicScalar::exact(ctx, 1));
    }
    PPolynomial::new(ctx, coefficients)
}

/// The two monic quartics of the Bézout experiment.
pub fn bezout_pair() -> (PPolynomial, PPolynomial) {
    let ctx = two_adic();
    (
        polynomial_from_digits(&ctx, &BEZOUT_P, true).expect("well-formed fixture"),
        polynomial_from_digits(&ctx, &BEZOUT_Q, true).expect("well-formed fixture"),
    )
}

pub fn interpolation_deg8() -> PPolynomial {
    polynomial_from_digits(&two_adic(), &INTERPOLATION_DEG8, false).expect("well-formed fixture")
}

pub fn interpolation_deg19() -> PPolynomial {
    polynomial_from_digits(&two_adic(), &INTERPOLATION_DEG19, false).expect("well-formed fixture")
}

/// The square-root input `c + O(2^20)`.
pub fn sqrt_input() -> PadicScalar {
    let value: i64 = SQRT_INPUT_BITS.iter().map(|b| 1i64 << b).sum();
    PadicScalar::with_precision(&two_adic(), value, 20)
}

/// Somos seeds as scalars known modulo `p^n`.
pub fn somos_seeds(ctx: &PrimeContext, seeds: [i64; 4], n: i64) -> [PadicScalar; 4] {
    seeds.map(|s| PadicScalar::with_precision(ctx, s, n))
}
