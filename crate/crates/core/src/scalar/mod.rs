//! Exact base-p machinery: prime contexts, expansions, valuations, the
//! canonical scalar type and its text forms.

mod arith;
mod context;
mod literal;
mod value;

pub use arith::{
    from_base_p, legendre_factorial_valuation, mod_inverse, rational_mod_pn, rational_valuation,
    to_base_p, valuation, Rational, Valuation,
};
pub use context::{is_prime, PrimeContext};
pub use literal::{
    parse_arithmetic, parse_digits, parse_scalar, print_arithmetic, print_digits,
    print_digits_width, print_scalar, residue_digits, PrintStyle,
};
pub use value::{PadicScalar, Precision};

pub(crate) use arith::{low_digits, split_rational, split_unit};
pub(crate) use context::pow_p;
