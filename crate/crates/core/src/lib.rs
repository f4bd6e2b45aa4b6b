//! A laboratory for computing with p-adic numbers.
//!
//! Three representations live side by side:
//!
//! * [`zealous`]: intervals `a + O(p^N)` with exact precision bookkeeping,
//! * [`relaxed`]: lazy digit streams with on-line (relaxed) multiplication,
//! * [`pfloat`]: p-adic floating-point numbers with a fixed significand length.
//!
//! On top of them, [`lattice`] tracks precision as a lattice, [`newton`]
//! implements Hensel/Newton solvers and [`casestudies`] runs complete
//! experiments comparing the representations.

pub mod casestudies;
pub mod error;
pub mod lattice;
pub mod newton;
pub mod pfloat;
pub mod relaxed;
pub mod scalar;
pub mod zealous;

pub use error::{PadicError, Result};
pub use scalar::{PadicScalar, Precision, PrimeContext, Rational, Valuation};
