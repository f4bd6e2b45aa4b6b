//! Complete experiments comparing the arithmetics on linear algebra,
//! polynomial and recurrence problems, with optimal-precision references
//! computed from precision lattices.

pub mod adaptive;
pub mod backend;
pub mod fixtures;
pub mod linalg;
pub mod polynomials;
pub mod report;
pub mod somos;

pub use adaptive::{run_adaptive, ChainStep, Lift, StepChain, StepPlan};
pub use backend::{exact_scalar, Arith, Backend, ExactArith, PFloatArith, PolyRing, Ring, ZealousArith};
pub use linalg::*;
pub use polynomials::*;
pub use report::{agreeing_digits, ExperimentReport, QuantityRecord};
pub use somos::*;
