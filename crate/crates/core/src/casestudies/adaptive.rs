//! A generic driver for computations split into steps whose precision is
//! controlled by lattices: before each step the state is lifted to a
//! representative at a chosen precision, the step runs in interval
//! arithmetic, and its output must be known at least modulo the step's
//! minimal lattice.

use crate::error::{PadicError, Result};
use crate::lattice::{power_of_p, PrecisionLattice};
use crate::scalar::PadicScalar;

/// How one state coordinate is lifted before a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lift {
    /// Keep the coordinate as it is.
    Keep,
    /// Zero-fill (or truncate) to the given absolute precision.
    ZeroFillTo(i64),
    /// Keep the digits below the given position and declare the result
    /// exact.
    ExactBelow(i64),
}

impl Lift {
    pub fn apply(self, x: &PadicScalar) -> PadicScalar {
        match self {
            Lift::Keep => x.clone(),
            Lift::ZeroFillTo(n) => x.lift_to(n),
            Lift::ExactBelow(n) => x.truncate(n).lift_exact(),
        }
    }
}

/// What a step needs from its input and guarantees on its output, worked
/// out from the current state.
#[derive(Debug, Clone)]
pub struct StepPlan {
    /// One policy per input coordinate.
    pub lift: Vec<Lift>,
    /// Lattice the output error must lie in.
    pub h_min: PrecisionLattice,
    /// Lattice the output is finally known modulo.
    pub h_max: PrecisionLattice,
}

type Evaluator = Box<dyn Fn(&[PadicScalar]) -> Result<Vec<PadicScalar>> + Send + Sync>;
type Planner = Box<dyn Fn(&[PadicScalar]) -> Result<StepPlan> + Send + Sync>;

/// One step: a map from states of `input_dim` coordinates to states of
/// `output_dim` coordinates, with its precision plan.
pub struct ChainStep {
    pub input_dim: usize,
    pub output_dim: usize,
    evaluate: Evaluator,
    plan: Planner,
}

impl ChainStep {
    pub fn new(
        input_dim: usize,
        output_dim: usize,
        evaluate: impl Fn(&[PadicScalar]) -> Result<Vec<PadicScalar>> + Send + Sync + 'static,
        plan: impl Fn(&[PadicScalar]) -> Result<StepPlan> + Send + Sync + 'static,
    ) -> Self {
        ChainStep { input_dim, output_dim, evaluate: Box::new(evaluate), plan: Box::new(plan) }
    }
}

/// Steps run in order; the output dimension of each step is the input
/// dimension of the next.
pub struct StepChain {
    steps: Vec<ChainStep>,
}

impl StepChain {
    pub fn new(steps: Vec<ChainStep>) -> Result<Self> {
        for (i, w) in steps.windows(2).enumerate() {
            if w[0].output_dim != w[1].input_dim {
                return Err(PadicError::Dimension(format!(
                    "step {i} outputs {} coordinates but step {} expects {}",
                    w[0].output_dim,
                    i + 1,
                    w[1].input_dim
                )));
            }
        }
        Ok(StepChain { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn input_dim(&self) -> Option<usize> {
        self.steps.first().map(|s| s.input_dim)
    }

    pub fn output_dim(&self) -> Option<usize> {
        self.steps.last().map(|s| s.output_dim)
    }
}

/// True when the ball of the claimed precisions of `state` lies in `h`.
fn ball_inside(state: &[PadicScalar], h: &PrecisionLattice) -> Result<bool> {
    let ctx = h.generators().ctx();
    let zero = PadicScalar::exact_zero(&ctx);
    for (j, x) in state.iter().enumerate() {
        let Some(n) = x.abs_prec() else { continue };
        let mut e = vec![zero.clone(); state.len()];
        e[j] = power_of_p(&ctx, n);
        if !h.contains(&e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Run the chain on `input`. Each step is planned from the current state,
/// its input lifted by the plan, and its output checked to be known modulo
/// the plan's minimal lattice ([`PadicError::LiftPolicyFailure`] with the
/// step index otherwise). The final state is truncated coordinatewise to
/// the smallest diagonal lattice containing `target`.
pub fn run_adaptive(chain: &StepChain, input: &[PadicScalar], target: &PrecisionLattice) -> Result<Vec<PadicScalar>> {
    let expected = chain.input_dim().unwrap_or(input.len());
    if input.len() != expected {
        return Err(PadicError::Dimension(format!("chain expects {expected} coordinates, got {}", input.len())));
    }
    let out_dim = chain.output_dim().unwrap_or(input.len());
    if target.dim() != out_dim {
        return Err(PadicError::Dimension(format!(
            "target lattice has dimension {} for {out_dim} output coordinates",
            target.dim()
        )));
    }
    let mut state = input.to_vec();
    for (i, step) in chain.steps.iter().enumerate() {
        let plan = (step.plan)(&state)?;
        if plan.lift.len() != step.input_dim || plan.h_min.dim() != step.output_dim || plan.h_max.dim() != step.output_dim
        {
            return Err(PadicError::Dimension(format!("plan of step {i} does not match the step's dimensions")));
        }
        if !plan.h_max.contains_lattice(&plan.h_min)? {
            return Err(PadicError::InvalidParameter(format!(
                "step {i}: the minimal lattice is not inside the maximal one"
            )));
        }
        let lifted: Vec<PadicScalar> = state.iter().zip(&plan.lift).map(|(x, l)| l.apply(x)).collect();
        let out = (step.evaluate)(&lifted)?;
        if out.len() != step.output_dim {
            return Err(PadicError::Dimension(format!("step {i} returned {} coordinates", out.len())));
        }
        if !ball_inside(&out, &plan.h_min)? {
            return Err(PadicError::LiftPolicyFailure(i));
        }
        state = out;
    }
    let cuts = target.coordinate_valuations()?;
    Ok(state.iter().zip(cuts).map(|(x, n)| x.truncate(n)).collect())
}
