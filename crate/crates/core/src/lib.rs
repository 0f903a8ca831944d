//! Online learning for nonlinear combinatorial problems.
//!
//! * [`ogd`]: online gradient descent for min-max vertex cover with
//!   half-rounding (2-regret).
//! * [`gkp`] and [`gftpl`]: generalized knapsack, its multi-instance convex
//!   reduction and FPTAS oracle, and generalized follow-the-perturbed-leader
//!   driven by that oracle.
//! * [`reductions`]: the gap decision procedure built on an online learner
//!   and instance generators for the multi-instance hardness gadgets.
//! * [`minmax`]: objectives and exhaustive oracles used as ground truth.
//! * [`harness`]: regret accounting, experiment runs and file output.
//!
//! Everything combinatorial is generic over [`Scalar`], so costs and
//! profits can be evaluated exactly over [`Rational`]; the learners need
//! square roots and are generic over [`Real`] (`f32`/`f64`). The aliases
//! below fix the usual choices.

pub mod error;
pub mod gftpl;
pub mod gkp;
pub mod harness;
pub mod instance;
pub mod minmax;
pub mod ogd;
pub mod reductions;
pub mod rng;
pub mod scalar;
pub mod trace;

pub use error::{Error, Result};
pub use rng::SeededRng;
pub use scalar::{Rational, Real, Scalar};

pub type WeightSequenceF64 = instance::WeightSequence<f64>;
pub type WeightSequenceExact = instance::WeightSequence<Rational>;
pub type ProcTimeMatrixF64 = instance::ProcTimeMatrix<f64>;
pub type GkpSetF64 = instance::GkpSet<f64>;
pub type GkpSetExact = instance::GkpSet<Rational>;
pub type OgdConfigF64 = ogd::OgdConfig<f64>;
pub type RegretTraceF64 = trace::RegretTrace<f64>;
pub type GftplConfigF64 = gftpl::GftplConfig<f64>;
pub type ConvexKnapsackF64 = gkp::ConvexKnapsack<f64>;
pub type ConvexKnapsackExact = gkp::ConvexKnapsack<Rational>;
