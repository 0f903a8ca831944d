//! Per-round regret ledgers emitted by the online algorithms.

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmId {
    OgdVc,
    GftplGkp,
    GapSolver,
}

impl AlgorithmId {
    pub fn objective(self) -> Objective {
        match self {
            AlgorithmId::OgdVc | AlgorithmId::GapSolver => Objective::Minimize,
            AlgorithmId::GftplGkp => Objective::Maximize,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::OgdVc => "ogd_vc",
            AlgorithmId::GftplGkp => "gftpl_gkp",
            AlgorithmId::GapSolver => "gap_solver",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow<S> {
    /// 1-based round.
    pub t: usize,
    /// Played item or vertex set.
    pub action: Vec<usize>,
    /// Cost (minimization) or payoff (maximization) of the played action.
    pub value: S,
    pub cumulative: S,
    /// Cost of the fractional iterate, for algorithms that keep one.
    pub fractional: Option<S>,
    /// Perturbed objective of the played action as seen by the oracle.
    pub perturbed_objective: Option<S>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceMeta {
    pub seed: Option<u64>,
    /// `key=value` pairs describing the configuration of the run.
    pub config: Vec<(String, String)>,
    /// The perturbation vector drawn once at the start of a GFTPL run.
    pub perturbation: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace<S> {
    pub algorithm: AlgorithmId,
    pub rows: Vec<TraceRow<S>>,
    /// Hindsight optimum over the full horizon, once computed.
    pub benchmark: Option<S>,
    /// Per-round cumulative value of the hindsight-optimal action.
    pub benchmark_cumulative: Option<Vec<S>>,
    pub meta: TraceMeta,
}

impl<S: Scalar> RegretTrace<S> {
    pub fn new(algorithm: AlgorithmId) -> Self {
        Self { algorithm, rows: Vec::new(), benchmark: None, benchmark_cumulative: None, meta: TraceMeta::default() }
    }

    /// Appends a round; `t` and the cumulative column follow from the
    /// previous row.
    pub fn push(&mut self, action: Vec<usize>, value: S) -> &mut TraceRow<S> {
        let cumulative = self.total() + value;
        self.rows.push(TraceRow {
            t: self.rows.len() + 1,
            action,
            value,
            cumulative,
            fractional: None,
            perturbed_objective: None,
        });
        self.rows.last_mut().expect("just pushed")
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn total(&self) -> S {
        self.rows.last().map_or(S::zero(), |r| r.cumulative)
    }

    pub fn fractional_total(&self) -> S {
        self.rows.iter().filter_map(|r| r.fractional).fold(S::zero(), |a, b| a + b)
    }

    /// `t` runs 1, 2, ... and `cumulative` is the exact prefix sum of
    /// `value`.
    pub fn prefix_sums_consistent(&self) -> bool {
        let mut acc = S::zero();
        self.rows.iter().enumerate().all(|(i, r)| {
            acc += r.value;
            r.t == i + 1 && r.cumulative == acc
        })
    }
}
