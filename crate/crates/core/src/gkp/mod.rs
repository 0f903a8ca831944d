//! Generalized knapsack: profit minus a linear penalty on excess weight.
//!
//! Summing `m` rounds that share item weights and the penalty rate gives a
//! single knapsack whose penalty `c·k(W)` is the piecewise-linear convex
//! function `k(W) = Σ_t max{0, W − B^t}` of the total weight `W`. That
//! reduction ([`ConvexKnapsack`]) is what the oracles optimize.

mod oracle;

pub use oracle::{
    brute_oracle, exact_dp_oracle, fptas_oracle, Accuracy, BruteOracle, DpOutcome, ExactDpOracle, FptasOracle,
    KnapsackOracle, BRUTE_LIMIT, DEFAULT_CELL_CAP,
};

use crate::error::{Error, Result};
use crate::instance::{GkpRound, GkpStatic};
use crate::scalar::Scalar;

/// Selected items, sorted ascending. The derived order is lexicographic on
/// the member list, which is the tie-break used by every oracle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ItemSet {
    members: Vec<usize>,
}

impl ItemSet {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self { members }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_mask(mask: u64) -> Self {
        Self { members: (0..64).filter(|i| mask >> i & 1 == 1).collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn to_field(&self) -> String {
        let parts: Vec<String> = self.members.iter().map(|v| v.to_string()).collect();
        parts.join(";")
    }

    fn check(&self, n: usize) -> Result<()> {
        match self.members.last() {
            Some(&i) if i >= n => Err(Error::DimensionMismatch { expected: n, found: i + 1 }),
            _ => Ok(()),
        }
    }
}

/// `k(W) = Σ_t max{0, W − B^t}` over a multiset of capacities.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcessFunction<S> {
    sorted_caps: Vec<S>,
    /// `prefix_sums[j]` is the sum of the `j` smallest capacities.
    prefix_sums: Vec<S>,
}

impl<S: Scalar> ExcessFunction<S> {
    pub fn new(caps: impl IntoIterator<Item = S>) -> Self {
        let mut sorted_caps: Vec<S> = caps.into_iter().collect();
        sorted_caps.sort_by(|a, b| a.partial_cmp(b).expect("capacities must be comparable"));
        let mut prefix_sums = Vec::with_capacity(sorted_caps.len() + 1);
        prefix_sums.push(S::zero());
        for c in &sorted_caps {
            let last = *prefix_sums.last().unwrap();
            prefix_sums.push(last + *c);
        }
        Self { sorted_caps, prefix_sums }
    }

    /// Adds one capacity, keeping the order and the prefix sums.
    pub fn insert(&mut self, cap: S) {
        let pos = self.sorted_caps.partition_point(|c| *c <= cap);
        self.sorted_caps.insert(pos, cap);
        let before = self.prefix_sums[pos];
        self.prefix_sums.insert(pos + 1, before + cap);
        for p in &mut self.prefix_sums[pos + 2..] {
            *p += cap;
        }
    }

    pub fn len(&self) -> usize {
        self.sorted_caps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted_caps.is_empty()
    }

    pub fn sorted_caps(&self) -> &[S] {
        &self.sorted_caps
    }

    pub fn prefix_sums(&self) -> &[S] {
        &self.prefix_sums
    }

    /// `j·W − (B̃^1 + … + B̃^j)` where `j` counts capacities below `W`,
    /// located by binary search.
    pub fn value(&self, total_weight: S) -> S {
        let j = self.sorted_caps.partition_point(|c| *c < total_weight);
        S::from_usize_exact(j) * total_weight - self.prefix_sums[j]
    }
}

/// `excess_value(W, k)`, free-function form.
pub fn excess_value<S: Scalar>(total_weight: S, f: &ExcessFunction<S>) -> S {
    f.value(total_weight)
}

/// A multi-instance GKP folded into one knapsack with summed profits and a
/// convex excess penalty.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexKnapsack<S> {
    weights: Vec<S>,
    penalty: S,
    profits: Vec<S>,
    excess: ExcessFunction<S>,
}

impl<S: Scalar> ConvexKnapsack<S> {
    /// No rounds yet: zero profits and zero excess.
    pub fn new(statics: &GkpStatic<S>) -> Self {
        Self {
            weights: statics.weights().to_vec(),
            penalty: statics.penalty(),
            profits: vec![S::zero(); statics.n()],
            excess: ExcessFunction::new(std::iter::empty()),
        }
    }

    pub fn from_rounds<'a>(statics: &GkpStatic<S>, rounds: impl IntoIterator<Item = &'a GkpRound<S>>) -> Result<Self> {
        let mut ck = Self::new(statics);
        for (t, r) in rounds.into_iter().enumerate() {
            ck.push_round(r).map_err(|e| e.at_round(t + 1))?;
        }
        Ok(ck)
    }

    pub fn push_round(&mut self, round: &GkpRound<S>) -> Result<()> {
        self.push_scaled_round(round, S::one())
    }

    /// Adds `round` with its profits multiplied by `factor`; the capacity is
    /// unchanged.
    pub fn push_scaled_round(&mut self, round: &GkpRound<S>, factor: S) -> Result<()> {
        if round.profits().len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: round.profits().len() });
        }
        for (acc, p) in self.profits.iter_mut().zip(round.profits()) {
            *acc += *p * factor;
        }
        self.excess.insert(round.capacity());
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn penalty(&self) -> S {
        self.penalty
    }

    pub fn profits(&self) -> &[S] {
        &self.profits
    }

    pub fn excess(&self) -> &ExcessFunction<S> {
        &self.excess
    }

    /// Summed profit minus `c·k(total weight)`.
    pub fn value(&self, set: &ItemSet) -> Result<S> {
        set.check(self.n())?;
        let (p, w) = set
            .members()
            .iter()
            .fold((S::zero(), S::zero()), |(p, w), &i| (p + self.profits[i], w + self.weights[i]));
        Ok(self.value_of_totals(p, w))
    }

    pub(crate) fn value_of_totals(&self, profit: S, weight: S) -> S {
        profit - self.penalty * self.excess.value(weight)
    }
}

/// `Σ_{i∈A} p_i − c·max{0, Σ_{i∈A} w_i − B}`.
pub fn gkp_profit<S: Scalar>(set: &ItemSet, statics: &GkpStatic<S>, round: &GkpRound<S>) -> Result<S> {
    let n = statics.n();
    if round.profits().len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: round.profits().len() });
    }
    set.check(n)?;
    let (p, w) = set
        .members()
        .iter()
        .fold((S::zero(), S::zero()), |(p, w), &i| (p + round.profits()[i], w + statics.weights()[i]));
    let excess = (w - round.capacity()).max_of(S::zero());
    Ok(p - statics.penalty() * excess)
}

/// Total profit of `set` over all rounds, via the convex reduction.
pub fn multi_gkp_profit<S: Scalar>(set: &ItemSet, statics: &GkpStatic<S>, rounds: &[GkpRound<S>]) -> Result<S> {
    ConvexKnapsack::from_rounds(statics, rounds)?.value(set)
}

/// `n` rounds; round `j` gives item `j` profit `marker` and every other item
/// profit 0, with capacity equal to the total item weight so no set ever
/// pays a penalty. Any two distinct item sets differ on the round of an item
/// in their symmetric difference.
pub fn distinguisher_set<S: Scalar>(statics: &GkpStatic<S>, marker: S) -> Result<Vec<GkpRound<S>>> {
    if !(marker > S::zero()) {
        return Err(Error::InvalidParameter("marker profit must be positive".into()));
    }
    let total = statics.total_weight();
    (0..statics.n())
        .map(|j| {
            let mut p = vec![S::zero(); statics.n()];
            p[j] = marker;
            GkpRound::new(p, total)
        })
        .collect()
}

/// Payoff matrix `Γ[x][j] = profit(x, round_j)` over all `2^n` item sets in
/// bitmask order.
pub fn induced_matrix<S: Scalar>(statics: &GkpStatic<S>, rounds: &[GkpRound<S>]) -> Result<Vec<Vec<S>>> {
    let n = statics.n();
    if n > BRUTE_LIMIT {
        return Err(Error::TooLarge { what: "induced matrix", size: n, limit: BRUTE_LIMIT });
    }
    (0u64..1 << n)
        .map(|mask| {
            let set = ItemSet::from_mask(mask);
            rounds.iter().map(|r| gkp_profit(&set, statics, r)).collect()
        })
        .collect()
}

/// Admissibility summary of a translation matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility<S> {
    pub distinct_rows: bool,
    /// Largest number of distinct values in any column.
    pub kappa: usize,
    /// Smallest gap between distinct values within a column; `None` if every
    /// column is constant.
    pub delta: Option<S>,
}

pub fn admissibility<S: Scalar>(matrix: &[Vec<S>]) -> Admissibility<S> {
    let mut distinct_rows = true;
    'outer: for (a, ra) in matrix.iter().enumerate() {
        for rb in &matrix[a + 1..] {
            if ra == rb {
                distinct_rows = false;
                break 'outer;
            }
        }
    }
    let cols = matrix.first().map_or(0, Vec::len);
    let mut kappa = 0;
    let mut delta: Option<S> = None;
    for j in 0..cols {
        let mut vals: Vec<S> = matrix.iter().map(|r| r[j]).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).expect("comparable payoffs"));
        vals.dedup();
        kappa = kappa.max(vals.len());
        for w in vals.windows(2) {
            let gap = w[1] - w[0];
            delta = Some(delta.map_or(gap, |d| d.min_of(gap)));
        }
    }
    Admissibility { distinct_rows, kappa, delta }
}
