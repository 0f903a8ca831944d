//! Maximization oracles for the multi-instance (convex) knapsack.

use super::{ConvexKnapsack, ItemSet};
use crate::error::{Error, Result};
use crate::instance::{GkpRound, GkpStatic};
use crate::scalar::Scalar;

/// Largest item count the exhaustive oracle accepts.
pub const BRUTE_LIMIT: usize = 20;
/// Default bound on `items × profit levels` for one DP table.
pub const DEFAULT_CELL_CAP: usize = 20_000_000;
const MAX_REFINEMENTS: usize = 40;

/// Quality an oracle call must guarantee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Accuracy<S> {
    Exact,
    /// Within `eps` of the optimum.
    Additive(S),
    /// At least `(1 − eps)` times the optimum.
    Relative(S),
}

pub trait KnapsackOracle<S: Scalar> {
    fn maximize(&self, problem: &ConvexKnapsack<S>, accuracy: Accuracy<S>) -> Result<(ItemSet, S)>;
}

/// Exhaustive search; ignores the requested accuracy.
#[derive(Debug, Clone, Copy, Default)]
pub struct BruteOracle;

impl<S: Scalar> KnapsackOracle<S> for BruteOracle {
    fn maximize(&self, problem: &ConvexKnapsack<S>, _: Accuracy<S>) -> Result<(ItemSet, S)> {
        brute_maximize(problem)
    }
}

/// Pseudo-polynomial DP on a fixed profit grid; exact when every summed
/// profit is an integer multiple of `unit`.
#[derive(Debug, Clone, Copy)]
pub struct ExactDpOracle<S> {
    pub unit: S,
    pub cell_cap: usize,
}

impl<S: Scalar> KnapsackOracle<S> for ExactDpOracle<S> {
    fn maximize(&self, problem: &ConvexKnapsack<S>, _: Accuracy<S>) -> Result<(ItemSet, S)> {
        exact_dp_maximize(problem, self.unit, self.cell_cap).map(|o| (o.set, o.value))
    }
}

/// Profit-scaling FPTAS.
#[derive(Debug, Clone, Copy)]
pub struct FptasOracle {
    pub cell_cap: usize,
}

impl Default for FptasOracle {
    fn default() -> Self {
        Self { cell_cap: DEFAULT_CELL_CAP }
    }
}

impl<S: Scalar> KnapsackOracle<S> for FptasOracle {
    fn maximize(&self, problem: &ConvexKnapsack<S>, accuracy: Accuracy<S>) -> Result<(ItemSet, S)> {
        let target = match accuracy {
            Accuracy::Relative(e) => Target::Relative(e),
            Accuracy::Additive(e) => Target::Additive(e),
            Accuracy::Exact => return Err(Error::InvalidParameter("the FPTAS needs a positive tolerance".into())),
        };
        fptas_maximize(problem, target, self.cell_cap).map(|o| (o.set, o.value))
    }
}

/// Result of a DP-based oracle call.
#[derive(Debug, Clone, PartialEq)]
pub struct DpOutcome<S> {
    pub set: ItemSet,
    pub value: S,
    /// Table cells filled, summed over refinements.
    pub dp_cells: usize,
    /// Times the grid was halved after the first pass.
    pub refinements: usize,
    /// Whether the returned value provably meets the requested guarantee.
    pub certified: bool,
}

/// Exact maximizer over all `2^n` item sets; the lexicographically smallest
/// set wins ties.
pub fn brute_oracle<S: Scalar>(statics: &GkpStatic<S>, rounds: &[GkpRound<S>]) -> Result<(ItemSet, S)> {
    brute_maximize(&ConvexKnapsack::from_rounds(statics, rounds)?)
}

pub(crate) fn brute_maximize<S: Scalar>(ck: &ConvexKnapsack<S>) -> Result<(ItemSet, S)> {
    let n = ck.n();
    if n > BRUTE_LIMIT {
        return Err(Error::TooLarge { what: "knapsack enumeration", size: n, limit: BRUTE_LIMIT });
    }
    let mut best_mask = 0u64;
    let mut best = S::zero();
    for mask in 1u64..(1 << n) {
        let (mut p, mut w) = (S::zero(), S::zero());
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            p += ck.profits()[i];
            w += ck.weights()[i];
            bits &= bits - 1;
        }
        let v = ck.value_of_totals(p, w);
        if v > best || (v == best && ItemSet::from_mask(mask) < ItemSet::from_mask(best_mask)) {
            best = v;
            best_mask = mask;
        }
    }
    Ok((ItemSet::from_mask(best_mask), best))
}

/// Minimum total weight reaching each scaled profit level exactly.
struct ProfitTable<S> {
    min_weight: Vec<Option<S>>,
    /// `took[i * levels + q]`: item `i` is used by the best way to reach `q`
    /// with items `0..=i`.
    took: Vec<bool>,
    scaled: Vec<u64>,
}

impl<S: Scalar> ProfitTable<S> {
    fn cells(n: usize, scaled: &[u64]) -> usize {
        let levels: u64 = scaled.iter().sum::<u64>() + 1;
        (n as u64).saturating_mul(levels).min(usize::MAX as u64) as usize
    }

    fn build(weights: &[S], scaled: Vec<u64>) -> Self {
        let levels = scaled.iter().sum::<u64>() as usize + 1;
        let mut min_weight: Vec<Option<S>> = vec![None; levels];
        min_weight[0] = Some(S::zero());
        let mut took = vec![false; weights.len() * levels];
        let mut reach = 0usize;
        for (i, (&q, &w)) in scaled.iter().zip(weights).enumerate() {
            let q = q as usize;
            reach += q;
            if q == 0 {
                continue;
            }
            for level in (q..=reach).rev() {
                if let Some(base) = min_weight[level - q] {
                    let cand = base + w;
                    if min_weight[level].is_none_or(|cur| cand < cur) {
                        min_weight[level] = Some(cand);
                        took[i * levels + level] = true;
                    }
                }
            }
        }
        Self { min_weight, took, scaled }
    }

    fn levels(&self) -> usize {
        self.min_weight.len()
    }

    fn recover(&self, mut level: usize) -> ItemSet {
        let levels = self.levels();
        let mut members = Vec::new();
        for i in (0..self.scaled.len()).rev() {
            if self.took[i * levels + level] {
                members.push(i);
                level -= self.scaled[i] as usize;
            }
        }
        debug_assert_eq!(level, 0);
        ItemSet::new(members)
    }

    /// Level maximizing `unit·q − c·k(min_weight[q])`; smallest level on ties.
    fn best_level(&self, ck: &ConvexKnapsack<S>, unit: S) -> (usize, S) {
        let mut best: Option<(usize, S)> = None;
        for (level, w) in self.min_weight.iter().enumerate() {
            if let Some(w) = w {
                let v = ck.value_of_totals(unit * S::from_usize_exact(level), *w);
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((level, v));
                }
            }
        }
        best.expect("level 0 is always reachable")
    }
}

/// Exact DP when every summed profit `p_i` equals `q_i · unit` for an
/// integer `q_i >= 0`.
pub fn exact_dp_oracle<S: Scalar>(statics: &GkpStatic<S>, rounds: &[GkpRound<S>], unit: S) -> Result<DpOutcome<S>> {
    exact_dp_maximize(&ConvexKnapsack::from_rounds(statics, rounds)?, unit, DEFAULT_CELL_CAP)
}

pub(crate) fn exact_dp_maximize<S: Scalar>(ck: &ConvexKnapsack<S>, unit: S, cap: usize) -> Result<DpOutcome<S>> {
    if !(unit > S::zero()) {
        return Err(Error::InvalidParameter("grid unit must be positive".into()));
    }
    let scaled = ck
        .profits()
        .iter()
        .enumerate()
        .map(|(index, p)| {
            let q = floor_ratio(*p, unit);
            if S::from_u64(q).is_some_and(|qs| qs * unit == *p) {
                Ok(q)
            } else {
                Err(Error::OffGrid { index })
            }
        })
        .collect::<Result<Vec<u64>>>()?;
    let cells = ProfitTable::<S>::cells(ck.n(), &scaled);
    if cells > cap {
        return Err(Error::GridOverflow { cells, cap });
    }
    let table = ProfitTable::build(ck.weights(), scaled);
    let (level, _) = table.best_level(ck, unit);
    let set = table.recover(level);
    let value = ck.value(&set)?;
    Ok(DpOutcome { set, value, dp_cells: cells, refinements: 0, certified: true })
}

/// Largest integer `q` with `q·unit <= p`, for `p >= 0`.
fn floor_ratio<S: Scalar>(p: S, unit: S) -> u64 {
    let approx = (p / unit).to_f64().unwrap_or(0.0).floor().max(0.0);
    let mut q = if approx >= u64::MAX as f64 { u64::MAX - 1 } else { approx as u64 };
    let of = |q: u64| S::from_u64(q).expect("u64 representable");
    while q > 0 && of(q) * unit > p {
        q -= 1;
    }
    while of(q + 1) * unit <= p {
        q += 1;
    }
    q
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Target<S> {
    Relative(S),
    Additive(S),
}

/// Profit-scaling FPTAS with a relative guarantee `(1 − eps)·OPT`.
pub fn fptas_oracle<S: Scalar>(statics: &GkpStatic<S>, rounds: &[GkpRound<S>], eps: S) -> Result<DpOutcome<S>> {
    fptas_maximize(&ConvexKnapsack::from_rounds(statics, rounds)?, Target::Relative(eps), DEFAULT_CELL_CAP)
}

/// Scales summed profits down by `K` (initially `eps·P_max/n` for a relative
/// target, `eps/n` for an additive one), floors them, and runs the exact
/// DP on the scaled levels.
///
/// Flooring loses less than `K` per item, so `OPT < proxy* + n·K`, where
/// `proxy*` is the best scaled value `K·q − c·k(min weight at q)`. The
/// answer is the best of the DP set, every singleton, and the empty set.
/// When that answer does not meet the target against the `proxy* + n·K`
/// bound (penalties can push OPT far below `P_max`), `K` is halved and the
/// DP rerun until it does or the table would exceed `cap`.
pub(crate) fn fptas_maximize<S: Scalar>(ck: &ConvexKnapsack<S>, target: Target<S>, cap: usize) -> Result<DpOutcome<S>> {
    let n = ck.n();
    let eps = match target {
        Target::Relative(e) | Target::Additive(e) => e,
    };
    if !(eps > S::zero()) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let p_max = ck.profits().iter().fold(S::zero(), |m, p| m.max_of(*p));
    if n == 0 || p_max == S::zero() {
        return Ok(DpOutcome { set: ItemSet::empty(), value: S::zero(), dp_cells: 0, refinements: 0, certified: true });
    }
    let n_s = S::from_usize_exact(n);
    let mut unit = match target {
        Target::Relative(e) => e * p_max / n_s,
        Target::Additive(e) => e / n_s,
    };

    // Fallback candidates: the empty set and every singleton.
    let mut fallback = (ItemSet::empty(), S::zero());
    for i in 0..n {
        let s = ItemSet::new([i]);
        let v = ck.value(&s)?;
        if v > fallback.1 {
            fallback = (s, v);
        }
    }

    let mut total_cells = 0usize;
    let mut best: Option<DpOutcome<S>> = None;
    for refinement in 0..=MAX_REFINEMENTS {
        let scaled: Vec<u64> = ck.profits().iter().map(|p| floor_ratio(*p, unit)).collect();
        let cells = ProfitTable::<S>::cells(n, &scaled);
        if cells > cap || total_cells.saturating_add(cells) > cap.saturating_mul(4) {
            if refinement == 0 {
                return Err(Error::GridOverflow { cells, cap });
            }
            break;
        }
        total_cells += cells;
        let table = ProfitTable::build(ck.weights(), scaled);
        let (level, proxy) = table.best_level(ck, unit);
        let dp_set = table.recover(level);
        let dp_value = ck.value(&dp_set)?;
        let (set, value) = pick_better((dp_set, dp_value), fallback.clone());

        let upper = proxy + unit * n_s;
        let certified = match target {
            Target::Relative(e) => value >= (S::one() - e) * upper,
            Target::Additive(e) => value >= upper - e,
        };
        let done = certified;
        best = Some(DpOutcome { set, value, dp_cells: total_cells, refinements: refinement, certified });
        if done {
            break;
        }
        unit = unit / (S::one() + S::one());
    }
    Ok(best.expect("first pass always runs"))
}

fn pick_better<S: Scalar>(a: (ItemSet, S), b: (ItemSet, S)) -> (ItemSet, S) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::gen_random_gkp;
    use crate::rng::SeededRng;

    fn two_round() -> (GkpStatic<f64>, Vec<GkpRound<f64>>) {
        let s = GkpStatic::new(vec![1.0, 2.0], 1.0).unwrap();
        let r = vec![GkpRound::new(vec![3.0, 1.0], 2.0).unwrap(), GkpRound::new(vec![0.0, 2.0], 1.0).unwrap()];
        (s, r)
    }

    #[test]
    fn brute_examples() {
        let (s, r) = two_round();
        let (set, v) = brute_oracle(&s, &r).unwrap();
        assert_eq!((set.members(), v), (&[0][..], 3.0));
        let (set, v) = brute_oracle(&s, &[]).unwrap();
        assert_eq!((set.len(), v), (0, 0.0));

        // single item: p = 5 over two rounds, weight 4, caps 1 and 3
        let s1 = GkpStatic::new(vec![4.0], 1.0).unwrap();
        let r1 = vec![GkpRound::new(vec![2.0], 1.0).unwrap(), GkpRound::new(vec![3.0], 3.0).unwrap()];
        let (set, v) = brute_oracle(&s1, &r1).unwrap();
        assert_eq!((set.members(), v), (&[0][..], 5.0 - 4.0));
    }

    #[test]
    fn brute_guard() {
        let s = GkpStatic::new(vec![1.0; 21], 1.0).unwrap();
        assert!(matches!(brute_oracle(&s, &[]), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn exact_dp_examples() {
        let (s, r) = two_round();
        let out = exact_dp_oracle(&s, &r, 1.0).unwrap();
        assert_eq!(out.value, 3.0);

        let zero = vec![GkpRound::new(vec![0.0, 0.0], 1.0).unwrap()];
        let out = exact_dp_oracle(&s, &zero, 1.0).unwrap();
        assert_eq!((out.set.len(), out.value), (0, 0.0));

        let free = GkpStatic::new(vec![5.0, 7.0, 1.0], 0.0).unwrap();
        let round = vec![GkpRound::new(vec![1.0, 2.0, 3.0], 0.0).unwrap()];
        let out = exact_dp_oracle(&free, &round, 1.0).unwrap();
        assert_eq!((out.set.members(), out.value), (&[0, 1, 2][..], 6.0));
    }

    #[test]
    fn exact_dp_errors() {
        let (s, r) = two_round();
        assert!(matches!(exact_dp_oracle(&s, &r, 2.0), Err(Error::OffGrid { index: 0 })));
        assert!(exact_dp_oracle(&s, &r, 0.0).is_err());
        let big = vec![GkpRound::new(vec![1e9, 1e9], 1.0).unwrap()];
        assert!(matches!(exact_dp_oracle(&s, &big, 1.0), Err(Error::GridOverflow { .. })));
    }

    #[test]
    fn fptas_examples() {
        let (s, r) = two_round();
        let out = fptas_oracle(&s, &r, 0.1).unwrap();
        assert!(out.value >= 2.7, "{}", out.value);
        let zero = vec![GkpRound::new(vec![0.0, 0.0], 1.0).unwrap()];
        let out = fptas_oracle(&s, &zero, 0.1).unwrap();
        assert_eq!((out.set.len(), out.value), (0, 0.0));
        assert!(fptas_oracle(&s, &r, 0.0).is_err());
    }

    #[test]
    fn fptas_half_against_brute() {
        let mut rng = SeededRng::new(17);
        for _ in 0..100 {
            let n = 1 + rng.below_usize(12);
            let m = 1 + rng.below_usize(5);
            let set = gen_random_gkp::<f64>(n, m, &mut rng).unwrap();
            let (_, opt) = brute_oracle(&set.statics, &set.rounds).unwrap();
            let got = fptas_oracle(&set.statics, &set.rounds, 0.5).unwrap();
            assert!(got.value >= 0.5 * opt - 1e-12, "{} vs {}", got.value, opt);
        }
    }

    #[test]
    fn floor_ratio_is_exact() {
        assert_eq!(floor_ratio(3.0, 1.0), 3);
        assert_eq!(floor_ratio(0.3, 0.1), 2); // 0.1 * 3 > 0.3 in binary
        assert_eq!(floor_ratio(0.0, 0.7), 0);
    }

    #[test]
    fn additive_target_is_certified_immediately() {
        let (s, r) = two_round();
        let ck = ConvexKnapsack::from_rounds(&s, &r).unwrap();
        let out = fptas_maximize(&ck, Target::Additive(0.01), DEFAULT_CELL_CAP).unwrap();
        assert!(out.certified);
        assert_eq!(out.refinements, 0);
        assert!(out.value >= 3.0 - 0.01);
    }
}
