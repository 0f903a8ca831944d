//! Seeded instance generators. Every generator consumes the stream in a
//! fixed order, so `(seed, parameters)` determines the output bit for bit.

use super::{Dnf3Formula, GkpRound, GkpSet, GkpStatic, Graph, Literal, WeightSequence};
use crate::error::{Error, Result};
use crate::rng::SeededRng;
use crate::scalar::Scalar;

/// Erdős–Rényi graph: pairs `(u, v)`, `u < v`, visited in lexicographic
/// order, each kept when a uniform draw falls below `p`.
pub fn gen_random_graph(n: usize, p: f64, rng: &mut SeededRng) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("graph needs at least one vertex".into()));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.bernoulli(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges)
}

/// `horizon` rows, each with a single 1 at a uniformly chosen element.
pub fn gen_onehot_weights<S: Scalar>(n: usize, horizon: usize, rng: &mut SeededRng) -> Result<WeightSequence<S>> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one element".into()));
    }
    let rows = (0..horizon)
        .map(|_| {
            let mut row = vec![S::zero(); n];
            row[rng.below_usize(n)] = S::one();
            row
        })
        .collect();
    WeightSequence::new(n, rows)
}

/// I.i.d. uniform entries on `[0, max_weight]`, row-major draw order.
pub fn gen_uniform_weights<S: Scalar>(
    n: usize,
    horizon: usize,
    max_weight: S,
    rng: &mut SeededRng,
) -> Result<WeightSequence<S>> {
    if max_weight < S::zero() {
        return Err(Error::InvalidParameter("maximum weight is negative".into()));
    }
    let rows = (0..horizon)
        .map(|_| (0..n).map(|_| max_weight * unit::<S>(rng)).collect())
        .collect();
    WeightSequence::new(n, rows)
}

/// Random GKP set: weights, penalty rate, and profits uniform on `[0, 1]`;
/// each capacity uniform on `[0, total weight]`.
pub fn gen_random_gkp<S: Scalar>(n: usize, rounds: usize, rng: &mut SeededRng) -> Result<GkpSet<S>> {
    let weights: Vec<S> = (0..n).map(|_| unit::<S>(rng)).collect();
    let penalty = unit::<S>(rng);
    let statics = GkpStatic::new(weights, penalty)?;
    let total = statics.total_weight();
    let rounds = (0..rounds)
        .map(|_| gen_random_round(&statics, total, rng))
        .collect::<Result<Vec<_>>>()?;
    GkpSet::new(statics, rounds)
}

/// One round for an existing static part: profits uniform on `[0, 1]`,
/// capacity uniform on `[0, total]`.
pub fn gen_random_round<S: Scalar>(statics: &GkpStatic<S>, total: S, rng: &mut SeededRng) -> Result<GkpRound<S>> {
    let profits = (0..statics.n()).map(|_| unit::<S>(rng)).collect();
    let capacity = total * unit::<S>(rng);
    GkpRound::new(profits, capacity)
}

/// Random 3-DNF: each clause picks three distinct variables uniformly
/// (partial Fisher–Yates) and a fair sign for each.
pub fn gen_random_dnf(n: usize, m: usize, rng: &mut SeededRng) -> Result<Dnf3Formula> {
    if n < 3 && m > 0 {
        return Err(Error::InvalidParameter("3-DNF clauses need at least 3 variables".into()));
    }
    let mut vars: Vec<usize> = (0..n).collect();
    let clauses = (0..m)
        .map(|_| {
            let mut clause = [Literal::pos(0); 3];
            for (k, slot) in clause.iter_mut().enumerate() {
                let pick = k + rng.below_usize(n - k);
                vars.swap(k, pick);
                *slot = Literal { var: vars[k], positive: rng.below(2) == 1 };
            }
            clause
        })
        .collect();
    Dnf3Formula::new(n, clauses)
}

fn unit<S: Scalar>(rng: &mut SeededRng) -> S {
    S::from_f64(rng.next_f64()).expect("scalar cannot represent a unit draw")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_probability_extremes() {
        let mut rng = SeededRng::new(1);
        assert_eq!(gen_random_graph(4, 0.0, &mut rng).unwrap().m(), 0);
        assert_eq!(gen_random_graph(4, 1.0, &mut rng).unwrap(), Graph::complete(4));
        assert!(gen_random_graph(4, 1.5, &mut rng).is_err());
        assert!(gen_random_graph(4, -0.1, &mut rng).is_err());
    }

    #[test]
    fn graph_determinism() {
        let a = gen_random_graph(10, 0.5, &mut SeededRng::new(7)).unwrap();
        let b = gen_random_graph(10, 0.5, &mut SeededRng::new(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn onehot_rows() {
        let w = gen_onehot_weights::<f64>(3, 0, &mut SeededRng::new(1)).unwrap();
        assert!(w.is_empty());
        let w = gen_onehot_weights::<f64>(3, 5, &mut SeededRng::new(1)).unwrap();
        for row in w.rows() {
            assert_eq!(row.iter().sum::<f64>(), 1.0);
            assert_eq!(row.iter().filter(|v| **v == 1.0).count(), 1);
        }
    }

    #[test]
    fn onehot_balance() {
        // Binomial(10000, 1/2): mean 5000, sd 50; allow 3 sd.
        let w = gen_onehot_weights::<f64>(2, 10_000, &mut SeededRng::new(1)).unwrap();
        let first = w.rows().iter().filter(|r| r[0] == 1.0).count() as f64;
        assert!((first - 5000.0).abs() <= 3.0 * 2500f64.sqrt(), "count {first}");
    }

    #[test]
    fn uniform_weights() {
        let w = gen_uniform_weights(3, 4, 0.0, &mut SeededRng::new(2)).unwrap();
        assert!(w.rows().iter().flatten().all(|v| *v == 0.0));
        let a = gen_uniform_weights(2, 3, 1.0, &mut SeededRng::new(5)).unwrap();
        let b = gen_uniform_weights(2, 3, 1.0, &mut SeededRng::new(5)).unwrap();
        assert_eq!(a, b);
        let big = gen_uniform_weights(1, 10_000, 1.0, &mut SeededRng::new(11)).unwrap();
        let mean = big.rows().iter().map(|r| r[0]).sum::<f64>() / 10_000.0;
        assert!((mean - 0.5).abs() <= 0.02, "mean {mean}");
        assert!(gen_uniform_weights(1, 1, -1.0, &mut SeededRng::new(1)).is_err());
    }

    #[test]
    fn dnf_clauses_are_valid() {
        let f = gen_random_dnf(5, 40, &mut SeededRng::new(3)).unwrap();
        assert_eq!(f.m(), 40);
        assert!(gen_random_dnf(2, 1, &mut SeededRng::new(3)).is_err());
        assert_eq!(gen_random_dnf(2, 0, &mut SeededRng::new(3)).unwrap().m(), 0);
    }

    #[test]
    fn gkp_set_shape() {
        let set = gen_random_gkp::<f64>(4, 3, &mut SeededRng::new(8)).unwrap();
        assert_eq!(set.statics.n(), 4);
        assert_eq!(set.rounds.len(), 3);
        let total = set.statics.total_weight();
        assert!(set.rounds.iter().all(|r| r.capacity() <= total));
    }
}
