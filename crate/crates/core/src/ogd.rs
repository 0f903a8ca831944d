//! Online gradient descent for min-max vertex cover.
//!
//! The learner keeps a fractional point of the vertex-cover polytope
//! `Q = {x ∈ [0,1]^n : x_i + x_j >= 1 for every edge}`, plays its
//! half-rounding, steps along the subgradient of `max_i w_i x_i`, and projects
//! back onto `Q` in the ℓ2 norm.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{Graph, WeightSequence};
use crate::minmax::VertexSubset;
use crate::rng::SeededRng;
use crate::scalar::Real;
use crate::trace::{AlgorithmId, RegretTrace};

/// Step size rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepMode {
    /// `1/√t`.
    Paper,
    /// `D/(G√t)` with `D = √n` and `G = w_bound`.
    Scaled,
}

impl StepMode {
    pub fn as_str(self) -> &'static str {
        match self {
            StepMode::Paper => "paper",
            StepMode::Scaled => "scaled",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OgdConfig<S> {
    /// Known upper bound on every weight.
    pub w_bound: S,
    pub step_mode: StepMode,
    /// Allowed violation of `x_i + x_j >= 1` when Dykstra stops.
    pub feas_tol: S,
    /// Stop once the corrections move less than this over a full cycle.
    pub conv_tol: S,
    pub max_cycles: usize,
}

impl<S: Real> OgdConfig<S> {
    pub fn new(w_bound: S, step_mode: StepMode) -> Self {
        Self {
            w_bound,
            step_mode,
            feas_tol: S::from_f64(1e-8).unwrap(),
            conv_tol: S::from_f64(1e-12).unwrap(),
            max_cycles: 200_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.w_bound > S::zero()) {
            return Err(Error::InvalidParameter("w_bound must be positive".into()));
        }
        if !(self.feas_tol > S::zero() && self.conv_tol > S::zero()) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Step size used after observing round `t` (1-based) on `n` vertices.
    pub fn step(&self, t: usize, n: usize) -> S {
        let sqrt_t = S::from_usize(t).unwrap().sqrt();
        match self.step_mode {
            StepMode::Paper => sqrt_t.recip(),
            StepMode::Scaled => S::from_usize(n).unwrap().sqrt() / (self.w_bound * sqrt_t),
        }
    }
}

/// A point of the vertex-cover polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalPoint<S> {
    x: Vec<S>,
}

impl<S: Real> FractionalPoint<S> {
    /// Checks the box and, up to `tol`, every edge constraint.
    pub fn new(x: Vec<S>, g: &Graph, tol: S) -> Result<Self> {
        if x.len() != g.n() {
            return Err(Error::DimensionMismatch { expected: g.n(), found: x.len() });
        }
        if let Some(i) = x.iter().position(|v| !(*v >= S::zero() && *v <= S::one())) {
            return Err(Error::InvalidParameter(format!("coordinate {i} outside [0, 1]")));
        }
        let violation = max_edge_violation(&x, g);
        if violation > tol {
            return Err(Error::InvalidParameter(format!("edge constraint violated by {violation}")));
        }
        Ok(Self { x })
    }

    /// The all-halves point, feasible for every graph.
    pub fn center(n: usize) -> Self {
        Self { x: vec![S::from_f64(0.5).unwrap(); n] }
    }

    pub fn as_slice(&self) -> &[S] {
        &self.x
    }

    pub fn into_vec(self) -> Vec<S> {
        self.x
    }
}

fn max_edge_violation<S: Real>(x: &[S], g: &Graph) -> S {
    g.edges().iter().fold(S::zero(), |m, &(i, j)| m.max(S::one() - x[i] - x[j]))
}

/// `g` with `w_{i*}` at `i* = argmax_i w_i x_i` (smallest index on ties) and
/// zeros elsewhere.
pub fn subgradient<S: Real>(w: &[S], x: &[S]) -> Result<Vec<S>> {
    if w.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: w.len() });
    }
    let mut g = vec![S::zero(); w.len()];
    if let Some(i) = argmax_product(w, x) {
        g[i] = w[i];
    }
    Ok(g)
}

fn argmax_product<S: Real>(w: &[S], x: &[S]) -> Option<usize> {
    let mut best: Option<(usize, S)> = None;
    for (i, (wi, xi)) in w.iter().zip(x).enumerate() {
        let v = *wi * *xi;
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// `max_i w_i x_i`, the fractional cost.
pub fn fractional_cost<S: Real>(w: &[S], x: &[S]) -> S {
    w.iter().zip(x).fold(S::zero(), |m, (a, b)| m.max(*a * *b))
}

/// ℓ2 projection of `y` onto the vertex-cover polytope of `g`.
///
/// Dykstra's alternating projection over the edge half-spaces and the unit
/// box, each with its own correction term. The loop ends when the
/// corrections change by less than `conv_tol` (in ℓ2) over a cycle and every
/// edge holds within `feas_tol`. The remaining sub-tolerance violations are
/// then closed by raising the larger endpoint, so the returned point
/// satisfies `x_i + x_j >= 1` exactly in floating point and its half-rounding
/// is always a cover.
pub fn project_vc_polytope<S: Real>(y: &[S], g: &Graph, cfg: &OgdConfig<S>) -> Result<FractionalPoint<S>> {
    if y.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: y.len() });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("projection input is not finite".into()));
    }
    let one = S::one();
    let half = S::from_f64(0.5).unwrap();
    let two = one + one;
    let conv_sq = cfg.conv_tol * cfg.conv_tol;

    let mut x = y.to_vec();
    // Half-space corrections are multiples of e_i + e_j; store the scalar.
    let mut edge_corr = vec![S::zero(); g.m()];
    let mut box_corr = vec![S::zero(); g.n()];
    let mut change = S::infinity();

    for _ in 0..cfg.max_cycles {
        change = S::zero();
        for (k, &(i, j)) in g.edges().iter().enumerate() {
            let c = edge_corr[k];
            let zi = x[i] + c;
            let zj = x[j] + c;
            let s = zi + zj;
            let new_c = if s < one {
                let shift = (one - s) * half;
                x[i] = zi + shift;
                x[j] = zj + shift;
                -shift
            } else {
                x[i] = zi;
                x[j] = zj;
                S::zero()
            };
            let d = new_c - c;
            change = change + two * d * d;
            edge_corr[k] = new_c;
        }
        for (xi, q) in x.iter_mut().zip(box_corr.iter_mut()) {
            let z = *xi + *q;
            let p = z.max(S::zero()).min(one);
            let new_q = z - p;
            let d = new_q - *q;
            change = change + d * d;
            *xi = p;
            *q = new_q;
        }
        if change <= conv_sq && max_edge_violation(&x, g) <= cfg.feas_tol {
            close_edge_gaps(&mut x, g);
            return Ok(FractionalPoint { x });
        }
    }
    Err(Error::ProjectionDiverged {
        cycles: cfg.max_cycles,
        residual: change.sqrt().max(max_edge_violation(&x, g)).to_f64().unwrap_or(f64::NAN),
    })
}

fn close_edge_gaps<S: Real>(x: &mut [S], g: &Graph) {
    let one = S::one();
    for &(i, j) in g.edges() {
        while x[i] + x[j] < one {
            let (hi, lo) = if x[i] >= x[j] { (i, j) } else { (j, i) };
            let target = one - x[lo];
            x[hi] = if target > x[hi] { target } else { x[hi] + S::epsilon() }.min(one);
        }
    }
}

/// A random point of the vertex-cover polytope: uniform in the box, then
/// each violated edge is closed by raising its later endpoint.
pub fn sample_feasible_point<S: Real>(g: &Graph, rng: &mut SeededRng) -> Vec<S> {
    let mut z: Vec<S> = (0..g.n()).map(|_| S::from_f64(rng.next_f64()).unwrap()).collect();
    for &(i, j) in g.edges() {
        if z[i] + z[j] < S::one() {
            z[j] = S::one() - z[i];
        }
    }
    z
}

/// Diagnostics of one projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionCheck {
    /// Largest violation of a box or edge constraint at the projection.
    pub infeasibility: f64,
    /// Largest `‖y − P(y)‖ − ‖y − z‖` over the sampled feasible `z`.
    pub optimality_gap: f64,
    /// `‖P(P(y)) − P(y)‖_∞`.
    pub idempotence_error: f64,
}

/// Projects `y` and compares the result with `competitors` random feasible
/// points.
pub fn check_projection<S: Real>(
    g: &Graph,
    y: &[S],
    cfg: &OgdConfig<S>,
    competitors: usize,
    rng: &mut SeededRng,
) -> Result<ProjectionCheck> {
    let p = project_vc_polytope(y, g, cfg)?;
    let x = p.as_slice();
    let box_violation = x.iter().fold(S::zero(), |m, v| m.max(-*v).max(*v - S::one()));
    let infeasibility = box_violation.max(max_edge_violation(x, g)).to_f64().unwrap();
    let dist = |a: &[S]| a.iter().zip(y).fold(S::zero(), |acc, (u, v)| acc + (*u - *v) * (*u - *v)).sqrt();
    let dp = dist(x);
    let mut optimality_gap = f64::NEG_INFINITY;
    for _ in 0..competitors {
        let z = sample_feasible_point::<S>(g, rng);
        optimality_gap = optimality_gap.max((dp - dist(&z)).to_f64().unwrap());
    }
    let again = project_vc_polytope(x, g, cfg)?;
    let idempotence_error = again.as_slice().iter().zip(x).fold(S::zero(), |m, (a, b)| m.max((*a - *b).abs())).to_f64().unwrap();
    Ok(ProjectionCheck { infeasibility, optimality_gap, idempotence_error })
}

/// `{i : x_i >= 1/2}`.
pub fn round_half<S: Real>(x: &FractionalPoint<S>) -> VertexSubset {
    let half = S::from_f64(0.5).unwrap();
    VertexSubset::new(x.as_slice().iter().enumerate().filter(|(_, v)| **v >= half).map(|(i, _)| i))
}

/// Mutable state of one OGD run.
#[derive(Debug, Clone)]
pub struct OgdLearner<'g, S> {
    graph: &'g Graph,
    cfg: OgdConfig<S>,
    x: FractionalPoint<S>,
    t: usize,
}

impl<'g, S: Real> OgdLearner<'g, S> {
    pub fn new(graph: &'g Graph, cfg: OgdConfig<S>) -> Result<Self> {
        cfg.validate()?;
        Ok(Self { graph, cfg, x: FractionalPoint::center(graph.n()), t: 1 })
    }

    pub fn iterate(&self) -> &FractionalPoint<S> {
        &self.x
    }

    /// The rounded cover to play this round.
    pub fn play(&self) -> VertexSubset {
        round_half(&self.x)
    }

    /// Subgradient step on the revealed weights, then projection.
    pub fn observe(&mut self, w: &[S]) -> Result<()> {
        let g = subgradient(w, self.x.as_slice())?;
        let step = self.cfg.step(self.t, self.graph.n());
        let y: Vec<S> = self.x.as_slice().iter().zip(&g).map(|(xi, gi)| *xi - step * *gi).collect();
        self.x = project_vc_polytope(&y, self.graph, &self.cfg)?;
        self.t += 1;
        Ok(())
    }
}

/// Runs OGD over the whole sequence. Round `t` plays the rounding of `x^t`
/// before `w^t` is revealed and is charged `max_{i∈X^t} w^t_i`; the trace
/// also records the fractional cost `max_i w^t_i x^t_i`.
pub fn ogd_run<S: Real>(g: &Graph, seq: &WeightSequence<S>, cfg: &OgdConfig<S>) -> Result<RegretTrace<S>> {
    if seq.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: seq.n() });
    }
    if seq.max_entry() > cfg.w_bound {
        return Err(Error::InvalidParameter(format!(
            "weight {} exceeds w_bound {}",
            seq.max_entry(),
            cfg.w_bound
        )));
    }
    let mut learner = OgdLearner::new(g, *cfg)?;
    let mut trace = RegretTrace::new(AlgorithmId::OgdVc);
    trace.meta.config = vec![
        ("step_mode".into(), cfg.step_mode.as_str().into()),
        ("w_bound".into(), cfg.w_bound.to_string()),
    ];
    for (idx, w) in seq.rows().iter().enumerate() {
        let played = learner.play();
        let cost = played.members().iter().fold(S::zero(), |m, &i| m.max(w[i]));
        let frac = fractional_cost(w, learner.iterate().as_slice());
        trace.push(played.members().to_vec(), cost).fractional = Some(frac);
        learner.observe(w).map_err(|e| e.at_round(idx + 1))?;
    }
    Ok(trace)
}

/// Additive term `3 W √(nT)` of the 2-regret guarantee.
pub fn theorem2_bound<S: Real>(w: S, n: usize, horizon: usize) -> S {
    S::from_f64(3.0).unwrap() * w * (S::from_usize(n).unwrap() * S::from_usize(horizon).unwrap()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> OgdConfig<f64> {
        OgdConfig::new(1.0, StepMode::Scaled)
    }

    #[test]
    fn subgradient_examples() {
        assert_eq!(subgradient(&[3.0, 1.0, 2.0], &[0.5, 1.0, 0.5]).unwrap(), vec![3.0, 0.0, 0.0]);
        assert_eq!(subgradient(&[0.0, 0.0, 0.0], &[0.2, 0.9, 0.5]).unwrap(), vec![0.0; 3]);
        assert_eq!(subgradient(&[1.0, 1.0], &[0.5, 0.5]).unwrap(), vec![1.0, 0.0]);
        assert!(subgradient(&[1.0], &[0.5, 0.5]).is_err());
    }

    #[test]
    fn projection_identity_inside() {
        let g = Graph::path(3);
        let y = vec![0.3, 0.8, 0.25];
        assert_eq!(project_vc_polytope(&y, &g, &cfg()).unwrap().as_slice(), &y[..]);
    }

    #[test]
    fn projection_triangle_origin() {
        let x = project_vc_polytope(&[0.0; 3], &Graph::complete(3), &cfg()).unwrap();
        for v in x.as_slice() {
            assert!((v - 0.5).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn projection_single_edge() {
        let x = project_vc_polytope(&[0.2, 0.2], &Graph::path(2), &cfg()).unwrap();
        assert!((x.as_slice()[0] - 0.5).abs() < 1e-12 && (x.as_slice()[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn projection_single_edge_matches_grid_search() {
        // dense grid over the feasible part of [0,1]^2
        let y = [0.2, 0.2];
        let steps = 400;
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for a in 0..=steps {
            for b in 0..=steps {
                let (u, v) = (a as f64 / steps as f64, b as f64 / steps as f64);
                if u + v >= 1.0 {
                    let d = (u - y[0]).powi(2) + (v - y[1]).powi(2);
                    if d < best.0 {
                        best = (d, u, v);
                    }
                }
            }
        }
        assert!((best.1 - 0.5).abs() <= 1.0 / steps as f64 && (best.2 - 0.5).abs() <= 1.0 / steps as f64);
    }

    #[test]
    fn projection_clamps_box() {
        let x = project_vc_polytope(&[1.7, -0.4, 2.0], &Graph::empty(3), &cfg()).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn projection_rejects_bad_input() {
        assert!(project_vc_polytope(&[f64::NAN, 0.0], &Graph::path(2), &cfg()).is_err());
        assert!(project_vc_polytope(&[0.0], &Graph::path(2), &cfg()).is_err());
        let tight = OgdConfig { max_cycles: 1, ..cfg() };
        let err = project_vc_polytope(&[0.0; 3], &Graph::complete(3), &tight).unwrap_err();
        assert!(matches!(err, Error::ProjectionDiverged { cycles: 1, .. }));
    }

    #[test]
    fn rounding_examples() {
        let g = Graph::empty(3);
        let x = FractionalPoint::new(vec![0.5, 0.3, 0.9], &g, 1e-8).unwrap();
        assert_eq!(round_half(&x).members(), &[0, 2]);
        let x = FractionalPoint::new(vec![0.5, 0.5], &Graph::path(2), 1e-8).unwrap();
        assert_eq!(round_half(&x).members(), &[0, 1]);
        let x = FractionalPoint::new(vec![1.0, 0.0, 1.0], &Graph::path(3), 1e-8).unwrap();
        assert_eq!(round_half(&x).members(), &[0, 2]);
        assert!(FractionalPoint::new(vec![0.2, 0.2], &Graph::path(2), 1e-8).is_err());
    }

    #[test]
    fn empty_run() {
        let t = ogd_run(&Graph::path(2), &WeightSequence::empty(2), &cfg()).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.total(), 0.0);
    }

    #[test]
    fn constant_weights_drive_iterate_to_other_endpoint() {
        let g = Graph::path(2);
        let seq = WeightSequence::new(2, vec![vec![1.0, 0.0]; 200]).unwrap();
        let trace = ogd_run(&g, &seq, &cfg()).unwrap();
        let tail = &trace.rows[150..];
        assert!(tail.iter().all(|r| r.action == vec![1] && r.value == 0.0));
    }

    #[test]
    fn weights_above_bound_rejected() {
        let seq = WeightSequence::new(2, vec![vec![2.0, 0.0]]).unwrap();
        assert!(ogd_run(&Graph::path(2), &seq, &cfg()).is_err());
    }

    #[test]
    fn bound_examples() {
        assert!((theorem2_bound(1.0, 4, 100) - 60.0f64).abs() < 1e-12);
        assert_eq!(theorem2_bound(1.0f64, 4, 0), 0.0);
        assert!((theorem2_bound(2.0, 1, 1) - 6.0f64).abs() < 1e-12);
    }

    #[test]
    fn sampled_points_are_feasible() {
        let mut rng = SeededRng::new(6);
        let g = Graph::complete(6);
        for _ in 0..100 {
            let z = sample_feasible_point::<f64>(&g, &mut rng);
            assert!(FractionalPoint::new(z, &g, 0.0).is_ok());
        }
    }

    #[test]
    fn projection_check_on_triangle() {
        let c = check_projection(&Graph::complete(3), &[0.0; 3], &cfg(), 200, &mut SeededRng::new(1)).unwrap();
        assert!(c.infeasibility <= 0.0 && c.optimality_gap <= 1e-9 && c.idempotence_error <= 1e-12, "{c:?}");
    }

    #[test]
    fn step_modes() {
        let p = OgdConfig::new(2.0, StepMode::Paper);
        assert!((p.step(4, 9) - 0.5f64).abs() < 1e-15);
        let s = OgdConfig::new(2.0, StepMode::Scaled);
        assert!((s.step(4, 9) - 0.75f64).abs() < 1e-15);
    }
}
