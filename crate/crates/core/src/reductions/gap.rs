//! Deciding the vertex-cover gap problem with an online min-max learner.

use crate::error::{Error, Result};
use crate::instance::Graph;
use crate::minmax::{is_vertex_cover, minimal_cover_masks, VertexSubset};
use crate::ogd::OgdLearner;
use crate::rng::SeededRng;
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapConfig {
    /// Yes instances have a cover of size at most `A·n`.
    pub a: f64,
    /// No instances have every cover of size at least `B·n`.
    pub b: f64,
    /// The learner's regret is at most `p_coeff·n·T^c_exp`.
    pub p_coeff: f64,
    pub c_exp: f64,
    /// Caps the horizon.
    pub t_override: Option<usize>,
}

impl GapConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.a && self.a < self.b && self.b <= 1.0) {
            return Err(Error::InvalidParameter("need 0 <= A < B <= 1".into()));
        }
        if !(self.p_coeff > 0.0) {
            return Err(Error::InvalidParameter("p_coeff must be positive".into()));
        }
        if self.c_exp == 1.0 {
            return Err(Error::InvalidParameter("regret exponent c = 1 gives no horizon".into()));
        }
        if !(0.0..1.0).contains(&self.c_exp) {
            return Err(Error::InvalidParameter("regret exponent must lie in [0, 1)".into()));
        }
        Ok(())
    }
}

/// `⌈((A·ε)/(2·p(n)·B))^{1/(c−1)}⌉` with `p(n) = p_coeff·n`, saturating at
/// `usize::MAX`.
pub fn gap_horizon(cfg: &GapConfig, eps: f64, n: usize) -> Result<usize> {
    cfg.validate()?;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let base = cfg.a * eps / (2.0 * cfg.p_coeff * n as f64 * cfg.b);
    let t = base.powf(1.0 / (cfg.c_exp - 1.0));
    if !t.is_finite() || t >= usize::MAX as f64 {
        return Ok(usize::MAX);
    }
    // absorb rounding noise so exact powers do not round up
    let nearest = t.round();
    let t = if (t - nearest).abs() <= 1e-9 * nearest.max(1.0) { nearest } else { t.ceil() };
    Ok(t as usize)
}

/// An online min-max vertex-cover algorithm.
pub trait OnlineVcLearner<S> {
    /// The cover for the current round.
    fn play(&mut self) -> Result<VertexSubset>;
    /// Reveals the round's weights and the incurred cost.
    fn feedback(&mut self, w: &[S], cost: S) -> Result<()>;
}

impl<S: Real> OnlineVcLearner<S> for OgdLearner<'_, S> {
    fn play(&mut self) -> Result<VertexSubset> {
        Ok(OgdLearner::play(self))
    }

    fn feedback(&mut self, w: &[S], _cost: S) -> Result<()> {
        self.observe(w)
    }
}

/// Plays the inclusion-minimal cover with the least cumulative cost so far;
/// ties prefer fewer vertices, then the lexicographically smallest set.
#[derive(Debug, Clone)]
pub struct FollowTheLeader<S> {
    covers: Vec<VertexSubset>,
    cumulative: Vec<S>,
}

impl<S: Scalar> FollowTheLeader<S> {
    pub fn new(g: &Graph) -> Result<Self> {
        let mut covers: Vec<VertexSubset> = minimal_cover_masks(g)?.into_iter().map(VertexSubset::from_mask).collect();
        covers.sort_by(|x, y| (x.len(), x.members()).cmp(&(y.len(), y.members())));
        let cumulative = vec![S::zero(); covers.len()];
        Ok(Self { covers, cumulative })
    }
}

impl<S: Scalar> OnlineVcLearner<S> for FollowTheLeader<S> {
    fn play(&mut self) -> Result<VertexSubset> {
        let mut best = 0;
        for (k, c) in self.cumulative.iter().enumerate() {
            if *c < self.cumulative[best] {
                best = k;
            }
        }
        Ok(self.covers[best].clone())
    }

    fn feedback(&mut self, w: &[S], _cost: S) -> Result<()> {
        for (cover, acc) in self.covers.iter().zip(self.cumulative.iter_mut()) {
            *acc += cover.members().iter().fold(S::zero(), |m, &i| m.max_of(w[i]));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapAnswer {
    Yes,
    No,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapOutcome {
    pub answer: GapAnswer,
    /// `min(gap_horizon, T_override)`.
    pub horizon: usize,
    pub rounds_run: usize,
    /// The vertex given weight 1 in each completed round.
    pub hot_vertices: Vec<usize>,
}

/// Each round asks the learner for a cover and answers Yes if it has fewer
/// than `B·n` vertices; otherwise one uniformly random vertex gets weight 1,
/// the rest 0, and the learner sees that row and its cost. No after the
/// horizon. The hot vertices depend on the RNG alone, never on the plays.
pub fn gap_solver<S, L>(g: &Graph, cfg: &GapConfig, eps: f64, learner: &mut L, rng: &mut SeededRng) -> Result<GapOutcome>
where
    S: Scalar,
    L: OnlineVcLearner<S> + ?Sized,
{
    let n = g.n();
    let horizon = gap_horizon(cfg, eps, n.max(1))?.min(cfg.t_override.unwrap_or(usize::MAX));
    let threshold = cfg.b * n as f64;
    let mut hot_vertices = Vec::new();
    if n == 0 {
        return Ok(GapOutcome { answer: GapAnswer::No, horizon, rounds_run: 0, hot_vertices });
    }
    for t in 1..=horizon {
        let played = learner.play().map_err(|e| e.at_round(t))?;
        if !is_vertex_cover(g, &played) {
            return Err(Error::NotACover.at_round(t));
        }
        if (played.len() as f64) < threshold {
            return Ok(GapOutcome { answer: GapAnswer::Yes, horizon, rounds_run: t, hot_vertices });
        }
        let hot = rng.below_usize(n);
        let mut w = vec![S::zero(); n];
        w[hot] = S::one();
        let cost = if played.contains(hot) { S::one() } else { S::zero() };
        learner.feedback(&w, cost).map_err(|e| e.at_round(t))?;
        hot_vertices.push(hot);
    }
    Ok(GapOutcome { answer: GapAnswer::No, horizon, rounds_run: horizon, hot_vertices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ogd::{OgdConfig, StepMode};

    fn cfg(a: f64, b: f64, p: f64, c: f64) -> GapConfig {
        GapConfig { a, b, p_coeff: p, c_exp: c, t_override: None }
    }

    #[test]
    fn horizon_examples() {
        assert_eq!(gap_horizon(&cfg(0.25, 0.5, 1.0, 0.5), 1.0, 1).unwrap(), 16);
        // base 1
        assert_eq!(gap_horizon(&cfg(0.5, 1.0, 0.25, 0.5), 1.0, 1).unwrap(), 1);
        assert!(gap_horizon(&cfg(0.25, 0.5, 1.0, 1.0), 1.0, 1).is_err());
        assert!(gap_horizon(&cfg(0.25, 0.5, 1.0, 0.5), 0.0, 1).is_err());
    }

    #[test]
    fn doubling_eps_quarters_horizon() {
        let c = cfg(0.25, 0.5, 1.0, 0.5);
        let t1 = gap_horizon(&c, 0.5, 1).unwrap();
        let t2 = gap_horizon(&c, 1.0, 1).unwrap();
        assert_eq!((t1, t2), (64, 16));
    }

    #[test]
    fn k4_is_always_no() {
        let g = Graph::complete(4);
        let c = GapConfig { t_override: Some(200), ..cfg(0.25, 0.75, 1.0, 0.5) };
        for seed in 0..10 {
            let mut ftl = FollowTheLeader::<f64>::new(&g).unwrap();
            let out = gap_solver(&g, &c, 1.0, &mut ftl, &mut SeededRng::new(seed)).unwrap();
            assert_eq!(out.answer, GapAnswer::No);
            let mut ogd = OgdLearner::new(&g, OgdConfig::new(1.0, StepMode::Scaled)).unwrap();
            let out = gap_solver(&g, &c, 1.0, &mut ogd, &mut SeededRng::new(seed)).unwrap();
            assert_eq!(out.answer, GapAnswer::No);
        }
    }

    #[test]
    fn star_with_leader_says_yes() {
        let g = Graph::star(5);
        let c = GapConfig { t_override: Some(500), ..cfg(1.0 / 6.0, 0.5, 1.0, 0.5) };
        let yes = (0..100)
            .filter(|&seed| {
                let mut ftl = FollowTheLeader::<f64>::new(&g).unwrap();
                gap_solver(&g, &c, 1.0, &mut ftl, &mut SeededRng::new(seed)).unwrap().answer == GapAnswer::Yes
            })
            .count();
        assert!(yes >= 50, "{yes}");
    }

    #[test]
    fn zero_horizon_is_no() {
        let g = Graph::star(3);
        let c = GapConfig { t_override: Some(0), ..cfg(0.1, 0.5, 1.0, 0.5) };
        let mut ftl = FollowTheLeader::<f64>::new(&g).unwrap();
        let out = gap_solver(&g, &c, 1.0, &mut ftl, &mut SeededRng::new(0)).unwrap();
        assert_eq!((out.answer, out.rounds_run), (GapAnswer::No, 0));
    }

    #[test]
    fn rows_are_oblivious() {
        let g = Graph::complete(5);
        let c = GapConfig { t_override: Some(50), ..cfg(0.1, 0.8, 1.0, 0.5) };
        let mut ftl = FollowTheLeader::<f64>::new(&g).unwrap();
        let a = gap_solver(&g, &c, 1.0, &mut ftl, &mut SeededRng::new(4)).unwrap();
        let mut ogd = OgdLearner::new(&g, OgdConfig::new(1.0, StepMode::Paper)).unwrap();
        let b = gap_solver(&g, &c, 1.0, &mut ogd, &mut SeededRng::new(4)).unwrap();
        assert_eq!(a.hot_vertices.len(), 50);
        assert_eq!(a.hot_vertices, b.hot_vertices);
    }

    struct Lazy;
    impl OnlineVcLearner<f64> for Lazy {
        fn play(&mut self) -> Result<VertexSubset> {
            Ok(VertexSubset::empty())
        }
        fn feedback(&mut self, _: &[f64], _: f64) -> Result<()> {
            Ok(())
        }
    }

    #[test]
    fn non_cover_is_an_error() {
        let c = GapConfig { t_override: Some(5), ..cfg(0.1, 0.5, 1.0, 0.5) };
        let err = gap_solver(&Graph::path(3), &c, 1.0, &mut Lazy, &mut SeededRng::new(0)).unwrap_err();
        assert!(matches!(err, Error::AtRound { round: 1, .. }));
    }
}
