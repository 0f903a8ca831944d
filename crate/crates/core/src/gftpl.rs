//! Generalized follow-the-perturbed-leader over multi-round GKP.
//!
//! The perturbation `a ∈ [0,η]^N` is drawn once and implemented through the
//! distinguisher rounds: round `j` of the distinguisher set, with its
//! profits scaled by `a_j`, is appended to the history the oracle sees.
//! Because those rounds have capacity equal to the total item weight they
//! add `a_j·P` to every set containing item `j` and nothing else.

use crate::error::{Error, Result};
use crate::gkp::{
    brute_oracle, distinguisher_set, gkp_profit, Accuracy, ConvexKnapsack, ItemSet, KnapsackOracle, BRUTE_LIMIT,
};
use crate::instance::{GkpRound, GkpStatic};
use crate::rng::SeededRng;
use crate::scalar::{Real, Scalar};
use crate::trace::{AlgorithmId, RegretTrace};

/// Oracle contract per round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsSchedule<S> {
    /// The oracle answer is within `ε` of the perturbed leader.
    Additive(S),
    /// The oracle answer is at least `(1 − ε′)` times the perturbed leader.
    Fptas(S),
}

impl<S: Scalar> EpsSchedule<S> {
    pub fn accuracy(self) -> Accuracy<S> {
        match self {
            EpsSchedule::Additive(e) => Accuracy::Additive(e),
            EpsSchedule::Fptas(e) => Accuracy::Relative(e),
        }
    }

    fn describe(self) -> String {
        match self {
            EpsSchedule::Additive(e) => format!("additive:{e}"),
            EpsSchedule::Fptas(e) => format!("fptas:{e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GftplConfig<S> {
    /// Number of distinguisher rounds; equals the item count.
    pub n_dist: usize,
    /// Perturbation range.
    pub eta: S,
    pub kappa: S,
    pub delta: S,
    /// Diameter of the translation matrix.
    pub g_gamma: S,
    /// Diameter of the per-round objective.
    pub g_f: S,
    /// Largest per-round payoff.
    pub f_max: S,
    /// Largest translation-matrix entry; also the distinguisher marker profit.
    pub gamma_max: S,
    pub schedule: EpsSchedule<S>,
    /// Random item sets per round checked against the oracle contract;
    /// 0 disables the audit.
    pub audit_samples: usize,
}

impl<S: Scalar> GftplConfig<S> {
    pub fn validate(&self) -> Result<()> {
        let zero = S::zero();
        let bad = |what: &str| Err(Error::InvalidParameter(what.into()));
        if !(self.eta >= zero) {
            return bad("eta must be >= 0");
        }
        if !(self.kappa >= S::one()) {
            return bad("kappa must be >= 1");
        }
        if !(self.delta > zero) {
            return bad("delta must be > 0");
        }
        if !(self.g_gamma >= zero && self.g_f >= zero && self.f_max >= zero) {
            return bad("diameters and F_M must be >= 0");
        }
        if !(self.gamma_max > zero) {
            return bad("marker profit must be > 0");
        }
        match self.schedule {
            EpsSchedule::Additive(e) | EpsSchedule::Fptas(e) if !(e >= zero) => bad("eps must be >= 0"),
            _ => Ok(()),
        }
    }
}

impl<S: Real> GftplConfig<S> {
    /// Parameters for the distinguisher set with marker `P = 1` on an
    /// instance whose per-round item profits lie in `[0, p_max]`:
    /// `κ = 2`, `δ = G_γ = Γ_M = 1`, `F_M = n·p_max`,
    /// `G_f = n·p_max + c·Σw`, additive `ε = T^{-1/2}` and the default `η`.
    pub fn for_gkp(statics: &GkpStatic<S>, p_max: S, horizon: usize) -> Self {
        let n = S::from_usize(statics.n()).unwrap();
        let f_max = n * p_max;
        let g_f = f_max + statics.penalty() * statics.total_weight();
        let eps = default_eps(horizon);
        let (kappa, delta, g_gamma) = (S::one() + S::one(), S::one(), S::one());
        Self {
            n_dist: statics.n(),
            eta: default_eta(kappa, delta, g_gamma, g_f, eps, horizon),
            kappa,
            delta,
            g_gamma,
            g_f,
            f_max,
            gamma_max: S::one(),
            schedule: EpsSchedule::Additive(eps),
            audit_samples: 0,
        }
    }

    /// Switches to the multiplicative contract with `ε′` from
    /// [`epsilon_prime`] for additive target `eps` over `horizon` rounds.
    pub fn with_fptas_schedule(mut self, eps: S, horizon: usize) -> Result<Self> {
        self.schedule = EpsSchedule::Fptas(epsilon_prime(eps, horizon, &self)?);
        Ok(self)
    }
}

/// `T^{-1/2}`, or 1 when `T = 0`.
pub fn default_eps<S: Real>(horizon: usize) -> S {
    S::from_usize(horizon.max(1)).unwrap().sqrt().recip()
}

/// `√(κ·G_f·(G_f+2ε)·T/(δ·G_γ))`; 0 when `G_γ = 0`.
pub fn default_eta<S: Real>(kappa: S, delta: S, g_gamma: S, g_f: S, eps: S, horizon: usize) -> S {
    if g_gamma == S::zero() {
        return S::zero();
    }
    let t = S::from_usize(horizon).unwrap();
    let two = S::one() + S::one();
    (kappa * g_f * (g_f + two * eps) * t / (delta * g_gamma)).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationVector<S> {
    a: Vec<S>,
}

impl<S: Scalar> PerturbationVector<S> {
    pub fn new(a: Vec<S>, eta: S) -> Result<Self> {
        if let Some(j) = a.iter().position(|v| !(*v >= S::zero() && *v <= eta)) {
            return Err(Error::InvalidParameter(format!("perturbation component {j} outside [0, eta]")));
        }
        Ok(Self { a })
    }

    pub fn as_slice(&self) -> &[S] {
        &self.a
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// `N` independent uniform draws on `[0, η]`.
pub fn draw_perturbation<S: Scalar>(cfg: &GftplConfig<S>, rng: &mut SeededRng) -> PerturbationVector<S> {
    let a = (0..cfg.n_dist)
        .map(|_| {
            let u = S::from_f64(rng.next_f64()).unwrap_or_else(S::zero);
            (cfg.eta * u).min_of(cfg.eta)
        })
        .collect();
    PerturbationVector { a }
}

/// `ε′ = ε/(T·F_M + N·η·Γ_M)`.
pub fn epsilon_prime<S: Scalar>(eps: S, horizon: usize, cfg: &GftplConfig<S>) -> Result<S> {
    let t = S::from_usize_exact(horizon);
    let n = S::from_usize_exact(cfg.n_dist);
    let denom = t * cfg.f_max + n * cfg.eta * cfg.gamma_max;
    if denom == S::zero() {
        return Err(Error::ZeroDenominator("T·F_M + N·η·Γ_M"));
    }
    Ok(eps / denom)
}

/// `N·√(κ·G_f·G_γ·(G_f+2ε)/δ·T) + ε·T`.
pub fn theorem3_bound<S: Real>(cfg: &GftplConfig<S>, eps: S, horizon: usize) -> S {
    let t = S::from_usize(horizon).unwrap();
    let n = S::from_usize(cfg.n_dist).unwrap();
    let two = S::one() + S::one();
    n * (cfg.kappa * cfg.g_f * cfg.g_gamma * (cfg.g_f + two * eps) / cfg.delta * t).sqrt() + eps * t
}

/// Runs GFTPL over `rounds`. Round `t` asks the oracle for a maximizer of
/// the history `y^1..y^{t−1}` plus the scaled distinguisher rounds, plays
/// it, and is credited `profit(x^t, y^t)`. The perturbed objective of the
/// played set is kept on each row.
///
/// For `n <= BRUTE_LIMIT` the trace also carries the best static set's
/// total and per-round cumulative payoff.
pub fn gftpl_run<S, O>(
    statics: &GkpStatic<S>,
    rounds: &[GkpRound<S>],
    oracle: &O,
    cfg: &GftplConfig<S>,
    rng: &mut SeededRng,
) -> Result<RegretTrace<S>>
where
    S: Scalar,
    O: KnapsackOracle<S> + ?Sized,
{
    cfg.validate()?;
    if cfg.n_dist != statics.n() {
        return Err(Error::DimensionMismatch { expected: statics.n(), found: cfg.n_dist });
    }
    let a = draw_perturbation(cfg, rng);
    let mut ck = ConvexKnapsack::new(statics);
    for (round, aj) in distinguisher_set(statics, cfg.gamma_max)?.iter().zip(a.as_slice()) {
        ck.push_scaled_round(round, *aj)?;
    }

    let mut trace = RegretTrace::new(AlgorithmId::GftplGkp);
    trace.meta.seed = Some(rng.seed());
    trace.meta.perturbation = Some(a.as_slice().iter().map(|v| v.to_f64_lossy()).collect());
    trace.meta.config = vec![
        ("eta".into(), cfg.eta.to_string()),
        ("schedule".into(), cfg.schedule.describe()),
    ];

    let accuracy = cfg.schedule.accuracy();
    let mut audit_violations = 0usize;
    for (idx, y) in rounds.iter().enumerate() {
        let t = idx + 1;
        let (set, _) = oracle.maximize(&ck, accuracy).map_err(|e| e.at_round(t))?;
        let perturbed = ck.value(&set).map_err(|e| e.at_round(t))?;
        if matches!(cfg.schedule, EpsSchedule::Fptas(_)) && perturbed < S::zero() {
            return Err(Error::NegativePayoff(perturbed.to_f64_lossy()).at_round(t));
        }
        if cfg.audit_samples > 0 {
            audit_violations += audit_round(&ck, perturbed, cfg.schedule, cfg.audit_samples, rng)?;
        }
        let payoff = gkp_profit(&set, statics, y).map_err(|e| e.at_round(t))?;
        trace.push(set.members().to_vec(), payoff).perturbed_objective = Some(perturbed);
        ck.push_round(y).map_err(|e| e.at_round(t))?;
    }
    if cfg.audit_samples > 0 {
        trace.meta.config.push(("audit_violations".into(), audit_violations.to_string()));
    }
    if statics.n() <= BRUTE_LIMIT {
        attach_benchmark(&mut trace, statics, rounds)?;
    }
    Ok(trace)
}

/// Counts sampled item sets that beat the played set by more than the
/// schedule allows.
fn audit_round<S: Scalar>(
    ck: &ConvexKnapsack<S>,
    played: S,
    schedule: EpsSchedule<S>,
    samples: usize,
    rng: &mut SeededRng,
) -> Result<usize> {
    let n = ck.n();
    let mut violations = 0;
    for _ in 0..samples {
        let set = ItemSet::new((0..n).filter(|_| rng.next_u64() >> 63 == 1));
        let v = ck.value(&set)?;
        let ok = match schedule {
            EpsSchedule::Additive(e) => played >= v - e,
            EpsSchedule::Fptas(e) => played >= (S::one() - e) * v,
        };
        violations += usize::from(!ok);
    }
    Ok(violations)
}

/// Fills the hindsight-best static set's total and its per-round running
/// payoff.
pub fn attach_benchmark<S: Scalar>(trace: &mut RegretTrace<S>, statics: &GkpStatic<S>, rounds: &[GkpRound<S>]) -> Result<()> {
    let (best, value) = brute_oracle(statics, rounds)?;
    let mut acc = S::zero();
    let mut cumulative = Vec::with_capacity(rounds.len());
    for y in rounds {
        acc += gkp_profit(&best, statics, y)?;
        cumulative.push(acc);
    }
    trace.benchmark = Some(value);
    trace.benchmark_cumulative = Some(cumulative);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkp::{BruteOracle, FptasOracle};
    use crate::instance::gen_random_gkp;

    fn cfg(n: usize, eta: f64) -> GftplConfig<f64> {
        GftplConfig {
            n_dist: n,
            eta,
            kappa: 2.0,
            delta: 1.0,
            g_gamma: 1.0,
            g_f: 1.0,
            f_max: 1.0,
            gamma_max: 1.0,
            schedule: EpsSchedule::Additive(0.1),
            audit_samples: 0,
        }
    }

    #[test]
    fn perturbation_examples() {
        let mut rng = SeededRng::new(3);
        assert!(draw_perturbation(&cfg(4, 0.0), &mut rng).as_slice().iter().all(|v| *v == 0.0));

        let a = draw_perturbation(&cfg(3, 1.0), &mut SeededRng::new(9));
        let b = draw_perturbation(&cfg(3, 1.0), &mut SeededRng::new(9));
        assert_eq!(a, b);

        let big = draw_perturbation(&cfg(10_000, 1.0), &mut SeededRng::new(1));
        let mean = big.as_slice().iter().sum::<f64>() / 10_000.0;
        assert!((mean - 0.5).abs() < 0.02, "{mean}");
        assert!(big.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn epsilon_prime_examples() {
        let mut c = cfg(2, 1.0);
        assert!((epsilon_prime(0.1, 100, &c).unwrap() - 0.1 / 102.0).abs() < 1e-15);
        assert_eq!(epsilon_prime(0.0, 100, &c).unwrap(), 0.0);
        c.n_dist = 1;
        c.eta = 0.0;
        let e = epsilon_prime(1.0 / 100.0, 10_000, &c).unwrap();
        assert!((e - 1e-6).abs() < 1e-18);
        c.f_max = 0.0;
        assert!(matches!(epsilon_prime(0.1, 10, &c), Err(Error::ZeroDenominator(_))));
    }

    #[test]
    fn bound_examples() {
        let c = cfg(2, 1.0);
        let b = theorem3_bound(&c, 0.1, 100);
        assert!((b - (2.0 * 240f64.sqrt() + 10.0)).abs() < 1e-12);
        assert!((b - 40.98).abs() < 0.01);
        assert_eq!(theorem3_bound(&c, 0.1, 0), 0.0);
        let one = GftplConfig { n_dist: 1, kappa: 1.0, ..c };
        assert!((theorem3_bound(&one, 0.0, 4) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn default_eta_balances_terms() {
        let eta: f64 = default_eta(2.0, 1.0, 1.0, 1.0, 0.0, 8);
        assert!((eta - 4.0).abs() < 1e-12);
        assert_eq!(default_eta(2.0, 1.0, 0.0, 1.0, 0.0, 8), 0.0f64);
    }

    #[test]
    fn config_validation() {
        assert!(GftplConfig { eta: -1.0, ..cfg(2, 1.0) }.validate().is_err());
        assert!(GftplConfig { kappa: 0.5, ..cfg(2, 1.0) }.validate().is_err());
        assert!(GftplConfig { delta: 0.0, ..cfg(2, 1.0) }.validate().is_err());
        let s = GkpStatic::new(vec![1.0, 1.0, 1.0], 1.0).unwrap();
        let err = gftpl_run(&s, &[], &BruteOracle, &cfg(2, 1.0), &mut SeededRng::new(0)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn empty_run() {
        let s = GkpStatic::new(vec![1.0, 2.0], 1.0).unwrap();
        let t = gftpl_run(&s, &[], &BruteOracle, &cfg(2, 1.0), &mut SeededRng::new(0)).unwrap();
        assert!(t.is_empty());
        assert_eq!(t.benchmark, Some(0.0));
        assert_eq!(t.meta.perturbation.as_ref().map(Vec::len), Some(2));
    }

    #[test]
    fn zero_eta_brute_is_follow_the_leader() {
        let mut rng = SeededRng::new(5);
        for _ in 0..20 {
            let n = 1 + rng.below_usize(10);
            let set = gen_random_gkp::<f64>(n, 12, &mut rng).unwrap();
            let trace = gftpl_run(&set.statics, &set.rounds, &BruteOracle, &cfg(n, 0.0), &mut rng).unwrap();
            for (t, row) in trace.rows.iter().enumerate() {
                let (leader, _) = brute_oracle(&set.statics, &set.rounds[..t]).unwrap();
                assert_eq!(row.action, leader.members());
            }
        }
    }

    #[test]
    fn constant_adversary_regret_at_most_diameter() {
        let s = GkpStatic::new(vec![1.0, 2.0, 0.5], 1.5).unwrap();
        let y = GkpRound::new(vec![0.6, 1.0, 0.2], 1.8).unwrap();
        let rounds = vec![y; 50];
        let trace = gftpl_run(&s, &rounds, &BruteOracle, &cfg(3, 0.0), &mut SeededRng::new(1)).unwrap();
        let (_, best_round) = brute_oracle(&s, &rounds[..1]).unwrap();
        for row in &trace.rows[1..] {
            assert_eq!(row.value, best_round);
        }
        let regret = trace.benchmark.unwrap() - trace.total();
        // G_f for this instance: best 1.0 vs worst 1.8 − 1.5·1.7
        assert!(regret <= 1.0 + 1.5 * 1.7 + 1e-12);
    }

    #[test]
    fn perturbation_recorded_and_applied() {
        let s = GkpStatic::new(vec![1.0, 1.0], 0.0).unwrap();
        let trace = gftpl_run(&s, &[GkpRound::new(vec![0.0, 0.0], 1.0).unwrap()], &BruteOracle, &cfg(2, 3.0), &mut SeededRng::new(2)).unwrap();
        let a = trace.meta.perturbation.clone().unwrap();
        let row = &trace.rows[0];
        // c = 0: every positively perturbed item is taken
        assert_eq!(row.action, vec![0, 1]);
        assert!((row.perturbed_objective.unwrap() - (a[0] + a[1])).abs() < 1e-12);
    }

    #[test]
    fn fptas_schedule_audit_is_clean() {
        let mut rng = SeededRng::new(11);
        let set = gen_random_gkp::<f64>(5, 30, &mut rng).unwrap();
        let c = GftplConfig::for_gkp(&set.statics, 1.0, 30).with_fptas_schedule(0.1, 30).unwrap();
        let c = GftplConfig { audit_samples: 100, ..c };
        let oracle = FptasOracle { cell_cap: 50_000_000 };
        let trace = gftpl_run(&set.statics, &set.rounds, &oracle, &c, &mut rng).unwrap();
        assert_eq!(trace.len(), 30);
        let audit = trace.meta.config.iter().find(|(k, _)| k == "audit_violations").unwrap();
        assert_eq!(audit.1, "0");
        assert!(trace.rows.iter().all(|r| r.perturbed_objective.unwrap() >= 0.0));
    }

    #[test]
    fn oracle_errors_carry_round() {
        let s = GkpStatic::new(vec![1.0; 21], 1.0).unwrap();
        let mut c = cfg(21, 0.0);
        c.n_dist = 21;
        let rounds = vec![GkpRound::new(vec![1.0; 21], 1.0).unwrap()];
        let err = gftpl_run(&s, &rounds, &BruteOracle, &c, &mut SeededRng::new(0)).unwrap_err();
        assert!(matches!(err, Error::AtRound { round: 1, .. }));
    }
}
