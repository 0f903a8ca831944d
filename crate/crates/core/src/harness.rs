//! Regret accounting, configured experiment runs, bound comparison and
//! trace files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gftpl::{default_eps, default_eta, gftpl_run, theorem3_bound, EpsSchedule, GftplConfig};
use crate::gkp::{BruteOracle, FptasOracle, KnapsackOracle};
use crate::instance::{gen_onehot_weights, gen_random_gkp, gen_random_graph, gen_uniform_weights, GkpSet, Graph, WeightSequence};
use crate::minmax::{best_static_vc_hindsight, minmax_value};
use crate::ogd::{ogd_run, theorem2_bound, OgdConfig, OgdLearner, StepMode};
use crate::reductions::{gap_solver, FollowTheLeader, GapAnswer, GapConfig, GapOutcome, OnlineVcLearner};
use crate::rng::SeededRng;
use crate::scalar::{Real, Scalar};
use crate::trace::{AlgorithmId, Objective, RegretTrace};

/// `α`-regret of a trace against its benchmark: `Σ cost − α·OPT` when
/// minimizing (`α >= 1`), `α·OPT − Σ payoff` when maximizing
/// (`0 < α <= 1`). An empty trace has regret 0.
pub fn compute_regret<S: Scalar>(trace: &RegretTrace<S>, alpha: S) -> Result<S> {
    let objective = trace.algorithm.objective();
    let alpha_ok = match objective {
        Objective::Minimize => alpha >= S::one(),
        Objective::Maximize => alpha > S::zero() && alpha <= S::one(),
    };
    if !alpha_ok {
        return Err(Error::InvalidParameter(format!("alpha {alpha} not allowed for {}", trace.algorithm.as_str())));
    }
    if trace.is_empty() {
        return Ok(S::zero());
    }
    let opt = trace.benchmark.ok_or(Error::MissingBenchmark)?;
    Ok(match objective {
        Objective::Minimize => trace.total() - alpha * opt,
        Objective::Maximize => alpha * opt - trace.total(),
    })
}

/// Sets the benchmark of an OGD trace to the best static cover in
/// hindsight, with its per-round running cost.
pub fn attach_vc_benchmark<S: Scalar>(trace: &mut RegretTrace<S>, g: &Graph, seq: &WeightSequence<S>) -> Result<()> {
    let (best, cost) = best_static_vc_hindsight(g, seq)?;
    let mut acc = S::zero();
    let mut cumulative = Vec::with_capacity(seq.len());
    for w in seq.rows() {
        acc += minmax_value(&best, w)?;
        cumulative.push(acc);
    }
    trace.benchmark = Some(cost);
    trace.benchmark_cumulative = Some(cumulative);
    Ok(())
}

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSource {
    File(PathBuf),
    /// Erdős–Rényi `G(n, p)` drawn per seed.
    Random { n: usize, p: f64 },
}

/// Weight sequence fed to OGD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AdversarySpec {
    /// I.i.d. uniform on `[0, w_max]`.
    Uniform { w_max: f64 },
    /// One uniformly chosen vertex with weight 1 per round.
    Onehot,
    /// The first `T` rows of a weight file.
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GkpSource {
    /// Static part and the first `T` rounds of a GKP file.
    File(PathBuf),
    /// Random instance with `n` items drawn per seed.
    Random { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepModeName {
    Paper,
    Scaled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OgdSection {
    #[serde(default = "scaled")]
    pub step_mode: StepModeName,
    /// Upper bound `W` on every weight.
    #[serde(default = "one")]
    pub w_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleName {
    Additive,
    Fptas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleName {
    Brute,
    Fptas,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GftplSection {
    #[serde(default = "additive")]
    pub schedule: ScheduleName,
    #[serde(default = "brute")]
    pub oracle: OracleName,
    /// Additive target; defaults to `T^{-1/2}`.
    #[serde(default)]
    pub eps: Option<f64>,
    /// Perturbation range; defaults to the balancing value.
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub audit_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerName {
    /// Follow the leader over minimal covers.
    Ftl,
    Ogd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapSection {
    pub a: f64,
    pub b: f64,
    pub p_coeff: f64,
    pub c_exp: f64,
    #[serde(default = "one")]
    pub eps: f64,
    #[serde(default)]
    pub t_override: Option<usize>,
    #[serde(default = "ftl")]
    pub learner: LearnerName,
}

fn one() -> f64 {
    1.0
}
fn scaled() -> StepModeName {
    StepModeName::Scaled
}
fn additive() -> ScheduleName {
    ScheduleName::Additive
}
fn brute() -> OracleName {
    OracleName::Brute
}
fn ftl() -> LearnerName {
    LearnerName::Ftl
}

/// A batch of runs: every listed horizon crossed with every seed.
///
/// Seeds are `seeds` if given, else `base_seed + s` for `s < replicas`.
/// Each run draws its random instance and adversary from a fresh
/// [`SeededRng`] for its seed, so `(config, seed)` fixes every output byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmId,
    pub horizons: Vec<usize>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub base_seed: Option<u64>,
    #[serde(default)]
    pub replicas: Option<u64>,
    #[serde(default)]
    pub graph: Option<GraphSource>,
    #[serde(default)]
    pub adversary: Option<AdversarySpec>,
    #[serde(default)]
    pub ogd: Option<OgdSection>,
    #[serde(default)]
    pub gkp: Option<GkpSource>,
    #[serde(default)]
    pub gftpl: Option<GftplSection>,
    #[serde(default)]
    pub gap: Option<GapSection>,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Parses a config file; relative paths inside it are taken relative
    /// to the file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg: Self = serde_json::from_str(&fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(GraphSource::File(p)) = &mut cfg.graph {
            fix(p);
        }
        if let Some(AdversarySpec::File(p)) = &mut cfg.adversary {
            fix(p);
        }
        if let Some(GkpSource::File(p)) = &mut cfg.gkp {
            fix(p);
        }
        fix(&mut cfg.output_dir);
        Ok(cfg)
    }

    pub fn seed_list(&self) -> Result<Vec<u64>> {
        if !self.seeds.is_empty() {
            return Ok(self.seeds.clone());
        }
        match (self.base_seed, self.replicas) {
            (Some(base), Some(r)) => Ok((0..r).map(|s| base.wrapping_add(s)).collect()),
            _ => Err(Error::InvalidParameter("give `seeds` or both `base_seed` and `replicas`".into())),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.seed_list()?;
        if self.horizons.is_empty() {
            return Err(Error::InvalidParameter("`horizons` is empty".into()));
        }
        let missing = |what: &str| Err(Error::InvalidParameter(format!("{} needs `{what}`", self.algorithm.as_str())));
        match self.algorithm {
            AlgorithmId::OgdVc if self.graph.is_none() => missing("graph"),
            AlgorithmId::OgdVc if self.adversary.is_none() => missing("adversary"),
            AlgorithmId::GftplGkp if self.gkp.is_none() => missing("gkp"),
            AlgorithmId::GapSolver if self.graph.is_none() => missing("graph"),
            AlgorithmId::GapSolver if self.gap.is_none() => missing("gap"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed: u64,
    pub horizon: usize,
    /// Cumulative cost or payoff.
    pub total: f64,
    pub benchmark: Option<f64>,
    pub regret: Option<f64>,
    pub bound: Option<f64>,
    /// `yes` or `no` for gap-solver runs.
    pub answer: Option<String>,
    pub trace_file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HorizonSummary {
    pub horizon: usize,
    pub runs: usize,
    pub mean_regret: f64,
    pub max_regret: f64,
    pub mean_bound: f64,
    /// `mean_regret / T`, 0 when `T = 0`.
    pub regret_per_round: f64,
    /// Fraction of gap-solver runs answering Yes.
    pub yes_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub algorithm: AlgorithmId,
    /// Regret multiplier: 2 for OGD, 1 for GFTPL.
    pub alpha: f64,
    pub runs: Vec<RunSummary>,
    pub horizons: Vec<HorizonSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub seed: Option<u64>,
    pub horizon: usize,
    pub regret: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub per_seed: Vec<BoundCheck>,
    /// Seed-averaged regret against the seed-averaged bound, per horizon.
    pub mean: Vec<BoundCheck>,
    /// Whether mean regret per round never increases with `T`; absent with
    /// fewer than two horizons.
    pub vanishing_regret: Option<bool>,
    /// Checks that decide `passed`: every per-seed check for OGD (its bound
    /// is deterministic), every mean check for GFTPL (its bound holds in
    /// expectation).
    pub violations: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub summary: ExperimentSummary,
    pub bounds: BoundReport,
}

pub fn within_bound(regret: f64, bound: f64) -> bool {
    regret <= bound
}

/// Compares empirical regret with the matching theorem bound.
pub fn compare_bounds(summary: &ExperimentSummary) -> BoundReport {
    let per_seed: Vec<BoundCheck> = summary
        .runs
        .iter()
        .filter_map(|r| {
            let (regret, bound) = (r.regret?, r.bound?);
            Some(BoundCheck { seed: Some(r.seed), horizon: r.horizon, regret, bound, pass: within_bound(regret, bound) })
        })
        .collect();
    let mean: Vec<BoundCheck> = summary
        .horizons
        .iter()
        .filter(|h| h.runs > 0 && summary.algorithm != AlgorithmId::GapSolver)
        .map(|h| BoundCheck {
            seed: None,
            horizon: h.horizon,
            regret: h.mean_regret,
            bound: h.mean_bound,
            pass: within_bound(h.mean_regret, h.mean_bound),
        })
        .collect();
    let vanishing_regret = (summary.horizons.len() >= 2 && summary.algorithm != AlgorithmId::GapSolver).then(|| {
        let mut hs: Vec<&HorizonSummary> = summary.horizons.iter().collect();
        hs.sort_by_key(|h| h.horizon);
        hs.windows(2).all(|w| w[1].regret_per_round <= w[0].regret_per_round)
    });
    let deciding: &[BoundCheck] = match summary.algorithm {
        AlgorithmId::OgdVc => &per_seed,
        AlgorithmId::GftplGkp => &mean,
        AlgorithmId::GapSolver => &[],
    };
    let violations = deciding.iter().filter(|c| !c.pass).count();
    BoundReport { per_seed, mean, vanishing_regret, violations, passed: violations == 0 }
}

/// Runs every `(horizon, seed)` pair, writes one trace CSV per run and
/// `summary.json` into `output_dir`, and returns the summary with its bound
/// report. Seeds run concurrently; outputs do not depend on scheduling.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    let seeds = cfg.seed_list()?;
    fs::create_dir_all(&cfg.output_dir)?;
    let jobs: Vec<(usize, u64)> = cfg.horizons.iter().flat_map(|&t| seeds.iter().map(move |&s| (t, s))).collect();

    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len().max(1));
    let mut results: Vec<Option<Result<(RunSummary, String)>>> = (0..jobs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = jobs.len().div_ceil(workers).max(1);
        for (job_chunk, out_chunk) in jobs.chunks(chunk).zip(results.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (&(t, seed), slot) in job_chunk.iter().zip(out_chunk.iter_mut()) {
                    *slot = Some(run_one(cfg, t, seed).map_err(|e| e.at_seed(seed)));
                }
            });
        }
    });

    let mut runs = Vec::with_capacity(jobs.len());
    for r in results {
        let (run, csv) = r.expect("every job ran")?;
        fs::write(cfg.output_dir.join(&run.trace_file), csv)?;
        runs.push(run);
    }
    let summary = summarize(cfg.algorithm, &cfg.horizons, runs);
    let outcome = ExperimentOutcome { bounds: compare_bounds(&summary), summary };
    let mut json = serde_json::to_string_pretty(&outcome)?;
    json.push('\n');
    fs::write(cfg.output_dir.join("summary.json"), json)?;
    Ok(outcome)
}

fn summarize(algorithm: AlgorithmId, horizons: &[usize], runs: Vec<RunSummary>) -> ExperimentSummary {
    let alpha = if algorithm == AlgorithmId::OgdVc { 2.0 } else { 1.0 };
    let horizons = horizons
        .iter()
        .map(|&t| {
            let at: Vec<&RunSummary> = runs.iter().filter(|r| r.horizon == t).collect();
            let k = at.len().max(1) as f64;
            let regrets: Vec<f64> = at.iter().map(|r| r.regret.unwrap_or(0.0)).collect();
            let mean_regret = regrets.iter().sum::<f64>() / k;
            let yes_fraction = (algorithm == AlgorithmId::GapSolver)
                .then(|| at.iter().filter(|r| r.answer.as_deref() == Some("yes")).count() as f64 / k);
            HorizonSummary {
                horizon: t,
                runs: at.len(),
                mean_regret,
                max_regret: if at.is_empty() { 0.0 } else { regrets.iter().copied().fold(f64::NEG_INFINITY, f64::max) },
                mean_bound: at.iter().map(|r| r.bound.unwrap_or(0.0)).sum::<f64>() / k,
                regret_per_round: if t == 0 { 0.0 } else { mean_regret / t as f64 },
                yes_fraction,
            }
        })
        .collect();
    ExperimentSummary { algorithm, alpha, runs, horizons }
}

fn trace_name(algorithm: AlgorithmId, horizon: usize, seed: u64) -> String {
    format!("{}_T{horizon}_seed{seed}.csv", algorithm.as_str())
}

fn load_graph(src: &GraphSource, rng: &mut SeededRng) -> Result<Graph> {
    match src {
        GraphSource::File(p) => Graph::parse(&fs::read_to_string(p)?),
        GraphSource::Random { n, p } => gen_random_graph(*n, *p, rng),
    }
}

fn run_one(cfg: &ExperimentConfig, horizon: usize, seed: u64) -> Result<(RunSummary, String)> {
    let mut rng = SeededRng::new(seed);
    let trace_file = trace_name(cfg.algorithm, horizon, seed);
    let graph = cfg.graph.as_ref().map(|g| load_graph(g, &mut rng)).transpose()?;
    match cfg.algorithm {
        AlgorithmId::OgdVc => {
            let g = graph.expect("validated");
            let sec = cfg.ogd.clone().unwrap_or(OgdSection { step_mode: StepModeName::Scaled, w_bound: 1.0 });
            let seq = match cfg.adversary.as_ref().expect("validated") {
                AdversarySpec::Uniform { w_max } => gen_uniform_weights(g.n(), horizon, *w_max, &mut rng)?,
                AdversarySpec::Onehot => gen_onehot_weights(g.n(), horizon, &mut rng)?,
                AdversarySpec::File(p) => {
                    let all = WeightSequence::<f64>::parse(&fs::read_to_string(p)?)?;
                    if all.len() < horizon {
                        return Err(Error::InvalidParameter(format!("weight file has {} rows, need {horizon}", all.len())));
                    }
                    WeightSequence::new(all.n(), all.rows()[..horizon].to_vec())?
                }
            };
            let mode = match sec.step_mode {
                StepModeName::Paper => StepMode::Paper,
                StepModeName::Scaled => StepMode::Scaled,
            };
            let ocfg = OgdConfig::new(sec.w_bound, mode);
            let mut trace = ogd_run(&g, &seq, &ocfg)?;
            trace.meta.seed = Some(seed);
            attach_vc_benchmark(&mut trace, &g, &seq)?;
            let regret = compute_regret(&trace, 2.0)?;
            let bound = theorem2_bound(sec.w_bound, g.n(), horizon);
            let csv = ogd_trace_csv(&trace, g.n(), sec.w_bound);
            let run = RunSummary {
                seed,
                horizon,
                total: trace.total(),
                benchmark: trace.benchmark,
                regret: Some(regret),
                bound: Some(bound),
                answer: None,
                trace_file,
            };
            Ok((run, csv))
        }
        AlgorithmId::GftplGkp => {
            let (set, p_max) = match cfg.gkp.as_ref().expect("validated") {
                GkpSource::File(p) => {
                    let all = GkpSet::<f64>::from_json(&fs::read_to_string(p)?)?;
                    if all.rounds.len() < horizon {
                        return Err(Error::InvalidParameter(format!("GKP file has {} rounds, need {horizon}", all.rounds.len())));
                    }
                    let p_max = all.rounds.iter().flat_map(|r| r.profits().iter().copied()).fold(0.0, f64::max);
                    (GkpSet::new(all.statics, all.rounds[..horizon].to_vec())?, p_max)
                }
                GkpSource::Random { n } => (gen_random_gkp::<f64>(*n, horizon, &mut rng)?, 1.0),
            };
            let sec = cfg.gftpl.clone().unwrap_or(GftplSection {
                schedule: ScheduleName::Additive,
                oracle: OracleName::Brute,
                eps: None,
                eta: None,
                audit_samples: 0,
            });
            let (gcfg, eps) = gftpl_config(&set, p_max, horizon, &sec)?;
            let oracle: Box<dyn KnapsackOracle<f64>> = match sec.oracle {
                OracleName::Brute => Box::new(BruteOracle),
                OracleName::Fptas => Box::new(FptasOracle::default()),
            };
            let trace = gftpl_run(&set.statics, &set.rounds, oracle.as_ref(), &gcfg, &mut rng)?;
            let regret = compute_regret(&trace, 1.0)?;
            let bound = theorem3_bound(&gcfg, eps, horizon);
            let csv = gftpl_trace_csv(&trace, &gcfg, eps);
            let run = RunSummary {
                seed,
                horizon,
                total: trace.total(),
                benchmark: trace.benchmark,
                regret: Some(regret),
                bound: Some(bound),
                answer: None,
                trace_file,
            };
            Ok((run, csv))
        }
        AlgorithmId::GapSolver => {
            let g = graph.expect("validated");
            let sec = cfg.gap.clone().expect("validated");
            let t_cap = sec.t_override.map_or(horizon, |o| o.min(horizon));
            let gcfg = GapConfig { a: sec.a, b: sec.b, p_coeff: sec.p_coeff, c_exp: sec.c_exp, t_override: Some(t_cap) };
            let mut learner: Box<dyn OnlineVcLearner<f64>> = match sec.learner {
                LearnerName::Ftl => Box::new(FollowTheLeader::new(&g)?),
                LearnerName::Ogd => Box::new(OgdLearner::new(&g, OgdConfig::new(1.0, StepMode::Scaled))?),
            };
            let out = gap_solver(&g, &gcfg, sec.eps, learner.as_mut(), &mut rng)?;
            let answer = if out.answer == GapAnswer::Yes { "yes" } else { "no" };
            let run = RunSummary {
                seed,
                horizon,
                total: out.rounds_run as f64,
                benchmark: None,
                regret: None,
                bound: None,
                answer: Some(answer.into()),
                trace_file,
            };
            Ok((run, gap_trace_csv(&out)))
        }
    }
}

/// GFTPL parameters for an experiment and the additive `ε` its bound uses.
fn gftpl_config(set: &GkpSet<f64>, p_max: f64, horizon: usize, sec: &GftplSection) -> Result<(GftplConfig<f64>, f64)> {
    let mut cfg = GftplConfig::for_gkp(&set.statics, p_max, horizon);
    let eps = sec.eps.unwrap_or_else(|| default_eps(horizon));
    cfg.eta = sec.eta.unwrap_or_else(|| default_eta(cfg.kappa, cfg.delta, cfg.g_gamma, cfg.g_f, eps, horizon));
    cfg.schedule = EpsSchedule::Additive(eps);
    cfg.audit_samples = sec.audit_samples;
    if sec.schedule == ScheduleName::Fptas {
        cfg = cfg.with_fptas_schedule(eps, horizon)?;
    }
    Ok((cfg, eps))
}

/// Columns `t, played_set, int_cost, frac_cost, cum_int, cum_frac,
/// bound_additive`, where the last is `3W√(n·t)`.
pub fn ogd_trace_csv<S: Real>(trace: &RegretTrace<S>, n: usize, w_bound: S) -> String {
    let mut out = String::from("t,played_set,int_cost,frac_cost,cum_int,cum_frac,bound_additive\n");
    let mut cum_frac = S::zero();
    for r in &trace.rows {
        let frac = r.fractional.unwrap_or_else(S::zero);
        cum_frac += frac;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.t,
            join_set(&r.action),
            r.value.to_decimal(),
            frac.to_decimal(),
            r.cumulative.to_decimal(),
            cum_frac.to_decimal(),
            theorem2_bound(w_bound, n, r.t).to_decimal()
        );
    }
    out
}

/// Columns `t, played_set, payoff, cum_payoff, best_static_cum, regret,
/// theorem3_bound`; the benchmark columns are empty without a benchmark.
pub fn gftpl_trace_csv<S: Real>(trace: &RegretTrace<S>, cfg: &GftplConfig<S>, eps: S) -> String {
    let mut out = String::from("t,played_set,payoff,cum_payoff,best_static_cum,regret,theorem3_bound\n");
    for (i, r) in trace.rows.iter().enumerate() {
        let best = trace.benchmark_cumulative.as_ref().map(|b| b[i]);
        let (best_s, regret_s) = match best {
            Some(b) => (b.to_decimal(), (b - r.cumulative).to_decimal()),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.t,
            join_set(&r.action),
            r.value.to_decimal(),
            r.cumulative.to_decimal(),
            best_s,
            regret_s,
            theorem3_bound(cfg, eps, r.t).to_decimal()
        );
    }
    out
}

/// Columns `t, hot_vertex` for the completed rounds.
pub fn gap_trace_csv(out: &GapOutcome) -> String {
    let mut s = String::from("t,hot_vertex\n");
    for (i, v) in out.hot_vertices.iter().enumerate() {
        let _ = writeln!(s, "{},{v}", i + 1);
    }
    s
}

fn join_set(items: &[usize]) -> String {
    let parts: Vec<String> = items.iter().map(|v| v.to_string()).collect();
    parts.join(";")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(alg: AlgorithmId, values: &[f64], bench: Option<f64>) -> RegretTrace<f64> {
        let mut t = RegretTrace::new(alg);
        for v in values {
            t.push(vec![], *v);
        }
        t.benchmark = bench;
        t
    }

    #[test]
    fn regret_examples() {
        assert_eq!(compute_regret(&trace(AlgorithmId::OgdVc, &[], None), 1.0).unwrap(), 0.0);
        let t = trace(AlgorithmId::OgdVc, &[4.0, 6.0], Some(7.0));
        assert_eq!(compute_regret(&t, 1.0).unwrap(), 3.0);
        assert_eq!(compute_regret(&t, 2.0).unwrap(), -4.0);
        let p = trace(AlgorithmId::GftplGkp, &[4.0, 6.0], Some(12.0));
        assert_eq!(compute_regret(&p, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn regret_errors() {
        let t = trace(AlgorithmId::OgdVc, &[1.0], None);
        assert!(matches!(compute_regret(&t, 1.0), Err(Error::MissingBenchmark)));
        assert!(compute_regret(&t, 0.5).is_err());
        let p = trace(AlgorithmId::GftplGkp, &[1.0], Some(1.0));
        assert!(compute_regret(&p, 2.0).is_err());
        assert!(compute_regret(&p, 0.0).is_err());
    }

    fn run(seed: u64, horizon: usize, regret: f64, bound: f64) -> RunSummary {
        RunSummary {
            seed,
            horizon,
            total: 0.0,
            benchmark: Some(0.0),
            regret: Some(regret),
            bound: Some(bound),
            answer: None,
            trace_file: String::new(),
        }
    }

    #[test]
    fn bound_comparison_examples() {
        assert!(within_bound(42.0, 60.0));
        assert!(within_bound(-1.0, 0.0));
        assert!(!within_bound(61.0, 60.0));

        let s = summarize(AlgorithmId::GftplGkp, &[256, 1024, 4096], vec![
            run(0, 256, 100.0, 500.0),
            run(0, 1024, 300.0, 900.0),
            run(0, 4096, 800.0, 2000.0),
        ]);
        let r = compare_bounds(&s);
        assert_eq!(r.vanishing_regret, Some(true));
        assert!(r.passed);

        let s = summarize(AlgorithmId::OgdVc, &[10], vec![run(0, 10, 1.0, 5.0), run(1, 10, 6.0, 5.0)]);
        let r = compare_bounds(&s);
        assert_eq!((r.violations, r.passed), (1, false));
        assert!(r.mean[0].pass);
    }

    #[test]
    fn ogd_csv_layout() {
        let g = Graph::path(2);
        let seq = WeightSequence::new(2, vec![vec![1.0, 0.5], vec![0.0, 1.0]]).unwrap();
        let trace = ogd_run(&g, &seq, &OgdConfig::new(1.0, StepMode::Scaled)).unwrap();
        let csv = ogd_trace_csv(&trace, 2, 1.0);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,played_set,int_cost,frac_cost,cum_int,cum_frac,bound_additive");
        assert!(lines[1].starts_with("1,0;1,1,0.5,1,0.5,"));
        assert_eq!(lines.len(), 3);
    }
}
