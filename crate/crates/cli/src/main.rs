use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use nonlin_online::gftpl::{epsilon_prime, theorem3_bound, EpsSchedule, GftplConfig};
use nonlin_online::gkp::{brute_oracle, fptas_oracle, BRUTE_LIMIT};
use nonlin_online::harness::{run_experiment, ExperimentConfig};
use nonlin_online::instance::{
    gen_onehot_weights, gen_random_dnf, gen_random_gkp, gen_random_graph, gen_uniform_weights, Dnf3Formula, GkpSet,
    Graph, WeightSequence,
};
use nonlin_online::ogd::{check_projection, theorem2_bound, OgdConfig, StepMode};
use nonlin_online::reductions::{
    dnf_to_matching, dnf_to_path, gap_horizon, threecolor_to_p3, validate_correspondence,
    validate_threecolor_reduction, validate_vc_reduction, vc_to_multi_vc, GapConfig,
};
use nonlin_online::SeededRng;

/// Online learning for min-max vertex cover and generalized knapsack:
/// instance generation, experiments, reduction checks, oracle benchmarks.
///
/// Exit status: 0 when every bound or validator check passes, 1 when a
/// check fails, 2 on errors.
#[derive(Parser)]
#[command(name = "nonlin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance or a reduction output.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run the experiment described by a JSON config.
    Run {
        /// Experiment config; relative paths inside it resolve against its directory.
        config: PathBuf,
    },
    /// Exhaustive or sampled correctness checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Benchmarks.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Evaluate a closed-form bound.
    #[command(subcommand)]
    Bound(BoundCommand),
}

#[derive(Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightKind {
    /// I.i.d. uniform on [0, w-max].
    Uniform,
    /// A single 1 per row at a uniform position.
    Onehot,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Erdős–Rényi graph G(n, p).
    Graph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Vertex weight sequence.
    Weights {
        #[arg(long)]
        n: usize,
        /// Number of rows T.
        #[arg(long)]
        horizon: usize,
        #[arg(long, value_enum, default_value = "uniform")]
        kind: WeightKind,
        #[arg(long, default_value_t = 1.0)]
        w_max: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Random multi-round GKP set (JSON).
    Gkp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Random 3-DNF formula.
    Dnf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Matching gadget of a formula: a graph file and one edge-weight row per clause.
    Matching {
        formula: PathBuf,
        #[arg(long)]
        graph_out: PathBuf,
        #[arg(long)]
        weights_out: PathBuf,
    },
    /// Parallel-arc path gadget of a formula: one arc-weight row per clause (arc 2i true, 2i+1 false).
    Path {
        formula: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// One-hot rows turning vertex cover into multi-instance min-max vertex cover.
    MultiVc {
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Processing-time rows turning 3-coloring into multi-instance P3||Cmax.
    P3 {
        graph: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check satisfied(σ) = m − gadget cost for every assignment, on both gadgets.
    Reductions { formula: PathBuf },
    /// Check projections onto the vertex-cover polytope of a graph.
    Projection {
        graph: PathBuf,
        /// Random points y to project.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Random feasible competitors per point.
        #[arg(long, default_value_t = 1000)]
        competitors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        feas_tol: f64,
        #[arg(long, default_value_t = 1e-6)]
        opt_tol: f64,
    },
    /// Check that every vertex subset costs its size under the one-hot rows.
    MultiVc { graph: PathBuf },
    /// Check minimum total makespan = m exactly when the graph is 3-colorable.
    P3 { graph: PathBuf },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// FPTAS against the exhaustive oracle; prints CSV
    /// n,m,eps,brute_value,fptas_value,ratio,dp_cells,elapsed_ms.
    Oracle {
        gkp: PathBuf,
        /// Relative error; repeat for several.
        #[arg(long, required = true)]
        eps: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum BoundCommand {
    /// 3·W·√(n·T), the additive term of the OGD 2-regret bound.
    Theorem2 {
        #[arg(long)]
        w: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        horizon: usize,
    },
    /// N·√(κ·G_f·G_γ·(G_f+2ε)/δ·T) + ε·T, the GFTPL regret bound.
    Theorem3 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        g_gamma: f64,
        #[arg(long)]
        g_f: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        horizon: usize,
    },
    /// ε/(T·F_M + N·η·Γ_M), the relative oracle error for an additive target ε.
    EpsilonPrime {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        f_max: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma_max: f64,
    },
    /// ⌈((A·ε)/(2·p_coeff·n·B))^{1/(c−1)}⌉, the gap-solver horizon.
    GapHorizon {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        p_coeff: f64,
        #[arg(long)]
        c_exp: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(output: &Output, text: &str) -> Result<()> {
    match &output.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<bool> {
    match command {
        Command::Gen(g) => generate(g).map(|()| true),
        Command::Run { config } => run(&config),
        Command::Verify(v) => verify(v),
        Command::Bench(BenchCommand::Oracle { gkp, eps }) => bench_oracle(&gkp, &eps),
        Command::Bound(b) => bound(b).map(|()| true),
    }
}

fn generate(cmd: GenCommand) -> Result<()> {
    match cmd {
        GenCommand::Graph { n, p, seed, output } => {
            emit(&output, &gen_random_graph(n, p, &mut SeededRng::new(seed))?.serialize())
        }
        GenCommand::Weights { n, horizon, kind, w_max, seed, output } => {
            let mut rng = SeededRng::new(seed);
            let seq: WeightSequence<f64> = match kind {
                WeightKind::Uniform => gen_uniform_weights(n, horizon, w_max, &mut rng)?,
                WeightKind::Onehot => gen_onehot_weights(n, horizon, &mut rng)?,
            };
            emit(&output, &seq.serialize())
        }
        GenCommand::Gkp { n, rounds, seed, output } => {
            emit(&output, &gen_random_gkp::<f64>(n, rounds, &mut SeededRng::new(seed))?.to_json())
        }
        GenCommand::Dnf { n, m, seed, output } => {
            emit(&output, &gen_random_dnf(n, m, &mut SeededRng::new(seed))?.serialize())
        }
        GenCommand::Matching { formula, graph_out, weights_out } => {
            let f = Dnf3Formula::parse(&read(&formula)?)?;
            let gadget = dnf_to_matching::<f64>(&f);
            fs::write(&graph_out, gadget.graph.serialize())?;
            let rows = WeightSequence::new(gadget.graph.m(), gadget.weight_rows)?;
            fs::write(&weights_out, rows.serialize())?;
            Ok(())
        }
        GenCommand::Path { formula, output } => {
            let f = Dnf3Formula::parse(&read(&formula)?)?;
            let (chain, rows) = dnf_to_path::<f64>(&f);
            emit(&output, &WeightSequence::new(chain.arc_count(), rows)?.serialize())
        }
        GenCommand::MultiVc { graph, output } => {
            let g = Graph::parse(&read(&graph)?)?;
            emit(&output, &vc_to_multi_vc::<f64>(&g).serialize())
        }
        GenCommand::P3 { graph, output } => {
            let g = Graph::parse(&read(&graph)?)?;
            emit(&output, &threecolor_to_p3::<f64>(&g).serialize())
        }
    }
}

fn run(config: &Path) -> Result<bool> {
    let cfg = ExperimentConfig::from_file(config).with_context(|| format!("loading {}", config.display()))?;
    let outcome = run_experiment(&cfg)?;
    for h in &outcome.summary.horizons {
        match h.yes_fraction {
            Some(y) => println!("T={} runs={} yes_fraction={y}", h.horizon, h.runs),
            None => println!(
                "T={} runs={} mean_regret={} max_regret={} mean_bound={} regret_per_round={}",
                h.horizon, h.runs, h.mean_regret, h.max_regret, h.mean_bound, h.regret_per_round
            ),
        }
    }
    let b = &outcome.bounds;
    if let Some(v) = b.vanishing_regret {
        println!("vanishing_regret={v}");
    }
    println!("bound_violations={} -> {}", b.violations, if b.passed { "PASS" } else { "FAIL" });
    println!("summary: {}", cfg.output_dir.join("summary.json").display());
    Ok(b.passed)
}

fn verify(cmd: VerifyCommand) -> Result<bool> {
    match cmd {
        VerifyCommand::Reductions { formula } => {
            let report = validate_correspondence(&Dnf3Formula::parse(&read(&formula)?)?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.passed())
        }
        VerifyCommand::MultiVc { graph } => {
            let report = validate_vc_reduction(&Graph::parse(&read(&graph)?)?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.passed())
        }
        VerifyCommand::P3 { graph } => {
            let report = validate_threecolor_reduction(&Graph::parse(&read(&graph)?)?)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(report.passed())
        }
        VerifyCommand::Projection { graph, samples, competitors, seed, feas_tol, opt_tol } => {
            let g = Graph::parse(&read(&graph)?)?;
            let cfg = OgdConfig::new(1.0, StepMode::Scaled);
            let mut rng = SeededRng::new(seed);
            let (mut worst_feas, mut worst_opt, mut worst_idem) = (0.0f64, f64::NEG_INFINITY, 0.0f64);
            for _ in 0..samples {
                // points around the box, some well outside it
                let y: Vec<f64> = (0..g.n()).map(|_| 3.0 * rng.next_f64() - 1.0).collect();
                let c = check_projection(&g, &y, &cfg, competitors, &mut rng)?;
                worst_feas = worst_feas.max(c.infeasibility);
                worst_opt = worst_opt.max(c.optimality_gap);
                worst_idem = worst_idem.max(c.idempotence_error);
            }
            let pass = worst_feas <= feas_tol && worst_opt <= opt_tol && worst_idem <= feas_tol;
            println!(
                "{}",
                serde_json::json!({
                    "samples": samples,
                    "competitors": competitors,
                    "max_infeasibility": worst_feas,
                    "max_optimality_gap": if samples == 0 { 0.0 } else { worst_opt },
                    "max_idempotence_error": worst_idem,
                    "passed": pass,
                })
            );
            Ok(pass)
        }
    }
}

fn bench_oracle(path: &Path, eps_list: &[f64]) -> Result<bool> {
    let set = GkpSet::<f64>::from_json(&read(path)?)?;
    let (n, m) = (set.statics.n(), set.rounds.len());
    let brute = if n <= BRUTE_LIMIT { Some(brute_oracle(&set.statics, &set.rounds)?.1) } else { None };
    let mut pass = true;
    println!("n,m,eps,brute_value,fptas_value,ratio,dp_cells,elapsed_ms");
    for &eps in eps_list {
        let start = Instant::now();
        let out = fptas_oracle(&set.statics, &set.rounds, eps)?;
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let (brute_s, ratio_s) = match brute {
            Some(b) => {
                pass &= out.value >= (1.0 - eps) * b;
                let ratio = if b == 0.0 { 1.0 } else { out.value / b };
                (b.to_string(), ratio.to_string())
            }
            None => (String::new(), String::new()),
        };
        println!("{n},{m},{eps},{brute_s},{},{ratio_s},{},{elapsed:.3}", out.value, out.dp_cells);
    }
    Ok(pass)
}

fn bound(cmd: BoundCommand) -> Result<()> {
    let value = match cmd {
        BoundCommand::Theorem2 { w, n, horizon } => theorem2_bound(w, n, horizon),
        BoundCommand::Theorem3 { n, kappa, delta, g_gamma, g_f, eps, horizon } => {
            let cfg = GftplConfig {
                n_dist: n,
                eta: 0.0,
                kappa,
                delta,
                g_gamma,
                g_f,
                f_max: 0.0,
                gamma_max: 1.0,
                schedule: EpsSchedule::Additive(eps),
                audit_samples: 0,
            };
            cfg.validate()?;
            theorem3_bound(&cfg, eps, horizon)
        }
        BoundCommand::EpsilonPrime { eps, horizon, f_max, n, eta, gamma_max } => {
            let cfg = GftplConfig {
                n_dist: n,
                eta,
                kappa: 1.0,
                delta: 1.0,
                g_gamma: 0.0,
                g_f: 0.0,
                f_max,
                gamma_max,
                schedule: EpsSchedule::Additive(eps),
                audit_samples: 0,
            };
            epsilon_prime(eps, horizon, &cfg)?
        }
        BoundCommand::GapHorizon { a, b, p_coeff, c_exp, eps, n } => {
            let cfg = GapConfig { a, b, p_coeff, c_exp, t_override: None };
            let t = gap_horizon(&cfg, eps, n)?;
            if t == usize::MAX {
                bail!("horizon overflows usize");
            }
            println!("{t}");
            return Ok(());
        }
    };
    println!("{value}");
    Ok(())
}
