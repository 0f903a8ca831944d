use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nonlin(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nonlin")).args(args).current_dir(cwd).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn generators_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 5] = [
        &["gen", "graph", "--n", "12", "--p", "0.3", "--seed", "5"],
        &["gen", "weights", "--n", "4", "--horizon", "10", "--seed", "5"],
        &["gen", "weights", "--n", "4", "--horizon", "10", "--kind", "onehot"],
        &["gen", "gkp", "--n", "5", "--rounds", "3", "--seed", "9"],
        &["gen", "dnf", "--n", "5", "--m", "7", "--seed", "2"],
    ];
    for args in cases {
        let a = nonlin(args, dir.path());
        let b = nonlin(args, dir.path());
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let other = nonlin(&["gen", "graph", "--n", "12", "--p", "0.3", "--seed", "6"], dir.path());
    assert_ne!(other.stdout, nonlin(cases[0], dir.path()).stdout);
}

#[test]
fn gadgets_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(nonlin(&["gen", "dnf", "--n", "4", "--m", "6", "--seed", "3", "-o", "f.dnf"], p).status.success());
    let out = nonlin(&["verify", "reductions", "f.dnf"], p);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["assignments_checked"], 16);
    assert!(report["violations"].as_array().unwrap().is_empty());

    let gadget = nonlin(&["gen", "matching", "f.dnf", "--graph-out", "m.graph", "--weights-out", "m.csv"], p);
    assert!(gadget.status.success());
    assert!(Path::new(&p.join("m.graph")).exists() && Path::new(&p.join("m.csv")).exists());

    assert!(nonlin(&["gen", "graph", "--n", "7", "--p", "0.5", "--seed", "1", "-o", "g.txt"], p).status.success());
    for kind in ["multi-vc", "p3"] {
        let out = nonlin(&["verify", kind, "g.txt"], p);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", stdout(&out));
    }
    let out = nonlin(&["verify", "projection", "g.txt", "--samples", "10", "--competitors", "100"], p);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}

#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(nonlin(&["gen", "graph", "--n", "6", "--p", "0.5", "-o", "g.txt"], p).status.success());
    // no projection can beat every competitor by a margin of 1
    let out = nonlin(&["verify", "projection", "g.txt", "--samples", "3", "--competitors", "20", "--opt-tol=-1"], p);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(nonlin(&["verify", "projection", "missing.txt"], dir.path()).status.code(), Some(2));
    fs::write(dir.path().join("bad.txt"), "2 1\n0 0\n").unwrap();
    assert_eq!(nonlin(&["verify", "projection", "bad.txt"], dir.path()).status.code(), Some(2));
    assert_eq!(nonlin(&["bound", "gap-horizon", "--a", "0.5", "--b", "0.25", "--p-coeff", "1", "--c-exp", "0.5", "--eps", "1", "--n", "1"], dir.path()).status.code(), Some(2));
}

#[test]
fn bounds_print_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = nonlin(&["bound", "theorem2", "--w", "1", "--n", "4", "--horizon", "100"], dir.path());
    assert_eq!(stdout(&out).trim(), "60");
    let args = ["bound", "gap-horizon", "--a", "0.25", "--b", "0.5", "--p-coeff", "1", "--c-exp", "0.5", "--eps", "1", "--n", "1"];
    let out = nonlin(&args, dir.path());
    assert_eq!(stdout(&out).trim(), "16");
}

#[test]
fn bench_reports_each_eps() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(nonlin(&["gen", "gkp", "--n", "6", "--rounds", "4", "-o", "g.json"], p).status.success());
    let out = nonlin(&["bench", "oracle", "g.json", "--eps", "0.5", "--eps", "0.1"], p);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,m,eps,brute_value,fptas_value,ratio,dp_cells,elapsed_ms");
    assert_eq!(lines.len(), 3);
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        let eps: f64 = f[2].parse().unwrap();
        let ratio: f64 = f[5].parse().unwrap();
        assert!(ratio >= 1.0 - eps, "{line}");
    }
}

fn run_outputs(config: &str) -> (i32, Vec<(String, Vec<u8>)>) {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), config).unwrap();
    let out = nonlin(&["run", "cfg.json"], dir.path());
    let mut files: Vec<_> = fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    (out.status.code().unwrap(), files)
}

#[test]
fn runs_are_byte_identical() {
    let configs = [
        r#"{"algorithm":"ogd_vc","horizons":[100],"base_seed":0,"replicas":3,
            "graph":{"random":{"n":6,"p":0.5}},"adversary":{"uniform":{"w_max":1.0}},
            "ogd":{"step_mode":"scaled","w_bound":1.0},"output_dir":"out"}"#,
        r#"{"algorithm":"gftpl_gkp","horizons":[32],"seeds":[4,5],
            "gkp":{"random":{"n":4}},"gftpl":{"oracle":"brute"},"output_dir":"out"}"#,
    ];
    for config in configs {
        let (code_a, a) = run_outputs(config);
        let (code_b, b) = run_outputs(config);
        assert_eq!((code_a, code_b), (0, 0));
        assert!(a.iter().any(|(name, _)| name == "summary.json"));
        assert!(a.len() > 1);
        assert_eq!(a, b);
    }
}
