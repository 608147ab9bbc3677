use std::path::Path;
use std::process::{Command, Output};

use clap::Parser;
use hlvqe_cli::config::{ConfigFile, Coupling, RunConfig};
use hlvqe_cli::report::Table;
use hlvqe_cli::Cli;

fn hlvqe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlvqe")).args(args).output().unwrap()
}

fn resolve(args: &[&str]) -> Result<RunConfig, hlvqe_cli::CliError> {
    let mut all = vec!["hlvqe"];
    all.extend_from_slice(args);
    Cli::try_parse_from(all).unwrap().command.flags().resolve()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// CSV without comment lines.
fn body(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}

#[test]
fn flags_alone_give_a_complete_config() {
    let cfg = resolve(&["hlvqe", "--n", "30", "--vbar", "2.0", "--eps", "1.0", "--lambda", "4"]).unwrap();
    assert_eq!((cfg.n, cfg.lambda, cfg.coupling), (30, 4, Coupling::Vbar(2.0)));
    assert_eq!((cfg.eta, cfg.iterations, cfg.window.to_string()), (0.07, 80, "70..80".to_string()));
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "c.json", r#"{"n": 20, "vbar": 2.0, "lambda": 4}"#);
    let cfg = resolve(&["effective", "--config", &file, "--vbar", "1.2"]).unwrap();
    assert_eq!((cfg.n, cfg.lambda, cfg.coupling), (20, 4, Coupling::Vbar(1.2)));
    let cfg = resolve(&["effective", "--config", &file, "--v", "0.05"]).unwrap();
    assert_eq!(cfg.coupling, Coupling::V(0.05));
}

#[test]
fn conflicting_and_unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let both = write(dir.path(), "both.json", r#"{"V": 0.1, "vbar": 2.0}"#);
    let out = hlvqe(&["exact", "--config", &both, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"V\"") && err.contains("\"vbar\""), "{err}");

    let typo = write(dir.path(), "typo.json", r#"{"lamda": 4}"#);
    let out = hlvqe(&["exact", "--config", &typo]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lamda"));

    assert_eq!(hlvqe(&["exact", "--v", "0.1", "--vbar", "2"]).status.code(), Some(2));
    assert_eq!(hlvqe(&["hlvqe", "--lambda", "3", "--out", dir.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = hlvqe(&["exact", "--n", "200", "--eps", "1.7e308", "--vbar", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn echoed_config_resolves_to_itself() {
    let cfg = resolve(&["hlvqe", "--n", "12", "--v", "0.3", "--lambda", "4", "--backend", "sampled", "--seed", "9", "--init-theta", "0.1,-0.2,0.3", "--window", "5..9", "--iters", "9"]).unwrap();
    let text = serde_json::to_string(&cfg.echo()).unwrap();
    let back: ConfigFile = serde_json::from_str(&text).unwrap();
    assert_eq!(RunConfig::resolve(back).unwrap(), cfg);
}

#[test]
fn empty_table_is_header_only() {
    let t = Table::new("trace", ["step", "energy"]);
    assert_eq!(t.to_csv_body(), "step,energy\n");
}

#[test]
fn hlvqe_trace_has_one_row_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = hlvqe(&["hlvqe", "--lambda", "2", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = body(&dir.path().join("hlvqe_trace.csv"));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "step,energy,beta,theta_0,A_0,A_1,bures");
    let steps: Vec<usize> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(steps, (1..=80).collect::<Vec<_>>());
}

#[test]
fn sweep_reproduces_the_first_reference_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = hlvqe(&["sweep-lambda", "--n", "32", "--vbar", "2", "--lambdas", "2,4", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = body(&dir.path().join("sweep_lambda.csv"));
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    for (got, want) in row.iter().zip([2.0, 4.1650, 1.6497e-1, 1.6497e-1]) {
        assert!((got - want).abs() <= 5e-5 * want, "{got} vs {want}");
    }
}

#[test]
fn reruns_differ_only_in_the_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "run.json", r#"{"lambda": 4, "backend": "sampled", "shots": 4000, "seed": 7, "iterations": 12, "window": "8..12"}"#);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        assert!(hlvqe(&["hlvqe", "--config", &file, "--out", out.to_str().unwrap()]).status.success());
    }
    let strip = |p: &Path| -> String {
        let text = std::fs::read_to_string(p).unwrap();
        assert!(text.lines().next().unwrap().starts_with("# generated: "));
        text.lines().skip(1).map(|l| l.replace(a.to_str().unwrap(), "OUT").replace(b.to_str().unwrap(), "OUT") + "\n").collect()
    };
    let first = strip(&a.join("hlvqe_trace.csv"));
    assert_eq!(first, strip(&b.join("hlvqe_trace.csv")));
    assert!(first.contains("# seeds: [7]"));
    assert!(first.contains("\"seed\":7"));
}

#[test]
fn json_output_carries_config_and_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = hlvqe(&["effective", "--lambda", "4", "--format", "json", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("effective.json")).unwrap()).unwrap();
    assert_eq!(doc["config"]["lambda"], 4);
    assert_eq!(doc["seeds"], serde_json::json!([]));
    assert!((doc["result"]["energy"].as_f64().unwrap() + 18.900130).abs() < 1e-5);
    assert!(doc["generated"].is_string());
}

#[test]
fn every_subcommand_writes_its_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cases: [(&[&str], &[&str]); 7] = [
        (&["exact"], &["exact_summary.csv", "exact_state.csv"]),
        (&["effective", "--lambda", "3"], &["effective_summary.csv", "effective_state.csv"]),
        (&["sweep-lambda", "--n", "8"], &["sweep_lambda.csv"]),
        (&["sweep-vbar", "--vbar-grid", "0.5,1.5", "--lambda", "3"], &["sweep_vbar.csv"]),
        (&["hlvqe", "--iters", "10", "--window", "5..10", "--plot-data"], &["hlvqe_trace.csv", "hlvqe_trace_long.csv"]),
        (&["reconstruct", "--lambda", "3"], &["reconstruct_amplitudes.csv", "reconstruct_summary.csv"]),
        (&["excited", "--update", "plain", "--iters", "200", "--window", "190..200"], &["excited_trace.csv", "excited_summary.csv"]),
    ];
    for (args, files) in cases {
        let mut all = args.to_vec();
        all.extend(["--out", out]);
        let o = hlvqe(&all);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        for f in files {
            assert!(dir.path().join(f).exists(), "{args:?} missing {f}");
        }
    }
    let ex = body(&dir.path().join("excited_summary.csv"));
    let row: Vec<f64> = ex.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[4] - row[5]).abs() < 1e-6, "variational vs diagonalized excited energy: {row:?}");
}
