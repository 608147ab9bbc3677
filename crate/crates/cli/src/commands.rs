use std::f64::consts::FRAC_PI_2;

use hlvqe_core::*;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{Cell, Report, Table};
use crate::CliError;

fn to_value<T: serde::Serialize>(v: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(v).map_err(|e| CliError::Config(e.to_string()))
}

fn state_table(name: &str, amps: &[f64]) -> Table {
    let mut t = Table::new(name, ["n", "amplitude"]);
    for (n, a) in amps.iter().enumerate() {
        t.push(vec![n.into(), (*a).into()]);
    }
    t
}

pub fn exact(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.model()?;
    let g = exact_ground_state(&p)?;
    let mut summary = Table::new("summary", ["n_particles", "epsilon", "V", "vbar", "energy"]);
    summary.push(vec![p.n().into(), p.epsilon().into(), p.coupling().into(), p.vbar().into(), g.energy.into()]);
    println!("exact ground energy: {}", g.energy);
    Ok(Report {
        command: "exact",
        result: to_value(&g)?,
        tables: vec![summary, state_table("state", &g.amplitudes)],
        plot_keys: vec![0, 0],
    })
}

pub fn effective(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.model()?;
    let s = solve_effective(&p, cfg.lambda, &SolverOptions::default())?;
    let mut summary = Table::new("summary", ["lambda", "beta", "energy", "projected_energy", "bures", "bures_beta0"]);
    summary.push(vec![
        cfg.lambda.into(),
        s.beta.into(),
        s.energy.into(),
        s.projected_energy.into(),
        s.bures.into(),
        s.bures_beta0.into(),
    ]);
    println!("Λ={}: beta={} energy={} D_B={}", cfg.lambda, s.beta, s.energy, s.bures);
    Ok(Report {
        command: "effective",
        tables: vec![summary, state_table("state", s.state.amplitudes())],
        plot_keys: vec![0, 0],
        result: to_value(&s)?,
    })
}

pub fn sweep_lambda(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.model()?;
    let rows = hlvqe_core::sweep_lambda(&p, &cfg.lambdas, &SolverOptions::default())?;
    let mut t = Table::new("sweep", ["lambda", "dE_naive", "dE_effective", "dE_projected"]);
    for r in &rows {
        t.push(vec![r.cutoff.into(), r.delta_e_naive.into(), r.delta_e_effective.into(), r.delta_e_projected.into()]);
    }
    println!("swept {} cutoffs", rows.len());
    Ok(Report { command: "sweep_lambda", tables: vec![t], plot_keys: vec![0], result: to_value(&rows)? })
}

pub fn sweep_vbar(cfg: &RunConfig) -> Result<Report, CliError> {
    let pts = hlvqe_core::sweep_vbar(cfg.n, cfg.epsilon, cfg.lambda, &cfg.vbar_grid, &SolverOptions::default())?;
    let mut t = Table::new("sweep", ["vbar", "beta", "rel_error_percent"]);
    for pt in &pts {
        t.push(vec![pt.vbar.into(), pt.beta.into(), pt.rel_error_percent.into()]);
    }
    println!("swept {} couplings at Λ={}", pts.len(), cfg.lambda);
    Ok(Report { command: "sweep_vbar", tables: vec![t], plot_keys: vec![0], result: to_value(&pts)? })
}

fn trace_table(trace: &Trace, with_beta: bool) -> Table {
    let (n_theta, n_amp) = trace.records.first().map_or((0, 0), |r| (r.theta.len(), r.amplitudes.len()));
    let mut cols = vec!["step".to_string(), "energy".into()];
    if with_beta {
        cols.push("beta".into());
    }
    cols.extend((0..n_theta).map(|i| format!("theta_{i}")));
    cols.extend((0..n_amp).map(|i| format!("A_{i}")));
    if with_beta {
        cols.push("bures".into());
    }
    let mut t = Table::new("trace", cols);
    for r in &trace.records {
        let mut row: Vec<Cell> = vec![r.step.into(), r.energy.into()];
        if with_beta {
            row.push(r.beta.into());
        }
        row.extend(r.theta.iter().map(|&x| x.into()));
        row.extend(r.amplitudes.iter().map(|&x| x.into()));
        if with_beta {
            row.push(r.bures.into());
        }
        t.push(row);
    }
    t
}

fn summary_table(s: &RunSummary) -> Table {
    let mut t = Table::new("summary", ["quantity", "mean", "half_range"]);
    let mut add = |name: String, st: &Stat| t.push(vec![Cell::Text(name), st.mean.into(), st.half_range.into()]);
    add("energy".into(), &s.energy);
    add("beta".into(), &s.beta);
    for (n, a) in s.amplitudes.iter().enumerate() {
        add(format!("A_{n}"), a);
    }
    if let Some(b) = &s.bures {
        add("bures".into(), b);
    }
    t
}

pub fn hlvqe(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.model()?;
    let trace = run(&p, cfg.lambda, &cfg.hlvqe_options())?;
    let window = clip_window(cfg.window, &trace)?;
    let summary = summarize(&trace.records, window)?;
    println!(
        "Λ={} over steps {}: E={} ± {}, beta={} ± {}",
        cfg.lambda, window, summary.energy.mean, summary.energy.half_range, summary.beta.mean, summary.beta.half_range
    );
    Ok(Report {
        command: "hlvqe",
        tables: vec![trace_table(&trace, true), summary_table(&summary)],
        plot_keys: vec![0, 0],
        result: json!({ "trace": to_value(&trace)?, "summary": to_value(&summary)? }),
    })
}

/// A run that stops early cannot fill the configured window; summarize what exists.
fn clip_window(window: Window, trace: &Trace) -> Result<Window, CliError> {
    let last = trace.records.last().map_or(0, |r| r.step);
    if window.end <= last {
        return Ok(window);
    }
    Ok(Window::new(window.start.min(last).max(1), last)?)
}

pub fn reconstruct(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.model()?;
    let s = solve_effective(&p, cfg.lambda, &SolverOptions::default())?;
    let full = reconstruct_full(&s.state, &p)?;
    let projected = project_parity(&full, Parity::Even)?;
    let exact = FullState::new(exact_ground_state(&p)?.amplitudes)?;
    let mut t = Table::new("amplitudes", ["n", "effective", "reconstructed", "projected", "exact"]);
    for n in 0..p.dim() {
        let eff = s.state.amplitudes().get(n).copied();
        t.push(vec![
            n.into(),
            eff.into(),
            full.amplitudes()[n].into(),
            projected.amplitudes()[n].into(),
            exact.amplitudes()[n].into(),
        ]);
    }
    let raw = bures_distance(&full, &exact)?;
    let mut summary = Table::new("summary", ["lambda", "beta", "energy", "projected_energy", "bures_reconstructed", "bures_projected"]);
    summary.push(vec![cfg.lambda.into(), s.beta.into(), s.energy.into(), s.projected_energy.into(), raw.into(), s.bures.into()]);
    println!("Λ={}: D_B before projection {raw}, after {}", cfg.lambda, s.bures);
    Ok(Report {
        command: "reconstruct",
        tables: vec![t, summary],
        plot_keys: vec![0, 0],
        result: json!({
            "solution": to_value(&s)?,
            "reconstructed": to_value(&full)?,
            "projected": to_value(&projected)?,
            "exact": to_value(&exact)?,
            "bures_reconstructed": raw,
        }),
    })
}

/// Learns the ground state, then descends on H(β) + μ₀|Ψ₀⟩⟨Ψ₀| at the learned β.
pub fn excited(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = cfg.model()?;
    let ground_opts = cfg.hlvqe_options();
    let ground = run(&p, cfg.lambda, &ground_opts)?;
    let last = ground.records.last().ok_or_else(|| CliError::Config("ground-state run produced no steps".into()))?;
    let mut opts = ground_opts.clone();
    if cfg.init_theta.is_empty() {
        // the ground angles are stationary on the shifted surface; start a quarter turn away
        opts.init_theta = last.theta.iter().map(|t| t + FRAC_PI_2).collect();
    }
    let ex = run_excited(&p, cfg.lambda, last.beta, &last.theta, cfg.mu0, &opts)?;
    let window = clip_window(cfg.window, &ex.trace)?;
    let summary = summarize(&ex.trace.records, window)?;
    let fin = ex.trace.records.last().map_or(f64::NAN, |r| r.energy);
    let mut t = Table::new(
        "summary",
        ["lambda", "beta", "mu0", "ground_energy", "excited_energy", "excited_exact", "overlap_with_ground"],
    );
    t.push(vec![
        cfg.lambda.into(),
        last.beta.into(),
        cfg.mu0.into(),
        last.energy.into(),
        fin.into(),
        ex.exact_energy.into(),
        ex.overlap_with_ground.into(),
    ]);
    println!("Λ={}: ground {} → excited {} (diagonalized {})", cfg.lambda, last.energy, fin, ex.exact_energy);
    Ok(Report {
        command: "excited",
        tables: vec![trace_table(&ex.trace, false), t],
        plot_keys: vec![0, 0],
        result: json!({
            "ground": to_value(&ground)?,
            "excited": to_value(&ex)?,
            "summary": to_value(&summary)?,
        }),
    })
}
