//! Profile generation, PDE runs and the two scaling studies.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};
use sgn_core::pde::{self, FieldPair, Grid, SimConfig, Trajectory};
use sgn_core::twsolve::{self, Extremum, Profile, ProfileOptions};
use sgn_core::{phaseplane, ClosureData, Error, PhaseParams, Regime, State};

use crate::config::{ClosureCfg, Initial, LimitCfg, ProfileCfg, SimulateCfg};
use crate::error::{CliError, CliResult};
use crate::fmt::{to_json, write_numeric_csv};
use crate::report::build_closure;

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(format!("creating {}", path.display()), e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Oscillatory => "oscillatory",
        Regime::Regularized => "regularized",
    }
}

pub fn solve_profile(cfg: &ProfileCfg, allow_nonlax: bool) -> CliResult<Profile<f64>> {
    let base = ClosureCfg {
        zeta_l: cfg.zeta_l,
        w_l: cfg.w_l,
        s: cfg.s,
    };
    let params = PhaseParams::new(build_closure(&base, allow_nonlax, cfg.eps, cfg.delta)?)?;
    let opts = ProfileOptions {
        eta: cfg.eta,
        tol: cfg.tol,
        xi_span: cfg.xi_span,
        atol: cfg.atol,
        rtol: cfg.rtol,
        max_step: cfg.max_step,
        ..ProfileOptions::default()
    };
    Ok(twsolve::integrate_profile(&params, &opts)?)
}

/// `profile.csv` (xi, x, zeta, w, v, V) and `profile.json` under `out`.
pub fn cmd_profile(cfg: &ProfileCfg, allow_nonlax: bool, out: &Path) -> CliResult<Value> {
    let prof = solve_profile(cfg, allow_nonlax)?;
    let p = &prof.params;
    let x: Vec<f64> = prof.xi.iter().map(|&xi| prof.x_of(xi, 0.0)).collect();
    ensure_dir(out)?;
    write_numeric_csv(
        create(&out.join("profile.csv"))?,
        &["xi", "x", "zeta", "w", "v", "V"],
        &[prof.xi.clone(), x, prof.zeta.clone(), prof.momentum(), prof.v.clone(), prof.liapunov.clone()],
    )?;
    let ext = |e: &Vec<Extremum<f64>>| -> Vec<Value> {
        e.iter()
            .map(|m| json!({"xi": m.xi, "x": prof.x_of(m.xi, 0.0), "zeta": m.zeta}))
            .collect()
    };
    let inflection = prof.inflection_xi.map(|xi| {
        json!({"xi": xi, "x": prof.x_of(xi, 0.0), "zeta": prof.sample(xi).zeta()})
    });
    let meta = json!({
        "config": cfg,
        "regime": regime_name(prof.regime),
        "converged": prof.converged,
        "samples": prof.len(),
        "zeta_l": p.zeta_l(),
        "zeta_r": p.zeta_r(),
        "zeta_c": p.zeta_c,
        "zeta_bar": p.zeta_bar,
        "c": p.c(),
        "threshold_c2": p.threshold_c2,
        "launch_rate": prof.launch_rate,
        "inflection": inflection,
        "maxima": ext(&prof.maxima),
        "minima": ext(&prof.minima),
        "files": {"profile": "profile.csv"},
    });
    write_text(&out.join("profile.json"), &to_json(&meta))?;
    Ok(meta)
}

fn initial_state(cfg: &SimulateCfg, allow_nonlax: bool, delta: f64) -> CliResult<FieldPair<f64>> {
    let grid = Grid::new(cfg.n, cfg.length)?;
    Ok(match cfg.initial {
        Initial::DamBreak {
            h_left,
            h_right,
            steepness,
        } => pde::dam_break_ic(&grid, h_left, h_right, steepness)?,
        Initial::TravelingWave {
            zeta_l,
            w_l,
            s,
            x_front,
            x_join,
            join_width,
        } => {
            // the profile uses the first eps of the list; the PDE may use others
            let eps = cfg.eps.0.first().copied().unwrap_or(0.0);
            let base = ClosureCfg { zeta_l, w_l, s };
            let params = PhaseParams::new(build_closure(&base, allow_nonlax, eps, delta)?)?;
            let prof = twsolve::integrate_profile(&params, &ProfileOptions::default())?;
            pde::traveling_wave_ic(&grid, &prof, x_front, x_join, join_width)?
        }
    })
}

fn sim_config(cfg: &SimulateCfg, eps: f64) -> CliResult<SimConfig<f64>> {
    let mut sc = SimConfig::new(cfg.delta, eps, cfg.t_end)?;
    sc.cfl = cfg.cfl;
    sc.cavitation_floor = cfg.cavitation_floor;
    if let Some(dt) = cfg.dt {
        sc = sc.with_dt(dt)?;
    }
    sc.validate()?;
    Ok(sc)
}

/// Runs every eps of the config from one initial state, in list order.
pub fn run_all(cfg: &SimulateCfg, eps: &[f64], allow_nonlax: bool) -> CliResult<Vec<Trajectory<f64>>> {
    if cfg.snapshot_times.iter().any(|&t| !(t >= 0.0)) {
        return Err(Error::InvalidParameter {
            name: "snapshot_times",
            reason: "times must be non-negative".into(),
        }
        .into());
    }
    let init = initial_state(cfg, allow_nonlax, cfg.delta)?;
    let configs = eps.iter().map(|&e| sim_config(cfg, e)).collect::<CliResult<Vec<_>>>()?;
    configs
        .par_iter()
        .map(|sc| pde::simulate(&init, sc, &cfg.snapshot_times).map_err(CliError::from))
        .collect()
}

/// Short, file-name friendly label (shortest round-trip form).
fn label(eps: f64) -> String {
    format!("eps{eps}")
}

/// Snapshot CSVs (x, h, u) per `(label, t)` and `manifest.json` under `out`.
pub fn cmd_simulate(cfg: &SimulateCfg, allow_nonlax: bool, out: &Path) -> CliResult<Value> {
    let runs = run_all(cfg, &cfg.eps.0, allow_nonlax)?;
    let snap_dir = out.join("snapshots");
    ensure_dir(&snap_dir)?;
    let mut entries = Vec::new();
    for (&eps, run) in cfg.eps.0.iter().zip(&runs) {
        let mut files = Vec::new();
        for snap in &run.snapshots {
            let name = format!("{}_t{}.csv", label(eps), snap.t);
            let path: PathBuf = snap_dir.join(&name);
            write_numeric_csv(create(&path)?, &["x", "h", "u"], &[snap.grid.nodes(), snap.h.clone(), snap.u.clone()])?;
            files.push(json!({"t": snap.t, "file": format!("snapshots/{name}")}));
        }
        entries.push(json!({
            "label": label(eps),
            "eps": eps,
            "steps": run.steps,
            "mass_drift": run.mass_drift(),
            "mass_log": run.mass_log.iter().map(|m| json!({"t": m.t, "mass": m.mass})).collect::<Vec<_>>(),
            "snapshots": files,
        }));
    }
    let manifest = json!({
        "config": cfg,
        "note": "domain length, grid size and final time are engineering defaults, not taken from a reference run",
        "runs": entries,
    });
    write_text(&out.join("manifest.json"), &to_json(&manifest))?;
    Ok(manifest)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// `E(t; eps)` against the eps = 0 run, with halving and doubling ratios.
pub fn cmd_compare_eps(cfg: &SimulateCfg, allow_nonlax: bool) -> CliResult<Vec<Value>> {
    let mut eps: Vec<f64> = cfg.eps.0.iter().copied().filter(|&e| e != 0.0).collect();
    eps.insert(0, 0.0);
    let runs = run_all(cfg, &eps, allow_nonlax)?;
    let mut times: Vec<f64> = cfg
        .snapshot_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t < cfg.t_end)
        .collect();
    times.push(cfg.t_end);
    times.sort_by(f64::total_cmp);
    times.dedup();
    let error = |k: usize, t: f64| pde::error_norm(runs[k].at(t), runs[0].at(t));
    let mut rows = Vec::new();
    for &t in &times {
        for k in 1..eps.len() {
            let e = error(k, t)?;
            let halving = match eps.iter().position(|&o| close(o, 2.0 * eps[k])) {
                Some(j) => Some(e / error(j, t)?),
                None => None,
            };
            let doubling = match times.iter().find(|&&o| close(o, t / 2.0)) {
                Some(&half) => Some(e / error(k, half)?),
                None => None,
            };
            rows.push(json!({
                "t": t,
                "eps": eps[k],
                "error": e,
                "ratio_to_double_eps": halving,
                "ratio_to_half_time": doubling,
                "mass_drift": runs[k].mass_drift(),
            }));
        }
    }
    Ok(rows)
}

pub const COMPARE_COLUMNS: &[&str] = &["t", "eps", "error", "ratio_to_double_eps", "ratio_to_half_time", "mass_drift"];

/// Oscillation width and step deviation of the traveling wave per `(eps, delta)`.
pub fn cmd_limit_study(cfg: &LimitCfg, allow_nonlax: bool) -> CliResult<Vec<Value>> {
    let pairs = cfg.pairs();
    let left = State::new(cfg.zeta_l, cfg.w_l)?;
    let results: Vec<CliResult<(f64, Regime, Option<f64>, Option<f64>)>> = pairs
        .par_iter()
        .map(|run| {
            let data = if allow_nonlax {
                ClosureData::new_nonlax(left, cfg.s, run.eps, run.delta)?
            } else {
                ClosureData::new(left, cfg.s, run.eps, run.delta)?
            };
            let params = PhaseParams::new(data)?;
            let prof = twsolve::integrate_profile(&params, &ProfileOptions::default())?;
            let width = match pde::oscillation_region_width(&prof) {
                Ok(w) => Some(w),
                Err(Error::NotApplicable(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let dev = match width {
                Some(w) => Some(pde::step_deviation(&prof, cfg.front_multiple * w)?),
                None => None,
            };
            Ok((params.c(), phaseplane::classify(&params), width, dev))
        })
        .collect();
    let mut rows = Vec::new();
    let mut prev: Option<f64> = None;
    for (run, res) in pairs.iter().zip(results) {
        let (c, regime, width, dev) = res?;
        let ratio = width.zip(prev).map(|(w, p)| w / p);
        prev = width;
        rows.push(json!({
            "eps": run.eps,
            "delta": run.delta,
            "delta_over_eps": run.delta / run.eps,
            "c": c,
            "regime": regime_name(regime),
            "width": width,
            "width_ratio": ratio,
            "step_deviation": dev,
            "deviation_bound": 3.0 * run.delta / run.eps,
        }));
    }
    Ok(rows)
}

pub const LIMIT_COLUMNS: &[&str] = &[
    "eps",
    "delta",
    "delta_over_eps",
    "c",
    "regime",
    "width",
    "width_ratio",
    "step_deviation",
    "deviation_bound",
];
