//! Closure, regime and summary-table reports.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sgn_core::phaseplane::{self, EigenPair};
use sgn_core::{closure, ClosureData, PhaseParams, Regime, State};

use crate::config::{ClassifyCfg, ClosureCfg, TableCfg};
use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// Traveling coordinate: `left` is the state ahead of the front.
    Xi,
    /// Physical coordinate: `left` is the state behind the front.
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Side {
    pub depth: f64,
    pub momentum: f64,
}

impl From<State<f64>> for Side {
    fn from(s: State<f64>) -> Self {
        Side {
            depth: s.zeta,
            momentum: s.w,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Labeled {
    pub frame: Frame,
    pub left: Side,
    pub right: Side,
}

impl Labeled {
    /// Switches between the traveling and physical labelings.
    pub fn relabeled(&self) -> Self {
        Labeled {
            frame: match self.frame {
                Frame::Xi => Frame::X,
                Frame::X => Frame::Xi,
            },
            left: self.right,
            right: self.left,
        }
    }
}

pub fn build_closure(cfg: &ClosureCfg, allow_nonlax: bool, eps: f64, delta: f64) -> CliResult<ClosureData<f64>> {
    let left = State::new(cfg.zeta_l, cfg.w_l)?;
    Ok(if allow_nonlax {
        ClosureData::new_nonlax(left, cfg.s, eps, delta)?
    } else {
        ClosureData::new(left, cfg.s, eps, delta)?
    })
}

pub fn closure_report(cfg: &ClosureCfg, allow_nonlax: bool) -> CliResult<Value> {
    let data = build_closure(cfg, allow_nonlax, 0.0, 1.0)?;
    let (r_mass, r_mom) = data.rh_residual()?;
    let xi = Labeled {
        frame: Frame::Xi,
        left: data.left.into(),
        right: data.right.into(),
    };
    Ok(json!({
        "config": cfg,
        "s": data.s,
        "k1": data.k1,
        "k2": data.k2,
        "lax_speed_bound": closure::lax_speed_bound(&data.left),
        "lax": closure::lax_check(&data),
        "rh_residual": {"mass": r_mass, "momentum": r_mom},
        "xi_space": xi,
        "x_space": xi.relabeled(),
    }))
}

/// Flat row of a closure report, for CSV batches.
pub fn closure_row(report: &Value) -> Value {
    json!({
        "zeta_l": report["xi_space"]["left"]["depth"],
        "w_l": report["xi_space"]["left"]["momentum"],
        "s": report["s"],
        "zeta_r": report["xi_space"]["right"]["depth"],
        "w_r": report["xi_space"]["right"]["momentum"],
        "k1": report["k1"],
        "k2": report["k2"],
        "rh_mass": report["rh_residual"]["mass"],
        "rh_momentum": report["rh_residual"]["momentum"],
        "lax": report["lax"],
    })
}

pub const CLOSURE_COLUMNS: &[&str] = &[
    "zeta_l", "w_l", "s", "zeta_r", "w_r", "k1", "k2", "rh_mass", "rh_momentum", "lax",
];

fn phase_params(cfg: &ClassifyCfg, allow_nonlax: bool) -> CliResult<PhaseParams<f64>> {
    let base = ClosureCfg {
        zeta_l: cfg.zeta_l,
        w_l: cfg.w_l,
        s: cfg.s,
    };
    Ok(PhaseParams::new(build_closure(&base, allow_nonlax, cfg.eps, cfg.delta)?)?)
}

fn eigen_json(pair: &EigenPair<f64>) -> Value {
    json!({
        "plus": {"re": pair.plus.re, "im": pair.plus.im},
        "minus": {"re": pair.minus.re, "im": pair.minus.im},
    })
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::Oscillatory => "oscillatory",
        Regime::Regularized => "regularized",
    }
}

pub fn classify_report(cfg: &ClassifyCfg, allow_nonlax: bool) -> CliResult<Value> {
    let p = phase_params(cfg, allow_nonlax)?;
    let (lo, hi) = phaseplane::amplitude_bounds(&p);
    Ok(json!({
        "config": cfg,
        "c": p.c(),
        "c_squared": p.c() * p.c(),
        "threshold_c2": p.threshold_c2,
        "regime": regime_name(phaseplane::classify(&p)),
        "zeta_r": p.zeta_r(),
        "zeta_c": p.zeta_c,
        "zeta_bar": p.zeta_bar,
        "amplitude_bounds": [lo, hi],
        "eigenvalues_left": eigen_json(&phaseplane::eigenvalues_at(p.zeta_l(), &p)?),
        "eigenvalues_right": eigen_json(&phaseplane::eigenvalues_at(p.zeta_r(), &p)?),
    }))
}

/// The summary table evaluated for one input, in the physical labeling: the
/// given state `(h_r, q_r)` lies ahead of the front, `(h_l, q_l)` behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub phase_speed: f64,
    pub h_r: f64,
    pub q_r: f64,
    pub h_l: f64,
    pub q_l: f64,
    /// `s^2 eps^2 / delta`.
    pub regime_lhs: f64,
    /// `4 (s h_l - q_l)^2 (h_l^3 - K1^2) / (3 h_l^2)`.
    pub regime_rhs: f64,
    /// `<` (oscillatory) or `>=` (regularized).
    pub relation: String,
    pub regime: String,
}

impl SummaryRow {
    pub fn evaluate(cfg: &TableCfg) -> Self {
        let (h_r, q_r, s) = (cfg.zeta_l, cfg.w_l, cfg.s);
        let root = (h_r * h_r + 8.0 * h_r * (q_r / h_r - s).powi(2)).sqrt();
        let h_l = (-h_r + root) / 2.0;
        let q_l = (2.0 * q_r - 3.0 * s * h_r + s * root) / 2.0;
        let k1 = q_r - s * h_r;
        let lhs = s * s * cfg.eps * cfg.eps / cfg.delta;
        let rhs = 4.0 * (s * h_l - q_l).powi(2) * (h_l.powi(3) - k1 * k1) / (3.0 * h_l * h_l);
        let regular = lhs >= rhs;
        SummaryRow {
            phase_speed: (q_l - q_r) / (h_l - h_r),
            h_r,
            q_r,
            h_l,
            q_l,
            regime_lhs: lhs,
            regime_rhs: rhs,
            relation: if regular { ">=" } else { "<" }.into(),
            regime: if regular { "regularized" } else { "oscillatory" }.into(),
        }
    }
}

pub const TABLE_COLUMNS: &[&str] = &[
    "phase_speed", "h_r", "q_r", "h_l", "q_l", "regime_lhs", "regime_rhs", "relation", "regime",
];

/// The summary row plus its differences from the closure and phase-plane modules.
pub fn table_report(cfg: &TableCfg, allow_nonlax: bool) -> CliResult<Value> {
    let row = SummaryRow::evaluate(cfg);
    let p = phase_params(cfg, allow_nonlax)?;
    let cl = p.closure;
    let module_regime = regime_name(phaseplane::classify(&p));
    Ok(json!({
        "config": cfg,
        "row": row,
        "consistency": {
            "h_l_minus_zeta_r": row.h_l - cl.right.zeta,
            "q_l_minus_w_r": row.q_l - cl.right.w,
            "speed_minus_s": row.phase_speed - cl.s,
            "lhs_minus_c2": row.regime_lhs - p.c() * p.c(),
            "rhs_minus_threshold": row.regime_rhs - p.threshold_c2,
            "module_regime": module_regime,
            "regime_agrees": module_regime == row.regime,
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> ClosureCfg {
        ClosureCfg {
            zeta_l: 1.0,
            w_l: 0.0,
            s: 2.0,
        }
    }

    #[test]
    fn relabel_is_an_involution() {
        let report = closure_report(&base(), false).unwrap();
        let xi: Labeled = serde_json::from_value(report["xi_space"].clone()).unwrap();
        let x: Labeled = serde_json::from_value(report["x_space"].clone()).unwrap();
        assert_eq!(xi.relabeled().relabeled(), xi);
        assert_eq!(x.relabeled(), xi);
        assert_eq!(x.left.depth, report["xi_space"]["right"]["depth"].as_f64().unwrap());
    }

    #[test]
    fn summary_row_matches_modules() {
        let cfg = TableCfg {
            zeta_l: 1.0,
            w_l: 0.0,
            s: 2.0,
            eps: 0.3,
            delta: 0.02,
        };
        let report = table_report(&cfg, false).unwrap();
        let c = &report["consistency"];
        for key in ["h_l_minus_zeta_r", "q_l_minus_w_r", "speed_minus_s", "lhs_minus_c2", "rhs_minus_threshold"] {
            assert!(c[key].as_f64().unwrap().abs() < 1e-12, "{key}: {}", c[key]);
        }
        assert_eq!(report["row"]["relation"], ">=");
        assert_eq!(c["regime_agrees"], true);
    }
}
