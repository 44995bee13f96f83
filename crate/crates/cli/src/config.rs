//! Per-command configuration records and their schema check.
//!
//! A config is a JSON object, optionally merged with command-line overrides.
//! It is checked field by field (so every problem is reported at once), then
//! deserialized into the typed record, whose serialization is the echo written
//! to outputs.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy)]
pub enum Kind {
    Num,
    /// A number or a list of numbers.
    NumOrList,
    NumList,
    Count,
    List(&'static [Field]),
    /// Object selected by its `kind` string.
    Tagged(&'static [(&'static str, &'static [Field])]),
}

#[derive(Clone, Copy)]
pub struct Field {
    pub name: &'static str,
    pub kind: Kind,
    pub required: bool,
}

const fn req(name: &'static str, kind: Kind) -> Field {
    Field {
        name,
        kind,
        required: true,
    }
}

const fn opt(name: &'static str, kind: Kind) -> Field {
    Field {
        name,
        kind,
        required: false,
    }
}

fn type_ok(v: &Value, kind: Kind, path: &str, problems: &mut Vec<String>) {
    let finite = |v: &Value| v.as_f64().is_some_and(f64::is_finite);
    let ok = match kind {
        Kind::Num => finite(v),
        Kind::NumList => v.as_array().is_some_and(|a| a.iter().all(finite)),
        Kind::NumOrList => finite(v) || v.as_array().is_some_and(|a| !a.is_empty() && a.iter().all(finite)),
        Kind::Count => v.as_u64().is_some(),
        Kind::List(fields) => match v.as_array() {
            Some(items) => {
                for (k, item) in items.iter().enumerate() {
                    check_object(item, fields, &format!("{path}[{k}]"), problems);
                }
                true
            }
            None => false,
        },
        Kind::Tagged(variants) => {
            let tag = v.get("kind").and_then(Value::as_str);
            match variants.iter().find(|(name, _)| Some(*name) == tag) {
                Some((_, fields)) => {
                    let mut rest = v.clone();
                    if let Some(obj) = rest.as_object_mut() {
                        obj.remove("kind");
                    }
                    check_object(&rest, fields, path, problems);
                }
                None => {
                    let names: Vec<&str> = variants.iter().map(|v| v.0).collect();
                    problems.push(format!("{path}.kind: expected one of {names:?}"));
                }
            }
            true
        }
    };
    if !ok {
        let expected = match kind {
            Kind::Num => "a finite number",
            Kind::NumList => "a list of finite numbers",
            Kind::NumOrList => "a finite number or a non-empty list of them",
            Kind::Count => "a non-negative integer",
            Kind::List(_) => "a list of objects",
            Kind::Tagged(_) => "an object",
        };
        problems.push(format!("{path}: expected {expected}, got {v}"));
    }
}

fn check_object(v: &Value, fields: &[Field], path: &str, problems: &mut Vec<String>) {
    let Some(map) = v.as_object() else {
        problems.push(format!("{path}: expected an object"));
        return;
    };
    for key in map.keys() {
        if !fields.iter().any(|f| f.name == key) {
            problems.push(format!("{path}.{key}: unknown field"));
        }
    }
    for f in fields {
        match map.get(f.name) {
            Some(Value::Null) | None if f.required => problems.push(format!("{path}.{}: missing", f.name)),
            Some(Value::Null) | None => {}
            Some(val) => type_ok(val, f.kind, &format!("{path}.{}", f.name), problems),
        }
    }
}

/// Checks `value` against `fields` and deserializes it.
pub fn parse<T: DeserializeOwned>(value: Value, fields: &[Field]) -> CliResult<T> {
    let mut problems = Vec::new();
    check_object(&value, fields, "config", &mut problems);
    if !problems.is_empty() {
        return Err(CliError::Schema(problems));
    }
    serde_json::from_value(value).map_err(|e| CliError::Schema(vec![e.to_string()]))
}

/// Reads the `--config` file (or starts from `{}`) and applies overrides.
pub fn load(path: Option<&std::path::Path>, overrides: Map<String, Value>) -> CliResult<Value> {
    let mut base = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str::<Value>(&text)
                .map_err(|e| CliError::Schema(vec![format!("config is not valid JSON: {e}")]))?
        }
        None => Value::Object(Map::new()),
    };
    match base.as_object_mut() {
        Some(map) => map.extend(overrides),
        None => return Err(CliError::Schema(vec!["config: expected a JSON object".into()])),
    }
    Ok(base)
}

const STATE: [Field; 3] = [req("zeta_l", Kind::Num), req("w_l", Kind::Num), req("s", Kind::Num)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureCfg {
    pub zeta_l: f64,
    pub w_l: f64,
    pub s: f64,
}

pub const CLOSURE: &[Field] = &STATE;
pub const CLOSURE_BATCH: &[Field] = &[req("closures", Kind::List(&STATE))];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureBatch {
    pub closures: Vec<ClosureCfg>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyCfg {
    pub zeta_l: f64,
    pub w_l: f64,
    pub s: f64,
    pub eps: f64,
    pub delta: f64,
}

pub const CLASSIFY: &[Field] = &[
    req("zeta_l", Kind::Num),
    req("w_l", Kind::Num),
    req("s", Kind::Num),
    req("eps", Kind::Num),
    req("delta", Kind::Num),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileCfg {
    pub zeta_l: f64,
    pub w_l: f64,
    pub s: f64,
    pub eps: f64,
    pub delta: f64,
    #[serde(default = "d_eta")]
    pub eta: f64,
    #[serde(default = "d_tol")]
    pub tol: f64,
    #[serde(default = "d_xi_span")]
    pub xi_span: f64,
    #[serde(default = "d_ode_tol")]
    pub atol: f64,
    #[serde(default = "d_ode_tol")]
    pub rtol: f64,
    #[serde(default = "d_max_step")]
    pub max_step: f64,
}

fn d_eta() -> f64 {
    1e-6
}
fn d_tol() -> f64 {
    1e-8
}
fn d_xi_span() -> f64 {
    2000.0
}
fn d_ode_tol() -> f64 {
    1e-10
}
fn d_max_step() -> f64 {
    0.05
}

pub const PROFILE: &[Field] = &[
    req("zeta_l", Kind::Num),
    req("w_l", Kind::Num),
    req("s", Kind::Num),
    req("eps", Kind::Num),
    req("delta", Kind::Num),
    opt("eta", Kind::Num),
    opt("tol", Kind::Num),
    opt("xi_span", Kind::Num),
    opt("atol", Kind::Num),
    opt("rtol", Kind::Num),
    opt("max_step", Kind::Num),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Initial {
    DamBreak {
        h_left: f64,
        h_right: f64,
        steepness: f64,
    },
    TravelingWave {
        zeta_l: f64,
        w_l: f64,
        s: f64,
        x_front: f64,
        x_join: f64,
        join_width: f64,
    },
}

const DAM_FIELDS: &[Field] = &[
    req("h_left", Kind::Num),
    req("h_right", Kind::Num),
    req("steepness", Kind::Num),
];
const TW_FIELDS: &[Field] = &[
    req("zeta_l", Kind::Num),
    req("w_l", Kind::Num),
    req("s", Kind::Num),
    req("x_front", Kind::Num),
    req("x_join", Kind::Num),
    req("join_width", Kind::Num),
];

/// One value or several; always serialized as a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "OneOrMany")]
pub struct EpsList(pub Vec<f64>);

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl From<OneOrMany> for EpsList {
    fn from(v: OneOrMany) -> Self {
        match v {
            OneOrMany::One(x) => EpsList(vec![x]),
            OneOrMany::Many(xs) => EpsList(xs),
        }
    }
}

/// Shared by `simulate` and `compare-eps`. Defaults follow the moderate
/// dispersion dam-break regime; domain, grid and times are engineering choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateCfg {
    #[serde(default = "d_delta")]
    pub delta: f64,
    #[serde(default = "d_eps")]
    pub eps: EpsList,
    #[serde(default = "d_n")]
    pub n: usize,
    #[serde(default = "d_length")]
    pub length: f64,
    #[serde(default = "d_t_end")]
    pub t_end: f64,
    #[serde(default = "d_snapshots")]
    pub snapshot_times: Vec<f64>,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default = "d_cfl")]
    pub cfl: f64,
    #[serde(default = "d_floor")]
    pub cavitation_floor: f64,
    #[serde(default = "d_initial")]
    pub initial: Initial,
}

fn d_delta() -> f64 {
    1.0 / 3.0
}
fn d_eps() -> EpsList {
    EpsList(vec![0.0, 0.05, 0.1])
}
fn d_n() -> usize {
    2048
}
fn d_length() -> f64 {
    200.0
}
fn d_t_end() -> f64 {
    10.0
}
fn d_snapshots() -> Vec<f64> {
    vec![2.5, 5.0]
}
fn d_cfl() -> f64 {
    0.25
}
fn d_floor() -> f64 {
    1e-6
}
fn d_initial() -> Initial {
    Initial::DamBreak {
        h_left: 1.5,
        h_right: 1.0,
        steepness: 0.6,
    }
}

pub const SIMULATE: &[Field] = &[
    opt("delta", Kind::Num),
    opt("eps", Kind::NumOrList),
    opt("n", Kind::Count),
    opt("length", Kind::Num),
    opt("t_end", Kind::Num),
    opt("snapshot_times", Kind::NumList),
    opt("dt", Kind::Num),
    opt("cfl", Kind::Num),
    opt("cavitation_floor", Kind::Num),
    opt(
        "initial",
        Kind::Tagged(&[("dam_break", DAM_FIELDS), ("traveling_wave", TW_FIELDS)]),
    ),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitRun {
    pub eps: f64,
    pub delta: f64,
}

/// Oscillation widths of traveling waves for a list of `(eps, delta)` pairs.
/// Without explicit `runs`, `eps` is held fixed and `deltas` swept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitCfg {
    #[serde(default = "d_limit_zeta")]
    pub zeta_l: f64,
    #[serde(default)]
    pub w_l: f64,
    #[serde(default = "d_limit_s")]
    pub s: f64,
    #[serde(default = "d_limit_eps")]
    pub eps: f64,
    #[serde(default = "d_limit_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default)]
    pub runs: Option<Vec<LimitRun>>,
    /// Half-width of the excluded front region, in oscillation widths.
    #[serde(default = "d_front_multiple")]
    pub front_multiple: f64,
}

fn d_limit_zeta() -> f64 {
    4.0
}
fn d_limit_s() -> f64 {
    4.0
}
fn d_limit_eps() -> f64 {
    0.1
}
fn d_limit_deltas() -> Vec<f64> {
    vec![4e-3, 2e-3]
}
fn d_front_multiple() -> f64 {
    10.0
}

impl LimitCfg {
    pub fn pairs(&self) -> Vec<LimitRun> {
        match &self.runs {
            Some(runs) => runs.clone(),
            None => self
                .deltas
                .iter()
                .map(|&delta| LimitRun { eps: self.eps, delta })
                .collect(),
        }
    }
}

pub const LIMIT: &[Field] = &[
    opt("zeta_l", Kind::Num),
    opt("w_l", Kind::Num),
    opt("s", Kind::Num),
    opt("eps", Kind::Num),
    opt("deltas", Kind::NumList),
    opt("runs", Kind::List(&[req("eps", Kind::Num), req("delta", Kind::Num)])),
    opt("front_multiple", Kind::Num),
];

pub type TableCfg = ClassifyCfg;
pub const TABLE: &[Field] = CLASSIFY;
