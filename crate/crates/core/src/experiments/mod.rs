//! Configurable experiments: each kind builds operators, runs a recovery
//! path against an independent truth and returns a [`Report`].

mod common;
pub mod coeff;
pub mod frame;
pub mod general;
pub mod local;
pub mod nodecay;
pub mod norms;
pub mod rect;
pub mod report;
pub mod truncate;

pub use common::{ProbeParams, RectSpec};
pub use report::{Cell, Outcome, Report, Table, Verdict, SCHEMA_VERSION};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum Experiment {
    RecoverRect(rect::RectParams),
    RecoverGeneral(general::GeneralParams),
    CoeffRecover(coeff::CoeffParams),
    LocalSubset(local::LocalParams),
    TruncateSweep(truncate::TruncateParams),
    NodecayDemo(nodecay::NodecayParams),
    FrameCheck(frame::FrameParams),
    NormEquiv(norms::NormParams),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::RecoverRect(_) => "recover-rect",
            Experiment::RecoverGeneral(_) => "recover-general",
            Experiment::CoeffRecover(_) => "coeff-recover",
            Experiment::LocalSubset(_) => "local-subset",
            Experiment::TruncateSweep(_) => "truncate-sweep",
            Experiment::NodecayDemo(_) => "nodecay-demo",
            Experiment::FrameCheck(_) => "frame-check",
            Experiment::NormEquiv(_) => "norm-equiv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(flatten)]
    pub experiment: Experiment,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn outcome(cfg: &ExperimentConfig) -> Result<Outcome> {
    let seed = cfg.seed;
    match &cfg.experiment {
        Experiment::RecoverRect(p) => rect::run(p, seed),
        Experiment::RecoverGeneral(p) => general::run(p, seed),
        Experiment::CoeffRecover(p) => coeff::run(p, seed),
        Experiment::LocalSubset(p) => local::run(p, seed),
        Experiment::TruncateSweep(p) => truncate::run(p, seed),
        Experiment::NodecayDemo(p) => nodecay::run(p, seed),
        Experiment::FrameCheck(p) => frame::run(p, seed),
        Experiment::NormEquiv(p) => norms::run(p, seed),
    }
}

/// Runs the experiment. Failures inside the run are recorded in
/// `Report::error` with `passed = false`.
pub fn run(cfg: &ExperimentConfig) -> Report {
    let start = Instant::now();
    let config = serde_json::to_value(cfg).unwrap_or(serde_json::Value::Null);
    let canonical = serde_json::to_string(&config).unwrap_or_default();
    let (out, error) = match outcome(cfg) {
        Ok(o) => (o, None),
        Err(e) => (Outcome::new(Table::new("metrics", &[])), Some(e.to_string())),
    };
    let passed = error.is_none() && out.verdicts.iter().all(|v| v.pass);
    Report {
        schema_version: SCHEMA_VERSION,
        tool_version: format!("opsamp-core {}", env!("CARGO_PKG_VERSION")),
        config_hash: report::fnv_hex(canonical.as_bytes()),
        experiment: cfg.experiment.name().to_string(),
        config,
        metrics: out.metrics,
        plots: out.plots,
        summary: out.summary,
        verdicts: out.verdicts,
        passed,
        error,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_requires_seed_and_known_kind() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "frame-check", "seed": 3}"#).unwrap();
        assert_eq!(c.seed, 3);
        assert_eq!(c.experiment, Experiment::FrameCheck(Default::default()));
        assert!(ExperimentConfig::from_json(r#"{"experiment": "frame-check"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"experiment": "nope", "seed": 1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"experiment": "norm-equiv", "seed": 1, "extra": 2}"#).is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let c = ExperimentConfig { seed: 9, experiment: Experiment::RecoverGeneral(Default::default()) };
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(report::fnv_hex(b""), "cbf29ce484222325");
        assert_eq!(report::fnv_hex(b"a"), "af63dc4c8601ec8c");
    }

    #[test]
    fn small_run_writes_all_files() {
        let p = norms::NormParams { operators: 3, ..Default::default() };
        let r = run(&ExperimentConfig { seed: 2, experiment: Experiment::NormEquiv(p) });
        assert!(r.error.is_none());
        assert!(r.passed);
        assert_eq!(r.metrics.rows.len(), 3);
        assert_eq!(r.experiment, "norm-equiv");
        let dir = tempfile::tempdir().unwrap();
        r.write(dir.path()).unwrap();
        for f in ["report.json", "metrics.csv", "plot_ratios.csv"] {
            assert!(dir.path().join(f).exists(), "{f}");
        }
        let back: Report = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
        assert_eq!(back.metrics, r.metrics);
        assert_eq!(back.config_hash, r.config_hash);
    }

    #[test]
    fn infeasible_region_is_reported() {
        let p = norms::NormParams { region: [0.0, 1.5, -0.4, 0.4], ..Default::default() };
        let r = run(&ExperimentConfig { seed: 1, experiment: Experiment::NormEquiv(p) });
        assert!(!r.passed);
        assert!(r.error.as_deref().unwrap().contains("area"));
    }

    #[test]
    fn frame_check_defaults_pass() {
        let r = run(&ExperimentConfig { seed: 1, experiment: Experiment::FrameCheck(Default::default()) });
        assert!(r.passed, "{:?}", r.verdicts);
        assert_eq!(r.verdicts.len(), 6);
    }
}
