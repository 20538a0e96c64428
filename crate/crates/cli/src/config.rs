//! Run configuration: a single JSON document whose hyperparameter keys use
//! the published names verbatim, validated before any computation starts.

use nnadapt::adapt::Hyperparameters;
use nnadapt::moea::CostFunction;
use nnadapt::problems::ejector::EjectorProblem;
use nnadapt::problems::zdt::{ZdtProblem, ZdtVariant};
use nnadapt::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// What a single invocation does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Baseline,
    Adapt,
    Benchmark,
    Stats,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Baseline => "baseline",
            Mode::Adapt => "adapt",
            Mode::Benchmark => "benchmark",
            Mode::Stats => "stats",
        }
    }
}

/// Hyperparameter overrides. Every field is optional; omitted ones fall back
/// to the defaults for the problem kind.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HpOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_hlrs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_dnn: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_means: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_min: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_smp: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_pop: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_gen: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_ver: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
}

impl HpOverrides {
    /// Applies the overrides on top of the defaults for `kind` and validates
    /// the result. When the layer count or size bounds change without an
    /// explicit `initial_means`, the means are rebuilt from the midpoint
    /// formula so the configuration stays self-consistent.
    pub fn resolve(&self, kind: &str) -> Result<Hyperparameters> {
        let mut hp = Hyperparameters::for_problem_kind(kind)?;
        if let Some(v) = self.n_hlrs {
            hp.n_hlrs = v;
        }
        if let Some(v) = self.n_min {
            hp.n_min = v;
        }
        if let Some(v) = self.n_max {
            hp.n_max = v;
        }
        match &self.initial_means {
            Some(m) => hp.initial_means = m.clone(),
            None => {
                if self.n_hlrs.is_some() || self.n_min.is_some() || self.n_max.is_some() {
                    let mid = 0.5 * (hp.n_max as f64 + hp.n_min as f64);
                    hp.initial_means = vec![mid; hp.n_hlrs];
                }
            }
        }
        if let Some(v) = self.n_dnn {
            hp.n_dnn = v;
        }
        if let Some(v) = self.r_n {
            hp.r_n = v;
        }
        if let Some(v) = self.n_smp {
            hp.n_smp = v;
        }
        if let Some(v) = self.n_pop {
            hp.n_pop = v;
        }
        if let Some(v) = self.n_gen {
            hp.n_gen = v;
        }
        if let Some(v) = self.n_ver {
            hp.n_ver = v;
        }
        if let Some(v) = self.epsilon {
            hp.epsilon = v;
        }
        if let Some(v) = self.k_max {
            hp.k_max = v;
        }
        hp.validate()?;
        Ok(hp)
    }
}

/// One run's complete configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Problem name: `zdt1` … `zdt4`, `zdt6`, or `ejector`.
    pub problem: String,
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    /// Output directory for the run's artifacts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Optional CSV archive consumed in its original evaluation order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_source: Option<PathBuf>,
    /// Cumulative training-set sizes, one per iteration, strictly
    /// increasing. Defaults to 10, 30, 100, 300, 500, then thousands up to
    /// the data-source size. Only meaningful for adapt and benchmark modes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<usize>>,
    /// Write bank/log snapshots every this many iterations; 0 disables.
    #[serde(default)]
    pub checkpoint_every: usize,
    #[serde(default)]
    pub hyperparameters: HpOverrides,
}

impl RunConfig {
    /// Checks everything that can be checked without touching the
    /// filesystem; resolution errors surface as config errors.
    pub fn validate(&self) -> Result<()> {
        let kind = problem_kind(&self.problem)?;
        self.hyperparameters.resolve(kind)?;
        if let Some(s) = &self.schedule {
            if matches!(self.mode, Mode::Baseline | Mode::Stats) {
                return Err(Error::InvalidArgument(format!(
                    "a schedule makes no sense in {} mode",
                    self.mode.as_str()
                )));
            }
            if s.is_empty() {
                return Err(Error::InvalidArgument("schedule must not be empty".into()));
            }
            if s[0] < 10 || s.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidArgument(
                    "schedule sizes must be strictly increasing and start at 10 or more".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn resolved_hyperparameters(&self) -> Result<Hyperparameters> {
        self.hyperparameters.resolve(problem_kind(&self.problem)?)
    }

    /// The output directory, which every non-stats mode requires.
    pub fn out_dir(&self) -> Result<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("config is missing the output directory".into()))
    }
}

/// Reads and validates a configuration file. Malformed JSON and unknown keys
/// are config errors, not I/O errors.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let cfg: RunConfig = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidArgument(format!("config {}: {e}", path.display())))?;
    cfg.validate()?;
    Ok(cfg)
}

/// The defaults family a problem belongs to.
pub fn problem_kind(name: &str) -> Result<&'static str> {
    match name {
        "zdt1" | "zdt2" | "zdt3" | "zdt4" | "zdt6" => Ok("zdt-bench"),
        "ejector" => Ok("real-life"),
        other => Err(Error::InvalidArgument(format!("unknown problem '{other}'"))),
    }
}

/// A constructed problem instance, tagged so commands can reach the analytic
/// optimum when one exists.
pub enum BuiltProblem {
    Zdt(ZdtProblem),
    Ejector(EjectorProblem),
}

impl BuiltProblem {
    pub fn build(name: &str) -> Result<BuiltProblem> {
        match name {
            "ejector" => Ok(BuiltProblem::Ejector(EjectorProblem::default())),
            other => Ok(BuiltProblem::Zdt(ZdtProblem::new(ZdtVariant::from_name(other)?))),
        }
    }

    pub fn cost(&self) -> &dyn CostFunction {
        match self {
            BuiltProblem::Zdt(p) => p,
            BuiltProblem::Ejector(p) => p,
        }
    }

    pub fn zdt(&self) -> Option<&ZdtProblem> {
        match self {
            BuiltProblem::Zdt(p) => Some(p),
            BuiltProblem::Ejector(_) => None,
        }
    }
}

/// Default population/generation counts for a plain baseline run.
pub fn baseline_pop_gen(cfg: &RunConfig) -> Result<(usize, usize)> {
    let defaults = match problem_kind(&cfg.problem)? {
        "real-life" => (320, 30),
        _ => (250, 100),
    };
    Ok((
        cfg.hyperparameters.n_pop.unwrap_or(defaults.0),
        cfg.hyperparameters.n_gen.unwrap_or(defaults.1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses_and_resolves_defaults() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"problem": "zdt1", "mode": "baseline"}"#).unwrap();
        cfg.validate().unwrap();
        let hp = cfg.resolved_hyperparameters().unwrap();
        assert_eq!(hp.n_dnn, 4);
        assert_eq!(hp.n_smp, 1000);
        assert_eq!(cfg.seed, 0);
        assert_eq!(baseline_pop_gen(&cfg).unwrap(), (250, 100));
    }

    #[test]
    fn ejector_defaults_use_the_real_life_table() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"problem": "ejector", "mode": "adapt"}"#).unwrap();
        let hp = cfg.resolved_hyperparameters().unwrap();
        assert_eq!(hp.n_dnn, 10);
        assert_eq!(hp.n_smp, 600);
        assert_eq!(hp.epsilon, 0.05);
        assert_eq!(baseline_pop_gen(&cfg).unwrap(), (320, 30));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<RunConfig>(
            r#"{"problem": "zdt1", "mode": "adapt", "n_pop": 10}"#,
        );
        assert!(err.is_err());
        let err = serde_json::from_str::<RunConfig>(
            r#"{"problem": "zdt1", "mode": "adapt", "hyperparameters": {"npop": 10}}"#,
        );
        assert!(err.is_err());
    }

    #[test]
    fn hyperparameter_keys_use_published_names() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{
                "problem": "zdt2",
                "mode": "adapt",
                "seed": 7,
                "hyperparameters": {
                    "n_hlrs": 2, "n_dnn": 3, "r_n": 2.0, "n_min": 2, "n_max": 10,
                    "n_smp": 50, "n_pop": 20, "n_gen": 5, "n_ver": 4,
                    "epsilon": 0.01, "k_max": 3
                }
            }"#,
        )
        .unwrap();
        let hp = cfg.resolved_hyperparameters().unwrap();
        assert_eq!(hp.n_hlrs, 2);
        // Means rebuilt from the midpoint formula for the new bounds.
        assert_eq!(hp.initial_means, vec![6.0, 6.0]);
        assert_eq!(hp.k_max, 3);
        assert_eq!(hp.epsilon, 0.01);
    }

    #[test]
    fn inconsistent_overrides_fail_validation() {
        // Means length no longer matches the layer count.
        let cfg: RunConfig = serde_json::from_str(
            r#"{
                "problem": "zdt1",
                "mode": "adapt",
                "hyperparameters": {"n_hlrs": 2, "initial_means": [5.0, 5.0, 5.0]}
            }"#,
        )
        .unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn schedule_rules_are_enforced() {
        let ok: RunConfig = serde_json::from_str(
            r#"{"problem": "zdt1", "mode": "benchmark", "schedule": [10, 30, 100]}"#,
        )
        .unwrap();
        ok.validate().unwrap();
        let not_increasing: RunConfig = serde_json::from_str(
            r#"{"problem": "zdt1", "mode": "benchmark", "schedule": [10, 10]}"#,
        )
        .unwrap();
        assert!(not_increasing.validate().is_err());
        let misplaced: RunConfig = serde_json::from_str(
            r#"{"problem": "zdt1", "mode": "baseline", "schedule": [10, 30]}"#,
        )
        .unwrap();
        assert!(misplaced.validate().is_err());
    }

    #[test]
    fn unknown_problem_is_a_config_error() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"problem": "zdt5", "mode": "adapt"}"#).unwrap();
        assert!(matches!(cfg.validate(), Err(Error::InvalidArgument(_))));
    }
}
