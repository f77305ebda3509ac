//! TOML run configuration shared by every command.
//!
//! ```toml
//! seed = 7
//! out = "results"
//!
//! [dataset]
//! path = "matches.csv"      # or a [dataset.synth] table
//! split_seed = 0
//!
//! [[emulators]]
//! kind = "trueskill"
//! beta = 4.0
//!
//! [[afs]]
//! kind = "Weighted"
//! alpha = 1.0
//!
//! [simulator]
//! train_budget = 2000
//! checkpoints = [500, 1000, 2000]
//! runs = 100
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use skillbench_core::gp::GpConfig;
use skillbench_core::sensitivity::{GridSpec, SweepConfig, SweepParam};
use skillbench_core::simulator::DEFAULT_CANDIDATES;
use skillbench_core::synth::SynthConfig;
use skillbench_core::{AcquisitionSpec, EmulatorSpec, SimulatorConfig};

use crate::dataset::Format;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    /// Master seed for simulator runs and sweeps.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub dataset: DatasetSection,
    #[serde(default)]
    pub emulators: Vec<EmulatorSpec>,
    #[serde(default)]
    pub afs: Vec<AcquisitionSpec>,
    #[serde(default)]
    pub simulator: SimulatorSection,
    #[serde(default)]
    pub curve: CurveSection,
    #[serde(default)]
    pub sensitivity: SensitivitySection,
    /// Generator settings for the `synth` command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthConfig>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub synth: Option<SynthConfig>,
    #[serde(default)]
    pub split_seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulatorSection {
    pub candidate_pool_size: usize,
    pub train_budget: usize,
    pub checkpoints: Vec<usize>,
    pub runs: usize,
}

impl Default for SimulatorSection {
    fn default() -> Self {
        let d = SimulatorConfig::default();
        Self { candidate_pool_size: d.candidate_pool_size, train_budget: d.train_budget, checkpoints: d.checkpoints, runs: d.runs }
    }
}

impl SimulatorSection {
    pub fn with_seed(&self, seed: u64) -> SimulatorConfig {
        SimulatorConfig {
            candidate_pool_size: self.candidate_pool_size,
            train_budget: self.train_budget,
            checkpoints: self.checkpoints.clone(),
            runs: self.runs,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveSection {
    /// Spacing of the budget grid.
    pub step: usize,
}

impl Default for CurveSection {
    fn default() -> Self {
        Self { step: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SensitivitySection {
    pub variants: Vec<EmulatorSpec>,
    pub pairs: Vec<(SweepParam, SweepParam)>,
    pub resolution: usize,
    pub span: f64,
    pub budget: usize,
    pub af: AcquisitionSpec,
    pub runs_per_point: usize,
    pub candidate_pool_size: usize,
    pub display_resolution: usize,
    /// Allowed gap between the smoothed optimum and the default point.
    pub tolerance: f64,
    pub gp: GpConfig,
}

impl Default for SensitivitySection {
    fn default() -> Self {
        Self {
            variants: vec![EmulatorSpec::TrueSkill(Default::default()), EmulatorSpec::TrueSkillPlayers(Default::default())],
            pairs: SweepParam::pairs().to_vec(),
            resolution: 7,
            span: 1.0,
            budget: 2000,
            af: AcquisitionSpec::LikeliestDraw,
            runs_per_point: 1,
            candidate_pool_size: DEFAULT_CANDIDATES,
            display_resolution: 41,
            tolerance: 0.02,
            gp: GpConfig::default(),
        }
    }
}

impl SensitivitySection {
    pub fn grid(&self, pair: (SweepParam, SweepParam)) -> GridSpec {
        GridSpec { pair, resolution: self.resolution, span: self.span }
    }

    pub fn sweep(&self, seed: u64) -> SweepConfig {
        SweepConfig {
            budget: self.budget,
            af: self.af,
            runs_per_point: self.runs_per_point,
            candidate_pool_size: self.candidate_pool_size,
            seed,
        }
    }
}

/// A configuration problem, located by a dotted field path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid config:\n  {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n  "))]
    Invalid(Vec<FieldError>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Table,
    Curve,
    Sensitivity,
    Synth,
    ValidateDataset,
}

impl RunConfigFile {
    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    /// Reads a config file. Relative `dataset.path` and `out` are resolved
    /// against the file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let mut cfg = Self::parse(&text).map_err(|source| ConfigError::Parse { path: path.to_path_buf(), source })?;
        let dir = path.parent().unwrap_or(Path::new(""));
        for p in [cfg.dataset.path.as_mut(), cfg.out.as_mut()].into_iter().flatten() {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// Canonical TOML form, used for hashing.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs always serialize")
    }

    pub fn validate(&self, command: Command) -> Result<(), ConfigError> {
        let mut errors = Vec::new();
        let mut err = |path: String, message: String| errors.push(FieldError { path, message });

        let needs_dataset = !matches!(command, Command::Synth);
        if needs_dataset {
            match (&self.dataset.path, &self.dataset.synth) {
                (None, None) => err("dataset".into(), "set either dataset.path or a [dataset.synth] table".into()),
                (Some(_), Some(_)) => err("dataset".into(), "dataset.path and dataset.synth are mutually exclusive".into()),
                (None, Some(s)) => {
                    if let Err(e) = s.validate() {
                        err("dataset.synth".into(), e.to_string());
                    }
                }
                _ => {}
            }
        }

        if matches!(command, Command::Table | Command::Curve) {
            if self.emulators.is_empty() {
                err("emulators".into(), "at least one emulator is required".into());
            }
            if self.afs.is_empty() {
                err("afs".into(), "at least one acquisition function is required".into());
            }
            for (i, e) in self.emulators.iter().enumerate() {
                if let Err(x) = e.validate() {
                    err(format!("emulators[{i}]"), x.to_string());
                }
            }
            for (i, af) in self.afs.iter().enumerate() {
                // pairings are checked per cell; only the parameters matter here
                if let Err(x) = af.check_applicable(&EmulatorSpec::TrueSkill(Default::default())) {
                    err(format!("afs[{i}]"), x.to_string());
                }
            }
            let sim = &self.simulator;
            if sim.candidate_pool_size == 0 {
                err("simulator.candidate_pool_size".into(), "must be at least 1".into());
            }
            if sim.runs == 0 {
                err("simulator.runs".into(), "must be at least 1".into());
            }
        }
        if command == Command::Table {
            let sim = &self.simulator;
            if sim.checkpoints.is_empty() {
                err("simulator.checkpoints".into(), "at least one checkpoint is required".into());
            }
            if sim.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
                err("simulator.checkpoints".into(), "must be strictly increasing".into());
            }
            if let Some(&c) = sim.checkpoints.iter().find(|&&c| c == 0 || c > sim.train_budget) {
                err("simulator.checkpoints".into(), format!("checkpoint {c} is outside 1..={}", sim.train_budget));
            }
        }
        if command == Command::Curve && self.curve.step == 0 {
            err("curve.step".into(), "must be at least 1".into());
        }
        if command == Command::Sensitivity {
            let s = &self.sensitivity;
            if s.variants.is_empty() {
                err("sensitivity.variants".into(), "at least one TrueSkill variant is required".into());
            }
            for (i, v) in s.variants.iter().enumerate() {
                if !v.is_trueskill() {
                    err(format!("sensitivity.variants[{i}]"), format!("{} is not a TrueSkill emulator", v.name()));
                } else if let Err(x) = v.validate() {
                    err(format!("sensitivity.variants[{i}]"), x.to_string());
                }
            }
            if s.pairs.is_empty() {
                err("sensitivity.pairs".into(), "at least one parameter pair is required".into());
            }
            for (i, &pair) in s.pairs.iter().enumerate() {
                if let Err(x) = s.grid(pair).validate() {
                    err(format!("sensitivity.pairs[{i}]"), x.to_string());
                }
            }
            if s.resolution < 3 || s.resolution.is_multiple_of(2) {
                err("sensitivity.resolution".into(), "must be odd and at least 3".into());
            }
            if s.display_resolution < 3 || s.display_resolution.is_multiple_of(2) {
                err("sensitivity.display_resolution".into(), "must be odd and at least 3".into());
            }
            if s.budget == 0 {
                err("sensitivity.budget".into(), "must be at least 1".into());
            }
            if s.runs_per_point == 0 {
                err("sensitivity.runs_per_point".into(), "must be at least 1".into());
            }
            if let Err(x) = s.gp.validate() {
                err("sensitivity.gp".into(), x.to_string());
            }
            if s.tolerance.is_nan() || s.tolerance < 0.0 {
                err("sensitivity.tolerance".into(), "must be non-negative".into());
            }
        }
        if command == Command::Synth {
            match &self.synth {
                None => err("synth".into(), "a [synth] table is required".into()),
                Some(s) => {
                    if let Err(x) = s.validate() {
                        err("synth".into(), x.to_string());
                    }
                }
            }
        }

        if errors.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(errors))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = r#"
        seed = 3
        [dataset]
        path = "m.csv"
        [[emulators]]
        kind = "elo"
        k = 16.0
        [[emulators]]
        kind = "tsplayers"
        [[afs]]
        kind = "Weighted"
        alpha = 2.0
        [[afs]]
        kind = "TSQuality"
        [simulator]
        train_budget = 100
        checkpoints = [50, 100]
        runs = 4
    "#;

    #[test]
    fn parses_table_config() {
        let cfg = RunConfigFile::parse(TABLE).unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.emulators.len(), 2);
        assert!(matches!(cfg.emulators[0], EmulatorSpec::Elo(p) if p.k == 16.0));
        assert!(matches!(cfg.afs[0], AcquisitionSpec::Weighted(p) if p.alpha == 2.0 && p.beta_w == 1.0));
        assert_eq!(cfg.simulator.candidate_pool_size, 25);
        cfg.validate(Command::Table).unwrap();
        let again = RunConfigFile::parse(&cfg.to_toml()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn empty_emulator_list_is_rejected() {
        let mut cfg = RunConfigFile::parse(TABLE).unwrap();
        cfg.emulators.clear();
        let msg = cfg.validate(Command::Table).unwrap_err().to_string();
        assert!(msg.contains("emulators: at least one"), "{msg}");
    }

    #[test]
    fn errors_name_field_paths() {
        let text = TABLE.replace("k = 16.0", "k = -1.0").replace("[50, 100]", "[100, 50]");
        let msg = RunConfigFile::parse(&text).unwrap().validate(Command::Table).unwrap_err().to_string();
        assert!(msg.contains("emulators[0]:"), "{msg}");
        assert!(msg.contains("simulator.checkpoints:"), "{msg}");
        let msg = RunConfigFile::parse("[dataset]\n").unwrap().validate(Command::Curve).unwrap_err().to_string();
        assert!(msg.contains("dataset:"), "{msg}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(RunConfigFile::parse("sed = 1\n").is_err());
        assert!(RunConfigFile::parse("[simulator]\nbudget = 1\n").is_err());
    }

    #[test]
    fn sensitivity_section() {
        let text = r#"
            [dataset.synth]
            n_teams = 10
            matches = 100
            [sensitivity]
            variants = [{ kind = "trueskill" }, { kind = "elo" }]
            pairs = [["sigma", "beta"]]
            resolution = 4
        "#;
        let msg = RunConfigFile::parse(text).unwrap().validate(Command::Sensitivity).unwrap_err().to_string();
        assert!(msg.contains("sensitivity.variants[1]"), "{msg}");
        assert!(msg.contains("sensitivity.resolution"), "{msg}");
        let ok = RunConfigFile::parse("[dataset.synth]\nn_teams = 10\n").unwrap();
        ok.validate(Command::Sensitivity).unwrap();
        assert_eq!(ok.sensitivity.pairs.len(), 3);
    }

    #[test]
    fn readme_example_parses() {
        let readme = include_str!("../../../README.md");
        let block = readme.split("## Configuration").nth(1).unwrap().split("```toml\n").nth(1).unwrap().split("```").next().unwrap();
        let cfg = RunConfigFile::parse(block).unwrap();
        assert_eq!(cfg.sensitivity.pairs.len(), 3);
        assert!(cfg.synth.is_some());
        for c in [Command::Table, Command::Curve, Command::Sensitivity, Command::Synth] {
            cfg.validate(c).unwrap();
        }
    }
}
