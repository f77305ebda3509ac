//! The five commands. Each writes CSV files plus `manifest.json` into the
//! output directory and returns the list of files written.

use std::path::{Path, PathBuf};

use anyhow::Context;
use skillbench_core::sensitivity::{SensitivitySurface, SweepParam};
use skillbench_core::synth::{self, generate};
use skillbench_core::DatasetSplit;

use crate::config::{Command, RunConfigFile};
use crate::dataset::{self, load_dataset, synth_names, LoadedDataset};
use crate::manifest::{sha256_hex, Manifest};
use crate::report;
use crate::runner::{self, pair_label};

/// Values given on the command line; they win over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

pub const DEFAULT_OUT: &str = "out";

struct Ctx {
    cfg: RunConfigFile,
    out: PathBuf,
    manifest: Manifest,
}

impl Ctx {
    fn new(name: &str, mut cfg: RunConfigFile, command: Command, ov: &Overrides) -> anyhow::Result<Self> {
        if let Some(seed) = ov.seed {
            cfg.seed = seed;
            if let Some(s) = cfg.synth.as_mut().filter(|_| command == Command::Synth) {
                s.seed = seed;
            }
        }
        if let Some(out) = &ov.out {
            cfg.out = Some(out.clone());
        }
        cfg.validate(command)?;
        let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
        let manifest = Manifest::new(name, &cfg);
        Ok(Self { cfg, out, manifest })
    }

    fn emit(&mut self, name: &str, bytes: Vec<u8>) -> anyhow::Result<()> {
        let path = self.out.join(name);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(&path, &bytes).with_context(|| format!("writing {}", path.display()))?;
        self.manifest.record(name, &bytes);
        Ok(())
    }

    fn finish(self) -> anyhow::Result<Vec<PathBuf>> {
        self.manifest.write(&self.out)?;
        let mut files: Vec<PathBuf> = self.manifest.outputs.iter().map(|o| self.out.join(&o.path)).collect();
        files.push(self.out.join("manifest.json"));
        Ok(files)
    }

    fn load(&mut self) -> anyhow::Result<(LoadedDataset, DatasetSplit)> {
        let d = &self.cfg.dataset;
        let loaded = match (&d.path, &d.synth) {
            (Some(path), _) => {
                let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                self.manifest.dataset_sha256 = Some(sha256_hex(&bytes));
                load_dataset(path, d.format)?
            }
            (None, Some(s)) => {
                let synth = generate(s)?;
                let names = synth_names(&synth);
                LoadedDataset { dataset: synth.dataset, names }
            }
            (None, None) => unreachable!("validated"),
        };
        let split = loaded.dataset.split(d.split_seed)?;
        Ok((loaded, split))
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> anyhow::Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

/// Emulator × AF grid at every checkpoint: `table.csv` and `table_runs.csv`.
pub fn table(cfg: RunConfigFile, ov: &Overrides) -> anyhow::Result<Vec<PathBuf>> {
    let mut ctx = Ctx::new("table", cfg, Command::Table, ov)?;
    let (_, split) = ctx.load()?;
    let c = &ctx.cfg;
    let sim = c.simulator.with_seed(c.seed);
    let pool = runner::pool(ov.jobs)?;
    let cells = runner::table(&pool, &sim, &c.emulators, &c.afs, &split)?;
    let labels = report::emulator_labels(&c.emulators);
    let table = csv_bytes(|b| report::write_table(b, &cells, &labels, &sim.checkpoints))?;
    let runs = csv_bytes(|b| report::write_table_runs(b, &cells, &labels))?;
    ctx.emit("table.csv", table)?;
    ctx.emit("table_runs.csv", runs)?;
    ctx.finish()
}

/// One `curve_<emulator>_<af>.csv` per applicable pairing.
pub fn curve(cfg: RunConfigFile, ov: &Overrides) -> anyhow::Result<Vec<PathBuf>> {
    let mut ctx = Ctx::new("curve", cfg, Command::Curve, ov)?;
    let (_, split) = ctx.load()?;
    let c = ctx.cfg.clone();
    let sim = c.simulator.with_seed(c.seed);
    let pool = runner::pool(ov.jobs)?;
    let curves = runner::curves(&pool, &sim, c.curve.step, &c.emulators, &c.afs, &split)?;
    let labels = report::emulator_labels(&c.emulators);
    let mut k = 0;
    for (label, e) in labels.iter().zip(&c.emulators) {
        for a in &c.afs {
            if a.check_applicable(e).is_err() {
                continue;
            }
            let bytes = csv_bytes(|b| report::write_curve(b, &curves[k]))?;
            ctx.emit(&format!("curve_{label}_{}.csv", a.name()), bytes)?;
            k += 1;
        }
    }
    ctx.finish()
}

/// Raw and smoothed surfaces for each (variant, pair), plus
/// `sensitivity_summary.csv` and `sensitivity_ranges.csv`.
pub fn sensitivity(cfg: RunConfigFile, ov: &Overrides) -> anyhow::Result<Vec<PathBuf>> {
    let mut ctx = Ctx::new("sensitivity", cfg, Command::Sensitivity, ov)?;
    let (_, split) = ctx.load()?;
    let s = ctx.cfg.sensitivity.clone();
    let sweep = s.sweep(ctx.cfg.seed);
    let grids: Vec<_> = s.pairs.iter().map(|&p| s.grid(p)).collect();
    let pool = runner::pool(ov.jobs)?;
    let raws = runner::sensitivity_grids(&pool, &sweep, &s.variants, &grids, &split)?;
    let labels = report::emulator_labels(&s.variants);

    let mut surfaces: Vec<(String, SensitivitySurface)> = Vec::new();
    for (i, raw) in raws.into_iter().enumerate() {
        let label = labels[i / grids.len()].clone();
        let surface = SensitivitySurface::fit(raw, &s.gp, s.display_resolution, s.tolerance)?;
        let stem = format!("surface_{label}_{}", pair_label(surface.raw.spec.pair));
        ctx.emit(&format!("{stem}_raw.csv"), csv_bytes(|b| report::write_surface_raw(b, &surface))?)?;
        ctx.emit(&format!("{stem}_smoothed.csv"), csv_bytes(|b| report::write_surface_smoothed(b, &surface))?)?;
        surfaces.push((label, surface));
    }
    ctx.emit("sensitivity_summary.csv", csv_bytes(|b| report::write_surface_summary(b, &surfaces))?)?;

    let ranges = csv_bytes(|b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(["variant", "range"])?;
        for label in &labels {
            let r = report::union_range(surfaces.iter().filter(|(l, _)| l == label).map(|(_, s)| s));
            w.write_record([label.as_str(), &report::fmt_f64(r)])?;
        }
        w.flush()?;
        Ok(())
    })?;
    ctx.emit("sensitivity_ranges.csv", ranges)?;
    ctx.finish()
}

/// `matches.csv` (or `.jsonl`) plus `latent_skills.csv` and
/// `bayes_accuracy.csv`.
pub fn synth(cfg: RunConfigFile, ov: &Overrides) -> anyhow::Result<Vec<PathBuf>> {
    let mut ctx = Ctx::new("synth", cfg, Command::Synth, ov)?;
    let sc = ctx.cfg.synth.expect("validated");
    let data = generate(&sc)?;
    let names = synth_names(&data);
    match ctx.cfg.dataset.format.unwrap_or(dataset::Format::Csv) {
        dataset::Format::Csv => {
            let bytes = csv_bytes(|b| dataset::write_csv(b, &data.dataset, &names))?;
            ctx.emit("matches.csv", bytes)?;
        }
        dataset::Format::Jsonl => {
            let mut bytes = Vec::new();
            dataset::write_jsonl(&mut bytes, &data.dataset, &names)?;
            ctx.emit("matches.jsonl", bytes)?;
        }
    }
    ctx.emit("latent_skills.csv", csv_bytes(|b| dataset::write_latent_csv(b, &data, &names))?)?;
    let bayes = synth::bayes_accuracy(&data).unwrap_or(f64::NAN);
    ctx.emit("bayes_accuracy.csv", format!("bayes_accuracy\n{}\n", report::fmt_f64(bayes)).into_bytes())?;
    ctx.finish()
}

/// Loads the dataset, reporting the first bad row, and writes
/// `dataset_summary.csv`. `path` overrides the configured dataset.
pub fn validate_dataset(cfg: RunConfigFile, path: Option<&Path>, ov: &Overrides) -> anyhow::Result<Vec<PathBuf>> {
    let mut cfg = cfg;
    if let Some(p) = path {
        cfg.dataset.path = Some(p.to_path_buf());
        cfg.dataset.synth = None;
    }
    let mut ctx = Ctx::new("validate-dataset", cfg, Command::ValidateDataset, ov)?;
    let (loaded, split) = ctx.load()?;
    let s = dataset::summarize(&loaded);
    let mut bytes = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut bytes);
        w.write_record(["matches", "teams", "players", "win1", "win2", "draws", "train", "eval"])?;
        w.write_record(
            [s.matches, s.teams, s.players, s.win1, s.win2, s.draws, split.train.len(), split.eval.len()].map(|v| v.to_string()),
        )?;
        w.flush()?;
    }
    ctx.emit("dataset_summary.csv", bytes)?;
    ctx.finish()
}

/// Parses `sigma-beta` style pair names.
pub fn parse_pair(s: &str) -> anyhow::Result<(SweepParam, SweepParam)> {
    let param = |p: &str| match p.trim().to_ascii_lowercase().as_str() {
        "sigma" => Ok(SweepParam::Sigma),
        "beta" => Ok(SweepParam::Beta),
        "tau" => Ok(SweepParam::Tau),
        other => Err(anyhow::anyhow!("unknown parameter {other:?} (expected sigma, beta or tau)")),
    };
    let (a, b) = s.split_once('-').ok_or_else(|| anyhow::anyhow!("expected a pair like sigma-beta, got {s:?}"))?;
    Ok((param(a)?, param(b)?))
}
