//! The select/fit training loop, accuracy evaluation and repeated-run
//! aggregation.
//!
//! Each run owns its emulator, its copy of the training pool and its
//! generator, so runs can be executed in any order (or in parallel) and
//! aggregated afterwards by run index.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use rand::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::acquisition::{self, AcquisitionSpec, ScoreContext};
use crate::data::{DatasetSplit, MatchDataset, MatchRecord, Outcome};
use crate::emulator::{Emulator, EmulatorSpec};
use crate::error::{Error, Result};
use crate::Rng;

pub const DEFAULT_CANDIDATES: usize = 25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimulatorConfig {
    pub candidate_pool_size: usize,
    pub train_budget: usize,
    /// Budgets at which the emulator is evaluated; sorted, within `1..=train_budget`.
    pub checkpoints: Vec<usize>,
    pub runs: usize,
    pub seed: u64,
}

impl Default for SimulatorConfig {
    fn default() -> Self {
        Self { candidate_pool_size: DEFAULT_CANDIDATES, train_budget: 2000, checkpoints: alloc::vec![500, 1000, 2000], runs: 100, seed: 0 }
    }
}

impl SimulatorConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: &str| Err(Error::InvalidParameter(msg.into()));
        if self.candidate_pool_size == 0 {
            return invalid("candidate_pool_size must be at least 1");
        }
        if self.runs == 0 {
            return invalid("runs must be at least 1");
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("checkpoints must be strictly increasing");
        }
        if self.checkpoints.iter().any(|&c| c == 0 || c > self.train_budget) {
            return invalid("checkpoints must lie in 1..=train_budget");
        }
        Ok(())
    }
}

/// Generator for run `run` of an experiment seeded with `seed`: same key,
/// distinct ChaCha stream per run.
pub fn run_rng(seed: u64, run: usize) -> Rng {
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(run as u64);
    rng
}

fn correct(p: f64, outcome: Outcome) -> bool {
    match outcome {
        Outcome::Win1 => p > 0.5,
        Outcome::Win2 => p < 0.5,
        Outcome::Draw => false,
    }
}

/// Share of non-draw matches whose winner the emulator favours. A prediction
/// of exactly ½ counts as wrong.
pub fn evaluate<'a, E, I>(emulator: &E, matches: I) -> Result<f64>
where
    E: Emulator + ?Sized,
    I: IntoIterator<Item = &'a MatchRecord>,
{
    let (mut hits, mut decisive) = (0usize, 0usize);
    for m in matches {
        if m.outcome.is_draw() {
            continue;
        }
        decisive += 1;
        if correct(emulator.predict(&m.team1, &m.team2), m.outcome) {
            hits += 1;
        }
    }
    if decisive == 0 {
        return Err(Error::NoDecisiveMatches);
    }
    Ok(hits as f64 / decisive as f64)
}

/// One iteration: sample candidates, fit the best-scoring one and remove it
/// from the pool. Ties go to the earliest sampled candidate.
pub fn train_step<E: Emulator + Clone>(
    emulator: &mut E,
    af: &AcquisitionSpec,
    pool: &mut MatchDataset,
    rng: &mut Rng,
    candidate_pool_size: usize,
) -> Result<MatchRecord> {
    let candidates = pool.sample_candidates(candidate_pool_size, rng)?;
    let mut best: Option<(f64, &MatchRecord)> = None;
    {
        let mut ctx = ScoreContext { rng, holdout: Some(pool) };
        for candidate in &candidates {
            let s = acquisition::score(af, emulator, candidate, &mut ctx)?;
            if best.is_none_or(|(top, _)| s > top) {
                best = Some((s, candidate));
            }
        }
    }
    let (_, chosen) = best.expect("sample_candidates returns at least one record");
    let record = pool.pop(chosen.id)?;
    emulator.fit(&record)?;
    Ok(record)
}

/// Accuracy statistics at one checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointStats {
    pub budget: usize,
    pub mean: f64,
    pub stderr: f64,
    pub runs: usize,
    pub accuracies: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub emulator: EmulatorSpec,
    pub af: AcquisitionSpec,
    pub checkpoints: Vec<CheckpointStats>,
}

impl ExperimentReport {
    /// Aggregates per-run checkpoint accuracies, given in run order.
    pub fn from_runs(cfg: &SimulatorConfig, emulator: EmulatorSpec, af: AcquisitionSpec, runs: &[Vec<f64>]) -> Self {
        let checkpoints = cfg
            .checkpoints
            .iter()
            .enumerate()
            .map(|(i, &budget)| {
                let accuracies: Vec<f64> = runs.iter().map(|r| r[i]).collect();
                let (mean, sd) = mean_sd(&accuracies);
                CheckpointStats { budget, mean, stderr: sd / (accuracies.len() as f64).sqrt(), runs: accuracies.len(), accuracies }
            })
            .collect();
        Self { emulator, af, checkpoints }
    }

    pub fn at(&self, budget: usize) -> Option<&CheckpointStats> {
        self.checkpoints.iter().find(|c| c.budget == budget)
    }
}

/// Mean and sample standard deviation (zero for fewer than two values).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

fn check_run(cfg: &SimulatorConfig, emulator: &EmulatorSpec, af: &AcquisitionSpec, split: &DatasetSplit, budget: usize) -> Result<()> {
    cfg.validate()?;
    emulator.validate()?;
    af.check_applicable(emulator)?;
    if budget > split.train.len() {
        return Err(Error::BudgetExceedsPool { budget, pool: split.train.len() });
    }
    if split.eval.decisive_len() == 0 {
        return Err(Error::NoDecisiveMatches);
    }
    Ok(())
}

/// Executes run `run` and returns the evaluation accuracy at each checkpoint.
pub fn run_once(
    cfg: &SimulatorConfig,
    emulator: &EmulatorSpec,
    af: &AcquisitionSpec,
    split: &DatasetSplit,
    run: usize,
) -> Result<Vec<f64>> {
    check_run(cfg, emulator, af, split, cfg.train_budget)?;
    let mut rng = run_rng(cfg.seed, run);
    let mut model = emulator.build(rng.next_u64())?;
    let mut pool = split.train.clone();
    let mut out = Vec::with_capacity(cfg.checkpoints.len());
    let mut next = cfg.checkpoints.iter().peekable();
    for step in 1..=cfg.train_budget {
        train_step(&mut model, af, &mut pool, &mut rng, cfg.candidate_pool_size)?;
        if next.peek() == Some(&&step) {
            next.next();
            out.push(evaluate(&model, &split.eval)?);
        }
    }
    Ok(out)
}

/// All runs of one (emulator, acquisition function) cell, sequentially.
pub fn run_experiment(
    cfg: &SimulatorConfig,
    emulator: &EmulatorSpec,
    af: &AcquisitionSpec,
    split: &DatasetSplit,
) -> Result<ExperimentReport> {
    let runs = (0..cfg.runs).map(|r| run_once(cfg, emulator, af, split, r)).collect::<Result<Vec<_>>>()?;
    Ok(ExperimentReport::from_runs(cfg, *emulator, *af, &runs))
}

/// Mean and spread across runs at one budget of a training curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub budget: usize,
    /// Accuracy on the matches fitted so far; NaN at budget 0.
    pub train_acc_mean: f64,
    pub train_acc_sigma: f64,
    pub eval_acc_mean: f64,
    pub eval_acc_sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingCurve {
    pub emulator: EmulatorSpec,
    pub af: AcquisitionSpec,
    pub points: Vec<CurvePoint>,
}

/// `0, step, 2·step, …` up to and including `pool`.
pub fn curve_grid(pool: usize, step: usize) -> Vec<usize> {
    let step = step.max(1);
    let mut grid: Vec<usize> = (0..pool).step_by(step).collect();
    grid.push(pool);
    grid
}

/// (train accuracy, eval accuracy) at each grid budget for one run that
/// trains until the pool is empty.
pub fn run_curve_once(
    cfg: &SimulatorConfig,
    step: usize,
    emulator: &EmulatorSpec,
    af: &AcquisitionSpec,
    split: &DatasetSplit,
    run: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut whole = cfg.clone();
    whole.train_budget = split.train.len();
    whole.checkpoints.clear();
    check_run(&whole, emulator, af, split, whole.train_budget)?;

    let mut rng = run_rng(cfg.seed, run);
    let mut model = emulator.build(rng.next_u64())?;
    let mut pool = split.train.clone();
    let mut seen: Vec<MatchRecord> = Vec::with_capacity(pool.len());
    let mut out = Vec::new();
    for budget in curve_grid(split.train.len(), step) {
        while seen.len() < budget {
            seen.push(train_step(&mut model, af, &mut pool, &mut rng, cfg.candidate_pool_size)?);
        }
        let train_acc = match evaluate(&model, &seen) {
            Ok(acc) => acc,
            Err(Error::NoDecisiveMatches) => f64::NAN,
            Err(e) => return Err(e),
        };
        out.push((train_acc, evaluate(&model, &split.eval)?));
    }
    Ok(out)
}

impl TrainingCurve {
    pub fn from_runs(grid: &[usize], emulator: EmulatorSpec, af: AcquisitionSpec, runs: &[Vec<(f64, f64)>]) -> Self {
        let points = grid
            .iter()
            .enumerate()
            .map(|(i, &budget)| {
                let train: Vec<f64> = runs.iter().map(|r| r[i].0).collect();
                let eval: Vec<f64> = runs.iter().map(|r| r[i].1).collect();
                let (train_acc_mean, train_acc_sigma) = mean_sd(&train);
                let (eval_acc_mean, eval_acc_sigma) = mean_sd(&eval);
                CurvePoint { budget, train_acc_mean, train_acc_sigma, eval_acc_mean, eval_acc_sigma }
            })
            .collect();
        Self { emulator, af, points }
    }
}

pub fn run_training_curve(
    cfg: &SimulatorConfig,
    step: usize,
    emulator: &EmulatorSpec,
    af: &AcquisitionSpec,
    split: &DatasetSplit,
) -> Result<TrainingCurve> {
    let runs = (0..cfg.runs).map(|r| run_curve_once(cfg, step, emulator, af, split, r)).collect::<Result<Vec<_>>>()?;
    Ok(TrainingCurve::from_runs(&curve_grid(split.train.len(), step), *emulator, *af, &runs))
}
