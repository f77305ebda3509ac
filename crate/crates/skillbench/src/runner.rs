//! Parallel drivers. Every task is independent and seeded by its run index,
//! and results are collected in task order, so the output does not depend on
//! the number of workers.

use rayon::prelude::*;
use skillbench_core::sensitivity::{self, GridSpec, RawGrid, SweepConfig, SweepParam};
use skillbench_core::simulator::{self, curve_grid};
use skillbench_core::{AcquisitionSpec, DatasetSplit, EmulatorSpec, ExperimentReport, SimulatorConfig, TrainingCurve};

/// A worker pool; `None` uses one thread per core.
pub fn pool(jobs: Option<usize>) -> anyhow::Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        anyhow::ensure!(n >= 1, "--jobs must be at least 1");
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

fn par_map<T: Sync, R: Send>(pool: &rayon::ThreadPool, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    pool.install(|| items.par_iter().map(f).collect())
}

/// One (emulator, AF) cell of the table; `report` is `None` when the pairing
/// is undefined.
#[derive(Clone, Debug, PartialEq)]
pub struct TableCell {
    pub emulator: EmulatorSpec,
    pub af: AcquisitionSpec,
    pub report: Option<ExperimentReport>,
}

pub fn table(
    pool: &rayon::ThreadPool,
    cfg: &SimulatorConfig,
    emulators: &[EmulatorSpec],
    afs: &[AcquisitionSpec],
    split: &DatasetSplit,
) -> anyhow::Result<Vec<TableCell>> {
    let cells: Vec<(EmulatorSpec, AcquisitionSpec)> = emulators.iter().flat_map(|&e| afs.iter().map(move |&a| (e, a))).collect();
    let tasks: Vec<(usize, usize)> = cells
        .iter()
        .enumerate()
        .filter(|(_, (e, a))| a.check_applicable(e).is_ok())
        .flat_map(|(i, _)| (0..cfg.runs).map(move |r| (i, r)))
        .collect();
    let results = par_map(pool, &tasks, |&(i, r)| simulator::run_once(cfg, &cells[i].0, &cells[i].1, split, r));

    let mut per_cell: Vec<Vec<Vec<f64>>> = vec![Vec::new(); cells.len()];
    for (&(i, _), res) in tasks.iter().zip(results) {
        let (e, a) = cells[i];
        per_cell[i].push(res.map_err(|err| anyhow::anyhow!("{} × {}: {err}", e.name(), a.name()))?);
    }
    Ok(cells
        .iter()
        .zip(per_cell)
        .map(|(&(emulator, af), runs)| TableCell {
            emulator,
            af,
            report: (!runs.is_empty()).then(|| ExperimentReport::from_runs(cfg, emulator, af, &runs)),
        })
        .collect())
}

/// Training curves for every applicable pairing; undefined pairings are
/// skipped.
pub fn curves(
    pool: &rayon::ThreadPool,
    cfg: &SimulatorConfig,
    step: usize,
    emulators: &[EmulatorSpec],
    afs: &[AcquisitionSpec],
    split: &DatasetSplit,
) -> anyhow::Result<Vec<TrainingCurve>> {
    let cells: Vec<(EmulatorSpec, AcquisitionSpec)> =
        emulators.iter().flat_map(|&e| afs.iter().map(move |&a| (e, a))).filter(|(e, a)| a.check_applicable(e).is_ok()).collect();
    let tasks: Vec<(usize, usize)> = (0..cells.len()).flat_map(|i| (0..cfg.runs).map(move |r| (i, r))).collect();
    let results = par_map(pool, &tasks, |&(i, r)| simulator::run_curve_once(cfg, step, &cells[i].0, &cells[i].1, split, r));

    let mut per_cell: Vec<Vec<Vec<(f64, f64)>>> = vec![Vec::new(); cells.len()];
    for (&(i, _), res) in tasks.iter().zip(results) {
        let (e, a) = cells[i];
        per_cell[i].push(res.map_err(|err| anyhow::anyhow!("{} × {}: {err}", e.name(), a.name()))?);
    }
    let grid = curve_grid(split.train.len(), step);
    Ok(cells.iter().zip(per_cell).map(|(&(e, a), runs)| TrainingCurve::from_runs(&grid, e, a, &runs)).collect())
}

/// Raw accuracy grids, one per (variant, pair), in variant-major order.
pub fn sensitivity_grids(
    pool: &rayon::ThreadPool,
    sweep: &SweepConfig,
    variants: &[EmulatorSpec],
    grids: &[GridSpec],
    split: &DatasetSplit,
) -> anyhow::Result<Vec<RawGrid>> {
    let surfaces: Vec<(EmulatorSpec, GridSpec)> = variants.iter().flat_map(|&v| grids.iter().map(move |&g| (v, g))).collect();
    for (v, g) in &surfaces {
        g.validate()?;
        sensitivity::variant_at(v, g.pair, [0.0, 0.0])?;
    }
    let tasks: Vec<(usize, [f64; 2])> =
        surfaces.iter().enumerate().flat_map(|(i, (_, g))| g.points().into_iter().map(move |c| (i, c))).collect();
    let results = par_map(pool, &tasks, |&(i, c)| {
        let (v, g) = &surfaces[i];
        sensitivity::run_point(sweep, v, g.pair, c, split)
    });

    let mut out: Vec<RawGrid> =
        surfaces.iter().map(|&(emulator, spec)| RawGrid { spec, emulator, coords: Vec::new(), accuracy: Vec::new() }).collect();
    for (&(i, c), res) in tasks.iter().zip(results) {
        let acc = res.map_err(|err| anyhow::anyhow!("{} at {c:?}: {err}", out[i].emulator.name()))?;
        out[i].coords.push(c);
        out[i].accuracy.push(acc);
    }
    Ok(out)
}

pub fn pair_label(pair: (SweepParam, SweepParam)) -> String {
    format!("{}-{}", pair.0.name(), pair.1.name())
}
