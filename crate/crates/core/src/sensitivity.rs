//! Logarithmic sweeps over pairs of TrueSkill parameters, smoothed with
//! Gaussian-process regression.
//!
//! Grid coordinates are `log10(value / centre)` per axis, so the centre point
//! is the base configuration and `±span` covers one decade either way by
//! default. Every grid point reuses the same seed, which makes neighbouring
//! points differ only through the parameters.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::acquisition::AcquisitionSpec;
use crate::data::DatasetSplit;
use crate::emulator::{EmulatorSpec, TrueSkillParams};
use crate::error::{Error, Result};
use crate::gp::{self, GpConfig};
use crate::simulator::{self, SimulatorConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Sigma,
    Beta,
    Tau,
}

impl SweepParam {
    pub const ALL: [SweepParam; 3] = [SweepParam::Sigma, SweepParam::Beta, SweepParam::Tau];

    pub fn name(&self) -> &'static str {
        match self {
            SweepParam::Sigma => "sigma",
            SweepParam::Beta => "beta",
            SweepParam::Tau => "tau",
        }
    }

    pub fn get(&self, p: &TrueSkillParams) -> f64 {
        match self {
            SweepParam::Sigma => p.sigma0,
            SweepParam::Beta => p.beta,
            SweepParam::Tau => p.tau,
        }
    }

    fn set(&self, p: &mut TrueSkillParams, value: f64) {
        match self {
            SweepParam::Sigma => p.sigma0 = value,
            SweepParam::Beta => p.beta = value,
            SweepParam::Tau => p.tau = value,
        }
    }

    /// The three unordered pairs, in reporting order.
    pub fn pairs() -> [(SweepParam, SweepParam); 3] {
        [(SweepParam::Sigma, SweepParam::Beta), (SweepParam::Sigma, SweepParam::Tau), (SweepParam::Beta, SweepParam::Tau)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub pair: (SweepParam, SweepParam),
    /// Points per axis; odd so the centre is sampled.
    pub resolution: usize,
    /// Half-width of each axis in decades.
    pub span: f64,
}

impl GridSpec {
    pub fn new(pair: (SweepParam, SweepParam)) -> Self {
        Self { pair, resolution: 7, span: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pair.0 == self.pair.1 {
            return Err(Error::InvalidParameter("sweep pair must name two different parameters".into()));
        }
        if self.resolution < 3 || self.resolution.is_multiple_of(2) {
            return Err(Error::InvalidParameter(alloc::format!("grid resolution must be odd and at least 3, got {}", self.resolution)));
        }
        if !(self.span > 0.0 && self.span.is_finite()) {
            return Err(Error::InvalidParameter("grid span must be positive".into()));
        }
        Ok(())
    }

    /// Evenly spaced coordinates on `[-span, span]`.
    pub fn axis(&self) -> Vec<f64> {
        axis(self.resolution, self.span)
    }

    /// Row-major grid: the first parameter varies slowest.
    pub fn points(&self) -> Vec<[f64; 2]> {
        let axis = self.axis();
        axis.iter().flat_map(|&x| axis.iter().map(move |&y| [x, y])).collect()
    }

    pub fn centre_index(&self) -> usize {
        let half = self.resolution / 2;
        half * self.resolution + half
    }
}

fn axis(resolution: usize, span: f64) -> Vec<f64> {
    let half = (resolution / 2) as f64;
    (0..resolution).map(|i| span * (i as f64 - half) / half).collect()
}

/// `base` with the swept pair scaled by `10^coords`.
pub fn variant_at(base: &EmulatorSpec, pair: (SweepParam, SweepParam), coords: [f64; 2]) -> Result<EmulatorSpec> {
    let scale = |p: &TrueSkillParams| {
        let mut out = *p;
        pair.0.set(&mut out, pair.0.get(p) * 10f64.powf(coords[0]));
        pair.1.set(&mut out, pair.1.get(p) * 10f64.powf(coords[1]));
        out
    };
    match base {
        EmulatorSpec::TrueSkill(p) => Ok(EmulatorSpec::TrueSkill(scale(p))),
        EmulatorSpec::TrueSkillPlayers(p) => Ok(EmulatorSpec::TrueSkillPlayers(scale(p))),
        other => Err(Error::InapplicablePairing { emulator: other.name(), af: "sensitivity sweep" }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub budget: usize,
    pub af: AcquisitionSpec,
    pub runs_per_point: usize,
    pub candidate_pool_size: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            budget: 2000,
            af: AcquisitionSpec::LikeliestDraw,
            runs_per_point: 1,
            candidate_pool_size: simulator::DEFAULT_CANDIDATES,
            seed: 0,
        }
    }
}

impl SweepConfig {
    /// Simulator settings shared by every grid point.
    pub fn simulator(&self) -> SimulatorConfig {
        SimulatorConfig {
            candidate_pool_size: self.candidate_pool_size,
            train_budget: self.budget,
            checkpoints: alloc::vec![self.budget],
            runs: self.runs_per_point,
            seed: self.seed,
        }
    }
}

/// Mean eval accuracy of one grid point.
pub fn run_point(
    cfg: &SweepConfig,
    base: &EmulatorSpec,
    pair: (SweepParam, SweepParam),
    coords: [f64; 2],
    split: &DatasetSplit,
) -> Result<f64> {
    let spec = variant_at(base, pair, coords)?;
    let report = simulator::run_experiment(&cfg.simulator(), &spec, &cfg.af, split)?;
    Ok(report.checkpoints[0].mean)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawGrid {
    pub spec: GridSpec,
    pub emulator: EmulatorSpec,
    pub coords: Vec<[f64; 2]>,
    pub accuracy: Vec<f64>,
}

pub fn run_grid(grid: &GridSpec, cfg: &SweepConfig, base: &EmulatorSpec, split: &DatasetSplit) -> Result<RawGrid> {
    grid.validate()?;
    variant_at(base, grid.pair, [0.0, 0.0])?;
    let coords = grid.points();
    let accuracy = coords.iter().map(|&c| run_point(cfg, base, grid.pair, c, split)).collect::<Result<Vec<_>>>()?;
    Ok(RawGrid { spec: *grid, emulator: *base, coords, accuracy })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivitySurface {
    pub raw: RawGrid,
    /// Display grid, row-major like the raw grid.
    pub display_coords: Vec<[f64; 2]>,
    /// Posterior mean on the display grid, clamped to `[0, 1]`.
    pub smoothed: Vec<f64>,
    pub argmax: [f64; 2],
    pub optimum: f64,
    /// Smoothed value at the centre (base parameters).
    pub default_value: f64,
    /// Max minus min of the smoothed surface.
    pub range: f64,
    pub raw_range: f64,
    pub tolerance: f64,
    /// Whether the centre lies within `tolerance` of the optimum.
    pub default_near_optimum: bool,
}

fn spread(values: &[f64]) -> (f64, f64) {
    values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

impl SensitivitySurface {
    /// Smooths `raw` and evaluates it on a `display_resolution²` grid
    /// spanning the same square. `display_resolution` must be odd so the
    /// centre is on the display grid.
    pub fn fit(raw: RawGrid, gp_cfg: &GpConfig, display_resolution: usize, tolerance: f64) -> Result<Self> {
        if display_resolution < 3 || display_resolution.is_multiple_of(2) {
            return Err(Error::InvalidParameter("display resolution must be odd and at least 3".into()));
        }
        let posterior = gp::fit(gp_cfg, &raw.coords, &raw.accuracy)?;
        let axis = axis(display_resolution, raw.spec.span);
        let display_coords: Vec<[f64; 2]> = axis.iter().flat_map(|&x| axis.iter().map(move |&y| [x, y])).collect();
        let smoothed: Vec<f64> = display_coords.iter().map(|c| posterior.mean(c).clamp(0.0, 1.0)).collect();

        let mut best = 0;
        for (i, &v) in smoothed.iter().enumerate() {
            if v > smoothed[best] {
                best = i;
            }
        }
        let half = display_resolution / 2;
        let default_value = smoothed[half * display_resolution + half];
        let (lo, hi) = spread(&smoothed);
        let (raw_lo, raw_hi) = spread(&raw.accuracy);
        let optimum = smoothed[best];
        Ok(Self {
            argmax: display_coords[best],
            display_coords,
            optimum,
            default_value,
            range: hi - lo,
            raw_range: raw_hi - raw_lo,
            tolerance,
            default_near_optimum: optimum - default_value <= tolerance,
            smoothed,
            raw,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{MatchDataset, Outcome};
    use crate::emulator::tests::game;
    use crate::emulator::EloParams;
    use alloc::vec;

    #[test]
    fn grid_arithmetic() {
        let g = GridSpec::new((SweepParam::Sigma, SweepParam::Beta));
        let pts = g.points();
        assert_eq!(pts.len(), 49);
        assert_eq!(pts[g.centre_index()], [0.0, 0.0]);
        assert_eq!(pts[0], [-1.0, -1.0]);
        assert_eq!(pts[48], [1.0, 1.0]);
        assert!(GridSpec { resolution: 6, ..g }.validate().is_err());
        assert!(GridSpec { pair: (SweepParam::Tau, SweepParam::Tau), ..g }.validate().is_err());
    }

    #[test]
    fn variants_scale_parameters() {
        let base = EmulatorSpec::TrueSkill(TrueSkillParams::default());
        let EmulatorSpec::TrueSkill(p) = variant_at(&base, (SweepParam::Beta, SweepParam::Tau), [1.0, -1.0]).unwrap() else { panic!() };
        let d = TrueSkillParams::default();
        assert!((p.beta - 10.0 * d.beta).abs() < 1e-12);
        assert!((p.tau - d.tau / 10.0).abs() < 1e-15);
        assert_eq!(p.sigma0, d.sigma0);
        assert_eq!(p.mu0, 25.0);
        assert!(variant_at(&EmulatorSpec::Elo(EloParams::default()), (SweepParam::Beta, SweepParam::Tau), [0.0, 0.0]).is_err());
    }

    fn split() -> DatasetSplit {
        let records: Vec<_> = (0..120u32)
            .map(|i| {
                let (a, b) = (i % 6, 6 + (i * 5) % 6);
                game(i, a, b, if (a + i) % 4 == 0 { Outcome::Win2 } else { Outcome::Win1 })
            })
            .collect();
        MatchDataset::from_records(records).unwrap().split(2).unwrap()
    }

    #[test]
    fn centre_matches_standalone_run() {
        let split = split();
        let cfg = SweepConfig { budget: 30, seed: 7, ..Default::default() };
        let grid = GridSpec { resolution: 3, ..GridSpec::new((SweepParam::Sigma, SweepParam::Tau)) };
        let base = EmulatorSpec::TrueSkillPlayers(TrueSkillParams::default());
        let raw = run_grid(&grid, &cfg, &base, &split).unwrap();
        let standalone = simulator::run_experiment(&cfg.simulator(), &base, &cfg.af, &split).unwrap();
        assert_eq!(raw.accuracy[grid.centre_index()], standalone.checkpoints[0].mean);
        assert_eq!(raw, run_grid(&grid, &cfg, &base, &split).unwrap());
    }

    #[test]
    fn constant_grid_is_flat() {
        let grid = GridSpec::new((SweepParam::Sigma, SweepParam::Beta));
        let raw = RawGrid {
            spec: grid,
            emulator: EmulatorSpec::TrueSkill(TrueSkillParams::default()),
            coords: grid.points(),
            accuracy: vec![0.6; 49],
        };
        let s = SensitivitySurface::fit(raw, &GpConfig::default(), 21, 0.02).unwrap();
        assert!(s.range < 1e-12);
        assert_eq!(s.raw_range, 0.0);
        assert!(s.default_near_optimum);
        assert_eq!(s.smoothed.len(), 441);
    }

    #[test]
    fn surface_finds_peak() {
        let grid = GridSpec::new((SweepParam::Sigma, SweepParam::Beta));
        let coords = grid.points();
        let accuracy = coords.iter().map(|c| 0.7 - 0.05 * ((c[0] - 0.5).powi(2) + c[1].powi(2))).collect();
        let raw = RawGrid { spec: grid, emulator: EmulatorSpec::TrueSkill(TrueSkillParams::default()), coords, accuracy };
        let s = SensitivitySurface::fit(raw, &GpConfig::default(), 41, 0.02).unwrap();
        assert!((s.argmax[0] - 0.5).abs() <= 0.1 && s.argmax[1].abs() <= 0.1, "{:?}", s.argmax);
        assert!(s.smoothed.iter().all(|v| (0.0..=1.0).contains(v)));
        assert!(s.default_near_optimum);
    }
}
