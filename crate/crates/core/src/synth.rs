//! Synthetic match data with known latent skills.
//!
//! Each team starts with a latent skill `s ~ N(latent_mean, latent_sd²)` and
//! five players whose skills scatter around it by `player_sd`. A team's skill
//! in a match is the mean of its current roster. Performances are drawn as
//! `N(skill, performance_sd²)`; a gap below `draw_margin` is a draw.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::distr::weighted::WeightedIndex;
use rand::{Rng as _, SeedableRng};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::{MatchDataset, MatchId, MatchRecord, Outcome, PlayerId, Team, TeamId, ROSTER_SIZE};
use crate::error::{Error, Result};
use crate::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Pairing {
    /// Both teams drawn uniformly.
    Uniform,
    /// Opponent drawn with weight `exp(−Δs²/(2·width²))`.
    SkillBanded { width: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_teams: usize,
    pub latent_mean: f64,
    pub latent_sd: f64,
    /// Spread of player skills around their team's latent skill.
    pub player_sd: f64,
    pub performance_sd: f64,
    pub draw_margin: f64,
    pub matches: usize,
    pub pairing: Pairing,
    /// Chance per match that one player of each team swaps with a player of
    /// another random team before the match.
    pub churn: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_teams: 400,
            latent_mean: 25.0,
            latent_sd: 25.0 / 3.0,
            player_sd: 0.0,
            performance_sd: 25.0 / 6.0,
            draw_margin: 0.0,
            matches: 4000,
            pairing: Pairing::Uniform,
            churn: 0.0,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidParameter(alloc::format!("synth {msg}")));
        if self.n_teams < 2 {
            return fail("n_teams must be at least 2");
        }
        if self.matches == 0 {
            return fail("matches must be at least 1");
        }
        let non_negative = [
            ("latent_sd", self.latent_sd),
            ("player_sd", self.player_sd),
            ("performance_sd", self.performance_sd),
            ("draw_margin", self.draw_margin),
        ];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(alloc::format!("synth {name} must be finite and non-negative, got {v}")));
            }
        }
        if !self.latent_mean.is_finite() {
            return fail("latent_mean must be finite");
        }
        if !(0.0..=1.0).contains(&self.churn) {
            return fail("churn must lie in [0, 1]");
        }
        if let Pairing::SkillBanded { width } = self.pairing {
            if !(width > 0.0 && width.is_finite()) {
                return fail("skill-banded width must be positive");
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthDataset {
    pub dataset: MatchDataset,
    /// Initial latent skill per team (mean of its starting roster).
    pub team_skills: Vec<f64>,
    pub player_skills: Vec<f64>,
    /// Latent team skills at match time, aligned with `dataset.records()`.
    pub match_skills: Vec<(f64, f64)>,
}

fn normal(mean: f64, sd: f64) -> Normal<f64> {
    Normal::new(mean, sd).expect("validated standard deviation")
}

pub fn generate(cfg: &SynthConfig) -> Result<SynthDataset> {
    cfg.validate()?;
    let mut rng = Rng::seed_from_u64(cfg.seed);
    let latent = normal(cfg.latent_mean, cfg.latent_sd);
    let team_base: Vec<f64> = (0..cfg.n_teams).map(|_| latent.sample(&mut rng)).collect();
    let spread = normal(0.0, cfg.player_sd);
    let player_skills: Vec<f64> =
        team_base.iter().flat_map(|&s| (0..ROSTER_SIZE).map(move |_| s)).map(|s| s + spread.sample(&mut rng)).collect();
    let mut rosters: Vec<[u32; ROSTER_SIZE]> = (0..cfg.n_teams).map(|t| core::array::from_fn(|k| (t * ROSTER_SIZE + k) as u32)).collect();
    let skill_of = |roster: &[u32; ROSTER_SIZE]| roster.iter().map(|&p| player_skills[p as usize]).sum::<f64>() / ROSTER_SIZE as f64;
    let team_skills: Vec<f64> = rosters.iter().map(skill_of).collect();

    let noise = normal(0.0, cfg.performance_sd);
    let mut records = Vec::with_capacity(cfg.matches);
    let mut match_skills = Vec::with_capacity(cfg.matches);
    for i in 0..cfg.matches {
        let a = rng.random_range(0..cfg.n_teams);
        let b = pick_opponent(cfg, a, &rosters, &skill_of, &mut rng);
        if cfg.churn > 0.0 {
            for t in [a, b] {
                if rng.random::<f64>() < cfg.churn {
                    swap_player(t, &mut rosters, &mut rng);
                }
            }
        }
        let (sa, sb) = (skill_of(&rosters[a]), skill_of(&rosters[b]));
        let (pa, pb) = (sa + noise.sample(&mut rng), sb + noise.sample(&mut rng));
        let outcome = if (pa - pb).abs() < cfg.draw_margin {
            Outcome::Draw
        } else if pa > pb {
            Outcome::Win1
        } else {
            Outcome::Win2
        };
        let team = |t: usize| {
            let players: Vec<PlayerId> = rosters[t].iter().map(|&p| PlayerId(p)).collect();
            Team::new(TeamId(t as u32), &players)
        };
        records.push(MatchRecord::new(MatchId(i as u32), team(a)?, team(b)?, outcome, i as i64)?);
        match_skills.push((sa, sb));
    }
    Ok(SynthDataset { dataset: MatchDataset::from_records(records)?, team_skills, player_skills, match_skills })
}

fn pick_opponent(
    cfg: &SynthConfig,
    a: usize,
    rosters: &[[u32; ROSTER_SIZE]],
    skill_of: &impl Fn(&[u32; ROSTER_SIZE]) -> f64,
    rng: &mut Rng,
) -> usize {
    match cfg.pairing {
        Pairing::Uniform => {
            let b = rng.random_range(0..cfg.n_teams - 1);
            if b >= a {
                b + 1
            } else {
                b
            }
        }
        Pairing::SkillBanded { width } => {
            let sa = skill_of(&rosters[a]);
            let weights = rosters.iter().enumerate().map(|(t, r)| {
                if t == a {
                    0.0
                } else {
                    let d = skill_of(r) - sa;
                    // floor keeps far-off teams reachable when the band is narrow
                    (-d * d / (2.0 * width * width)).exp().max(1e-300)
                }
            });
            WeightedIndex::new(weights).expect("at least one positive weight").sample(rng)
        }
    }
}

fn swap_player(t: usize, rosters: &mut [[u32; ROSTER_SIZE]], rng: &mut Rng) {
    let n = rosters.len();
    let other = (t + 1 + rng.random_range(0..n - 1)) % n;
    let (i, j) = (rng.random_range(0..ROSTER_SIZE), rng.random_range(0..ROSTER_SIZE));
    let tmp = rosters[t][i];
    rosters[t][i] = rosters[other][j];
    rosters[other][j] = tmp;
}

/// Accuracy of always backing the team with the higher latent skill on the
/// non-draw matches of `synth`. Exact ties earn half credit, the expected
/// score of a fair coin.
pub fn bayes_accuracy(synth: &SynthDataset) -> Result<f64> {
    bayes_accuracy_on(synth, synth.dataset.iter())
}

/// As [`bayes_accuracy`], restricted to `matches` (e.g. an evaluation split).
pub fn bayes_accuracy_on<'a>(synth: &SynthDataset, matches: impl IntoIterator<Item = &'a MatchRecord>) -> Result<f64> {
    let mut position = alloc::collections::BTreeMap::new();
    for (k, r) in synth.dataset.iter().enumerate() {
        position.insert(r.id, k);
    }
    let (mut credit, mut decisive) = (0.0, 0usize);
    for m in matches {
        if m.outcome.is_draw() {
            continue;
        }
        let k = *position.get(&m.id).ok_or(Error::UnknownMatch(m.id))?;
        let (sa, sb) = synth.match_skills[k];
        decisive += 1;
        credit += if sa == sb {
            0.5
        } else if (sa > sb) == (m.outcome == Outcome::Win1) {
            1.0
        } else {
            0.0
        };
    }
    if decisive == 0 {
        return Err(Error::NoDecisiveMatches);
    }
    Ok(credit / decisive as f64)
}
