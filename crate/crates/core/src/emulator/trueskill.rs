//! Two-team TrueSkill by moment matching on the truncated performance
//! difference.
//!
//! With only two teams the factor graph collapses to a single truncation, so
//! one pass of the `v`/`w` corrections gives the exact posterior moments of
//! every skill under the Gaussian approximation. [`TrueSkillTeam`] rates each
//! team as a single entity; [`TrueSkillPlayers`] rates all ten players and
//! sums them into team performances.

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::table::RatingTable;
use super::{Emulator, Granularity, ObservationCounts};
use crate::data::{MatchRecord, Outcome, Team, ROSTER_SIZE};
use crate::error::{Error, Result};
use crate::gauss::{self, Gaussian};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrueSkillParams {
    pub mu0: f64,
    pub sigma0: f64,
    /// Skill class width.
    pub beta: f64,
    /// Additive dynamics factor; `τ²` is added to each variance before an update.
    pub tau: f64,
    pub p_draw: f64,
}

impl Default for TrueSkillParams {
    fn default() -> Self {
        Self { mu0: 25.0, sigma0: 25.0 / 3.0, beta: 25.0 / 6.0, tau: 25.0 / 300.0, p_draw: 0.10 }
    }
}

impl TrueSkillParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(alloc::format!("trueskill {what}")));
        if !self.mu0.is_finite() {
            return bad("mu0 must be finite");
        }
        if !(self.sigma0 > 0.0 && self.sigma0.is_finite()) {
            return bad("sigma0 must be positive");
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return bad("beta must be positive");
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return bad("tau must be non-negative");
        }
        if !(0.0..1.0).contains(&self.p_draw) {
            return bad("p_draw must lie in [0, 1)");
        }
        Ok(())
    }

    fn prior(&self) -> Gaussian {
        Gaussian::new(self.mu0, self.sigma0)
    }
}

/// Draw margin `ε = Φ⁻¹((p_draw + 1)/2) · √n · β` for `n` rated entities.
pub fn draw_margin(p_draw: f64, beta: f64, entities: usize) -> Result<f64> {
    Ok(gauss::std_inv_cdf((p_draw + 1.0) / 2.0)? * (entities as f64).sqrt() * beta)
}

/// Mean difference and `c` of the team performance difference.
fn performance(team1: &[Gaussian], team2: &[Gaussian], beta: f64) -> (f64, f64) {
    let n = (team1.len() + team2.len()) as f64;
    let mean: f64 = team1.iter().map(|g| g.mean).sum::<f64>() - team2.iter().map(|g| g.mean).sum::<f64>();
    let var: f64 = team1.iter().chain(team2).map(|g| g.variance).sum();
    (mean, (n * beta * beta + var).sqrt())
}

/// Probability that `team1` wins, `Φ((Σμ₁ − Σμ₂)/c)`.
pub fn win_probability(team1: &[Gaussian], team2: &[Gaussian], beta: f64) -> f64 {
    let (diff, c) = performance(team1, team2, beta);
    gauss::std_cdf(diff / c)
}

/// Draw probability relative to its maximum as `ε → 0`; always in `(0, 1]`.
pub fn match_quality(team1: &[Gaussian], team2: &[Gaussian], beta: f64) -> f64 {
    let n = (team1.len() + team2.len()) as f64;
    let (diff, c) = performance(team1, team2, beta);
    let c2 = c * c;
    (n * beta * beta / c2).sqrt() * (-diff * diff / (2.0 * c2)).exp()
}

/// Updates both teams in place from one result.
///
/// Skills must already include any dynamics inflation. A draw with a zero
/// margin uses the `ε → 0` limit: the difference is pinned to zero.
pub fn rate_teams(team1: &mut [Gaussian], team2: &mut [Gaussian], outcome: Outcome, beta: f64, draw_margin: f64) -> Result<()> {
    let (diff, c) = performance(team1, team2, beta);
    let t = diff / c;
    let margin = draw_margin / c;
    // (v, w) from team 1's perspective
    let (v, w) = match outcome {
        Outcome::Win1 => (gauss::v_win(t, margin), gauss::w_win(t, margin)),
        Outcome::Win2 => (-gauss::v_win(-t, margin), gauss::w_win(-t, margin)),
        Outcome::Draw if draw_margin == 0.0 => (-t, 1.0),
        Outcome::Draw => (gauss::v_draw(t, margin)?, gauss::w_draw(t, margin)?),
    };
    let c2 = c * c;
    for (team, sign) in [(team1, 1.0), (team2, -1.0)] {
        for skill in team.iter_mut() {
            let var = skill.variance;
            skill.mean += sign * var / c * v;
            skill.variance = var * (1.0 - var / c2 * w);
        }
    }
    Ok(())
}

fn inflate(g: Gaussian, tau: f64) -> Gaussian {
    Gaussian { mean: g.mean, variance: g.variance + tau * tau }
}

/// TrueSkill with one rating per team.
#[derive(Clone, Debug, PartialEq)]
pub struct TrueSkillTeam {
    params: TrueSkillParams,
    margin: f64,
    ratings: RatingTable<Gaussian>,
    pub(crate) counts: ObservationCounts,
}

impl TrueSkillTeam {
    pub fn new(params: TrueSkillParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            margin: draw_margin(params.p_draw, params.beta, 2)?,
            ratings: RatingTable::new(params.prior()),
            counts: ObservationCounts::new(Granularity::Team),
        })
    }

    pub fn params(&self) -> TrueSkillParams {
        self.params
    }

    pub fn rating(&self, team: usize) -> Gaussian {
        self.ratings.get(team)
    }

    pub(crate) fn set_rating(&mut self, team: usize, rating: Gaussian) {
        self.ratings.set(team, rating);
    }

    fn skills(&self, team: &Team) -> [Gaussian; 1] {
        [self.rating(team.id.index())]
    }
}

impl Emulator for TrueSkillTeam {
    fn name(&self) -> &'static str {
        "TrueSkill"
    }

    fn predict(&self, team1: &Team, team2: &Team) -> f64 {
        win_probability(&self.skills(team1), &self.skills(team2), self.params.beta)
    }

    fn fit(&mut self, record: &MatchRecord) -> Result<()> {
        let tau = self.params.tau;
        let mut a = self.skills(&record.team1).map(|g| inflate(g, tau));
        let mut b = self.skills(&record.team2).map(|g| inflate(g, tau));
        rate_teams(&mut a, &mut b, record.outcome, self.params.beta, self.margin)?;
        self.ratings.set(record.team1.id.index(), a[0]);
        self.ratings.set(record.team2.id.index(), b[0]);
        self.counts.record_match(&record.team1, &record.team2);
        Ok(())
    }

    fn counts(&self) -> &ObservationCounts {
        &self.counts
    }

    fn quality(&self, team1: &Team, team2: &Team) -> Option<f64> {
        Some(match_quality(&self.skills(team1), &self.skills(team2), self.params.beta))
    }
}

/// TrueSkill with one rating per player; a team performs as the sum of its
/// roster, so players keep their ratings when they change teams.
#[derive(Clone, Debug, PartialEq)]
pub struct TrueSkillPlayers {
    params: TrueSkillParams,
    margin: f64,
    ratings: RatingTable<Gaussian>,
    pub(crate) counts: ObservationCounts,
}

impl TrueSkillPlayers {
    pub fn new(params: TrueSkillParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            margin: draw_margin(params.p_draw, params.beta, 2 * ROSTER_SIZE)?,
            ratings: RatingTable::new(params.prior()),
            counts: ObservationCounts::new(Granularity::Player),
        })
    }

    pub fn params(&self) -> TrueSkillParams {
        self.params
    }

    pub fn rating(&self, player: usize) -> Gaussian {
        self.ratings.get(player)
    }

    pub(crate) fn set_rating(&mut self, player: usize, rating: Gaussian) {
        self.ratings.set(player, rating);
    }

    fn skills(&self, team: &Team) -> [Gaussian; ROSTER_SIZE] {
        team.roster.map(|p| self.rating(p.index()))
    }
}

impl Emulator for TrueSkillPlayers {
    fn name(&self) -> &'static str {
        "TSPlayers"
    }

    fn predict(&self, team1: &Team, team2: &Team) -> f64 {
        win_probability(&self.skills(team1), &self.skills(team2), self.params.beta)
    }

    fn fit(&mut self, record: &MatchRecord) -> Result<()> {
        let tau = self.params.tau;
        let mut a = self.skills(&record.team1).map(|g| inflate(g, tau));
        let mut b = self.skills(&record.team2).map(|g| inflate(g, tau));
        rate_teams(&mut a, &mut b, record.outcome, self.params.beta, self.margin)?;
        for (team, skills) in [(&record.team1, &a), (&record.team2, &b)] {
            for (p, g) in team.roster.iter().zip(skills) {
                self.ratings.set(p.index(), *g);
            }
        }
        self.counts.record_match(&record.team1, &record.team2);
        Ok(())
    }

    fn counts(&self) -> &ObservationCounts {
        &self.counts
    }

    fn quality(&self, team1: &Team, team2: &Team) -> Option<f64> {
        Some(match_quality(&self.skills(team1), &self.skills(team2), self.params.beta))
    }
}
