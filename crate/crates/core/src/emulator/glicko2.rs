//! Glicko-2 with every match treated as its own rating period.
//!
//! Ratings are stored on the familiar 1500/350 scale and converted to the
//! internal `μ, φ` scale for each update.

use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use serde::{Deserialize, Serialize};

use super::table::RatingTable;
use super::{Emulator, Granularity, ObservationCounts};
use crate::data::{MatchRecord, Team};
use crate::error::{Error, Result};

/// Conversion factor between the display and internal scales.
pub const SCALE: f64 = 173.7178;
const MAX_ITERATIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Glicko2Params {
    pub mu0: f64,
    pub phi0: f64,
    pub sigma0: f64,
    pub tau: f64,
    pub conv_tol: f64,
}

impl Default for Glicko2Params {
    fn default() -> Self {
        Self { mu0: 1500.0, phi0: 350.0, sigma0: 0.06, tau: 0.5, conv_tol: 1e-6 }
    }
}

impl Glicko2Params {
    pub fn validate(&self) -> Result<()> {
        let positive = [("phi0", self.phi0), ("sigma0", self.sigma0), ("tau", self.tau), ("conv_tol", self.conv_tol)];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter(alloc::format!("glicko2 {name} must be positive, got {value}")));
            }
        }
        if !self.mu0.is_finite() {
            return Err(Error::InvalidParameter("glicko2 mu0 must be finite".into()));
        }
        Ok(())
    }

    fn initial(&self) -> Glicko2Rating {
        Glicko2Rating { rating: self.mu0, deviation: self.phi0, volatility: self.sigma0 }
    }
}

/// Rating, deviation (RD) and volatility on the display scale.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Glicko2Rating {
    pub rating: f64,
    pub deviation: f64,
    pub volatility: f64,
}

impl Glicko2Rating {
    fn mu(&self, mu0: f64) -> f64 {
        (self.rating - mu0) / SCALE
    }

    fn phi(&self) -> f64 {
        self.deviation / SCALE
    }
}

fn g(phi: f64) -> f64 {
    1.0 / (1.0 + 3.0 * phi * phi / (PI * PI)).sqrt()
}

fn expectation(mu: f64, mu_opp: f64, phi_opp: f64) -> f64 {
    1.0 / (1.0 + (-g(phi_opp) * (mu - mu_opp)).exp())
}

/// One rating period for `player` against `games` (opponent, score) pairs,
/// all opponents taken at their pre-period values.
pub fn rate_period(player: Glicko2Rating, games: &[(Glicko2Rating, f64)], params: &Glicko2Params) -> Result<Glicko2Rating> {
    let mu0 = params.mu0;
    let mu = player.mu(mu0);
    let phi = player.phi();
    if games.is_empty() {
        let phi_star = (phi * phi + player.volatility * player.volatility).sqrt();
        return Ok(Glicko2Rating { deviation: phi_star * SCALE, ..player });
    }

    let mut info = 0.0;
    let mut gain = 0.0;
    for (opp, score) in games {
        let gj = g(opp.phi());
        let e = expectation(mu, opp.mu(mu0), opp.phi());
        info += gj * gj * e * (1.0 - e);
        gain += gj * (score - e);
    }
    let v = 1.0 / info;
    let delta = v * gain;

    let sigma = new_volatility(phi, player.volatility, v, delta, params)?;
    let phi_star = (phi * phi + sigma * sigma).sqrt();
    let phi_new = 1.0 / (1.0 / (phi_star * phi_star) + 1.0 / v).sqrt();
    let mu_new = mu + phi_new * phi_new * gain;
    Ok(Glicko2Rating { rating: mu_new * SCALE + mu0, deviation: phi_new * SCALE, volatility: sigma })
}

/// Illinois (regula falsi) solve for the new volatility.
fn new_volatility(phi: f64, sigma: f64, v: f64, delta: f64, params: &Glicko2Params) -> Result<f64> {
    let tau2 = params.tau * params.tau;
    let a = (sigma * sigma).ln();
    let (phi2, delta2) = (phi * phi, delta * delta);
    let f = |x: f64| {
        let ex = x.exp();
        let denom = phi2 + v + ex;
        ex * (delta2 - phi2 - v - ex) / (2.0 * denom * denom) - (x - a) / tau2
    };

    let mut lo = a;
    let mut hi = if delta2 > phi2 + v {
        (delta2 - phi2 - v).ln()
    } else {
        let mut k = 1.0;
        while f(a - k * params.tau) < 0.0 {
            k += 1.0;
            if k > MAX_ITERATIONS as f64 {
                return Err(Error::VolatilityDiverged(MAX_ITERATIONS));
            }
        }
        a - k * params.tau
    };

    let (mut f_lo, mut f_hi) = (f(lo), f(hi));
    let mut steps = 0;
    while (hi - lo).abs() > params.conv_tol {
        steps += 1;
        if steps > MAX_ITERATIONS {
            return Err(Error::VolatilityDiverged(MAX_ITERATIONS));
        }
        let c = lo + (lo - hi) * f_lo / (f_hi - f_lo);
        let f_c = f(c);
        if f_c * f_hi <= 0.0 {
            lo = hi;
            f_lo = f_hi;
        } else {
            f_lo /= 2.0;
        }
        hi = c;
        f_hi = f_c;
    }
    Ok((lo / 2.0).exp())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Glicko2 {
    params: Glicko2Params,
    ratings: RatingTable<Glicko2Rating>,
    pub(crate) counts: ObservationCounts,
}

impl Glicko2 {
    pub fn new(params: Glicko2Params) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, ratings: RatingTable::new(params.initial()), counts: ObservationCounts::new(Granularity::Team) })
    }

    pub fn params(&self) -> Glicko2Params {
        self.params
    }

    pub fn rating(&self, team: usize) -> Glicko2Rating {
        self.ratings.get(team)
    }

    pub(crate) fn set_rating(&mut self, team: usize, rating: Glicko2Rating) {
        self.ratings.set(team, rating);
    }
}

impl Emulator for Glicko2 {
    fn name(&self) -> &'static str {
        "Glicko2"
    }

    /// Logistic win probability with both deviations combined, so that the
    /// two orientations of a matchup sum to one.
    fn predict(&self, team1: &Team, team2: &Team) -> f64 {
        let (a, b) = (self.rating(team1.id.index()), self.rating(team2.id.index()));
        let phi = (a.phi().powi(2) + b.phi().powi(2)).sqrt();
        let diff = a.mu(self.params.mu0) - b.mu(self.params.mu0);
        1.0 / (1.0 + (-g(phi) * diff).exp())
    }

    fn fit(&mut self, record: &MatchRecord) -> Result<()> {
        let (ia, ib) = (record.team1.id.index(), record.team2.id.index());
        let (a, b) = (self.rating(ia), self.rating(ib));
        let s = record.outcome.score1();
        let new_a = rate_period(a, &[(b, s)], &self.params)?;
        let new_b = rate_period(b, &[(a, 1.0 - s)], &self.params)?;
        self.ratings.set(ia, new_a);
        self.ratings.set(ib, new_b);
        self.counts.record_match(&record.team1, &record.team2);
        Ok(())
    }

    fn counts(&self) -> &ObservationCounts {
        &self.counts
    }
}
