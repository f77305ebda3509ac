use core::cell::RefCell;

use rand::{Rng as _, SeedableRng};

use super::{Emulator, Granularity, ObservationCounts};
use crate::data::{MatchRecord, Team};
use crate::error::Result;
use crate::Rng;

/// Baseline that ignores all evidence and predicts a uniform random
/// probability. Fitting only updates observation counts.
#[derive(Clone, Debug)]
pub struct RandomEmulator {
    rng: RefCell<Rng>,
    pub(crate) counts: ObservationCounts,
}

impl RandomEmulator {
    pub fn new(seed: u64) -> Self {
        Self { rng: RefCell::new(Rng::seed_from_u64(seed)), counts: ObservationCounts::new(Granularity::Team) }
    }
}

impl Emulator for RandomEmulator {
    fn name(&self) -> &'static str {
        "Random"
    }

    fn predict(&self, _team1: &Team, _team2: &Team) -> f64 {
        self.rng.borrow_mut().random::<f64>()
    }

    fn fit(&mut self, record: &MatchRecord) -> Result<()> {
        self.counts.record_match(&record.team1, &record.team2);
        Ok(())
    }

    fn counts(&self) -> &ObservationCounts {
        &self.counts
    }
}
