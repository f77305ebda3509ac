//! Versioned JSON snapshots of emulator state, keyed by team or player name.

use std::collections::BTreeMap;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use skillbench_core::emulator::{EmulatorState, EntityState, Granularity, RatingValue};
use skillbench_core::{AnyEmulator, EmulatorSpec, Names};

pub const STATE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedEntity {
    pub count: u64,
    pub rating: RatingValue,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub version: u32,
    pub emulator: EmulatorSpec,
    pub granularity: Granularity,
    pub fitted: u64,
    pub ratings: BTreeMap<String, NamedEntity>,
}

fn entity_name(names: &Names, granularity: Granularity, id: u32) -> String {
    match granularity {
        Granularity::Team => names.team_name(skillbench_core::TeamId(id)).to_string(),
        Granularity::Player => names.player_name(skillbench_core::PlayerId(id)).to_string(),
    }
}

pub fn to_document(emulator: &AnyEmulator, names: &Names) -> StateDocument {
    let state = emulator.state();
    let ratings = state
        .entities
        .iter()
        .map(|e| (entity_name(names, state.granularity, e.id), NamedEntity { count: e.count, rating: e.rating }))
        .collect();
    StateDocument { version: STATE_VERSION, emulator: state.spec, granularity: state.granularity, fitted: state.fitted, ratings }
}

pub fn to_json(emulator: &AnyEmulator, names: &Names) -> String {
    serde_json::to_string_pretty(&to_document(emulator, names)).expect("state documents always serialize")
}

/// Restores an emulator. Names not yet in `names` are interned.
pub fn from_json(text: &str, names: &mut Names, seed: u64) -> anyhow::Result<AnyEmulator> {
    let doc: StateDocument = serde_json::from_str(text).context("parsing emulator state")?;
    if doc.version != STATE_VERSION {
        bail!("unsupported emulator state version {} (expected {STATE_VERSION})", doc.version);
    }
    let entities = doc
        .ratings
        .iter()
        .map(|(name, e)| {
            let id = match doc.granularity {
                Granularity::Team => names.team(name).0,
                Granularity::Player => names.player(name).0,
            };
            EntityState { id, count: e.count, rating: e.rating }
        })
        .collect();
    let state = EmulatorState { spec: doc.emulator, granularity: doc.granularity, fitted: doc.fitted, entities };
    Ok(AnyEmulator::from_state(&state, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::read_csv;
    use skillbench_core::Emulator;

    #[test]
    fn round_trip_through_names() {
        let text = "match_id,team1,team2,p1_1,p1_2,p1_3,p1_4,p1_5,p2_1,p2_2,p2_3,p2_4,p2_5,outcome,timestamp\n\
                    1,red,blue,a,b,c,d,e,f,g,h,i,j,win1,0\n\
                    2,blue,green,f,g,h,i,j,k,l,m,n,o,draw,0\n";
        let loaded = read_csv(text.as_bytes()).unwrap();
        for spec in EmulatorSpec::all_default() {
            let mut e = spec.build(1).unwrap();
            for r in &loaded.dataset {
                e.fit(r).unwrap();
            }
            let json = to_json(&e, &loaded.names);
            let doc: StateDocument = serde_json::from_str(&json).unwrap();
            let expected = if matches!(spec, EmulatorSpec::TrueSkillPlayers(_)) { 15 } else { 3 };
            assert_eq!(doc.ratings.len(), expected, "{}", spec.name());
            let mut names = loaded.names.clone();
            let back = from_json(&json, &mut names, 1).unwrap();
            assert_eq!(names, loaded.names);
            assert_eq!(back.state(), e.state());
        }
    }

    #[test]
    fn rejects_other_versions() {
        let e = EmulatorSpec::WinRate.build(0).unwrap();
        let json = to_json(&e, &Names::default()).replace("\"version\": 1", "\"version\": 9");
        assert!(from_json(&json, &mut Names::default(), 0).is_err());
    }
}
