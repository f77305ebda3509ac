use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use skillbench_core::acquisition::{score, ScoreContext};
use skillbench_core::gp::{self, GpConfig};
use skillbench_core::{AcquisitionSpec, Emulator, EmulatorSpec, MatchDataset, MatchId, MatchRecord, Outcome, PlayerId, Rng, Team, TeamId};

fn team(t: u32) -> Team {
    let roster: Vec<PlayerId> = (0..5).map(|k| PlayerId(t * 5 + k)).collect();
    Team::new(TeamId(t), &roster).unwrap()
}

fn outcome(k: u8) -> Outcome {
    match k % 3 {
        0 => Outcome::Win1,
        1 => Outcome::Win2,
        _ => Outcome::Draw,
    }
}

/// Records from (team1, team2 offset, outcome) triples over `n_teams` teams.
fn dataset(games: &[(u32, u32, u8)], n_teams: u32) -> MatchDataset {
    let records = games
        .iter()
        .enumerate()
        .map(|(i, &(a, off, o))| {
            let a = a % n_teams;
            let b = (a + 1 + off % (n_teams - 1)) % n_teams;
            MatchRecord::new(MatchId(i as u32), team(a), team(b), outcome(o), i as i64).unwrap()
        })
        .collect();
    MatchDataset::from_records(records).unwrap()
}

fn games() -> impl Strategy<Value = Vec<(u32, u32, u8)>> {
    prop::collection::vec((0u32..50, 0u32..50, 0u8..3), 2..80)
}

fn deterministic_emulators() -> Vec<EmulatorSpec> {
    EmulatorSpec::all_default().into_iter().filter(|e| *e != EmulatorSpec::Random).collect()
}

fn symmetric_afs() -> Vec<AcquisitionSpec> {
    AcquisitionSpec::table_default().into_iter().filter(|a| *a != AcquisitionSpec::Random).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_partitions_the_dataset(g in games(), seed in any::<u64>()) {
        let data = dataset(&g, 8);
        let split = data.split(seed).unwrap();
        prop_assert_eq!(split.train.len(), data.len().div_ceil(2));
        prop_assert_eq!(split.train.len() + split.eval.len(), data.len());
        let train: BTreeSet<_> = split.train.iter().map(|r| r.id).collect();
        let eval: BTreeSet<_> = split.eval.iter().map(|r| r.id).collect();
        prop_assert!(train.is_disjoint(&eval));
        let all: BTreeSet<_> = data.iter().map(|r| r.id).collect();
        prop_assert_eq!(train.union(&eval).copied().collect::<BTreeSet<_>>(), all);
        prop_assert_eq!(split, data.split(seed).unwrap());
    }

    #[test]
    fn pop_keeps_the_pair_index_consistent(g in games(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..20)) {
        let mut data = dataset(&g, 6);
        let mut removed = Vec::new();
        for p in picks {
            if data.is_empty() {
                break;
            }
            let id = data.records()[p.index(data.len())].id;
            let before = data.len();
            let r = data.pop(id).unwrap();
            prop_assert_eq!(r.id, id);
            prop_assert_eq!(data.len(), before - 1);
            prop_assert!(data.pop(id).is_err());
            removed.push(r);
        }
        for r in data.iter() {
            prop_assert!(data.pair_matches(r.team1.id, r.team2.id).contains(&r.id));
            prop_assert!(data.pair_matches(r.team2.id, r.team1.id).contains(&r.id));
            prop_assert_eq!(data.get(r.id), Some(r));
        }
        for r in &removed {
            prop_assert!(!data.contains(r.id));
            prop_assert!(!data.pair_matches(r.team1.id, r.team2.id).contains(&r.id));
        }
    }

    #[test]
    fn scoring_is_pure_and_symmetric(g in games(), a in 0u32..8, off in 0u32..7) {
        let data = dataset(&g, 8);
        let b = (a + 1 + off) % 8;
        let fwd = MatchRecord::new(MatchId(9_000), team(a), team(b), Outcome::Win1, 0).unwrap();
        let rev = MatchRecord::new(MatchId(9_001), team(b), team(a), Outcome::Win2, 0).unwrap();
        let mut rng = Rng::seed_from_u64(0);
        for spec in deterministic_emulators() {
            let mut em = spec.build(0).unwrap();
            for r in &data {
                em.fit(r).unwrap();
            }
            let p = em.predict(&fwd.team1, &fwd.team2);
            prop_assert!((0.0..=1.0).contains(&p));
            prop_assert!((p + em.predict(&rev.team1, &rev.team2) - 1.0).abs() < 1e-12, "{}", spec.name());
            let before = em.state();
            for af in symmetric_afs() {
                if af.check_applicable(&spec).is_err() {
                    continue;
                }
                let mut ctx = ScoreContext { rng: &mut rng, holdout: None };
                let s1 = score(&af, &em, &fwd, &mut ctx).unwrap();
                let s2 = score(&af, &em, &rev, &mut ctx).unwrap();
                prop_assert!((s1 - s2).abs() <= 1e-12 * s1.abs().max(1.0), "{} × {}: {s1} vs {s2}", spec.name(), af.name());
                prop_assert!(s1.is_finite());
            }
            prop_assert_eq!(em.state(), before);
        }
    }

    #[test]
    fn trueskill_uncertainty_never_grows_past_dynamics(g in games(), players in any::<bool>()) {
        let data = dataset(&g, 8);
        let params = Default::default();
        let spec = if players { EmulatorSpec::TrueSkillPlayers(params) } else { EmulatorSpec::TrueSkill(params) };
        let mut em = spec.build(0).unwrap();
        let tau = 25.0 / 300.0;
        for r in &data {
            let before = sigmas(&em);
            em.fit(r).unwrap();
            let after = sigmas(&em);
            for (id, s) in &after {
                let prior = before.get(id).copied().unwrap_or(25.0 / 3.0);
                prop_assert!(*s <= (prior * prior + tau * tau).sqrt() + 1e-12);
                prop_assert!(*s > 0.0);
            }
            let q = em.quality(&r.team1, &r.team2).unwrap();
            prop_assert!(q > 0.0 && q <= 1.0);
        }
    }

    #[test]
    fn gp_posterior_ignores_observation_order(
        pts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, 0.4f64..0.8), 1..20),
        perm_seed in any::<u64>(),
        probe in (-1.5f64..1.5, -1.5f64..1.5),
    ) {
        let cfg = GpConfig::default();
        let inputs: Vec<[f64; 2]> = pts.iter().map(|p| [p.0, p.1]).collect();
        let targets: Vec<f64> = pts.iter().map(|p| p.2).collect();
        let mut order: Vec<usize> = (0..pts.len()).collect();
        let mut rng = Rng::seed_from_u64(perm_seed);
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let a = gp::fit(&cfg, &inputs, &targets).unwrap();
        let b = gp::fit(&cfg, &order.iter().map(|&i| inputs[i]).collect::<Vec<_>>(), &order.iter().map(|&i| targets[i]).collect::<Vec<_>>()).unwrap();
        let x = [probe.0, probe.1];
        prop_assert!((a.mean(&x) - b.mean(&x)).abs() < 1e-9);
    }
}

fn sigmas(em: &skillbench_core::AnyEmulator) -> std::collections::BTreeMap<u32, f64> {
    use skillbench_core::emulator::RatingValue;
    em.state()
        .entities
        .iter()
        .map(|e| match e.rating {
            RatingValue::Gaussian { sigma, .. } => (e.id, sigma),
            ref other => panic!("unexpected rating {other:?}"),
        })
        .collect()
}
