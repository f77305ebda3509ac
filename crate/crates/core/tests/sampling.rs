use rand::SeedableRng;
use skillbench_core::{MatchDataset, MatchId, MatchRecord, Outcome, PlayerId, Rng, Team, TeamId};

fn dataset(n: u32) -> MatchDataset {
    let team = |t: u32| Team::new(TeamId(t), &(0..5).map(|k| PlayerId(t * 5 + k)).collect::<Vec<_>>()).unwrap();
    let records = (0..n).map(|i| MatchRecord::new(MatchId(i), team(i % 4), team(4 + i % 3), Outcome::Win1, 0).unwrap()).collect();
    MatchDataset::from_records(records).unwrap()
}

fn chi_square(counts: &[u64], expected: f64) -> f64 {
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

// upper 0.1% point of the chi-square distribution with 9 degrees of freedom
const CRIT_9: f64 = 27.877;

#[test]
fn candidates_are_uniform_without_replacement() {
    let data = dataset(10);
    let mut rng = Rng::seed_from_u64(11);
    let draws = 30_000;
    let mut any = [0u64; 10];
    let mut first = [0u64; 10];
    for _ in 0..draws {
        let c = data.sample_candidates(3, &mut rng).unwrap();
        let ids: std::collections::BTreeSet<_> = c.iter().map(|r| r.id).collect();
        assert_eq!(ids.len(), 3);
        for r in &c {
            any[r.id.0 as usize] += 1;
        }
        first[c[0].id.0 as usize] += 1;
    }
    let x_any = chi_square(&any, draws as f64 * 0.3);
    let x_first = chi_square(&first, draws as f64 * 0.1);
    assert!(x_any < CRIT_9, "inclusion χ² = {x_any}");
    assert!(x_first < CRIT_9, "first-position χ² = {x_first}");
}

#[test]
fn small_pools_return_everything() {
    let data = dataset(4);
    let mut rng = Rng::seed_from_u64(0);
    let mut ids: Vec<_> = data.sample_candidates(25, &mut rng).unwrap().iter().map(|r| r.id.0).collect();
    ids.sort();
    assert_eq!(ids, [0, 1, 2, 3]);
    assert!(MatchDataset::default().sample_candidates(1, &mut rng).is_err());
}
