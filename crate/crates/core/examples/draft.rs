//! A tournament draft driven by a counter matrix, then the drafted match.

use std::sync::Arc;

use moba_testbed::draft::{auto_draft, default_tournament_sequence, CounterMatrix, DraftMode, DraftState};
use moba_testbed::subgames::run_full_match;
use moba_testbed::{MatchConfig, Ruleset};

fn main() {
    let rules = Arc::new(Ruleset::default());
    let pool: Vec<String> = rules.heroes.iter().map(|h| h.name.clone()).collect();
    let n = pool.len();

    // toy matrix: heroes earlier in the catalog edge out later ones
    let m = (0..n).map(|i| (0..n).map(|j| (j as f64 - i as f64) / n as f64).collect()).collect();
    let matrix = CounterMatrix::new(pool.clone(), m).unwrap();

    let draft = DraftState::new(DraftMode::Tournament, pool, &default_tournament_sequence(), 5).unwrap();
    let done = auto_draft(draft, &matrix).unwrap();
    let t = done.transcript();
    for (team, action) in &t.actions {
        println!("{team:<4} {action:?}");
    }
    println!("blue {:?}\nred  {:?}", t.rosters[0], t.rosters[1]);

    let config = MatchConfig { seed: 3, ..MatchConfig::default() };
    let agents = [vec!["teamfight".to_string()], vec!["teamfight".to_string()]];
    let replay = run_full_match(config, rules, agents, Some(t)).unwrap();
    println!("drafted match: {:?}", replay.outcome().unwrap());
}
