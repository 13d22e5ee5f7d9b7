//! Phase detection and mid-game strategy labels for a few scripted teams.

use std::sync::Arc;

use moba_testbed::analytics::{classify_strategy, detect_phases, phase_winner, strategy_features, Phase};
use moba_testbed::subgames::run_full_match;
use moba_testbed::{MatchConfig, Ruleset, Team};

fn main() {
    let rules = Arc::new(Ruleset::default());
    for agent in ["pusher", "siege", "teamfight", "pickoff", "splitpush"] {
        let config = MatchConfig { seed: 2, ..MatchConfig::default() };
        let replay = run_full_match(config, rules.clone(), [vec![agent.into()], vec!["laner".into()]], None).unwrap();
        let phases = detect_phases(&replay);
        let spans: Vec<String> =
            phases.labels.iter().filter(|l| !l.is_empty()).map(|l| format!("{:?} {}-{}", l.phase, l.start, l.end)).collect();
        println!("{agent}: {}", spans.join(", "));
        let mid = phases.span(Phase::MidGame);
        if mid.is_empty() {
            println!("  no mid game");
            continue;
        }
        let label = classify_strategy(&replay, Team::Blue, mid.start, mid.end).unwrap();
        let f = strategy_features(&replay, Team::Blue, mid.start, mid.end);
        println!(
            "  label {label:?} (spread {:.1}, structure share {:.2}, kills {}), laning won by {:?}",
            f.spread,
            f.structure_share,
            f.kills,
            phase_winner(&replay, Phase::Laning).ok()
        );
    }
}
