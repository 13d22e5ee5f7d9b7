//! Plays one full match between two scripted teams and prints the result.

use std::sync::Arc;

use moba_testbed::harness::MatchSummary;
use moba_testbed::subgames::run_full_match;
use moba_testbed::{MatchConfig, Ruleset};

fn main() {
    let rules = Arc::new(Ruleset::default());
    let config = MatchConfig { seed: 7, ..MatchConfig::default() };
    let agents = [vec!["pusher".to_string()], vec!["laner".to_string()]];
    let replay = run_full_match(config, rules, agents, None).expect("default config is valid");

    let s = MatchSummary::of(&replay);
    println!("{:?} after {:.0}s of game time", s.outcome.unwrap(), s.duration_s);
    for h in &s.heroes {
        println!(
            "  {:<4} {:<11} {:<7} {}/{}/{}  cs {:>3}  gold {:>5}",
            h.team.to_string(), h.hero, h.agent, h.kills, h.deaths, h.assists, h.last_hits, h.gold
        );
    }
}
