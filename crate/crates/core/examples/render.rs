//! ASCII snapshots of a match at a few points in time, plus a JSONL
//! round trip of its replay.

use std::sync::Arc;

use moba_testbed::analytics::Replay;
use moba_testbed::harness::render;
use moba_testbed::subgames::run_full_match;
use moba_testbed::{MatchConfig, Ruleset};

fn main() {
    let rules = Arc::new(Ruleset::default());
    let config = MatchConfig { seed: 5, ..MatchConfig::default() };
    let replay = run_full_match(config, rules, [vec!["siege".into()], vec!["laner".into()]], None).unwrap();

    let text = replay.to_jsonl();
    let back = Replay::from_jsonl(&text).unwrap();
    assert_eq!(back.to_jsonl(), text);
    println!("replay: {} lines, {} bytes\n", text.lines().count(), text.len());

    let d = back.duration();
    for tick in [0, d / 2, d] {
        println!("{}", render(&back, tick).unwrap());
    }
}
