//! One-lane farming sub-game: last-hit oracle alone, then two laners.

use std::sync::Arc;

use moba_testbed::subgames::{run_laning_subgame, SubgameSpec};
use moba_testbed::Ruleset;

fn main() {
    let rules = Arc::new(Ruleset::default());

    let solo = run_laning_subgame(&SubgameSpec::laning(1, "marksman", "lasthit-oracle", None), rules.clone()).unwrap();
    println!(
        "oracle: secured {} of {} last-hittable creeps, {} gold",
        solo.metrics["secured"], solo.metrics["last_hittable"], solo.metrics["gold"]
    );

    let duel = run_laning_subgame(&SubgameSpec::laning(1, "marksman", "laner", Some("laner")), rules).unwrap();
    println!(
        "laner vs laner: cs {}-{}, gold {}-{}, score {:.3}",
        duel.metrics["last_hits"],
        duel.metrics["opponent_last_hits"],
        duel.metrics["gold"],
        duel.metrics["opponent_gold"],
        duel.score
    );
}
