//! Item-build sub-game: greedy versus exhaustive purchasing in each phase.

use std::sync::Arc;

use moba_testbed::subgames::{run_item_subgame, EnemyProfile, ExhaustiveBuild, GreedyBuild, PhaseName, SubgameSpec};
use moba_testbed::Ruleset;

fn main() {
    let rules = Arc::new(Ruleset::default());
    let enemy = EnemyProfile { physical_share: 0.8, ..EnemyProfile::default() };
    for phase in [PhaseName::Opening, PhaseName::Mid, PhaseName::Late] {
        let spec = SubgameSpec::item_build("warden", phase, enemy);
        let greedy = run_item_subgame(&spec, rules.clone(), &mut GreedyBuild).unwrap();
        let best = run_item_subgame(&spec, rules.clone(), &mut ExhaustiveBuild::default()).unwrap();
        println!(
            "{phase:?}: greedy {:.0} ({} items), exhaustive {:.0} ({} items)",
            greedy.score, greedy.metrics["items"], best.score, best.metrics["items"]
        );
    }
}
