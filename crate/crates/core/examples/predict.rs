//! Monte Carlo fight prediction from a world snapshot.

use std::sync::Arc;

use moba_testbed::analytics::predict_combat_outcome;
use moba_testbed::subgames::{teamfight_world, SubgameSpec};
use moba_testbed::Ruleset;

fn main() {
    let rules = Arc::new(Ruleset::default());
    let agents = [vec!["teamfight".to_string()], vec!["teamfight".to_string()]];
    let matchups: [(&[&str], &[&str]); 3] = [
        (&["warden", "marksman"], &["warden", "marksman"]),
        (&["warden", "marksman", "cleric"], &["warden", "marksman"]),
        (&["pyromancer", "hexer"], &["stalker", "reaver"]),
    ];
    for (blue, red) in matchups {
        let spec = SubgameSpec::teamfight(1, blue, red, "teamfight");
        let world = teamfight_world(&spec, rules.clone()).unwrap();
        let p = predict_combat_outcome(&world, &agents, 200, 9, spec.duration_ticks).unwrap();
        println!("{blue:?} vs {red:?}: blue {:.2}  red {:.2}  draw {:.2}", p.blue, p.red, p.draw);
    }
}
