//! Is diving a hero under its turret worth it? Sweeps the diver's level
//! against a fixed victim and prints each verdict.

use std::sync::Arc;

use moba_testbed::combat::{analyze_tower_dive, behind_turret};
use moba_testbed::mapgraph::StructureId;
use moba_testbed::{Lane, MatchConfig, Ruleset, Team, UnitId, WorldState};

fn main() {
    let rules = Arc::new(Ruleset::default());
    let config = MatchConfig {
        spawn_waves: false,
        jungle: false,
        rosters: [vec!["stalker".into()], vec!["marksman".into()]],
        ..MatchConfig::default()
    };
    let turret = StructureId::lane(Team::Red, Lane::Mid, 1);

    for level in [3, 6, 9, 12, 15] {
        let mut w = WorldState::new(config.clone(), rules.clone()).unwrap();
        let t = w.structures.node(turret).unwrap().position;
        let victim_pos = behind_turret(t, w.map.fountain(Team::Red), 2.0);
        let diver_pos = behind_turret(victim_pos, w.map.fountain(Team::Blue), 6.0);
        w.heroes[0].set_level(level, &rules);
        w.heroes[0].pos = diver_pos;
        w.heroes[1].set_level(6, &rules);
        w.heroes[1].pos = victim_pos;
        w.heroes[1].hp *= 0.5;
        w.refresh_vision();

        let a = analyze_tower_dive(&w, UnitId(0), UnitId(1), 200);
        let (_, diver_hp, _) = a.trace.last().copied().unwrap_or_default();
        println!("diver level {level:>2}: {:?} (kill at {:?}, diver hp {diver_hp:.0} after {} ticks)", a.verdict, a.kill_tick, a.ticks);
    }
}
