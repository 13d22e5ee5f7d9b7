//! Checks whether an ability sequence kills a target before it can react.

use std::sync::Arc;

use moba_testbed::combat::{combo_kill_check, ComboStep};
use moba_testbed::{MatchConfig, Ruleset, UnitId, Vec2, WorldState};

fn main() {
    let rules = Arc::new(Ruleset::default());
    let config = MatchConfig {
        crits: false,
        spawn_waves: false,
        jungle: false,
        rosters: [vec!["pyromancer".into()], vec!["marksman".into()]],
        ..MatchConfig::default()
    };
    let mut w = WorldState::new(config, rules.clone()).unwrap();
    for (i, x) in [(0, 70.0), (1, 74.0)] {
        w.heroes[i].set_level(8, &rules);
        w.heroes[i].pos = Vec2::new(x, 75.0);
    }
    w.refresh_vision();

    let combos: [(&str, Vec<ComboStep>); 3] = [
        ("nuke", vec![ComboStep::Ability(0)]),
        ("nuke, aoe", vec![ComboStep::Ability(0), ComboStep::Ability(1)]),
        ("nuke, aoe, 3 autos", vec![
            ComboStep::Ability(0),
            ComboStep::Ability(1),
            ComboStep::BasicAttack,
            ComboStep::Wait(12),
            ComboStep::BasicAttack,
            ComboStep::Wait(12),
            ComboStep::BasicAttack,
        ]),
    ];
    for hp_share in [1.0, 0.6, 0.3] {
        let mut target = w.clone();
        target.heroes[1].hp = target.heroes[1].stats.max_hp * hp_share;
        for (name, steps) in &combos {
            match combo_kill_check(&target, UnitId(0), UnitId(1), steps) {
                Ok(r) => println!("target at {:>3.0}% hp, {name:<18}: killed {:<5} dealt {:>5.0} in {} ticks", hp_share * 100.0, r.killed, r.total_damage, r.ticks),
                Err(e) => println!("target at {:>3.0}% hp, {name:<18}: not castable ({e})", hp_share * 100.0),
            }
        }
    }
}
