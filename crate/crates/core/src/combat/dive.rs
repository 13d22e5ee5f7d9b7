use serde::{Deserialize, Serialize};

use crate::agents::Action;
use crate::types::{UnitId, Vec2};
use crate::world::WorldState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiveVerdict {
    KillAndEscape,
    KillAndDie,
    Abort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivePhase {
    /// Walk in and hit the victim until it dies.
    Engage,
    /// Run to the own fountain.
    Retreat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiveAnalysis {
    pub verdict: DiveVerdict,
    /// `(tick, diver hp, victim hp)` after each simulated tick.
    pub trace: Vec<(u64, f64, f64)>,
    pub kill_tick: Option<u64>,
    pub ticks: u64,
}

/// Action the scripted diver takes in `phase`.
pub fn dive_script_action(world: &WorldState, diver: UnitId, victim: UnitId, phase: DivePhase) -> Action {
    match phase {
        DivePhase::Engage if world.hero(victim).is_some_and(|v| v.is_alive()) => Action::AttackUnit(victim),
        _ => {
            let team = world.hero(diver).map(|d| d.team).unwrap_or(crate::types::Team::Blue);
            Action::Move(world.map.fountain(team))
        }
    }
}

fn in_enemy_turret_range(world: &WorldState, diver: UnitId) -> bool {
    let Some(d) = world.hero(diver) else { return false };
    let enemy = d.team.opponent();
    world.structures.nodes.iter().any(|n| {
        n.id.team == enemy && !n.is_destroyed() && n.attack.is_some_and(|a| n.position.dist(d.pos) <= a.range)
    })
}

/// Verdict of the scripted dive after one simulated tick, if decided.
pub(crate) fn dive_outcome(world: &WorldState, diver: UnitId, victim: UnitId, killed: bool) -> Option<DiveVerdict> {
    let diver_alive = world.hero(diver).is_some_and(|d| d.is_alive());
    match (killed, diver_alive) {
        (false, false) => Some(DiveVerdict::Abort),
        (true, false) => Some(DiveVerdict::KillAndDie),
        (true, true) if !in_enemy_turret_range(world, diver) => Some(DiveVerdict::KillAndEscape),
        _ => {
            let _ = victim;
            None
        }
    }
}

/// Forward-simulates a scripted dive with the engine rules on a copy of
/// `world` reduced to the two heroes (creeps removed, waves and camps off,
/// turrets active).
pub fn analyze_tower_dive(world: &WorldState, diver: UnitId, victim: UnitId, horizon: u64) -> DiveAnalysis {
    let abort = |trace, ticks| DiveAnalysis { verdict: DiveVerdict::Abort, trace, kill_tick: None, ticks };
    let (Some(d), Some(v)) = (world.hero(diver), world.hero(victim)) else { return abort(Vec::new(), 0) };
    if horizon == 0 || !d.is_alive() || !v.is_alive() || d.team == v.team {
        return abort(Vec::new(), 0);
    }
    let mut w = reduce_for_dive(world, diver, victim, horizon);
    let mut phase = DivePhase::Engage;
    let mut trace = Vec::new();
    let mut kill_tick = None;
    for k in 1..=horizon {
        let action = dive_script_action(&w, diver, victim, phase);
        w.step(&[(diver, action), (victim, Action::Idle)]);
        let dh = w.hero(diver).map_or(0.0, |h| h.hp);
        let vh = w.hero(victim).map_or(0.0, |h| h.hp);
        trace.push((w.tick, dh, vh));
        if kill_tick.is_none() && !w.hero(victim).is_some_and(|h| h.is_alive()) {
            kill_tick = Some(w.tick);
            phase = DivePhase::Retreat;
        }
        if let Some(verdict) = dive_outcome(&w, diver, victim, kill_tick.is_some()) {
            return DiveAnalysis { verdict, trace, kill_tick, ticks: k };
        }
    }
    DiveAnalysis { verdict: DiveVerdict::Abort, trace, kill_tick, ticks: horizon }
}

/// Copy of `world` with only `diver` and `victim` in play.
pub fn reduce_for_dive(world: &WorldState, diver: UnitId, victim: UnitId, horizon: u64) -> WorldState {
    let mut w = world.clone();
    w.clear_creeps();
    w.config.spawn_waves = false;
    w.config.jungle = false;
    w.config.turrets_active = true;
    w.config.respawn = false;
    w.config.max_ticks = w.config.max_ticks.max(w.tick + horizon + 1);
    for i in 0..w.heroes.len() {
        let id = w.heroes[i].id;
        if id != diver && id != victim && w.heroes[i].respawn_at != Some(u64::MAX) {
            w.bench_hero(i);
        }
    }
    w.refresh_vision();
    w
}

/// Position a dive scenario generator can use: on the segment from the
/// turret toward the victim's own base, `offset` units from the turret.
pub fn behind_turret(turret: Vec2, toward: Vec2, offset: f64) -> Vec2 {
    let d = turret.dist(toward);
    if d < 1e-9 {
        return turret;
    }
    turret + (toward - turret) * (offset / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Ruleset;
    use crate::mapgraph::StructureId;
    use crate::types::{Lane, Team};
    use crate::world::MatchConfig;
    use std::sync::Arc;

    fn scenario(diver_hp: f64, victim_hp: f64) -> WorldState {
        let cfg = MatchConfig {
            rosters: [vec!["blademaster".into()], vec!["warden".into()]],
            spawn_waves: false,
            jungle: false,
            crits: false,
            ..MatchConfig::default()
        };
        let mut w = WorldState::new(cfg, Arc::new(Ruleset::default())).unwrap();
        let t = w.structures.node(StructureId::lane(Team::Red, Lane::Mid, 1)).unwrap().position;
        let fountain = w.map.fountain(Team::Red);
        w.heroes[1].pos = behind_turret(t, fountain, 2.0);
        w.heroes[0].pos = w.heroes[1].pos + (t - w.heroes[1].pos) * 0.5;
        w.heroes[0].hp = diver_hp;
        w.heroes[1].hp = victim_hp;
        w.refresh_vision();
        w
    }

    #[test]
    fn one_hit_kill_escapes() {
        let w = scenario(f64::MAX.min(2000.0), 1.0);
        let a = analyze_tower_dive(&w, UnitId(0), UnitId(1), 600);
        assert_eq!(a.verdict, DiveVerdict::KillAndEscape);
        assert!(a.kill_tick.is_some());
    }

    #[test]
    fn fragile_diver_never_escapes() {
        let w = scenario(1.0, 5000.0);
        let a = analyze_tower_dive(&w, UnitId(0), UnitId(1), 600);
        assert_ne!(a.verdict, DiveVerdict::KillAndEscape);
    }

    #[test]
    fn zero_horizon_aborts() {
        let w = scenario(500.0, 1.0);
        assert_eq!(analyze_tower_dive(&w, UnitId(0), UnitId(1), 0).verdict, DiveVerdict::Abort);
    }
}
