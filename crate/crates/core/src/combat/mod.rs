//! Damage model, turret targeting, death timers and the fight analyzers.

mod combo;
mod dive;
mod stats;

pub use combo::{combo_kill_check, ComboError, ComboReport, ComboStep};
pub use dive::{analyze_tower_dive, behind_turret, dive_script_action, reduce_for_dive, DiveAnalysis, DivePhase, DiveVerdict};
pub use stats::{Ability, AbilityKind, Stats};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Ruleset;
use crate::mapgraph::{StructureId, StructureNode};
use crate::types::{Team, UnitId, Vec2};
use crate::world::WorldState;

/// Anything that can deal or receive damage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Actor {
    Unit(UnitId),
    Structure(StructureId),
}

impl Actor {
    pub fn unit(self) -> Option<UnitId> {
        match self {
            Actor::Unit(u) => Some(u),
            Actor::Structure(_) => None,
        }
    }

    pub fn hero(self) -> Option<UnitId> {
        self.unit().filter(|u| u.is_hero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DamageKind {
    Physical,
    Magic,
    /// Turret shots; not mitigated.
    Structure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DamageEvent {
    pub tick: u64,
    pub source: Actor,
    pub target: Actor,
    pub raw: f64,
    pub mitigated: f64,
    pub kind: DamageKind,
    pub crit: bool,
}

/// `amount * 100 / (100 + resist)`; negative resist is treated as zero.
pub fn mitigate(amount: f64, resist: f64) -> f64 {
    amount * 100.0 / (100.0 + resist.max(0.0))
}

pub fn mitigated_for(kind: DamageKind, raw: f64, armor: f64, magic_resist: f64) -> f64 {
    match kind {
        DamageKind::Physical => mitigate(raw, armor),
        DamageKind::Magic => mitigate(raw, magic_resist),
        DamageKind::Structure => raw,
    }
}

/// Reach of a basic attack against a target: structures have a footprint.
pub const STRUCTURE_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, Copy)]
pub struct AttackProfile {
    pub source: Actor,
    pub pos: Vec2,
    pub damage: f64,
    pub range: f64,
    pub crit_chance: f64,
    pub ready_at: u64,
}

#[derive(Debug, Clone, Copy)]
pub struct DefenseProfile {
    pub target: Actor,
    pub pos: Vec2,
    pub armor: f64,
    /// Extra reach granted by the target's footprint.
    pub radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AttackResult {
    Hit(DamageEvent),
    OutOfRange,
    NotReady,
}

pub fn in_attack_range(attacker: Vec2, range: f64, target: Vec2, radius: f64) -> bool {
    attacker.dist(target) <= range + radius
}

/// Resolves one physical basic attack.
///
/// When `crit_rng` is given exactly one number is drawn per resolved attack,
/// and a crit multiplies the raw damage by `crit_multiplier`.
pub fn resolve_basic_attack<R: Rng>(
    attacker: &AttackProfile,
    target: &DefenseProfile,
    tick: u64,
    crit_rng: Option<&mut R>,
    crit_multiplier: f64,
) -> AttackResult {
    if !in_attack_range(attacker.pos, attacker.range, target.pos, target.radius) {
        return AttackResult::OutOfRange;
    }
    if tick < attacker.ready_at {
        return AttackResult::NotReady;
    }
    let crit = match crit_rng {
        Some(rng) => rng.gen::<f64>() < attacker.crit_chance,
        None => false,
    };
    let raw = if crit { attacker.damage * crit_multiplier } else { attacker.damage };
    AttackResult::Hit(DamageEvent {
        tick,
        source: attacker.source,
        target: target.target,
        raw,
        mitigated: mitigate(raw, target.armor),
        kind: DamageKind::Physical,
        crit,
    })
}

/// Respawn delay in seconds: `base + per_level * level + per_minute * minutes`.
pub fn death_timer(rules: &Ruleset, level: u32, game_seconds: f64) -> f64 {
    let c = &rules.combat;
    c.death_base_s + c.death_per_level_s * f64::from(level.max(1)) + c.death_per_minute_s * (game_seconds.max(0.0) / 60.0)
}

/// Turret target choice for the current tick.
///
/// Priority: an enemy hero that hurt an allied hero inside the turret radius
/// last tick (aggro), then the current target if still valid, then the
/// nearest enemy creep, then the nearest enemy hero. Ties go to the lower id.
pub fn turret_acquire_target(turret: &StructureNode, world: &WorldState) -> Option<UnitId> {
    let attack = turret.attack?;
    if turret.is_destroyed() {
        return None;
    }
    let team = turret.id.team;
    let enemy = team.opponent();
    let range = attack.range;
    let in_range = |p: Vec2| p.dist(turret.position) <= range;

    let mut aggro: Option<(f64, UnitId)> = None;
    for &(aggressor, victim) in &world.aggression {
        let (Some(a), Some(v)) = (world.hero(aggressor), world.hero(victim)) else { continue };
        if a.team != enemy || v.team != team || !a.is_alive() {
            continue;
        }
        if in_range(v.pos) && in_range(a.pos) {
            let d = a.pos.dist(turret.position);
            if aggro.map_or(true, |(bd, bid)| (d, aggressor) < (bd, bid)) {
                aggro = Some((d, aggressor));
            }
        }
    }
    if let Some((_, id)) = aggro {
        return Some(id);
    }

    if let Some(cur) = turret.target {
        if let Some((pos, t)) = world.unit_pos_team(cur) {
            if t == Some(enemy) && in_range(pos) {
                return Some(cur);
            }
        }
    }

    let nearest = |it: &mut dyn Iterator<Item = (UnitId, Vec2)>| -> Option<UnitId> {
        let mut best: Option<(f64, UnitId)> = None;
        for (id, p) in it {
            if !in_range(p) {
                continue;
            }
            let d = p.dist(turret.position);
            if best.map_or(true, |(bd, bid)| (d, id) < (bd, bid)) {
                best = Some((d, id));
            }
        }
        best.map(|(_, id)| id)
    };
    let mut creeps = world.creeps.iter().filter(|c| c.owner == Some(enemy)).map(|c| (c.id, c.pos));
    if let Some(id) = nearest(&mut creeps) {
        return Some(id);
    }
    let mut heroes = world.heroes.iter().filter(|h| h.team == enemy && h.is_alive()).map(|h| (h.id, h.pos));
    nearest(&mut heroes)
}

/// Team owning an attacker, used to pick its crit stream.
pub fn actor_team(world: &WorldState, actor: Actor) -> Option<Team> {
    match actor {
        Actor::Unit(u) => world.unit_pos_team(u).and_then(|(_, t)| t),
        Actor::Structure(s) => Some(s.team),
    }
}
