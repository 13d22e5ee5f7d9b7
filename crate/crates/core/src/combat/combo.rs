use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{mitigate, AbilityKind};
use crate::types::UnitId;
use crate::world::{HeroState, WorldState};

/// One step of a scripted combo. Each ability or attack takes one tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComboStep {
    Ability(usize),
    BasicAttack,
    Wait(u32),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComboReport {
    pub killed: bool,
    /// Sum of mitigated damage applied before the kill (or over the whole combo).
    pub total_damage: f64,
    /// Hp the target regenerated while the combo ran.
    pub regenerated: f64,
    /// Ticks the combo took (until the kill, if any).
    pub ticks: u64,
    pub kill_tick: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComboError {
    #[error("no such hero {0}")]
    UnknownHero(UnitId),
    #[error("{0} is not in play")]
    NotInPlay(UnitId),
    #[error("attacker and target are on the same team")]
    SameTeam,
    #[error("step {step}: no ability in slot {slot}")]
    NoSuchSlot { step: usize, slot: usize },
    #[error("step {step}: ability {slot} does not deal damage")]
    NotDamaging { step: usize, slot: usize },
    #[error("step {step}: ability {slot} on cooldown until tick {ready}")]
    Cooldown { step: usize, slot: usize, ready: u64 },
    #[error("step {step}: ability {slot} needs {need} mana, have {have:.1}")]
    Mana { step: usize, slot: usize, need: f64, have: f64 },
    #[error("step {step}: basic attack not ready until tick {ready}")]
    AttackNotReady { step: usize, ready: u64 },
    #[error("step {step}: target out of range ({distance:.2} > {range:.2})")]
    OutOfRange { step: usize, distance: f64, range: f64 },
    #[error("attacker is stunned until tick {0}")]
    Stunned(u64),
}

/// Decides whether `attacker` kills `target` with `steps`, starting on the
/// next tick of `world`. Both units stay where they are, crits never happen,
/// and the target regenerates between hits exactly as in the engine.
pub fn combo_kill_check(
    world: &WorldState,
    attacker: UnitId,
    target: UnitId,
    steps: &[ComboStep],
) -> Result<ComboReport, ComboError> {
    let get = |id: UnitId| -> Result<&HeroState, ComboError> {
        let h = world.hero(id).ok_or(ComboError::UnknownHero(id))?;
        if h.is_alive() {
            Ok(h)
        } else {
            Err(ComboError::NotInPlay(id))
        }
    };
    let mut a = get(attacker)?.clone();
    let mut d = get(target)?.clone();
    if a.team == d.team {
        return Err(ComboError::SameTeam);
    }
    let rules = world.rules.as_ref();
    let map = world.map.as_ref();
    let rate = world.config.tick_rate;
    let start = world.tick + 1;
    if a.is_stunned(start) && !steps.is_empty() {
        return Err(ComboError::Stunned(a.stunned_until));
    }
    let distance = a.pos.dist(d.pos);

    let mut t = start;
    let mut total = 0.0;
    let mut regenerated = 0.0;
    let mut sink = Vec::new();
    let report = |killed: bool, total: f64, regenerated: f64, t: u64| ComboReport {
        killed,
        total_damage: total,
        regenerated,
        ticks: t - start,
        kill_tick: killed.then(|| t - 1),
    };

    for (step, s) in steps.iter().enumerate() {
        let hits: Vec<f64> = match *s {
            ComboStep::Wait(n) => vec![0.0; n as usize],
            ComboStep::Ability(slot) => {
                let ab = *a.abilities.get(slot).ok_or(ComboError::NoSuchSlot { step, slot })?;
                if !ab.is_damaging() {
                    return Err(ComboError::NotDamaging { step, slot });
                }
                if t < a.ability_ready[slot] {
                    return Err(ComboError::Cooldown { step, slot, ready: a.ability_ready[slot] });
                }
                if a.mana < ab.mana_cost {
                    return Err(ComboError::Mana { step, slot, need: ab.mana_cost, have: a.mana });
                }
                if distance > ab.range {
                    return Err(ComboError::OutOfRange { step, distance, range: ab.range });
                }
                a.mana -= ab.mana_cost;
                a.ability_ready[slot] = t + ab.cooldown_ticks;
                let dmg = if ab.power > 0.0 { mitigate(ab.power, d.stats.magic_resist) } else { 0.0 };
                if ab.kind == AbilityKind::Stun {
                    d.stunned_until = d.stunned_until.max(t + ab.stun_ticks);
                }
                vec![dmg]
            }
            ComboStep::BasicAttack => {
                if t < a.next_attack_tick {
                    return Err(ComboError::AttackNotReady { step, ready: a.next_attack_tick });
                }
                if distance > a.stats.attack_range {
                    return Err(ComboError::OutOfRange { step, distance, range: a.stats.attack_range });
                }
                a.next_attack_tick = t + a.stats.attack_cooldown_ticks(rate);
                vec![mitigate(a.stats.attack_damage, d.stats.armor)]
            }
        };
        for dmg in hits {
            let applied = dmg.min(d.hp.max(0.0));
            d.hp -= applied;
            total += applied;
            if d.hp <= 0.0 {
                return Ok(report(true, total, regenerated, t + 1));
            }
            let before = d.hp;
            a.upkeep(t, rules, map, rate, &mut sink);
            d.upkeep(t, rules, map, rate, &mut sink);
            regenerated += d.hp - before;
            t += 1;
        }
    }
    Ok(report(false, total, regenerated, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Ruleset;
    use crate::types::Vec2;
    use crate::world::MatchConfig;
    use std::sync::Arc;

    fn duel(attacker: &str, target: &str) -> WorldState {
        let cfg = MatchConfig {
            rosters: [vec![attacker.into()], vec![target.into()]],
            spawn_waves: false,
            jungle: false,
            crits: false,
            ..MatchConfig::default()
        };
        let mut w = WorldState::new(cfg, Arc::new(Ruleset::default())).unwrap();
        w.heroes[0].pos = Vec2::new(70.0, 75.0);
        w.heroes[1].pos = Vec2::new(72.0, 75.0);
        w
    }

    #[test]
    fn empty_combo_never_kills() {
        let w = duel("pyromancer", "warden");
        let r = combo_kill_check(&w, UnitId(0), UnitId(1), &[]).unwrap();
        assert!(!r.killed);
        assert_eq!(r.total_damage, 0.0);
    }

    #[test]
    fn single_nuke_above_hp_kills() {
        let mut w = duel("pyromancer", "warden");
        w.heroes[1].hp = 5.0;
        let slot = w.heroes[0].abilities.iter().position(|a| a.kind == AbilityKind::Nuke).unwrap();
        let r = combo_kill_check(&w, UnitId(0), UnitId(1), &[ComboStep::Ability(slot)]).unwrap();
        assert!(r.killed);
        assert_eq!(r.kill_tick, Some(w.tick + 1));
    }

    #[test]
    fn cooldown_violation_names_step() {
        let w = duel("pyromancer", "warden");
        let slot = w.heroes[0].abilities.iter().position(|a| a.kind == AbilityKind::Nuke).unwrap();
        let err = combo_kill_check(&w, UnitId(0), UnitId(1), &[ComboStep::Ability(slot), ComboStep::Ability(slot)])
            .unwrap_err();
        assert!(matches!(err, ComboError::Cooldown { step: 1, .. }), "{err}");
    }

    #[test]
    fn mana_violation_names_step() {
        let mut w = duel("pyromancer", "warden");
        w.heroes[0].mana = 0.0;
        let slot = w.heroes[0].abilities.iter().position(|a| a.kind == AbilityKind::Nuke).unwrap();
        let err = combo_kill_check(&w, UnitId(0), UnitId(1), &[ComboStep::Wait(3), ComboStep::Ability(slot)]).unwrap_err();
        assert!(matches!(err, ComboError::Mana { step: 1, .. }), "{err}");
    }

    #[test]
    fn back_to_back_attacks_are_rejected() {
        let w = duel("marksman", "warden");
        let err = combo_kill_check(&w, UnitId(0), UnitId(1), &[ComboStep::BasicAttack, ComboStep::BasicAttack])
            .unwrap_err();
        assert!(matches!(err, ComboError::AttackNotReady { step: 1, .. }));
    }
}
