use serde::{Deserialize, Serialize};

/// Combat attribute block of a hero or creep.
///
/// The same shape doubles as an additive delta for items, buffs and
/// per-level growth. Current hp/mana and level live on the owning unit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Stats {
    pub max_hp: f64,
    pub max_mana: f64,
    pub attack_damage: f64,
    /// Attacks per second.
    pub attack_speed: f64,
    pub attack_range: f64,
    pub armor: f64,
    pub magic_resist: f64,
    /// Distance units per second.
    pub move_speed: f64,
    pub crit_chance: f64,
    /// Per second.
    pub hp_regen: f64,
    /// Per second.
    pub mana_regen: f64,
}

impl Stats {
    pub fn plus(&self, d: &Stats) -> Stats {
        Stats {
            max_hp: self.max_hp + d.max_hp,
            max_mana: self.max_mana + d.max_mana,
            attack_damage: self.attack_damage + d.attack_damage,
            attack_speed: self.attack_speed + d.attack_speed,
            attack_range: self.attack_range + d.attack_range,
            armor: self.armor + d.armor,
            magic_resist: self.magic_resist + d.magic_resist,
            move_speed: self.move_speed + d.move_speed,
            crit_chance: self.crit_chance + d.crit_chance,
            hp_regen: self.hp_regen + d.hp_regen,
            mana_regen: self.mana_regen + d.mana_regen,
        }
    }

    pub fn scaled(&self, k: f64) -> Stats {
        Stats {
            max_hp: self.max_hp * k,
            max_mana: self.max_mana * k,
            attack_damage: self.attack_damage * k,
            attack_speed: self.attack_speed * k,
            attack_range: self.attack_range * k,
            armor: self.armor * k,
            magic_resist: self.magic_resist * k,
            move_speed: self.move_speed * k,
            crit_chance: self.crit_chance * k,
            hp_regen: self.hp_regen * k,
            mana_regen: self.mana_regen * k,
        }
    }

    /// Crit chance is capped at 1; every other field is floored at 0.
    pub fn normalized(mut self) -> Stats {
        for v in [
            &mut self.max_hp,
            &mut self.max_mana,
            &mut self.attack_damage,
            &mut self.attack_speed,
            &mut self.attack_range,
            &mut self.armor,
            &mut self.magic_resist,
            &mut self.move_speed,
            &mut self.hp_regen,
            &mut self.mana_regen,
        ] {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        self.crit_chance = self.crit_chance.clamp(0.0, 1.0);
        self
    }

    pub fn is_valid(&self) -> bool {
        let fields = [
            self.max_hp,
            self.max_mana,
            self.attack_damage,
            self.attack_speed,
            self.attack_range,
            self.armor,
            self.magic_resist,
            self.move_speed,
            self.crit_chance,
            self.hp_regen,
            self.mana_regen,
        ];
        fields.iter().all(|v| v.is_finite() && *v >= 0.0) && self.crit_chance <= 1.0
    }

    /// Ticks between basic attacks at the given tick rate (at least one).
    pub fn attack_cooldown_ticks(&self, tick_rate: u32) -> u64 {
        if self.attack_speed <= 0.0 {
            return u64::MAX / 4;
        }
        ((f64::from(tick_rate) / self.attack_speed).round() as u64).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AbilityKind {
    Nuke,
    Aoe,
    Stun,
    Heal,
    Dash,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ability {
    pub kind: AbilityKind,
    /// Magic damage for Nuke/Aoe/Stun, hp restored for Heal, unused by Dash.
    pub power: f64,
    pub range: f64,
    #[serde(default)]
    pub radius: f64,
    #[serde(default)]
    pub stun_ticks: u64,
    pub mana_cost: f64,
    pub cooldown_ticks: u64,
}

impl Ability {
    pub fn is_valid(&self) -> bool {
        self.cooldown_ticks >= 1
            && (self.kind != AbilityKind::Stun || self.stun_ticks > 0)
            && (self.kind != AbilityKind::Aoe || self.radius > 0.0)
            && self.power >= 0.0
            && self.range >= 0.0
            && self.mana_cost >= 0.0
    }

    pub fn is_damaging(&self) -> bool {
        matches!(self.kind, AbilityKind::Nuke | AbilityKind::Aoe | AbilityKind::Stun)
    }
}
