//! Versioned rule tables ("default ruleset v1").
//!
//! Every gameplay number lives here so experiments can swap values through
//! a TOML file instead of code changes. Missing keys fall back to the
//! defaults below.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combat::{Ability, AbilityKind, Stats};
use crate::types::Vec2;

pub const RULESET_VERSION: &str = "default-ruleset-v1";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("unsupported ruleset version {found:?} (expected {expected:?})")]
    Version { found: String, expected: String },
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Ruleset {
    pub version: String,
    pub map: MapRules,
    pub structures: StructureRules,
    pub combat: CombatRules,
    pub creeps: CreepRules,
    pub economy: EconomyRules,
    pub jungle: JungleRules,
    pub draft: DraftRules,
    pub agents: AgentRules,
    pub phases: PhaseRules,
    pub classifier: ClassifierRules,
    pub profiles: PhaseProfiles,
    /// Per-level additive growth applied to every hero.
    pub growth: Stats,
    pub items: Vec<ItemDef>,
    pub heroes: Vec<HeroTemplate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MapRules {
    pub width: f64,
    pub height: f64,
    /// Lanes run this far in from the map edges.
    pub lane_inset: f64,
    pub lane_half_width: f64,
    /// Side of the square base region in each corner.
    pub base_size: f64,
    /// Blue-side coordinates; red is the point reflection through the centre.
    pub fountain: Vec2,
    pub main_structure: Vec2,
    pub base_turrets: [Vec2; 2],
    /// Arc-length fraction (from the owning base) of tier 1, 2, 3 lane turrets.
    pub tier_fractions: [f64; 3],
    pub vision_radius: f64,
    pub xp_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseUnlock {
    /// One fully destroyed lane opens both base turrets.
    AnyLane,
    AllLanes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StructureRules {
    pub turrets_per_lane: usize,
    pub lane_turret_hp: [f64; 3],
    pub base_turret_hp: f64,
    pub main_hp: f64,
    pub armor: f64,
    pub turret_damage: f64,
    pub turret_attack_interval_s: f64,
    pub turret_range: f64,
    pub base_unlock: BaseUnlock,
    /// Gold paid to every member of the destroying team.
    pub lane_turret_bounty: [u32; 3],
    pub base_turret_bounty: u32,
    pub main_bounty: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CombatRules {
    pub crit_multiplier: f64,
    pub death_base_s: f64,
    pub death_per_level_s: f64,
    pub death_per_minute_s: f64,
    pub hero_bounty_base: u32,
    pub hero_bounty_per_level: u32,
    pub hero_xp_base: u32,
    pub hero_xp_per_level: u32,
    pub assist_window_s: f64,
    pub assist_share: f64,
    pub fountain_hp_per_s: f64,
    pub fountain_mana_per_s: f64,
    pub recall_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CreepTemplate {
    pub hp: f64,
    pub attack_damage: f64,
    pub attack_interval_s: f64,
    pub attack_range: f64,
    pub armor: f64,
    pub bounty: u32,
    pub xp: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CreepRules {
    pub wave_interval_s: f64,
    pub first_wave_s: f64,
    pub melee_per_wave: usize,
    pub ranged_per_wave: usize,
    pub melee: CreepTemplate,
    pub ranged: CreepTemplate,
    pub move_speed: f64,
    pub aggro_range: f64,
    /// A creep drops its target beyond this distance.
    pub leash: f64,
    pub crit_chance: f64,
    /// Hp/damage bonus for creeps walking a lane whose enemy turrets are all down.
    pub empowered_bonus: f64,
    /// Hp/damage bonus per elapsed game minute, applied at spawn.
    pub growth_per_minute: f64,
    /// Hp/damage bonus per enemy structure already destroyed, applied at spawn.
    pub pressure_bonus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EconomyRules {
    pub starting_gold: u64,
    pub passive_gold_per_s: u64,
    pub passive_start_s: f64,
    pub inventory_slots: usize,
    pub sell_refund: f64,
    pub level_cap: u32,
    /// threshold(level) = xp_step * (level * (level + 1) / 2 - 1)
    pub xp_step: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuffDef {
    pub name: String,
    pub delta: Stats,
    pub duration_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampTemplate {
    /// Blue-side position; red camps mirror it.
    pub position: Vec2,
    pub units: Vec<CreepTemplate>,
    #[serde(default)]
    pub buff: Option<BuffDef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JungleRules {
    pub camps: Vec<CampTemplate>,
    pub respawn_s: f64,
    pub respawn_jitter_ticks: u64,
    pub leash: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DraftStepKind {
    Ban,
    Pick,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DraftRules {
    /// Steps alternate blue, red, blue, ...
    pub tournament_sequence: Vec<DraftStepKind>,
    pub team_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VoteWeights {
    pub low_hp: f64,
    pub proximity: f64,
    pub threat: f64,
    pub disabled: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentRules {
    pub vote: VoteWeights,
    /// Distance at which the proximity feature reaches zero.
    pub proximity_scale: f64,
    /// Threat feature is dps / threat_scale, capped at 1.
    pub threat_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhaseRules {
    pub laning_end_level: u32,
    pub laning_gold_lead: i64,
    pub late_min_items: usize,
    pub late_min_heroes: usize,
    pub phase_draw_margin: f64,
    pub xp_weight: f64,
    pub structure_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierRules {
    /// Mean pairwise hero distance above which a team counts as spread out.
    pub high_spread: f64,
    pub low_spread: f64,
    /// Share of hero structure damage dealt by a hero far from the group.
    pub lone_share: f64,
    /// A hero further than this from the others' centroid is alone.
    pub lone_distance: f64,
    pub structure_share: f64,
    pub lane_concentration: f64,
    pub pickoff_max_participants: usize,
    pub teamfight_min_participants: usize,
    /// Below this many kills, engagements decide between pickoff and team fight.
    pub min_kills: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    pub level: u32,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PhaseProfiles {
    pub opening: PhaseProfile,
    pub mid: PhaseProfile,
    pub late: PhaseProfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemTag {
    Offensive,
    Defensive,
    Hybrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemDef {
    pub id: u16,
    pub name: String,
    pub cost: u64,
    pub delta: Stats,
    pub tag: ItemTag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeroTemplate {
    pub name: String,
    pub base: Stats,
    pub abilities: Vec<Ability>,
    /// Suitability for TopLaner, MidLaner, Carry, Support, Jungler.
    pub roles: [f64; 5],
}

impl Default for MapRules {
    fn default() -> Self {
        Self {
            width: 150.0,
            height: 150.0,
            lane_inset: 12.0,
            lane_half_width: 6.0,
            base_size: 30.0,
            fountain: Vec2::new(6.0, 6.0),
            main_structure: Vec2::new(14.0, 14.0),
            base_turrets: [Vec2::new(26.0, 16.0), Vec2::new(16.0, 26.0)],
            tier_fractions: [0.38, 0.27, 0.17],
            vision_radius: 12.0,
            xp_radius: 15.0,
        }
    }
}

impl Default for StructureRules {
    fn default() -> Self {
        Self {
            turrets_per_lane: 3,
            lane_turret_hp: [1800.0, 2200.0, 2600.0],
            base_turret_hp: 2800.0,
            main_hp: 3500.0,
            armor: 0.0,
            turret_damage: 120.0,
            turret_attack_interval_s: 1.0,
            turret_range: 9.0,
            base_unlock: BaseUnlock::AnyLane,
            lane_turret_bounty: [150, 200, 250],
            base_turret_bounty: 250,
            main_bounty: 0,
        }
    }
}

impl Default for CombatRules {
    fn default() -> Self {
        Self {
            crit_multiplier: 2.0,
            death_base_s: 6.0,
            death_per_level_s: 2.0,
            death_per_minute_s: 0.5,
            hero_bounty_base: 200,
            hero_bounty_per_level: 10,
            hero_xp_base: 100,
            hero_xp_per_level: 20,
            assist_window_s: 10.0,
            assist_share: 0.5,
            fountain_hp_per_s: 40.0,
            fountain_mana_per_s: 20.0,
            recall_s: 4.0,
        }
    }
}

impl Default for CreepRules {
    fn default() -> Self {
        Self {
            wave_interval_s: 30.0,
            first_wave_s: 0.0,
            melee_per_wave: 3,
            ranged_per_wave: 3,
            melee: CreepTemplate {
                hp: 450.0,
                attack_damage: 20.0,
                attack_interval_s: 1.0,
                attack_range: 1.5,
                armor: 0.0,
                bounty: 20,
                xp: 60,
            },
            ranged: CreepTemplate {
                hp: 300.0,
                attack_damage: 22.0,
                attack_interval_s: 1.2,
                attack_range: 5.0,
                armor: 0.0,
                bounty: 25,
                xp: 45,
            },
            move_speed: 3.0,
            aggro_range: 8.0,
            leash: 10.0,
            crit_chance: 0.1,
            empowered_bonus: 0.5,
            growth_per_minute: 0.02,
            pressure_bonus: 0.15,
        }
    }
}

impl Default for EconomyRules {
    fn default() -> Self {
        Self {
            starting_gold: 600,
            passive_gold_per_s: 1,
            passive_start_s: 90.0,
            inventory_slots: 6,
            sell_refund: 0.7,
            level_cap: 18,
            xp_step: 100,
        }
    }
}

fn neutral(hp: f64, ad: f64, bounty: u32, xp: u32) -> CreepTemplate {
    CreepTemplate {
        hp,
        attack_damage: ad,
        attack_interval_s: 1.0,
        attack_range: 1.5,
        armor: 5.0,
        bounty,
        xp,
    }
}

impl Default for JungleRules {
    fn default() -> Self {
        let small = || vec![neutral(300.0, 14.0, 25, 40), neutral(300.0, 14.0, 25, 40)];
        Self {
            camps: vec![
                CampTemplate {
                    position: Vec2::new(50.0, 30.0),
                    units: vec![neutral(700.0, 28.0, 45, 80)],
                    buff: Some(BuffDef {
                        name: "fury".into(),
                        delta: Stats { attack_damage: 15.0, hp_regen: 2.0, ..Stats::default() },
                        duration_s: 90.0,
                    }),
                },
                CampTemplate {
                    position: Vec2::new(30.0, 50.0),
                    units: vec![neutral(700.0, 28.0, 45, 80)],
                    buff: Some(BuffDef {
                        name: "insight".into(),
                        delta: Stats { mana_regen: 3.0, move_speed: 0.4, ..Stats::default() },
                        duration_s: 90.0,
                    }),
                },
                CampTemplate { position: Vec2::new(80.0, 35.0), units: small(), buff: None },
                CampTemplate { position: Vec2::new(35.0, 80.0), units: small(), buff: None },
            ],
            respawn_s: 60.0,
            respawn_jitter_ticks: 50,
            leash: 10.0,
        }
    }
}

impl Default for DraftRules {
    fn default() -> Self {
        use DraftStepKind::{Ban, Pick};
        Self {
            tournament_sequence: vec![
                Ban, Ban, Ban, Ban, Pick, Pick, Pick, Pick, Pick, Pick, Ban, Ban, Pick, Pick, Pick, Pick,
            ],
            team_size: 5,
        }
    }
}

impl Default for VoteWeights {
    fn default() -> Self {
        Self { low_hp: 0.5, proximity: 0.2, threat: 0.2, disabled: 0.1 }
    }
}

impl Default for AgentRules {
    fn default() -> Self {
        Self { vote: VoteWeights::default(), proximity_scale: 30.0, threat_scale: 150.0 }
    }
}

impl Default for PhaseRules {
    fn default() -> Self {
        Self {
            laning_end_level: 9,
            laning_gold_lead: 1500,
            late_min_items: 4,
            late_min_heroes: 8,
            phase_draw_margin: 100.0,
            xp_weight: 0.5,
            structure_weight: 300.0,
        }
    }
}

impl Default for ClassifierRules {
    fn default() -> Self {
        Self {
            high_spread: 30.0,
            low_spread: 25.0,
            lone_share: 0.5,
            lone_distance: 30.0,
            structure_share: 0.35,
            lane_concentration: 0.75,
            pickoff_max_participants: 2,
            teamfight_min_participants: 4,
            min_kills: 3,
        }
    }
}

impl Default for PhaseProfiles {
    fn default() -> Self {
        Self {
            opening: PhaseProfile { level: 1, budget: 500 },
            mid: PhaseProfile { level: 9, budget: 6000 },
            late: PhaseProfile { level: 16, budget: 14000 },
        }
    }
}

fn item(id: u16, name: &str, cost: u64, tag: ItemTag, delta: Stats) -> ItemDef {
    ItemDef { id, name: name.into(), cost, delta, tag }
}

pub fn default_items() -> Vec<ItemDef> {
    use ItemTag::*;
    let s = Stats::default;
    vec![
        item(0, "iron_blade", 350, Offensive, Stats { attack_damage: 10.0, ..s() }),
        item(1, "long_sword", 900, Offensive, Stats { attack_damage: 22.0, ..s() }),
        item(2, "recurve_bow", 700, Offensive, Stats { attack_speed: 0.25, ..s() }),
        item(3, "keen_gloves", 800, Offensive, Stats { crit_chance: 0.15, ..s() }),
        item(4, "war_axe", 2400, Offensive, Stats { attack_damage: 45.0, ..s() }),
        item(5, "storm_bow", 2800, Offensive, Stats { attack_damage: 15.0, attack_speed: 0.5, ..s() }),
        item(6, "reaper", 3400, Offensive, Stats { attack_damage: 50.0, crit_chance: 0.25, ..s() }),
        item(7, "leather_vest", 300, Defensive, Stats { armor: 10.0, ..s() }),
        item(8, "cloak", 400, Defensive, Stats { magic_resist: 12.0, ..s() }),
        item(9, "ruby", 450, Defensive, Stats { max_hp: 150.0, ..s() }),
        item(10, "chain_mail", 1100, Defensive, Stats { armor: 30.0, ..s() }),
        item(11, "null_mantle", 1200, Defensive, Stats { magic_resist: 30.0, ..s() }),
        item(12, "giant_belt", 1000, Defensive, Stats { max_hp: 380.0, ..s() }),
        item(13, "warden_plate", 3000, Defensive, Stats { armor: 60.0, max_hp: 300.0, ..s() }),
        item(14, "boots", 300, Hybrid, Stats { move_speed: 0.8, ..s() }),
        item(15, "sage_orb", 900, Hybrid, Stats { max_mana: 250.0, mana_regen: 1.5, magic_resist: 8.0, ..s() }),
    ]
}

fn melee_base() -> Stats {
    Stats {
        max_hp: 620.0,
        max_mana: 280.0,
        attack_damage: 52.0,
        attack_speed: 0.75,
        attack_range: 1.5,
        armor: 12.0,
        magic_resist: 10.0,
        move_speed: 3.4,
        crit_chance: 0.0,
        hp_regen: 1.5,
        mana_regen: 1.0,
    }
}

fn ranged_base() -> Stats {
    Stats {
        max_hp: 540.0,
        max_mana: 320.0,
        attack_damage: 48.0,
        attack_speed: 0.8,
        attack_range: 6.0,
        armor: 8.0,
        magic_resist: 10.0,
        move_speed: 3.3,
        crit_chance: 0.0,
        hp_regen: 1.2,
        mana_regen: 1.2,
    }
}

fn ab(kind: AbilityKind, power: f64, range: f64, mana_cost: f64, cooldown_ticks: u64) -> Ability {
    Ability { kind, power, range, radius: 0.0, stun_ticks: 0, mana_cost, cooldown_ticks }
}

fn aoe(power: f64, range: f64, radius: f64, mana_cost: f64, cooldown_ticks: u64) -> Ability {
    Ability { radius, ..ab(AbilityKind::Aoe, power, range, mana_cost, cooldown_ticks) }
}

fn stun(power: f64, range: f64, stun_ticks: u64, mana_cost: f64, cooldown_ticks: u64) -> Ability {
    Ability { stun_ticks, ..ab(AbilityKind::Stun, power, range, mana_cost, cooldown_ticks) }
}

fn hero(name: &str, base: Stats, abilities: Vec<Ability>, roles: [f64; 5]) -> HeroTemplate {
    HeroTemplate { name: name.into(), base, abilities, roles }
}

pub fn default_heroes() -> Vec<HeroTemplate> {
    use AbilityKind::*;
    let m = melee_base;
    let r = ranged_base;
    vec![
        hero(
            "warden",
            Stats { max_hp: 770.0, armor: 18.0, ..m() },
            vec![stun(60.0, 4.0, 15, 80.0, 120), aoe(90.0, 2.0, 4.0, 70.0, 90)],
            [0.9, 0.3, 0.2, 0.6, 0.6],
        ),
        hero(
            "blademaster",
            Stats { attack_damage: 60.0, crit_chance: 0.1, ..m() },
            vec![ab(Dash, 0.0, 6.0, 50.0, 100), ab(Nuke, 120.0, 2.0, 60.0, 80)],
            [0.6, 0.5, 0.8, 0.1, 0.5],
        ),
        hero(
            "pyromancer",
            r(),
            vec![ab(Nuke, 180.0, 7.0, 100.0, 90), aoe(140.0, 7.0, 3.5, 120.0, 140)],
            [0.3, 0.9, 0.4, 0.4, 0.2],
        ),
        hero(
            "marksman",
            Stats { attack_damage: 54.0, attack_speed: 0.9, crit_chance: 0.1, ..r() },
            vec![ab(Nuke, 110.0, 8.0, 60.0, 100), ab(Dash, 0.0, 5.0, 40.0, 150)],
            [0.2, 0.5, 0.95, 0.1, 0.1],
        ),
        hero(
            "cleric",
            r(),
            vec![ab(Heal, 200.0, 7.0, 100.0, 120), stun(40.0, 6.0, 12, 90.0, 150)],
            [0.1, 0.3, 0.1, 0.95, 0.1],
        ),
        hero(
            "stalker",
            Stats { attack_damage: 58.0, move_speed: 3.7, ..m() },
            vec![ab(Nuke, 150.0, 2.0, 70.0, 70), ab(Dash, 0.0, 7.0, 50.0, 120)],
            [0.4, 0.3, 0.3, 0.1, 0.95],
        ),
        hero(
            "juggernaut",
            Stats { max_hp: 720.0, attack_damage: 56.0, ..m() },
            vec![aoe(110.0, 1.5, 3.0, 60.0, 80), stun(50.0, 2.0, 10, 70.0, 130)],
            [0.85, 0.3, 0.4, 0.2, 0.6],
        ),
        hero(
            "frostcaller",
            r(),
            vec![stun(70.0, 7.0, 18, 110.0, 160), ab(Nuke, 150.0, 7.0, 90.0, 100)],
            [0.2, 0.7, 0.2, 0.7, 0.2],
        ),
        hero(
            "ranger",
            Stats { attack_speed: 0.95, crit_chance: 0.05, ..r() },
            vec![aoe(100.0, 8.0, 3.0, 90.0, 120), ab(Nuke, 90.0, 8.0, 50.0, 60)],
            [0.3, 0.4, 0.85, 0.2, 0.1],
        ),
        hero(
            "sentinel",
            Stats { armor: 22.0, magic_resist: 20.0, ..m() },
            vec![ab(Heal, 150.0, 5.0, 90.0, 120), stun(30.0, 2.0, 12, 70.0, 140)],
            [0.5, 0.2, 0.1, 0.8, 0.3],
        ),
        hero(
            "reaver",
            Stats { attack_damage: 62.0, ..m() },
            vec![ab(Dash, 0.0, 8.0, 60.0, 90), ab(Nuke, 170.0, 2.0, 90.0, 110)],
            [0.4, 0.6, 0.5, 0.1, 0.8],
        ),
        hero(
            "oracle",
            r(),
            vec![ab(Heal, 180.0, 8.0, 100.0, 130), aoe(120.0, 7.0, 4.0, 110.0, 140)],
            [0.1, 0.5, 0.1, 0.85, 0.1],
        ),
        hero(
            "brute",
            Stats { max_hp: 800.0, attack_damage: 50.0, hp_regen: 2.5, ..m() },
            vec![stun(40.0, 2.0, 14, 70.0, 140), aoe(80.0, 1.5, 3.5, 60.0, 90)],
            [0.9, 0.2, 0.3, 0.5, 0.4],
        ),
        hero(
            "spellblade",
            Stats { attack_damage: 55.0, max_mana: 340.0, ..m() },
            vec![ab(Nuke, 140.0, 4.0, 80.0, 90), ab(Dash, 0.0, 6.0, 50.0, 110)],
            [0.5, 0.8, 0.4, 0.1, 0.5],
        ),
        hero(
            "hexer",
            Stats { max_mana: 380.0, ..r() },
            vec![stun(50.0, 7.0, 16, 100.0, 150), aoe(110.0, 7.0, 3.0, 100.0, 130)],
            [0.2, 0.7, 0.2, 0.75, 0.2],
        ),
        hero(
            "scout",
            Stats { attack_damage: 50.0, attack_speed: 0.9, move_speed: 3.5, ..r() },
            vec![ab(Nuke, 100.0, 8.0, 55.0, 80), ab(Dash, 0.0, 6.0, 40.0, 130)],
            [0.3, 0.4, 0.8, 0.1, 0.6],
        ),
    ]
}

impl Default for Ruleset {
    fn default() -> Self {
        Self {
            version: RULESET_VERSION.to_string(),
            map: MapRules::default(),
            structures: StructureRules::default(),
            combat: CombatRules::default(),
            creeps: CreepRules::default(),
            economy: EconomyRules::default(),
            jungle: JungleRules::default(),
            draft: DraftRules::default(),
            agents: AgentRules::default(),
            phases: PhaseRules::default(),
            classifier: ClassifierRules::default(),
            profiles: PhaseProfiles::default(),
            growth: Stats {
                max_hp: 85.0,
                max_mana: 30.0,
                attack_damage: 3.2,
                attack_speed: 0.02,
                armor: 1.2,
                magic_resist: 0.6,
                hp_regen: 0.1,
                mana_regen: 0.05,
                ..Stats::default()
            },
            items: default_items(),
            heroes: default_heroes(),
        }
    }
}

impl Ruleset {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        let r: Ruleset = toml::from_str(s).map_err(|e| ConfigError::Parse(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("ruleset serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        if self.version != RULESET_VERSION {
            return Err(ConfigError::Version {
                found: self.version.clone(),
                expected: RULESET_VERSION.to_string(),
            });
        }
        let m = &self.map;
        if !(m.width > 0.0 && m.height > 0.0) {
            return bad("map dimensions must be positive");
        }
        if !(m.lane_half_width > 0.0 && m.base_size > 0.0 && m.lane_inset > 0.0) {
            return bad("lane width, lane inset and base size must be positive");
        }
        if 2.0 * m.base_size >= m.width.min(m.height) {
            return bad("bases overlap");
        }
        if !(1..=3).contains(&self.structures.turrets_per_lane) {
            return bad("turrets_per_lane must be 1..=3");
        }
        if self.structures.turret_attack_interval_s <= 0.0 || self.structures.turret_range <= 0.0 {
            return bad("turret attack interval and range must be positive");
        }
        if self.creeps.wave_interval_s <= 0.0 {
            return bad("wave interval must be positive");
        }
        if self.economy.level_cap == 0 || self.economy.inventory_slots == 0 {
            return bad("level cap and inventory size must be positive");
        }
        for it in &self.items {
            if it.cost == 0 || !it.delta.is_valid() {
                return Err(ConfigError::Invalid(format!("item {} has zero cost or negative deltas", it.name)));
            }
        }
        for (i, it) in self.items.iter().enumerate() {
            if usize::from(it.id) != i {
                return Err(ConfigError::Invalid(format!("item ids must equal catalog order ({})", it.name)));
            }
        }
        let mut names = std::collections::BTreeSet::new();
        if let Some(h) = self.heroes.iter().find(|h| !names.insert(h.name.as_str())) {
            return Err(ConfigError::Invalid(format!("hero name {} appears twice", h.name)));
        }
        for h in &self.heroes {
            if !h.base.is_valid() || h.base.max_hp <= 0.0 {
                return Err(ConfigError::Invalid(format!("hero {} has invalid base stats", h.name)));
            }
            if let Some(a) = h.abilities.iter().find(|a| !a.is_valid()) {
                return Err(ConfigError::Invalid(format!("hero {} has invalid ability {:?}", h.name, a.kind)));
            }
        }
        Ok(())
    }

    pub fn hero_index(&self, name: &str) -> Option<usize> {
        self.heroes.iter().position(|h| h.name == name)
    }

    pub fn item(&self, id: u16) -> Option<&ItemDef> {
        self.items.get(usize::from(id))
    }

    pub fn ticks(&self, seconds: f64, tick_rate: u32) -> u64 {
        (seconds * f64::from(tick_rate)).round().max(0.0) as u64
    }
}
