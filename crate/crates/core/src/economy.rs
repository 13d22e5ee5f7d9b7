//! Creep waves, bounties, experience, jungle camps and the item shop.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combat::{Actor, Stats};
use crate::config::{BuffDef, CreepTemplate, Ruleset};
use crate::mapgraph::MapGeometry;
use crate::types::{Lane, Team, UnitId, Vec2};
use crate::world::{Event, GoldReason, HeroState, WorldState};

/// Gold account; `gold == start + earned - spent` at all times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wallet {
    pub gold: u64,
    pub earned: u64,
    pub spent: u64,
    pub start: u64,
}

impl Wallet {
    pub fn new(start: u64) -> Self {
        Self { gold: start, earned: 0, spent: 0, start }
    }

    pub fn earn(&mut self, amount: u64) {
        self.gold += amount;
        self.earned += amount;
    }

    pub fn spend(&mut self, amount: u64) -> Result<(), ShopError> {
        if amount > self.gold {
            return Err(ShopError::InsufficientGold { have: self.gold, need: amount });
        }
        self.gold -= amount;
        self.spent += amount;
        Ok(())
    }

    pub fn balanced(&self) -> bool {
        self.start + self.earned >= self.spent && self.gold == self.start + self.earned - self.spent
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CreepKind {
    Melee,
    Ranged,
    Neutral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CreepTarget {
    Unit(UnitId),
    Structure(crate::mapgraph::StructureId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CreepState {
    pub id: UnitId,
    /// `None` for neutral jungle creeps.
    pub owner: Option<Team>,
    pub lane: Option<Lane>,
    pub kind: CreepKind,
    pub hp: f64,
    pub max_hp: f64,
    pub attack_damage: f64,
    pub attack_interval_ticks: u64,
    pub attack_range: f64,
    pub armor: f64,
    pub bounty: u32,
    pub xp: u32,
    /// Arc length walked along the lane, measured from the owner's base.
    pub progress: f64,
    pub pos: Vec2,
    pub home: Vec2,
    pub camp: Option<usize>,
    pub next_attack_tick: u64,
    pub target: Option<CreepTarget>,
    pub stunned_until: u64,
    pub(crate) killing_blow: Option<Actor>,
}

impl CreepState {
    fn from_template(
        id: UnitId,
        owner: Option<Team>,
        lane: Option<Lane>,
        kind: CreepKind,
        t: &CreepTemplate,
        pos: Vec2,
        tick_rate: u32,
        bonus: f64,
    ) -> Self {
        let interval = ((t.attack_interval_s * f64::from(tick_rate)).round() as u64).max(1);
        Self {
            id,
            owner,
            lane,
            kind,
            hp: t.hp * (1.0 + bonus),
            max_hp: t.hp * (1.0 + bonus),
            attack_damage: t.attack_damage * (1.0 + bonus),
            attack_interval_ticks: interval,
            attack_range: t.attack_range,
            armor: t.armor,
            bounty: t.bounty.max(1),
            xp: t.xp,
            progress: 0.0,
            pos,
            home: pos,
            camp: None,
            next_attack_tick: 0,
            target: None,
            stunned_until: 0,
            killing_blow: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CampStatus {
    Alive { units: Vec<UnitId> },
    Respawning { at: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CampState {
    pub id: usize,
    /// Whose half of the jungle the camp sits in.
    pub side: Team,
    pub position: Vec2,
    pub status: CampStatus,
    pub buff: Option<BuffDef>,
    template: usize,
}

impl CampState {
    pub fn is_alive(&self) -> bool {
        matches!(self.status, CampStatus::Alive { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActiveBuff {
    pub name: String,
    pub delta: Stats,
    pub expires_at: u64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShopError {
    #[error("unknown item {0}")]
    UnknownItem(u16),
    #[error("not in own base")]
    NotInBase,
    #[error("insufficient gold: have {have}, need {need}")]
    InsufficientGold { have: u64, need: u64 },
    #[error("inventory full")]
    InventoryFull,
    #[error("inventory slot {0} is empty")]
    EmptySlot(usize),
    #[error("hero is dead")]
    Dead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Purchase {
    pub item: u16,
    pub cost: u64,
    pub slot: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sale {
    pub item: u16,
    pub refund: u64,
    pub slot: usize,
}

pub fn buy_item(hero: &mut HeroState, item: u16, rules: &Ruleset, map: &MapGeometry) -> Result<Purchase, ShopError> {
    let def = rules.item(item).ok_or(ShopError::UnknownItem(item))?;
    if !hero.is_alive() {
        return Err(ShopError::Dead);
    }
    if !map.in_base(hero.pos, hero.team) {
        return Err(ShopError::NotInBase);
    }
    if def.cost > hero.wallet.gold {
        return Err(ShopError::InsufficientGold { have: hero.wallet.gold, need: def.cost });
    }
    let slot = hero.items.iter().position(Option::is_none).ok_or(ShopError::InventoryFull)?;
    hero.wallet.spend(def.cost)?;
    hero.items[slot] = Some(item);
    hero.recompute_stats(rules);
    Ok(Purchase { item, cost: def.cost, slot })
}

/// Refund for selling an item of `cost`; the epsilon keeps `0.7 * 350` at 245.
pub fn sell_value(rules: &Ruleset, cost: u64) -> u64 {
    (cost as f64 * rules.economy.sell_refund + 1e-9).floor() as u64
}

/// Sells at `floor(sell_refund * cost)`, so a buy/sell pair loses `ceil((1 - sell_refund) * cost)`.
pub fn sell_item(hero: &mut HeroState, slot: usize, rules: &Ruleset, map: &MapGeometry) -> Result<Sale, ShopError> {
    if !hero.is_alive() {
        return Err(ShopError::Dead);
    }
    if !map.in_base(hero.pos, hero.team) {
        return Err(ShopError::NotInBase);
    }
    let item = hero.items.get(slot).copied().flatten().ok_or(ShopError::EmptySlot(slot))?;
    let def = rules.item(item).ok_or(ShopError::UnknownItem(item))?;
    let refund = sell_value(rules, def.cost);
    hero.items[slot] = None;
    hero.wallet.earn(refund);
    hero.recompute_stats(rules);
    Ok(Sale { item, refund, slot })
}

/// Cumulative xp needed to reach `level`.
pub fn xp_threshold(rules: &Ruleset, level: u32) -> u64 {
    let l = u64::from(level.max(1));
    rules.economy.xp_step * (l * (l + 1) / 2 - 1)
}

pub fn level_for_xp(rules: &Ruleset, xp: u64) -> u32 {
    let mut level = 1;
    while level < rules.economy.level_cap && xp >= xp_threshold(rules, level + 1) {
        level += 1;
    }
    level
}

/// Adds xp (anything beyond the cap threshold is discarded) and returns the levels gained, in order.
pub fn grant_xp(hero: &mut HeroState, amount: u64, rules: &Ruleset) -> Vec<u32> {
    let cap_xp = xp_threshold(rules, rules.economy.level_cap);
    hero.xp = (hero.xp + amount).min(cap_xp);
    let target = level_for_xp(rules, hero.xp);
    let mut gained = Vec::new();
    while hero.level < target {
        hero.level += 1;
        gained.push(hero.level);
    }
    if !gained.is_empty() {
        hero.recompute_stats(rules);
    }
    gained
}

/// Spawns one wave for `team` at the base end of `lane`.
pub fn spawn_wave(world: &mut WorldState, lane: Lane, team: Team) -> usize {
    let rules = world.rules.clone();
    let c = &rules.creeps;
    let path = world.map.lane(lane).clone();
    let enemy_lane_down = world.structures.lane_destroyed(team.opponent(), lane);
    let tick_rate = world.config.tick_rate;
    let minutes = world.tick_in_progress() as f64 / f64::from(tick_rate) / 60.0;
    let enemy_down = world.structures.team_nodes(team.opponent()).iter().filter(|n| n.is_destroyed()).count();
    let bonus = c.growth_per_minute * minutes
        + c.pressure_bonus * enemy_down as f64
        + if enemy_lane_down { c.empowered_bonus } else { 0.0 };
    let mut count = 0;
    // melee in front, ranged behind
    let kinds = std::iter::repeat((CreepKind::Melee, &c.melee))
        .take(c.melee_per_wave)
        .chain(std::iter::repeat((CreepKind::Ranged, &c.ranged)).take(c.ranged_per_wave));
    for (i, (kind, tpl)) in kinds.enumerate() {
        let s = world.map.base_size * 0.5 - i as f64 * 1.0;
        let s = s.max(0.0);
        let pos = path.point_from(team, s);
        let id = world.alloc_unit_id();
        let mut creep = CreepState::from_template(id, Some(team), Some(lane), kind, tpl, pos, tick_rate, bonus);
        creep.progress = s;
        world.creeps.push(creep);
        count += 1;
    }
    count
}

pub(crate) fn spawn_camp_units(world: &mut WorldState, camp_idx: usize) -> Vec<UnitId> {
    let rules = world.rules.clone();
    let camp = &world.jungle[camp_idx];
    let tpl = &rules.jungle.camps[camp.template];
    let center = camp.position;
    let tick_rate = world.config.tick_rate;
    let mut ids = Vec::new();
    for (i, u) in tpl.units.iter().enumerate() {
        let pos = center + Vec2::new(i as f64 * 1.0, 0.0);
        let id = world.alloc_unit_id();
        let mut creep = CreepState::from_template(id, None, None, CreepKind::Neutral, u, pos, tick_rate, 0.0);
        creep.camp = Some(camp_idx);
        world.creeps.push(creep);
        ids.push(id);
    }
    ids
}

pub(crate) fn build_camps(world: &mut WorldState) {
    let rules = world.rules.clone();
    let mut camps = Vec::new();
    for side in Team::BOTH {
        for (ti, tpl) in rules.jungle.camps.iter().enumerate() {
            camps.push(CampState {
                id: camps.len(),
                side,
                position: world.map.for_team(side, tpl.position),
                status: CampStatus::Respawning { at: 0 },
                buff: tpl.buff.clone(),
                template: ti,
            });
        }
    }
    world.jungle = camps;
    for i in 0..world.jungle.len() {
        let units = spawn_camp_units(world, i);
        world.jungle[i].status = CampStatus::Alive { units };
    }
}

/// Splits `amount` xp evenly (floored) across the given heroes.
fn share_xp(world: &mut WorldState, heroes: &[usize], amount: u64, events: &mut Vec<Event>) {
    if heroes.is_empty() || amount == 0 {
        return;
    }
    let each = amount / heroes.len() as u64;
    for &h in heroes {
        world.give_xp(h, each, events);
    }
}

fn nearby_heroes(world: &WorldState, team: Team, pos: Vec2) -> Vec<usize> {
    let r = world.rules.map.xp_radius;
    world
        .heroes
        .iter()
        .enumerate()
        .filter(|(_, h)| h.team == team && h.is_alive() && h.pos.dist(pos) <= r)
        .map(|(i, _)| i)
        .collect()
}

pub enum Victim {
    Hero(usize),
    Creep(CreepState),
}

/// Pays bounties and xp for one death. `blow` is the source of the damage
/// that took the victim to zero; only an enemy hero there is credited.
pub fn credit_kill(world: &mut WorldState, victim: Victim, blow: Option<Actor>, events: &mut Vec<Event>) {
    let tick = world.tick_in_progress();
    match victim {
        Victim::Hero(vi) => {
            let rules = world.rules.clone();
            let c = &rules.combat;
            let (vteam, vlevel, vpos, vid) = {
                let v = &world.heroes[vi];
                (v.team, v.level, v.pos, v.id)
            };
            let killer = blow
                .and_then(Actor::hero)
                .filter(|k| world.hero(*k).is_some_and(|h| h.team != vteam));
            let window = rules.ticks(c.assist_window_s, world.config.tick_rate);
            let mut assists: Vec<UnitId> = world.heroes[vi]
                .recent_damagers
                .iter()
                .filter(|(h, t)| tick.saturating_sub(*t) <= window && Some(*h) != killer)
                .map(|(h, _)| *h)
                .filter(|h| world.hero(*h).is_some_and(|x| x.team != vteam))
                .collect();
            assists.sort();
            assists.dedup();
            let bounty = u64::from(c.hero_bounty_base + c.hero_bounty_per_level * vlevel);
            if let Some(k) = killer {
                let ki = k.0 as usize;
                world.give_gold(ki, bounty, GoldReason::HeroKill, events);
                world.heroes[ki].counters.kills += 1;
                if !assists.is_empty() {
                    let share = (bounty as f64 * c.assist_share / assists.len() as f64).floor() as u64;
                    for a in &assists {
                        world.give_gold(a.0 as usize, share, GoldReason::Assist, events);
                        world.heroes[a.0 as usize].counters.assists += 1;
                    }
                }
            }
            events.push(Event::Kill {
                tick,
                victim: Actor::Unit(vid),
                killer,
                blow,
                assists: if killer.is_some() { assists } else { Vec::new() },
                deny: false,
            });
            let xp = u64::from(c.hero_xp_base + c.hero_xp_per_level * vlevel);
            let near = nearby_heroes(world, vteam.opponent(), vpos);
            share_xp(world, &near, xp, events);
        }
        Victim::Creep(creep) => {
            let blow_hero = blow.and_then(Actor::hero).filter(|h| world.hero(*h).is_some());
            match creep.owner {
                Some(owner) => {
                    let mut killer = None;
                    let mut deny = false;
                    if let Some(h) = blow_hero {
                        let hi = h.0 as usize;
                        if world.heroes[hi].team != owner {
                            world.give_gold(hi, u64::from(creep.bounty), GoldReason::LastHit, events);
                            world.heroes[hi].counters.last_hits += 1;
                            killer = Some(h);
                        } else {
                            deny = true;
                            world.heroes[hi].counters.denies += 1;
                            killer = Some(h);
                        }
                    }
                    events.push(Event::Kill { tick, victim: Actor::Unit(creep.id), killer, blow, assists: Vec::new(), deny });
                    let near = nearby_heroes(world, owner.opponent(), creep.pos);
                    share_xp(world, &near, u64::from(creep.xp), events);
                }
                None => {
                    let killer = blow_hero;
                    events.push(Event::Kill { tick, victim: Actor::Unit(creep.id), killer, blow, assists: Vec::new(), deny: false });
                    if let Some(h) = killer {
                        let hi = h.0 as usize;
                        world.give_gold(hi, u64::from(creep.bounty), GoldReason::Neutral, events);
                        world.heroes[hi].counters.neutrals += 1;
                        let team = world.heroes[hi].team;
                        let near = nearby_heroes(world, team, creep.pos);
                        share_xp(world, &near, u64::from(creep.xp), events);
                    }
                    if let Some(ci) = creep.camp {
                        world.neutral_died(ci, creep.id, killer, events);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{MatchConfig, WorldState};

    fn world() -> WorldState {
        WorldState::new(MatchConfig::default(), Ruleset::default().into()).unwrap()
    }

    #[test]
    fn zero_gold_purchase_fails() {
        let mut w = world();
        let rules = w.rules.clone();
        let map = w.map.clone();
        let h = &mut w.heroes[0];
        h.wallet = Wallet::new(0);
        let before = h.clone();
        assert!(matches!(buy_item(h, 0, &rules, &map), Err(ShopError::InsufficientGold { have: 0, .. })));
        assert_eq!(*h, before);
    }

    #[test]
    fn purchase_adds_deltas() {
        let mut w = world();
        let rules = w.rules.clone();
        let map = w.map.clone();
        let h = &mut w.heroes[0];
        let base = h.stats;
        buy_item(h, 0, &rules, &map).unwrap();
        assert_eq!(h.stats.attack_damage, base.attack_damage + 10.0);
        assert_eq!(h.wallet.gold, 600 - 350);
        assert!(h.wallet.balanced());
    }

    #[test]
    fn buy_outside_base_and_full_inventory() {
        let mut w = world();
        let rules = w.rules.clone();
        let map = w.map.clone();
        let h = &mut w.heroes[0];
        h.wallet.earn(10_000);
        for _ in 0..6 {
            buy_item(h, 7, &rules, &map).unwrap();
        }
        assert_eq!(buy_item(h, 7, &rules, &map), Err(ShopError::InventoryFull));
        h.pos = Vec2::new(75.0, 75.0);
        assert_eq!(buy_item(h, 7, &rules, &map), Err(ShopError::NotInBase));
        assert_eq!(sell_item(h, 0, &rules, &map), Err(ShopError::NotInBase));
    }

    #[test]
    fn buy_then_sell_loses_ceil_30_percent() {
        let mut w = world();
        let rules = w.rules.clone();
        let map = w.map.clone();
        let h = &mut w.heroes[0];
        h.wallet.earn(10_000);
        for item in &rules.items {
            let before = h.wallet.gold;
            let p = buy_item(h, item.id, &rules, &map).unwrap();
            sell_item(h, p.slot, &rules, &map).unwrap();
            let expected_loss = (item.cost * 3).div_ceil(10);
            assert_eq!(before - h.wallet.gold, expected_loss, "{}", item.name);
            assert!(h.wallet.balanced());
        }
    }

    #[test]
    fn selling_hp_item_at_full_hp_clamps() {
        let mut w = world();
        let rules = w.rules.clone();
        let map = w.map.clone();
        let h = &mut w.heroes[0];
        h.wallet.earn(10_000);
        let p = buy_item(h, 12, &rules, &map).unwrap();
        h.hp = h.stats.max_hp;
        sell_item(h, p.slot, &rules, &map).unwrap();
        assert_eq!(h.hp, h.stats.max_hp);
    }

    #[test]
    fn sell_empty_slot_errors_without_change() {
        let mut w = world();
        let rules = w.rules.clone();
        let map = w.map.clone();
        let h = &mut w.heroes[0];
        let before = h.clone();
        assert_eq!(sell_item(h, 3, &rules, &map), Err(ShopError::EmptySlot(3)));
        assert_eq!(*h, before);
    }

    #[test]
    fn xp_levels() {
        let mut w = world();
        let rules = w.rules.clone();
        let h = &mut w.heroes[0];
        assert_eq!(h.level, 1);
        let gained = grant_xp(h, xp_threshold(&rules, 2), &rules);
        assert_eq!(gained, vec![2]);
        assert_eq!(h.level, 2);
        grant_xp(h, 10_000_000, &rules);
        assert_eq!(h.level, 18);
        grant_xp(h, 10_000_000, &rules);
        assert_eq!(h.level, 18);
        assert_eq!(h.xp, xp_threshold(&rules, 18));
    }

    #[test]
    fn threshold_one_below_does_not_level() {
        let rules = Ruleset::default();
        assert_eq!(level_for_xp(&rules, 0), 1);
        assert_eq!(level_for_xp(&rules, xp_threshold(&rules, 2) - 1), 1);
        assert_eq!(level_for_xp(&rules, xp_threshold(&rules, 9)), 9);
    }
}
