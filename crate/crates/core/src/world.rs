//! World state and the fixed-order tick loop.
//!
//! Every tick resolves in this order:
//!
//! 1. movement, shopping and recall channels
//! 2. ability casts
//! 3. basic attacks
//! 4. turret attacks
//! 5. creep AI
//! 6. deaths and bounties
//! 7. creep waves, hero respawns, camp respawns
//! 8. passive income, regeneration, buff expiry, recall completion
//! 9. structure destruction events and team bounties
//! 10. terminal check
//!
//! A unit acts and can be targeted during a tick iff it was alive when the
//! tick began; damage dealt after its hp reached zero is recorded as overkill.
//! Deaths are only processed in step 6, so opposing units can trade killing
//! blows in the same tick.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{Action, CastTarget};
use crate::combat::{
    death_timer, mitigate, resolve_basic_attack, turret_acquire_target, Ability, AbilityKind, Actor, AttackProfile,
    AttackResult, DamageKind, DefenseProfile, Stats, STRUCTURE_RADIUS,
};
use crate::config::{ConfigError, Ruleset};
use crate::economy::{
    self, buy_item, credit_kill, grant_xp, sell_item, xp_threshold, ActiveBuff, CampState, CampStatus,
    CreepState, CreepTarget, Victim, Wallet,
};
use crate::mapgraph::{build_map_at, MapGeometry, StructureGraph, StructureHit, StructureId, StructureKind, StructureSlot};
use crate::rng::{Purpose, RngStreams};
use crate::types::{Lane, Outcome, Team, UnitId, Vec2};

/// Per-match settings. Identical configs and agents give identical replays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MatchConfig {
    pub seed: u64,
    pub tick_rate: u32,
    pub max_ticks: u64,
    /// Heroes may attack their own lane creeps.
    pub deny_mode: bool,
    pub crits: bool,
    pub spawn_waves: bool,
    pub wave_lanes: Vec<Lane>,
    pub jungle: bool,
    pub turrets_active: bool,
    pub respawn: bool,
    pub passive_income: bool,
    /// Hero template names, blue then red.
    pub rosters: [Vec<String>; 2],
}

pub fn default_roster() -> Vec<String> {
    ["warden", "pyromancer", "marksman", "cleric", "stalker"].iter().map(|s| s.to_string()).collect()
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tick_rate: 10,
            max_ticks: 24_000,
            deny_mode: true,
            crits: true,
            spawn_waves: true,
            wave_lanes: Lane::ALL.to_vec(),
            jungle: true,
            turrets_active: true,
            respawn: true,
            passive_income: true,
            rosters: [default_roster(), default_roster()],
        }
    }
}

#[derive(Debug, Error)]
pub enum WorldError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown hero template {0:?}")]
    UnknownHero(String),
    #[error("tick_rate and max_ticks must be positive")]
    BadTiming,
    #[error("each team needs 1..=5 heroes")]
    BadRoster,
    #[error("unknown hero {0}")]
    NoSuchHero(UnitId),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HeroCounters {
    pub kills: u32,
    pub deaths: u32,
    pub assists: u32,
    pub last_hits: u32,
    pub denies: u32,
    pub neutrals: u32,
    pub hero_damage_dealt: f64,
    pub damage_taken: f64,
    pub structure_damage: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeroState {
    pub id: UnitId,
    pub team: Team,
    pub template: usize,
    pub name: String,
    pub level: u32,
    pub xp: u64,
    pub wallet: Wallet,
    pub items: Vec<Option<u16>>,
    pub base: Stats,
    /// Effective stats: base, growth, items and buffs.
    pub stats: Stats,
    pub hp: f64,
    pub mana: f64,
    pub pos: Vec2,
    /// `Some(tick)` while dead; `u64::MAX` means out of play for good.
    pub respawn_at: Option<u64>,
    pub next_attack_tick: u64,
    pub abilities: Vec<Ability>,
    pub ability_ready: Vec<u64>,
    /// Stunned through this tick (inclusive).
    pub stunned_until: u64,
    pub buffs: Vec<ActiveBuff>,
    pub recall_started: Option<u64>,
    /// Enemy heroes that damaged this hero, with the last tick they did.
    pub recent_damagers: Vec<(UnitId, u64)>,
    pub counters: HeroCounters,
    pub(crate) killing_blow: Option<Actor>,
}

impl HeroState {
    pub fn new(id: UnitId, team: Team, template: usize, rules: &Ruleset, pos: Vec2) -> Self {
        let t = &rules.heroes[template];
        let mut h = Self {
            id,
            team,
            template,
            name: t.name.clone(),
            level: 1,
            xp: 0,
            wallet: Wallet::new(rules.economy.starting_gold),
            items: vec![None; rules.economy.inventory_slots],
            base: t.base,
            stats: t.base,
            hp: 0.0,
            mana: 0.0,
            pos,
            respawn_at: None,
            next_attack_tick: 0,
            abilities: t.abilities.clone(),
            ability_ready: vec![0; t.abilities.len()],
            stunned_until: 0,
            buffs: Vec::new(),
            recall_started: None,
            recent_damagers: Vec::new(),
            counters: HeroCounters::default(),
            killing_blow: None,
        };
        h.recompute_stats(rules);
        h.hp = h.stats.max_hp;
        h.mana = h.stats.max_mana;
        h
    }

    pub fn is_alive(&self) -> bool {
        self.respawn_at.is_none()
    }

    pub fn hp_fraction(&self) -> f64 {
        if self.stats.max_hp > 0.0 {
            self.hp / self.stats.max_hp
        } else {
            0.0
        }
    }

    pub fn is_stunned(&self, tick: u64) -> bool {
        tick <= self.stunned_until
    }

    pub fn item_count(&self) -> usize {
        self.items.iter().filter(|i| i.is_some()).count()
    }

    /// Rebuilds effective stats from scratch. Gains in max hp/mana are added
    /// to the current pools; losses clamp them.
    pub fn recompute_stats(&mut self, rules: &Ruleset) {
        let old = self.stats;
        let mut s = self.base.plus(&rules.growth.scaled(f64::from(self.level.saturating_sub(1))));
        for item in self.items.iter().flatten() {
            if let Some(def) = rules.item(*item) {
                s = s.plus(&def.delta);
            }
        }
        for b in &self.buffs {
            s = s.plus(&b.delta);
        }
        self.stats = s.normalized();
        if self.is_alive() {
            self.hp += (self.stats.max_hp - old.max_hp).max(0.0);
            self.mana += (self.stats.max_mana - old.max_mana).max(0.0);
        }
        self.hp = self.hp.min(self.stats.max_hp);
        self.mana = self.mana.min(self.stats.max_mana);
    }

    /// Sets level and the matching xp, keeping hp/mana full.
    pub fn set_level(&mut self, level: u32, rules: &Ruleset) {
        self.level = level.clamp(1, rules.economy.level_cap);
        self.xp = xp_threshold(rules, self.level);
        self.recompute_stats(rules);
        self.hp = self.stats.max_hp;
        self.mana = self.stats.max_mana;
    }

    pub fn attack_profile(&self) -> AttackProfile {
        AttackProfile {
            source: Actor::Unit(self.id),
            pos: self.pos,
            damage: self.stats.attack_damage,
            range: self.stats.attack_range,
            crit_chance: self.stats.crit_chance,
            ready_at: self.next_attack_tick,
        }
    }

    pub fn defense_profile(&self) -> DefenseProfile {
        DefenseProfile { target: Actor::Unit(self.id), pos: self.pos, armor: self.stats.armor, radius: 0.0 }
    }

    /// End-of-tick upkeep for a living hero: regeneration (boosted inside
    /// the own base) and buff expiry. Shared by the engine and the combo analyzer.
    pub fn upkeep(&mut self, tick: u64, rules: &Ruleset, map: &MapGeometry, tick_rate: u32, events: &mut Vec<Event>) {
        if !self.is_alive() {
            return;
        }
        let rate = f64::from(tick_rate);
        let mut hp_regen = self.stats.hp_regen;
        let mut mana_regen = self.stats.mana_regen;
        if map.in_base(self.pos, self.team) {
            hp_regen += rules.combat.fountain_hp_per_s;
            mana_regen += rules.combat.fountain_mana_per_s;
        }
        self.hp = (self.hp + hp_regen / rate).min(self.stats.max_hp);
        self.mana = (self.mana + mana_regen / rate).min(self.stats.max_mana);
        if self.buffs.iter().any(|b| b.expires_at <= tick) {
            let (gone, kept): (Vec<_>, Vec<_>) = self.buffs.drain(..).partition(|b| b.expires_at <= tick);
            self.buffs = kept;
            for b in gone {
                events.push(Event::BuffExpired { tick, hero: self.id, name: b.name });
            }
            self.recompute_stats(rules);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GoldReason {
    LastHit,
    HeroKill,
    Assist,
    Neutral,
    Structure,
}

/// Observable occurrences; the replay body is a sequence of these.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    Damage {
        tick: u64,
        source: Actor,
        target: Actor,
        raw: f64,
        /// After mitigation.
        amount: f64,
        /// Hp actually removed; `amount - applied` is overkill.
        applied: f64,
        kind: DamageKind,
        crit: bool,
    },
    Heal { tick: u64, source: UnitId, target: UnitId, amount: f64 },
    Stun { tick: u64, source: UnitId, target: UnitId, ticks: u64 },
    Kill {
        tick: u64,
        victim: Actor,
        /// The single credited hero, if any.
        killer: Option<UnitId>,
        /// Source of the killing damage.
        blow: Option<Actor>,
        assists: Vec<UnitId>,
        deny: bool,
    },
    Gold { tick: u64, hero: UnitId, amount: u64, reason: GoldReason },
    /// Passive income paid to every hero.
    Passive { tick: u64, amount: u64 },
    Xp { tick: u64, hero: UnitId, amount: u64 },
    LevelUp { tick: u64, hero: UnitId, level: u32 },
    Purchase { tick: u64, hero: UnitId, item: u16, cost: u64, slot: usize },
    Sale { tick: u64, hero: UnitId, item: u16, refund: u64, slot: usize },
    StructureDestroyed { tick: u64, structure: StructureId, by: Option<Actor>, unlocked: Vec<StructureId> },
    WaveSpawned { tick: u64, team: Team, lane: Lane, count: usize },
    WavesMeet { tick: u64, lane: Lane },
    Respawn { tick: u64, hero: UnitId },
    Recalled { tick: u64, hero: UnitId },
    CampCleared { tick: u64, camp: usize, by: Option<UnitId> },
    CampRespawned { tick: u64, camp: usize },
    BuffGained { tick: u64, hero: UnitId, name: String, expires_at: u64 },
    BuffExpired { tick: u64, hero: UnitId, name: String },
    InvalidAction { tick: u64, hero: UnitId, reason: String },
    /// Hero positions, `None` while dead; emitted once per simulated second.
    Positions { tick: u64, heroes: Vec<Option<Vec2>> },
    Terminal { tick: u64, outcome: Outcome },
}

impl Event {
    pub fn tick(&self) -> u64 {
        match self {
            Event::Damage { tick, .. }
            | Event::Heal { tick, .. }
            | Event::Stun { tick, .. }
            | Event::Kill { tick, .. }
            | Event::Gold { tick, .. }
            | Event::Passive { tick, .. }
            | Event::Xp { tick, .. }
            | Event::LevelUp { tick, .. }
            | Event::Purchase { tick, .. }
            | Event::Sale { tick, .. }
            | Event::StructureDestroyed { tick, .. }
            | Event::WaveSpawned { tick, .. }
            | Event::WavesMeet { tick, .. }
            | Event::Respawn { tick, .. }
            | Event::Recalled { tick, .. }
            | Event::CampCleared { tick, .. }
            | Event::CampRespawned { tick, .. }
            | Event::BuffGained { tick, .. }
            | Event::BuffExpired { tick, .. }
            | Event::InvalidAction { tick, .. }
            | Event::Positions { tick, .. }
            | Event::Terminal { tick, .. } => *tick,
        }
    }
}

/// Last known position of a hidden enemy hero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LastSeen {
    pub pos: Vec2,
    pub tick: u64,
}

#[derive(Debug, Clone)]
pub struct WorldState {
    /// Ticks completed so far.
    pub tick: u64,
    pub config: MatchConfig,
    pub rules: Arc<Ruleset>,
    pub map: Arc<MapGeometry>,
    pub heroes: Vec<HeroState>,
    /// Living creeps, sorted by id.
    pub creeps: Vec<CreepState>,
    pub structures: StructureGraph,
    pub jungle: Vec<CampState>,
    pub rng: RngStreams,
    /// Hero-on-hero damage pairs `(aggressor, victim)` from the previous tick.
    pub aggression: Vec<(UnitId, UnitId)>,
    /// Enemy units each team can see (sorted ids), refreshed at the end of every tick.
    pub visible: [Vec<UnitId>; 2],
    /// Per team, indexed by enemy hero index.
    pub last_seen: [Vec<Option<LastSeen>>; 2],
    pub lanes_met: [bool; 3],
    pub outcome: Option<Outcome>,
    next_unit_id: u32,
    next_wave_tick: u64,
    in_progress: u64,
    pending_aggression: Vec<(UnitId, UnitId)>,
    pending_destroyed: Vec<(StructureId, Option<Actor>, Vec<StructureId>)>,
}

/// What a hero does in the fire phases of a tick.
#[derive(Debug, Clone, Copy)]
enum Fire {
    Attack(UnitId),
    AttackStructure(StructureId),
    Cast { slot: usize, target: CastTarget },
}

#[derive(Debug, Clone, Copy)]
enum CreepPlan {
    Attack(CreepTarget),
    MoveTo(Vec2),
    Stay,
}

impl WorldState {
    pub fn new(config: MatchConfig, rules: Arc<Ruleset>) -> Result<Self, WorldError> {
        if config.tick_rate == 0 || config.max_ticks == 0 {
            return Err(WorldError::BadTiming);
        }
        if config.rosters.iter().any(|r| r.is_empty() || r.len() > 5) {
            return Err(WorldError::BadRoster);
        }
        let (map, structures) = build_map_at(&rules, config.tick_rate)?;
        let mut heroes = Vec::new();
        for team in Team::BOTH {
            for name in &config.rosters[team.index()] {
                let template = rules.hero_index(name).ok_or_else(|| WorldError::UnknownHero(name.clone()))?;
                let id = UnitId(heroes.len() as u32);
                heroes.push(HeroState::new(id, team, template, &rules, map.fountain(team)));
            }
        }
        let first_wave = rules.ticks(rules.creeps.first_wave_s, config.tick_rate).max(1);
        let n_heroes = heroes.len();
        let mut w = Self {
            tick: 0,
            rng: RngStreams::new(config.seed),
            config,
            rules,
            map: Arc::new(map),
            heroes,
            creeps: Vec::new(),
            structures,
            jungle: Vec::new(),
            aggression: Vec::new(),
            visible: [Vec::new(), Vec::new()],
            last_seen: [vec![None; n_heroes], vec![None; n_heroes]],
            lanes_met: [false; 3],
            outcome: None,
            next_unit_id: UnitId::FIRST_CREEP,
            next_wave_tick: first_wave,
            in_progress: 0,
            pending_aggression: Vec::new(),
            pending_destroyed: Vec::new(),
        };
        if w.config.jungle {
            economy::build_camps(&mut w);
        }
        w.refresh_vision();
        Ok(w)
    }

    /// Seconds of game time elapsed.
    pub fn phase_clock(&self) -> f64 {
        self.tick as f64 / f64::from(self.config.tick_rate)
    }

    pub fn hero(&self, id: UnitId) -> Option<&HeroState> {
        id.hero_index().and_then(|i| self.heroes.get(i))
    }

    pub fn creep(&self, id: UnitId) -> Option<&CreepState> {
        self.creeps.binary_search_by_key(&id, |c| c.id).ok().map(|i| &self.creeps[i])
    }

    fn creep_index(&self, id: UnitId) -> Option<usize> {
        self.creeps.binary_search_by_key(&id, |c| c.id).ok()
    }

    /// Position and team of a unit that is currently in play; neutral creeps have no team.
    pub fn unit_pos_team(&self, id: UnitId) -> Option<(Vec2, Option<Team>)> {
        if id.is_hero() {
            self.hero(id).filter(|h| h.is_alive()).map(|h| (h.pos, Some(h.team)))
        } else {
            self.creep(id).map(|c| (c.pos, c.owner))
        }
    }

    pub fn team_heroes(&self, team: Team) -> impl Iterator<Item = &HeroState> {
        self.heroes.iter().filter(move |h| h.team == team)
    }

    pub fn is_terminal(&self) -> Option<Outcome> {
        self.outcome
    }

    /// Tick currently being resolved (equals `tick` between advances).
    pub fn tick_in_progress(&self) -> u64 {
        if self.in_progress > self.tick {
            self.in_progress
        } else {
            self.tick
        }
    }

    pub(crate) fn alloc_unit_id(&mut self) -> UnitId {
        let id = UnitId(self.next_unit_id);
        self.next_unit_id += 1;
        id
    }

    /// Takes a hero out of play for the rest of the match.
    pub fn bench_hero(&mut self, idx: usize) {
        let h = &mut self.heroes[idx];
        h.respawn_at = Some(u64::MAX);
        h.hp = 0.0;
        h.recall_started = None;
    }

    pub fn clear_creeps(&mut self) {
        self.creeps.clear();
        for camp in &mut self.jungle {
            camp.status = CampStatus::Respawning { at: u64::MAX };
        }
    }

    pub(crate) fn give_gold(&mut self, idx: usize, amount: u64, reason: GoldReason, events: &mut Vec<Event>) {
        if amount == 0 {
            return;
        }
        let tick = self.tick_in_progress();
        let h = &mut self.heroes[idx];
        h.wallet.earn(amount);
        events.push(Event::Gold { tick, hero: h.id, amount, reason });
    }

    pub(crate) fn give_xp(&mut self, idx: usize, amount: u64, events: &mut Vec<Event>) {
        if amount == 0 {
            return;
        }
        let tick = self.tick_in_progress();
        let rules = self.rules.clone();
        let h = &mut self.heroes[idx];
        events.push(Event::Xp { tick, hero: h.id, amount });
        for level in grant_xp(h, amount, &rules) {
            events.push(Event::LevelUp { tick, hero: h.id, level });
        }
    }

    pub(crate) fn neutral_died(&mut self, camp: usize, unit: UnitId, killer: Option<UnitId>, events: &mut Vec<Event>) {
        let tick = self.tick_in_progress();
        let CampStatus::Alive { units } = &mut self.jungle[camp].status else { return };
        units.retain(|u| *u != unit);
        if !units.is_empty() {
            return;
        }
        let side = self.jungle[camp].side;
        let jitter_max = self.rules.jungle.respawn_jitter_ticks;
        let jitter = if jitter_max > 0 {
            use rand::Rng;
            self.rng.get(side, Purpose::Jungle).gen_range(0..=jitter_max)
        } else {
            0
        };
        let at = tick + self.rules.ticks(self.rules.jungle.respawn_s, self.config.tick_rate).max(1) + jitter;
        self.jungle[camp].status = CampStatus::Respawning { at };
        events.push(Event::CampCleared { tick, camp, by: killer });
        if let (Some(buff), Some(k)) = (self.jungle[camp].buff.clone(), killer) {
            let expires_at = tick + self.rules.ticks(buff.duration_s, self.config.tick_rate).max(1);
            let rules = self.rules.clone();
            let h = &mut self.heroes[k.0 as usize];
            h.buffs.retain(|b| b.name != buff.name);
            h.buffs.push(ActiveBuff { name: buff.name.clone(), delta: buff.delta, expires_at });
            h.recompute_stats(&rules);
            events.push(Event::BuffGained { tick, hero: k, name: buff.name, expires_at });
        }
    }

    /// Pure form of [`WorldState::step`].
    pub fn advance_tick(&self, actions: &[(UnitId, Action)]) -> (WorldState, Vec<Event>) {
        let mut next = self.clone();
        let events = next.step(actions);
        (next, events)
    }

    /// Advances one tick in place and returns the tick's events.
    /// A terminal world does not advance.
    /// Hero indices in the order their casts and attacks resolve on tick `t`.
    /// The team that goes first alternates with tick parity, so neither side
    /// wins every contested last hit.
    pub fn resolution_order(&self, t: u64) -> Vec<usize> {
        let first = if t % 2 == 1 { Team::Blue } else { Team::Red };
        let mut order: Vec<usize> = (0..self.heroes.len()).collect();
        order.sort_by_key(|&i| self.heroes[i].team != first);
        order
    }

    pub fn step(&mut self, actions: &[(UnitId, Action)]) -> Vec<Event> {
        let mut ev = Vec::new();
        if self.outcome.is_some() {
            return ev;
        }
        let t = self.tick + 1;
        self.in_progress = t;
        let n = self.heroes.len();
        let alive0: Vec<bool> = self.heroes.iter().map(|h| h.is_alive()).collect();
        let pos0: Vec<Vec2> = self.heroes.iter().map(|h| h.pos).collect();

        let plan = self.collect_actions(t, actions, &alive0, &mut ev);

        // (1) movement, shop, recall
        let mut fire: Vec<Option<Fire>> = vec![None; n];
        let mut new_pos = pos0.clone();
        for i in 0..n {
            if !alive0[i] {
                continue;
            }
            let action = plan[i];
            if !matches!(action, Action::Recall) {
                self.heroes[i].recall_started = None;
            }
            match action {
                Action::Idle => {}
                Action::Move(p) => new_pos[i] = self.move_step(i, pos0[i], p),
                Action::AttackUnit(u) => {
                    let tp = self.unit_pos_team(u).map(|x| x.0).unwrap_or(pos0[i]);
                    if pos0[i].dist(tp) <= self.heroes[i].stats.attack_range {
                        fire[i] = Some(Fire::Attack(u));
                    } else {
                        new_pos[i] = self.move_step(i, pos0[i], tp);
                    }
                }
                Action::AttackStructure(s) => {
                    let sp = self.structures.node(s).map(|n| n.position).unwrap_or(pos0[i]);
                    if pos0[i].dist(sp) <= self.heroes[i].stats.attack_range + STRUCTURE_RADIUS {
                        fire[i] = Some(Fire::AttackStructure(s));
                    } else {
                        new_pos[i] = self.move_step(i, pos0[i], sp);
                    }
                }
                Action::Cast { slot, target } => {
                    let ab = self.heroes[i].abilities[slot];
                    let tp = match target {
                        CastTarget::Unit(u) => self.unit_pos_team(u).map(|x| x.0).unwrap_or(pos0[i]),
                        CastTarget::Point(p) => p,
                    };
                    if ab.kind == AbilityKind::Dash || pos0[i].dist(tp) <= ab.range {
                        fire[i] = Some(Fire::Cast { slot, target });
                    } else {
                        new_pos[i] = self.move_step(i, pos0[i], tp);
                    }
                }
                Action::Buy(item) => {
                    let rules = self.rules.clone();
                    let map = self.map.clone();
                    let h = &mut self.heroes[i];
                    match buy_item(h, item, &rules, &map) {
                        Ok(p) => ev.push(Event::Purchase { tick: t, hero: h.id, item, cost: p.cost, slot: p.slot }),
                        Err(e) => ev.push(Event::InvalidAction { tick: t, hero: h.id, reason: e.to_string() }),
                    }
                }
                Action::Sell(slot) => {
                    let rules = self.rules.clone();
                    let map = self.map.clone();
                    let h = &mut self.heroes[i];
                    match sell_item(h, slot, &rules, &map) {
                        Ok(s) => ev.push(Event::Sale { tick: t, hero: h.id, item: s.item, refund: s.refund, slot }),
                        Err(e) => ev.push(Event::InvalidAction { tick: t, hero: h.id, reason: e.to_string() }),
                    }
                }
                Action::Recall => {
                    let h = &mut self.heroes[i];
                    if h.recall_started.is_none() {
                        h.recall_started = Some(t);
                    }
                }
            }
        }
        for i in 0..n {
            self.heroes[i].pos = new_pos[i];
        }

        // (2) casts
        let order = self.resolution_order(t);
        let mut dashes: Vec<(usize, Vec2, f64)> = Vec::new();
        for &i in &order {
            let Some(Fire::Cast { slot, target }) = fire[i] else { continue };
            let ab = self.heroes[i].abilities[slot];
            let src = self.heroes[i].id;
            {
                let h = &mut self.heroes[i];
                h.mana -= ab.mana_cost;
                h.ability_ready[slot] = t + ab.cooldown_ticks;
            }
            match ab.kind {
                AbilityKind::Nuke | AbilityKind::Stun => {
                    let CastTarget::Unit(u) = target else { continue };
                    self.magic_hit(t, src, u, ab.power, &mut ev);
                    if ab.kind == AbilityKind::Stun {
                        self.stun(t, src, u, ab.stun_ticks, &mut ev);
                    }
                }
                AbilityKind::Aoe => {
                    let center = match target {
                        CastTarget::Unit(u) => self.unit_pos_team(u).map(|x| x.0).unwrap_or(pos0[i]),
                        CastTarget::Point(p) => p,
                    };
                    let team = self.heroes[i].team;
                    let mut hit: Vec<UnitId> = self
                        .heroes
                        .iter()
                        .enumerate()
                        .filter(|(j, h)| alive0[*j] && h.team != team && h.pos.dist(center) <= ab.radius)
                        .map(|(_, h)| h.id)
                        .collect();
                    hit.extend(
                        self.creeps
                            .iter()
                            .filter(|c| c.owner != Some(team) && c.pos.dist(center) <= ab.radius)
                            .map(|c| c.id),
                    );
                    for u in hit {
                        self.magic_hit(t, src, u, ab.power, &mut ev);
                    }
                }
                AbilityKind::Heal => {
                    let CastTarget::Unit(u) = target else { continue };
                    if let Some(j) = u.hero_index() {
                        let h = &mut self.heroes[j];
                        let before = h.hp;
                        h.hp = (h.hp + ab.power).min(h.stats.max_hp);
                        ev.push(Event::Heal { tick: t, source: src, target: u, amount: h.hp - before });
                    }
                }
                AbilityKind::Dash => {
                    let p = match target {
                        CastTarget::Unit(u) => self.unit_pos_team(u).map(|x| x.0).unwrap_or(pos0[i]),
                        CastTarget::Point(p) => p,
                    };
                    dashes.push((i, p, ab.range));
                }
            }
        }
        for (i, p, range) in dashes {
            let h = &mut self.heroes[i];
            h.pos = self.map.clamp(h.pos.step_toward(p, range));
        }

        // (3) basic attacks
        let crit_mult = self.rules.combat.crit_multiplier;
        for &i in &order {
            match fire[i] {
                Some(Fire::Attack(u)) => {
                    if t < self.heroes[i].next_attack_tick {
                        continue;
                    }
                    let mut attacker = self.heroes[i].attack_profile();
                    attacker.pos = pos0[i];
                    let Some(defense) = self.defense_of(u) else { continue };
                    let defense = DefenseProfile { pos: attacker.pos, ..defense };
                    let team = self.heroes[i].team;
                    let res = if self.config.crits {
                        resolve_basic_attack(&attacker, &defense, t, Some(self.rng.get(team, Purpose::Crit)), crit_mult)
                    } else {
                        resolve_basic_attack::<rand_chacha::ChaCha8Rng>(&attacker, &defense, t, None, crit_mult)
                    };
                    if let AttackResult::Hit(d) = res {
                        let h = &mut self.heroes[i];
                        h.next_attack_tick = t + h.stats.attack_cooldown_ticks(self.config.tick_rate);
                        self.damage_unit(t, d.source, u, d.raw, d.mitigated, DamageKind::Physical, d.crit, &mut ev);
                    }
                }
                Some(Fire::AttackStructure(s)) => {
                    if t < self.heroes[i].next_attack_tick {
                        continue;
                    }
                    let team = self.heroes[i].team;
                    let crit = self.config.crits && self.rng.roll(team, Purpose::Crit, self.heroes[i].stats.crit_chance);
                    let h = &mut self.heroes[i];
                    h.next_attack_tick = t + h.stats.attack_cooldown_ticks(self.config.tick_rate);
                    let raw = if crit { h.stats.attack_damage * crit_mult } else { h.stats.attack_damage };
                    let src = Actor::Unit(h.id);
                    self.damage_structure(t, src, s, raw, DamageKind::Physical, crit, &mut ev);
                }
                _ => {}
            }
        }

        // (4) turrets
        if self.config.turrets_active {
            for k in 0..self.structures.nodes.len() {
                let node = &self.structures.nodes[k];
                let Some(attack) = node.attack else { continue };
                if node.is_destroyed() {
                    continue;
                }
                let target = turret_acquire_target(node, self);
                let sid = node.id;
                let ready = t >= node.next_attack_tick;
                self.structures.nodes[k].target = target;
                if let (Some(u), true) = (target, ready) {
                    self.structures.nodes[k].next_attack_tick = t + attack.interval_ticks;
                    self.damage_unit(t, Actor::Structure(sid), u, attack.damage, attack.damage, DamageKind::Structure, false, &mut ev);
                }
            }
        }

        // (5) creep AI
        self.creep_ai(t, &mut ev);

        // (6) deaths and bounties
        for i in 0..n {
            let h = &self.heroes[i];
            if !(h.is_alive() && h.hp <= 0.0) {
                continue;
            }
            let blow = h.killing_blow;
            let level = h.level;
            let delay = if self.config.respawn {
                let secs = death_timer(&self.rules, level, t as f64 / f64::from(self.config.tick_rate));
                t + self.rules.ticks(secs, self.config.tick_rate).max(1)
            } else {
                u64::MAX
            };
            credit_kill(self, Victim::Hero(i), blow, &mut ev);
            let rules = self.rules.clone();
            let h = &mut self.heroes[i];
            h.hp = 0.0;
            h.respawn_at = Some(delay);
            h.recall_started = None;
            h.stunned_until = 0;
            h.killing_blow = None;
            h.recent_damagers.clear();
            h.counters.deaths += 1;
            if !h.buffs.is_empty() {
                for b in h.buffs.drain(..) {
                    ev.push(Event::BuffExpired { tick: t, hero: h.id, name: b.name });
                }
                h.recompute_stats(&rules);
            }
        }
        if self.creeps.iter().any(|c| c.hp <= 0.0) {
            let (dead, alive): (Vec<_>, Vec<_>) = std::mem::take(&mut self.creeps).into_iter().partition(|c| c.hp <= 0.0);
            self.creeps = alive;
            for c in dead {
                let blow = c.killing_blow;
                credit_kill(self, Victim::Creep(c), blow, &mut ev);
            }
        }

        // (7) waves, respawns, camps
        if self.config.spawn_waves && t == self.next_wave_tick {
            let lanes = self.config.wave_lanes.clone();
            for team in Team::BOTH {
                for &lane in &lanes {
                    let count = economy::spawn_wave(self, lane, team);
                    ev.push(Event::WaveSpawned { tick: t, team, lane, count });
                }
            }
            self.next_wave_tick = t + self.rules.ticks(self.rules.creeps.wave_interval_s, self.config.tick_rate).max(1);
        }
        for i in 0..n {
            if self.heroes[i].respawn_at == Some(t) {
                let fountain = self.map.fountain(self.heroes[i].team);
                let h = &mut self.heroes[i];
                h.respawn_at = None;
                h.hp = h.stats.max_hp;
                h.mana = h.stats.max_mana;
                h.pos = fountain;
                ev.push(Event::Respawn { tick: t, hero: h.id });
            }
        }
        for c in 0..self.jungle.len() {
            if self.jungle[c].status == (CampStatus::Respawning { at: t }) {
                let units = economy::spawn_camp_units(self, c);
                self.jungle[c].status = CampStatus::Alive { units };
                ev.push(Event::CampRespawned { tick: t, camp: c });
            }
        }

        // (8) passive income, regen, buffs, recall
        let rate = u64::from(self.config.tick_rate);
        let passive_start = self.rules.ticks(self.rules.economy.passive_start_s, self.config.tick_rate);
        let passive = self.rules.economy.passive_gold_per_s;
        if self.config.passive_income && passive > 0 && t > passive_start && t % rate == 0 {
            for h in &mut self.heroes {
                if h.respawn_at != Some(u64::MAX) {
                    h.wallet.earn(passive);
                }
            }
            ev.push(Event::Passive { tick: t, amount: passive });
        }
        let recall_ticks = self.rules.ticks(self.rules.combat.recall_s, self.config.tick_rate).max(1);
        let rules = self.rules.clone();
        let map = self.map.clone();
        for h in &mut self.heroes {
            h.upkeep(t, &rules, &map, self.config.tick_rate, &mut ev);
            if let Some(s) = h.recall_started {
                if h.is_alive() && t >= s + recall_ticks {
                    h.recall_started = None;
                    h.pos = map.fountain(h.team);
                    ev.push(Event::Recalled { tick: t, hero: h.id });
                }
            }
        }

        // (9) structure graph updates
        let destroyed = std::mem::take(&mut self.pending_destroyed);
        for (sid, by, unlocked) in destroyed {
            ev.push(Event::StructureDestroyed { tick: t, structure: sid, by, unlocked });
            let bounty = match sid.slot {
                StructureSlot::Lane(_, tier) => self.rules.structures.lane_turret_bounty[usize::from(tier - 1).min(2)],
                StructureSlot::Base(_) => self.rules.structures.base_turret_bounty,
                StructureSlot::Main => self.rules.structures.main_bounty,
            };
            let winners: Vec<usize> = (0..n)
                .filter(|&i| self.heroes[i].team != sid.team && self.heroes[i].respawn_at != Some(u64::MAX))
                .collect();
            for i in winners {
                self.give_gold(i, u64::from(bounty), GoldReason::Structure, &mut ev);
            }
        }

        // (10) terminal check and bookkeeping
        let blue_main = self.structures.is_destroyed(StructureId::main(Team::Blue));
        let red_main = self.structures.is_destroyed(StructureId::main(Team::Red));
        let outcome = match (blue_main, red_main) {
            (true, true) => Some(Outcome::Draw),
            (true, false) => Some(Outcome::Winner(Team::Red)),
            (false, true) => Some(Outcome::Winner(Team::Blue)),
            (false, false) if t >= self.config.max_ticks => {
                let b = self.structures.alive_count(Team::Blue);
                let r = self.structures.alive_count(Team::Red);
                Some(match b.cmp(&r) {
                    std::cmp::Ordering::Greater => Outcome::Winner(Team::Blue),
                    std::cmp::Ordering::Less => Outcome::Winner(Team::Red),
                    std::cmp::Ordering::Equal => Outcome::Draw,
                })
            }
            _ => None,
        };
        if t % rate == 0 || outcome.is_some() {
            let heroes = self.heroes.iter().map(|h| h.is_alive().then_some(h.pos)).collect();
            ev.push(Event::Positions { tick: t, heroes });
        }
        if let Some(o) = outcome {
            ev.push(Event::Terminal { tick: t, outcome: o });
        }
        self.outcome = outcome;
        self.aggression = std::mem::take(&mut self.pending_aggression);
        self.tick = t;
        self.in_progress = 0;
        self.refresh_vision();
        ev
    }

    /// Resolves the submitted actions into exactly one action per hero.
    fn collect_actions(&self, t: u64, actions: &[(UnitId, Action)], alive0: &[bool], ev: &mut Vec<Event>) -> Vec<Action> {
        let n = self.heroes.len();
        let mut plan = vec![Action::Idle; n];
        let mut count = vec![0usize; n];
        let mut sorted: Vec<(UnitId, Action)> = actions.to_vec();
        sorted.sort_by_key(|(id, _)| *id);
        let mut unknown = Vec::new();
        for (id, a) in &sorted {
            match id.hero_index().filter(|&i| i < n) {
                Some(i) => {
                    count[i] += 1;
                    plan[i] = *a;
                }
                None => unknown.push(*id),
            }
        }
        for id in unknown {
            ev.push(Event::InvalidAction { tick: t, hero: id, reason: "no such hero".into() });
        }
        for i in 0..n {
            let h = &self.heroes[i];
            if !alive0[i] {
                plan[i] = Action::Idle;
                continue;
            }
            if count[i] > 1 {
                ev.push(Event::InvalidAction { tick: t, hero: h.id, reason: "more than one action".into() });
                plan[i] = Action::Idle;
                continue;
            }
            if h.is_stunned(t) {
                plan[i] = Action::Idle;
                continue;
            }
            if let Err(reason) = self.validate(i, &plan[i], t) {
                ev.push(Event::InvalidAction { tick: t, hero: h.id, reason });
                plan[i] = Action::Idle;
            }
        }
        plan
    }

    fn validate(&self, i: usize, action: &Action, t: u64) -> Result<(), String> {
        let h = &self.heroes[i];
        let point_ok = |p: &Vec2| p.x.is_finite() && p.y.is_finite() && self.map.in_bounds(*p);
        match action {
            Action::Idle | Action::Recall | Action::Buy(_) | Action::Sell(_) => Ok(()),
            Action::Move(p) => point_ok(p).then_some(()).ok_or_else(|| "move target out of bounds".into()),
            Action::AttackUnit(u) => self.check_attackable_unit(h, *u),
            Action::AttackStructure(s) => {
                let node = self.structures.node(*s).ok_or("no such structure")?;
                if node.id.team == h.team {
                    return Err("own structure".into());
                }
                if node.is_destroyed() {
                    return Err("structure destroyed".into());
                }
                if !self.structures.is_attackable(*s).unwrap_or(false) {
                    return Err("structure invulnerable".into());
                }
                Ok(())
            }
            Action::Cast { slot, target } => {
                let ab = h.abilities.get(*slot).ok_or("no such ability slot")?;
                if t < h.ability_ready[*slot] {
                    return Err(format!("ability {slot} on cooldown"));
                }
                if h.mana < ab.mana_cost {
                    return Err(format!("not enough mana for ability {slot}"));
                }
                match (ab.kind, target) {
                    (AbilityKind::Nuke | AbilityKind::Stun, CastTarget::Unit(u)) => self.check_enemy_unit(h, *u),
                    (AbilityKind::Aoe, CastTarget::Unit(u)) => self.check_enemy_unit(h, *u),
                    (AbilityKind::Heal, CastTarget::Unit(u)) => match self.hero(*u) {
                        Some(x) if x.team == h.team && x.is_alive() => Ok(()),
                        _ => Err("heal needs a living ally".into()),
                    },
                    (AbilityKind::Dash, CastTarget::Unit(u)) => {
                        self.unit_pos_team(*u).map(|_| ()).ok_or_else(|| "no such unit".into())
                    }
                    (AbilityKind::Aoe | AbilityKind::Dash, CastTarget::Point(p)) => {
                        point_ok(p).then_some(()).ok_or_else(|| "cast point out of bounds".into())
                    }
                    _ => Err("wrong target kind for ability".into()),
                }
            }
        }
    }

    fn check_enemy_unit(&self, h: &HeroState, u: UnitId) -> Result<(), String> {
        match self.unit_pos_team(u) {
            None => Err(format!("no such unit {u}")),
            Some((_, Some(team))) if team == h.team => Err(format!("{u} is an ally")),
            Some(_) => Ok(()),
        }
    }

    fn check_attackable_unit(&self, h: &HeroState, u: UnitId) -> Result<(), String> {
        if u == h.id {
            return Err("cannot attack self".into());
        }
        match self.unit_pos_team(u) {
            None => Err(format!("no such unit {u}")),
            Some((_, Some(team))) if team == h.team => {
                if !u.is_hero() && self.config.deny_mode {
                    Ok(())
                } else {
                    Err(format!("{u} is an ally"))
                }
            }
            Some(_) => Ok(()),
        }
    }

    fn move_step(&self, i: usize, from: Vec2, to: Vec2) -> Vec2 {
        let step = self.heroes[i].stats.move_speed / f64::from(self.config.tick_rate);
        self.map.clamp(from.step_toward(to, step))
    }

    fn defense_of(&self, u: UnitId) -> Option<DefenseProfile> {
        if u.is_hero() {
            self.hero(u).map(|h| h.defense_profile())
        } else {
            self.creep(u).map(|c| DefenseProfile { target: Actor::Unit(c.id), pos: c.pos, armor: c.armor, radius: 0.0 })
        }
    }

    fn magic_resist_of(&self, u: UnitId) -> f64 {
        if u.is_hero() {
            self.hero(u).map_or(0.0, |h| h.stats.magic_resist)
        } else {
            0.0
        }
    }

    fn magic_hit(&mut self, t: u64, src: UnitId, u: UnitId, power: f64, ev: &mut Vec<Event>) {
        if power <= 0.0 {
            return;
        }
        let amount = mitigate(power, self.magic_resist_of(u));
        self.damage_unit(t, Actor::Unit(src), u, power, amount, DamageKind::Magic, false, ev);
    }

    fn stun(&mut self, t: u64, src: UnitId, u: UnitId, ticks: u64, ev: &mut Vec<Event>) {
        let until = t + ticks;
        if let Some(j) = u.hero_index() {
            let h = &mut self.heroes[j];
            h.stunned_until = h.stunned_until.max(until);
            h.recall_started = None;
        } else if let Some(k) = self.creep_index(u) {
            let c = &mut self.creeps[k];
            c.stunned_until = c.stunned_until.max(until);
        } else {
            return;
        }
        ev.push(Event::Stun { tick: t, source: src, target: u, ticks });
    }

    /// Applies mitigated damage to a unit that was alive at tick start.
    #[allow(clippy::too_many_arguments)]
    fn damage_unit(
        &mut self,
        t: u64,
        source: Actor,
        target: UnitId,
        raw: f64,
        amount: f64,
        kind: DamageKind,
        crit: bool,
        ev: &mut Vec<Event>,
    ) {
        let applied;
        if let Some(j) = target.hero_index() {
            let Some(h) = self.heroes.get(j) else { return };
            if !h.is_alive() {
                return;
            }
            let victim_team = h.team;
            let src_hero = source.hero().filter(|s| self.hero(*s).is_some_and(|x| x.team != victim_team));
            let h = &mut self.heroes[j];
            let before = h.hp;
            applied = amount.min(h.hp.max(0.0));
            h.hp -= applied;
            if before > 0.0 && h.hp <= 0.0 {
                h.hp = 0.0;
                h.killing_blow = Some(source);
            }
            h.recall_started = None;
            h.counters.damage_taken += applied;
            if let Some(s) = src_hero {
                match h.recent_damagers.iter_mut().find(|(id, _)| *id == s) {
                    Some(entry) => entry.1 = t,
                    None => h.recent_damagers.push((s, t)),
                }
                self.heroes[s.0 as usize].counters.hero_damage_dealt += applied;
                self.pending_aggression.push((s, target));
            }
        } else {
            let Some(k) = self.creep_index(target) else { return };
            let c = &mut self.creeps[k];
            let before = c.hp;
            applied = amount.min(c.hp.max(0.0));
            c.hp -= applied;
            if before > 0.0 && c.hp <= 0.0 {
                c.hp = 0.0;
                c.killing_blow = Some(source);
            }
            if c.owner.is_none() && c.target.is_none() {
                if let Some(h) = source.hero() {
                    c.target = Some(CreepTarget::Unit(h));
                }
            }
        }
        ev.push(Event::Damage { tick: t, source, target: Actor::Unit(target), raw, amount, applied, kind, crit });
    }

    fn damage_structure(&mut self, t: u64, source: Actor, s: StructureId, raw: f64, kind: DamageKind, crit: bool, ev: &mut Vec<Event>) {
        let Some(node) = self.structures.node(s) else { return };
        let amount = mitigate(raw, node.armor);
        match self.structures.apply_structure_damage(s, amount) {
            Ok(StructureHit::Damaged { dealt, destroyed, unlocked }) => {
                if let Some(h) = source.hero() {
                    if let Some(x) = h.hero_index() {
                        self.heroes[x].counters.structure_damage += dealt;
                    }
                }
                ev.push(Event::Damage { tick: t, source, target: Actor::Structure(s), raw, amount, applied: dealt, kind, crit });
                if destroyed {
                    self.pending_destroyed.push((s, Some(source), unlocked));
                }
            }
            Ok(StructureHit::AlreadyDestroyed) => {
                // destroyed earlier this tick: overkill
                if self.pending_destroyed.iter().any(|(id, _, _)| *id == s) {
                    ev.push(Event::Damage { tick: t, source, target: Actor::Structure(s), raw, amount, applied: 0.0, kind, crit });
                }
            }
            _ => {}
        }
    }

    fn structure_alive_at_start(&self, s: StructureId) -> bool {
        !self.structures.is_destroyed(s) || self.pending_destroyed.iter().any(|(id, _, _)| *id == s)
    }

    fn creep_ai(&mut self, t: u64, ev: &mut Vec<Event>) {
        let c_rules = &self.rules.creeps;
        let step = c_rules.move_speed / f64::from(self.config.tick_rate);
        let aggro = c_rules.aggro_range;
        let leash = c_rules.leash;
        let camp_leash = self.rules.jungle.leash;
        let mut plans: Vec<CreepPlan> = Vec::with_capacity(self.creeps.len());
        let mut retarget: Vec<Option<CreepTarget>> = Vec::with_capacity(self.creeps.len());
        for c in &self.creeps {
            if t <= c.stunned_until {
                plans.push(CreepPlan::Stay);
                retarget.push(c.target);
                continue;
            }
            let (plan, target) = match c.owner {
                Some(team) => self.lane_creep_plan(c, team, t, aggro, leash),
                None => self.neutral_plan(c, t, camp_leash),
            };
            plans.push(plan);
            retarget.push(target);
        }
        let crit_mult = self.rules.combat.crit_multiplier;
        let creep_crit = self.rules.creeps.crit_chance;
        for k in 0..plans.len() {
            self.creeps[k].target = retarget[k];
            match plans[k] {
                CreepPlan::Stay => {
                    let c = &mut self.creeps[k];
                    if c.owner.is_none() && c.target.is_none() && c.pos == c.home {
                        c.hp = c.max_hp;
                    }
                }
                CreepPlan::MoveTo(p) => {
                    let c = &mut self.creeps[k];
                    c.pos = self.map.clamp(c.pos.step_toward(p, step));
                    if c.owner.is_none() && c.target.is_none() && c.pos == c.home {
                        c.hp = c.max_hp;
                    }
                }
                CreepPlan::Attack(target) => {
                    let (id, owner, dmg, interval) = {
                        let c = &self.creeps[k];
                        (c.id, c.owner, c.attack_damage, c.attack_interval_ticks)
                    };
                    let crit = match owner {
                        Some(team) if self.config.crits => self.rng.roll(team, Purpose::CreepCrit, creep_crit),
                        _ => false,
                    };
                    let raw = if crit { dmg * crit_mult } else { dmg };
                    self.creeps[k].next_attack_tick = t + interval;
                    match target {
                        CreepTarget::Unit(u) => {
                            let armor = self.defense_of(u).map_or(0.0, |d| d.armor);
                            self.damage_unit(t, Actor::Unit(id), u, raw, mitigate(raw, armor), DamageKind::Physical, crit, ev);
                        }
                        CreepTarget::Structure(s) => {
                            self.damage_structure(t, Actor::Unit(id), s, raw, DamageKind::Physical, crit, ev);
                        }
                    }
                }
            }
        }
        for lane in Lane::ALL {
            if self.lanes_met[lane.index()] {
                continue;
            }
            let met = self.creeps.iter().filter(|c| c.lane == Some(lane) && c.owner == Some(Team::Blue)).any(|b| {
                self.creeps
                    .iter()
                    .filter(|c| c.lane == Some(lane) && c.owner == Some(Team::Red))
                    .any(|r| r.pos.dist(b.pos) <= aggro)
            });
            if met {
                self.lanes_met[lane.index()] = true;
                ev.push(Event::WavesMeet { tick: t, lane });
            }
        }
    }

    fn lane_creep_plan(&self, c: &CreepState, team: Team, t: u64, aggro: f64, leash: f64) -> (CreepPlan, Option<CreepTarget>) {
        let enemy = team.opponent();
        let path = self.map.lane(c.lane.unwrap_or(Lane::Mid));
        let (_, arc_blue) = path.project(c.pos);
        let s_own = match team {
            Team::Blue => arc_blue,
            Team::Red => path.length() - arc_blue,
        };
        let at_end = s_own >= path.length() - 0.5;
        let still_valid = |tg: CreepTarget| match tg {
            CreepTarget::Unit(u) => match self.unit_pos_team(u) {
                Some((p, Some(tm))) => tm == enemy && p.dist(c.pos) <= leash,
                _ => false,
            },
            CreepTarget::Structure(s) => {
                self.structure_alive_at_start(s) && self.structures.is_attackable(s).unwrap_or(false)
            }
        };
        // creeps take priority over a hero being chased
        let creep_in_aggro = || self.creeps.iter().any(|o| o.owner == Some(enemy) && o.pos.dist(c.pos) <= aggro);
        let target = c
            .target
            .filter(|tg| still_valid(*tg))
            .filter(|tg| !matches!(tg, CreepTarget::Unit(u) if u.is_hero()) || !creep_in_aggro())
            .or_else(|| {
            let nearest = |it: &mut dyn Iterator<Item = (UnitId, Vec2)>| {
                let mut best: Option<(f64, UnitId)> = None;
                for (id, p) in it {
                    let d = p.dist(c.pos);
                    if d <= aggro && best.map_or(true, |(bd, bid)| (d, id) < (bd, bid)) {
                        best = Some((d, id));
                    }
                }
                best.map(|(_, id)| id)
            };
            let mut creeps = self.creeps.iter().filter(|o| o.owner == Some(enemy)).map(|o| (o.id, o.pos));
            if let Some(id) = nearest(&mut creeps) {
                return Some(CreepTarget::Unit(id));
            }
            let mut heroes = self.heroes.iter().filter(|h| h.team == enemy && h.is_alive()).map(|h| (h.id, h.pos));
            if let Some(id) = nearest(&mut heroes) {
                return Some(CreepTarget::Unit(id));
            }
            let reach = if at_end { f64::INFINITY } else { aggro + STRUCTURE_RADIUS };
            let mut best: Option<(f64, StructureId)> = None;
            for node in self.structures.team_nodes(enemy) {
                if node.is_destroyed() || !self.structures.is_attackable(node.id).unwrap_or(false) {
                    continue;
                }
                let d = node.position.dist(c.pos);
                if d <= reach && best.map_or(true, |(bd, _)| d < bd) {
                    best = Some((d, node.id));
                }
            }
            best.map(|(_, s)| CreepTarget::Structure(s))
        });
        let Some(tg) = target else {
            if at_end {
                return (CreepPlan::Stay, None);
            }
            let step = self.rules.creeps.move_speed / f64::from(self.config.tick_rate);
            return (CreepPlan::MoveTo(path.point_from(team, s_own + step)), None);
        };
        let (tp, radius) = match tg {
            CreepTarget::Unit(u) => (self.unit_pos_team(u).map(|x| x.0).unwrap_or(c.pos), 0.0),
            CreepTarget::Structure(s) => (self.structures.node(s).map(|n| n.position).unwrap_or(c.pos), STRUCTURE_RADIUS),
        };
        if c.pos.dist(tp) <= c.attack_range + radius {
            if t >= c.next_attack_tick {
                (CreepPlan::Attack(tg), Some(tg))
            } else {
                (CreepPlan::Stay, Some(tg))
            }
        } else {
            (CreepPlan::MoveTo(tp), Some(tg))
        }
    }

    fn neutral_plan(&self, c: &CreepState, t: u64, camp_leash: f64) -> (CreepPlan, Option<CreepTarget>) {
        if let Some(CreepTarget::Unit(u)) = c.target {
            if let Some(h) = self.hero(u).filter(|h| h.is_alive()) {
                if h.pos.dist(c.home) <= camp_leash {
                    if c.pos.dist(h.pos) <= c.attack_range {
                        let plan = if t >= c.next_attack_tick { CreepPlan::Attack(CreepTarget::Unit(u)) } else { CreepPlan::Stay };
                        return (plan, c.target);
                    }
                    return (CreepPlan::MoveTo(h.pos), c.target);
                }
            }
        }
        if c.pos == c.home {
            (CreepPlan::Stay, None)
        } else {
            (CreepPlan::MoveTo(c.home), None)
        }
    }

    /// Recomputes which enemy units each team can see and updates last-seen memory.
    pub fn refresh_vision(&mut self) {
        let r2 = self.map.vision_radius * self.map.vision_radius;
        for team in Team::BOTH {
            let mut sources: Vec<Vec2> = Vec::with_capacity(64);
            sources.extend(self.heroes.iter().filter(|h| h.team == team && h.is_alive()).map(|h| h.pos));
            sources.extend(self.creeps.iter().filter(|c| c.owner == Some(team)).map(|c| c.pos));
            sources.extend(self.structures.team_nodes(team).iter().filter(|s| !s.is_destroyed()).map(|s| s.position));
            let sees = |p: Vec2| sources.iter().any(|s| s.dist_sq(p) <= r2);
            let mut vis = Vec::new();
            for h in self.heroes.iter().filter(|h| h.team != team && h.is_alive()) {
                if sees(h.pos) {
                    vis.push(h.id);
                    self.last_seen[team.index()][h.id.0 as usize] = Some(LastSeen { pos: h.pos, tick: self.tick });
                }
            }
            for c in self.creeps.iter().filter(|c| c.owner != Some(team)) {
                if sees(c.pos) {
                    vis.push(c.id);
                }
            }
            self.visible[team.index()] = vis;
        }
    }

    pub fn sees(&self, team: Team, unit: UnitId) -> bool {
        self.visible[team.index()].binary_search(&unit).is_ok()
    }

    pub fn structure_kind(&self, s: StructureId) -> StructureKind {
        s.kind()
    }
}

/// Runs a world to completion with a per-tick action source; returns every event.
pub fn run_to_end(world: &mut WorldState, mut actions: impl FnMut(&WorldState) -> Vec<(UnitId, Action)>) -> Vec<Event> {
    let mut all = Vec::new();
    while world.outcome.is_none() {
        let a = actions(world);
        all.extend(world.step(&a));
    }
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> MatchConfig {
        MatchConfig { spawn_waves: false, jungle: false, ..MatchConfig::default() }
    }

    fn world(cfg: MatchConfig) -> WorldState {
        WorldState::new(cfg, Arc::new(Ruleset::default())).unwrap()
    }

    #[test]
    fn fresh_world_is_not_terminal() {
        let w = world(MatchConfig::default());
        assert_eq!(w.is_terminal(), None);
        assert_eq!(w.heroes.len(), 10);
        assert_eq!(w.heroes[5].team, Team::Red);
    }

    #[test]
    fn idle_tick_changes_only_clock_and_regen() {
        let w = world(quiet());
        let (next, events) = w.advance_tick(&[]);
        assert_eq!(next.tick, 1);
        assert!(events.iter().all(|e| matches!(e, Event::Passive { .. } | Event::Positions { .. })));
        for (a, b) in w.heroes.iter().zip(&next.heroes) {
            assert_eq!(a.pos, b.pos);
            assert_eq!(a.wallet, b.wallet);
        }
    }

    #[test]
    fn destroying_main_structure_ends_match() {
        let mut w = world(quiet());
        for id in w.structures.ids().collect::<Vec<_>>() {
            if id.team == Team::Red && id.slot != StructureSlot::Main {
                w.structures.node_mut(id).unwrap().hp = 0.0;
            }
        }
        let main = StructureId::main(Team::Red);
        let mpos = w.structures.node(main).unwrap().position;
        w.structures.node_mut(main).unwrap().hp = 1.0;
        w.heroes[0].pos = mpos + Vec2::new(1.0, 0.0);
        let events = w.step(&[(UnitId(0), Action::AttackStructure(main))]);
        assert_eq!(w.is_terminal(), Some(Outcome::Winner(Team::Blue)));
        assert!(events.iter().any(|e| matches!(e, Event::Terminal { outcome: Outcome::Winner(Team::Blue), .. })));
    }

    #[test]
    fn blue_main_destroyed_means_red_wins() {
        let mut w = world(quiet());
        let main = StructureId::main(Team::Blue);
        w.structures.node_mut(main).unwrap().hp = 0.0;
        w.step(&[]);
        assert_eq!(w.is_terminal(), Some(Outcome::Winner(Team::Red)));
    }

    #[test]
    fn cutoff_with_equal_structures_is_draw() {
        let mut w = world(MatchConfig { max_ticks: 5, ..quiet() });
        for _ in 0..5 {
            w.step(&[]);
        }
        assert_eq!(w.is_terminal(), Some(Outcome::Draw));
        let before = w.tick;
        w.step(&[]);
        assert_eq!(w.tick, before);
    }

    #[test]
    fn unknown_unit_resolves_as_invalid() {
        let mut w = world(quiet());
        let ev = w.step(&[(UnitId(0), Action::AttackUnit(UnitId(9999))), (UnitId(42), Action::Idle)]);
        let invalid = ev.iter().filter(|e| matches!(e, Event::InvalidAction { .. })).count();
        assert_eq!(invalid, 2);
    }

    #[test]
    fn first_wave_spawns_six_per_lane_per_team() {
        let mut w = world(MatchConfig { jungle: false, ..MatchConfig::default() });
        w.step(&[]);
        assert_eq!(w.creeps.len(), 6 * 3 * 2);
    }

    #[test]
    fn stun_lasts_exactly_its_duration() {
        let mut w = world(quiet());
        // frostcaller stun: 18 ticks
        let mut cfg = quiet();
        cfg.rosters = [vec!["frostcaller".into()], vec!["warden".into()]];
        w = WorldState::new(cfg, w.rules.clone()).unwrap();
        w.heroes[0].pos = Vec2::new(70.0, 70.0);
        w.heroes[1].pos = Vec2::new(74.0, 70.0);
        let ev = w.step(&[(UnitId(0), Action::Cast { slot: 0, target: CastTarget::Unit(UnitId(1)) })]);
        assert!(ev.iter().any(|e| matches!(e, Event::Stun { ticks: 18, .. })));
        let mut moved_at = None;
        for k in 0..30 {
            let before = w.heroes[1].pos;
            w.step(&[(UnitId(1), Action::Move(Vec2::new(90.0, 70.0)))]);
            if w.heroes[1].pos != before {
                moved_at = Some(k);
                break;
            }
        }
        assert_eq!(moved_at, Some(18));
    }

    #[test]
    fn action_order_does_not_matter() {
        let mut a = world(MatchConfig::default());
        let mut b = a.clone();
        let acts: Vec<(UnitId, Action)> =
            (0..10).map(|i| (UnitId(i), Action::Move(Vec2::new(75.0, 75.0 + f64::from(i))))).collect();
        let mut rev = acts.clone();
        rev.reverse();
        for _ in 0..200 {
            let ea = a.step(&acts);
            let eb = b.step(&rev);
            assert_eq!(ea, eb);
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(16))]
        #[test]
        fn units_stay_in_bounds_and_hp_valid(seed in 0u64..1000, tx in -50.0f64..200.0, ty in -50.0f64..200.0) {
            let mut w = world(MatchConfig { seed, ..MatchConfig::default() });
            let target = Vec2::new(tx, ty);
            for k in 0..400u64 {
                let acts: Vec<(UnitId, Action)> = (0..10)
                    .map(|i| (UnitId(i), if k % 2 == 0 { Action::Move(target) } else { Action::Move(Vec2::new(75.0, 75.0)) }))
                    .collect();
                let t0 = w.tick;
                w.step(&acts);
                proptest::prop_assert_eq!(w.tick, t0 + 1);
                for h in &w.heroes {
                    proptest::prop_assert!(w.map.in_bounds(h.pos));
                    proptest::prop_assert!(h.hp >= 0.0 && h.hp <= h.stats.max_hp);
                }
                for c in &w.creeps {
                    proptest::prop_assert!(w.map.in_bounds(c.pos));
                    proptest::prop_assert!(c.hp > 0.0 && c.hp <= c.max_hp);
                }
                for camp in &w.jungle {
                    let units_alive = match &camp.status {
                        CampStatus::Alive { units } => units.iter().all(|u| w.creep(*u).is_some()),
                        CampStatus::Respawning { at } => *at > w.tick,
                    };
                    proptest::prop_assert!(units_alive);
                }
            }
        }
    }
}
