//! Isolated sub-games (item building, laning, team fights) and full-match
//! composition. Every run is a pure function of its spec.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::{create_agent, observe, team_roles, Action, Agent, AgentError, AgentInit, Role};
use crate::analytics::{extract_interaction_graph, Replay, ReplayHeader, TemporalInteractionGraph};
use crate::combat::{mitigate, Actor, Stats};
use crate::config::{PhaseProfile, Ruleset};
use crate::draft::DraftTranscript;
use crate::economy::{CreepKind, Wallet};
use crate::rng::derive_seed;
use crate::types::{Lane, Outcome, Team, UnitId, Vec2};
use crate::world::{Event, HeroState, MatchConfig, WorldError, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgameKind {
    ItemBuild,
    Laning,
    TeamFight,
    FullMatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseName {
    Opening,
    Mid,
    Late,
}

impl PhaseName {
    pub fn profile(self, rules: &Ruleset) -> PhaseProfile {
        match self {
            PhaseName::Opening => rules.profiles.opening,
            PhaseName::Mid => rules.profiles.mid,
            PhaseName::Late => rules.profiles.late,
        }
    }
}

/// Aggregate enemy used to score builds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnemyProfile {
    /// Share of incoming damage that is physical, in `[0, 1]`.
    pub physical_share: f64,
    pub armor: f64,
    pub magic_resist: f64,
}

impl Default for EnemyProfile {
    fn default() -> Self {
        Self { physical_share: 0.5, armor: 20.0, magic_resist: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SubgameSpec {
    pub kind: SubgameKind,
    pub seed: u64,
    pub duration_ticks: u64,
    pub profile: PhaseName,
    pub rosters: [Vec<String>; 2],
    /// Agent names per team: one name for the whole team or one per hero.
    /// An empty red list means no opponent (laning).
    pub agents: [Vec<String>; 2],
    pub lane: Lane,
    pub crits: bool,
    pub deny_mode: bool,
    /// Team-fight arena with its turrets firing.
    pub turrets: bool,
    pub enemy: EnemyProfile,
}

impl Default for SubgameSpec {
    fn default() -> Self {
        Self {
            kind: SubgameKind::Laning,
            seed: 0,
            duration_ticks: 6000,
            profile: PhaseName::Opening,
            rosters: [vec!["marksman".into()], vec!["marksman".into()]],
            agents: [vec!["laner".into()], vec![]],
            lane: Lane::Mid,
            crits: true,
            deny_mode: true,
            turrets: false,
            enemy: EnemyProfile::default(),
        }
    }
}

impl SubgameSpec {
    pub fn laning(seed: u64, hero: &str, agent: &str, opponent: Option<&str>) -> Self {
        Self {
            kind: SubgameKind::Laning,
            seed,
            rosters: [vec![hero.into()], vec![hero.into()]],
            agents: [vec![agent.into()], opponent.map(|o| vec![o.into()]).unwrap_or_default()],
            ..Self::default()
        }
    }

    pub fn teamfight(seed: u64, blue: &[&str], red: &[&str], agent: &str) -> Self {
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        Self {
            kind: SubgameKind::TeamFight,
            seed,
            duration_ticks: 900,
            profile: PhaseName::Mid,
            rosters: [names(blue), names(red)],
            agents: [vec![agent.into()], vec![agent.into()]],
            ..Self::default()
        }
    }

    pub fn item_build(hero: &str, profile: PhaseName, enemy: EnemyProfile) -> Self {
        Self {
            kind: SubgameKind::ItemBuild,
            duration_ticks: 64,
            profile,
            rosters: [vec![hero.into()], vec![hero.into()]],
            agents: [vec![], vec![]],
            enemy,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), SubgameError> {
        if self.duration_ticks == 0 {
            return Err(SubgameError::BadSpec("duration must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgameResult {
    pub kind: SubgameKind,
    pub score: f64,
    pub metrics: BTreeMap<String, f64>,
    pub outcome: Option<Outcome>,
    #[serde(skip)]
    pub replay: Option<Replay>,
}

#[derive(Debug, Error)]
pub enum SubgameError {
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error("invalid spec: {0}")]
    BadSpec(String),
    #[error("team {0} has no heroes")]
    EmptyTeam(Team),
    #[error("purchase {step}: item {item} costs {cost}, only {remaining} left")]
    Overspend { step: usize, item: u16, cost: u64, remaining: u64 },
    #[error("purchase {step}: item {item} rejected: {reason}")]
    Rejected { step: usize, item: u16, reason: String },
    #[error("replay has no sub-game spec")]
    NoSpec,
}

// ---------------------------------------------------------------- driving

/// Builds one agent per hero. `names[team]` holds either a single name for
/// the whole team or one name per hero.
pub fn build_agents(
    world: &WorldState,
    names: &[Vec<String>; 2],
    arena: bool,
) -> Result<Vec<Box<dyn Agent>>, SubgameError> {
    build_agents_in(world, names, arena, None)
}

/// As [`build_agents`], with every hero assigned to `lane` when given.
pub fn build_agents_in(
    world: &WorldState,
    names: &[Vec<String>; 2],
    arena: bool,
    lane: Option<Lane>,
) -> Result<Vec<Box<dyn Agent>>, SubgameError> {
    let mut out: Vec<Box<dyn Agent>> = Vec::with_capacity(world.heroes.len());
    for team in Team::BOTH {
        let members: Vec<&HeroState> = world.team_heroes(team).collect();
        let templates: Vec<usize> = members.iter().map(|h| h.template).collect();
        let roles = match lane {
            Some(l) => vec![Role::for_lane(l); templates.len()],
            None => team_roles(&world.rules, &templates),
        };
        let list = &names[team.index()];
        for (k, h) in members.iter().enumerate() {
            let name = match list.len() {
                0 => "idle",
                1 => list[0].as_str(),
                n if n == members.len() => list[k].as_str(),
                _ => return Err(SubgameError::BadSpec(format!("{} agent names for {} heroes", list.len(), members.len()))),
            };
            let init = AgentInit {
                hero: h.id,
                team,
                role: roles[k],
                seed: derive_seed(world.config.seed, "agent", u64::from(h.id.0)),
                arena,
            };
            out.push(create_agent(name, init)?);
        }
    }
    // heroes are blue first, then red, matching world order
    Ok(out)
}

/// Per-hero agent names expanded from a team list.
fn expand_names(world: &WorldState, names: &[Vec<String>; 2]) -> [Vec<String>; 2] {
    let mut out = [Vec::new(), Vec::new()];
    for team in Team::BOTH {
        let n = world.team_heroes(team).count();
        let list = &names[team.index()];
        out[team.index()] = (0..n)
            .map(|k| match list.len() {
                0 => "idle".to_string(),
                1 => list[0].clone(),
                _ => list.get(k).cloned().unwrap_or_else(|| "idle".into()),
            })
            .collect();
    }
    out
}

/// Actions of every living hero for the next tick, in hero order.
pub fn collect_actions(world: &WorldState, agents: &mut [Box<dyn Agent>]) -> Vec<(UnitId, Action)> {
    let mut actions = Vec::with_capacity(agents.len());
    for (h, agent) in world.heroes.iter().zip(agents.iter_mut()) {
        if !h.is_alive() {
            continue;
        }
        if let Ok(obs) = observe(world, h.id) {
            actions.push((h.id, agent.act(&obs)));
        }
    }
    actions
}

/// Steps `world` with `agents` until it is terminal, `stop` returns an
/// outcome, or `until` is reached.
pub fn drive(
    world: &mut WorldState,
    agents: &mut [Box<dyn Agent>],
    until: u64,
    mut stop: impl FnMut(&WorldState) -> Option<Outcome>,
    events: &mut Vec<Event>,
) -> Option<Outcome> {
    while world.tick < until {
        if let Some(o) = world.is_terminal() {
            return Some(o);
        }
        let actions = collect_actions(world, agents);
        events.extend(world.step(&actions));
        if let Some(o) = stop(world) {
            return Some(o);
        }
    }
    world.is_terminal()
}

// ---------------------------------------------------------------- full match

/// Runs a complete match with agents looked up by name.
pub fn run_full_match(
    mut config: MatchConfig,
    rules: Arc<Ruleset>,
    agents: [Vec<String>; 2],
    draft: Option<DraftTranscript>,
) -> Result<Replay, SubgameError> {
    if let Some(d) = &draft {
        config.rosters = d.rosters.clone();
    }
    let mut world = WorldState::new(config.clone(), rules.clone())?;
    let mut bots = build_agents(&world, &agents, false)?;
    let mut header = ReplayHeader::new(SubgameKind::FullMatch, config, expand_names(&world, &agents), (*rules).clone());
    header.draft = draft;
    let mut events = Vec::new();
    let outcome = drive(&mut world, &mut bots, u64::MAX, |_| None, &mut events);
    Ok(Replay::new(header, events, outcome, world.tick))
}

/// Runs a match with caller-supplied agents (one per hero, blue first).
pub fn run_match_with(
    config: MatchConfig,
    rules: Arc<Ruleset>,
    mut agents: Vec<Box<dyn Agent>>,
) -> Result<Replay, SubgameError> {
    let mut world = WorldState::new(config.clone(), rules.clone())?;
    if agents.len() != world.heroes.len() {
        return Err(SubgameError::BadSpec(format!("{} agents for {} heroes", agents.len(), world.heroes.len())));
    }
    let names: Vec<String> = agents.iter().map(|a| a.name().to_string()).collect();
    let nb = world.team_heroes(Team::Blue).count();
    let header =
        ReplayHeader::new(SubgameKind::FullMatch, config, [names[..nb].to_vec(), names[nb..].to_vec()], (*rules).clone());
    let mut events = Vec::new();
    let outcome = drive(&mut world, &mut agents, u64::MAX, |_| None, &mut events);
    Ok(Replay::new(header, events, outcome, world.tick))
}

// ---------------------------------------------------------------- item build

/// Build quality against an enemy profile: effective hp times damage per second.
pub fn power_score(stats: &Stats, enemy: &EnemyProfile, crit_multiplier: f64) -> f64 {
    let p = enemy.physical_share.clamp(0.0, 1.0);
    let resist = p * stats.armor + (1.0 - p) * stats.magic_resist;
    let ehp = stats.max_hp * (1.0 + resist / 100.0);
    let crit = 1.0 + stats.crit_chance.clamp(0.0, 1.0) * (crit_multiplier - 1.0);
    let dps = mitigate(stats.attack_damage, enemy.armor) * stats.attack_speed * crit;
    ehp * dps
}

/// Stats of a hero template at `level` carrying `items`.
pub fn stats_with(rules: &Ruleset, template: usize, level: u32, items: &[u16]) -> Stats {
    let mut s = rules.heroes[template].base.plus(&rules.growth.scaled(f64::from(level.saturating_sub(1))));
    for &i in items {
        if let Some(d) = rules.item(i) {
            s = s.plus(&d.delta);
        }
    }
    s.normalized()
}

/// Chooses purchases one at a time.
pub trait BuildPolicy {
    fn name(&self) -> &str;
    /// Next item to buy, or `None` to stop.
    fn next(&mut self, hero: &HeroState, rules: &Ruleset, gold: u64, enemy: &EnemyProfile) -> Option<u16>;
}

/// Buys whichever affordable item raises the score most; stops when nothing helps.
#[derive(Debug, Default, Clone)]
pub struct GreedyBuild;

impl BuildPolicy for GreedyBuild {
    fn name(&self) -> &str {
        "greedy"
    }

    fn next(&mut self, hero: &HeroState, rules: &Ruleset, gold: u64, enemy: &EnemyProfile) -> Option<u16> {
        if hero.item_count() >= rules.economy.inventory_slots {
            return None;
        }
        let owned: Vec<u16> = hero.items.iter().flatten().copied().collect();
        let cm = rules.combat.crit_multiplier;
        let now = power_score(&stats_with(rules, hero.template, hero.level, &owned), enemy, cm);
        let mut best: Option<(f64, u16)> = None;
        for it in rules.items.iter().filter(|i| i.cost <= gold) {
            let mut with = owned.clone();
            with.push(it.id);
            let s = power_score(&stats_with(rules, hero.template, hero.level, &with), enemy, cm);
            if s > now && best.map_or(true, |(b, _)| s > b) {
                best = Some((s, it.id));
            }
        }
        best.map(|(_, i)| i)
    }
}

/// Best multiset of at most `slots` items within `budget`, by exhaustive search.
pub fn best_build(rules: &Ruleset, template: usize, level: u32, budget: u64, enemy: &EnemyProfile) -> (Vec<u16>, f64) {
    let cm = rules.combat.crit_multiplier;
    let mut items: Vec<(u16, u64)> = rules.items.iter().map(|i| (i.id, i.cost)).collect();
    items.sort();
    let base = stats_with(rules, template, level, &[]);
    let mut best = (Vec::new(), power_score(&base, enemy, cm));
    let mut cur: Vec<u16> = Vec::new();
    fn rec(
        rules: &Ruleset,
        template: usize,
        level: u32,
        items: &[(u16, u64)],
        start: usize,
        left: u64,
        cur: &mut Vec<u16>,
        best: &mut (Vec<u16>, f64),
        enemy: &EnemyProfile,
        cm: f64,
    ) {
        if cur.len() >= rules.economy.inventory_slots {
            return;
        }
        for k in start..items.len() {
            let (id, cost) = items[k];
            if cost > left {
                continue;
            }
            cur.push(id);
            let s = power_score(&stats_with(rules, template, level, cur), enemy, cm);
            if s > best.1 {
                *best = (cur.clone(), s);
            }
            rec(rules, template, level, items, k, left - cost, cur, best, enemy, cm);
            cur.pop();
        }
    }
    rec(rules, template, level, &items, 0, budget, &mut cur, &mut best, enemy, cm);
    best
}

/// Buys the exhaustive-search optimum.
#[derive(Debug, Default, Clone)]
pub struct ExhaustiveBuild {
    plan: Option<Vec<u16>>,
}

impl BuildPolicy for ExhaustiveBuild {
    fn name(&self) -> &str {
        "exhaustive"
    }

    fn next(&mut self, hero: &HeroState, rules: &Ruleset, gold: u64, enemy: &EnemyProfile) -> Option<u16> {
        let plan = self.plan.get_or_insert_with(|| {
            let mut p = best_build(rules, hero.template, hero.level, gold, enemy).0;
            p.reverse();
            p
        });
        plan.pop()
    }
}

/// Buys a fixed list in order.
#[derive(Debug, Clone)]
pub struct FixedBuild(pub Vec<u16>);

impl BuildPolicy for FixedBuild {
    fn name(&self) -> &str {
        "fixed"
    }

    fn next(&mut self, hero: &HeroState, _: &Ruleset, _: u64, _: &EnemyProfile) -> Option<u16> {
        let bought = hero.items.iter().flatten().count();
        self.0.get(bought).copied()
    }
}

fn hero_template(rules: &Ruleset, name: &str) -> Result<usize, SubgameError> {
    rules.hero_index(name).ok_or_else(|| SubgameError::World(WorldError::UnknownHero(name.to_string())))
}

/// Shops for one hero standing in its base with the phase budget.
pub fn run_item_subgame(
    spec: &SubgameSpec,
    rules: Arc<Ruleset>,
    policy: &mut dyn BuildPolicy,
) -> Result<SubgameResult, SubgameError> {
    spec.validate()?;
    let hero = spec.rosters[0].first().ok_or(SubgameError::EmptyTeam(Team::Blue))?;
    let profile = spec.profile.profile(&rules);
    let config = MatchConfig {
        seed: spec.seed,
        spawn_waves: false,
        jungle: false,
        passive_income: false,
        rosters: [vec![hero.clone()], vec![hero.clone()]],
        max_ticks: spec.duration_ticks + 1,
        ..MatchConfig::default()
    };
    let mut world = WorldState::new(config.clone(), rules.clone())?;
    world.bench_hero(1);
    world.heroes[0].set_level(profile.level, &rules);
    world.heroes[0].wallet = Wallet::new(profile.budget);
    let mut events = Vec::new();
    let mut step = 0;
    while world.tick < spec.duration_ticks {
        let h = &world.heroes[0];
        let gold = h.wallet.gold;
        let Some(item) = policy.next(h, &rules, gold, &spec.enemy) else { break };
        let cost = rules.item(item).map_or(0, |d| d.cost);
        if cost > gold {
            return Err(SubgameError::Overspend { step, item, cost, remaining: gold });
        }
        let ev = world.step(&[(UnitId(0), Action::Buy(item))]);
        if let Some(Event::InvalidAction { reason, .. }) = ev.iter().find(|e| matches!(e, Event::InvalidAction { .. })) {
            return Err(SubgameError::Rejected { step, item, reason: reason.clone() });
        }
        events.extend(ev);
        step += 1;
    }
    let h = &world.heroes[0];
    let score = power_score(&h.stats, &spec.enemy, rules.combat.crit_multiplier);
    let mut metrics = BTreeMap::new();
    metrics.insert("spent".into(), h.wallet.spent as f64);
    metrics.insert("items".into(), h.item_count() as f64);
    metrics.insert("max_hp".into(), h.stats.max_hp);
    metrics.insert("attack_damage".into(), h.stats.attack_damage);
    let mut header = ReplayHeader::new(SubgameKind::ItemBuild, config, [vec![policy.name().to_string()], vec![]], (*rules).clone());
    header.subgame = Some(spec.clone());
    let replay = Replay::new(header, events, None, world.tick);
    Ok(SubgameResult { kind: SubgameKind::ItemBuild, score, metrics, outcome: None, replay: Some(replay) })
}

// ---------------------------------------------------------------- laning

/// One lane, one hero (plus an optional opponent), waves and turrets only.
///
/// Besides gold and harass numbers the result counts last-hit windows: a
/// window is a tick where an enemy creep is in range with hp at or below the
/// hero's next hit and the attack is ready. `last_hittable` counts creeps
/// that had a window at a tick where the hero did not land a last hit, plus
/// every creep the hero did last-hit.
pub fn run_laning_subgame(spec: &SubgameSpec, rules: Arc<Ruleset>) -> Result<SubgameResult, SubgameError> {
    spec.validate()?;
    let hero = spec.rosters[0].first().ok_or(SubgameError::EmptyTeam(Team::Blue))?.clone();
    let opp = spec.rosters[1].first().cloned().unwrap_or_else(|| hero.clone());
    let config = MatchConfig {
        seed: spec.seed,
        crits: spec.crits,
        deny_mode: spec.deny_mode,
        wave_lanes: vec![spec.lane],
        jungle: false,
        max_ticks: spec.duration_ticks,
        rosters: [vec![hero], vec![opp]],
        ..MatchConfig::default()
    };
    let mut world = WorldState::new(config.clone(), rules.clone())?;
    let solo = spec.agents[1].is_empty();
    if solo {
        world.bench_hero(1);
    }
    let names = [spec.agents[0].clone(), if solo { vec!["idle".into()] } else { spec.agents[1].clone() }];
    let mut bots = build_agents_in(&world, &names, false, Some(spec.lane))?;
    let me = UnitId(0);
    let mut events = Vec::new();
    let mut hittable: BTreeSet<UnitId> = BTreeSet::new();
    let mut secured: BTreeSet<UnitId> = BTreeSet::new();
    while world.tick < spec.duration_ticks && world.is_terminal().is_none() {
        let windows = last_hit_windows(&world, me);
        let actions = collect_actions(&world, &mut bots);
        let ev = world.step(&actions);
        let mut hit_now = false;
        for e in &ev {
            if let Event::Kill { victim: Actor::Unit(v), killer: Some(k), deny: false, .. } = e {
                if *k == me && !v.is_hero() {
                    secured.insert(*v);
                    hit_now = true;
                }
            }
        }
        if !hit_now {
            hittable.extend(windows);
        }
        events.extend(ev);
    }
    let died: BTreeSet<UnitId> = events
        .iter()
        .filter_map(|e| match e {
            Event::Kill { victim: Actor::Unit(v), .. } if !v.is_hero() => Some(*v),
            _ => None,
        })
        .collect();
    let last_hittable: BTreeSet<UnitId> = hittable.intersection(&died).copied().chain(secured.iter().copied()).collect();
    let h = &world.heroes[0];
    let mut metrics = BTreeMap::new();
    metrics.insert("last_hits".into(), f64::from(h.counters.last_hits));
    metrics.insert("denies".into(), f64::from(h.counters.denies));
    metrics.insert("gold".into(), h.wallet.earned as f64);
    metrics.insert("harass_dealt".into(), h.counters.hero_damage_dealt);
    metrics.insert("damage_taken".into(), h.counters.damage_taken);
    metrics.insert("structure_damage".into(), h.counters.structure_damage);
    metrics.insert("last_hittable".into(), last_hittable.len() as f64);
    metrics.insert("secured".into(), secured.len() as f64);
    if !solo {
        let o = &world.heroes[1];
        metrics.insert("opponent_gold".into(), o.wallet.earned as f64);
        metrics.insert("opponent_last_hits".into(), f64::from(o.counters.last_hits));
    }
    let mut header = ReplayHeader::new(SubgameKind::Laning, config, expand_names(&world, &names), (*rules).clone());
    header.subgame = Some(spec.clone());
    let outcome = world.is_terminal();
    let replay = Replay::new(header, events, outcome, world.tick);
    let score = laning_score(&replay);
    Ok(SubgameResult { kind: SubgameKind::Laning, score, metrics, outcome, replay: Some(replay) })
}

/// Enemy lane creeps the hero could last-hit on the coming tick.
pub fn last_hit_windows(world: &WorldState, hero: UnitId) -> Vec<UnitId> {
    let Some(h) = world.hero(hero) else { return Vec::new() };
    let t = world.tick + 1;
    if !h.is_alive() || h.is_stunned(t) || t < h.next_attack_tick {
        return Vec::new();
    }
    world
        .creeps
        .iter()
        .filter(|c| {
            c.owner == Some(h.team.opponent())
                && c.kind != CreepKind::Neutral
                && h.pos.dist(c.pos) <= h.stats.attack_range
                && c.hp <= mitigate(h.stats.attack_damage, c.armor)
        })
        .map(|c| c.id)
        .collect()
}

/// Gold earned by the blue hero, recomputed from events.
pub fn laning_score(replay: &Replay) -> f64 {
    let me = UnitId(0);
    replay
        .events
        .iter()
        .map(|e| match e {
            Event::Gold { hero, amount, .. } if *hero == me => *amount as f64,
            Event::Passive { amount, .. } => *amount as f64,
            _ => 0.0,
        })
        .sum()
}

// ---------------------------------------------------------------- team fight

/// Arena spot for hero `k` of `n` on the blue side of the mid lane.
fn arena_spot(world: &WorldState, k: usize, n: usize) -> Vec2 {
    let mid = world.map.lane(Lane::Mid);
    let s = mid.length() / 2.0;
    let center = mid.point_at(s);
    let ahead = mid.point_at(s + 1.0);
    let dir = ahead - center;
    let dir = dir * (1.0 / dir.len().max(1e-9));
    let perp = Vec2::new(-dir.y, dir.x);
    let spread = k as f64 - (n as f64 - 1.0) / 2.0;
    center - dir * 5.0 + perp * (2.0 * spread)
}

/// Sets up the arena world for a team fight.
pub fn teamfight_world(spec: &SubgameSpec, rules: Arc<Ruleset>) -> Result<WorldState, SubgameError> {
    for team in Team::BOTH {
        if spec.rosters[team.index()].is_empty() {
            return Err(SubgameError::EmptyTeam(team));
        }
        if spec.rosters[team.index()].len() > 5 {
            return Err(SubgameError::BadSpec("at most 5 heroes per side".into()));
        }
    }
    let config = MatchConfig {
        seed: spec.seed,
        crits: spec.crits,
        deny_mode: false,
        spawn_waves: false,
        jungle: false,
        turrets_active: spec.turrets,
        respawn: false,
        passive_income: false,
        max_ticks: spec.duration_ticks + 1,
        rosters: spec.rosters.clone(),
        ..MatchConfig::default()
    };
    let mut world = WorldState::new(config, rules.clone())?;
    let profile = spec.profile.profile(&rules);
    let counts = [spec.rosters[0].len(), spec.rosters[1].len()];
    let mut k = [0usize; 2];
    for i in 0..world.heroes.len() {
        let team = world.heroes[i].team;
        let ti = team.index();
        let blue_spot = arena_spot(&world, k[ti], counts[ti]);
        k[ti] += 1;
        let pos = world.map.for_team(team, blue_spot);
        let h = &mut world.heroes[i];
        h.pos = pos;
        h.set_level(profile.level, &rules);
        let (items, _) = best_build(&rules, h.template, h.level, profile.budget, &EnemyProfile::default());
        for (slot, it) in items.into_iter().enumerate() {
            h.items[slot] = Some(it);
        }
        h.recompute_stats(&rules);
        h.hp = h.stats.max_hp;
        h.mana = h.stats.max_mana;
    }
    world.refresh_vision();
    Ok(world)
}

/// Elimination check: a side with no living hero loses.
pub fn elimination(world: &WorldState) -> Option<Outcome> {
    let alive = |t: Team| world.team_heroes(t).any(|h| h.is_alive());
    match (alive(Team::Blue), alive(Team::Red)) {
        (true, true) => None,
        (false, false) => Some(Outcome::Draw),
        (true, false) => Some(Outcome::Winner(Team::Blue)),
        (false, true) => Some(Outcome::Winner(Team::Red)),
    }
}

/// Timeout verdict: the side with more remaining hp (mean fraction) wins.
pub fn hp_verdict(world: &WorldState) -> Outcome {
    let frac = |t: Team| {
        let hs: Vec<&HeroState> = world.team_heroes(t).collect();
        hs.iter().map(|h| if h.is_alive() { h.hp_fraction() } else { 0.0 }).sum::<f64>() / hs.len().max(1) as f64
    };
    let d = frac(Team::Blue) - frac(Team::Red);
    if d.abs() < 1e-9 {
        Outcome::Draw
    } else if d > 0.0 {
        Outcome::Winner(Team::Blue)
    } else {
        Outcome::Winner(Team::Red)
    }
}

/// Runs an arena fight to elimination or `until`.
pub fn fight(world: &mut WorldState, agents: &mut [Box<dyn Agent>], until: u64, events: &mut Vec<Event>) -> Outcome {
    if let Some(o) = elimination(world) {
        return o;
    }
    match drive(world, agents, until, elimination, events) {
        Some(o) => o,
        None => hp_verdict(world),
    }
}

pub fn run_teamfight_subgame(
    spec: &SubgameSpec,
    rules: Arc<Ruleset>,
) -> Result<(SubgameResult, TemporalInteractionGraph), SubgameError> {
    spec.validate()?;
    let mut world = teamfight_world(spec, rules.clone())?;
    let mut bots = build_agents(&world, &spec.agents, true)?;
    let mut events = Vec::new();
    let outcome = fight(&mut world, &mut bots, spec.duration_ticks, &mut events);
    let mut metrics = BTreeMap::new();
    for team in Team::BOTH {
        let hs: Vec<&HeroState> = world.team_heroes(team).collect();
        let alive = hs.iter().filter(|h| h.is_alive()).count();
        let hp: f64 = hs.iter().filter(|h| h.is_alive()).map(|h| h.hp).sum();
        let dealt: f64 = hs.iter().map(|h| h.counters.hero_damage_dealt).sum();
        metrics.insert(format!("{team}_alive"), alive as f64);
        metrics.insert(format!("{team}_hp"), hp);
        metrics.insert(format!("{team}_damage_dealt"), dealt);
    }
    let mut header =
        ReplayHeader::new(SubgameKind::TeamFight, world.config.clone(), expand_names(&world, &spec.agents), (*rules).clone());
    header.subgame = Some(spec.clone());
    let replay = Replay::new(header, events, Some(outcome), world.tick);
    let graph = extract_interaction_graph(&replay, 0, replay.duration()).expect("full window is valid");
    let score = teamfight_score(&replay);
    let result = SubgameResult { kind: SubgameKind::TeamFight, score, metrics, outcome: Some(outcome), replay: Some(replay) };
    Ok((result, graph))
}

/// Red deaths minus blue deaths.
pub fn teamfight_score(replay: &Replay) -> f64 {
    let nb = replay.header.config.rosters[0].len() as u32;
    replay
        .events
        .iter()
        .map(|e| match e {
            Event::Kill { victim: Actor::Unit(v), .. } if v.is_hero() => {
                if v.0 < nb {
                    -1.0
                } else {
                    1.0
                }
            }
            _ => 0.0,
        })
        .sum()
}

/// Item-build score recomputed from the purchases in a replay.
pub fn item_score(replay: &Replay) -> Result<f64, SubgameError> {
    let spec = replay.header.subgame.as_ref().ok_or(SubgameError::NoSpec)?;
    let rules = &replay.header.ruleset;
    let template = hero_template(rules, &replay.header.config.rosters[0][0])?;
    let level = spec.profile.profile(rules).level;
    let items: Vec<u16> = replay
        .events
        .iter()
        .filter_map(|e| match e {
            Event::Purchase { hero, item, .. } if hero.0 == 0 => Some(*item),
            _ => None,
        })
        .collect();
    Ok(power_score(&stats_with(rules, template, level, &items), &spec.enemy, rules.combat.crit_multiplier))
}

/// Runs whatever sub-game `spec` describes with its named agents.
pub fn run_subgame(spec: &SubgameSpec, rules: Arc<Ruleset>) -> Result<SubgameResult, SubgameError> {
    match spec.kind {
        SubgameKind::ItemBuild => {
            let name = spec.agents[0].first().map(String::as_str).unwrap_or("exhaustive");
            match name {
                "greedy" => run_item_subgame(spec, rules, &mut GreedyBuild),
                _ => run_item_subgame(spec, rules, &mut ExhaustiveBuild::default()),
            }
        }
        SubgameKind::Laning => run_laning_subgame(spec, rules),
        SubgameKind::TeamFight => run_teamfight_subgame(spec, rules).map(|(r, _)| r),
        SubgameKind::FullMatch => {
            let config = MatchConfig {
                seed: spec.seed,
                crits: spec.crits,
                deny_mode: spec.deny_mode,
                max_ticks: spec.duration_ticks,
                rosters: spec.rosters.clone(),
                ..MatchConfig::default()
            };
            let replay = run_full_match(config, rules, spec.agents.clone(), None)?;
            let outcome = replay.outcome();
            let score = match outcome {
                Some(Outcome::Winner(Team::Blue)) => 1.0,
                Some(Outcome::Winner(Team::Red)) => 0.0,
                _ => 0.5,
            };
            Ok(SubgameResult { kind: SubgameKind::FullMatch, score, metrics: BTreeMap::new(), outcome, replay: Some(replay) })
        }
    }
}

/// Re-runs the simulation a replay header describes.
pub fn resimulate(header: &ReplayHeader) -> Result<Replay, SubgameError> {
    let rules = Arc::new(header.ruleset.clone());
    if let Some(spec) = &header.subgame {
        let r = match spec.kind {
            SubgameKind::ItemBuild => {
                let name = header.agents[0].first().map(String::as_str).unwrap_or("exhaustive");
                match name {
                    "greedy" => run_item_subgame(spec, rules, &mut GreedyBuild)?,
                    _ => run_item_subgame(spec, rules, &mut ExhaustiveBuild::default())?,
                }
            }
            _ => run_subgame(spec, rules)?,
        };
        return r.replay.ok_or(SubgameError::NoSpec);
    }
    run_full_match(header.config.clone(), rules, header.agents.clone(), header.draft.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rules() -> Arc<Ruleset> {
        Arc::new(Ruleset::default())
    }

    #[test]
    fn zero_budget_is_naked_baseline() {
        let r = rules();
        let mut spec = SubgameSpec::item_build("marksman", PhaseName::Opening, EnemyProfile::default());
        let mut custom = (*r).clone();
        custom.profiles.opening.budget = 0;
        let res = run_item_subgame(&spec, Arc::new(custom.clone()), &mut GreedyBuild).unwrap();
        let t = custom.hero_index("marksman").unwrap();
        let naked = power_score(&stats_with(&custom, t, 1, &[]), &spec.enemy, custom.combat.crit_multiplier);
        assert_eq!(res.score, naked);
        spec.profile = PhaseName::Mid;
        let res = run_item_subgame(&spec, r, &mut GreedyBuild).unwrap();
        assert!(res.score > naked);
    }

    #[test]
    fn overspend_names_purchase() {
        let spec = SubgameSpec::item_build("marksman", PhaseName::Opening, EnemyProfile::default());
        let err = run_item_subgame(&spec, rules(), &mut FixedBuild(vec![0, 6])).unwrap_err();
        assert!(matches!(err, SubgameError::Overspend { step: 1, item: 6, .. }), "{err}");
    }

    #[test]
    fn defense_scores_higher_against_physical() {
        let r = rules();
        let t = r.hero_index("warden").unwrap();
        let s = stats_with(&r, t, 9, &[7, 10, 10]);
        let phys = EnemyProfile { physical_share: 1.0, ..EnemyProfile::default() };
        let magic = EnemyProfile { physical_share: 0.0, ..EnemyProfile::default() };
        // hand evaluation: ehp = hp * (1 + resist / 100), dps identical
        let ehp = |resist: f64| s.max_hp * (1.0 + resist / 100.0);
        assert!(ehp(s.armor) > ehp(s.magic_resist));
        assert!(power_score(&s, &phys, 2.0) > power_score(&s, &magic, 2.0));
    }

    #[test]
    fn greedy_never_beats_exhaustive_in_opening() {
        let r = rules();
        for hero in ["marksman", "warden", "pyromancer"] {
            let spec = SubgameSpec::item_build(hero, PhaseName::Opening, EnemyProfile::default());
            let g = run_item_subgame(&spec, r.clone(), &mut GreedyBuild).unwrap();
            let e = run_item_subgame(&spec, r.clone(), &mut ExhaustiveBuild::default()).unwrap();
            assert!(g.score <= e.score + 1e-9);
            assert_eq!(item_score(e.replay.as_ref().unwrap()).unwrap(), e.score);
        }
    }

    #[test]
    fn empty_team_rejected() {
        let mut spec = SubgameSpec::teamfight(1, &["warden"], &["warden"], "teamfight");
        spec.rosters[1].clear();
        assert!(matches!(run_teamfight_subgame(&spec, rules()), Err(SubgameError::EmptyTeam(Team::Red))));
    }

    #[test]
    fn mirror_duel_without_crits_is_draw() {
        for hero in ["warden", "marksman", "pyromancer"] {
            let mut spec = SubgameSpec::teamfight(3, &[hero], &[hero], "teamfight");
            spec.crits = false;
            let (res, _) = run_teamfight_subgame(&spec, rules()).unwrap();
            assert_eq!(res.outcome, Some(Outcome::Draw), "{hero}");
        }
    }

    #[test]
    fn pair_beats_single() {
        let spec = SubgameSpec::teamfight(5, &["marksman", "marksman"], &["marksman"], "teamfight");
        let (res, _) = run_teamfight_subgame(&spec, rules()).unwrap();
        assert_eq!(res.outcome, Some(Outcome::Winner(Team::Blue)));
    }

    #[test]
    fn idle_laner_earns_passive_only() {
        let spec = SubgameSpec::laning(1, "marksman", "idle", None);
        let res = run_laning_subgame(&spec, rules()).unwrap();
        assert_eq!(res.metrics["last_hits"], 0.0);
        let passive: f64 = res
            .replay
            .as_ref()
            .unwrap()
            .events
            .iter()
            .map(|e| if let Event::Passive { amount, .. } = e { *amount as f64 } else { 0.0 })
            .sum();
        assert_eq!(res.metrics["gold"], passive);
        assert_eq!(res.score, res.metrics["gold"]);
    }
}
