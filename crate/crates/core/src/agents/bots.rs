//! Scripted baseline policies.
//!
//! All bots only emit actions that the engine accepts for the observation
//! they were given: targets are visible and alive, structures attackable,
//! abilities ready, purchases affordable and inside the base.

use super::{vote_target, Action, Agent, AgentInit, CastTarget, CreepView, HeroView, Observation, Role, StructureView};
use crate::combat::AbilityKind;
use crate::mapgraph::{StructureId, StructureSlot};
use crate::types::{Lane, Team, UnitId, Vec2};

/// Default purchase order, then late upgrades bought by selling the cheapest slot.
const BUILD: [u16; 6] = [0, 14, 9, 1, 7, 2];
const UPGRADES: [u16; 4] = [4, 13, 6, 5];
/// Seconds of laning before strategy bots switch to their strategy.
const STRATEGY_START_S: f64 = 360.0;

fn fountain(obs: &Observation) -> Vec2 {
    obs.map.fountain(obs.team())
}

fn in_base(obs: &Observation) -> bool {
    obs.map.in_base(obs.me.pos, obs.team())
}

fn clamp(obs: &Observation, p: Vec2) -> Vec2 {
    obs.map.clamp(p)
}

fn enemy_team(obs: &Observation) -> Team {
    obs.team().opponent()
}

fn enemy_creeps(obs: &Observation) -> impl Iterator<Item = &CreepView> {
    let enemy = enemy_team(obs);
    obs.creeps.iter().filter(move |c| c.owner == Some(enemy))
}

fn own_creeps(obs: &Observation) -> impl Iterator<Item = &CreepView> {
    let team = obs.team();
    obs.creeps.iter().filter(move |c| c.owner == Some(team))
}

fn living_enemies(obs: &Observation) -> impl Iterator<Item = &HeroView> {
    obs.enemies.iter().filter(|e| e.alive)
}

fn in_range(obs: &Observation, p: Vec2) -> bool {
    obs.me.pos.dist(p) <= obs.me.stats.attack_range
}

/// True when `p` is inside the range of a living enemy turret.
fn under_enemy_turret(obs: &Observation, p: Vec2, margin: f64) -> bool {
    let enemy = enemy_team(obs);
    obs.structures
        .iter()
        .any(|s| s.id.team == enemy && !s.destroyed && s.range.is_some_and(|r| s.position.dist(p) <= r + margin))
}

/// Arc length of `p` along `lane`, measured from `team`'s base.
fn lane_progress(obs: &Observation, lane: Lane, p: Vec2, team: Team) -> f64 {
    let path = obs.map.lane(lane);
    let (_, arc) = path.project(p);
    match team {
        Team::Blue => arc,
        Team::Red => path.length() - arc,
    }
}

/// Where a laner should stand: just behind the allied creep front, or at the
/// outermost own turret when there is no wave.
fn lane_anchor(obs: &Observation, lane: Lane, behind: f64) -> Vec2 {
    let team = obs.team();
    let path = obs.map.lane(lane);
    let front = own_creeps(obs)
        .filter(|c| c.lane == Some(lane))
        .map(|c| lane_progress(obs, lane, c.pos, team))
        .fold(f64::NEG_INFINITY, f64::max);
    if front.is_finite() {
        return path.point_from(team, (front - behind).max(0.0));
    }
    let mut best: Option<f64> = None;
    for s in obs.structures.iter().filter(|s| s.id.team == team && !s.destroyed) {
        if let StructureSlot::Lane(l, _) = s.id.slot {
            if l == lane {
                let prog = lane_progress(obs, lane, s.position, team);
                best = Some(best.map_or(prog, |b: f64| b.max(prog)));
            }
        }
    }
    path.point_from(team, best.map_or(obs.map.base_size, |b| b - 2.0))
}

/// An enemy lane creep could aggro on me because no allied creep is near it.
fn exposed_to_creeps(obs: &Observation) -> bool {
    let aggro = obs.rules.creeps.aggro_range;
    enemy_creeps(obs).filter(|c| c.lane.is_some()).any(|e| {
        e.pos.dist(obs.me.pos) <= aggro + 0.5 && !own_creeps(obs).any(|o| o.pos.dist(e.pos) <= aggro)
    })
}

/// A step back along `lane` toward my base.
fn back_off(obs: &Observation, lane: Lane) -> Action {
    let team = obs.team();
    let s = lane_progress(obs, lane, obs.me.pos, team);
    move_to(obs, obs.map.lane(lane).point_from(team, (s - 4.0).max(0.0)))
}

/// Last hit: an enemy lane creep my next attack kills, if I can hit it now.
fn last_hit(obs: &Observation) -> Option<Action> {
    if !obs.attack_ready() {
        return None;
    }
    enemy_creeps(obs)
        .filter(|c| in_range(obs, c.pos) && c.hp <= obs.my_damage_vs(c.armor))
        .min_by(|a, b| (a.hp, a.id).partial_cmp(&(b.hp, b.id)).unwrap())
        .map(|c| Action::AttackUnit(c.id))
}

fn deny(obs: &Observation) -> Option<Action> {
    if !obs.deny_mode || !obs.attack_ready() {
        return None;
    }
    own_creeps(obs)
        .filter(|c| c.lane.is_some() && in_range(obs, c.pos) && c.hp <= obs.my_damage_vs(c.armor))
        .min_by_key(|c| c.id)
        .map(|c| Action::AttackUnit(c.id))
}

/// Walk toward an enemy creep that will soon be last-hittable, staying out of
/// its range otherwise.
fn prepare_last_hit(obs: &Observation, lane: Lane) -> Option<Action> {
    let dmg_of = |c: &CreepView| obs.my_damage_vs(c.armor);
    let c = enemy_creeps(obs)
        .filter(|c| c.lane == Some(lane) && c.pos.dist(obs.me.pos) <= 14.0 && c.hp <= 2.5 * dmg_of(c))
        .min_by(|a, b| (a.hp, a.id).partial_cmp(&(b.hp, b.id)).unwrap())?;
    if under_enemy_turret(obs, c.pos, 0.0) && !own_creeps(obs).any(|o| o.pos.dist(c.pos) < 6.0) {
        return None;
    }
    if in_range(obs, c.pos) {
        return Some(Action::Idle);
    }
    Some(Action::Move(clamp(obs, c.pos)))
}

fn free_slot(obs: &Observation) -> bool {
    obs.me.items.iter().any(Option::is_none)
}

fn owned(obs: &Observation, item: u16) -> bool {
    obs.me.items.contains(&Some(item))
}

/// Next item wanted and whether a slot must be freed for it.
fn next_purchase(obs: &Observation) -> Option<(u16, bool)> {
    if let Some(&i) = BUILD.iter().find(|&&i| !owned(obs, i)) {
        if free_slot(obs) {
            return Some((i, false));
        }
    }
    let up = UPGRADES.iter().find(|&&i| !owned(obs, i))?;
    Some((*up, !free_slot(obs)))
}

/// Shopping step while standing in the base.
fn shop(obs: &Observation) -> Option<Action> {
    if !in_base(obs) {
        return None;
    }
    let (item, need_slot) = next_purchase(obs)?;
    let cost = obs.rules.item(item)?.cost;
    if need_slot {
        let (slot, sell_id) = obs
            .me
            .items
            .iter()
            .enumerate()
            .filter_map(|(s, i)| i.map(|i| (s, i)))
            .filter(|(_, i)| !UPGRADES.contains(i))
            .min_by_key(|(s, i)| (obs.rules.item(*i).map_or(0, |d| d.cost), *s))?;
        let refund = crate::economy::sell_value(&obs.rules, obs.rules.item(sell_id)?.cost);
        if obs.me.wallet.gold + refund >= cost {
            return Some(Action::Sell(slot));
        }
        return None;
    }
    (obs.me.wallet.gold >= cost).then_some(Action::Buy(item))
}

fn wants_to_shop(obs: &Observation) -> bool {
    match next_purchase(obs) {
        Some((item, need_slot)) => {
            let cost = obs.rules.item(item).map_or(u64::MAX, |d| d.cost);
            !need_slot && obs.me.wallet.gold >= cost + 300 || need_slot && obs.me.wallet.gold >= cost
        }
        None => false,
    }
}

/// Retreat/heal/shop cycle shared by every bot. Returns an action while the
/// hero is recovering.
#[derive(Debug, Clone, Default)]
struct Sustain {
    retreating: bool,
}

impl Sustain {
    fn step(&mut self, obs: &Observation, low: f64) -> Option<Action> {
        let hp = obs.me.hp_fraction();
        if !self.retreating && (hp < low || wants_to_shop(obs) && living_enemies(obs).count() == 0) {
            self.retreating = true;
        }
        if !self.retreating {
            return None;
        }
        if in_base(obs) {
            if let Some(a) = shop(obs) {
                return Some(a);
            }
            if hp < 0.95 || obs.me.mana < 0.8 * obs.me.stats.max_mana {
                return Some(Action::Move(fountain(obs)));
            }
            self.retreating = false;
            return None;
        }
        let threatened = living_enemies(obs).any(|e| e.pos.dist(obs.me.pos) < 14.0);
        if !threatened && !under_enemy_turret(obs, obs.me.pos, 2.0) {
            return Some(Action::Recall);
        }
        Some(Action::Move(fountain(obs)))
    }
}

fn ability_ready(obs: &Observation, slot: usize) -> bool {
    let ab = &obs.me.abilities[slot];
    obs.tick + 1 >= obs.me.ability_ready[slot] && obs.me.mana >= ab.mana_cost
}

/// Best ability use against an enemy hero (or a self-heal).
fn use_ability(obs: &Observation, target: Option<&HeroView>) -> Option<Action> {
    for slot in 0..obs.me.abilities.len() {
        if !ability_ready(obs, slot) {
            continue;
        }
        let ab = obs.me.abilities[slot];
        match ab.kind {
            AbilityKind::Heal => {
                let hurt = std::iter::once((obs.me.id, obs.me.hp_fraction(), obs.me.pos))
                    .chain(obs.allies.iter().filter(|a| a.alive).map(|a| (a.id, a.hp_fraction(), a.pos)))
                    .filter(|(_, f, p)| *f < 0.5 && p.dist(obs.me.pos) <= ab.range)
                    .min_by(|a, b| (a.1, a.0).partial_cmp(&(b.1, b.0)).unwrap());
                if let Some((id, _, _)) = hurt {
                    return Some(Action::Cast { slot, target: CastTarget::Unit(id) });
                }
            }
            AbilityKind::Nuke | AbilityKind::Stun | AbilityKind::Aoe => {
                if let Some(t) = target {
                    if t.alive && t.pos.dist(obs.me.pos) <= ab.range {
                        return Some(Action::Cast { slot, target: CastTarget::Unit(t.id) });
                    }
                }
            }
            AbilityKind::Dash => {}
        }
    }
    None
}

fn fight(obs: &Observation, target: &HeroView) -> Action {
    use_ability(obs, Some(target)).unwrap_or(Action::AttackUnit(target.id))
}

fn move_to(obs: &Observation, p: Vec2) -> Action {
    if obs.me.pos.dist(p) < 1e-9 {
        Action::Idle
    } else {
        Action::Move(clamp(obs, p))
    }
}

/// Does nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdleBot;

impl Agent for IdleBot {
    fn name(&self) -> &'static str {
        "idle"
    }

    fn act(&mut self, _obs: &Observation) -> Action {
        Action::Idle
    }
}

/// Farms its role's lane: last hits first, denies second, trades only when
/// ahead and not under an enemy turret.
#[derive(Debug, Clone)]
pub struct LanerBot {
    lane: Lane,
    sustain: Sustain,
    /// Never attacks heroes when false.
    pub harass: bool,
}

impl LanerBot {
    pub fn new(init: AgentInit) -> Self {
        Self { lane: init.role.lane().unwrap_or(Lane::Mid), sustain: Sustain::default(), harass: true }
    }

    pub fn in_lane(lane: Lane) -> Self {
        Self { lane, sustain: Sustain::default(), harass: true }
    }
}

impl Agent for LanerBot {
    fn name(&self) -> &'static str {
        "laner"
    }

    fn act(&mut self, obs: &Observation) -> Action {
        if let Some(a) = self.sustain.step(obs, 0.3) {
            return a;
        }
        let near: Vec<&HeroView> = living_enemies(obs).filter(|e| e.pos.dist(obs.me.pos) < 12.0).collect();
        if near.len() >= 2 {
            return move_to(obs, lane_anchor(obs, self.lane, 10.0));
        }
        if let Some(a) = last_hit(obs) {
            return a;
        }
        if let Some(a) = deny(obs) {
            return a;
        }
        if self.harass {
            if let Some(e) = near.first() {
                if obs.me.hp_fraction() > e.hp_fraction() + 0.1
                    && !under_enemy_turret(obs, e.pos, 1.0)
                    && e.pos.dist(obs.me.pos) <= obs.me.stats.attack_range + 1.0
                {
                    return fight(obs, e);
                }
            }
        }
        if exposed_to_creeps(obs) {
            return back_off(obs, self.lane);
        }
        if let Some(a) = prepare_last_hit(obs, self.lane) {
            return a;
        }
        let anchor = lane_anchor(obs, self.lane, 2.0);
        if under_enemy_turret(obs, anchor, 1.0) && !own_creeps(obs).any(|c| under_enemy_turret(obs, c.pos, -1.0)) {
            return move_to(obs, lane_anchor(obs, self.lane, 12.0));
        }
        move_to(obs, anchor)
    }
}

/// Perfect last-hitter: attacks whenever some enemy creep is killable by its
/// next attack, otherwise shadows the lowest-hp enemy creep.
#[derive(Debug, Clone)]
pub struct LastHitOracle {
    lane: Lane,
}

impl LastHitOracle {
    pub fn new(init: AgentInit) -> Self {
        Self { lane: init.role.lane().unwrap_or(Lane::Mid) }
    }
}

impl Agent for LastHitOracle {
    fn name(&self) -> &'static str {
        "lasthit-oracle"
    }

    fn act(&mut self, obs: &Observation) -> Action {
        if let Some(a) = last_hit(obs) {
            return a;
        }
        if exposed_to_creeps(obs) {
            return back_off(obs, self.lane);
        }
        let target = enemy_creeps(obs)
            .filter(|c| c.lane == Some(self.lane) && c.pos.dist(obs.me.pos) <= 20.0)
            .min_by(|a, b| (a.hp, a.id).partial_cmp(&(b.hp, b.id)).unwrap());
        match target {
            Some(c) if in_range(obs, c.pos) => Action::Idle,
            Some(c) => {
                // stop just inside attack range
                let d = obs.me.pos.dist(c.pos);
                let keep = (obs.me.stats.attack_range * 0.9).max(0.1);
                let p = obs.me.pos + (c.pos - obs.me.pos) * ((d - keep) / d);
                move_to(obs, p)
            }
            None => move_to(obs, lane_anchor(obs, self.lane, 1.0)),
        }
    }
}

/// Clears its own side's camps in a fixed route, ganking weak enemies it meets.
#[derive(Debug, Clone)]
pub struct JunglerBot {
    team: Team,
    camp: usize,
    /// Earliest tick each camp may be alive again, as far as this bot knows.
    known_respawn: Vec<u64>,
    sustain: Sustain,
    gank: bool,
}

impl JunglerBot {
    pub fn new(init: AgentInit) -> Self {
        Self { team: init.team, camp: 0, known_respawn: Vec::new(), sustain: Sustain::default(), gank: true }
    }

    fn route(obs: &Observation) -> Vec<Vec2> {
        let n = obs.rules.jungle.camps.len();
        // small camps first
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (obs.rules.jungle.camps[i].buff.is_some(), i));
        order.iter().map(|&i| obs.map.for_team(obs.team(), obs.rules.jungle.camps[i].position)).collect()
    }
}

impl Agent for JunglerBot {
    fn name(&self) -> &'static str {
        "jungler"
    }

    fn act(&mut self, obs: &Observation) -> Action {
        debug_assert_eq!(self.team, obs.team());
        if let Some(a) = self.sustain.step(obs, 0.35) {
            return a;
        }
        let route = Self::route(obs);
        if route.is_empty() {
            return move_to(obs, lane_anchor(obs, Lane::Mid, 2.0));
        }
        if self.known_respawn.len() != route.len() {
            self.known_respawn = vec![0; route.len()];
        }
        if self.gank && obs.seconds() >= STRATEGY_START_S {
            if let Some(e) = living_enemies(obs)
                .filter(|e| e.hp_fraction() < 0.5 && e.pos.dist(obs.me.pos) < 20.0 && !under_enemy_turret(obs, e.pos, 0.0))
                .min_by_key(|e| e.id)
            {
                return fight(obs, e);
            }
        }
        // camp selection
        let now = obs.tick;
        if self.known_respawn[self.camp] > now {
            let next = (0..route.len()).map(|k| (self.camp + k) % route.len()).find(|&c| self.known_respawn[c] <= now);
            self.camp = next.unwrap_or_else(|| {
                (0..route.len()).min_by_key(|&c| (self.known_respawn[c], c)).unwrap_or(0)
            });
        }
        let spot = route[self.camp];
        let neutrals: Vec<&CreepView> =
            obs.creeps.iter().filter(|c| c.owner.is_none() && c.pos.dist(spot) <= 8.0).collect();
        if let Some(c) = neutrals.iter().min_by(|a, b| (a.hp, a.id).partial_cmp(&(b.hp, b.id)).unwrap()) {
            return Action::AttackUnit(c.id);
        }
        if obs.me.pos.dist(spot) <= 2.0 {
            let secs = obs.rules.jungle.respawn_s;
            self.known_respawn[self.camp] = now + (secs * f64::from(obs.tick_rate)) as u64;
            return Action::Idle;
        }
        move_to(obs, spot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Strategy {
    TeamPush,
    TeamFight,
    SplitPush,
    Siege,
    Pickoff,
}

/// Lanes (or jungles) for the first minutes, then plays one team strategy.
#[derive(Debug, Clone)]
pub struct StrategyBot {
    strategy: Strategy,
    role: Role,
    laner: LanerBot,
    jungler: JunglerBot,
    sustain: Sustain,
    /// Seconds of game time at which the strategy starts.
    pub start_s: f64,
    /// Go back to base when low.
    pub retreat: bool,
}

pub type PusherBot = StrategyBot;
pub type TeamFightBot = StrategyBot;
pub type SplitPushBot = StrategyBot;
pub type SiegeBot = StrategyBot;
pub type PickoffBot = StrategyBot;

const SIEGE_ORDER: [Lane; 3] = [Lane::Top, Lane::Mid, Lane::Bot];

impl StrategyBot {
    pub fn new(init: AgentInit, strategy: Strategy) -> Self {
        let mut laner = LanerBot::new(init);
        let mut jungler = JunglerBot::new(init);
        if strategy == Strategy::Pickoff {
            // only the hunting pair may damage heroes
            laner.harass = false;
            jungler.gank = false;
        }
        let start_s = if init.arena { 0.0 } else { STRATEGY_START_S };
        Self { strategy, role: init.role, laner, jungler, sustain: Sustain::default(), start_s, retreat: !init.arena }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    fn lane_phase(&mut self, obs: &Observation) -> Action {
        if self.role == Role::Jungler {
            self.jungler.act(obs)
        } else {
            self.laner.act(obs)
        }
    }

    /// Allies taking part in the group (living heroes, plus me).
    fn group<'a>(&self, obs: &'a Observation, members: impl Fn(&HeroView) -> bool) -> Vec<Vec2> {
        let mut v: Vec<Vec2> = obs.allies.iter().filter(|a| a.alive && members(a)).map(|a| a.pos).collect();
        v.push(obs.me.pos);
        v
    }

    fn centroid(points: &[Vec2]) -> Vec2 {
        let n = points.len().max(1) as f64;
        let s = points.iter().fold(Vec2::default(), |acc, p| acc + *p);
        s * (1.0 / n)
    }

    /// Engage visible enemies near the group using the team vote.
    fn group_fight(&self, obs: &Observation, voters: &[Vec2], radius: f64) -> Option<Action> {
        let c = Self::centroid(voters);
        let near: Vec<HeroView> = living_enemies(obs).filter(|e| e.pos.dist(c) <= radius).cloned().collect();
        let id = vote_target(voters, &near, &obs.rules)?;
        let t = near.iter().find(|e| e.id == id)?;
        Some(fight(obs, t))
    }

    fn push_structure(&self, obs: &Observation, target: StructureId, voters: &[Vec2]) -> Action {
        let Some(s) = obs.structure(target) else { return Action::Idle };
        let c = Self::centroid(voters);
        // regroup before committing
        if obs.me.pos.dist(c) > 10.0 && obs.me.pos.dist(s.position) > c.dist(s.position) - 2.0 && voters.len() > 1 {
            return move_to(obs, c);
        }
        if Self::covered(obs, s, voters) && s.attackable && obs.me.hp_fraction() > 0.35 {
            return Action::AttackStructure(target);
        }
        // wait just outside turret range
        let r = s.range.unwrap_or(0.0) + 2.0;
        let d = obs.me.pos.dist(s.position);
        if d < r {
            let away = obs.me.pos + (obs.me.pos - s.position) * ((r - d) / d.max(1e-6));
            return move_to(obs, away);
        }
        let approach = s.position + (obs.me.pos - s.position) * (r / d.max(1e-6));
        move_to(obs, approach)
    }

    /// The heroes out on the map are, on average, too hurt to keep pushing.
    fn group_worn(obs: &Observation) -> bool {
        let team = obs.team();
        let out: Vec<f64> = obs
            .allies
            .iter()
            .filter(|a| a.alive && !obs.map.in_base(a.pos, team))
            .map(|a| a.hp_fraction())
            .chain(std::iter::once(obs.me.hp_fraction()))
            .collect();
        out.iter().sum::<f64>() / (out.len() as f64) < 0.45
    }

    /// Some ally at home is still healing up.
    fn allies_healing(obs: &Observation) -> bool {
        let team = obs.team();
        obs.allies.iter().any(|a| a.alive && obs.map.in_base(a.pos, team) && a.hp_fraction() < 0.9)
    }

    /// Safe to hit: no turret, allied creeps tanking it, or three of us there.
    fn covered(obs: &Observation, s: &StructureView, voters: &[Vec2]) -> bool {
        s.range.is_none()
            || own_creeps(obs).any(|cr| cr.pos.dist(s.position) <= s.range.unwrap_or(0.0))
            || voters.iter().filter(|p| p.dist(s.position) <= 14.0).count() >= 3
    }

    fn next_push_target(obs: &Observation, lane: Lane) -> Option<StructureId> {
        let enemy = enemy_team(obs);
        let k = obs.rules.structures.turrets_per_lane as u8;
        let mut order: Vec<StructureId> = (1..=k).map(|t| StructureId::lane(enemy, lane, t)).collect();
        order.extend([StructureId::base(enemy, 0), StructureId::base(enemy, 1), StructureId::main(enemy)]);
        order
            .into_iter()
            .find(|id| obs.structure(*id).is_some_and(|s| s.attackable))
            .or_else(|| Self::nearest_attackable(obs))
    }

    fn nearest_attackable(obs: &Observation) -> Option<StructureId> {
        let enemy = enemy_team(obs);
        obs.structures
            .iter()
            .filter(|s| s.id.team == enemy && s.attackable)
            .min_by(|a, b| {
                let da = a.position.dist(obs.me.pos);
                let db = b.position.dist(obs.me.pos);
                (da, a.id).partial_cmp(&(db, b.id)).unwrap()
            })
            .map(|s| s.id)
    }

    fn siege_target(obs: &Observation) -> Option<StructureId> {
        let enemy = enemy_team(obs);
        let k = obs.rules.structures.turrets_per_lane as u8;
        for tier in 1..=k {
            for lane in SIEGE_ORDER {
                let id = StructureId::lane(enemy, lane, tier);
                if obs.structure(id).is_some_and(|s| s.attackable) {
                    return Some(id);
                }
            }
        }
        Self::nearest_attackable(obs)
    }

    fn team_push(&mut self, obs: &Observation) -> Action {
        let voters = self.group(obs, |_| true);
        if let Some(a) = self.group_fight(obs, &voters, obs.me.stats.attack_range + 3.0) {
            return a;
        }
        match Self::next_push_target(obs, Lane::Mid) {
            Some(t) => self.push_structure(obs, t, &voters),
            None => Action::Idle,
        }
    }

    fn siege(&mut self, obs: &Observation) -> Action {
        let voters = self.group(obs, |_| true);
        let c = Self::centroid(&voters);
        let threats = living_enemies(obs).filter(|e| e.pos.dist(c) < 10.0).count();
        if threats >= 2 {
            return move_to(obs, lane_anchor(obs, Lane::Mid, 20.0));
        }
        match Self::siege_target(obs) {
            Some(t) => self.push_structure(obs, t, &voters),
            None => Action::Idle,
        }
    }

    fn team_fight(&mut self, obs: &Observation) -> Action {
        let voters = self.group(obs, |_| true);
        let c = Self::centroid(&voters);
        if obs.me.pos.dist(c) > 12.0 && voters.len() > 1 {
            if let Some(a) = self.group_fight(obs, &voters, 6.0) {
                return a;
            }
            return move_to(obs, c);
        }
        if let Some(a) = self.group_fight(obs, &voters, 25.0) {
            return a;
        }
        // hunt: most recently seen enemy, else the enemy side of mid
        let target = obs
            .last_seen
            .iter()
            .max_by_key(|(id, ls)| (ls.tick, std::cmp::Reverse(*id)))
            .map(|(_, ls)| ls.pos)
            .filter(|p| !under_enemy_turret(obs, *p, 0.0))
            .unwrap_or_else(|| obs.map.lane(Lane::Mid).point_from(obs.team(), obs.map.lane(Lane::Mid).length() * 0.45));
        let dest = if voters.len() > 1 { c + (target - c) * (2.0 / target.dist(c).max(2.0)) } else { target };
        if under_enemy_turret(obs, dest, 1.0) {
            return move_to(obs, lane_anchor(obs, Lane::Mid, 4.0));
        }
        move_to(obs, dest)
    }

    fn split_push(&mut self, obs: &Observation) -> Action {
        if self.role == Role::TopLaner {
            // lone pusher in top lane
            if let Some(e) = living_enemies(obs).find(|e| e.pos.dist(obs.me.pos) < 10.0) {
                if obs.me.hp_fraction() < e.hp_fraction() {
                    return move_to(obs, lane_anchor(obs, Lane::Top, 15.0));
                }
            }
            let Some(t) = Self::next_push_target(obs, Lane::Top) else { return Action::Idle };
            let Some(s) = obs.structure(t) else { return Action::Idle };
            if lane_progress(obs, Lane::Top, s.position, obs.team()) < obs.map.lane(Lane::Top).length() * 0.5
                && t.lane_of() != Some(Lane::Top)
            {
                return move_to(obs, lane_anchor(obs, Lane::Top, 2.0));
            }
            if Self::covered(obs, s, &[obs.me.pos]) {
                return self.push_structure(obs, t, &[obs.me.pos]);
            }
            // no cover yet: clear the enemy wave so ours reaches the turret
            if let Some(a) = last_hit(obs) {
                return a;
            }
            let wave = enemy_creeps(obs)
                .filter(|c| c.lane == Some(Lane::Top) && !under_enemy_turret(obs, c.pos, 0.5))
                .min_by(|a, b| (a.pos.dist(obs.me.pos), a.id).partial_cmp(&(b.pos.dist(obs.me.pos), b.id)).unwrap());
            if let Some(c) = wave {
                return if in_range(obs, c.pos) { Action::AttackUnit(c.id) } else { move_to(obs, c.pos) };
            }
            return self.push_structure(obs, t, &[obs.me.pos]);
        }
        // the other four hold mid together
        let voters = self.group(obs, |a| a.id != top_laner_id(obs));
        let c = Self::centroid(&voters);
        if let Some(a) = self.group_fight(obs, &voters, 12.0) {
            return a;
        }
        if let Some(a) = last_hit(obs) {
            return a;
        }
        if obs.me.pos.dist(c) > 6.0 && voters.len() > 1 {
            return move_to(obs, c);
        }
        let anchor = lane_anchor(obs, Lane::Mid, 3.0);
        if under_enemy_turret(obs, anchor, 2.0) {
            return move_to(obs, lane_anchor(obs, Lane::Mid, 14.0));
        }
        move_to(obs, anchor)
    }

    fn pickoff(&mut self, obs: &Observation) -> Action {
        let hunter = matches!(self.role, Role::Jungler | Role::Support);
        if !hunter {
            // farm without touching heroes
            return self.laner.act(obs);
        }
        let pair = self.group(obs, |a| pair_member(obs, a.id));
        let c = Self::centroid(&pair);
        let isolated = |e: &HeroView| living_enemies(obs).filter(|o| o.id != e.id).all(|o| o.pos.dist(e.pos) > 15.0);
        let prey = living_enemies(obs)
            .filter(|e| isolated(e) && !under_enemy_turret(obs, e.pos, 0.0) && e.pos.dist(c) < 75.0)
            .min_by(|a, b| (a.hp_fraction(), a.id).partial_cmp(&(b.hp_fraction(), b.id)).unwrap())
            .cloned();
        if let Some(p) = prey {
            let d = p.pos.dist(obs.me.pos);
            if d > obs.me.stats.attack_range + 2.0 {
                // cut off the way home
                let home = obs.map.fountain(enemy_team(obs));
                let flank = p.pos + (home - p.pos) * (4.0 / home.dist(p.pos).max(4.0));
                if !under_enemy_turret(obs, flank, 0.0) {
                    return use_ability(obs, Some(&p)).unwrap_or_else(|| move_to(obs, flank));
                }
            }
            return fight(obs, &p);
        }
        if living_enemies(obs).any(|e| e.pos.dist(c) < 12.0) {
            return move_to(obs, obs.map.for_team(obs.team(), Vec2::new(45.0, 45.0)));
        }
        if obs.me.pos.dist(c) > 5.0 && pair.len() > 1 {
            return move_to(obs, c);
        }
        // patrol between lanes through the jungle
        let waypoints = [Vec2::new(40.0, 100.0), Vec2::new(75.0, 75.0), Vec2::new(100.0, 40.0)];
        let phase = ((obs.tick / (obs.tick_rate as u64 * 20)) % 4) as usize;
        let wp = waypoints[[0, 1, 2, 1][phase]];
        move_to(obs, wp)
    }
}

fn top_laner_id(obs: &Observation) -> UnitId {
    // the lowest-id hero in the team whose role is TopLaner is not known from
    // views; split pushers agree on the hero furthest up the top lane instead
    let team = obs.team();
    let mut all: Vec<(UnitId, Vec2)> = obs.allies.iter().filter(|a| a.alive).map(|a| (a.id, a.pos)).collect();
    all.push((obs.me.id, obs.me.pos));
    let top = obs.map.lane(Lane::Top);
    all.iter()
        .min_by(|a, b| {
            let ka = (top.distance(a.1) - lane_progress(obs, Lane::Top, a.1, team) * 0.01, a.0);
            let kb = (top.distance(b.1) - lane_progress(obs, Lane::Top, b.1, team) * 0.01, b.0);
            ka.partial_cmp(&kb).unwrap()
        })
        .map(|a| a.0)
        .unwrap_or(obs.me.id)
}

fn pair_member(obs: &Observation, id: UnitId) -> bool {
    // hunters are the two allies closest to the jungle centre line
    let team = obs.team();
    let mut all: Vec<(UnitId, Vec2)> = obs.allies.iter().filter(|a| a.alive).map(|a| (a.id, a.pos)).collect();
    all.push((obs.me.id, obs.me.pos));
    let _ = team;
    let lanes_dist = |p: Vec2| Lane::ALL.iter().map(|l| obs.map.lane(*l).distance(p)).fold(f64::INFINITY, f64::min);
    all.sort_by(|a, b| (-lanes_dist(a.1), a.0).partial_cmp(&(-lanes_dist(b.1), b.0)).unwrap());
    all.iter().take(2).any(|(x, _)| *x == id)
}

impl Agent for StrategyBot {
    fn name(&self) -> &'static str {
        match self.strategy {
            Strategy::TeamPush => "pusher",
            Strategy::TeamFight => "teamfight",
            Strategy::SplitPush => "splitpush",
            Strategy::Siege => "siege",
            Strategy::Pickoff => "pickoff",
        }
    }

    fn act(&mut self, obs: &Observation) -> Action {
        if obs.seconds() < self.start_s {
            return self.lane_phase(obs);
        }
        let together = matches!(self.strategy, Strategy::TeamPush | Strategy::Siege);
        if self.retreat {
            if together && Self::group_worn(obs) {
                self.sustain.retreating = true;
            }
            if let Some(a) = self.sustain.step(obs, 0.25) {
                return a;
            }
            if together && in_base(obs) && Self::allies_healing(obs) {
                return move_to(obs, fountain(obs));
            }
        }
        match self.strategy {
            Strategy::TeamPush => self.team_push(obs),
            Strategy::TeamFight => self.team_fight(obs),
            Strategy::SplitPush => self.split_push(obs),
            Strategy::Siege => self.siege(obs),
            Strategy::Pickoff => self.pickoff(obs),
        }
    }
}
