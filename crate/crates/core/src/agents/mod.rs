//! Agent contract: fog-filtered observations, the action vocabulary, role
//! allocation, team target voting and the scripted baseline bots.

mod bots;

pub use bots::{
    IdleBot, JunglerBot, LanerBot, LastHitOracle, PickoffBot, PusherBot, SiegeBot, SplitPushBot, Strategy,
    StrategyBot, TeamFightBot,
};

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combat::{mitigate, Stats};
use crate::config::{Ruleset, VoteWeights};
use crate::economy::CreepKind;
use crate::mapgraph::{MapGeometry, StructureId};
use crate::types::{Lane, Team, UnitId, Vec2};
use crate::world::{HeroState, LastSeen, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CastTarget {
    Unit(UnitId),
    Point(Vec2),
}

/// One command per hero per tick.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Move(Vec2),
    AttackUnit(UnitId),
    AttackStructure(StructureId),
    Cast { slot: usize, target: CastTarget },
    Buy(u16),
    Sell(usize),
    Recall,
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    TopLaner,
    MidLaner,
    Carry,
    Support,
    Jungler,
}

impl Role {
    pub const ALL: [Role; 5] = [Role::TopLaner, Role::MidLaner, Role::Carry, Role::Support, Role::Jungler];

    pub fn lane(self) -> Option<Lane> {
        match self {
            Role::TopLaner => Some(Lane::Top),
            Role::MidLaner => Some(Lane::Mid),
            Role::Carry | Role::Support => Some(Lane::Bot),
            Role::Jungler => None,
        }
    }

    /// The laning role that plays `lane`.
    pub fn for_lane(lane: Lane) -> Role {
        match lane {
            Lane::Top => Role::TopLaner,
            Lane::Mid => Role::MidLaner,
            Lane::Bot => Role::Carry,
        }
    }
}

/// Public view of a hero.
#[derive(Debug, Clone, PartialEq)]
pub struct HeroView {
    pub id: UnitId,
    pub team: Team,
    pub level: u32,
    pub hp: f64,
    pub max_hp: f64,
    pub pos: Vec2,
    pub stats: Stats,
    pub stunned: bool,
    pub alive: bool,
}

impl HeroView {
    fn of(h: &HeroState, tick: u64) -> Self {
        Self {
            id: h.id,
            team: h.team,
            level: h.level,
            hp: h.hp,
            max_hp: h.stats.max_hp,
            pos: h.pos,
            stats: h.stats,
            stunned: h.is_stunned(tick + 1),
            alive: h.is_alive(),
        }
    }

    pub fn hp_fraction(&self) -> f64 {
        if self.max_hp > 0.0 {
            self.hp / self.max_hp
        } else {
            0.0
        }
    }

    /// Expected physical damage per second, crits included.
    pub fn dps(&self, crit_multiplier: f64) -> f64 {
        let s = &self.stats;
        s.attack_damage * s.attack_speed * (1.0 + s.crit_chance * (crit_multiplier - 1.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CreepView {
    pub id: UnitId,
    pub owner: Option<Team>,
    pub lane: Option<Lane>,
    pub kind: CreepKind,
    pub hp: f64,
    pub max_hp: f64,
    pub armor: f64,
    pub pos: Vec2,
    pub camp: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructureView {
    pub id: StructureId,
    pub hp: f64,
    pub max_hp: f64,
    pub position: Vec2,
    pub destroyed: bool,
    pub attackable: bool,
    /// Attack range, if the structure shoots.
    pub range: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TeamSummary {
    pub kills: u32,
    pub structures_alive: usize,
}

#[derive(Debug, Clone)]
pub struct Observation {
    pub tick: u64,
    pub tick_rate: u32,
    pub deny_mode: bool,
    /// Own hero, full state.
    pub me: HeroState,
    pub allies: Vec<HeroView>,
    /// Enemy heroes inside allied vision.
    pub enemies: Vec<HeroView>,
    /// Allied lane creeps, plus enemy and neutral creeps inside allied vision.
    pub creeps: Vec<CreepView>,
    pub structures: Vec<StructureView>,
    /// Hidden enemy heroes' last known positions.
    pub last_seen: Vec<(UnitId, LastSeen)>,
    pub own_gold: u64,
    pub teams: [TeamSummary; 2],
    pub map: Arc<MapGeometry>,
    pub rules: Arc<Ruleset>,
}

impl Observation {
    pub fn team(&self) -> Team {
        self.me.team
    }

    pub fn seconds(&self) -> f64 {
        self.tick as f64 / f64::from(self.tick_rate)
    }

    pub fn structure(&self, id: StructureId) -> Option<&StructureView> {
        self.structures.iter().find(|s| s.id == id)
    }

    /// Damage my next basic attack deals to a creep (no crit).
    pub fn my_damage_vs(&self, armor: f64) -> f64 {
        mitigate(self.me.stats.attack_damage, armor)
    }

    pub fn attack_ready(&self) -> bool {
        self.tick + 1 >= self.me.next_attack_tick
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AgentError {
    #[error("unknown hero {0}")]
    UnknownHero(UnitId),
    #[error("suitability matrix must be 5x5")]
    BadMatrix,
    #[error("unknown agent {name:?}; registered agents: {known}")]
    UnknownAgent { name: String, known: String },
}

/// Builds the fog-filtered view for one hero.
pub fn observe(world: &WorldState, hero: UnitId) -> Result<Observation, AgentError> {
    let me = world.hero(hero).ok_or(AgentError::UnknownHero(hero))?;
    let team = me.team;
    let tick = world.tick;
    let allies = world.heroes.iter().filter(|h| h.team == team && h.id != hero).map(|h| HeroView::of(h, tick)).collect();
    let enemies = world
        .heroes
        .iter()
        .filter(|h| h.team != team && h.is_alive() && world.sees(team, h.id))
        .map(|h| HeroView::of(h, tick))
        .collect();
    let creeps = world
        .creeps
        .iter()
        .filter(|c| c.owner == Some(team) || world.sees(team, c.id))
        .map(|c| CreepView {
            id: c.id,
            owner: c.owner,
            lane: c.lane,
            kind: c.kind,
            hp: c.hp,
            max_hp: c.max_hp,
            armor: c.armor,
            pos: c.pos,
            camp: c.camp,
        })
        .collect();
    let structures = world
        .structures
        .nodes
        .iter()
        .map(|n| StructureView {
            id: n.id,
            hp: n.hp,
            max_hp: n.max_hp,
            position: n.position,
            destroyed: n.is_destroyed(),
            attackable: !n.is_destroyed() && world.structures.is_attackable(n.id).unwrap_or(false),
            range: n.attack.map(|a| a.range),
        })
        .collect();
    let last_seen = world.last_seen[team.index()]
        .iter()
        .enumerate()
        .filter_map(|(i, ls)| {
            let id = UnitId(i as u32);
            let h = world.hero(id)?;
            if h.team == team || (h.is_alive() && world.sees(team, id)) {
                return None;
            }
            ls.map(|l| (id, l))
        })
        .collect();
    let mut teams = [TeamSummary::default(); 2];
    for t in Team::BOTH {
        teams[t.index()] = TeamSummary {
            kills: world.team_heroes(t).map(|h| h.counters.kills).sum(),
            structures_alive: world.structures.alive_count(t),
        };
    }
    Ok(Observation {
        tick,
        tick_rate: world.config.tick_rate,
        deny_mode: world.config.deny_mode,
        me: me.clone(),
        allies,
        enemies,
        creeps,
        structures,
        last_seen,
        own_gold: world.team_heroes(team).map(|h| h.wallet.gold).sum(),
        teams,
        map: world.map.clone(),
        rules: world.rules.clone(),
    })
}

/// Optimal hero→role assignment. `suitability[h][r]` scores hero `h` in
/// `Role::ALL[r]`. Permutations are scanned in lexicographic order and only a
/// strictly better total replaces the incumbent, so ties go to the
/// lexicographically smallest assignment.
pub fn allocate_roles(suitability: &[Vec<f64>]) -> Result<[Role; 5], AgentError> {
    if suitability.len() != 5 || suitability.iter().any(|r| r.len() != 5) {
        return Err(AgentError::BadMatrix);
    }
    let mut perm = [0usize, 1, 2, 3, 4];
    let mut best = perm;
    let mut best_score = f64::NEG_INFINITY;
    loop {
        let score: f64 = (0..5).map(|h| suitability[h][perm[h]]).sum();
        if score > best_score {
            best_score = score;
            best = perm;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.map(|r| Role::ALL[r]))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Score one voter gives one enemy.
pub fn vote_score(voter: Vec2, enemy: &HeroView, rules: &Ruleset) -> f64 {
    let a = &rules.agents;
    let w: &VoteWeights = &a.vote;
    let low_hp = 1.0 - enemy.hp_fraction();
    let proximity = (1.0 - voter.dist(enemy.pos) / a.proximity_scale).max(0.0);
    let threat = (enemy.dps(rules.combat.crit_multiplier) / a.threat_scale).min(1.0);
    let disabled = if enemy.stunned { 1.0 } else { 0.0 };
    w.low_hp * low_hp + w.proximity * proximity + w.threat * threat + w.disabled * disabled
}

/// Plurality vote over visible enemies. Each voter backs its best-scoring
/// enemy; ties (per voter and in the tally) go to the lower hp fraction, then
/// the lower id.
pub fn vote_target(voters: &[Vec2], enemies: &[HeroView], rules: &Ruleset) -> Option<UnitId> {
    let living: Vec<&HeroView> = enemies.iter().filter(|e| e.alive).collect();
    if living.is_empty() {
        return None;
    }
    let better = |a: &HeroView, b: &HeroView| (a.hp_fraction(), a.id) < (b.hp_fraction(), b.id);
    let mut tally = vec![0usize; living.len()];
    for &v in voters {
        let mut best = 0;
        let mut best_score = f64::NEG_INFINITY;
        for (k, e) in living.iter().enumerate() {
            let s = vote_score(v, e, rules);
            if s > best_score || (s == best_score && better(e, living[best])) {
                best = k;
                best_score = s;
            }
        }
        tally[best] += 1;
    }
    let mut win = 0;
    for k in 1..living.len() {
        if tally[k] > tally[win] || (tally[k] == tally[win] && better(living[k], living[win])) {
            win = k;
        }
    }
    Some(living[win].id)
}

/// Vote using every living ally's observation.
pub fn vote_from_observations(observations: &[Observation]) -> Option<UnitId> {
    let first = observations.first()?;
    let voters: Vec<Vec2> = observations.iter().filter(|o| o.me.is_alive()).map(|o| o.me.pos).collect();
    let mut enemies: Vec<HeroView> = Vec::new();
    for o in observations {
        for e in &o.enemies {
            if !enemies.iter().any(|x| x.id == e.id) {
                enemies.push(e.clone());
            }
        }
    }
    enemies.sort_by_key(|e| e.id);
    vote_target(&voters, &enemies, &first.rules)
}

/// A policy mapping observations to actions. Implementations keep only
/// private state and never see the world directly.
pub trait Agent: Send {
    fn name(&self) -> &'static str;
    fn act(&mut self, obs: &Observation) -> Action;
}

#[derive(Debug, Clone, Copy)]
pub struct AgentInit {
    pub hero: UnitId,
    pub team: Team,
    pub role: Role,
    pub seed: u64,
    /// Fight-only setting: no laning, shopping or retreating.
    pub arena: bool,
}

pub const AGENT_NAMES: [&str; 9] =
    ["idle", "laner", "jungler", "pusher", "teamfight", "splitpush", "siege", "pickoff", "lasthit-oracle"];

pub fn create_agent(name: &str, init: AgentInit) -> Result<Box<dyn Agent>, AgentError> {
    Ok(match name {
        "idle" => Box::new(IdleBot),
        "laner" => Box::new(LanerBot::new(init)),
        "jungler" => Box::new(JunglerBot::new(init)),
        "pusher" => Box::new(StrategyBot::new(init, Strategy::TeamPush)),
        "teamfight" => Box::new(StrategyBot::new(init, Strategy::TeamFight)),
        "splitpush" => Box::new(StrategyBot::new(init, Strategy::SplitPush)),
        "siege" => Box::new(StrategyBot::new(init, Strategy::Siege)),
        "pickoff" => Box::new(StrategyBot::new(init, Strategy::Pickoff)),
        "lasthit-oracle" => Box::new(LastHitOracle::new(init)),
        _ => {
            return Err(AgentError::UnknownAgent { name: name.to_string(), known: AGENT_NAMES.join(", ") });
        }
    })
}

/// Roles for a team of hero templates, from the templates' suitability rows.
pub fn team_roles(rules: &Ruleset, templates: &[usize]) -> Vec<Role> {
    if templates.len() == 5 {
        let m: Vec<Vec<f64>> = templates.iter().map(|&t| rules.heroes[t].roles.to_vec()).collect();
        if let Ok(r) = allocate_roles(&m) {
            return r.to_vec();
        }
    }
    templates.iter().enumerate().map(|(i, _)| Role::ALL[i % 5]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::MatchConfig;

    fn view(id: u32, hp: f64, pos: Vec2) -> HeroView {
        HeroView {
            id: UnitId(id),
            team: Team::Red,
            level: 1,
            hp,
            max_hp: 100.0,
            pos,
            stats: Stats { attack_damage: 50.0, attack_speed: 1.0, max_hp: 100.0, ..Stats::default() },
            stunned: false,
            alive: true,
        }
    }

    #[test]
    fn identity_dominant_matrix() {
        let m: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        assert_eq!(allocate_roles(&m).unwrap(), Role::ALL);
    }

    #[test]
    fn uniform_matrix_breaks_ties_lexicographically() {
        let m = vec![vec![0.5; 5]; 5];
        assert_eq!(allocate_roles(&m).unwrap(), Role::ALL);
    }

    #[test]
    fn bad_shape_is_rejected() {
        assert_eq!(allocate_roles(&vec![vec![1.0; 5]; 4]), Err(AgentError::BadMatrix));
        assert_eq!(allocate_roles(&vec![vec![1.0; 4]; 5]), Err(AgentError::BadMatrix));
    }

    #[test]
    fn single_enemy_is_voted() {
        let r = Ruleset::default();
        let e = [view(7, 50.0, Vec2::new(10.0, 0.0))];
        assert_eq!(vote_target(&[Vec2::new(0.0, 0.0)], &e, &r), Some(UnitId(7)));
        assert_eq!(vote_target(&[Vec2::new(0.0, 0.0)], &[], &r), None);
    }

    #[test]
    fn low_hp_enemy_wins_vote() {
        let r = Ruleset::default();
        let e = [view(5, 90.0, Vec2::new(1.0, 0.0)), view(6, 5.0, Vec2::new(29.0, 0.0))];
        assert_eq!(vote_target(&[Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0)], &e, &r), Some(UnitId(6)));
    }

    #[test]
    fn fog_hides_far_enemies_and_shows_structures() {
        let mut cfg = MatchConfig { spawn_waves: false, jungle: false, ..MatchConfig::default() };
        cfg.rosters = [vec!["warden".into()], vec!["cleric".into()]];
        let mut w = WorldState::new(cfg, Arc::new(Ruleset::default())).unwrap();
        w.heroes[0].pos = Vec2::new(50.0, 100.0);
        w.heroes[1].pos = Vec2::new(80.0, 100.0);
        w.refresh_vision();
        let o = observe(&w, UnitId(0)).unwrap();
        assert!(o.enemies.is_empty());
        assert_eq!(o.structures.len(), 24);
        w.heroes[1].pos = Vec2::new(55.0, 100.0);
        w.refresh_vision();
        let o = observe(&w, UnitId(0)).unwrap();
        assert_eq!(o.enemies.len(), 1);
        w.heroes[1].pos = Vec2::new(90.0, 100.0);
        w.step(&[]);
        let o = observe(&w, UnitId(0)).unwrap();
        assert!(o.enemies.is_empty());
        assert_eq!(o.last_seen.len(), 1);
        assert_eq!(o.last_seen[0].1.pos, Vec2::new(55.0, 100.0));
        assert!(observe(&w, UnitId(9)).is_err());
    }

    proptest::proptest! {
        #[test]
        fn allocation_matches_brute_force(vals in proptest::collection::vec(0u8..10, 25)) {
            let m: Vec<Vec<f64>> = vals.chunks(5).map(|r| r.iter().map(|&v| f64::from(v)).collect()).collect();
            let got = allocate_roles(&m).unwrap();
            let got_score: f64 = got.iter().enumerate().map(|(h, r)| m[h][Role::ALL.iter().position(|x| x == r).unwrap()]).sum();
            let mut best = f64::NEG_INFINITY;
            let mut p = [0usize, 1, 2, 3, 4];
            loop {
                best = best.max((0..5).map(|h| m[h][p[h]]).sum());
                if !next_permutation(&mut p) { break; }
            }
            proptest::prop_assert_eq!(got_score, best);
        }

        #[test]
        fn vote_is_order_invariant(hps in proptest::collection::vec(1.0f64..100.0, 1..5), xs in proptest::collection::vec(0.0f64..40.0, 1..5)) {
            let r = Ruleset::default();
            let enemies: Vec<HeroView> = hps.iter().enumerate().map(|(i, &hp)| view(5 + i as u32, hp, Vec2::new(i as f64 * 7.0, 3.0))).collect();
            let voters: Vec<Vec2> = xs.iter().map(|&x| Vec2::new(x, 0.0)).collect();
            let mut rev = voters.clone();
            rev.reverse();
            proptest::prop_assert_eq!(vote_target(&voters, &enemies, &r), vote_target(&rev, &enemies, &r));
        }
    }
}
