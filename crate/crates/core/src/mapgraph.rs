//! Map geometry and the structure-dependency graph.
//!
//! The map is a square with bases in opposite corners (blue bottom-left,
//! red top-right) joined by three lanes. Everything not in a base or within
//! `lane_half_width` of a lane polyline is jungle.
//!
//! Each team owns `3 * turrets_per_lane + 3` structures: lane turrets ordered
//! outer (tier 1) to inner, two base turrets and the main structure.
//! Attackability rules:
//!
//! * tier 1 lane turret: always attackable;
//! * tier k lane turret: tier k-1 of the same lane destroyed;
//! * base turret: one full lane destroyed (or all lanes, per [`BaseUnlock`]);
//! * main structure: both base turrets destroyed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{BaseUnlock, ConfigError, Ruleset};
use crate::types::{Lane, Team, UnitId, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Lane(Lane),
    Jungle,
    Base(Team),
}

/// A lane polyline oriented from the blue base to the red base.
#[derive(Debug, Clone, PartialEq)]
pub struct LanePath {
    pub lane: Lane,
    pub points: Vec<Vec2>,
    cumulative: Vec<f64>,
}

impl LanePath {
    fn new(lane: Lane, points: Vec<Vec2>) -> Self {
        let mut cumulative = vec![0.0];
        for w in points.windows(2) {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + w[0].dist(w[1]));
        }
        Self { lane, points, cumulative }
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Point at arc length `s` measured from the blue end.
    pub fn point_at(&self, s: f64) -> Vec2 {
        let s = s.clamp(0.0, self.length());
        for i in 0..self.points.len() - 1 {
            let (a, b) = (self.cumulative[i], self.cumulative[i + 1]);
            if s <= b || i == self.points.len() - 2 {
                let seg = b - a;
                let t = if seg > 0.0 { (s - a) / seg } else { 0.0 };
                return self.points[i] + (self.points[i + 1] - self.points[i]) * t;
            }
        }
        *self.points.last().unwrap()
    }

    /// Point at arc length `s` measured from `team`'s own base.
    pub fn point_from(&self, team: Team, s: f64) -> Vec2 {
        match team {
            Team::Blue => self.point_at(s),
            Team::Red => self.point_at(self.length() - s),
        }
    }

    /// Closest distance from `p` to the polyline and the arc length (from blue) of the projection.
    pub fn project(&self, p: Vec2) -> (f64, f64) {
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..self.points.len() - 1 {
            let a = self.points[i];
            let d = self.points[i + 1] - a;
            let len2 = d.x * d.x + d.y * d.y;
            let t = if len2 > 0.0 {
                (((p.x - a.x) * d.x + (p.y - a.y) * d.y) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let q = a + d * t;
            let dist = p.dist(q);
            if dist < best.0 {
                best = (dist, self.cumulative[i] + t * len2.sqrt());
            }
        }
        best
    }

    pub fn distance(&self, p: Vec2) -> f64 {
        self.project(p).0
    }

    pub fn midpoint(&self) -> Vec2 {
        self.point_at(self.length() / 2.0)
    }
}

/// Static map layout.
#[derive(Debug, Clone, PartialEq)]
pub struct MapGeometry {
    pub width: f64,
    pub height: f64,
    pub base_size: f64,
    pub lane_half_width: f64,
    pub lanes: [LanePath; 3],
    pub fountains: [Vec2; 2],
    pub vision_radius: f64,
}

impl MapGeometry {
    /// Reflection across the anti-diagonal: swaps the bases and maps each lane onto itself.
    pub fn mirror(&self, p: Vec2) -> Vec2 {
        Vec2::new(self.width - p.y * self.width / self.height, self.height - p.x * self.height / self.width)
    }

    /// Blue-side coordinate translated to `team`'s side.
    pub fn for_team(&self, team: Team, blue_pos: Vec2) -> Vec2 {
        match team {
            Team::Blue => blue_pos,
            Team::Red => self.mirror(blue_pos),
        }
    }

    pub fn lane(&self, lane: Lane) -> &LanePath {
        &self.lanes[lane.index()]
    }

    pub fn fountain(&self, team: Team) -> Vec2 {
        self.fountains[team.index()]
    }

    pub fn in_bounds(&self, p: Vec2) -> bool {
        p.x >= 0.0 && p.y >= 0.0 && p.x <= self.width && p.y <= self.height
    }

    pub fn clamp(&self, p: Vec2) -> Vec2 {
        p.clamp_to(self.width, self.height)
    }

    pub fn in_base(&self, p: Vec2, team: Team) -> bool {
        match team {
            Team::Blue => p.x < self.base_size && p.y < self.base_size,
            Team::Red => p.x > self.width - self.base_size && p.y > self.height - self.base_size,
        }
    }

    /// The region containing `p`; bases take precedence, then the nearest lane.
    pub fn classify(&self, p: Vec2) -> Region {
        for team in Team::BOTH {
            if self.in_base(p, team) {
                return Region::Base(team);
            }
        }
        let mut best: Option<(f64, Lane)> = None;
        for path in &self.lanes {
            let d = path.distance(p);
            if d <= self.lane_half_width && best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, path.lane));
            }
        }
        match best {
            Some((_, lane)) => Region::Lane(lane),
            None => Region::Jungle,
        }
    }

    /// Lane whose polyline is closest to `p`, regardless of region.
    pub fn nearest_lane(&self, p: Vec2) -> Lane {
        let mut best = (f64::INFINITY, Lane::Mid);
        for path in &self.lanes {
            let d = path.distance(p);
            if d < best.0 {
                best = (d, path.lane);
            }
        }
        best.1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureSlot {
    /// Tier 1 is the outermost turret.
    Lane(Lane, u8),
    Base(u8),
    Main,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct StructureId {
    pub team: Team,
    pub slot: StructureSlot,
}

impl StructureId {
    pub fn lane(team: Team, lane: Lane, tier: u8) -> Self {
        Self { team, slot: StructureSlot::Lane(lane, tier) }
    }

    pub fn base(team: Team, which: u8) -> Self {
        Self { team, slot: StructureSlot::Base(which) }
    }

    pub fn main(team: Team) -> Self {
        Self { team, slot: StructureSlot::Main }
    }

    pub fn kind(&self) -> StructureKind {
        match self.slot {
            StructureSlot::Lane(..) => StructureKind::LaneTurret,
            StructureSlot::Base(_) => StructureKind::BaseTurret,
            StructureSlot::Main => StructureKind::MainStructure,
        }
    }

    pub fn lane_of(&self) -> Option<Lane> {
        match self.slot {
            StructureSlot::Lane(l, _) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for StructureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.slot {
            StructureSlot::Lane(l, t) => write!(f, "{}/{}/{}", self.team, l, t),
            StructureSlot::Base(b) => write!(f, "{}/base/{}", self.team, b),
            StructureSlot::Main => write!(f, "{}/main", self.team),
        }
    }
}

impl FromStr for StructureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split('/').collect();
        let team = match parts.first() {
            Some(&"blue") => Team::Blue,
            Some(&"red") => Team::Red,
            _ => return Err(format!("bad structure id {s:?}")),
        };
        let num = |x: &str| x.parse::<u8>().map_err(|_| format!("bad structure id {s:?}"));
        match parts[1..] {
            ["main"] => Ok(Self::main(team)),
            ["base", b] => Ok(Self::base(team, num(b)?)),
            [lane, t] => {
                let lane = match lane {
                    "top" => Lane::Top,
                    "mid" => Lane::Mid,
                    "bot" => Lane::Bot,
                    _ => return Err(format!("bad structure id {s:?}")),
                };
                Ok(Self::lane(team, lane, num(t)?))
            }
            _ => Err(format!("bad structure id {s:?}")),
        }
    }
}

impl From<StructureId> for String {
    fn from(id: StructureId) -> String {
        id.to_string()
    }
}

impl TryFrom<String> for StructureId {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StructureKind {
    LaneTurret,
    BaseTurret,
    MainStructure,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurretAttack {
    pub damage: f64,
    pub interval_ticks: u64,
    pub range: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureNode {
    pub id: StructureId,
    pub hp: f64,
    pub max_hp: f64,
    pub armor: f64,
    pub position: Vec2,
    /// `None` for the main structure, which does not shoot.
    pub attack: Option<TurretAttack>,
    #[serde(skip)]
    pub next_attack_tick: u64,
    #[serde(skip)]
    pub target: Option<UnitId>,
}

impl StructureNode {
    pub fn is_destroyed(&self) -> bool {
        self.hp <= 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Outer lane turret guards the next tier.
    Chain,
    /// Innermost lane turret guards the base turrets; lanes are alternatives.
    LaneUnlock,
    /// Base turret guards the main structure; both are required.
    BaseGuard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: StructureId,
    pub to: StructureId,
    pub kind: EdgeKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown structure {0}")]
    UnknownStructure(StructureId),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StructureHit {
    Damaged {
        dealt: f64,
        destroyed: bool,
        /// Structures that became attackable because of this destruction.
        unlocked: Vec<StructureId>,
    },
    /// Prerequisites still standing; damage ignored.
    Invulnerable,
    AlreadyDestroyed,
}

/// Structure nodes for both teams plus the prerequisite relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureGraph {
    pub turrets_per_lane: usize,
    pub base_unlock: BaseUnlock,
    pub nodes: Vec<StructureNode>,
}

impl StructureGraph {
    fn per_team(&self) -> usize {
        3 * self.turrets_per_lane + 3
    }

    pub fn index_of(&self, id: StructureId) -> Option<usize> {
        let k = self.turrets_per_lane;
        let local = match id.slot {
            StructureSlot::Lane(l, t) if t >= 1 && usize::from(t) <= k => l.index() * k + usize::from(t) - 1,
            StructureSlot::Base(b) if b < 2 => 3 * k + usize::from(b),
            StructureSlot::Main => 3 * k + 2,
            _ => return None,
        };
        Some(id.team.index() * self.per_team() + local)
    }

    pub fn node(&self, id: StructureId) -> Option<&StructureNode> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    pub fn node_mut(&mut self, id: StructureId) -> Option<&mut StructureNode> {
        self.index_of(id).map(move |i| &mut self.nodes[i])
    }

    pub fn team_nodes(&self, team: Team) -> &[StructureNode] {
        let n = self.per_team();
        &self.nodes[team.index() * n..(team.index() + 1) * n]
    }

    pub fn ids(&self) -> impl Iterator<Item = StructureId> + '_ {
        self.nodes.iter().map(|n| n.id)
    }

    pub fn is_destroyed(&self, id: StructureId) -> bool {
        self.node(id).is_some_and(|n| n.is_destroyed())
    }

    pub fn destroyed(&self) -> Vec<StructureId> {
        self.nodes.iter().filter(|n| n.is_destroyed()).map(|n| n.id).collect()
    }

    pub fn alive_count(&self, team: Team) -> usize {
        self.team_nodes(team).iter().filter(|n| !n.is_destroyed()).count()
    }

    pub fn lane_destroyed(&self, team: Team, lane: Lane) -> bool {
        (1..=self.turrets_per_lane as u8).all(|t| self.is_destroyed(StructureId::lane(team, lane, t)))
    }

    /// All prerequisite edges. `LaneUnlock` edges into a base turret are
    /// alternatives under [`BaseUnlock::AnyLane`] and conjunctive otherwise.
    pub fn edges(&self) -> Vec<Edge> {
        let k = self.turrets_per_lane as u8;
        let mut out = Vec::new();
        for team in Team::BOTH {
            for lane in Lane::ALL {
                for t in 1..k {
                    out.push(Edge {
                        from: StructureId::lane(team, lane, t),
                        to: StructureId::lane(team, lane, t + 1),
                        kind: EdgeKind::Chain,
                    });
                }
                for b in 0..2 {
                    out.push(Edge {
                        from: StructureId::lane(team, lane, k),
                        to: StructureId::base(team, b),
                        kind: EdgeKind::LaneUnlock,
                    });
                }
            }
            for b in 0..2 {
                out.push(Edge { from: StructureId::base(team, b), to: StructureId::main(team), kind: EdgeKind::BaseGuard });
            }
        }
        out
    }

    pub fn is_attackable(&self, id: StructureId) -> Result<bool, GraphError> {
        if self.index_of(id).is_none() {
            return Err(GraphError::UnknownStructure(id));
        }
        let team = id.team;
        Ok(match id.slot {
            StructureSlot::Lane(_, 1) => true,
            StructureSlot::Lane(lane, t) => self.is_destroyed(StructureId::lane(team, lane, t - 1)),
            StructureSlot::Base(_) => {
                let mut lanes = Lane::ALL.iter().map(|&l| self.lane_destroyed(team, l));
                match self.base_unlock {
                    BaseUnlock::AnyLane => lanes.any(|d| d),
                    BaseUnlock::AllLanes => lanes.all(|d| d),
                }
            }
            StructureSlot::Main => {
                self.is_destroyed(StructureId::base(team, 0)) && self.is_destroyed(StructureId::base(team, 1))
            }
        })
    }

    /// Applies `amount` (already mitigated) to a structure, flooring hp at 0.
    pub fn apply_structure_damage(&mut self, id: StructureId, amount: f64) -> Result<StructureHit, GraphError> {
        let idx = self.index_of(id).ok_or(GraphError::UnknownStructure(id))?;
        if self.nodes[idx].is_destroyed() {
            return Ok(StructureHit::AlreadyDestroyed);
        }
        if !self.is_attackable(id)? {
            return Ok(StructureHit::Invulnerable);
        }
        let before: Vec<bool> = self.attackable_mask(id.team);
        let node = &mut self.nodes[idx];
        let dealt = amount.max(0.0).min(node.hp);
        node.hp -= dealt;
        if node.hp <= 0.0 {
            node.hp = 0.0;
        }
        let destroyed = node.hp == 0.0;
        let unlocked = if destroyed {
            let after = self.attackable_mask(id.team);
            self.team_nodes(id.team)
                .iter()
                .zip(before.iter().zip(after.iter()))
                .filter(|(_, (b, a))| !**b && **a)
                .map(|(n, _)| n.id)
                .collect()
        } else {
            Vec::new()
        };
        Ok(StructureHit::Damaged { dealt, destroyed, unlocked })
    }

    fn attackable_mask(&self, team: Team) -> Vec<bool> {
        self.team_nodes(team).iter().map(|n| self.is_attackable(n.id).unwrap_or(false)).collect()
    }
}

pub const DEFAULT_TICK_RATE: u32 = 10;

/// Builds the static map and a fresh structure graph from the ruleset at the default tick rate.
pub fn build_map(rules: &Ruleset) -> Result<(MapGeometry, StructureGraph), ConfigError> {
    build_map_at(rules, DEFAULT_TICK_RATE)
}

pub fn build_map_at(rules: &Ruleset, tick_rate: u32) -> Result<(MapGeometry, StructureGraph), ConfigError> {
    rules.validate()?;
    let m = &rules.map;
    let (w, h, i) = (m.width, m.height, m.lane_inset);
    let lanes = [
        LanePath::new(Lane::Top, vec![Vec2::new(i, i), Vec2::new(i, h - i), Vec2::new(w - i, h - i)]),
        LanePath::new(Lane::Mid, vec![Vec2::new(i, i), Vec2::new(w - i, h - i)]),
        LanePath::new(Lane::Bot, vec![Vec2::new(i, i), Vec2::new(w - i, i), Vec2::new(w - i, h - i)]),
    ];
    let mut geo = MapGeometry {
        width: w,
        height: h,
        base_size: m.base_size,
        lane_half_width: m.lane_half_width,
        lanes,
        fountains: [m.fountain, m.fountain],
        vision_radius: m.vision_radius,
    };
    geo.fountains[1] = geo.mirror(m.fountain);

    let s = &rules.structures;
    let k = s.turrets_per_lane;
    let interval = rules.ticks(s.turret_attack_interval_s, tick_rate).max(1);
    let turret = TurretAttack { damage: s.turret_damage, interval_ticks: interval, range: s.turret_range };
    let mut nodes = Vec::with_capacity(2 * (3 * k + 3));
    for team in Team::BOTH {
        for lane in Lane::ALL {
            let path = geo.lane(lane);
            for t in 1..=k {
                // the outermost `k` of the three canonical tiers
                let frac = m.tier_fractions[t - 1 + (3 - k)];
                let hp = s.lane_turret_hp[t - 1 + (3 - k)];
                nodes.push(StructureNode {
                    id: StructureId::lane(team, lane, t as u8),
                    hp,
                    max_hp: hp,
                    armor: s.armor,
                    position: path.point_from(team, frac * path.length()),
                    attack: Some(turret),
                    next_attack_tick: 0,
                    target: None,
                });
            }
        }
        for b in 0..2u8 {
            nodes.push(StructureNode {
                id: StructureId::base(team, b),
                hp: s.base_turret_hp,
                max_hp: s.base_turret_hp,
                armor: s.armor,
                position: geo.for_team(team, m.base_turrets[usize::from(b)]),
                attack: Some(turret),
                next_attack_tick: 0,
                target: None,
            });
        }
        nodes.push(StructureNode {
            id: StructureId::main(team),
            hp: s.main_hp,
            max_hp: s.main_hp,
            armor: s.armor,
            position: geo.for_team(team, m.main_structure),
            attack: None,
            next_attack_tick: 0,
            target: None,
        });
    }
    let graph = StructureGraph { turrets_per_lane: k, base_unlock: s.base_unlock, nodes };
    Ok((geo, graph))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fresh() -> (MapGeometry, StructureGraph) {
        build_map(&Ruleset::default()).unwrap()
    }

    fn destroy(g: &mut StructureGraph, id: StructureId) -> StructureHit {
        g.apply_structure_damage(id, 1e9).unwrap()
    }

    #[test]
    fn default_graph_has_24_nodes_12_per_team_one_main_each() {
        let (_, g) = fresh();
        assert_eq!(g.nodes.len(), 24);
        for team in Team::BOTH {
            let nodes = g.team_nodes(team);
            assert_eq!(nodes.len(), 12);
            assert_eq!(nodes.iter().filter(|n| n.id.kind() == StructureKind::MainStructure).count(), 1);
            assert_eq!(nodes.iter().filter(|n| n.id.kind() == StructureKind::BaseTurret).count(), 2);
        }
    }

    #[test]
    fn each_lane_chain_has_two_edges() {
        let (_, g) = fresh();
        for team in Team::BOTH {
            for lane in Lane::ALL {
                let n = g
                    .edges()
                    .iter()
                    .filter(|e| e.kind == EdgeKind::Chain && e.to.team == team && e.to.lane_of() == Some(lane))
                    .count();
                assert_eq!(n, 2);
            }
        }
    }

    #[test]
    fn prerequisite_relation_is_acyclic() {
        let (_, g) = fresh();
        let edges = g.edges();
        // Kahn's algorithm over node indices
        let mut indeg = vec![0usize; g.nodes.len()];
        for e in &edges {
            indeg[g.index_of(e.to).unwrap()] += 1;
        }
        let mut queue: Vec<usize> = (0..g.nodes.len()).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = queue.pop() {
            seen += 1;
            for e in edges.iter().filter(|e| g.index_of(e.from) == Some(i)) {
                let j = g.index_of(e.to).unwrap();
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
        assert_eq!(seen, g.nodes.len());
    }

    #[test]
    fn fresh_graph_attackability() {
        let (_, g) = fresh();
        for team in Team::BOTH {
            for lane in Lane::ALL {
                assert!(g.is_attackable(StructureId::lane(team, lane, 1)).unwrap());
                assert!(!g.is_attackable(StructureId::lane(team, lane, 2)).unwrap());
            }
            assert!(!g.is_attackable(StructureId::main(team)).unwrap());
            assert!(!g.is_attackable(StructureId::base(team, 0)).unwrap());
        }
    }

    #[test]
    fn unknown_id_is_an_error() {
        let (_, g) = fresh();
        let bogus = StructureId::lane(Team::Blue, Lane::Top, 4);
        assert_eq!(g.is_attackable(bogus), Err(GraphError::UnknownStructure(bogus)));
    }

    #[test]
    fn lethal_damage_grows_destroyed_set_by_exactly_one() {
        let (_, mut g) = fresh();
        let id = StructureId::lane(Team::Red, Lane::Mid, 1);
        let before = g.destroyed();
        destroy(&mut g, id);
        let after = g.destroyed();
        assert_eq!(after.len(), before.len() + 1);
        assert!(after.contains(&id));
    }

    #[test]
    fn destroying_top_lane_unlocks_both_base_turrets() {
        let (_, mut g) = fresh();
        let team = Team::Red;
        destroy(&mut g, StructureId::lane(team, Lane::Top, 1));
        destroy(&mut g, StructureId::lane(team, Lane::Top, 2));
        let hit = destroy(&mut g, StructureId::lane(team, Lane::Top, 3));
        match hit {
            StructureHit::Damaged { destroyed, unlocked, .. } => {
                assert!(destroyed);
                assert!(unlocked.contains(&StructureId::base(team, 0)));
                assert!(unlocked.contains(&StructureId::base(team, 1)));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(g.is_attackable(StructureId::base(team, 0)).unwrap());
        assert!(!g.is_attackable(StructureId::main(team)).unwrap());
    }

    #[test]
    fn chain_rule_keeps_inner_tiers_locked() {
        let (_, mut g) = fresh();
        destroy(&mut g, StructureId::lane(Team::Blue, Lane::Mid, 1));
        assert!(g.is_attackable(StructureId::lane(Team::Blue, Lane::Mid, 2)).unwrap());
        assert!(!g.is_attackable(StructureId::lane(Team::Blue, Lane::Mid, 3)).unwrap());
    }

    #[test]
    fn damage_to_locked_structure_is_ignored() {
        let (_, mut g) = fresh();
        let id = StructureId::main(Team::Blue);
        assert_eq!(g.apply_structure_damage(id, 100.0).unwrap(), StructureHit::Invulnerable);
        assert_eq!(g.node(id).unwrap().hp, g.node(id).unwrap().max_hp);
    }

    #[test]
    fn structure_id_string_round_trip() {
        let (_, g) = fresh();
        for id in g.ids() {
            let s = id.to_string();
            assert_eq!(s.parse::<StructureId>().unwrap(), id);
        }
        assert!("green/main".parse::<StructureId>().is_err());
    }

    #[test]
    fn bases_in_opposite_corners_and_structures_on_own_side() {
        let (geo, g) = fresh();
        assert_eq!(geo.classify(Vec2::new(1.0, 1.0)), Region::Base(Team::Blue));
        assert_eq!(geo.classify(Vec2::new(149.0, 149.0)), Region::Base(Team::Red));
        for n in &g.nodes {
            let mirrored = geo.mirror(n.position);
            let twin = g.nodes.iter().find(|m| {
                m.id.team != n.id.team && m.id.slot == n.id.slot
            });
            let twin = twin.unwrap();
            assert!(mirrored.dist(twin.position) < 1e-9, "{} not mirrored", n.id);
            assert!(geo.in_bounds(n.position));
        }
    }

    #[test]
    fn lanes_meet_classification_at_their_midpoints() {
        let (geo, _) = fresh();
        for lane in Lane::ALL {
            assert_eq!(geo.classify(geo.lane(lane).midpoint()), Region::Lane(lane));
        }
        assert_eq!(geo.classify(Vec2::new(50.0, 30.0)), Region::Jungle);
    }
}
