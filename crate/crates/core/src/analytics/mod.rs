//! Replay model and the analyses built on it: phases, phase winners,
//! interaction graphs, strategy labels and combat-outcome rollouts.

mod replay;

pub use replay::{Replay, ReplayError, ReplayFooter, ReplayHeader, REPLAY_FORMAT};

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combat::Actor;
use crate::mapgraph::{build_map_at, StructureId, StructureSlot};
use crate::rng::{derive_seed, RngStreams};
use crate::subgames::{build_agents, fight, SubgameError};
use crate::types::{Lane, Outcome, Team, UnitId, Vec2};
use crate::world::{Event, WorldState};

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("window [{from}, {to}] is inverted")]
    InvertedWindow { from: u64, to: u64 },
    #[error("phase {0:?} is empty in this replay")]
    AbsentPhase(Phase),
    #[error("empty span")]
    EmptySpan,
    #[error("at least one rollout is required")]
    NoRollouts,
    #[error(transparent)]
    Subgame(#[from] SubgameError),
}

// ---------------------------------------------------------------- phases

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    PickBan,
    Opening,
    Laning,
    MidGame,
    LateGame,
}

impl Phase {
    pub const ALL: [Phase; 5] = [Phase::PickBan, Phase::Opening, Phase::Laning, Phase::MidGame, Phase::LateGame];
}

/// A phase and its tick span `[start, end)`; the last span ends at the
/// replay duration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseLabel {
    pub phase: Phase,
    pub start: u64,
    pub end: u64,
}

impl PhaseLabel {
    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseTimeline {
    pub labels: Vec<PhaseLabel>,
    /// The replay was cut short.
    pub partial: bool,
}

impl PhaseTimeline {
    pub fn span(&self, phase: Phase) -> PhaseLabel {
        self.labels[phase as usize]
    }
}

/// Splits a replay into phases.
///
/// Opening ends once the opposing waves have met in every lane. Laning ends
/// when a hero reaches the level threshold or a team leads by the gold
/// threshold. Late game starts once enough living heroes carry enough items.
pub fn detect_phases(replay: &Replay) -> PhaseTimeline {
    let rules = &replay.header.ruleset.phases;
    let duration = replay.duration();
    let rosters = &replay.header.config.rosters;
    let n = rosters[0].len() + rosters[1].len();
    let nb = rosters[0].len();
    let team_of = |h: UnitId| if (h.0 as usize) < nb { 0 } else { 1 };

    let mut met: [Option<u64>; 3] = [None; 3];
    let lanes = &replay.header.config.wave_lanes;
    let mut opening_end = None;
    let mut laning_end = None;
    let mut late_start = None;
    let mut gold = [0i64; 2];
    let mut items = vec![0usize; n];
    let mut alive = vec![true; n];

    for e in &replay.events {
        let t = e.tick();
        match e {
            Event::WavesMeet { lane, .. } => {
                met[lane.index()].get_or_insert(t);
                if opening_end.is_none() && lanes.iter().all(|l| met[l.index()].is_some()) {
                    opening_end = Some(t);
                }
            }
            Event::Gold { hero, amount, .. } => gold[team_of(*hero)] += *amount as i64,
            Event::Purchase { hero, .. } => items[hero.0 as usize] += 1,
            Event::Sale { hero, .. } => items[hero.0 as usize] = items[hero.0 as usize].saturating_sub(1),
            Event::Kill { victim: Actor::Unit(v), .. } if v.is_hero() => alive[v.0 as usize] = false,
            Event::Respawn { hero, .. } => alive[hero.0 as usize] = true,
            _ => {}
        }
        let Some(o) = opening_end else { continue };
        if laning_end.is_none() {
            let leveled = matches!(e, Event::LevelUp { level, .. } if *level >= rules.laning_end_level);
            if leveled || (gold[0] - gold[1]).abs() >= rules.laning_gold_lead {
                laning_end = Some(t.max(o));
            }
        }
        if let Some(l) = laning_end {
            if late_start.is_none() {
                let ready = (0..n).filter(|&i| alive[i] && items[i] >= rules.late_min_items).count();
                if ready >= rules.late_min_heroes {
                    late_start = Some(t.max(l));
                }
            }
        }
    }
    let o = opening_end.unwrap_or(duration).min(duration);
    let l = laning_end.unwrap_or(duration).clamp(o, duration);
    let m = late_start.unwrap_or(duration).clamp(l, duration);
    let labels = vec![
        PhaseLabel { phase: Phase::PickBan, start: 0, end: 0 },
        PhaseLabel { phase: Phase::Opening, start: 0, end: o },
        PhaseLabel { phase: Phase::Laning, start: o, end: l },
        PhaseLabel { phase: Phase::MidGame, start: l, end: m },
        PhaseLabel { phase: Phase::LateGame, start: m, end: duration },
    ];
    PhaseTimeline { labels, partial: replay.is_partial() }
}

/// Blue-minus-red advantage accumulated over `[start, end)`.
pub fn advantage(replay: &Replay, start: u64, end: u64) -> f64 {
    let rules = &replay.header.ruleset.phases;
    let nb = replay.header.config.rosters[0].len() as u32;
    let sign = |h: UnitId| if h.0 < nb { 1.0 } else { -1.0 };
    let mut score = 0.0;
    for e in replay.events.iter().filter(|e| e.tick() >= start && e.tick() < end) {
        match e {
            Event::Gold { hero, amount, .. } => score += sign(*hero) * *amount as f64,
            Event::Xp { hero, amount, .. } => score += sign(*hero) * rules.xp_weight * *amount as f64,
            Event::StructureDestroyed { structure, .. } => {
                // a destroyed red structure is a blue gain
                let s = if structure.team == Team::Red { 1.0 } else { -1.0 };
                score += s * rules.structure_weight;
            }
            _ => {}
        }
    }
    score
}

/// Winner of a phase by gold, weighted xp and structure differences.
pub fn phase_winner(replay: &Replay, phase: Phase) -> Result<Outcome, AnalyticsError> {
    let span = detect_phases(replay).span(phase);
    if span.is_empty() {
        return Err(AnalyticsError::AbsentPhase(phase));
    }
    let score = advantage(replay, span.start, span.end);
    let margin = replay.header.ruleset.phases.phase_draw_margin;
    Ok(if score.abs() < margin {
        Outcome::Draw
    } else if score > 0.0 {
        Outcome::Winner(Team::Blue)
    } else {
        Outcome::Winner(Team::Red)
    })
}

// ---------------------------------------------------------------- interactions

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    Damage,
    Heal,
    Stun,
    Kill,
    Assist,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    pub tick: u64,
    pub source: Actor,
    pub target: Actor,
    pub kind: InteractionKind,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalInteractionGraph {
    pub from: u64,
    pub to: u64,
    pub nodes: BTreeSet<Actor>,
    pub edges: Vec<Interaction>,
}

impl TemporalInteractionGraph {
    pub fn total(&self, kind: InteractionKind) -> f64 {
        self.edges.iter().filter(|e| e.kind == kind).map(|e| e.magnitude).sum()
    }
}

/// Combat interactions with `from <= tick <= to`. Damage magnitudes are the
/// mitigated amounts (hp removed plus overkill).
pub fn extract_interaction_graph(replay: &Replay, from: u64, to: u64) -> Result<TemporalInteractionGraph, AnalyticsError> {
    if from > to {
        return Err(AnalyticsError::InvertedWindow { from, to });
    }
    let mut edges = Vec::new();
    let mut push = |tick, source, target, kind, magnitude| edges.push(Interaction { tick, source, target, kind, magnitude });
    for e in replay.window(from, to) {
        match e {
            Event::Damage { tick, source, target, amount, .. } => push(*tick, *source, *target, InteractionKind::Damage, *amount),
            Event::Heal { tick, source, target, amount } => {
                push(*tick, Actor::Unit(*source), Actor::Unit(*target), InteractionKind::Heal, *amount)
            }
            Event::Stun { tick, source, target, ticks } => {
                push(*tick, Actor::Unit(*source), Actor::Unit(*target), InteractionKind::Stun, *ticks as f64)
            }
            Event::Kill { tick, victim, killer, blow, assists, .. } => {
                if let Some(src) = killer.map(Actor::Unit).or(*blow) {
                    push(*tick, src, *victim, InteractionKind::Kill, 1.0);
                }
                for a in assists {
                    push(*tick, Actor::Unit(*a), *victim, InteractionKind::Assist, 1.0);
                }
            }
            _ => {}
        }
    }
    let nodes = edges.iter().flat_map(|e| [e.source, e.target]).collect();
    Ok(TemporalInteractionGraph { from, to, nodes, edges })
}

// ---------------------------------------------------------------- strategy

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyLabel {
    TeamFight,
    Pickoff,
    SplitPush,
    Sieging,
    TeamPush,
}

/// Per-team features the classifier decides on.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StrategyFeatures {
    /// Mean pairwise distance between heroes away from base; median over snapshots.
    pub spread: f64,
    /// Share of hero structure damage dealt by heroes far from their team.
    pub lone_share: f64,
    /// Structure damage / (structure + hero damage), heroes only.
    pub structure_share: f64,
    /// Largest single-lane share of lane-turret damage.
    pub lane_concentration: f64,
    pub kills: usize,
    pub small_kills: usize,
    pub big_kills: usize,
    pub mean_participants: f64,
    /// Attacks on one enemy hero bucketed into 5 s windows, kill or not.
    pub engagements: usize,
    pub small_engagements: usize,
    pub big_engagements: usize,
}

pub fn strategy_features(replay: &Replay, team: Team, start: u64, end: u64) -> StrategyFeatures {
    let cr = &replay.header.ruleset.classifier;
    let nb = replay.header.config.rosters[0].len();
    let n = nb + replay.header.config.rosters[1].len();
    let members: Vec<usize> = match team {
        Team::Blue => (0..nb).collect(),
        Team::Red => (nb..n).collect(),
    };
    let mine = |u: UnitId| u.hero_index().is_some_and(|i| members.contains(&i));
    // heroes at home (respawning, healing, shopping) are not part of the formation
    let map = build_map_at(&replay.header.ruleset, replay.header.config.tick_rate).ok().map(|(m, _)| m);
    let in_play = |p: Vec2| map.as_ref().map_or(true, |m| !m.in_base(p, team));

    let mut spreads = Vec::new();
    let mut lone: Vec<bool> = vec![false; n];
    let (mut structure_dmg, mut hero_dmg, mut lone_structure) = (0.0, 0.0, 0.0);
    let mut lane_dmg = [0.0f64; 3];
    let (mut kills, mut small, mut big, mut participants) = (0usize, 0usize, 0usize, 0usize);
    let bucket = 5 * u64::from(replay.header.config.tick_rate);
    let mut engaged: std::collections::BTreeMap<(UnitId, u64), BTreeSet<UnitId>> = Default::default();

    for e in replay.events.iter().filter(|e| e.tick() >= start && e.tick() < end) {
        match e {
            Event::Positions { heroes, .. } => {
                let pts: Vec<(usize, Vec2)> =
                    members.iter().filter_map(|&i| heroes.get(i).copied().flatten().filter(|p| in_play(*p)).map(|p| (i, p))).collect();
                if pts.len() >= 2 {
                    let mut sum = 0.0;
                    let mut pairs = 0.0;
                    for a in 0..pts.len() {
                        for b in a + 1..pts.len() {
                            sum += pts[a].1.dist(pts[b].1);
                            pairs += 1.0;
                        }
                    }
                    spreads.push(sum / pairs);
                }
                lone.iter_mut().for_each(|l| *l = false);
                for &(i, p) in &pts {
                    let others: Vec<Vec2> = pts.iter().filter(|(j, _)| *j != i).map(|(_, q)| *q).collect();
                    if others.is_empty() {
                        continue;
                    }
                    let c = others.iter().fold(Vec2::default(), |acc, q| acc + *q) * (1.0 / others.len() as f64);
                    lone[i] = p.dist(c) > cr.lone_distance;
                }
            }
            Event::Damage { source: Actor::Unit(s), target, applied, .. } if mine(*s) => match target {
                Actor::Structure(sid) => {
                    structure_dmg += applied;
                    if lone[s.0 as usize] {
                        lone_structure += applied;
                    }
                    if let StructureSlot::Lane(l, _) = sid.slot {
                        lane_dmg[l.index()] += applied;
                    }
                }
                Actor::Unit(u) if u.is_hero() => {
                    hero_dmg += applied;
                    engaged.entry((*u, e.tick() / bucket)).or_default().insert(*s);
                }
                _ => {}
            },
            Event::Kill { victim: Actor::Unit(v), killer: Some(k), assists, .. } if v.is_hero() && mine(*k) => {
                let p = 1 + assists.len();
                kills += 1;
                participants += p;
                if p <= cr.pickoff_max_participants {
                    small += 1;
                }
                if p >= cr.teamfight_min_participants {
                    big += 1;
                }
            }
            _ => {}
        }
    }
    let total_lane: f64 = lane_dmg.iter().sum();
    let small_eng = engaged.values().filter(|a| a.len() <= cr.pickoff_max_participants).count();
    let big_eng = engaged.values().filter(|a| a.len() >= cr.teamfight_min_participants).count();
    StrategyFeatures {
        spread: median(&mut spreads),
        lone_share: if structure_dmg > 0.0 { lone_structure / structure_dmg } else { 0.0 },
        structure_share: if structure_dmg + hero_dmg > 0.0 { structure_dmg / (structure_dmg + hero_dmg) } else { 0.0 },
        lane_concentration: if total_lane > 0.0 { lane_dmg.iter().cloned().fold(0.0, f64::max) / total_lane } else { 0.0 },
        kills,
        small_kills: small,
        big_kills: big,
        mean_participants: if kills > 0 { participants as f64 / kills as f64 } else { 0.0 },
        engagements: engaged.len(),
        small_engagements: small_eng,
        big_engagements: big_eng,
    }
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Rule-based label from features; thresholds come from the ruleset.
pub fn label_from_features(f: &StrategyFeatures, cr: &crate::config::ClassifierRules) -> StrategyLabel {
    if f.spread >= cr.high_spread && f.lone_share >= cr.lone_share {
        return StrategyLabel::SplitPush;
    }
    if f.spread <= cr.low_spread && f.structure_share >= cr.structure_share {
        return if f.lane_concentration >= cr.lane_concentration { StrategyLabel::TeamPush } else { StrategyLabel::Sieging };
    }
    // few kills: fall back to who took part in the attempts
    let (n, small) = if f.kills >= cr.min_kills { (f.kills, f.small_kills) } else { (f.engagements, f.small_engagements) };
    if n > 0 && 2 * small > n {
        return StrategyLabel::Pickoff;
    }
    StrategyLabel::TeamFight
}

/// Labels `team`'s play over `[start, end)`.
pub fn classify_strategy(replay: &Replay, team: Team, start: u64, end: u64) -> Result<StrategyLabel, AnalyticsError> {
    if end <= start {
        return Err(AnalyticsError::EmptySpan);
    }
    let f = strategy_features(replay, team, start, end);
    Ok(label_from_features(&f, &replay.header.ruleset.classifier))
}

// ---------------------------------------------------------------- prediction

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CombatPrediction {
    pub rollouts: usize,
    pub blue: f64,
    pub red: f64,
    pub draw: f64,
}

impl CombatPrediction {
    pub fn win_probability(&self, team: Team) -> f64 {
        match team {
            Team::Blue => self.blue,
            Team::Red => self.red,
        }
    }
}

/// Fraction of `n` seeded fights from `snapshot` won by each side. Rollout
/// `i` reseeds the world's random streams from `(seed, i)`, so results do not
/// depend on thread count.
pub fn predict_combat_outcome(
    snapshot: &WorldState,
    agents: &[Vec<String>; 2],
    n: usize,
    seed: u64,
    horizon: u64,
) -> Result<CombatPrediction, AnalyticsError> {
    if n == 0 {
        return Err(AnalyticsError::NoRollouts);
    }
    build_agents(snapshot, agents, true)?;
    let outcomes: Vec<Outcome> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut w = snapshot.clone();
            let s = derive_seed(seed, "rollout", i as u64);
            w.rng = RngStreams::new(s);
            w.config.seed = s;
            let mut bots = build_agents(&w, agents, true).expect("checked above");
            let until = w.tick + horizon;
            w.config.max_ticks = w.config.max_ticks.max(until + 1);
            let mut sink = Vec::new();
            fight(&mut w, &mut bots, until, &mut sink)
        })
        .collect();
    let count = |o: Outcome| outcomes.iter().filter(|x| **x == o).count() as f64 / n as f64;
    Ok(CombatPrediction {
        rollouts: n,
        blue: count(Outcome::Winner(Team::Blue)),
        red: count(Outcome::Winner(Team::Red)),
        draw: count(Outcome::Draw),
    })
}

/// Structures of `team` in destruction order.
pub fn destruction_order(replay: &Replay, team: Team) -> Vec<StructureId> {
    replay
        .events
        .iter()
        .filter_map(|e| match e {
            Event::StructureDestroyed { structure, .. } if structure.team == team => Some(*structure),
            _ => None,
        })
        .collect()
}

/// Checks the siege-order rules on one team's destruction sequence: lane
/// turrets fall outer to inner, a whole lane falls before any base turret,
/// and both base turrets fall before the main structure.
pub fn destruction_order_violations(order: &[StructureId], turrets_per_lane: u8) -> Vec<String> {
    let mut v = Vec::new();
    let mut lane_down = [0u8; 3];
    let mut bases = 0;
    for (k, s) in order.iter().enumerate() {
        match s.slot {
            StructureSlot::Lane(l, tier) => {
                if tier != lane_down[l.index()] + 1 {
                    v.push(format!("#{k}: {s} before tier {}", lane_down[l.index()] + 1));
                }
                lane_down[l.index()] = lane_down[l.index()].max(tier);
            }
            StructureSlot::Base(_) => {
                if !Lane::ALL.iter().any(|l| lane_down[l.index()] >= turrets_per_lane) {
                    v.push(format!("#{k}: {s} with no lane cleared"));
                }
                bases += 1;
            }
            StructureSlot::Main => {
                if bases < 2 {
                    v.push(format!("#{k}: {s} with {bases} base turrets down"));
                }
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Ruleset;
    use crate::subgames::SubgameKind;
    use crate::world::MatchConfig;

    fn replay_of(events: Vec<Event>, duration: u64) -> Replay {
        let h = ReplayHeader::new(
            SubgameKind::FullMatch,
            MatchConfig::default(),
            [vec!["idle".into(); 5], vec!["idle".into(); 5]],
            Ruleset::default(),
        );
        Replay::new(h, events, Some(Outcome::Draw), duration)
    }

    #[test]
    fn inverted_window_errors() {
        let r = replay_of(vec![], 10);
        assert!(matches!(extract_interaction_graph(&r, 5, 4), Err(AnalyticsError::InvertedWindow { .. })));
        assert!(extract_interaction_graph(&r, 0, 10).unwrap().edges.is_empty());
    }

    #[test]
    fn no_meet_means_opening_only() {
        let r = replay_of(vec![Event::Passive { tick: 3, amount: 1 }], 50);
        let p = detect_phases(&r);
        assert_eq!(p.span(Phase::Opening), PhaseLabel { phase: Phase::Opening, start: 0, end: 50 });
        assert!(p.span(Phase::MidGame).is_empty());
        assert!(matches!(phase_winner(&r, Phase::LateGame), Err(AnalyticsError::AbsentPhase(_))));
    }

    #[test]
    fn opening_waits_for_every_lane() {
        let ev = vec![
            Event::WavesMeet { tick: 100, lane: Lane::Mid },
            Event::WavesMeet { tick: 130, lane: Lane::Top },
            Event::WavesMeet { tick: 131, lane: Lane::Bot },
            Event::LevelUp { tick: 200, hero: UnitId(2), level: 9 },
        ];
        let p = detect_phases(&replay_of(ev, 400));
        assert_eq!(p.span(Phase::Opening).end, 131);
        assert_eq!(p.span(Phase::Laning).end, 200);
        assert_eq!(p.span(Phase::MidGame), PhaseLabel { phase: Phase::MidGame, start: 200, end: 400 });
    }

    #[test]
    fn order_checker_flags_skips() {
        let t = Team::Red;
        let ok = [
            StructureId::lane(t, Lane::Top, 1),
            StructureId::lane(t, Lane::Top, 2),
            StructureId::lane(t, Lane::Top, 3),
            StructureId::base(t, 1),
            StructureId::base(t, 0),
            StructureId::main(t),
        ];
        assert!(destruction_order_violations(&ok, 3).is_empty());
        let bad = [StructureId::lane(t, Lane::Top, 2), StructureId::base(t, 0), StructureId::main(t)];
        assert_eq!(destruction_order_violations(&bad, 3).len(), 3);
    }

    #[test]
    fn split_push_rule_wins_over_kills() {
        let cr = Ruleset::default().classifier;
        let f = StrategyFeatures { spread: 60.0, lone_share: 0.9, kills: 10, small_kills: 10, ..Default::default() };
        assert_eq!(label_from_features(&f, &cr), StrategyLabel::SplitPush);
        let f = StrategyFeatures { spread: 10.0, structure_share: 0.8, lane_concentration: 0.9, ..Default::default() };
        assert_eq!(label_from_features(&f, &cr), StrategyLabel::TeamPush);
        let f = StrategyFeatures { spread: 10.0, structure_share: 0.8, lane_concentration: 0.4, ..Default::default() };
        assert_eq!(label_from_features(&f, &cr), StrategyLabel::Sieging);
        let f = StrategyFeatures { spread: 40.0, kills: 4, small_kills: 3, ..Default::default() };
        assert_eq!(label_from_features(&f, &cr), StrategyLabel::Pickoff);
        let f = StrategyFeatures { spread: 20.0, kills: 4, big_kills: 3, ..Default::default() };
        assert_eq!(label_from_features(&f, &cr), StrategyLabel::TeamFight);
    }
}
