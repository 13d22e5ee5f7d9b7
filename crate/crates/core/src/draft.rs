//! Pick-and-ban state machine for blind and tournament drafts, plus a
//! greedy counter-pick recommender.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::DraftStepKind;
use crate::types::Team;

/// Index of a hero in the draft pool.
pub type HeroId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DraftMode {
    /// Hidden simultaneous picks; each team may pick any hero once.
    Blind,
    /// Public alternating picks and bans; every hero at most once overall.
    Tournament,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DraftAction {
    Pick(HeroId),
    Ban(HeroId),
}

impl DraftAction {
    pub fn hero(self) -> HeroId {
        match self {
            DraftAction::Pick(h) | DraftAction::Ban(h) => h,
        }
    }

    pub fn kind(self) -> DraftStepKind {
        match self {
            DraftAction::Pick(_) => DraftStepKind::Pick,
            DraftAction::Ban(_) => DraftStepKind::Ban,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DraftStep {
    pub team: Team,
    pub kind: DraftStepKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DraftError {
    #[error("hero pool of {have} is too small, need at least {need}")]
    PoolTooSmall { have: usize, need: usize },
    #[error("sequence gives {blue} picks to blue and {red} to red, expected {size} each")]
    BadSequence { blue: usize, red: usize, size: usize },
    #[error("draft is complete")]
    Complete,
    #[error("it is {expected}'s turn")]
    NotYourTurn { expected: Team },
    #[error("step {step} is a {expected:?}")]
    WrongKind { step: usize, expected: DraftStepKind },
    #[error("hero {0} cannot be chosen")]
    IllegalHero(HeroId),
    #[error("hero {0} is not in the pool")]
    UnknownHero(HeroId),
    #[error("counter matrix must be {n}x{n} and antisymmetric")]
    BadMatrix { n: usize },
}

/// Default tournament order; steps alternate blue, red, blue, ...
pub fn default_tournament_sequence() -> Vec<DraftStepKind> {
    use DraftStepKind::{Ban as B, Pick as P};
    vec![B, B, B, B, P, P, P, P, P, P, B, B, P, P, P, P]
}

fn alternate(kinds: &[DraftStepKind]) -> Vec<DraftStep> {
    kinds
        .iter()
        .enumerate()
        .map(|(i, &kind)| DraftStep { team: if i % 2 == 0 { Team::Blue } else { Team::Red }, kind })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DraftState {
    pub mode: DraftMode,
    pub pool: Vec<String>,
    pub sequence: Vec<DraftStep>,
    pub step: usize,
    pub picks: [Vec<HeroId>; 2],
    pub bans: Vec<HeroId>,
    pub history: Vec<(Team, DraftAction)>,
    pub team_size: usize,
}

/// What one team may see of a draft.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DraftView {
    pub step: usize,
    pub own_picks: Vec<HeroId>,
    /// Empty in blind mode until the draft completes.
    pub enemy_picks: Vec<HeroId>,
    pub bans: Vec<HeroId>,
}

/// Finished draft, stored in replay headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DraftTranscript {
    pub mode: DraftMode,
    pub pool: Vec<String>,
    pub actions: Vec<(Team, DraftAction)>,
    pub rosters: [Vec<String>; 2],
}

impl DraftState {
    /// Starts a draft. Tournament mode uses `sequence` (alternating teams);
    /// blind mode ignores it and gives each team `team_size` picks.
    pub fn new(
        mode: DraftMode,
        pool: Vec<String>,
        sequence: &[DraftStepKind],
        team_size: usize,
    ) -> Result<Self, DraftError> {
        let min_pool = 2 * team_size;
        let steps = match mode {
            DraftMode::Blind => alternate(&vec![DraftStepKind::Pick; 2 * team_size]),
            DraftMode::Tournament => alternate(sequence),
        };
        let count = |t: Team| steps.iter().filter(|s| s.team == t && s.kind == DraftStepKind::Pick).count();
        let (blue, red) = (count(Team::Blue), count(Team::Red));
        if blue != team_size || red != team_size {
            return Err(DraftError::BadSequence { blue, red, size: team_size });
        }
        let need = match mode {
            DraftMode::Blind => min_pool,
            DraftMode::Tournament => steps.len().max(min_pool),
        };
        if pool.len() < need {
            return Err(DraftError::PoolTooSmall { have: pool.len(), need });
        }
        Ok(Self {
            mode,
            pool,
            sequence: steps,
            step: 0,
            picks: [Vec::new(), Vec::new()],
            bans: Vec::new(),
            history: Vec::new(),
            team_size,
        })
    }

    pub fn is_complete(&self) -> bool {
        self.step >= self.sequence.len()
    }

    pub fn current(&self) -> Option<DraftStep> {
        self.sequence.get(self.step).copied()
    }

    fn taken(&self, team: Team, hero: HeroId) -> bool {
        match self.mode {
            DraftMode::Tournament => {
                self.bans.contains(&hero) || self.picks.iter().any(|p| p.contains(&hero))
            }
            DraftMode::Blind => self.picks[team.index()].contains(&hero),
        }
    }

    /// Checks an action without applying it.
    pub fn check(&self, team: Team, action: DraftAction) -> Result<(), DraftError> {
        let cur = self.current().ok_or(DraftError::Complete)?;
        if cur.team != team {
            return Err(DraftError::NotYourTurn { expected: cur.team });
        }
        if cur.kind != action.kind() {
            return Err(DraftError::WrongKind { step: self.step, expected: cur.kind });
        }
        let h = action.hero();
        if h >= self.pool.len() {
            return Err(DraftError::UnknownHero(h));
        }
        if self.taken(team, h) {
            return Err(DraftError::IllegalHero(h));
        }
        Ok(())
    }

    pub fn apply_action(&self, team: Team, action: DraftAction) -> Result<DraftState, DraftError> {
        let mut next = self.clone();
        next.apply_in_place(team, action)?;
        Ok(next)
    }

    pub fn apply_in_place(&mut self, team: Team, action: DraftAction) -> Result<(), DraftError> {
        self.check(team, action)?;
        match action {
            DraftAction::Pick(h) => self.picks[team.index()].push(h),
            DraftAction::Ban(h) => self.bans.push(h),
        }
        self.history.push((team, action));
        self.step += 1;
        Ok(())
    }

    /// Every action the team to move may take, sorted by hero id.
    pub fn legal_actions(&self) -> Vec<DraftAction> {
        let Some(cur) = self.current() else { return Vec::new() };
        (0..self.pool.len())
            .filter(|&h| !self.taken(cur.team, h))
            .map(|h| match cur.kind {
                DraftStepKind::Pick => DraftAction::Pick(h),
                DraftStepKind::Ban => DraftAction::Ban(h),
            })
            .collect()
    }

    pub fn view(&self, team: Team) -> DraftView {
        let enemy = team.opponent();
        let visible = self.mode == DraftMode::Tournament || self.is_complete();
        DraftView {
            step: self.step,
            own_picks: self.picks[team.index()].clone(),
            enemy_picks: if visible { self.picks[enemy.index()].clone() } else { Vec::new() },
            bans: self.bans.clone(),
        }
    }

    pub fn rosters(&self) -> [Vec<String>; 2] {
        let names = |t: usize| self.picks[t].iter().map(|&h| self.pool[h].clone()).collect();
        [names(0), names(1)]
    }

    pub fn transcript(&self) -> DraftTranscript {
        DraftTranscript {
            mode: self.mode,
            pool: self.pool.clone(),
            actions: self.history.clone(),
            rosters: self.rosters(),
        }
    }
}

/// Square advantage matrix over the pool: `m[i][j]` is hero i's edge over j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterMatrix {
    pub heroes: Vec<String>,
    pub m: Vec<Vec<f64>>,
}

impl CounterMatrix {
    pub fn zeros(heroes: Vec<String>) -> Self {
        let n = heroes.len();
        Self { heroes, m: vec![vec![0.0; n]; n] }
    }

    pub fn new(heroes: Vec<String>, m: Vec<Vec<f64>>) -> Result<Self, DraftError> {
        let c = Self { heroes, m };
        c.validate(1e-9)?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    pub fn validate(&self, tol: f64) -> Result<(), DraftError> {
        let n = self.heroes.len();
        let bad = DraftError::BadMatrix { n };
        if self.m.len() != n || self.m.iter().any(|r| r.len() != n) {
            return Err(bad);
        }
        for i in 0..n {
            for j in 0..n {
                let v = self.m[i][j];
                if !(-1.0 - tol..=1.0 + tol).contains(&v) || (v + self.m[j][i]).abs() > tol {
                    return Err(bad);
                }
            }
        }
        Ok(())
    }

    /// Averages `m` with `-mᵀ` so the result is exactly antisymmetric.
    pub fn antisymmetrized(mut self) -> Self {
        let n = self.m.len();
        for i in 0..n {
            self.m[i][i] = 0.0;
            for j in i + 1..n {
                let v = (self.m[i][j] - self.m[j][i]) / 2.0;
                self.m[i][j] = v;
                self.m[j][i] = -v;
            }
        }
        self
    }

    fn row_mean(&self, h: HeroId) -> f64 {
        let n = self.m.len().max(1) as f64;
        self.m[h].iter().sum::<f64>() / n
    }

    fn against(&self, h: HeroId, others: &[HeroId]) -> f64 {
        if others.is_empty() {
            self.row_mean(h)
        } else {
            others.iter().map(|&o| self.m[h][o]).sum()
        }
    }
}

/// Greedy recommendation for the team to move.
///
/// Picks maximise summed advantage over the enemy picks the team can see
/// (row mean when none are visible). Bans remove the hero with the highest
/// advantage over the team's own picks. Ties go to the lowest hero id.
pub fn recommend_action(draft: &DraftState, matrix: &CounterMatrix) -> Option<DraftAction> {
    let cur = draft.current()?;
    let view = draft.view(cur.team);
    let mut best: Option<(f64, DraftAction)> = None;
    for a in draft.legal_actions() {
        let h = a.hero();
        if h >= matrix.len() {
            continue;
        }
        let score = match a {
            DraftAction::Pick(_) => matrix.against(h, &view.enemy_picks),
            DraftAction::Ban(_) => matrix.against(h, &view.own_picks),
        };
        if best.map_or(true, |(s, _)| score > s) {
            best = Some((score, a));
        }
    }
    best.map(|(_, a)| a).or_else(|| draft.legal_actions().first().copied())
}

/// Runs a whole draft with both teams following `recommend_action`.
pub fn auto_draft(mut draft: DraftState, matrix: &CounterMatrix) -> Result<DraftState, DraftError> {
    while let Some(cur) = draft.current() {
        let a = recommend_action(&draft, matrix).ok_or(DraftError::Complete)?;
        draft.apply_in_place(cur.team, a)?;
    }
    Ok(draft)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pool(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("h{i}")).collect()
    }

    #[test]
    fn default_sequence_counts() {
        let s = default_tournament_sequence();
        assert_eq!(s.iter().filter(|k| **k == DraftStepKind::Ban).count(), 6);
        assert_eq!(s.iter().filter(|k| **k == DraftStepKind::Pick).count(), 10);
        let d = DraftState::new(DraftMode::Tournament, pool(16), &s, 5).unwrap();
        assert_eq!(d.sequence.len(), 16);
    }

    #[test]
    fn small_pools_rejected() {
        let s = default_tournament_sequence();
        assert!(matches!(DraftState::new(DraftMode::Blind, pool(9), &s, 5), Err(DraftError::PoolTooSmall { .. })));
        assert!(DraftState::new(DraftMode::Blind, pool(10), &s, 5).is_ok());
        assert!(matches!(
            DraftState::new(DraftMode::Tournament, pool(12), &s, 5),
            Err(DraftError::PoolTooSmall { have: 12, need: 16 })
        ));
    }

    #[test]
    fn tournament_duplicate_pick_is_illegal() {
        use DraftStepKind::Pick as P;
        let d = DraftState::new(DraftMode::Tournament, pool(10), &[P; 10], 5).unwrap();
        let d = d.apply_action(Team::Blue, DraftAction::Pick(3)).unwrap();
        assert_eq!(d.apply_action(Team::Red, DraftAction::Pick(3)), Err(DraftError::IllegalHero(3)));
        assert!(matches!(d.apply_action(Team::Blue, DraftAction::Pick(4)), Err(DraftError::NotYourTurn { .. })));
        assert!(matches!(d.apply_action(Team::Red, DraftAction::Ban(4)), Err(DraftError::WrongKind { .. })));
    }

    #[test]
    fn blind_allows_mirror_but_not_same_team_duplicate() {
        let d = DraftState::new(DraftMode::Blind, pool(10), &[], 5).unwrap();
        let d = d.apply_action(Team::Blue, DraftAction::Pick(0)).unwrap();
        let d = d.apply_action(Team::Red, DraftAction::Pick(0)).unwrap();
        assert!(d.view(Team::Red).enemy_picks.is_empty());
        let d = d.apply_action(Team::Blue, DraftAction::Pick(1)).unwrap();
        let d = d.apply_action(Team::Red, DraftAction::Pick(1)).unwrap();
        assert_eq!(d.apply_action(Team::Blue, DraftAction::Pick(0)), Err(DraftError::IllegalHero(0)));
    }

    #[test]
    fn zero_matrix_recommends_lowest_id() {
        let d = DraftState::new(DraftMode::Tournament, pool(16), &default_tournament_sequence(), 5).unwrap();
        let m = CounterMatrix::zeros(pool(16));
        assert_eq!(recommend_action(&d, &m), Some(DraftAction::Ban(0)));
    }

    #[test]
    fn no_enemy_picks_uses_row_mean() {
        use DraftStepKind::Pick as P;
        let mut m = CounterMatrix::zeros(pool(10));
        m.m[7][2] = 0.9;
        m.m[2][7] = -0.9;
        let m = CounterMatrix::new(m.heroes, m.m).unwrap();
        let d = DraftState::new(DraftMode::Tournament, pool(10), &[P; 10], 5).unwrap();
        assert_eq!(recommend_action(&d, &m), Some(DraftAction::Pick(7)));
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = CounterMatrix> {
        proptest::collection::vec(-1.0f64..1.0, n * n).prop_map(move |v| {
            let m: Vec<Vec<f64>> = (0..n).map(|i| v[i * n..(i + 1) * n].to_vec()).collect();
            CounterMatrix { heroes: pool(n), m }.antisymmetrized()
        })
    }

    proptest! {
        #[test]
        fn recommendation_is_brute_force_argmax(m in arb_matrix(6), first in 0usize..6) {
            use DraftStepKind::Pick as P;
            let d = DraftState::new(DraftMode::Tournament, pool(6), &[P, P, P, P, P, P], 3).unwrap();
            let d = d.apply_action(Team::Blue, DraftAction::Pick(first)).unwrap();
            let rec = recommend_action(&d, &m).unwrap();
            // oracle: scan all unpicked heroes, keep the first strict maximum
            let mut best = None::<(f64, usize)>;
            for h in 0..6 {
                if h == first { continue; }
                let s = m.m[h][first];
                if best.map_or(true, |(b, _)| s > b) { best = Some((s, h)); }
            }
            prop_assert_eq!(rec, DraftAction::Pick(best.unwrap().1));
            prop_assert!(d.legal_actions().contains(&rec));
        }

        #[test]
        fn legality_closure(seq in proptest::collection::vec(0usize..16, 16)) {
            let mut d = DraftState::new(DraftMode::Tournament, pool(16), &default_tournament_sequence(), 5).unwrap();
            for pick in seq {
                let Some(cur) = d.current() else { break };
                let legal = d.legal_actions();
                for h in 0..16 {
                    let a = match cur.kind { DraftStepKind::Pick => DraftAction::Pick(h), DraftStepKind::Ban => DraftAction::Ban(h) };
                    prop_assert_eq!(d.check(cur.team, a).is_ok(), legal.contains(&a));
                }
                let a = legal[pick % legal.len()];
                d.apply_in_place(cur.team, a).unwrap();
            }
            prop_assert!(d.is_complete());
            prop_assert_eq!(d.picks[0].len(), 5);
            prop_assert_eq!(d.picks[1].len(), 5);
        }
    }
}
