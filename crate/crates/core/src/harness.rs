//! Batch experiment plumbing behind the `moba` binary: run manifests, match
//! and sub-game batches, tournaments, counter estimation, ASCII rendering and
//! replay dumps. Every command is a pure function of its manifest.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agents::AGENT_NAMES;
use crate::analytics::{
    classify_strategy, destruction_order, destruction_order_violations, detect_phases, Phase, PhaseLabel, Replay,
    ReplayError, StrategyLabel,
};
use crate::combat::Actor;
use crate::config::{ConfigError, Ruleset};
use crate::draft::CounterMatrix;
use crate::mapgraph::{build_map_at, Region, StructureId, StructureKind};
use crate::subgames::{run_full_match, run_subgame, run_teamfight_subgame, SubgameError, SubgameKind, SubgameSpec};
use crate::types::{Outcome, Team, UnitId, Vec2};
use crate::world::{Event, GoldReason, MatchConfig, WorldState};

/// Environment variable naming the config file when `--config` is absent.
pub const CONFIG_ENV: &str = "MOBA_CONFIG";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("unknown agent {name:?}; registered agents: {known}")]
    UnknownAgent { name: String, known: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error(transparent)]
    Subgame(#[from] SubgameError),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl HarnessError {
    /// Process exit code: 2 for runtime invariant violations, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            HarnessError::Invariant(_) => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.display().to_string(), source }
}

// ---------------------------------------------------------------- config

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TournamentSettings {
    /// Entry names; each is an agent binding or a registered agent.
    pub roster: Vec<String>,
}

impl Default for TournamentSettings {
    fn default() -> Self {
        Self { roster: vec!["pusher".into(), "laner".into(), "idle".into()] }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CounterSettings {
    /// Hero names; empty means the whole catalog.
    pub pool: Vec<String>,
}

/// Contents of an experiment config file. Every section is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ruleset: Ruleset,
    #[serde(rename = "match")]
    pub match_config: MatchConfig,
    /// Named agent bindings. A value is one registered agent for the whole
    /// team or a comma-separated list with one agent per hero.
    pub agents: BTreeMap<String, String>,
    pub subgame: SubgameSpec,
    pub tournament: TournamentSettings,
    pub counters: CounterSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let agents = [("blue", "pusher"), ("red", "laner")].iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        Self {
            ruleset: Ruleset::default(),
            match_config: MatchConfig::default(),
            agents,
            subgame: SubgameSpec::default(),
            tournament: TournamentSettings::default(),
            counters: CounterSettings::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, ConfigError> {
        let c: ExperimentConfig = toml::from_str(s).map_err(|e| ConfigError::Parse(e.to_string()))?;
        c.ruleset.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

// ---------------------------------------------------------------- manifest

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    RunMatch,
    RunSubgame,
    Tournament,
    Render,
    EstimateCounters,
    ReplayDump,
}

/// Everything a command needs: what to run, with which config, seeds and
/// agents, where to write and how many workers to use.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: CommandKind,
    pub config_path: Option<PathBuf>,
    pub config: ExperimentConfig,
    pub seeds: Vec<u64>,
    pub agents: BTreeMap<String, String>,
    pub out_dir: PathBuf,
    /// Worker threads; 0 uses every core.
    pub jobs: usize,
}

impl RunManifest {
    /// Loads the config (if any) and checks the seed list. Nothing is written.
    pub fn new(
        command: CommandKind,
        config_path: Option<PathBuf>,
        seeds: Option<Vec<u64>>,
        out_dir: impl Into<PathBuf>,
        jobs: usize,
    ) -> Result<Self, HarnessError> {
        let config = match &config_path {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        Self::with_config(command, config_path, config, seeds, out_dir, jobs)
    }

    pub fn with_config(
        command: CommandKind,
        config_path: Option<PathBuf>,
        config: ExperimentConfig,
        seeds: Option<Vec<u64>>,
        out_dir: impl Into<PathBuf>,
        jobs: usize,
    ) -> Result<Self, HarnessError> {
        let seeds = seeds.unwrap_or_else(|| vec![config.match_config.seed]);
        let mut seen = BTreeSet::new();
        if let Some(d) = seeds.iter().find(|s| !seen.insert(**s)) {
            return Err(HarnessError::Usage(format!("seed {d} appears twice")));
        }
        let agents = config.agents.clone();
        Ok(Self { command, config_path, config, seeds, agents, out_dir: out_dir.into(), jobs })
    }

    pub fn rules(&self) -> Arc<Ruleset> {
        Arc::new(self.config.ruleset.clone())
    }

    /// Agent names for one team from a binding name or a registered agent.
    pub fn resolve_agents(&self, name: &str) -> Result<Vec<String>, HarnessError> {
        let spec = self.agents.get(name).map(String::as_str).unwrap_or(name);
        let names: Vec<String> = spec.split(',').map(|s| s.trim().to_string()).collect();
        for n in &names {
            if !AGENT_NAMES.contains(&n.as_str()) {
                return Err(HarnessError::UnknownAgent { name: n.clone(), known: AGENT_NAMES.join(", ") });
            }
        }
        Ok(names)
    }

    /// Creates the output directory and checks that it accepts files.
    pub fn prepare_output(&self) -> Result<(), HarnessError> {
        let dir = &self.out_dir;
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        let probe = dir.join(".moba-write-probe");
        std::fs::write(&probe, b"").map_err(io_err(&probe))?;
        std::fs::remove_file(&probe).map_err(io_err(&probe))?;
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool, HarnessError> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| HarnessError::Usage(format!("cannot start workers: {e}")))
    }

    fn match_config(&self, seed: u64) -> MatchConfig {
        MatchConfig { seed, ..self.config.match_config.clone() }
    }
}

/// Parses `7`, `1,2,5` or a range `0..10` / `0..=9`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let num = |x: &str| x.trim().parse::<u64>().map_err(|_| format!("bad seed {x:?}"));
    if let Some((a, b)) = s.split_once("..=") {
        return Ok((num(a)?..=num(b)?).collect());
    }
    if let Some((a, b)) = s.split_once("..") {
        return Ok((num(a)?..num(b)?).collect());
    }
    s.split(',').filter(|x| !x.trim().is_empty()).map(num).collect()
}

fn write_lines(path: &Path, lines: &[String]) -> Result<(), HarnessError> {
    let f = std::fs::File::create(path).map_err(io_err(path))?;
    let mut w = std::io::BufWriter::new(f);
    for l in lines {
        w.write_all(l.as_bytes()).and_then(|_| w.write_all(b"\n")).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

fn record<T: Serialize>(key: &str, value: &T) -> String {
    let mut m = serde_json::Map::new();
    m.insert(key.to_string(), serde_json::to_value(value).expect("records serialize"));
    serde_json::Value::Object(m).to_string()
}

// ---------------------------------------------------------------- metrics

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeroMetrics {
    pub id: UnitId,
    pub team: Team,
    pub hero: String,
    pub agent: String,
    pub kills: u32,
    pub deaths: u32,
    pub assists: u32,
    pub last_hits: u32,
    pub denies: u32,
    pub gold: u64,
    pub hero_damage: f64,
    pub structure_damage: f64,
}

/// Per-hero totals recomputed from a replay's events.
pub fn hero_metrics(replay: &Replay) -> Vec<HeroMetrics> {
    let h = &replay.header;
    let mut out = Vec::new();
    for team in Team::BOTH {
        for (k, hero) in h.config.rosters[team.index()].iter().enumerate() {
            let id = UnitId((out.len()) as u32);
            out.push(HeroMetrics {
                id,
                team,
                hero: hero.clone(),
                agent: h.agents[team.index()].get(k).cloned().unwrap_or_default(),
                kills: 0,
                deaths: 0,
                assists: 0,
                last_hits: 0,
                denies: 0,
                gold: 0,
                hero_damage: 0.0,
                structure_damage: 0.0,
            });
        }
    }
    let get = |out: &mut Vec<HeroMetrics>, u: UnitId| -> Option<usize> { (u.is_hero() && (u.0 as usize) < out.len()).then_some(u.0 as usize) };
    for e in &replay.events {
        match e {
            Event::Kill { victim, killer, assists, deny, .. } => {
                if let Some(v) = victim.hero() {
                    if let Some(i) = get(&mut out, v) {
                        out[i].deaths += 1;
                    }
                    if let Some(i) = killer.and_then(|k| get(&mut out, k)) {
                        out[i].kills += 1;
                    }
                    for a in assists {
                        if let Some(i) = get(&mut out, *a) {
                            out[i].assists += 1;
                        }
                    }
                } else if *deny {
                    if let Some(i) = killer.and_then(|k| get(&mut out, k)) {
                        out[i].denies += 1;
                    }
                }
            }
            Event::Gold { hero, amount, reason, .. } => {
                if let Some(i) = get(&mut out, *hero) {
                    out[i].gold += amount;
                    if *reason == GoldReason::LastHit {
                        out[i].last_hits += 1;
                    }
                }
            }
            Event::Passive { amount, .. } => {
                for m in out.iter_mut() {
                    m.gold += amount;
                }
            }
            Event::Damage { source: Actor::Unit(s), target, applied, .. } => {
                if let Some(i) = get(&mut out, *s) {
                    match target {
                        Actor::Unit(t) if t.is_hero() => out[i].hero_damage += applied,
                        Actor::Structure(_) => out[i].structure_damage += applied,
                        _ => {}
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// Checks a finished match against the rules every engine run must obey.
pub fn check_match(replay: &Replay) -> Result<(), HarnessError> {
    let h = &replay.header;
    let seed = h.config.seed;
    if replay.is_partial() {
        return Err(HarnessError::Invariant(format!("seed {seed}: replay has no footer")));
    }
    if replay.duration() > h.config.max_ticks {
        return Err(HarnessError::Invariant(format!("seed {seed}: ran past the tick cap")));
    }
    let mut lost = [0usize; 2];
    let mut main_down = [false; 2];
    for team in Team::BOTH {
        let order = destruction_order(replay, team);
        let v = destruction_order_violations(&order, h.ruleset.structures.turrets_per_lane as u8);
        if let Some(first) = v.first() {
            return Err(HarnessError::Invariant(format!("seed {seed}: {team} structures: {first}")));
        }
        lost[team.index()] = order.len();
        main_down[team.index()] = order.contains(&StructureId::main(team));
    }
    // a main structure ends the match; otherwise the cap decides by structures standing
    let expected = match main_down {
        [true, true] => Outcome::Draw,
        [true, false] => Outcome::Winner(Team::Red),
        [false, true] => Outcome::Winner(Team::Blue),
        [false, false] if replay.duration() == h.config.max_ticks => match lost[1].cmp(&lost[0]) {
            std::cmp::Ordering::Greater => Outcome::Winner(Team::Blue),
            std::cmp::Ordering::Less => Outcome::Winner(Team::Red),
            std::cmp::Ordering::Equal => Outcome::Draw,
        },
        [false, false] => return Err(HarnessError::Invariant(format!("seed {seed}: ended early with both mains standing"))),
    };
    if replay.outcome() != Some(expected) {
        return Err(HarnessError::Invariant(format!("seed {seed}: outcome {:?} but structures say {expected:?}", replay.outcome())));
    }
    Ok(())
}

// ---------------------------------------------------------------- run-match

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchSummary {
    pub seed: u64,
    pub outcome: Option<Outcome>,
    pub winner: Option<Team>,
    pub duration_ticks: u64,
    pub duration_s: f64,
    pub heroes: Vec<HeroMetrics>,
}

impl MatchSummary {
    pub fn of(replay: &Replay) -> Self {
        let outcome = replay.outcome();
        Self {
            seed: replay.header.config.seed,
            outcome,
            winner: outcome.and_then(Outcome::winner),
            duration_ticks: replay.duration(),
            duration_s: replay.duration() as f64 / f64::from(replay.header.config.tick_rate),
            heroes: hero_metrics(replay),
        }
    }
}

pub fn replay_file_name(prefix: &str, seed: u64) -> String {
    format!("{prefix}-{seed}.jsonl")
}

/// Plays one match per seed with the `blue` and `red` bindings, writes a
/// replay per seed and `summary.jsonl`, and returns the summaries by seed.
pub fn cmd_run_match(m: &RunManifest) -> Result<Vec<MatchSummary>, HarnessError> {
    let agents = [m.resolve_agents("blue")?, m.resolve_agents("red")?];
    if m.seeds.is_empty() {
        return Err(HarnessError::Usage("no seeds".into()));
    }
    WorldState::new(m.match_config(0), m.rules()).map_err(SubgameError::from)?;
    m.prepare_output()?;
    let rules = m.rules();
    let mut results: Vec<(u64, Result<Replay, HarnessError>)> = m.pool()?.install(|| {
        m.seeds
            .par_iter()
            .map(|&seed| {
                let r = run_full_match(m.match_config(seed), rules.clone(), agents.clone(), None)
                    .map_err(HarnessError::from)
                    .and_then(|r| check_match(&r).map(|_| r));
                (seed, r)
            })
            .collect()
    });
    results.sort_by_key(|(s, _)| *s);
    let mut summaries = Vec::new();
    for (seed, r) in results {
        let replay = r?;
        let path = m.out_dir.join(replay_file_name("match", seed));
        replay.save(&path)?;
        summaries.push(MatchSummary::of(&replay));
    }
    let lines: Vec<String> = summaries.iter().map(|s| record("summary", s)).collect();
    write_lines(&m.out_dir.join("summary.jsonl"), &lines)?;
    Ok(summaries)
}

// ---------------------------------------------------------------- run-subgame

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgameSummary {
    pub seed: u64,
    pub kind: SubgameKind,
    pub score: f64,
    pub outcome: Option<Outcome>,
    pub metrics: BTreeMap<String, f64>,
}

/// Runs the config's sub-game once per seed.
pub fn cmd_run_subgame(m: &RunManifest) -> Result<Vec<SubgameSummary>, HarnessError> {
    let spec = &m.config.subgame;
    if spec.kind != SubgameKind::ItemBuild {
        for team in &spec.agents {
            for name in team {
                m.resolve_agents(name)?;
            }
        }
    }
    if m.seeds.is_empty() {
        return Err(HarnessError::Usage("no seeds".into()));
    }
    m.prepare_output()?;
    let rules = m.rules();
    let mut results: Vec<(u64, Result<_, SubgameError>)> = m.pool()?.install(|| {
        m.seeds
            .par_iter()
            .map(|&seed| (seed, run_subgame(&SubgameSpec { seed, ..spec.clone() }, rules.clone())))
            .collect()
    });
    results.sort_by_key(|(s, _)| *s);
    let mut out = Vec::new();
    for (seed, r) in results {
        let r = r?;
        if let Some(replay) = &r.replay {
            replay.save(m.out_dir.join(replay_file_name("subgame", seed)))?;
        }
        out.push(SubgameSummary { seed, kind: r.kind, score: r.score, outcome: r.outcome, metrics: r.metrics });
    }
    let lines: Vec<String> = out.iter().map(|s| record("subgame", s)).collect();
    write_lines(&m.out_dir.join("summary.jsonl"), &lines)?;
    Ok(out)
}

// ---------------------------------------------------------------- tournament

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameRecord {
    pub blue: usize,
    pub red: usize,
    pub seed: u64,
    pub outcome: Option<Outcome>,
    pub duration_ticks: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TournamentTable {
    pub entries: Vec<String>,
    pub games_per_pairing: usize,
    /// `win_rate[i][j]`: entry i's score against j, draws counting half.
    /// The diagonal is 0.5 by definition.
    pub win_rate: Vec<Vec<f64>>,
}

fn blue_score(o: Option<Outcome>) -> f64 {
    match o {
        Some(Outcome::Winner(Team::Blue)) => 1.0,
        Some(Outcome::Winner(Team::Red)) => 0.0,
        _ => 0.5,
    }
}

/// Round robin over `roster`: every pair plays each seed twice with sides
/// swapped. Writes `tournament.jsonl` with one line per game and the table.
pub fn cmd_tournament(m: &RunManifest, roster: &[String]) -> Result<TournamentTable, HarnessError> {
    if roster.len() < 2 {
        return Err(HarnessError::Usage(format!("tournament needs at least 2 entries, got {}", roster.len())));
    }
    if m.seeds.is_empty() {
        return Err(HarnessError::Usage("no seeds".into()));
    }
    let teams: Vec<Vec<String>> = roster.iter().map(|r| m.resolve_agents(r)).collect::<Result<_, _>>()?;
    m.prepare_output()?;
    let n = roster.len();
    let mut games = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for &seed in &m.seeds {
                games.push((i, j, seed));
                games.push((j, i, seed));
            }
        }
    }
    let rules = m.rules();
    let results: Vec<Result<GameRecord, HarnessError>> = m.pool()?.install(|| {
        games
            .par_iter()
            .map(|&(b, r, seed)| {
                let replay =
                    run_full_match(m.match_config(seed), rules.clone(), [teams[b].clone(), teams[r].clone()], None)?;
                check_match(&replay)?;
                Ok(GameRecord { blue: b, red: r, seed, outcome: replay.outcome(), duration_ticks: replay.duration() })
            })
            .collect()
    });
    let mut records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    records.sort_by_key(|g| (g.blue.min(g.red), g.blue.max(g.red), g.seed, g.blue));
    let mut score = vec![vec![0.0; n]; n];
    let mut count = vec![vec![0usize; n]; n];
    for g in &records {
        let s = blue_score(g.outcome);
        score[g.blue][g.red] += s;
        score[g.red][g.blue] += 1.0 - s;
        count[g.blue][g.red] += 1;
        count[g.red][g.blue] += 1;
    }
    let win_rate = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.5 } else { score[i][j] / count[i][j] as f64 }).collect())
        .collect();
    let table = TournamentTable { entries: roster.to_vec(), games_per_pairing: 2 * m.seeds.len(), win_rate };
    let mut lines: Vec<String> = records.iter().map(|g| record("game", g)).collect();
    lines.push(record("win_rates", &table));
    write_lines(&m.out_dir.join("tournament.jsonl"), &lines)?;
    Ok(table)
}

// ---------------------------------------------------------------- counters

/// One-on-one team-fight duels for every pair in `pool`, each seed played
/// from both sides. Entry `(i, j)` is i's duel score against j minus 0.5.
/// Writes `counters.jsonl`.
pub fn cmd_estimate_counters(m: &RunManifest, pool: &[String]) -> Result<CounterMatrix, HarnessError> {
    if pool.len() < 2 {
        return Err(HarnessError::Usage(format!("counter estimation needs at least 2 heroes, got {}", pool.len())));
    }
    if m.seeds.is_empty() {
        return Err(HarnessError::Usage("duel count must be positive (no seeds)".into()));
    }
    let rules = m.rules();
    if let Some(h) = pool.iter().find(|h| rules.hero_index(h).is_none()) {
        return Err(ConfigError::Invalid(format!("unknown hero {h:?} in pool")).into());
    }
    m.prepare_output()?;
    let n = pool.len();
    let mut duels = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for &seed in &m.seeds {
                duels.push((i, j, seed));
                duels.push((j, i, seed));
            }
        }
    }
    let results: Vec<Result<(usize, usize, f64), HarnessError>> = m.pool()?.install(|| {
        duels
            .par_iter()
            .map(|&(b, r, seed)| {
                let spec = SubgameSpec::teamfight(seed, &[pool[b].as_str()], &[pool[r].as_str()], "teamfight");
                let (res, _) = run_teamfight_subgame(&spec, rules.clone())?;
                Ok((b, r, blue_score(res.outcome)))
            })
            .collect()
    });
    let mut score = vec![vec![0.0; n]; n];
    let mut count = vec![vec![0usize; n]; n];
    for r in results {
        let (b, red, s) = r?;
        score[b][red] += s;
        score[red][b] += 1.0 - s;
        count[b][red] += 1;
        count[red][b] += 1;
    }
    let m_raw = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { score[i][j] / count[i][j] as f64 - 0.5 }).collect())
        .collect();
    let matrix = CounterMatrix { heroes: pool.to_vec(), m: m_raw }.antisymmetrized();
    matrix.validate(1e-12).map_err(|e| HarnessError::Invariant(format!("counter matrix: {e}")))?;
    write_lines(&m.out_dir.join("counters.jsonl"), &[record("counter_matrix", &matrix)])?;
    Ok(matrix)
}

// ---------------------------------------------------------------- render

/// Map units per grid cell.
pub const RENDER_SCALE: f64 = 3.0;

pub fn structure_glyph(id: StructureId, destroyed: bool) -> char {
    let c = match (id.kind(), destroyed) {
        (StructureKind::MainStructure, true) => return '#',
        (_, true) => return 'x',
        (StructureKind::LaneTurret, _) => 'T',
        (StructureKind::BaseTurret, _) => 'B',
        (StructureKind::MainStructure, _) => 'M',
    };
    if id.team == Team::Red {
        c.to_ascii_lowercase()
    } else {
        c
    }
}

/// Fixed-width snapshot of the map at `tick`. Rows run from the top edge
/// down; standing blue structures are upper case and red ones lower case.
/// A destroyed turret shows as `x`, a destroyed main structure as `#`. Heroes are digits by hero index
/// (modulo 10), lanes `.`, jungle `~` and bases `:`.
pub fn render(replay: &Replay, tick: u64) -> Result<String, HarnessError> {
    if tick > replay.duration() {
        return Err(ReplayError::TickOutOfRange(tick).into());
    }
    let h = &replay.header;
    let (map, graph) = build_map_at(&h.ruleset, h.config.tick_rate)?;
    let cols = (map.width / RENDER_SCALE).ceil() as usize;
    let rows = (map.height / RENDER_SCALE).ceil() as usize;
    let cell = |p: Vec2| -> (usize, usize) {
        let c = ((p.x / RENDER_SCALE).floor() as usize).min(cols - 1);
        let r = ((p.y / RENDER_SCALE).floor() as usize).min(rows - 1);
        (rows - 1 - r, c)
    };
    let mut grid = vec![vec![' '; cols]; rows];
    for (r, row) in grid.iter_mut().enumerate() {
        for (c, g) in row.iter_mut().enumerate() {
            let y = (rows - 1 - r) as f64 * RENDER_SCALE + RENDER_SCALE / 2.0;
            let x = c as f64 * RENDER_SCALE + RENDER_SCALE / 2.0;
            *g = match map.classify(Vec2::new(x, y)) {
                Region::Base(_) => ':',
                Region::Lane(_) => '.',
                Region::Jungle => '~',
            };
        }
    }

    let mut positions: Option<Vec<Option<Vec2>>> = None;
    let mut destroyed = BTreeSet::new();
    for e in replay.window(0, tick) {
        match e {
            Event::Positions { heroes, .. } => positions = Some(heroes.clone()),
            Event::StructureDestroyed { structure, .. } => {
                destroyed.insert(*structure);
            }
            _ => {}
        }
    }
    let positions = match positions {
        Some(p) => p,
        None => {
            let w = WorldState::new(h.config.clone(), Arc::new(h.ruleset.clone())).map_err(SubgameError::from)?;
            w.heroes.iter().map(|x| Some(x.pos)).collect()
        }
    };
    for (i, p) in positions.iter().enumerate() {
        if let Some(p) = p {
            let (r, c) = cell(*p);
            grid[r][c] = char::from_digit((i % 10) as u32, 10).expect("digit");
        }
    }
    for team in Team::BOTH {
        for node in graph.team_nodes(team) {
            let (r, c) = cell(node.position);
            grid[r][c] = structure_glyph(node.id, destroyed.contains(&node.id));
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "tick {tick}/{} ({:.1}s)", replay.duration(), tick as f64 / f64::from(h.config.tick_rate));
    let border: String = std::iter::repeat('-').take(cols).collect();
    let _ = writeln!(out, "+{border}+");
    for row in &grid {
        let _ = writeln!(out, "|{}|", row.iter().collect::<String>());
    }
    let _ = writeln!(out, "+{border}+");
    for team in Team::BOTH {
        let total = graph.team_nodes(team).len();
        let down = destroyed.iter().filter(|s| s.team == team).count();
        let _ = writeln!(out, "{team}: {}/{total} structures standing", total - down);
    }
    Ok(out)
}

// ---------------------------------------------------------------- replay-dump

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayDump {
    pub format: String,
    pub kind: SubgameKind,
    pub ruleset_version: String,
    pub seed: u64,
    pub rosters: [Vec<String>; 2],
    pub agents: [Vec<String>; 2],
    pub partial: bool,
    pub outcome: Option<Outcome>,
    pub duration_ticks: u64,
    pub event_counts: BTreeMap<String, usize>,
    pub heroes: Vec<HeroMetrics>,
    pub phases: Vec<PhaseLabel>,
    /// Mid-game strategy label per team, when the mid game is present.
    pub strategies: BTreeMap<String, StrategyLabel>,
}

/// The `type` tag an event serializes with.
pub fn event_type(e: &Event) -> String {
    match serde_json::to_value(e) {
        Ok(serde_json::Value::Object(o)) => o.get("type").and_then(|t| t.as_str()).unwrap_or_default().to_string(),
        _ => String::new(),
    }
}

pub fn dump_replay(replay: &Replay) -> ReplayDump {
    let h = &replay.header;
    let mut event_counts = BTreeMap::new();
    for e in &replay.events {
        *event_counts.entry(event_type(e)).or_insert(0) += 1;
    }
    let mut phases = Vec::new();
    let mut strategies = BTreeMap::new();
    if h.kind == SubgameKind::FullMatch {
        let t = detect_phases(replay);
        phases = t.labels.clone();
        let mid = t.span(Phase::MidGame);
        if !mid.is_empty() {
            for team in Team::BOTH {
                if let Ok(l) = classify_strategy(replay, team, mid.start, mid.end) {
                    strategies.insert(team.to_string(), l);
                }
            }
        }
    }
    ReplayDump {
        format: h.format.clone(),
        kind: h.kind,
        ruleset_version: h.ruleset_version.clone(),
        seed: h.config.seed,
        rosters: h.config.rosters.clone(),
        agents: h.agents.clone(),
        partial: replay.is_partial(),
        outcome: replay.outcome(),
        duration_ticks: replay.duration(),
        event_counts,
        heroes: hero_metrics(replay),
        phases,
        strategies,
    }
}

/// Event lines with `from <= tick <= to`, optionally restricted to some types.
pub fn dump_events(replay: &Replay, types: &[String], from: u64, to: u64) -> Vec<String> {
    replay
        .window(from, to)
        .filter(|e| types.is_empty() || types.contains(&event_type(e)))
        .map(|e| serde_json::to_string(e).expect("events serialize"))
        .collect()
}

/// `replay-dump` output: the summary record line, or the selected events.
pub fn cmd_replay_dump(
    path: &Path,
    events: bool,
    types: &[String],
    from: u64,
    to: Option<u64>,
) -> Result<Vec<String>, HarnessError> {
    let replay = Replay::load(path)?;
    if events {
        return Ok(dump_events(&replay, types, from, to.unwrap_or(u64::MAX)));
    }
    Ok(vec![record("dump", &dump_replay(&replay))])
}

pub fn cmd_render(path: &Path, tick: Option<u64>) -> Result<String, HarnessError> {
    let replay = Replay::load(path)?;
    render(&replay, tick.unwrap_or_else(|| replay.duration()))
}
