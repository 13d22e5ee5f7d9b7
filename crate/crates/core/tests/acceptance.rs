//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). Tolerances are pinned below.
//! The process exits non-zero on a FAIL only when `ACCEPTANCE_STRICT=1`;
//! `ACCEPTANCE_ONLY=3,7` runs a subset.

use std::collections::HashSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use moba_testbed::agents::{Action, CastTarget};
use moba_testbed::analytics::{
    classify_strategy, destruction_order, destruction_order_violations, detect_phases, predict_combat_outcome, Phase,
    Replay, StrategyLabel,
};
use moba_testbed::combat::{combo_kill_check, ComboError, ComboReport, dive_script_action, analyze_tower_dive, Actor, ComboStep, DivePhase, DiveVerdict};
use moba_testbed::config::{DraftStepKind, Ruleset};
use moba_testbed::draft::{default_tournament_sequence, DraftAction, DraftError, DraftMode, DraftState};
use moba_testbed::economy::{credit_kill, Victim};
use moba_testbed::harness::check_match;
use moba_testbed::mapgraph::{build_map, StructureId, StructureKind, StructureSlot};
use moba_testbed::subgames::{
    resimulate, run_full_match, run_laning_subgame, run_subgame, run_teamfight_subgame, teamfight_world, EnemyProfile,
    PhaseName, SubgameSpec,
};
use moba_testbed::{Event, Lane, MatchConfig, Outcome, Team, UnitId, Vec2, WorldState};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned thresholds.
const DETERMINISM_CONFIGS: usize = 10;
const DETERMINISM_BUDGET: Duration = Duration::from_secs(60);
const GRAPH_BUDGET: Duration = Duration::from_secs(1);
const ORDER_MATCHES: usize = 200;
const ORDER_MAX_ATTEMPTS: usize = 400;
const DRAFT_POOL: usize = 12;
const DRAFT_BUDGET: Duration = Duration::from_secs(10);
const LEDGER_SEQUENCES: usize = 10_000;
const MIRROR_ROLLOUTS: usize = 1_000;
const MIRROR_BAND: (f64, f64) = (0.45, 0.55);
const DIVE_SCENARIOS: usize = 1_000;
const COMBO_PAIRS: usize = 1_000;
const LANING_SEEDS: u64 = 20;
const CLASSIFIER_SEEDS: u64 = 20;
const CLASSIFIER_MIN: usize = 90;
const PERF_TICKS: u64 = 12_000;
const PERF_BUDGET: Duration = Duration::from_secs(2);
const REPLAYS: usize = 20;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, n: usize, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("[{}] #{n:<2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }

    fn note(&self, text: String) {
        println!("       {text}");
    }
}

fn rules() -> Arc<Ruleset> {
    Arc::new(Ruleset::default())
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

// ---------------------------------------------------------------- 1

fn determinism(rep: &mut Report) {
    let t0 = Instant::now();
    let r = rules();
    let heroes: Vec<String> = r.heroes.iter().map(|h| h.name.clone()).collect();
    let agents = ["idle", "laner", "pusher", "teamfight", "splitpush", "siege", "pickoff", "jungler"];
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0E5);
    let mut identical = 0;
    for _ in 0..DETERMINISM_CONFIGS {
        let roster = |rng: &mut ChaCha8Rng| heroes.choose_multiple(rng, 5).cloned().collect::<Vec<_>>();
        let cfg = MatchConfig {
            seed: rng.gen(),
            max_ticks: rng.gen_range(3_000..=12_000),
            crits: rng.gen_bool(0.5),
            deny_mode: rng.gen_bool(0.5),
            jungle: rng.gen_bool(0.8),
            rosters: [roster(&mut rng), roster(&mut rng)],
            ..MatchConfig::default()
        };
        let a = [vec![agents.choose(&mut rng).unwrap().to_string()], vec![agents.choose(&mut rng).unwrap().to_string()]];
        let x = run_full_match(cfg.clone(), r.clone(), a.clone(), None).unwrap().to_jsonl();
        let y = run_full_match(cfg, r.clone(), a, None).unwrap().to_jsonl();
        identical += usize::from(x == y);
    }
    let dt = t0.elapsed();
    rep.line(
        1,
        "determinism",
        identical == DETERMINISM_CONFIGS && dt < DETERMINISM_BUDGET,
        format!("{identical}/{DETERMINISM_CONFIGS} configs byte-identical across two runs, {:.1}s (< {}s)", dt.as_secs_f64(), DETERMINISM_BUDGET.as_secs()),
    );
}

// ---------------------------------------------------------------- 2

/// Bit layout of the oracle: lane l tier t at `3 * l + (t - 1)`, base
/// turrets at 9 and 10, main at 11.
fn oracle_bit(id: StructureId) -> usize {
    match id.slot {
        StructureSlot::Lane(l, t) => 3 * (l as usize) + usize::from(t) - 1,
        StructureSlot::Base(b) => 9 + usize::from(b),
        StructureSlot::Main => 11,
    }
}

/// Declarative prerequisite rules written as disjunctions of conjunctions
/// over destroyed structures.
fn oracle_rules() -> Vec<Vec<Vec<usize>>> {
    let mut r = vec![Vec::new(); 12];
    for l in 0..3 {
        r[3 * l] = vec![vec![]];
        r[3 * l + 1] = vec![vec![3 * l]];
        r[3 * l + 2] = vec![vec![3 * l + 1]];
    }
    let any_lane: Vec<Vec<usize>> = (0..3).map(|l| vec![3 * l, 3 * l + 1, 3 * l + 2]).collect();
    r[9] = any_lane.clone();
    r[10] = any_lane;
    r[11] = vec![vec![9, 10]];
    r
}

fn graph_oracle(rep: &mut Report) {
    let r = Ruleset::default();
    let (_, base) = build_map(&r).unwrap();
    let team = Team::Blue;
    let ids: Vec<StructureId> = base.team_nodes(team).iter().map(|n| n.id).collect();
    let dnf = oracle_rules();
    let t0 = Instant::now();
    let mut agree = 0;
    let mut g = base.clone();
    for mask in 0u32..4096 {
        for id in &ids {
            let destroyed = mask >> oracle_bit(*id) & 1 == 1;
            g.node_mut(*id).unwrap().hp = if destroyed { 0.0 } else { 1.0 };
        }
        let ok = ids.iter().all(|id| {
            let want = dnf[oracle_bit(*id)].iter().any(|conj| conj.iter().all(|&b| mask >> b & 1 == 1));
            g.is_attackable(*id).unwrap() == want
        });
        agree += usize::from(ok);
    }
    let dt = t0.elapsed();
    rep.line(
        2,
        "structure-graph oracle",
        agree == 4096 && dt < GRAPH_BUDGET,
        format!("{agree}/4096 subsets agree on all 12 structures, {:.3}s (< 1s)", dt.as_secs_f64()),
    );
}

// ---------------------------------------------------------------- 3

fn order_violations(replay: &Replay) -> Vec<String> {
    let k = replay.header.ruleset.structures.turrets_per_lane as u8;
    let mut v = Vec::new();
    let Some(winner) = replay.outcome().and_then(Outcome::winner) else { return v };
    let order = destruction_order(replay, winner.opponent());
    // independent walk over the loser's destruction sequence
    let mut down: HashSet<StructureId> = HashSet::new();
    let lane_full = |down: &HashSet<StructureId>, l: Lane| (1..=k).all(|t| down.contains(&StructureId::lane(winner.opponent(), l, t)));
    for s in &order {
        match s.slot {
            StructureSlot::Lane(l, t) if t > 1 && !down.contains(&StructureId::lane(s.team, l, t - 1)) => {
                v.push(format!("{s} before its outer turret"))
            }
            StructureSlot::Base(_) if !Lane::ALL.iter().any(|&l| lane_full(&down, l)) => {
                v.push(format!("{s} before any full lane"))
            }
            StructureSlot::Main if !(down.contains(&StructureId::base(s.team, 0)) && down.contains(&StructureId::base(s.team, 1))) => {
                v.push(format!("{s} before both base turrets"))
            }
            _ => {}
        }
        down.insert(*s);
    }
    // the engine's own checker must agree on both teams
    for team in Team::BOTH {
        v.extend(destruction_order_violations(&destruction_order(replay, team), k));
    }
    v
}

fn destruction_order_theorem(rep: &mut Report) {
    let r = rules();
    let pairings = [("pusher", "idle"), ("idle", "siege"), ("siege", "laner"), ("laner", "pusher"), ("teamfight", "idle"), ("idle", "splitpush")];
    let mut decided = 0;
    let mut attempts = 0;
    let mut violations = Vec::new();
    let t0 = Instant::now();
    while decided < ORDER_MATCHES && attempts < ORDER_MAX_ATTEMPTS {
        let (b, red) = pairings[attempts % pairings.len()];
        let cfg = MatchConfig { seed: 10_000 + attempts as u64, ..MatchConfig::default() };
        attempts += 1;
        let replay = run_full_match(cfg, r.clone(), [names(&[b]), names(&[red])], None).unwrap();
        // only matches decided by a main structure count; cap tiebreaks do not
        let Some(w) = replay.outcome().and_then(Outcome::winner) else { continue };
        if !destruction_order(&replay, w.opponent()).contains(&StructureId::main(w.opponent())) {
            continue;
        }
        if let Err(e) = check_match(&replay) {
            violations.push(e.to_string());
        }
        decided += 1;
        violations.extend(order_violations(&replay));
    }
    rep.line(
        3,
        "destruction-order theorem",
        decided == ORDER_MATCHES && violations.is_empty(),
        format!(
            "{decided} decided matches ({attempts} played, {:.0}s), {} violations",
            t0.elapsed().as_secs_f64(),
            violations.len()
        ),
    );
    for v in violations.iter().take(3) {
        rep.note(v.clone());
    }
}

// ---------------------------------------------------------------- 4

struct WalkStats {
    terminals: usize,
    states: usize,
    bad_terminals: usize,
    illegal_probes: usize,
    illegal_accepted: usize,
}

/// Exhaustive walk over distinct draft states (same picks and bans reached
/// in different orders are visited once).
fn walk_draft(start: DraftState) -> WalkStats {
    let mut st = WalkStats { terminals: 0, states: 0, bad_terminals: 0, illegal_probes: 0, illegal_accepted: 0 };
    let mut seen: HashSet<(usize, u64, u64, u64)> = HashSet::new();
    let picks_total = start.sequence.iter().filter(|s| s.kind == DraftStepKind::Pick).count();
    let bans_total = start.sequence.len() - picks_total;
    let team_size = start.team_size;
    let n = start.pool.len();
    let mut stack = vec![start];
    let mask = |v: &[usize]| v.iter().fold(0u64, |m, &h| m | 1 << h);
    while let Some(s) = stack.pop() {
        if !seen.insert((s.step, mask(&s.bans), mask(&s.picks[0]), mask(&s.picks[1]))) {
            continue;
        }
        st.states += 1;
        if s.is_complete() {
            st.terminals += 1;
            let mut all: Vec<usize> = s.bans.iter().chain(&s.picks[0]).chain(&s.picks[1]).copied().collect();
            let len = all.len();
            all.sort();
            all.dedup();
            let ok = s.picks[0].len() == team_size
                && s.picks[1].len() == team_size
                && s.bans.len() == bans_total
                && all.len() == len;
            st.bad_terminals += usize::from(!ok);
            for h in [0, n] {
                st.illegal_probes += 1;
                st.illegal_accepted += usize::from(s.check(Team::Blue, DraftAction::Pick(h)).is_ok());
            }
            continue;
        }
        let cur = s.current().unwrap();
        let taken: Vec<usize> = s.bans.iter().chain(&s.picks[0]).chain(&s.picks[1]).copied().collect();
        let wrong_kind = |h| match cur.kind {
            DraftStepKind::Pick => DraftAction::Ban(h),
            DraftStepKind::Ban => DraftAction::Pick(h),
        };
        let right_kind = |h| match cur.kind {
            DraftStepKind::Pick => DraftAction::Pick(h),
            DraftStepKind::Ban => DraftAction::Ban(h),
        };
        let mut probes = vec![(cur.team.opponent(), right_kind(0)), (cur.team, wrong_kind(0)), (cur.team, right_kind(n))];
        probes.extend(taken.iter().map(|&h| (cur.team, right_kind(h))));
        for (team, a) in probes {
            st.illegal_probes += 1;
            st.illegal_accepted += usize::from(s.check(team, a).is_ok());
        }
        for a in s.legal_actions() {
            stack.push(s.apply_action(cur.team, a).unwrap());
        }
    }
    st
}

fn draft_exhaustion(rep: &mut Report) {
    let pool: Vec<String> = Ruleset::default().heroes.iter().take(DRAFT_POOL).map(|h| h.name.clone()).collect();
    let seq = default_tournament_sequence();
    let picks = seq.iter().filter(|k| **k == DraftStepKind::Pick).count();
    let bans = seq.len() - picks;
    let t0 = Instant::now();
    let r = DraftState::new(DraftMode::Tournament, pool.clone(), &seq, 5);
    let detail = match &r {
        Err(DraftError::PoolTooSmall { have, need }) => format!(
            "a {have}-hero pool cannot hold {picks} picks + {bans} bans without duplicates (needs {need}); the state machine rejects it"
        ),
        Err(e) => format!("unexpected error: {e}"),
        Ok(_) => "pool accepted".into(),
    };
    let mut pass = false;
    if let Ok(s) = r {
        let w = walk_draft(s);
        pass = w.bad_terminals == 0 && w.illegal_accepted == 0 && w.terminals > 0 && t0.elapsed() < DRAFT_BUDGET;
    }
    rep.line(4, "draft exhaustion", pass, detail);
    // largest tournament draft that fits a 12-hero pool: one ban per side, five picks each
    let mut fit = vec![DraftStepKind::Ban, DraftStepKind::Ban];
    fit.extend(std::iter::repeat(DraftStepKind::Pick).take(10));
    let t1 = Instant::now();
    let w = walk_draft(DraftState::new(DraftMode::Tournament, pool, &fit, 5).unwrap());
    rep.note(format!(
        "supplementary: exhaustive walk of 2 bans + 10 picks over 12 heroes: {} states, {} terminals, {} malformed, {}/{} illegal probes accepted, {:.2}s",
        w.states,
        w.terminals,
        w.bad_terminals,
        w.illegal_accepted,
        w.illegal_probes,
        t1.elapsed().as_secs_f64()
    ));
}

// ---------------------------------------------------------------- 5

fn economy_ledger(rep: &mut Report) {
    let r = rules();
    let cfg = MatchConfig { spawn_waves: false, jungle: false, ..MatchConfig::default() };
    let template = WorldState::new(cfg, r.clone()).unwrap();
    let n_items = r.items.len() as u16;
    let slots = r.economy.inventory_slots;
    let mut rng = ChaCha8Rng::seed_from_u64(0xE0C0);
    let mut violations = 0usize;
    let mut steps = 0usize;
    let mut counts = [0usize; 3];
    for _ in 0..LEDGER_SEQUENCES {
        let mut w = template.clone();
        let n = w.heroes.len();
        let mut expected: Vec<i64> = w.heroes.iter().map(|h| h.wallet.gold as i64).collect();
        let len = rng.gen_range(5..30);
        for _ in 0..len {
            let mut ev = Vec::new();
            match rng.gen_range(0..3) {
                0 => {
                    let h = UnitId(rng.gen_range(0..n as u32));
                    let item = rng.gen_range(0..n_items + 2);
                    ev = w.step(&[(h, Action::Buy(item))]);
                    counts[0] += 1;
                }
                1 => {
                    let h = UnitId(rng.gen_range(0..n as u32));
                    ev = w.step(&[(h, Action::Sell(rng.gen_range(0..slots + 1)))]);
                    counts[1] += 1;
                }
                _ => {
                    let victim = rng.gen_range(0..n);
                    let killer = UnitId(rng.gen_range(0..n as u32));
                    credit_kill(&mut w, Victim::Hero(victim), Some(Actor::Unit(killer)), &mut ev);
                    counts[2] += 1;
                }
            }
            for e in &ev {
                match e {
                    Event::Gold { hero, amount, .. } => expected[hero.0 as usize] += *amount as i64,
                    Event::Passive { amount, .. } => expected.iter_mut().for_each(|g| *g += *amount as i64),
                    Event::Sale { hero, refund, .. } => expected[hero.0 as usize] += *refund as i64,
                    Event::Purchase { hero, cost, .. } => expected[hero.0 as usize] -= *cost as i64,
                    _ => {}
                }
            }
            steps += 1;
            let bad = w.heroes.iter().zip(&expected).any(|(h, &g)| !h.wallet.balanced() || h.wallet.gold as i64 != g || g < 0);
            violations += usize::from(bad);
        }
    }
    rep.line(
        5,
        "economy ledger",
        violations == 0,
        format!(
            "{LEDGER_SEQUENCES} sequences, {steps} steps ({} buys, {} sells, {} kills), {violations} violations",
            counts[0], counts[1], counts[2]
        ),
    );
}

// ---------------------------------------------------------------- 6

fn mirror_symmetry(rep: &mut Report) {
    let r = rules();
    let roster = ["warden", "pyromancer", "marksman", "cleric", "stalker"];
    let spec = SubgameSpec::teamfight(7, &roster, &roster, "teamfight");
    let w = teamfight_world(&spec, r.clone()).unwrap();
    let agents = [names(&["teamfight"]), names(&["teamfight"])];
    let p = predict_combat_outcome(&w, &agents, MIRROR_ROLLOUTS, 7, spec.duration_ticks).unwrap();
    let in_band = (MIRROR_BAND.0..=MIRROR_BAND.1).contains(&p.blue);
    let mut runs = 0;
    let mut draws = 0;
    for hero in r.heroes.iter().map(|h| h.name.as_str()) {
        for seed in 0..5 {
            let mut s = SubgameSpec::teamfight(seed, &[hero], &[hero], "teamfight");
            s.crits = false;
            let (res, _) = run_teamfight_subgame(&s, r.clone()).unwrap();
            runs += 1;
            draws += usize::from(res.outcome == Some(Outcome::Draw));
        }
    }
    rep.line(
        6,
        "mirror symmetry",
        in_band && draws == runs,
        format!(
            "5v5 mirror P(blue) = {:.3} (red {:.3}, draw {:.3}) over {MIRROR_ROLLOUTS} rollouts, band [{}, {}]; crit-free 1v1 mirrors drawn {draws}/{runs}",
            p.blue, p.red, p.draw, MIRROR_BAND.0, MIRROR_BAND.1
        ),
    );
}

// ---------------------------------------------------------------- 7

fn duel_world(r: &Arc<Ruleset>, blue: &str, red: &str, seed: u64, crits: bool) -> WorldState {
    let cfg = MatchConfig {
        seed,
        crits,
        spawn_waves: false,
        jungle: false,
        passive_income: false,
        rosters: [names(&[blue]), names(&[red])],
        ..MatchConfig::default()
    };
    WorldState::new(cfg, r.clone()).unwrap()
}

fn enemy_turret_near(w: &WorldState, hero: UnitId) -> bool {
    let h = w.hero(hero).unwrap();
    w.structures.nodes.iter().any(|n| {
        n.id.team != h.team && !n.is_destroyed() && n.attack.is_some_and(|a| n.position.dist(h.pos) <= a.range)
    })
}

/// Plays the scripted dive in the unreduced scenario world and judges it
/// from hero states and turret ranges alone.
fn live_dive(mut w: WorldState, diver: UnitId, victim: UnitId, horizon: u64) -> (DiveVerdict, Option<u64>) {
    let mut phase = DivePhase::Engage;
    let mut kill_tick = None;
    for _ in 0..horizon {
        let a = dive_script_action(&w, diver, victim, phase);
        w.step(&[(diver, a), (victim, Action::Idle)]);
        let victim_dead = !w.hero(victim).unwrap().is_alive();
        if victim_dead && kill_tick.is_none() {
            kill_tick = Some(w.tick);
            phase = DivePhase::Retreat;
        }
        let diver_alive = w.hero(diver).unwrap().is_alive();
        if !diver_alive {
            return (if kill_tick.is_some() { DiveVerdict::KillAndDie } else { DiveVerdict::Abort }, kill_tick);
        }
        if kill_tick.is_some() && !enemy_turret_near(&w, diver) {
            return (DiveVerdict::KillAndEscape, kill_tick);
        }
    }
    (DiveVerdict::Abort, kill_tick)
}

fn dive_agreement(r: &Arc<Ruleset>) -> (usize, [usize; 3]) {
    let heroes: Vec<&str> = r.heroes.iter().map(|h| h.name.as_str()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1FE);
    let mut agree = 0;
    let mut verdicts = [0usize; 3];
    for k in 0..DIVE_SCENARIOS {
        let mut w = duel_world(r, heroes.choose(&mut rng).unwrap(), heroes.choose(&mut rng).unwrap(), k as u64, rng.gen_bool(0.5));
        let red_turrets: Vec<(Vec2, f64)> = w
            .structures
            .team_nodes(Team::Red)
            .iter()
            .filter(|n| n.id.kind() == StructureKind::LaneTurret)
            .map(|n| (n.position, n.attack.unwrap().range))
            .collect();
        let (tp, range) = *red_turrets.choose(&mut rng).unwrap();
        let red_f = w.map.fountain(Team::Red);
        let blue_f = w.map.fountain(Team::Blue);
        let vpos = moba_testbed::combat::behind_turret(tp, red_f, rng.gen_range(0.5..range * 0.8));
        let dpos = moba_testbed::combat::behind_turret(vpos, blue_f, rng.gen_range(2.0..range + 6.0));
        let rr = r.clone();
        for (i, pos) in [(0, dpos), (1, vpos)] {
            let h = &mut w.heroes[i];
            h.set_level(rng.gen_range(1..=14), &rr);
            h.pos = w.map.clamp(pos);
            h.hp = h.stats.max_hp * rng.gen_range(0.05..1.0);
        }
        w.refresh_vision();
        let horizon = 300;
        let a = analyze_tower_dive(&w, UnitId(0), UnitId(1), horizon);
        let (v, kt) = live_dive(w, UnitId(0), UnitId(1), horizon);
        verdicts[v as usize] += 1;
        agree += usize::from(a.verdict == v && a.kill_tick == kt);
    }
    (agree, verdicts)
}

/// Inserts the waits that timing errors ask for, so random sequences become
/// playable. Range and mana failures are left as rejections.
fn repair_combo(w: &WorldState, mut steps: Vec<ComboStep>) -> Option<(ComboReport, Vec<ComboStep>)> {
    for _ in 0..32 {
        let (step, ready) = match combo_kill_check(w, UnitId(0), UnitId(1), &steps) {
            Ok(r) => return Some((r, steps)),
            Err(ComboError::AttackNotReady { step, ready }) | Err(ComboError::Cooldown { step, ready, .. }) => (step, ready),
            Err(_) => return None,
        };
        let at = w.tick
            + 1
            + steps[..step].iter().map(|s| if let ComboStep::Wait(n) = s { *n as u64 } else { 1 }).sum::<u64>();
        steps.insert(step, ComboStep::Wait(ready.saturating_sub(at).max(1) as _));
    }
    None
}

fn combo_agreement(r: &Arc<Ruleset>) -> (usize, usize, usize) {
    let heroes: Vec<&str> = r.heroes.iter().map(|h| h.name.as_str()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0B0);
    let mut agree = 0;
    let mut kills = 0;
    let mut rejected = 0;
    let mut checked = 0;
    let mut attempt = 0u64;
    while checked < COMBO_PAIRS {
        attempt += 1;
        let mut w = duel_world(r, heroes.choose(&mut rng).unwrap(), heroes.choose(&mut rng).unwrap(), attempt, false);
        // centre of the jungle quadrant, out of every turret's reach
        let spot = Vec2::new(48.0, 98.0);
        let rr = r.clone();
        let dist = rng.gen_range(1.0..7.0);
        for (i, pos) in [(0, spot), (1, spot + Vec2::new(dist, 0.0))] {
            let h = &mut w.heroes[i];
            h.set_level(rng.gen_range(1..=18), &rr);
            h.pos = pos;
            h.hp = h.stats.max_hp * rng.gen_range(0.05..0.6);
        }
        w.refresh_vision();
        assert!(!enemy_turret_near(&w, UnitId(0)) && !enemy_turret_near(&w, UnitId(1)));
        let damaging: Vec<usize> =
            w.heroes[0].abilities.iter().enumerate().filter(|(_, a)| a.is_damaging()).map(|(i, _)| i).collect();
        let len = rng.gen_range(1..8);
        let steps: Vec<ComboStep> = (0..len)
            .map(|_| match rng.gen_range(0..4) {
                0 if !damaging.is_empty() => ComboStep::Ability(*damaging.choose(&mut rng).unwrap()),
                1 => ComboStep::Wait(rng.gen_range(1..12)),
                _ => ComboStep::BasicAttack,
            })
            .collect();
        let Some((report, steps)) = repair_combo(&w, steps) else {
            rejected += 1;
            continue;
        };
        checked += 1;
        // live engine, target idle, one action per step
        let mut actions = Vec::new();
        for s in &steps {
            match *s {
                ComboStep::Ability(slot) => actions.push(Action::Cast { slot, target: CastTarget::Unit(UnitId(1)) }),
                ComboStep::BasicAttack => actions.push(Action::AttackUnit(UnitId(1))),
                ComboStep::Wait(n) => actions.extend(std::iter::repeat(Action::Idle).take(n as usize)),
            }
        }
        let mut dealt = 0.0;
        let mut kill_tick = None;
        for a in actions {
            let ev = w.step(&[(UnitId(0), a), (UnitId(1), Action::Idle)]);
            for e in &ev {
                if let Event::Damage { source: Actor::Unit(UnitId(0)), target: Actor::Unit(UnitId(1)), applied, .. } = e {
                    dealt += applied;
                }
            }
            if !w.heroes[1].is_alive() {
                kill_tick = Some(w.tick);
                break;
            }
        }
        kills += usize::from(report.killed);
        let same = report.killed == kill_tick.is_some()
            && report.kill_tick == kill_tick
            && (report.total_damage - dealt).abs() < 1e-6;
        agree += usize::from(same);
    }
    (agree, kills, rejected)
}

fn analyzers(rep: &mut Report) {
    let r = rules();
    let t0 = Instant::now();
    let (dive_ok, verdicts) = dive_agreement(&r);
    let (combo_ok, kills, rejected) = combo_agreement(&r);
    rep.line(
        7,
        "analyzer-oracle agreement",
        dive_ok == DIVE_SCENARIOS && combo_ok == COMBO_PAIRS,
        format!(
            "tower dive {dive_ok}/{DIVE_SCENARIOS} (escape {}, die {}, abort {}); combo {combo_ok}/{COMBO_PAIRS} ({kills} kills, {rejected} infeasible combos skipped); {:.1}s",
            verdicts[0],
            verdicts[1],
            verdicts[2],
            t0.elapsed().as_secs_f64()
        ),
    );
}

// ---------------------------------------------------------------- 8

fn laning(rep: &mut Report) {
    let r = rules();
    let mut perfect = 0;
    let mut secured = 0.0;
    let mut windows = 0.0;
    let solo: Vec<(u64, &str)> = (0..LANING_SEEDS).map(|s| (s, ["marksman", "warden", "pyromancer", "stalker"][s as usize % 4])).collect();
    for &(seed, hero) in &solo {
        let res = run_laning_subgame(&SubgameSpec::laning(seed, hero, "lasthit-oracle", None), r.clone()).unwrap();
        let (s, w) = (res.metrics["secured"], res.metrics["last_hittable"]);
        perfect += usize::from(s == w && w > 0.0);
        secured += s;
        windows += w;
    }
    let mut wins = 0;
    for seed in 0..LANING_SEEDS {
        let res = run_laning_subgame(&SubgameSpec::laning(seed, "marksman", "laner", Some("idle")), r.clone()).unwrap();
        wins += usize::from(res.metrics["gold"] > res.metrics["opponent_gold"]);
    }
    rep.line(
        8,
        "laning oracle",
        perfect == solo.len() && wins == LANING_SEEDS as usize,
        format!(
            "oracle secured {secured}/{windows} last-hittable creeps ({perfect}/{} runs perfect); laner out-golds idle on {wins}/{LANING_SEEDS} seeds",
            solo.len()
        ),
    );
}

// ---------------------------------------------------------------- 9

fn classifier(rep: &mut Report) {
    let r = rules();
    let generators = [
        ("pusher", StrategyLabel::TeamPush),
        ("siege", StrategyLabel::Sieging),
        ("teamfight", StrategyLabel::TeamFight),
        ("pickoff", StrategyLabel::Pickoff),
        ("splitpush", StrategyLabel::SplitPush),
    ];
    let mut hits = 0;
    let mut per = Vec::new();
    for (agent, want) in generators {
        let mut h = 0;
        for seed in 0..CLASSIFIER_SEEDS {
            let cfg = MatchConfig { seed, ..MatchConfig::default() };
            let replay = run_full_match(cfg, r.clone(), [names(&[agent]), names(&["laner"])], None).unwrap();
            let span = detect_phases(&replay).span(Phase::MidGame);
            let (s, e) = if span.is_empty() { (3600.min(replay.duration().saturating_sub(1)), replay.duration()) } else { (span.start, span.end) };
            h += usize::from(classify_strategy(&replay, Team::Blue, s, e).ok() == Some(want));
        }
        per.push(format!("{agent} {h}/{CLASSIFIER_SEEDS}"));
        hits += h;
    }
    let total = generators.len() * CLASSIFIER_SEEDS as usize;
    rep.line(9, "classifier recovery", hits >= CLASSIFIER_MIN, format!("{hits}/{total} (need {CLASSIFIER_MIN}): {}", per.join(", ")));
}

// ---------------------------------------------------------------- 10

fn performance(rep: &mut Report) {
    let r = rules();
    let cfg = MatchConfig { seed: 42, max_ticks: PERF_TICKS, ..MatchConfig::default() };
    let agents = [names(&["laner", "laner", "laner", "laner", "jungler"]), names(&["laner", "laner", "laner", "laner", "jungler"])];
    // warm-up so page faults and lazy allocation stay out of the measurement
    run_full_match(MatchConfig { max_ticks: 200, ..cfg.clone() }, r.clone(), agents.clone(), None).unwrap();
    let t0 = Instant::now();
    let replay = run_full_match(cfg, r, agents, None).unwrap();
    let dt = t0.elapsed();
    let full = replay.duration() == PERF_TICKS;
    rep.line(
        10,
        "performance",
        full && dt <= PERF_BUDGET,
        format!(
            "{} ticks with 10 bots in {:.3}s (budget {}s, {:.0}x real time)",
            replay.duration(),
            dt.as_secs_f64(),
            PERF_BUDGET.as_secs(),
            replay.duration() as f64 / 10.0 / dt.as_secs_f64()
        ),
    );
}

// ---------------------------------------------------------------- 11

fn replay_fidelity(rep: &mut Report) {
    let r = rules();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    let heroes: Vec<String> = r.heroes.iter().map(|h| h.name.clone()).collect();
    let mut round_trip = 0;
    let mut resim = 0;
    for k in 0..REPLAYS {
        let seed: u64 = rng.gen();
        let replay = match k % 4 {
            0 => {
                let cfg = MatchConfig { seed, max_ticks: rng.gen_range(2_000..8_000), ..MatchConfig::default() };
                run_full_match(cfg, r.clone(), [names(&["pusher"]), names(&["laner"])], None).unwrap()
            }
            1 => {
                let hero = heroes.choose(&mut rng).unwrap();
                run_subgame(&SubgameSpec::laning(seed, hero, "laner", Some("laner")), r.clone()).unwrap().replay.unwrap()
            }
            2 => {
                let b: Vec<&str> = heroes.choose_multiple(&mut rng, 3).map(String::as_str).collect();
                let red: Vec<&str> = heroes.choose_multiple(&mut rng, 3).map(String::as_str).collect();
                run_subgame(&SubgameSpec::teamfight(seed, &b, &red, "teamfight"), r.clone()).unwrap().replay.unwrap()
            }
            _ => {
                let hero = heroes.choose(&mut rng).unwrap();
                let spec = SubgameSpec::item_build(hero, PhaseName::Mid, EnemyProfile::default());
                run_subgame(&spec, r.clone()).unwrap().replay.unwrap()
            }
        };
        let text = replay.to_jsonl();
        let parsed = Replay::from_jsonl(&text).unwrap();
        round_trip += usize::from(parsed.to_jsonl() == text && parsed == replay);
        let again = resimulate(&parsed.header).unwrap();
        resim += usize::from(again.events == parsed.events && again.footer == parsed.footer);
    }
    rep.line(
        11,
        "replay fidelity",
        round_trip == REPLAYS && resim == REPLAYS,
        format!("round trip byte-identical {round_trip}/{REPLAYS}; re-simulation reproduces body {resim}/{REPLAYS}"),
    );
}

fn main() {
    // `cargo test` passes filter arguments; a filter that names no criterion skips the suite.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    let only: Option<Vec<usize>> =
        std::env::var("ACCEPTANCE_ONLY").ok().map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [fn(&mut Report); 11] = [
        determinism,
        graph_oracle,
        destruction_order_theorem,
        draft_exhaustion,
        economy_ledger,
        mirror_symmetry,
        analyzers,
        laning,
        classifier,
        performance,
        replay_fidelity,
    ];
    let mut rep = Report { failures: 0 };
    let t0 = Instant::now();
    for (i, run) in criteria.iter().enumerate() {
        if only.as_ref().map_or(true, |o| o.contains(&(i + 1))) {
            run(&mut rep);
        }
    }
    println!("acceptance: {} criteria failed ({:.0}s)", rep.failures, t0.elapsed().as_secs_f64());
    if rep.failures > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
