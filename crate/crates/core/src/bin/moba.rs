use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use moba_testbed::harness::{self, CommandKind, ExperimentConfig, HarnessError, RunManifest, CONFIG_ENV};
use moba_testbed::subgames::{PhaseName, SubgameKind};

#[derive(Parser)]
#[command(name = "moba", version, about = "Batch runner for the MOBA simulation testbed")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML). Defaults apply when absent.
    #[arg(long, global = true, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Single seed.
    #[arg(long, global = true, conflicts_with = "seeds")]
    seed: Option<u64>,
    /// Seed list: `1,2,3`, `0..10` or `0..=9`.
    #[arg(long, global = true, value_parser = parse_seed_list)]
    seeds: Option<SeedList>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone)]
struct SeedList(Vec<u64>);

fn parse_seed_list(s: &str) -> Result<SeedList, String> {
    harness::parse_seeds(s).map(SeedList)
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Laning,
    Teamfight,
    ItemBuild,
    FullMatch,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Opening,
    Mid,
    Late,
}

#[derive(Subcommand)]
enum Cmd {
    /// Play full matches, one replay per seed.
    RunMatch {
        /// Blue agent binding or agent name.
        #[arg(long)]
        blue: Option<String>,
        /// Red agent binding or agent name.
        #[arg(long)]
        red: Option<String>,
        #[arg(long)]
        max_ticks: Option<u64>,
    },
    /// Run a sub-game once per seed.
    RunSubgame {
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Blue heroes, comma separated.
        #[arg(long, value_delimiter = ',')]
        blue: Option<Vec<String>>,
        /// Red heroes, comma separated.
        #[arg(long, value_delimiter = ',')]
        red: Option<Vec<String>>,
        /// Agent for blue (or build policy for item builds).
        #[arg(long)]
        agent: Option<String>,
        /// Agent for red; `none` removes the laning opponent.
        #[arg(long)]
        opponent: Option<String>,
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
        #[arg(long)]
        ticks: Option<u64>,
    },
    /// Round robin with mirrored sides; prints the win-rate table.
    Tournament {
        /// Entries, comma separated (agent bindings or agent names).
        #[arg(long, value_delimiter = ',')]
        roster: Option<Vec<String>>,
    },
    /// ASCII snapshot of a replay at a tick (default: the last tick).
    Render {
        replay: PathBuf,
        #[arg(long)]
        tick: Option<u64>,
    },
    /// Counter matrix from one-on-one duels, one duel pair per seed.
    EstimateCounters {
        /// Hero pool, comma separated (default: whole catalog).
        #[arg(long, value_delimiter = ',')]
        pool: Option<Vec<String>>,
    },
    /// Summarize a replay, or print its events.
    ReplayDump {
        replay: PathBuf,
        /// Print event lines instead of the summary.
        #[arg(long)]
        events: bool,
        /// Keep only these event types (with --events).
        #[arg(long = "type", value_delimiter = ',')]
        types: Vec<String>,
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long)]
        to: Option<u64>,
    },
    /// Print the default experiment config.
    DefaultConfig,
}

fn manifest(c: &Common, kind: CommandKind) -> Result<RunManifest, HarnessError> {
    let seeds = c.seeds.clone().map(|s| s.0).or(c.seed.map(|s| vec![s]));
    RunManifest::new(kind, c.config.clone(), seeds, c.out.clone(), c.jobs)
}

fn run(cli: Cli) -> Result<String, HarnessError> {
    let c = &cli.common;
    let mut out = String::new();
    match cli.command {
        Cmd::RunMatch { blue, red, max_ticks } => {
            let mut m = manifest(c, CommandKind::RunMatch)?;
            if let Some(b) = blue {
                m.agents.insert("blue".into(), b);
            }
            if let Some(r) = red {
                m.agents.insert("red".into(), r);
            }
            if let Some(t) = max_ticks {
                m.config.match_config.max_ticks = t;
            }
            for s in harness::cmd_run_match(&m)? {
                let _ = writeln!(out, "{}", serde_json::json!({ "summary": s }));
            }
        }
        Cmd::RunSubgame { kind, blue, red, agent, opponent, profile, ticks } => {
            let mut m = manifest(c, CommandKind::RunSubgame)?;
            let spec = &mut m.config.subgame;
            if let Some(k) = kind {
                spec.kind = match k {
                    KindArg::Laning => SubgameKind::Laning,
                    KindArg::Teamfight => SubgameKind::TeamFight,
                    KindArg::ItemBuild => SubgameKind::ItemBuild,
                    KindArg::FullMatch => SubgameKind::FullMatch,
                };
            }
            if let Some(b) = blue {
                spec.rosters[0] = b;
            }
            if let Some(r) = red {
                spec.rosters[1] = r;
            }
            if let Some(a) = agent {
                // a teamfight without --opponent is a mirror of the agent
                if spec.kind == SubgameKind::TeamFight && opponent.is_none() {
                    spec.agents[1] = vec![a.clone()];
                }
                spec.agents[0] = vec![a];
            }
            if let Some(o) = opponent {
                spec.agents[1] = if o == "none" { vec![] } else { vec![o] };
            }
            if let Some(p) = profile {
                spec.profile = match p {
                    ProfileArg::Opening => PhaseName::Opening,
                    ProfileArg::Mid => PhaseName::Mid,
                    ProfileArg::Late => PhaseName::Late,
                };
            }
            if let Some(t) = ticks {
                spec.duration_ticks = t;
            }
            for s in harness::cmd_run_subgame(&m)? {
                let _ = writeln!(out, "{}", serde_json::json!({ "subgame": s }));
            }
        }
        Cmd::Tournament { roster } => {
            let m = manifest(c, CommandKind::Tournament)?;
            let roster = roster.unwrap_or_else(|| m.config.tournament.roster.clone());
            let t = harness::cmd_tournament(&m, &roster)?;
            let w = t.entries.iter().map(String::len).max().unwrap_or(0).max(6);
            let _ = write!(out, "{:w$}", "");
            for e in &t.entries {
                let _ = write!(out, " {e:>w$}");
            }
            out.push('\n');
            for (e, row) in t.entries.iter().zip(&t.win_rate) {
                let _ = write!(out, "{e:w$}");
                for v in row {
                    let _ = write!(out, " {v:>w$.3}");
                }
                out.push('\n');
            }
        }
        Cmd::Render { replay, tick } => out.push_str(&harness::cmd_render(&replay, tick)?),
        Cmd::EstimateCounters { pool } => {
            let m = manifest(c, CommandKind::EstimateCounters)?;
            let pool = pool.unwrap_or_else(|| {
                if m.config.counters.pool.is_empty() {
                    m.config.ruleset.heroes.iter().map(|h| h.name.clone()).collect()
                } else {
                    m.config.counters.pool.clone()
                }
            });
            let cm = harness::cmd_estimate_counters(&m, &pool)?;
            let _ = writeln!(out, "{}", serde_json::json!({ "counter_matrix": cm }));
        }
        Cmd::ReplayDump { replay, events, types, from, to } => {
            for line in harness::cmd_replay_dump(&replay, events, &types, from, to)? {
                let _ = writeln!(out, "{line}");
            }
        }
        Cmd::DefaultConfig => {
            let cfg = match &c.config {
                Some(p) => ExperimentConfig::load(p)?,
                None => ExperimentConfig::default(),
            };
            out.push_str(&cfg.to_toml_string());
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
