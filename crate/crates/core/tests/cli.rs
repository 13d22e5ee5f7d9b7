use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn moba(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moba")).args(args).env_remove("MOBA_CONFIG").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn out_arg(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn missing_config_exits_1_and_writes_nothing() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("out");
    let o = moba(&["--config", "/nonexistent/cfg.toml", "--out", &out_arg(&out), "run-match"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn config_path_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_moba"))
        .args(["--out", &out_arg(d.path()), "run-match"])
        .env("MOBA_CONFIG", "/nonexistent/env.toml")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("env.toml"), "{}", stderr(&o));
}

#[test]
fn malformed_config_exits_1() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("bad.toml");
    fs::write(&cfg, "[match]\nmax_ticks = \"soon\"\n").unwrap();
    let out = d.path().join("out");
    let o = moba(&["--config", &out_arg(&cfg), "--out", &out_arg(&out), "run-match"]);
    assert_eq!(code(&o), 1);
    assert!(!out.exists());
}

#[test]
fn unknown_agent_lists_the_registry() {
    let d = tempfile::tempdir().unwrap();
    let o = moba(&["--out", &out_arg(d.path()), "run-match", "--blue", "wizard"]);
    assert_eq!(code(&o), 1);
    let e = stderr(&o);
    assert!(e.contains("wizard") && e.contains("lasthit-oracle"), "{e}");
}

#[test]
fn usage_errors_exit_1_and_help_exits_0() {
    assert_eq!(code(&moba(&["frobnicate"])), 1);
    assert_eq!(code(&moba(&["--seed", "1", "--seeds", "1,2", "run-match"])), 1);
    assert_eq!(code(&moba(&["--help"])), 0);
}

#[test]
fn default_config_round_trips_through_the_cli() {
    let d = tempfile::tempdir().unwrap();
    let o = moba(&["default-config"]);
    assert_eq!(code(&o), 0);
    let cfg = d.path().join("cfg.toml");
    fs::write(&cfg, &o.stdout).unwrap();
    let again = moba(&["--config", &out_arg(&cfg), "default-config"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn replays_do_not_depend_on_thread_count() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    for (dir, jobs) in [(&a, "1"), (&b, "3")] {
        let o = moba(&["--seeds", "1..4", "--jobs", jobs, "--out", &out_arg(dir), "run-match", "--max-ticks", "2000"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    for seed in 1..4 {
        let name = format!("match-{seed}.jsonl");
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap());
    }
    assert_eq!(fs::read(a.join("summary.jsonl")).unwrap(), fs::read(b.join("summary.jsonl")).unwrap());
}

#[test]
fn render_shows_every_structure_then_the_fallen_main() {
    let d = tempfile::tempdir().unwrap();
    let o = moba(&["--seed", "5", "--out", &out_arg(d.path()), "run-match", "--blue", "pusher", "--red", "idle"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let replay = out_arg(&d.path().join("match-5.jsonl"));

    let first = moba(&["render", &replay, "--tick", "0"]);
    assert_eq!(code(&first), 0);
    let grid = String::from_utf8(first.stdout).unwrap();
    // grid rows only; header and footer lines contain prose
    let count = |s: &str, c: char| s.lines().filter(|l| l.starts_with('|')).flat_map(str::chars).filter(|x| *x == c).count();
    assert_eq!(count(&grid, 'T') + count(&grid, 'B') + count(&grid, 'M'), 12, "{grid}");
    assert_eq!(count(&grid, 't') + count(&grid, 'b') + count(&grid, 'm'), 12, "{grid}");

    let last = String::from_utf8(moba(&["render", &replay]).stdout).unwrap();
    assert_eq!(count(&last, '#'), 1, "{last}");
    assert_eq!(count(&last, 'M'), 1);

    assert_eq!(code(&moba(&["render", &replay, "--tick", "999999"])), 1);
}

#[test]
fn replay_dump_summarizes_and_filters() {
    let d = tempfile::tempdir().unwrap();
    let o = moba(&["--seed", "2", "--out", &out_arg(d.path()), "run-match", "--max-ticks", "1500"]);
    assert_eq!(code(&o), 0);
    let replay = out_arg(&d.path().join("match-2.jsonl"));
    let dump = moba(&["replay-dump", &replay]);
    assert_eq!(code(&dump), 0);
    let v: serde_json::Value = serde_json::from_slice(&dump.stdout).unwrap();
    assert_eq!(v["dump"]["duration_ticks"], 1500);

    let ev = moba(&["replay-dump", &replay, "--events", "--type", "wave_spawned", "--to", "600"]);
    let lines: Vec<serde_json::Value> =
        String::from_utf8(ev.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|l| l["type"] == "wave_spawned" && l["tick"].as_u64().unwrap() <= 600));

    fs::write(d.path().join("junk.jsonl"), "not json\n").unwrap();
    assert_eq!(code(&moba(&["replay-dump", &out_arg(&d.path().join("junk.jsonl"))])), 1);
}

#[test]
fn subgame_and_counters_write_their_files() {
    let d = tempfile::tempdir().unwrap();
    let out = out_arg(d.path());
    let o = moba(&["--seeds", "1,2", "--out", &out, "run-subgame", "--kind", "teamfight", "--blue", "warden", "--red", "stalker", "--agent", "teamfight"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(d.path().join("subgame-1.jsonl").exists() && d.path().join("subgame-2.jsonl").exists());

    let o = moba(&["--seed", "1", "--out", &out, "estimate-counters", "--pool", "warden,stalker,marksman"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(d.path().join("counters.jsonl").exists());
    assert_eq!(code(&moba(&["--out", &out, "estimate-counters", "--pool", "warden,nobody"])), 1);
}

#[test]
fn shipped_configs_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let default = fs::read(dir.join("default.toml")).unwrap();
    assert_eq!(moba(&["default-config"]).stdout, default, "configs/default.toml is stale");
    let o = moba(&["--config", &out_arg(&dir.join("experiment.toml")), "default-config"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}
