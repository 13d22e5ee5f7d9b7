//! Round-robin tournament through the harness, written to a scratch
//! directory.

use moba_testbed::harness::{cmd_tournament, CommandKind, ExperimentConfig, RunManifest};

fn main() {
    let out = std::env::temp_dir().join("moba-tournament-example");
    let m = RunManifest::with_config(CommandKind::Tournament, None, ExperimentConfig::default(), Some(vec![1, 2]), &out, 0)
        .unwrap();
    let roster: Vec<String> = ["pusher", "teamfight", "laner", "idle"].map(String::from).to_vec();
    let t = cmd_tournament(&m, &roster).unwrap();
    print!("{:>10}", "");
    for e in &t.entries {
        print!("{e:>10}");
    }
    println!();
    for (e, row) in t.entries.iter().zip(&t.win_rate) {
        print!("{e:>10}");
        for v in row {
            print!("{v:>10.2}");
        }
        println!();
    }
    println!("games per pairing: {}; records in {}", t.games_per_pairing, out.join("tournament.jsonl").display());
}
