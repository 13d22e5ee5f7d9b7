//! Three-on-three arena fight with the damage ledger pulled from the
//! interaction graph.

use std::sync::Arc;

use moba_testbed::analytics::InteractionKind;
use moba_testbed::subgames::{run_teamfight_subgame, SubgameSpec};
use moba_testbed::Ruleset;

fn main() {
    let rules = Arc::new(Ruleset::default());
    let spec = SubgameSpec::teamfight(5, &["warden", "pyromancer", "cleric"], &["stalker", "marksman", "hexer"], "teamfight");
    let (result, graph) = run_teamfight_subgame(&spec, rules).unwrap();
    println!("outcome {:?}, score {:.3}", result.outcome.unwrap(), result.score);
    for (k, v) in &result.metrics {
        println!("  {k:<18} {v:.1}");
    }
    println!(
        "graph: {} actors, {} edges, {:.0} damage, {:.0} healing",
        graph.nodes.len(),
        graph.edges.len(),
        graph.total(InteractionKind::Damage),
        graph.total(InteractionKind::Heal)
    );
}
