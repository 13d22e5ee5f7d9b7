//! Writing an agent against the `Agent` trait and pitting it against a
//! built-in bot.
//!
//! The bot below walks its hero down the middle lane, focuses the weakest
//! visible enemy in range, farms creeps otherwise and recalls when low.

use std::sync::Arc;

use moba_testbed::agents::{create_agent, Action, Agent, AgentInit, Observation, Role};
use moba_testbed::subgames::run_match_with;
use moba_testbed::{Lane, MatchConfig, Ruleset, Team, UnitId};

struct Brawler {
    recalling: bool,
}

impl Agent for Brawler {
    fn name(&self) -> &'static str {
        "brawler"
    }

    fn act(&mut self, obs: &Observation) -> Action {
        let me = &obs.me;
        if !me.is_alive() {
            return Action::Idle;
        }
        if obs.map.in_base(me.pos, obs.team()) {
            self.recalling = false;
        }
        if self.recalling || me.hp < 0.3 * me.stats.max_hp {
            self.recalling = true;
            return Action::Recall;
        }
        let range = me.stats.attack_range + 0.5;
        let weakest = obs
            .enemies
            .iter()
            .filter(|e| e.pos.dist(me.pos) <= range)
            .min_by(|a, b| a.hp.total_cmp(&b.hp));
        if let Some(e) = weakest {
            return Action::AttackUnit(e.id);
        }
        let creep = obs
            .creeps
            .iter()
            .filter(|c| c.owner == Some(obs.team().opponent()))
            .min_by(|a, b| a.pos.dist(me.pos).total_cmp(&b.pos.dist(me.pos)));
        match creep {
            Some(c) if c.pos.dist(me.pos) <= range => Action::AttackUnit(c.id),
            Some(c) => Action::Move(c.pos),
            None => Action::Move(obs.map.lane(Lane::Mid).midpoint()),
        }
    }
}

fn main() {
    let rules = Arc::new(Ruleset::default());
    let config = MatchConfig { seed: 11, max_ticks: 6_000, ..MatchConfig::default() };
    let mut agents: Vec<Box<dyn Agent>> = Vec::new();
    for i in 0..10u32 {
        let team = if i < 5 { Team::Blue } else { Team::Red };
        if team == Team::Blue {
            agents.push(Box::new(Brawler { recalling: false }));
        } else {
            let init = AgentInit { hero: UnitId(i), team, role: Role::ALL[(i - 5) as usize], seed: 11, arena: false };
            agents.push(create_agent("laner", init).unwrap());
        }
    }
    let replay = run_match_with(config, rules, agents).unwrap();
    println!("brawlers vs laners: {:?} at tick {}", replay.outcome().unwrap(), replay.duration());
}
