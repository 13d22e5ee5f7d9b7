//! Deterministic tick-based MOBA simulation for game-AI research.
//!
//! The engine ([`world`]) advances a fixed-size map at a fixed tick rate.
//! Agents ([`agents`]) see fog-filtered observations and submit one action
//! per hero per tick. Sub-games ([`subgames`]) isolate single skills, and
//! [`analytics`] turns replays into phases, strategies and interaction graphs.

pub mod agents;
pub mod analytics;
pub mod combat;
pub mod config;
pub mod draft;
pub mod economy;
pub mod harness;
pub mod mapgraph;
pub mod rng;
pub mod subgames;
pub mod types;
pub mod world;

pub use config::Ruleset;
pub use types::{Lane, Outcome, Team, UnitId, Vec2};
pub use world::{Event, MatchConfig, WorldState};
