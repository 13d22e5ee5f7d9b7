//! Named deterministic random streams.
//!
//! A match seed fans out into one independent stream per `(team, purpose)`
//! pair. The derivation is
//!
//! ```text
//! stream_seed = splitmix64(master ^ splitmix64(fnv1a64(label) ^ index))
//! ```
//!
//! where `label` is e.g. `"crit/blue"` and `index` disambiguates families of
//! streams (rollout numbers, agent slots). Each derived seed initialises a
//! ChaCha8 generator, so streams for one team never shift when the other
//! team draws more or fewer numbers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::types::Team;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    h
}

pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(fnv1a64(label.as_bytes()) ^ index))
}

pub fn stream(master: u64, label: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, label, index))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Purpose {
    /// Hero basic-attack critical rolls.
    Crit,
    /// Lane-creep critical rolls.
    CreepCrit,
    /// Jungle camp respawn jitter.
    Jungle,
}

impl Purpose {
    fn label(self) -> &'static str {
        match self {
            Purpose::Crit => "crit",
            Purpose::CreepCrit => "creep-crit",
            Purpose::Jungle => "jungle",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RngStreams {
    crit: [ChaCha8Rng; 2],
    creep_crit: [ChaCha8Rng; 2],
    jungle: [ChaCha8Rng; 2],
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        let mk = |p: Purpose, t: Team| stream(seed, &format!("{}/{}", p.label(), t), 0);
        Self {
            crit: [mk(Purpose::Crit, Team::Blue), mk(Purpose::Crit, Team::Red)],
            creep_crit: [mk(Purpose::CreepCrit, Team::Blue), mk(Purpose::CreepCrit, Team::Red)],
            jungle: [mk(Purpose::Jungle, Team::Blue), mk(Purpose::Jungle, Team::Red)],
        }
    }

    pub fn get(&mut self, team: Team, purpose: Purpose) -> &mut ChaCha8Rng {
        let i = team.index();
        match purpose {
            Purpose::Crit => &mut self.crit[i],
            Purpose::CreepCrit => &mut self.creep_crit[i],
            Purpose::Jungle => &mut self.jungle[i],
        }
    }

    /// One crit roll: always consumes exactly one draw so the stream position
    /// depends only on how many attacks were made, not on their outcome.
    pub fn roll(&mut self, team: Team, purpose: Purpose, chance: f64) -> bool {
        let r: f64 = self.get(team, purpose).gen();
        r < chance
    }
}
