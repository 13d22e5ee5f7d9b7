use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{Ruleset, RULESET_VERSION};
use crate::draft::DraftTranscript;
use crate::subgames::{SubgameKind, SubgameSpec};
use crate::types::Outcome;
use crate::world::{Event, MatchConfig};

pub const REPLAY_FORMAT: &str = "moba-replay/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayHeader {
    pub format: String,
    pub ruleset_version: String,
    pub kind: SubgameKind,
    pub config: MatchConfig,
    /// Agent names per hero, blue then red.
    pub agents: [Vec<String>; 2],
    pub subgame: Option<SubgameSpec>,
    pub draft: Option<DraftTranscript>,
    pub ruleset: Ruleset,
}

impl ReplayHeader {
    pub fn new(kind: SubgameKind, config: MatchConfig, agents: [Vec<String>; 2], ruleset: Ruleset) -> Self {
        Self {
            format: REPLAY_FORMAT.to_string(),
            ruleset_version: RULESET_VERSION.to_string(),
            kind,
            config,
            agents,
            subgame: None,
            draft: None,
            ruleset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplayFooter {
    pub outcome: Option<Outcome>,
    /// Tick of the last simulated tick.
    pub duration: u64,
    pub events: usize,
}

/// Header, ordered event body and footer. A replay without a footer was
/// truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub header: ReplayHeader,
    pub events: Vec<Event>,
    pub footer: Option<ReplayFooter>,
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
    #[error("empty replay")]
    Empty,
    #[error("unsupported replay format {0:?}")]
    Format(String),
    #[error("line {line}: tick {tick} goes backwards")]
    Unordered { line: usize, tick: u64 },
    #[error("tick {0} is beyond the replay")]
    TickOutOfRange(u64),
}

#[derive(Serialize, Deserialize)]
struct HeaderLine {
    header: ReplayHeader,
}

#[derive(Serialize, Deserialize)]
struct FooterLine {
    footer: ReplayFooter,
}

impl Replay {
    pub fn new(header: ReplayHeader, events: Vec<Event>, outcome: Option<Outcome>, duration: u64) -> Self {
        let footer = ReplayFooter { outcome, duration, events: events.len() };
        Self { header, events, footer: Some(footer) }
    }

    pub fn is_partial(&self) -> bool {
        self.footer.is_none()
    }

    /// Last tick covered by the replay.
    pub fn duration(&self) -> u64 {
        match self.footer {
            Some(f) => f.duration,
            None => self.events.last().map_or(0, Event::tick),
        }
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.footer.and_then(|f| f.outcome)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<(), ReplayError> {
        let line = |w: &mut dyn Write, v: &dyn erased::Ser| -> Result<(), ReplayError> {
            w.write_all(v.json().as_bytes())?;
            w.write_all(b"\n")?;
            Ok(())
        };
        line(&mut w, &HeaderLine { header: self.header.clone() })?;
        for e in &self.events {
            line(&mut w, e)?;
        }
        if let Some(footer) = self.footer {
            line(&mut w, &FooterLine { footer })?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }

    pub fn read_from(r: impl BufRead) -> Result<Self, ReplayError> {
        let mut lines = Vec::new();
        for l in r.lines() {
            let l = l?;
            if !l.trim().is_empty() {
                lines.push(l);
            }
        }
        let first = lines.first().ok_or(ReplayError::Empty)?;
        let header: HeaderLine =
            serde_json::from_str(first).map_err(|source| ReplayError::Parse { line: 1, source })?;
        if header.header.format != REPLAY_FORMAT {
            return Err(ReplayError::Format(header.header.format));
        }
        let mut body = &lines[1..];
        let mut footer = None;
        if let Some(last) = body.last() {
            if last.starts_with("{\"footer\"") {
                let f: FooterLine = serde_json::from_str(last)
                    .map_err(|source| ReplayError::Parse { line: lines.len(), source })?;
                footer = Some(f.footer);
                body = &body[..body.len() - 1];
            }
        }
        let mut events = Vec::with_capacity(body.len());
        let mut last_tick = 0;
        for (k, l) in body.iter().enumerate() {
            let e: Event = serde_json::from_str(l).map_err(|source| ReplayError::Parse { line: k + 2, source })?;
            if e.tick() < last_tick {
                return Err(ReplayError::Unordered { line: k + 2, tick: e.tick() });
            }
            last_tick = e.tick();
            events.push(e);
        }
        Ok(Self { header: header.header, events, footer })
    }

    pub fn from_jsonl(s: &str) -> Result<Self, ReplayError> {
        Self::read_from(s.as_bytes())
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, ReplayError> {
        let f = std::fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(f))
    }

    pub fn save(&self, path: impl AsRef<std::path::Path>) -> Result<(), ReplayError> {
        let f = std::fs::File::create(path)?;
        let mut w = std::io::BufWriter::new(f);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    /// Events with `from <= tick <= to`.
    pub fn window(&self, from: u64, to: u64) -> impl Iterator<Item = &Event> {
        let start = self.events.partition_point(|e| e.tick() < from);
        self.events[start..].iter().take_while(move |e| e.tick() <= to)
    }
}

mod erased {
    pub trait Ser {
        fn json(&self) -> String;
    }

    impl<T: serde::Serialize> Ser for T {
        fn json(&self) -> String {
            serde_json::to_string(self).expect("replay records serialize")
        }
    }
}
