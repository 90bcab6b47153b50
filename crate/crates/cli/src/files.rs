//! JSON game and policy files.
//!
//! A game file is one self-describing document:
//!
//! ```json
//! {"format_version": "1", "name": "poacher", "m": 2, "n": 2,
//!  "leader": [[1, -1], [-1, 1]],
//!  "types": [{"id": "A", "prior": 0.5, "payoff": [[-1, 0.33], [3, -1]]}]}
//! ```
//!
//! Floats are written with shortest round-trip formatting, so reading a
//! written game gives back the same values bit for bit.

use std::fmt;

use serde::{Deserialize, Serialize};
use stackelberg_core::game::{FollowerType, Game, Matrix, MixedStrategy, Mixture, Outcome, Policy};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq)]
pub enum FileError {
    /// Malformed JSON or a field of the wrong type.
    Syntax { line: usize, column: usize, message: String },
    /// Well-formed document describing an invalid game or policy.
    Invalid(String),
}

impl fmt::Display for FileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FileError::Syntax { line, column, message } => {
                write!(f, "line {line}, column {column}: {message}")
            }
            FileError::Invalid(message) => f.write_str(message),
        }
    }
}

impl std::error::Error for FileError {}

impl From<serde_json::Error> for FileError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        let message = match message.rfind(" at line ") {
            Some(cut) => message[..cut].to_string(),
            None => message,
        };
        FileError::Syntax { line: e.line(), column: e.column(), message }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m: usize,
    pub n: usize,
    pub leader: Vec<Vec<f64>>,
    pub types: Vec<TypeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TypeEntry {
    pub id: String,
    pub prior: f64,
    pub payoff: Vec<Vec<f64>>,
}

fn check_version(v: &str) -> Result<(), FileError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FileError::Invalid(format!("unsupported format_version {v:?} (expected \"{FORMAT_VERSION}\")")))
    }
}

fn matrix(rows: &[Vec<f64>], m: usize, n: usize, what: &str) -> Result<Matrix, FileError> {
    if rows.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(FileError::Invalid(format!("{what} must be {m}x{n}")));
    }
    Matrix::from_rows(rows).map_err(|e| FileError::Invalid(format!("{what}: {e}")))
}

impl GameFile {
    pub fn from_game(game: &Game) -> Self {
        GameFile {
            format_version: FORMAT_VERSION.into(),
            name: game.name().map(String::from),
            m: game.m(),
            n: game.n(),
            leader: game.leader().to_rows(),
            types: game
                .types()
                .iter()
                .map(|t| TypeEntry { id: t.id.clone(), prior: t.prior, payoff: t.payoff.to_rows() })
                .collect(),
        }
    }

    pub fn to_game(&self) -> Result<Game, FileError> {
        check_version(&self.format_version)?;
        let leader = matrix(&self.leader, self.m, self.n, "leader")?;
        let types = self
            .types
            .iter()
            .map(|t| {
                let payoff = matrix(&t.payoff, self.m, self.n, &format!("payoff of type {:?}", t.id))?;
                Ok(FollowerType::new(t.id.clone(), t.prior, payoff))
            })
            .collect::<Result<Vec<_>, FileError>>()?;
        let game = Game::new(leader, types).map_err(|e| FileError::Invalid(e.to_string()))?;
        Ok(match &self.name {
            Some(name) => game.with_name(name.clone()),
            None => game,
        })
    }
}

pub fn parse_game(text: &str) -> Result<Game, FileError> {
    serde_json::from_str::<GameFile>(text)?.to_game()
}

pub fn game_to_string(game: &Game) -> String {
    let mut s = serde_json::to_string_pretty(&GameFile::from_game(game)).expect("game serialises");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyFile {
    pub format_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    /// One entry per report, keyed by type id.
    pub entries: Vec<PolicyEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyEntry {
    pub report: String,
    pub outcomes: Vec<OutcomeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeEntry {
    pub weight: f64,
    pub strategy: Vec<f64>,
    pub action: usize,
}

impl PolicyFile {
    pub fn from_policy(game: &Game, policy: &Policy) -> Self {
        PolicyFile {
            format_version: FORMAT_VERSION.into(),
            game: game.name().map(String::from),
            method: None,
            objective: None,
            entries: policy
                .entries()
                .iter()
                .enumerate()
                .map(|(t, mixture)| PolicyEntry {
                    report: game.type_id(t).to_string(),
                    outcomes: mixture
                        .entries()
                        .iter()
                        .map(|(w, o)| OutcomeEntry {
                            weight: *w,
                            strategy: o.strategy.probs().to_vec(),
                            action: o.action,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Entries may appear in any order but must cover every type once.
    pub fn to_policy(&self, game: &Game) -> Result<Policy, FileError> {
        check_version(&self.format_version)?;
        let mut slots: Vec<Option<Mixture>> = vec![None; game.num_types()];
        for entry in &self.entries {
            let t = game
                .type_index(&entry.report)
                .ok_or_else(|| FileError::Invalid(format!("unknown report {:?}", entry.report)))?;
            if slots[t].is_some() {
                return Err(FileError::Invalid(format!("report {:?} listed twice", entry.report)));
            }
            let outcomes = entry
                .outcomes
                .iter()
                .map(|o| {
                    let x = MixedStrategy::new(o.strategy.clone())
                        .map_err(|e| FileError::Invalid(format!("report {:?}: {e}", entry.report)))?;
                    Ok((o.weight, Outcome::new(x, o.action)))
                })
                .collect::<Result<Vec<_>, FileError>>()?;
            let mixture = Mixture::new(outcomes)
                .map_err(|e| FileError::Invalid(format!("report {:?}: {e}", entry.report)))?;
            slots[t] = Some(mixture);
        }
        let entries = slots
            .into_iter()
            .enumerate()
            .map(|(t, m)| {
                m.ok_or_else(|| FileError::Invalid(format!("no entry for report {:?}", game.type_id(t))))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Policy::new(entries))
    }
}

pub fn parse_policy(text: &str, game: &Game) -> Result<Policy, FileError> {
    serde_json::from_str::<PolicyFile>(text)?.to_policy(game)
}

pub fn policy_to_string(file: &PolicyFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("policy serialises");
    s.push('\n');
    s
}
