//! Turing machines on a one-way infinite tape, their reference simulators,
//! and their compilation into FFOT machines.
//!
//! Tape cell 0 holds the left-end marker; the input starts at cell 1 and is
//! followed by blanks, and the head starts on cell 1.

mod compile;
mod format;
mod simulate;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use compile::{
    extract_trace, halting_sentences, ntm_pair_to_ffot, rule_sentences, tm_to_ffot_finite,
    tm_to_ffot_infinite, Trace, TraceStep, TM_CELL, TM_HALT, TM_HEAD, TM_STATE,
};
pub use format::{parse_tmspec, write_tmspec};
pub use simulate::{run_trace, simulate_ntm, simulate_tm, Config, NtmOutcome, SimOutcome};

use crate::logic::LogicError;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TmError {
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("machine is nondeterministic")]
    Nondeterministic,
    #[error("letter `{0}` is outside the input alphabet")]
    OutsideAlphabet(char),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Move {
    Left,
    Pause,
    Right,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::Left => "LEFT",
            Move::Pause => "PAUSE",
            Move::Right => "RIGHT",
        })
    }
}

impl std::str::FromStr for Move {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "LEFT" | "L" => Ok(Move::Left),
            "PAUSE" | "P" => Ok(Move::Pause),
            "RIGHT" | "R" => Ok(Move::Right),
            _ => Err(format!("unknown move `{s}` (expected LEFT, PAUSE or RIGHT)")),
        }
    }
}

/// `(t, read; u, write, move)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Rule {
    pub state: String,
    pub read: String,
    pub next: String,
    pub write: String,
    pub mv: Move,
}

impl Rule {
    pub fn new(state: &str, read: &str, next: &str, write: &str, mv: Move) -> Rule {
        Rule {
            state: state.into(),
            read: read.into(),
            next: next.into(),
            write: write.into(),
            mv,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} -> {} {} {}", self.state, self.read, self.next, self.write, self.mv)
    }
}

/// A machine description. States and tape symbols become constants of the
/// compiled theory, so they must be identifiers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TMSpec {
    pub name: String,
    pub states: Vec<String>,
    /// Every tape symbol, including the left-end marker and the blank.
    pub alphabet: Vec<String>,
    /// Input letters and the tape symbols they stand for.
    pub input: Vec<(char, String)>,
    pub left_end: String,
    pub blank: String,
    pub rules: Vec<Rule>,
    pub initial: String,
    pub accept: String,
    pub reject: Option<String>,
    pub deterministic: bool,
}

impl TMSpec {
    pub fn is_halting(&self, state: &str) -> bool {
        state == self.accept || self.reject.as_deref() == Some(state)
    }

    pub fn rules_for(&self, state: &str, read: &str) -> Vec<&Rule> {
        self.rules
            .iter()
            .filter(|r| r.state == state && r.read == read)
            .collect()
    }

    pub fn symbol(&self, letter: char) -> Option<&str> {
        self.input.iter().find(|(l, _)| *l == letter).map(|(_, s)| s.as_str())
    }

    pub fn letters(&self) -> Vec<char> {
        self.input.iter().map(|(l, _)| *l).collect()
    }

    /// Tape symbols of `w`.
    pub fn tape_word(&self, w: &str) -> Result<Vec<String>, TmError> {
        w.chars()
            .map(|l| self.symbol(l).map(str::to_string).ok_or(TmError::OutsideAlphabet(l)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TmIssue {
    BadName { name: String, reason: String },
    UnknownState { name: String },
    UnknownSymbol { name: String },
    MissingRule { state: String, read: String },
    Nondeterministic { state: String, read: String, count: usize },
    RuleFromHaltingState { rule: String },
    DuplicateRule { rule: String },
    LeftAtLeftEnd { rule: String },
}

impl fmt::Display for TmIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TmIssue::BadName { name, reason } => write!(f, "`{name}`: {reason}"),
            TmIssue::UnknownState { name } => write!(f, "unknown state `{name}`"),
            TmIssue::UnknownSymbol { name } => write!(f, "unknown tape symbol `{name}`"),
            TmIssue::MissingRule { state, read } => write!(f, "no rule for ({state}, {read})"),
            TmIssue::Nondeterministic { state, read, count } => {
                write!(f, "{count} rules for ({state}, {read}) in a deterministic machine")
            }
            TmIssue::RuleFromHaltingState { rule } => write!(f, "rule `{rule}` fires from a halting state"),
            TmIssue::DuplicateRule { rule } => write!(f, "rule `{rule}` listed twice"),
            TmIssue::LeftAtLeftEnd { rule } => write!(f, "rule `{rule}` moves left off the left-end marker"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TmReport {
    pub errors: Vec<TmIssue>,
    pub warnings: Vec<TmIssue>,
}

impl TmReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Names the compiled theories already use.
pub const RESERVED: [&str; 7] = ["S", "C", "I", "H", "zero", "e", "h"];

/// Totality and determinism over the non-halting states, no rules out of
/// halting states, sane names; a left move off the marker is only a
/// warning.
pub fn validate_tm(spec: &TMSpec) -> TmReport {
    let mut rep = TmReport::default();
    let mut seen = BTreeSet::new();
    for name in spec.states.iter().chain(&spec.alphabet) {
        let reason = if !crate::logic::is_identifier(name) {
            Some("not an identifier")
        } else if RESERVED.contains(&name.as_str()) {
            Some("reserved by the compiled theory")
        } else if !seen.insert(name.clone()) {
            Some("declared twice")
        } else {
            None
        };
        if let Some(r) = reason {
            rep.errors.push(TmIssue::BadName {
                name: name.clone(),
                reason: r.into(),
            });
        }
    }
    let state = |s: &str, rep: &mut TmReport| {
        if !spec.states.iter().any(|x| x == s) {
            rep.errors.push(TmIssue::UnknownState { name: s.into() });
        }
    };
    let symbol = |s: &str, rep: &mut TmReport| {
        if !spec.alphabet.iter().any(|x| x == s) {
            rep.errors.push(TmIssue::UnknownSymbol { name: s.into() });
        }
    };
    state(&spec.initial, &mut rep);
    state(&spec.accept, &mut rep);
    if let Some(r) = &spec.reject {
        state(r, &mut rep);
        if *r == spec.accept {
            rep.errors.push(TmIssue::BadName {
                name: r.clone(),
                reason: "accept and reject coincide".into(),
            });
        }
    }
    symbol(&spec.left_end, &mut rep);
    symbol(&spec.blank, &mut rep);
    if spec.left_end == spec.blank {
        rep.errors.push(TmIssue::BadName {
            name: spec.blank.clone(),
            reason: "left-end marker and blank coincide".into(),
        });
    }
    for (i, (l, s)) in spec.input.iter().enumerate() {
        symbol(s, &mut rep);
        if *s == spec.left_end || *s == spec.blank || spec.input[..i].iter().any(|(m, t)| m == l || t == s) {
            rep.errors.push(TmIssue::BadName {
                name: s.clone(),
                reason: format!("input letter `{l}` is not a fresh tape symbol"),
            });
        }
    }
    for (i, r) in spec.rules.iter().enumerate() {
        state(&r.state, &mut rep);
        state(&r.next, &mut rep);
        symbol(&r.read, &mut rep);
        symbol(&r.write, &mut rep);
        if spec.rules[..i].contains(r) {
            rep.errors.push(TmIssue::DuplicateRule { rule: r.to_string() });
        }
        if spec.is_halting(&r.state) {
            rep.errors.push(TmIssue::RuleFromHaltingState { rule: r.to_string() });
        }
        if r.read == spec.left_end && r.mv == Move::Left {
            rep.warnings.push(TmIssue::LeftAtLeftEnd { rule: r.to_string() });
        }
    }
    for t in spec.states.iter().filter(|t| !spec.is_halting(t)) {
        for b in &spec.alphabet {
            let count = spec.rules_for(t, b).len();
            if count == 0 {
                rep.errors.push(TmIssue::MissingRule {
                    state: t.clone(),
                    read: b.clone(),
                });
            } else if count > 1 && spec.deterministic {
                rep.errors.push(TmIssue::Nondeterministic {
                    state: t.clone(),
                    read: b.clone(),
                    count,
                });
            }
        }
    }
    rep
}

/// Two machines over a shared input alphabet whose accepting computations
/// split the inputs between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NTMPair {
    pub first: TMSpec,
    pub second: TMSpec,
}

impl NTMPair {
    pub fn new(first: TMSpec, second: TMSpec) -> Result<Self, TmError> {
        for (i, m) in [&first, &second].into_iter().enumerate() {
            let rep = validate_tm(m);
            if let Some(e) = rep.errors.first() {
                return Err(TmError::Invalid(format!("machine {}: {e}", i + 1)));
            }
        }
        if let Some(s) = first.states.iter().find(|s| second.states.contains(s)) {
            return Err(TmError::Invalid(format!("state `{s}` belongs to both machines")));
        }
        if first.input != second.input {
            return Err(TmError::Invalid("the machines read different input alphabets".into()));
        }
        if first.left_end != second.left_end || first.blank != second.blank {
            return Err(TmError::Invalid("the machines disagree on the marker or the blank".into()));
        }
        for s in first.states.iter().chain(&second.states) {
            if first.alphabet.contains(s) || second.alphabet.contains(s) {
                return Err(TmError::Invalid(format!("`{s}` is both a state and a symbol")));
            }
        }
        Ok(NTMPair { first, second })
    }
}

#[cfg(test)]
mod tests;
