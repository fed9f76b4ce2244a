//! Step-by-step reference simulators.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use super::{Move, Rule, TMSpec, TmError};

/// State, head position and the tape up to its last written or input cell
/// (everything beyond is blank).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Config {
    pub state: String,
    pub head: usize,
    pub tape: Vec<String>,
}

impl Config {
    pub fn initial(spec: &TMSpec, state: &str, w: &str) -> Result<Config, TmError> {
        let mut tape = vec![spec.left_end.clone()];
        tape.extend(spec.tape_word(w)?);
        tape.push(spec.blank.clone());
        Ok(Config {
            state: state.to_string(),
            head: 1,
            tape,
        })
    }

    pub fn read(&self, blank: &str) -> String {
        self.tape.get(self.head).cloned().unwrap_or_else(|| blank.to_string())
    }

    /// The configuration after `r`; `None` when the head would leave the
    /// tape on the left.
    pub fn apply(&self, r: &Rule, blank: &str) -> Option<Config> {
        let mut next = self.clone();
        while next.tape.len() <= next.head {
            next.tape.push(blank.to_string());
        }
        next.tape[next.head] = r.write.clone();
        next.state = r.next.clone();
        next.head = match r.mv {
            Move::Left => next.head.checked_sub(1)?,
            Move::Pause => next.head,
            Move::Right => next.head + 1,
        };
        while next.tape.len() <= next.head {
            next.tape.push(blank.to_string());
        }
        Some(next)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum SimOutcome {
    Accepted { steps: usize },
    Rejected { steps: usize },
    /// A left move from cell 0.
    FellOffLeft { steps: usize },
    Timeout { steps: usize },
}

impl SimOutcome {
    pub fn steps(&self) -> usize {
        match *self {
            SimOutcome::Accepted { steps }
            | SimOutcome::Rejected { steps }
            | SimOutcome::FellOffLeft { steps }
            | SimOutcome::Timeout { steps } => steps,
        }
    }

    pub fn accepted(&self) -> bool {
        matches!(self, SimOutcome::Accepted { .. })
    }
}

fn deterministic_rule<'a>(spec: &'a TMSpec, c: &Config) -> Result<&'a Rule, TmError> {
    let read = c.read(&spec.blank);
    match spec.rules_for(&c.state, &read).as_slice() {
        [r] => Ok(r),
        [] => Err(TmError::Invalid(format!("no rule for ({}, {read})", c.state))),
        _ => Err(TmError::Nondeterministic),
    }
}

/// Every configuration from the start up to halting (inclusive) or until
/// `max_steps` steps have run.
pub fn run_trace(spec: &TMSpec, w: &str, max_steps: usize) -> Result<(Vec<Config>, SimOutcome), TmError> {
    if !spec.deterministic {
        return Err(TmError::Nondeterministic);
    }
    let mut c = Config::initial(spec, &spec.initial, w)?;
    let mut trace = vec![c.clone()];
    for steps in 0.. {
        if c.state == spec.accept {
            return Ok((trace, SimOutcome::Accepted { steps }));
        }
        if spec.reject.as_deref() == Some(c.state.as_str()) {
            return Ok((trace, SimOutcome::Rejected { steps }));
        }
        if steps == max_steps {
            return Ok((trace, SimOutcome::Timeout { steps }));
        }
        let r = deterministic_rule(spec, &c)?;
        match c.apply(r, &spec.blank) {
            Some(next) => c = next,
            None => return Ok((trace, SimOutcome::FellOffLeft { steps: steps + 1 })),
        }
        trace.push(c.clone());
    }
    unreachable!()
}

pub fn simulate_tm(spec: &TMSpec, w: &str, max_steps: usize) -> Result<SimOutcome, TmError> {
    run_trace(spec, w, max_steps).map(|(_, o)| o)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum NtmOutcome {
    Accepted { steps: usize },
    NoAcceptingPath,
}

impl NtmOutcome {
    pub fn accepted(&self) -> bool {
        matches!(self, NtmOutcome::Accepted { .. })
    }
}

/// Breadth-first search over computation paths of length at most
/// `max_steps`; reports the shortest accepting one.
pub fn simulate_ntm(spec: &TMSpec, w: &str, max_steps: usize) -> Result<NtmOutcome, TmError> {
    let start = Config::initial(spec, &spec.initial, w)?;
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((c, depth)) = queue.pop_front() {
        if c.state == spec.accept {
            return Ok(NtmOutcome::Accepted { steps: depth });
        }
        if depth == max_steps || spec.is_halting(&c.state) {
            continue;
        }
        let read = c.read(&spec.blank);
        for r in spec.rules_for(&c.state, &read) {
            if let Some(next) = c.apply(r, &spec.blank) {
                if seen.insert(next.clone()) {
                    queue.push_back((next, depth + 1));
                }
            }
        }
    }
    Ok(NtmOutcome::NoAcceptingPath)
}
