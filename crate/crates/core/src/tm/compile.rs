//! Theories whose models are runs of a machine on its input.
//!
//! Time and tape positions share the successor chain `zero, S(zero), ..`.
//! `C(x, y)` is the symbol in cell `y` at time `x`, `I(x)` the state and
//! `H(x)` the head position; `h` is the halting time.

use serde::Serialize;

use super::{Move, NTMPair, TMSpec, TmError};
use crate::axioms::{AxiomSetId, END, SUCC, ZERO};
use crate::logic::{Formula, Sentence, Term, Vocabulary};
use crate::machine::{FFOTMachine, Include, SimpleSequence, WordEncodingConfig};
use crate::structures::{Element, FiniteStructure};

pub const TM_CELL: &str = "C";
pub const TM_STATE: &str = "I";
pub const TM_HEAD: &str = "H";
pub const TM_HALT: &str = "h";

fn v(x: &str) -> Term {
    Term::var(x)
}

fn c(x: &str) -> Term {
    Term::cnst(x)
}

fn s(t: Term) -> Term {
    Term::app1(SUCC, t)
}

fn state_of(t: Term) -> Term {
    Term::app1(TM_STATE, t)
}

fn head(t: Term) -> Term {
    Term::app1(TM_HEAD, t)
}

fn cell(x: Term, y: Term) -> Term {
    Term::app(TM_CELL, vec![x, y])
}

fn eq(a: Term, b: Term) -> Formula {
    Formula::eq(a, b)
}

fn sentence(f: Formula) -> Sentence {
    Sentence::new(f).expect("compiled sentences are closed")
}

/// `(I(z1) = s) & (C(z1, z2) = a)`.
fn mu(state: &str, symbol: &str, z1: Term, z2: Term) -> Formula {
    Formula::and(eq(state_of(z1.clone()), c(state)), eq(cell(z1, z2), c(symbol)))
}

/// How cell `z1` relates to cell `z2` under a move.
fn pi(mv: Move, z1: Term, z2: Term) -> Formula {
    match mv {
        Move::Right => eq(z2, s(z1)),
        Move::Pause => eq(z2, z1),
        Move::Left => eq(s(z2), z1),
    }
}

/// The sentence for one `(t, b)` group: the antecedent implies one of the
/// group's rules. An empty group means the configuration cannot occur.
fn group_sentence(spec: &TMSpec, t: &str, b: &str) -> Sentence {
    let x = || v("x");
    let ante = mu(t, b, x(), head(x()));
    let options = spec.rules_for(t, b).into_iter().map(|r| {
        Formula::and(
            mu(&r.next, &r.write, s(x()), head(x())),
            pi(r.mv, head(x()), head(s(x()))),
        )
    });
    let body = match Formula::disjunction(options) {
        Some(cons) => Formula::implies(ante, cons),
        None => Formula::not(ante),
    };
    sentence(Formula::forall("x", body))
}

/// One sentence per `(t, b)` with `t` non-halting, in declaration order. A
/// deterministic machine gets the single-rule form, a nondeterministic one
/// a disjunction over the group.
pub fn rule_sentences(spec: &TMSpec) -> Result<Vec<Sentence>, TmError> {
    let rep = super::validate_tm(spec);
    if let Some(e) = rep.errors.first() {
        return Err(TmError::Invalid(e.to_string()));
    }
    Ok(spec
        .states
        .iter()
        .filter(|t| !spec.is_halting(t))
        .flat_map(|t| spec.alphabet.iter().map(move |b| group_sentence(spec, t, b)))
        .collect())
}

/// `h` is the first time either state is reached, and both states absorb.
pub fn halting_sentences(accept: &str, reject: &str) -> Vec<Sentence> {
    let x = || v("x");
    let mut out = Vec::new();
    for st in [accept, reject] {
        out.push(sentence(Formula::forall(
            "x",
            Formula::implies(
                Formula::and(
                    eq(state_of(s(x())), c(st)),
                    Formula::not(eq(state_of(x()), c(st))),
                ),
                eq(c(TM_HALT), s(x())),
            ),
        )));
        out.push(sentence(Formula::forall(
            "x",
            Formula::implies(eq(state_of(x()), c(st)), eq(state_of(s(x())), c(st))),
        )));
    }
    out
}

fn vocabulary(symbols: &[String], states: &[String], finite: bool) -> Result<Vocabulary, TmError> {
    let mut consts = vec![ZERO];
    if finite {
        consts.push(END);
    }
    consts.push(TM_HALT);
    consts.extend(symbols.iter().map(String::as_str));
    consts.extend(states.iter().map(String::as_str));
    Ok(Vocabulary::from_symbols(
        [],
        [(SUCC, 1), (TM_CELL, 2), (TM_STATE, 1), (TM_HEAD, 1)],
        consts,
    )?)
}

/// `(H(zero) = S(zero)) & (C(zero, zero) = L)`, optionally with the start
/// state.
fn start(left_end: &str, initial: Option<&str>) -> Sentence {
    let z = || c(ZERO);
    let mut f = Formula::and(eq(head(z()), s(z())), eq(cell(z(), z()), c(left_end)));
    if let Some(s0) = initial {
        f = Formula::and(f, eq(state_of(z()), c(s0)));
    }
    sentence(f)
}

fn blank_propagation(blank: &str) -> Sentence {
    let y = || v("y");
    sentence(Formula::forall(
        "y",
        Formula::implies(
            eq(cell(c(ZERO), y()), c(blank)),
            eq(cell(c(ZERO), s(y())), c(blank)),
        ),
    ))
}

/// Cells away from the head keep their symbol.
fn frame() -> Sentence {
    let (x, y) = (|| v("x"), || v("y"));
    sentence(Formula::forall_many(
        &["x", "y"],
        Formula::implies(
            Formula::not(eq(head(x()), y())),
            eq(cell(s(x()), y()), cell(x(), y())),
        ),
    ))
}

fn word_encoding(spec: &TMSpec) -> Result<WordEncodingConfig, TmError> {
    let seq = SimpleSequence::new(cell(c(ZERO), v("y")), s(v("y")), s(c(ZERO)))
        .map_err(|e| TmError::Invalid(e.to_string()))?;
    WordEncodingConfig::new(seq, spec.input.clone(), &spec.blank, true).map_err(|e| TmError::Invalid(e.to_string()))
}

fn distinct(names: &[String]) -> Option<Include> {
    (names.len() >= 2).then(|| {
        let ns: Vec<&str> = names.iter().map(String::as_str).collect();
        Include::distinct(&ns)
    })
}

fn halting_outputs(m: FFOTMachine, labels: [(&str, &str); 2]) -> Result<FFOTMachine, TmError> {
    let mut m = m;
    for (label, st) in labels {
        let out = vec![sentence(eq(state_of(c(TM_HALT)), c(st)))];
        m = m.with_output(label, out).map_err(|e| TmError::Invalid(e.to_string()))?;
    }
    Ok(m)
}

fn single(spec: &TMSpec, finite: bool) -> Result<FFOTMachine, TmError> {
    if !spec.deterministic {
        return Err(TmError::Nondeterministic);
    }
    let rules = rule_sentences(spec)?;
    let reject = spec
        .reject
        .as_deref()
        .ok_or_else(|| TmError::Invalid("a deterministic machine needs a reject state".into()))?;
    let vocab = vocabulary(&spec.alphabet, &spec.states, finite)?;
    let mut theory = vec![
        start(&spec.left_end, Some(&spec.initial)),
        blank_propagation(&spec.blank),
        frame(),
    ];
    theory.extend(rules);
    theory.extend(halting_sentences(&spec.accept, reject));
    let successor = if finite { AxiomSetId::PsaF } else { AxiomSetId::Psa };
    let invalid = |e: crate::machine::MachineError| TmError::Invalid(e.to_string());
    let mut m = FFOTMachine::new(vocab, theory)
        .and_then(|m| m.with_include(Include::new(AxiomSetId::Eq)))
        .and_then(|m| m.with_include(Include::new(successor)))
        .map_err(invalid)?;
    for inc in [distinct(&spec.alphabet), distinct(&spec.states)].into_iter().flatten() {
        m = m.with_include(inc).map_err(invalid)?;
    }
    let m = halting_outputs(m, [("accept", &spec.accept), ("reject", reject)])?;
    m.with_word_encoding(word_encoding(spec)?).map_err(invalid)
}

/// The machine over the infinite successor axioms. It has no finite
/// models, so the bounded runtime can only report that.
pub fn tm_to_ffot_infinite(spec: &TMSpec) -> Result<FFOTMachine, TmError> {
    single(spec, false)
}

/// The same machine over the finite successor axioms; a run of `n` steps
/// fits in a model of size `n + 1`.
pub fn tm_to_ffot_finite(spec: &TMSpec) -> Result<FFOTMachine, TmError> {
    single(spec, true)
}

/// One theory running either machine: the start state is one of the two,
/// the run must end in one of the accept states, and `I(h)` tells which.
///
/// Every non-accepting `(t, b)` group is compiled, so a configuration with
/// no applicable rule (a rejecting halt) cannot occur in a model at all.
pub fn ntm_pair_to_ffot(pair: &NTMPair) -> Result<FFOTMachine, TmError> {
    let (n1, n2) = (&pair.first, &pair.second);
    let mut symbols = n1.alphabet.clone();
    symbols.extend(n2.alphabet.iter().filter(|b| !n1.alphabet.contains(b)).cloned());
    let states: Vec<String> = n1.states.iter().chain(&n2.states).cloned().collect();
    let vocab = vocabulary(&symbols, &states, true)?;
    let (a1, a2) = (&n1.accept, &n2.accept);
    let z = || c(ZERO);
    let mut theory = vec![
        start(&n1.left_end, None),
        sentence(Formula::or(
            eq(state_of(z()), c(&n1.initial)),
            eq(state_of(z()), c(&n2.initial)),
        )),
        blank_propagation(&n1.blank),
        frame(),
        sentence(Formula::or(
            eq(state_of(c(TM_HALT)), c(a1)),
            eq(state_of(c(TM_HALT)), c(a2)),
        )),
    ];
    for m in [n1, n2] {
        for t in m.states.iter().filter(|t| **t != m.accept) {
            for b in &symbols {
                theory.push(group_sentence(m, t, b));
            }
        }
    }
    theory.extend(halting_sentences(a1, a2));
    let invalid = |e: crate::machine::MachineError| TmError::Invalid(e.to_string());
    let mut m = FFOTMachine::new(vocab, theory)
        .and_then(|m| m.with_include(Include::new(AxiomSetId::Eq)))
        .and_then(|m| m.with_include(Include::new(AxiomSetId::PsaF)))
        .map_err(invalid)?;
    for inc in [distinct(&symbols), distinct(&states)].into_iter().flatten() {
        m = m.with_include(inc).map_err(invalid)?;
    }
    let m = halting_outputs(m, [("accept_1", a1), ("accept_2", a2)])?;
    m.with_word_encoding(word_encoding(n1)?).map_err(invalid)
}

/// One time step read off a model, positions counted along the chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub state: String,
    pub head: usize,
    pub read: String,
}

/// The run a model describes, and which machine's rules it follows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    /// Index into the machines passed to `extract_trace`.
    pub machine: Option<usize>,
    pub steps: Vec<TraceStep>,
    pub accepted: bool,
    /// Transitions no rule of the running machine explains.
    pub illegal: Vec<String>,
}

/// Walks the chain `zero, S(zero), ..` of a model of a compiled theory up
/// to the first accepting time (or the end of the chain) and checks every
/// transition against the rules of whichever machine owns the start state.
pub fn extract_trace(machines: &[&TMSpec], a: &FiniteStructure) -> Result<Trace, TmError> {
    let val = |name: &str| {
        a.constant(name)
            .ok_or_else(|| TmError::Invalid(format!("model lacks constant `{name}`")))
    };
    let f1 = |f: &str, x: Element| a.function(f, &[x]).expect("compiled vocabulary");
    let cell_at = |x: Element, y: Element| a.function(TM_CELL, &[x, y]).expect("compiled vocabulary");
    let mut chain = vec![val(ZERO)?];
    loop {
        let next = f1(SUCC, *chain.last().expect("non-empty"));
        if chain.contains(&next) {
            break;
        }
        chain.push(next);
    }
    let pos = |e: Element| chain.iter().position(|&p| p == e);
    let name_among = |names: &[String], e: Element| -> Option<String> {
        names.iter().find(|n| a.constant(n) == Some(e)).cloned()
    };
    let all_states: Vec<String> = machines.iter().flat_map(|m| m.states.clone()).collect();
    let all_symbols: Vec<String> = machines.iter().flat_map(|m| m.alphabet.clone()).collect();
    let state_name = |t: Element| name_among(&all_states, f1(TM_STATE, t)).unwrap_or_else(|| "?".into());
    let symbol_name = |x: Element, y: Element| name_among(&all_symbols, cell_at(x, y)).unwrap_or_else(|| "?".into());

    let first = state_name(chain[0]);
    let machine = machines.iter().position(|m| m.initial == first);
    let mut trace = Trace {
        machine,
        steps: Vec::new(),
        accepted: false,
        illegal: Vec::new(),
    };
    let Some(mi) = machine else {
        trace.illegal.push(format!("start state `{first}` starts no machine"));
        return Ok(trace);
    };
    let spec = machines[mi];
    for (i, &t) in chain.iter().enumerate() {
        let st = state_name(t);
        let hd = f1(TM_HEAD, t);
        let read = symbol_name(t, hd);
        let head_pos = pos(hd);
        trace.steps.push(TraceStep {
            state: st.clone(),
            head: head_pos.unwrap_or(usize::MAX),
            read: read.clone(),
        });
        if st == spec.accept {
            trace.accepted = true;
            break;
        }
        if !spec.states.contains(&st) {
            trace.illegal.push(format!("time {i}: state `{st}` is foreign to the running machine"));
            break;
        }
        let nt = f1(SUCC, t);
        if nt == t {
            break;
        }
        let next_state = state_name(nt);
        let next_head = f1(TM_HEAD, nt);
        let written = symbol_name(nt, hd);
        let fits = spec.rules_for(&st, &read).into_iter().any(|r| {
            r.next == next_state
                && r.write == written
                && match r.mv {
                    Move::Right => next_head == f1(SUCC, hd),
                    Move::Pause => next_head == hd,
                    Move::Left => f1(SUCC, next_head) == hd,
                }
        });
        if !fits {
            trace.illegal.push(format!(
                "time {i}: ({st}, {read}) -> ({next_state}, {written}) matches no rule"
            ));
        }
        for &y in &chain {
            if y != hd && cell_at(nt, y) != cell_at(t, y) {
                trace.illegal.push(format!("time {i}: cell {} changed away from the head", pos(y).unwrap_or(0)));
            }
        }
    }
    Ok(trace)
}
