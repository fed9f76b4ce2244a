//! FFOT machines: a theory, named inputs and mutually exclusive named
//! outputs, run by bounded model search.
//!
//! `compute` never enumerates models outright. For an input `Φ` it asks,
//! per output label `j`, whether `T ∪ Φ ∪ O_j` has a model in range. Two
//! satisfiable labels make the result undefined. A single one is confirmed
//! by showing `T ∪ Φ ∪ {¬⋀O_j}` has no model in range.

mod encoding;
mod format;

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

pub use encoding::{decode, encode_word, SimpleSequence, WordEncodingConfig, SEQUENCE_VAR};
pub use format::{parse_machine, write_machine};

use crate::axioms::{distinct_constants_axioms, AxiomSetId};
use crate::finder::{
    find_min_model_size, satisfiable_within, FinderError, MinSize, SatWithin, Satisfiability,
    SearchConfig,
};
use crate::logic::{LogicError, Sentence, Vocabulary};
use crate::structures::{write_structure, FiniteStructure};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("letter `{0}` is outside the input alphabet")]
    OutsideAlphabet(char),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("machine has no word encoding")]
    NoWordEncoding,
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Finder(#[from] FinderError),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// An axiom set pulled into a machine's theory. `args` only matters for
/// `distinct`, where it names the constants (all constants when empty).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Include {
    pub set: AxiomSetId,
    pub args: Vec<String>,
}

impl Include {
    pub fn new(set: AxiomSetId) -> Self {
        Include { set, args: Vec::new() }
    }

    pub fn distinct(consts: &[&str]) -> Self {
        Include {
            set: AxiomSetId::Distinct,
            args: consts.iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FFOTMachine {
    vocab: Vocabulary,
    theory: Vec<Sentence>,
    includes: Vec<Include>,
    inputs: Vec<(String, Vec<Sentence>)>,
    outputs: Vec<(String, Vec<Sentence>)>,
    word_encoding: Option<WordEncodingConfig>,
}

fn same_set(a: &[Sentence], b: &[Sentence]) -> bool {
    a.iter().all(|s| b.contains(s)) && b.iter().all(|s| a.contains(s))
}

fn check_sentences(vocab: &Vocabulary, what: &str, ss: &[Sentence]) -> Result<(), MachineError> {
    for s in ss {
        s.formula()
            .check(vocab)
            .map_err(|e| MachineError::Invalid(format!("{what}: `{s}`: {e}")))?;
    }
    Ok(())
}

impl FFOTMachine {
    pub fn new(vocab: Vocabulary, theory: Vec<Sentence>) -> Result<Self, MachineError> {
        check_sentences(&vocab, "theory", &theory)?;
        Ok(FFOTMachine {
            vocab,
            theory,
            includes: Vec::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            word_encoding: None,
        })
    }

    /// Adds an axiom set; its symbols join the vocabulary.
    pub fn with_include(mut self, inc: Include) -> Result<Self, MachineError> {
        if let Some(v) = inc.set.vocabulary() {
            self.vocab = self.vocab.merge(&v)?;
        }
        for c in &inc.args {
            if self.vocab.constant_index(c).is_none() {
                return Err(MachineError::Invalid(format!("`{c}` is not a constant")));
            }
        }
        if inc.set == AxiomSetId::Distinct && !inc.args.is_empty() && inc.args.len() < 2 {
            return Err(MachineError::Invalid("distinct needs at least two constants".into()));
        }
        self.includes.push(inc);
        Ok(self)
    }

    pub fn with_input(mut self, label: &str, ss: Vec<Sentence>) -> Result<Self, MachineError> {
        check_sentences(&self.vocab, label, &ss)?;
        if self.inputs.iter().any(|(l, _)| l == label) {
            return Err(MachineError::Invalid(format!("input label `{label}` used twice")));
        }
        self.inputs.push((label.to_string(), ss));
        Ok(self)
    }

    pub fn with_output(mut self, label: &str, ss: Vec<Sentence>) -> Result<Self, MachineError> {
        check_sentences(&self.vocab, label, &ss)?;
        if self.outputs.iter().any(|(l, _)| l == label) {
            return Err(MachineError::Invalid(format!("output label `{label}` used twice")));
        }
        if let Some((other, _)) = self.outputs.iter().find(|(_, o)| same_set(o, &ss)) {
            return Err(MachineError::Invalid(format!(
                "outputs `{other}` and `{label}` are the same set"
            )));
        }
        self.outputs.push((label.to_string(), ss));
        Ok(self)
    }

    pub fn with_word_encoding(mut self, enc: WordEncodingConfig) -> Result<Self, MachineError> {
        for t in (0..3).map(|i| enc.sequence.term(i)) {
            t.check(&self.vocab)?;
        }
        for c in enc.alphabet.iter().map(|(_, c)| c).chain([&enc.blank]) {
            if self.vocab.constant_index(c).is_none() {
                return Err(MachineError::Invalid(format!("alphabet symbol `{c}` is not a constant")));
            }
        }
        self.word_encoding = Some(enc);
        Ok(self)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    /// The sentences written out explicitly, without includes.
    pub fn theory(&self) -> &[Sentence] {
        &self.theory
    }

    pub fn includes(&self) -> &[Include] {
        &self.includes
    }

    pub fn inputs(&self) -> &[(String, Vec<Sentence>)] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[(String, Vec<Sentence>)] {
        &self.outputs
    }

    pub fn output(&self, label: &str) -> Option<&[Sentence]> {
        self.outputs
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, o)| o.as_slice())
    }

    pub fn word_encoding(&self) -> Option<&WordEncodingConfig> {
        self.word_encoding.as_ref()
    }

    /// Includes expanded in order, then the explicit theory.
    pub fn full_theory(&self) -> Vec<Sentence> {
        let mut out = Vec::new();
        for inc in &self.includes {
            if inc.set == AxiomSetId::Distinct && !inc.args.is_empty() {
                let cs: Vec<&str> = inc.args.iter().map(String::as_str).collect();
                out.extend(distinct_constants_axioms(&cs));
            } else {
                out.extend(inc.set.sentences(&self.vocab));
            }
        }
        out.extend(self.theory.iter().cloned());
        out
    }

    /// The sentence set an input stands for.
    pub fn resolve(&self, input: &Input) -> Result<Vec<Sentence>, MachineError> {
        match input {
            Input::Label(l) => self
                .inputs
                .iter()
                .find(|(k, _)| k == l)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| MachineError::UnknownLabel(l.clone())),
            Input::Sentences(ss) => {
                check_sentences(&self.vocab, "input", ss)?;
                Ok(ss.clone())
            }
            Input::Word(w) => {
                let enc = self.word_encoding.as_ref().ok_or(MachineError::NoWordEncoding)?;
                encode_word(enc, w)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Input {
    Label(String),
    Sentences(Vec<Sentence>),
    Word(String),
}

impl Input {
    pub fn describe(&self) -> String {
        match self {
            Input::Label(l) => l.clone(),
            Input::Sentences(ss) => {
                let parts: Vec<String> = ss.iter().map(|s| s.to_string()).collect();
                format!("{{{}}}", parts.join(", "))
            }
            Input::Word(w) => format!("word \"{w}\""),
        }
    }
}

fn structure_text<S: serde::Serializer>(a: &FiniteStructure, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&write_structure(a))
}

fn structure_pair<S: serde::Serializer>(ws: &[FiniteStructure; 2], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    for w in ws {
        seq.serialize_element(&write_structure(w))?;
    }
    seq.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NoOutputReason {
    /// `T ∪ Φ` has no model in range.
    NoModels,
    /// A model of `T ∪ Φ` satisfies no output set.
    ModelWithoutOutput {
        #[serde(serialize_with = "structure_text")]
        witness: Box<FiniteStructure>,
    },
    /// One output is satisfiable but a model falsifying it also exists.
    NotEntailed {
        label: String,
        #[serde(serialize_with = "structure_text")]
        witness: Box<FiniteStructure>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum ComputeStatus {
    Output { label: String },
    Undefined {
        labels: [String; 2],
        #[serde(serialize_with = "structure_pair")]
        witnesses: [FiniteStructure; 2],
    },
    NoOutputAtBound { reason: NoOutputReason },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComputeResult {
    #[serde(flatten)]
    pub status: ComputeStatus,
    pub size_range: (usize, usize),
    pub sizes_checked: Vec<usize>,
    pub models_examined: usize,
    /// Satisfiability queries issued.
    pub queries: usize,
}

impl ComputeResult {
    pub fn output_label(&self) -> Option<&str> {
        match &self.status {
            ComputeStatus::Output { label } => Some(label),
            _ => None,
        }
    }
}

/// Bookkeeping shared by the queries of one call: a single deadline and
/// running totals.
struct Session {
    cfg: SearchConfig,
    deadline: Option<Instant>,
    sizes: Vec<usize>,
    examined: usize,
    queries: usize,
}

impl Session {
    fn new(cfg: &SearchConfig) -> Self {
        Session {
            cfg: cfg.clone(),
            deadline: cfg.time_budget.map(|b| Instant::now() + b),
            sizes: Vec::new(),
            examined: 0,
            queries: 0,
        }
    }

    fn sat(&mut self, vocab: &Vocabulary, ss: &[Sentence]) -> Result<SatWithin, MachineError> {
        let budget = self.deadline.map(|d| d.saturating_duration_since(Instant::now()));
        let r = satisfiable_within(vocab, ss, &self.cfg.clone().with_time_budget(budget))?;
        self.queries += 1;
        self.examined += r.models_examined;
        for s in &r.sizes_checked {
            if !self.sizes.contains(s) {
                self.sizes.push(*s);
            }
        }
        Ok(r)
    }

    fn finish(mut self, status: ComputeStatus) -> ComputeResult {
        self.sizes.sort_unstable();
        ComputeResult {
            status,
            size_range: (self.cfg.min_size, self.cfg.max_size),
            sizes_checked: self.sizes,
            models_examined: self.examined,
            queries: self.queries,
        }
    }
}

fn with(base: &[Sentence], extra: &[Sentence]) -> Vec<Sentence> {
    base.iter().chain(extra).cloned().collect()
}

/// Bounded `M(Φ)`: the output label entailed by `T ∪ Φ` over every model
/// in the size range.
pub fn compute(m: &FFOTMachine, input: &Input, cfg: &SearchConfig) -> Result<ComputeResult, MachineError> {
    cfg.validate()?;
    let base = with(&m.full_theory(), &m.resolve(input)?);
    let mut session = Session::new(cfg);
    let mut hits: Vec<(usize, FiniteStructure)> = Vec::new();
    for (j, (_, out)) in m.outputs.iter().enumerate() {
        let r = session.sat(&m.vocab, &with(&base, out))?;
        match r.result {
            Satisfiability::Satisfiable(w) => {
                hits.push((j, *w));
                if hits.len() == 2 {
                    let (b, wb) = hits.pop().expect("two hits");
                    let (a, wa) = hits.pop().expect("two hits");
                    let labels = [m.outputs[a].0.clone(), m.outputs[b].0.clone()];
                    return Ok(session.finish(ComputeStatus::Undefined {
                        labels,
                        witnesses: [wa, wb],
                    }));
                }
            }
            Satisfiability::Unknown => return Ok(session.finish(ComputeStatus::Unknown)),
            Satisfiability::Unsatisfiable => {}
        }
    }
    let Some((j, _)) = hits.pop() else {
        let r = session.sat(&m.vocab, &base)?;
        let status = match r.result {
            Satisfiability::Satisfiable(w) => ComputeStatus::NoOutputAtBound {
                reason: NoOutputReason::ModelWithoutOutput { witness: w },
            },
            Satisfiability::Unsatisfiable => ComputeStatus::NoOutputAtBound {
                reason: NoOutputReason::NoModels,
            },
            Satisfiability::Unknown => ComputeStatus::Unknown,
        };
        return Ok(session.finish(status));
    };
    let (label, out) = &m.outputs[j];
    let mut counter = base;
    if let Some(all) = Sentence::conjoin(out) {
        counter.push(all.negated());
    } else {
        // The empty output set holds in every model.
        return Ok(session.finish(ComputeStatus::Output { label: label.clone() }));
    }
    let r = session.sat(&m.vocab, &counter)?;
    let status = match r.result {
        Satisfiability::Unsatisfiable => ComputeStatus::Output { label: label.clone() },
        // Every other output was unsatisfiable in range, so this model
        // satisfies no output at all.
        Satisfiability::Satisfiable(w) => ComputeStatus::NoOutputAtBound {
            reason: NoOutputReason::NotEntailed {
                label: label.clone(),
                witness: w,
            },
        },
        Satisfiability::Unknown => ComputeStatus::Unknown,
    };
    Ok(session.finish(status))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub result: ComputeResult,
}

/// Decides a word: accept or reject when `compute` lands on the matching
/// label, unknown otherwise (the result carries the diagnostics).
pub fn decide_word(
    m: &FFOTMachine,
    enc: &WordEncodingConfig,
    w: &str,
    accept: &str,
    reject: &str,
    cfg: &SearchConfig,
) -> Result<Decision, MachineError> {
    for l in [accept, reject] {
        if m.output(l).is_none() {
            return Err(MachineError::UnknownLabel(l.to_string()));
        }
    }
    let phi = encode_word(enc, w)?;
    let result = compute(m, &Input::Sentences(phi), cfg)?;
    let verdict = match result.output_label() {
        Some(l) if l == accept => Verdict::Accept,
        Some(l) if l == reject => Verdict::Reject,
        _ => Verdict::Unknown,
    };
    Ok(Decision { verdict, result })
}

/// Resources used on `w`: the smallest model size of `T ∪ Φ_X^w` up to
/// `max_size`.
pub fn measure_resources(
    m: &FFOTMachine,
    enc: &WordEncodingConfig,
    w: &str,
    max_size: usize,
    cfg: &SearchConfig,
) -> Result<MinSize, MachineError> {
    if max_size == 0 {
        return Err(MachineError::Invalid("max_size must be at least 1".into()));
    }
    let ss = with(&m.full_theory(), &encode_word(enc, w)?);
    Ok(find_min_model_size(&m.vocab, &ss, max_size, &cfg.clone().with_sizes(1, max_size))?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum InputSatisfiability {
    Satisfiable { size: usize },
    NoModelsAtBound,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub labels: [String; 2],
    #[serde(serialize_with = "structure_text")]
    pub witness: Box<FiniteStructure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputCheck {
    pub input: String,
    pub satisfiability: InputSatisfiability,
    pub conflicts: Vec<Conflict>,
    /// Output pairs whose search ran out of budget.
    pub undecided_pairs: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub size_range: (usize, usize),
    pub checks: Vec<InputCheck>,
}

impl ValidationReport {
    /// Every input satisfiable in range and no output pair co-satisfiable.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| {
            matches!(c.satisfiability, InputSatisfiability::Satisfiable { .. })
                && c.conflicts.is_empty()
                && c.undecided_pairs.is_empty()
        })
    }

    pub fn conflicts(&self) -> impl Iterator<Item = (&str, &Conflict)> {
        self.checks
            .iter()
            .flat_map(|c| c.conflicts.iter().map(move |k| (c.input.as_str(), k)))
    }
}

/// Checks the labelled inputs and the encodings of `words`: each `T ∪ Φ`
/// should have a model in range, and no two outputs may hold together in a
/// model of it.
pub fn validate_machine(
    m: &FFOTMachine,
    words: &[&str],
    cfg: &SearchConfig,
) -> Result<ValidationReport, MachineError> {
    cfg.validate()?;
    let theory = m.full_theory();
    let mut inputs: Vec<Input> = m.inputs.iter().map(|(l, _)| Input::Label(l.clone())).collect();
    inputs.extend(words.iter().map(|w| Input::Word(w.to_string())));
    let mut checks = Vec::new();
    for input in &inputs {
        let base = with(&theory, &m.resolve(input)?);
        let mut session = Session::new(cfg);
        let r = session.sat(&m.vocab, &base)?;
        let satisfiability = match (r.result, r.size) {
            (Satisfiability::Satisfiable(_), Some(size)) => InputSatisfiability::Satisfiable { size },
            (Satisfiability::Unknown, _) => InputSatisfiability::Unknown,
            _ => InputSatisfiability::NoModelsAtBound,
        };
        let mut conflicts = Vec::new();
        let mut undecided_pairs = Vec::new();
        for (a, (la, oa)) in m.outputs.iter().enumerate() {
            for (lb, ob) in &m.outputs[a + 1..] {
                let both = with(&with(&base, oa), ob);
                let labels = [la.clone(), lb.clone()];
                match session.sat(&m.vocab, &both)?.result {
                    Satisfiability::Satisfiable(w) => conflicts.push(Conflict { labels, witness: w }),
                    Satisfiability::Unknown => undecided_pairs.push(labels),
                    Satisfiability::Unsatisfiable => {}
                }
            }
        }
        checks.push(InputCheck {
            input: input.describe(),
            satisfiability,
            conflicts,
            undecided_pairs,
        });
    }
    Ok(ValidationReport {
        size_range: (cfg.min_size, cfg.max_size),
        checks,
    })
}

/// The toy machine over `{R/1, f/1, c}` with `T = {∀x (R(x) ↔ R(f(x)))}`.
pub fn example_machine() -> FFOTMachine {
    use crate::logic::parse_sentence;
    let mut v = Vocabulary::new();
    v.add_relation("R", 1)
        .and_then(|v| v.add_function("f", 1))
        .and_then(|v| v.add_constant("c"))
        .expect("fresh names");
    let s = |t: &str| parse_sentence(t, &v).expect("well-formed");
    FFOTMachine::new(v.clone(), vec![s("forall x. (R(x) <-> R(f(x)))")])
        .and_then(|m| m.with_input("I_pos", vec![s("R(c)")]))
        .and_then(|m| m.with_input("I_neg", vec![s("~R(c)")]))
        .and_then(|m| m.with_output("O_pos", vec![s("R(f(c))")]))
        .and_then(|m| m.with_output("O_neg", vec![s("~R(f(f(c)))")]))
        .expect("valid machine")
}

#[cfg(test)]
mod tests;
