//! Exhaustive bounded search for finite models, and the bounded
//! satisfiability, entailment and minimal-size questions built on it.

mod compile;
mod engine;
mod ground;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::axioms::equality_axioms;
use crate::logic::{Sentence, Vocabulary};
use crate::structures::{EqualityMode, FiniteStructure};
use engine::{Control, Engine, Problem, RunEnd};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FinderError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("sentence `{sentence}` does not fit the vocabulary: {reason}")]
    Vocabulary { sentence: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub min_size: usize,
    pub max_size: usize,
    /// Maximum number of models to return; 0 means all.
    pub model_limit: usize,
    pub equality: EqualityMode,
    /// Least-number symmetry breaking: keeps at least one model per
    /// isomorphism class.
    pub symmetry_breaking: bool,
    /// Incremental evaluation of partial assignments. Turning it off leaves
    /// a plain generate-and-test search with the same results.
    pub pruning: bool,
    pub time_budget: Option<Duration>,
    pub jobs: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            min_size: 1,
            max_size: 1,
            model_limit: 0,
            equality: EqualityMode::Interpreted,
            symmetry_breaking: true,
            pruning: true,
            time_budget: None,
            jobs: 1,
        }
    }
}

impl SearchConfig {
    pub fn size(n: usize) -> Self {
        Self::sizes(n, n)
    }

    pub fn sizes(min_size: usize, max_size: usize) -> Self {
        SearchConfig {
            min_size,
            max_size,
            ..Self::default()
        }
    }

    pub fn with_sizes(mut self, min_size: usize, max_size: usize) -> Self {
        self.min_size = min_size;
        self.max_size = max_size;
        self
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.model_limit = limit;
        self
    }

    pub fn with_equality(mut self, mode: EqualityMode) -> Self {
        self.equality = mode;
        self
    }

    pub fn with_symmetry_breaking(mut self, on: bool) -> Self {
        self.symmetry_breaking = on;
        self
    }

    pub fn with_pruning(mut self, on: bool) -> Self {
        self.pruning = on;
        self
    }

    pub fn with_time_budget(mut self, budget: Option<Duration>) -> Self {
        self.time_budget = budget;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn validate(&self) -> Result<(), FinderError> {
        if self.min_size == 0 {
            return Err(FinderError::InvalidConfig("sizes start at 1".into()));
        }
        if self.max_size < self.min_size {
            return Err(FinderError::InvalidConfig(format!(
                "empty size range {}..{}",
                self.min_size, self.max_size
            )));
        }
        if self.jobs == 0 {
            return Err(FinderError::InvalidConfig("jobs must be at least 1".into()));
        }
        Ok(())
    }

    fn deadline(&self) -> Option<Instant> {
        self.time_budget.map(|b| Instant::now() + b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Complete,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct ModelSet {
    /// Models in canonical order.
    pub models: Vec<FiniteStructure>,
    pub sizes_checked: Vec<usize>,
    pub models_examined: usize,
    pub status: SearchStatus,
}

impl ModelSet {
    pub fn is_complete(&self) -> bool {
        self.status == SearchStatus::Complete
    }
}

/// Outcome of one fixed-size search.
struct SizeRun {
    models: Vec<FiniteStructure>,
    examined: usize,
    timed_out: bool,
}

const FRONTIER: usize = 64;
const FRONTIER_DEPTH: usize = 8;

fn pool(jobs: usize) -> Arc<rayon::ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();
    let pools = POOLS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut pools = pools.lock().expect("pool registry");
    Arc::clone(pools.entry(jobs).or_insert_with(|| {
        Arc::new(
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .expect("thread pool"),
        )
    }))
}

/// Sentences that actually need checking: duplicates are dropped and, under
/// identity equality, so are the equality axioms (they hold in every
/// structure).
fn effective_sentences(vocab: &Vocabulary, sentences: &[Sentence], mode: EqualityMode) -> Vec<Sentence> {
    let eq = match mode {
        EqualityMode::Interpreted => equality_axioms(vocab),
        EqualityMode::Axiomatic => Vec::new(),
    };
    let mut out: Vec<Sentence> = Vec::new();
    for s in sentences {
        if eq.iter().any(|e| e.formula().alpha_eq(s.formula())) {
            continue;
        }
        if !out.contains(s) {
            out.push(s.clone());
        }
    }
    out
}

fn check_vocabulary(vocab: &Vocabulary, sentences: &[Sentence]) -> Result<(), FinderError> {
    for s in sentences {
        s.formula().check(vocab).map_err(|e| FinderError::Vocabulary {
            sentence: s.to_string(),
            reason: e.to_string(),
        })?;
    }
    Ok(())
}

/// Searches one size. The space is split into a fixed frontier of subtrees
/// (independent of `jobs`); subtrees are searched in parallel and merged in
/// search order, so every reported number is schedule-independent.
fn search_size(
    vocab: &Arc<Vocabulary>,
    sentences: &[Sentence],
    size: usize,
    cfg: &SearchConfig,
    limit: usize,
    deadline: Option<Instant>,
) -> SizeRun {
    let problem = Problem::new(
        Arc::clone(vocab),
        sentences,
        size,
        cfg.equality,
        cfg.symmetry_breaking,
        cfg.pruning,
    );
    let empty = SizeRun {
        models: Vec::new(),
        examined: 0,
        timed_out: false,
    };
    let Some(root) = Engine::new(&problem) else {
        return empty;
    };
    let mut frontier = vec![root];
    for _ in 0..FRONTIER_DEPTH {
        if frontier.len() >= FRONTIER {
            break;
        }
        let mut next = Vec::new();
        let mut grew = false;
        for node in frontier {
            match node.children() {
                None => next.push(node),
                Some(children) => {
                    grew = true;
                    next.extend(children);
                }
            }
        }
        frontier = next;
        if !grew {
            break;
        }
    }
    let ctl = Control::new(deadline, frontier.len(), limit);
    let run = |(i, mut node): (usize, Engine<'_>)| {
        let mut found = Vec::new();
        if ctl.deadline.is_some_and(|d| Instant::now() >= d) {
            ctl.timed_out.store(true, std::sync::atomic::Ordering::Relaxed);
            return (found, false);
        }
        let end = node.run(i, &ctl, &mut |s| {
            found.push(s);
            limit == 0 || found.len() < limit
        });
        let finished = !matches!(end, RunEnd::Stopped);
        if finished {
            ctl.finish(i, found.len());
        }
        (found, finished)
    };
    let results: Vec<(Vec<FiniteStructure>, bool)> = if cfg.jobs <= 1 {
        let mut out = Vec::new();
        for (i, node) in frontier.into_iter().enumerate() {
            if ctl.past_cutoff(i) {
                out.push((Vec::new(), false));
                continue;
            }
            out.push(run((i, node)));
        }
        out
    } else {
        pool(cfg.jobs).install(|| frontier.into_par_iter().enumerate().map(run).collect())
    };
    let mut models = Vec::new();
    let mut examined = 0;
    for (found, _) in results.into_iter() {
        examined += found.len();
        for m in found {
            if limit == 0 || models.len() < limit {
                models.push(m);
            }
        }
        if limit != 0 && models.len() >= limit {
            break;
        }
    }
    SizeRun {
        models,
        examined,
        timed_out: ctl.timed_out.load(std::sync::atomic::Ordering::Relaxed),
    }
}

/// All models (up to the limit) of `sentences` over `vocab` at the sizes in
/// the configured range, smallest size first, canonical order within a size.
pub fn find_models(
    vocab: &Vocabulary,
    sentences: &[Sentence],
    cfg: &SearchConfig,
) -> Result<ModelSet, FinderError> {
    cfg.validate()?;
    check_vocabulary(vocab, sentences)?;
    let vocab = Arc::new(vocab.clone());
    let effective = effective_sentences(&vocab, sentences, cfg.equality);
    let deadline = cfg.deadline();
    let mut out = ModelSet {
        models: Vec::new(),
        sizes_checked: Vec::new(),
        models_examined: 0,
        status: SearchStatus::Complete,
    };
    for size in cfg.min_size..=cfg.max_size {
        let remaining = if cfg.model_limit == 0 {
            0
        } else {
            cfg.model_limit - out.models.len()
        };
        let mut run = search_size(&vocab, &effective, size, cfg, remaining, deadline);
        run.models.sort_by_cached_key(canonical_form);
        out.sizes_checked.push(size);
        out.models_examined += run.examined;
        out.models.extend(run.models);
        if run.timed_out {
            out.status = SearchStatus::BudgetExhausted;
            break;
        }
        if cfg.model_limit != 0 && out.models.len() >= cfg.model_limit {
            break;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub enum Satisfiability {
    Satisfiable(Box<FiniteStructure>),
    Unsatisfiable,
    Unknown,
}

impl Satisfiability {
    pub fn is_sat(&self) -> bool {
        matches!(self, Satisfiability::Satisfiable(_))
    }

    pub fn witness(&self) -> Option<&FiniteStructure> {
        match self {
            Satisfiability::Satisfiable(m) => Some(m),
            _ => None,
        }
    }
}

/// Whether `sentences` have a model of exactly `size` elements. Unlike
/// [`find_models`] this asks a CDCL solver about a propositional encoding,
/// which learns from conflicts and copes far better with theories whose
/// models are long chains.
pub fn satisfiable_at(
    vocab: &Vocabulary,
    sentences: &[Sentence],
    size: usize,
    cfg: &SearchConfig,
) -> Result<Satisfiability, FinderError> {
    let cfg = cfg.clone().with_sizes(size, size);
    cfg.validate()?;
    check_vocabulary(vocab, sentences)?;
    let vocab = Arc::new(vocab.clone());
    let effective = effective_sentences(&vocab, sentences, cfg.equality);
    let out = ground::solve(
        &vocab,
        &effective,
        size,
        cfg.equality,
        cfg.symmetry_breaking,
        cfg.deadline(),
    );
    Ok(match out {
        ground::SatOutcome::Model(m) => Satisfiability::Satisfiable(Box::new(m)),
        ground::SatOutcome::Unsat => Satisfiability::Unsatisfiable,
        ground::SatOutcome::Stopped => Satisfiability::Unknown,
    })
}

/// Smallest size with a model within the configured range.
#[derive(Clone, Debug)]
pub struct SatWithin {
    pub result: Satisfiability,
    pub size: Option<usize>,
    pub sizes_checked: Vec<usize>,
    pub models_examined: usize,
}

/// Looks for a model size by size; stops at the first size with one. With
/// `jobs > 1` consecutive sizes are tried in parallel batches, and the
/// batch is read back in size order, so the answer does not depend on
/// `jobs`.
pub fn satisfiable_within(
    vocab: &Vocabulary,
    sentences: &[Sentence],
    cfg: &SearchConfig,
) -> Result<SatWithin, FinderError> {
    cfg.validate()?;
    let mut sizes_checked = Vec::new();
    let deadline = cfg.deadline();
    let sizes: Vec<usize> = (cfg.min_size..=cfg.max_size).collect();
    for batch in sizes.chunks(cfg.jobs) {
        let budget = deadline.map(|d| d.saturating_duration_since(Instant::now()));
        let sized = cfg.clone().with_time_budget(budget);
        let one = |&size: &usize| satisfiable_at(vocab, sentences, size, &sized);
        let results: Vec<Result<Satisfiability, FinderError>> = if batch.len() == 1 {
            batch.iter().map(one).collect()
        } else {
            pool(cfg.jobs).install(|| batch.par_iter().map(one).collect())
        };
        for (&size, r) in batch.iter().zip(results) {
            let r = r?;
            sizes_checked.push(size);
            match r {
                Satisfiability::Satisfiable(_) => {
                    return Ok(SatWithin {
                        result: r,
                        size: Some(size),
                        sizes_checked,
                        models_examined: 1,
                    });
                }
                Satisfiability::Unknown => {
                    return Ok(SatWithin {
                        result: r,
                        size: None,
                        sizes_checked,
                        models_examined: 0,
                    })
                }
                Satisfiability::Unsatisfiable => {}
            }
        }
    }
    Ok(SatWithin {
        result: Satisfiability::Unsatisfiable,
        size: None,
        sizes_checked,
        models_examined: 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum VerdictStatus {
    EntailedAtBound,
    Refuted {
        #[serde(serialize_with = "serialize_structure")]
        witness: Box<FiniteStructure>,
    },
    NoModelsAtBound,
    BudgetExhausted,
}

fn serialize_structure<S: serde::Serializer>(s: &FiniteStructure, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&crate::structures::write_structure(s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedVerdict {
    #[serde(flatten)]
    pub status: VerdictStatus,
    pub sizes_checked: Vec<usize>,
    pub models_examined: usize,
}

/// Bounded surrogate for `T ∪ Φ ⊨ Θ`: entailed when some model of `T ∪ Φ`
/// exists in range and none of them falsifies `Θ`. A refutation carries the
/// canonically first counter-model found at the smallest refuting size.
pub fn entails_at(
    vocab: &Vocabulary,
    theory: &[Sentence],
    premises: &[Sentence],
    conclusions: &[Sentence],
    cfg: &SearchConfig,
) -> Result<BoundedVerdict, FinderError> {
    cfg.validate()?;
    let base: Vec<Sentence> = theory.iter().chain(premises).cloned().collect();
    check_vocabulary(vocab, &base)?;
    check_vocabulary(vocab, conclusions)?;
    let mut counter = base.clone();
    if let Some(all) = Sentence::conjoin(conclusions) {
        counter.push(all.negated());
    } else {
        // An empty conclusion set is true in every model.
        let sat = satisfiable_within(vocab, &base, cfg)?;
        return Ok(BoundedVerdict {
            status: match sat.result {
                Satisfiability::Satisfiable(_) => VerdictStatus::EntailedAtBound,
                Satisfiability::Unsatisfiable => VerdictStatus::NoModelsAtBound,
                Satisfiability::Unknown => VerdictStatus::BudgetExhausted,
            },
            sizes_checked: sat.sizes_checked,
            models_examined: sat.models_examined,
        });
    }
    let deadline = cfg.deadline();
    let remaining = || deadline.map(|d| d.saturating_duration_since(Instant::now()));
    let mut sizes_checked = Vec::new();
    let mut examined = 0;
    let mut any_model = false;
    for size in cfg.min_size..=cfg.max_size {
        sizes_checked.push(size);
        let sized = cfg
            .clone()
            .with_sizes(size, size)
            .with_time_budget(remaining());
        let counters = find_models(vocab, &counter, &sized)?;
        examined += counters.models_examined;
        let complete = counters.is_complete();
        if let Some(first) = counters.models.into_iter().next() {
            return Ok(BoundedVerdict {
                status: VerdictStatus::Refuted {
                    witness: Box::new(first),
                },
                sizes_checked,
                models_examined: examined,
            });
        }
        if !complete {
            return Ok(BoundedVerdict {
                status: VerdictStatus::BudgetExhausted,
                sizes_checked,
                models_examined: examined,
            });
        }
        if !any_model {
            match satisfiable_at(vocab, &base, size, &sized)? {
                Satisfiability::Satisfiable(_) => {
                    any_model = true;
                    examined += 1;
                }
                Satisfiability::Unsatisfiable => {}
                Satisfiability::Unknown => {
                    return Ok(BoundedVerdict {
                        status: VerdictStatus::BudgetExhausted,
                        sizes_checked,
                        models_examined: examined,
                    })
                }
            }
        }
    }
    Ok(BoundedVerdict {
        status: if any_model {
            VerdictStatus::EntailedAtBound
        } else {
            VerdictStatus::NoModelsAtBound
        },
        sizes_checked,
        models_examined: examined,
    })
}

#[derive(Clone, Debug)]
pub struct MinSize {
    pub size: Option<usize>,
    pub witness: Option<FiniteStructure>,
    pub sizes_checked: Vec<usize>,
    pub status: SearchStatus,
}

/// Smallest `n <= max_size` (starting from the configured minimum) with a
/// model.
pub fn find_min_model_size(
    vocab: &Vocabulary,
    sentences: &[Sentence],
    max_size: usize,
    cfg: &SearchConfig,
) -> Result<MinSize, FinderError> {
    let cfg = cfg.clone().with_sizes(cfg.min_size.min(max_size).max(1), max_size);
    let r = satisfiable_within(vocab, sentences, &cfg)?;
    let status = match r.result {
        Satisfiability::Unknown => SearchStatus::BudgetExhausted,
        _ => SearchStatus::Complete,
    };
    Ok(MinSize {
        size: r.size,
        witness: r.result.witness().cloned(),
        sizes_checked: r.sizes_checked,
        status,
    })
}

/// Bit-exact encoding of a labelled structure: the size as a 32-bit
/// big-endian header, then one bit per relation tuple (and per equality
/// pair in axiomatic mode), then every function entry and constant as an
/// `n`-bit thermometer code (`v` ones followed by zeros). Byte order on
/// equal-size structures is the order used for ties.
pub fn canonical_form(a: &FiniteStructure) -> Vec<u8> {
    let n = a.size();
    let mut bits = BitWriter::default();
    for table in a.relation_tables() {
        for &m in table {
            bits.push(m);
        }
    }
    if let Some(table) = a.equality_table() {
        for &m in table {
            bits.push(m);
        }
    }
    let element = |bits: &mut BitWriter, v: u32| {
        for i in 0..n {
            bits.push(i < v as usize);
        }
    };
    for table in a.function_tables() {
        for &v in table {
            element(&mut bits, v);
        }
    }
    for &v in a.constant_table() {
        element(&mut bits, v);
    }
    let mut out = (n as u32).to_be_bytes().to_vec();
    out.extend(bits.finish());
    out
}

#[derive(Default)]
struct BitWriter {
    bytes: Vec<u8>,
    used: u8,
}

impl BitWriter {
    fn push(&mut self, bit: bool) {
        if self.used == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().expect("allocated") |= 0x80 >> self.used;
        }
        self.used = (self.used + 1) % 8;
    }

    fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

#[cfg(test)]
mod tests;
