//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a sentence or check failed, 2 usage, parse or
//! I/O error, 3 undefined output, 4 no output, no model or budget ran out.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use ffot::axioms::{build_dof_f_structure, build_psa_f_structure, distinct_constants_axioms, AxiomSetId};
use ffot::finder::{find_min_model_size, find_models, SearchConfig, SearchStatus};
use ffot::logic::{parse_sentences, Sentence, Vocabulary};
use ffot::machine::{
    compute, parse_machine, validate_machine, write_machine, ComputeStatus, FFOTMachine, Include, Input,
};
use ffot::structures::{parse_structure, write_structure, EqualityMode};
use ffot::tm::{
    ntm_pair_to_ffot, parse_tmspec, simulate_ntm, simulate_tm, tm_to_ffot_finite, tm_to_ffot_infinite, NTMPair,
    NtmOutcome, SimOutcome,
};

const OK: u8 = 0;
const FALSIFIED: u8 = 1;
const ERROR: u8 = 2;
const UNDEFINED: u8 = 3;
const NO_RESULT: u8 = 4;

#[derive(Parser)]
#[command(name = "ffot", version, about = "Finite first-order theory machines")]
struct Cli {
    /// Append a JSON line describing the run to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Search {
    #[arg(long, default_value_t = 1)]
    min_size: usize,
    #[arg(long, default_value_t = 4)]
    max_size: usize,
    /// `interpreted` (identity) or `axiomatic` (a table constrained by EQ).
    #[arg(long, default_value = "interpreted")]
    equality: EqualityMode,
    /// Stop after this many models; 0 means no limit.
    #[arg(long, default_value_t = 0)]
    limit: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Turn off least-number symmetry breaking.
    #[arg(long)]
    no_symmetry: bool,
}

impl Search {
    fn config(&self) -> SearchConfig {
        SearchConfig::sizes(self.min_size, self.max_size)
            .with_equality(self.equality)
            .with_limit(self.limit)
            .with_jobs(self.jobs)
            .with_symmetry_breaking(!self.no_symmetry)
            .with_time_budget(env_budget())
    }
}

#[derive(Args, Clone)]
struct InputArg {
    /// A labelled input of the machine.
    #[arg(long, conflicts_with = "word")]
    input: Option<String>,
    /// A word, encoded with the machine's word encoding.
    #[arg(long)]
    word: Option<String>,
}

impl InputArg {
    fn get(&self) -> Option<Input> {
        match (&self.input, &self.word) {
            (Some(l), _) => Some(Input::Label(l.clone())),
            (_, Some(w)) => Some(Input::Word(w.clone())),
            _ => None,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate sentences in a structure.
    CheckModel {
        structure: PathBuf,
        /// Files with one sentence per line, in the structure's vocabulary.
        sentences: Vec<PathBuf>,
        /// Axiom sets to check as well, comma separated.
        #[arg(long, value_delimiter = ',')]
        axioms: Vec<AxiomSetId>,
    },
    /// Run a machine on an input.
    Compute {
        machine: PathBuf,
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        search: Search,
    },
    /// List models of a theory file (a machine file; inputs optional).
    FindModels {
        theory: PathBuf,
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        search: Search,
    },
    /// Smallest model size of a theory file and/or axiom sets.
    MinSize {
        theory: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        axioms: Vec<AxiomSetId>,
        #[command(flatten)]
        input: InputArg,
        #[arg(long = "max", default_value_t = 6)]
        max: usize,
        #[arg(long, default_value = "interpreted")]
        equality: EqualityMode,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Check a machine's inputs are satisfiable and its outputs exclusive.
    Validate {
        machine: PathBuf,
        /// Words to check besides the labelled inputs.
        #[arg(long = "word")]
        words: Vec<String>,
        #[command(flatten)]
        search: Search,
    },
    /// Print an axiom set, one sentence per line.
    Axioms {
        set: AxiomSetId,
        /// Theory or machine file whose vocabulary `eq` is taken over.
        #[arg(long)]
        over: Option<PathBuf>,
        /// Constants for `distinct`, comma separated.
        #[arg(long, value_delimiter = ',')]
        constants: Vec<String>,
    },
    /// Print a standard structure: `psa_f N` or `dof_f M`.
    Build { set: AxiomSetId, parameter: usize },
    /// Compile a deterministic Turing machine to a machine file.
    CompileTm {
        spec: PathBuf,
        #[arg(long, conflicts_with = "infinite")]
        finite: bool,
        #[arg(long)]
        infinite: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile two nondeterministic machines to one machine file.
    CompileNtmPair {
        first: PathBuf,
        second: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the reference simulator.
    Simulate {
        spec: PathBuf,
        word: String,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
    },
}

/// What a subcommand hands back for printing and reporting.
struct Outcome {
    code: u8,
    text: String,
    payload: Value,
    sizes_checked: Vec<usize>,
    models_examined: usize,
}

impl Outcome {
    fn new(code: u8, text: String, payload: Value) -> Self {
        Outcome {
            code,
            text,
            payload,
            sizes_checked: Vec::new(),
            models_examined: 0,
        }
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a [String],
    inputs_digest: String,
    exit_code: u8,
    payload: &'a Value,
    sizes_checked: &'a [usize],
    models_examined: usize,
    version: &'static str,
    wall_time_ms: f64,
}

struct Failure(String);

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Res<T> = Result<T, Failure>;

fn env_budget() -> Option<Duration> {
    std::env::var("FFOT_TIME_BUDGET_MS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .map(Duration::from_millis)
}

fn read(path: &Path, seen: &mut Vec<u8>) -> Res<String> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    seen.extend(Sha256::digest(text.as_bytes()));
    Ok(text)
}

fn in_file<T, E: Display>(path: &Path, r: Result<T, E>) -> Res<T> {
    r.map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_machine(path: &Path, seen: &mut Vec<u8>) -> Res<FFOTMachine> {
    let text = read(path, seen)?;
    in_file(path, parse_machine(&text))
}

fn emit(path: &Option<PathBuf>, text: &str) -> Res<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn status_code(s: &ComputeStatus) -> u8 {
    match s {
        ComputeStatus::Output { .. } => OK,
        ComputeStatus::Undefined { .. } => UNDEFINED,
        ComputeStatus::NoOutputAtBound { .. } | ComputeStatus::Unknown => NO_RESULT,
    }
}

fn sentence_lines(ss: &[Sentence]) -> String {
    ss.iter().map(|s| format!("{s}\n")).collect()
}

fn with_axioms(base: FFOTMachine, sets: &[AxiomSetId]) -> Res<FFOTMachine> {
    let mut m = base;
    for &id in sets {
        m = m.with_include(Include::new(id))?;
    }
    Ok(m)
}

fn check_model(structure: &Path, files: &[PathBuf], axioms: &[AxiomSetId], seen: &mut Vec<u8>) -> Res<Outcome> {
    let text = read(structure, seen)?;
    let a = in_file(structure, parse_structure(&text, None))?;
    let mut sentences = Vec::new();
    for f in files {
        let t = read(f, seen)?;
        sentences.extend(in_file(f, parse_sentences(&t, a.vocabulary()))?);
    }
    for id in axioms {
        sentences.extend(id.sentences(a.vocabulary()));
    }
    let rep = a.check_model(&sentences)?;
    let code = if rep.all_hold() { OK } else { FALSIFIED };
    Ok(Outcome::new(code, rep.to_string(), serde_json::to_value(&rep)?))
}

fn run_compute(machine: &Path, input: &InputArg, search: &Search, seen: &mut Vec<u8>) -> Res<Outcome> {
    let m = load_machine(machine, seen)?;
    let input = input.get().ok_or_else(|| Failure("give --input LABEL or --word W".into()))?;
    let r = compute(&m, &input, &search.config())?;
    let text = match &r.status {
        ComputeStatus::Output { label } => {
            let out = m.output(label).unwrap_or_default();
            format!("output {label}\n{}", sentence_lines(out))
        }
        ComputeStatus::Undefined { labels, witnesses } => format!(
            "undefined: both {} and {} hold in models\n# witness for {}\n{}# witness for {}\n{}",
            labels[0],
            labels[1],
            labels[0],
            write_structure(&witnesses[0]),
            labels[1],
            write_structure(&witnesses[1]),
        ),
        ComputeStatus::NoOutputAtBound { .. } => {
            format!("no output at bound {}..{}\n", r.size_range.0, r.size_range.1)
        }
        ComputeStatus::Unknown => "unknown: the time budget ran out\n".to_string(),
    };
    let text = format!("{text}# input {} sizes {:?}\n", input.describe(), r.sizes_checked);
    Ok(Outcome {
        code: status_code(&r.status),
        text,
        payload: serde_json::to_value(&r)?,
        sizes_checked: r.sizes_checked.clone(),
        models_examined: r.models_examined,
    })
}

fn theory_of(m: &FFOTMachine, input: &InputArg) -> Res<Vec<Sentence>> {
    let mut ss = m.full_theory();
    if let Some(i) = input.get() {
        ss.extend(m.resolve(&i)?);
    }
    Ok(ss)
}

fn run_find_models(theory: &Path, input: &InputArg, search: &Search, seen: &mut Vec<u8>) -> Res<Outcome> {
    let m = load_machine(theory, seen)?;
    let ss = theory_of(&m, input)?;
    let set = find_models(m.vocabulary(), &ss, &search.config())?;
    let mut text = String::new();
    for (i, a) in set.models.iter().enumerate() {
        text.push_str(&format!("# model {}\n{}", i + 1, write_structure(a)));
    }
    text.push_str(&format!(
        "# {} model(s), sizes {:?}, {}\n",
        set.models.len(),
        set.sizes_checked,
        if set.is_complete() { "complete" } else { "budget exhausted" }
    ));
    let code = if !set.models.is_empty() { OK } else { NO_RESULT };
    let models: Vec<String> = set.models.iter().map(write_structure).collect();
    Ok(Outcome {
        code,
        text,
        payload: json!({ "models": models, "status": set.status }),
        sizes_checked: set.sizes_checked.clone(),
        models_examined: set.models_examined,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_min_size(
    theory: &Option<PathBuf>,
    axioms: &[AxiomSetId],
    input: &InputArg,
    max: usize,
    equality: EqualityMode,
    jobs: usize,
    seen: &mut Vec<u8>,
) -> Res<Outcome> {
    let base = match theory {
        Some(p) => load_machine(p, seen)?,
        None if axioms.is_empty() => return Err(Failure("give a theory file or --axioms".into())),
        None => FFOTMachine::new(Vocabulary::new(), Vec::new())?,
    };
    let m = with_axioms(base, axioms)?;
    let ss = theory_of(&m, input)?;
    let cfg = SearchConfig::sizes(1, max.max(1))
        .with_equality(equality)
        .with_jobs(jobs)
        .with_time_budget(env_budget());
    let r = find_min_model_size(m.vocabulary(), &ss, max, &cfg)?;
    let (code, text) = match (r.size, r.status) {
        (Some(n), _) => (OK, format!("{n}\n")),
        (None, SearchStatus::Complete) => (NO_RESULT, "none\n".to_string()),
        (None, SearchStatus::BudgetExhausted) => (NO_RESULT, "unknown\n".to_string()),
    };
    Ok(Outcome {
        code,
        text,
        payload: json!({ "size": r.size, "max": max, "status": r.status }),
        sizes_checked: r.sizes_checked.clone(),
        models_examined: usize::from(r.size.is_some()),
    })
}

fn run_validate(machine: &Path, words: &[String], search: &Search, seen: &mut Vec<u8>) -> Res<Outcome> {
    let m = load_machine(machine, seen)?;
    let ws: Vec<&str> = words.iter().map(String::as_str).collect();
    let rep = validate_machine(&m, &ws, &search.config())?;
    let mut text = String::new();
    for c in &rep.checks {
        text.push_str(&format!("{}: {}\n", c.input, serde_json::to_string(&c.satisfiability)?));
        for k in &c.conflicts {
            text.push_str(&format!(
                "  conflict {} / {}\n{}",
                k.labels[0],
                k.labels[1],
                write_structure(&k.witness)
            ));
        }
        for p in &c.undecided_pairs {
            text.push_str(&format!("  undecided {} / {}\n", p[0], p[1]));
        }
    }
    let code = if rep.conflicts().next().is_some() {
        FALSIFIED
    } else if rep.passed() {
        OK
    } else {
        NO_RESULT
    };
    text.push_str(if code == OK { "passed\n" } else { "failed\n" });
    Ok(Outcome::new(code, text, serde_json::to_value(&rep)?))
}

fn run_axioms(set: AxiomSetId, over: &Option<PathBuf>, constants: &[String], seen: &mut Vec<u8>) -> Res<Outcome> {
    let ss = match set {
        AxiomSetId::Distinct => {
            let cs: Vec<&str> = constants.iter().map(String::as_str).collect();
            distinct_constants_axioms(&cs)
        }
        AxiomSetId::Eq => {
            let p = over
                .as_ref()
                .ok_or_else(|| Failure("`eq` needs --over FILE for its vocabulary".into()))?;
            let m = load_machine(p, seen)?;
            set.sentences(m.vocabulary())
        }
        _ => set.sentences(&set.vocabulary().expect("fixed set")),
    };
    let lines: Vec<String> = ss.iter().map(|s| s.to_string()).collect();
    Ok(Outcome::new(
        OK,
        sentence_lines(&ss),
        json!({ "set": set.name(), "count": lines.len(), "sentences": lines }),
    ))
}

fn run_build(set: AxiomSetId, parameter: usize) -> Res<Outcome> {
    let a = match set {
        AxiomSetId::PsaF if parameter >= 1 => build_psa_f_structure(parameter),
        AxiomSetId::DofF if parameter >= 2 => build_dof_f_structure(parameter),
        AxiomSetId::PsaF => return Err(Failure("psa_f needs N >= 1".into())),
        AxiomSetId::DofF => return Err(Failure("dof_f needs M >= 2".into())),
        other => return Err(Failure(format!("no standard structure for `{other}`"))),
    };
    let text = write_structure(&a);
    Ok(Outcome::new(OK, text.clone(), json!({ "structure": text })))
}

fn run_compile_tm(spec: &Path, infinite: bool, output: &Option<PathBuf>, seen: &mut Vec<u8>) -> Res<Outcome> {
    let text = read(spec, seen)?;
    let s = in_file(spec, parse_tmspec(&text))?;
    let m = if infinite { tm_to_ffot_infinite(&s)? } else { tm_to_ffot_finite(&s)? };
    let file = write_machine(&m);
    emit(output, &file)?;
    let summary = format!("# {} theory sentences\n", m.full_theory().len());
    let shown = if output.is_some() { summary } else { String::new() };
    Ok(Outcome::new(OK, shown, json!({ "machine": file })))
}

fn run_compile_pair(first: &Path, second: &Path, output: &Option<PathBuf>, seen: &mut Vec<u8>) -> Res<Outcome> {
    let a = in_file(first, parse_tmspec(&read(first, seen)?))?;
    let b = in_file(second, parse_tmspec(&read(second, seen)?))?;
    let m = ntm_pair_to_ffot(&NTMPair::new(a, b)?)?;
    let file = write_machine(&m);
    emit(output, &file)?;
    let shown = if output.is_some() {
        format!("# {} theory sentences\n", m.full_theory().len())
    } else {
        String::new()
    };
    Ok(Outcome::new(OK, shown, json!({ "machine": file })))
}

fn run_simulate(spec: &Path, word: &str, max_steps: usize, seen: &mut Vec<u8>) -> Res<Outcome> {
    let s = in_file(spec, parse_tmspec(&read(spec, seen)?))?;
    if s.deterministic {
        let out = simulate_tm(&s, word, max_steps)?;
        let code = if matches!(out, SimOutcome::Timeout { .. }) { NO_RESULT } else { OK };
        let text = match out {
            SimOutcome::Accepted { steps } => format!("accepted after {steps} steps\n"),
            SimOutcome::Rejected { steps } => format!("rejected after {steps} steps\n"),
            SimOutcome::FellOffLeft { steps } => format!("moved off the left end at step {steps}\n"),
            SimOutcome::Timeout { steps } => format!("no halt within {steps} steps\n"),
        };
        Ok(Outcome::new(code, text, serde_json::to_value(out)?))
    } else {
        let out = simulate_ntm(&s, word, max_steps)?;
        let text = match out {
            NtmOutcome::Accepted { steps } => format!("accepted, shortest path {steps} steps\n"),
            NtmOutcome::NoAcceptingPath => format!("no accepting path within {max_steps} steps\n"),
        };
        Ok(Outcome::new(OK, text, serde_json::to_value(out)?))
    }
}

fn run(cmd: &Command, seen: &mut Vec<u8>) -> Res<Outcome> {
    match cmd {
        Command::CheckModel {
            structure,
            sentences,
            axioms,
        } => check_model(structure, sentences, axioms, seen),
        Command::Compute { machine, input, search } => run_compute(machine, input, search, seen),
        Command::FindModels { theory, input, search } => run_find_models(theory, input, search, seen),
        Command::MinSize {
            theory,
            axioms,
            input,
            max,
            equality,
            jobs,
        } => run_min_size(theory, axioms, input, *max, *equality, *jobs, seen),
        Command::Validate { machine, words, search } => run_validate(machine, words, search, seen),
        Command::Axioms { set, over, constants } => run_axioms(*set, over, constants, seen),
        Command::Build { set, parameter } => run_build(*set, *parameter),
        Command::CompileTm {
            spec,
            infinite,
            output,
            ..
        } => run_compile_tm(spec, *infinite, output, seen),
        Command::CompileNtmPair { first, second, output } => run_compile_pair(first, second, output, seen),
        Command::Simulate { spec, word, max_steps } => run_simulate(spec, word, *max_steps, seen),
    }
}

fn write_report(path: &Path, report: &RunReport<'_>) -> std::io::Result<()> {
    use std::io::Write;
    let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    let line = serde_json::to_string(report).map_err(std::io::Error::other)?;
    writeln!(f, "{line}")
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ERROR } else { OK });
        }
    };
    let start = Instant::now();
    let mut seen = Vec::new();
    let outcome = match run(&cli.command, &mut seen) {
        Ok(o) => o,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            Outcome::new(ERROR, String::new(), json!({ "error": msg }))
        }
    };
    print!("{}", outcome.text);
    if let Some(path) = &cli.report {
        let report = RunReport {
            command: &args[1..],
            inputs_digest: hex(&Sha256::digest(&seen)),
            exit_code: outcome.code,
            payload: &outcome.payload,
            sizes_checked: &outcome.sizes_checked,
            models_examined: outcome.models_examined,
            version: env!("CARGO_PKG_VERSION"),
            wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        };
        if let Err(e) = write_report(path, &report) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(ERROR);
        }
    }
    ExitCode::from(outcome.code)
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
