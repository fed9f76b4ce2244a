//! Section-structured machine files.
//!
//! ```text
//! [vocabulary]
//! relation R/1
//! function f/1
//! constant c
//! [include]
//! eq
//! [theory]
//! forall x. (R(x) <-> R(f(x)))
//! [input I_pos]
//! R(c)
//! [output O_pos]
//! R(f(c))
//! [word-encoding]
//! gamma = C(zero, y)
//! sigma = S(y)
//! delta = S(zero)
//! alphabet = 0:c0 1:c1
//! blank = b
//! distinct = true
//! ```
//!
//! `#` starts a comment line. Symbols of included axiom sets need not be
//! declared.

use super::{FFOTMachine, Include, MachineError, SimpleSequence, WordEncodingConfig};
use crate::axioms::AxiomSetId;
use crate::logic::{parse_sentence, parse_term, Sentence, Vocabulary};

fn err(line: usize, message: impl Into<String>) -> MachineError {
    MachineError::Format {
        line,
        message: message.into(),
    }
}

enum Section {
    Vocabulary,
    Include,
    Theory,
    Input,
    Output,
    WordEncoding,
}

type Lines = Vec<(usize, String)>;

#[derive(Default)]
struct Raw {
    vocab: Lines,
    include: Lines,
    theory: Lines,
    inputs: Vec<(String, usize, Lines)>,
    outputs: Vec<(String, usize, Lines)>,
    encoding: Option<(usize, Lines)>,
}

fn split_sections(text: &str) -> Result<Raw, MachineError> {
    let mut raw = Raw::default();
    let mut current: Option<Section> = None;
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(header) = line.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| err(n, "unterminated section header"))?
                .trim();
            let mut words = header.split_whitespace();
            let kind = words.next().unwrap_or("");
            let label = words.next().map(str::to_string);
            if words.next().is_some() {
                return Err(err(n, format!("bad section header `[{header}]`")));
            }
            let section = match (kind, label) {
                ("vocabulary", None) => Section::Vocabulary,
                ("include", None) => Section::Include,
                ("theory", None) => Section::Theory,
                ("word-encoding", None) => {
                    if raw.encoding.is_some() {
                        return Err(err(n, "second [word-encoding] section"));
                    }
                    raw.encoding = Some((n, Vec::new()));
                    Section::WordEncoding
                }
                ("input", Some(l)) => {
                    raw.inputs.push((l, n, Vec::new()));
                    Section::Input
                }
                ("output", Some(l)) => {
                    raw.outputs.push((l, n, Vec::new()));
                    Section::Output
                }
                _ => return Err(err(n, format!("unknown section `[{header}]`"))),
            };
            current = Some(section);
            continue;
        }
        let entry = (n, line.to_string());
        match &current {
            None => return Err(err(n, "content before the first section")),
            Some(Section::Vocabulary) => raw.vocab.push(entry),
            Some(Section::Include) => raw.include.push(entry),
            Some(Section::Theory) => raw.theory.push(entry),
            Some(Section::Input) => raw.inputs.last_mut().expect("open input").2.push(entry),
            Some(Section::Output) => raw.outputs.last_mut().expect("open output").2.push(entry),
            Some(Section::WordEncoding) => raw.encoding.as_mut().expect("open encoding").1.push(entry),
        }
    }
    Ok(raw)
}

fn name_arity(n: usize, spec: &str) -> Result<(String, usize), MachineError> {
    let (name, arity) = spec
        .split_once('/')
        .ok_or_else(|| err(n, format!("expected name/arity, found `{spec}`")))?;
    let arity = arity
        .parse()
        .map_err(|_| err(n, format!("bad arity in `{spec}`")))?;
    Ok((name.to_string(), arity))
}

fn parse_vocabulary(lines: &Lines) -> Result<Vocabulary, MachineError> {
    let mut v = Vocabulary::new();
    for (n, line) in lines {
        let mut words = line.split_whitespace();
        let kind = words.next().unwrap_or("");
        let rest: Vec<&str> = words.collect();
        if rest.is_empty() {
            return Err(err(*n, "declaration without symbols"));
        }
        for spec in rest {
            let r = match kind {
                "relation" => name_arity(*n, spec).and_then(|(s, a)| {
                    v.add_relation(&s, a).map(|_| ()).map_err(|e| err(*n, e.to_string()))
                }),
                "function" => name_arity(*n, spec).and_then(|(s, a)| {
                    v.add_function(&s, a).map(|_| ()).map_err(|e| err(*n, e.to_string()))
                }),
                "constant" => v.add_constant(spec).map(|_| ()).map_err(|e| err(*n, e.to_string())),
                _ => Err(err(*n, format!("unknown declaration `{kind}`"))),
            };
            r?;
        }
    }
    Ok(v)
}

fn sentences(vocab: &Vocabulary, lines: &Lines) -> Result<Vec<Sentence>, MachineError> {
    lines
        .iter()
        .map(|(n, l)| parse_sentence(l, vocab).map_err(|e| err(*n, e.to_string())))
        .collect()
}

fn parse_encoding(
    vocab: &Vocabulary,
    header: usize,
    lines: &Lines,
) -> Result<WordEncodingConfig, MachineError> {
    let get = |key: &str| -> Result<Option<(usize, String)>, MachineError> {
        let mut found = None;
        for (n, l) in lines {
            let (k, v) = l
                .split_once('=')
                .ok_or_else(|| err(*n, format!("expected `key = value`, found `{l}`")))?;
            if k.trim() == key {
                if found.is_some() {
                    return Err(err(*n, format!("`{key}` given twice")));
                }
                found = Some((*n, v.trim().to_string()));
            }
        }
        Ok(found)
    };
    let need = |key: &str| get(key)?.ok_or_else(|| err(header, format!("[word-encoding] lacks `{key}`")));
    let term = |(n, t): (usize, String)| parse_term(&t, vocab).map_err(|e| err(n, e.to_string()));
    let gamma = term(need("gamma")?)?;
    let sigma = term(need("sigma")?)?;
    let delta = term(need("delta")?)?;
    let (an, alpha) = need("alphabet")?;
    let (_, blank) = need("blank")?;
    let distinct = match get("distinct")? {
        None => true,
        Some((n, v)) => v
            .parse::<bool>()
            .map_err(|_| err(n, format!("`distinct` must be true or false, found `{v}`")))?,
    };
    for (n, l) in lines {
        let k = l.split_once('=').map(|(k, _)| k.trim()).unwrap_or("");
        if !["gamma", "sigma", "delta", "alphabet", "blank", "distinct"].contains(&k) {
            return Err(err(*n, format!("unknown key `{k}`")));
        }
    }
    let mut alphabet = Vec::new();
    for item in alpha.split_whitespace() {
        let (letter, sym) = item
            .split_once(':')
            .ok_or_else(|| err(an, format!("expected letter:constant, found `{item}`")))?;
        let mut cs = letter.chars();
        let (Some(l), None) = (cs.next(), cs.next()) else {
            return Err(err(an, format!("`{letter}` is not a single letter")));
        };
        alphabet.push((l, sym.to_string()));
    }
    let seq = SimpleSequence::new(gamma, sigma, delta).map_err(|e| err(header, e.to_string()))?;
    WordEncodingConfig::new(seq, alphabet, &blank, distinct).map_err(|e| err(header, e.to_string()))
}

pub fn parse_machine(text: &str) -> Result<FFOTMachine, MachineError> {
    let raw = split_sections(text)?;
    let mut vocab = parse_vocabulary(&raw.vocab)?;
    let mut includes = Vec::new();
    for (n, line) in &raw.include {
        let mut words = line.split_whitespace();
        let id: AxiomSetId = words
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|e: String| err(*n, e))?;
        let args: Vec<String> = words.map(str::to_string).collect();
        if id != AxiomSetId::Distinct && !args.is_empty() {
            return Err(err(*n, format!("`{id}` takes no arguments")));
        }
        if let Some(v) = id.vocabulary() {
            vocab = vocab.merge(&v).map_err(|e| err(*n, e.to_string()))?;
        }
        includes.push((*n, Include { set: id, args }));
    }
    let theory = sentences(&vocab, &raw.theory)?;
    let mut m = FFOTMachine::new(vocab.clone(), theory)?;
    for (n, inc) in includes {
        m = m.with_include(inc).map_err(|e| err(n, e.to_string()))?;
    }
    for (label, n, lines) in &raw.inputs {
        let ss = sentences(&vocab, lines)?;
        m = m.with_input(label, ss).map_err(|e| err(*n, e.to_string()))?;
    }
    for (label, n, lines) in &raw.outputs {
        let ss = sentences(&vocab, lines)?;
        m = m.with_output(label, ss).map_err(|e| err(*n, e.to_string()))?;
    }
    if let Some((n, lines)) = &raw.encoding {
        let enc = parse_encoding(&vocab, *n, lines)?;
        m = m.with_word_encoding(enc).map_err(|e| err(*n, e.to_string()))?;
    }
    Ok(m)
}

/// Writes a machine so that `parse_machine` reads back an equal one. Symbols
/// contributed by includes are declared explicitly.
pub fn write_machine(m: &FFOTMachine) -> String {
    let mut out = String::from("[vocabulary]\n");
    let v = m.vocabulary();
    for (r, a) in v.relations() {
        out += &format!("relation {r}/{a}\n");
    }
    for (f, a) in v.functions() {
        out += &format!("function {f}/{a}\n");
    }
    if !v.constants().is_empty() {
        out += &format!("constant {}\n", v.constants().join(" "));
    }
    if !m.includes().is_empty() {
        out += "\n[include]\n";
        for inc in m.includes() {
            out += inc.set.name();
            for a in &inc.args {
                out += " ";
                out += a;
            }
            out += "\n";
        }
    }
    out += "\n[theory]\n";
    for s in m.theory() {
        out += &format!("{s}\n");
    }
    let section = |out: &mut String, kind: &str, label: &str, ss: &[Sentence]| {
        *out += &format!("\n[{kind} {label}]\n");
        for s in ss {
            *out += &format!("{s}\n");
        }
    };
    for (l, ss) in m.inputs() {
        section(&mut out, "input", l, ss);
    }
    for (l, ss) in m.outputs() {
        section(&mut out, "output", l, ss);
    }
    if let Some(enc) = m.word_encoding() {
        let alpha: Vec<String> = enc.alphabet.iter().map(|(l, c)| format!("{l}:{c}")).collect();
        out += &format!(
            "\n[word-encoding]\ngamma = {}\nsigma = {}\ndelta = {}\nalphabet = {}\nblank = {}\ndistinct = {}\n",
            enc.sequence.gamma,
            enc.sequence.sigma,
            enc.sequence.delta,
            alpha.join(" "),
            enc.blank,
            enc.add_distinctness
        );
    }
    out
}
