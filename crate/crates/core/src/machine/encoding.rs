//! Simple sequences and the word sets they induce.

use serde::Serialize;

use super::MachineError;
use crate::axioms::distinct_constants_axioms;
use crate::logic::{Formula, Sentence, Term};

/// Ground terms `χ_i = γ(σ^i(δ))`, where `γ` and `σ` mention the single
/// variable `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleSequence {
    #[serde(serialize_with = "as_text")]
    pub gamma: Term,
    #[serde(serialize_with = "as_text")]
    pub sigma: Term,
    #[serde(serialize_with = "as_text")]
    pub delta: Term,
}

fn as_text<S: serde::Serializer>(t: &Term, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

pub const SEQUENCE_VAR: &str = "y";

impl SimpleSequence {
    pub fn new(gamma: Term, sigma: Term, delta: Term) -> Result<Self, MachineError> {
        let only_y = |t: &Term, what: &str| {
            let vars = t.variables();
            if vars.iter().all(|v| v == SEQUENCE_VAR) {
                Ok(())
            } else {
                Err(MachineError::Invalid(format!(
                    "{what} may only mention the variable `{SEQUENCE_VAR}`, found {vars:?}"
                )))
            }
        };
        only_y(&gamma, "gamma")?;
        only_y(&sigma, "sigma")?;
        if !delta.is_ground() {
            return Err(MachineError::Invalid("delta must be ground".into()));
        }
        Ok(SimpleSequence { gamma, sigma, delta })
    }

    /// `χ_i`.
    pub fn term(&self, i: usize) -> Term {
        let mut inner = self.delta.clone();
        for _ in 0..i {
            inner = self.sigma.replace(SEQUENCE_VAR, &inner);
        }
        self.gamma.replace(SEQUENCE_VAR, &inner)
    }
}

/// How words over an alphabet of letters become sentence sets. Each letter
/// names the constant that stands for it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordEncodingConfig {
    pub sequence: SimpleSequence,
    pub alphabet: Vec<(char, String)>,
    pub blank: String,
    pub add_distinctness: bool,
}

impl WordEncodingConfig {
    pub fn new(
        sequence: SimpleSequence,
        alphabet: Vec<(char, String)>,
        blank: &str,
        add_distinctness: bool,
    ) -> Result<Self, MachineError> {
        if alphabet.iter().any(|(_, c)| c == blank) {
            return Err(MachineError::Invalid(format!("blank `{blank}` is also an alphabet symbol")));
        }
        for (i, (l, c)) in alphabet.iter().enumerate() {
            if alphabet[..i].iter().any(|(m, d)| m == l || d == c) {
                return Err(MachineError::Invalid(format!("letter `{l}` / symbol `{c}` listed twice")));
            }
        }
        Ok(WordEncodingConfig {
            sequence,
            alphabet,
            blank: blank.to_string(),
            add_distinctness,
        })
    }

    pub fn symbol(&self, letter: char) -> Option<&str> {
        self.alphabet.iter().find(|(l, _)| *l == letter).map(|(_, c)| c.as_str())
    }

    pub fn letter(&self, symbol: &str) -> Option<char> {
        self.alphabet.iter().find(|(_, c)| c == symbol).map(|(l, _)| *l)
    }

    pub fn letters(&self) -> Vec<char> {
        self.alphabet.iter().map(|(l, _)| *l).collect()
    }

    /// Every word over the alphabet of length at most `max_len`, shortest
    /// first, then in alphabet order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<String> {
        let letters = self.letters();
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| letters.iter().map(move |l| format!("{w}{l}")))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }
}

/// `{χ_i = w_i} ∪ {χ_|w| = blank}`, plus pairwise distinctness of the
/// alphabet and blank when configured.
pub fn encode_word(cfg: &WordEncodingConfig, w: &str) -> Result<Vec<Sentence>, MachineError> {
    let mut out = Vec::new();
    let letters: Vec<char> = w.chars().collect();
    let terms: Vec<Term> = (0..=letters.len()).map(|i| cfg.sequence.term(i)).collect();
    for (i, t) in terms.iter().enumerate() {
        if terms[..i].contains(t) {
            return Err(MachineError::Invalid(format!("sequence terms {i} and an earlier one coincide")));
        }
    }
    for (i, l) in letters.iter().enumerate() {
        let sym = cfg.symbol(*l).ok_or(MachineError::OutsideAlphabet(*l))?;
        out.push(sentence(Formula::eq(terms[i].clone(), Term::cnst(sym))));
    }
    out.push(sentence(Formula::eq(
        terms[letters.len()].clone(),
        Term::cnst(&cfg.blank),
    )));
    if cfg.add_distinctness {
        let mut cs: Vec<&str> = cfg.alphabet.iter().map(|(_, c)| c.as_str()).collect();
        cs.push(&cfg.blank);
        if cs.len() >= 2 {
            out.extend(distinct_constants_axioms(&cs));
        }
    }
    Ok(out)
}

fn sentence(f: Formula) -> Sentence {
    Sentence::new(f).expect("sequence terms are ground")
}

/// Reads a word back from a word set: follows `χ_0, χ_1, ..` through the
/// `χ_i = c` sentences until the blank.
pub fn decode(cfg: &WordEncodingConfig, sentences: &[Sentence]) -> Option<String> {
    let value_of = |t: &Term| {
        sentences.iter().find_map(|s| match s.formula() {
            Formula::Eq(l, Term::Const(c)) if l == t => Some(c.clone()),
            _ => None,
        })
    };
    let mut word = String::new();
    for i in 0.. {
        let c = value_of(&cfg.sequence.term(i))?;
        if c == cfg.blank {
            return Some(word);
        }
        word.push(cfg.letter(&c)?);
    }
    unreachable!()
}
