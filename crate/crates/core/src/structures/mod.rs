//! Explicit finite structures over the carrier `{0, .., n-1}` and two-valued
//! evaluation of formulas on them.

mod format;

pub use format::{parse_structure, write_structure};

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::logic::{Formula, Sentence, SymbolKind, Term, Vocabulary};

pub type Element = u32;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("variable `{0}` is unbound")]
    UnboundVariable(String),
    #[error("symbol `{0}` is not interpreted by this structure")]
    UnknownSymbol(String),
    #[error("`{name}` applied to {found} argument(s), expected {expected}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("element {element} outside the domain of size {size}")]
    ElementOutOfRange { element: Element, size: usize },
    #[error("domain size must be positive")]
    EmptyDomain,
    #[error("not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("sentence does not fit the structure's vocabulary: {0}")]
    VocabularyMismatch(String),
    #[error("equality table is only available in axiomatic mode")]
    NotAxiomatic,
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

/// How `=` is read: as identity on elements, or as an ordinary binary
/// relation with its own table (to be constrained by equality axioms).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EqualityMode {
    #[default]
    Interpreted,
    Axiomatic,
}

impl fmt::Display for EqualityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EqualityMode::Interpreted => "interpreted",
            EqualityMode::Axiomatic => "axiomatic",
        })
    }
}

impl std::str::FromStr for EqualityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "interpreted" => Ok(EqualityMode::Interpreted),
            "axiomatic" => Ok(EqualityMode::Axiomatic),
            other => Err(format!("unknown equality mode `{other}`")),
        }
    }
}

/// Rank of `args` among all `args.len()`-tuples over `{0..n-1}` in
/// lexicographic order.
pub fn tuple_rank(args: &[Element], n: usize) -> usize {
    args.iter().fold(0usize, |acc, &a| acc * n + a as usize)
}

/// All `k`-tuples over `{0..n-1}` in lexicographic order.
pub fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<Element>> {
    let total = n.pow(k as u32);
    (0..total).map(move |mut r| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = (r % n) as Element;
            r /= n;
        }
        t
    })
}

/// A finite interpretation of a vocabulary. Function tables are dense arrays
/// indexed by tuple rank; relation tables are dense membership vectors in the
/// same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    vocab: Arc<Vocabulary>,
    size: usize,
    constants: Vec<Element>,
    functions: Vec<Vec<Element>>,
    relations: Vec<Vec<bool>>,
    equality: Option<Vec<bool>>,
}

impl FiniteStructure {
    /// A structure of the given size with every constant at 0, every function
    /// constantly 0, and every relation empty. In axiomatic mode the equality
    /// table starts as the identity.
    pub fn new(
        vocab: impl Into<Arc<Vocabulary>>,
        size: usize,
        mode: EqualityMode,
    ) -> Result<Self, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyDomain);
        }
        let vocab = vocab.into();
        let constants = vec![0; vocab.constants().len()];
        let functions = vocab
            .functions()
            .iter()
            .map(|(_, a)| vec![0; size.pow(*a as u32)])
            .collect();
        let relations = vocab
            .relations()
            .iter()
            .map(|(_, a)| vec![false; size.pow(*a as u32)])
            .collect();
        let equality = match mode {
            EqualityMode::Interpreted => None,
            EqualityMode::Axiomatic => {
                let mut t = vec![false; size * size];
                for i in 0..size {
                    t[i * size + i] = true;
                }
                Some(t)
            }
        };
        Ok(FiniteStructure {
            vocab,
            size,
            constants,
            functions,
            relations,
            equality,
        })
    }

    /// Assembles a structure from raw tables laid out as in [`FiniteStructure::new`].
    pub(crate) fn from_raw(
        vocab: Arc<Vocabulary>,
        size: usize,
        constants: Vec<Element>,
        functions: Vec<Vec<Element>>,
        relations: Vec<Vec<bool>>,
        equality: Option<Vec<bool>>,
    ) -> Self {
        FiniteStructure {
            vocab,
            size,
            constants,
            functions,
            relations,
            equality,
        }
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn shared_vocabulary(&self) -> Arc<Vocabulary> {
        Arc::clone(&self.vocab)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn equality_mode(&self) -> EqualityMode {
        if self.equality.is_some() {
            EqualityMode::Axiomatic
        } else {
            EqualityMode::Interpreted
        }
    }

    fn in_range(&self, e: Element) -> Result<(), StructureError> {
        if (e as usize) < self.size {
            Ok(())
        } else {
            Err(StructureError::ElementOutOfRange {
                element: e,
                size: self.size,
            })
        }
    }

    fn check_args(&self, name: &str, arity: usize, args: &[Element]) -> Result<(), StructureError> {
        if args.len() != arity {
            return Err(StructureError::ArityMismatch {
                name: name.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        args.iter().try_for_each(|&a| self.in_range(a))
    }

    pub fn set_constant(&mut self, name: &str, value: Element) -> Result<(), StructureError> {
        self.in_range(value)?;
        let i = self
            .vocab
            .constant_index(name)
            .ok_or_else(|| StructureError::UnknownSymbol(name.to_string()))?;
        self.constants[i] = value;
        Ok(())
    }

    pub fn set_function(
        &mut self,
        name: &str,
        args: &[Element],
        value: Element,
    ) -> Result<(), StructureError> {
        let Some(SymbolKind::Function { index, arity }) = self.vocab.lookup(name) else {
            return Err(StructureError::UnknownSymbol(name.to_string()));
        };
        self.check_args(name, arity, args)?;
        self.in_range(value)?;
        let r = tuple_rank(args, self.size);
        self.functions[index][r] = value;
        Ok(())
    }

    pub fn set_relation(
        &mut self,
        name: &str,
        args: &[Element],
        holds: bool,
    ) -> Result<(), StructureError> {
        let Some(SymbolKind::Relation { index, arity }) = self.vocab.lookup(name) else {
            return Err(StructureError::UnknownSymbol(name.to_string()));
        };
        self.check_args(name, arity, args)?;
        let r = tuple_rank(args, self.size);
        self.relations[index][r] = holds;
        Ok(())
    }

    /// Sets one pair of the equality table (axiomatic mode only).
    pub fn set_equal(&mut self, a: Element, b: Element, holds: bool) -> Result<(), StructureError> {
        self.in_range(a)?;
        self.in_range(b)?;
        let n = self.size;
        let t = self.equality.as_mut().ok_or(StructureError::NotAxiomatic)?;
        t[a as usize * n + b as usize] = holds;
        Ok(())
    }

    pub fn constant(&self, name: &str) -> Option<Element> {
        self.vocab.constant_index(name).map(|i| self.constants[i])
    }

    pub fn function(&self, name: &str, args: &[Element]) -> Option<Element> {
        let i = self.vocab.function_index(name)?;
        if args.len() != self.vocab.functions()[i].1 {
            return None;
        }
        Some(self.functions[i][tuple_rank(args, self.size)])
    }

    pub fn relation(&self, name: &str, args: &[Element]) -> Option<bool> {
        let i = self.vocab.relation_index(name)?;
        if args.len() != self.vocab.relations()[i].1 {
            return None;
        }
        Some(self.relations[i][tuple_rank(args, self.size)])
    }

    /// `a = b` under the structure's equality mode.
    pub fn equal(&self, a: Element, b: Element) -> bool {
        match &self.equality {
            None => a == b,
            Some(t) => t[a as usize * self.size + b as usize],
        }
    }

    /// Tuples in a relation, in lexicographic order.
    pub fn relation_tuples(&self, name: &str) -> Option<Vec<Vec<Element>>> {
        let i = self.vocab.relation_index(name)?;
        let arity = self.vocab.relations()[i].1;
        Some(
            tuples(self.size, arity)
                .zip(&self.relations[i])
                .filter(|(_, &m)| m)
                .map(|(t, _)| t)
                .collect(),
        )
    }

    pub(crate) fn constant_table(&self) -> &[Element] {
        &self.constants
    }

    pub(crate) fn function_tables(&self) -> &[Vec<Element>] {
        &self.functions
    }

    pub(crate) fn relation_tables(&self) -> &[Vec<bool>] {
        &self.relations
    }

    pub(crate) fn equality_table(&self) -> Option<&[bool]> {
        self.equality.as_deref()
    }

    pub fn eval_term(&self, t: &Term, env: &Environment) -> Result<Element, StructureError> {
        match t {
            Term::Var(v) => env
                .get(v)
                .ok_or_else(|| StructureError::UnboundVariable(v.clone())),
            Term::Const(c) => self
                .constant(c)
                .ok_or_else(|| StructureError::UnknownSymbol(c.clone())),
            Term::App(f, args) => {
                let Some(SymbolKind::Function { index, arity }) = self.vocab.lookup(f) else {
                    return Err(StructureError::UnknownSymbol(f.clone()));
                };
                if arity != args.len() {
                    return Err(StructureError::ArityMismatch {
                        name: f.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let mut rank = 0usize;
                for a in args {
                    rank = rank * self.size + self.eval_term(a, env)? as usize;
                }
                Ok(self.functions[index][rank])
            }
        }
    }

    /// Classical truth with quantifiers ranging over the domain. `&`, `|`,
    /// `->` and the quantifiers short-circuit.
    pub fn eval_formula(&self, f: &Formula, env: &Environment) -> Result<bool, StructureError> {
        let mut env = env.clone();
        self.eval_in(f, &mut env)
    }

    fn eval_in(&self, f: &Formula, env: &mut Environment) -> Result<bool, StructureError> {
        Ok(match f {
            Formula::Atom(r, args) => {
                let Some(SymbolKind::Relation { index, arity }) = self.vocab.lookup(r) else {
                    return Err(StructureError::UnknownSymbol(r.clone()));
                };
                if arity != args.len() {
                    return Err(StructureError::ArityMismatch {
                        name: r.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                let mut rank = 0usize;
                for a in args {
                    rank = rank * self.size + self.eval_term(a, env)? as usize;
                }
                self.relations[index][rank]
            }
            Formula::Eq(a, b) => {
                let (a, b) = (self.eval_term(a, env)?, self.eval_term(b, env)?);
                self.equal(a, b)
            }
            Formula::Not(x) => !self.eval_in(x, env)?,
            Formula::And(a, b) => self.eval_in(a, env)? && self.eval_in(b, env)?,
            Formula::Or(a, b) => self.eval_in(a, env)? || self.eval_in(b, env)?,
            Formula::Implies(a, b) => !self.eval_in(a, env)? || self.eval_in(b, env)?,
            Formula::Iff(a, b) => self.eval_in(a, env)? == self.eval_in(b, env)?,
            Formula::Forall(v, body) => {
                for e in 0..self.size as Element {
                    env.push(v, e);
                    let r = self.eval_in(body, env);
                    env.pop();
                    if !r? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Exists(v, body) => {
                for e in 0..self.size as Element {
                    env.push(v, e);
                    let r = self.eval_in(body, env);
                    env.pop();
                    if r? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    pub fn satisfies(&self, s: &Sentence) -> Result<bool, StructureError> {
        self.eval_formula(s.formula(), &Environment::new())
    }

    /// Evaluates each sentence; for a false sentence with a leading block of
    /// universal quantifiers, reports the lexicographically smallest falsifying
    /// assignment to that block.
    pub fn check_model(&self, sentences: &[Sentence]) -> Result<ModelReport, StructureError> {
        for s in sentences {
            s.formula()
                .check(&self.vocab)
                .map_err(|e| StructureError::VocabularyMismatch(format!("{s}: {e}")))?;
        }
        let mut entries = Vec::with_capacity(sentences.len());
        for s in sentences {
            let holds = self.satisfies(s)?;
            let witness = if holds { None } else { self.universal_witness(s.formula())? };
            entries.push(SentenceVerdict {
                sentence: s.to_string(),
                holds,
                witness,
            });
        }
        Ok(ModelReport {
            size: self.size,
            equality_mode: self.equality_mode(),
            entries,
        })
    }

    fn universal_witness(&self, f: &Formula) -> Result<Option<Vec<(String, Element)>>, StructureError> {
        let mut vars = Vec::new();
        let mut body = f;
        while let Formula::Forall(v, b) = body {
            vars.push(v.clone());
            body = b;
        }
        if vars.is_empty() {
            return Ok(None);
        }
        for assignment in tuples(self.size, vars.len()) {
            let mut env = Environment::new();
            for (v, &e) in vars.iter().zip(&assignment) {
                env.push(v, e);
            }
            if !self.eval_in(body, &mut env)? {
                return Ok(Some(vars.iter().cloned().zip(assignment).collect()));
            }
        }
        Ok(None)
    }

    /// Relabels elements: element `a` becomes `perm[a]`.
    pub fn apply_isomorphism(&self, perm: &[Element]) -> Result<FiniteStructure, StructureError> {
        let n = self.size;
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(StructureError::NotAPermutation(n));
        }
        for &p in perm {
            if p as usize >= n || seen[p as usize] {
                return Err(StructureError::NotAPermutation(n));
            }
            seen[p as usize] = true;
        }
        let map_tuple = |t: &[Element]| t.iter().map(|&a| perm[a as usize]).collect::<Vec<_>>();
        let constants = self.constants.iter().map(|&c| perm[c as usize]).collect();
        let functions = self
            .vocab
            .functions()
            .iter()
            .zip(&self.functions)
            .map(|((_, arity), table)| {
                let mut out = vec![0; table.len()];
                for (t, &v) in tuples(n, *arity).zip(table) {
                    out[tuple_rank(&map_tuple(&t), n)] = perm[v as usize];
                }
                out
            })
            .collect();
        let relations = self
            .vocab
            .relations()
            .iter()
            .zip(&self.relations)
            .map(|((_, arity), table)| {
                let mut out = vec![false; table.len()];
                for (t, &m) in tuples(n, *arity).zip(table) {
                    out[tuple_rank(&map_tuple(&t), n)] = m;
                }
                out
            })
            .collect();
        let equality = self.equality.as_ref().map(|table| {
            let mut out = vec![false; table.len()];
            for (t, &m) in tuples(n, 2).zip(table) {
                out[tuple_rank(&map_tuple(&t), n)] = m;
            }
            out
        });
        Ok(FiniteStructure {
            vocab: Arc::clone(&self.vocab),
            size: n,
            constants,
            functions,
            relations,
            equality,
        })
    }
}

impl fmt::Display for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_structure(self))
    }
}

/// Variable bindings; later bindings shadow earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Environment {
    bindings: Vec<(String, Element)>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, e: Element) -> Self {
        self.push(var, e);
        self
    }

    pub fn push(&mut self, var: &str, e: Element) {
        self.bindings.push((var.to_string(), e));
    }

    pub fn pop(&mut self) {
        self.bindings.pop();
    }

    pub fn get(&self, var: &str) -> Option<Element> {
        self.bindings
            .iter()
            .rev()
            .find(|(v, _)| v == var)
            .map(|(_, e)| *e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SentenceVerdict {
    pub sentence: String,
    pub holds: bool,
    /// Smallest falsifying assignment to the leading universal block.
    pub witness: Option<Vec<(String, Element)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub size: usize,
    pub equality_mode: EqualityMode,
    pub entries: Vec<SentenceVerdict>,
}

impl ModelReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SentenceVerdict> {
        self.entries.iter().filter(|e| !e.holds)
    }
}

impl fmt::Display for ModelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# size {} equality {}", self.size, self.equality_mode)?;
        for e in &self.entries {
            write!(f, "{} {}", if e.holds { "true " } else { "false" }, e.sentence)?;
            if let Some(w) = &e.witness {
                let parts: Vec<String> = w.iter().map(|(v, a)| format!("{v}={a}")).collect();
                write!(f, "  [witness {}]", parts.join(" "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_sentence;

    fn example_vocab() -> Arc<Vocabulary> {
        Arc::new(Vocabulary::from_symbols([("R", 1)], [("f", 1)], ["c"]).unwrap())
    }

    fn example_structure(c: Element) -> FiniteStructure {
        let mut a = FiniteStructure::new(example_vocab(), 2, EqualityMode::Interpreted).unwrap();
        a.set_relation("R", &[0], true).unwrap();
        a.set_function("f", &[0], 0).unwrap();
        a.set_function("f", &[1], 1).unwrap();
        a.set_constant("c", c).unwrap();
        a
    }

    #[test]
    fn term_evaluation() {
        let mut a = example_structure(0);
        let env = Environment::new();
        assert_eq!(a.eval_term(&Term::cnst("c"), &env).unwrap(), 0);
        a.set_function("f", &[0], 1).unwrap();
        a.set_function("f", &[1], 0).unwrap();
        assert_eq!(a.eval_term(&Term::app1("f", Term::cnst("c")), &env).unwrap(), 1);
        assert!(matches!(
            a.eval_term(&Term::var("z"), &env),
            Err(StructureError::UnboundVariable(_))
        ));
    }

    #[test]
    fn example_one_truths() {
        let v = example_vocab();
        let a = example_structure(0);
        let t = parse_sentence("forall x. (R(x) <-> R(f(x)))", &v).unwrap();
        assert!(a.satisfies(&t).unwrap());
        assert!(a.satisfies(&parse_sentence("R(f(c))", &v).unwrap()).unwrap());
        let b = example_structure(1);
        assert!(!b.satisfies(&parse_sentence("R(c)", &v).unwrap()).unwrap());
    }

    #[test]
    fn witness_is_smallest_falsifier() {
        let v = example_vocab();
        let a = example_structure(0);
        let s = parse_sentence("forall x. forall y. (R(x) | R(y))", &v).unwrap();
        let report = a.check_model(&[s]).unwrap();
        assert!(!report.all_hold());
        assert_eq!(
            report.entries[0].witness,
            Some(vec![("x".to_string(), 1), ("y".to_string(), 1)])
        );
    }

    #[test]
    fn vocabulary_mismatch_is_reported() {
        let other = Vocabulary::from_symbols([("Q", 1)], [], ["d"]).unwrap();
        let s = parse_sentence("Q(d)", &other).unwrap();
        assert!(matches!(
            example_structure(0).check_model(&[s]),
            Err(StructureError::VocabularyMismatch(_))
        ));
    }

    #[test]
    fn identity_and_swap_isomorphisms() {
        let v = example_vocab();
        let a = example_structure(0);
        assert_eq!(a.apply_isomorphism(&[0, 1]).unwrap(), a);
        let b = a.apply_isomorphism(&[1, 0]).unwrap();
        assert_ne!(a, b);
        let t = parse_sentence("forall x. (R(x) <-> R(f(x)))", &v).unwrap();
        assert_eq!(a.satisfies(&t).unwrap(), b.satisfies(&t).unwrap());
        assert!(matches!(
            a.apply_isomorphism(&[0, 0]),
            Err(StructureError::NotAPermutation(2))
        ));
    }

    #[test]
    fn axiomatic_equality_reads_the_table() {
        let v = example_vocab();
        let mut a = FiniteStructure::new(v.clone(), 2, EqualityMode::Axiomatic).unwrap();
        let s = parse_sentence("exists x. exists y. ~(x = y)", &v).unwrap();
        assert!(a.satisfies(&s).unwrap());
        a.set_equal(0, 1, true).unwrap();
        a.set_equal(1, 0, true).unwrap();
        assert!(!a.satisfies(&s).unwrap());
        let mut i = FiniteStructure::new(v, 2, EqualityMode::Interpreted).unwrap();
        assert_eq!(i.set_equal(0, 1, true), Err(StructureError::NotAxiomatic));
    }

    #[test]
    fn tuple_rank_matches_enumeration() {
        for (r, t) in tuples(3, 3).enumerate() {
            assert_eq!(tuple_rank(&t, 3), r);
        }
        assert_eq!(tuples(4, 0).collect::<Vec<_>>(), vec![Vec::<Element>::new()]);
    }
}
