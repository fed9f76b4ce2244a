use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;

/// Which table a declared symbol lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Relation { index: usize, arity: usize },
    Function { index: usize, arity: usize },
    Constant { index: usize },
}

/// A first-order vocabulary: relations (arity >= 0), functions (arity >= 1)
/// and constants, with pairwise distinct names. `=` is always available and
/// can never be declared.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    relations: Vec<(String, usize)>,
    functions: Vec<(String, usize)>,
    constants: Vec<String>,
    index: HashMap<String, SymbolKind>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    relations: Vec<(String, usize)>,
    functions: Vec<(String, usize)>,
    constants: Vec<String>,
}

impl From<VocabularyRepr> for Vocabulary {
    fn from(r: VocabularyRepr) -> Self {
        let mut v = Vocabulary::new();
        for (n, a) in r.relations {
            let _ = v.add_relation(&n, a);
        }
        for (n, a) in r.functions {
            let _ = v.add_function(&n, a);
        }
        for n in r.constants {
            let _ = v.add_constant(&n);
        }
        v
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        VocabularyRepr {
            relations: v.relations,
            functions: v.functions,
            constants: v.constants,
        }
    }
}

/// Letters, digits and underscores, not starting with a digit.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) const KEYWORDS: [&str; 2] = ["forall", "exists"];

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    fn check_new(&self, name: &str) -> Result<(), LogicError> {
        if name == "=" {
            return Err(LogicError::ReservedSymbol(name.to_string()));
        }
        if !is_identifier(name) || KEYWORDS.contains(&name) {
            return Err(LogicError::BadSymbolName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(LogicError::DuplicateSymbol(name.to_string()));
        }
        Ok(())
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<&mut Self, LogicError> {
        self.check_new(name)?;
        let index = self.relations.len();
        self.relations.push((name.to_string(), arity));
        self.index
            .insert(name.to_string(), SymbolKind::Relation { index, arity });
        Ok(self)
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<&mut Self, LogicError> {
        if arity == 0 {
            return Err(LogicError::NullaryFunction(name.to_string()));
        }
        self.check_new(name)?;
        let index = self.functions.len();
        self.functions.push((name.to_string(), arity));
        self.index
            .insert(name.to_string(), SymbolKind::Function { index, arity });
        Ok(self)
    }

    pub fn add_constant(&mut self, name: &str) -> Result<&mut Self, LogicError> {
        self.check_new(name)?;
        let index = self.constants.len();
        self.constants.push(name.to_string());
        self.index
            .insert(name.to_string(), SymbolKind::Constant { index });
        Ok(self)
    }

    /// Builds a vocabulary from symbol lists, failing on the first clash.
    pub fn from_symbols<'a>(
        relations: impl IntoIterator<Item = (&'a str, usize)>,
        functions: impl IntoIterator<Item = (&'a str, usize)>,
        constants: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, LogicError> {
        let mut v = Vocabulary::new();
        for (n, a) in relations {
            v.add_relation(n, a)?;
        }
        for (n, a) in functions {
            v.add_function(n, a)?;
        }
        for n in constants {
            v.add_constant(n)?;
        }
        Ok(v)
    }

    /// Union of two vocabularies; a name declared in both must agree on kind
    /// and arity.
    pub fn merge(&self, other: &Vocabulary) -> Result<Vocabulary, LogicError> {
        let mut out = self.clone();
        for (n, a) in &other.relations {
            match self.lookup(n) {
                None => {
                    out.add_relation(n, *a)?;
                }
                Some(SymbolKind::Relation { arity, .. }) if arity == *a => {}
                Some(_) => return Err(LogicError::DuplicateSymbol(n.clone())),
            }
        }
        for (n, a) in &other.functions {
            match self.lookup(n) {
                None => {
                    out.add_function(n, *a)?;
                }
                Some(SymbolKind::Function { arity, .. }) if arity == *a => {}
                Some(_) => return Err(LogicError::DuplicateSymbol(n.clone())),
            }
        }
        for n in &other.constants {
            match self.lookup(n) {
                None => {
                    out.add_constant(n)?;
                }
                Some(SymbolKind::Constant { .. }) => {}
                Some(_) => return Err(LogicError::DuplicateSymbol(n.clone())),
            }
        }
        Ok(out)
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolKind> {
        self.index.get(name).copied()
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn functions(&self) -> &[(String, usize)] {
        &self.functions
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        match self.lookup(name) {
            Some(SymbolKind::Relation { index, .. }) => Some(index),
            _ => None,
        }
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        match self.lookup(name) {
            Some(SymbolKind::Function { index, .. }) => Some(index),
            _ => None,
        }
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        match self.lookup(name) {
            Some(SymbolKind::Constant { index }) => Some(index),
            _ => None,
        }
    }

    pub fn max_arity(&self) -> usize {
        self.relations
            .iter()
            .chain(&self.functions)
            .map(|(_, a)| *a)
            .max()
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }
}

impl fmt::Display for Vocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        parts.extend(self.relations.iter().map(|(n, a)| format!("{n}/{a}")));
        parts.extend(self.functions.iter().map(|(n, a)| format!("{n}/{a}")));
        parts.extend(self.constants.iter().cloned());
        write!(f, "{{{}}}", parts.join(", "))
    }
}
