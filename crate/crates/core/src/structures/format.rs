//! Line-oriented text format for finite structures.
//!
//! ```text
//! domain 2
//! constant c = 0
//! function f : 0->1 1->0
//! relation R/1 = { 0 }
//! equality = interpreted
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{tuple_rank, tuples, Element, EqualityMode, FiniteStructure, StructureError};
use crate::logic::{SymbolKind, Vocabulary};

fn tuple_text(t: &[Element]) -> String {
    if t.is_empty() {
        "()".to_string()
    } else {
        t.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Renders a structure; relations always carry their arity so that empty
/// relations round-trip without an external vocabulary.
pub fn write_structure(a: &FiniteStructure) -> String {
    let v = a.vocabulary();
    let n = a.size();
    let mut out = String::new();
    let _ = writeln!(out, "domain {n}");
    for (name, value) in v.constants().iter().zip(a.constant_table()) {
        let _ = writeln!(out, "constant {name} = {value}");
    }
    for ((name, arity), table) in v.functions().iter().zip(a.function_tables()) {
        let _ = write!(out, "function {name} :");
        for (t, value) in tuples(n, *arity).zip(table) {
            let _ = write!(out, " {}->{value}", tuple_text(&t));
        }
        out.push('\n');
    }
    for ((name, arity), table) in v.relations().iter().zip(a.relation_tables()) {
        let members: Vec<String> = tuples(n, *arity)
            .zip(table)
            .filter(|(_, &m)| m)
            .map(|(t, _)| tuple_text(&t))
            .collect();
        let _ = writeln!(out, "relation {name}/{arity} = {}", set_text(&members));
    }
    match a.equality_table() {
        None => out.push_str("equality = interpreted\n"),
        Some(table) => {
            let members: Vec<String> = tuples(n, 2)
                .zip(table)
                .filter(|(_, &m)| m)
                .map(|(t, _)| tuple_text(&t))
                .collect();
            let _ = writeln!(out, "equality = axiomatic {}", set_text(&members));
        }
    }
    out
}

fn set_text(members: &[String]) -> String {
    if members.is_empty() {
        "{}".to_string()
    } else {
        format!("{{ {} }}", members.join(" ; "))
    }
}

struct Draft {
    size: Option<usize>,
    constants: Vec<(String, Element, usize)>,
    functions: Vec<(String, Vec<(Vec<Element>, Element)>, usize)>,
    relations: Vec<(String, Option<usize>, Vec<Vec<Element>>, usize)>,
    equality: Option<(EqualityMode, Vec<Vec<Element>>)>,
}

fn err(line: usize, message: impl Into<String>) -> StructureError {
    StructureError::Format {
        line,
        message: message.into(),
    }
}

fn parse_element(s: &str, line: usize) -> Result<Element, StructureError> {
    s.trim()
        .parse::<Element>()
        .map_err(|_| err(line, format!("expected an element, found `{}`", s.trim())))
}

fn parse_tuple(s: &str, line: usize) -> Result<Vec<Element>, StructureError> {
    let s = s.trim();
    if s == "()" {
        return Ok(Vec::new());
    }
    let s = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    s.split(',').map(|p| parse_element(p, line)).collect()
}

fn parse_set(s: &str, line: usize) -> Result<Vec<Vec<Element>>, StructureError> {
    let inner = s
        .trim()
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .ok_or_else(|| err(line, "expected a `{ ... }` tuple set"))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(';').map(|t| parse_tuple(t, line)).collect()
}

fn split_name_eq(rest: &str, line: usize) -> Result<(&str, &str), StructureError> {
    rest.split_once('=')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| err(line, "expected `=`"))
}

fn parse_draft(text: &str) -> Result<Draft, StructureError> {
    let mut d = Draft {
        size: None,
        constants: Vec::new(),
        functions: Vec::new(),
        relations: Vec::new(),
        equality: None,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        match keyword {
            "domain" => {
                if d.size.is_some() {
                    return Err(err(line, "duplicate `domain` line"));
                }
                let n = rest
                    .parse::<usize>()
                    .map_err(|_| err(line, format!("bad domain size `{rest}`")))?;
                if n == 0 {
                    return Err(err(line, "domain size must be positive"));
                }
                d.size = Some(n);
            }
            "constant" => {
                let (name, value) = split_name_eq(rest, line)?;
                d.constants.push((name.to_string(), parse_element(value, line)?, line));
            }
            "function" => {
                let (name, entries) = rest
                    .split_once(':')
                    .ok_or_else(|| err(line, "expected `:` after function name"))?;
                let normalized = entries.replace(" ->", "->").replace("-> ", "->").replace(", ", ",");
                let mut table = Vec::new();
                for entry in normalized.split_whitespace() {
                    let (args, value) = entry
                        .split_once("->")
                        .ok_or_else(|| err(line, format!("bad function entry `{entry}`")))?;
                    table.push((parse_tuple(args, line)?, parse_element(value, line)?));
                }
                d.functions.push((name.trim().to_string(), table, line));
            }
            "relation" => {
                let (head, set) = split_name_eq(rest, line)?;
                let (name, arity) = match head.split_once('/') {
                    Some((n, a)) => (
                        n.trim(),
                        Some(
                            a.trim()
                                .parse::<usize>()
                                .map_err(|_| err(line, format!("bad arity `{a}`")))?,
                        ),
                    ),
                    None => (head, None),
                };
                d.relations.push((name.to_string(), arity, parse_set(set, line)?, line));
            }
            "equality" => {
                let rest = rest
                    .strip_prefix('=')
                    .ok_or_else(|| err(line, "expected `equality = ...`"))?
                    .trim();
                if rest == "interpreted" {
                    d.equality = Some((EqualityMode::Interpreted, Vec::new()));
                } else if let Some(set) = rest.strip_prefix("axiomatic") {
                    d.equality = Some((EqualityMode::Axiomatic, parse_set(set, line)?));
                } else {
                    return Err(err(line, format!("unknown equality mode `{rest}`")));
                }
            }
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(d)
}

/// Parses a structure file. With a vocabulary, every symbol must be
/// interpreted and nothing else may appear; without one, the vocabulary is
/// inferred from the file in order of appearance.
pub fn parse_structure(
    text: &str,
    vocab: Option<&Vocabulary>,
) -> Result<FiniteStructure, StructureError> {
    let d = parse_draft(text)?;
    let n = d.size.ok_or_else(|| err(1, "missing `domain` line"))?;
    let vocab: Arc<Vocabulary> = match vocab {
        Some(v) => Arc::new(v.clone()),
        None => {
            let mut v = Vocabulary::new();
            for (name, arity, set, line) in &d.relations {
                let arity = arity
                    .or_else(|| set.first().map(|t| t.len()))
                    .ok_or_else(|| err(*line, format!("cannot infer the arity of empty relation `{name}`")))?;
                v.add_relation(name, arity).map_err(|e| err(*line, e.to_string()))?;
            }
            for (name, table, line) in &d.functions {
                let arity = table
                    .first()
                    .map(|(t, _)| t.len())
                    .ok_or_else(|| err(*line, format!("function `{name}` has no entries")))?;
                v.add_function(name, arity).map_err(|e| err(*line, e.to_string()))?;
            }
            for (name, _, line) in &d.constants {
                v.add_constant(name).map_err(|e| err(*line, e.to_string()))?;
            }
            Arc::new(v)
        }
    };
    let mode = d.equality.as_ref().map(|(m, _)| *m).unwrap_or_default();
    let mut a = FiniteStructure::new(Arc::clone(&vocab), n, mode)?;
    let at = |line: usize| move |e: StructureError| err(line, e.to_string());

    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut mark = |name: &str, line: usize| -> Result<(), StructureError> {
        if let Some(prev) = seen.insert(name.to_string(), line) {
            return Err(err(line, format!("`{name}` already interpreted on line {prev}")));
        }
        Ok(())
    };

    for (name, value, line) in &d.constants {
        mark(name, *line)?;
        match vocab.lookup(name) {
            Some(SymbolKind::Constant { .. }) => a.set_constant(name, *value).map_err(at(*line))?,
            _ => return Err(err(*line, format!("`{name}` is not a constant of the vocabulary"))),
        }
    }
    for (name, table, line) in &d.functions {
        mark(name, *line)?;
        let Some(SymbolKind::Function { arity, .. }) = vocab.lookup(name) else {
            return Err(err(*line, format!("`{name}` is not a function of the vocabulary")));
        };
        let mut filled = vec![false; n.pow(arity as u32)];
        for (args, value) in table {
            a.set_function(name, args, *value).map_err(at(*line))?;
            let r = tuple_rank(args, n);
            if filled[r] {
                return Err(err(*line, format!("`{name}` has two entries for ({})", tuple_text(args))));
            }
            filled[r] = true;
        }
        if let Some(missing) = tuples(n, arity).zip(&filled).find(|(_, &f)| !f) {
            return Err(err(*line, format!("`{name}` has no entry for ({})", tuple_text(&missing.0))));
        }
    }
    for (name, arity, set, line) in &d.relations {
        mark(name, *line)?;
        let Some(SymbolKind::Relation { arity: declared, .. }) = vocab.lookup(name) else {
            return Err(err(*line, format!("`{name}` is not a relation of the vocabulary")));
        };
        if let Some(arity) = arity {
            if *arity != declared {
                return Err(err(*line, format!("`{name}` declared with arity {declared}, file says {arity}")));
            }
        }
        for t in set {
            a.set_relation(name, t, true).map_err(at(*line))?;
        }
    }
    for (name, _) in vocab.functions() {
        if !seen.contains_key(name.as_str()) {
            return Err(err(1, format!("function `{name}` is not interpreted")));
        }
    }
    for name in vocab.constants() {
        if !seen.contains_key(name.as_str()) {
            return Err(err(1, format!("constant `{name}` is not interpreted")));
        }
    }
    for (name, _) in vocab.relations() {
        if !seen.contains_key(name.as_str()) {
            return Err(err(1, format!("relation `{name}` is not interpreted")));
        }
    }
    if let Some((EqualityMode::Axiomatic, pairs)) = &d.equality {
        for i in 0..n as Element {
            a.set_equal(i, i, false)?;
        }
        for p in pairs {
            if p.len() != 2 {
                return Err(err(1, "equality pairs must have two elements"));
            }
            a.set_equal(p[0], p[1], true)?;
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_inferred_vocabulary() {
        let text = "# example\ndomain 2\nconstant c = 1\nfunction f : 0->1 1->0\nrelation R/1 = { 0 }\nrelation E/2 = {}\nrelation P/0 = { () }\nequality = interpreted\n";
        let a = parse_structure(text, None).unwrap();
        assert_eq!(a.constant("c"), Some(1));
        assert_eq!(a.function("f", &[0]), Some(1));
        assert_eq!(a.relation("P", &[]), Some(true));
        assert_eq!(a.relation("E", &[1, 1]), Some(false));
        let again = parse_structure(&write_structure(&a), Some(a.vocabulary())).unwrap();
        assert_eq!(a, again);
    }

    #[test]
    fn axiomatic_equality_round_trips() {
        let text = "domain 2\nequality = axiomatic { 0,0 ; 0,1 ; 1,0 ; 1,1 }\n";
        let a = parse_structure(text, None).unwrap();
        assert!(a.equal(0, 1));
        assert_eq!(parse_structure(&write_structure(&a), None).unwrap(), a);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let missing = parse_structure("domain 2\nfunction f : 0->1\n", None).unwrap_err();
        assert!(matches!(missing, StructureError::Format { line: 2, .. }), "{missing}");
        let range = parse_structure("domain 2\nconstant c = 5\n", None).unwrap_err();
        assert!(matches!(range, StructureError::Format { line: 2, .. }));
        let junk = parse_structure("domain 2\nwidget x\n", None).unwrap_err();
        assert!(matches!(junk, StructureError::Format { line: 2, .. }));
    }

    #[test]
    fn vocabulary_must_be_covered() {
        let v = Vocabulary::from_symbols([("R", 1)], [], ["c"]).unwrap();
        assert!(parse_structure("domain 1\nconstant c = 0\n", Some(&v)).is_err());
        assert!(parse_structure("domain 1\nconstant c = 0\nrelation R = {}\n", Some(&v)).is_ok());
    }
}
