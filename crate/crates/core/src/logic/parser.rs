//! Recursive-descent parser for the ASCII formula grammar.
//!
//! ```text
//! formula  := "forall" IDENT "." formula | "exists" IDENT "." formula | iff
//! iff      := imp [ "<->" imp ]
//! imp      := or [ "->" imp ]
//! or       := and { "|" and }
//! and      := unary { "&" unary }
//! unary    := "~" unary | "(" formula ")" | atom
//! atom     := term "=" term | IDENT [ "(" term { "," term } ")" ]
//! term     := IDENT [ "(" term { "," term } ")" ]
//! ```
//!
//! `#` starts a comment running to end of line. A quantifier may also appear
//! where `unary` is expected; its body then extends as far right as possible.

use super::syntax::{Formula, Sentence, Term};
use super::vocab::{SymbolKind, Vocabulary, KEYWORDS};
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// 1-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, LogicError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Position { line, column: col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                out.push((Tok::LParen, pos));
                advance(1, &mut i, &mut col);
            }
            ')' => {
                out.push((Tok::RParen, pos));
                advance(1, &mut i, &mut col);
            }
            ',' => {
                out.push((Tok::Comma, pos));
                advance(1, &mut i, &mut col);
            }
            '.' => {
                out.push((Tok::Dot, pos));
                advance(1, &mut i, &mut col);
            }
            '=' => {
                out.push((Tok::Eq, pos));
                advance(1, &mut i, &mut col);
            }
            '~' => {
                out.push((Tok::Not, pos));
                advance(1, &mut i, &mut col);
            }
            '&' => {
                out.push((Tok::And, pos));
                advance(1, &mut i, &mut col);
            }
            '|' => {
                out.push((Tok::Or, pos));
                advance(1, &mut i, &mut col);
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Implies, pos));
                advance(2, &mut i, &mut col);
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                out.push((Tok::Iff, pos));
                advance(3, &mut i, &mut col);
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                col += i - start;
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            }
            other => {
                return Err(LogicError::Syntax {
                    position: pos,
                    found: format!("character `{other}`"),
                    expected: vec!["a token".into()],
                })
            }
        }
    }
    out.push((Tok::Eof, Position { line, column: col }));
    Ok(out)
}

struct Parser<'v> {
    toks: Vec<(Tok, Position)>,
    pos: usize,
    vocab: &'v Vocabulary,
    bound: Vec<String>,
}

impl<'v> Parser<'v> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> Position {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> Result<T, LogicError> {
        Err(LogicError::Syntax {
            position: self.here(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, tok: Tok, label: &str) -> Result<(), LogicError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&[label])
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quantified(),
            _ => self.iff(),
        }
    }

    fn quantified(&mut self) -> Result<Formula, LogicError> {
        let universal = matches!(self.bump(), Tok::Ident(k) if k == "forall");
        let at = self.here();
        let var = match self.bump() {
            Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => v,
            _ => {
                self.pos -= 1;
                return self.error(&["variable name"]);
            }
        };
        if self.vocab.lookup(&var).is_some() {
            return Err(LogicError::ShadowedSymbol {
                name: var,
                position: at,
            });
        }
        self.expect(Tok::Dot, "`.`")?;
        self.bound.push(var.clone());
        let body = self.formula();
        self.bound.pop();
        let body = Box::new(body?);
        Ok(if universal {
            Formula::Forall(var, body)
        } else {
            Formula::Exists(var, body)
        })
    }

    fn iff(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            if *self.peek() == Tok::Iff {
                return Err(LogicError::Syntax {
                    position: self.here(),
                    found: "a second `<->`".into(),
                    expected: vec!["parentheses around a chained `<->`".into()],
                });
            }
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, LogicError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, LogicError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(k) if k == "forall" || k == "exists" => self.quantified(),
            Tok::Ident(_) => self.atom(),
            _ => self.error(&["`~`", "`(`", "identifier", "quantifier"]),
        }
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        let at = self.here();
        let Tok::Ident(name) = self.bump() else {
            unreachable!("atom called on identifier")
        };
        let args = self.arguments()?;
        if *self.peek() == Tok::Eq {
            self.bump();
            let lhs = self.resolve_term(name, args, at)?;
            let rhs = self.term()?;
            return Ok(Formula::Eq(lhs, rhs));
        }
        match self.vocab.lookup(&name) {
            Some(SymbolKind::Relation { arity, .. }) => {
                let args = args.unwrap_or_default();
                if args.len() != arity {
                    return Err(LogicError::ArityMismatch {
                        name,
                        expected: arity,
                        found: args.len(),
                    });
                }
                Ok(Formula::Atom(name, args))
            }
            Some(_) => Err(LogicError::WrongKind {
                name,
                expected: "relation",
            }),
            None if self.bound.contains(&name) => self.error(&["`=`"]),
            None => Err(LogicError::UndeclaredSymbol(name)),
        }
    }

    fn arguments(&mut self) -> Result<Option<Vec<Term>>, LogicError> {
        if *self.peek() != Tok::LParen {
            return Ok(None);
        }
        self.bump();
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        Ok(Some(args))
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let at = self.here();
        match self.bump() {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                let args = self.arguments()?;
                self.resolve_term(name, args, at)
            }
            _ => {
                self.pos -= 1;
                self.error(&["term"])
            }
        }
    }

    fn resolve_term(
        &self,
        name: String,
        args: Option<Vec<Term>>,
        _at: Position,
    ) -> Result<Term, LogicError> {
        match args {
            None => {
                if self.bound.contains(&name) {
                    return Ok(Term::Var(name));
                }
                match self.vocab.lookup(&name) {
                    Some(SymbolKind::Constant { .. }) => Ok(Term::Const(name)),
                    Some(SymbolKind::Function { arity, .. }) => Err(LogicError::ArityMismatch {
                        name,
                        expected: arity,
                        found: 0,
                    }),
                    Some(SymbolKind::Relation { .. }) => Err(LogicError::WrongKind {
                        name,
                        expected: "term",
                    }),
                    // An unbound, undeclared bare identifier is a free variable;
                    // sentence parsing rejects it afterwards.
                    None => Ok(Term::Var(name)),
                }
            }
            Some(args) => match self.vocab.lookup(&name) {
                Some(SymbolKind::Function { arity, .. }) if arity == args.len() => {
                    Ok(Term::App(name, args))
                }
                Some(SymbolKind::Function { arity, .. }) => Err(LogicError::ArityMismatch {
                    name,
                    expected: arity,
                    found: args.len(),
                }),
                Some(_) => Err(LogicError::WrongKind {
                    name,
                    expected: "function",
                }),
                None => Err(LogicError::UndeclaredSymbol(name)),
            },
        }
    }
}

/// Parses a formula that may contain free variables.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> Result<Formula, LogicError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vocab,
        bound: Vec::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error(&["end of input", "binary connective"]);
    }
    Ok(f)
}

/// Parses a term; undeclared bare identifiers become variables.
pub fn parse_term(text: &str, vocab: &Vocabulary) -> Result<Term, LogicError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vocab,
        bound: Vec::new(),
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.error(&["end of input"]);
    }
    Ok(t)
}

/// Parses a sentence: a formula with no free variables.
pub fn parse_sentence(text: &str, vocab: &Vocabulary) -> Result<Sentence, LogicError> {
    Sentence::new(parse_formula(text, vocab)?)
}

/// Parses one sentence per non-blank, non-comment line.
pub fn parse_sentences(text: &str, vocab: &Vocabulary) -> Result<Vec<Sentence>, LogicError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let s = parse_sentence(content, vocab).map_err(|e| e.at_line(i + 1))?;
        out.push(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_vocab() -> Vocabulary {
        Vocabulary::from_symbols([("R", 1)], [("f", 1)], ["c"]).unwrap()
    }

    #[test]
    fn reflexivity() {
        let s = parse_sentence("forall x. x = x", &Vocabulary::new()).unwrap();
        assert_eq!(
            *s.formula(),
            Formula::forall("x", Formula::eq(Term::var("x"), Term::var("x")))
        );
    }

    #[test]
    fn example_one_theory() {
        let v = example_vocab();
        let s = parse_sentence("forall x. (R(x) <-> R(f(x)))", &v).unwrap();
        let x = Term::var("x");
        let expected = Formula::forall(
            "x",
            Formula::iff(
                Formula::atom("R", vec![x.clone()]),
                Formula::atom("R", vec![Term::app1("f", x)]),
            ),
        );
        assert_eq!(*s.formula(), expected);
        assert_eq!(s.to_string(), "forall x. (R(x) <-> R(f(x)))");
    }

    #[test]
    fn free_variable_rejected() {
        let err = parse_sentence("R(y)", &example_vocab()).unwrap_err();
        assert!(matches!(err, LogicError::FreeVariable(v) if v == "y"));
    }

    #[test]
    fn undeclared_and_arity_errors() {
        let v = example_vocab();
        assert!(matches!(
            parse_sentence("Q(c)", &v),
            Err(LogicError::UndeclaredSymbol(_))
        ));
        assert!(matches!(
            parse_sentence("R(c, c)", &v),
            Err(LogicError::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_sentence("g(c) = c", &v),
            Err(LogicError::UndeclaredSymbol(_))
        ));
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_sentence("forall x.\n  (R(x) & )", &example_vocab()).unwrap_err();
        match err {
            LogicError::Syntax { position, .. } => {
                assert_eq!(position, Position { line: 2, column: 11 })
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn implication_is_right_associative_and_iff_is_not() {
        let v = Vocabulary::from_symbols([("P", 0), ("Q", 0), ("S", 0)], [], []).unwrap();
        let f = parse_formula("P -> Q -> S", &v).unwrap();
        assert_eq!(
            f,
            Formula::implies(
                Formula::atom("P", vec![]),
                Formula::implies(Formula::atom("Q", vec![]), Formula::atom("S", vec![]))
            )
        );
        assert!(parse_formula("P <-> Q <-> S", &v).is_err());
        assert!(parse_formula("(P <-> Q) <-> S", &v).is_ok());
    }

    #[test]
    fn precedence_and_binds_tighter_than_or() {
        let v = Vocabulary::from_symbols([("P", 0), ("Q", 0), ("S", 0)], [], []).unwrap();
        let f = parse_formula("P | Q & S", &v).unwrap();
        assert_eq!(f.to_string(), "(P | (Q & S))");
    }

    #[test]
    fn comments_and_nullary_relations() {
        let v = Vocabulary::from_symbols([("P", 0)], [], ["a", "b"]).unwrap();
        let f = parse_sentence("# heading\nP & ~(a = b) # trailing", &v).unwrap();
        assert_eq!(f.to_string(), "(P & ~(a = b))");
    }

    #[test]
    fn quantifier_may_not_shadow_a_symbol() {
        assert!(matches!(
            parse_sentence("forall c. R(c)", &example_vocab()),
            Err(LogicError::ShadowedSymbol { .. })
        ));
    }

    #[test]
    fn free_variables_in_unbound_frame_sentence() {
        let v = Vocabulary::from_symbols([], [("H", 1), ("S", 1), ("C", 2)], []).unwrap();
        let f = parse_formula(
            "forall y. (~(H(x) = y) -> (C(S(x), y) = C(x, y)))",
            &v,
        )
        .unwrap();
        assert_eq!(
            f.free_variables(),
            std::collections::BTreeSet::from(["x".to_string()])
        );
    }
}
