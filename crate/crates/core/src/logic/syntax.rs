use std::collections::BTreeSet;
use std::fmt;

use super::vocab::{SymbolKind, Vocabulary};
use super::LogicError;

/// A first-order term. Variables and constants are kept apart at parse time:
/// an identifier is a variable exactly when an enclosing quantifier binds it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn cnst(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.to_string(), args)
    }

    /// `f(t)` for a unary function.
    pub fn app1(f: &str, arg: Term) -> Term {
        Term::App(f.to_string(), vec![arg])
    }

    /// `f^k(t)`.
    pub fn iterate(f: &str, k: usize, arg: Term) -> Term {
        (0..k).fold(arg, |t, _| Term::app1(f, t))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Replaces every occurrence of `var` by `t`.
    pub fn replace(&self, var: &str, t: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => t.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.replace(var, t)).collect())
            }
        }
    }

    pub(crate) fn check(&self, vocab: &Vocabulary) -> Result<(), LogicError> {
        match self {
            Term::Var(_) => Ok(()),
            Term::Const(c) => match vocab.lookup(c) {
                Some(SymbolKind::Constant { .. }) => Ok(()),
                Some(_) => Err(LogicError::WrongKind {
                    name: c.clone(),
                    expected: "constant",
                }),
                None => Err(LogicError::UndeclaredSymbol(c.clone())),
            },
            Term::App(f, args) => {
                match vocab.lookup(f) {
                    Some(SymbolKind::Function { arity, .. }) if arity == args.len() => {}
                    Some(SymbolKind::Function { arity, .. }) => {
                        return Err(LogicError::ArityMismatch {
                            name: f.clone(),
                            expected: arity,
                            found: args.len(),
                        })
                    }
                    Some(_) => {
                        return Err(LogicError::WrongKind {
                            name: f.clone(),
                            expected: "function",
                        })
                    }
                    None => return Err(LogicError::UndeclaredSymbol(f.clone())),
                }
                args.iter().try_for_each(|a| a.check(vocab))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(r: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(r.to_string(), args)
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    /// Universally closes `body` over `vars`, outermost first.
    pub fn forall_many(vars: &[&str], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::forall(v, acc))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Left-nested disjunction; `None` for an empty list.
    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::or)
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut term_vars = |t: &Term, bound: &Vec<&str>| {
            for v in t.variables() {
                if !bound.contains(&v.as_str()) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| term_vars(t, bound)),
            Formula::Eq(a, b) => {
                term_vars(a, bound);
                term_vars(b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v);
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Replaces the free occurrences of `var` with the ground term `t`.
    pub fn substitute(&self, var: &str, t: &Term) -> Result<Formula, LogicError> {
        if !t.is_ground() {
            return Err(LogicError::NonGroundSubstitution(t.to_string()));
        }
        Ok(self.subst_unchecked(var, t))
    }

    fn subst_unchecked(&self, var: &str, t: &Term) -> Formula {
        let bin = |a: &Formula, b: &Formula| {
            (
                Box::new(a.subst_unchecked(var, t)),
                Box::new(b.subst_unchecked(var, t)),
            )
        };
        match self {
            Formula::Atom(r, args) => {
                Formula::Atom(r.clone(), args.iter().map(|a| a.replace(var, t)).collect())
            }
            Formula::Eq(a, b) => Formula::Eq(a.replace(var, t), b.replace(var, t)),
            Formula::Not(f) => Formula::Not(Box::new(f.subst_unchecked(var, t))),
            Formula::And(a, b) => {
                let (a, b) = bin(a, b);
                Formula::And(a, b)
            }
            Formula::Or(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Or(a, b)
            }
            Formula::Implies(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Implies(a, b)
            }
            Formula::Iff(a, b) => {
                let (a, b) = bin(a, b);
                Formula::Iff(a, b)
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) if v == var => self.clone(),
            Formula::Forall(v, body) => {
                Formula::Forall(v.clone(), Box::new(body.subst_unchecked(var, t)))
            }
            Formula::Exists(v, body) => {
                Formula::Exists(v.clone(), Box::new(body.subst_unchecked(var, t)))
            }
        }
    }

    /// Checks every symbol against `vocab` (declared, right kind, right arity).
    pub fn check(&self, vocab: &Vocabulary) -> Result<(), LogicError> {
        match self {
            Formula::Atom(r, args) => {
                match vocab.lookup(r) {
                    Some(SymbolKind::Relation { arity, .. }) if arity == args.len() => {}
                    Some(SymbolKind::Relation { arity, .. }) => {
                        return Err(LogicError::ArityMismatch {
                            name: r.clone(),
                            expected: arity,
                            found: args.len(),
                        })
                    }
                    Some(_) => {
                        return Err(LogicError::WrongKind {
                            name: r.clone(),
                            expected: "relation",
                        })
                    }
                    None => return Err(LogicError::UndeclaredSymbol(r.clone())),
                }
                args.iter().try_for_each(|a| a.check(vocab))
            }
            Formula::Eq(a, b) => {
                a.check(vocab)?;
                b.check(vocab)
            }
            Formula::Not(f) => f.check(vocab),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.check(vocab)?;
                b.check(vocab)
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => f.check(vocab),
        }
    }

    /// Structural equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha(self, other, &mut Vec::new())
    }

    fn is_quantifier(&self) -> bool {
        matches!(self, Formula::Forall(..) | Formula::Exists(..))
    }
}

fn alpha<'a>(a: &'a Formula, b: &'a Formula, env: &mut Vec<(&'a str, &'a str)>) -> bool {
    fn term_eq(a: &Term, b: &Term, env: &[(&str, &str)]) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                match env.iter().rev().find(|(l, r)| l == x || r == y) {
                    Some((l, r)) => l == x && r == y,
                    None => x == y,
                }
            }
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
            }
            _ => false,
        }
    }
    match (a, b) {
        (Formula::Atom(r, xs), Formula::Atom(s, ys)) => {
            r == s && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
        }
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => term_eq(a1, b1, env) && term_eq(a2, b2, env),
        (Formula::Not(x), Formula::Not(y)) => alpha(x, y, env),
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2))
        | (Formula::Iff(a1, a2), Formula::Iff(b1, b2)) => alpha(a1, b1, env) && alpha(a2, b2, env),
        (Formula::Forall(x, f), Formula::Forall(y, g))
        | (Formula::Exists(x, f), Formula::Exists(y, g)) => {
            env.push((x, y));
            let r = alpha(f, g, env);
            env.pop();
            r
        }
        _ => false,
    }
}

/// Fully parenthesized printer: every binary connective and every equation is
/// wrapped; quantifiers are wrapped when they appear as an operand.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(x: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if x.is_quantifier() {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        }
        let binary = |f: &mut fmt::Formatter<'_>, a: &Formula, op: &str, b: &Formula| {
            f.write_str("(")?;
            operand(a, f)?;
            write!(f, " {op} ")?;
            operand(b, f)?;
            f.write_str(")")
        };
        match self {
            Formula::Atom(r, args) if args.is_empty() => f.write_str(r),
            Formula::Atom(r, args) => write!(f, "{}", Term::App(r.clone(), args.clone())),
            Formula::Eq(a, b) => write!(f, "({a} = {b})"),
            Formula::Not(x) => {
                f.write_str("~")?;
                operand(x, f)
            }
            Formula::And(a, b) => binary(f, a, "&", b),
            Formula::Or(a, b) => binary(f, a, "|", b),
            Formula::Implies(a, b) => binary(f, a, "->", b),
            Formula::Iff(a, b) => binary(f, a, "<->", b),
            Formula::Forall(v, body) => write!(f, "forall {v}. {body}"),
            Formula::Exists(v, body) => write!(f, "exists {v}. {body}"),
        }
    }
}

/// A formula with no free variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sentence(Formula);

impl Sentence {
    pub fn new(f: Formula) -> Result<Sentence, LogicError> {
        let free = f.free_variables();
        match free.into_iter().next() {
            Some(v) => Err(LogicError::FreeVariable(v)),
            None => Ok(Sentence(f)),
        }
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    pub fn negated(&self) -> Sentence {
        Sentence(Formula::not(self.0.clone()))
    }

    /// Conjunction of a non-empty list of sentences.
    pub fn conjoin(parts: &[Sentence]) -> Option<Sentence> {
        Formula::conjunction(parts.iter().map(|s| s.0.clone())).map(Sentence)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl AsRef<Formula> for Sentence {
    fn as_ref(&self) -> &Formula {
        &self.0
    }
}

impl TryFrom<Formula> for Sentence {
    type Error = LogicError;

    fn try_from(f: Formula) -> Result<Self, Self::Error> {
        Sentence::new(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }

    #[test]
    fn prints_reflexivity() {
        let f = Formula::forall("x", Formula::eq(x(), x()));
        assert_eq!(f.to_string(), "forall x. (x = x)");
    }

    #[test]
    fn free_variables_of_equality() {
        let f = Formula::eq(x(), Term::cnst("c"));
        assert_eq!(f.free_variables(), BTreeSet::from(["x".to_string()]));
        let g = Formula::forall("x", Formula::atom("R", vec![x()]));
        assert!(g.free_variables().is_empty());
    }

    #[test]
    fn substitute_respects_binding() {
        let c = Term::cnst("c");
        let f = Formula::atom("R", vec![x()]);
        assert_eq!(
            f.substitute("x", &c).unwrap(),
            Formula::atom("R", vec![c.clone()])
        );
        let g = Formula::forall("x", Formula::atom("R", vec![x()]));
        assert_eq!(g.substitute("x", &c).unwrap(), g);
        assert!(matches!(
            f.substitute("x", &Term::var("y")),
            Err(LogicError::NonGroundSubstitution(_))
        ));
    }

    #[test]
    fn quantifier_operands_are_wrapped() {
        let f = Formula::not(Formula::forall("x", Formula::atom("R", vec![x()])));
        assert_eq!(f.to_string(), "~(forall x. R(x))");
        let g = Formula::and(
            Formula::exists("x", Formula::atom("R", vec![x()])),
            Formula::atom("P", vec![]),
        );
        assert_eq!(g.to_string(), "((exists x. R(x)) & P)");
    }

    #[test]
    fn alpha_equivalence() {
        let a = Formula::forall("x", Formula::atom("R", vec![x()]));
        let b = Formula::forall("y", Formula::atom("R", vec![Term::var("y")]));
        assert!(a.alpha_eq(&b));
        let c = Formula::forall(
            "x",
            Formula::forall("y", Formula::eq(Term::var("x"), Term::var("y"))),
        );
        let d = Formula::forall(
            "y",
            Formula::forall("x", Formula::eq(Term::var("x"), Term::var("y"))),
        );
        assert!(!c.alpha_eq(&d));
    }

    #[test]
    fn sentence_rejects_free_variables() {
        let f = Formula::atom("R", vec![Term::var("y")]);
        assert!(matches!(Sentence::new(f), Err(LogicError::FreeVariable(v)) if v == "y"));
    }
}
