//! Sentences compiled against a cell layout: symbols become table offsets and
//! variables become slots.

use crate::logic::{Formula, SymbolKind, Term, Vocabulary};
use crate::structures::{Element, EqualityMode};

pub(crate) const UNSET: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum CellKind {
    Constant,
    Function,
    Relation,
    Equality,
}

/// Position of every interpretation cell in one flat value vector:
/// constants, then function tables, then relation tables, then (axiomatic
/// mode) the equality table.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub n: usize,
    pub n_constants: usize,
    pub func_base: Vec<usize>,
    pub func_arity: Vec<usize>,
    pub rel_base: Vec<usize>,
    pub rel_arity: Vec<usize>,
    pub eq_base: Option<usize>,
    pub n_cells: usize,
    pub kinds: Vec<CellKind>,
    pub args: Vec<Vec<Element>>,
}

impl Layout {
    pub fn new(vocab: &Vocabulary, n: usize, mode: EqualityMode) -> Layout {
        let mut kinds = Vec::new();
        let mut args = Vec::new();
        for _ in vocab.constants() {
            kinds.push(CellKind::Constant);
            args.push(Vec::new());
        }
        let mut func_base = Vec::new();
        let mut func_arity = Vec::new();
        for (_, k) in vocab.functions() {
            func_base.push(kinds.len());
            func_arity.push(*k);
            for t in crate::structures::tuples(n, *k) {
                kinds.push(CellKind::Function);
                args.push(t);
            }
        }
        let mut rel_base = Vec::new();
        let mut rel_arity = Vec::new();
        for (_, k) in vocab.relations() {
            rel_base.push(kinds.len());
            rel_arity.push(*k);
            for t in crate::structures::tuples(n, *k) {
                kinds.push(CellKind::Relation);
                args.push(t);
            }
        }
        let eq_base = match mode {
            EqualityMode::Interpreted => None,
            EqualityMode::Axiomatic => {
                let base = kinds.len();
                for t in crate::structures::tuples(n, 2) {
                    kinds.push(CellKind::Equality);
                    args.push(t);
                }
                Some(base)
            }
        };
        Layout {
            n,
            n_constants: vocab.constants().len(),
            func_base,
            func_arity,
            rel_base,
            rel_arity,
            eq_base,
            n_cells: kinds.len(),
            kinds,
            args,
        }
    }

    /// Number of values a cell ranges over.
    pub fn domain(&self, cell: usize) -> u32 {
        match self.kinds[cell] {
            CellKind::Constant | CellKind::Function => self.n as u32,
            CellKind::Relation | CellKind::Equality => 2,
        }
    }

    pub fn holds_element(&self, cell: usize) -> bool {
        matches!(self.kinds[cell], CellKind::Constant | CellKind::Function)
    }
}

#[derive(Clone, Debug)]
pub(crate) enum CTerm {
    Var(usize),
    Const(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Clone, Debug)]
pub(crate) enum CForm {
    Rel(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<CForm>),
    And(Box<CForm>, Box<CForm>),
    Or(Box<CForm>, Box<CForm>),
    Implies(Box<CForm>, Box<CForm>),
    Iff(Box<CForm>, Box<CForm>),
    Forall(usize, Box<CForm>),
    Exists(usize, Box<CForm>),
}

/// A sentence with its leading universal block peeled off: `prefix` slots
/// are filled by instance expansion, the body is evaluated per instance.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    pub prefix: usize,
    pub slots: usize,
    pub body: CForm,
}

struct Compiler<'a> {
    vocab: &'a Vocabulary,
    scope: Vec<String>,
    max_slots: usize,
}

impl Compiler<'_> {
    fn bind(&mut self, v: &str) -> usize {
        self.scope.push(v.to_string());
        self.max_slots = self.max_slots.max(self.scope.len());
        self.scope.len() - 1
    }

    fn term(&self, t: &Term) -> CTerm {
        match t {
            Term::Var(v) => CTerm::Var(
                self.scope
                    .iter()
                    .rposition(|s| s == v)
                    .expect("sentences are closed"),
            ),
            Term::Const(c) => CTerm::Const(self.vocab.constant_index(c).expect("checked symbol")),
            Term::App(f, args) => CTerm::App(
                self.vocab.function_index(f).expect("checked symbol"),
                args.iter().map(|a| self.term(a)).collect(),
            ),
        }
    }

    fn formula(&mut self, f: &Formula) -> CForm {
        let b = |x: CForm| Box::new(x);
        match f {
            Formula::Atom(r, args) => match self.vocab.lookup(r) {
                Some(SymbolKind::Relation { index, .. }) => {
                    CForm::Rel(index, args.iter().map(|a| self.term(a)).collect())
                }
                _ => unreachable!("checked symbol"),
            },
            Formula::Eq(a, c) => CForm::Eq(self.term(a), self.term(c)),
            Formula::Not(x) => CForm::Not(b(self.formula(x))),
            Formula::And(x, y) => CForm::And(b(self.formula(x)), b(self.formula(y))),
            Formula::Or(x, y) => CForm::Or(b(self.formula(x)), b(self.formula(y))),
            Formula::Implies(x, y) => CForm::Implies(b(self.formula(x)), b(self.formula(y))),
            Formula::Iff(x, y) => CForm::Iff(b(self.formula(x)), b(self.formula(y))),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let slot = self.bind(v);
                let body = b(self.formula(body));
                self.scope.pop();
                if matches!(f, Formula::Forall(..)) {
                    CForm::Forall(slot, body)
                } else {
                    CForm::Exists(slot, body)
                }
            }
        }
    }
}

pub(crate) fn compile(f: &Formula, vocab: &Vocabulary) -> Compiled {
    let mut c = Compiler {
        vocab,
        scope: Vec::new(),
        max_slots: 0,
    };
    let mut body = f;
    while let Formula::Forall(v, inner) = body {
        c.bind(v);
        body = inner;
    }
    let prefix = c.scope.len();
    let body = c.formula(body);
    Compiled {
        prefix,
        slots: c.max_slots,
        body,
    }
}

/// Static decision order: constants first, then cells by their largest
/// argument, so that the search walks outward from small elements.
pub(crate) fn decision_order(layout: &Layout) -> Vec<u32> {
    let mut cells: Vec<u32> = (0..layout.n_cells as u32).collect();
    let key = |c: &u32| {
        let c = *c as usize;
        let top = layout.args[c].iter().max().map(|&m| m as i64).unwrap_or(-1);
        (top, c)
    };
    cells.sort_by_key(key);
    cells
}
