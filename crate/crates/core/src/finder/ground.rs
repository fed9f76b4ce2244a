//! Propositional encoding of a fixed-size model search, handed to a CDCL
//! solver.
//!
//! Every constant and function cell gets a one-hot block of `n` variables,
//! every relation (and, in axiomatic mode, equality) cell one variable.
//! Nested terms get auxiliary one-hot blocks, so a ground instance never
//! multiplies out its argument combinations more than once.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use super::compile::{compile, CForm, CTerm, CellKind, Layout};
use crate::logic::{Sentence, Vocabulary};
use crate::structures::{Element, EqualityMode, FiniteStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum B {
    Const(bool),
    Lit(i32),
}

impl B {
    fn not(self) -> B {
        match self {
            B::Const(b) => B::Const(!b),
            B::Lit(l) => B::Lit(-l),
        }
    }
}

/// Value of a term: a known element, or the first variable of a one-hot
/// block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Tv {
    Elem(Element),
    Block(i32),
}

struct Encoder<'a> {
    layout: &'a Layout,
    mode: EqualityMode,
    n: u32,
    vars: i32,
    cell_var: Vec<i32>,
    clauses: Vec<Vec<i32>>,
    terms: HashMap<(usize, Vec<Tv>), i32>,
    atoms: HashMap<(Option<usize>, Vec<Tv>), B>,
}

impl<'a> Encoder<'a> {
    fn new(layout: &'a Layout, mode: EqualityMode) -> Self {
        let mut e = Encoder {
            layout,
            mode,
            n: layout.n as u32,
            vars: 0,
            cell_var: Vec::with_capacity(layout.n_cells),
            clauses: Vec::new(),
            terms: HashMap::new(),
            atoms: HashMap::new(),
        };
        for c in 0..layout.n_cells {
            let v = if layout.holds_element(c) { e.block() } else { e.fresh() };
            e.cell_var.push(v);
        }
        e
    }

    fn fresh(&mut self) -> i32 {
        self.vars += 1;
        self.vars
    }

    /// A new block with exactly one true variable.
    fn block(&mut self) -> i32 {
        let base = self.vars + 1;
        self.vars += self.n as i32;
        let n = self.n as i32;
        self.clauses.push((base..base + n).collect());
        for i in 0..n {
            for j in i + 1..n {
                self.clauses.push(vec![-(base + i), -(base + j)]);
            }
        }
        base
    }

    fn is(&self, t: Tv, d: Element) -> B {
        match t {
            Tv::Elem(e) => B::Const(e == d),
            Tv::Block(b) => B::Lit(b + d as i32),
        }
    }

    fn clause(&mut self, lits: impl IntoIterator<Item = B>) {
        let mut c = Vec::new();
        for l in lits {
            match l {
                B::Const(true) => return,
                B::Const(false) => {}
                B::Lit(x) => c.push(x),
            }
        }
        self.clauses.push(c);
    }

    /// Every assignment of element values to the open arguments, with the
    /// literals stating it.
    fn combos(&self, args: &[Tv]) -> Vec<(usize, Vec<i32>)> {
        let n = self.n as usize;
        let mut out = vec![(0usize, Vec::new())];
        for a in args {
            let mut next = Vec::with_capacity(out.len() * n);
            for (rank, lits) in out {
                match *a {
                    Tv::Elem(e) => next.push((rank * n + e as usize, lits)),
                    Tv::Block(b) => {
                        for d in 0..n {
                            let mut l = lits.clone();
                            l.push(b + d as i32);
                            next.push((rank * n + d, l));
                        }
                    }
                }
            }
            out = next;
        }
        out
    }

    fn term(&mut self, t: &CTerm, env: &[u32]) -> Tv {
        match t {
            CTerm::Var(s) => Tv::Elem(env[*s]),
            CTerm::Const(i) => Tv::Block(self.cell_var[*i]),
            CTerm::App(f, args) => {
                let vals: Vec<Tv> = args.iter().map(|a| self.term(a, env)).collect();
                let base = self.layout.func_base[*f];
                if vals.iter().all(|v| matches!(v, Tv::Elem(_))) {
                    let (rank, _) = self.combos(&vals)[0];
                    return Tv::Block(self.cell_var[base + rank]);
                }
                if let Some(&b) = self.terms.get(&(*f, vals.clone())) {
                    return Tv::Block(b);
                }
                let out = self.block();
                for (rank, lits) in self.combos(&vals) {
                    let cell = self.cell_var[base + rank];
                    for d in 0..self.n as i32 {
                        let mut c: Vec<i32> = lits.iter().map(|l| -l).collect();
                        c.push(-(cell + d));
                        c.push(out + d);
                        self.clauses.push(c);
                    }
                }
                self.terms.insert((*f, vals), out);
                Tv::Block(out)
            }
        }
    }

    /// Truth of a boolean table entry selected by `args`; `table` is `None`
    /// for the equality table.
    fn lookup(&mut self, table: Option<usize>, args: Vec<Tv>) -> B {
        let base = match table {
            Some(r) => self.layout.rel_base[r],
            None => self.layout.eq_base.expect("axiomatic equality"),
        };
        if args.iter().all(|v| matches!(v, Tv::Elem(_))) {
            let (rank, _) = self.combos(&args)[0];
            return B::Lit(self.cell_var[base + rank]);
        }
        if let Some(&b) = self.atoms.get(&(table, args.clone())) {
            return b;
        }
        let v = self.fresh();
        for (rank, lits) in self.combos(&args) {
            let cell = self.cell_var[base + rank];
            let mut c: Vec<i32> = lits.iter().map(|l| -l).collect();
            let mut d = c.clone();
            c.extend([-cell, v]);
            d.extend([cell, -v]);
            self.clauses.push(c);
            self.clauses.push(d);
        }
        self.atoms.insert((table, args), B::Lit(v));
        B::Lit(v)
    }

    fn equal(&mut self, a: Tv, b: Tv) -> B {
        if self.mode == EqualityMode::Axiomatic {
            return self.lookup(None, vec![a, b]);
        }
        match (a, b) {
            (Tv::Elem(x), Tv::Elem(y)) => B::Const(x == y),
            (Tv::Elem(x), t) | (t, Tv::Elem(x)) => self.is(t, x),
            (Tv::Block(x), Tv::Block(y)) if x == y => B::Const(true),
            (Tv::Block(x), Tv::Block(y)) => {
                let key = (None, vec![Tv::Block(x.min(y)), Tv::Block(x.max(y))]);
                if let Some(&b) = self.atoms.get(&key) {
                    return b;
                }
                let v = self.fresh();
                for d in 0..self.n as i32 {
                    self.clauses.push(vec![-(x + d), -(y + d), v]);
                    self.clauses.push(vec![-v, -(x + d), y + d]);
                }
                self.atoms.insert(key, B::Lit(v));
                B::Lit(v)
            }
        }
    }

    fn and(&mut self, parts: Vec<B>) -> B {
        let mut lits = Vec::new();
        for p in parts {
            match p {
                B::Const(false) => return B::Const(false),
                B::Const(true) => {}
                B::Lit(l) => lits.push(l),
            }
        }
        match lits.as_slice() {
            [] => B::Const(true),
            [l] => B::Lit(*l),
            _ => {
                let v = self.fresh();
                let mut back = vec![v];
                for &l in &lits {
                    self.clauses.push(vec![-v, l]);
                    back.push(-l);
                }
                self.clauses.push(back);
                B::Lit(v)
            }
        }
    }

    fn or(&mut self, parts: Vec<B>) -> B {
        let neg = parts.into_iter().map(B::not).collect();
        self.and(neg).not()
    }

    fn encode(&mut self, f: &CForm, env: &mut [u32]) -> B {
        match f {
            CForm::Rel(r, args) => {
                let vals = args.iter().map(|a| self.term(a, env)).collect();
                self.lookup(Some(*r), vals)
            }
            CForm::Eq(a, b) => {
                let (x, y) = (self.term(a, env), self.term(b, env));
                self.equal(x, y)
            }
            CForm::Not(x) => self.encode(x, env).not(),
            CForm::And(a, b) => {
                let l = self.encode(a, env);
                if l == B::Const(false) {
                    return l;
                }
                let r = self.encode(b, env);
                self.and(vec![l, r])
            }
            CForm::Or(a, b) => {
                let l = self.encode(a, env);
                if l == B::Const(true) {
                    return l;
                }
                let r = self.encode(b, env);
                self.or(vec![l, r])
            }
            CForm::Implies(a, b) => {
                let l = self.encode(a, env);
                if l == B::Const(false) {
                    return B::Const(true);
                }
                let r = self.encode(b, env);
                self.or(vec![l.not(), r])
            }
            CForm::Iff(a, b) => {
                let l = self.encode(a, env);
                let r = self.encode(b, env);
                match (l, r) {
                    (B::Const(x), other) | (other, B::Const(x)) => {
                        if x {
                            other
                        } else {
                            other.not()
                        }
                    }
                    (B::Lit(x), B::Lit(y)) => {
                        let v = self.fresh();
                        self.clauses.extend([
                            vec![-v, -x, y],
                            vec![-v, x, -y],
                            vec![v, x, y],
                            vec![v, -x, -y],
                        ]);
                        B::Lit(v)
                    }
                }
            }
            CForm::Forall(slot, body) | CForm::Exists(slot, body) => {
                let univ = matches!(f, CForm::Forall(..));
                let mut parts = Vec::new();
                for e in 0..self.n {
                    env[*slot] = e;
                    let p = self.encode(body, env);
                    if p == B::Const(!univ) {
                        return p;
                    }
                    parts.push(p);
                }
                if univ {
                    self.and(parts)
                } else {
                    self.or(parts)
                }
            }
        }
    }

    /// Collects the disjuncts of `f` (negated when `!pos`) into `out`.
    fn disjuncts(&mut self, f: &CForm, env: &mut [u32], pos: bool, out: &mut Vec<B>) {
        match (f, pos) {
            (CForm::Not(x), _) => self.disjuncts(x, env, !pos, out),
            (CForm::Or(a, b), true) | (CForm::And(a, b), false) => {
                self.disjuncts(a, env, pos, out);
                self.disjuncts(b, env, pos, out);
            }
            (CForm::Implies(a, b), true) => {
                self.disjuncts(a, env, false, out);
                self.disjuncts(b, env, true, out);
            }
            (CForm::Exists(slot, body), true) | (CForm::Forall(slot, body), false) => {
                for e in 0..self.n {
                    env[*slot] = e;
                    self.disjuncts(body, env, pos, out);
                }
            }
            _ => {
                let b = self.encode(f, env);
                out.push(if pos { b } else { b.not() });
            }
        }
    }

    /// Adds clauses making `f` true (false when `!pos`).
    fn assert(&mut self, f: &CForm, env: &mut [u32], pos: bool) {
        match (f, pos) {
            (CForm::Not(x), _) => self.assert(x, env, !pos),
            (CForm::And(a, b), true) | (CForm::Or(a, b), false) => {
                self.assert(a, env, pos);
                self.assert(b, env, pos);
            }
            (CForm::Implies(a, b), false) => {
                self.assert(a, env, true);
                self.assert(b, env, false);
            }
            (CForm::Forall(slot, body), true) | (CForm::Exists(slot, body), false) => {
                for e in 0..self.n {
                    env[*slot] = e;
                    self.assert(body, env, pos);
                }
            }
            _ => {
                let mut out = Vec::new();
                self.disjuncts(f, env, pos, &mut out);
                self.clause(out);
            }
        }
    }

    /// Constants in vocabulary order name elements in order of first use:
    /// the `i`-th constant is at most `i`, and takes a value `d > 0` only if
    /// an earlier constant holds `d - 1`. Every structure is isomorphic to
    /// one of this shape.
    fn order_constants(&mut self) {
        let k = self.layout.n_constants;
        for i in 0..k {
            let base = self.cell_var[i];
            for d in 1..self.n as i32 {
                if d as usize > i {
                    self.clauses.push(vec![-(base + d)]);
                    continue;
                }
                let mut c = vec![-(base + d)];
                c.extend((0..i).map(|j| self.cell_var[j] + d - 1));
                self.clauses.push(c);
            }
        }
    }
}

struct Deadline(Option<Instant>);

impl cadical::Callbacks for Deadline {
    fn terminate(&mut self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

pub(crate) enum SatOutcome {
    Model(FiniteStructure),
    Unsat,
    Stopped,
}

/// Decides whether `sentences` have a model of exactly `size` elements.
pub(crate) fn solve(
    vocab: &Arc<Vocabulary>,
    sentences: &[Sentence],
    size: usize,
    mode: EqualityMode,
    symmetry: bool,
    deadline: Option<Instant>,
) -> SatOutcome {
    let layout = Layout::new(vocab, size, mode);
    let mut enc = Encoder::new(&layout, mode);
    for s in sentences {
        let c = compile(s.formula(), vocab);
        let mut env = vec![0u32; c.slots];
        for t in crate::structures::tuples(size, c.prefix) {
            env[..c.prefix].copy_from_slice(&t);
            enc.assert(&c.body, &mut env, true);
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return SatOutcome::Stopped;
            }
        }
    }
    if symmetry {
        enc.order_constants();
    }
    let mut solver: cadical::Solver<Deadline> = cadical::Solver::new();
    for c in &enc.clauses {
        if c.is_empty() {
            return SatOutcome::Unsat;
        }
        solver.add_clause(c.iter().copied());
    }
    solver.set_callbacks(Some(Deadline(deadline)));
    match solver.solve() {
        Some(true) => {}
        Some(false) => return SatOutcome::Unsat,
        None => return SatOutcome::Stopped,
    }
    let value = |l: i32| solver.value(l) == Some(true);
    let element = |base: i32| (0..size as u32).find(|&d| value(base + d as i32)).expect("one-hot block");
    let mut values = vec![0u32; layout.n_cells];
    for (c, v) in values.iter_mut().enumerate() {
        let var = enc.cell_var[c];
        *v = match layout.kinds[c] {
            CellKind::Constant | CellKind::Function => element(var),
            CellKind::Relation | CellKind::Equality => value(var) as u32,
        };
    }
    let slice = |b: usize, k: usize| values[b..b + size.pow(k as u32)].to_vec();
    let functions = layout
        .func_base
        .iter()
        .zip(&layout.func_arity)
        .map(|(&b, &k)| slice(b, k))
        .collect();
    let relations = layout
        .rel_base
        .iter()
        .zip(&layout.rel_arity)
        .map(|(&b, &k)| slice(b, k).into_iter().map(|v| v == 1).collect())
        .collect();
    let equality = layout
        .eq_base
        .map(|b| slice(b, 2).into_iter().map(|v| v == 1).collect());
    let model = FiniteStructure::from_raw(
        Arc::clone(vocab),
        size,
        values[..layout.n_constants].to_vec(),
        functions,
        relations,
        equality,
    );
    assert!(
        sentences
            .iter()
            .all(|s| model.satisfies(s).expect("compiled against this vocabulary")),
        "propositional model does not satisfy the sentences"
    );
    SatOutcome::Model(model)
}
