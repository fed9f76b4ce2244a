//! Backtracking over interpretation cells with three-valued evaluation of
//! ground instances, watch lists and unit propagation.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use super::compile::{compile, decision_order, CForm, CTerm, Compiled, Layout, UNSET};
use crate::logic::{Sentence, Vocabulary};
use crate::structures::{Element, EqualityMode, FiniteStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tv {
    T,
    F,
    U,
}

impl Tv {
    fn of(b: bool) -> Tv {
        if b {
            Tv::T
        } else {
            Tv::F
        }
    }
}

/// Everything about one search that does not change during it.
pub(crate) struct Problem {
    pub layout: Layout,
    vocab: Arc<Vocabulary>,
    mode: EqualityMode,
    sentences: Vec<Compiled>,
    instances: Vec<(u32, u32)>,
    envs: Vec<u32>,
    order: Vec<u32>,
    max_slots: usize,
    symmetry: bool,
    pruning: bool,
    originals: Vec<Sentence>,
}

impl Problem {
    pub fn new(
        vocab: Arc<Vocabulary>,
        sentences: &[Sentence],
        size: usize,
        mode: EqualityMode,
        symmetry: bool,
        pruning: bool,
    ) -> Problem {
        let layout = Layout::new(&vocab, size, mode);
        let compiled: Vec<Compiled> = sentences.iter().map(|s| compile(s.formula(), &vocab)).collect();
        let mut instances = Vec::new();
        let mut envs = Vec::new();
        if pruning {
            for (i, c) in compiled.iter().enumerate() {
                for t in crate::structures::tuples(size, c.prefix) {
                    instances.push((i as u32, envs.len() as u32));
                    envs.extend(t);
                }
            }
        }
        let max_slots = compiled.iter().map(|c| c.slots).max().unwrap_or(0);
        let order = decision_order(&layout);
        Problem {
            layout,
            vocab,
            mode,
            sentences: compiled,
            instances,
            envs,
            order,
            max_slots,
            symmetry,
            pruning,
            originals: sentences.to_vec(),
        }
    }
}

/// Shared stop conditions for the workers of one search.
pub(crate) struct Control {
    pub deadline: Option<Instant>,
    pub timed_out: AtomicBool,
    cutoff: AtomicUsize,
    finished: Mutex<Vec<Option<usize>>>,
    limit: usize,
}

impl Control {
    pub fn new(deadline: Option<Instant>, branches: usize, limit: usize) -> Control {
        Control {
            deadline,
            timed_out: AtomicBool::new(false),
            cutoff: AtomicUsize::new(usize::MAX),
            finished: Mutex::new(vec![None; branches]),
            limit,
        }
    }

    /// Records that a branch finished with `found` models; once the branches
    /// before some index have jointly met the limit, later ones may stop.
    pub fn finish(&self, branch: usize, found: usize) {
        if self.limit == 0 {
            return;
        }
        let mut done = self.finished.lock().expect("no poisoned workers");
        done[branch] = Some(found);
        let mut total = 0;
        for (i, f) in done.iter().enumerate() {
            match f {
                Some(k) => {
                    total += k;
                    if total >= self.limit {
                        self.cutoff.fetch_min(i, Ordering::SeqCst);
                        break;
                    }
                }
                None => break,
            }
        }
    }

    pub fn past_cutoff(&self, branch: usize) -> bool {
        branch > self.cutoff.load(Ordering::SeqCst)
    }

    fn should_stop(&self, branch: usize) -> bool {
        if self.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        if branch > self.cutoff.load(Ordering::Relaxed) {
            return true;
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.timed_out.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }
}

#[derive(Clone)]
pub(crate) struct Engine<'p> {
    p: &'p Problem,
    values: Vec<u32>,
    trail: Vec<u32>,
    queue: Vec<u32>,
    watches: Vec<Vec<u32>>,
    watched: Vec<u64>,
    mdn: i64,
    env: Vec<u32>,
    reads: Vec<u32>,
    pub nodes: u64,
}

pub(crate) enum RunEnd {
    Exhausted,
    LimitReached,
    Stopped,
}

struct Frame {
    cell: u32,
    next: u32,
    hi: u32,
    trail_len: usize,
    mdn: i64,
}

impl<'p> Engine<'p> {
    /// Root engine; `None` if the sentences are already refuted.
    pub fn new(p: &'p Problem) -> Option<Engine<'p>> {
        let cells = p.layout.n_cells;
        let bits = if p.pruning { p.instances.len() * cells } else { 0 };
        let mut e = Engine {
            p,
            values: vec![UNSET; cells],
            trail: Vec::new(),
            queue: Vec::new(),
            watches: vec![Vec::new(); cells],
            watched: vec![0; bits.div_ceil(64)],
            mdn: -1,
            env: vec![0; p.max_slots],
            reads: Vec::new(),
            nodes: 0,
        };
        if p.pruning {
            for i in 0..p.instances.len() {
                if !e.visit(i as u32) {
                    return None;
                }
            }
            if !e.propagate() {
                return None;
            }
        }
        Some(e)
    }

    fn n(&self) -> u32 {
        self.p.layout.n as u32
    }

    fn value(&self, cell: usize) -> Option<u32> {
        let v = self.values[cell];
        (v != UNSET).then_some(v)
    }

    fn term(&self, t: &CTerm, env: &[u32], reads: &mut Vec<u32>) -> Option<u32> {
        match t {
            CTerm::Var(s) => Some(env[*s]),
            CTerm::Const(i) => {
                reads.push(*i as u32);
                self.value(*i)
            }
            CTerm::App(f, args) => {
                let cell = self.app_cell(self.p.layout.func_base[*f], args, env, reads)?;
                reads.push(cell as u32);
                self.value(cell)
            }
        }
    }

    fn app_cell(&self, base: usize, args: &[CTerm], env: &[u32], reads: &mut Vec<u32>) -> Option<usize> {
        let n = self.p.layout.n;
        let mut rank = 0usize;
        let mut known = true;
        for a in args {
            match self.term(a, env, reads) {
                Some(v) => rank = rank * n + v as usize,
                None => known = false,
            }
        }
        known.then_some(base + rank)
    }

    fn eq_cell(&self, a: &CTerm, b: &CTerm, env: &[u32], reads: &mut Vec<u32>) -> Option<usize> {
        let base = self.p.layout.eq_base?;
        let x = self.term(a, env, reads);
        let y = self.term(b, env, reads);
        Some(base + x? as usize * self.p.layout.n + y? as usize)
    }

    fn cell_tv(&self, cell: Option<usize>, reads: &mut Vec<u32>) -> Tv {
        match cell {
            None => Tv::U,
            Some(c) => {
                reads.push(c as u32);
                match self.value(c) {
                    None => Tv::U,
                    Some(v) => Tv::of(v == 1),
                }
            }
        }
    }

    fn eval(&self, f: &CForm, env: &mut [u32], reads: &mut Vec<u32>) -> Tv {
        match f {
            CForm::Rel(r, args) => {
                let cell = self.app_cell(self.p.layout.rel_base[*r], args, env, reads);
                self.cell_tv(cell, reads)
            }
            CForm::Eq(a, b) => {
                if self.p.mode == EqualityMode::Axiomatic {
                    let cell = self.eq_cell(a, b, env, reads);
                    return self.cell_tv(cell, reads);
                }
                let x = self.term(a, env, reads);
                let y = self.term(b, env, reads);
                match (x, y) {
                    (Some(x), Some(y)) => Tv::of(x == y),
                    _ => Tv::U,
                }
            }
            CForm::Not(x) => match self.eval(x, env, reads) {
                Tv::T => Tv::F,
                Tv::F => Tv::T,
                Tv::U => Tv::U,
            },
            CForm::And(a, b) => {
                let l = self.eval(a, env, reads);
                if l == Tv::F {
                    return Tv::F;
                }
                match (l, self.eval(b, env, reads)) {
                    (_, Tv::F) => Tv::F,
                    (Tv::T, Tv::T) => Tv::T,
                    _ => Tv::U,
                }
            }
            CForm::Or(a, b) => {
                let l = self.eval(a, env, reads);
                if l == Tv::T {
                    return Tv::T;
                }
                match (l, self.eval(b, env, reads)) {
                    (_, Tv::T) => Tv::T,
                    (Tv::F, Tv::F) => Tv::F,
                    _ => Tv::U,
                }
            }
            CForm::Implies(a, b) => {
                let l = self.eval(a, env, reads);
                if l == Tv::F {
                    return Tv::T;
                }
                match (l, self.eval(b, env, reads)) {
                    (_, Tv::T) => Tv::T,
                    (Tv::T, Tv::F) => Tv::F,
                    _ => Tv::U,
                }
            }
            CForm::Iff(a, b) => {
                let l = self.eval(a, env, reads);
                let r = self.eval(b, env, reads);
                match (l, r) {
                    (Tv::U, _) | (_, Tv::U) => Tv::U,
                    (l, r) => Tv::of(l == r),
                }
            }
            CForm::Forall(slot, body) => {
                let mut res = Tv::T;
                for e in 0..self.n() {
                    env[*slot] = e;
                    match self.eval(body, env, reads) {
                        Tv::F => return Tv::F,
                        Tv::U => res = Tv::U,
                        Tv::T => {}
                    }
                }
                res
            }
            CForm::Exists(slot, body) => {
                let mut res = Tv::F;
                for e in 0..self.n() {
                    env[*slot] = e;
                    match self.eval(body, env, reads) {
                        Tv::T => return Tv::T,
                        Tv::U => res = Tv::U,
                        Tv::F => {}
                    }
                }
                res
            }
        }
    }

    fn quick(&self, f: &CForm, env: &mut [u32]) -> Tv {
        let mut scratch = Vec::new();
        self.eval(f, env, &mut scratch)
    }

    fn assign(&mut self, cell: usize, v: u32) {
        debug_assert_eq!(self.values[cell], UNSET);
        self.values[cell] = v;
        self.trail.push(cell as u32);
        self.queue.push(cell as u32);
        if self.p.symmetry {
            let layout = &self.p.layout;
            if let Some(&m) = layout.args[cell].iter().max() {
                self.mdn = self.mdn.max(m as i64);
            }
            if layout.holds_element(cell) {
                self.mdn = self.mdn.max(v as i64);
            }
        }
    }

    fn set_cell(&mut self, cell: Option<usize>, v: u32) -> bool {
        match cell {
            None => true,
            Some(c) => match self.value(c) {
                None => {
                    self.assign(c, v);
                    true
                }
                Some(old) => old == v,
            },
        }
    }

    /// Makes `t` denote `v` if only its outermost cell is open.
    fn set_term(&mut self, t: &CTerm, env: &[u32], v: u32) -> bool {
        let mut scratch = Vec::new();
        let cell = match t {
            CTerm::Var(s) => return env[*s] == v,
            CTerm::Const(i) => Some(*i),
            CTerm::App(f, args) => self.app_cell(self.p.layout.func_base[*f], args, env, &mut scratch),
        };
        self.set_cell(cell, v)
    }

    /// Clause `(a is wa) | (b is wb)`.
    fn unit2(&mut self, a: &CForm, wa: bool, b: &CForm, wb: bool, env: &mut [u32]) -> bool {
        let va = self.quick(a, env);
        if va == Tv::of(wa) {
            return true;
        }
        let vb = self.quick(b, env);
        if vb == Tv::of(wb) {
            return true;
        }
        match (va, vb) {
            (Tv::U, Tv::U) => true,
            (Tv::U, _) => self.force(a, env, wa),
            (_, Tv::U) => self.force(b, env, wb),
            _ => false,
        }
    }

    /// Some element makes `body` equal to `want`.
    fn unit_quantifier(&mut self, slot: usize, body: &CForm, env: &mut [u32], want: bool) -> bool {
        let mut open = None;
        for e in 0..self.n() {
            env[slot] = e;
            match self.quick(body, env) {
                t if t == Tv::of(want) => return true,
                Tv::U => {
                    if open.is_some() {
                        return true;
                    }
                    open = Some(e);
                }
                _ => {}
            }
        }
        match open {
            None => false,
            Some(e) => {
                env[slot] = e;
                self.force(body, env, want)
            }
        }
    }

    /// Assigns whatever is implied by `f` having truth value `want`; false on
    /// contradiction.
    fn force(&mut self, f: &CForm, env: &mut [u32], want: bool) -> bool {
        match f {
            CForm::Rel(r, args) => {
                let mut scratch = Vec::new();
                let cell = self.app_cell(self.p.layout.rel_base[*r], args, env, &mut scratch);
                self.set_cell(cell, want as u32)
            }
            CForm::Eq(a, b) => {
                let mut scratch = Vec::new();
                if self.p.mode == EqualityMode::Axiomatic {
                    let cell = self.eq_cell(a, b, env, &mut scratch);
                    return self.set_cell(cell, want as u32);
                }
                let x = self.term(a, env, &mut scratch);
                let y = self.term(b, env, &mut scratch);
                match (x, y) {
                    (Some(x), Some(y)) => (x == y) == want,
                    (Some(x), None) if want => self.set_term(b, env, x),
                    (None, Some(y)) if want => self.set_term(a, env, y),
                    _ => true,
                }
            }
            CForm::Not(x) => self.force(x, env, !want),
            CForm::And(a, b) => {
                if want {
                    self.force(a, env, true) && self.force(b, env, true)
                } else {
                    self.unit2(a, false, b, false, env)
                }
            }
            CForm::Or(a, b) => {
                if want {
                    self.unit2(a, true, b, true, env)
                } else {
                    self.force(a, env, false) && self.force(b, env, false)
                }
            }
            CForm::Implies(a, b) => {
                if want {
                    self.unit2(a, false, b, true, env)
                } else {
                    self.force(a, env, true) && self.force(b, env, false)
                }
            }
            CForm::Iff(a, b) => {
                let va = self.quick(a, env);
                let vb = self.quick(b, env);
                match (va, vb) {
                    (Tv::U, Tv::U) => true,
                    (Tv::U, known) => self.force(a, env, (known == Tv::T) == want),
                    (known, Tv::U) => self.force(b, env, (known == Tv::T) == want),
                    (l, r) => (l == r) == want,
                }
            }
            CForm::Forall(slot, body) => {
                if want {
                    for e in 0..self.n() {
                        env[*slot] = e;
                        if !self.force(body, env, true) {
                            return false;
                        }
                    }
                    true
                } else {
                    self.unit_quantifier(*slot, body, env, false)
                }
            }
            CForm::Exists(slot, body) => {
                if want {
                    self.unit_quantifier(*slot, body, env, true)
                } else {
                    for e in 0..self.n() {
                        env[*slot] = e;
                        if !self.force(body, env, false) {
                            return false;
                        }
                    }
                    true
                }
            }
        }
    }

    fn watch(&mut self, inst: u32, cell: u32) {
        let bit = inst as usize * self.p.layout.n_cells + cell as usize;
        let (w, b) = (bit / 64, 1u64 << (bit % 64));
        if self.watched[w] & b == 0 {
            self.watched[w] |= b;
            self.watches[cell as usize].push(inst);
        }
    }

    /// Re-evaluates one ground instance; false on contradiction.
    fn visit(&mut self, inst: u32) -> bool {
        let p = self.p;
        let (sid, off) = p.instances[inst as usize];
        let compiled = &p.sentences[sid as usize];
        let mut env = std::mem::take(&mut self.env);
        let mut reads = std::mem::take(&mut self.reads);
        env[..compiled.prefix].copy_from_slice(&p.envs[off as usize..off as usize + compiled.prefix]);
        reads.clear();
        let tv = self.eval(&compiled.body, &mut env, &mut reads);
        for &c in &reads {
            self.watch(inst, c);
        }
        let ok = match tv {
            Tv::T => true,
            Tv::F => false,
            Tv::U => self.force(&compiled.body, &mut env, true),
        };
        self.env = env;
        self.reads = reads;
        ok
    }

    fn propagate(&mut self) -> bool {
        while let Some(c) = self.queue.pop() {
            let mut i = 0;
            while i < self.watches[c as usize].len() {
                let inst = self.watches[c as usize][i];
                i += 1;
                if !self.visit(inst) {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let c = self.trail.pop().expect("non-empty trail");
            self.values[c as usize] = UNSET;
        }
        self.queue.clear();
    }

    /// Next open cell: the first one some instance has already read, so
    /// that ground facts settle before unconstrained cells are guessed.
    fn pick(&self) -> Option<u32> {
        let mut fallback = None;
        for &c in &self.p.order {
            if self.values[c as usize] != UNSET {
                continue;
            }
            if !self.watches[c as usize].is_empty() {
                return Some(c);
            }
            fallback.get_or_insert(c);
        }
        fallback
    }

    fn hi(&self, cell: u32) -> u32 {
        let layout = &self.p.layout;
        let c = cell as usize;
        let top = layout.domain(c) - 1;
        if !self.p.symmetry || !layout.holds_element(c) {
            return top;
        }
        let max_arg = layout.args[c].iter().max().map(|&m| m as i64).unwrap_or(-1);
        if max_arg <= self.mdn {
            top.min((self.mdn + 1) as u32)
        } else {
            top
        }
    }

    /// Children of this node in value order, each already propagated; an
    /// empty list for a complete assignment is returned as `None`.
    pub fn children(&self) -> Option<Vec<Engine<'p>>> {
        let cell = self.pick()?;
        let mut out = Vec::new();
        for v in 0..=self.hi(cell) {
            let mut child = self.clone();
            child.assign(cell as usize, v);
            child.nodes += 1;
            if !self.p.pruning || child.propagate() {
                out.push(child);
            }
        }
        Some(out)
    }

    pub fn structure(&self) -> FiniteStructure {
        let layout = &self.p.layout;
        let vals = |range: std::ops::Range<usize>| self.values[range].to_vec();
        let constants = vals(0..layout.n_constants);
        let functions = layout
            .func_base
            .iter()
            .zip(&layout.func_arity)
            .map(|(&b, &k)| vals(b..b + layout.n.pow(k as u32)))
            .collect();
        let relations = layout
            .rel_base
            .iter()
            .zip(&layout.rel_arity)
            .map(|(&b, &k)| {
                self.values[b..b + layout.n.pow(k as u32)]
                    .iter()
                    .map(|&v| v == 1)
                    .collect()
            })
            .collect();
        let equality = layout.eq_base.map(|b| {
            self.values[b..b + layout.n * layout.n]
                .iter()
                .map(|&v| v == 1)
                .collect()
        });
        FiniteStructure::from_raw(
            Arc::clone(&self.p.vocab),
            layout.n,
            constants as Vec<Element>,
            functions,
            relations,
            equality,
        )
    }

    /// Depth-first search below this node. Each complete assignment that
    /// satisfies every sentence is handed to `sink`, which returns false to
    /// stop.
    pub fn run(
        &mut self,
        branch: usize,
        ctl: &Control,
        sink: &mut dyn FnMut(FiniteStructure) -> bool,
    ) -> RunEnd {
        let mut stack: Vec<Frame> = Vec::new();
        'node: loop {
            match self.pick() {
                None => {
                    let s = self.structure();
                    let holds = self
                        .p
                        .originals
                        .iter()
                        .all(|x| s.satisfies(x).expect("compiled against this vocabulary"));
                    if holds && !sink(s) {
                        return RunEnd::LimitReached;
                    }
                }
                Some(cell) => stack.push(Frame {
                    cell,
                    next: 0,
                    hi: self.hi(cell),
                    trail_len: self.trail.len(),
                    mdn: self.mdn,
                }),
            }
            loop {
                let Some(top) = stack.last_mut() else {
                    return RunEnd::Exhausted;
                };
                let (len, mdn) = (top.trail_len, top.mdn);
                if top.next > top.hi {
                    stack.pop();
                    self.undo(len);
                    self.mdn = mdn;
                    continue;
                }
                let (cell, v) = (top.cell, top.next);
                top.next += 1;
                self.undo(len);
                self.mdn = mdn;
                self.nodes += 1;
                if self.nodes % 512 == 0 && ctl.should_stop(branch) {
                    return RunEnd::Stopped;
                }
                self.assign(cell as usize, v);
                if !self.p.pruning || self.propagate() {
                    continue 'node;
                }
            }
        }
    }
}
