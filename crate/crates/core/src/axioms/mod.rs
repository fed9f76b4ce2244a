//! Generators for the equality, successor and ordered-field axiom sets, and
//! constructors for their finite models.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::logic::{Formula, Sentence, Term, Vocabulary};
use crate::structures::{Element, EqualityMode, FiniteStructure};

/// Names of the successor symbols.
pub const SUCC: &str = "S";
pub const ZERO: &str = "zero";
pub const END: &str = "e";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomSetId {
    Eq,
    Psa,
    PsaF,
    Dof,
    DofF,
    Distinct,
}

impl AxiomSetId {
    pub const ALL: [AxiomSetId; 6] = [
        AxiomSetId::Eq,
        AxiomSetId::Psa,
        AxiomSetId::PsaF,
        AxiomSetId::Dof,
        AxiomSetId::DofF,
        AxiomSetId::Distinct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomSetId::Eq => "eq",
            AxiomSetId::Psa => "psa",
            AxiomSetId::PsaF => "psa_f",
            AxiomSetId::Dof => "dof",
            AxiomSetId::DofF => "dof_f",
            AxiomSetId::Distinct => "distinct",
        }
    }

    /// Vocabulary the fixed sets are written in; `None` for the
    /// vocabulary-dependent ones.
    pub fn vocabulary(self) -> Option<Vocabulary> {
        match self {
            AxiomSetId::Psa => Some(psa_vocabulary()),
            AxiomSetId::PsaF => Some(psa_f_vocabulary()),
            AxiomSetId::Dof => Some(dof_vocabulary()),
            AxiomSetId::DofF => Some(dof_f_vocabulary()),
            AxiomSetId::Eq | AxiomSetId::Distinct => None,
        }
    }

    /// The sentences of a fixed set. `Eq` is taken over `vocab`, and
    /// `Distinct` over its constants.
    pub fn sentences(self, vocab: &Vocabulary) -> Vec<Sentence> {
        match self {
            AxiomSetId::Eq => equality_axioms(vocab),
            AxiomSetId::Psa => peano_successor_axioms(),
            AxiomSetId::PsaF => finite_peano_axioms(),
            AxiomSetId::Dof => dense_ordered_field_axioms(),
            AxiomSetId::DofF => finite_dof_axioms(),
            AxiomSetId::Distinct => {
                let cs: Vec<&str> = vocab.constants().iter().map(String::as_str).collect();
                distinct_constants_axioms(&cs)
            }
        }
    }
}

impl fmt::Display for AxiomSetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomSetId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AxiomSetId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown axiom set `{s}` (expected eq, psa, psa_f, dof, dof_f or distinct)"))
    }
}

fn sentence(f: Formula) -> Sentence {
    Sentence::new(f).expect("generated axioms are closed")
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn c(name: &str) -> Term {
    Term::cnst(name)
}

fn eq(a: Term, b: Term) -> Formula {
    Formula::eq(a, b)
}

fn app2(f: &str, a: Term, b: Term) -> Term {
    Term::app(f, vec![a, b])
}

fn rel2(r: &str, a: Term, b: Term) -> Formula {
    Formula::atom(r, vec![a, b])
}

fn and_all(parts: Vec<Formula>) -> Formula {
    Formula::conjunction(parts).expect("non-empty conjunction")
}

fn congruence(antecedent_vars: usize, consequent: Formula) -> Formula {
    let xs: Vec<String> = (1..=antecedent_vars).map(|i| format!("x{i}")).collect();
    let ys: Vec<String> = (1..=antecedent_vars).map(|i| format!("y{i}")).collect();
    let body = match Formula::conjunction(
        xs.iter().zip(&ys).map(|(x, y)| eq(v(x), v(y))),
    ) {
        Some(ante) => Formula::implies(ante, consequent),
        None => consequent,
    };
    let vars: Vec<&str> = xs.iter().chain(&ys).map(String::as_str).collect();
    Formula::forall_many(&vars, body)
}

/// Reflexivity, symmetry and transitivity, then one congruence sentence per
/// relation and per function, in declaration order.
pub fn equality_axioms(vocab: &Vocabulary) -> Vec<Sentence> {
    let mut out = vec![
        sentence(Formula::forall("x", eq(v("x"), v("x")))),
        sentence(Formula::forall_many(
            &["x", "y"],
            Formula::implies(eq(v("x"), v("y")), eq(v("y"), v("x"))),
        )),
        sentence(Formula::forall_many(
            &["x", "y", "z"],
            Formula::implies(
                Formula::and(eq(v("x"), v("y")), eq(v("y"), v("z"))),
                eq(v("x"), v("z")),
            ),
        )),
    ];
    let args = |p: &str, k: usize| (1..=k).map(|i| v(&format!("{p}{i}"))).collect::<Vec<_>>();
    for (r, k) in vocab.relations() {
        let cons = Formula::iff(Formula::atom(r, args("x", *k)), Formula::atom(r, args("y", *k)));
        out.push(sentence(congruence(*k, cons)));
    }
    for (f, k) in vocab.functions() {
        let cons = eq(Term::app(f, args("x", *k)), Term::app(f, args("y", *k)));
        out.push(sentence(congruence(*k, cons)));
    }
    out
}

pub fn psa_vocabulary() -> Vocabulary {
    Vocabulary::from_symbols([], [(SUCC, 1)], [ZERO]).expect("fixed vocabulary")
}

pub fn psa_f_vocabulary() -> Vocabulary {
    Vocabulary::from_symbols([], [(SUCC, 1)], [ZERO, END]).expect("fixed vocabulary")
}

fn s(t: Term) -> Term {
    Term::app1(SUCC, t)
}

pub fn peano_successor_axioms() -> Vec<Sentence> {
    vec![
        sentence(Formula::forall("x", Formula::not(eq(s(v("x")), c(ZERO))))),
        sentence(Formula::forall_many(
            &["x", "y"],
            Formula::implies(eq(s(v("x")), s(v("y"))), eq(v("x"), v("y"))),
        )),
        sentence(Formula::forall("x", Formula::not(eq(s(v("x")), v("x"))))),
    ]
}

pub fn finite_peano_axioms() -> Vec<Sentence> {
    vec![
        sentence(Formula::forall("x", Formula::not(eq(s(v("x")), c(ZERO))))),
        sentence(Formula::forall_many(
            &["x", "y"],
            Formula::implies(
                eq(s(v("x")), s(v("y"))),
                Formula::or(eq(v("x"), v("y")), eq(s(v("x")), c(END))),
            ),
        )),
        sentence(Formula::forall(
            "x",
            Formula::iff(eq(s(v("x")), v("x")), eq(v("x"), c(END))),
        )),
    ]
}

pub const LT: &str = "lt";
pub const LE: &str = "le";
pub const PLUS: &str = "plus";
pub const TIMES: &str = "times";
pub const ONE: &str = "one";
pub const APPROX: &str = "approx";
pub const NEG_E: &str = "neg_e";
pub const PREC: &str = "r";
pub const INV_R: &str = "inv_r";
pub const NEG_R: &str = "neg_r";

pub fn dof_vocabulary() -> Vocabulary {
    Vocabulary::from_symbols([(LT, 2), (LE, 2)], [(PLUS, 2), (TIMES, 2)], [ZERO, ONE])
        .expect("fixed vocabulary")
}

/// The ordered-field vocabulary plus `approx`, `e`, `neg_e`, `r`, `inv_r`
/// and `neg_r` (the last one names the `-r` used by the first finite axiom).
pub fn dof_f_vocabulary() -> Vocabulary {
    Vocabulary::from_symbols(
        [(LT, 2), (LE, 2), (APPROX, 2)],
        [(PLUS, 2), (TIMES, 2)],
        [ZERO, ONE, END, NEG_E, PREC, INV_R, NEG_R],
    )
    .expect("fixed vocabulary")
}

fn plus(a: Term, b: Term) -> Term {
    app2(PLUS, a, b)
}

fn times(a: Term, b: Term) -> Term {
    app2(TIMES, a, b)
}

fn lt(a: Term, b: Term) -> Formula {
    rel2(LT, a, b)
}

fn le(a: Term, b: Term) -> Formula {
    rel2(LE, a, b)
}

fn assoc_plus() -> Formula {
    eq(plus(plus(v("x"), v("y")), v("z")), plus(v("x"), plus(v("y"), v("z"))))
}

fn assoc_times() -> Formula {
    eq(times(times(v("x"), v("y")), v("z")), times(v("x"), times(v("y"), v("z"))))
}

fn distrib() -> Formula {
    eq(
        times(plus(v("x"), v("y")), v("z")),
        plus(times(v("x"), v("z")), times(v("y"), v("z"))),
    )
}

const XYZ: [&str; 3] = ["x", "y", "z"];
const XY: [&str; 2] = ["x", "y"];

/// The ordered-field axioms, left column then right column, row by row.
pub fn dense_ordered_field_axioms() -> Vec<Sentence> {
    let z = || c(ZERO);
    let (x, y, w) = (|| v("x"), || v("y"), || v("z"));
    let fs = vec![
        Formula::forall(
            "x",
            Formula::and(eq(plus(x(), z()), x()), eq(times(x(), z()), z())),
        ),
        lt(z(), c(ONE)),
        Formula::forall_many(&XYZ, assoc_plus()),
        Formula::forall_many(&XY, eq(plus(x(), y()), plus(y(), x()))),
        Formula::forall_many(&XYZ, assoc_times()),
        Formula::forall_many(&XY, eq(times(x(), y()), times(y(), x()))),
        Formula::forall_many(&XYZ, distrib()),
        Formula::forall("x", Formula::exists("y", eq(plus(x(), y()), z()))),
        Formula::forall_many(&XY, Formula::implies(le(z(), y()), le(x(), plus(x(), y())))),
        Formula::forall(
            "x",
            Formula::implies(
                Formula::not(eq(x(), z())),
                Formula::exists("y", eq(times(x(), y()), c(ONE))),
            ),
        ),
        Formula::forall_many(
            &XYZ,
            Formula::implies(Formula::and(lt(x(), y()), lt(y(), w())), lt(x(), w())),
        ),
        Formula::forall("x", Formula::not(lt(x(), x()))),
        Formula::forall_many(
            &XYZ,
            Formula::implies(le(x(), y()), le(plus(x(), w()), plus(y(), w()))),
        ),
        Formula::forall_many(
            &XY,
            Formula::iff(le(x(), y()), Formula::or(lt(x(), y()), eq(x(), y()))),
        ),
        Formula::forall_many(
            &XYZ,
            Formula::implies(
                Formula::and(lt(z(), w()), le(x(), y())),
                le(times(x(), w()), times(y(), w())),
            ),
        ),
        Formula::forall_many(
            &XY,
            Formula::or(Formula::or(lt(x(), y()), eq(x(), y())), lt(y(), x())),
        ),
    ];
    fs.into_iter().map(sentence).collect()
}

/// `lo < t1,..,tk < hi` in the expanded form
/// `(lo < t1) & (t1 < hi) & (lo < t2) & (t2 < hi) & ...`.
fn strictly_between(lo: Term, terms: Vec<Term>, hi: Term) -> Formula {
    and_all(
        terms
            .into_iter()
            .flat_map(|t| [lt(lo.clone(), t.clone()), lt(t, hi.clone())])
            .collect(),
    )
}

fn approx(a: Term, b: Term) -> Formula {
    rel2(APPROX, a, b)
}

/// The eight displayed finite-field sentences, first line kept as one
/// conjunction.
pub fn dof_prime_axioms() -> Vec<Sentence> {
    let (x, y, w) = (|| v("x"), || v("y"), || v("z"));
    let (z, e, ne, r, ir) = (|| c(ZERO), || c(END), || c(NEG_E), || c(PREC), || c(INV_R));
    let fs = vec![
        and_all(vec![
            le(z(), ir()),
            eq(times(r(), ir()), c(ONE)),
            eq(times(r(), r()), e()),
            eq(plus(ne(), e()), z()),
            eq(plus(c(NEG_R), r()), z()),
        ]),
        Formula::forall_many(
            &XY,
            Formula::iff(
                approx(x(), y()),
                Formula::and(le(x(), plus(y(), ir())), le(y(), plus(x(), ir()))),
            ),
        ),
        Formula::forall("x", Formula::implies(le(z(), x()), eq(plus(e(), x()), e()))),
        Formula::forall("x", Formula::implies(le(c(ONE), x()), eq(times(e(), x()), e()))),
        Formula::forall("x", Formula::and(le(x(), e()), le(ne(), x()))),
        Formula::forall_many(
            &XYZ,
            Formula::implies(
                strictly_between(ne(), vec![plus(x(), y()), plus(y(), w())], e()),
                assoc_plus(),
            ),
        ),
        Formula::forall_many(
            &XYZ,
            Formula::implies(
                strictly_between(ne(), vec![times(x(), y()), times(y(), w())], e()),
                approx(times(times(x(), y()), w()), times(x(), times(y(), w()))),
            ),
        ),
        Formula::forall_many(
            &XYZ,
            Formula::implies(
                strictly_between(
                    ne(),
                    vec![plus(x(), y()), times(x(), w()), times(y(), w())],
                    e(),
                ),
                approx(
                    times(plus(x(), y()), w()),
                    plus(times(x(), w()), times(y(), w())),
                ),
            ),
        ),
    ];
    fs.into_iter().map(sentence).collect()
}

/// The exact laws dropped from the ordered-field set in its finite variant.
pub fn removed_exact_laws() -> Vec<Sentence> {
    vec![
        sentence(Formula::forall_many(&XYZ, assoc_plus())),
        sentence(Formula::forall_many(&XYZ, assoc_times())),
        sentence(Formula::forall_many(&XYZ, distrib())),
    ]
}

/// The eight finite sentences followed by the ordered-field axioms without
/// the three exact laws.
pub fn finite_dof_axioms() -> Vec<Sentence> {
    let removed = removed_exact_laws();
    let mut out = dof_prime_axioms();
    out.extend(
        dense_ordered_field_axioms()
            .into_iter()
            .filter(|s| !removed.contains(s)),
    );
    out
}

/// `~(a = b)` for every unordered pair, in list order.
pub fn distinct_constants_axioms(cs: &[&str]) -> Vec<Sentence> {
    let mut out = Vec::new();
    for (i, a) in cs.iter().enumerate() {
        for b in &cs[i + 1..] {
            out.push(sentence(Formula::not(eq(c(a), c(b)))));
        }
    }
    out
}

/// The chain `0 -> 1 -> .. -> n` with `S(n) = n` and `e = n`.
pub fn build_psa_f_structure(n: usize) -> FiniteStructure {
    let mut a = FiniteStructure::new(Arc::new(psa_f_vocabulary()), n + 1, EqualityMode::Interpreted)
        .expect("positive size");
    for i in 0..=n {
        let next = (i + 1).min(n) as Element;
        a.set_function(SUCC, &[i as Element], next).expect("in range");
    }
    a.set_constant(ZERO, 0).expect("in range");
    a.set_constant(END, n as Element).expect("in range");
    a
}

/// Rounds `num / den` to the nearest integer, halves toward zero.
fn round_half_toward_zero(num: i64, den: i64) -> i64 {
    let q = num / den;
    let rem = num % den;
    if 2 * rem.abs() > den {
        q + num.signum()
    } else {
        q
    }
}

/// The grid `{a/m : -m^3 <= a <= m^3}`. Element `i` stands for `(i - m^3)/m`,
/// so the carrier order is the rational order.
pub fn build_dof_f_structure(m: usize) -> FiniteStructure {
    assert!(m >= 2, "build_dof_f_structure needs m >= 2");
    let m = m as i64;
    let top = m * m * m;
    let size = (2 * top + 1) as usize;
    let el = |a: i64| (a.clamp(-top, top) + top) as Element;
    let num = |i: usize| i as i64 - top;
    let mut s = FiniteStructure::new(Arc::new(dof_f_vocabulary()), size, EqualityMode::Interpreted)
        .expect("positive size");
    let sum = |a: i64, b: i64| el(a + b);
    for i in 0..size {
        for j in 0..size {
            let (a, b) = (num(i), num(j));
            let args = [i as Element, j as Element];
            s.set_function(PLUS, &args, sum(a, b)).expect("in range");
            s.set_function(TIMES, &args, el(round_half_toward_zero(a * b, m)))
                .expect("in range");
            s.set_relation(LT, &args, a < b).expect("in range");
            s.set_relation(LE, &args, a <= b).expect("in range");
        }
    }
    for i in 0..size {
        for j in 0..size {
            let (a, b) = (num(i), num(j));
            let near = a <= num(sum(b, 1) as usize) && b <= num(sum(a, 1) as usize);
            s.set_relation(APPROX, &[i as Element, j as Element], near)
                .expect("in range");
        }
    }
    for (name, a) in [
        (ZERO, 0),
        (ONE, m),
        (END, top),
        (NEG_E, -top),
        (PREC, m * m),
        (INV_R, 1),
        (NEG_R, -m * m),
    ] {
        s.set_constant(name, el(a)).expect("in range");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_sizes() {
        let empty = Vocabulary::new();
        assert_eq!(equality_axioms(&empty).len(), 3);
        let ex1 = Vocabulary::from_symbols([("R", 1)], [("f", 1)], ["c"]).unwrap();
        assert_eq!(equality_axioms(&ex1).len(), 5);
        assert_eq!(peano_successor_axioms().len(), 3);
        assert_eq!(finite_peano_axioms().len(), 3);
        assert_eq!(dense_ordered_field_axioms().len(), 16);
        assert_eq!(dof_prime_axioms().len(), 8);
        assert_eq!(finite_dof_axioms().len(), 21);
        assert_eq!(distinct_constants_axioms(&["a", "b"]).len(), 1);
        assert_eq!(distinct_constants_axioms(&["a", "b", "c"]).len(), 3);
    }

    #[test]
    fn exact_laws_are_removed() {
        let f = finite_dof_axioms();
        for s in removed_exact_laws() {
            assert!(!f.contains(&s), "{s}");
        }
    }

    #[test]
    fn generated_sets_fit_their_vocabularies() {
        for id in [AxiomSetId::Psa, AxiomSetId::PsaF, AxiomSetId::Dof, AxiomSetId::DofF] {
            let v = id.vocabulary().unwrap();
            for s in id.sentences(&v) {
                s.formula().check(&v).unwrap();
            }
        }
    }

    #[test]
    fn psa_f_chain() {
        let a = build_psa_f_structure(2);
        assert_eq!(a.size(), 3);
        assert_eq!(
            (0..3).map(|i| a.function(SUCC, &[i]).unwrap()).collect::<Vec<_>>(),
            vec![1, 2, 2]
        );
        for n in 1..=6 {
            let report = build_psa_f_structure(n).check_model(&finite_peano_axioms()).unwrap();
            assert!(report.all_hold(), "n = {n}\n{report}");
        }
    }

    #[test]
    fn dof_f_grid_basics() {
        let a = build_dof_f_structure(2);
        assert_eq!(a.size(), 17);
        let e = a.constant(END).unwrap();
        let one = a.constant(ONE).unwrap();
        assert_eq!(a.function(PLUS, &[e, one]), Some(e));
        assert_eq!(e, 16);
        assert_eq!(a.constant(PREC), Some(8 + 4));
        assert_eq!(a.constant(INV_R), Some(9));
    }

    #[test]
    fn rounding() {
        assert_eq!(round_half_toward_zero(3, 2), 1);
        assert_eq!(round_half_toward_zero(-3, 2), -1);
        assert_eq!(round_half_toward_zero(5, 3), 2);
        assert_eq!(round_half_toward_zero(-5, 3), -2);
        assert_eq!(round_half_toward_zero(4, 3), 1);
    }
}
