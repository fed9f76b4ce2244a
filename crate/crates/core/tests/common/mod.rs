//! Test-side oracles over the toy vocabulary {R/1, f/1, c}. Structures are
//! kept as plain tables and evaluated by a direct recursive walk that does
//! not touch the library evaluator.

#![allow(dead_code)]

use ffot::logic::{parse_sentences, Formula, Sentence, Term, Vocabulary};
use ffot::structures::{EqualityMode, FiniteStructure};
use rand::Rng;

pub fn toy_vocab() -> Vocabulary {
    Vocabulary::from_symbols([("R", 1)], [("f", 1)], ["c"]).unwrap()
}

/// A structure over {R/1, f/1, c} as raw tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Toy {
    pub n: u32,
    pub c: u32,
    pub f: Vec<u32>,
    pub r: Vec<bool>,
}

impl Toy {
    pub fn to_structure(&self) -> FiniteStructure {
        let mut a = FiniteStructure::new(toy_vocab(), self.n as usize, EqualityMode::Interpreted).unwrap();
        a.set_constant("c", self.c).unwrap();
        for x in 0..self.n {
            a.set_function("f", &[x], self.f[x as usize]).unwrap();
            a.set_relation("R", &[x], self.r[x as usize]).unwrap();
        }
        a
    }

    pub fn from_structure(a: &FiniteStructure) -> Toy {
        let n = a.size() as u32;
        Toy {
            n,
            c: a.constant("c").unwrap(),
            f: (0..n).map(|x| a.function("f", &[x]).unwrap()).collect(),
            r: (0..n).map(|x| a.relation("R", &[x]).unwrap()).collect(),
        }
    }
}

/// Every structure of size `n`, as an odometer over (c, f, R).
pub fn all_toys(n: u32) -> Vec<Toy> {
    let size = n as usize;
    let mut out = Vec::new();
    let fs = (n as usize).pow(n);
    for c in 0..n {
        for fi in 0..fs {
            let mut f = Vec::with_capacity(size);
            let mut k = fi;
            for _ in 0..size {
                f.push((k % size) as u32);
                k /= size;
            }
            for ri in 0..(1usize << size) {
                let r = (0..size).map(|i| ri >> i & 1 == 1).collect();
                out.push(Toy { n, c, f: f.clone(), r });
            }
        }
    }
    out
}

pub fn random_toy(rng: &mut impl Rng, n: u32) -> Toy {
    Toy {
        n,
        c: rng.gen_range(0..n),
        f: (0..n).map(|_| rng.gen_range(0..n)).collect(),
        r: (0..n).map(|_| rng.gen_bool(0.5)).collect(),
    }
}

fn term(a: &Toy, t: &Term, env: &[(String, u32)]) -> u32 {
    match t {
        Term::Var(v) => env.iter().rev().find(|(n, _)| n == v).expect("bound variable").1,
        Term::Const(_) => a.c,
        Term::App(_, args) => a.f[term(a, &args[0], env) as usize],
    }
}

/// Tarski's truth definition, spelled out.
pub fn naive_eval(a: &Toy, phi: &Formula, env: &mut Vec<(String, u32)>) -> bool {
    match phi {
        Formula::Atom(_, args) => a.r[term(a, &args[0], env) as usize],
        Formula::Eq(s, t) => term(a, s, env) == term(a, t, env),
        Formula::Not(p) => !naive_eval(a, p, env),
        Formula::And(p, q) => naive_eval(a, p, env) && naive_eval(a, q, env),
        Formula::Or(p, q) => naive_eval(a, p, env) || naive_eval(a, q, env),
        Formula::Implies(p, q) => !naive_eval(a, p, env) || naive_eval(a, q, env),
        Formula::Iff(p, q) => naive_eval(a, p, env) == naive_eval(a, q, env),
        Formula::Forall(v, p) | Formula::Exists(v, p) => {
            let want_all = matches!(phi, Formula::Forall(..));
            let mut verdict = want_all;
            for d in 0..a.n {
                env.push((v.clone(), d));
                let b = naive_eval(a, p, env);
                env.pop();
                if b != want_all {
                    verdict = !want_all;
                    break;
                }
            }
            verdict
        }
    }
}

pub fn naive_holds(a: &Toy, s: &Sentence) -> bool {
    naive_eval(a, s.formula(), &mut Vec::new())
}

pub const FIXED: &str = "\
R(c)
~R(c)
forall x. (R(x) <-> R(f(x)))
R(f(c))
~R(f(f(c)))
forall x. exists y. (f(y) = x)
exists x. (f(x) = x)
forall x. forall y. ((f(x) = f(y)) -> (x = y))
forall x. (R(x) -> R(f(x)))
exists x. (R(x) & ~(x = c))
forall x. ((x = c) | R(x))
(exists x. R(x)) -> R(f(c))
";

pub fn fixed_sentences() -> Vec<Sentence> {
    let s = parse_sentences(FIXED, &toy_vocab()).unwrap();
    assert_eq!(s.len(), 12);
    s
}

fn random_term(rng: &mut impl Rng, vars: &[String], depth: u32) -> Term {
    let pick = rng.gen_range(0..4);
    if depth > 0 && pick == 0 {
        return Term::app1("f", random_term(rng, vars, depth - 1));
    }
    if vars.is_empty() || pick == 1 {
        Term::cnst("c")
    } else {
        Term::var(&vars[rng.gen_range(0..vars.len())])
    }
}

/// A random formula whose free variables are among `vars`.
pub fn random_formula(rng: &mut impl Rng, vars: &mut Vec<String>, depth: u32) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return if rng.gen_bool(0.5) {
            Formula::atom("R", vec![random_term(rng, vars, 2)])
        } else {
            Formula::eq(random_term(rng, vars, 2), random_term(rng, vars, 2))
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => Formula::not(random_formula(rng, vars, d)),
        1 => Formula::and(random_formula(rng, vars, d), random_formula(rng, vars, d)),
        2 => Formula::or(random_formula(rng, vars, d), random_formula(rng, vars, d)),
        3 => Formula::implies(random_formula(rng, vars, d), random_formula(rng, vars, d)),
        4 => Formula::iff(random_formula(rng, vars, d), random_formula(rng, vars, d)),
        k => {
            let v = format!("x{}", vars.len());
            vars.push(v.clone());
            let body = random_formula(rng, vars, d);
            vars.pop();
            if k == 5 {
                Formula::forall(&v, body)
            } else {
                Formula::exists(&v, body)
            }
        }
    }
}

pub fn random_sentence(rng: &mut impl Rng, depth: u32) -> Sentence {
    Sentence::new(random_formula(rng, &mut Vec::new(), depth)).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: u32) -> Vec<u32> {
    use rand::seq::SliceRandom;
    let mut p: Vec<u32> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// All words over {0, 1} of length at most `max_len`, shortest first.
pub fn binary_words(max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| [format!("{w}0"), format!("{w}1")])
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}
