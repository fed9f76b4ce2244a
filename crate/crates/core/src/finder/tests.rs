use super::*;
use crate::axioms::{finite_peano_axioms, peano_successor_axioms, psa_f_vocabulary, psa_vocabulary};
use crate::logic::parse_sentence;
use crate::structures::tuples;

fn ex1() -> Vocabulary {
    Vocabulary::from_symbols([("R", 1)], [("f", 1)], ["c"]).unwrap()
}

fn sentences(v: &Vocabulary, texts: &[&str]) -> Vec<Sentence> {
    texts.iter().map(|t| parse_sentence(t, v).unwrap()).collect()
}

/// Every structure over `v` of size `n`, by brute-force enumeration.
fn all_structures(v: &Vocabulary, n: usize) -> Vec<FiniteStructure> {
    let base = FiniteStructure::new(v.clone(), n, EqualityMode::Interpreted).unwrap();
    let mut cells: Vec<(u8, String, Vec<u32>, u32)> = Vec::new();
    for c in v.constants() {
        cells.push((0, c.clone(), vec![], n as u32));
    }
    for (f, k) in v.functions() {
        for t in tuples(n, *k) {
            cells.push((1, f.clone(), t, n as u32));
        }
    }
    for (r, k) in v.relations() {
        for t in tuples(n, *k) {
            cells.push((2, r.clone(), t, 2));
        }
    }
    let total: u64 = cells.iter().map(|c| c.3 as u64).product();
    (0..total)
        .map(|mut code| {
            let mut a = base.clone();
            for (kind, name, args, dom) in &cells {
                let v = (code % *dom as u64) as u32;
                code /= *dom as u64;
                match kind {
                    0 => a.set_constant(name, v).unwrap(),
                    1 => a.set_function(name, args, v).unwrap(),
                    _ => a.set_relation(name, args, v == 1).unwrap(),
                }
            }
            a
        })
        .collect()
}

const SWEEP: &[&str] = &[
    "forall x. (R(x) <-> R(f(x)))",
    "R(c)",
    "~R(f(f(c)))",
    "forall x. ~(f(x) = x)",
    "exists x. (R(x) & ~R(f(x)))",
    "forall x. forall y. ((f(x) = f(y)) -> (x = y))",
    "exists x. forall y. (f(y) = x)",
    "(R(c) | R(f(c))) -> forall x. R(x)",
];

#[test]
fn unsatisfiable_sentence_has_no_models() {
    let v = ex1();
    let s = sentences(&v, &["forall x. ~(x = x)"]);
    for n in 1..=3 {
        assert!(find_models(&v, &s, &SearchConfig::size(n)).unwrap().models.is_empty());
    }
}

#[test]
fn example_one_single_point_model() {
    let v = ex1();
    let s = sentences(&v, &["forall x. (R(x) <-> R(f(x)))", "R(c)"]);
    let set = find_models(&v, &s, &SearchConfig::size(1).with_symmetry_breaking(false)).unwrap();
    assert_eq!(set.models.len(), 1);
    let m = &set.models[0];
    assert_eq!((m.relation("R", &[0]), m.function("f", &[0]), m.constant("c")), (Some(true), Some(0), Some(0)));
}

#[test]
fn agrees_with_generate_and_filter() {
    let v = ex1();
    for n in 1..=3 {
        let everything = all_structures(&v, n);
        for text in SWEEP {
            let s = sentences(&v, &[text]);
            let mut expected: Vec<FiniteStructure> = everything
                .iter()
                .filter(|a| a.satisfies(&s[0]).unwrap())
                .cloned()
                .collect();
            expected.sort_by_cached_key(canonical_form);
            for pruning in [true, false] {
                let cfg = SearchConfig::size(n).with_symmetry_breaking(false).with_pruning(pruning);
                let got = find_models(&v, &s, &cfg).unwrap().models;
                assert_eq!(got, expected, "{text} at size {n}, pruning {pruning}");
            }
        }
    }
}

#[test]
fn symmetry_breaking_keeps_every_isomorphism_class() {
    let v = ex1();
    let n = 3;
    let perms: Vec<Vec<u32>> = tuples(n, n)
        .filter(|p| {
            let mut q = p.clone();
            q.sort();
            q == vec![0, 1, 2]
        })
        .collect();
    let class = |a: &FiniteStructure| {
        perms
            .iter()
            .map(|p| canonical_form(&a.apply_isomorphism(p).unwrap()))
            .min()
            .unwrap()
    };
    for text in SWEEP {
        let s = sentences(&v, &[text]);
        let all = find_models(&v, &s, &SearchConfig::size(n).with_symmetry_breaking(false)).unwrap();
        let some = find_models(&v, &s, &SearchConfig::size(n)).unwrap();
        let mut want: Vec<_> = all.models.iter().map(class).collect();
        want.sort();
        want.dedup();
        let mut have: Vec<_> = some.models.iter().map(class).collect();
        have.sort();
        have.dedup();
        assert_eq!(have, want, "{text}");
        assert!(some.models.len() <= all.models.len());
    }
}

#[test]
fn successor_axioms_have_no_small_models() {
    let v = psa_vocabulary();
    let mut s = crate::axioms::equality_axioms(&v);
    s.extend(peano_successor_axioms());
    let set = find_models(&v, &s, &SearchConfig::sizes(1, 6)).unwrap();
    assert!(set.models.is_empty());
    assert_eq!(set.sizes_checked, vec![1, 2, 3, 4, 5, 6]);
}

#[test]
fn finite_successor_axioms_have_the_chain() {
    let v = psa_f_vocabulary();
    let mut s = crate::axioms::equality_axioms(&v);
    s.extend(finite_peano_axioms());
    let r = satisfiable_at(&v, &s, 3, &SearchConfig::default()).unwrap();
    let m = r.witness().expect("a chain model");
    assert!(m.check_model(&s).unwrap().all_hold());
    let min = find_min_model_size(&v, &s, 5, &SearchConfig::default()).unwrap();
    assert_eq!(min.size, Some(2));
}

#[test]
fn satisfiability_examples() {
    let v = ex1();
    let s = sentences(&v, &["exists x. (x = x)"]);
    assert!(satisfiable_at(&v, &s, 1, &SearchConfig::default()).unwrap().is_sat());
    let s = sentences(
        &v,
        &["forall x. (R(x) <-> R(f(x)))", "R(c)", "R(f(c))", "~R(f(f(c)))"],
    );
    for n in 1..=3 {
        assert!(!satisfiable_at(&v, &s, n, &SearchConfig::default()).unwrap().is_sat());
    }
    let two = sentences(&v, &["exists x. exists y. ~(x = y)"]);
    assert_eq!(find_min_model_size(&v, &two, 4, &SearchConfig::default()).unwrap().size, Some(2));
}

#[test]
fn entailment_examples() {
    let v = ex1();
    let t = sentences(&v, &["forall x. (R(x) <-> R(f(x)))"]);
    let cfg = SearchConfig::sizes(1, 3);
    let pos = entails_at(&v, &t, &sentences(&v, &["R(c)"]), &sentences(&v, &["R(f(c))"]), &cfg).unwrap();
    assert_eq!(pos.status, VerdictStatus::EntailedAtBound);
    let neg = entails_at(&v, &t, &sentences(&v, &["~R(c)"]), &sentences(&v, &["~R(f(f(c)))"]), &cfg).unwrap();
    assert_eq!(neg.status, VerdictStatus::EntailedAtBound);
    let open = entails_at(&v, &[], &sentences(&v, &["R(c)"]), &sentences(&v, &["R(f(c))"]), &SearchConfig::sizes(1, 2))
        .unwrap();
    match open.status {
        VerdictStatus::Refuted { witness } => {
            let fc = witness.function("f", &[witness.constant("c").unwrap()]).unwrap();
            assert_eq!(witness.relation("R", &[fc]), Some(false));
            assert_eq!(witness.relation("R", &[witness.constant("c").unwrap()]), Some(true));
        }
        other => panic!("expected a refutation, got {other:?}"),
    }
    let none = entails_at(&v, &sentences(&v, &["forall x. ~(x = x)"]), &[], &sentences(&v, &["R(c)"]), &cfg).unwrap();
    assert_eq!(none.status, VerdictStatus::NoModelsAtBound);
}

#[test]
fn canonical_form_properties() {
    let v = ex1();
    let a = all_structures(&v, 2).into_iter().nth(13).unwrap();
    assert_eq!(canonical_form(&a), canonical_form(&a.clone()));
    let mut asym = FiniteStructure::new(v.clone(), 3, EqualityMode::Interpreted).unwrap();
    asym.set_relation("R", &[0], true).unwrap();
    asym.set_function("f", &[0], 1).unwrap();
    asym.set_function("f", &[1], 2).unwrap();
    assert_ne!(canonical_form(&asym), canonical_form(&asym.apply_isomorphism(&[1, 2, 0]).unwrap()));
    let bin = Vocabulary::from_symbols([("E", 2)], [("g", 2)], ["k"]).unwrap();
    for n in [2usize, 4, 8] {
        let s = FiniteStructure::new(bin.clone(), n, EqualityMode::Interpreted).unwrap();
        let len = canonical_form(&s).len() as i64;
        assert_eq!(len, ((n * n + n * n * n + n) as i64 + 7) / 8 + 4, "n = {n}");
    }
}

#[test]
fn results_do_not_depend_on_jobs() {
    let v = ex1();
    for text in SWEEP {
        let s = sentences(&v, &[text]);
        for limit in [0, 1, 3] {
            let one = find_models(&v, &s, &SearchConfig::sizes(1, 4).with_limit(limit)).unwrap();
            let four = find_models(&v, &s, &SearchConfig::sizes(1, 4).with_limit(limit).with_jobs(4)).unwrap();
            assert_eq!(one.models, four.models, "{text}");
            assert_eq!(one.models_examined, four.models_examined, "{text}");
        }
    }
}

#[test]
fn axiomatic_equality_allows_congruences() {
    let v = ex1();
    let mut s = crate::axioms::equality_axioms(&v);
    s.push(parse_sentence("exists x. exists y. ((x = y) & R(x) & ~R(y))", &v).unwrap());
    let cfg = SearchConfig::sizes(1, 3).with_equality(EqualityMode::Axiomatic);
    assert!(find_models(&v, &s, &cfg).unwrap().models.is_empty());
    let merged = sentences(&v, &["forall x. forall y. (x = y)", "R(c)"]);
    let mut with_eq = crate::axioms::equality_axioms(&v);
    with_eq.extend(merged.clone());
    assert!(satisfiable_at(&v, &with_eq, 2, &cfg).unwrap().is_sat());
    assert!(!satisfiable_at(&v, &merged, 2, &SearchConfig::default()).unwrap().is_sat());
}
