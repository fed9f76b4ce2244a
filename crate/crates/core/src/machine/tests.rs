use super::*;
use crate::axioms::{psa_vocabulary, AxiomSetId};
use crate::logic::{parse_sentence, parse_term, Term};

fn s(m: &FFOTMachine, t: &str) -> Sentence {
    parse_sentence(t, m.vocabulary()).unwrap()
}

#[test]
fn example_outputs() {
    let m = example_machine();
    let cfg = SearchConfig::sizes(1, 3);
    let pos = compute(&m, &Input::Label("I_pos".into()), &cfg).unwrap();
    assert_eq!(pos.output_label(), Some("O_pos"));
    let neg = compute(&m, &Input::Label("I_neg".into()), &cfg).unwrap();
    assert_eq!(neg.output_label(), Some("O_neg"));
    assert_eq!(neg.sizes_checked, vec![1, 2, 3]);
}

#[test]
fn empty_theory_is_undefined() {
    let e = example_machine();
    let m = FFOTMachine::new(e.vocabulary().clone(), vec![])
        .and_then(|m| m.with_output("yes", vec![s(&e, "R(c)")]))
        .and_then(|m| m.with_output("no", vec![s(&e, "~R(c)")]))
        .unwrap();
    let r = compute(&m, &Input::Sentences(vec![]), &SearchConfig::sizes(1, 3)).unwrap();
    match r.status {
        ComputeStatus::Undefined { labels, witnesses } => {
            assert_eq!(labels, ["yes".to_string(), "no".to_string()]);
            assert!(witnesses.iter().all(|w| w.size() == 1));
            assert!(witnesses[0].satisfies(&s(&e, "R(c)")).unwrap());
            assert!(witnesses[1].satisfies(&s(&e, "~R(c)")).unwrap());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn input_without_output_is_reported() {
    let m = example_machine();
    let r = compute(&m, &Input::Sentences(vec![]), &SearchConfig::sizes(1, 2)).unwrap();
    assert!(matches!(r.status, ComputeStatus::Undefined { .. } | ComputeStatus::NoOutputAtBound { .. }));
    let contradiction = vec![s(&m, "R(c)"), s(&m, "~R(c)")];
    let r = compute(&m, &Input::Sentences(contradiction), &SearchConfig::sizes(1, 2)).unwrap();
    assert_eq!(
        r.status,
        ComputeStatus::NoOutputAtBound {
            reason: NoOutputReason::NoModels
        }
    );
}

#[test]
fn validation() {
    let m = example_machine();
    let rep = validate_machine(&m, &[], &SearchConfig::sizes(1, 3)).unwrap();
    assert!(rep.passed(), "{rep:?}");

    let bad = FFOTMachine::new(m.vocabulary().clone(), m.theory().to_vec())
        .and_then(|b| b.with_input("I_pos", vec![s(&m, "R(c)")]))
        .and_then(|b| b.with_output("A", vec![s(&m, "R(f(c))")]))
        .and_then(|b| b.with_output("B", vec![s(&m, "R(c)")]))
        .unwrap();
    let rep = validate_machine(&bad, &[], &SearchConfig::sizes(1, 1)).unwrap();
    assert!(!rep.passed());
    let (_, c) = rep.conflicts().next().unwrap();
    assert_eq!(c.witness.size(), 1);

    let empty = FFOTMachine::new(Vocabulary::new(), vec![s(&m, "forall x. ~(x = x)")])
        .and_then(|b| b.with_input("I", vec![]))
        .unwrap();
    let rep = validate_machine(&empty, &[], &SearchConfig::sizes(1, 3)).unwrap();
    assert_eq!(rep.checks[0].satisfiability, InputSatisfiability::NoModelsAtBound);
}

#[test]
fn duplicate_output_sets_rejected() {
    let m = example_machine();
    let r = m.clone().with_output("again", vec![s(&m, "R(f(c))")]);
    assert!(matches!(r, Err(MachineError::Invalid(_))));
}

fn tm_encoding() -> (Vocabulary, WordEncodingConfig) {
    let mut v = psa_vocabulary();
    v.add_function("C", 2).unwrap();
    for c in ["a", "bs", "blank"] {
        v.add_constant(c).unwrap();
    }
    let seq = SimpleSequence::new(
        parse_term("C(zero, y)", &v).unwrap(),
        parse_term("S(y)", &v).unwrap(),
        parse_term("S(zero)", &v).unwrap(),
    )
    .unwrap();
    let enc = WordEncodingConfig::new(seq, vec![('a', "a".into()), ('b', "bs".into())], "blank", true).unwrap();
    (v, enc)
}

#[test]
fn word_sets() {
    let (v, enc) = tm_encoding();
    let ss = encode_word(&WordEncodingConfig { add_distinctness: false, ..enc.clone() }, "ab").unwrap();
    let expect: Vec<Sentence> = ["C(zero, S(zero)) = a", "C(zero, S(S(zero))) = bs", "C(zero, S(S(S(zero)))) = blank"]
        .iter()
        .map(|t| parse_sentence(t, &v).unwrap())
        .collect();
    assert_eq!(ss, expect);
    let empty = encode_word(&WordEncodingConfig { add_distinctness: false, ..enc.clone() }, "").unwrap();
    assert_eq!(empty, vec![parse_sentence("C(zero, S(zero)) = blank", &v).unwrap()]);
    assert_eq!(encode_word(&enc, "abx"), Err(MachineError::OutsideAlphabet('x')));
    assert_eq!(encode_word(&enc, "ab").unwrap().len(), 3 + 3);
}

#[test]
fn decode_inverts_encode() {
    let (_, enc) = tm_encoding();
    for w in enc.words_up_to(6) {
        assert_eq!(decode(&enc, &encode_word(&enc, &w).unwrap()).as_deref(), Some(w.as_str()));
    }
    assert_eq!(enc.words_up_to(3).len(), 15);
}

#[test]
fn prefix_sets_conflict() {
    let (v, enc) = tm_encoding();
    for (w, p) in [("ab", "a"), ("a", ""), ("bab", "ba")] {
        let mut ss = encode_word(&enc, w).unwrap();
        ss.extend(encode_word(&enc, p).unwrap());
        let r = satisfiable_within(&v, &ss, &SearchConfig::sizes(1, 4)).unwrap();
        assert!(matches!(r.result, Satisfiability::Unsatisfiable), "{w} / {p}");
    }
}

#[test]
fn sequence_shape_is_checked() {
    let v = psa_vocabulary();
    let bad = SimpleSequence::new(Term::var("z"), Term::var("y"), Term::cnst("zero"));
    assert!(bad.is_err());
    let bad = SimpleSequence::new(Term::var("y"), Term::var("y"), Term::var("y"));
    assert!(bad.is_err());
    let ok = SimpleSequence::new(Term::var("y"), parse_term("S(y)", &v).unwrap(), Term::cnst("zero")).unwrap();
    assert_eq!(ok.term(2).to_string(), "S(S(zero))");
}

#[test]
fn psa_machine_has_no_resources() {
    let (v, enc) = tm_encoding();
    let m = FFOTMachine::new(v, vec![])
        .and_then(|m| m.with_include(Include::new(AxiomSetId::Eq)))
        .and_then(|m| m.with_include(Include::new(AxiomSetId::Psa)))
        .and_then(|m| m.with_word_encoding(enc.clone()))
        .unwrap();
    let r = measure_resources(&m, &enc, "a", 4, &SearchConfig::default()).unwrap();
    assert_eq!(r.size, None);
}

#[test]
fn file_round_trip() {
    let (v, enc) = tm_encoding();
    let m = FFOTMachine::new(v.clone(), vec![parse_sentence("forall y. C(zero, y) = C(zero, S(y))", &v).unwrap()])
        .and_then(|m| m.with_include(Include::new(AxiomSetId::PsaF)))
        .and_then(|m| m.with_include(Include::distinct(&["a", "bs"])))
        .and_then(|m| m.with_output("one", vec![parse_sentence("a = bs", &v).unwrap()]))
        .and_then(|m| m.with_word_encoding(enc))
        .unwrap();
    let text = write_machine(&m);
    assert_eq!(parse_machine(&text).unwrap(), m);
    let e = example_machine();
    assert_eq!(parse_machine(&write_machine(&e)).unwrap(), e);
}

#[test]
fn file_errors_carry_lines() {
    let text = "[vocabulary]\nrelation R/1\n[theory]\nR(c)\n";
    assert!(matches!(parse_machine(text), Err(MachineError::Format { line: 4, .. })));
    let text = "[vocabulary]\nconstant c\n[bogus]\n";
    assert!(matches!(parse_machine(text), Err(MachineError::Format { line: 3, .. })));
    let text = "[include]\npsa x\n";
    assert!(matches!(parse_machine(text), Err(MachineError::Format { line: 2, .. })));
}
