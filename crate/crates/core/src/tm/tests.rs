use super::*;
use crate::logic::parse_sentence;

fn parity() -> TMSpec {
    parse_tmspec(include_str!("../../fixtures/parity.tmspec")).unwrap()
}

fn contains_one() -> TMSpec {
    parse_tmspec(include_str!("../../fixtures/contains_one.tmspec")).unwrap()
}

fn no_ones() -> TMSpec {
    parse_tmspec(include_str!("../../fixtures/no_ones.tmspec")).unwrap()
}

fn ones(w: &str) -> usize {
    w.chars().filter(|&c| c == '1').count()
}

#[test]
fn fixtures_validate() {
    for m in [parity(), contains_one(), no_ones()] {
        let rep = validate_tm(&m);
        assert!(rep.is_valid(), "{}: {:?}", m.name, rep.errors);
        assert!(rep.warnings.is_empty());
    }
}

#[test]
fn missing_rule_is_named() {
    let mut m = parity();
    m.rules.retain(|r| !(r.state == "odd" && r.read == "c0"));
    let rep = validate_tm(&m);
    assert_eq!(
        rep.errors,
        vec![TmIssue::MissingRule {
            state: "odd".into(),
            read: "c0".into()
        }]
    );
}

#[test]
fn rule_from_halting_state() {
    let mut m = parity();
    m.rules.push(Rule::new("acc", "b", "acc", "b", Move::Pause));
    let rep = validate_tm(&m);
    assert!(matches!(rep.errors.as_slice(), [TmIssue::RuleFromHaltingState { .. }]));
}

#[test]
fn determinism_and_left_edge() {
    let mut m = parity();
    m.rules.push(Rule::new("even", "c0", "odd", "c0", Move::Right));
    assert!(matches!(
        validate_tm(&m).errors.as_slice(),
        [TmIssue::Nondeterministic { count: 2, .. }]
    ));
    let mut m = parity();
    let r = m.rules.iter_mut().find(|r| r.state == "even" && r.read == "L").unwrap();
    r.mv = Move::Left;
    let rep = validate_tm(&m);
    assert!(rep.is_valid());
    assert_eq!(rep.warnings.len(), 1);
}

#[test]
fn reserved_names_rejected() {
    let mut m = parity();
    m.states.push("h".into());
    assert!(!validate_tm(&m).is_valid());
}

#[test]
fn parity_simulation() {
    let m = parity();
    assert_eq!(simulate_tm(&m, "", 100).unwrap(), SimOutcome::Accepted { steps: 4 });
    assert_eq!(simulate_tm(&m, "1", 100).unwrap(), SimOutcome::Rejected { steps: 5 });
    let letters = ['0', '1'];
    let mut words = vec![String::new()];
    for len in 1..=6 {
        let mut next = Vec::new();
        for w in words.iter().filter(|w| w.len() == len - 1) {
            for l in letters {
                next.push(format!("{w}{l}"));
            }
        }
        words.extend(next);
    }
    for w in &words {
        let out = simulate_tm(&m, w, 100).unwrap();
        assert_eq!(out.accepted(), ones(w) % 2 == 0, "{w}");
        assert_eq!(out.steps(), w.len() + 4, "{w}");
    }
}

#[test]
fn looping_machine_times_out() {
    let mut m = parity();
    for r in m.rules.iter_mut().filter(|r| r.state == "tidy") {
        r.next = "even".into();
        r.write = r.read.clone();
        r.mv = Move::Pause;
    }
    // even b -> even L, even L -> tidy c0, tidy c0 -> even c0 ... cycles
    let out = simulate_tm(&m, "", 50).unwrap();
    assert_eq!(out, SimOutcome::Timeout { steps: 50 });
}

#[test]
fn ntm_oracle() {
    let n1 = contains_one();
    let n2 = no_ones();
    assert_eq!(simulate_ntm(&n1, "010", 20).unwrap(), NtmOutcome::Accepted { steps: 2 });
    assert_eq!(simulate_ntm(&n1, "000", 20).unwrap(), NtmOutcome::NoAcceptingPath);
    assert_eq!(simulate_ntm(&n2, "000", 20).unwrap(), NtmOutcome::Accepted { steps: 4 });
    let p = parity();
    for w in ["", "0", "1", "01", "11", "0110", "1011"] {
        assert_eq!(
            simulate_ntm(&p, w, 50).unwrap().accepted(),
            simulate_tm(&p, w, 50).unwrap().accepted()
        );
    }
    assert!(simulate_tm(&n1, "1", 10).is_err());
}

#[test]
fn spec_file_round_trip() {
    for m in [parity(), contains_one(), no_ones()] {
        assert_eq!(parse_tmspec(&write_tmspec(&m)).unwrap(), m);
    }
    let bad = "states = a\n[rules]\na b -> a b SIDEWAYS\n";
    assert!(matches!(parse_tmspec(bad), Err(TmError::Format { line: 3, .. })));
}

#[test]
fn rule_sentence_shapes() {
    let m = parity();
    let rs = rule_sentences(&m).unwrap();
    assert_eq!(rs.len(), 3 * 4);
    let vocab = tm_to_ffot_finite(&m).unwrap().vocabulary().clone();
    let p = |t: &str| parse_sentence(t, &vocab).unwrap();
    assert!(rs.contains(&p(
        "forall x. (((I(x) = even) & (C(x, H(x)) = c0)) -> (((I(S(x)) = even) & (C(S(x), H(x)) = c0)) & (H(S(x)) = S(H(x)))))"
    )));
    assert!(rs.contains(&p(
        "forall x. (((I(x) = tidy) & (C(x, H(x)) = L)) -> (((I(S(x)) = acc) & (C(S(x), H(x)) = L)) & (H(S(x)) = H(x))))"
    )));
    let mut n = contains_one();
    n.reject = None;
    n.states.retain(|s| s != "rej1");
    n.rules.retain(|r| r.next != "rej1");
    n.rules.push(Rule::new("g", "b", "g", "b", Move::Pause));
    n.rules.push(Rule::new("g", "L", "g", "L", Move::Pause));
    let rs = rule_sentences(&n).unwrap();
    let split: Vec<String> = rs.iter().map(|r| r.to_string()).filter(|t| t.contains(" | ")).collect();
    assert_eq!(split.len(), 1);
    assert!(split[0].contains("(C(x, H(x)) = c1)"), "{}", split[0]);
}

#[test]
fn halting_set() {
    let ht = halting_sentences("acc", "rej");
    assert_eq!(ht.len(), 4);
    assert_eq!(
        ht[1].to_string(),
        "forall x. ((I(x) = acc) -> (I(S(x)) = acc))"
    );
}

#[test]
fn compiled_theory_mentions_start_and_blank() {
    let m = tm_to_ffot_infinite(&parity()).unwrap();
    let p = |t: &str| parse_sentence(t, m.vocabulary()).unwrap();
    let th = m.full_theory();
    assert!(th.contains(&p("((H(zero) = S(zero)) & (C(zero, zero) = L)) & (I(zero) = even)")));
    assert!(th.contains(&p("forall y. ((C(zero, y) = b) -> (C(zero, S(y)) = b))")));
    assert!(th.contains(&p("forall x. forall y. (~(H(x) = y) -> (C(S(x), y) = C(x, y)))")));
    assert!(m.vocabulary().constant_index("e").is_none());
    assert!(tm_to_ffot_finite(&contains_one()).is_err());
}

#[test]
fn pair_construction() {
    let pair = NTMPair::new(contains_one(), no_ones()).unwrap();
    let m = ntm_pair_to_ffot(&pair).unwrap();
    let p = |t: &str| parse_sentence(t, m.vocabulary()).unwrap();
    assert!(m.theory().contains(&p("(I(zero) = g) | (I(zero) = z)")));
    assert!(m.theory().contains(&p("(I(h) = acc1) | (I(h) = acc2)")));
    assert!(m.theory().contains(&p("forall x. ~((I(x) = rej1) & (C(x, H(x)) = b))")));
    assert!(NTMPair::new(contains_one(), contains_one()).is_err());
}
