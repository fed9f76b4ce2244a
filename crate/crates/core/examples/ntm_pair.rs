//! Runs the complementary pair "contains a 1" / "has no 1" as one theory and
//! reads the accepting run back out of a model.

use ffot::finder::{satisfiable_within, SearchConfig};
use ffot::machine::{compute, Input};
use ffot::tm::{extract_trace, ntm_pair_to_ffot, parse_tmspec, NTMPair};

fn main() {
    let a = parse_tmspec(include_str!("../fixtures/contains_one.tmspec")).unwrap();
    let b = parse_tmspec(include_str!("../fixtures/no_ones.tmspec")).unwrap();
    let m = ntm_pair_to_ffot(&NTMPair::new(a.clone(), b.clone()).unwrap()).unwrap();
    let cfg = SearchConfig::sizes(1, 8).with_jobs(4);
    for w in ["00", "01"] {
        let input = Input::Word(w.into());
        let r = compute(&m, &input, &cfg).unwrap();
        println!("{w}: {:?}", r.output_label());
        let mut ss = m.full_theory();
        ss.extend(m.resolve(&input).unwrap());
        let found = satisfiable_within(m.vocabulary(), &ss, &cfg).unwrap();
        if let Some(model) = found.result.witness() {
            let trace = extract_trace(&[&a, &b], model).unwrap();
            let path: Vec<String> = trace.steps.iter().map(|s| format!("{}@{}", s.state, s.head)).collect();
            println!("    machine {:?}: {}", trace.machine, path.join(" "));
        }
    }
}
