mod common;

use common::*;
use ffot::logic::parse_sentence;
use ffot::machine::{example_machine, parse_machine, write_machine};
use ffot::structures::{parse_structure, write_structure};
use ffot::tm::{ntm_pair_to_ffot, parse_tmspec, tm_to_ffot_finite, write_tmspec, NTMPair};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn printed_sentences_parse_back(seed in any::<u64>(), depth in 0u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_sentence(&mut rng, depth);
        let back = parse_sentence(&s.to_string(), &toy_vocab()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn written_structures_parse_back(seed in any::<u64>(), n in 1u32..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_toy(&mut rng, n).to_structure();
        let text = write_structure(&a);
        prop_assert_eq!(parse_structure(&text, None).unwrap(), a.clone());
        prop_assert_eq!(parse_structure(&text, Some(&toy_vocab())).unwrap(), a);
    }

    #[test]
    fn truth_survives_relabelling(seed in any::<u64>(), n in 1u32..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_toy(&mut rng, n).to_structure();
        let s = random_sentence(&mut rng, 4);
        let b = a.apply_isomorphism(&random_permutation(&mut rng, n)).unwrap();
        prop_assert_eq!(a.satisfies(&s).unwrap(), b.satisfies(&s).unwrap());
    }
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn machine_files_round_trip() {
    let pair = NTMPair::new(
        parse_tmspec(&fixture("contains_one.tmspec")).unwrap(),
        parse_tmspec(&fixture("no_ones.tmspec")).unwrap(),
    )
    .unwrap();
    let machines = [
        example_machine(),
        parse_machine(&fixture("example.ffot")).unwrap(),
        parse_machine(&fixture("example_mutated.ffot")).unwrap(),
        tm_to_ffot_finite(&parse_tmspec(&fixture("parity.tmspec")).unwrap()).unwrap(),
        ntm_pair_to_ffot(&pair).unwrap(),
    ];
    for m in machines {
        assert_eq!(parse_machine(&write_machine(&m)).unwrap(), m);
    }
}

#[test]
fn tm_specs_round_trip() {
    for f in ["parity.tmspec", "contains_one.tmspec", "no_ones.tmspec"] {
        let spec = parse_tmspec(&fixture(f)).unwrap();
        assert_eq!(parse_tmspec(&write_tmspec(&spec)).unwrap(), spec, "{f}");
    }
}

#[test]
fn shipped_example_matches_built_in() {
    let parsed = parse_machine(&fixture("example.ffot")).unwrap();
    assert_eq!(parsed.theory(), example_machine().theory());
    assert_eq!(parsed.outputs(), example_machine().outputs());
}
