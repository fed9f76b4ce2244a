//! Compiles the parity machine and decides short words by model search,
//! next to the simulator.

use ffot::finder::SearchConfig;
use ffot::machine::{decide_word, measure_resources};
use ffot::tm::{parse_tmspec, simulate_tm, tm_to_ffot_finite};

fn main() {
    let spec = parse_tmspec(include_str!("../fixtures/parity.tmspec")).expect("fixture parses");
    let m = tm_to_ffot_finite(&spec).expect("valid machine");
    let enc = m.word_encoding().expect("compiled machines carry an encoding").clone();
    let cfg = SearchConfig::sizes(1, 7).with_jobs(4);
    for w in ["", "1", "10", "11"] {
        let sim = simulate_tm(&spec, w, 100).unwrap();
        let d = decide_word(&m, &enc, w, "accept", "reject", &cfg).unwrap();
        let size = measure_resources(&m, &enc, w, 7, &cfg).unwrap().size;
        println!("{w:>3}: model says {:?}, simulator {sim:?}, smallest model {size:?}", d.verdict);
    }
}
