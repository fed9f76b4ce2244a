//! Checks that a machine's outputs exclude each other, and that a broken
//! copy is caught.

use ffot::finder::SearchConfig;
use ffot::machine::{parse_machine, validate_machine};

fn main() {
    let cfg = SearchConfig::sizes(1, 3);
    for (name, text) in [
        ("example", include_str!("../fixtures/example.ffot")),
        ("mutated", include_str!("../fixtures/example_mutated.ffot")),
    ] {
        let m = parse_machine(text).expect("fixture parses");
        let report = validate_machine(&m, &[], &cfg).unwrap();
        println!("{name}: passed {}", report.passed());
        for (input, c) in report.conflicts() {
            println!("  {input}: {} and {} hold together", c.labels[0], c.labels[1]);
        }
    }
}
