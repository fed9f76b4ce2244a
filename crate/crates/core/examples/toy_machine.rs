//! Runs the toy machine `R(x) <-> R(f(x))` on both of its inputs.

use ffot::finder::SearchConfig;
use ffot::machine::{compute, example_machine, Input};

fn main() {
    let m = example_machine();
    let cfg = SearchConfig::sizes(1, 3);
    for input in ["I_pos", "I_neg"] {
        let r = compute(&m, &Input::Label(input.into()), &cfg).expect("valid machine");
        println!("{input} -> {:?}  (sizes {:?}, {} queries)", r.output_label(), r.sizes_checked, r.queries);
    }
}
