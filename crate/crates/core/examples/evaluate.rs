//! Parses a structure and checks a few sentences in it.

use ffot::logic::parse_sentences;
use ffot::structures::parse_structure;

const STRUCTURE: &str = "\
domain 3
constant c = 0
function f : 0->1 1->2 2->0
relation R/1 = {0}
equality = interpreted
";

fn main() {
    let a = parse_structure(STRUCTURE, None).expect("well-formed structure");
    let ss = parse_sentences(
        "forall x. exists y. (f(y) = x)\nR(c) -> R(f(c))\nexists x. (f(f(f(x))) = x)",
        a.vocabulary(),
    )
    .expect("well-formed sentences");
    print!("{}", a.check_model(&ss).expect("closed sentences"));
}
