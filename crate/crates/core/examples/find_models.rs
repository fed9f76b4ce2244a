//! Lists the models of the finite successor axioms at size 3, once with
//! symmetry breaking and once without.

use ffot::axioms::{finite_peano_axioms, psa_f_vocabulary};
use ffot::finder::{find_models, SearchConfig};
use ffot::structures::write_structure;

fn main() {
    let (v, ss) = (psa_f_vocabulary(), finite_peano_axioms());
    let all = find_models(&v, &ss, &SearchConfig::size(3).with_symmetry_breaking(false)).unwrap();
    println!("without symmetry breaking: {} models", all.models.len());
    let some = find_models(&v, &ss, &SearchConfig::size(3)).unwrap();
    println!("with symmetry breaking: {} models", some.models.len());
    for a in &some.models {
        println!("{}", write_structure(a));
    }
}
