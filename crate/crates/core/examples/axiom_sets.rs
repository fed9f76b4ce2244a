//! Prints the successor axioms, checks the standard finite structures, and
//! shows that the unbounded successor axioms have no small models.

use ffot::axioms::*;
use ffot::finder::{find_min_model_size, SearchConfig};

fn main() {
    for s in finite_peano_axioms() {
        println!("{s}");
    }
    for n in 1..=4 {
        let ok = build_psa_f_structure(n).check_model(&finite_peano_axioms()).unwrap().all_hold();
        println!("psa_f chain of {} elements is a model: {ok}", n + 1);
    }
    let cfg = SearchConfig::default();
    let psa = find_min_model_size(&psa_vocabulary(), &peano_successor_axioms(), 5, &cfg).unwrap();
    let psa_f = find_min_model_size(&psa_f_vocabulary(), &finite_peano_axioms(), 5, &cfg).unwrap();
    println!("smallest model of psa: {:?}, of psa_f: {:?}", psa.size, psa_f.size);

    let a = build_dof_f_structure(2);
    let report = a.check_model(&finite_dof_axioms()).unwrap();
    println!("dof_f grid for m = 2 has {} elements", a.size());
    for f in report.failures() {
        println!("  fails: {}  at {:?}", f.sentence, f.witness);
    }
}
