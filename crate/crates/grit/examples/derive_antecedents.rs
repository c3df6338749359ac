//! Ask the propagation engine which clauses make a lemma derivable.
//!
//! This is the core move of DRUP-to-GRIT conversion: load the formula,
//! assume a candidate clause false, run unit propagation, and keep the
//! ids of the clauses that actually fired.

use grit::rup::Engine;
use grit::testkit::worked_example_formula;
use grit::{Clause, ClauseId};

fn ids(ants: &[ClauseId]) -> Vec<u64> {
    ants.iter().map(|id| id.get()).collect()
}

fn main() {
    let formula = worked_example_formula();
    let mut engine = Engine::new();
    for (i, clause) in formula.clauses().iter().enumerate() {
        engine.insert(ClauseId::new(i as u64 + 1).unwrap(), clause);
    }

    for lits in [vec![1], vec![2], vec![3], vec![]] {
        let goal = Clause::from_codes(lits);
        match engine.check_rup(&goal) {
            Some(ants) => {
                println!("'{goal}' follows by unit propagation from clauses {:?}", ids(&ants));
            }
            None => println!("'{goal}' is not derivable by unit propagation alone"),
        }
    }

    // Learned lemmas join the clause database and carry later derivations.
    let unit_one = Clause::from_codes([1]);
    engine.check_rup(&unit_one).expect("derivable");
    engine.insert(ClauseId::new(6).unwrap(), &unit_one);
    let ants = engine.check_rup(&Clause::from_codes([2])).expect("derivable");
    println!("after learning '{unit_one}' as id 6, '2 0' needs only {:?}", ids(&ants));
}
