//! Generate a complete-tree benchmark pair (formula + proof), print the
//! small instance in full, and verify a bigger one.

use grit::checker::refute_actions;
use grit::dimacs::serialize_dimacs_string;
use grit::proof::serialize_grit_string;
use grit::testkit::gen_complete_tree;

fn main() {
    let (formula, proof) = gen_complete_tree(3).unwrap();
    println!("depth 3 formula:\n{}", serialize_dimacs_string(&formula));
    println!("depth 3 proof:\n{}", serialize_grit_string(&proof));
    println!("checker says: {}\n", refute_actions(&formula, &proof));

    for n in [6, 10, 14] {
        let (formula, proof) = gen_complete_tree(n).unwrap();
        let verdict = refute_actions(&formula, &proof);
        println!(
            "depth {n:2}: {:5} clauses, {:6} proof lines, {verdict}",
            formula.len(),
            proof.len()
        );
        assert!(verdict.is_verified());
    }
}
