//! Show what backward trimming buys: strip the deletions out of a proof,
//! watch the checker's peak memory grow, then let the trimmer put
//! deletions back in the tightest places.

use std::convert::Infallible;

use grit::backward_trim;
use grit::checker::refute_with_stats;
use grit::testkit::{gen_complete_tree, strip_deletions};
use grit::{Formula, ProofAction};

fn peak_live(formula: &Formula, actions: &[ProofAction]) -> usize {
    let (verdict, stats) = refute_with_stats(
        formula,
        actions.iter().cloned().map(Ok::<_, Infallible>),
    );
    assert!(verdict.is_verified(), "{verdict}");
    stats.live.peak
}

fn main() {
    let n = 10;
    let (formula, proof) = gen_complete_tree(n).unwrap();
    let bare = strip_deletions(&proof);
    let trimmed = backward_trim(&formula, &bare).unwrap();

    println!(
        "complete-tree family, depth {n}: {} original clauses, {} proof lines",
        formula.len(),
        proof.len()
    );
    println!(
        "peak live clauses with deletions stripped: {}",
        peak_live(&formula, &bare)
    );
    println!(
        "peak live clauses after backward trim:     {}",
        peak_live(&formula, &trimmed)
    );
    assert_eq!(trimmed, proof, "trim recovers the generator's tight layout");
    println!("trimmed proof matches the generator's own deletion placement");
}
