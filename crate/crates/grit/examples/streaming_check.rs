//! Check a proof far larger than what the checker keeps in memory.
//!
//! Writes a depth-16 complete-tree proof (131k lemmas) to a temp file,
//! then verifies it through the streaming reader. Because the proof
//! deletes clauses as soon as they stop being useful, the live set stays
//! tiny next to the file.

use std::io::{BufWriter, Write};
use std::time::Instant;

use grit::checker::refute_with_stats;
use grit::proof::{write_grit_action, GritReader};
use grit::testkit::{complete_tree_clause, visit_complete_tree};
use grit::{Clause, Formula};

fn main() {
    let n = 16;
    let mut file = tempfile::NamedTempFile::new().unwrap();
    {
        let mut w = BufWriter::new(&mut file);
        visit_complete_tree(n, |action| write_grit_action(&mut w, action)).unwrap();
        w.flush().unwrap();
    }
    let proof_bytes = file.as_file().metadata().unwrap().len();

    let clauses: Vec<Clause> = (0..1u64 << n).map(|p| complete_tree_clause(n, p)).collect();
    let formula = Formula::new(clauses);

    let start = Instant::now();
    let mut reader = GritReader::new(file.reopen().unwrap());
    let (verdict, stats) = refute_with_stats(&formula, &mut reader);
    let elapsed = start.elapsed();

    println!("{verdict} in {elapsed:.2?}");
    println!("proof file:    {proof_bytes} bytes, {} lines", stats.actions);
    println!("reader buffer: {} bytes at peak", reader.peak_buffered());
    println!("live clauses:  {} at peak", stats.live.peak);
    assert!(verdict.is_verified());
    assert!(stats.live.peak < 64);
}
