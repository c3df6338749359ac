//! Verify a GRIT proof against a DIMACS formula.
//!
//! With two arguments it checks `formula.cnf proof.grit` from disk;
//! with none it checks the built-in worked example.

use std::env;
use std::fs::File;
use std::process::ExitCode;

use grit::checker::refute_with_stats;
use grit::dimacs::{parse_dimacs, parse_dimacs_str};
use grit::proof::GritReader;
use grit::testkit::{WORKED_EXAMPLE_CNF, WORKED_EXAMPLE_GRIT};

fn main() -> ExitCode {
    let args: Vec<String> = env::args().skip(1).collect();
    let (verdict, stats) = match args.as_slice() {
        [cnf, proof] => {
            let formula = parse_dimacs(File::open(cnf).expect("open formula"))
                .expect("parse formula")
                .formula;
            let reader = GritReader::new(File::open(proof).expect("open proof"));
            refute_with_stats(&formula, reader)
        }
        [] => {
            println!("no arguments; checking the built-in example\n");
            print!("formula:\n{WORKED_EXAMPLE_CNF}\nproof:\n{WORKED_EXAMPLE_GRIT}\n");
            let formula = parse_dimacs_str(WORKED_EXAMPLE_CNF).unwrap().formula;
            refute_with_stats(&formula, GritReader::new(WORKED_EXAMPLE_GRIT.as_bytes()))
        }
        _ => {
            eprintln!("usage: check_proof [formula.cnf proof.grit]");
            return ExitCode::from(2);
        }
    };
    println!("{verdict}");
    println!(
        "applied {} proof lines; {} clauses live at the end, {} at peak",
        stats.actions, stats.live.count, stats.live.peak
    );
    ExitCode::from(if verdict.is_verified() { 0 } else { 1 })
}
