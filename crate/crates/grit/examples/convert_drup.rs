//! Convert a DRUP solver trace to GRIT, once verbatim and once trimmed,
//! and check both results.

use grit::checker::refute_actions;
use grit::convert::convert_actions;
use grit::proof::{parse_drup_str, serialize_grit_string};
use grit::testkit::{worked_example_formula, WORKED_EXAMPLE_DRUP};

fn main() {
    let formula = worked_example_formula();
    let trace = parse_drup_str(WORKED_EXAMPLE_DRUP).unwrap();
    println!("input DRUP trace:\n{WORKED_EXAMPLE_DRUP}");

    for trim in [false, true] {
        let out = convert_actions(&formula, &trace, trim).expect("trace converts");
        let label = if trim { "trimmed" } else { "verbatim" };
        println!(
            "{label} GRIT ({} lemmas checked, {} lines emitted):",
            out.summary.lemmas_checked,
            out.actions.len()
        );
        print!("{}", serialize_grit_string(&out.actions));
        println!("checker says: {}\n", refute_actions(&formula, &out.actions));
    }
}
