//! Randomized structural properties of the data model and the two text
//! formats: normalization, serialize/parse inverses, whitespace
//! insensitivity, and checker totality on arbitrary inputs.

use proptest::collection::vec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use grit::checker::refute_actions;
use grit::dimacs::{parse_dimacs_str, serialize_dimacs_string};
use grit::proof::{
    parse_drup_str, parse_grit_str, serialize_drup_string, serialize_grit_string, DrupAction,
};
use grit::{Clause, ClauseId, Formula, Lit, ProofAction};

fn arb_lit() -> impl Strategy<Value = Lit> {
    (1..=40u64, any::<bool>())
        .prop_map(|(v, pos)| if pos { Lit::positive(v) } else { Lit::negative(v) })
}

fn arb_clause() -> impl Strategy<Value = Clause> {
    vec(arb_lit(), 0..6).prop_map(Clause::new)
}

fn arb_id() -> impl Strategy<Value = ClauseId> {
    (1..=999u64).prop_map(|n| ClauseId::new(n).unwrap())
}

fn arb_action() -> impl Strategy<Value = ProofAction> {
    prop_oneof![
        (arb_id(), arb_clause()).prop_map(|(id, clause)| ProofAction::Original { id, clause }),
        // An antecedent list can never be empty in the text form: that
        // spelling is what marks a line as an original.
        (arb_id(), arb_clause(), vec(arb_id(), 1..5))
            .prop_map(|(id, clause, antecedents)| ProofAction::Rup { id, clause, antecedents }),
        vec(arb_id(), 0..5).prop_map(ProofAction::Delete),
    ]
}

fn arb_drup_action() -> impl Strategy<Value = DrupAction> {
    prop_oneof![
        arb_clause().prop_map(DrupAction::Add),
        arb_clause().prop_map(DrupAction::Delete),
    ]
}

/// Rebuild a text with every inter-token gap replaced by a seeded random
/// run of spaces and tabs.
fn blur(text: &str, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for line in text.lines() {
        let mut first = true;
        for token in line.split_whitespace() {
            if !first {
                for _ in 0..rng.random_range(1..=3) {
                    out.push(if rng.random_bool(0.5) { ' ' } else { '\t' });
                }
            }
            first = false;
            out.push_str(token);
        }
        out.push('\n');
    }
    out
}

proptest! {
    #[test]
    fn negation_is_a_variable_preserving_involution(l in arb_lit()) {
        prop_assert_eq!(l.negate().negate(), l);
        prop_assert_ne!(l.negate(), l);
        prop_assert_eq!(l.negate().var(), l.var());
        prop_assert_eq!(l.negate().is_positive(), !l.is_positive());
    }

    #[test]
    fn clause_construction_normalizes_and_is_idempotent(lits in vec(arb_lit(), 0..8)) {
        let c = Clause::new(lits.iter().copied());
        prop_assert_eq!(&Clause::new(c.iter()), &c);
        prop_assert!(c.lits().windows(2).all(|w| w[0] < w[1]));
        for &l in &lits {
            prop_assert!(c.contains(l));
        }
        prop_assert!(c.len() <= lits.len());
    }

    #[test]
    fn grit_text_roundtrips(actions in vec(arb_action(), 0..40)) {
        let text = serialize_grit_string(&actions);
        prop_assert_eq!(parse_grit_str(&text).unwrap(), actions);
    }

    #[test]
    fn drup_text_roundtrips(trace in vec(arb_drup_action(), 0..40)) {
        let text = serialize_drup_string(&trace);
        prop_assert_eq!(parse_drup_str(&text).unwrap(), trace);
    }

    #[test]
    fn whitespace_variation_never_changes_meaning(
        actions in vec(arb_action(), 0..25),
        seed in any::<u64>(),
    ) {
        let text = serialize_grit_string(&actions);
        prop_assert_eq!(parse_grit_str(&blur(&text, seed)).unwrap(), actions);
    }

    #[test]
    fn dimacs_text_roundtrips(clauses in vec(arb_clause(), 0..20)) {
        let f = Formula::new(clauses);
        let text = serialize_dimacs_string(&f);
        let parsed = parse_dimacs_str(&text).unwrap();
        prop_assert_eq!(parsed.formula, f);
        prop_assert!(parsed.warnings.is_empty(), "{:?}", parsed.warnings);
    }

    #[test]
    fn checker_is_total_on_arbitrary_action_lists(
        clauses in vec(arb_clause(), 0..10),
        actions in vec(arb_action(), 0..30),
    ) {
        let f = Formula::new(clauses);
        // Any verdict is fine; reaching one without panicking is the point.
        let _ = refute_actions(&f, &actions);
    }
}
