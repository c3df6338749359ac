//! DRUP → GRIT conversion and proof trimming.
//!
//! A DRUP trace records *what* a solver learnt but not *why*; a GRIT
//! proof must name antecedents. [`convert`] replays the trace through the
//! propagation engine: every added clause is re-derived by full unit
//! propagation over the current database, and the clauses the conflict
//! used become the emitted antecedent list. Deletions are matched by
//! clause value (most recently added first, so duplicate clauses behave
//! like a stack) and re-emitted by id.
//!
//! [`backward_trim`] walks a finished proof backwards from its empty
//! clause, drops every line the refutation never references, and
//! re-emits deletions so that each id dies immediately after its last
//! use. Line order is otherwise preserved.

use std::collections::HashMap;
use std::fmt;
use std::io;

use thiserror::Error;

use crate::checker::{propagate_outcome, refute_actions, refute_with_stats, PropagateOutcome, Verdict, WorkingSet};
use crate::model::{Clause, ClauseId, Formula};
use crate::proof::{DrupAction, ProofAction};
use crate::rup::Engine;

#[derive(Debug, Error)]
#[error("drup line {position}: {kind}")]
pub struct ConvertError {
    /// 1-based position in the DRUP stream (a line number for file input).
    pub position: u64,
    pub kind: ConvertErrorKind,
}

#[derive(Debug, Error)]
pub enum ConvertErrorKind {
    #[error("clause '{0}' is not derivable by unit propagation")]
    RupFailed(Clause),
    #[error("deleted clause '{0}' is not live")]
    DeleteMissing(Clause),
    #[error("trace ended without deriving the empty clause")]
    NoEmptyClause,
    #[error("{0}")]
    Parse(String),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
}

/// What a conversion did. Deletion counts are in clause ids, not lines.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct ConvertSummary {
    /// Clause additions replayed through the engine (tautologies excluded).
    pub lemmas_checked: u64,
    pub originals_emitted: u64,
    pub lemmas_emitted: u64,
    pub deletions_emitted: u64,
}

/// One-pass streaming conversion: originals first, then each DRUP action
/// as it arrives. Stops at the first derived empty clause; fails if the
/// trace ends without one.
pub fn convert_streaming<E, F>(
    formula: &Formula,
    drup: impl IntoIterator<Item = Result<DrupAction, E>>,
    mut sink: F,
) -> Result<ConvertSummary, ConvertError>
where
    E: fmt::Display,
    F: FnMut(&ProofAction) -> io::Result<()>,
{
    let mut engine = Engine::new();
    // Live GRIT ids per clause value; deletions pop the most recent.
    let mut by_value: HashMap<Clause, Vec<ClauseId>> = HashMap::new();
    // Tautologous additions get an id but no GRIT line and no database
    // entry: they can never participate in unit propagation, and their
    // deletion must likewise stay silent.
    let mut inert: Vec<ClauseId> = Vec::new();
    let mut summary = ConvertSummary::default();
    let mut position = 0u64;

    let fail = |position: u64, kind: ConvertErrorKind| ConvertError { position, kind };

    for (index, clause) in formula.clauses().iter().enumerate() {
        let id = ClauseId::new(index as u64 + 1).expect("positions start at 1");
        let action = ProofAction::Original { id, clause: clause.clone() };
        sink(&action).map_err(|e| fail(position, e.into()))?;
        summary.originals_emitted += 1;
        by_value.entry(clause.clone()).or_default().push(id);
        if !clause.is_tautology() {
            engine.insert(id, clause);
        } else {
            inert.push(id);
        }
    }

    let mut next_id = formula.len() as u64 + 1;
    for item in drup {
        position += 1;
        let action = match item {
            Ok(a) => a,
            Err(e) => return Err(fail(position, ConvertErrorKind::Parse(e.to_string()))),
        };
        match action {
            DrupAction::Add(clause) => {
                let id = ClauseId::new(next_id).expect("ids grow from 1");
                next_id += 1;
                if clause.is_tautology() {
                    by_value.entry(clause).or_default().push(id);
                    inert.push(id);
                    continue;
                }
                summary.lemmas_checked += 1;
                let Some(antecedents) = engine.check_rup(&clause) else {
                    return Err(fail(position, ConvertErrorKind::RupFailed(clause)));
                };
                let done = clause.is_empty();
                let action = ProofAction::Rup { id, clause: clause.clone(), antecedents };
                sink(&action).map_err(|e| fail(position, e.into()))?;
                summary.lemmas_emitted += 1;
                if done {
                    return Ok(summary);
                }
                engine.insert(id, &clause);
                by_value.entry(clause).or_default().push(id);
            }
            DrupAction::Delete(clause) => {
                let id = match by_value.get_mut(&clause).and_then(Vec::pop) {
                    Some(id) => id,
                    None => return Err(fail(position, ConvertErrorKind::DeleteMissing(clause))),
                };
                if let Some(at) = inert.iter().position(|&i| i == id) {
                    inert.swap_remove(at);
                    continue;
                }
                engine.remove(id);
                sink(&ProofAction::Delete(vec![id])).map_err(|e| fail(position, e.into()))?;
                summary.deletions_emitted += 1;
            }
        }
    }
    Err(fail(position + 1, ConvertErrorKind::NoEmptyClause))
}

#[derive(Debug)]
pub struct ConvertOutput {
    pub actions: Vec<ProofAction>,
    pub summary: ConvertSummary,
}

/// Convert a DRUP trace to a GRIT proof.
///
/// Untrimmed output keeps every original up front and mirrors the
/// trace's own deletions. With `trim`, a backward pass keeps only the
/// lines the refutation references, introduces each original just before
/// its first use, and deletes every id right after its last use.
pub fn convert<E: fmt::Display>(
    formula: &Formula,
    drup: impl IntoIterator<Item = Result<DrupAction, E>>,
    trim: bool,
) -> Result<ConvertOutput, ConvertError> {
    let mut actions = Vec::new();
    let mut summary = convert_streaming(formula, drup, |a| {
        actions.push(a.clone());
        Ok(())
    })?;
    if trim {
        actions = trim_actions(formula, &actions, true)
            .expect("freshly converted proofs verify");
        let (originals, lemmas, deletions) = tally(&actions);
        summary.originals_emitted = originals;
        summary.lemmas_emitted = lemmas;
        summary.deletions_emitted = deletions;
    }
    Ok(ConvertOutput { actions, summary })
}

/// Convert an in-memory DRUP action list.
pub fn convert_actions(
    formula: &Formula,
    drup: &[DrupAction],
    trim: bool,
) -> Result<ConvertOutput, ConvertError> {
    convert(
        formula,
        drup.iter().cloned().map(Ok::<_, std::convert::Infallible>),
        trim,
    )
}

fn tally(actions: &[ProofAction]) -> (u64, u64, u64) {
    let (mut originals, mut lemmas, mut deletions) = (0, 0, 0);
    for a in actions {
        match a {
            ProofAction::Original { .. } => originals += 1,
            ProofAction::Rup { .. } => lemmas += 1,
            ProofAction::Delete(ids) => deletions += ids.len() as u64,
        }
    }
    (originals, lemmas, deletions)
}

#[derive(Debug, Error)]
pub enum TrimError {
    #[error("cannot trim a proof that does not verify: {reason} at line {position}")]
    InputDoesNotVerify { position: u64, reason: String },
}

/// Drop every line a proof's refutation never references and re-emit
/// deletions so each id dies right after its last use. Keeps the
/// surviving lines in their original order — a proof that is already
/// minimal and deletion-tight comes back unchanged.
pub fn backward_trim(
    formula: &Formula,
    actions: &[ProofAction],
) -> Result<Vec<ProofAction>, TrimError> {
    trim_actions(formula, actions, false)
}

/// `originals_at_first_use` additionally moves each surviving original
/// from wherever it was introduced to just before the first derivation
/// that uses it (the layout `convert` emits when trimming).
pub(crate) fn trim_actions(
    formula: &Formula,
    actions: &[ProofAction],
    originals_at_first_use: bool,
) -> Result<Vec<ProofAction>, TrimError> {
    // The real checker decides validity; everything after this pass may
    // assume the proof replays cleanly up to `final_index`.
    let (verdict, stats) = refute_with_stats(
        formula,
        actions.iter().cloned().map(Ok::<_, std::convert::Infallible>),
    );
    if let Verdict::Rejected { reason, position } = verdict {
        return Err(TrimError::InputDoesNotVerify {
            position,
            reason: reason.to_string(),
        });
    }
    let final_index = (stats.actions - 1) as usize;

    // Replay the structure: which action introduced the clause each
    // antecedent refers to? Ids may be reused after deletion, so lines
    // are tracked by index ("slot"), not by id. Only the antecedents a
    // line's propagation actually consumed count as uses.
    let mut work = WorkingSet::new();
    let mut binding: HashMap<ClauseId, usize> = HashMap::new();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); final_index + 1];
    for (slot, action) in actions[..=final_index].iter().enumerate() {
        match action {
            ProofAction::Delete(ids) => {
                for id in ids {
                    work.remove(*id);
                    binding.remove(id);
                }
            }
            ProofAction::Original { id, clause } => {
                work.insert(*id, clause.clone()).expect("verified proof");
                binding.insert(*id, slot);
            }
            ProofAction::Rup { id, clause, antecedents } => {
                let consumed = match propagate_outcome(&work, clause, antecedents) {
                    PropagateOutcome::Conflict(consumed) => consumed,
                    _ => unreachable!("verified proof propagates"),
                };
                children[slot] = antecedents[..consumed]
                    .iter()
                    .map(|a| binding[a])
                    .collect();
                if slot < final_index {
                    work.insert(*id, clause.clone()).expect("verified proof");
                    binding.insert(*id, slot);
                }
            }
        }
    }

    // Mark the refutation's transitive dependencies, then find each
    // surviving slot's first and last referencing line.
    let mut marked = vec![false; final_index + 1];
    marked[final_index] = true;
    let mut stack = children[final_index].clone();
    while let Some(slot) = stack.pop() {
        if !marked[slot] {
            marked[slot] = true;
            stack.extend(children[slot].iter().copied());
        }
    }
    let mut last_use: Vec<Option<usize>> = vec![None; final_index + 1];
    for slot in 0..=final_index {
        if marked[slot] {
            for &child in &children[slot] {
                last_use[child] = Some(slot);
            }
        }
    }

    let mut out = Vec::new();
    let mut original_emitted = vec![false; final_index + 1];
    for slot in 0..=final_index {
        if !marked[slot] {
            continue;
        }
        match &actions[slot] {
            ProofAction::Delete(_) => unreachable!("deletes are never marked"),
            ProofAction::Original { .. } => {
                if !originals_at_first_use {
                    out.push(actions[slot].clone());
                }
            }
            ProofAction::Rup { .. } => {
                if originals_at_first_use {
                    for &child in &children[slot] {
                        if matches!(actions[child], ProofAction::Original { .. })
                            && !original_emitted[child]
                        {
                            original_emitted[child] = true;
                            out.push(actions[child].clone());
                        }
                    }
                }
                out.push(actions[slot].clone());
                if slot < final_index {
                    let mut dead: Vec<ClauseId> = (0..=final_index)
                        .filter(|&s| last_use[s] == Some(slot))
                        .map(|s| actions[s].introduces().expect("used slots introduce"))
                        .collect();
                    dead.sort_unstable();
                    if !dead.is_empty() {
                        out.push(ProofAction::Delete(dead));
                    }
                }
            }
        }
    }
    debug_assert!(refute_actions(formula, &out).is_verified());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::{parse_drup_str, serialize_grit_string};
    use crate::testkit::{
        strip_deletions, worked_example_formula, worked_example_proof, WORKED_EXAMPLE_DRUP,
    };

    fn id(n: u64) -> ClauseId {
        ClauseId::new(n).unwrap()
    }

    fn worked_drup() -> Vec<DrupAction> {
        parse_drup_str(WORKED_EXAMPLE_DRUP).unwrap()
    }

    #[test]
    fn converts_the_worked_trace() {
        let f = worked_example_formula();
        let out = convert_actions(&f, &worked_drup(), false).unwrap();
        assert!(refute_actions(&f, &out.actions).is_verified());
        // Deterministic engine ⇒ reproducible antecedents. Deletions are
        // one per `d` line; the original proof's batches come from trim.
        assert_eq!(
            serialize_grit_string(&out.actions),
            "1 1 2 0 0\n2 -1 2 0 0\n3 1 -2 0 0\n4 -1 3 0 0\n5 -2 -3 0 0\n\
             6 1 0 1 3 0\n0 1 0\n0 3 0\n7 2 0 6 2 0\n0 2 0\n\
             8 3 0 6 4 0\n0 4 0\n0 6 0\n9 0 7 8 5 0\n"
        );
        assert_eq!(
            out.summary,
            ConvertSummary {
                lemmas_checked: 4,
                originals_emitted: 5,
                lemmas_emitted: 4,
                deletions_emitted: 5,
            }
        );
    }

    #[test]
    fn trimmed_conversion_introduces_originals_at_first_use() {
        let f = worked_example_formula();
        let out = convert_actions(&f, &worked_drup(), true).unwrap();
        assert!(refute_actions(&f, &out.actions).is_verified());
        assert_eq!(
            serialize_grit_string(&out.actions),
            "1 1 2 0 0\n3 1 -2 0 0\n6 1 0 1 3 0\n0 1 3 0\n\
             2 -1 2 0 0\n7 2 0 6 2 0\n0 2 0\n\
             4 -1 3 0 0\n8 3 0 6 4 0\n0 4 6 0\n\
             5 -2 -3 0 0\n9 0 7 8 5 0\n"
        );
        assert_eq!(out.summary.lemmas_checked, 4);
        assert_eq!(out.summary.deletions_emitted, 5);
    }

    #[test]
    fn converts_a_two_unit_contradiction() {
        let f = Formula::new(vec![Clause::from_codes([1]), Clause::from_codes([-1])]);
        let drup = vec![DrupAction::Add(Clause::empty())];
        let out = convert_actions(&f, &drup, false).unwrap();
        assert_eq!(
            serialize_grit_string(&out.actions),
            "1 1 0 0\n2 -1 0 0\n3 0 1 2 0\n"
        );
        assert!(refute_actions(&f, &out.actions).is_verified());
    }

    #[test]
    fn underivable_addition_is_rup_failed() {
        let f = Formula::new(vec![Clause::from_codes([1])]);
        let err = convert_actions(&f, &[DrupAction::Add(Clause::empty())], false).unwrap_err();
        assert_eq!(err.position, 1);
        assert!(matches!(err.kind, ConvertErrorKind::RupFailed(c) if c.is_empty()));

        // {2} is derivable, so the trace gets past line 1 and fails on
        // the underivable {3}.
        let drup = vec![
            DrupAction::Add(Clause::from_codes([2])),
            DrupAction::Add(Clause::from_codes([3])),
        ];
        let f = Formula::new(vec![Clause::from_codes([1, 2]), Clause::from_codes([-1, 2])]);
        let err = convert_actions(&f, &drup, false).unwrap_err();
        assert_eq!(err.position, 2);
        assert!(matches!(err.kind, ConvertErrorKind::RupFailed(c) if c == Clause::from_codes([3])));
    }

    #[test]
    fn deleting_a_clause_that_is_not_live_fails() {
        let f = Formula::new(vec![Clause::from_codes([1, 2])]);
        let drup = vec![DrupAction::Delete(Clause::from_codes([3, 4]))];
        let err = convert_actions(&f, &drup, false).unwrap_err();
        assert_eq!(err.position, 1);
        assert!(matches!(err.kind, ConvertErrorKind::DeleteMissing(_)));

        let drup = vec![
            DrupAction::Delete(Clause::from_codes([1, 2])),
            DrupAction::Delete(Clause::from_codes([1, 2])),
        ];
        let err = convert_actions(&f, &drup, false).unwrap_err();
        assert_eq!(err.position, 2);
    }

    #[test]
    fn trace_without_empty_clause_is_an_error() {
        let f = worked_example_formula();
        let err = convert_actions(&f, &[], false).unwrap_err();
        assert!(matches!(err.kind, ConvertErrorKind::NoEmptyClause));
        assert_eq!(err.position, 1);
    }

    #[test]
    fn duplicate_clauses_delete_most_recent_first() {
        let f = Formula::new(vec![Clause::from_codes([1, 2])]);
        let mut emitted = Vec::new();
        let drup = vec![
            DrupAction::Add(Clause::from_codes([1, 2])),
            DrupAction::Delete(Clause::from_codes([1, 2])),
            DrupAction::Delete(Clause::from_codes([1, 2])),
        ];
        let err = convert_streaming(
            &f,
            drup.into_iter().map(Ok::<_, std::convert::Infallible>),
            |a| {
                emitted.push(a.clone());
                Ok(())
            },
        )
        .unwrap_err();
        assert!(matches!(err.kind, ConvertErrorKind::NoEmptyClause));
        // The duplicate add is derivable (the live copy conflicts at
        // once), and deletions pop ids newest-first.
        assert_eq!(
            emitted,
            vec![
                ProofAction::Original { id: id(1), clause: Clause::from_codes([1, 2]) },
                ProofAction::Rup {
                    id: id(2),
                    clause: Clause::from_codes([1, 2]),
                    antecedents: vec![id(1)],
                },
                ProofAction::Delete(vec![id(2)]),
                ProofAction::Delete(vec![id(1)]),
            ]
        );
    }

    #[test]
    fn tautologies_pass_through_silently() {
        let f = Formula::new(vec![Clause::from_codes([1]), Clause::from_codes([-1])]);
        let drup = vec![
            DrupAction::Add(Clause::from_codes([2, -2])),
            DrupAction::Delete(Clause::from_codes([-2, 2])),
            DrupAction::Add(Clause::empty()),
        ];
        let out = convert_actions(&f, &drup, false).unwrap();
        // The tautology consumed id 3 but produced no line.
        assert_eq!(
            serialize_grit_string(&out.actions),
            "1 1 0 0\n2 -1 0 0\n4 0 1 2 0\n"
        );
        assert!(refute_actions(&f, &out.actions).is_verified());
    }

    #[test]
    fn trim_keeps_an_already_tight_proof_unchanged() {
        let f = worked_example_formula();
        let proof = worked_example_proof();
        assert_eq!(backward_trim(&f, &proof).unwrap(), proof);
    }

    #[test]
    fn trim_drops_unused_lemmas() {
        let f = worked_example_formula();
        let mut proof = worked_example_proof();
        // A derivable but never-used lemma (a second copy of {2}).
        proof.insert(
            8,
            ProofAction::Rup {
                id: id(10),
                clause: Clause::from_codes([2]),
                antecedents: vec![id(6), id(2)],
            },
        );
        assert!(refute_actions(&f, &proof).is_verified());
        assert_eq!(backward_trim(&f, &proof).unwrap(), worked_example_proof());
    }

    #[test]
    fn trim_rederives_deletions_from_a_deletion_free_proof() {
        let f = worked_example_formula();
        let bare = strip_deletions(&worked_example_proof());
        assert!(refute_actions(&f, &bare).is_verified());
        assert_eq!(backward_trim(&f, &bare).unwrap(), worked_example_proof());
    }

    #[test]
    fn trim_drops_everything_after_the_empty_clause() {
        let f = worked_example_formula();
        let mut proof = worked_example_proof();
        proof.push(ProofAction::Original { id: id(99), clause: Clause::from_codes([1, 2]) });
        assert_eq!(backward_trim(&f, &proof).unwrap(), worked_example_proof());
    }

    #[test]
    fn trim_rejects_invalid_input() {
        let f = worked_example_formula();
        let err = backward_trim(&f, &[]).unwrap_err();
        assert!(matches!(err, TrimError::InputDoesNotVerify { .. }));

        let mut proof = worked_example_proof();
        proof.truncate(11);
        assert!(backward_trim(&f, &proof).is_err());
    }

    #[test]
    fn trim_disambiguates_reused_ids_by_slot() {
        let f = Formula::new(vec![Clause::from_codes([1]), Clause::from_codes([-1])]);
        let proof = vec![
            ProofAction::Original { id: id(1), clause: Clause::from_codes([1]) },
            ProofAction::Delete(vec![id(1)]),
            ProofAction::Original { id: id(1), clause: Clause::from_codes([-1]) },
            ProofAction::Original { id: id(2), clause: Clause::from_codes([1]) },
            ProofAction::Rup {
                id: id(3),
                clause: Clause::empty(),
                antecedents: vec![id(2), id(1)],
            },
        ];
        assert!(refute_actions(&f, &proof).is_verified());
        let trimmed = backward_trim(&f, &proof).unwrap();
        // The first binding of id 1 is dead weight; the second survives.
        assert_eq!(trimmed.len(), 3);
        assert_eq!(
            trimmed[0],
            ProofAction::Original { id: id(1), clause: Clause::from_codes([-1]) }
        );
        assert!(refute_actions(&f, &trimmed).is_verified());
    }

    #[test]
    fn trim_ignores_trailing_antecedents_after_the_conflict() {
        let f = Formula::new(vec![Clause::from_codes([1]), Clause::from_codes([-1])]);
        let proof = vec![
            ProofAction::Original { id: id(1), clause: Clause::from_codes([1]) },
            ProofAction::Original { id: id(2), clause: Clause::from_codes([-1]) },
            // Conflict is complete after [1, 2]; id 1's repeat is noise
            // the checker never reads.
            ProofAction::Rup {
                id: id(3),
                clause: Clause::empty(),
                antecedents: vec![id(1), id(2), id(1)],
            },
        ];
        assert!(refute_actions(&f, &proof).is_verified());
        let trimmed = backward_trim(&f, &proof).unwrap();
        assert_eq!(trimmed, proof);
    }
}
