//! GRIT proof verification.
//!
//! The checker never searches: every derived clause names its antecedents,
//! so verifying a line is a single left-to-right pass over that list.
//! [`propagate`] maintains an accumulating clause `A`, seeded with the
//! literals of the claimed clause (assuming them all false). For each
//! antecedent `i` it forms `D = live(i) \ A`:
//!
//! * `D = ∅` — the antecedent is falsified outright; the derivation is
//!   complete and the claimed clause follows.
//! * `D = {l}` — the antecedent forces `l`; record that by adding `¬l`
//!   to `A` and continue.
//! * otherwise the antecedent neither conflicts nor propagates, and the
//!   line is rejected. Trailing unused antecedents after a conflict are
//!   accepted.
//!
//! [`refute`] folds proof actions over a [`WorkingSet`] of live clauses:
//! originals must occur in the formula, derived clauses must pass
//! [`propagate`], deletions drop ids, and a derived empty clause verifies
//! the refutation. Everything after that point is ignored, and a stream
//! that ends without deriving the empty clause is rejected. Memory stays
//! proportional to the live set, never to the proof length — ids may
//! therefore be reused after deletion (the live set cannot tell, and
//! remembering every id ever seen would break that bound).

use std::collections::HashMap;
use std::fmt;

use crate::model::{Clause, ClauseId, Formula, Lit};
use crate::proof::ProofAction;

/// The live clauses at some point of a proof replay.
#[derive(Default)]
pub struct WorkingSet {
    live: HashMap<ClauseId, Clause>,
    peak: usize,
}

/// Snapshot of [`WorkingSet`] occupancy.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct LiveStats {
    pub count: usize,
    pub peak: usize,
}

impl WorkingSet {
    pub fn new() -> WorkingSet {
        WorkingSet::default()
    }

    /// Insert a clause under a fresh id; `Err` when the id is already live.
    pub fn insert(&mut self, id: ClauseId, clause: Clause) -> Result<(), ClauseId> {
        if self.live.contains_key(&id) {
            return Err(id);
        }
        self.live.insert(id, clause);
        self.peak = self.peak.max(self.live.len());
        Ok(())
    }

    pub fn remove(&mut self, id: ClauseId) -> Option<Clause> {
        self.live.remove(&id)
    }

    pub fn get(&self, id: ClauseId) -> Option<&Clause> {
        self.live.get(&id)
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    /// Current and peak number of live clauses.
    pub fn live_stats(&self) -> LiveStats {
        LiveStats {
            count: self.live.len(),
            peak: self.peak,
        }
    }
}

/// Why a proof was rejected. Each reason pinpoints the first offending
/// object encountered in stream order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RejectionReason {
    /// A derivation named an id that is not live.
    UnknownAntecedent(ClauseId),
    /// Restricted propagation stalled: the named antecedent was neither
    /// falsified nor unit (or, when it is the line's own id, the
    /// antecedent list ran out before reaching a conflict).
    NotUnitNorEmpty(ClauseId),
    /// An `Original` line claimed a clause the formula does not contain.
    OriginalNotInFormula(Clause),
    /// An insertion reused an id that is currently live.
    DuplicateId(ClauseId),
    /// A deletion named an id that is not live.
    DeleteUnknownId(ClauseId),
    /// The proof ended without deriving the empty clause.
    StreamExhausted,
    /// The proof stream itself failed to parse.
    ParseFailure(String),
}

impl fmt::Display for RejectionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectionReason::UnknownAntecedent(id) => write!(f, "unknown antecedent {id}"),
            RejectionReason::NotUnitNorEmpty(id) => {
                write!(f, "propagation stalled at clause {id} (neither unit nor empty)")
            }
            RejectionReason::OriginalNotInFormula(c) => {
                write!(f, "original clause '{c}' does not occur in the formula")
            }
            RejectionReason::DuplicateId(id) => write!(f, "id {id} is already live"),
            RejectionReason::DeleteUnknownId(id) => write!(f, "delete of unknown id {id}"),
            RejectionReason::StreamExhausted => {
                write!(f, "proof ended without deriving the empty clause")
            }
            RejectionReason::ParseFailure(e) => write!(f, "unreadable proof: {e}"),
        }
    }
}

/// Outcome of checking a proof.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Verified,
    Rejected {
        reason: RejectionReason,
        /// 1-based position of the offending action in the proof stream.
        /// GRIT holds one action per line, so this is also a line number.
        position: u64,
    },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => write!(f, "VERIFIED"),
            Verdict::Rejected { reason, position } => {
                write!(f, "REJECTED {reason} at line {position}")
            }
        }
    }
}

pub(crate) enum PropagateOutcome {
    /// Some antecedent became falsified: the claimed clause follows. The
    /// payload is how many antecedents were consumed — trailing entries
    /// after the conflict are never read (and never validated).
    Conflict(usize),
    /// The named antecedent was neither falsified nor unit.
    Stalled(ClauseId),
    /// The antecedent list ran out without reaching a conflict.
    OutOfAntecedents,
    /// The named antecedent is not live.
    Unknown(ClauseId),
}

pub(crate) fn propagate_outcome(
    work: &WorkingSet,
    goal: &Clause,
    antecedents: &[ClauseId],
) -> PropagateOutcome {
    // `assumed_false` is the accumulating clause: the goal's literals plus
    // the negation of every literal forced so far.
    let mut assumed_false: std::collections::HashSet<Lit> = goal.iter().collect();
    for (consumed, &id) in antecedents.iter().enumerate() {
        let Some(clause) = work.get(id) else {
            return PropagateOutcome::Unknown(id);
        };
        let mut rest = clause.iter().filter(|l| !assumed_false.contains(l));
        match (rest.next(), rest.next()) {
            (None, _) => return PropagateOutcome::Conflict(consumed + 1),
            (Some(unit), None) => {
                assumed_false.insert(unit.negate());
            }
            (Some(_), Some(_)) => return PropagateOutcome::Stalled(id),
        }
    }
    PropagateOutcome::OutOfAntecedents
}

/// Replay a restricted unit-propagation derivation of `goal`.
///
/// `Ok(true)` when some antecedent becomes falsified (the derivation is
/// complete), `Ok(false)` when it stalls or the list runs out, `Err(id)`
/// when an antecedent is not live.
pub fn propagate(
    work: &WorkingSet,
    goal: &Clause,
    antecedents: &[ClauseId],
) -> Result<bool, ClauseId> {
    match propagate_outcome(work, goal, antecedents) {
        PropagateOutcome::Conflict(_) => Ok(true),
        PropagateOutcome::Stalled(_) | PropagateOutcome::OutOfAntecedents => Ok(false),
        PropagateOutcome::Unknown(id) => Err(id),
    }
}

/// Stateful replay of a proof against a fixed formula.
pub struct Checker<'f> {
    formula: &'f Formula,
    work: WorkingSet,
    position: u64,
}

impl<'f> Checker<'f> {
    pub fn new(formula: &'f Formula) -> Checker<'f> {
        Checker {
            formula,
            work: WorkingSet::new(),
            position: 0,
        }
    }

    pub fn live_stats(&self) -> LiveStats {
        self.work.live_stats()
    }

    /// Number of actions applied so far.
    pub fn position(&self) -> u64 {
        self.position
    }

    pub fn working_set(&self) -> &WorkingSet {
        &self.work
    }

    fn reject(&self, reason: RejectionReason) -> Option<Verdict> {
        Some(Verdict::Rejected {
            reason,
            position: self.position,
        })
    }

    /// Apply one proof action. `None` means "carry on"; `Some` is final.
    pub fn apply(&mut self, action: ProofAction) -> Option<Verdict> {
        self.position += 1;
        match action {
            ProofAction::Delete(ids) => {
                for id in ids {
                    if self.work.remove(id).is_none() {
                        return self.reject(RejectionReason::DeleteUnknownId(id));
                    }
                }
                None
            }
            ProofAction::Original { id, clause } => {
                if !self.formula.contains(&clause) {
                    return self.reject(RejectionReason::OriginalNotInFormula(clause));
                }
                match self.work.insert(id, clause) {
                    Ok(()) => None,
                    Err(id) => self.reject(RejectionReason::DuplicateId(id)),
                }
            }
            ProofAction::Rup { id, clause, antecedents } => {
                match propagate_outcome(&self.work, &clause, &antecedents) {
                    PropagateOutcome::Conflict(_) => {
                        if clause.is_empty() {
                            // The refutation is complete; nothing after
                            // this line matters.
                            return Some(Verdict::Verified);
                        }
                        match self.work.insert(id, clause) {
                            Ok(()) => None,
                            Err(id) => self.reject(RejectionReason::DuplicateId(id)),
                        }
                    }
                    PropagateOutcome::Stalled(at) => {
                        self.reject(RejectionReason::NotUnitNorEmpty(at))
                    }
                    PropagateOutcome::OutOfAntecedents => {
                        self.reject(RejectionReason::NotUnitNorEmpty(id))
                    }
                    PropagateOutcome::Unknown(at) => {
                        self.reject(RejectionReason::UnknownAntecedent(at))
                    }
                }
            }
        }
    }
}

/// Check a proof stream against a formula.
///
/// The stream is consumed lazily and abandoned at the first verdict, so a
/// proof whose empty clause arrives early is never read past that line.
/// Stream errors surface as [`RejectionReason::ParseFailure`].
pub fn refute<I, E>(formula: &Formula, proof: I) -> Verdict
where
    I: IntoIterator<Item = Result<ProofAction, E>>,
    E: fmt::Display,
{
    refute_with_stats(formula, proof).0
}

/// Counters from a [`refute`] run.
#[derive(Copy, Clone, Debug)]
pub struct RefuteStats {
    /// Actions applied, including the one that produced the verdict.
    pub actions: u64,
    pub live: LiveStats,
}

pub fn refute_with_stats<I, E>(formula: &Formula, proof: I) -> (Verdict, RefuteStats)
where
    I: IntoIterator<Item = Result<ProofAction, E>>,
    E: fmt::Display,
{
    let mut checker = Checker::new(formula);
    for item in proof {
        let action = match item {
            Ok(a) => a,
            Err(e) => {
                checker.position += 1;
                let verdict = Verdict::Rejected {
                    reason: RejectionReason::ParseFailure(e.to_string()),
                    position: checker.position,
                };
                return finish(verdict, &checker);
            }
        };
        if let Some(verdict) = checker.apply(action) {
            return finish(verdict, &checker);
        }
    }
    let verdict = Verdict::Rejected {
        reason: RejectionReason::StreamExhausted,
        position: checker.position,
    };
    finish(verdict, &checker)
}

fn finish(verdict: Verdict, checker: &Checker) -> (Verdict, RefuteStats) {
    (
        verdict,
        RefuteStats {
            actions: checker.position,
            live: checker.live_stats(),
        },
    )
}

/// Check an in-memory action list.
pub fn refute_actions(formula: &Formula, actions: &[ProofAction]) -> Verdict {
    refute(
        formula,
        actions.iter().cloned().map(Ok::<_, std::convert::Infallible>),
    )
}
