//! Full unit propagation with antecedent recording.
//!
//! [`Engine`] keeps a clause database under two watched literals per
//! clause and answers one question: is a clause derivable by reverse unit
//! propagation over the current database? On success it reports *which*
//! clauses the propagation used, in an order that replays left-to-right
//! through the checker's restricted propagation — that list is exactly
//! what a GRIT line needs.
//!
//! Watching invariant: for every clause of length ≥ 2 the watched
//! literals sit at positions 0 and 1 of its literal array, and a clause
//! is only revisited when one of its watched literals is falsified.
//! Length-1 clauses live in a separate unit list that is replayed (in
//! ascending id order, for reproducible output) at the start of every
//! query; empty clauses conflict immediately.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::model::{Clause, ClauseId, Lit};

/// 0 = unassigned, 1 = true, 2 = false (for the positive literal).
#[derive(Default)]
struct Assignment {
    value: Vec<u8>,
    trail: Vec<TrailEntry>,
    /// var − 1 → index into `trail`, valid while the var is assigned.
    position: Vec<usize>,
}

struct TrailEntry {
    lit: Lit,
    /// Clause that forced this literal; `None` for an assumption.
    reason: Option<ClauseId>,
}

impl Assignment {
    fn ensure_var(&mut self, var: u64) {
        let need = var as usize;
        if self.value.len() < need {
            self.value.resize(need, 0);
            self.position.resize(need, usize::MAX);
        }
    }

    /// Truth value of `lit` under the current assignment.
    fn lit_value(&self, lit: Lit) -> Option<bool> {
        match self.value[(lit.var() - 1) as usize] {
            0 => None,
            v => Some((v == 1) == lit.is_positive()),
        }
    }

    fn assign(&mut self, lit: Lit, reason: Option<ClauseId>) {
        let slot = (lit.var() - 1) as usize;
        debug_assert_eq!(self.value[slot], 0, "variable assigned twice");
        self.value[slot] = if lit.is_positive() { 1 } else { 2 };
        self.position[slot] = self.trail.len();
        self.trail.push(TrailEntry { lit, reason });
    }

    fn clear(&mut self) {
        for entry in self.trail.drain(..) {
            self.value[(entry.lit.var() - 1) as usize] = 0;
        }
    }
}

/// Watch buckets indexed by literal: the clauses that currently watch
/// each literal, in insertion order.
#[derive(Default)]
struct WatchIndex {
    buckets: Vec<Vec<ClauseId>>,
}

fn lit_slot(lit: Lit) -> usize {
    let var = (lit.var() - 1) as usize;
    var * 2 + usize::from(!lit.is_positive())
}

impl WatchIndex {
    fn ensure_var(&mut self, var: u64) {
        let need = var as usize * 2;
        if self.buckets.len() < need {
            self.buckets.resize_with(need, Vec::new);
        }
    }

    fn add(&mut self, lit: Lit, id: ClauseId) {
        self.buckets[lit_slot(lit)].push(id);
    }

    fn remove(&mut self, lit: Lit, id: ClauseId) {
        self.buckets[lit_slot(lit)].retain(|&c| c != id);
    }
}

/// A clause database that answers reverse-unit-propagation queries.
#[derive(Default)]
pub struct Engine {
    /// Literal arrays; positions 0 and 1 are the watched literals for
    /// clauses of length ≥ 2.
    slots: HashMap<ClauseId, Vec<Lit>>,
    watches: WatchIndex,
    units: BTreeMap<ClauseId, Lit>,
    empties: BTreeSet<ClauseId>,
    assignment: Assignment,
}

impl Engine {
    pub fn new() -> Engine {
        Engine::default()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn contains(&self, id: ClauseId) -> bool {
        self.slots.contains_key(&id)
    }

    /// Add a clause under a fresh id. Panics on id reuse: the converter
    /// allocates ids strictly increasing, so reuse is a bug.
    pub fn insert(&mut self, id: ClauseId, clause: &Clause) {
        let lits: Vec<Lit> = clause.lits().to_vec();
        self.ensure_var(clause.max_var());
        match lits.as_slice() {
            [] => {
                self.empties.insert(id);
            }
            [unit] => {
                self.units.insert(id, *unit);
            }
            [first, second, ..] => {
                self.watches.add(*first, id);
                self.watches.add(*second, id);
            }
        }
        let previous = self.slots.insert(id, lits);
        assert!(previous.is_none(), "clause id {id} inserted twice");
    }

    /// Drop a clause. Returns whether the id was present.
    pub fn remove(&mut self, id: ClauseId) -> bool {
        let Some(lits) = self.slots.remove(&id) else {
            return false;
        };
        match lits.as_slice() {
            [] => {
                self.empties.remove(&id);
            }
            [_] => {
                self.units.remove(&id);
            }
            [first, second, ..] => {
                self.watches.remove(*first, id);
                self.watches.remove(*second, id);
            }
        }
        true
    }

    fn ensure_var(&mut self, var: u64) {
        self.assignment.ensure_var(var);
        self.watches.ensure_var(var);
    }

    /// Is `goal` derivable from the database by unit propagation?
    ///
    /// Assumes the negation of every literal of `goal`, replays unit
    /// clauses, and propagates to fixpoint. On conflict, returns the ids
    /// of the clauses the conflict actually used — reasons in trail order
    /// followed by the conflicting clause — which is a valid antecedent
    /// list for a GRIT line claiming `goal`. `None` means no conflict:
    /// the clause is not derivable this way.
    ///
    /// `goal` is expected to be non-tautologous; a tautology yields
    /// `None` (its negation is not even a consistent assumption).
    pub fn check_rup(&mut self, goal: &Clause) -> Option<Vec<ClauseId>> {
        self.assignment.clear();
        if let Some(&id) = self.empties.iter().next() {
            return Some(vec![id]);
        }
        self.ensure_var(goal.max_var());
        for lit in goal.iter() {
            let assumed = lit.negate();
            match self.assignment.lit_value(assumed) {
                None => self.assignment.assign(assumed, None),
                Some(true) => {}
                Some(false) => return None,
            }
        }
        let mut conflict = None;
        for (&id, &unit) in &self.units {
            match self.assignment.lit_value(unit) {
                None => self.assignment.assign(unit, Some(id)),
                Some(true) => {}
                Some(false) => {
                    conflict = Some(id);
                    break;
                }
            }
        }
        let conflict = conflict.or_else(|| self.propagate_watches());
        conflict.map(|id| self.used_antecedents(id))
    }

    /// Standard two-watch scan over the trail; returns the first
    /// conflicting clause, if any.
    fn propagate_watches(&mut self) -> Option<ClauseId> {
        let mut head = 0;
        while head < self.assignment.trail.len() {
            let falsified = self.assignment.trail[head].lit.negate();
            head += 1;
            let bucket = lit_slot(falsified);
            let mut i = 0;
            while i < self.watches.buckets[bucket].len() {
                let id = self.watches.buckets[bucket][i];
                let lits = self.slots.get_mut(&id).expect("watched clause is live");
                if lits[0] == falsified {
                    lits.swap(0, 1);
                }
                debug_assert_eq!(lits[1], falsified);
                let other = lits[0];
                if self.assignment.lit_value(other) == Some(true) {
                    i += 1;
                    continue;
                }
                // Look for a non-false literal to watch instead.
                let replacement = (2..lits.len())
                    .find(|&j| self.assignment.lit_value(lits[j]) != Some(false));
                if let Some(j) = replacement {
                    lits.swap(1, j);
                    let moved = lits[1];
                    self.watches.buckets[bucket].swap_remove(i);
                    self.watches.add(moved, id);
                    continue;
                }
                // Whole clause false except possibly `other`.
                match self.assignment.lit_value(other) {
                    Some(false) => return Some(id),
                    None => {
                        self.assignment.assign(other, Some(id));
                        i += 1;
                    }
                    Some(true) => unreachable!(),
                }
            }
        }
        None
    }

    /// Walk the conflict graph backwards and collect the reasons that
    /// actually contributed, in trail order, ending with the conflict.
    fn used_antecedents(&self, conflict: ClauseId) -> Vec<ClauseId> {
        let trail = &self.assignment.trail;
        let mut visited = vec![false; trail.len()];
        let mut used_positions = Vec::new();
        let mut queue: Vec<Lit> = self.slots[&conflict].clone();
        while let Some(lit) = queue.pop() {
            debug_assert_eq!(self.assignment.lit_value(lit), Some(false));
            let pos = self.assignment.position[(lit.var() - 1) as usize];
            if visited[pos] {
                continue;
            }
            visited[pos] = true;
            let entry = &trail[pos];
            if let Some(reason) = entry.reason {
                used_positions.push(pos);
                queue.extend(self.slots[&reason].iter().filter(|&&l| l != entry.lit));
            }
        }
        used_positions.sort_unstable();
        let mut ids: Vec<ClauseId> = used_positions
            .into_iter()
            .map(|p| trail[p].reason.expect("only reasoned entries are recorded"))
            .collect();
        ids.push(conflict);
        ids
    }
}
