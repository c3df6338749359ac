//! Shared fixtures, reference oracles, and generators for exercising the
//! checker and converter.
//!
//! Everything here is deliberately slow and simple: the oracles decide
//! satisfiability by exhaustive enumeration, the trace generator is
//! textbook variable elimination, and the proof family is a complete
//! binary case split. Their value is independence — none of them share
//! code with the propagation engine they are used to cross-check.

use std::collections::BTreeSet;
use std::io;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Clause, ClauseId, Formula, Lit, Valuation};
use crate::proof::{DrupAction, ProofAction};

/// A five-clause unsatisfiable formula over three variables, used as the
/// running example throughout the test suite.
pub const WORKED_EXAMPLE_CNF: &str = "\
c a small unsatisfiable formula
p cnf 3 5
 1  2 0
-1  2 0
 1 -2 0
-1  3 0
-2 -3 0
";

/// A refutation of [`WORKED_EXAMPLE_CNF`], deletion-tight: every clause
/// is dropped on the line after its last use.
pub const WORKED_EXAMPLE_GRIT: &str = "\
1 1 2 0 0
2 -1 2 0 0
3 1 -2 0 0
4 -1 3 0 0
5 -2 -3 0 0
6 1 0 1 3 0
0 1 3 0
7 2 0 6 2 0
0 2 0
8 3 0 6 4 0
0 4 6 0
9 0 7 8 5 0
";

/// The solver-style trace behind [`WORKED_EXAMPLE_GRIT`]: the same three
/// lemmas and the same deletions, without ids or antecedents.
pub const WORKED_EXAMPLE_DRUP: &str = "\
1 0
d 1 2 0
d 1 -2 0
2 0
d -1 2 0
3 0
d -1 3 0
d 1 0
0
";

pub fn worked_example_formula() -> Formula {
    crate::dimacs::parse_dimacs_str(WORKED_EXAMPLE_CNF)
        .expect("fixture parses")
        .formula
}

pub fn worked_example_proof() -> Vec<ProofAction> {
    crate::proof::parse_grit_str(WORKED_EXAMPLE_GRIT).expect("fixture parses")
}

/// Copy a proof without its deletion lines. The result verifies whenever
/// the input does (deletions only ever shrink the live set), at the cost
/// of holding every clause to the end.
pub fn strip_deletions(actions: &[ProofAction]) -> Vec<ProofAction> {
    actions
        .iter()
        .filter(|a| !matches!(a, ProofAction::Delete(_)))
        .cloned()
        .collect()
}

/// Ceiling on distinct variables the enumeration oracles accept.
pub const MAX_ORACLE_VARS: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{0} distinct variables exceed the enumeration limit of {MAX_ORACLE_VARS}")]
    TooManyVariables(usize),
}

fn occurring_vars(formula: &Formula, extra: Option<&Clause>) -> Vec<u64> {
    let mut vars: BTreeSet<u64> = formula
        .clauses()
        .iter()
        .flat_map(|c| c.iter().map(|l| l.var()))
        .collect();
    if let Some(clause) = extra {
        vars.extend(clause.iter().map(|l| l.var()));
    }
    vars.into_iter().collect()
}

fn enumerate<P>(vars: &[u64], max_var: u64, mut pred: P) -> Result<bool, OracleError>
where
    P: FnMut(&Valuation) -> bool,
{
    if vars.len() > MAX_ORACLE_VARS {
        return Err(OracleError::TooManyVariables(vars.len()));
    }
    for mask in 0..1u64 << vars.len() {
        let mut val = Valuation::all_false(max_var);
        for (bit, &var) in vars.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                val.set(var, true);
            }
        }
        if pred(&val) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exhaustive satisfiability oracle. Enumerates every assignment of the
/// variables that actually occur, so sparse numbering costs nothing.
pub fn brute_force_unsat(formula: &Formula) -> Result<bool, OracleError> {
    let vars = occurring_vars(formula, None);
    Ok(!enumerate(&vars, formula.max_var(), |val| val.satisfies_formula(formula))?)
}

/// Exhaustive entailment oracle: does every model of the formula satisfy
/// the clause? Entailing the empty clause is unsatisfiability.
pub fn brute_force_entails(formula: &Formula, clause: &Clause) -> Result<bool, OracleError> {
    let vars = occurring_vars(formula, Some(clause));
    let max_var = formula.max_var().max(clause.max_var());
    Ok(!enumerate(&vars, max_var, |val| {
        val.satisfies_formula(formula) && !val.satisfies_clause(clause)
    })?)
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("tree depth must be between 1 and 24, got {0}")]
    DepthOutOfRange(u32),
    #[error("output error: {0}")]
    Io(#[from] io::Error),
}

fn check_depth(n: u32) -> Result<(), GenError> {
    if (1..=24).contains(&n) {
        Ok(())
    } else {
        Err(GenError::DepthOutOfRange(n))
    }
}

/// The clause at `path` in the complete case split over variables
/// `1..=depth`: variable `v` appears negated exactly when bit `depth - v`
/// of `path` is set, so `path` counts the clauses in lexicographic order
/// and each clause forbids one assignment.
pub fn complete_tree_clause(depth: u32, path: u64) -> Clause {
    Clause::new((1..=u64::from(depth)).map(|v| {
        if path >> (u64::from(depth) - v) & 1 == 1 {
            Lit::negative(v)
        } else {
            Lit::positive(v)
        }
    }))
}

/// Stream the complete-tree refutation of depth `n` without holding it
/// in memory.
///
/// The formula is the `2^n` clauses of [`complete_tree_clause`], one per
/// assignment, ids `1..=2^n`. The proof introduces each clause right
/// before its first use, resolves sibling pairs bottom-up (derived ids
/// count on from `2^n + 1` in emission order), and deletes both children
/// once their parent is derived. The live set therefore stays at `n + 2`
/// clauses while the full proof has `2^(n+1) - 1` introductions — the
/// family exists to measure how much deletion lines buy.
pub fn visit_complete_tree<F>(n: u32, mut visit: F) -> Result<(), GenError>
where
    F: FnMut(&ProofAction) -> io::Result<()>,
{
    check_depth(n)?;
    let mut next_id = (1u64 << n) + 1;
    emit_tree_node(n, 0, 0, &mut next_id, &mut visit)?;
    Ok(())
}

fn emit_tree_node<F>(
    n: u32,
    path: u64,
    depth: u32,
    next_id: &mut u64,
    visit: &mut F,
) -> io::Result<u64>
where
    F: FnMut(&ProofAction) -> io::Result<()>,
{
    if depth == n {
        let id = ClauseId::new(path + 1).expect("leaf ids start at 1");
        visit(&ProofAction::Original { id, clause: complete_tree_clause(n, path) })?;
        return Ok(path + 1);
    }
    let pos = emit_tree_node(n, path << 1, depth + 1, next_id, visit)?;
    let neg = emit_tree_node(n, path << 1 | 1, depth + 1, next_id, visit)?;
    let id = *next_id;
    *next_id += 1;
    // Under the negated goal the positive child shrinks to the unit
    // `depth + 1`, which falsifies the negative child.
    visit(&ProofAction::Rup {
        id: ClauseId::new(id).expect("derived ids follow the leaves"),
        clause: complete_tree_clause(depth, path),
        antecedents: vec![
            ClauseId::new(pos).expect("child already emitted"),
            ClauseId::new(neg).expect("child already emitted"),
        ],
    })?;
    if depth > 0 {
        debug_assert!(pos < neg, "post-order numbers the positive child first");
        visit(&ProofAction::Delete(vec![
            ClauseId::new(pos).expect("nonzero"),
            ClauseId::new(neg).expect("nonzero"),
        ]))?;
    }
    Ok(id)
}

/// In-memory form of [`visit_complete_tree`], for small depths.
pub fn gen_complete_tree(n: u32) -> Result<(Formula, Vec<ProofAction>), GenError> {
    check_depth(n)?;
    let count = 1u64 << n;
    let clauses = (0..count).map(|path| complete_tree_clause(n, path)).collect();
    let mut actions = Vec::new();
    visit_complete_tree(n, |a| {
        actions.push(a.clone());
        Ok(())
    })?;
    Ok((Formula::new(clauses), actions))
}

/// Apply one seeded random corruption to a proof: drop a line, rotate a
/// Rup's antecedents, negate a literal, swap or duplicate ids, or insert
/// an early deletion. The same seed always yields the same corruption.
///
/// The result may still verify — dropping an unused lemma is harmless —
/// so callers asserting rejection must confirm invalidity independently.
pub fn mutate_proof(actions: &[ProofAction], seed: u64) -> Vec<ProofAction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = actions.to_vec();
    if out.is_empty() {
        return out;
    }
    for _ in 0..8 {
        let kind = rng.random_range(0..6u32);
        match kind {
            0 => {
                let at = rng.random_range(0..out.len());
                out.remove(at);
                return out;
            }
            1 => {
                let candidates: Vec<usize> = out
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| {
                        matches!(a, ProofAction::Rup { antecedents, .. } if antecedents.len() >= 2)
                    })
                    .map(|(i, _)| i)
                    .collect();
                let Some(&at) = pick(&mut rng, &candidates) else { continue };
                if let ProofAction::Rup { antecedents, .. } = &mut out[at] {
                    antecedents.rotate_left(1);
                }
                return out;
            }
            2 => {
                let candidates: Vec<usize> = out
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| match a {
                        ProofAction::Original { clause, .. }
                        | ProofAction::Rup { clause, .. } => !clause.is_empty(),
                        ProofAction::Delete(_) => false,
                    })
                    .map(|(i, _)| i)
                    .collect();
                let Some(&at) = pick(&mut rng, &candidates) else { continue };
                let clause = match &mut out[at] {
                    ProofAction::Original { clause, .. } | ProofAction::Rup { clause, .. } => {
                        clause
                    }
                    ProofAction::Delete(_) => unreachable!(),
                };
                let flip = rng.random_range(0..clause.len());
                *clause = Clause::new(
                    clause
                        .iter()
                        .enumerate()
                        .map(|(i, l)| if i == flip { l.negate() } else { l }),
                );
                return out;
            }
            3 | 4 => {
                let duplicate = kind == 4;
                let candidates: Vec<usize> = out
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.introduces().is_some())
                    .map(|(i, _)| i)
                    .collect();
                if candidates.len() < 2 {
                    continue;
                }
                let a = candidates[rng.random_range(0..candidates.len())];
                let b = candidates[rng.random_range(0..candidates.len())];
                if a == b {
                    continue;
                }
                let id_a = out[a].introduces().expect("filtered");
                let id_b = out[b].introduces().expect("filtered");
                set_id(&mut out[b], id_a);
                if !duplicate {
                    set_id(&mut out[a], id_b);
                }
                return out;
            }
            5 => {
                let candidates: Vec<usize> = out
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.introduces().is_some())
                    .map(|(i, _)| i)
                    .collect();
                let Some(&at) = pick(&mut rng, &candidates) else { continue };
                let id = out[at].introduces().expect("filtered");
                let insert_at = rng.random_range(at + 1..=out.len());
                out.insert(insert_at, ProofAction::Delete(vec![id]));
                return out;
            }
            _ => unreachable!(),
        }
    }
    out.pop();
    out
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, candidates: &'a [T]) -> Option<&'a T> {
    if candidates.is_empty() {
        None
    } else {
        Some(&candidates[rng.random_range(0..candidates.len())])
    }
}

fn set_id(action: &mut ProofAction, new_id: ClauseId) {
    match action {
        ProofAction::Original { id, .. } | ProofAction::Rup { id, .. } => *id = new_id,
        ProofAction::Delete(_) => unreachable!("deletes introduce nothing"),
    }
}

/// A random formula: `n_clauses` clauses of 1 to `max_width` distinct
/// variables drawn from `1..=n_vars`, each polarity a coin flip. Never
/// produces tautologies or duplicate literals.
pub fn random_formula<R: Rng>(rng: &mut R, n_vars: u64, n_clauses: usize, max_width: usize) -> Formula {
    let mut pool: Vec<u64> = (1..=n_vars).collect();
    let clauses = (0..n_clauses)
        .map(|_| {
            let width = rng.random_range(1..=max_width.min(pool.len()));
            for i in 0..width {
                let j = rng.random_range(i..pool.len());
                pool.swap(i, j);
            }
            Clause::new(pool[..width].iter().map(|&v| {
                if rng.random_bool(0.5) {
                    Lit::positive(v)
                } else {
                    Lit::negative(v)
                }
            }))
        })
        .collect();
    Formula::new(clauses)
}

/// Caps that make [`dp_refutation`] give up rather than blow up.
const DP_CLAUSE_CAP: usize = 4096;
const DP_TRACE_CAP: usize = 50_000;

/// Refute a formula by variable elimination, recording the work as a
/// solver-style trace: every resolvent is added while both parents are
/// live (which makes it derivable by unit propagation from exactly those
/// two), then the eliminated variable's clauses are deleted.
///
/// Returns `None` for satisfiable formulas, and for refutations that
/// would exceed a size cap — elimination can blow up quadratically, so
/// callers drawing random formulas should simply redraw.
pub fn dp_refutation(formula: &Formula) -> Option<Vec<DrupAction>> {
    let mut live: BTreeSet<Clause> = formula
        .clauses()
        .iter()
        .filter(|c| !c.is_tautology())
        .cloned()
        .collect();
    if live.iter().any(Clause::is_empty) {
        return Some(vec![DrupAction::Add(Clause::empty())]);
    }
    let mut trace = Vec::new();
    loop {
        let Some(var) = live.iter().flat_map(Clause::iter).map(Lit::var).min() else {
            return None; // every clause eliminated: satisfiable
        };
        let (mut pos, mut neg, mut keep) = (Vec::new(), Vec::new(), BTreeSet::new());
        for clause in live {
            if clause.contains(Lit::positive(var)) {
                pos.push(clause);
            } else if clause.contains(Lit::negative(var)) {
                neg.push(clause);
            } else {
                keep.insert(clause);
            }
        }
        let mut added = BTreeSet::new();
        for c in &pos {
            for d in &neg {
                let resolvent = Clause::new(
                    c.iter().chain(d.iter()).filter(|l| l.var() != var),
                );
                if resolvent.is_tautology()
                    || keep.contains(&resolvent)
                    || added.contains(&resolvent)
                {
                    continue;
                }
                trace.push(DrupAction::Add(resolvent.clone()));
                if resolvent.is_empty() {
                    return Some(trace);
                }
                added.insert(resolvent);
                if trace.len() > DP_TRACE_CAP || keep.len() + added.len() > DP_CLAUSE_CAP {
                    return None;
                }
            }
        }
        for clause in pos.into_iter().chain(neg) {
            trace.push(DrupAction::Delete(clause));
        }
        keep.extend(added);
        live = keep;
    }
}
