//! Core domain types: literals, clauses, formulas, clause ids, valuations.

use std::fmt;
use std::num::{NonZeroI64, NonZeroU64};

/// A propositional literal: a variable index (≥ 1) with a sign.
///
/// Stored as the signed DIMACS code. `i64::MIN` is excluded so that
/// [`Lit::negate`] is total and involutive.
#[derive(Copy, Clone, PartialEq, Eq, Hash)]
pub struct Lit(NonZeroI64);

impl Lit {
    /// Build a literal from its DIMACS code. `None` for 0 or `i64::MIN`.
    pub fn new(code: i64) -> Option<Lit> {
        if code == i64::MIN {
            return None;
        }
        NonZeroI64::new(code).map(Lit)
    }

    /// Positive literal of `var`. Panics if `var` is 0 or exceeds `i64::MAX`.
    pub fn positive(var: u64) -> Lit {
        assert!(var >= 1 && var <= i64::MAX as u64, "variable out of range");
        Lit(NonZeroI64::new(var as i64).unwrap())
    }

    /// Negative literal of `var`. Panics if `var` is 0 or exceeds `i64::MAX`.
    pub fn negative(var: u64) -> Lit {
        Lit::positive(var).negate()
    }

    pub fn code(self) -> i64 {
        self.0.get()
    }

    pub fn var(self) -> u64 {
        self.0.get().unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0.get() > 0
    }

    /// The complementary literal. Involutive: `l.negate().negate() == l`.
    pub fn negate(self) -> Lit {
        Lit(NonZeroI64::new(-self.0.get()).unwrap())
    }
}

// Canonical order: by variable, positive phase before negative. Clause
// normalization relies on complementary literals being adjacent.
impl Ord for Lit {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.var(), !self.is_positive()).cmp(&(other.var(), !other.is_positive()))
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A clause as a set of literals, kept sorted and deduplicated so that
/// equality and hashing are structural. Tautologies are representable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Clause { lits }
    }

    pub fn empty() -> Clause {
        Clause::default()
    }

    /// Convenience constructor from DIMACS codes. Panics on 0.
    pub fn from_codes(codes: impl IntoIterator<Item = i64>) -> Clause {
        Clause::new(
            codes
                .into_iter()
                .map(|c| Lit::new(c).expect("literal code must be non-zero")),
        )
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.lits.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    /// True when the clause holds some literal together with its negation.
    pub fn is_tautology(&self) -> bool {
        // Complementary literals are adjacent in the canonical order.
        self.lits.windows(2).any(|w| w[0].var() == w[1].var())
    }

    /// Largest variable index mentioned, 0 for the empty clause.
    pub fn max_var(&self) -> u64 {
        self.lits.last().map_or(0, |l| l.var())
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<T: IntoIterator<Item = Lit>>(iter: T) -> Clause {
        Clause::new(iter)
    }
}

impl fmt::Display for Clause {
    /// DIMACS clause syntax: literals separated by spaces, terminated by 0.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lits {
            write!(f, "{l} ")?;
        }
        write!(f, "0")
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Identifier of a clause in a proof: a positive 64-bit integer.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClauseId(NonZeroU64);

impl ClauseId {
    pub fn new(id: u64) -> Option<ClauseId> {
        NonZeroU64::new(id).map(ClauseId)
    }

    pub fn get(self) -> u64 {
        self.0.get()
    }
}

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A CNF formula: clauses in input order plus the declared header counts.
///
/// Clause membership is resolved by set equality through a sorted index,
/// and duplicate clauses are preserved (a formula is a multiset).
#[derive(Clone)]
pub struct Formula {
    clauses: Vec<Clause>,
    declared_vars: u64,
    declared_clauses: u64,
    max_var: u64,
    // Indices into `clauses`, sorted by clause content for binary search.
    by_content: Vec<usize>,
}

impl Formula {
    /// Build a formula whose declared counts match its contents.
    pub fn new(clauses: Vec<Clause>) -> Formula {
        let vars = clauses.iter().map(Clause::max_var).max().unwrap_or(0);
        let count = clauses.len() as u64;
        Formula::with_declared(clauses, vars, count)
    }

    /// Build a formula with explicit header counts (they may disagree with
    /// the contents; the DIMACS parser reports that as a warning).
    pub fn with_declared(clauses: Vec<Clause>, declared_vars: u64, declared_clauses: u64) -> Formula {
        let max_var = clauses.iter().map(Clause::max_var).max().unwrap_or(0);
        let mut by_content: Vec<usize> = (0..clauses.len()).collect();
        by_content.sort_unstable_by(|&a, &b| clauses[a].cmp(&clauses[b]));
        Formula {
            clauses,
            declared_vars,
            declared_clauses,
            max_var,
            by_content,
        }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Membership by clause-as-set equality.
    pub fn contains(&self, clause: &Clause) -> bool {
        self.by_content
            .binary_search_by(|&i| self.clauses[i].cmp(clause))
            .is_ok()
    }

    pub fn declared_vars(&self) -> u64 {
        self.declared_vars
    }

    pub fn declared_clauses(&self) -> u64 {
        self.declared_clauses
    }

    /// Largest variable index actually occurring, 0 for no literals.
    pub fn max_var(&self) -> u64 {
        self.max_var
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.clauses == other.clauses
            && self.declared_vars == other.declared_vars
            && self.declared_clauses == other.declared_clauses
    }
}

impl Eq for Formula {}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Formula(p cnf {} {}; {} clauses)",
            self.declared_vars,
            self.declared_clauses,
            self.clauses.len()
        )
    }
}

/// A total assignment over variables `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Valuation {
    values: Vec<bool>,
}

impl Valuation {
    pub fn all_false(n_vars: u64) -> Valuation {
        Valuation {
            values: vec![false; n_vars as usize],
        }
    }

    /// Assignment where variable `v` is true iff bit `v - 1` of `mask` is set.
    pub fn from_mask(n_vars: u64, mask: u64) -> Valuation {
        assert!(n_vars <= 64);
        Valuation {
            values: (0..n_vars).map(|i| mask & (1 << i) != 0).collect(),
        }
    }

    pub fn n_vars(&self) -> u64 {
        self.values.len() as u64
    }

    /// Value of `var`. Panics when `var` is outside `1..=n`: a valuation is
    /// total over the variables of the formula under test by construction.
    pub fn value(&self, var: u64) -> bool {
        self.values[(var - 1) as usize]
    }

    pub fn set(&mut self, var: u64, value: bool) {
        self.values[(var - 1) as usize] = value;
    }

    pub fn satisfies_lit(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    /// A clause is satisfied iff some literal in it is.
    pub fn satisfies_clause(&self, clause: &Clause) -> bool {
        clause.iter().any(|l| self.satisfies_lit(l))
    }

    /// A formula is satisfied iff every clause is.
    pub fn satisfies_formula(&self, formula: &Formula) -> bool {
        formula.clauses().iter().all(|c| self.satisfies_clause(c))
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.values.iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(f, "Valuation({s})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_formula() -> Formula {
        Formula::new(vec![
            Clause::from_codes([1, 2]),
            Clause::from_codes([-1, 2]),
            Clause::from_codes([1, -2]),
            Clause::from_codes([-1, 3]),
            Clause::from_codes([-2, -3]),
        ])
    }

    #[test]
    fn negate_is_involutive_and_flips_sign() {
        let l = Lit::new(7).unwrap();
        assert_eq!(l.negate().code(), -7);
        assert_eq!(l.negate().negate(), l);
        assert!(Lit::new(0).is_none());
        assert!(Lit::new(i64::MIN).is_none());
        assert_eq!(Lit::new(i64::MAX).unwrap().negate().code(), -i64::MAX);
    }

    #[test]
    fn clause_normalizes_to_sorted_dedup_set() {
        let c = Clause::from_codes([3, -1, 3, 2]);
        let codes: Vec<i64> = c.iter().map(Lit::code).collect();
        assert_eq!(codes, vec![-1, 2, 3]);
        // Order-insensitive and idempotent.
        assert_eq!(c, Clause::from_codes([2, 3, -1]));
        assert_eq!(Clause::new(c.iter()), c);
    }

    #[test]
    fn tautologies_are_kept_and_detected() {
        let t = Clause::from_codes([1, -1, 2]);
        assert_eq!(t.len(), 3);
        assert!(t.is_tautology());
        assert!(!Clause::from_codes([1, 2]).is_tautology());
        assert!(!Clause::empty().is_tautology());
    }

    #[test]
    fn satisfaction_is_definitional() {
        let mut v = Valuation::all_false(3);
        v.set(1, true);
        v.set(2, true);
        assert!(v.satisfies_lit(Lit::new(1).unwrap()));
        assert!(!v.satisfies_lit(Lit::new(-1).unwrap()));
        assert!(v.satisfies_clause(&Clause::from_codes([-1, 2])));
        assert!(!v.satisfies_clause(&Clause::from_codes([-1, -2])));
        assert!(!v.satisfies_clause(&Clause::empty()));

        // {1↦true, 2↦true, 3↦false} falsifies clause (-1 3) of the example.
        assert!(!v.satisfies_formula(&example_formula()));
    }

    #[test]
    fn empty_formula_is_satisfied_by_anything() {
        let f = Formula::new(vec![]);
        assert!(Valuation::all_false(0).satisfies_formula(&f));
    }

    #[test]
    fn formula_membership_is_set_equality() {
        let f = example_formula();
        assert!(f.contains(&Clause::from_codes([2, 1])));
        assert!(f.contains(&Clause::from_codes([-2, -3])));
        assert!(!f.contains(&Clause::from_codes([1, 3])));
        assert!(!f.contains(&Clause::empty()));
        assert_eq!(f.max_var(), 3);
        assert_eq!(f.declared_vars(), 3);
        assert_eq!(f.declared_clauses(), 5);
    }

    #[test]
    fn formula_is_a_multiset() {
        let f = Formula::new(vec![Clause::from_codes([1]), Clause::from_codes([1])]);
        assert_eq!(f.len(), 2);
        assert!(f.contains(&Clause::from_codes([1])));
    }

    #[test]
    fn valuation_from_mask_orders_bits_by_variable() {
        let v = Valuation::from_mask(3, 0b101);
        assert!(v.value(1));
        assert!(!v.value(2));
        assert!(v.value(3));
    }
}
