//! Clauses in `x0, ..., xn`: conjunctions of literals over the theory signature in
//! which every literal mentions `x0` and has pairwise distinct arguments.

use alloc::format;
use alloc::vec::Vec;

use super::formula::{Formula, Var};
use crate::error::{Error, Result};

/// A signed atom `r_m(args)` where `m = args.len()`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub args: Vec<Var>,
}

impl Literal {
    pub fn new(positive: bool, args: impl Into<Vec<Var>>) -> Self {
        Literal {
            positive,
            args: args.into(),
        }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn to_formula(&self) -> Formula {
        let atom = Formula::atom(self.arity() - 1, self.args.clone());
        if self.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    n: usize,
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(n: usize, literals: Vec<Literal>) -> Result<Self> {
        for (i, lit) in literals.iter().enumerate() {
            check_base(n, &lit.args)?;
            if literals[..i].iter().any(|l| l.args == lit.args) {
                return Err(Error::InvalidClause(format!(
                    "literal base {:?} occurs twice",
                    lit.args
                )));
            }
        }
        Ok(Clause { n, literals })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Conjunction of the literals over the theory signature (`r_m` in slot `m - 1`).
    pub fn to_formula(&self) -> Formula {
        Formula::conj(self.literals.iter().map(Literal::to_formula))
    }

    /// Reads back a conjunction of (negated) theory atoms; `true` is the empty clause.
    pub fn from_formula(n: usize, phi: &Formula) -> Result<Self> {
        let mut literals = Vec::new();
        collect_literals(phi, &mut literals)?;
        Clause::new(n, literals)
    }

    pub fn code(&self) -> ClauseCode {
        let bases = literal_bases(self.n);
        let mut code = ClauseCode::default();
        for lit in &self.literals {
            let i = bases
                .iter()
                .position(|b| *b == lit.args)
                .expect("validated literal base");
            if lit.positive {
                code.pos |= 1 << i;
            } else {
                code.neg |= 1 << i;
            }
        }
        code
    }

    /// Inverse of [`Clause::code`]; literals come out in base order.
    pub fn from_code(n: usize, code: ClauseCode) -> Result<Self> {
        let bases = literal_bases(n);
        let overflow = bases.len() < 64 && (code.pos | code.neg) >> bases.len() != 0;
        if code.pos & code.neg != 0 || overflow {
            return Err(Error::InvalidClause(format!(
                "code {code:?} does not fit {} literal bases",
                bases.len()
            )));
        }
        let literals = bases
            .into_iter()
            .enumerate()
            .filter_map(|(i, args)| match (code.pos >> i & 1, code.neg >> i & 1) {
                (1, _) => Some(Literal::new(true, args)),
                (_, 1) => Some(Literal::new(false, args)),
                _ => None,
            })
            .collect();
        Ok(Clause { n, literals })
    }
}

fn collect_literals(phi: &Formula, out: &mut Vec<Literal>) -> Result<()> {
    match phi {
        Formula::True => Ok(()),
        Formula::And(a, b) => {
            collect_literals(a, out)?;
            collect_literals(b, out)
        }
        Formula::Atom { .. } => push_literal(true, phi, out),
        Formula::Not(inner) if matches!(**inner, Formula::Atom { .. }) => {
            push_literal(false, inner, out)
        }
        _ => Err(Error::InvalidClause(
            "expected a conjunction of literals".into(),
        )),
    }
}

fn push_literal(positive: bool, atom: &Formula, out: &mut Vec<Literal>) -> Result<()> {
    let Formula::Atom { pred, args } = atom else {
        unreachable!("caller passes an atom")
    };
    if *pred + 1 != args.len() {
        return Err(Error::InvalidClause(format!(
            "predicate slot {pred} used with {} arguments",
            args.len()
        )));
    }
    out.push(Literal::new(positive, args.clone()));
    Ok(())
}

fn check_base(n: usize, args: &[Var]) -> Result<()> {
    let bad = |why: &str| {
        Err(Error::InvalidClause(format!(
            "literal arguments {args:?}: {why}"
        )))
    };
    if args.is_empty() || args.len() > n + 1 {
        return bad("arity must be between 1 and n+1");
    }
    if !args.contains(&0) {
        return bad("x0 must occur");
    }
    if args.iter().any(|&v| v > n) {
        return bad("variable index exceeds n");
    }
    if (1..args.len()).any(|i| args[..i].contains(&args[i])) {
        return bad("arguments must be pairwise distinct");
    }
    Ok(())
}

/// All literal bases for clauses in `x0..xn`, ordered by arity and then lexicographically.
pub fn literal_bases(n: usize) -> Vec<Vec<Var>> {
    let mut out = Vec::new();
    for m in 1..=n + 1 {
        let mut current = Vec::with_capacity(m);
        extend_bases(n, m, &mut current, &mut out);
    }
    out
}

fn extend_bases(n: usize, m: usize, current: &mut Vec<Var>, out: &mut Vec<Vec<Var>>) {
    if current.len() == m {
        if current.contains(&0) {
            out.push(current.clone());
        }
        return;
    }
    for v in 0..=n {
        if !current.contains(&v) {
            current.push(v);
            extend_bases(n, m, current, out);
            current.pop();
        }
    }
}

/// `sum_{m=1}^{n+1} m * C(n, m-1) * (m-1)!`, the number of literal bases.
pub fn literal_base_count(n: usize) -> usize {
    let mut total = 0;
    let mut falling = 1;
    for m in 1..=n + 1 {
        if m > 1 {
            falling *= n + 2 - m;
        }
        total += m * falling;
    }
    total
}

/// Number of clauses in `x0..xn` including the empty one, or `None` on overflow.
pub fn clause_count(n: usize) -> Option<u128> {
    3u128.checked_pow(literal_base_count(n).try_into().ok()?)
}

/// Bit masks over [`literal_bases`]: bit `i` of `pos` (`neg`) marks base `i` as a positive
/// (negative) literal. Supports up to 64 bases, i.e. `n <= 3`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseCode {
    pub pos: u64,
    pub neg: u64,
}

impl ClauseCode {
    pub fn literal_count(self) -> u32 {
        (self.pos | self.neg).count_ones()
    }
}

/// Lazily enumerates all clause codes over `bases` literal bases: base `i` is the
/// `i`-th ternary digit (least significant first) with 0 absent, 1 positive, 2 negative.
#[derive(Debug, Clone)]
pub struct ClauseCodes {
    digits: Vec<u8>,
    done: bool,
}

impl ClauseCodes {
    pub fn new(bases: usize) -> Self {
        assert!(bases <= 64, "clause codes support at most 64 literal bases");
        ClauseCodes {
            digits: alloc::vec![0; bases],
            done: false,
        }
    }
}

impl Iterator for ClauseCodes {
    type Item = ClauseCode;

    fn next(&mut self) -> Option<ClauseCode> {
        if self.done {
            return None;
        }
        let mut code = ClauseCode::default();
        for (i, &d) in self.digits.iter().enumerate() {
            match d {
                1 => code.pos |= 1 << i,
                2 => code.neg |= 1 << i,
                _ => {}
            }
        }
        self.done = true;
        for d in self.digits.iter_mut() {
            if *d < 2 {
                *d += 1;
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(code)
    }
}

/// Iterator over every clause in `x0..xn`, the empty clause first.
pub fn clauses(n: usize) -> impl Iterator<Item = Clause> {
    ClauseCodes::new(literal_base_count(n))
        .map(move |c| Clause::from_code(n, c).expect("enumerated code"))
}

/// All clauses in `x0..xn`, including the empty clause.
pub fn enumerate_clauses(n: usize) -> Vec<Clause> {
    enumerate_clauses_with(n, true)
}

pub fn enumerate_clauses_with(n: usize, include_empty: bool) -> Vec<Clause> {
    clauses(n)
        .filter(|c| include_empty || !c.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Signature};
    use alloc::collections::BTreeSet;

    #[test]
    fn base_counts() {
        assert_eq!(literal_bases(0), alloc::vec![alloc::vec![0]]);
        assert_eq!(
            literal_bases(1),
            alloc::vec![alloc::vec![0], alloc::vec![0, 1], alloc::vec![1, 0]]
        );
        for (n, expected) in [(0, 1), (1, 3), (2, 11), (3, 49)] {
            assert_eq!(literal_base_count(n), expected);
            assert_eq!(literal_bases(n).len(), expected);
        }
    }

    #[test]
    fn bases_agree_with_brute_force_filter() {
        for n in 0..=3usize {
            let mut brute = BTreeSet::new();
            for m in 1..=n + 1 {
                let total = (n + 1).pow(m as u32);
                for mut idx in 0..total {
                    let mut t = Vec::new();
                    for _ in 0..m {
                        t.push(idx % (n + 1));
                        idx /= n + 1;
                    }
                    let distinct = t.iter().collect::<BTreeSet<_>>().len() == m;
                    if distinct && t.contains(&0) {
                        brute.insert((m, t));
                    }
                }
            }
            let ours: Vec<_> = literal_bases(n).into_iter().map(|t| (t.len(), t)).collect();
            assert_eq!(ours, brute.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn clause_enumeration_sizes() {
        assert_eq!(enumerate_clauses(0).len(), 3);
        assert_eq!(enumerate_clauses(1).len(), 27);
        assert_eq!(enumerate_clauses_with(1, false).len(), 26);
        assert_eq!(clauses(2).count(), 177_147);
        assert_eq!(clause_count(3), Some(3u128.pow(49)));
        assert!(enumerate_clauses(0)[0].is_empty());
    }

    #[test]
    fn enumerated_clauses_are_valid_and_distinct() {
        let all = enumerate_clauses(1);
        let set: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for c in all {
            assert_eq!(Clause::new(c.n(), c.literals().to_vec()).as_ref(), Ok(&c));
            assert_eq!(Clause::from_code(1, c.code()).unwrap(), c);
        }
    }

    #[test]
    fn invalid_clauses() {
        assert!(Clause::new(1, alloc::vec![Literal::new(true, [1])]).is_err());
        assert!(Clause::new(1, alloc::vec![Literal::new(true, [0, 0])]).is_err());
        assert!(Clause::new(1, alloc::vec![Literal::new(true, [0, 1, 2])]).is_err());
        assert!(Clause::new(
            1,
            alloc::vec![Literal::new(true, [0, 1]), Literal::new(false, [0, 1])]
        )
        .is_err());
        assert!(Clause::from_code(0, ClauseCode { pos: 1, neg: 1 }).is_err());
        assert!(Clause::from_code(0, ClauseCode { pos: 2, neg: 0 }).is_err());
    }

    #[test]
    fn formula_round_trip() {
        let sig = Signature::theory(3);
        let phi = parse_formula("r2(x0,x1) & !r3(x2,x0,x1) & !r1(x0)", &sig).unwrap();
        let c = Clause::from_formula(2, &phi).unwrap();
        assert_eq!(c.literals().len(), 3);
        assert_eq!(c.to_formula(), phi);
        assert_eq!(
            Clause::from_formula(2, &Formula::True)
                .unwrap()
                .literals()
                .len(),
            0
        );
        let bad = parse_formula("r2(x0,x1) | r1(x0)", &sig).unwrap();
        assert!(Clause::from_formula(2, &bad).is_err());
    }
}
