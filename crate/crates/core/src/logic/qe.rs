use alloc::vec::Vec;

use super::clause::{Clause, Literal};
use super::formula::{Formula, Var};

/// An equivalence relation on the variables `x1..xn`, stored as a partition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarEquivalence {
    n: usize,
    /// `class[i - 1]` is the class number of `x_i`; classes are numbered by first occurrence.
    class: Vec<usize>,
}

impl VarEquivalence {
    /// The discrete partition: every variable in its own class.
    pub fn discrete(n: usize) -> Self {
        VarEquivalence {
            n,
            class: (0..n).collect(),
        }
    }

    /// Every equivalence relation on `x1..xn`, listed by restricted growth strings.
    pub fn all(n: usize) -> Vec<VarEquivalence> {
        let mut out = Vec::new();
        let mut rgs = alloc::vec![0usize; n];
        loop {
            out.push(VarEquivalence {
                n,
                class: rgs.clone(),
            });
            // Next restricted growth string: bump the rightmost position that may grow.
            let mut i = n;
            loop {
                if i <= 1 {
                    return out;
                }
                i -= 1;
                let limit = rgs[..i].iter().max().map_or(0, |&m| m + 1);
                if rgs[i] < limit {
                    rgs[i] += 1;
                    rgs[i + 1..].iter_mut().for_each(|d| *d = 0);
                    break;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class_count(&self) -> usize {
        self.class.iter().max().map_or(0, |&m| m + 1)
    }

    /// Least variable of the class of `x_v`; `x0` is its own representative.
    pub fn representative(&self, v: Var) -> Var {
        if v == 0 {
            return 0;
        }
        let c = self.class[v - 1];
        self.class
            .iter()
            .position(|&d| d == c)
            .expect("class is non-empty")
            + 1
    }

    pub fn is_representative(&self, v: Var) -> bool {
        self.representative(v) == v
    }

    /// `mu_theta`: equalities tying each variable to its representative, and
    /// disequalities between distinct representatives.
    pub fn mu(&self) -> Formula {
        let reps: Vec<Var> = (1..=self.n)
            .filter(|&v| self.is_representative(v))
            .collect();
        let equalities = (1..=self.n)
            .filter(|&v| !self.is_representative(v))
            .map(|v| Formula::Eq(v, self.representative(v)));
        let mut distinct = Vec::new();
        for (i, &a) in reps.iter().enumerate() {
            for &b in &reps[i + 1..] {
                distinct.push(Formula::not(Formula::Eq(a, b)));
            }
        }
        Formula::conj(equalities.chain(distinct))
    }
}

/// Whether some model of the theory satisfies `K` after identifying variables per `theta`,
/// with the representatives pairwise distinct.
fn branch_survives(k: &Clause, theta: &VarEquivalence) -> bool {
    let mut kept: Vec<Literal> = Vec::new();
    for lit in k.literals() {
        let args: Vec<Var> = lit.args.iter().map(|&v| theta.representative(v)).collect();
        let repeats = (1..args.len()).any(|i| args[..i].contains(&args[i]));
        if repeats {
            if lit.positive {
                return false;
            }
            continue;
        }
        if kept
            .iter()
            .any(|l| l.args == args && l.positive != lit.positive)
        {
            return false;
        }
        kept.push(Literal::new(lit.positive, args));
    }
    true
}

/// A quantifier-free formula in `x1..xn` equivalent to `E x0. K` modulo the theory:
/// the disjunction of `mu_theta` over the equivalences `theta` under which `K` stays consistent.
pub fn qe_exists_clause(k: &Clause) -> Formula {
    let thetas = VarEquivalence::all(k.n());
    let surviving: Vec<&VarEquivalence> = thetas.iter().filter(|t| branch_survives(k, t)).collect();
    if surviving.len() == thetas.len() {
        return Formula::True;
    }
    Formula::disj(surviving.into_iter().map(VarEquivalence::mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{enumerate_clauses, Signature};

    fn bell(n: usize) -> usize {
        [1, 1, 2, 5, 15, 52, 203][n]
    }

    #[test]
    fn partitions_counted_by_bell_numbers() {
        for n in 0..=6 {
            let all = VarEquivalence::all(n);
            assert_eq!(all.len(), bell(n));
            let mut sorted = all.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), all.len());
        }
        assert_eq!(
            VarEquivalence::all(3)[0],
            VarEquivalence {
                n: 3,
                class: alloc::vec![0, 0, 0]
            }
        );
        assert!(VarEquivalence::all(3).contains(&VarEquivalence::discrete(3)));
    }

    #[test]
    fn mu_of_small_partitions() {
        let sig = Signature::new();
        let all = VarEquivalence::all(3);
        let shown: Vec<_> = all
            .iter()
            .map(|t| alloc::format!("{}", t.mu().display(&sig)))
            .collect();
        assert_eq!(shown[0], "x2 = x1 & x3 = x1");
        assert_eq!(shown[4], "!(x1 = x2) & !(x1 = x3) & !(x2 = x3)");
        assert_eq!(VarEquivalence::all(1)[0].mu(), Formula::True);
    }

    #[test]
    fn small_n_is_trivially_true() {
        for n in 0..=1 {
            for k in enumerate_clauses(n) {
                assert_eq!(qe_exists_clause(&k), Formula::True);
            }
        }
    }

    #[test]
    fn positive_ternary_literal_forces_distinctness() {
        let k = Clause::new(2, alloc::vec![Literal::new(true, [0, 1, 2])]).unwrap();
        assert_eq!(qe_exists_clause(&k), Formula::not(Formula::Eq(1, 2)));
        let shown = alloc::format!("{}", qe_exists_clause(&k).display(&Signature::theory(3)));
        assert_eq!(shown, "!(x1 = x2)");
    }

    #[test]
    fn negative_repeated_literal_is_dropped() {
        let k = Clause::new(2, alloc::vec![Literal::new(false, [0, 1, 2])]).unwrap();
        assert_eq!(qe_exists_clause(&k), Formula::True);
    }

    #[test]
    fn opposite_signs_after_identification() {
        let k = Clause::new(
            2,
            alloc::vec![Literal::new(true, [0, 1]), Literal::new(false, [0, 2])],
        )
        .unwrap();
        assert_eq!(qe_exists_clause(&k), Formula::not(Formula::Eq(1, 2)));
    }
}
