use alloc::vec::Vec;

use super::model::TheoryStructure;
use crate::error::{Error, Result};
use crate::logic::{literal_base_count, literal_bases, Clause, ClauseCode, Var};

/// Largest number of literal bases the checker enumerates (`3^15` clause codes).
const MAX_BASES: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct T2Options {
    /// Only parameter tuples over `0..bound` are checked.
    pub param_bound: Option<usize>,
    /// At most this many unmet pairs are listed; the count covers all of them.
    pub max_report: usize,
}

impl Default for T2Options {
    fn default() -> Self {
        T2Options {
            param_bound: None,
            max_report: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnmetClause {
    pub params: Vec<usize>,
    pub clause: Clause,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct T2Report {
    /// Number of (parameter tuple, clause) pairs examined.
    pub checked: u128,
    pub unmet_count: u128,
    pub unmet: Vec<UnmetClause>,
}

impl T2Report {
    pub fn is_rich(&self) -> bool {
        self.unmet_count == 0
    }
}

/// Checks the extension axioms for every `n' <= n`, every tuple of `n'` pairwise distinct
/// elements and every clause in `x0..x_n'`, the witness ranging over the whole structure.
pub fn t2_richness(s: &TheoryStructure, n: usize) -> Result<T2Report> {
    t2_richness_with(s, n, T2Options::default())
}

pub fn t2_richness_with(s: &TheoryStructure, n: usize, opts: T2Options) -> Result<T2Report> {
    if literal_base_count(n) > MAX_BASES {
        return Err(Error::Invalid(alloc::format!(
            "clauses in x0..x{n} are too many to enumerate"
        )));
    }
    let bound = opts.param_bound.unwrap_or(s.size()).min(s.size());
    let mut report = T2Report::default();
    for k in (0..=n).filter(|&k| k <= bound) {
        let bases = literal_bases(k);
        let plan = DpPlan::new(bases.len());
        let mut params = alloc::vec![0usize; k];
        loop {
            if !super::model::has_repeat(&params) {
                let realized = realized_types(s, &bases, &params);
                let sat = plan.satisfiable(&realized);
                report.checked += sat.len() as u128;
                for (idx, ok) in sat.iter().enumerate() {
                    if !ok {
                        report.unmet_count += 1;
                        if report.unmet.len() < opts.max_report {
                            let clause =
                                Clause::from_code(k, plan.code(idx)).expect("code within bases");
                            report.unmet.push(UnmetClause {
                                params: params.clone(),
                                clause,
                            });
                        }
                    }
                }
            }
            if k == 0 || !crate::relation::advance(&mut params, bound) {
                break;
            }
        }
    }
    Ok(report)
}

/// `realized[t]` is set iff some `x0` gives literal base `i` the value of bit `i` of `t`.
pub(crate) fn realized_types(
    s: &TheoryStructure,
    bases: &[Vec<Var>],
    params: &[usize],
) -> Vec<bool> {
    let mut realized = alloc::vec![false; 1 << bases.len()];
    let mut args = Vec::new();
    for x0 in 0..s.size() {
        let mut ty = 0usize;
        for (i, base) in bases.iter().enumerate() {
            args.clear();
            args.extend(
                base.iter()
                    .map(|&v| if v == 0 { x0 } else { params[v - 1] }),
            );
            if s.holds(&args) {
                ty |= 1 << i;
            }
        }
        realized[ty] = true;
    }
    realized
}

/// Satisfiability over all clause codes, indexed as in [`crate::logic::ClauseCodes`].
pub(crate) struct DpPlan {
    bases: usize,
    len: usize,
}

impl DpPlan {
    pub(crate) fn new(bases: usize) -> Self {
        DpPlan {
            bases,
            len: 3usize.pow(bases as u32),
        }
    }

    pub(crate) fn code(&self, mut idx: usize) -> ClauseCode {
        let mut code = ClauseCode::default();
        for i in 0..self.bases {
            match idx % 3 {
                1 => code.pos |= 1 << i,
                2 => code.neg |= 1 << i,
                _ => {}
            }
            idx /= 3;
        }
        code
    }

    /// A clause is satisfiable iff one of its two refinements on its first absent base is;
    /// complete clauses look up the realized type directly.
    pub(crate) fn satisfiable(&self, realized: &[bool]) -> Vec<bool> {
        let mut sat = alloc::vec![false; self.len];
        for idx in (0..self.len).rev() {
            let mut rest = idx;
            let mut pow = 1;
            let mut ty = 0usize;
            let mut open = None;
            for i in 0..self.bases {
                match rest % 3 {
                    0 => {
                        open = Some(pow);
                        break;
                    }
                    1 => ty |= 1 << i,
                    _ => {}
                }
                rest /= 3;
                pow *= 3;
            }
            sat[idx] = match open {
                Some(p) => sat[idx + p] || sat[idx + 2 * p],
                None => realized[ty],
            };
        }
        sat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{clauses, ClauseCodes};

    #[test]
    fn plan_codes_follow_the_clause_enumeration() {
        let plan = DpPlan::new(3);
        for (idx, code) in ClauseCodes::new(3).enumerate() {
            assert_eq!(plan.code(idx), code);
        }
    }

    #[test]
    fn single_point_is_not_rich() {
        let s = TheoryStructure::new(1).unwrap();
        let report = t2_richness(&s, 0).unwrap();
        assert_eq!(report.checked, 3);
        assert_eq!(report.unmet_count, 1);
        assert_eq!(
            alloc::format!(
                "{}",
                report.unmet[0]
                    .clause
                    .to_formula()
                    .display(&crate::logic::Signature::theory(1))
            ),
            "!r1(x0)"
        );
    }

    #[test]
    fn dp_matches_direct_search() {
        let mut s = TheoryStructure::new(4).unwrap();
        s.set(alloc::vec![3, 1], true);
        s.set(alloc::vec![2], false);
        let report = t2_richness(&s, 1).unwrap();
        let mut expected = 0u128;
        let cases = core::iter::once((0, 0)).chain((0..4).map(|a| (1, a)));
        for (n, a) in cases {
            for k in clauses(n) {
                let found = (0..4).any(|x0| {
                    k.literals().iter().all(|l| {
                        let args: Vec<usize> = l
                            .args
                            .iter()
                            .map(|&v| if v == 0 { x0 } else { a })
                            .collect();
                        s.holds(&args) == l.positive
                    })
                });
                expected += u128::from(!found);
            }
        }
        assert!(expected > 0);
        assert_eq!(report.unmet_count, expected);
        assert_eq!(report.checked, 3 + 4 * 27);
    }

    #[test]
    fn bounded_parameters_and_limits() {
        let s = TheoryStructure::new(3).unwrap();
        let opts = T2Options {
            param_bound: Some(1),
            max_report: 2,
        };
        let report = t2_richness_with(&s, 1, opts).unwrap();
        assert_eq!(report.checked, 3 + 27);
        assert_eq!(report.unmet.len(), 2);
        assert!(report.unmet_count > 2);
        assert!(t2_richness(&s, 3).is_err());
    }
}
