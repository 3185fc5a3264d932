use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::{symmetric_group, Perm};
use crate::relation::{encode_tuple, BaseSet, Relation};

/// Strong superposition: `{ g(a) | g in Sym(A), g(b_i) in r_i for all i }`.
pub fn ssup(
    a: &[usize],
    constraints: &[(Vec<usize>, Relation)],
    base: BaseSet,
) -> Result<Relation> {
    if a.is_empty() {
        return Err(Error::ZeroArity);
    }
    base.check_tuple(a)?;
    for (b, r) in constraints {
        base.check_tuple(b)?;
        if r.base() != base {
            return Err(Error::BaseMismatch {
                expected: base.size(),
                found: r.base().size(),
            });
        }
        if b.len() != r.arity() {
            return Err(Error::ArityMismatch {
                expected: r.arity(),
                found: b.len(),
            });
        }
    }
    let mut out = Relation::empty(base, a.len())?;
    for g in symmetric_group(base.size())? {
        if constraints
            .iter()
            .all(|(b, r)| r.contains(&g.apply_tuple(b)))
        {
            out.set_index(encode_tuple(base.size(), &g.apply_tuple(a)));
        }
    }
    Ok(out)
}

/// `F(s_1, ..., s_n) = U { g[sigma] | g in Sym(A), g[r_i] = s_i for all i }` for targets `r_i`.
pub fn invariant_image_op(
    targets: &[Relation],
    sigma: &Relation,
    inputs: &[Relation],
) -> Result<Relation> {
    if targets.len() != inputs.len() {
        return Err(Error::Invalid(alloc::format!(
            "{} targets but {} inputs",
            targets.len(),
            inputs.len()
        )));
    }
    let base = sigma.base();
    for (t, s) in targets.iter().zip(inputs) {
        for r in [t, s] {
            if r.base() != base {
                return Err(Error::BaseMismatch {
                    expected: base.size(),
                    found: r.base().size(),
                });
            }
        }
        if t.arity() != s.arity() {
            return Err(Error::ArityMismatch {
                expected: t.arity(),
                found: s.arity(),
            });
        }
    }
    let mut out = Relation::empty(base, sigma.arity())?;
    for g in symmetric_group(base.size())? {
        let matches = targets
            .iter()
            .zip(inputs)
            .all(|(t, s)| t.len() == s.len() && &t.permuted(&g).expect("same base") == s);
        if matches {
            out = out.union(&sigma.permuted(&g)?)?;
        }
    }
    Ok(out)
}

/// `Loc_o G` with tuple length capped at `min(m_max, N)`: the permutations that agree with
/// some member of `G` on every tuple of that length.
pub fn loc_o(g: &[Perm], base: BaseSet, m_max: usize) -> Result<Vec<Perm>> {
    let n = base.size();
    for p in g {
        if p.degree() != n {
            return Err(Error::BaseMismatch {
                expected: n,
                found: p.degree(),
            });
        }
    }
    let m = m_max.min(n);
    if m == 0 {
        return Err(Error::ZeroArity);
    }
    // Longer injective tuples dominate shorter ones and tuples with repeats, so only
    // injective tuples of length exactly m need checking.
    let tuples: Vec<Vec<usize>> = injective_tuples(n, m);
    let restrictions: BTreeSet<(usize, Vec<usize>)> = g
        .iter()
        .flat_map(|p| {
            tuples
                .iter()
                .enumerate()
                .map(move |(i, t)| (i, p.apply_tuple(t)))
        })
        .collect();
    Ok(symmetric_group(n)?
        .filter(|f| {
            tuples
                .iter()
                .enumerate()
                .all(|(i, t)| restrictions.contains(&(i, f.apply_tuple(t))))
        })
        .collect())
}

fn injective_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut digits = alloc::vec![0usize; m];
    loop {
        if (1..m).all(|i| !digits[..i].contains(&digits[i])) {
            out.push(digits.clone());
        }
        if !crate::relation::advance(&mut digits, n) {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{aut_of_relations, generate_group, PermGroup};
    use crate::perm::all_permutations;

    fn b(n: usize) -> BaseSet {
        BaseSet::new(n).unwrap()
    }

    #[test]
    fn ssup_examples() {
        let orbit = ssup(&[0, 1], &[], b(3)).unwrap();
        assert_eq!(orbit, Relation::diagonal(b(3)).complement());

        let zero = Relation::from_tuples(b(3), 1, [[0]]).unwrap();
        assert_eq!(
            ssup(&[0], &[(alloc::vec![0], zero.clone())], b(3)).unwrap(),
            zero
        );

        let lt = Relation::from_fn(b(3), 2, |t| t[0] < t[1]).unwrap();
        assert_eq!(
            ssup(&[0, 1], &[(alloc::vec![0, 1], lt.clone())], b(3)).unwrap(),
            lt
        );

        assert!(ssup(&[0], &[(alloc::vec![0, 1], zero)], b(3)).is_err());
        assert!(matches!(
            ssup(&[0], &[], b(9)),
            Err(Error::BaseTooLarge { .. })
        ));
    }

    #[test]
    fn ssup_is_invariant_under_aut_of_constraints() {
        let r = Relation::from_tuples(b(4), 2, [[0, 1], [1, 0], [2, 3]]).unwrap();
        let s = ssup(&[0, 2], &[(alloc::vec![0, 1], r.clone())], b(4)).unwrap();
        let group = aut_of_relations(b(4), &[r]).unwrap();
        for g in group.elements().unwrap() {
            assert!(s.is_invariant_under(g));
        }
    }

    #[test]
    fn invariant_op_examples() {
        let base = b(3);
        let lt = Relation::from_fn(base, 2, |t| t[0] < t[1]).unwrap();
        let sigma = Relation::from_tuples(base, 1, [[0]]).unwrap();
        assert_eq!(
            invariant_image_op(&[lt.clone()], &sigma, &[lt.clone()]).unwrap(),
            sigma
        );

        let not_an_image = Relation::from_tuples(base, 2, [[0, 1]]).unwrap();
        assert!(invariant_image_op(&[lt.clone()], &sigma, &[not_an_image])
            .unwrap()
            .is_empty());

        let g0 = Perm::from_cycles(3, &[&[0, 2]]).unwrap();
        let moved = lt.permuted(&g0).unwrap();
        assert_eq!(
            invariant_image_op(&[lt.clone()], &sigma, &[moved]).unwrap(),
            sigma.permuted(&g0).unwrap()
        );

        let sym_targets = Relation::diagonal(base);
        let out = invariant_image_op(&[sym_targets.clone()], &sigma, &[sym_targets]).unwrap();
        assert!(out.is_full());
        assert!(invariant_image_op(&[lt.clone()], &sigma, &[]).is_err());
    }

    #[test]
    fn loc_o_examples() {
        let base = b(3);
        assert_eq!(
            loc_o(&[Perm::identity(3)], base, 3).unwrap(),
            alloc::vec![Perm::identity(3)]
        );
        let sym: Vec<Perm> = all_permutations(3).collect();
        assert_eq!(loc_o(&sym, base, 3).unwrap(), sym);
        let c3 = generate_group(base, &[Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        assert_eq!(
            loc_o(c3.elements().unwrap(), base, 3).unwrap(),
            c3.elements().unwrap()
        );
        // Single points cannot tell the 3-cycle group from Sym(3).
        assert_eq!(loc_o(c3.elements().unwrap(), base, 1).unwrap(), sym);
        assert_eq!(
            loc_o(PermGroup::trivial(base).elements().unwrap(), base, 2)
                .unwrap()
                .len(),
            1
        );
    }
}
