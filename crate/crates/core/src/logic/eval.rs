use alloc::vec::Vec;

use super::formula::{Formula, Var};
use crate::error::{Error, Result};
use crate::relation::{BaseSet, Relation};
use crate::structure::Structure;

/// Anything that can answer predicate queries over a finite universe `{0, ..., universe-1}`.
pub trait Interpretation {
    fn universe(&self) -> usize;

    /// Truth value of predicate slot `pred` at `args`.
    fn holds(&self, pred: usize, args: &[usize]) -> Result<bool>;
}

/// A list of relations bound to predicate slots `0, 1, ...`.
#[derive(Debug, Clone, Copy)]
pub struct RelationArgs<'a> {
    base: BaseSet,
    relations: &'a [Relation],
}

impl<'a> RelationArgs<'a> {
    pub fn new(base: BaseSet, relations: &'a [Relation]) -> Result<Self> {
        for r in relations {
            if r.base() != base {
                return Err(Error::BaseMismatch {
                    expected: base.size(),
                    found: r.base().size(),
                });
            }
        }
        Ok(RelationArgs { base, relations })
    }
}

impl Interpretation for RelationArgs<'_> {
    fn universe(&self) -> usize {
        self.base.size()
    }

    fn holds(&self, pred: usize, args: &[usize]) -> Result<bool> {
        let r = self
            .relations
            .get(pred)
            .ok_or(Error::UnboundPredicate(pred))?;
        if r.arity() != args.len() {
            return Err(Error::ArityMismatch {
                expected: r.arity(),
                found: args.len(),
            });
        }
        Ok(r.contains(args))
    }
}

impl Interpretation for Structure {
    fn universe(&self) -> usize {
        self.base().size()
    }

    fn holds(&self, pred: usize, args: &[usize]) -> Result<bool> {
        RelationArgs {
            base: self.base(),
            relations: self.relations(),
        }
        .holds(pred, args)
    }
}

impl Formula {
    /// Evaluates under `assignment`, where `assignment[v]` is the value of `x_v`.
    /// The slice must cover every variable of the formula, bound ones included.
    pub fn eval<I: Interpretation + ?Sized>(
        &self,
        interp: &I,
        assignment: &mut [usize],
    ) -> Result<bool> {
        let get = |v: Var, a: &[usize]| a.get(v).copied().ok_or(Error::FreeVariable(v));
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom { pred, args } => {
                let vals = args
                    .iter()
                    .map(|&v| get(v, assignment))
                    .collect::<Result<Vec<_>>>()?;
                interp.holds(*pred, &vals)?
            }
            Formula::Eq(a, b) => get(*a, assignment)? == get(*b, assignment)?,
            Formula::Not(f) => !f.eval(interp, assignment)?,
            Formula::And(a, b) => a.eval(interp, assignment)? && b.eval(interp, assignment)?,
            Formula::Or(a, b) => a.eval(interp, assignment)? || b.eval(interp, assignment)?,
            Formula::Implies(a, b) => !a.eval(interp, assignment)? || b.eval(interp, assignment)?,
            Formula::Iff(a, b) => a.eval(interp, assignment)? == b.eval(interp, assignment)?,
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                let want = matches!(self, Formula::Exists(..));
                let saved = get(*v, assignment)?;
                let mut result = !want;
                for x in 0..interp.universe() {
                    assignment[*v] = x;
                    if f.eval(interp, assignment)? == want {
                        result = want;
                        break;
                    }
                }
                assignment[*v] = saved;
                result
            }
        })
    }

    /// Evaluates with `x_1, ..., x_m` bound to `values` in order; `x_0` and all
    /// other variables start at 0, which only matters if they are bound by a quantifier.
    pub fn holds_at<I: Interpretation + ?Sized>(
        &self,
        interp: &I,
        values: &[usize],
    ) -> Result<bool> {
        let width = self.max_var().map_or(0, |v| v + 1).max(values.len() + 1);
        let mut assignment = alloc::vec![0; width];
        assignment[1..=values.len()].copy_from_slice(values);
        self.eval(interp, &mut assignment)
    }
}

/// The logical operation `L_phi`: the `m`-ary relation of tuples `(a_1, ..., a_m)`
/// satisfying `phi` with `x_i := a_i` and predicate slot `i` bound to `args[i]`.
pub fn eval_logical_op(
    phi: &Formula,
    args: &[Relation],
    base: BaseSet,
    m: usize,
) -> Result<Relation> {
    if m == 0 {
        return Err(Error::ZeroArity);
    }
    if let Some(&v) = phi.free_vars().iter().find(|&&v| v == 0 || v > m) {
        return Err(Error::FreeVariable(v));
    }
    let interp = RelationArgs::new(base, args)?;
    for (pred, vars) in phi.atoms() {
        let r = args.get(pred).ok_or(Error::UnboundPredicate(pred))?;
        if r.arity() != vars.len() {
            return Err(Error::ArityMismatch {
                expected: r.arity(),
                found: vars.len(),
            });
        }
    }
    let width = phi.max_var().map_or(0, |v| v + 1).max(m + 1);
    let mut assignment = alloc::vec![0; width];
    let mut failure = None;
    let rel = Relation::from_fn(base, m, |t| {
        assignment[1..=m].copy_from_slice(t);
        match phi.eval(&interp, &mut assignment) {
            Ok(b) => b,
            Err(e) => {
                failure.get_or_insert(e);
                false
            }
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(rel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Signature};
    use crate::perm::Perm;
    use proptest::prelude::*;

    fn b(n: usize) -> BaseSet {
        BaseSet::new(n).unwrap()
    }

    #[test]
    fn intersection_as_logical_op() {
        let lt = Relation::from_fn(b(3), 2, |t| t[0] < t[1]).unwrap();
        let le = Relation::from_fn(b(3), 2, |t| t[0] <= t[1]).unwrap();
        let sig = Signature::new().with("P1", 2).with("P2", 2);
        let phi = parse_formula("P1(x1,x2) & P2(x1,x2)", &sig).unwrap();
        let out = eval_logical_op(&phi, &[lt.clone(), le.clone()], b(3), 2).unwrap();
        assert_eq!(out, lt.intersect(&le).unwrap());
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn contradiction_is_empty() {
        let phi = parse_formula("!(x1 = x1)", &Signature::new()).unwrap();
        assert!(eval_logical_op(&phi, &[], b(2), 1).unwrap().is_empty());
    }

    #[test]
    fn projection_by_quantifier() {
        let lt = Relation::from_fn(b(3), 2, |t| t[0] < t[1]).unwrap();
        let phi = parse_formula("E x2. P1(x1,x2)", &Signature::new().with("P1", 2)).unwrap();
        let out = eval_logical_op(&phi, &[lt], b(3), 1).unwrap();
        assert_eq!(out, Relation::from_tuples(b(3), 1, [[0], [1]]).unwrap());
    }

    #[test]
    fn rejects_bad_bindings() {
        let sig = Signature::new().with("P1", 2);
        let phi = parse_formula("P1(x1,x3)", &sig).unwrap();
        let r = Relation::full(b(2), 2).unwrap();
        assert_eq!(
            eval_logical_op(&phi, &[r.clone()], b(2), 2),
            Err(Error::FreeVariable(3))
        );
        assert_eq!(
            eval_logical_op(&phi, &[], b(2), 3),
            Err(Error::UnboundPredicate(0))
        );
        let unary = Relation::full(b(2), 1).unwrap();
        assert!(matches!(
            eval_logical_op(&phi, &[unary], b(2), 3),
            Err(Error::ArityMismatch { .. })
        ));
        let x0 = parse_formula("x0 = x1", &sig).unwrap();
        assert_eq!(
            eval_logical_op(&x0, &[r], b(2), 1),
            Err(Error::FreeVariable(0))
        );
    }

    fn arb_formula(depth: u32) -> BoxedStrategy<Formula> {
        let leaf = prop_oneof![
            (0usize..2, prop::collection::vec(1usize..4, 2)).prop_map(|(p, a)| {
                if p == 0 {
                    Formula::atom(0, [a[0]])
                } else {
                    Formula::atom(1, a)
                }
            }),
            (1usize..4, 1usize..4).prop_map(|(a, b)| Formula::Eq(a, b)),
        ];
        leaf.prop_recursive(depth, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Formula::Implies(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Iff(a.into(), b.into())),
                (1usize..4, inner.clone()).prop_map(|(v, f)| Formula::exists(v, f)),
                (1usize..4, inner).prop_map(|(v, f)| Formula::forall(v, f)),
            ]
        })
        .boxed()
    }

    proptest! {
        #[test]
        fn logical_ops_commute_with_permutations(
            phi in arb_formula(4),
            n in 1usize..5,
            seed_bits in prop::collection::vec(any::<bool>(), 20),
            perm_seed in any::<u64>(),
        ) {
            let base = b(n);
            let u = Relation::from_fn(base, 1, |t| seed_bits[t[0]]).unwrap();
            let r = Relation::from_fn(base, 2, |t| seed_bits[4 + t[0] * 4 + t[1]]).unwrap();
            let mut images: Vec<usize> = (0..n).collect();
            images.rotate_left((perm_seed as usize) % n);
            if perm_seed & 1 == 1 && n > 1 {
                images.swap(0, 1);
            }
            let g = Perm::new(images).unwrap();
            let args = [u.clone(), r.clone()];
            let moved = [u.permuted(&g).unwrap(), r.permuted(&g).unwrap()];
            let lhs = eval_logical_op(&phi, &moved, base, 3).unwrap();
            let rhs = eval_logical_op(&phi, &args, base, 3).unwrap().permuted(&g).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn display_parse_round_trip(phi in arb_formula(4)) {
            let sig = Signature::new().with("P", 1).with("Q", 2);
            let text = alloc::format!("{}", phi.display(&sig));
            prop_assert_eq!(parse_formula(&text, &sig).unwrap(), phi);
        }
    }
}
