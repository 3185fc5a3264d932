use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::structure::Structure;

/// Variable index: `x0`, `x1`, ...
pub type Var = usize;

/// First-order formulas over a relational signature (predicates referenced by slot).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom { pred: usize, args: Vec<Var> },
    Eq(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: usize, args: impl Into<Vec<Var>>) -> Self {
        Formula::Atom {
            pred,
            args: args.into(),
        }
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: Var, body: Formula) -> Self {
        Formula::Exists(v, Box::new(body))
    }

    pub fn forall(v: Var, body: Formula) -> Self {
        Formula::Forall(v, Box::new(body))
    }

    /// Left-nested conjunction; `True` for no conjuncts.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `False` for no disjuncts.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut note = |v: Var, bound: &Vec<Var>| {
            if !bound.contains(&v) {
                out.insert(v);
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom { args, .. } => args.iter().for_each(|&v| note(v, bound)),
            Formula::Eq(a, b) => {
                note(*a, bound);
                note(*b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Largest variable index occurring anywhere, bound or free.
    pub fn max_var(&self) -> Option<Var> {
        match self {
            Formula::True | Formula::False => None,
            Formula::Atom { args, .. } => args.iter().copied().max(),
            Formula::Eq(a, b) => Some(*a.max(b)),
            Formula::Not(f) => f.max_var(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.max_var().max(b.max_var()),
            Formula::Exists(v, f) | Formula::Forall(v, f) => Some(*v).max(f.max_var()),
        }
    }

    /// Visits every predicate atom.
    pub fn atoms(&self) -> Vec<(usize, &[Var])> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |p, a| out.push((p, a)));
        out
    }

    fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(usize, &'a [Var])) {
        match self {
            Formula::Atom { pred, args } => f(*pred, args),
            Formula::True | Formula::False | Formula::Eq(..) => {}
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit_atoms(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => false,
            Formula::True | Formula::False | Formula::Atom { .. } | Formula::Eq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> Display<'a> {
        Display { formula: self, sig }
    }
}

/// Predicate names and arities; a formula's `pred` is an index into this list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    preds: Vec<(String, usize)>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, arity: usize) -> Self {
        self.preds.push((name.to_string(), arity));
        self
    }

    /// `r1, ..., r_max` with `r_m` of arity `m`, so slot `m - 1` is the `m`-ary symbol.
    pub fn theory(max_arity: usize) -> Self {
        Signature {
            preds: (1..=max_arity)
                .map(|m| (alloc::format!("r{m}"), m))
                .collect(),
        }
    }

    pub fn of_structure(s: &Structure) -> Self {
        Signature {
            preds: s.signature().map(|(n, a)| (n.to_string(), a)).collect(),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<(usize, usize)> {
        self.preds
            .iter()
            .position(|(n, _)| n == name)
            .map(|i| (i, self.preds[i].1))
    }

    pub fn name(&self, slot: usize) -> Option<&str> {
        self.preds.get(slot).map(|(n, _)| n.as_str())
    }

    pub fn arity(&self, slot: usize) -> Option<usize> {
        self.preds.get(slot).map(|&(_, a)| a)
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }
}

/// Prints a formula in the grammar accepted by [`crate::logic::parse_formula`].
pub struct Display<'a> {
    formula: &'a Formula,
    sig: &'a Signature,
}

// Binding strength: <-> (1) < -> (2) < | (3) < & (4) < prefix and atoms (5).
fn write_formula(
    f: &mut fmt::Formatter<'_>,
    phi: &Formula,
    sig: &Signature,
    ctx: u8,
) -> fmt::Result {
    if precedence(phi) < ctx {
        f.write_str("(")?;
        write_formula(f, phi, sig, 0)?;
        return f.write_str(")");
    }
    match phi {
        Formula::True => f.write_str("true"),
        Formula::False => f.write_str("false"),
        Formula::Atom { pred, args } => {
            match sig.name(*pred) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "?{pred}")?,
            }
            f.write_str("(")?;
            for (i, v) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "x{v}")?;
            }
            f.write_str(")")
        }
        Formula::Eq(a, b) => write!(f, "x{a} = x{b}"),
        Formula::Not(g) => {
            f.write_str("!")?;
            if let Formula::Eq(..) = **g {
                f.write_str("(")?;
                write_formula(f, g, sig, 0)?;
                f.write_str(")")
            } else {
                write_formula(f, g, sig, 5)
            }
        }
        Formula::Exists(v, g) => {
            write!(f, "E x{v}. ")?;
            write_formula(f, g, sig, 5)
        }
        Formula::Forall(v, g) => {
            write!(f, "A x{v}. ")?;
            write_formula(f, g, sig, 5)
        }
        Formula::And(a, b) => binary(f, a, " & ", b, sig, 4, 5),
        Formula::Or(a, b) => binary(f, a, " | ", b, sig, 3, 4),
        Formula::Implies(a, b) => binary(f, a, " -> ", b, sig, 3, 2),
        Formula::Iff(a, b) => binary(f, a, " <-> ", b, sig, 1, 2),
    }
}

fn binary(
    f: &mut fmt::Formatter<'_>,
    a: &Formula,
    op: &str,
    b: &Formula,
    sig: &Signature,
    left_ctx: u8,
    right_ctx: u8,
) -> fmt::Result {
    write_formula(f, a, sig, left_ctx)?;
    f.write_str(op)?;
    write_formula(f, b, sig, right_ctx)
}

fn precedence(phi: &Formula) -> u8 {
    match phi {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        _ => 5,
    }
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self.formula, self.sig, 0)
    }
}
