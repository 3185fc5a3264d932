//! First-order formulas: syntax, evaluation, clauses of the theory signature and
//! elimination of the existential quantifier in front of a clause.

mod clause;
mod eval;
mod formula;
mod parse;
mod qe;

pub use clause::{
    clause_count, clauses, enumerate_clauses, enumerate_clauses_with, literal_base_count,
    literal_bases, Clause, ClauseCode, ClauseCodes, Literal,
};
pub use eval::{eval_logical_op, Interpretation, RelationArgs};
pub use formula::{Display, Formula, Signature, Var};
pub use parse::parse_formula;
pub use qe::{qe_exists_clause, VarEquivalence};
