use alloc::string::String;
use alloc::vec::Vec;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("base set must contain at least one element")]
    EmptyBase,
    #[error("relations of arity 0 are not supported")]
    ZeroArity,
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("base size mismatch: expected {expected}, found {found}")]
    BaseMismatch { expected: usize, found: usize },
    #[error("element {element} is outside the base set of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("not a bijection of the base set: {0:?}")]
    NotABijection(Vec<usize>),
    #[error("partial map is not injective at {0}")]
    NotInjective(usize),
    #[error("relations of mixed arities in an operation that needs one arity")]
    MixedArities,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate slot {0} has no relation bound to it")]
    UnboundPredicate(usize),
    #[error("variable x{0} is free but not bound to an output coordinate")]
    FreeVariable(usize),
    #[error("invalid clause: {0}")]
    InvalidClause(String),
    #[error("closure exceeds the cap of {cap} relations at arity {arity}")]
    ClosureCap { arity: usize, cap: usize },
    #[error("relation set is not closed under complement at arity {0}")]
    NotComplementClosed(usize),
    #[error("relation set is not closed under intersection at arity {0}")]
    NotIntersectionClosed(usize),
    #[error("relation set lacks the full relation at arity {0}")]
    MissingFullRelation(usize),
    #[error("base of size {size} is too large for full enumeration of Sym(A) (max {max})")]
    BaseTooLarge { size: usize, max: usize },
    #[error("map is not a partial automorphism: tuple {0:?} is not preserved")]
    NotPartialAutomorphism(Vec<usize>),
    #[error("weight map domain must be exactly the new elements: {0}")]
    WeightDomain(String),
    #[error("structure grew beyond the element cap of {0}")]
    ElementCap(usize),
    #[error("structure violates T1 at {0:?}")]
    T1Violation(Vec<usize>),
    #[error("conflicting truth values committed for {0:?}")]
    Conflict(Vec<usize>),
    #[error("construction postcondition failed: {0}")]
    Postcondition(String),
    #[error("x and y must be distinct elements")]
    SameElement,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
