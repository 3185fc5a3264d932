use alloc::vec::Vec;

use super::group::Colouring;
use super::relset::RelationSet;
use crate::error::{Error, Result};
use crate::relation::{BaseSet, Relation};

/// Encodes a complement-closed family `Q` of `m`-ary relations as one `2m`-ary relation with
/// the same automorphisms: the blocks `Gamma_Q(a)` are ordered by least member and the result
/// holds `(a, b)` iff the block of `a` comes no later than the block of `b`.
pub fn encode_single(q: &[Relation], base: BaseSet, arity: usize) -> Result<Relation> {
    if arity == 0 {
        return Err(Error::ZeroArity);
    }
    for r in q {
        if r.base() != base {
            return Err(Error::BaseMismatch {
                expected: base.size(),
                found: r.base().size(),
            });
        }
        if r.arity() != arity {
            return Err(Error::MixedArities);
        }
        let c = r.complement();
        if !q.contains(&c) {
            return Err(Error::NotComplementClosed(arity));
        }
    }
    let blocks = Colouring::of_relations(base, arity, q)?;
    let len = blocks.colours.len();
    let block = &blocks.colours;
    let mut out = Relation::empty(base, 2 * arity)?;
    for a in 0..len {
        for b in 0..len {
            if block[a] <= block[b] {
                out.set_index(a * len + b);
            }
        }
    }
    Ok(out)
}

/// One relation of arity `2m` per `m <= m_max`, encoding the complement closure of `R^(m)`;
/// the result has the same automorphism group as `R` when `R` has no arity above `m_max`.
pub fn reduce_generators(rels: &RelationSet, m_max: usize) -> Result<RelationSet> {
    if let Some(top) = rels.max_arity().filter(|&top| top > m_max) {
        return Err(Error::Invalid(alloc::format!(
            "relation of arity {top} exceeds m_max = {m_max}"
        )));
    }
    let closed = rels.complement_closure();
    let mut out = RelationSet::new(rels.base());
    for m in 1..=m_max {
        let q: Vec<Relation> = closed.at(m).cloned().collect();
        out.insert(encode_single(&q, rels.base(), m)?)?;
    }
    Ok(out)
}
