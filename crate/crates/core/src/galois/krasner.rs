//! The closure of a relation set under all logical operations.
//!
//! Each arity `m` of the closure is a finite Boolean algebra, so it is determined by its
//! atoms, a partition of `A^m`. The partitions of all arities up to a working arity are
//! refined together until every generating operation maps unions of atoms to unions of
//! atoms: cylindrification `r x A`, projection of the last coordinate, swapping adjacent
//! coordinates and identifying the last two coordinates, starting from the inputs and the
//! equality relation.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::relset::RelationSet;
use super::sinv::{unions_of_atoms, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::relation::{decode_tuple, encode_tuple, Relation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KaOptions {
    /// Most relations materialized per arity.
    pub cap: usize,
    /// Largest arity of intermediate relations; `None` picks `max(N, max input arity) + m_max`.
    pub work_arity: Option<usize>,
    /// Most tuples allowed at the working arity.
    pub max_tuples: usize,
}

impl Default for KaOptions {
    fn default() -> Self {
        KaOptions {
            cap: DEFAULT_CAP,
            work_arity: None,
            max_tuples: 1 << 22,
        }
    }
}

/// `<Q>_KA` up to arity `m_max`, with the default options.
pub fn ka_closure(q: &RelationSet, m_max: usize) -> Result<RelationSet> {
    ka_closure_with(q, m_max, KaOptions::default())
}

pub fn ka_closure_with(q: &RelationSet, m_max: usize, opts: KaOptions) -> Result<RelationSet> {
    let atoms = ka_atoms_with(q, m_max, opts)?;
    let mut out = RelationSet::new(q.base());
    for (m, atoms) in atoms {
        for r in unions_of_atoms(&atoms, q.base(), m, opts.cap)? {
            out.insert(r)?;
        }
    }
    Ok(out)
}

/// The atoms of `<Q>_KA` at each arity `1..=m_max`, ordered by least member.
pub fn ka_atoms(q: &RelationSet, m_max: usize) -> Result<BTreeMap<usize, Vec<Relation>>> {
    ka_atoms_with(q, m_max, KaOptions::default())
}

pub fn ka_atoms_with(
    q: &RelationSet,
    m_max: usize,
    opts: KaOptions,
) -> Result<BTreeMap<usize, Vec<Relation>>> {
    if m_max == 0 {
        return Err(Error::ZeroArity);
    }
    let base = q.base();
    let n = base.size();
    let top = opts
        .work_arity
        .unwrap_or_else(|| n.max(q.max_arity().unwrap_or(0)) + m_max)
        .max(m_max)
        .max(2);
    if let Some(r) = q.max_arity().filter(|&r| r > top) {
        return Err(Error::Invalid(alloc::format!(
            "input arity {r} exceeds the working arity {top}"
        )));
    }
    if base.tuple_count(top).map_or(true, |c| c > opts.max_tuples) {
        return Err(Error::Invalid(alloc::format!(
            "{n}^{top} tuples exceed the working limit of {}",
            opts.max_tuples
        )));
    }

    // colours[m - 1][index of t in A^m]
    let mut colours: Vec<Vec<u32>> = Vec::with_capacity(top);
    for m in 1..=top {
        let len = base.tuple_count(m)?;
        let mut initial: Vec<Vec<bool>> = Vec::with_capacity(len);
        let mut t = alloc::vec![0; m];
        for idx in 0..len {
            decode_tuple(n, idx, &mut t);
            let mut sig: Vec<bool> = q.at(m).map(|r| r.contains_index(idx)).collect();
            if m == 2 {
                sig.push(t[0] == t[1]);
            }
            initial.push(sig);
        }
        colours.push(renumber(initial));
    }

    let mut counts: Vec<usize> = colours.iter().map(|c| class_count(c)).collect();
    loop {
        for m in 1..=top {
            let refined = refine(n, top, m, &colours);
            colours[m - 1] = refined;
        }
        let new_counts: Vec<usize> = colours.iter().map(|c| class_count(c)).collect();
        if new_counts == counts {
            break;
        }
        counts = new_counts;
    }

    let mut out = BTreeMap::new();
    for m in 1..=m_max {
        let c = &colours[m - 1];
        let mut members: Vec<Vec<usize>> = alloc::vec![Vec::new(); class_count(c)];
        for (idx, &k) in c.iter().enumerate() {
            members[k as usize].push(idx);
        }
        out.insert(
            m,
            members
                .into_iter()
                .map(|ix| Relation::from_index_set(base, m, ix))
                .collect(),
        );
    }
    Ok(out)
}

fn class_count(c: &[u32]) -> usize {
    c.iter().max().map_or(0, |&k| k as usize + 1)
}

/// Numbers distinct keys by first occurrence.
fn renumber<K: Ord>(keys: Vec<K>) -> Vec<u32> {
    let mut ids: BTreeMap<K, u32> = BTreeMap::new();
    keys.into_iter()
        .map(|k| {
            let next = ids.len() as u32;
            *ids.entry(k).or_insert(next)
        })
        .collect()
}

/// One refinement step at arity `m`: two tuples stay together only if they agree on
/// their current colour and on the colours reached through every generating operation.
fn refine(n: usize, top: usize, m: usize, colours: &[Vec<u32>]) -> Vec<u32> {
    let own = &colours[m - 1];
    let len = own.len();
    let mut t = alloc::vec![0; m];
    let mut u = alloc::vec![0; m + 1];
    let mut keys: Vec<Vec<u32>> = Vec::with_capacity(len);
    for idx in 0..len {
        decode_tuple(n, idx, &mut t);
        let mut key = alloc::vec![own[idx]];
        if m > 1 {
            key.push(colours[m - 2][encode_tuple(n, &t[..m - 1])]);
        }
        for i in 0..m.saturating_sub(1) {
            t.swap(i, i + 1);
            key.push(own[encode_tuple(n, &t)]);
            t.swap(i, i + 1);
        }
        if m < top {
            let above = &colours[m];
            u[..m].copy_from_slice(&t);
            u[m] = t[m - 1];
            key.push(above[encode_tuple(n, &u)]);
            let mut ext: Vec<u32> = (0..n)
                .map(|a| {
                    u[m] = a;
                    above[encode_tuple(n, &u)]
                })
                .collect();
            ext.sort_unstable();
            ext.dedup();
            key.push(u32::MAX);
            key.extend(ext);
        }
        keys.push(key);
    }
    renumber(keys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::galois_closure;
    use crate::relation::BaseSet;

    fn b(n: usize) -> BaseSet {
        BaseSet::new(n).unwrap()
    }

    #[test]
    fn equality_alone() {
        let closed = ka_closure(&RelationSet::new(b(2)), 2).unwrap();
        let delta = Relation::diagonal(b(2));
        let expected: Vec<Relation> = alloc::vec![
            Relation::empty(b(2), 2).unwrap(),
            delta.clone(),
            delta.complement(),
            Relation::full(b(2), 2).unwrap(),
        ];
        assert_eq!(closed.count_at(2), 4);
        assert!(expected.iter().all(|r| closed.contains(r)));
        assert_eq!(closed.count_at(1), 2);
    }

    #[test]
    fn projection_separates_points() {
        let lt = Relation::from_fn(b(2), 2, |t| t[0] < t[1]).unwrap();
        let closed = ka_closure(&RelationSet::from_relations(b(2), [&lt]).unwrap(), 1).unwrap();
        assert_eq!(closed.count_at(1), 4);
        assert!(closed.contains(&Relation::from_tuples(b(2), 1, [[0]]).unwrap()));
    }

    #[test]
    fn full_relation_adds_nothing() {
        let full = Relation::full(b(2), 2).unwrap();
        let with_full =
            ka_closure(&RelationSet::from_relations(b(2), [&full]).unwrap(), 2).unwrap();
        assert_eq!(with_full, ka_closure(&RelationSet::new(b(2)), 2).unwrap());
    }

    #[test]
    fn path_needs_more_than_two_variables() {
        let path = Relation::from_fn(b(4), 2, |t| t[0].abs_diff(t[1]) == 1).unwrap();
        let q = RelationSet::from_relations(b(4), [&path]).unwrap();
        assert_eq!(ka_closure(&q, 2).unwrap(), galois_closure(&q, 2).unwrap());
        let narrow = KaOptions {
            work_arity: Some(2),
            ..KaOptions::default()
        };
        assert_eq!(ka_atoms_with(&q, 2, narrow).unwrap()[&1].len(), 1);
    }

    #[test]
    fn working_limits() {
        let q = RelationSet::new(b(4));
        let tiny = KaOptions {
            max_tuples: 10,
            ..KaOptions::default()
        };
        assert!(ka_atoms_with(&q, 1, tiny).is_err());
        let r3 = Relation::full(b(2), 3).unwrap();
        let q = RelationSet::from_relations(b(2), [&r3]).unwrap();
        assert!(ka_atoms_with(
            &q,
            1,
            KaOptions {
                work_arity: Some(2),
                ..KaOptions::default()
            }
        )
        .is_err());
    }
}
