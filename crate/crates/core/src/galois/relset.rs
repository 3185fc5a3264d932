use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::relation::{BaseSet, Relation};

/// A set of relations on one base, grouped by arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    base: BaseSet,
    by_arity: BTreeMap<usize, BTreeSet<Relation>>,
}

impl RelationSet {
    pub fn new(base: BaseSet) -> Self {
        RelationSet {
            base,
            by_arity: BTreeMap::new(),
        }
    }

    pub fn from_relations<'a>(
        base: BaseSet,
        rels: impl IntoIterator<Item = &'a Relation>,
    ) -> Result<Self> {
        let mut set = RelationSet::new(base);
        for r in rels {
            set.insert(r.clone())?;
        }
        Ok(set)
    }

    /// Adds `r`; returns false if it was already present.
    pub fn insert(&mut self, r: Relation) -> Result<bool> {
        if r.base() != self.base {
            return Err(Error::BaseMismatch {
                expected: self.base.size(),
                found: r.base().size(),
            });
        }
        Ok(self.by_arity.entry(r.arity()).or_default().insert(r))
    }

    pub fn base(&self) -> BaseSet {
        self.base
    }

    /// `R^(m)`; empty if no relation of that arity is present.
    pub fn at(&self, arity: usize) -> impl Iterator<Item = &Relation> + '_ {
        self.by_arity.get(&arity).into_iter().flatten()
    }

    pub fn count_at(&self, arity: usize) -> usize {
        self.by_arity.get(&arity).map_or(0, BTreeSet::len)
    }

    /// Arities with at least one relation, ascending.
    pub fn arities(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_arity
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(&m, _)| m)
    }

    pub fn max_arity(&self) -> Option<usize> {
        self.arities().last()
    }

    pub fn len(&self) -> usize {
        self.by_arity.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, r: &Relation) -> bool {
        self.by_arity.get(&r.arity()).is_some_and(|s| s.contains(r))
    }

    /// All relations, by arity and then in relation order.
    pub fn iter(&self) -> impl Iterator<Item = &Relation> + '_ {
        self.by_arity.values().flatten()
    }

    pub fn is_subset(&self, other: &RelationSet) -> bool {
        self.iter().all(|r| other.contains(r))
    }

    /// The relations of arity at most `m_max`.
    pub fn restrict(&self, m_max: usize) -> RelationSet {
        RelationSet {
            base: self.base,
            by_arity: self
                .by_arity
                .range(1..=m_max)
                .map(|(&m, s)| (m, s.clone()))
                .collect(),
        }
    }

    /// Adds the complement of every member.
    pub fn complement_closure(&self) -> RelationSet {
        let mut out = self.clone();
        for r in self.iter() {
            out.by_arity
                .entry(r.arity())
                .or_default()
                .insert(r.complement());
        }
        out
    }

    pub fn is_complement_closed_at(&self, arity: usize) -> bool {
        self.at(arity).all(|r| self.contains(&r.complement()))
    }

    /// Contains `A^m` and is closed under binary intersection at arity `m`.
    pub fn check_intersection_closed_at(&self, arity: usize) -> Result<()> {
        if !self.contains(&Relation::full(self.base, arity)?) {
            return Err(Error::MissingFullRelation(arity));
        }
        let members: Vec<&Relation> = self.at(arity).collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if !self.contains(&a.intersect(b)?) {
                    return Err(Error::NotIntersectionClosed(arity));
                }
            }
        }
        Ok(())
    }
}

impl RelationSet {
    /// Checks that `R^(m)` contains `A^m` and is closed under complement and intersection.
    /// Such a family is exactly the set of unions of its `~` classes, which is checked by counting.
    pub fn check_boolean_at(&self, arity: usize) -> Result<()> {
        if !self.contains(&Relation::full(self.base, arity)?) {
            return Err(Error::MissingFullRelation(arity));
        }
        if !self.is_complement_closed_at(arity) {
            return Err(Error::NotComplementClosed(arity));
        }
        let classes =
            super::group::Colouring::of_relations(self.base, arity, self.at(arity))?.class_count();
        let expected = u32::try_from(classes)
            .ok()
            .and_then(|k| 1usize.checked_shl(k));
        if expected != Some(self.count_at(arity)) {
            return Err(Error::NotIntersectionClosed(arity));
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a RelationSet {
    type Item = &'a Relation;
    type IntoIter =
        core::iter::Flatten<alloc::collections::btree_map::Values<'a, usize, BTreeSet<Relation>>>;

    fn into_iter(self) -> Self::IntoIter {
        self.by_arity.values().flatten()
    }
}
