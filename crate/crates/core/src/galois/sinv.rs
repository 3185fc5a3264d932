use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::aut::aut_of_colourings;
use super::group::{Colouring, PermGroup};
use super::relset::RelationSet;
use crate::error::{Error, Result};
use crate::relation::{encode_tuple, intersect_all, BaseSet, Relation};

/// Default bound on the number of relations materialized per arity.
pub const DEFAULT_CAP: usize = 1 << 16;

/// All relations built as unions of the given atoms (a partition of `A^m`), or an error
/// if there would be more than `cap` of them.
pub fn unions_of_atoms(
    atoms: &[Relation],
    base: BaseSet,
    arity: usize,
    cap: usize,
) -> Result<BTreeSet<Relation>> {
    let too_many = Error::ClosureCap { arity, cap };
    let k = atoms.len();
    if k >= usize::BITS as usize || (1usize << k) > cap {
        return Err(too_many);
    }
    let empty = Relation::empty(base, arity)?;
    let mut out = BTreeSet::new();
    let mut layer: Vec<Relation> = alloc::vec![empty];
    // Unions of the first i atoms, extended one atom at a time.
    for atom in atoms {
        let extended: Vec<Relation> = layer
            .iter()
            .map(|r| r.union(atom).expect("same shape"))
            .collect();
        layer.extend(extended);
    }
    out.extend(layer);
    Ok(out)
}

/// `sInv G` up to a maximal arity: the orbits of `G` on each `A^m` and, when it fits
/// under the cap, the Boolean lattice of their unions.
#[derive(Debug, Clone)]
pub struct Sinv {
    base: BaseSet,
    max_arity: usize,
    colourings: Vec<Colouring>,
    orbits: Vec<Vec<Relation>>,
    lattices: Vec<Option<BTreeSet<Relation>>>,
    cap: usize,
}

pub fn sinv(g: &PermGroup, max_arity: usize) -> Result<Sinv> {
    sinv_with_cap(g, max_arity, DEFAULT_CAP)
}

pub fn sinv_with_cap(g: &PermGroup, max_arity: usize, cap: usize) -> Result<Sinv> {
    if max_arity == 0 {
        return Err(Error::ZeroArity);
    }
    let base = g.base();
    let mut colourings = Vec::new();
    let mut orbits = Vec::new();
    let mut lattices = Vec::new();
    for m in 1..=max_arity {
        let c = Colouring::orbits(base, m, g.generators())?;
        let atoms = c.classes(base);
        lattices.push(unions_of_atoms(&atoms, base, m, cap).ok());
        orbits.push(atoms);
        colourings.push(c);
    }
    Ok(Sinv {
        base,
        max_arity,
        colourings,
        orbits,
        lattices,
        cap,
    })
}

impl Sinv {
    pub fn base(&self) -> BaseSet {
        self.base
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    /// Orbits on `A^m`, ordered by least member.
    pub fn orbits(&self, arity: usize) -> &[Relation] {
        arity
            .checked_sub(1)
            .and_then(|i| self.orbits.get(i))
            .map_or(&[], Vec::as_slice)
    }

    /// The invariant relations of arity `m`, if materialized.
    pub fn relations(&self, arity: usize) -> Option<&BTreeSet<Relation>> {
        self.lattices.get(arity.checked_sub(1)?)?.as_ref()
    }

    /// Number of invariant relations of arity `m`, `2^(orbit count)`, if it fits in a `u128`.
    pub fn count(&self, arity: usize) -> Option<u128> {
        1u128.checked_shl(self.orbits(arity).len().try_into().ok()?)
    }

    /// True iff `r` is a union of orbits.
    pub fn contains(&self, r: &Relation) -> bool {
        r.base() == self.base
            && r.arity() <= self.max_arity
            && self
                .orbits(r.arity())
                .iter()
                .all(|o| o.is_subset(r) || o.is_disjoint(r))
    }

    /// `Gamma(a)`: the orbit of `a`, the least invariant relation containing it.
    pub fn gamma(&self, tuple: &[usize]) -> Result<Relation> {
        self.base.check_tuple(tuple)?;
        let c = self
            .colourings
            .get(tuple.len().wrapping_sub(1))
            .ok_or(Error::ArityMismatch {
                expected: self.max_arity,
                found: tuple.len(),
            })?;
        let colour = c.colours[encode_tuple(self.base.size(), tuple)];
        Ok(self.orbits(tuple.len())[colour as usize].clone())
    }

    /// All invariant relations as a [`RelationSet`], failing if some arity exceeds the cap.
    pub fn to_relation_set(&self) -> Result<RelationSet> {
        let mut out = RelationSet::new(self.base);
        for m in 1..=self.max_arity {
            let rels = self.relations(m).ok_or(Error::ClosureCap {
                arity: m,
                cap: self.cap,
            })?;
            for r in rels {
                out.insert(r.clone())?;
            }
        }
        Ok(out)
    }

    /// `Aut sInv G`, computed on the orbits: a permutation fixes every union of orbits
    /// iff it fixes every orbit.
    pub fn aut(&self) -> PermGroup {
        aut_of_colourings(self.base, self.colourings.clone())
    }
}

/// `Gamma_R(a)`: the intersection of all members of `R` of the arity of `a` that contain `a`.
pub fn gamma(rels: &RelationSet, tuple: &[usize]) -> Result<Relation> {
    let base = rels.base();
    base.check_tuple(tuple)?;
    intersect_all(
        rels.at(tuple.len()).filter(|r| r.contains(tuple)),
        base,
        tuple.len(),
    )
}

/// `a ~_R b`: no member of `R` contains exactly one of the two tuples.
pub fn sim(rels: &RelationSet, a: &[usize], b: &[usize]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::ArityMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    rels.base().check_tuple(a)?;
    rels.base().check_tuple(b)?;
    Ok(rels.at(a.len()).all(|r| r.contains(a) == r.contains(b)))
}

/// The `~_R` classes on `A^m`, ordered by least member.
pub fn sim_classes(rels: &RelationSet, arity: usize) -> Result<Vec<Relation>> {
    Ok(Colouring::of_relations(rels.base(), arity, rels.at(arity))?.classes(rels.base()))
}

/// `sInv Aut R` up to `m_max`.
pub fn galois_closure(rels: &RelationSet, m_max: usize) -> Result<RelationSet> {
    galois_closure_with_cap(rels, m_max, DEFAULT_CAP)
}

pub fn galois_closure_with_cap(
    rels: &RelationSet,
    m_max: usize,
    cap: usize,
) -> Result<RelationSet> {
    sinv_with_cap(&super::aut(rels), m_max, cap)?.to_relation_set()
}

/// Orbits of `Aut R` per arity, the atoms of its Galois closure.
pub fn galois_atoms(rels: &RelationSet, m_max: usize) -> Result<BTreeMap<usize, Vec<Relation>>> {
    let g = super::aut(rels);
    (1..=m_max).map(|m| Ok((m, g.orbits(m)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::{aut, generate_group};
    use crate::perm::Perm;

    fn b(n: usize) -> BaseSet {
        BaseSet::new(n).unwrap()
    }

    #[test]
    fn sinv_examples() {
        let sym = PermGroup::symmetric(b(3)).unwrap();
        let s = sinv(&sym, 1).unwrap();
        assert_eq!(s.orbits(1).len(), 1);
        assert_eq!(s.relations(1).unwrap().len(), 2);

        let c3 = generate_group(b(3), &[Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        let s = sinv(&c3, 2).unwrap();
        assert_eq!(s.orbits(2).len(), 3);
        assert_eq!(s.relations(2).unwrap().len(), 8);
        assert!(s.relations(2).unwrap().iter().all(|r| s.contains(r)));

        let s = sinv(&PermGroup::trivial(b(2)), 1).unwrap();
        assert_eq!(s.relations(1).unwrap().len(), 4);
    }

    #[test]
    fn cap_limits_materialization() {
        let s = sinv_with_cap(&PermGroup::trivial(b(3)), 2, 1 << 8).unwrap();
        assert!(s.relations(1).is_some());
        assert!(s.relations(2).is_none());
        assert_eq!(s.count(2), Some(512));
        assert_eq!(
            s.to_relation_set(),
            Err(Error::ClosureCap { arity: 2, cap: 256 })
        );
    }

    #[test]
    fn gamma_examples() {
        let empty = RelationSet::new(b(3));
        assert_eq!(
            gamma(&empty, &[0, 1]).unwrap(),
            Relation::full(b(3), 2).unwrap()
        );

        let all_unary = sinv(&PermGroup::trivial(b(2)), 1)
            .unwrap()
            .to_relation_set()
            .unwrap();
        assert_eq!(
            gamma(&all_unary, &[0]).unwrap(),
            Relation::from_tuples(b(2), 1, [[0]]).unwrap()
        );

        let c3 = generate_group(b(3), &[Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap()]).unwrap();
        let s = sinv(&c3, 2).unwrap();
        let expected = Relation::from_tuples(b(3), 2, [[0, 1], [1, 2], [2, 0]]).unwrap();
        assert_eq!(
            gamma(&s.to_relation_set().unwrap(), &[0, 1]).unwrap(),
            expected
        );
        assert_eq!(s.gamma(&[0, 1]).unwrap(), expected);
    }

    #[test]
    fn sim_examples() {
        let lt = Relation::from_fn(b(3), 2, |t| t[0] < t[1]).unwrap();
        let r = RelationSet::from_relations(b(3), [&lt]).unwrap();
        assert!(sim(&r, &[0, 1], &[0, 1]).unwrap());
        assert!(!sim(&r, &[0, 1], &[1, 0]).unwrap());
        assert!(sim(&r, &[0, 1], &[1, 2]).unwrap());
        assert!(sim(&r, &[0], &[1, 2]).is_err());
    }

    #[test]
    fn galois_closure_examples() {
        let lt = Relation::from_fn(b(3), 2, |t| t[0] < t[1]).unwrap();
        let r = RelationSet::from_relations(b(3), [&lt]).unwrap();
        let closed = galois_closure(&r, 1).unwrap();
        assert_eq!(closed.count_at(1), 8);

        let empty = galois_closure(&RelationSet::new(b(3)), 2).unwrap();
        assert_eq!(empty.count_at(1), 2);
        assert_eq!(empty.count_at(2), 4);
        assert_eq!(galois_closure(&empty, 2).unwrap(), empty);
        assert_eq!(aut(&empty).order(), Some(6));
    }
}
