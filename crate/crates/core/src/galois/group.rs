use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::{Perm, MAX_ENUMERABLE};
use crate::relation::{encode_tuple, BaseSet, Relation};

/// A permutation group given by generators, with the full element list when the
/// base is small enough to enumerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroup {
    base: BaseSet,
    generators: Vec<Perm>,
    elements: Option<Vec<Perm>>,
}

impl PermGroup {
    pub(crate) fn from_parts(
        base: BaseSet,
        generators: Vec<Perm>,
        elements: Option<Vec<Perm>>,
    ) -> Self {
        PermGroup {
            base,
            generators,
            elements,
        }
    }

    pub fn trivial(base: BaseSet) -> Self {
        PermGroup {
            base,
            generators: Vec::new(),
            elements: Some(alloc::vec![Perm::identity(base.size())]),
        }
    }

    pub fn symmetric(base: BaseSet) -> Result<Self> {
        generate_group(base, &symmetric_generators(base.size()))
    }

    pub fn base(&self) -> BaseSet {
        self.base
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Elements in lexicographic order of image lists; `None` above the enumeration limit.
    pub fn elements(&self) -> Option<&[Perm]> {
        self.elements.as_deref()
    }

    pub fn order(&self) -> Option<usize> {
        self.elements.as_ref().map(Vec::len)
    }

    pub fn contains(&self, g: &Perm) -> Result<bool> {
        let elements = self.elements.as_ref().ok_or(Error::BaseTooLarge {
            size: self.base.size(),
            max: MAX_ENUMERABLE,
        })?;
        Ok(elements.binary_search(g).is_ok())
    }

    /// `{ g(a) | g in <generators> }`, found by closing `{a}` under the generators.
    pub fn orbit(&self, tuple: &[usize]) -> BTreeSet<Vec<usize>> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(tuple.to_vec());
        queue.push_back(tuple.to_vec());
        while let Some(t) = queue.pop_front() {
            for g in &self.generators {
                let image = g.apply_tuple(&t);
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        seen
    }

    /// The orbits of the group on `A^m`, ordered by least member.
    pub fn orbits(&self, arity: usize) -> Result<Vec<Relation>> {
        let colouring = Colouring::orbits(self.base, arity, &self.generators)?;
        Ok(colouring.classes(self.base))
    }
}

/// `(0 1)` and `(0 1 ... n-1)`, which generate `Sym(n)`.
pub fn symmetric_generators(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    if n >= 2 {
        out.push(Perm::from_cycles(n, &[&[0, 1]]).expect("valid transposition"));
    }
    if n >= 3 {
        let cycle: Vec<usize> = (0..n).collect();
        out.push(Perm::from_cycles(n, &[&cycle]).expect("valid cycle"));
    }
    out
}

/// `<gens>_group`, closed breadth-first under multiplication by the generators.
pub fn generate_group(base: BaseSet, gens: &[Perm]) -> Result<PermGroup> {
    let n = base.size();
    for g in gens {
        if g.degree() != n {
            return Err(Error::BaseMismatch {
                expected: n,
                found: g.degree(),
            });
        }
    }
    let generators: Vec<Perm> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    if n > MAX_ENUMERABLE {
        return Ok(PermGroup {
            base,
            generators,
            elements: None,
        });
    }
    let identity = Perm::identity(n);
    let mut seen = BTreeSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(h) = queue.pop_front() {
        for g in &generators {
            let gh = g.compose(&h);
            if seen.insert(gh.clone()) {
                queue.push_back(gh);
            }
        }
    }
    Ok(PermGroup {
        base,
        generators,
        elements: Some(seen.into_iter().collect()),
    })
}

/// A partition of `A^m` given by a class number per tuple index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Colouring {
    pub arity: usize,
    pub colours: Vec<u32>,
}

impl Colouring {
    /// Classes of equal membership across `rels`, all of arity `arity`.
    pub fn of_relations<'a>(
        base: BaseSet,
        arity: usize,
        rels: impl IntoIterator<Item = &'a Relation>,
    ) -> Result<Self> {
        let len = base.tuple_count(arity)?;
        let mut colours = alloc::vec![0u32; len];
        for r in rels {
            if r.arity() != arity {
                return Err(Error::MixedArities);
            }
            // Split every class by membership in r; new class ids follow first occurrence.
            let mut remap: alloc::collections::BTreeMap<(u32, bool), u32> =
                alloc::collections::BTreeMap::new();
            let mut next = 0u32;
            for (idx, c) in colours.iter_mut().enumerate() {
                let key = (*c, r.contains_index(idx));
                *c = *remap.entry(key).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
            }
        }
        Ok(Colouring { arity, colours })
    }

    /// Orbits of `<gens>` on `A^m`, numbered by least member.
    pub fn orbits(base: BaseSet, arity: usize, gens: &[Perm]) -> Result<Self> {
        let n = base.size();
        let len = base.tuple_count(arity)?;
        let mut parent: Vec<usize> = (0..len).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut t = alloc::vec![0; arity];
        for g in gens {
            if g.degree() != n {
                return Err(Error::BaseMismatch {
                    expected: n,
                    found: g.degree(),
                });
            }
            for idx in 0..len {
                crate::relation::decode_tuple(n, idx, &mut t);
                let image = encode_tuple(n, &g.apply_tuple(&t));
                let (a, b) = (find(&mut parent, idx), find(&mut parent, image));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut colours = alloc::vec![0u32; len];
        let mut ids = alloc::collections::BTreeMap::new();
        for idx in 0..len {
            let root = find(&mut parent, idx);
            let next = ids.len() as u32;
            colours[idx] = *ids.entry(root).or_insert(next);
        }
        Ok(Colouring { arity, colours })
    }

    pub fn class_count(&self) -> usize {
        self.colours.iter().max().map_or(0, |&c| c as usize + 1)
    }

    /// One relation per class, in class-number order.
    pub fn classes(&self, base: BaseSet) -> Vec<Relation> {
        let mut members: Vec<Vec<usize>> = alloc::vec![Vec::new(); self.class_count()];
        for (idx, &c) in self.colours.iter().enumerate() {
            members[c as usize].push(idx);
        }
        members
            .into_iter()
            .map(|ix| Relation::from_index_set(base, self.arity, ix))
            .collect()
    }
}
