//! Automorphism groups by backtracking over element images.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::group::{Colouring, PermGroup};
use super::relset::RelationSet;
use crate::error::Result;
use crate::perm::{Perm, MAX_ENUMERABLE};
use crate::relation::{encode_tuple, BaseSet, Relation};
use crate::structure::Structure;

/// `Aut R`: all permutations of the base that map every relation of `R` onto itself.
pub fn aut(rels: &RelationSet) -> PermGroup {
    let base = rels.base();
    let colourings = rels
        .arities()
        .map(|m| Colouring::of_relations(base, m, rels.at(m)).expect("relations of one arity"))
        .collect();
    aut_of_colourings(base, colourings)
}

/// `Aut` of an arbitrary list of relations on `base`.
pub fn aut_of_relations(base: BaseSet, rels: &[Relation]) -> Result<PermGroup> {
    Ok(aut(&RelationSet::from_relations(base, rels)?))
}

pub fn aut_of_structure(s: &Structure) -> PermGroup {
    aut_of_relations(s.base(), s.relations()).expect("structure relations share its base")
}

/// Permutations preserving every colouring. Generators come from one search per
/// stabilizer level; the element list is a full search when `N <= 8`.
pub(crate) fn aut_of_colourings(base: BaseSet, colourings: Vec<Colouring>) -> PermGroup {
    let search = Search::new(base.size(), colourings);
    let generators = search.strong_generators();
    let elements = (base.size() <= MAX_ENUMERABLE).then(|| {
        let mut all = Vec::new();
        search.run(&[], &mut |g| {
            all.push(g);
            true
        });
        all
    });
    PermGroup::from_parts(base, generators, elements)
}

struct Search {
    n: usize,
    colourings: Vec<Colouring>,
    /// Elements with different invariants can never be mapped to each other.
    cell: Vec<usize>,
}

impl Search {
    fn new(n: usize, colourings: Vec<Colouring>) -> Self {
        let mut ids: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        let cell = (0..n)
            .map(|x| {
                let inv = element_invariant(n, &colourings, x);
                let next = ids.len();
                *ids.entry(inv).or_insert(next)
            })
            .collect();
        Search {
            n,
            colourings,
            cell,
        }
    }

    /// Calls `visit` on every automorphism extending `fixed`, in lexicographic order,
    /// until it returns false. Returns false if stopped early.
    fn run(&self, fixed: &[(usize, usize)], visit: &mut dyn FnMut(Perm) -> bool) -> bool {
        let mut images: Vec<Option<usize>> = alloc::vec![None; self.n];
        let mut used = alloc::vec![false; self.n];
        let mut order: Vec<usize> = Vec::new();
        for &(x, y) in fixed {
            if self.cell[x] != self.cell[y] || used[y] {
                return true;
            }
            images[x] = Some(y);
            used[y] = true;
            order.push(x);
            if !self.consistent(&images, &order, x) {
                return true;
            }
        }
        let rest: Vec<usize> = (0..self.n).filter(|x| images[*x].is_none()).collect();
        self.extend(&mut images, &mut used, &mut order, &rest, visit)
    }

    fn extend(
        &self,
        images: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        rest: &[usize],
        visit: &mut dyn FnMut(Perm) -> bool,
    ) -> bool {
        let Some((&x, tail)) = rest.split_first() else {
            let perm = Perm::new(
                images
                    .iter()
                    .map(|i| i.expect("complete assignment"))
                    .collect(),
            )
            .expect("bijection");
            return visit(perm);
        };
        for y in 0..self.n {
            if used[y] || self.cell[x] != self.cell[y] {
                continue;
            }
            images[x] = Some(y);
            used[y] = true;
            order.push(x);
            let keep_going =
                !self.consistent(images, order, x) || self.extend(images, used, order, tail, visit);
            order.pop();
            used[y] = false;
            images[x] = None;
            if !keep_going {
                return false;
            }
        }
        true
    }

    /// Checks every tuple over the assigned elements that contains `x`.
    fn consistent(&self, images: &[Option<usize>], assigned: &[usize], x: usize) -> bool {
        let d = assigned.len();
        for c in &self.colourings {
            let m = c.arity;
            let mut digits = alloc::vec![0usize; m];
            let mut t = alloc::vec![0usize; m];
            let mut gt = alloc::vec![0usize; m];
            loop {
                let mut has_x = false;
                for i in 0..m {
                    t[i] = assigned[digits[i]];
                    gt[i] = images[t[i]].expect("assigned element");
                    has_x |= t[i] == x;
                }
                if has_x
                    && c.colours[encode_tuple(self.n, &t)] != c.colours[encode_tuple(self.n, &gt)]
                {
                    return false;
                }
                if !crate::relation::advance(&mut digits, d) {
                    break;
                }
            }
        }
        true
    }

    /// Levels from the deepest up: for each `k` and each `y` outside the orbit of `k` under
    /// the generators found so far, one automorphism fixing `0..k` pointwise and sending `k` to `y`.
    fn strong_generators(&self) -> Vec<Perm> {
        let mut gens: Vec<Perm> = Vec::new();
        for k in (0..self.n).rev() {
            let mut fixed: Vec<(usize, usize)> = (0..k).map(|x| (x, x)).collect();
            let mut orbit = alloc::vec![false; self.n];
            orbit[k] = true;
            for y in k + 1..self.n {
                close_orbit(&mut orbit, &gens);
                if orbit[y] || self.cell[k] != self.cell[y] {
                    continue;
                }
                fixed.push((k, y));
                let mut found = None;
                self.run(&fixed, &mut |g| {
                    found = Some(g);
                    false
                });
                fixed.pop();
                gens.extend(found);
            }
        }
        gens.sort();
        gens
    }
}

fn close_orbit(orbit: &mut [bool], gens: &[Perm]) {
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..orbit.len() {
            if orbit[x] {
                for g in gens {
                    let y = g.apply(x);
                    if !orbit[y] {
                        orbit[y] = true;
                        changed = true;
                    }
                }
            }
        }
    }
}

/// Per colouring and coordinate, the sorted colours of tuples with `x` in that coordinate.
fn element_invariant(n: usize, colourings: &[Colouring], x: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for c in colourings {
        let m = c.arity;
        for pos in 0..m {
            let mut colours: Vec<u32> = Vec::new();
            let mut digits = alloc::vec![0usize; m - 1];
            loop {
                let mut t: Vec<usize> = digits.clone();
                t.insert(pos, x);
                colours.push(c.colours[encode_tuple(n, &t)]);
                if !crate::relation::advance(&mut digits, n) {
                    break;
                }
            }
            colours.sort_unstable();
            out.extend(colours);
            out.push(u32::MAX);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::generate_group;
    use crate::perm::all_permutations;

    fn b(n: usize) -> BaseSet {
        BaseSet::new(n).unwrap()
    }

    fn brute_aut(base: BaseSet, rels: &[Relation]) -> Vec<Perm> {
        all_permutations(base.size())
            .filter(|g| rels.iter().all(|r| r.is_invariant_under(g)))
            .collect()
    }

    #[test]
    fn aut_examples() {
        assert_eq!(aut(&RelationSet::new(b(3))).order(), Some(6));
        let lt = Relation::from_fn(b(3), 2, |t| t[0] < t[1]).unwrap();
        let g = aut_of_relations(b(3), &[lt]).unwrap();
        assert_eq!(g.order(), Some(1));
        assert!(g.generators().is_empty());
        let bip = Relation::from_fn(b(4), 2, |t| (t[0] < 2) != (t[1] < 2)).unwrap();
        assert_eq!(aut_of_relations(b(4), &[bip]).unwrap().order(), Some(8));
    }

    #[test]
    fn generators_generate_the_full_search() {
        let bip = Relation::from_fn(b(4), 2, |t| (t[0] < 2) != (t[1] < 2)).unwrap();
        let unary = Relation::from_tuples(b(5), 1, [[0], [3]]).unwrap();
        let cases: Vec<(BaseSet, Vec<Relation>)> = alloc::vec![
            (b(4), alloc::vec![bip]),
            (b(5), alloc::vec![unary]),
            (b(5), alloc::vec![]),
            (b(1), alloc::vec![]),
        ];
        for (base, rels) in cases {
            let g = aut_of_relations(base, &rels).unwrap();
            let expected = brute_aut(base, &rels);
            assert_eq!(g.elements().unwrap(), &expected[..]);
            let regenerated = generate_group(base, g.generators()).unwrap();
            assert_eq!(regenerated.elements(), g.elements());
        }
    }

    #[test]
    fn large_base_returns_generators_only() {
        let path = Relation::from_fn(b(10), 2, |t| t[0].abs_diff(t[1]) == 1).unwrap();
        let g = aut_of_relations(b(10), &[path.clone()]).unwrap();
        assert!(g.elements().is_none());
        assert_eq!(
            g.generators(),
            &[Perm::new((0..10).rev().collect()).unwrap()]
        );
        assert!(g.generators().iter().all(|p| path.is_invariant_under(p)));
    }
}
