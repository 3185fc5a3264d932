//! Permutations and finite partial maps of the base set.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0, ..., N-1}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotABijection(images));
            }
            seen[x] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Builds a permutation from disjoint cycles, e.g. `[[0, 1, 2]]` for `0 -> 1 -> 2 -> 0`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a >= n {
                    return Err(Error::ElementOutOfRange {
                        element: a,
                        size: n,
                    });
                }
                images[a] = cycle[(i + 1) % cycle.len()];
            }
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `g(a) = (g(a_1), ..., g(a_m))`.
    pub fn apply_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().map(|&a| self.0[a]).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Self {
        assert_eq!(
            self.degree(),
            other.degree(),
            "composing permutations of different degree"
        );
        Perm(other.0.iter().map(|&x| self.0[x]).collect())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

/// Largest base for which `Sym(A)` is enumerated explicitly.
pub const MAX_ENUMERABLE: usize = 8;

/// All permutations of `{0, ..., n-1}` in lexicographic order of image lists.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Perm> {
    let mut current: Option<Vec<usize>> = Some((0..n).collect());
    core::iter::from_fn(move || {
        let out = current.take()?;
        let mut next = out.clone();
        if next_permutation(&mut next) {
            current = Some(next);
        }
        Some(Perm(out))
    })
}

/// Like [`all_permutations`] but refuses bases above [`MAX_ENUMERABLE`].
pub fn symmetric_group(n: usize) -> Result<impl Iterator<Item = Perm>> {
    if n > MAX_ENUMERABLE {
        return Err(Error::BaseTooLarge {
            size: n,
            max: MAX_ENUMERABLE,
        });
    }
    Ok(all_permutations(n))
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// A finite injective partial function on base elements.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialMap {
    forward: BTreeMap<usize, usize>,
    backward: BTreeMap<usize, usize>,
}

impl PartialMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut map = Self::new();
        for (x, y) in pairs {
            map.insert(x, y)?;
        }
        Ok(map)
    }

    /// Adds `x -> y`; re-adding an identical pair is a no-op.
    pub fn insert(&mut self, x: usize, y: usize) -> Result<()> {
        match (self.forward.get(&x), self.backward.get(&y)) {
            (Some(&y0), _) if y0 == y => Ok(()),
            (Some(_), _) => Err(Error::NotInjective(x)),
            (None, Some(_)) => Err(Error::NotInjective(x)),
            (None, None) => {
                self.forward.insert(x, y);
                self.backward.insert(y, x);
                Ok(())
            }
        }
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.forward.get(&x).copied()
    }

    pub fn preimage(&self, y: usize) -> Option<usize> {
        self.backward.get(&y).copied()
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.forward.keys().copied()
    }

    pub fn image(&self) -> impl Iterator<Item = usize> + '_ {
        self.backward.keys().copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward.iter().map(|(&x, &y)| (x, y))
    }

    pub fn in_domain(&self, x: usize) -> bool {
        self.forward.contains_key(&x)
    }

    pub fn in_image(&self, y: usize) -> bool {
        self.backward.contains_key(&y)
    }

    /// Applies the map to every entry; `None` if some entry is outside the domain.
    pub fn apply_tuple(&self, tuple: &[usize]) -> Option<Vec<usize>> {
        tuple.iter().map(|&a| self.get(a)).collect()
    }

    pub fn preimage_tuple(&self, tuple: &[usize]) -> Option<Vec<usize>> {
        tuple.iter().map(|&a| self.preimage(a)).collect()
    }

    /// True iff every pair of `other` is also a pair of `self`.
    pub fn extends(&self, other: &PartialMap) -> bool {
        other.pairs().all(|(x, y)| self.get(x) == Some(y))
    }

    /// True iff `g` agrees with this map on its domain.
    pub fn is_restriction_of(&self, g: &Perm) -> bool {
        self.pairs().all(|(x, y)| x < g.degree() && g.apply(x) == y)
    }
}

impl fmt::Debug for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.forward.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm::new(alloc::vec![0, 0, 1]).is_err());
        assert!(Perm::new(alloc::vec![0, 3, 1]).is_err());
        assert!(Perm::new(alloc::vec![2, 0, 1]).is_ok());
    }

    #[test]
    fn compose_applies_right_operand_first() {
        let g = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let h = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let gh = g.compose(&h);
        for x in 0..3 {
            assert_eq!(gh.apply(x), g.apply(h.apply(x)));
        }
        assert!(h.compose(&h.inverse()).is_identity());
    }

    #[test]
    fn sym_enumeration_counts() {
        assert_eq!(all_permutations(0).count(), 1);
        assert_eq!(all_permutations(1).count(), 1);
        assert_eq!(all_permutations(4).count(), 24);
        let v: Vec<_> = all_permutations(3).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert!(symmetric_group(9).is_err());
    }

    #[test]
    fn partial_map_injectivity() {
        let mut p = PartialMap::new();
        p.insert(0, 1).unwrap();
        p.insert(0, 1).unwrap();
        assert_eq!(p.insert(0, 2), Err(Error::NotInjective(0)));
        assert_eq!(p.insert(2, 1), Err(Error::NotInjective(2)));
        assert_eq!(p.preimage(1), Some(0));
        let q = PartialMap::from_pairs([(0, 1), (1, 0)]).unwrap();
        assert!(q.extends(&p));
        assert!(!p.extends(&q));
    }
}
