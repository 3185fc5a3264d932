//! Finite base sets and relations stored as bitsets over `A^m`.
//!
//! A tuple `(a_1, ..., a_m)` is stored at the mixed-radix index
//! `a_1 * N^(m-1) + ... + a_m`, so the first coordinate is the most
//! significant digit and index order coincides with lexicographic tuple
//! order. File formats and frozen test values depend on this encoding.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// The base set `{0, ..., N-1}`, ordered by the integer order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseSet(usize);

impl BaseSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyBase);
        }
        Ok(BaseSet(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> core::ops::Range<usize> {
        0..self.0
    }

    pub fn check_element(self, element: usize) -> Result<()> {
        if element < self.0 {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange {
                element,
                size: self.0,
            })
        }
    }

    pub fn check_tuple(self, tuple: &[usize]) -> Result<()> {
        tuple.iter().try_for_each(|&a| self.check_element(a))
    }

    /// `N^m`, or an error if it does not fit in memory addressing.
    pub fn tuple_count(self, arity: usize) -> Result<usize> {
        u32::try_from(arity)
            .ok()
            .and_then(|m| self.0.checked_pow(m))
            .ok_or(Error::Invalid(alloc::format!(
                "{}^{} tuples do not fit in a bitset",
                self.0,
                arity
            )))
    }

    /// All tuples of `A^m` in index order.
    pub fn tuples(self, arity: usize) -> Tuples {
        Tuples::new(self.0, arity)
    }
}

/// Mixed-radix index of `tuple` over a base of `size` elements.
pub fn encode_tuple(size: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * size + a)
}

/// Inverse of [`encode_tuple`], writing into `out` (whose length is the arity).
pub fn decode_tuple(size: usize, mut index: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
}

/// Odometer over `A^m` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Tuples {
    size: usize,
    current: Vec<usize>,
    done: bool,
}

impl Tuples {
    fn new(size: usize, arity: usize) -> Self {
        Tuples {
            size,
            current: vec![0; arity],
            done: size == 0,
        }
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = !advance(&mut self.current, self.size);
        Some(out)
    }
}

/// Steps `digits` to the next tuple in lexicographic order; false on wrap-around.
pub(crate) fn advance(digits: &mut [usize], size: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < size {
            return true;
        }
        *d = 0;
    }
    false
}

/// An `m`-ary relation on a finite base set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Relation {
    size: usize,
    arity: usize,
    len_bits: usize,
    words: Vec<u64>,
}

impl Relation {
    pub fn empty(base: BaseSet, arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ZeroArity);
        }
        let len_bits = base.tuple_count(arity)?;
        Ok(Relation {
            size: base.size(),
            arity,
            len_bits,
            words: vec![0; len_bits.div_ceil(64)],
        })
    }

    pub fn full(base: BaseSet, arity: usize) -> Result<Self> {
        Ok(Self::empty(base, arity)?.complement())
    }

    /// Builds a relation from explicit tuples; duplicates collapse.
    pub fn from_tuples<I, T>(base: BaseSet, arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[usize]>,
    {
        let mut rel = Self::empty(base, arity)?;
        for t in tuples {
            let t = t.as_ref();
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: t.len(),
                });
            }
            base.check_tuple(t)?;
            rel.set_index(encode_tuple(rel.size, t));
        }
        Ok(rel)
    }

    /// Builds `{ a in A^m | pred(a) }`.
    pub fn from_fn(
        base: BaseSet,
        arity: usize,
        mut pred: impl FnMut(&[usize]) -> bool,
    ) -> Result<Self> {
        let mut rel = Self::empty(base, arity)?;
        let mut t = vec![0; arity];
        for idx in 0..rel.len_bits {
            decode_tuple(rel.size, idx, &mut t);
            if pred(&t) {
                rel.set_index(idx);
            }
        }
        Ok(rel)
    }

    /// The equality relation `{(a, a)}`.
    pub fn diagonal(base: BaseSet) -> Self {
        Self::from_fn(base, 2, |t| t[0] == t[1]).expect("binary relation on a valid base")
    }

    pub(crate) fn from_index_set(
        base: BaseSet,
        arity: usize,
        indices: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut rel = Self::empty(base, arity).expect("caller checked arity");
        for idx in indices {
            rel.set_index(idx);
        }
        rel
    }

    pub fn base(&self) -> BaseSet {
        BaseSet(self.size)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of tuples in `A^m`.
    pub fn universe_len(&self) -> usize {
        self.len_bits
    }

    /// Number of member tuples.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.len_bits
    }

    /// Membership; tuples of the wrong arity or with out-of-range entries are never members.
    pub fn contains(&self, tuple: &[usize]) -> bool {
        tuple.len() == self.arity
            && tuple.iter().all(|&a| a < self.size)
            && self.contains_index(encode_tuple(self.size, tuple))
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        idx < self.len_bits && self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub(crate) fn set_index(&mut self, idx: usize) {
        self.words[idx / 64] |= 1 << (idx % 64);
    }

    /// Member indices in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    /// Member tuples in lexicographic order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.indices().map(move |idx| {
            let mut t = vec![0; self.arity];
            decode_tuple(self.size, idx, &mut t);
            t
        })
    }

    /// The least member tuple index, if any.
    pub fn first_index(&self) -> Option<usize> {
        self.indices().next()
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in &mut out.words {
            *w = !*w;
        }
        out.mask_tail();
        out
    }

    fn mask_tail(&mut self) {
        let rem = self.len_bits % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    fn check_same_shape(&self, other: &Relation) -> Result<()> {
        if self.size != other.size {
            return Err(Error::BaseMismatch {
                expected: self.size,
                found: other.size,
            });
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Relation, f: impl Fn(u64, u64) -> u64) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (w, &o) in out.words.iter_mut().zip(&other.words) {
            *w = f(*w, o);
        }
        Ok(out)
    }

    pub fn intersect(&self, other: &Relation) -> Result<Self> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &Relation) -> Result<Self> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &Relation) -> Result<Self> {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.check_same_shape(other).is_ok()
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Relation) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & b == 0)
    }

    /// `g[r] = { g(a) | a in r }`.
    pub fn permuted(&self, g: &Perm) -> Result<Self> {
        if g.degree() != self.size {
            return Err(Error::BaseMismatch {
                expected: self.size,
                found: g.degree(),
            });
        }
        let mut out = Relation {
            words: vec![0; self.words.len()],
            ..self.clone()
        };
        let mut t = vec![0; self.arity];
        for idx in self.indices() {
            decode_tuple(self.size, idx, &mut t);
            let image = t.iter().fold(0, |acc, &a| acc * self.size + g.apply(a));
            out.set_index(image);
        }
        Ok(out)
    }

    /// True iff `g[r] = r`.
    pub fn is_invariant_under(&self, g: &Perm) -> bool {
        self.permuted(g).map(|img| &img == self).unwrap_or(false)
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation(N={}, m={}, ", self.size, self.arity)?;
        f.debug_set().entries(self.tuples()).finish()?;
        write!(f, ")")
    }
}

/// `g[r]` for a bijection `g` of the base.
pub fn apply_permutation(g: &Perm, r: &Relation) -> Result<Relation> {
    r.permuted(g)
}

/// Intersection of a family of `m`-ary relations; the empty family yields `A^m`.
pub fn intersect_all<'a, I>(rels: I, base: BaseSet, arity: usize) -> Result<Relation>
where
    I: IntoIterator<Item = &'a Relation>,
{
    let mut acc = Relation::full(base, arity)?;
    for r in rels {
        if r.arity() != arity {
            return Err(Error::MixedArities);
        }
        acc = acc.intersect(r)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(n: usize) -> BaseSet {
        BaseSet::new(n).unwrap()
    }

    fn lt3() -> Relation {
        Relation::from_tuples(base(3), 2, [[0, 1], [0, 2], [1, 2]]).unwrap()
    }

    #[test]
    fn make_relation_examples() {
        let empty = Relation::from_tuples(base(3), 2, Vec::<[usize; 2]>::new()).unwrap();
        assert_eq!(empty.len(), 0);
        assert_eq!(lt3().len(), 3);
        let dup = Relation::from_tuples(base(2), 1, [[0], [0]]).unwrap();
        assert_eq!(dup.len(), 1);
        assert!(dup.contains(&[0]));
    }

    #[test]
    fn make_relation_errors() {
        assert_eq!(
            Relation::from_tuples(base(3), 2, [vec![0, 1, 2]]),
            Err(Error::ArityMismatch {
                expected: 2,
                found: 3
            })
        );
        assert_eq!(
            Relation::from_tuples(base(3), 2, [[0, 3]]),
            Err(Error::ElementOutOfRange {
                element: 3,
                size: 3
            })
        );
        assert_eq!(Relation::empty(base(3), 0), Err(Error::ZeroArity));
        assert_eq!(BaseSet::new(0), Err(Error::EmptyBase));
    }

    #[test]
    fn encoding_is_lexicographic() {
        let b = base(3);
        let all: Vec<_> = b.tuples(2).collect();
        assert_eq!(all.len(), 9);
        for (i, t) in all.iter().enumerate() {
            assert_eq!(encode_tuple(3, t), i);
        }
        assert_eq!(all[5], vec![1, 2]);
    }

    #[test]
    fn apply_permutation_examples() {
        let id = Perm::identity(3);
        assert_eq!(apply_permutation(&id, &lt3()).unwrap(), lt3());

        let swap = Perm::new(vec![1, 0]).unwrap();
        let r = Relation::from_tuples(base(2), 2, [[0, 1]]).unwrap();
        let expected = Relation::from_tuples(base(2), 2, [[1, 0]]).unwrap();
        assert_eq!(apply_permutation(&swap, &r).unwrap(), expected);

        // (0 1 2): 0->1, 1->2, 2->0 applied pointwise to (0,1),(0,2),(1,2)
        let cyc = Perm::new(vec![1, 2, 0]).unwrap();
        let expected = Relation::from_tuples(base(3), 2, [[1, 2], [1, 0], [2, 0]]).unwrap();
        assert_eq!(apply_permutation(&cyc, &lt3()).unwrap(), expected);
    }

    #[test]
    fn complement_examples() {
        assert!(Relation::full(base(2), 3).unwrap().complement().is_empty());
        let diag = Relation::diagonal(base(2));
        let off = Relation::from_tuples(base(2), 2, [[0, 1], [1, 0]]).unwrap();
        assert_eq!(diag.complement(), off);
        assert_eq!(lt3().complement().len(), 6);
    }

    #[test]
    fn intersect_all_examples() {
        let full = intersect_all([], base(2), 2).unwrap();
        assert_eq!(full.len(), 4);

        let r = lt3();
        assert!(intersect_all([&r, &r.complement()], base(3), 2)
            .unwrap()
            .is_empty());

        let le = Relation::from_fn(base(3), 2, |t| t[0] <= t[1]).unwrap();
        assert_eq!(intersect_all([&r, &le], base(3), 2).unwrap(), r);

        let unary = Relation::full(base(3), 1).unwrap();
        assert_eq!(
            intersect_all([&r, &unary], base(3), 2),
            Err(Error::MixedArities)
        );
    }

    #[test]
    fn permuting_with_wrong_degree_fails() {
        let g = Perm::identity(4);
        assert!(lt3().permuted(&g).is_err());
    }
}
