use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::logic::Interpretation;
use crate::perm::PartialMap;
use crate::relation::{BaseSet, Relation};
use crate::structure::Structure;

/// True iff the entries strictly increase; the default value of every `r_m`.
pub fn is_increasing(t: &[usize]) -> bool {
    t.windows(2).all(|w| w[0] < w[1])
}

pub(crate) fn has_repeat(t: &[usize]) -> bool {
    (1..t.len()).any(|i| t[..i].contains(&t[i]))
}

/// A structure over the theory signature `r1, r2, ...` (all arities) on elements `0..size`.
///
/// Every tuple follows the order default `r_m(c) <=> c_1 < ... < c_m` unless it is listed
/// as an exception, in which case its value is flipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryStructure {
    size: usize,
    exceptions: BTreeSet<Vec<usize>>,
}

impl TheoryStructure {
    /// The pure order structure on `size` elements.
    pub fn new(size: usize) -> Result<Self> {
        BaseSet::new(size)?;
        Ok(TheoryStructure {
            size,
            exceptions: BTreeSet::new(),
        })
    }

    pub fn from_exceptions(
        size: usize,
        exceptions: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        let mut s = TheoryStructure::new(size)?;
        for t in exceptions {
            if t.is_empty() {
                return Err(Error::ZeroArity);
            }
            s.base().check_tuple(&t)?;
            s.exceptions.insert(t);
        }
        Ok(s)
    }

    /// Reads a structure whose signature slot `i` has arity `i + 1`; arities above the last
    /// slot keep the order default.
    pub fn from_structure(s: &Structure) -> Result<Self> {
        let mut out = TheoryStructure::new(s.base().size())?;
        for (i, r) in s.relations().iter().enumerate() {
            if r.arity() != i + 1 {
                return Err(Error::ArityMismatch {
                    expected: i + 1,
                    found: r.arity(),
                });
            }
            for t in s.base().tuples(r.arity()) {
                if r.contains(&t) != is_increasing(&t) {
                    out.exceptions.insert(t);
                }
            }
        }
        Ok(out)
    }

    /// Bitset relations `r1..r_max_arity`.
    pub fn to_structure(&self, max_arity: usize) -> Result<Structure> {
        let base = self.base();
        let rels = (1..=max_arity)
            .map(|m| Relation::from_fn(base, m, |t| self.holds(t)))
            .collect::<Result<Vec<_>>>()?;
        Structure::theory(base, rels)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn base(&self) -> BaseSet {
        BaseSet::new(self.size).expect("size is positive")
    }

    /// Value of `r_m` at `t`, `m = t.len()`. Entries must be in range.
    pub fn holds(&self, t: &[usize]) -> bool {
        debug_assert!(t.iter().all(|&a| a < self.size));
        is_increasing(t) != self.exceptions.contains(t)
    }

    /// Tuples whose value differs from the order default, in lexicographic order.
    pub fn exceptions(&self) -> impl Iterator<Item = &Vec<usize>> + '_ {
        self.exceptions.iter()
    }

    pub fn exception_count(&self) -> usize {
        self.exceptions.len()
    }

    pub fn max_exception_arity(&self) -> usize {
        self.exceptions.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The induced substructure on `0..size`.
    pub fn restrict(&self, size: usize) -> Result<TheoryStructure> {
        if size > self.size {
            return Err(Error::ElementOutOfRange {
                element: size - 1,
                size: self.size,
            });
        }
        let mut out = TheoryStructure::new(size)?;
        out.exceptions = self
            .exceptions
            .iter()
            .filter(|t| t.iter().all(|&a| a < size))
            .cloned()
            .collect();
        Ok(out)
    }

    pub(crate) fn set(&mut self, t: Vec<usize>, value: bool) {
        if value == is_increasing(&t) {
            self.exceptions.remove(&t);
        } else {
            self.exceptions.insert(t);
        }
    }

    pub(crate) fn grow(&mut self, size: usize) {
        self.size = self.size.max(size);
    }

    /// First tuple with a repeated entry that holds, if any.
    pub fn t1_violation(&self) -> Option<Vec<usize>> {
        self.exceptions.iter().find(|t| has_repeat(t)).cloned()
    }

    /// First tuple `t` over `dom f` with arity at most `s` where `t` and `f(t)` disagree.
    pub fn reduct_violation(&self, f: &PartialMap, s: usize) -> Option<Vec<usize>> {
        let dom: Vec<usize> = f.domain().collect();
        for m in 1..=s.min(dom.len()) {
            let mut idx = alloc::vec![0usize; m];
            loop {
                if !has_repeat(&idx) {
                    let t: Vec<usize> = idx.iter().map(|&i| dom[i]).collect();
                    let image = f.apply_tuple(&t).expect("tuple over domain");
                    if self.holds(&t) != self.holds(&image) {
                        return Some(t);
                    }
                }
                if !crate::relation::advance(&mut idx, dom.len()) {
                    break;
                }
            }
        }
        None
    }
}

impl Interpretation for TheoryStructure {
    fn universe(&self) -> usize {
        self.size
    }

    fn holds(&self, pred: usize, args: &[usize]) -> Result<bool> {
        if args.len() != pred + 1 {
            return Err(Error::ArityMismatch {
                expected: pred + 1,
                found: args.len(),
            });
        }
        self.base().check_tuple(args)?;
        Ok(TheoryStructure::holds(self, args))
    }
}

/// T1 for a bitset structure over the theory signature: the first tuple with a repeated
/// entry that lies in some relation, or `None`.
pub fn check_t1(s: &Structure) -> Result<Option<Vec<usize>>> {
    for (i, r) in s.relations().iter().enumerate() {
        if r.arity() != i + 1 {
            return Err(Error::ArityMismatch {
                expected: i + 1,
                found: r.arity(),
            });
        }
    }
    Ok(s.relations()
        .iter()
        .flat_map(Relation::tuples)
        .find(|t| has_repeat(t)))
}

/// The partial weight function `h`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HWeight(BTreeMap<usize, usize>);

impl HWeight {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, element: usize, weight: usize) {
        self.0.insert(element, weight);
    }

    pub fn get(&self, element: usize) -> Option<usize> {
        self.0.get(&element).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&a, &w)| (a, w))
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn extend(&mut self, other: &HWeight) {
        self.0.extend(other.iter());
    }

    /// The weights of elements in `range`.
    pub fn restrict(&self, range: core::ops::Range<usize>) -> HWeight {
        HWeight(self.0.range(range).map(|(&a, &w)| (a, w)).collect())
    }

    /// Largest weight among the entries of `t` in the domain.
    pub fn max_on(&self, t: &[usize]) -> Option<usize> {
        t.iter().filter_map(|&a| self.get(a)).max()
    }
}

impl FromIterator<(usize, usize)> for HWeight {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        HWeight(iter.into_iter().collect())
    }
}

/// `t` meets `dom h` and `max h(t) < |t|`.
pub fn weak_tuple(h: &HWeight, t: &[usize]) -> bool {
    h.max_on(t).is_some_and(|w| w < t.len())
}

/// Checks `N ⊏_h M` where `N` is the induced structure on `0..n.size()`.
/// Returns the first offending tuple: one where `N` and `M` disagree, or a weak tuple of `M`
/// that breaks the order law.
pub fn check_submodel_h(
    n: &TheoryStructure,
    m: &TheoryStructure,
    h: &HWeight,
) -> Result<Option<Vec<usize>>> {
    if n.size() > m.size() {
        return Err(Error::WeightDomain(alloc::format!(
            "submodel has {} elements but the model only {}",
            n.size(),
            m.size()
        )));
    }
    let expected = n.size()..m.size();
    if h.len() != expected.len() || h.domain().any(|a| !expected.contains(&a)) {
        return Err(Error::WeightDomain(alloc::format!(
            "dom h must be {}..{}, found {} elements",
            expected.start,
            expected.end,
            h.len()
        )));
    }
    let inside = |t: &Vec<usize>| t.iter().all(|&a| a < n.size());
    let mut first: Option<Vec<usize>> = None;
    let mut note = |t: &Vec<usize>| {
        if first.as_ref().is_none_or(|f| t < f) {
            first = Some(t.clone());
        }
    };
    for t in n.exceptions().filter(|t| !m.exceptions.contains(*t)) {
        note(t);
    }
    for t in m.exceptions() {
        if inside(t) {
            if !n.exceptions.contains(t) {
                note(t);
            }
        } else if weak_tuple(h, t) {
            note(t);
        }
    }
    Ok(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn order_default_and_exceptions() {
        let mut s = TheoryStructure::new(3).unwrap();
        assert!(s.holds(&[0, 2]));
        assert!(!s.holds(&[2, 0]));
        assert!(!s.holds(&[1, 1]));
        s.set(vec![2, 0], true);
        s.set(vec![0, 2], true);
        assert_eq!(s.exception_count(), 1);
        assert!(s.holds(&[2, 0]));
        assert_eq!(s.t1_violation(), None);
        s.set(vec![1, 1], true);
        assert_eq!(s.t1_violation(), Some(vec![1, 1]));
        let back = TheoryStructure::from_structure(&s.to_structure(2).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn t1_on_bitset_structures() {
        let b = BaseSet::new(2).unwrap();
        let empty = Structure::theory(
            b,
            vec![
                Relation::empty(b, 1).unwrap(),
                Relation::empty(b, 2).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(check_t1(&empty), Ok(None));
        let loopy = Structure::theory(
            b,
            vec![
                Relation::empty(b, 1).unwrap(),
                Relation::from_tuples(b, 2, [[0, 0]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(check_t1(&loopy), Ok(Some(vec![0, 0])));
        let wrong = Structure::new(b)
            .with("e", Relation::empty(b, 2).unwrap())
            .unwrap();
        assert!(check_t1(&wrong).is_err());
    }

    #[test]
    fn weak_tuples() {
        let h: HWeight = [(5, 0), (6, 5)].into_iter().collect();
        assert!(!weak_tuple(&h, &[0, 1]));
        assert!(weak_tuple(&h, &[5]));
        assert!(!weak_tuple(&h, &[6, 0, 1]));
        assert!(weak_tuple(&h, &[0, 5]));
    }

    #[test]
    fn submodel_examples() {
        let n = TheoryStructure::new(2).unwrap();
        assert_eq!(check_submodel_h(&n, &n, &HWeight::new()), Ok(None));

        let h: HWeight = [(2, 0)].into_iter().collect();
        let m = TheoryStructure::new(3).unwrap();
        assert_eq!(check_submodel_h(&n, &m, &h), Ok(None));

        let mut bad = m.clone();
        bad.set(vec![2, 0], true);
        assert_eq!(check_submodel_h(&n, &bad, &h), Ok(Some(vec![2, 0])));
        let strong: HWeight = [(2, 2)].into_iter().collect();
        assert_eq!(check_submodel_h(&n, &bad, &strong), Ok(None));

        let mut changed = bad.clone();
        changed.set(vec![1, 0], true);
        assert_eq!(
            check_submodel_h(&n, &changed, &strong),
            Ok(Some(vec![1, 0]))
        );
        assert!(check_submodel_h(&n, &m, &HWeight::new()).is_err());
    }

    #[test]
    fn reduct_violations() {
        let s = TheoryStructure::new(3).unwrap();
        let shift = PartialMap::from_pairs([(0, 1), (1, 2)]).unwrap();
        assert_eq!(s.reduct_violation(&shift, 3), None);
        let flip = PartialMap::from_pairs([(0, 1), (1, 0)]).unwrap();
        assert_eq!(s.reduct_violation(&flip, 1), None);
        assert_eq!(s.reduct_violation(&flip, 2), Some(vec![0, 1]));
    }
}
