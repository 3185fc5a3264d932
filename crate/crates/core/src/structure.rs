use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::perm::PartialMap;
use crate::relation::{BaseSet, Relation};

/// A finite base set with named relations in a fixed signature order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    base: BaseSet,
    names: Vec<String>,
    relations: Vec<Relation>,
}

impl Structure {
    pub fn new(base: BaseSet) -> Self {
        Structure {
            base,
            names: Vec::new(),
            relations: Vec::new(),
        }
    }

    /// A structure over the theory signature `r1, r2, ...`, one symbol per arity.
    pub fn theory(base: BaseSet, relations: Vec<Relation>) -> Result<Self> {
        let mut s = Structure::new(base);
        for (i, r) in relations.into_iter().enumerate() {
            if r.arity() != i + 1 {
                return Err(Error::ArityMismatch {
                    expected: i + 1,
                    found: r.arity(),
                });
            }
            s.push(alloc::format!("r{}", i + 1), r)?;
        }
        Ok(s)
    }

    pub fn with(mut self, name: &str, relation: Relation) -> Result<Self> {
        self.push(name.to_string(), relation)?;
        Ok(self)
    }

    pub fn push(&mut self, name: String, relation: Relation) -> Result<()> {
        if relation.base() != self.base {
            return Err(Error::BaseMismatch {
                expected: self.base.size(),
                found: relation.base().size(),
            });
        }
        if self.names.contains(&name) {
            return Err(Error::Invalid(alloc::format!(
                "duplicate relation name `{name}`"
            )));
        }
        self.names.push(name);
        self.relations.push(relation);
        Ok(())
    }

    pub fn base(&self) -> BaseSet {
        self.base
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `(name, arity)` pairs in signature order.
    pub fn signature(&self) -> impl Iterator<Item = (&str, usize)> {
        self.names
            .iter()
            .map(String::as_str)
            .zip(self.relations.iter().map(Relation::arity))
    }

    pub fn get(&self, name: &str) -> Option<&Relation> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.relations[i])
    }

    /// Checks that `f` preserves every relation in both directions on tuples over `dom f`.
    /// Returns the first offending tuple.
    pub fn check_partial_automorphism(&self, f: &PartialMap) -> Result<(), Vec<usize>> {
        let dom: Vec<usize> = f.domain().collect();
        for rel in &self.relations {
            let m = rel.arity();
            if dom.is_empty() {
                break;
            }
            let mut digits = alloc::vec![0; m];
            loop {
                let t: Vec<usize> = digits.iter().map(|&i| dom[i]).collect();
                let image = f.apply_tuple(&t).expect("tuple over domain");
                if rel.contains(&t) != rel.contains(&image) {
                    return Err(t);
                }
                if !crate::relation::advance(&mut digits, dom.len()) {
                    break;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_automorphism_of_order() {
        let b = BaseSet::new(3).unwrap();
        let lt = Relation::from_fn(b, 2, |t| t[0] < t[1]).unwrap();
        let s = Structure::new(b).with("lt", lt).unwrap();
        let shift = PartialMap::from_pairs([(0, 1)]).unwrap();
        assert!(s.check_partial_automorphism(&shift).is_ok());
        let flip = PartialMap::from_pairs([(0, 1), (1, 0)]).unwrap();
        assert_eq!(s.check_partial_automorphism(&flip), Err(alloc::vec![0, 1]));
    }

    #[test]
    fn rejects_foreign_base_and_duplicates() {
        let b = BaseSet::new(3).unwrap();
        let other = Relation::full(BaseSet::new(2).unwrap(), 1).unwrap();
        assert!(Structure::new(b).with("p", other).is_err());
        let r = Relation::full(b, 1).unwrap();
        assert!(Structure::new(b)
            .with("p", r.clone())
            .unwrap()
            .with("p", r)
            .is_err());
    }
}
