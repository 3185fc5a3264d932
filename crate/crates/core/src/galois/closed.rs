use alloc::vec::Vec;

use super::aut::{aut, aut_of_structure};
use super::group::Colouring;
use super::relset::RelationSet;
use crate::error::{Error, Result};
use crate::perm::PartialMap;
use crate::relation::decode_tuple;
use crate::structure::Structure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GaloisVerdict {
    Closed,
    /// `a ~_R b`, yet no automorphism maps `a` to `b`.
    NotClosed {
        a: Vec<usize>,
        b: Vec<usize>,
    },
}

impl GaloisVerdict {
    pub fn is_closed(&self) -> bool {
        matches!(self, GaloisVerdict::Closed)
    }
}

/// Decides `R = sInv Aut R` up to `m_max` for an intersection- and complement-closed `R`:
/// it holds iff every `~_R` class is a single `Aut R` orbit.
pub fn is_galois_closed(rels: &RelationSet, m_max: usize) -> Result<GaloisVerdict> {
    if m_max == 0 {
        return Err(Error::ZeroArity);
    }
    for m in 1..=m_max {
        rels.check_boolean_at(m)?;
    }
    let base = rels.base();
    let n = base.size();
    let group = aut(rels);
    for m in 1..=m_max {
        let classes = Colouring::of_relations(base, m, rels.at(m))?;
        let orbits = Colouring::orbits(base, m, group.generators())?;
        // The first tuple of each class fixes the orbit every member must share.
        let mut first: Vec<Option<usize>> = alloc::vec![None; classes.class_count()];
        for idx in 0..classes.colours.len() {
            let c = classes.colours[idx] as usize;
            match first[c] {
                None => first[c] = Some(idx),
                Some(rep) if orbits.colours[rep] != orbits.colours[idx] => {
                    let mut a = alloc::vec![0; m];
                    let mut b = alloc::vec![0; m];
                    decode_tuple(n, rep, &mut a);
                    decode_tuple(n, idx, &mut b);
                    return Ok(GaloisVerdict::NotClosed { a, b });
                }
                Some(_) => {}
            }
        }
    }
    Ok(GaloisVerdict::Closed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomogeneityVerdict {
    Homogeneous,
    /// A partial automorphism that is not the restriction of any automorphism.
    NotExtendable(PartialMap),
}

impl HomogeneityVerdict {
    pub fn is_homogeneous(&self) -> bool {
        matches!(self, HomogeneityVerdict::Homogeneous)
    }
}

/// Checks that every partial automorphism with at most `k` points extends to an automorphism.
/// Maps are tried by size, then domain (ascending sets in lexicographic order), then image
/// (lexicographic); the first failure is returned.
pub fn check_homogeneous(s: &Structure, k: usize) -> HomogeneityVerdict {
    let n = s.base().size();
    let group = aut_of_structure(s);
    for size in 1..=k.min(n) {
        let mut dom: Vec<usize> = (0..size).collect();
        loop {
            let orbit = group.orbit(&dom);
            let mut img = alloc::vec![0usize; size];
            loop {
                if is_injective(&img) {
                    let map = PartialMap::from_pairs(dom.iter().copied().zip(img.iter().copied()))
                        .expect("injective");
                    if s.check_partial_automorphism(&map).is_ok() && !orbit.contains(&img) {
                        return HomogeneityVerdict::NotExtendable(map);
                    }
                }
                if !crate::relation::advance(&mut img, n) {
                    break;
                }
            }
            if !next_combination(&mut dom, n) {
                break;
            }
        }
    }
    HomogeneityVerdict::Homogeneous
}

fn is_injective(t: &[usize]) -> bool {
    (1..t.len()).all(|i| !t[..i].contains(&t[i]))
}

/// Next strictly increasing tuple over `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
