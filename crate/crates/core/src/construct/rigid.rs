use alloc::vec::Vec;

use super::build::StagedModel;
use crate::error::{Error, Result};
use crate::perm::all_permutations;

/// Largest element set whose arrangements are enumerated.
const MAX_SET: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderVerdict {
    Less,
    Greater,
    Undecidable,
}

/// Reads the relative order of `x` and `y` off the relations alone.
///
/// `S` is the least stage holding both. A point `p` outside `S` of least weight is joined by
/// `x`, `y` and the smallest other members of `S` until the set has `m > h(p)` elements, so
/// every arrangement of the set is weak. The order law then leaves exactly one arrangement
/// in `r_m`, and the positions of `x` and `y` in it decide.
pub fn recover_order(sm: &StagedModel, x: usize, y: usize) -> Result<OrderVerdict> {
    let model = sm.model();
    model.base().check_element(x)?;
    model.base().check_element(y)?;
    if x == y {
        return Err(Error::SameElement);
    }
    let stage = sm.stage_of(x.max(y)).expect("element is in the model");
    let s_size = sm.stage_size(stage);
    let h = sm.h_from(stage);
    let mut outside: Vec<(usize, usize)> = h.iter().map(|(p, w)| (w, p)).collect();
    outside.sort_unstable();
    let Some(&(w, p)) = outside.first() else {
        return Ok(OrderVerdict::Undecidable);
    };
    let m = (w + 1).max(3);
    if m > MAX_SET || m - 3 > s_size - 2 {
        return Ok(OrderVerdict::Undecidable);
    }
    let mut set = alloc::vec![x, y, p];
    set.extend((0..s_size).filter(|&z| z != x && z != y).take(m - 3));
    let mut found = None;
    for g in all_permutations(m) {
        let arrangement: Vec<usize> = g.images().iter().map(|&i| set[i]).collect();
        if model.holds(&arrangement) {
            if found.is_some() {
                return Ok(OrderVerdict::Undecidable);
            }
            found = Some(arrangement);
        }
    }
    Ok(match found {
        None => OrderVerdict::Undecidable,
        Some(a) => {
            let pos = |e: usize| a.iter().position(|&v| v == e);
            if pos(x) < pos(y) {
                OrderVerdict::Less
            } else {
                OrderVerdict::Greater
            }
        }
    })
}
