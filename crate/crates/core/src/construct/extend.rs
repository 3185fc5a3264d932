use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::model::{check_submodel_h, has_repeat, is_increasing, HWeight, TheoryStructure};
use crate::error::{Error, Result};
use crate::logic::Clause;
use crate::perm::PartialMap;

/// Make `clause` true at `(x0, params)` for some fresh `x0`; `clause.n()` equals `params.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub params: Vec<usize>,
    pub clause: Clause,
}

impl Task {
    pub fn new(params: Vec<usize>, clause: Clause) -> Result<Self> {
        if clause.n() != params.len() {
            return Err(Error::InvalidClause(alloc::format!(
                "clause in x0..x{} given {} parameters",
                clause.n(),
                params.len()
            )));
        }
        if has_repeat(&params) {
            return Err(Error::Invalid(alloc::format!(
                "task parameters {params:?} are not pairwise distinct"
            )));
        }
        Ok(Task { params, clause })
    }

    /// Does `clause` hold at `(x0, params)` in `s`?
    pub fn holds_at(&self, s: &TheoryStructure, x0: usize) -> bool {
        self.clause
            .literals()
            .iter()
            .all(|l| s.holds(&substitute(&l.args, x0, &self.params)) == l.positive)
    }
}

fn substitute(args: &[usize], x0: usize, params: &[usize]) -> Vec<usize> {
    args.iter()
        .map(|&v| if v == 0 { x0 } else { params[v - 1] })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageExtension {
    pub model: TheoryStructure,
    /// Weights of the new elements.
    pub h: HWeight,
    pub pi: PartialMap,
    /// The witness created for each task, in task order.
    pub witnesses: Vec<usize>,
}

/// One extension step: every task gets a fresh witness and `pi` is extended until its domain
/// and image cover the old elements, new elements being appended after `m.size() - 1`.
/// Steps cycle through a witness, a forward and a backward step; truth values never fixed
/// by a step follow the order default.
pub fn extend_stage(
    m: &TheoryStructure,
    pi: &PartialMap,
    s: usize,
    tasks: &[Task],
) -> Result<StageExtension> {
    if let Some(t) = m.t1_violation() {
        return Err(Error::T1Violation(t));
    }
    for (x, y) in pi.pairs() {
        m.base().check_element(x)?;
        m.base().check_element(y)?;
    }
    if let Some(t) = m.reduct_violation(pi, s) {
        return Err(Error::NotPartialAutomorphism(t));
    }
    for task in tasks {
        if task.clause.n() != task.params.len() || has_repeat(&task.params) {
            return Err(Error::Invalid(alloc::format!(
                "malformed task with parameters {:?}",
                task.params
            )));
        }
        m.base().check_tuple(&task.params)?;
    }

    let mut st = Builder {
        old: m,
        size: m.size(),
        fixed: BTreeMap::new(),
        h: HWeight::new(),
        p: pi.clone(),
    };
    let mut witnesses = Vec::with_capacity(tasks.len());
    let mut l = 0;
    loop {
        let uncovered_dom = (0..m.size()).find(|&a| !st.p.in_domain(a));
        let uncovered_im = (0..m.size()).find(|&a| !st.p.in_image(a));
        if l >= tasks.len() && uncovered_dom.is_none() && uncovered_im.is_none() {
            break;
        }
        if let Some(task) = tasks.get(l) {
            witnesses.push(st.witness(task)?);
        }
        if let Some(a) = (0..m.size()).find(|&a| !st.p.in_domain(a)) {
            st.forward(a, s)?;
        }
        if let Some(a) = (0..m.size()).find(|&a| !st.p.in_image(a)) {
            st.backward(a, s)?;
        }
        l += 1;
    }

    let mut model = m.clone();
    model.grow(st.size);
    for (t, v) in st.fixed {
        model.set(t, v);
    }
    let ext = StageExtension {
        model,
        h: st.h,
        pi: st.p,
        witnesses,
    };
    postcheck(m, pi, s, tasks, &ext)?;
    Ok(ext)
}

struct Builder<'a> {
    old: &'a TheoryStructure,
    size: usize,
    /// Values fixed so far on tuples that involve a new element.
    fixed: BTreeMap<Vec<usize>, bool>,
    h: HWeight,
    p: PartialMap,
}

impl Builder<'_> {
    fn fresh(&mut self, weight: usize) -> usize {
        let b = self.size;
        self.size += 1;
        self.h.insert(b, weight);
        b
    }

    fn known(&self, t: &[usize]) -> Option<bool> {
        if t.iter().all(|&a| a < self.old.size()) {
            Some(self.old.holds(t))
        } else if has_repeat(t) {
            Some(false)
        } else {
            self.fixed.get(t).copied()
        }
    }

    fn commit(&mut self, t: Vec<usize>, value: bool) -> Result<()> {
        match self.known(&t) {
            Some(v) if v != value => Err(Error::Conflict(t)),
            Some(_) => Ok(()),
            None => {
                self.fixed.insert(t, value);
                Ok(())
            }
        }
    }

    fn witness(&mut self, task: &Task) -> Result<usize> {
        let b = self.fresh(task.params.len() + 1);
        for lit in task.clause.literals() {
            self.commit(substitute(&lit.args, b, &task.params), lit.positive)?;
        }
        Ok(b)
    }

    /// Maps `a` to a fresh `b` and fixes every tuple over `im p` through `b` up to arity `s`.
    fn forward(&mut self, a: usize, s: usize) -> Result<()> {
        let b = self.fresh(s);
        self.p.insert(a, b)?;
        let im: Vec<usize> = self.p.image().collect();
        for c in tuples_through(&im, b, s) {
            let d = self.p.preimage_tuple(&c).expect("tuple over the image");
            self.copy_or_order(c, d)?;
        }
        Ok(())
    }

    /// Maps a fresh `b` to `a` and fixes every tuple over `dom p` through `b` up to arity `s`.
    fn backward(&mut self, a: usize, s: usize) -> Result<()> {
        let b = self.fresh(s);
        self.p.insert(b, a)?;
        let dom: Vec<usize> = self.p.domain().collect();
        for c in tuples_through(&dom, b, s) {
            let d = self.p.apply_tuple(&c).expect("tuple over the domain");
            self.copy_or_order(c, d)?;
        }
        Ok(())
    }

    /// `c` takes the value of its counterpart `d`; if `d` is still open both follow the
    /// order of `d`.
    fn copy_or_order(&mut self, c: Vec<usize>, d: Vec<usize>) -> Result<()> {
        match self.known(&d) {
            Some(v) => self.commit(c, v),
            None => {
                let v = is_increasing(&d);
                self.commit(d, v)?;
                self.commit(c, v)
            }
        }
    }
}

/// All tuples of pairwise distinct members of `pool` with arity `1..=s` that contain `b`.
fn tuples_through(pool: &[usize], b: usize, s: usize) -> Vec<Vec<usize>> {
    let others: Vec<usize> = pool.iter().copied().filter(|&x| x != b).collect();
    let mut out = Vec::new();
    for m in 1..=s.min(others.len() + 1) {
        let mut idx = alloc::vec![0usize; m - 1];
        loop {
            if !has_repeat(&idx) {
                for pos in 0..m {
                    let mut t: Vec<usize> = idx.iter().map(|&i| others[i]).collect();
                    t.insert(pos, b);
                    out.push(t);
                }
            }
            if m == 1 || !crate::relation::advance(&mut idx, others.len()) {
                break;
            }
        }
    }
    out
}

fn postcheck(
    m: &TheoryStructure,
    pi: &PartialMap,
    s: usize,
    tasks: &[Task],
    ext: &StageExtension,
) -> Result<()> {
    let fail = |msg: alloc::string::String| Err(Error::Postcondition(msg));
    if let Some(t) = check_submodel_h(m, &ext.model, &ext.h)? {
        return fail(alloc::format!("old stage is not a weak submodel at {t:?}"));
    }
    if let Some(t) = ext.model.t1_violation() {
        return fail(alloc::format!("T1 fails at {t:?}"));
    }
    if !ext.pi.extends(pi) {
        return fail("the partial automorphism was not extended".into());
    }
    if let Some(a) = (0..m.size()).find(|&a| !ext.pi.in_domain(a) || !ext.pi.in_image(a)) {
        return fail(alloc::format!(
            "element {a} is not covered by the partial automorphism"
        ));
    }
    if let Some(t) = ext.model.reduct_violation(&ext.pi, s) {
        return fail(alloc::format!(
            "partial automorphism breaks the {s}-reduct at {t:?}"
        ));
    }
    for (task, &b) in tasks.iter().zip(&ext.witnesses) {
        if !task.holds_at(&ext.model, b) {
            return fail(alloc::format!(
                "task with parameters {:?} has no witness",
                task.params
            ));
        }
    }
    Ok(())
}
