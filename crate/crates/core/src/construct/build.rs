use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::extend::{extend_stage, Task};
use super::model::{check_submodel_h, has_repeat, HWeight, TheoryStructure};
use super::richness::{t2_richness_with, T2Options};
use crate::error::{Error, Result};
use crate::logic::{literal_base_count, Clause, ClauseCode, ClauseCodes, Signature};
use crate::perm::PartialMap;

/// Which clauses each parameter tuple is scheduled with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClauseSchedule {
    /// One clause per sign pattern over all literal bases; a witness for such a clause
    /// witnesses every subclause.
    #[default]
    Complete,
    /// Every clause, the empty one included.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildParams {
    pub stages: usize,
    /// Clauses in `x0..x_n` are scheduled for `n < richness`.
    pub richness: usize,
    /// Arity bound of the reduct the partial automorphisms respect.
    pub s: usize,
    pub seed: u64,
    pub initial_size: usize,
    pub element_cap: usize,
    pub schedule: ClauseSchedule,
}

impl BuildParams {
    pub fn new(stages: usize, richness: usize, s: usize, seed: u64) -> Self {
        BuildParams {
            stages,
            richness,
            s,
            seed,
            initial_size: 3,
            element_cap: 1 << 20,
            schedule: ClauseSchedule::Complete,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaEntry {
    pub stage: usize,
    pub s: usize,
    pub map: PartialMap,
}

/// A chain `M_0 ≤ M_1 ≤ ...` stored as its last member: stage `j` is the induced
/// structure on `0..stage_size(j)`. The ground order is the order of element ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagedModel {
    model: TheoryStructure,
    stage_sizes: Vec<usize>,
    h: HWeight,
    pi: PartialMap,
    pa_log: Vec<PaEntry>,
    seed: u64,
    richness: usize,
    s: usize,
}

impl StagedModel {
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        model: TheoryStructure,
        stage_sizes: Vec<usize>,
        h: HWeight,
        pi: PartialMap,
        pa_log: Vec<PaEntry>,
        seed: u64,
        richness: usize,
        s: usize,
    ) -> Result<Self> {
        let bad = |msg: &str| Err(Error::Invalid(msg.into()));
        if stage_sizes.is_empty() || stage_sizes.windows(2).any(|w| w[0] > w[1]) {
            return bad("stage sizes must be a non-empty ascending list");
        }
        if *stage_sizes.last().expect("non-empty") != model.size() {
            return bad("the last stage must be the whole model");
        }
        if pa_log.iter().any(|e| e.stage >= stage_sizes.len()) {
            return bad("partial automorphism logged for a missing stage");
        }
        for (a, b) in pi.pairs() {
            model.base().check_element(a)?;
            model.base().check_element(b)?;
        }
        Ok(StagedModel {
            model,
            stage_sizes,
            h,
            pi,
            pa_log,
            seed,
            richness,
            s,
        })
    }

    pub fn model(&self) -> &TheoryStructure {
        &self.model
    }

    /// Number of structures in the chain, `M_0` included.
    pub fn stage_count(&self) -> usize {
        self.stage_sizes.len()
    }

    pub fn stage_sizes(&self) -> &[usize] {
        &self.stage_sizes
    }

    pub fn stage_size(&self, j: usize) -> usize {
        self.stage_sizes[j]
    }

    pub fn stage(&self, j: usize) -> TheoryStructure {
        self.model
            .restrict(self.stage_sizes[j])
            .expect("stage sizes are bounded by the model")
    }

    /// Smallest stage containing `x`.
    pub fn stage_of(&self, x: usize) -> Option<usize> {
        self.stage_sizes.iter().position(|&n| x < n)
    }

    /// Weights of every element outside `M_0`.
    pub fn h(&self) -> &HWeight {
        &self.h
    }

    /// Weights of the elements outside `M_j`.
    pub fn h_from(&self, j: usize) -> HWeight {
        self.h.restrict(self.stage_sizes[j]..self.model.size())
    }

    /// The final partial automorphism of the `s`-reduct.
    pub fn pi(&self) -> &PartialMap {
        &self.pi
    }

    pub fn pa_log(&self) -> &[PaEntry] {
        &self.pa_log
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn richness(&self) -> usize {
        self.richness
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Runs every structural check on the chain and returns the first failure.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Postcondition(msg));
        if let Some(t) = self.model.t1_violation() {
            return fail(alloc::format!("T1 fails at {t:?}"));
        }
        let last = self.stage_count() - 1;
        for j in 0..last {
            let h = self
                .h
                .restrict(self.stage_sizes[j]..self.stage_sizes[j + 1]);
            if let Some(t) = check_submodel_h(&self.stage(j), &self.stage(j + 1), &h)? {
                return fail(alloc::format!(
                    "stage {j} is not a weak submodel of stage {} at {t:?}",
                    j + 1
                ));
            }
        }
        if let Some(t) = check_submodel_h(&self.stage(0), &self.model, &self.h_from(0))? {
            return fail(alloc::format!(
                "stage 0 is not a weak submodel of the final stage at {t:?}"
            ));
        }
        if let Some(t) = self.model.reduct_violation(&self.pi, self.s) {
            return fail(alloc::format!(
                "the partial automorphism breaks the {}-reduct at {t:?}",
                self.s
            ));
        }
        for e in &self.pa_log {
            if !self.pi.extends(&e.map) {
                return fail(alloc::format!(
                    "logged map of stage {} is not extended",
                    e.stage
                ));
            }
            let covered =
                (0..self.stage_sizes[e.stage]).all(|a| self.pi.in_domain(a) && self.pi.in_image(a));
            if e.stage < last && !covered {
                return fail(alloc::format!(
                    "stage {} is not covered by the partial automorphism",
                    e.stage
                ));
            }
        }
        if last > 0 && self.richness > 0 {
            let opts = T2Options {
                param_bound: Some(self.stage_sizes[last - 1]),
                max_report: 1,
            };
            let report = t2_richness_with(&self.model, self.richness - 1, opts)?;
            if let Some(u) = report.unmet.first() {
                return fail(alloc::format!(
                    "no witness for parameters {:?} and {}",
                    u.params,
                    u.clause
                        .to_formula()
                        .display(&Signature::theory(u.clause.n() + 1))
                ));
            }
        }
        Ok(())
    }
}

/// Builds `stages` extension steps on a seeded `M_0`, scheduling every clause task over the
/// previous stage in a seeded order.
pub fn build_model(params: &BuildParams) -> Result<StagedModel> {
    if params.richness == 0 || params.s == 0 || params.initial_size == 0 {
        return Err(Error::Invalid(
            "richness, s and the initial size must be positive".into(),
        ));
    }
    if literal_base_count(params.richness - 1) > 32 {
        return Err(Error::ElementCap(params.element_cap));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut model = initial_model(params.initial_size, &mut rng)?;
    let mut pi = random_partial_automorphism(&model, params.s, &mut rng);
    let mut stage_sizes = alloc::vec![model.size()];
    let mut h = HWeight::new();
    let mut pa_log = Vec::new();
    for j in 0..params.stages {
        let size = model.size();
        let task_count = count_tasks(size, params.richness, params.schedule);
        let bound = task_count.and_then(|t| t.checked_add(size.checked_mul(3)?));
        if bound.is_none_or(|b| b > params.element_cap) {
            return Err(Error::ElementCap(params.element_cap));
        }
        let mut tasks = schedule_tasks(size, params.richness, params.schedule);
        tasks.shuffle(&mut rng);
        pa_log.push(PaEntry {
            stage: j,
            s: params.s,
            map: pi.clone(),
        });
        let ext = extend_stage(&model, &pi, params.s, &tasks)?;
        model = ext.model;
        pi = ext.pi;
        h.extend(&ext.h);
        stage_sizes.push(model.size());
    }
    StagedModel::from_parts(
        model,
        stage_sizes,
        h,
        pi,
        pa_log,
        params.seed,
        params.richness,
        params.s,
    )
}

/// Random truth values on every tuple of distinct elements.
fn initial_model(size: usize, rng: &mut ChaCha8Rng) -> Result<TheoryStructure> {
    let mut m = TheoryStructure::new(size)?;
    for arity in 1..=size {
        for t in m.base().tuples(arity) {
            if !has_repeat(&t) {
                let v = rng.gen_bool(0.5);
                m.set(t, v);
            }
        }
    }
    Ok(m)
}

/// Greedily pairs elements in a random order, keeping each pair that preserves the reduct.
fn random_partial_automorphism(m: &TheoryStructure, s: usize, rng: &mut ChaCha8Rng) -> PartialMap {
    let mut xs: Vec<usize> = (0..m.size()).collect();
    xs.shuffle(rng);
    let mut map = PartialMap::new();
    for x in xs {
        let free: Vec<usize> = (0..m.size()).filter(|&y| !map.in_image(y)).collect();
        let Some(&y) = free.choose(rng) else { break };
        let mut trial = map.clone();
        trial.insert(x, y).expect("fresh pair");
        if m.reduct_violation(&trial, s).is_none() {
            map = trial;
        }
    }
    map
}

fn clauses_per_tuple(n: usize, schedule: ClauseSchedule) -> Option<usize> {
    let bases = u32::try_from(literal_base_count(n)).ok()?;
    match schedule {
        ClauseSchedule::Complete => 2usize.checked_pow(bases),
        ClauseSchedule::All => 3usize.checked_pow(bases),
    }
}

fn count_tasks(size: usize, richness: usize, schedule: ClauseSchedule) -> Option<usize> {
    let mut total = 0usize;
    for n in 0..richness {
        let tuples = (0..n).try_fold(1usize, |acc, i| acc.checked_mul(size.checked_sub(i)?))?;
        total = total.checked_add(tuples.checked_mul(clauses_per_tuple(n, schedule)?)?)?;
    }
    Some(total)
}

fn schedule_tasks(size: usize, richness: usize, schedule: ClauseSchedule) -> Vec<Task> {
    let mut tasks = Vec::new();
    for n in (0..richness).filter(|&n| n <= size) {
        let bases = literal_base_count(n);
        let codes: Vec<ClauseCode> = match schedule {
            ClauseSchedule::Complete => {
                let full = if bases == 64 {
                    u64::MAX
                } else {
                    (1u64 << bases) - 1
                };
                (0..=full)
                    .map(|pos| ClauseCode {
                        pos,
                        neg: full & !pos,
                    })
                    .collect()
            }
            ClauseSchedule::All => ClauseCodes::new(bases).collect(),
        };
        let clauses: Vec<Clause> = codes
            .into_iter()
            .map(|c| Clause::from_code(n, c).expect("valid code"))
            .collect();
        let mut params = alloc::vec![0usize; n];
        loop {
            if !has_repeat(&params) {
                tasks.extend(clauses.iter().map(|k| Task {
                    params: params.clone(),
                    clause: k.clone(),
                }));
            }
            if n == 0 || !crate::relation::advance(&mut params, size) {
                break;
            }
        }
    }
    tasks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_counts() {
        assert_eq!(count_tasks(3, 2, ClauseSchedule::Complete), Some(2 + 3 * 8));
        assert_eq!(schedule_tasks(3, 2, ClauseSchedule::Complete).len(), 26);
        assert_eq!(count_tasks(3, 2, ClauseSchedule::All), Some(3 + 3 * 27));
        assert_eq!(schedule_tasks(3, 2, ClauseSchedule::All).len(), 84);
        assert_eq!(
            count_tasks(3, 3, ClauseSchedule::Complete),
            Some(26 + 6 * 2048)
        );
        assert_eq!(count_tasks(1, 3, ClauseSchedule::Complete), Some(2 + 8));
    }

    #[test]
    fn zero_stages_is_just_the_seed_structure() {
        let sm = build_model(&BuildParams::new(0, 1, 1, 3)).unwrap();
        assert_eq!(sm.stage_count(), 1);
        assert_eq!(sm.model().size(), 3);
        assert!(sm.h().is_empty());
        sm.verify().unwrap();
    }

    #[test]
    fn small_build_passes_its_checks() {
        let sm = build_model(&BuildParams::new(1, 1, 1, 7)).unwrap();
        assert_eq!(sm.stage_count(), 2);
        assert!(sm.model().size() > 3);
        sm.verify().unwrap();
        assert_eq!(sm, build_model(&BuildParams::new(1, 1, 1, 7)).unwrap());
    }

    #[test]
    fn all_schedule_and_caps() {
        let mut p = BuildParams::new(1, 2, 1, 1);
        p.schedule = ClauseSchedule::All;
        build_model(&p).unwrap().verify().unwrap();
        p.element_cap = 10;
        assert_eq!(build_model(&p), Err(Error::ElementCap(10)));
        assert!(build_model(&BuildParams::new(1, 0, 1, 1)).is_err());
    }
}
