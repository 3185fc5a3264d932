//! The theory with one relation per arity, weak tuples, and a finite staged builder for its
//! models together with the checks its stages satisfy.

mod build;
mod extend;
mod model;
mod richness;
mod rigid;

pub use build::{build_model, BuildParams, ClauseSchedule, PaEntry, StagedModel};
pub use extend::{extend_stage, StageExtension, Task};
pub use model::{check_submodel_h, check_t1, is_increasing, weak_tuple, HWeight, TheoryStructure};
pub use richness::{t2_richness, t2_richness_with, T2Options, T2Report, UnmetClause};
pub use rigid::{recover_order, OrderVerdict};
