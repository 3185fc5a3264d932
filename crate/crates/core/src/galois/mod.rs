//! Both sides of the Galois connection between relation sets and permutation groups,
//! with the closure operators built on them.

mod aut;
mod closed;
mod encode;
mod group;
mod krasner;
mod relset;
mod sinv;
mod superposition;

pub use aut::{aut, aut_of_relations, aut_of_structure};
pub use closed::{check_homogeneous, is_galois_closed, GaloisVerdict, HomogeneityVerdict};
pub use encode::{encode_single, reduce_generators};
pub use group::{generate_group, symmetric_generators, PermGroup};
pub use krasner::{ka_atoms, ka_atoms_with, ka_closure, ka_closure_with, KaOptions};
pub use relset::RelationSet;
pub use sinv::{
    galois_atoms, galois_closure, galois_closure_with_cap, gamma, sim, sim_classes, sinv,
    sinv_with_cap, unions_of_atoms, Sinv, DEFAULT_CAP,
};
pub use superposition::{invariant_image_op, loc_o, ssup};
