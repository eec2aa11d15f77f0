//! Discrete Bayesian networks: variables and assignments, CPT estimation with
//! Dirichlet smoothing, exact inference by enumeration and the Bayesian
//! Dirichlet family score used by structure search.

mod affordance;
mod dataset;
mod distribution;
mod io;
mod network;
mod score;
mod variable;

pub use affordance::{
    affordance_network, affordance_variables, default_affordance_parents, is_affordance_variable,
    ACTION, AFFORDANCE_VARIABLES, COLOR, CONTACT, EFFECTS, FEATURES, HAND_VEL, OBJ_HAND_VEL,
    OBJ_VEL, SHAPE, SIZE,
};
pub use dataset::Dataset;
pub use distribution::Distribution;
pub use network::{Cpt, Network, ParentMap};
pub use score::{family_log_score, family_log_score_by_index};
pub use variable::{Assignment, VarKind, Variable, ABSENT, PRESENT};
