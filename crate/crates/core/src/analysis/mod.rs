//! Parameter sweeps, threshold searches and the set-relation experiments.
//!
//! Grid points are evaluated in parallel; results are always returned in
//! parameter order.

mod relations;
mod snac;
mod sweep;
mod theorems;

pub use relations::{eb_ppt_threshold, ppt_min_eigenvalue, relation_report, MidpointCheck, RelationReport};
pub use snac::{
    depolarizing_two_local_closed_form, simplex_lattice, snac_min_eig, snac_min_eig_for_state, snac_sweep,
    snac_uniform_closed_form, two_local_output, two_local_output_state, SimplexPoint, SnacRecord, TwoLocalEvaluator,
};
pub use sweep::{
    bisect_crossing, sign_changes, snbc_witness_sweep, uniform_grid, witness_curve, witness_threshold, SweepRecord,
};
pub use theorems::{theorem_suite, TheoremCheck, TheoremReport};

/// Default bisection width.
pub const BISECTION_TOL: f64 = 1e-9;
/// Default negativity threshold for eigenvalues and witness values.
pub const NEGATIVITY_TOL: f64 = 1e-9;
