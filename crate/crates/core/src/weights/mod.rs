//! Weights on (-1,1), the `A_p` condition and the operators whose
//! boundedness it governs.

mod ap;
mod operators;
mod power;
mod probe;

pub use ap::{
    ap_numeric, corollary_predicate, power_pair_in_ap, theorem_conditions, unweighted_p_range, ApReport, ApVerdict,
    TheoremConditions,
};
pub use operators::{
    calderon, calderon_with_breaks, hilbert, hilbert_with_breaks, operator_j, operator_j_with_breaks, HILBERT_TOL,
};
pub use power::{FnWeight, PowerWeight, Weight};
pub use probe::{boundedness_probe, probe_ratio, BumpSpline, ProbeOperator, ProbeReport, ProbeRow};
