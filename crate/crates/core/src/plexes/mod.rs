//! Transversals, near- and quasi-transversals and k-plexes: validators,
//! exhaustive search engines, packing and the conjecture sweep.

pub mod extend;
pub mod packing;
pub mod search;
pub mod sweep;
pub mod validate;

pub use extend::{complement_plex, extendibility_report, Extendibility};
pub use packing::{
    are_orthogonal, find_orthogonal_mate, max_disjoint_quasi_transversals,
    max_disjoint_transversals, TransversalNumber,
};
pub use search::{
    complete_partial, enumerate_near_transversals, enumerate_quasi_transversals,
    enumerate_transversals, enumerate_transversals_with, find_kplex, find_kplex_with,
    find_near_transversal, find_near_transversal_with, find_quasi_transversal,
    find_quasi_transversal_with, find_transversal, randomized_kplex, randomized_quasi, Heuristic,
    PlexCensus,
};
pub use sweep::{conjecture_sweep, SweepConfig, SweepFamily, SweepReport, SweepRow};
pub use validate::{
    check_kplex, check_near_transversal, check_partial_transversal, check_quasi_transversal,
    check_transversal, Verdict, Violation,
};
