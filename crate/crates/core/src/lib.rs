//! Matoušek-type unique sink orientations: construction, recognition,
//! realizability, and exact P-LCP realizations via simple extensions of
//! cyclic P-matroids, plus a Random Facet harness.

pub mod cube;
pub mod error;
pub mod linalg;
pub mod matousek;
pub mod matroid;
pub mod plcp;
pub mod random_facet;
pub mod realizability;
pub mod realize;

pub use cube::{
    apply_isomorphism, check_orientation, global_sink, is_uso, unique_sink_per_face, DimSet, Face,
    Isomorphism, Orientation, Vertex,
};
pub use error::{Error, Result};
pub use linalg::{Rational, RationalMatrix};
pub use matousek::{build_matousek, canonicalize, extract_influence_graph, flip_facet, InfluenceGraph};
pub use matroid::{
    extension_to_uso, fundamental_circuit, g_pi, is_p_matroid, validate_conditions,
    verify_circuit_axioms, CyclicExtension, SignedSet,
};
pub use plcp::{
    is_p_matrix, plcp_to_uso, realization_matrix, solve_candidate, translate_to_plcp,
    CandidateSolution, PlcpInstance,
};
pub use random_facet::{random_facet, run_trials, Family, RfResult, TrialStats};
pub use realizability::{
    find_forbidden, holt_klee_3face, is_branching_closure, synthesize_extension, Branching,
    ForbiddenKind, ForbiddenWitness,
};
pub use realize::{realize, Realization};
