//! Exact convex-body calculus: polytope face lattices, abstract face posets with join tables,
//! dimension, face-dimension, adherence, codimension, polar duals and linear invariance.

mod analysis;
mod polytope;
mod poset;
mod rational;
mod sphere;

pub use analysis::{
    analyze_polytope, analyze_poset, dual_body, format_point, linear_invariance_check, parse_rational,
    random_invertible, random_polytope3, same_body, AnalysisReport, AnalyzedPolytope, Claim, FaceReport,
    InvarianceReport, CLAIM_NAMES, REPORT_SCHEMA_VERSION,
};
pub use polytope::{
    Facet, FacetSummary, Location, PolytopeSummary, RationalPolytope, MAX_VERTICES, MAX_VERTICES_PLANAR,
};
pub use poset::{AdherenceData, FacePoset, FaceRecord, JoinEntry, PosetDocument, POSET_SCHEMA_VERSION};
pub use rational::{affine_rank, det, fmt_q, q, qfrac, rationalize, to_f64, Q, QVec};
pub use sphere::{
    dual_sphere_experiment, primal_sphere_experiment, DualSphereReport, FlatEdge, PrimalSample,
    PrimalSphereReport, DEFAULT_DENOMINATOR,
};
