//! The once-punctured torus: Fricke traces, slopes, Thurston distance and Finsler norm as
//! truncated suprema over Farey levels, and flows transplanted from the annulus laws.
//!
//! The surface-level stretch law is a candidate: every flow step carries a max-ratio
//! certificate, and a failing certificate is reported rather than hidden.

mod flow;
mod fricke;
mod metric;
mod slope;

pub use flow::{
    backtime_experiment, closed_leaf_length_from_shears, flow_point, flow_trace, flow_vector,
    length_extraction, stretch_flow, BacktimeReport, BacktimeRow, ExtractionReport, ExtractionRow,
    FlowStep, FlowTrace, FlowValidation,
};
pub use fricke::{
    fn_to_fricke, fricke_to_fn, slope_length, ChartPoint, Covector, FrickeTriple, Marking,
    SurfacePoint, TangentVec,
};
pub use metric::{covector_sample, covector_samples, finsler_norm, thurston_distance, SupReport};
pub use slope::{
    algebraic_intersection, dehn_twist, enumerate_slopes, enumerate_slopes_with_level,
    intersection_number, Slope,
};
