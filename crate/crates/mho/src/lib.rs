//! Rate regions for lossy source coding of a binary source assisted by
//! conditionally independent binary helpers, under Hamming distortion.
//!
//! The crate computes inner and outer bounds on the achievable rate region
//! when every terminal must be decoded (the strong formulation) and the
//! exact region when only the primary source must be decoded (the weak
//! formulation). Closed-form single-letter expressions live in
//! [`single_letter`]; independent brute-force checks over explicit joint
//! pmf tables live in [`oracle`]. The two routes share only the scalar
//! kernels in [`info`] and are reconciled in tests.

pub mod export;
pub(crate) mod hull;
pub mod info;
pub mod oracle;
pub mod regions;
pub mod single_letter;
pub mod spec;
pub(crate) mod tol;

pub use info::{
    binary_convolution, binary_entropy, binary_entropy_inv, BinaryTestChannel, InfoError,
    JointPmf, Probability,
};
pub use oracle::{
    cascade_pmf, subset_sum_rate_oracle, phi_oracle, wz_envelope_oracle, CascadeSpec, OracleError,
    TestChannelBank, WzEnvelope,
};
pub use export::{
    boundary_csv, boundary_queries, build_export, rate_axis, to_json, vertices_csv,
    BoundaryRow, ExportError, ExportMetadata, RegionExport, VertexRow,
};
pub use regions::{
    boundary_slice, contains, inner_region, inner_vertices, outer_region, region_gap,
    slepian_wolf_reduction, weak_region, AchievableTuple, BoundarySample, ConstraintParams,
    GapReport, GridConfig, Mode, ProblemSpec, RateRegion, RateTuple, RegionError, RegionKind,
    SumRateConstraint, SwReport,
};
pub use spec::{max_sources_cap, SpecDocument, SpecError};
pub use single_letter::{
    helper_rate_star, independent_rate, phi, phi_with_cap, wz_critical_distortion, wz_rate,
    wz_rate_curve, wz_rate_curve_slope, CriticalDistortion, DecodeBranch, HelperParams, PhiArgs,
    RateStar, SingleLetterError,
};
