//! Non-contextual autonomy scoring.
//!
//! Pipeline: [`ingest`] a platform × feature matrix and an evaluation
//! config, [`normalize`] and [`aggregate`] features into component
//! performance scores (N_CP), [`level`] classify autonomy levels (N_AL),
//! place each platform at `<N_AL, N_CP>` and measure distances in
//! [`geometry`], and compare method rankings in [`ranking`].

pub mod aggregate;
pub mod error;
pub mod geometry;
pub mod ingest;
pub mod level;
pub mod normalize;
pub mod ranking;
pub mod scores;

pub use aggregate::{
    score_table, weighted_product, weighted_sum, Method, ScoreTable, WeightScheme, WeightVector,
};
pub use error::{NcapError, Result};
pub use geometry::{
    autonomy_distance, coordinate_plot_data, distance_report, relative_distance, select_reference,
    DistanceReport, NcapCoordinate,
};
pub use ingest::{
    parse_feature_matrix, resolve_missing, write_feature_matrix, Cell, Direction, EvalConfig,
    FeatureMatrix, FeatureSpec, MissingValuePolicy, ResolvedMatrix,
};
pub use level::{classify, AutonomyLevel, CapabilityProfile};
pub use normalize::{
    eta_map, eta_max, eta_sum, eta_zsc, NormalizationMethod, NormalizedColumn, StdDev,
};
pub use ranking::{
    consensus_report, kendall_tau, rank_scores, AgreementStats, RankColumn, RankTable,
};
