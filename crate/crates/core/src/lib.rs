//! Hardy–Littlewood maximal operators on finite graphs.
//!
//! The crate evaluates centered and uncentered (fractional) maximal
//! functions, p-variations and l^p norms, tabulates the known sharp constants
//! for the complete graph `K_n` and the star graph `S_n` together with their
//! extremizers, and estimates the corresponding suprema numerically.
//!
//! It is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constants;
pub mod error;
mod exact_sum;
pub mod graph;
pub mod maxop;
pub mod search;
pub mod variation;

pub use constants::{ConstantResult, ProofStatus, Target};
pub use error::{
    ConstantError, GraphError, MajorizationError, RatioError, SearchError, ValueError,
};
pub use graph::{Ball, Family, Graph, Vertex, UNREACHABLE};
pub use maxop::{
    centered_maximal, shift_counterexample, uncentered_maximal, Alpha, Centering, MaximalOperator,
    VertexFunction,
};
pub use search::{estimate_ratio, two_level_scan, SearchConfig, SearchReport};
pub use variation::{lp_norm, norm_ratio, p_variation, variation_ratio, PExponent, RatioResult};
