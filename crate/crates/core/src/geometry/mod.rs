//! Standard covers of ℙ¹ and ℙ², windowed sections of the tangent and log
//! tangent sheaves, and the Čech (bi)semicosimplicial Lie algebras built
//! from them.
//!
//! Windows bound torus weights rather than chart exponents: a field
//! `X^A Σc_j X_j∂_j` is kept iff `|A_j| ≤ w` for all `j`. Weights do not
//! change under restriction, so windowed Čech objects are honest
//! sub-objects and no truncation ever happens.

mod cech;
mod cover;
mod fields;
mod hypersurface;
pub mod poly;

use thiserror::Error;

pub use cech::{
    cech_lie, cech_line_bundle, chart_inclusion, chi_bisemicosimplicial, log_theta_sections, required_window, sections,
    stable_at, theta_sections, CechSections, ChiLie, ChiSections, ColumnKey, ConeLie, Sheaf, WindowedSections,
};
pub use cover::{standard_cover, substitute, Chart, Cover};
pub use fields::{
    drop_index, line_bundle_keys, regular_dirs, window_keys, window_weights, FieldKey, LineBundleLie, SectionKey,
    ThetaLie,
};
pub use hypersurface::{apply_field, apply_vec, Hypersurface};

use crate::bisimplicial::BisimplicialError;
use crate::simplicial::SimplicialError;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("unsupported variety: P{0} (only P1 and P2)")]
    UnsupportedDimension(usize),
    #[error("chart transitions do not compose on charts {0:?}")]
    Cocycle(Vec<usize>),
    #[error("invalid multi-index {0:?}")]
    MultiIndex(Vec<usize>),
    #[error("window {window} is too small (need at least {required})")]
    WindowTooSmall { window: u32, required: u32 },
    #[error("{what} is not window-stable: {low} at window {window}, {high} at window {}", window + 2)]
    Unstable { what: String, window: u32, low: String, high: String },
    #[error("subscheme lives in P{subscheme}, cover is of P{cover}")]
    DimensionMismatch { cover: usize, subscheme: usize },
    #[error("no coordinate change makes the hypersurface meet every chart")]
    NoCoordinateChange,
    #[error("restriction ∂_{k} into level {level} leaves the section space")]
    RestrictionLeavesWindow { level: usize, k: usize },
    #[error("log sections at level {level} are not fields")]
    NotSubsheaf { level: usize },
    #[error("invalid subscheme equation: {0}")]
    Poly(#[from] poly::PolyError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Bisimplicial(#[from] BisimplicialError),
}
