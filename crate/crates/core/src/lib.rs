//! Tiling-space metrics built from right-invariant perturbation groups, and
//! Ramsey-type recurrence searches producing checkable certificates.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod groups;
pub mod io;
pub mod matching;
pub mod metric;
pub mod ramsey;
pub mod recurrence;
pub mod theta;

pub use error::{Error, Result};
pub use geometry::{Ball, Pattern, Patch, Point, Tile, TilingSource};
pub use groups::{Action, BaseKind, GroupElement};
pub use metric::Interval;
pub use theta::ThetaFn;

/// Area tolerance for interior-disjointness and coverage tests.
pub const EPS_GEOM: f64 = 1e-9;

/// Upper cap of the tiling distance.
pub const DIST_CAP: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Outcome of a certificate check: the first failing clause, if any.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Verdict {
    pub ok: bool,
    pub reason: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { ok: true, reason: None }
    }

    pub fn fail(reason: impl Into<String>) -> Self {
        Verdict { ok: false, reason: Some(reason.into()) }
    }
}
