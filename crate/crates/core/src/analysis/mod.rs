//! Parallelizability, decided two independent ways.
//!
//! [`blaschke_curvature`] works from third-order jets of the web function of a
//! normal-form web; [`hexagon_defect`] builds the Thomsen hexagon from traced
//! leaves and needs no formula at all.

mod curvature;
mod hexagon;

use thiserror::Error;

pub use curvature::{
    blaschke_curvature, curvature_from_jet, curvature_grid, parallelizability_report, CurvatureSample,
    ParallelizabilityReport, DEGENERATE_PARTIAL,
};
pub use hexagon::{hexagon_defect, hexagon_defect_with, HexagonFigure, HexagonOptions, LEGS};

use crate::expr::EvalError;
use crate::geom::Point;
use crate::web::{TraceError, WebError};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Web(#[from] WebError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("degenerate direction at ({}, {}): f_x = {fx:e}, f_y = {fy:e}", .point.x, .point.y)]
    Degenerate { point: Point, fx: f64, fy: f64 },
    #[error("hexagon radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("hexagon center ({}, {}) is not admissible", .0.x, .0.y)]
    CenterInadmissible(Point),
    #[error("hexagon leg {leg} leaves the domain near ({}, {})", .at.x, .at.y)]
    LeavesDomain { leg: usize, at: Point },
    #[error("hexagon leg {leg}: no intersection with the target leaf within arc {max_arc}")]
    NoIntersection { leg: usize, max_arc: f64 },
    #[error("hexagon leg {leg}: Newton did not converge (residual {residual:e})")]
    NewtonFailed { leg: usize, residual: f64 },
}
