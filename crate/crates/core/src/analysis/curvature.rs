use serde::Serialize;

use super::AnalysisError;
use crate::expr::Jet3;
use crate::geom::{Grid, Point};
use crate::web::ThreeWeb;

/// `|f_x|` or `|f_y|` below this makes the curvature undefined.
pub const DEGENERATE_PARTIAL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureSample {
    pub point: Point,
    pub k: f64,
}

/// Blaschke curvature of `{x, y, f}` from the jet of `f`:
///
/// ```text
/// K = ∂ₓ∂ᵧ ln|f_x / f_y| / (f_x f_y)
///   = [ (f_xxy f_x − f_xx f_xy)/f_x² − (f_xyy f_y − f_xy f_yy)/f_y² ] / (f_x f_y)
/// ```
///
/// Only the zero set of `K` is convention-independent; the sign and scale
/// follow this formula.
pub fn curvature_from_jet(jet: &Jet3) -> Option<f64> {
    let fx = jet.partial(1, 0);
    let fy = jet.partial(0, 1);
    if fx.abs() < DEGENERATE_PARTIAL || fy.abs() < DEGENERATE_PARTIAL {
        return None;
    }
    let fxx = jet.partial(2, 0);
    let fxy = jet.partial(1, 1);
    let fyy = jet.partial(0, 2);
    let fxxy = jet.partial(2, 1);
    let fxyy = jet.partial(1, 2);
    let mixed = (fxxy * fx - fxx * fxy) / (fx * fx) - (fxyy * fy - fxy * fyy) / (fy * fy);
    Some(mixed / (fx * fy))
}

pub fn blaschke_curvature(web: &ThreeWeb, p: Point) -> Result<f64, AnalysisError> {
    let f = web.web_function()?;
    let jet = f.eval_jet3(p)?;
    curvature_from_jet(&jet).ok_or(AnalysisError::Degenerate {
        point: p,
        fx: jet.partial(1, 0),
        fy: jet.partial(0, 1),
    })
}

/// Curvature at every admissible grid point, row-major.
pub fn curvature_grid(web: &ThreeWeb, grid: Grid) -> Result<Vec<CurvatureSample>, AnalysisError> {
    web.web_function()?;
    let mut samples = Vec::new();
    for p in grid.points(&web.domain.rect) {
        if !web.domain.is_admissible(p)? {
            continue;
        }
        samples.push(CurvatureSample {
            point: p,
            k: blaschke_curvature(web, p)?,
        });
    }
    Ok(samples)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParallelizabilityReport {
    pub grid: Grid,
    pub tolerance: f64,
    pub samples: usize,
    pub max_abs_k: f64,
    pub max_at: Option<Point>,
    pub min_abs_k: f64,
    pub min_at: Option<Point>,
    pub parallelizable: bool,
}

impl ParallelizabilityReport {
    pub fn from_samples(samples: &[CurvatureSample], grid: Grid, tolerance: f64) -> Self {
        let mut report = ParallelizabilityReport {
            grid,
            tolerance,
            samples: samples.len(),
            max_abs_k: 0.0,
            max_at: None,
            min_abs_k: f64::INFINITY,
            min_at: None,
            parallelizable: true,
        };
        for s in samples {
            let a = s.k.abs();
            if report.max_at.is_none() || a > report.max_abs_k {
                report.max_abs_k = a;
                report.max_at = Some(s.point);
            }
            if a < report.min_abs_k {
                report.min_abs_k = a;
                report.min_at = Some(s.point);
            }
        }
        report.parallelizable = report.max_abs_k <= tolerance;
        report
    }
}

/// "Parallelizable" iff `max |K| ≤ tolerance` over the admissible grid.
pub fn parallelizability_report(
    web: &ThreeWeb,
    grid: Grid,
    tolerance: f64,
) -> Result<ParallelizabilityReport, AnalysisError> {
    let samples = curvature_grid(web, grid)?;
    Ok(ParallelizabilityReport::from_samples(&samples, grid, tolerance))
}
