//! Straightness of image foliations and the end-to-end linearization checks.
//!
//! A web is certified linear on a sample: leaves through finitely many seeds
//! are traced, pushed through the candidate map and scored with
//! [`collinearity_residual`]. For maps of the form `(f, y)` the images of the
//! leaves `x = c` are additionally compared to their closed-form lines.

mod collinearity;

use serde::Serialize;
use thiserror::Error;

pub use collinearity::{collinearity_residual, diameter, CollinearityError, MIN_DIAMETER};

use crate::expr::{EvalError, Expr};
use crate::geom::{Grid, Point};
use crate::transform::{diffeo_report, dufour_map, DiffeoReport, PlaneMap, DIFFEO_THRESHOLD};
use crate::web::{
    family_web, general_position_report, Component, Domain, DomainSummary, EndReason, GeneralPositionReport,
    LeafPolyline, ThreeWeb, TraceError, TraceOptions, Tracer, WebError, EPS_GRADIENT,
};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Web(#[from] WebError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("foliation {foliation}, seed ({}, {}): {source}", .seed.x, .seed.y)]
    Trace {
        foliation: usize,
        seed: Point,
        source: TraceError,
    },
    #[error("foliation {foliation}, seed ({}, {}): mapping failed: {source}", .seed.x, .seed.y)]
    Map {
        foliation: usize,
        seed: Point,
        source: EvalError,
    },
    #[error("foliation {foliation}, seed ({}, {}): {source}", .seed.x, .seed.y)]
    Residual {
        foliation: usize,
        seed: Point,
        source: CollinearityError,
    },
    #[error("no admissible seeds on the domain diagonal")]
    NoSeeds,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifySettings {
    pub grid: Grid,
    /// Number of diagonal seeds per foliation (ignored when `seed_points` is set).
    pub seeds: usize,
    pub seed_points: Option<Vec<Point>>,
    pub tol_linearity: f64,
    pub tol_line_formula: f64,
    pub diffeo_threshold: f64,
    pub general_position_threshold: f64,
    /// Arc length traced on each side of a seed.
    pub max_arc: f64,
    pub trace: TraceOptions,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            grid: Grid::DEFAULT,
            seeds: 7,
            seed_points: None,
            tol_linearity: 1e-8,
            tol_line_formula: 1e-9,
            diffeo_threshold: DIFFEO_THRESHOLD,
            general_position_threshold: EPS_GRADIENT,
            max_arc: 8.0,
            trace: TraceOptions::default(),
        }
    }
}

/// Seeds at fractions `(k + ½)/n` of the box diagonal, inadmissible ones skipped.
pub fn diagonal_seeds(domain: &Domain, n: usize) -> Result<Vec<Point>, EvalError> {
    let mut seeds = Vec::with_capacity(n);
    for k in 0..n {
        let p = domain.rect.along_diagonal((k as f64 + 0.5) / n as f64);
        if domain.is_admissible(p)? {
            seeds.push(p);
        }
    }
    Ok(seeds)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeafScore {
    pub seed: Point,
    pub component: Component,
    pub level: f64,
    pub vertices: usize,
    pub ends: [EndReason; 2],
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearityReport {
    pub foliation: usize,
    pub map: String,
    pub tolerance: f64,
    pub leaves: Vec<LeafScore>,
    pub max_residual: f64,
    pub linear: bool,
}

/// A linearity report with the traced leaves and their images.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearityRun {
    pub report: LinearityReport,
    pub leaves: Vec<LeafPolyline>,
    pub images: Vec<LeafPolyline>,
}

/// Traces foliation `k` through each seed, maps the leaves, and scores straightness.
pub fn foliation_linearity(
    web: &ThreeWeb,
    k: usize,
    map: &PlaneMap,
    seeds: &[Point],
    tolerance: f64,
    max_arc: f64,
) -> Result<LinearityRun, VerifyError> {
    foliation_linearity_with(web, k, map, seeds, tolerance, max_arc, &TraceOptions::default())
}

pub fn foliation_linearity_with(
    web: &ThreeWeb,
    k: usize,
    map: &PlaneMap,
    seeds: &[Point],
    tolerance: f64,
    max_arc: f64,
    options: &TraceOptions,
) -> Result<LinearityRun, VerifyError> {
    let tracer = Tracer::with_options(&web.foliation(k)?.integral, &web.domain, *options);
    let mut leaves = Vec::with_capacity(seeds.len());
    let mut images = Vec::with_capacity(seeds.len());
    let mut scores = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let leaf = tracer.trace(k, seed, max_arc).map_err(|source| VerifyError::Trace {
            foliation: k,
            seed,
            source,
        })?;
        let image = map.push_polyline(&leaf).map_err(|source| VerifyError::Map {
            foliation: k,
            seed,
            source,
        })?;
        let residual = collinearity_residual(&image.vertices).map_err(|source| VerifyError::Residual {
            foliation: k,
            seed,
            source,
        })?;
        scores.push(LeafScore {
            seed,
            component: web.domain.component(seed)?,
            level: leaf.level,
            vertices: leaf.len(),
            ends: leaf.ends,
            residual,
        });
        leaves.push(leaf);
        images.push(image);
    }
    let max_residual = scores.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(LinearityRun {
        report: LinearityReport {
            foliation: k,
            map: map.name.clone(),
            tolerance,
            linear: max_residual <= tolerance,
            max_residual,
            leaves: scores,
        },
        leaves,
        images,
    })
}

/// Closed-form image of the leaf `x = c` under `(f, y)`: `x̄` as a function of `(c, ȳ)`.
#[derive(Clone, Debug, PartialEq)]
pub enum LineFormula {
    /// `x̄ = (c + ȳ)e^{-c}`.
    Paper,
    /// `x̄ = a(c)·c + b(c)·ȳ`.
    Family { a: Expr, b: Expr },
}

impl LineFormula {
    pub fn predict(&self, c: f64, y_bar: f64) -> Result<f64, EvalError> {
        match self {
            LineFormula::Paper => Ok((c + y_bar) * (-c).exp()),
            LineFormula::Family { a, b } => {
                let at = Point::new(c, 0.0);
                Ok(a.eval(at)? * c + b.eval(at)? * y_bar)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            LineFormula::Paper => "x' = (c + y')*exp(-c)".to_string(),
            LineFormula::Family { a, b } => format!("x' = a(c)*c + b(c)*y' with a = {a}, b = {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LineFormulaReport {
    pub formula: String,
    pub tolerance: f64,
    pub leaves_checked: usize,
    pub vertices_checked: usize,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares every image vertex of first-foliation leaves with the closed-form line.
pub fn check_line_formula(
    formula: &LineFormula,
    leaves: &[LeafPolyline],
    images: &[LeafPolyline],
    tolerance: f64,
) -> Result<LineFormulaReport, EvalError> {
    let mut max_deviation = 0.0f64;
    let mut vertices_checked = 0;
    for (leaf, image) in leaves.iter().zip(images) {
        debug_assert_eq!(leaf.foliation, 1);
        let c = leaf.level;
        for v in &image.vertices {
            let dev = (v.x - formula.predict(c, v.y)?).abs();
            max_deviation = if dev.is_nan() { f64::NAN } else { max_deviation.max(dev) };
            vertices_checked += 1;
        }
    }
    Ok(LineFormulaReport {
        formula: formula.describe(),
        tolerance,
        leaves_checked: leaves.len(),
        vertices_checked,
        pass: max_deviation <= tolerance,
        max_deviation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedInfo {
    pub point: Point,
    pub component: Component,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub web: String,
    pub domain: DomainSummary,
    pub map: String,
    pub seeds: Vec<SeedInfo>,
    pub general_position: GeneralPositionReport,
    pub diffeo: DiffeoReport,
    pub linearity: Vec<LinearityReport>,
    pub line_formula: Option<LineFormulaReport>,
    pub pass: bool,
}

impl TheoremReport {
    pub fn all_linear(&self) -> bool {
        self.linearity.iter().all(|r| r.linear)
    }
}

/// A finished pipeline: the report plus every leaf and image it scored.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineRun {
    pub report: TheoremReport,
    pub leaves: Vec<LeafPolyline>,
    pub images: Vec<LeafPolyline>,
}

/// General position, local invertibility of `map`, straightness of all three
/// image foliations and, if given, the closed-form line check for the
/// first foliation.
pub fn run_pipeline(
    web: &ThreeWeb,
    map: &PlaneMap,
    formula: Option<&LineFormula>,
    settings: &VerifySettings,
) -> Result<PipelineRun, VerifyError> {
    let general_position = general_position_report(web, settings.grid, settings.general_position_threshold)?;
    let diffeo = diffeo_report(map, &web.domain, settings.grid, settings.diffeo_threshold)?;
    let seeds = match &settings.seed_points {
        Some(points) => points.clone(),
        None => diagonal_seeds(&web.domain, settings.seeds)?,
    };
    if seeds.is_empty() {
        return Err(VerifyError::NoSeeds);
    }
    let seed_info = seeds
        .iter()
        .map(|&point| Ok(SeedInfo { point, component: web.domain.component(point)? }))
        .collect::<Result<Vec<_>, EvalError>>()?;

    let mut linearity = Vec::with_capacity(3);
    let mut leaves = Vec::new();
    let mut images = Vec::new();
    let mut line_formula = None;
    for k in 1..=3 {
        let run = foliation_linearity_with(
            web,
            k,
            map,
            &seeds,
            settings.tol_linearity,
            settings.max_arc,
            &settings.trace,
        )?;
        if k == 1 {
            if let Some(formula) = formula {
                line_formula = Some(check_line_formula(formula, &run.leaves, &run.images, settings.tol_line_formula)?);
            }
        }
        linearity.push(run.report);
        leaves.extend(run.leaves);
        images.extend(run.images);
    }
    let pass = general_position.pass
        && diffeo.pass
        && linearity.iter().all(|r| r.linear)
        && line_formula.as_ref().is_none_or(|l| l.pass);
    Ok(PipelineRun {
        report: TheoremReport {
            web: web.name.clone(),
            domain: web.domain.summary(),
            map: map.describe(),
            seeds: seed_info,
            general_position,
            diffeo,
            linearity,
            line_formula,
            pass,
        },
        leaves,
        images,
    })
}

/// Linearization of the built-in web by `(f, y)`, with the image of `x = c`
/// checked against `x̄ = (c + ȳ)e^{-c}`.
pub fn verify_theorem(web: &ThreeWeb, settings: &VerifySettings) -> Result<PipelineRun, VerifyError> {
    let map = dufour_map(web)?;
    run_pipeline(web, &map, Some(&LineFormula::Paper), settings)
}

/// The same pipeline for `f = a(x)·x + b(x)·y`, with lines `x̄ = a(c)·c + b(c)·ȳ`.
pub fn verify_remark(a: &Expr, b: &Expr, domain: Domain, settings: &VerifySettings) -> Result<PipelineRun, VerifyError> {
    let web = family_web(a, b, domain)?;
    let map = dufour_map(&web)?;
    let formula = LineFormula::Family { a: a.clone(), b: b.clone() };
    run_pipeline(&web, &map, Some(&formula), settings)
}
