//! Plane maps given by two component expressions.

use serde::Serialize;

use crate::expr::{EvalError, Expr};
use crate::geom::{Grid, Point};
use crate::web::{Domain, LeafPolyline, ThreeWeb, WebError};

/// Smallest `|det J|` accepted as locally invertible.
pub const DIFFEO_THRESHOLD: f64 = 1e-6;

/// `(x, y) ↦ (φ¹(x, y), φ²(x, y))`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneMap {
    pub name: String,
    pub components: [Expr; 2],
}

impl PlaneMap {
    pub fn new(name: impl Into<String>, first: Expr, second: Expr) -> PlaneMap {
        PlaneMap {
            name: name.into(),
            components: [first, second],
        }
    }

    pub fn identity() -> PlaneMap {
        PlaneMap::new("identity", Expr::X, Expr::Y)
    }

    pub fn apply(&self, p: Point) -> Result<Point, EvalError> {
        Ok(Point::new(self.components[0].eval(p)?, self.components[1].eval(p)?))
    }

    /// `∂ₓφ¹·∂ᵧφ² − ∂ᵧφ¹·∂ₓφ²` at `p`.
    pub fn jacobian_det(&self, p: Point) -> Result<f64, EvalError> {
        let [ax, ay] = self.components[0].gradient(p)?;
        let [bx, by] = self.components[1].gradient(p)?;
        Ok(ax * by - ay * bx)
    }

    /// Maps every vertex; level and foliation metadata carry over, arc lengths
    /// are recomputed on the image.
    pub fn push_polyline(&self, leaf: &LeafPolyline) -> Result<LeafPolyline, EvalError> {
        let vertices = leaf
            .vertices
            .iter()
            .map(|&v| self.apply(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LeafPolyline::new(leaf.foliation, leaf.level, vertices, leaf.seed_index, leaf.ends))
    }

    pub fn describe(&self) -> String {
        format!("{}: ({}, {})", self.name, self.components[0], self.components[1])
    }
}

/// The straightening change of variables `(x, y) ↦ (f(x, y), y)` of a normal-form web `{x, y, f}`.
///
/// It sends `y = c` to horizontal lines and `f = c` to vertical lines; leaves
/// `x = c` go to `x̄ = f(c, ȳ)`, which is a line whenever `f` is affine in `y`.
pub fn dufour_map(web: &ThreeWeb) -> Result<PlaneMap, WebError> {
    let f = web.web_function()?;
    Ok(PlaneMap::new("dufour", f.clone(), Expr::Y))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetFailure {
    pub point: Point,
    pub det: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiffeoReport {
    pub map: String,
    pub grid: Grid,
    pub threshold: f64,
    pub admissible_points: usize,
    pub min_abs_det: f64,
    pub min_at: Option<Point>,
    pub failures: Vec<DetFailure>,
    pub pass: bool,
}

/// Grid check that `|det J| ≥ threshold` on every admissible point.
pub fn diffeo_report(map: &PlaneMap, domain: &Domain, grid: Grid, threshold: f64) -> Result<DiffeoReport, EvalError> {
    let mut admissible_points = 0;
    let mut min_abs_det = f64::INFINITY;
    let mut min_at = None;
    let mut failures = Vec::new();
    for p in grid.points(&domain.rect) {
        if !domain.is_admissible(p)? {
            continue;
        }
        admissible_points += 1;
        let det = map.jacobian_det(p)?;
        if det.abs() < min_abs_det {
            min_abs_det = det.abs();
            min_at = Some(p);
        }
        if !(det.abs() >= threshold) {
            failures.push(DetFailure { point: p, det });
        }
    }
    Ok(DiffeoReport {
        map: map.describe(),
        grid,
        threshold,
        admissible_points,
        min_abs_det,
        min_at,
        pass: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::geom::Rect;
    use crate::web::{default_rect, paper_web};

    #[test]
    fn dufour_map_of_paper_web() {
        let m = dufour_map(&paper_web()).unwrap();
        assert_eq!(m.components[0].to_string(), "(x+y)*exp(-x)");
        assert_eq!(m.components[1], Expr::Y);

        let q = m.apply(Point::new(1.0, 0.0)).unwrap();
        assert!((q.x - 0.367879).abs() < 1e-6);
        assert_eq!(q.y, 0.0);
        // on x̄ = (1 + ȳ)e^{-1}
        assert!((q.x - (1.0 + q.y) * (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(m.apply(Point::new(0.0, 0.0)).unwrap(), Point::new(0.0, 0.0));
    }

    #[test]
    fn shear_for_parallel_web() {
        let w = ThreeWeb::new("parallel", [Expr::X, Expr::Y, parse("x+y").unwrap()], Domain::boxed(default_rect()));
        let m = dufour_map(&w).unwrap();
        assert_eq!(m.components[0].to_string(), "x+y");
        assert_eq!(m.apply(Point::new(2.0, 3.0)).unwrap(), Point::new(5.0, 3.0));
    }

    #[test]
    fn requires_normal_form() {
        let w = ThreeWeb::new("yx", [Expr::Y, Expr::X, parse("x+y").unwrap()], Domain::boxed(default_rect()));
        assert_eq!(dufour_map(&w), Err(WebError::NotNormalForm));
    }

    #[test]
    fn jacobian_determinants() {
        let m = dufour_map(&paper_web()).unwrap();
        assert_eq!(m.jacobian_det(Point::new(0.0, 0.0)).unwrap(), 1.0);
        for x in [-1.0, 0.0, 0.3, 1.7] {
            assert!(m.jacobian_det(Point::new(x, 1.0 - x)).unwrap().abs() < 1e-15);
        }
        let id = PlaneMap::identity();
        assert_eq!(id.apply(Point::new(3.0, -2.0)).unwrap(), Point::new(3.0, -2.0));
        assert_eq!(id.jacobian_det(Point::new(-7.0, 0.25)).unwrap(), 1.0);
    }

    #[test]
    fn diffeo_report_on_banded_domain() {
        let w = paper_web();
        let m = dufour_map(&w).unwrap();
        let r = diffeo_report(&m, &w.domain, Grid::DEFAULT, DIFFEO_THRESHOLD).unwrap();
        assert!(r.pass);
        assert!(r.min_abs_det >= (-2.0f64).exp() * 0.05 * 0.9);

        let d0 = w.domain.with_margin(0.0).unwrap();
        let r = diffeo_report(&m, &d0, Grid::DEFAULT, DIFFEO_THRESHOLD).unwrap();
        assert!(!r.pass);
        assert_eq!(r.failures.len(), 31);
    }

    #[test]
    fn cube_is_not_a_diffeo_at_zero() {
        let m = PlaneMap::new("cube", parse("x^3").unwrap(), Expr::Y);
        let d = Domain::boxed(Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap());
        let r = diffeo_report(&m, &d, Grid::new(5, 5).unwrap(), DIFFEO_THRESHOLD).unwrap();
        assert!(!r.pass);
        assert!(r.failures.iter().all(|f| f.point.x == 0.0));
        assert_eq!(r.failures.len(), 5);
    }

    #[test]
    fn pushing_leaves() {
        let w = paper_web();
        let m = dufour_map(&w).unwrap();
        let leaf = w.trace_leaf(1, Point::new(1.0, -1.0), 3.0).unwrap();
        let image = m.push_polyline(&leaf).unwrap();
        assert_eq!(image.foliation, 1);
        assert_eq!(image.level, leaf.level);
        for v in &image.vertices {
            assert!((v.x - (1.0 + v.y) * (-1.0f64).exp()).abs() < 1e-15);
        }

        let leaf3 = w.trace_leaf(3, Point::new(1.0, 1.0), 3.0).unwrap();
        let image3 = m.push_polyline(&leaf3).unwrap();
        for v in &image3.vertices {
            assert!((v.x - 0.735759).abs() < 1e-6);
            assert!((v.x - leaf3.level).abs() <= 1e-12);
        }

        assert_eq!(PlaneMap::identity().push_polyline(&leaf3).unwrap(), leaf3);
    }
}
