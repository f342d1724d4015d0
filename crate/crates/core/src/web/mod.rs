//! Foliations, domains and 3-webs.

mod domain;
mod trace;

use serde::Serialize;
use thiserror::Error;

pub use domain::{Component, Domain, DomainSummary, Exclusion, Locus, DEFAULT_MARGIN};
pub use trace::{cumulative_arc, Advance, EndReason, LeafPolyline, TraceError, TraceOptions, Tracer};

use crate::expr::{parse, EvalError, Expr};
use crate::geom::{GeomError, Grid, Point, Rect};

/// Lower bound on `|∇u|` and on pairwise transversality determinants.
pub const EPS_GRADIENT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum WebError {
    #[error("web is not in normal form (first two integrals must be exactly `x` and `y`)")]
    NotNormalForm,
    #[error("family coefficient {which} = `{expr}` depends on y")]
    DependsOnY { which: &'static str, expr: String },
    #[error("exclusion margin must be finite and non-negative, got {0}")]
    InvalidMargin(f64),
    #[error("foliation index {0} out of range 1..=3")]
    NoSuchFoliation(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Level-set family of a first integral.
#[derive(Clone, Debug, PartialEq)]
pub struct Foliation {
    pub name: String,
    pub integral: Expr,
}

impl Foliation {
    pub fn new(name: impl Into<String>, integral: Expr) -> Foliation {
        Foliation {
            name: name.into(),
            integral,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThreeWeb {
    pub name: String,
    pub foliations: [Foliation; 3],
    pub domain: Domain,
}

impl ThreeWeb {
    pub fn new(name: impl Into<String>, integrals: [Expr; 3], domain: Domain) -> ThreeWeb {
        let [u1, u2, u3] = integrals;
        ThreeWeb {
            name: name.into(),
            foliations: [
                Foliation::new(format!("F1: {u1} = const"), u1),
                Foliation::new(format!("F2: {u2} = const"), u2),
                Foliation::new(format!("F3: {u3} = const"), u3),
            ],
            domain,
        }
    }

    /// Foliation `k`, 1-based.
    pub fn foliation(&self, k: usize) -> Result<&Foliation, WebError> {
        k.checked_sub(1)
            .and_then(|i| self.foliations.get(i))
            .ok_or(WebError::NoSuchFoliation(k))
    }

    /// The web function `f` when the web is `{x, y, f}`.
    pub fn web_function(&self) -> Result<&Expr, WebError> {
        match (&self.foliations[0].integral, &self.foliations[1].integral) {
            (Expr::X, Expr::Y) => Ok(&self.foliations[2].integral),
            _ => Err(WebError::NotNormalForm),
        }
    }

    pub fn with_domain(&self, domain: Domain) -> ThreeWeb {
        ThreeWeb {
            domain,
            ..self.clone()
        }
    }

    /// Traces the leaf of foliation `k` through `seed`.
    pub fn trace_leaf(&self, k: usize, seed: Point, max_arc: f64) -> Result<LeafPolyline, TraceError> {
        let fol = self.foliation(k).map_err(|_| TraceError::NoSuchFoliation(k))?;
        Tracer::new(&fol.integral, &self.domain).trace(k, seed, max_arc)
    }
}

pub fn default_rect() -> Rect {
    Rect {
        x_min: -2.0,
        x_max: 2.0,
        y_min: -2.0,
        y_max: 2.0,
    }
}

/// `{x, y, (x+y)e^{-x}}` on `[-2,2]²` with the band `|1-x-y| < 0.05` removed.
pub fn paper_web() -> ThreeWeb {
    let domain = Domain::excluding(default_rect(), Locus::Zero(paper_exclusion()), DEFAULT_MARGIN)
        .expect("static margin is valid");
    paper_web_on(domain)
}

/// The built-in web on a caller-chosen domain.
pub fn paper_web_on(domain: Domain) -> ThreeWeb {
    let f = parse("(x+y)*exp(-x)").expect("static expression parses");
    ThreeWeb::new("paper", [Expr::X, Expr::Y, f], domain)
}

/// `1 - x - y`, whose zero set is where the built-in web degenerates.
pub fn paper_exclusion() -> Expr {
    parse("1-x-y").expect("static expression parses")
}

/// `{x, y, a(x)·x + b(x)·y}`. Both coefficients must be free of `y`.
pub fn family_web(a: &Expr, b: &Expr, domain: Domain) -> Result<ThreeWeb, WebError> {
    for (which, e) in [("a", a), ("b", b)] {
        if e.mentions_y() {
            return Err(WebError::DependsOnY {
                which,
                expr: e.to_string(),
            });
        }
    }
    let f = a.clone() * Expr::X + b.clone() * Expr::Y;
    Ok(ThreeWeb::new(format!("family a={a} b={b}"), [Expr::X, Expr::Y, f], domain))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridFailure {
    pub point: Point,
    /// Worst offending pair of foliations (1-based).
    pub pair: [usize; 2],
    pub det: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralPositionReport {
    pub grid: Grid,
    pub threshold: f64,
    pub admissible_points: usize,
    pub min_abs_det: f64,
    pub min_at: Option<Point>,
    pub failures: Vec<GridFailure>,
    pub pass: bool,
}

const PAIRS: [[usize; 2]; 3] = [[1, 2], [1, 3], [2, 3]];

/// Checks pairwise transversality `|∇u_a × ∇u_b| ≥ threshold` on every admissible grid point.
pub fn general_position_report(
    web: &ThreeWeb,
    grid: Grid,
    threshold: f64,
) -> Result<GeneralPositionReport, WebError> {
    let mut admissible_points = 0;
    let mut min_abs_det = f64::INFINITY;
    let mut min_at = None;
    let mut failures = Vec::new();
    for p in grid.points(&web.domain.rect) {
        if !web.domain.is_admissible(p)? {
            continue;
        }
        admissible_points += 1;
        let grads = [
            web.foliations[0].integral.gradient(p)?,
            web.foliations[1].integral.gradient(p)?,
            web.foliations[2].integral.gradient(p)?,
        ];
        let mut worst: Option<([usize; 2], f64)> = None;
        for pair in PAIRS {
            let (ga, gb) = (grads[pair[0] - 1], grads[pair[1] - 1]);
            let det = ga[0] * gb[1] - ga[1] * gb[0];
            if worst.is_none_or(|(_, d)| det.abs() < d.abs()) {
                worst = Some((pair, det));
            }
        }
        let (pair, det) = worst.expect("three pairs");
        if det.abs() < min_abs_det {
            min_abs_det = det.abs();
            min_at = Some(p);
        }
        if det.abs() < threshold {
            failures.push(GridFailure { point: p, pair, det });
        }
    }
    Ok(GeneralPositionReport {
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

    #[test]
    fn paper_web_third_integral() {
        let w = paper_web();
        let f = &w.foliations[2].integral;
        let v = f.eval(Point::new(1.0, 1.0)).unwrap();
        assert!((v - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.735759).abs() < 1e-6);
        assert_eq!(f.eval(Point::new(0.0, 0.0)).unwrap(), 0.0);
        assert_eq!(w.domain.exclusion_value(Point::new(0.5, 0.5)).unwrap(), Some(0.0));
        assert!(!w.domain.is_admissible(Point::new(0.5, 0.5)).unwrap());
    }

    #[test]
    fn family_reproduces_paper_function() {
        let a = parse("exp(-x)").unwrap();
        let w = family_web(&a, &a, Domain::boxed(default_rect())).unwrap();
        let paper = paper_web();
        for p in Grid::new(9, 9).unwrap().points(&default_rect()) {
            let got = w.foliations[2].integral.eval(p).unwrap();
            let want = paper.foliations[2].integral.eval(p).unwrap();
            assert!((got - want).abs() <= 1e-14 * want.abs().max(1.0));
        }
    }

    #[test]
    fn family_shapes() {
        let one = parse("1").unwrap();
        let w = family_web(&one, &one, Domain::boxed(default_rect())).unwrap();
        assert_eq!(w.foliations[2].integral.eval(Point::new(0.3, 0.4)).unwrap(), 0.7);

        let x = parse("x").unwrap();
        let w = family_web(&one, &x, Domain::boxed(default_rect())).unwrap();
        let f = &w.foliations[2].integral;
        assert_eq!(f.eval(Point::new(2.0, 3.0)).unwrap(), 2.0 + 6.0);
        // ∂ᵧu₃ = x vanishes on x = 0, so general position fails there.
        assert_eq!(f.gradient(Point::new(0.0, 1.0)).unwrap()[1], 0.0);
        let report = general_position_report(&w, Grid::new(5, 5).unwrap(), EPS_GRADIENT).unwrap();
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| f.point.x == 0.0 && f.pair == [1, 3]));
    }

    #[test]
    fn family_rejects_y() {
        let a = parse("x*y").unwrap();
        let b = parse("1").unwrap();
        assert!(matches!(
            family_web(&a, &b, Domain::boxed(default_rect())),
            Err(WebError::DependsOnY { which: "a", .. })
        ));
    }

    #[test]
    fn normal_form_detection() {
        assert!(paper_web().web_function().is_ok());
        let w = ThreeWeb::new(
            "swapped",
            [Expr::Y, Expr::X, parse("x+y").unwrap()],
            Domain::boxed(default_rect()),
        );
        assert_eq!(w.web_function(), Err(WebError::NotNormalForm));
        assert!(matches!(w.foliation(4), Err(WebError::NoSuchFoliation(4))));
    }

    #[test]
    fn general_position_on_paper_web() {
        let report = general_position_report(&paper_web(), Grid::DEFAULT, EPS_GRADIENT).unwrap();
        assert!(report.pass, "{:?}", report.failures.first());
        assert!(report.min_abs_det > 0.0);
        // The 31 grid points on x + y = 1 are removed by the band.
        assert_eq!(report.admissible_points, 41 * 41 - 31);
    }

    #[test]
    fn general_position_fails_on_locus_without_margin() {
        let w = paper_web();
        let w0 = w.with_domain(w.domain.with_margin(0.0).unwrap());
        let report = general_position_report(&w0, Grid::DEFAULT, EPS_GRADIENT).unwrap();
        assert!(!report.pass);
        assert_eq!(report.failures.len(), 31);
        for f in &report.failures {
            assert!((1.0 - f.point.x - f.point.y).abs() < 1e-12);
            assert_eq!(f.pair, [2, 3]);
        }
    }

    #[test]
    fn parallel_web_is_in_general_position() {
        let w = ThreeWeb::new(
            "parallel",
            [Expr::X, Expr::Y, parse("x+y").unwrap()],
            Domain::boxed(Rect::new(-3.0, 5.0, 0.0, 1.0).unwrap()),
        );
        let report = general_position_report(&w, Grid::new(7, 3).unwrap(), EPS_GRADIENT).unwrap();
        assert!(report.pass);
        assert_eq!(report.min_abs_det, 1.0);
    }
}
