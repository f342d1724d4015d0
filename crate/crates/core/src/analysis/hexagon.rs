use serde::Serialize;

use super::AnalysisError;
use crate::expr::Expr;
use crate::geom::Point;
use crate::web::{Advance, ThreeWeb, TraceOptions, Tracer};

/// `(moving, target)` foliations of the six legs: leg `i` follows the leaf of
/// `moving` through `P_{i-1}` until it meets the leaf of `target` through the center.
pub const LEGS: [(usize, usize); 6] = [(3, 2), (1, 3), (2, 1), (3, 2), (1, 3), (2, 1)];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HexagonOptions {
    pub trace: TraceOptions,
    /// Newton on the leg endpoint stops at this residual in both level equations.
    pub newton_tol: f64,
    /// Endpoint accepted if both residuals end below this.
    pub accept_tol: f64,
    pub newton_max_iter: usize,
    /// A leg may run at most `max_leg_factor · r` (plus one step) before giving up.
    pub max_leg_factor: f64,
}

impl Default for HexagonOptions {
    fn default() -> Self {
        HexagonOptions {
            trace: TraceOptions::default(),
            newton_tol: 1e-13,
            accept_tol: 1e-10,
            newton_max_iter: 30,
            max_leg_factor: 20.0,
        }
    }
}

/// Thomsen hexagon around a center: `P₀` on the first-foliation leaf through
/// the center at arc distance `r`, then six legs per [`LEGS`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HexagonFigure {
    pub center: Point,
    pub radius: f64,
    /// `P₀ … P₆`.
    pub points: Vec<Point>,
    /// `|P₆ − P₀|`.
    pub defect: f64,
}

pub fn hexagon_defect(web: &ThreeWeb, center: Point, radius: f64) -> Result<HexagonFigure, AnalysisError> {
    hexagon_defect_with(web, center, radius, &HexagonOptions::default())
}

pub fn hexagon_defect_with(
    web: &ThreeWeb,
    center: Point,
    radius: f64,
    options: &HexagonOptions,
) -> Result<HexagonFigure, AnalysisError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(AnalysisError::BadRadius(radius));
    }
    if !web.domain.is_admissible(center)? {
        return Err(AnalysisError::CenterInadmissible(center));
    }
    let builder = Builder {
        web,
        center,
        options,
        max_leg_arc: options.max_leg_factor * radius + options.trace.step,
    };
    let mut points = Vec::with_capacity(7);
    points.push(builder.start(radius)?);
    for (i, &(moving, target)) in LEGS.iter().enumerate() {
        let from = *points.last().expect("non-empty");
        points.push(builder.leg(i + 1, from, moving, target)?);
    }
    let defect = points[6].dist(points[0]);
    Ok(HexagonFigure {
        center,
        radius,
        points,
        defect,
    })
}

struct Builder<'a> {
    web: &'a ThreeWeb,
    center: Point,
    options: &'a HexagonOptions,
    max_leg_arc: f64,
}

impl Builder<'_> {
    fn integral(&self, k: usize) -> &Expr {
        &self.web.foliations[k - 1].integral
    }

    fn tracer(&self, k: usize) -> Tracer<'_> {
        Tracer::with_options(self.integral(k), &self.web.domain, self.options.trace)
    }

    fn admissible(&self, leg: usize, p: Point) -> Result<(), AnalysisError> {
        if self.web.domain.is_admissible(p)? {
            Ok(())
        } else {
            Err(AnalysisError::LeavesDomain { leg, at: p })
        }
    }

    /// Walks arc length `radius` along the first-foliation leaf through the center.
    fn start(&self, radius: f64) -> Result<Point, AnalysisError> {
        let tracer = self.tracer(1);
        let level = self.integral(1).eval(self.center)?;
        let mut p = self.center;
        let mut travelled = 0.0;
        while radius - travelled > 1e-15 {
            let h = tracer.options().step.min(radius - travelled);
            match tracer.advance(p, level, h)? {
                Advance::Moved { to, arc } => {
                    self.admissible(0, to)?;
                    p = to;
                    travelled += arc;
                }
                Advance::Collapse => {
                    return Err(AnalysisError::NoIntersection {
                        leg: 0,
                        max_arc: radius,
                    })
                }
            }
        }
        Ok(p)
    }

    fn leg(&self, leg: usize, from: Point, moving: usize, target: usize) -> Result<Point, AnalysisError> {
        let u_move = self.integral(moving);
        let u_target = self.integral(target);
        let move_level = u_move.eval(from)?;
        let target_level = u_target.eval(self.center)?;
        let residual = |p: Point| -> Result<f64, AnalysisError> { Ok(u_target.eval(p)? - target_level) };

        let g0 = residual(from)?;
        if g0.abs() <= self.options.newton_tol {
            return Ok(from);
        }
        // Direction along the moving leaf in which the target residual shrinks.
        let [mx, my] = u_move.gradient(from)?;
        let [tx, ty] = u_target.gradient(from)?;
        let slope = tx * my - ty * mx;
        if slope == 0.0 {
            return Err(AnalysisError::NoIntersection {
                leg,
                max_arc: self.max_leg_arc,
            });
        }
        let sign = if g0 * slope < 0.0 { 1.0 } else { -1.0 };

        let tracer = self.tracer(moving);
        let (mut prev, mut g_prev) = (from, g0);
        let mut travelled = 0.0;
        let (a, b, ga, gb) = loop {
            if travelled > self.max_leg_arc {
                return Err(AnalysisError::NoIntersection {
                    leg,
                    max_arc: self.max_leg_arc,
                });
            }
            let step = tracer.options().step;
            let q = match tracer.advance(prev, move_level, sign * step)? {
                Advance::Moved { to, arc } => {
                    travelled += arc;
                    to
                }
                Advance::Collapse => {
                    return Err(AnalysisError::NoIntersection {
                        leg,
                        max_arc: self.max_leg_arc,
                    })
                }
            };
            let gq = residual(q)?;
            if gq == 0.0 || gq.signum() != g_prev.signum() {
                break (prev, q, g_prev, gq);
            }
            self.admissible(leg, q)?;
            prev = q;
            g_prev = gq;
        };
        let guess = a + (ga / (ga - gb)) * (b - a);
        let p = self.intersect(leg, guess, u_move, move_level, u_target, target_level)?;
        self.admissible(leg, p)?;
        Ok(p)
    }

    /// Newton on `{u_move = move_level, u_target = target_level}`.
    fn intersect(
        &self,
        leg: usize,
        mut p: Point,
        u_move: &Expr,
        move_level: f64,
        u_target: &Expr,
        target_level: f64,
    ) -> Result<Point, AnalysisError> {
        let mut residual = f64::INFINITY;
        for _ in 0..self.options.newton_max_iter {
            let jm = u_move.eval_jet3(p)?;
            let jt = u_target.eval_jet3(p)?;
            let (r1, r2) = (jm.value() - move_level, jt.value() - target_level);
            residual = r1.abs().max(r2.abs());
            if residual <= self.options.newton_tol {
                return Ok(p);
            }
            let (a, b) = (jm.partial(1, 0), jm.partial(0, 1));
            let (c, d) = (jt.partial(1, 0), jt.partial(0, 1));
            let det = a * d - b * c;
            if det == 0.0 {
                break;
            }
            let dx = (d * r1 - b * r2) / det;
            let dy = (a * r2 - c * r1) / det;
            let next = Point::new(p.x - dx, p.y - dy);
            if next == p {
                break;
            }
            p = next;
        }
        if residual <= self.options.accept_tol {
            Ok(p)
        } else {
            Err(AnalysisError::NewtonFailed { leg, residual })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::geom::Rect;
    use crate::web::{default_rect, paper_web, Domain};

    fn parallel() -> ThreeWeb {
        ThreeWeb::new("parallel", [Expr::X, Expr::Y, parse("x+y").unwrap()], Domain::boxed(default_rect()))
    }

    #[test]
    fn parallel_web_hexagon_closes() {
        let fig = hexagon_defect(&parallel(), Point::new(0.0, 0.0), 0.5).unwrap();
        assert!(fig.defect <= 1e-9, "defect {}", fig.defect);
        let expected = [(0.0, -0.5), (-0.5, 0.0), (-0.5, 0.5), (0.0, 0.5), (0.5, 0.0), (0.5, -0.5), (0.0, -0.5)];
        for (p, (x, y)) in fig.points.iter().zip(expected) {
            assert!(p.dist(Point::new(x, y)) < 1e-12, "{p:?} vs ({x}, {y})");
        }
    }

    #[test]
    fn paper_web_hexagon_does_not_close() {
        let fig = hexagon_defect(&paper_web(), Point::new(0.0, 0.0), 0.2).unwrap();
        assert!(fig.defect > 1e-4, "defect {}", fig.defect);
    }

    #[test]
    fn legs_land_on_target_leaves() {
        let w = paper_web();
        let o = Point::new(-0.4, 0.1);
        let fig = hexagon_defect(&w, o, 0.15).unwrap();
        let u = |k: usize, p: Point| w.foliations[k - 1].integral.eval(p).unwrap();
        assert!((u(1, fig.points[0]) - u(1, o)).abs() <= 1e-9);
        for (i, &(moving, target)) in LEGS.iter().enumerate() {
            let (prev, p) = (fig.points[i], fig.points[i + 1]);
            assert!((u(target, p) - u(target, o)).abs() <= 1e-9);
            assert!((u(moving, p) - u(moving, prev)).abs() <= 1e-9);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let w = paper_web();
        assert!(matches!(hexagon_defect(&w, Point::new(0.0, 0.0), 0.0), Err(AnalysisError::BadRadius(_))));
        assert!(matches!(
            hexagon_defect(&w, Point::new(0.5, 0.5), 0.1),
            Err(AnalysisError::CenterInadmissible(_))
        ));
    }

    #[test]
    fn crossing_the_band_is_an_error() {
        let err = hexagon_defect(&paper_web(), Point::new(0.0, 1.05), 0.5).unwrap_err();
        assert!(matches!(err, AnalysisError::LeavesDomain { .. }), "{err}");
    }

    #[test]
    fn leaving_the_box_is_an_error() {
        let w = ThreeWeb::new(
            "parallel",
            [Expr::X, Expr::Y, parse("x+y").unwrap()],
            Domain::boxed(Rect::new(-0.3, 0.3, -0.3, 0.3).unwrap()),
        );
        let err = hexagon_defect(&w, Point::new(0.0, 0.0), 0.5).unwrap_err();
        assert!(matches!(err, AnalysisError::LeavesDomain { leg: 0, .. }), "{err}");
    }
}
