use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::geom::Point;

use super::domain::Domain;
use super::EPS_GRADIENT;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TraceError {
    #[error("seed ({}, {}) is not admissible", .0.x, .0.y)]
    SeedInadmissible(Point),
    #[error("gradient vanishes at seed ({}, {})", .0.x, .0.y)]
    DegenerateSeed(Point),
    #[error("step size underflow near ({}, {})", .0.x, .0.y)]
    StepUnderflow(Point),
    #[error("foliation index {0} out of range 1..=3")]
    NoSuchFoliation(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    /// Nominal arc length per integrator step.
    pub step: f64,
    pub newton_max_iter: usize,
    /// Projection stops once `|u(p) - u₀|` drops to this.
    pub newton_tol: f64,
    /// A projected point is accepted if it ends within this of the level.
    pub level_tol: f64,
    pub grad_floor: f64,
    pub min_step: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 1e-2,
            newton_max_iter: 5,
            newton_tol: 1e-12,
            level_tol: 1e-9,
            grad_floor: EPS_GRADIENT,
            min_step: 1e-9,
        }
    }
}

/// Why one end of a traced leaf stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndReason {
    MaxArc,
    DomainExit,
    GradientCollapse,
}

/// Numerically traced leaf: vertices ordered from the backward end through the
/// seed to the forward end.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeafPolyline {
    /// 1-based foliation index.
    pub foliation: usize,
    pub level: f64,
    pub vertices: Vec<Point>,
    /// Cumulative chord length from the first vertex.
    pub arc: Vec<f64>,
    pub seed_index: usize,
    /// `[backward, forward]`.
    pub ends: [EndReason; 2],
}

impl LeafPolyline {
    pub fn new(foliation: usize, level: f64, vertices: Vec<Point>, seed_index: usize, ends: [EndReason; 2]) -> Self {
        let arc = cumulative_arc(&vertices);
        LeafPolyline {
            foliation,
            level,
            vertices,
            arc,
            seed_index,
            ends,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn seed(&self) -> Point {
        self.vertices[self.seed_index]
    }

    /// True when either end stopped because the gradient collapsed.
    pub fn truncated(&self) -> bool {
        self.ends.contains(&EndReason::GradientCollapse)
    }

    pub fn total_arc(&self) -> f64 {
        self.arc.last().copied().unwrap_or(0.0)
    }
}

pub fn cumulative_arc(vertices: &[Point]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut arc = Vec::with_capacity(vertices.len());
    for (i, v) in vertices.iter().enumerate() {
        if i > 0 {
            acc += v.dist(vertices[i - 1]);
        }
        arc.push(acc);
    }
    arc
}

enum Stage {
    Collapse,
    Eval(EvalError),
}

impl From<EvalError> for Stage {
    fn from(e: EvalError) -> Self {
        Stage::Eval(e)
    }
}

/// Result of one accepted integrator step.
pub enum Advance {
    Moved { to: Point, arc: f64 },
    Collapse,
}

/// Follows level sets of one first integral inside a domain.
///
/// Each step is a classical RK4 step along the unit tangent `(∂ᵧu, -∂ₓu)/|∇u|`
/// followed by Newton projection along `∇u` back onto the level; a step whose
/// projection does not converge is retried at half size.
pub struct Tracer<'a> {
    integral: &'a Expr,
    domain: &'a Domain,
    options: TraceOptions,
}

impl<'a> Tracer<'a> {
    pub fn new(integral: &'a Expr, domain: &'a Domain) -> Self {
        Tracer::with_options(integral, domain, TraceOptions::default())
    }

    pub fn with_options(integral: &'a Expr, domain: &'a Domain, options: TraceOptions) -> Self {
        Tracer {
            integral,
            domain,
            options,
        }
    }

    pub fn options(&self) -> &TraceOptions {
        &self.options
    }

    fn tangent(&self, p: Point) -> Result<Point, Stage> {
        let [gx, gy] = self.integral.gradient(p)?;
        let n = gx.hypot(gy);
        if n < self.options.grad_floor {
            return Err(Stage::Collapse);
        }
        Ok(Point::new(gy / n, -gx / n))
    }

    fn rk4(&self, p: Point, h: f64) -> Result<Point, Stage> {
        let k1 = self.tangent(p)?;
        let k2 = self.tangent(p + (h / 2.0) * k1)?;
        let k3 = self.tangent(p + (h / 2.0) * k2)?;
        let k4 = self.tangent(p + h * k3)?;
        Ok(p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
    }

    /// Newton along the gradient onto `u = level`; `None` if it does not reach `level_tol`.
    pub fn project(&self, mut p: Point, level: f64) -> Result<Option<Point>, EvalError> {
        for _ in 0..self.options.newton_max_iter {
            let jet = self.integral.eval_jet3(p)?;
            let r = jet.value() - level;
            if r.abs() <= self.options.newton_tol {
                return Ok(Some(p));
            }
            let g = Point::new(jet.partial(1, 0), jet.partial(0, 1));
            let g2 = g.dot(g);
            if g2 == 0.0 {
                return Ok(None);
            }
            p = p - (r / g2) * g;
        }
        let r = self.integral.eval(p)? - level;
        Ok((r.abs() <= self.options.level_tol).then_some(p))
    }

    /// One signed step of nominal length `h` (halved until the projection converges).
    pub fn advance(&self, p: Point, level: f64, h: f64) -> Result<Advance, TraceError> {
        let mut h = h;
        loop {
            let q = match self.rk4(p, h) {
                Ok(q) => q,
                Err(Stage::Collapse) => return Ok(Advance::Collapse),
                Err(Stage::Eval(e)) => return Err(e.into()),
            };
            if let Some(q) = self.project(q, level)? {
                let [gx, gy] = self.integral.gradient(q)?;
                if gx.hypot(gy) < self.options.grad_floor {
                    return Ok(Advance::Collapse);
                }
                return Ok(Advance::Moved { to: q, arc: h.abs() });
            }
            h /= 2.0;
            if h.abs() < self.options.min_step {
                return Err(TraceError::StepUnderflow(p));
            }
        }
    }

    /// Traces the leaf through `seed` in both directions, each up to `max_arc`
    /// or until the next vertex would leave the domain.
    pub fn trace(&self, foliation: usize, seed: Point, max_arc: f64) -> Result<LeafPolyline, TraceError> {
        if !self.domain.is_admissible(seed)? {
            return Err(TraceError::SeedInadmissible(seed));
        }
        let [gx, gy] = self.integral.gradient(seed)?;
        if gx.hypot(gy) < self.options.grad_floor {
            return Err(TraceError::DegenerateSeed(seed));
        }
        let level = self.integral.eval(seed)?;
        let (mut backward, back_end) = self.march(seed, level, -1.0, max_arc)?;
        let (forward, fwd_end) = self.march(seed, level, 1.0, max_arc)?;
        backward.reverse();
        let seed_index = backward.len();
        let mut vertices = backward;
        vertices.push(seed);
        vertices.extend(forward);
        Ok(LeafPolyline::new(foliation, level, vertices, seed_index, [back_end, fwd_end]))
    }

    fn march(&self, seed: Point, level: f64, sign: f64, max_arc: f64) -> Result<(Vec<Point>, EndReason), TraceError> {
        let mut pts = Vec::new();
        let mut p = seed;
        let mut travelled = 0.0;
        let slack = 1e-12 * max_arc.max(1.0);
        loop {
            let remaining = max_arc - travelled;
            if remaining <= slack {
                return Ok((pts, EndReason::MaxArc));
            }
            let h = self.options.step.min(remaining);
            match self.advance(p, level, sign * h)? {
                Advance::Collapse => return Ok((pts, EndReason::GradientCollapse)),
                Advance::Moved { to, arc } => {
                    if !self.domain.is_admissible(to)? {
                        return Ok((pts, EndReason::DomainExit));
                    }
                    pts.push(to);
                    travelled += arc;
                    p = to;
                }
            }
        }
    }
}
