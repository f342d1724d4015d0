//! Reference values for the `threeweb` test suites.
//!
//! Expressions are re-evaluated from their syntax tree in 256-bit MPFR
//! arithmetic, independently of the jet code, and differentiated by iterated
//! central differences with one Richardson step. At this precision the
//! rounding error of the stencils is negligible, so the differences are
//! accurate to `O(h⁴)`.

use rand::Rng;
use rug::ops::Pow;
use rug::Float;
use threeweb::expr::{BinOp, Func};
use threeweb::{Expr, Point};

pub const PREC: u32 = 256;

/// Step used for all finite-difference oracles.
pub const FD_STEP: f64 = 1e-4;

/// `(i, j)` pairs in jet slot order.
pub const ORDERS: [(usize, usize); 10] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

fn mp(v: f64) -> Float {
    Float::with_val(PREC, v)
}

/// Value of `e` at `(x, y)`; `None` outside the analytic domain.
pub fn mp_eval(e: &Expr, x: &Float, y: &Float) -> Option<Float> {
    let v = match e {
        Expr::Const(c) => mp(*c),
        Expr::X => x.clone(),
        Expr::Y => y.clone(),
        Expr::Neg(a) => -mp_eval(a, x, y)?,
        Expr::Binary(op, a, b) => {
            let va = mp_eval(a, x, y)?;
            match op {
                BinOp::Add => va + mp_eval(b, x, y)?,
                BinOp::Sub => va - mp_eval(b, x, y)?,
                BinOp::Mul => va * mp_eval(b, x, y)?,
                BinOp::Div => {
                    let vb = mp_eval(b, x, y)?;
                    if vb.is_zero() {
                        return None;
                    }
                    va / vb
                }
                BinOp::Pow => match integer_exponent(b) {
                    Some(n) => {
                        if n < 0 && va.is_zero() {
                            return None;
                        }
                        va.pow(n)
                    }
                    None => {
                        if va <= 0 {
                            return None;
                        }
                        (mp_eval(b, x, y)? * va.ln()).exp()
                    }
                },
            }
        }
        Expr::Call(f, a) => {
            let va = mp_eval(a, x, y)?;
            match f {
                Func::Exp => va.exp(),
                Func::Ln if va > 0 => va.ln(),
                Func::Sqrt if va > 0 => va.sqrt(),
                Func::Sin => va.sin(),
                Func::Cos => va.cos(),
                _ => return None,
            }
        }
    };
    v.is_finite().then_some(v)
}

/// Constant integral exponents up to 1024 in magnitude are exact powers;
/// everything else is `exp(b·ln a)`.
fn integer_exponent(b: &Expr) -> Option<i32> {
    if b.mentions_x() || b.mentions_y() {
        return None;
    }
    let v = b.eval(Point::new(0.0, 0.0)).ok()?;
    (v.fract() == 0.0 && v.abs() <= 1024.0).then_some(v as i32)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `δ_x^i δ_y^j f / h^{i+j}` with centered stencils (half-step offsets for odd orders).
fn central(f: &dyn Fn(&Float, &Float) -> Option<Float>, x: &Float, y: &Float, i: usize, j: usize, h: &Float) -> Option<Float> {
    let mut acc = mp(0.0);
    for k in 0..=i {
        let wx = binomial(i, k) * if k % 2 == 0 { 1.0 } else { -1.0 };
        let ox = Float::with_val(PREC, (i as f64 / 2.0 - k as f64) * h);
        for l in 0..=j {
            let wy = binomial(j, l) * if l % 2 == 0 { 1.0 } else { -1.0 };
            let oy = Float::with_val(PREC, (j as f64 / 2.0 - l as f64) * h);
            let px = Float::with_val(PREC, x + &ox);
            let py = Float::with_val(PREC, y + &oy);
            acc += f(&px, &py)? * (wx * wy);
        }
    }
    let scale = Float::with_val(PREC, h.pow((i + j) as i32));
    Some(acc / scale)
}

/// `∂ⁱₓ∂ʲ_y f(x, y)` by central differences at steps `h` and `h/2`, Richardson-combined.
pub fn fd_partial(
    f: &dyn Fn(&Float, &Float) -> Option<Float>,
    x: &Float,
    y: &Float,
    i: usize,
    j: usize,
    h: f64,
) -> Option<Float> {
    if i + j == 0 {
        return f(x, y);
    }
    let h1 = mp(h);
    let h2 = mp(h / 2.0);
    let d1 = central(f, x, y, i, j, &h1)?;
    let d2 = central(f, x, y, i, j, &h2)?;
    Some((d2 * 4.0 - d1) / 3.0)
}

/// All ten partials of `e` through order 3, in jet slot order.
pub fn fd_partials(e: &Expr, p: Point) -> Option<[f64; 10]> {
    let (x, y) = (mp(p.x), mp(p.y));
    let f = |x: &Float, y: &Float| mp_eval(e, x, y);
    let mut out = [0.0; 10];
    for (slot, &(i, j)) in ORDERS.iter().enumerate() {
        out[slot] = fd_partial(&f, &x, &y, i, j, FD_STEP)?.to_f64();
    }
    Some(out)
}

/// `∂²ₓᵧ ln|f_x/f_y| / (f_x f_y)` for `f = e`, with `f_x` and `f_y`
/// themselves finite-differenced.
pub fn fd_curvature(e: &Expr, p: Point) -> Option<f64> {
    let f = |x: &Float, y: &Float| mp_eval(e, x, y);
    let inner = 1e-6;
    let fx = |x: &Float, y: &Float| fd_partial(&f, x, y, 1, 0, inner);
    let fy = |x: &Float, y: &Float| fd_partial(&f, x, y, 0, 1, inner);
    let log_ratio = |x: &Float, y: &Float| -> Option<Float> {
        let r = fx(x, y)? / fy(x, y)?;
        Some(r.abs().ln())
    };
    let (x, y) = (mp(p.x), mp(p.y));
    let mixed = fd_partial(&log_ratio, &x, &y, 1, 1, FD_STEP)?;
    let k = mixed / (fx(&x, &y)? * fy(&x, &y)?);
    Some(k.to_f64())
}

/// Agreement test shared by the derivative oracles: relative `rel`, with an
/// absolute floor `abs` for reference values near zero.
pub fn close(got: f64, want: f64, rel: f64, abs: f64) -> bool {
    (got - want).abs() <= (rel * want.abs()).max(abs)
}

/// Random expression trees over `x`, `y`, small constants, the five
/// functions and all binary operators.
pub fn random_expr<R: Rng>(rng: &mut R, depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.2) {
        return match rng.random_range(0..5) {
            0 | 1 => Expr::X,
            2 | 3 => Expr::Y,
            _ => Expr::Const((rng.random_range(-8..=8) as f64) * 0.25),
        };
    }
    match rng.random_range(0..10) {
        0 => Expr::Neg(Box::new(random_expr(rng, depth - 1))),
        1..=5 => {
            let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mul][rng.random_range(0..5)];
            Expr::binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1))
        }
        6 => {
            let exponent = if rng.random_bool(0.6) {
                Expr::Const(rng.random_range(-3..=4) as f64)
            } else {
                random_expr(rng, depth - 1)
            };
            Expr::binary(BinOp::Pow, random_expr(rng, depth - 1), exponent)
        }
        _ => {
            let f = Func::ALL[rng.random_range(0..5)];
            Expr::call(f, random_expr(rng, depth - 1))
        }
    }
}

/// Smallest `|argument|` among the singular operations of `e` at `p`
/// (`ln`, `sqrt`, divisors, bases of non-integer powers). Finite differences
/// are only trusted well away from those singularities.
pub fn singular_distance(e: &Expr, p: Point) -> f64 {
    let val = |e: &Expr| e.eval(p).map(f64::abs).unwrap_or(0.0);
    match e {
        Expr::Const(_) | Expr::X | Expr::Y => f64::INFINITY,
        Expr::Neg(a) => singular_distance(a, p),
        Expr::Binary(op, a, b) => {
            let own = match op {
                BinOp::Div => val(b),
                BinOp::Pow if integer_exponent(b).is_none() => val(a),
                BinOp::Pow if integer_exponent(b).is_some_and(|n| n < 0) => val(a),
                _ => f64::INFINITY,
            };
            own.min(singular_distance(a, p)).min(singular_distance(b, p))
        }
        Expr::Call(f, a) => {
            let own = match f {
                Func::Ln | Func::Sqrt => val(a),
                _ => f64::INFINITY,
            };
            own.min(singular_distance(a, p))
        }
    }
}

/// A random `(expression, point)` pair with `p ∈ [-1.5, 1.5]²`, analytic
/// there, at least `0.2` from any singularity, and with moderate partials.
pub fn random_pair<R: Rng>(rng: &mut R) -> (Expr, Point) {
    loop {
        let e = random_expr(rng, 4);
        if !(e.mentions_x() || e.mentions_y()) {
            continue;
        }
        let p = Point::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        let Ok(jet) = e.eval_jet3(p) else { continue };
        if jet.partials().iter().any(|(_, c)| c.abs() > 1e4) || singular_distance(&e, p) < 0.2 {
            continue;
        }
        return (e, p);
    }
}


/// A web of the curvature/hexagon agreement suite and the box from which
/// hexagon centers are drawn (small enough that `r = 0.2` figures stay admissible).
pub struct SuiteWeb {
    pub web: threeweb::ThreeWeb,
    pub centers: threeweb::Rect,
}

/// Built-in webs: parallel, product, the paper web and four family members.
pub fn agreement_suite() -> Vec<SuiteWeb> {
    use threeweb::web::{default_rect, family_web, paper_web, Domain, Locus};
    use threeweb::{parse, Rect, ThreeWeb};

    let rect = |a, b, c, d| Rect::new(a, b, c, d).expect("static box");
    let normal = |f: &str, domain: Rect, centers: Rect| {
        let f = parse(f).expect("static expression");
        let band = Domain::excluding(domain, Locus::Degeneracy(f.clone()), 0.05).expect("static margin");
        SuiteWeb {
            web: ThreeWeb::new(format!("{{x, y, {f}}}"), [Expr::X, Expr::Y, f], band),
            centers,
        }
    };
    let family = |a: &str, b: &str, centers: Rect| {
        let (a, b) = (parse(a).expect("static"), parse(b).expect("static"));
        let domain = rect(-1.0, 1.0, -0.5, 1.0);
        let probe = family_web(&a, &b, Domain::boxed(domain)).expect("y-free coefficients");
        let f = probe.foliations[2].integral.clone();
        let band = Domain::excluding(domain, Locus::Degeneracy(f), 0.05).expect("static margin");
        SuiteWeb {
            web: probe.with_domain(band),
            centers,
        }
    };
    vec![
        normal("x+y", default_rect(), rect(-1.0, 1.0, -1.0, 1.0)),
        normal("x*y", rect(1.0, 2.0, 1.0, 2.0), rect(1.4, 1.6, 1.4, 1.6)),
        SuiteWeb {
            web: paper_web(),
            centers: rect(-1.2, 0.0, -1.2, 0.0),
        },
        family("1+x", "2", rect(0.1, 0.5, 0.0, 0.5)),
        family("2", "exp(x)", rect(-0.3, 0.3, 0.0, 0.5)),
        family("1", "x", rect(0.4, 0.6, 0.1, 0.4)),
        family("exp(-x)", "exp(-x)", rect(-0.6, -0.2, -0.3, 0.3)),
    ]
}
