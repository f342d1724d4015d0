use std::ops::{Add, Mul, Neg, Sub};

/// Maximum total derivative order carried by [`Jet3`].
pub const ORDER: usize = 3;

const LEN: usize = 10;

/// Index of the `(i, j)` slot, grouped by total order: `1, x, y, xx, xy, yy, xxx, ...`.
const fn slot(i: usize, j: usize) -> usize {
    let n = i + j;
    n * (n + 1) / 2 + j
}

/// `(i, j)` for every slot, in storage order.
const EXPONENTS: [(usize, usize); LEN] = [
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

const FACTORIAL: [f64; 4] = [1.0, 1.0, 2.0, 6.0];

/// Truncated bivariate Taylor data of a function at a point: the value and
/// every partial derivative `∂ⁱₓ∂ʲᵧf` with `i + j ≤ 3`.
///
/// Internally the ten slots hold Taylor coefficients `∂ⁱₓ∂ʲᵧf / (i! j!)`, which
/// makes multiplication a truncated Cauchy product. Use [`Jet3::partial`] to
/// read derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet3 {
    taylor: [f64; LEN],
}

impl Jet3 {
    pub const ZERO: Jet3 = Jet3 { taylor: [0.0; LEN] };

    pub fn constant(value: f64) -> Jet3 {
        let mut taylor = [0.0; LEN];
        taylor[0] = value;
        Jet3 { taylor }
    }

    /// The coordinate function `x` seeded at `x = value`.
    pub fn var_x(value: f64) -> Jet3 {
        let mut jet = Jet3::constant(value);
        jet.taylor[slot(1, 0)] = 1.0;
        jet
    }

    /// The coordinate function `y` seeded at `y = value`.
    pub fn var_y(value: f64) -> Jet3 {
        let mut jet = Jet3::constant(value);
        jet.taylor[slot(0, 1)] = 1.0;
        jet
    }

    /// Builds a jet from partial derivatives; `partials[(i,j)]` is `∂ⁱₓ∂ʲᵧf`.
    pub fn from_partials(partial: impl Fn(usize, usize) -> f64) -> Jet3 {
        let mut taylor = [0.0; LEN];
        for (k, &(i, j)) in EXPONENTS.iter().enumerate() {
            taylor[k] = partial(i, j) / (FACTORIAL[i] * FACTORIAL[j]);
        }
        Jet3 { taylor }
    }

    pub fn value(&self) -> f64 {
        self.taylor[0]
    }

    /// `∂ⁱₓ∂ʲᵧf` at the expansion point.
    ///
    /// # Panics
    /// If `i + j > 3`.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        assert!(i + j <= ORDER, "Jet3 holds derivatives through order 3");
        self.taylor[slot(i, j)] * FACTORIAL[i] * FACTORIAL[j]
    }

    /// All ten partial derivatives with their `(i, j)` orders.
    pub fn partials(&self) -> [((usize, usize), f64); LEN] {
        EXPONENTS.map(|(i, j)| ((i, j), self.partial(i, j)))
    }

    pub fn is_finite(&self) -> bool {
        self.taylor.iter().all(|c| c.is_finite())
    }

    pub fn scale(&self, s: f64) -> Jet3 {
        Jet3 {
            taylor: self.taylor.map(|c| c * s),
        }
    }

    /// `g ∘ self`, given `g(u₀), g'(u₀), g''(u₀), g'''(u₀)` at `u₀ = self.value()`.
    pub fn compose(&self, derivs: [f64; 4]) -> Jet3 {
        let mut h = *self;
        h.taylor[0] = 0.0;
        let h2 = h * h;
        let h3 = h2 * h;
        let mut out = h.scale(derivs[1]) + h2.scale(derivs[2] / 2.0) + h3.scale(derivs[3] / 6.0);
        out.taylor[0] = derivs[0];
        out
    }

    pub fn recip(&self) -> Jet3 {
        let u = self.value();
        let r = 1.0 / u;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn exp(&self) -> Jet3 {
        let e = self.value().exp();
        self.compose([e; 4])
    }

    pub fn ln(&self) -> Jet3 {
        let u = self.value();
        let r = 1.0 / u;
        self.compose([u.ln(), r, -r * r, 2.0 * r * r * r])
    }

    pub fn sin(&self) -> Jet3 {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet3 {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn sqrt(&self) -> Jet3 {
        let u = self.value();
        let s = u.sqrt();
        self.compose([s, 0.5 / s, -0.25 / (u * s), 0.375 / (u * u * s)])
    }

    /// Integer power by repeated squaring; negative exponents go through [`Jet3::recip`].
    pub fn powi(&self, n: i64) -> Jet3 {
        let mut base = if n < 0 { self.recip() } else { *self };
        let mut k = n.unsigned_abs();
        let mut acc = Jet3::constant(1.0);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        acc
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Jet3) -> Jet3 {
        let mut taylor = self.taylor;
        for (a, b) in taylor.iter_mut().zip(rhs.taylor) {
            *a += b;
        }
        Jet3 { taylor }
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Jet3) -> Jet3 {
        let mut taylor = self.taylor;
        for (a, b) in taylor.iter_mut().zip(rhs.taylor) {
            *a -= b;
        }
        Jet3 { taylor }
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.scale(-1.0)
    }
}

/// Truncated product: terms of total order above 3 are dropped.
impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: Jet3) -> Jet3 {
        let mut taylor = [0.0; LEN];
        for (ka, &(ia, ja)) in EXPONENTS.iter().enumerate() {
            let a = self.taylor[ka];
            if a == 0.0 {
                continue;
            }
            for (kb, &(ib, jb)) in EXPONENTS.iter().enumerate() {
                if ia + ja + ib + jb > ORDER {
                    continue;
                }
                taylor[slot(ia + ib, ja + jb)] += a * rhs.taylor[kb];
            }
        }
        Jet3 { taylor }
    }
}
