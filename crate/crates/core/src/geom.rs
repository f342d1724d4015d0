use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, rhs: Point) -> Point {
        Point::new(self * rhs.x, self * rhs.y)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Point {
        Point::new(x, y)
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum GeomError {
    #[error("degenerate box [{x_min}, {x_max}] x [{y_min}, {y_max}]")]
    DegenerateBox {
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
    },
    #[error("grid must be at least 2x2, got {nx}x{ny}")]
    GridTooSmall { nx: usize, ny: usize },
}

/// Axis-aligned box `[x_min, x_max] × [y_min, y_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Rect, GeomError> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite())
            && x_max > x_min
            && y_max > y_min;
        if !ok {
            return Err(GeomError::DegenerateBox {
                x_min,
                x_max,
                y_min,
                y_max,
            });
        }
        Ok(Rect {
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    /// Point at fraction `t` along the diagonal from `(x_min, y_min)` to `(x_max, y_max)`.
    pub fn along_diagonal(&self, t: f64) -> Point {
        Point::new(self.x_min + t * self.width(), self.y_min + t * self.height())
    }
}

/// Uniform `nx × ny` sample lattice including the box edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub const DEFAULT: Grid = Grid { nx: 41, ny: 41 };

    pub fn new(nx: usize, ny: usize) -> Result<Grid, GeomError> {
        if nx < 2 || ny < 2 {
            return Err(GeomError::GridTooSmall { nx, ny });
        }
        Ok(Grid { nx, ny })
    }

    /// Grid points in row-major order (`y` outer, `x` inner).
    pub fn points(&self, rect: &Rect) -> impl Iterator<Item = Point> + '_ {
        let rect = *rect;
        let (nx, ny) = (self.nx, self.ny);
        (0..ny).flat_map(move |j| {
            let y = lerp(rect.y_min, rect.y_max, j, ny);
            (0..nx).map(move |i| Point::new(lerp(rect.x_min, rect.x_max, i, nx), y))
        })
    }
}

impl Default for Grid {
    fn default() -> Grid {
        Grid::DEFAULT
    }
}

fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}
