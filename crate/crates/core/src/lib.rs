//! Planar 3-webs given by first integrals.
//!
//! A 3-web is three foliations of the plane in general position; here each
//! foliation is the level-set family of a closed-form expression in `x` and
//! `y`. The crate evaluates those expressions with third-order jets, traces
//! leaves numerically, pushes them through candidate changes of variables,
//! and decides two geometric questions:
//!
//! * linearizability, by checking that the images of sampled leaves are
//!   straight (see [`verify`]);
//! * parallelizability, by the Blaschke curvature of a normal-form web and,
//!   independently, by Thomsen hexagon closure (see [`analysis`]).
//!
//! The built-in example is the web `{x = c, y = c, (x+y)e^{-x} = c}` together
//! with the map `(x, y) ↦ ((x+y)e^{-x}, y)`, which straightens all three
//! foliations.

// `!(a > b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod export;
pub mod expr;
pub mod geom;
pub mod transform;
pub mod verify;
pub mod web;

pub use error::{Error, ErrorClass};
pub use expr::{parse, Expr, Jet3};
pub use geom::{Grid, Point, Rect};
pub use transform::PlaneMap;
pub use web::{Domain, Foliation, LeafPolyline, ThreeWeb};
