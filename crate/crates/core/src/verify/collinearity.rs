use thiserror::Error;

use crate::geom::Point;

/// Point sets with a smaller diameter are rejected.
pub const MIN_DIAMETER: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CollinearityError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("point set has zero diameter")]
    ZeroDiameter,
}

/// Straightness of a point set: the largest orthogonal distance to the
/// total-least-squares line, divided by the diameter of the set.
///
/// The fitted direction is the principal axis of the centered second-moment
/// matrix. The result is dimensionless and invariant under rigid motions,
/// uniform scaling and reordering.
pub fn collinearity_residual(points: &[Point]) -> Result<f64, CollinearityError> {
    let n = points.len();
    if n < 3 {
        return Err(CollinearityError::TooFewPoints(n));
    }
    let diameter = diameter(points);
    if !(diameter > MIN_DIAMETER) {
        return Err(CollinearityError::ZeroDiameter);
    }
    let inv_n = 1.0 / n as f64;
    let centroid = Point::new(
        points.iter().map(|p| p.x).sum::<f64>() * inv_n,
        points.iter().map(|p| p.y).sum::<f64>() * inv_n,
    );
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &p in points {
        let d = p - centroid;
        sxx += d.x * d.x;
        sxy += d.x * d.y;
        syy += d.y * d.y;
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let normal = Point::new(-theta.sin(), theta.cos());
    let max_dist = points
        .iter()
        .map(|&p| normal.dot(p - centroid).abs())
        .fold(0.0, f64::max);
    Ok(max_dist / diameter)
}

/// Largest pairwise distance.
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            best = best.max(p.dist(q));
        }
    }
    best
}
