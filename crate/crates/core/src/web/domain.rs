use serde::Serialize;

use crate::expr::{EvalError, Expr};
use crate::geom::{Point, Rect};

use super::WebError;

/// Default half-width of the band removed around an excluded locus.
pub const DEFAULT_MARGIN: f64 = 0.05;

/// Curve removed from a domain, as the zero set of a scalar function.
#[derive(Clone, Debug, PartialEq)]
pub enum Locus {
    /// Zero set of the expression itself.
    Zero(Expr),
    /// Where the normal-form web `{x, y, f}` degenerates: `∂ₓf · ∂ᵧf = 0`.
    Degeneracy(Expr),
}

impl Locus {
    pub fn value(&self, p: Point) -> Result<f64, EvalError> {
        match self {
            Locus::Zero(g) => g.eval(p),
            Locus::Degeneracy(f) => {
                let [fx, fy] = f.gradient(p)?;
                Ok(fx * fy)
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Locus::Zero(g) => g.to_string(),
            Locus::Degeneracy(f) => format!("d/dx({f}) * d/dy({f})"),
        }
    }
}

/// Which side of the excluded locus a point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    Positive,
    Negative,
    /// The domain has no excluded locus.
    Whole,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Exclusion {
    pub locus: Locus,
    /// Points with `|g(p)| < margin` are inadmissible. Zero removes nothing.
    pub margin: f64,
}

/// A box with an optional band removed around a locus `g = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub rect: Rect,
    pub exclusion: Option<Exclusion>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DomainSummary {
    pub rect: Rect,
    pub exclusion: Option<String>,
    pub margin: Option<f64>,
}

impl Domain {
    pub fn new(rect: Rect, exclusion: Option<Exclusion>) -> Result<Domain, WebError> {
        if let Some(ex) = &exclusion {
            if !(ex.margin >= 0.0 && ex.margin.is_finite()) {
                return Err(WebError::InvalidMargin(ex.margin));
            }
        }
        Ok(Domain { rect, exclusion })
    }

    pub fn boxed(rect: Rect) -> Domain {
        Domain {
            rect,
            exclusion: None,
        }
    }

    pub fn excluding(rect: Rect, locus: Locus, margin: f64) -> Result<Domain, WebError> {
        Domain::new(rect, Some(Exclusion { locus, margin }))
    }

    pub fn with_margin(&self, margin: f64) -> Result<Domain, WebError> {
        let exclusion = self.exclusion.as_ref().map(|ex| Exclusion {
            locus: ex.locus.clone(),
            margin,
        });
        Domain::new(self.rect, exclusion)
    }

    pub fn exclusion_value(&self, p: Point) -> Result<Option<f64>, EvalError> {
        self.exclusion
            .as_ref()
            .map(|ex| ex.locus.value(p))
            .transpose()
    }

    /// Inside the box and at least `margin` away (in `|g|`) from the locus.
    pub fn is_admissible(&self, p: Point) -> Result<bool, EvalError> {
        if !self.rect.contains(p) {
            return Ok(false);
        }
        match &self.exclusion {
            None => Ok(true),
            Some(ex) => Ok(ex.locus.value(p)?.abs() >= ex.margin),
        }
    }

    pub fn component(&self, p: Point) -> Result<Component, EvalError> {
        Ok(match self.exclusion_value(p)? {
            None => Component::Whole,
            Some(g) if g >= 0.0 => Component::Positive,
            Some(_) => Component::Negative,
        })
    }

    pub fn summary(&self) -> DomainSummary {
        DomainSummary {
            rect: self.rect,
            exclusion: self.exclusion.as_ref().map(|ex| ex.locus.describe()),
            margin: self.exclusion.as_ref().map(|ex| ex.margin),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn paper_domain(margin: f64) -> Domain {
        let rect = Rect::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        Domain::excluding(rect, Locus::Zero(parse("1-x-y").unwrap()), margin).unwrap()
    }

    #[test]
    fn band_is_removed() {
        let d = paper_domain(0.05);
        assert!(!d.is_admissible(Point::new(0.5, 0.5)).unwrap());
        assert!(!d.is_admissible(Point::new(0.5, 0.46)).unwrap());
        assert!(d.is_admissible(Point::new(0.5, 0.4)).unwrap());
        assert!(!d.is_admissible(Point::new(3.0, 0.0)).unwrap());
        assert_eq!(d.exclusion_value(Point::new(0.5, 0.5)).unwrap(), Some(0.0));
    }

    #[test]
    fn zero_margin_removes_nothing() {
        let d = paper_domain(0.0);
        assert!(d.is_admissible(Point::new(0.5, 0.5)).unwrap());
    }

    #[test]
    fn negative_margin_is_rejected() {
        let rect = Rect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        assert!(Domain::excluding(rect, Locus::Zero(parse("x").unwrap()), -0.1).is_err());
    }

    #[test]
    fn components_follow_sign_of_locus() {
        let d = paper_domain(0.05);
        assert_eq!(d.component(Point::new(0.0, 0.0)).unwrap(), Component::Positive);
        assert_eq!(d.component(Point::new(1.0, 1.0)).unwrap(), Component::Negative);
        let whole = Domain::boxed(d.rect);
        assert_eq!(whole.component(Point::new(1.0, 1.0)).unwrap(), Component::Whole);
    }

    #[test]
    fn degeneracy_locus_is_product_of_partials() {
        let f = parse("x + x*y").unwrap();
        let locus = Locus::Degeneracy(f);
        // f_x = 1 + y, f_y = x
        assert_eq!(locus.value(Point::new(2.0, 3.0)).unwrap(), 8.0);
        assert_eq!(locus.value(Point::new(0.7, -1.0)).unwrap(), 0.0);
    }
}
