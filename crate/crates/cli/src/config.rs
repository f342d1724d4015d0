//! Run configuration: a JSON document, overridden field by field by flags.
//!
//! ```json
//! {
//!   "web": { "builtin": "paper" },
//!   "domain": { "box": [-2, 2, -2, 2], "exclude": "1-x-y", "margin": 0.05 },
//!   "grid": [41, 41],
//!   "tolerances": { "level": 1e-9, "linearity": 1e-8, "curvature": 1e-8, "diffeo": 1e-6 },
//!   "seeds": 7,
//!   "out": "out"
//! }
//! ```
//!
//! `web` is one of `{"builtin": "paper"}`, `{"integrals": ["x", "y", "x*y"]}`
//! or `{"family": {"a": "1", "b": "x"}}`. Every field is optional.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use threeweb::expr::parse;
use threeweb::geom::{Grid, Rect};
use threeweb::web::{default_rect, family_web, paper_exclusion, paper_web_on, Domain, Locus, DEFAULT_MARGIN};
use threeweb::{Expr, ThreeWeb};

use crate::args::{Builtin, GlobalArgs};
use crate::CliError;

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub web: Option<WebSpec>,
    pub domain: Option<DomainSpec>,
    pub grid: Option<[usize; 2]>,
    pub tolerances: Option<Tolerances>,
    pub seeds: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum WebSpec {
    Builtin(BuiltinName),
    Integrals([String; 3]),
    Family { a: String, b: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinName {
    Paper,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(rename = "box")]
    pub rect: Option<[f64; 4]>,
    pub exclude: Option<String>,
    pub margin: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub level: Option<f64>,
    pub linearity: Option<f64>,
    pub curvature: Option<f64>,
    pub diffeo: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WebSource {
    Paper,
    Integrals([Expr; 3]),
    Family { a: Expr, b: Expr },
}

/// Config and flags merged, parsed and validated.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub source: WebSource,
    pub rect: Rect,
    pub exclude: Option<Expr>,
    pub margin: f64,
    pub grid: Grid,
    pub tol_level: f64,
    pub tol_linearity: f64,
    pub tol_curvature: f64,
    pub tol_diffeo: f64,
    pub seeds: usize,
    pub out: PathBuf,
}

pub const DEFAULT_OUT: &str = "threeweb-out";

pub fn parse_expr(what: &str, text: &str) -> Result<Expr, CliError> {
    parse(text).map_err(|error| CliError::Parse {
        what: what.to_string(),
        text: text.to_string(),
        error,
    })
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be a positive finite number, got {v}")))
    }
}

impl Resolved {
    /// `family` is the `(a, b)` pair from the `family` subcommand, if any.
    pub fn new(args: &GlobalArgs, family: Option<(&str, &str)>) -> Result<Resolved, CliError> {
        let config = match &args.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let domain = config.domain.clone().unwrap_or_default();
        let tols = config.tolerances.clone().unwrap_or_default();

        let spec = if let Some((a, b)) = family {
            if args.builtin.is_some() || args.web.is_some() {
                return Err(CliError::Usage("`family` takes --a/--b, not --builtin or --web".into()));
            }
            WebSpec::Family {
                a: a.to_string(),
                b: b.to_string(),
            }
        } else if let Some(Builtin::Paper) = args.builtin {
            WebSpec::Builtin(BuiltinName::Paper)
        } else if let Some(w) = &args.web {
            WebSpec::Integrals([w[0].clone(), w[1].clone(), w[2].clone()])
        } else {
            config.web.clone().unwrap_or(WebSpec::Builtin(BuiltinName::Paper))
        };
        let source = match spec {
            WebSpec::Builtin(BuiltinName::Paper) => WebSource::Paper,
            WebSpec::Integrals([u1, u2, u3]) => WebSource::Integrals([
                parse_expr("u1", &u1)?,
                parse_expr("u2", &u2)?,
                parse_expr("u3", &u3)?,
            ]),
            WebSpec::Family { a, b } => WebSource::Family {
                a: parse_expr("a", &a)?,
                b: parse_expr("b", &b)?,
            },
        };

        let rect = match args.rect.as_deref().map(<[f64; 4]>::try_from).transpose() {
            Ok(Some(r)) => Some(r),
            Ok(None) => domain.rect,
            Err(_) => return Err(CliError::Usage("--box takes four values".into())),
        };
        let rect = match rect {
            Some([x0, x1, y0, y1]) => Rect::new(x0, x1, y0, y1).map_err(|e| CliError::Config(e.to_string()))?,
            None => default_rect(),
        };
        let exclude = args
            .exclude
            .clone()
            .or(domain.exclude)
            .map(|e| parse_expr("exclude", &e))
            .transpose()?;
        let margin = args.margin.or(domain.margin).unwrap_or(DEFAULT_MARGIN);
        if !(margin >= 0.0 && margin.is_finite()) {
            return Err(CliError::Config(format!("margin must be finite and non-negative, got {margin}")));
        }
        let [nx, ny] = match &args.grid {
            Some(g) => [g[0], g[1]],
            None => config.grid.unwrap_or([Grid::DEFAULT.nx, Grid::DEFAULT.ny]),
        };
        let grid = Grid::new(nx, ny).map_err(|e| CliError::Config(e.to_string()))?;
        let seeds = args.seeds.or(config.seeds).unwrap_or(7);
        if seeds == 0 {
            return Err(CliError::Config("seeds must be at least 1".into()));
        }
        Ok(Resolved {
            source,
            rect,
            exclude,
            margin,
            grid,
            tol_level: positive("level tolerance", tols.level.unwrap_or(1e-9))?,
            tol_linearity: positive("linearity tolerance", args.tol_linearity.or(tols.linearity).unwrap_or(1e-8))?,
            tol_curvature: positive("curvature tolerance", args.tol_curvature.or(tols.curvature).unwrap_or(1e-8))?,
            tol_diffeo: positive("diffeo tolerance", tols.diffeo.unwrap_or(1e-6))?,
            seeds,
            out: args.out.clone().or(config.out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        })
    }

    /// The web on its domain. Without `--exclude`, the built-in web drops the
    /// band around `x + y = 1` and normal-form webs the band around `f_x·f_y = 0`.
    pub fn web(&self) -> Result<ThreeWeb, CliError> {
        let explicit = self.exclude.clone().map(Locus::Zero);
        let domain = |fallback: Option<Locus>| -> Result<Domain, CliError> {
            let locus = explicit.clone().or(fallback);
            Ok(match locus {
                Some(l) => Domain::excluding(self.rect, l, self.margin).map_err(threeweb::Error::from)?,
                None => Domain::boxed(self.rect),
            })
        };
        Ok(match &self.source {
            WebSource::Paper => paper_web_on(domain(Some(Locus::Zero(paper_exclusion())))?),
            WebSource::Integrals(us) => {
                let fallback = match (&us[0], &us[1]) {
                    (Expr::X, Expr::Y) => Some(Locus::Degeneracy(us[2].clone())),
                    _ => None,
                };
                ThreeWeb::new("custom", us.clone(), domain(fallback)?)
            }
            WebSource::Family { a, b } => {
                let probe = family_web(a, b, Domain::boxed(self.rect)).map_err(threeweb::Error::from)?;
                let f = probe.foliations[2].integral.clone();
                probe.with_domain(domain(Some(Locus::Degeneracy(f)))?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_schema() {
        let c: RunConfig = serde_json::from_str(
            r#"{"web": {"family": {"a": "1", "b": "x"}}, "domain": {"box": [0.5, 2, -1, 1]},
                "grid": [5, 7], "tolerances": {"linearity": 1e-9}, "seeds": 3}"#,
        )
        .unwrap();
        assert_eq!(
            c.web,
            Some(WebSpec::Family {
                a: "1".into(),
                b: "x".into()
            })
        );
        assert_eq!(c.domain.unwrap().rect, Some([0.5, 2.0, -1.0, 1.0]));
        let c: RunConfig = serde_json::from_str(r#"{"web": {"builtin": "paper"}}"#).unwrap();
        assert_eq!(c.web, Some(WebSpec::Builtin(BuiltinName::Paper)));
        assert!(serde_json::from_str::<RunConfig>(r#"{"webs": 1}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"tolerances": {"lvl": 1}}"#).is_err());
    }

    #[test]
    fn flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        std::fs::write(&path, r#"{"seeds": 3, "grid": [5, 5], "domain": {"margin": 0.1}}"#).unwrap();
        let args = GlobalArgs {
            config: Some(path),
            seeds: Some(9),
            ..GlobalArgs::default()
        };
        let r = Resolved::new(&args, None).unwrap();
        assert_eq!(r.seeds, 9);
        assert_eq!(r.grid, Grid::new(5, 5).unwrap());
        assert_eq!(r.margin, 0.1);
        assert_eq!(r.source, WebSource::Paper);
    }

    #[test]
    fn rejects_bad_values() {
        let args = GlobalArgs {
            tol_linearity: Some(0.0),
            ..GlobalArgs::default()
        };
        assert!(matches!(Resolved::new(&args, None), Err(CliError::Config(_))));
        let args = GlobalArgs {
            margin: Some(-1.0),
            ..GlobalArgs::default()
        };
        assert!(matches!(Resolved::new(&args, None), Err(CliError::Config(_))));
        let args = GlobalArgs {
            web: Some(vec!["x".into(), "y".into(), "x+".into()]),
            ..GlobalArgs::default()
        };
        assert!(matches!(Resolved::new(&args, None), Err(CliError::Parse { .. })));
    }
}
