use std::fmt::Write;

use serde::Serialize;
use threeweb::analysis::{curvature_grid, hexagon_defect_with, HexagonOptions, ParallelizabilityReport};
use threeweb::export::{
    fmt_float, hexagon_figure_csv, hexagon_table_csv, leaves_csv, leaves_with_images_csv, web_svg,
};
use threeweb::transform::{dufour_map, PlaneMap};
use threeweb::verify::{diagonal_seeds, run_pipeline, LineFormula, PipelineRun, TheoremReport, VerifySettings};
use threeweb::web::{general_position_report, DomainSummary, GeneralPositionReport, TraceOptions, Tracer, EPS_GRADIENT};
use threeweb::{LeafPolyline, Point, ThreeWeb};

use crate::args::{Cli, Command, MapKind};
use crate::config::{parse_expr, Resolved, WebSource};
use crate::{CliError, Outcome, EXIT_FAIL, EXIT_PASS};

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Parse { expr, at } => parse_cmd(expr, at.as_deref()),
        Command::Analyze => analyze(&Resolved::new(&cli.global, None)?),
        Command::Trace {
            foliation,
            seed,
            max_arc,
            map,
        } => trace(&Resolved::new(&cli.global, None)?, *foliation, seed.as_deref(), *max_arc, *map),
        Command::Hexagon { center, radii } => hexagon(&Resolved::new(&cli.global, None)?, center, radii),
        Command::VerifyTheorem { map } => {
            let cfg = Resolved::new(&cli.global, None)?;
            let web = cfg.web()?;
            let map = plane_map(*map, &web)?;
            pipeline(&cfg, &web, &map)
        }
        Command::VerifyMap { map, phi } => {
            let cfg = Resolved::new(&cli.global, None)?;
            let web = cfg.web()?;
            let map = match (map, phi) {
                (_, Some(phi)) => PlaneMap::new("phi", parse_expr("phi[0]", &phi[0])?, parse_expr("phi[1]", &phi[1])?),
                (Some(kind), None) => plane_map(*kind, &web)?,
                (None, None) => plane_map(MapKind::Dufour, &web)?,
            };
            pipeline(&cfg, &web, &map)
        }
        Command::Family { a, b } => {
            let cfg = match (a, b) {
                (Some(a), Some(b)) => Resolved::new(&cli.global, Some((a, b)))?,
                (None, None) => {
                    let cfg = Resolved::new(&cli.global, None)?;
                    if !matches!(cfg.source, WebSource::Family { .. }) {
                        return Err(CliError::Usage("`family` needs --a and --b (or a family web in --config)".into()));
                    }
                    cfg
                }
                _ => return Err(CliError::Usage("`family` needs both --a and --b".into())),
            };
            let web = cfg.web()?;
            let map = plane_map(MapKind::Dufour, &web)?;
            pipeline(&cfg, &web, &map)
        }
    }
}

fn pass_fail(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn trace_options(cfg: &Resolved) -> TraceOptions {
    TraceOptions {
        level_tol: cfg.tol_level,
        ..TraceOptions::default()
    }
}

fn plane_map(kind: MapKind, web: &ThreeWeb) -> Result<PlaneMap, CliError> {
    Ok(match kind {
        MapKind::Identity => PlaneMap::identity(),
        MapKind::Dufour => dufour_map(web)?,
    })
}

fn parse_cmd(text: &str, at: Option<&[f64]>) -> Result<Outcome, CliError> {
    let expr = parse_expr("expression", text)?;
    let mut summary = format!("{expr}\n");
    if let Some(&[x, y]) = at {
        let jet = expr.eval_jet3(Point::new(x, y))?;
        for (i, j) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)] {
            let name = format!("d{}{}", "x".repeat(i), "y".repeat(j));
            let name = if name == "d" { "f".to_string() } else { name };
            let _ = writeln!(summary, "{name:<5}{}", fmt_float(jet.partial(i, j)));
        }
    }
    Ok(Outcome {
        code: EXIT_PASS,
        out: Default::default(),
        files: Vec::new(),
        summary,
    })
}

#[derive(Serialize)]
struct AnalyzeReport<'a> {
    web: &'a str,
    integrals: [String; 3],
    domain: DomainSummary,
    general_position: GeneralPositionReport,
    parallelizability: ParallelizabilityReport,
    verdict: &'static str,
}

fn integrals(web: &ThreeWeb) -> [String; 3] {
    web.foliations.each_ref().map(|f| f.integral.to_string())
}

fn analyze(cfg: &Resolved) -> Result<Outcome, CliError> {
    let web = cfg.web()?;
    let general_position = general_position_report(&web, cfg.grid, EPS_GRADIENT)?;
    let samples = curvature_grid(&web, cfg.grid)?;
    let report = ParallelizabilityReport::from_samples(&samples, cfg.grid, cfg.tol_curvature);
    let verdict = if report.parallelizable {
        "parallelizable"
    } else {
        "not parallelizable"
    };
    let mut summary = String::new();
    let _ = writeln!(summary, "web: {} = {{{}}}", web.name, integrals(&web).join(", "));
    let _ = writeln!(
        summary,
        "general position: {} (min |det| = {:.6e} over {} points)",
        pass_fail(general_position.pass),
        general_position.min_abs_det,
        general_position.admissible_points
    );
    let _ = writeln!(summary, "max |K| = {:.6e} at {}", report.max_abs_k, at(report.max_at));
    let _ = writeln!(summary, "min |K| = {:.6e} at {}", report.min_abs_k, at(report.min_at));
    let _ = writeln!(summary, "verdict: {verdict} (tolerance {:e})", report.tolerance);
    let doc = AnalyzeReport {
        web: &web.name,
        integrals: integrals(&web),
        domain: web.domain.summary(),
        general_position,
        parallelizability: report,
        verdict,
    };
    Ok(Outcome {
        code: EXIT_PASS,
        out: cfg.out.clone(),
        files: vec![
            ("curvature.csv".into(), threeweb::export::curvature_csv(&samples)),
            ("report.json".into(), json(&doc)),
        ],
        summary,
    })
}

fn at(p: Option<Point>) -> String {
    match p {
        Some(p) => format!("({}, {})", p.x, p.y),
        None => "-".into(),
    }
}

fn trace(
    cfg: &Resolved,
    foliation: Option<usize>,
    seed: Option<&[f64]>,
    max_arc: f64,
    map: Option<MapKind>,
) -> Result<Outcome, CliError> {
    if !(max_arc > 0.0 && max_arc.is_finite()) {
        return Err(CliError::Usage(format!("--max-arc must be positive, got {max_arc}")));
    }
    let web = cfg.web()?;
    let ks: Vec<usize> = match foliation {
        Some(k @ 1..=3) => vec![k],
        Some(k) => return Err(CliError::Usage(format!("--foliation must be 1, 2 or 3, got {k}"))),
        None => vec![1, 2, 3],
    };
    let seeds = match seed {
        Some(&[x, y]) => vec![Point::new(x, y)],
        _ => diagonal_seeds(&web.domain, cfg.seeds)?,
    };
    let map = map.map(|kind| plane_map(kind, &web)).transpose()?;
    let options = trace_options(cfg);

    let mut files = Vec::new();
    let mut summary = String::new();
    let mut all_leaves = Vec::new();
    let mut all_images = Vec::new();
    for k in ks {
        let tracer = Tracer::with_options(&web.foliations[k - 1].integral, &web.domain, options);
        let mut leaves = Vec::new();
        for &s in &seeds {
            let leaf = tracer.trace(k, s, max_arc)?;
            let _ = writeln!(
                summary,
                "F{k} seed ({}, {}): level {:.6e}, {} vertices, arc {:.4}",
                s.x,
                s.y,
                leaf.level,
                leaf.len(),
                leaf.total_arc()
            );
            leaves.push(leaf);
        }
        let images = match &map {
            Some(m) => leaves.iter().map(|l| m.push_polyline(l)).collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        let csv = match &map {
            Some(_) => leaves_with_images_csv(&leaves, &images),
            None => leaves_csv(&leaves),
        };
        files.push((format!("leaves_F{k}.csv"), csv));
        all_leaves.extend(leaves);
        all_images.extend(images);
    }
    files.push(("web.svg".into(), web_svg(&web.domain.rect, &all_leaves, &all_images)));
    Ok(Outcome {
        code: EXIT_PASS,
        out: cfg.out.clone(),
        files,
        summary,
    })
}

fn hexagon(cfg: &Resolved, center: &[f64], radii: &[f64]) -> Result<Outcome, CliError> {
    let web = cfg.web()?;
    let center = Point::new(center[0], center[1]);
    let options = HexagonOptions {
        trace: trace_options(cfg),
        ..HexagonOptions::default()
    };
    let figures = radii
        .iter()
        .map(|&r| hexagon_defect_with(&web, center, r, &options))
        .collect::<Result<Vec<_>, _>>()?;
    let mut files = vec![("hexagon.csv".to_string(), hexagon_table_csv(&figures))];
    let mut summary = format!("center ({}, {})\n", center.x, center.y);
    for (i, fig) in figures.iter().enumerate() {
        files.push((format!("hexagon_{}.csv", i + 1), hexagon_figure_csv(fig)));
        let _ = writeln!(summary, "r = {:<8} defect = {:.6e}", fig.radius, fig.defect);
    }
    Ok(Outcome {
        code: EXIT_PASS,
        out: cfg.out.clone(),
        files,
        summary,
    })
}

fn line_formula(cfg: &Resolved, map: &PlaneMap, web: &ThreeWeb) -> Option<LineFormula> {
    let dufour = dufour_map(web).ok()?;
    if map.components != dufour.components {
        return None;
    }
    match &cfg.source {
        WebSource::Paper => Some(LineFormula::Paper),
        WebSource::Family { a, b } => Some(LineFormula::Family { a: a.clone(), b: b.clone() }),
        WebSource::Integrals(_) => None,
    }
}

fn pipeline(cfg: &Resolved, web: &ThreeWeb, map: &PlaneMap) -> Result<Outcome, CliError> {
    let settings = VerifySettings {
        grid: cfg.grid,
        seeds: cfg.seeds,
        tol_linearity: cfg.tol_linearity,
        diffeo_threshold: cfg.tol_diffeo,
        trace: trace_options(cfg),
        ..VerifySettings::default()
    };
    let formula = line_formula(cfg, map, web);
    let PipelineRun { report, leaves, images } = run_pipeline(web, map, formula.as_ref(), &settings)?;

    let mut files = vec![("report.json".to_string(), json(&report))];
    for k in 1..=3 {
        let pick = |ls: &[LeafPolyline]| ls.iter().filter(|l| l.foliation == k).cloned().collect::<Vec<_>>();
        files.push((format!("leaves_F{k}.csv"), leaves_with_images_csv(&pick(&leaves), &pick(&images))));
    }
    files.push(("web.svg".into(), web_svg(&web.domain.rect, &leaves, &images)));
    Ok(Outcome {
        code: if report.pass { EXIT_PASS } else { EXIT_FAIL },
        out: cfg.out.clone(),
        files,
        summary: pipeline_summary(&report),
    })
}

fn pipeline_summary(r: &TheoremReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "web: {}", r.web);
    let _ = writeln!(s, "map: {}", r.map);
    let _ = writeln!(s, "seeds: {}", r.seeds.len());
    let gp = &r.general_position;
    let _ = writeln!(
        s,
        "general position: {} (min |det| = {:.6e}, {} failing points)",
        pass_fail(gp.pass),
        gp.min_abs_det,
        gp.failures.len()
    );
    let d = &r.diffeo;
    let _ = writeln!(
        s,
        "diffeomorphism: {} (min |det J| = {:.6e}, {} failing points)",
        pass_fail(d.pass),
        d.min_abs_det,
        d.failures.len()
    );
    for l in &r.linearity {
        let _ = writeln!(
            s,
            "F{} linear: {} (max residual {:.3e} over {} leaves, tolerance {:e})",
            l.foliation,
            pass_fail(l.linear),
            l.max_residual,
            l.leaves.len(),
            l.tolerance
        );
    }
    if let Some(lf) = &r.line_formula {
        let _ = writeln!(
            s,
            "line formula {}: {} (max deviation {:.3e})",
            lf.formula,
            pass_fail(lf.pass),
            lf.max_deviation
        );
    }
    let _ = writeln!(s, "verdict: {}", pass_fail(r.pass));
    s
}
