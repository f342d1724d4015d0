use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use threeweb::analysis::{
    blaschke_curvature, curvature_grid, hexagon_defect, parallelizability_report, LEGS,
};
use threeweb::geom::Grid;
use threeweb::web::paper_web;
use threeweb::Point;
use threeweb_oracle::{agreement_suite, fd_curvature};

fn closed_form(p: Point) -> f64 {
    -(2.0 * p.x).exp() / (1.0 - p.x - p.y).powi(3)
}

#[test]
fn closed_form_on_every_admissible_grid_point() {
    let samples = curvature_grid(&paper_web(), Grid::DEFAULT).unwrap();
    assert_eq!(samples.len(), 41 * 41 - 31);
    for s in &samples {
        let want = closed_form(s.point);
        assert!((s.k - want).abs() <= 1e-10 * want.abs(), "{:?}: {} vs {want}", s.point, s.k);
    }
}

#[test]
fn paper_values() {
    let w = paper_web();
    assert!((blaschke_curvature(&w, Point::new(0.0, 0.0)).unwrap() + 1.0).abs() < 1e-14);
    let k = blaschke_curvature(&w, Point::new(1.0, 1.0)).unwrap();
    assert!((k - 2.0f64.exp()).abs() < 1e-13 * 2.0f64.exp());
}

#[test]
fn jet_curvature_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(299);
    let mut checked = 0;
    for suite in agreement_suite() {
        let web = &suite.web;
        let r = web.domain.rect;
        let f = &web.foliations[2].integral;
        let mut here = 0;
        while here < 3 {
            let p = Point::new(rng.random_range(r.x_min..r.x_max), rng.random_range(r.y_min..r.y_max));
            if !web.domain.is_admissible(p).unwrap() {
                continue;
            }
            let k = blaschke_curvature(web, p).unwrap();
            let want = fd_curvature(f, p).unwrap();
            assert!(
                (k - want).abs() <= 1e-4 * want.abs().max(1e-6),
                "{} at {p:?}: {k:e} vs {want:e}",
                web.name
            );
            here += 1;
        }
        checked += here;
    }
    assert!(checked >= 20);
}

#[test]
fn curvature_and_hexagons_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for suite in agreement_suite() {
        let web = &suite.web;
        let flat = parallelizability_report(web, Grid::DEFAULT, 1e-8).unwrap().parallelizable;
        let c = suite.centers;
        for _ in 0..5 {
            let o = Point::new(rng.random_range(c.x_min..c.x_max), rng.random_range(c.y_min..c.y_max));
            let fig = hexagon_defect(web, o, 0.2).unwrap_or_else(|e| panic!("{} at {o:?}: {e}", web.name));
            assert_eq!(
                fig.defect <= 1e-7,
                flat,
                "{} at {o:?}: defect {:e}, parallelizable {flat}",
                web.name,
                fig.defect
            );
        }
    }
}

#[test]
fn hexagon_vertices_sit_on_their_leaves() {
    for suite in agreement_suite() {
        let web = &suite.web;
        let o = suite.centers.along_diagonal(0.5);
        let fig = hexagon_defect(web, o, 0.2).unwrap();
        let u = |k: usize, p: Point| web.foliations[k - 1].integral.eval(p).unwrap();
        assert!((u(1, fig.points[0]) - u(1, o)).abs() <= 1e-9);
        for (i, &(_, target)) in LEGS.iter().enumerate() {
            let d = (u(target, fig.points[i + 1]) - u(target, o)).abs();
            assert!(d <= 1e-9, "{} leg {}: {d:e}", web.name, i + 1);
        }
    }
}

#[test]
fn defects_shrink_with_radius() {
    let w = paper_web();
    let defects: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&r| hexagon_defect(&w, Point::new(0.0, 0.0), r).unwrap().defect)
        .collect();
    assert!(defects.windows(2).all(|d| d[1] < d[0]), "{defects:?}");
    assert!(defects[3] > 0.0);
}
