use std::path::Path;
use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn threeweb(out: &Path, args: &[&str]) -> Run {
    let o = Command::new(env!("CARGO_BIN_EXE_threeweb"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs");
    Run {
        code: o.status.code().expect("exit code"),
        stdout: String::from_utf8(o.stdout).unwrap(),
        stderr: String::from_utf8(o.stderr).unwrap(),
    }
}

fn code(args: &[&str]) -> i32 {
    let dir = tempfile::tempdir().unwrap();
    let run = threeweb(dir.path(), args);
    run.code
}

#[test]
fn documented_exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["verify-theorem", "--builtin", "paper"], 0),
        (&["verify-theorem", "--builtin", "paper", "--map", "identity"], 1),
        (&["verify-theorem", "--config", "missing.json"], 2),
        (&["analyze", "--builtin", "paper"], 0),
        (&["analyze", "--web", "x", "y", "x+y"], 0),
        (&["analyze", "--web", "x", "y", "x*y", "--box", "1", "2", "1", "2"], 0),
        (&["hexagon", "--builtin", "paper", "--center", "0", "0", "--radii", "0.2", "0.1", "0.05"], 0),
        (&["hexagon", "--web", "x", "y", "x+y", "--center", "0", "0", "--radii", "0.5"], 0),
        (&["hexagon", "--builtin", "paper", "--center", "0", "1.05", "--radii", "0.5"], 3),
        (&["family", "--a", "1", "--b", "1"], 0),
        (&["family", "--a", "exp(-x)", "--b", "exp(-x)"], 0),
        (&["family", "--a", "1", "--b", "x", "--box", "0.5", "2", "-1", "1"], 0),
    ];
    for (args, want) in cases {
        assert_eq!(code(args), *want, "threeweb {}", args.join(" "));
    }
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["analyze", "--grid", "1", "5"]), 2);
    assert_eq!(code(&["analyze", "--web", "x", "y", "x+*y"]), 2);
    assert_eq!(code(&["analyze", "--web", "x", "y", "foo(x)"]), 2);
    assert_eq!(code(&["analyze", "--tol-curvature", "-1"]), 2);
    assert_eq!(code(&["family", "--a", "x*y", "--b", "1"]), 2);
    assert_eq!(code(&["family", "--a", "1"]), 2);
    assert_eq!(code(&["trace", "--foliation", "4"]), 2);
    assert_eq!(code(&["hexagon", "--radii", "0"]), 2);
    assert_eq!(code(&["verify-theorem", "--web", "y", "x", "x+y"]), 2);
    assert_eq!(code(&["parse", "sqrt(x"]), 2);
    assert_eq!(code(&["parse", "ln(x)", "--at", "-1", "0"]), 3);
    assert_eq!(code(&["parse", "ln(x)", "--at", "1", "0"]), 0);
}

#[test]
fn parse_errors_point_at_the_offset() {
    let dir = tempfile::tempdir().unwrap();
    let run = threeweb(dir.path(), &["parse", "x + * y"]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("byte 4"), "{}", run.stderr);
    let run = threeweb(dir.path(), &["parse", "(x+y)*exp(-x)", "--at", "0", "0"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.starts_with("(x+y)*exp(-x)\n"), "{}", run.stdout);
    assert!(run.stdout.contains("dxx  -2.0000000000000000e0"), "{}", run.stdout);
}

#[test]
fn numerical_failures_exit_3() {
    // Seed inside the removed band.
    assert_eq!(code(&["trace", "--builtin", "paper", "--seed", "0.5", "0.5"]), 3);
    // Curvature needs f_x f_y != 0; x*y vanishes on the axes when nothing is removed.
    assert_eq!(code(&["analyze", "--web", "x", "y", "x*y", "--margin", "0"]), 3);
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn outputs_are_deterministic() {
    let commands: &[&[&str]] = &[
        &["verify-theorem", "--builtin", "paper"],
        &["analyze", "--builtin", "paper"],
        &["hexagon", "--builtin", "paper"],
        &["trace", "--builtin", "paper", "--map", "dufour"],
    ];
    for args in commands {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let (ra, rb) = (threeweb(a.path(), args), threeweb(b.path(), args));
        assert_eq!(ra.stdout, rb.stdout);
        let mut names: Vec<_> = std::fs::read_dir(a.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert!(!names.is_empty());
        for name in names {
            assert_eq!(
                std::fs::read(a.path().join(&name)).unwrap(),
                std::fs::read(b.path().join(&name)).unwrap(),
                "{name} differs for {}",
                args.join(" ")
            );
        }
    }
}

fn csv_rows(text: &str) -> usize {
    text.lines().skip(1).filter(|l| !l.is_empty()).count()
}

/// Leaves in a leaf CSV: runs of consecutive rows sharing foliation, level and image flag.
fn leaves_in(csv: &str) -> usize {
    let keys: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|line| {
            let cols: Vec<&str> = line.split(',').collect();
            let mut key = vec![cols[0], cols[1]];
            key.extend(cols.get(5));
            key
        })
        .collect();
    keys.iter().enumerate().filter(|(i, k)| *i == 0 || keys[i - 1] != **k).count()
}

#[test]
fn svg_is_well_formed_with_one_polyline_per_leaf() {
    let dir = tempfile::tempdir().unwrap();
    let run = threeweb(dir.path(), &["verify-theorem", "--builtin", "paper"]);
    assert_eq!(run.code, 0);
    let svg = read(dir.path(), "web.svg");
    let doc = roxmltree::Document::parse(&svg).expect("well-formed SVG");
    let polylines = doc.descendants().filter(|n| n.has_tag_name("polyline")).count();
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    let leaves: usize = report["linearity"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["leaves"].as_array().unwrap().len())
        .sum();
    // Originals and images.
    assert_eq!(polylines, 2 * leaves);
    let mut csv_leaves = 0;
    for k in 1..=3 {
        let csv = read(dir.path(), &format!("leaves_F{k}.csv"));
        assert!(csv.starts_with("foliation,level,arc,x,y,image\n"));
        assert!(csv_rows(&csv) > 0);
        csv_leaves += leaves_in(&csv);
    }
    assert_eq!(csv_leaves, polylines);

    let dir = tempfile::tempdir().unwrap();
    let run = threeweb(dir.path(), &["trace", "--builtin", "paper", "--foliation", "2", "--seeds", "4"]);
    assert_eq!(run.code, 0);
    // The seed at 5/8 of the diagonal is (0.5, 0.5), inside the band, and is skipped.
    let traced = run.stdout.lines().filter(|l| l.starts_with("F2 seed")).count();
    assert_eq!(traced, 3);
    assert_eq!(leaves_in(&read(dir.path(), "leaves_F2.csv")), traced);
    let svg = read(dir.path(), "web.svg");
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), traced);
    assert!(!dir.path().join("leaves_F1.csv").exists());
}

#[test]
fn analyze_reports_curvature() {
    let dir = tempfile::tempdir().unwrap();
    let run = threeweb(dir.path(), &["analyze", "--builtin", "paper"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("not parallelizable"));
    let csv = read(dir.path(), "curvature.csv");
    assert!(csv.starts_with("x,y,K\n"));
    let k00 = csv
        .lines()
        .find(|l| l.starts_with("0.0000000000000000e0,0.0000000000000000e0,"))
        .expect("origin on the grid");
    let k: f64 = k00.rsplit(',').next().unwrap().parse().unwrap();
    assert!((k + 1.0).abs() < 1e-14);
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    assert_eq!(report["verdict"], "not parallelizable");

    let dir = tempfile::tempdir().unwrap();
    let run = threeweb(dir.path(), &["analyze", "--web", "x", "y", "x*y", "--box", "1", "2", "1", "2"]);
    assert!(run.stdout.contains("verdict: parallelizable"), "{}", run.stdout);
}

#[test]
fn hexagon_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let run = threeweb(dir.path(), &["hexagon", "--builtin", "paper", "--center", "0", "0", "--radii", "0.2", "0.1", "0.05"]);
    assert_eq!(run.code, 0);
    let table = read(dir.path(), "hexagon.csv");
    assert!(table.starts_with("r,defect\n"));
    let defects: Vec<f64> = table.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(defects.len(), 3);
    assert!(defects.windows(2).all(|d| d[1] < d[0] && d[1] > 0.0), "{defects:?}");
    let fig = read(dir.path(), "hexagon_1.csv");
    let lines: Vec<&str> = fig.lines().collect();
    assert_eq!(lines[0], "leg,x,y");
    assert_eq!(lines.len(), 1 + 7 + 1);
    assert!(lines[8].starts_with("defect="));

    let dir = tempfile::tempdir().unwrap();
    let run = threeweb(dir.path(), &["hexagon", "--web", "x", "y", "x+y", "--center", "0", "0", "--radii", "0.5"]);
    assert_eq!(run.code, 0);
    let table = read(dir.path(), "hexagon.csv");
    let d: f64 = table.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(d <= 1e-9);

    // Failed runs write nothing.
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fresh");
    let run = threeweb(&out, &["hexagon", "--builtin", "paper", "--center", "0", "1.05", "--radii", "0.5"]);
    assert_eq!(run.code, 3);
    assert!(!out.exists());
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"web": {"family": {"a": "1", "b": "x"}}, "domain": {"box": [0.5, 2, -1, 1]}, "seeds": 3, "grid": [11, 11]}"#,
    )
    .unwrap();
    let out = dir.path().join("a");
    let run = threeweb(&out, &["family", "--config", cfg.to_str().unwrap()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let report: serde_json::Value = serde_json::from_str(&read(&out, "report.json")).unwrap();
    assert_eq!(report["seeds"].as_array().unwrap().len(), 3);
    assert_eq!(report["diffeo"]["grid"]["nx"], 11);

    let out = dir.path().join("b");
    let run = threeweb(&out, &["family", "--config", cfg.to_str().unwrap(), "--seeds", "5"]);
    assert_eq!(run.code, 0);
    let report: serde_json::Value = serde_json::from_str(&read(&out, "report.json")).unwrap();
    assert_eq!(report["seeds"].as_array().unwrap().len(), 5);

    std::fs::write(&cfg, r#"{"seeds": 3, "colour": "red"}"#).unwrap();
    assert_eq!(threeweb(&out, &["analyze", "--config", cfg.to_str().unwrap()]).code, 2);
    std::fs::write(&cfg, "{not json").unwrap();
    assert_eq!(threeweb(&out, &["analyze", "--config", cfg.to_str().unwrap()]).code, 2);
}

#[test]
fn family_report_matches_theorem_schema() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(threeweb(a.path(), &["verify-theorem", "--builtin", "paper"]).code, 0);
    assert_eq!(threeweb(b.path(), &["family", "--a", "exp(-x)", "--b", "exp(-x)"]).code, 0);
    fn shape(v: &serde_json::Value) -> serde_json::Value {
        use serde_json::Value;
        match v {
            Value::Object(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), shape(v))).collect()),
            Value::Array(items) => Value::Array(items.first().map(shape).into_iter().collect()),
            Value::Number(_) => Value::from("number"),
            Value::String(_) => Value::from("string"),
            Value::Bool(_) => Value::from("bool"),
            Value::Null => Value::Null,
        }
    }
    let ra: serde_json::Value = serde_json::from_str(&read(a.path(), "report.json")).unwrap();
    let rb: serde_json::Value = serde_json::from_str(&read(b.path(), "report.json")).unwrap();
    assert_eq!(shape(&ra), shape(&rb));
    assert_eq!(ra["pass"], rb["pass"]);
}
