use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gha-coherent"))
        .args(args)
        .env_remove("GHA_COHERENT_QUAD_MAX_NODES")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn header_value(text: &str, key: &str) -> f64 {
    let prefix = format!("# {key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
        .parse()
        .unwrap()
}

fn rows(text: &str) -> Vec<(usize, f64, f64)> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("n,"))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

#[test]
fn list_shows_catalog() {
    let o = run(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    let sw = t.lines().find(|l| l.starts_with("square-well")).unwrap();
    assert!(sw.contains("f(x)=x+2√x+1") && sw.contains("α₀=1"));
}

#[test]
fn state_examples() {
    let o = run(&["state", "--spectrum", "harmonic", "--z", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&stdout(&o)), vec![(0, 1.0, 1.0)]);

    let o = run(&["state", "--spectrum", "type1", "--z", "0.5"]);
    let t = stdout(&o);
    assert!((header_value(&t, "N2_closed") - 0.5625).abs() < 1e-15);
    assert!((header_value(&t, "N2_series") - 0.5625).abs() <= 0.5625 * header_value(&t, "tail_bound"));

    let o = run(&["state", "--spectrum", "square-well", "--z", "1@0.3"]);
    let t = stdout(&o);
    // I₂(2) = 0.688948447698738204...
    let expect = 1.0 / (2.0 * 0.688_948_447_698_738_2);
    assert!((header_value(&t, "N2_closed") - expect).abs() < 1e-15);
}

#[test]
fn state_round_trip_normalization() {
    for (spec, z) in [("harmonic", "1.5-0.5i"), ("power-class:3", "0.6+0.3i"), ("q-deformed:0.7", "-1+1i")] {
        let o = run(&["state", "--spectrum", spec, "--z", z]);
        assert_eq!(o.status.code(), Some(0), "{spec}");
        let r = rows(&stdout(&o));
        let total: f64 = r.iter().map(|x| x.1).sum();
        assert!((total - 1.0).abs() <= 1e-10, "{spec}: {total}");
        assert!((r.last().unwrap().2 - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn state_dim_errors_are_actionable() {
    let o = run(&["state", "--spectrum", "harmonic", "--z", "3", "--dim", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("--dim"), "{err}");
    let o = run(&["state", "--spectrum", "harmonic", "--z", "3", "--dim", "80"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&stdout(&o)).len(), 80);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["state", "--spectrum", "nope", "--z", "1"]).status.code(), Some(2));
    assert_eq!(run(&["state", "--spectrum", "harmonic", "--z", "1+"]).status.code(), Some(2));
    assert_eq!(run(&["state", "--spectrum", "type2", "--z", "1.2"]).status.code(), Some(2));
    assert_eq!(run(&["figure", "--which", "4", "--out", "/dev/null"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--spectrum", "harmonic", "--nmax", "2"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

fn verify(spec: &str) -> (i32, String) {
    let o = run(&["verify", "--spectrum", spec]);
    (o.status.code().unwrap(), stdout(&o))
}

fn report_value(report: &str, section: &str, key: &str) -> String {
    let start = report.find(&format!("[{section}]")).unwrap();
    report[start..]
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap()
        .trim_matches('"')
        .to_string()
}

#[test]
fn verify_examples() {
    let (code, r) = verify("harmonic");
    assert_eq!(code, 0, "{r}");

    let (code, r) = verify("power-class:3");
    assert_eq!(code, 0, "{r}");
    let cal: f64 = report_value(&r, "completeness", "calibration").parse().unwrap();
    assert!((cal - 1.0).abs() < 1e-12);

    let (code, r) = verify("square-well");
    assert_eq!(code, 0, "{r}");
    let cal: f64 = report_value(&r, "completeness", "calibration").parse().unwrap();
    assert!((cal - 0.5).abs() < 1e-10);
    assert_eq!(report_value(&r, "mellin", "status"), "pass");

    let (code, r) = verify("q-deformed:0.7");
    assert_eq!(code, 0, "{r}");
    assert_eq!(report_value(&r, "completeness", "status"), "skipped");
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn verify_config_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "osc.toml",
        "family = \"custom\"\nname = \"osc\"\nalpha0 = 0\nf_expr = \"x + 1\"\n\
         [weight]\nexpr = \"0.31830988618379067\"\nsupport_upper = inf\n",
    );
    let (code, r) = verify(&good);
    assert_eq!(code, 0, "{r}");

    // a weight of the wrong shape fails the moment check, which is named
    let bad = write(
        dir.path(),
        "bad.toml",
        "family = \"custom\"\nname = \"osc\"\nalpha0 = 0\nf_expr = \"x + 1\"\n\
         [weight]\nexpr = \"1 / (1 + x)\"\nsupport_upper = inf\n",
    );
    let (code, r) = verify(&bad);
    assert_eq!(code, 1, "{r}");
    assert_eq!(report_value(&r, "completeness", "status"), "fail");
    assert!(report_value(&r, "summary", "failing").contains("completeness"));

    let broken = write(dir.path(), "broken.toml", "family = \"square-well\"\nalpha0 = 0\n");
    assert_eq!(verify(&broken).0, 2);
}

#[test]
fn quadrature_cap_reports_accuracy_failure() {
    let o = Command::new(env!("CARGO_BIN_EXE_gha-coherent"))
        .args(["verify", "--spectrum", "square-well"])
        .env("GHA_COHERENT_QUAD_MAX_NODES", "16")
        .output()
        .unwrap();
    let r = stdout(&o);
    assert_eq!(o.status.code(), Some(3), "{r}");
    assert_eq!(report_value(&r, "completeness", "status"), "accuracy-error");
}

#[test]
fn figures_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for which in ["1", "2", "3"] {
        let a = dir.path().join(format!("a{which}.csv"));
        let b = dir.path().join(format!("b{which}.csv"));
        for p in [&a, &b] {
            let o = run(&["figure", "--which", which, "--out", p.to_str().unwrap(), "--points", "50"]);
            assert_eq!(o.status.code(), Some(0));
        }
        let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        assert_eq!(ta, tb);
        let text = String::from_utf8(ta).unwrap();
        assert!(text.starts_with("# x,value,family,params\n"));
        assert_eq!(text.lines().count(), 51);
    }
}
