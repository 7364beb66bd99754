use std::path::PathBuf;
use std::process::{Command, Output};

use websym_cli::report::CorpusReport;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_websym"));
    c.env_remove("WEBSYM_MAX_UNKNOWNS");
    c
}

fn crate_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn corpus_path(name: &str) -> String {
    crate_file(&format!("corpus/{name}.web")).display().to_string()
}

#[test]
fn discriminant_examples() {
    let o = run(&["discriminant", &corpus_path("zariski_1_1")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("discriminant: -27*x^2*y^2\n"), "{out}");
    assert!(out.contains("resultant identity: PASS"));

    let out = stdout(&run(&["discriminant", &corpus_path("parallel")]));
    assert!(out.contains("discriminant: 4\n"), "{out}");

    let out = stdout(&run(&["discriminant", &corpus_path("clairaut")]));
    // 4 (x^2 - y^2)^2 / x^4, expanded
    assert!(out.contains("reduced discriminant: (4*y^4 - 8*x^2*y^2 + 4*x^4)/x^4"), "{out}");
    assert!(out.contains("product formula: PASS"));
}

#[test]
fn normalize_examples() {
    let o = run(&["normalize", &corpus_path("parallel")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("C_d: empty"));
    assert_eq!(out.matches("g_").count(), 3);
    assert!(out.lines().filter(|l| l.contains("g_")).all(|l| l.ends_with("= 0, h_3 = 0") || l.contains("= 0, h_")));

    let out = stdout(&run(&["normalize", &corpus_path("clairaut")]));
    assert!(out.contains("reconstruction identity: PASS"));
    assert!(out.contains("g_3 = y/(y^2 - x^2)"), "{out}");

    let out = stdout(&run(&["normalize", crate_file("data/four_web.web").to_str().unwrap()]));
    assert!(out.contains("C_4 (1 x 2):"));
    assert!(out.contains("row 1 (leaf 4): [-1, 0]"), "{out}");

    let o = run(&["normalize", &corpus_path("two_web")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("degree at least 3"));
}

#[test]
fn solve_examples() {
    let o = run(&["solve", &corpus_path("parallel")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("dimension: 3\n"));
    assert!(out.contains("closure: closed (exact)"));
    assert!(out.contains("[X1, X3] = X1"));

    let out = stdout(&run(&["solve", &corpus_path("muzsnay_uv"), "--degree", "2"]));
    assert!(out.contains("dimension: 1\n"));
    assert!(out.contains("X1 = d/dv"));

    let out = stdout(&run(&["solve", &corpus_path("clairaut"), "--degree", "1"]));
    assert!(out.contains("dimension: 2\n"));
    assert!(out.contains("excluded loci: x^2 = 0"));
    assert!(out.contains("K = -4*y/x"));

    let o = run(&["solve", &corpus_path("zariski_1_1")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("websym verify"));
}

#[test]
fn resource_limit_exit_code() {
    let o = bin().args(["solve", &corpus_path("parallel")]).env("WEBSYM_MAX_UNKNOWNS", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("20 unknowns"));
    let o = bin().args(["solve", &corpus_path("parallel")]).env("WEBSYM_MAX_UNKNOWNS", "lots").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_examples() {
    let log = "x*ln((x^2 - y^2)^2)/2 + y*ln(((x + y)/(x - y))^2)/2, y*ln((x^2 - y^2)^2)/2 + x*ln(((x + y)/(x - y))^2)/2";
    let o = run(&["verify", &corpus_path("clairaut"), "--field", log]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("certificate: PASS"));

    let o = run(&["verify", &corpus_path("cartan"), "--field", "0,1"]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["verify", &corpus_path("clairaut"), "--field", "1,0", "--tol", "1e-8"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("certificate: FAIL"));

    let o = run(&["verify", &corpus_path("zariski_1_1"), "--field", "x^(-1/3),0", "--points", "16", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("points: 16 used"));

    let o = run(&["verify", &corpus_path("cartan"), "--field", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_falls_back_on_vertical_leaves() {
    let path = crate_file("data/muzsnay_xy.web");
    let o = run(&["verify", path.to_str().unwrap(), "--field", "-1,1"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("vertical leaf"));
    assert!(out.contains("residual: foliation invariance"));

    let o = run(&["verify", path.to_str().unwrap(), "--field", "1,1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn validation_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.web");
    std::fs::write(&bad, "name = bad\n# comment\nslopes = [0, 1, 2*]\n").unwrap();
    let o = run(&["discriminant", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.web:line 3:"), "{}", stderr(&o));

    std::fs::write(&bad, "slopes = [x, 1, x]\n").unwrap();
    let o = run(&["solve", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1: slopes 1 and 3 coincide"), "{}", stderr(&o));

    let o = run(&["discriminant", dir.path().join("missing.web").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_list_and_run() {
    let o = run(&["corpus", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for name in ["one_web", "two_web", "parallel", "cartan", "muzsnay_uv", "clairaut", "zariski_1_1", "zariski_3_3", "hexagonal"]
    {
        assert!(out.contains(name), "{name} missing");
    }
    assert_eq!(out.lines().count(), 9);

    let o = run(&["corpus", "run"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("9 entries, 0 failed\n"));

    let o = run(&["corpus", "run", "nonexistent"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_json_validates_and_round_trips() {
    let first = run(&["corpus", "run", "--json"]);
    assert_eq!(first.status.code(), Some(0));
    let second = run(&["corpus", "run", "--json"]);
    assert_eq!(first.stdout, second.stdout, "output must be byte-identical");

    let text = stdout(&first);
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(crate_file("schema/corpus-report.schema.json")).unwrap()).unwrap();
    let instance: serde_json::Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");

    let report = CorpusReport::from_json(&text).unwrap();
    assert_eq!(format!("{}\n", report.to_json()), text);
    assert_eq!(report.entries.len(), 9);
    assert!(report.passed);
}

#[test]
fn text_outputs_are_deterministic() {
    for args in [
        vec!["solve".to_string(), corpus_path("hexagonal")],
        vec!["verify".to_string(), corpus_path("zariski_3_3"), "--field".into(), "x/2, y*ln(y)".into()],
        vec!["corpus".to_string(), "run".into()],
    ] {
        let a = bin().args(&args).output().unwrap();
        let b = bin().args(&args).output().unwrap();
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.status.code(), Some(0), "{:?}", args);
    }
}
