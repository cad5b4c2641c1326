use std::path::Path;
use std::process::{Command, Output};

use pa_core::invariants::SurfaceReport;

const FIG1: &str = r#"{"phi":[2,1,3,5,6,4,0]}"#;
const FIBONACCI: &str = r#"{"phi":[1,2,0]}"#;
const THURSTON: &str = r#"{"phi":[0,3,2,5,4,2,2,7],"matrix":[
  [5,6,0,0,0,0,0],[1,2,0,0,0,4,0],[3,5,1,0,1,2,1],[8,4,1,0,7,4,1],
  [2,0,1,3,0,6,1],[0,0,0,0,0,0,1],[0,0,0,0,0,0,1]]}"#;

fn pafold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pafold")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn check(text: &str, eps: &str) -> (i32, Option<SurfaceReport>) {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", text);
    let report = dir.path().join("report.json");
    let out = pafold(&["check", "--input", &input, "--epsilon", eps, "--report", report.to_str().unwrap()]);
    let parsed = std::fs::read_to_string(&report).ok().map(|s| serde_json::from_str(&s).unwrap());
    (out.status.code().unwrap(), parsed)
}

#[test]
fn check_fig1_both() {
    let (code, report) = check(FIG1, "both");
    assert_eq!(code, 0);
    let r = report.unwrap();
    assert!(r.epsilon(1).unwrap().satisfied);
    let minus = r.epsilon(-1).unwrap();
    let g = minus.gates.iter().find(|g| !g.passed).unwrap();
    assert_eq!(g.gate, "alignment");
    assert_eq!(g.witness.as_deref(), Some("geometric_conflict(1)"));
}

#[test]
fn check_fibonacci_plus_conflicts() {
    let (code, report) = check(FIBONACCI, "plus");
    assert_eq!(code, 1);
    let r = report.unwrap();
    let g = r.epsilon(1).unwrap().gates.iter().find(|g| !g.passed).unwrap().clone();
    assert_eq!((g.gate.as_str(), g.witness.as_deref()), ("alignment", Some("geometric_conflict(1)")));
    let (code, _) = check(FIBONACCI, "minus");
    assert_eq!(code, 0);
}

#[test]
fn check_thurston_refused() {
    let (code, report) = check(THURSTON, "both");
    assert_eq!(code, 1);
    let r = report.unwrap();
    let g = r.failed_gate().unwrap();
    assert_eq!(g.gate, "entries");
    assert!(g.witness.as_deref().unwrap().contains("ValueTooLarge"));
}

#[test]
fn malformed_input_exits_2() {
    for text in ["not json", "{}", r#"{"phi":"abc"}"#] {
        let (code, report) = check(text, "both");
        assert_eq!(code, 2, "{text}");
        assert!(report.is_none());
    }
}

fn census(n: &str, jobs: &str, ext: &str) -> (Vec<u8>, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join(format!("census.{ext}"));
    let o = pafold(&["census", "--n", n, "--out", out.to_str().unwrap(), "--jobs", jobs]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (std::fs::read(&out).unwrap(), String::from_utf8(o.stdout).unwrap())
}

fn row<'a>(csv: &'a str, phi: &str) -> Vec<&'a str> {
    csv.lines().map(|l| l.split(',').collect::<Vec<_>>()).find(|f| f[1] == phi).unwrap()
}

#[test]
fn census_n2() {
    let (bytes, summary) = census("2", "2", "csv");
    let text = String::from_utf8(bytes).unwrap();
    assert_eq!(text.lines().count(), 7);
    let s: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(s["examined"], 6);
    let fib = row(&text, "1 2 0");
    // align_plus, align_minus, sphere, minpoly, lambda, genus
    assert_eq!(&fib[6..12], ["0", "1", "1", "x^2 - x - 1", "1.618033988750", "1"]);
}

#[test]
fn census_n3_silver() {
    let (bytes, _) = census("3", "4", "csv");
    let text = String::from_utf8(bytes).unwrap();
    let silver = row(&text, "2 0 3 1");
    assert_eq!(&silver[7..12], ["1", "1", "x^2 - 2x - 1", "2.414213562373", "1"]);
}

#[test]
fn census_jsonl_and_limits() {
    let (bytes, _) = census("1", "1", "jsonl");
    let text = String::from_utf8(bytes).unwrap();
    assert_eq!(text.lines().count(), 2);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = pafold(&["census", "--n", "10", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn census_jobs_do_not_change_bytes() {
    let one = census("4", "1", "csv");
    let eight = census("4", "8", "csv");
    assert_eq!(one, eight);
}

fn render(text: &str, eps: &str, figures: &str) -> (i32, Vec<(String, Vec<u8>)>) {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", text);
    let outdir = dir.path().join("out");
    let o = pafold(&[
        "render", "--input", &input, "--epsilon", eps, "--figures", figures, "--outdir",
        outdir.to_str().unwrap(),
    ]);
    let mut files = Vec::new();
    if let Ok(rd) = std::fs::read_dir(&outdir) {
        for e in rd {
            let e = e.unwrap();
            files.push((e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()));
        }
    }
    files.sort();
    (o.status.code().unwrap(), files)
}

#[test]
fn render_fig1_is_deterministic() {
    let (code, a) = render(FIG1, "plus", "h,p0,rows,f0,gluing");
    assert_eq!(code, 0);
    let names: Vec<&str> = a.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["f0.svg", "geometry.json", "gluing.svg", "h.svg", "p0.svg", "rows.svg"]);
    let (_, b) = render(FIG1, "plus", "h,p0,rows,f0,gluing");
    assert_eq!(a, b);
    let p0 = String::from_utf8(a[4].1.clone()).unwrap();
    assert!(p0.contains(r#"<entry key="shaded_area">"#));
}

#[test]
fn render_h_graph_fibonacci_peak() {
    let (code, files) = render(FIBONACCI, "minus", "h");
    assert_eq!(code, 0);
    let svg = String::from_utf8(files[0].1.clone()).unwrap();
    // Peak at x₁ = 1/λ² ≈ 0.382, drawn at the top (y = 0).
    assert!(svg.contains("0.381966011,0.000000000"), "{svg}");
}

#[test]
fn render_refuses_unreached_gate() {
    let (code, files) = render(FIBONACCI, "plus", "p0");
    assert_eq!(code, 1);
    assert!(files.is_empty());
}
