use hecke::cli::{run, AsymptReport, CertifyReport, CoversReport, DimReport, TableReport, ValidateReport, EXIT_OK, EXIT_USAGE};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hecke").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json<T: DeserializeOwned + Serialize + PartialEq + std::fmt::Debug>(args: &[&str]) -> T {
    let (code, out, err) = call(args);
    assert_eq!(code, EXIT_OK, "{err}");
    let parsed: T = serde_json::from_str(&out).unwrap();
    let again: T = serde_json::from_str(&serde_json::to_string(&parsed).unwrap()).unwrap();
    assert_eq!(parsed, again);
    parsed
}

#[test]
fn dim_text_and_guard() {
    let (code, out, _) = call(&["dim", "--w", "3", "--k", "15"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("s_k = 0.75194"), "{out}");

    let (code, _, err) = call(&["dim", "--w", "1.5"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("w must exceed 2"), "{err}");
}

#[test]
fn dim_csv_rows_decrease() {
    let (code, out, _) = call(&["dim", "--w", "6", "--w", "8", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "w,k,s_k,error_estimate");
    let s: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(s[0] > s[1]);
}

#[test]
fn dim_json() {
    let r: DimReport = json(&["dim", "--w", "10", "--format", "json"]);
    assert!((r.rows[0].s_k - 0.5766067).abs() < 2e-7);
    assert!(r.rows[0].error_estimate < 1e-20);
}

#[test]
fn table_rows() {
    let r: TableReport = json(&["table", "--format", "json"]);
    assert_eq!(r.rows.len(), 9);
    assert!(r.all_pass);
    let get = |w: f64| r.rows.iter().find(|row| row.w == w).unwrap().s_k;
    assert!((get(2.5) - 0.82).abs() < 5e-3);
    assert!((get(16.0) - 0.5501100).abs() < 1e-7);
    assert!((get(40.0) - 0.521821511).abs() < 1e-9);

    let (code, out, _) = call(&["table"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 10);
}

#[test]
fn validate_agreement() {
    let r: ValidateReport = json(&["validate", "--w", "20", "--s", "0.9", "--format", "json"]);
    assert!(
        r.det_vs_log_det <= 1e-4 && r.det_vs_euler <= 1e-4 && r.log_det_vs_euler <= 1e-4,
        "{r:?}"
    );

    let (code, _, err) = call(&["validate", "--w", "20", "--s", "0.4"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
}

#[test]
fn validate_twisted() {
    let r: ValidateReport = json(&["validate", "--w", "20", "--s", "0.9", "--theta", "0.25", "--format", "json"]);
    assert!(r.det_vs_log_det <= 1e-4, "{r:?}");
    assert!(r.determinant.im.abs() <= 1e-10);
}

#[test]
fn asympt_at_100() {
    let r: AsymptReport = json(&["asympt", "--w", "100", "--format", "json"]);
    assert_eq!(r.p_polynomials.len(), 4);
    assert!((r.rows[0].expansion - 0.509279417381).abs() < 1e-4);

    let (code, _, _) = call(&["asympt", "--w", "5"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn certify_three() {
    let r: CertifyReport = json(&["certify", "--w", "3", "--format", "json"]);
    let b = &r.intervals[0];
    assert!(b.lower >= 0.7506 && b.upper <= 0.7533);
    assert!(b.lower > 0.75);

    let (code, out, _) = call(&["certify", "--w", "3", "--prior", "0.7", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().nth(1).unwrap().starts_with("3,0.750656"), "{out}");
}

#[test]
fn covers_scan() {
    let r: CoversReport = json(&["covers", "--w", "5", "--n", "8", "--eps", "0.05", "--format", "json"]);
    let scan = &r.scans[0];
    assert_eq!(scan.factors.len(), 16);
    let in_window = scan
        .factors
        .iter()
        .flat_map(|f| f.zeros.iter())
        .filter(|&&z| z > scan.delta - scan.epsilon && z <= scan.delta)
        .count();
    assert_eq!(in_window, scan.count_in_window);
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
    assert_eq!(call(&["dim"]).0, EXIT_USAGE);
    assert_eq!(call(&["dim", "--w", "3", "--format", "xml"]).0, EXIT_USAGE);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("certify"));
}
