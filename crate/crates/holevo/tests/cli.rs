use std::path::Path;
use std::process::{Command, Output};

use holevo::output::{RunReport, SweepRow, SweepWriter};
use tempfile::TempDir;

fn holevo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holevo")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(out: &Output) -> RunReport {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn solve_depolarizing() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "dep.json", r#"{"kind": "depolarizing", "d": 2, "lambda": 0.3333333333333333}"#);
    let trace = dir.path().join("trace.csv");
    let out = holevo(&["solve", &spec, "--seed", "3", "--trace", trace.to_str().unwrap()]);
    let r = report(&out);
    assert!((r.result.chi_lower_bound - 0.349_977_578).abs() < 1e-8);
    assert_eq!(r.config.seed, 3);
    assert_eq!(r.channel.d_in, 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("chi = 0.34997758"));

    let trace = std::fs::read_to_string(trace).unwrap();
    let rows = csv_rows(&trace);
    assert_eq!(rows[0], ["iteration", "f", "grad_norm", "step"]);
    assert_eq!(rows.len(), r.result.trace.len() + 1);
    let last: f64 = rows.last().unwrap()[1].parse().unwrap();
    assert_eq!(last, -r.result.chi_lower_bound);
}

#[test]
fn solve_qutrit() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "q.json", r#"{"kind": "qutrit_wd", "alpha": 0.5}"#);
    let r = report(&holevo(&["solve", &spec]));
    assert!((r.result.chi_lower_bound - 1.0).abs() < 1e-6);
}

#[test]
fn report_round_trips_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "p.json",
        r#"{"kind": "pauli", "p_x": 0.1, "p_y": 0.05, "p_z": 0.2, "solver": {"restarts": 2}}"#,
    );
    let out_path = dir.path().join("report.json");
    let out = holevo(&["solve", &spec, "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&out_path).unwrap();
    let first: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(first.config.restarts, 2);
    assert_eq!(first.result.restart_results.len(), 2);
    let again: RunReport = serde_json::from_str(&serde_json::to_string(&first).unwrap()).unwrap();
    assert_eq!(again, first);

    let second = report(&holevo(&["solve", &spec]));
    assert_eq!(second.result, first.result);
}

#[test]
fn flags_override_file_settings() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "d.json",
        r#"{"kind": "depolarizing", "d": 2, "lambda": 0.5, "solver": {"restarts": 2, "seed": 9}}"#,
    );
    let r = report(&holevo(&[
        "solve",
        &spec,
        "--restarts",
        "1",
        "--simplex-geometry",
        "euclidean",
        "--ensemble-size",
        "3",
        "--max-iters",
        "50",
        "--tol",
        "1e-4",
        "--delta",
        "1e-10",
    ]));
    assert_eq!(r.config.restarts, 1);
    assert_eq!(r.config.seed, 9);
    assert_eq!(r.config.ensemble_size, Some(3));
    assert_eq!(r.config.max_iters, 50);
    assert_eq!(r.config.grad_tol, 1e-4);
    assert_eq!(r.config.delta, 1e-10);
    assert_eq!(r.result.best_point.len(), 3);
    assert!(r.result.iterations <= 50);
}

#[test]
fn bad_input_exits_with_2() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("garbage.json", "this is not json"),
        ("unknown_kind.json", r#"{"kind": "teleporter", "d": 2}"#),
        ("unknown_field.json", r#"{"kind": "identity", "d": 2, "colour": "red"}"#),
        ("unknown_solver_field.json", r#"{"kind": "identity", "d": 2, "solver": {"speed": 11}}"#),
        ("bad_parameter.json", r#"{"kind": "depolarizing", "d": 2, "lambda": 1.5}"#),
        ("not_tp.json", r#"{"kind": "kraus", "d_in": 1, "d_out": 1, "kraus": [[[2.0, 0.0]]]}"#),
        ("bad_config.json", r#"{"kind": "identity", "d": 2, "solver": {"grad_tol": -1.0}}"#),
        ("too_big.json", r#"{"kind": "identity", "d": 100}"#),
    ];
    for (name, text) in cases {
        let out = holevo(&["solve", &write(&dir, name, text)]);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    let missing = dir.path().join("missing.json");
    assert_eq!(holevo(&["solve", missing.to_str().unwrap()]).status.code(), Some(2));
    let spec = write(&dir, "ok.json", r#"{"kind": "identity", "d": 2}"#);
    assert_eq!(holevo(&["solve", &spec, "--simplex-geometry", "hyperbolic"]).status.code(), Some(2));
}

#[test]
fn generate_is_deterministic_and_solvable() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = holevo(&["generate", "eb", "--dim", "2", "--seed", "7", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r = report(&holevo(&["solve", a.to_str().unwrap()]));
    assert!(r.result.chi_lower_bound >= -1e-9 && r.result.chi_lower_bound <= 1.0 + 1e-9);
    assert_eq!(r.channel.constructor, "entanglement_breaking");

    let eb3 = holevo(&["generate", "eb", "--dim", "3", "--seed", "1"]);
    let spec = write(&dir, "eb3.json", &stdout(&eb3));
    assert!(holevo(&["solve", &spec, "--restarts", "1"]).status.success());
}

#[test]
fn generated_cq_channel_is_in_range() {
    let out = holevo(&["generate", "cq", "--letters", "10", "--dim", "20", "--seed", "2"]);
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "cq.json", &stdout(&out));
    let r = report(&holevo(&["solve", &spec]));
    let chi = r.result.chi_lower_bound;
    assert!(chi >= -1e-9 && chi <= 10f64.log2() + 1e-9, "{chi}");
    assert!(r.result.best_point.is_simplex_only());
}

#[test]
fn sweep_depolarizing_endpoints() {
    let dir = TempDir::new().unwrap();
    let template = write(&dir, "t.json", r#"{"kind": "depolarizing", "d": 3, "lambda": "$x"}"#);
    let out = holevo(&["sweep", &template, "--param", "x", "--grid", "0:0.5:1", "--restarts", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], ["parameter", "chi", "grad_norm", "seconds", "status"]);
    let params: Vec<&str> = rows[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(params, ["0", "0.5", "1"]);
    assert!(rows[1..].iter().all(|r| r[4] == "ok"));
    // The smoothing weight 1e-9 costs about 2e-8 bits at the noiseless end.
    let chi: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    assert!((chi[0] - 3f64.log2()).abs() <= 1e-7, "{}", chi[0]);
    assert_eq!(rows[2][1], "0.33333333");
    assert_eq!(rows[3][1], "0.00000000");
}

#[test]
fn sweep_reports_failing_rows_and_continues() {
    let dir = TempDir::new().unwrap();
    let template = write(&dir, "t.json", r#"{"kind": "depolarizing", "d": 2, "lambda": "$x"}"#);
    let out = holevo(&["sweep", &template, "--param", "x", "--grid", "0.5,2,1", "--restarts", "1"]);
    assert_eq!(out.status.code(), Some(3));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1][4], "ok");
    assert!(rows[2][4].starts_with("error: input error: depolarizing channel"), "{}", rows[2][4]);
    assert_eq!(rows[3][4], "ok");
}

#[test]
fn empty_grid_prints_header_only() {
    let dir = TempDir::new().unwrap();
    let template = write(&dir, "t.json", r#"{"kind": "depolarizing", "d": 2, "lambda": "$x"}"#);
    let out = holevo(&["sweep", &template, "--param", "x", "--grid", ""]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "parameter,chi,grad_norm,seconds,status\n");
}

#[test]
fn sweep_rows_match_golden_file() {
    let rows = [
        SweepRow { parameter: 0.0, outcome: Ok((0.999_999_984, 8.1e-7)), seconds: 0.25 },
        SweepRow { parameter: 0.05, outcome: Ok((0.912_345_678_9, 3.25e-7)), seconds: 1.5 },
        SweepRow { parameter: 0.1, outcome: Err("all 5 restarts failed".into()), seconds: 0.0 },
        SweepRow { parameter: 1.0, outcome: Ok((-1e-17, 0.0)), seconds: 0.0125 },
    ];
    let mut buf = Vec::new();
    let mut writer = SweepWriter::new(&mut buf).unwrap();
    for row in &rows {
        writer.write(row).unwrap();
    }
    drop(writer);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/sweep.csv");
    assert_eq!(String::from_utf8(buf).unwrap(), std::fs::read_to_string(golden).unwrap());
}

#[test]
fn gradcheck_passes_on_depolarizing() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "d.json", r#"{"kind": "depolarizing", "d": 3, "lambda": 0.4}"#);
    let out = holevo(&["gradcheck", &spec, "--simplex-geometry", "euclidean,fisher,paper_q"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0], ["geometry", "trial", "max_rel_error", "status"]);
    assert_eq!(rows.len(), 1 + 3 * 20);
    for row in &rows[1..] {
        let expected = if row[0] == "paper_q" { "info" } else { "pass" };
        assert_eq!(row[3], expected, "{row:?}");
    }
}

#[test]
fn gradcheck_on_identity_is_tight() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "i.json", r#"{"kind": "identity", "d": 2}"#);
    let out = holevo(&["gradcheck", &spec, "--trials", "5"]);
    assert!(out.status.success());
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 1 + 2 * 5);
    for row in &rows[1..] {
        let err: f64 = row[2].parse().unwrap();
        assert!(err <= 1e-7, "{row:?}");
    }
}
