use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use lna_core::reference::N420_S2P;
use lna_core::{parse_gamma, PolarForm};
use serde_json::Value;
use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        f.write("n420.s2p", N420_S2P);
        f
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn s2p(&self) -> String {
        self.path("n420.s2p").display().to_string()
    }
}

fn lna(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lna"))
        .args(args)
        .output()
        .unwrap()
}

fn lna_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lna"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let o = lna(args);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_valid(&v);
    v
}

fn schema() -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(v: &Value) {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema errors: {errors:?}\n{v:#}");
}

fn polar(v: &Value) -> PolarForm {
    PolarForm::from(parse_gamma(v.as_str().unwrap()).unwrap())
}

fn angle_diff(a: f64, b: f64) -> f64 {
    ((a - b + 540.0).rem_euclid(360.0) - 180.0).abs()
}

fn f64_of(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn analyze_reports_reference_delta_and_verdict() {
    let fx = Fixture::new();
    let v = json_ok(&["--json", "analyze", &fx.s2p(), "--freq", "3.0GHz"]);
    let d = polar(&v["delta"]);
    assert!((d.magnitude - 0.336).abs() < 0.002, "{d}");
    assert!(angle_diff(d.angle_deg, -79.6) < 0.3, "{d}");
    assert!((f64_of(&v["k"]) - 1.127).abs() < 0.005);
    assert!(f64_of(&v["mu"]) > 1.0);
    assert_eq!(v["unconditional"], Value::Bool(true));
    assert_eq!(v["circles_clear_of_chart"], Value::Bool(true));
    assert!((f64_of(&v["mag_db"]) - 15.05).abs() < 0.2);
    assert!((f64_of(&v["u"]) - 0.0408).abs() < 0.001);
    assert!((f64_of(&v["bound_low_db"]) + 0.35).abs() < 0.01);
    assert!((f64_of(&v["bound_high_db"]) - 0.36).abs() < 0.01);
    assert!((f64_of(&v["mag"]) - 10f64.powf(f64_of(&v["mag_db"]) / 10.0)).abs() < 1e-9);
}

#[test]
fn analyze_text_uses_four_significant_digits() {
    let fx = Fixture::new();
    let o = lna(&["analyze", &fx.s2p()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1.127\n"), "{text}");
    assert!(text.contains("0.3359<-79.62"), "{text}");
    assert!(text.contains("unconditionally stable"), "{text}");
}

#[test]
fn analyze_reads_standard_input() {
    let o = lna_stdin(&["--json", "analyze", "-"], N420_S2P);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((f64_of(&v["k"]) - 1.127).abs() < 0.005);
}

#[test]
fn missing_file_exits_2_naming_path() {
    let o = lna(&["analyze", "/definitely/not/here.s2p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/definitely/not/here.s2p"));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn malformed_touchstone_exits_2() {
    let fx = Fixture::new();
    let bad = fx.write("bad.s2p", "# GHz S MA R 50\n3.0 0.5 10 oops\n");
    let o = lna(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn frequency_outside_sweep_exits_3_naming_range() {
    let fx = Fixture::new();
    let o = lna(&["analyze", &fx.s2p(), "--freq", "5GHz"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("[3000000000, 3000000000]"), "{err}");
}

#[test]
fn reference_impedance_mismatch_exits_3() {
    let fx = Fixture::new();
    let o = lna(&["--z0", "75", "analyze", &fx.s2p()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_arguments_exit_2() {
    let fx = Fixture::new();
    assert_eq!(
        lna(&["analyze", &fx.s2p(), "--freq", "fast"]).status.code(),
        Some(2)
    );
    assert_eq!(lna(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn design_max_gain_matches_reference_source() {
    let fx = Fixture::new();
    let cfg = fx.write("spec.cfg", "freq = 3.0GHz\nobjective = max_gain\n");
    let nets = fx.path("nets.json");
    let v = json_ok(&[
        "--json",
        "design",
        &fx.s2p(),
        "--config",
        cfg.to_str().unwrap(),
        "--networks",
        nets.to_str().unwrap(),
    ]);
    let gs = polar(&v["gamma_s"]);
    assert!((gs.magnitude - 0.697).abs() < 0.005, "{gs}");
    assert!(angle_diff(gs.angle_deg, -157.0) < 1.0, "{gs}");
    let gl = polar(&v["gamma_l"]);
    assert!((gl.magnitude - 0.516).abs() < 0.005, "{gl}");
    assert!(angle_diff(gl.angle_deg, 85.0) < 1.0, "{gl}");
    assert!((f64_of(&v["gt_db"]) - f64_of(&v["mag_db"])).abs() < 1e-6);
    assert!(f64_of(&v["source_network"]["error"]) < 1e-6);
    assert!(f64_of(&v["load_network"]["error"]) < 1e-6);
    assert!((f64_of(&v["bias_feed"]["length_mm"]) - 24.98).abs() < 0.01);

    let n: Value = serde_json::from_str(&std::fs::read_to_string(nets).unwrap()).unwrap();
    for side in ["source", "load"] {
        let els = n[side].as_array().unwrap();
        assert_eq!(els.len(), 2);
        assert_eq!(els[0]["type"], "series_line");
        assert_eq!(els[1]["type"], "shunt_stub_open");
        assert!(els[0]["mm"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn design_networks_use_substrate_and_short_stubs() {
    let fx = Fixture::new();
    let cfg = fx.write("spec.cfg", "freq=3GHz\n");
    let v = json_ok(&[
        "--json",
        "design",
        &fx.s2p(),
        "--config",
        cfg.to_str().unwrap(),
        "--stub",
        "short",
        "--eps-r",
        "3.38",
        "--h-mm",
        "0.508",
    ]);
    let el = &v["load_network"]["elements"][1];
    assert_eq!(el["type"], "shunt_stub_short");
    assert!(el["width_mm"].as_f64().unwrap() > 0.0);
    assert!(v["bias_feed"]["width_mm"].as_f64().unwrap() > 0.0);
}

#[test]
fn gain_at_nf_cap_without_noise_exits_4() {
    let fx = Fixture::new();
    let cfg = fx.write(
        "cap.cfg",
        "freq=3GHz\nobjective=gain_at_nf_cap\nnf_max_db=1.0\n",
    );
    let o = lna(&["design", &fx.s2p(), "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(
        stderr(&o).contains("noise parameters required"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn gain_at_nf_cap_meets_the_cap() {
    let fx = Fixture::new();
    let cfg = fx.write(
        "cap.cfg",
        "freq=3GHz\nobjective=gain_at_nf_cap\nnf_max_db=1.0\n",
    );
    let v = json_ok(&[
        "--json",
        "design",
        &fx.s2p(),
        "--config",
        cfg.to_str().unwrap(),
        "--noise",
        "fmin_db=0.6, Rn=10ohm, gopt=0.5<150",
    ]);
    assert!(f64_of(&v["nf_db"]) <= 1.0 + 1e-6);
    assert!(f64_of(&v["ga_db"]) < f64_of(&v["mag_db"]));
}

#[test]
fn min_noise_with_zero_rn_reports_fmin() {
    let fx = Fixture::new();
    let cfg = fx.write("mn.cfg", "freq=3GHz\nobjective=min_noise\n");
    let v = json_ok(&[
        "--json",
        "design",
        &fx.s2p(),
        "--config",
        cfg.to_str().unwrap(),
        "--noise",
        "fmin_db=0.8,rn=0,gopt=0.4<140",
    ]);
    assert!((f64_of(&v["nf_db"]) - 0.8).abs() < 1e-12);
    let gs = polar(&v["gamma_s"]);
    assert!((gs.magnitude - 0.4).abs() < 1e-12 && angle_diff(gs.angle_deg, 140.0) < 1e-9);
}

#[test]
fn malformed_config_and_noise_exit_2() {
    let fx = Fixture::new();
    let bad = fx.write("bad.cfg", "freq=3GHz\ncolour=blue\n");
    let o = lna(&["design", &fx.s2p(), "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    let good = fx.write("ok.cfg", "freq=3GHz\n");
    let o = lna(&[
        "design",
        &fx.s2p(),
        "--config",
        good.to_str().unwrap(),
        "--noise",
        "fmin_db=1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cascade_totals() {
    let one = json_ok(&["--json", "cascade", "--stage", "nf_db=3.01,gain_db=10"]);
    assert!((f64_of(&one["total_nf_db"]) - 3.01).abs() < 1e-9);

    let fwd = json_ok(&[
        "--json",
        "cascade",
        "--stage",
        "nf_db=3.01,gain_db=10",
        "--stage",
        "nf_db=4.77,gain_db=10",
    ]);
    assert!((f64_of(&fwd["total_f"]) - 2.2).abs() < 0.01);
    assert!((f64_of(&fwd["total_nf_db"]) - 3.42).abs() < 0.01);
    let rev = json_ok(&[
        "--json",
        "cascade",
        "--stage",
        "nf_db=4.77,gain_db=10",
        "--stage",
        "nf_db=3.01,gain_db=10",
    ]);
    assert!((f64_of(&rev["total_f"]) - 3.1).abs() < 0.01);
    assert!((f64_of(&rev["total_nf_db"]) - 4.91).abs() < 0.01);

    let text = stdout(&lna(&[
        "cascade",
        "--stage",
        "nf_db=3.01,gain_db=10",
        "--stage",
        "nf_db=4.77,gain_db=10",
    ]));
    assert!(text.contains("total NF 3.424 dB (F = 2.200)"), "{text}");
}

#[test]
fn malformed_stage_exits_2() {
    for bad in ["nf_db=3", "nf_db=3;gain_db=1", "gain_db=x,nf_db=1"] {
        let o = lna(&["cascade", "--stage", bad]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
    }
    assert_eq!(lna(&["cascade"]).status.code(), Some(2));
}

#[test]
fn circles_json_and_csv() {
    let fx = Fixture::new();
    let noise = "fmin_db=0.6,rn=0.2,gopt=0.5<150";
    let v = json_ok(&[
        "--json",
        "circles",
        &fx.s2p(),
        "--noise",
        noise,
        "--nf-db",
        "1",
        "--nf-db",
        "1.5",
        "--ga-db",
        "14",
    ]);
    let kinds: Vec<&str> = v["circles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["kind"].as_str().unwrap())
        .collect();
    assert_eq!(
        kinds,
        [
            "load_stability",
            "source_stability",
            "noise",
            "noise",
            "available_gain"
        ]
    );

    let o = lna(&[
        "circles",
        &fx.s2p(),
        "--noise",
        noise,
        "--nf-db",
        "1",
        "--csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = stdout(&o);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("kind,label,level_db,center_re"));
    assert!(lines[3].starts_with("noise,NF 1 dB,1,"));
}

#[test]
fn circles_errors() {
    let fx = Fixture::new();
    assert_eq!(
        lna(&["circles", &fx.s2p(), "--nf-db", "1"]).status.code(),
        Some(2)
    );
    let o = lna(&[
        "circles",
        &fx.s2p(),
        "--noise",
        "fmin_db=1,rn=0.2,gopt=0.5<150",
        "--nf-db",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        lna(&["circles", &fx.s2p(), "--ga-db", "16"]).status.code(),
        Some(3)
    );
}

#[test]
fn match_stub_and_quarter_wave() {
    let v = json_ok(&["--json", "match", "--gamma", "0.697<-157", "--freq", "3GHz"]);
    assert!(f64_of(&v["error"]) < 1e-6);
    assert_eq!(v["elements"].as_array().unwrap().len(), 2);
    let q = json_ok(&[
        "--json",
        "--z0",
        "50",
        "match",
        "--quarter-wave",
        "50,100",
        "--freq",
        "3GHz",
    ]);
    assert_eq!(q["topology"], "quarter_wave");
    assert!((f64_of(&q["elements"][0]["mm"]) - 24.98).abs() < 0.01);
    assert_eq!(lna(&["match", "--gamma", "1.5<0"]).status.code(), Some(3));
    assert_eq!(lna(&["match", "--gamma", "abc"]).status.code(), Some(2));
    assert_eq!(lna(&["match"]).status.code(), Some(2));
}

#[test]
fn svg_output_from_analyze() {
    let fx = Fixture::new();
    let svg = fx.path("chart.svg");
    let o = lna(&["--svg", svg.to_str().unwrap(), "analyze", &fx.s2p()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(svg).unwrap();
    assert_eq!(text.matches("class=\"unit-circle\"").count(), 1);
    assert_eq!(text.matches("class=\"smith-circle\"").count(), 2);
    assert_eq!(text.matches("class=\"marker\"").count(), 2);
}

#[test]
fn svg_write_failure_is_reported() {
    let fx = Fixture::new();
    let o = lna(&["--svg", "/no/such/dir/x.svg", "analyze", &fx.s2p()]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("/no/such/dir/x.svg"));
}

#[test]
fn commands_are_deterministic() {
    let fx = Fixture::new();
    let cfg = fx.write(
        "spec.cfg",
        "freq=3GHz\nobjective=gain_at_nf_cap\nnf_max_db=1.0\n",
    );
    let runs: Vec<(Vec<u8>, String)> = (0..2)
        .map(|i| {
            let svg = fx.path(&format!("d{i}.svg"));
            let o = lna(&[
                "--json",
                "--svg",
                svg.to_str().unwrap(),
                "design",
                &fx.s2p(),
                "--config",
                cfg.to_str().unwrap(),
                "--noise",
                "fmin_db=0.6,rn=0.2,gopt=0.5<150",
            ]);
            assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
            (o.stdout, std::fs::read_to_string(svg).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(
        stdout(&lna(&["analyze", &fx.s2p()])),
        stdout(&lna(&["analyze", &fx.s2p()]))
    );
}

#[test]
fn schema_rejects_malformed_reports() {
    let fx = Fixture::new();
    let mut v = json_ok(&["--json", "analyze", &fx.s2p()]);
    v["k"] = Value::String("large".into());
    let validator = jsonschema::validator_for(&schema()).unwrap();
    assert!(!validator.is_valid(&v));
    let mut c = json_ok(&["--json", "cascade", "--stage", "nf_db=1,gain_db=10"]);
    c["command"] = Value::String("analyze".into());
    assert!(!validator.is_valid(&c));
}
