use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fractalqm::io::{read_continuity, read_curve, read_field, read_snapshot, read_staircase};
use fractalqm::special::gamma;
use serde_json::Value;
use sha2::{Digest, Sha256};
use tempfile::TempDir;

const KOCH_DIM: f64 = 1.2618595071429148;

struct Run {
    root: TempDir,
    output: Output,
}

impl Run {
    fn code(&self) -> i32 {
        self.output.status.code().unwrap()
    }

    fn file(&self, rel: &str) -> PathBuf {
        self.root.path().join("out").join(rel)
    }

    fn json(&self, rel: &str) -> Value {
        serde_json::from_slice(&fs::read(self.file(rel)).unwrap()).unwrap()
    }
}

fn run(cmd: &str, config: &str) -> Run {
    let root = tempfile::tempdir().unwrap();
    let cfg = root.path().join("config.json");
    fs::write(&cfg, config).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_fractalqm"))
        .arg(cmd)
        .arg(&cfg)
        .env("FRACTALQM_OUTPUT_ROOT", root.path())
        .output()
        .unwrap();
    Run { root, output }
}

fn open(p: &Path) -> fs::File {
    fs::File::open(p).unwrap()
}

#[test]
fn malformed_configs_exit_with_two() {
    assert_eq!(run("evolve", "{ not json").code(), 2);
    assert_eq!(run("evolve", r#"{"curve":{"kind":"koch"},"output":"out"}"#).code(), 2);
    assert_eq!(run("staircase", r#"{"curve":{"kind":"koch","level":2},"colour":1,"output":"out"}"#).code(), 2);
    assert_eq!(run("derive", r#"{"curve":{"kind":"koch","level":2},"alpha_space":1.2,"output":"out"}"#).code(), 2);
    assert_eq!(run("evolve", r#"{"curve":{"kind":"koch","level":2},"alpha_space":1.2,"output":"out"}"#).code(), 2);
}

#[test]
fn too_few_levels_is_a_usage_error() {
    let r = run("dimension", r#"{"curve":{"kind":"koch","level":0},"output":"out"}"#);
    assert_eq!(r.code(), 2);
    assert!(String::from_utf8_lossy(&r.output.stderr).contains("three levels"));
}

#[test]
fn solver_failure_exits_with_one() {
    let r = run(
        "evolve",
        r#"{"curve":{"kind":"koch","level":3},"alpha_space":1.26,
            "run":{"d_tau":1e-3,"steps":2,"xi_points":3,"initial":{"kind":"gaussian","sigma":0.1}},"output":"out"}"#,
    );
    assert_eq!(r.code(), 1);
}

#[test]
fn koch_dimension_report() {
    let r = run(
        "dimension",
        r#"{"curve":{"kind":"koch","level":7},"dimension":{"levels":[2,3,4,5,6,7],"tol":1e-4},"output":"out"}"#,
    );
    assert_eq!(r.code(), 0);
    let v = r.json("dimension.json");
    assert!((v["alpha_star"].as_f64().unwrap() - KOCH_DIM).abs() < 1e-3);
    assert_eq!(v["slopes_per_level"].as_array().unwrap().len(), 5);
    assert_eq!(v["bracket"].as_array().unwrap().len(), 2);
}

#[test]
fn line_staircase_is_the_identity() {
    let r = run("staircase", r#"{"curve":{"kind":"line","points":65},"alpha_space":1.0,"output":"out"}"#);
    assert_eq!(r.code(), 0);
    let s = read_staircase(open(&r.file("staircase.csv")), 1.0, 0.0).unwrap();
    for (v, x) in s.params().iter().zip(s.values()) {
        assert!((v - x).abs() < 1e-15);
    }
    let g = read_curve(open(&r.file("curve.csv")), 0).unwrap();
    assert_eq!(g.len(), 65);
}

#[test]
fn auto_alpha_koch_staircase_and_cantor_time() {
    let r = run(
        "staircase",
        r#"{"curve":{"kind":"koch","level":6},"alpha_space":"auto","time_set":{"kind":"cantor","level":6,"T":1.0},"output":"out"}"#,
    );
    assert_eq!(r.code(), 0);
    let alpha = r.json("dimension.json")["alpha_star"].as_f64().unwrap();
    let s = read_staircase(open(&r.file("staircase.csv")), alpha, 0.0).unwrap();
    assert!(s.values().windows(2).all(|w| w[1] >= w[0]));
    assert!((s.span() * gamma(1.0 + alpha) - 1.0).abs() < 1e-3);

    let at = 2f64.ln() / 3f64.ln();
    let t = read_staircase(open(&r.file("time_staircase.csv")), at, 0.0).unwrap();
    assert!(t.first_plateau().is_some());
    let text = fs::read_to_string(r.file("time_set.csv")).unwrap();
    assert_eq!(text.lines().count(), 1 + 64);
}

#[test]
fn derive_and_integrate_outputs() {
    let d = run(
        "derive",
        r#"{"curve":{"kind":"koch","level":5},"alpha_space":1.2618595071429148,"field":{"kind":"power","n":2},"output":"out"}"#,
    );
    assert_eq!(d.code(), 0);
    let f = read_field(open(&d.file("derivative.csv")), KOCH_DIM, 0.0).unwrap();
    for (z, s) in f.values().iter().zip(f.chart().values()) {
        assert!((z.re - 2.0 * s).abs() < 1e-9 && z.im == 0.0);
    }

    let i = run(
        "integrate",
        r#"{"curve":{"kind":"koch","level":5},"alpha_space":1.2618595071429148,"field":{"kind":"power","n":0},"output":"out"}"#,
    );
    assert_eq!(i.code(), 0);
    let v = i.json("integral.json");
    assert_eq!(v["value"].as_f64().unwrap(), v["s_b"].as_f64().unwrap() - v["s_a"].as_f64().unwrap());
}

#[test]
fn plane_wave_run_reports_its_phase_rate() {
    let config = r#"{"curve":{"kind":"koch","level":5},"alpha_space":1.2618595071429148,
        "run":{"d_tau":1e-3,"steps":100,"stride":25,"boundary":"periodic","xi_points":513,
               "initial":{"kind":"plane_wave","cycles":1}},"output":"out"}"#;
    let r = run("evolve", config);
    assert_eq!(r.code(), 0, "{}", String::from_utf8_lossy(&r.output.stderr));
    let pc = r.json("phase_check.json");
    assert!(pc["relative_error"].as_f64().unwrap() < 1e-3);

    let m = r.json("manifest.json");
    assert_eq!(m["config_sha256"].as_str().unwrap(), hex::encode(Sha256::digest(config.as_bytes())));
    assert_eq!(m["xi_points"].as_u64(), Some(513));
    let snaps = m["snapshots"].as_array().unwrap();
    assert_eq!(snaps.len(), 5);
    let last = read_snapshot(open(&r.file(snaps[4]["file"].as_str().unwrap())), KOCH_DIM, 0.0).unwrap();
    assert!(last.values().iter().all(|z| (z.norm() - 1.0).abs() < 1e-3));

    let rows = read_continuity(open(&r.file("continuity.csv"))).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| (r.total_probability - rows[0].total_probability).abs() < 1e-10));
}

#[test]
fn harmonic_run_reports_stationarity() {
    let r = run(
        "evolve",
        r#"{"curve":{"kind":"line","end":[8.0,0.0,0.0],"points":2049},"alpha_space":1.0,
            "run":{"d_tau":1e-2,"steps":100,"potential":{"kind":"harmonic","omega":2.0},
                   "initial":{"kind":"harmonic_ground","omega":2.0}},"output":"out"}"#,
    );
    assert_eq!(r.code(), 0);
    let s = r.json("stationary.json");
    assert!(s["max_modulus_deviation"].as_f64().unwrap() < 1e-4);
    assert_eq!(s["energy"].as_f64(), Some(1.0));
}

#[test]
fn continuity_command_skips_snapshots() {
    let r = run(
        "continuity",
        r#"{"curve":{"kind":"line","points":257},"alpha_space":1.0,
            "run":{"d_tau":1e-4,"steps":20,"stride":5,"initial":{"kind":"gaussian","sigma":0.05,"k0":10.0}},"output":"out"}"#,
    );
    assert_eq!(r.code(), 0);
    assert!(!r.file("snapshots").exists());
    assert_eq!(read_continuity(open(&r.file("continuity.csv"))).unwrap().len(), 3);
}

#[test]
fn cantor_time_run_records_physical_time() {
    let r = run(
        "evolve",
        r#"{"curve":{"kind":"koch","level":4},"alpha_space":1.2618595071429148,"time_set":{"kind":"cantor","level":6,"T":1.0},
            "run":{"d_tau":1e-2,"steps":10,"stride":5,"initial":{"kind":"gaussian","sigma":0.1}},"output":"out"}"#,
    );
    assert_eq!(r.code(), 0);
    let m = r.json("manifest.json");
    let t: Vec<f64> = m["snapshots"].as_array().unwrap().iter().map(|s| s["t"].as_f64().unwrap()).collect();
    assert!(t.windows(2).all(|w| w[1] >= w[0]) && t[0] == 0.0);

    let too_long = run(
        "evolve",
        r#"{"curve":{"kind":"koch","level":4},"alpha_space":1.26,"time_set":{"kind":"cantor","level":6,"T":1.0},
            "run":{"d_tau":1e-1,"steps":100,"initial":{"kind":"gaussian","sigma":0.1}},"output":"out"}"#,
    );
    assert_eq!(too_long.code(), 2);
}
