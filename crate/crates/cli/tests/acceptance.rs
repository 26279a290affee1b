//! Acceptance criteria, one line per criterion. Exits nonzero if any fail.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use fractalqm::calculus::{falpha_derivative, falpha_integral, integral_between, laplacian};
use fractalqm::curve::{build_cantor_dust, build_dyadic_line, build_from_generator, build_koch, build_line, AffineMap};
use fractalqm::flow::{continuity_residual, total_probability};
use fractalqm::measure::{build_staircase, estimate_gamma_dimension};
use fractalqm::quantum::{
    evolve, gaussian_packet, kernel_moments, kernel_step, plane_wave, schrodinger_residual, Boundary, EvolveOptions,
    Evolver, KernelStep, PlaneWaveParams,
};
use fractalqm::{Complex64, CurveGrid, FieldOnCurve, GeneratorSpec, PhysicalConstants, PotentialOnCurve, Staircase};
use fractalqm_cli::report::PhaseTracker;

type Outcome = Result<String, String>;

const KOCH_DIM: f64 = 1.2618595071429148;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn chart(g: &CurveGrid, alpha: f64) -> Arc<Staircase> {
    Arc::new(build_staircase(g, alpha, 0.0).unwrap())
}

fn koch_chart(level: u32) -> Arc<Staircase> {
    chart(&build_koch(level).unwrap(), KOCH_DIM)
}

fn line_chart(a: f64, b: f64, segments: usize) -> Arc<Staircase> {
    chart(&build_line([a, 0.0, 0.0], [b, 0.0, 0.0], segments).unwrap(), 1.0)
}

/// Observed orders between consecutive refinements.
fn orders(errs: &[f64], ratio: f64) -> Vec<f64> {
    errs.windows(2).map(|w| (w[0] / w[1]).ln() / ratio.ln()).collect()
}

fn fmt_errs(errs: &[f64]) -> String {
    errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>().join(", ")
}

fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn gamma_dimension() -> Outcome {
    let cases: [(&str, Vec<CurveGrid>, f64, f64); 3] = [
        ("koch", (2..=7).map(|l| build_koch(l).unwrap()).collect(), KOCH_DIM, 5e-3),
        ("cantor dust", (2..=7).map(|l| build_cantor_dust(l, 1.0).unwrap()).collect(), 2f64.ln() / 3f64.ln(), 5e-3),
        ("line", (2..=8).map(|l| build_dyadic_line([0.0; 3], [1.0, 0.0, 0.0], l).unwrap()).collect(), 1.0, 1e-3),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, grids, want, tol) in cases {
        let t = Instant::now();
        let got = estimate_gamma_dimension(&grids, 1e-4).map(|e| e.alpha_star);
        let elapsed = t.elapsed();
        match got {
            Ok(a) => {
                ok &= (a - want).abs() <= tol && elapsed < Duration::from_secs(10);
                parts.push(format!("{name} {a:.5} (want {want:.5}, {:.2}s)", elapsed.as_secs_f64()));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    check(ok, parts.join("; "))
}

fn constant_integral() -> Outcome {
    let koch_like = GeneratorSpec::new(vec![
        AffineMap::planar(0.5, PI / 6.0, [0.0; 3]),
        AffineMap::planar(0.5, -PI / 6.0, [0.5 * (PI / 6.0).cos(), 0.5 * (PI / 6.0).sin(), 0.0]),
    ])
    .unwrap();
    let mut grids: Vec<(String, CurveGrid, f64)> =
        (1..=7).map(|l| (format!("koch{l}"), build_koch(l).unwrap(), KOCH_DIM)).collect();
    grids.push(("dust6".into(), build_cantor_dust(6, 1.0).unwrap(), 2f64.ln() / 3f64.ln()));
    grids.push(("line".into(), build_line([0.0; 3], [3.0, 4.0, 0.0], 500).unwrap(), 1.0));
    grids.push(("generator8".into(), build_from_generator(&koch_like, 8).unwrap(), koch_like.similarity_dimension()));
    let mut worst: f64 = 0.0;
    for (_, g, alpha) in &grids {
        let s = chart(g, *alpha);
        let one = FieldOnCurve::from_fn(s.clone(), |_, _| 1.0);
        let n = g.len();
        let step = (n / 37).max(1);
        for i in (0..n).step_by(step) {
            for j in (i..n).step_by(step).chain([n - 1]) {
                let got = falpha_integral(&one, g.params()[i], g.params()[j]).unwrap();
                let want = s.values()[j] - s.values()[i];
                let scale = want.abs().max(f64::MIN_POSITIVE);
                if got != want {
                    worst = worst.max((got - want).abs() / scale);
                }
            }
        }
    }
    check(worst <= 1e-12, format!("max relative error {worst:.3e} over {} grids", grids.len()))
}

fn fundamental_theorem() -> Outcome {
    let funcs: [(&str, fn(f64) -> f64); 3] = [("S", |s| s), ("S²", |s| s * s), ("sin S", f64::sin)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, f) in funcs {
        let errs: Vec<f64> = (5..=7)
            .map(|l| {
                let c = koch_chart(l);
                let field = FieldOnCurve::from_fn(c.clone(), |_, s| f(s));
                let d = falpha_derivative(&field).unwrap();
                let (a, b) = (c.values()[0], *c.values().last().unwrap());
                (integral_between(&d, 0, d.len() - 1) - (f(b) - f(a))).abs()
            })
            .collect();
        let ord = orders(&errs, 4.0);
        // Errors already at roundoff cannot decrease further.
        let converged = errs.iter().all(|&e| e <= 1e-12);
        let good = errs[2] < 1e-3 && (converged || ord.iter().all(|&o| o >= 0.9));
        ok &= good;
        parts.push(format!("{name}: errors [{}] orders {ord:.2?}", fmt_errs(&errs)));
    }
    check(ok, parts.join("; "))
}

fn laplacian_order() -> Outcome {
    let k = 3.0;
    let errs: Vec<f64> = (4..=7)
        .map(|l| {
            let c = koch_chart(l);
            let f = FieldOnCurve::from_fn(c, |_, s| (k * s).sin());
            let lap = laplacian(&f).unwrap();
            max_abs(lap.values().iter().zip(lap.chart().values()).map(|(v, s)| v + k * k * (k * s).sin()))
        })
        .collect();
    let ord = orders(&errs, 4.0);
    check(ord.iter().all(|&o| o >= 1.9), format!("errors [{}] orders {ord:.3?}", fmt_errs(&errs)))
}

fn kernel_identities() -> Outcome {
    let c = PhysicalConstants::default();
    let eps = 1e-3;
    let t = Instant::now();
    let step = KernelStep::new(eps, 1e-4, c).unwrap();
    let m = kernel_moments(&step).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let m2_want = Complex64::new(0.0, eps * c.hbar / (2.0 * c.mass));
    let e0 = (m.m0 - 1.0).norm();
    let e1 = m.m1.norm();
    let e2 = (m.m2 - m2_want).norm() / m2_want.norm();
    let raw0: Vec<f64> = m.raw.iter().map(|r| (r.m0 - 1.0).norm()).collect();
    let raw2: Vec<f64> = m.raw.iter().map(|r| (r.m2 - m2_want).norm() / m2_want.norm()).collect();
    let shrinking = raw0.windows(2).all(|w| w[1] < w[0]) && raw2.windows(2).all(|w| w[1] < w[0]);
    check(
        e0 <= 1e-6 && e1 <= 1e-8 && e2 <= 1e-6 && shrinking && elapsed < Duration::from_secs(1),
        format!(
            "|m0-1| {e0:.2e}, |m1| {e1:.2e}, m2 rel {e2:.2e}; raw m0 errors over η,η/2,η/4 [{}]; {:.3}s",
            fmt_errs(&raw0),
            elapsed.as_secs_f64()
        ),
    )
}

fn plane_wave_solution() -> Outcome {
    let c = PhysicalConstants::default();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let p = PlaneWaveParams::from_wavenumber(one, zero, 2.0 * PI, c);
    let errs: Vec<f64> = (4..=7)
        .map(|l| {
            let ch = koch_chart(l);
            let ds = ch.values()[1] - ch.values()[0];
            let snap = |tau| plane_wave(&p, ch.clone(), None, tau, c);
            let r = schrodinger_residual(&snap(0.0), &snap(ds), &snap(2.0 * ds), None).unwrap();
            r.max_modulus()
        })
        .collect();
    let ord = orders(&errs, 4.0);

    let ch = koch_chart(5);
    let k = 2.0 * PI / ch.span();
    let p = PlaneWaveParams::from_wavenumber(one, zero, k, c);
    let psi = plane_wave(&p, ch, None, 0.0, c);
    let mut ev = Evolver::new(&psi, None, 1e-3, Boundary::Periodic, Some(513)).unwrap();
    let mut tracker = PhaseTracker::new(ev.state().unwrap());
    for _ in 0..200 {
        ev.step().unwrap();
        tracker.record(&ev.state().unwrap());
    }
    let beta = tracker.fitted_rate().unwrap();
    let rel = (beta - p.beta).abs() / p.beta;
    check(
        ord.iter().all(|&o| o >= 1.9) && rel <= 1e-3,
        format!("residual [{}] orders {ord:.3?}; fitted β {beta:.6} vs {:.6} (rel {rel:.2e})", fmt_errs(&errs), p.beta),
    )
}

fn unitarity() -> Outcome {
    let c = PhysicalConstants::default();
    let ch = koch_chart(5);
    let span = ch.span();
    let psi = gaussian_packet(ch.clone(), 0.5 * span, 0.08 * span, 15.0, c);
    let v = PotentialOnCurve::harmonic(ch, c, 10.0, 0.5 * span);
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (label, pot) in [("free", None), ("harmonic", Some(&v))] {
        for b in [Boundary::Dirichlet, Boundary::Periodic] {
            let mut ev = Evolver::new(&psi, pot, 1e-4, b, None).unwrap();
            let start = total_probability(&ev.state().unwrap());
            ev.advance(1000).unwrap();
            let drift = (total_probability(&ev.state().unwrap()) - start).abs();
            worst = worst.max(drift);
            parts.push(format!("{label}/{b:?} {drift:.1e}"));
        }
    }
    check(worst <= 1e-10, parts.join(", "))
}

fn continuity() -> Outcome {
    let c = PhysicalConstants::default();
    let tau_end = 0.02;
    let errs: Vec<f64> = [128usize, 256, 512, 1024]
        .iter()
        .map(|&n| {
            let ch = line_chart(0.0, 1.0, n);
            let psi = gaussian_packet(ch, 0.4, 0.05, 10.0, c);
            let dt = 0.05 / n as f64;
            let steps = (tau_end / dt).round() as usize;
            let mut ev = Evolver::new(&psi, None, dt, Boundary::Dirichlet, None).unwrap();
            ev.advance(steps - 1).unwrap();
            let a = ev.state().unwrap();
            ev.step().unwrap();
            let b = ev.state().unwrap();
            ev.step().unwrap();
            let d = ev.state().unwrap();
            continuity_residual(&a, &b, &d).unwrap().max_modulus()
        })
        .collect();
    let ord = orders(&errs, 2.0);
    check(ord.iter().all(|&o| o >= 1.9), format!("max residual [{}] orders {ord:.3?}", fmt_errs(&errs)))
}

fn kernel_cross_check() -> Outcome {
    let c = PhysicalConstants::default();
    let ch = line_chart(0.0, 1.0, 8192);
    let field = FieldOnCurve::from_fn(ch, |_, s| {
        Complex64::from_polar(1.0, 2.0 * PI * s) + Complex64::from_polar(0.5, -4.0 * PI * s)
    });
    let psi = fractalqm::WaveFunction::new(field, c);
    let eps = [1e-2, 3e-3, 1e-3, 3e-4];
    let mut errs = Vec::new();
    for &e in &eps {
        let k = kernel_step(&psi, &KernelStep::new(e, 1e-8, c).unwrap(), Boundary::Periodic, None)
            .map_err(|x| x.to_string())?;
        let cn = evolve(&psi, None, &EvolveOptions::new(e, 1, Boundary::Periodic)).unwrap();
        errs.push(max_abs(k.values().iter().zip(cn.values()).map(|(a, b)| (a - b).norm())));
    }
    let ord: Vec<f64> =
        errs.windows(2).zip(eps.windows(2)).map(|(er, ep)| (er[0] / er[1]).ln() / (ep[0] / ep[1]).ln()).collect();
    check(ord.iter().all(|&o| o >= 1.8), format!("disagreement [{}] orders {ord:.3?}", fmt_errs(&errs)))
}

fn alpha_one_gaussian() -> Outcome {
    let c = PhysicalConstants::default();
    let sigma0 = 0.5;
    let ch = line_chart(-10.0, 10.0, 1023);
    let psi = gaussian_packet(ch, 10.0, sigma0, 0.0, c);
    let mut ev = Evolver::new(&psi, None, 1e-3, Boundary::Dirichlet, None).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        ev.advance(50).unwrap();
        let st = ev.state().unwrap();
        let s = st.space_chart();
        let rho = st.field().map(|z| z.norm_sqr());
        let last = rho.len() - 1;
        let moment = |g: &dyn Fn(f64) -> f64| {
            integral_between(
                &FieldOnCurve::from_fn(s.clone(), |_, x| g(x)).zip_with(&rho, |x, r| x * r).unwrap(),
                0,
                last,
            )
        };
        let norm = moment(&|_| 1.0);
        let mean = moment(&|x| x) / norm;
        let var = moment(&|x| (x - mean) * (x - mean)) / norm;
        let tau = st.tau();
        let want = sigma0 * sigma0 + (c.hbar * tau / (2.0 * c.mass * sigma0)).powi(2);
        worst = worst.max((var / want - 1.0).abs());
    }
    check(worst <= 0.01, format!("max relative variance error {worst:.3e} over τ ∈ [0, 1]"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn tree(root: &Path) -> Vec<(String, Vec<u8>)> {
    fn walk(base: &Path, dir: &Path, out: &mut Vec<(String, Vec<u8>)>) {
        let mut entries: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        entries.sort();
        for p in entries {
            if p.is_dir() {
                walk(base, &p, out);
            } else {
                out.push((p.strip_prefix(base).unwrap().display().to_string(), std::fs::read(&p).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(root, root, &mut out);
    out
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_fractalqm");
    let cfg_dir = tempfile::tempdir().unwrap();
    let d = cfg_dir.path();
    let configs = [
        (
            "dimension",
            write_config(
                d,
                "dim.json",
                r#"{"curve":{"kind":"koch","level":6},"dimension":{"levels":[2,3,4,5,6]},"output":"dim"}"#,
            ),
        ),
        (
            "staircase",
            write_config(
                d,
                "st.json",
                r#"{"curve":{"kind":"koch","level":5},"alpha_space":"auto","time_set":{"kind":"cantor","level":6,"T":1.0},"output":"st"}"#,
            ),
        ),
        (
            "derive",
            write_config(
                d,
                "de.json",
                r#"{"curve":{"kind":"koch","level":4},"alpha_space":1.2618595071429148,"field":{"kind":"sin","k":2.0},"output":"de"}"#,
            ),
        ),
        (
            "integrate",
            write_config(
                d,
                "in.json",
                r#"{"curve":{"kind":"koch","level":4},"alpha_space":1.2618595071429148,"field":{"kind":"exp","k":1.0},"output":"in"}"#,
            ),
        ),
        (
            "evolve",
            write_config(
                d,
                "ev.json",
                r#"{"curve":{"kind":"koch","level":4},"alpha_space":"auto","time_set":{"kind":"cantor","level":6,"T":1.0},"run":{"d_tau":1e-3,"steps":40,"stride":10,"initial":{"kind":"gaussian","sigma":0.08,"k0":5.0}},"output":"ev"}"#,
            ),
        ),
        (
            "continuity",
            write_config(
                d,
                "co.json",
                r#"{"curve":{"kind":"line","points":201},"alpha_space":1.0,"run":{"d_tau":1e-3,"steps":30,"stride":10,"boundary":"periodic","initial":{"kind":"plane_wave","cycles":2}},"output":"co"}"#,
            ),
        ),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (cmd, cfg) in &configs {
        let runs: Vec<_> = (0..2)
            .map(|_| {
                let root = tempfile::tempdir().unwrap();
                let status =
                    Command::new(bin).arg(cmd).arg(cfg).env("FRACTALQM_OUTPUT_ROOT", root.path()).status().unwrap();
                (status.success(), tree(root.path()), root)
            })
            .collect();
        let same = runs[0].0 && runs[1].0 && !runs[0].1.is_empty() && runs[0].1 == runs[1].1;
        ok &= same;
        parts.push(format!("{cmd} {} files {}", runs[0].1.len(), if same { "identical" } else { "DIFFER" }));
    }
    check(ok, parts.join(", "))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("γ-dimension recovery", gamma_dimension),
        ("constant-function integral", constant_integral),
        ("fundamental theorem", fundamental_theorem),
        ("Laplacian order", laplacian_order),
        ("kernel identities", kernel_identities),
        ("plane-wave solution", plane_wave_solution),
        ("unitarity and conservation", unitarity),
        ("continuity", continuity),
        ("kernel/CN cross-check", kernel_cross_check),
        ("α=1 degeneration", alpha_one_gaussian),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
