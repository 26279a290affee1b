//! Subcommand implementations. Each writes its artifacts into the
//! configured output directory.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;

use fractalqm::calculus::{cumulative_integral, falpha_derivative, falpha_integral, laplacian};
use fractalqm::flow::{continuity_residual, residual_norms, total_probability};
use fractalqm::io::{
    write_continuity, write_curve, write_field, write_snapshot, write_staircase, write_time_set, ContinuityRow,
};
use fractalqm::quantum::{gaussian_packet, harmonic_ground_state, plane_wave, Evolver, PlaneWaveParams};
use fractalqm::{Complex64, FieldOnCurve, PotentialOnCurve, Staircase, WaveFunction};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, InitialState, PotentialSpec};
use crate::report::{modulus_deviation, PhaseCheck, PhaseTracker, StationaryCheck};
use crate::CliError;

type Res<T> = Result<T, CliError>;

struct Out {
    dir: PathBuf,
}

impl Out {
    fn new(cfg: &ExperimentConfig) -> Res<Self> {
        let dir = cfg.output_dir();
        fs::create_dir_all(&dir).map_err(|e| CliError::Numerical(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self { dir })
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn csv(&self, name: &str, write: impl FnOnce(&mut BufWriter<File>) -> fractalqm::Result<()>) -> Res<()> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut w = BufWriter::new(File::create(&path)?);
        write(&mut w).map_err(|e| CliError::Numerical(format!("{}: {e}", path.display())))?;
        w.flush()?;
        Ok(())
    }

    fn json(&self, name: &str, value: &impl Serialize) -> Res<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(self.path(name), text)?;
        Ok(())
    }
}

fn config_hash(raw: &[u8]) -> String {
    hex::encode(Sha256::digest(raw))
}

#[derive(Serialize)]
struct DimensionFailure<'a> {
    error: &'a str,
    slopes: &'a [f64],
}

pub fn dimension(cfg: &ExperimentConfig) -> Res<()> {
    let out = Out::new(cfg)?;
    let (grids, tol) = cfg.dimension_grids()?;
    match fractalqm::measure::estimate_gamma_dimension(&grids, tol) {
        Ok(est) => out.json("dimension.json", &est),
        Err(fractalqm::Error::Estimation { reason, slopes }) => {
            out.json("dimension_failure.json", &DimensionFailure { error: &reason, slopes: &slopes })?;
            Err(CliError::Numerical(format!("γ-dimension estimation failed: {reason}")))
        }
        Err(e) => Err(e.into()),
    }
}

struct Prepared {
    grid: fractalqm::CurveGrid,
    alpha: f64,
    chart: Arc<Staircase>,
}

fn prepare(cfg: &ExperimentConfig, out: &Out) -> Res<Prepared> {
    let grid = cfg.build_curve()?;
    let (alpha, est) = cfg.resolve_alpha()?;
    if let Some(est) = est {
        out.json("dimension.json", &est)?;
    }
    let chart = cfg.space_chart(&grid, alpha)?;
    Ok(Prepared { grid, alpha, chart })
}

pub fn staircase(cfg: &ExperimentConfig) -> Res<()> {
    let out = Out::new(cfg)?;
    let p = prepare(cfg, &out)?;
    out.csv("curve.csv", |w| write_curve(w, &p.grid))?;
    out.csv("staircase.csv", |w| write_staircase(w, &p.chart))?;
    if let Some(ts) = cfg.build_time_set()? {
        out.csv("time_set.csv", |w| write_time_set(w, &ts))?;
        out.csv("time_staircase.csv", |w| write_staircase(w, ts.time_staircase()))?;
    }
    Ok(())
}

fn test_field(cfg: &ExperimentConfig, chart: Arc<Staircase>) -> Res<FieldOnCurve<f64>> {
    let spec = cfg.field.ok_or_else(|| CliError::usage("missing \"field\" section"))?;
    Ok(FieldOnCurve::from_fn(chart, |_, s| spec.eval(s)))
}

pub fn derive(cfg: &ExperimentConfig) -> Res<()> {
    let out = Out::new(cfg)?;
    let p = prepare(cfg, &out)?;
    let f = test_field(cfg, p.chart.clone())?;
    let d = falpha_derivative(&f)?;
    out.csv("field.csv", |w| write_field(w, &f))?;
    out.csv("derivative.csv", |w| write_field(w, &d))?;
    if f.len() >= 3 {
        out.csv("laplacian.csv", |w| write_field(w, &laplacian(&f)?))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct IntegralReport {
    alpha: f64,
    a: f64,
    b: f64,
    s_a: f64,
    s_b: f64,
    value: f64,
}

pub fn integrate(cfg: &ExperimentConfig) -> Res<()> {
    let out = Out::new(cfg)?;
    let p = prepare(cfg, &out)?;
    let f = test_field(cfg, p.chart.clone())?;
    let (lo, hi) = p.grid.domain();
    let (a, b) = cfg.integrate.map_or((lo, hi), |i| (i.a, i.b));
    let value = falpha_integral(&f, a, b)?;
    out.json(
        "integral.json",
        &IntegralReport { alpha: p.alpha, a, b, s_a: p.chart.value_at(a), s_b: p.chart.value_at(b), value },
    )?;
    out.csv("cumulative.csv", |w| write_field(w, &cumulative_integral(&f)))?;
    Ok(())
}

#[derive(Serialize)]
struct SnapshotEntry {
    file: String,
    step: usize,
    tau: f64,
    t: Option<f64>,
    total_probability: f64,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    config_sha256: String,
    config: &'a ExperimentConfig,
    crate_version: &'a str,
    alpha_space: f64,
    curve_level: u32,
    nodes: usize,
    xi_points: usize,
    d_tau: f64,
    steps: usize,
    stride: usize,
    snapshots: Vec<SnapshotEntry>,
    reports: Vec<String>,
}

enum Check {
    Phase { tracker: PhaseTracker, k: f64, beta: f64 },
    Stationary { initial: WaveFunction, omega: f64, worst: f64 },
    None,
}

fn initial_state(
    init: &InitialState,
    chart: &Arc<Staircase>,
    c: fractalqm::PhysicalConstants,
) -> Res<(WaveFunction, Option<PlaneWaveParams>)> {
    let mid = chart.values()[0] + 0.5 * chart.span();
    Ok(match *init {
        InitialState::PlaneWave { k, cycles, a, b } => {
            let k = match (k, cycles) {
                (Some(k), None) => k,
                (None, Some(n)) => 2.0 * std::f64::consts::PI * n / chart.span(),
                _ => return Err(CliError::usage("plane_wave needs exactly one of \"k\" or \"cycles\"")),
            };
            let p = PlaneWaveParams::from_wavenumber(Complex64::new(a[0], a[1]), Complex64::new(b[0], b[1]), k, c);
            (plane_wave(&p, chart.clone(), None, 0.0, c), Some(p))
        }
        InitialState::Gaussian { center, sigma, k0 } => {
            if !(sigma > 0.0) {
                return Err(CliError::usage(format!("sigma must be positive, got {sigma}")));
            }
            (gaussian_packet(chart.clone(), center.unwrap_or(mid), sigma, k0, c), None)
        }
        InitialState::HarmonicGround { center, omega } => {
            if !(omega > 0.0) {
                return Err(CliError::usage(format!("omega must be positive, got {omega}")));
            }
            (harmonic_ground_state(chart.clone(), center.unwrap_or(mid), omega, c), None)
        }
    })
}

/// Runs the configured evolution. With `snapshots` false only the
/// continuity report and manifest are written.
pub fn evolve(cfg: &ExperimentConfig, raw: &[u8], command: &str, snapshots: bool) -> Res<()> {
    let out = Out::new(cfg)?;
    let p = prepare(cfg, &out)?;
    let run = cfg.run()?;
    let c = cfg.constants()?;
    if run.steps == 0 {
        return Err(CliError::usage("run.steps must be positive"));
    }
    let stride = run.stride.unwrap_or(run.steps);
    if stride == 0 {
        return Err(CliError::usage("run.stride must be positive"));
    }

    let time_set = cfg.build_time_set()?;
    let time_chart = time_set.as_ref().map(|t| Arc::new(t.time_staircase().clone()));
    if let Some(tc) = &time_chart {
        let total = run.d_tau * run.steps as f64;
        if total > tc.span() * (1.0 + 1e-12) {
            return Err(CliError::usage(format!(
                "run covers τ = {total} but the time set only reaches S(T) = {}",
                tc.span()
            )));
        }
    }

    let mid = p.chart.values()[0] + 0.5 * p.chart.span();
    let potential = match run.potential {
        PotentialSpec::None => None,
        PotentialSpec::Harmonic { omega, center } => {
            Some(PotentialOnCurve::harmonic(p.chart.clone(), c, omega, center.unwrap_or(mid)))
        }
    };
    let (mut psi, plane) = initial_state(&run.initial, &p.chart, c)?;
    if let Some(tc) = &time_chart {
        psi = psi.with_time_chart(tc.clone());
    }

    let mut ev = Evolver::new(&psi, potential.as_ref(), run.d_tau, run.boundary, run.xi_points)?;
    let mut cur = ev.state()?;
    let mut check = match (plane, run.potential, run.initial) {
        (Some(pw), PotentialSpec::None, _) => {
            Check::Phase { tracker: PhaseTracker::new(cur.clone()), k: pw.k, beta: pw.beta }
        }
        (_, PotentialSpec::Harmonic { omega, .. }, InitialState::HarmonicGround { .. }) => {
            Check::Stationary { initial: cur.clone(), omega, worst: 0.0 }
        }
        _ => Check::None,
    };

    let mut prev: Option<WaveFunction> = None;
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for s in 0..=run.steps {
        let next = if s < run.steps {
            ev.step()?;
            Some(ev.state()?)
        } else {
            None
        };
        match &mut check {
            Check::Phase { tracker, .. } => tracker.record(&cur),
            Check::Stationary { initial, worst, .. } => *worst = worst.max(modulus_deviation(&cur, initial)),
            Check::None => {}
        }
        if s % stride == 0 || s == run.steps {
            if snapshots {
                let file = format!("snapshots/snapshot_{s:06}.csv");
                out.csv(&file, |w| write_snapshot(w, &cur))?;
                entries.push(SnapshotEntry {
                    file,
                    step: s,
                    tau: cur.tau(),
                    t: cur.physical_time(),
                    total_probability: total_probability(&cur),
                });
            }
            if let (Some(a), Some(b)) = (&prev, &next) {
                let r = residual_norms(&continuity_residual(a, &cur, b)?);
                rows.push(ContinuityRow {
                    tau: cur.tau(),
                    residual_max: r.max,
                    residual_l2: r.l2,
                    total_probability: total_probability(&cur),
                });
            }
        }
        if let Some(n) = next {
            prev = Some(std::mem::replace(&mut cur, n));
        }
    }
    out.csv("continuity.csv", |w| write_continuity(w, &rows))?;

    let mut reports = vec!["continuity.csv".to_owned()];
    match check {
        Check::Phase { tracker, k, beta } => {
            if let Some(measured) = tracker.fitted_rate() {
                out.json(
                    "phase_check.json",
                    &PhaseCheck {
                        k,
                        beta_analytic: beta,
                        beta_measured: measured,
                        relative_error: (measured - beta).abs() / beta.abs().max(f64::MIN_POSITIVE),
                        samples: run.steps + 1,
                    },
                )?;
                reports.push("phase_check.json".into());
            }
        }
        Check::Stationary { omega, worst, .. } => {
            out.json(
                "stationary.json",
                &StationaryCheck {
                    omega,
                    energy: 0.5 * c.hbar * omega,
                    max_modulus_deviation: worst,
                    tau_final: cur.tau(),
                },
            )?;
            reports.push("stationary.json".into());
        }
        Check::None => {}
    }

    out.json(
        "manifest.json",
        &Manifest {
            command,
            config_sha256: config_hash(raw),
            config: cfg,
            crate_version: env!("CARGO_PKG_VERSION"),
            alpha_space: p.alpha,
            curve_level: p.grid.level(),
            nodes: p.grid.len(),
            xi_points: ev.theta().len(),
            d_tau: run.d_tau,
            steps: run.steps,
            stride,
            snapshots: entries,
            reports,
        },
    )
}
