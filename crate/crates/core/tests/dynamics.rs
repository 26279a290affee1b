use std::f64::consts::PI;
use std::sync::Arc;

use fractalqm::curve::{build_koch, build_line};
use fractalqm::measure::build_staircase;
use fractalqm::quantum::{
    evolve, gaussian_packet, harmonic_ground_state, kernel_step, plane_wave, Boundary, EvolveOptions, Evolver,
    KernelStep, PlaneWaveParams,
};
use fractalqm::{Complex64, PhysicalConstants, PotentialOnCurve, Staircase, WaveFunction};

fn line_chart(a: f64, b: f64, n: usize) -> Arc<Staircase> {
    let g = build_line([a, 0.0, 0.0], [b, 0.0, 0.0], n).unwrap();
    Arc::new(build_staircase(&g, 1.0, 0.0).unwrap())
}

fn variance(psi: &WaveFunction) -> f64 {
    let s = psi.space_chart().values();
    let rho: Vec<f64> = psi.values().iter().map(|z| z.norm_sqr()).collect();
    let trap =
        |f: &dyn Fn(usize) -> f64| (1..s.len()).map(|i| 0.5 * (f(i) + f(i - 1)) * (s[i] - s[i - 1])).sum::<f64>();
    let norm = trap(&|i| rho[i]);
    let mean = trap(&|i| rho[i] * s[i]) / norm;
    trap(&|i| rho[i] * (s[i] - mean).powi(2)) / norm
}

#[test]
fn oscillator_ground_state_is_stationary_over_a_period() {
    let c = PhysicalConstants::default();
    let omega = 1.0;
    let chart = line_chart(0.0, 12.0, 16001);
    let psi = harmonic_ground_state(chart.clone(), 6.0, omega, c);
    let v = PotentialOnCurve::harmonic(chart, c, omega, 6.0);
    let steps = 1000;
    let out = evolve(&psi, Some(&v), &EvolveOptions::new(2.0 * PI / omega / steps as f64, steps, Boundary::Dirichlet))
        .unwrap();
    let dev = out.values().iter().zip(psi.values()).map(|(a, b)| (a.norm() - b.norm()).abs()).fold(0.0, f64::max);
    println!("stationary modulus deviation {dev:e}");
    assert!(dev <= 1e-6, "{dev}");
}

#[test]
fn free_gaussian_spreads_at_the_analytic_rate() {
    let c = PhysicalConstants::default();
    let sigma0 = 0.5;
    let chart = line_chart(-10.0, 10.0, 1024);
    let psi = gaussian_packet(chart, 10.0, sigma0, 0.0, c);
    let mut ev = Evolver::new(&psi, None, 1e-3, Boundary::Dirichlet, None).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        ev.advance(100).unwrap();
        let tau = ev.tau();
        let want = sigma0 * sigma0 + (tau / (2.0 * sigma0)).powi(2);
        worst = worst.max((variance(&ev.state().unwrap()) / want - 1.0).abs());
    }
    println!("worst relative variance error {worst:e}");
    assert!(worst < 0.01);
}

#[test]
fn kernel_step_preserves_constants_and_rotates_plane_waves() {
    let c = PhysicalConstants::default();
    let chart = line_chart(0.0, 1.0, 1025);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let eps = 1e-3;
    let step = KernelStep::new(eps, 1e-8, c).unwrap();

    let flat = plane_wave(&PlaneWaveParams::from_wavenumber(one, zero, 0.0, c), chart.clone(), None, 0.0, c);
    let out = kernel_step(&flat, &step, Boundary::Periodic, None).unwrap();
    assert!(out.values().iter().all(|z| (z - one).norm() < 1e-12));

    let k = 4.0 * PI;
    let p = PlaneWaveParams::from_wavenumber(one, zero, k, c);
    let psi = plane_wave(&p, chart.clone(), None, 0.0, c);
    let out = kernel_step(&psi, &step, Boundary::Periodic, None).unwrap();
    let want = plane_wave(&p, chart, None, eps, c);
    let err = out.values().iter().zip(want.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("kernel plane-wave error {err:e}");
    assert!(err < 1e-6);
    assert!((out.tau() - eps).abs() < 1e-18);
}

#[test]
fn cn_plane_wave_on_koch_has_the_right_frequency() {
    let c = PhysicalConstants::default();
    let g = build_koch(5).unwrap();
    let chart = Arc::new(build_staircase(&g, 4f64.ln() / 3f64.ln(), 0.0).unwrap());
    let k = 2.0 * PI / chart.span();
    let p = PlaneWaveParams::from_wavenumber(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), k, c);
    let psi = plane_wave(&p, chart, None, 0.0, c);
    let d_tau = 1e-3;
    let mut ev = Evolver::new(&psi, None, d_tau, Boundary::Periodic, Some(513)).unwrap();
    let (mut t, mut ph) = (Vec::new(), Vec::new());
    let mut unwrapped = 0.0;
    let mut last = 0.0;
    for _ in 0..200 {
        ev.step().unwrap();
        let z = ev.theta().values()[100] / psi_at(&ev, &psi);
        let a = z.arg();
        let mut d = a - last;
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        unwrapped += d;
        last = a;
        t.push(ev.tau());
        ph.push(unwrapped);
    }
    let n = t.len() as f64;
    let (mt, mp) = (t.iter().sum::<f64>() / n, ph.iter().sum::<f64>() / n);
    let slope = t.iter().zip(&ph).map(|(a, b)| (a - mt) * (b - mp)).sum::<f64>()
        / t.iter().map(|a| (a - mt).powi(2)).sum::<f64>();
    let beta = -slope;
    println!("fitted β {beta}, analytic {}", p.beta);
    assert!((beta / p.beta - 1.0).abs() < 1e-3);
}

fn psi_at(ev: &Evolver, psi: &WaveFunction) -> Complex64 {
    let th = ev.theta();
    let xi = th.xi(100);
    let k = 2.0 * PI / psi.space_chart().span();
    Complex64::from_polar(1.0, k * xi)
}
