//! Analytic states: plane waves, Gaussian packets, oscillator ground state.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::calculus::FieldOnCurve;
use crate::error::{Error, Result};
use crate::measure::Staircase;
use crate::quantum::{PhysicalConstants, WaveFunction};

/// `ψ = (A e^{ikS} + B e^{−ikS}) e^{−iβτ}` with `k = sqrt(2mE)/ħ`, `β = E/ħ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveParams {
    pub a: Complex64,
    pub b: Complex64,
    pub k: f64,
    pub beta: f64,
    pub energy: f64,
}

impl PlaneWaveParams {
    pub fn from_energy(a: Complex64, b: Complex64, energy: f64, c: PhysicalConstants) -> Result<Self> {
        if !(energy >= 0.0) {
            return Err(Error::Domain(format!("energy must be non-negative, got {energy}")));
        }
        Ok(Self { a, b, k: (2.0 * c.mass * energy).sqrt() / c.hbar, beta: energy / c.hbar, energy })
    }

    pub fn from_wavenumber(a: Complex64, b: Complex64, k: f64, c: PhysicalConstants) -> Self {
        let energy = c.hbar * c.hbar * k * k / (2.0 * c.mass);
        Self { a, b, k, beta: energy / c.hbar, energy }
    }
}

pub fn plane_wave(
    params: &PlaneWaveParams,
    space_chart: Arc<Staircase>,
    time_chart: Option<Arc<Staircase>>,
    tau: f64,
    constants: PhysicalConstants,
) -> WaveFunction {
    let phase = Complex64::from_polar(1.0, -params.beta * tau);
    let field = FieldOnCurve::from_fn(space_chart, |_, s| {
        (params.a * Complex64::from_polar(1.0, params.k * s) + params.b * Complex64::from_polar(1.0, -params.k * s))
            * phase
    });
    let psi = WaveFunction::new(field, constants).with_tau(tau);
    match time_chart {
        Some(tc) => psi.with_time_chart(tc),
        None => psi,
    }
}

/// `(2πσ²)^{−1/4} exp(−(S − c)²/(4σ²) + i k₀ S)`; `|ψ|²` has variance σ².
pub fn gaussian_packet(
    chart: Arc<Staircase>,
    center: f64,
    sigma: f64,
    k0: f64,
    constants: PhysicalConstants,
) -> WaveFunction {
    let amp = (2.0 * PI * sigma * sigma).powf(-0.25);
    let field = FieldOnCurve::from_fn(chart, |_, s| {
        let x = s - center;
        Complex64::from_polar(amp * (-x * x / (4.0 * sigma * sigma)).exp(), k0 * s)
    });
    WaveFunction::new(field, constants)
}

/// Ground state of `V = ½ m ω² (S − c)²`, energy `ħω/2`.
pub fn harmonic_ground_state(
    chart: Arc<Staircase>,
    center: f64,
    omega: f64,
    constants: PhysicalConstants,
) -> WaveFunction {
    let PhysicalConstants { hbar, mass } = constants;
    let sigma = (hbar / (2.0 * mass * omega)).sqrt();
    gaussian_packet(chart, center, sigma, 0.0, constants)
}
