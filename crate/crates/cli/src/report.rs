//! Run summaries written next to the data files.

use std::f64::consts::PI;

use fractalqm::calculus::integral_between;
use fractalqm::{Complex64, WaveFunction};
use serde::Serialize;

/// Accumulates `⟨ψ₀|ψ(τ)⟩` and fits its phase rate.
#[derive(Debug, Clone)]
pub struct PhaseTracker {
    reference: WaveFunction,
    taus: Vec<f64>,
    phases: Vec<f64>,
}

impl PhaseTracker {
    pub fn new(reference: WaveFunction) -> Self {
        Self { reference, taus: Vec::new(), phases: Vec::new() }
    }

    pub fn record(&mut self, psi: &WaveFunction) {
        let overlap = integral_between(
            &self.reference.field().zip_with(psi.field(), |a, b| a.conj() * b).expect("same chart"),
            0,
            psi.len() - 1,
        );
        let mut phase = overlap.arg();
        if let Some(&last) = self.phases.last() {
            phase += 2.0 * PI * ((last - phase) / (2.0 * PI)).round();
        }
        self.taus.push(psi.tau());
        self.phases.push(phase);
    }

    /// `−d(phase)/dτ` by least squares.
    pub fn fitted_rate(&self) -> Option<f64> {
        fit_slope(&self.taus, &self.phases).map(|s| -s)
    }
}

pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseCheck {
    pub k: f64,
    pub beta_analytic: f64,
    pub beta_measured: f64,
    pub relative_error: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StationaryCheck {
    pub omega: f64,
    pub energy: f64,
    pub max_modulus_deviation: f64,
    pub tau_final: f64,
}

/// Max over nodes of `||ψ| − |ψ₀||`.
pub fn modulus_deviation(a: &WaveFunction, b: &WaveFunction) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y): (&Complex64, &Complex64)| (x.norm() - y.norm()).abs())
        .fold(0.0, f64::max)
}
