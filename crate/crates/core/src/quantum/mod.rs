//! Schrödinger dynamics on fractal curves.
//!
//! All evolution happens in staircase coordinates `ξ = S(v)` and staircase
//! time `τ = S(t)`. The conjugacy map resamples a wave function onto a
//! uniform `ξ` grid, where the equation is the ordinary one-dimensional
//! Schrödinger equation; results are mapped back onto the curve nodes.
//! Staircase time does not advance across gaps of a Cantor-like time set,
//! which is how the characteristic function χ_F(t) enters.

pub mod conjugacy;
pub mod crank_nicolson;
pub mod kernel;
pub mod operators;
pub mod states;
mod tridiag;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::{check_aligned, integral_between, FieldOnCurve};
use crate::error::{Error, Result};
use crate::measure::Staircase;

pub use conjugacy::{conjugate_map, inverse_map, ConjugateGrid};
pub use crank_nicolson::{evolve, EvolveOptions, Evolver};
pub use kernel::{kernel_moments, kernel_step, KernelMoments, KernelStep};
pub use operators::{hamiltonian_apply, momentum_apply, schrodinger_residual};
pub use states::{gaussian_packet, harmonic_ground_state, plane_wave, PlaneWaveParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub mass: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if hbar > 0.0 && mass > 0.0 && hbar.is_finite() && mass.is_finite() {
            Ok(Self { hbar, mass })
        } else {
            Err(Error::Domain(format!("ħ and m must be positive, got ħ = {hbar}, m = {mass}")))
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0 }
    }
}

/// Boundary condition of the staircase coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// ψ vanishes at both ends of the curve.
    #[default]
    Dirichlet,
    /// The last node is identified with the first.
    Periodic,
}

/// ψ(τ, w(v)) sampled on the nodes of a staircase chart.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    field: FieldOnCurve<Complex64>,
    time_chart: Option<Arc<Staircase>>,
    tau: f64,
    constants: PhysicalConstants,
}

impl WaveFunction {
    pub fn new(field: FieldOnCurve<Complex64>, constants: PhysicalConstants) -> Self {
        Self { field, time_chart: None, tau: 0.0, constants }
    }

    pub fn with_time_chart(mut self, chart: Arc<Staircase>) -> Self {
        self.time_chart = Some(chart);
        self
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    /// Same chart, time and constants with new node values.
    pub fn with_values(&self, values: Vec<Complex64>) -> Result<Self> {
        Ok(Self {
            field: FieldOnCurve::new(self.field.chart().clone(), values)?,
            time_chart: self.time_chart.clone(),
            tau: self.tau,
            constants: self.constants,
        })
    }

    pub fn field(&self) -> &FieldOnCurve<Complex64> {
        &self.field
    }

    pub fn values(&self) -> &[Complex64] {
        self.field.values()
    }

    pub fn space_chart(&self) -> &Arc<Staircase> {
        self.field.chart()
    }

    pub fn time_chart(&self) -> Option<&Arc<Staircase>> {
        self.time_chart.as_ref()
    }

    /// Current staircase time τ.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    pub fn len(&self) -> usize {
        self.field.len()
    }

    pub fn is_empty(&self) -> bool {
        self.field.is_empty()
    }

    /// Physical time `t = S⁻¹(τ)` on the time chart (left end of plateaus).
    pub fn physical_time(&self) -> Option<f64> {
        self.time_chart.as_ref().map(|c| c.inverse(self.tau))
    }

    /// `Σ |ψ|² dS` by the trapezoid rule.
    pub fn norm_squared(&self) -> f64 {
        integral_between(&self.field.map(|z| z.norm_sqr()), 0, self.len() - 1)
    }

    /// Copy scaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_squared();
        if !(n > 0.0) {
            return Err(Error::Domain("cannot normalize a zero state".into()));
        }
        let scale = n.sqrt().recip();
        self.with_values(self.values().iter().map(|z| z * scale).collect())
    }
}

pub type TimeModulation = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real potential `V(τ, w(v)) = V(w(v)) · g(τ)` on the curve nodes.
#[derive(Clone)]
pub struct PotentialOnCurve {
    field: FieldOnCurve<f64>,
    time_dependence: Option<TimeModulation>,
}

impl fmt::Debug for PotentialOnCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialOnCurve")
            .field("field", &self.field)
            .field("time_dependent", &self.time_dependence.is_some())
            .finish()
    }
}

impl PotentialOnCurve {
    pub fn new(field: FieldOnCurve<f64>) -> Self {
        Self { field, time_dependence: None }
    }

    pub fn with_time_dependence(mut self, g: TimeModulation) -> Self {
        self.time_dependence = Some(g);
        self
    }

    /// `½ m ω² (S − center)²`.
    pub fn harmonic(chart: Arc<Staircase>, constants: PhysicalConstants, omega: f64, center: f64) -> Self {
        let k = 0.5 * constants.mass * omega * omega;
        Self::new(FieldOnCurve::from_fn(chart, |_, s| k * (s - center) * (s - center)))
    }

    pub fn field(&self) -> &FieldOnCurve<f64> {
        &self.field
    }

    /// Node values at staircase time `tau`.
    pub fn values_at(&self, tau: f64) -> Vec<f64> {
        let m = self.multiplier(tau);
        self.field.values().iter().map(|v| v * m).collect()
    }

    pub fn multiplier(&self, tau: f64) -> f64 {
        self.time_dependence.as_ref().map_or(1.0, |g| g(tau))
    }

    pub(crate) fn check_chart(&self, chart: &Staircase) -> Result<()> {
        check_aligned(self.field.chart(), chart)
    }
}
