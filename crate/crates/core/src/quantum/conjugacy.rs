//! The conjugacy map φ: ψ on curve nodes ↔ θ on a uniform grid in ξ = S(v).

use num_complex::Complex64;

use crate::calculus::Scalar;
use crate::error::{Error, Result};
use crate::measure::Staircase;
use crate::quantum::WaveFunction;

/// θ(ξⱼ) at `ξⱼ = xi0 + j · dxi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateGrid {
    xi0: f64,
    dxi: f64,
    values: Vec<Complex64>,
}

impl ConjugateGrid {
    pub fn new(xi0: f64, dxi: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(dxi > 0.0) || values.len() < 2 {
            return Err(Error::Conjugacy(format!(
                "uniform grid needs dξ > 0 and two points, got dξ = {dxi}, {} points",
                values.len()
            )));
        }
        Ok(Self { xi0, dxi, values })
    }

    pub fn xi0(&self) -> f64 {
        self.xi0
    }

    pub fn dxi(&self) -> f64 {
        self.dxi
    }

    pub fn xi(&self, j: usize) -> f64 {
        self.xi0 + j as f64 * self.dxi
    }

    /// Domain length `ξ_last − ξ_0`.
    pub fn extent(&self) -> f64 {
        self.dxi * (self.values.len() - 1) as f64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn snap_tol(chart: &Staircase) -> f64 {
    1e-12 * chart.span().abs().max(f64::MIN_POSITIVE)
}

/// Uniform `ξ` nodes spanning the chart, `points` of them (knot count by default).
pub(crate) fn uniform_axis(chart: &Staircase, points: Option<usize>) -> Result<(f64, f64, usize)> {
    let span = chart.span();
    if !(span > 0.0) {
        return Err(Error::Conjugacy("staircase chart is constant".into()));
    }
    let n = points.unwrap_or(chart.len());
    if n < 2 {
        return Err(Error::Conjugacy(format!("need at least two ξ points, got {n}")));
    }
    Ok((chart.values()[0], span / (n - 1) as f64, n))
}

/// Samples a node field at uniform `ξ`, interpolating linearly in `S`.
/// Plateaus resolve to their leftmost node.
pub(crate) fn to_uniform<T: Scalar>(chart: &Staircase, values: &[T], xi0: f64, dxi: f64, n: usize) -> Vec<T> {
    let s = chart.values();
    let tol = snap_tol(chart);
    (0..n)
        .map(|j| {
            let xi = xi0 + j as f64 * dxi;
            let i = s.partition_point(|&x| x < xi - tol);
            if i >= s.len() {
                return values[s.len() - 1];
            }
            if (s[i] - xi).abs() <= tol || i == 0 {
                return values[i];
            }
            let t = (xi - s[i - 1]) / (s[i] - s[i - 1]);
            values[i - 1] * (1.0 - t) + values[i] * t
        })
        .collect()
}

/// Evaluates uniform samples back at the chart knots.
pub(crate) fn from_uniform<T: Scalar>(chart: &Staircase, xi0: f64, dxi: f64, values: &[T]) -> Vec<T> {
    let n = values.len();
    chart
        .values()
        .iter()
        .map(|&s| {
            let x = (s - xi0) / dxi;
            let r = x.round();
            if (x - r).abs() <= 1e-9 && r >= 0.0 && (r as usize) < n {
                return values[r as usize];
            }
            let j = (x.floor().max(0.0) as usize).min(n - 2);
            let t = (x - j as f64).clamp(0.0, 1.0);
            values[j] * (1.0 - t) + values[j + 1] * t
        })
        .collect()
}

/// θ = φ[ψ]: resamples ψ onto `points` uniform nodes in ξ.
pub fn conjugate_map(psi: &WaveFunction, points: Option<usize>) -> Result<ConjugateGrid> {
    let chart = psi.space_chart();
    let (xi0, dxi, n) = uniform_axis(chart, points)?;
    ConjugateGrid::new(xi0, dxi, to_uniform(chart, psi.values(), xi0, dxi, n))
}

/// ψ = φ⁻¹[θ] on the chart, time and constants of `template`.
pub fn inverse_map(theta: &ConjugateGrid, template: &WaveFunction) -> Result<WaveFunction> {
    let values = from_uniform(template.space_chart(), theta.xi0, theta.dxi, &theta.values);
    template.with_values(values)
}
