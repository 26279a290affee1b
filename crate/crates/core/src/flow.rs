//! Probability density, current and the continuity residual.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calculus::{falpha_derivative, integral_between, laplacian, FieldOnCurve};
use crate::error::Result;
use crate::quantum::operators::check_snapshots;
use crate::quantum::WaveFunction;

/// `ρ = ψ* ψ`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub field: FieldOnCurve<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurrentForm {
    /// `(ħ/2mi)(ψ* dψ/dS − ψ dψ*/dS)`, which closes the continuity equation.
    #[default]
    FirstDerivative,
    /// `(ħ/2mi)(ψ (d/dS)²ψ* − ψ* (d/dS)²ψ)`, kept for comparison only.
    SecondDerivative,
}

/// Tangential probability current.
#[derive(Debug, Clone, PartialEq)]
pub struct CurrentField {
    pub field: FieldOnCurve<f64>,
    pub form: CurrentForm,
}

pub fn probability_density(psi: &WaveFunction) -> DensityField {
    DensityField { field: psi.field().map(|z| z.norm_sqr()) }
}

pub fn probability_current(psi: &WaveFunction, form: CurrentForm) -> Result<CurrentField> {
    let c = psi.constants();
    let scale = c.hbar / c.mass;
    // (z − z̄)/(2i) = Im z
    let field = match form {
        CurrentForm::FirstDerivative => {
            let d = falpha_derivative(psi.field())?;
            psi.field().zip_with(&d, |z, dz| scale * (z.conj() * dz).im)?
        }
        CurrentForm::SecondDerivative => {
            let d2 = laplacian(psi.field())?;
            psi.field().zip_with(&d2, |z, d2z| scale * (z * d2z.conj()).im)?
        }
    };
    Ok(CurrentField { field, form })
}

/// `|∂ρ/∂τ + dJ/dS|` with a central τ-difference over three snapshots.
pub fn continuity_residual(prev: &WaveFunction, cur: &WaveFunction, next: &WaveFunction) -> Result<FieldOnCurve<f64>> {
    let dt = check_snapshots(prev, cur, next)?;
    let j = probability_current(cur, CurrentForm::FirstDerivative)?;
    let div_j = falpha_derivative(&j.field)?;
    let rho_dot: Vec<f64> =
        prev.values().iter().zip(next.values()).map(|(a, b)| (b.norm_sqr() - a.norm_sqr()) / (2.0 * dt)).collect();
    let values = rho_dot.iter().zip(div_j.values()).map(|(r, d)| (r + d).abs()).collect();
    FieldOnCurve::new(cur.space_chart().clone(), values)
}

/// `∫ ρ dS` over the whole curve.
pub fn total_probability(psi: &WaveFunction) -> f64 {
    let rho = probability_density(psi);
    integral_between(&rho.field, 0, rho.field.len() - 1)
}

/// Max and L²(dS) norms of a real field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualNorms {
    pub max: f64,
    pub l2: f64,
}

pub fn residual_norms(field: &FieldOnCurve<f64>) -> ResidualNorms {
    let max = field.max_modulus();
    let sq = field.map(|x| x * x);
    let l2 = integral_between(&sq, 0, sq.len() - 1).max(0.0).sqrt();
    ResidualNorms { max, l2 }
}

/// `ψ*` on the same chart.
pub fn conjugate(psi: &WaveFunction) -> Result<WaveFunction> {
    psi.with_values(psi.values().iter().map(Complex64::conj).collect())
}
