//! Hamiltonian and momentum operators and the discrete equation residual.

use num_complex::Complex64;

use crate::calculus::{check_aligned, gradient, laplacian, FieldOnCurve, VectorFieldOnCurve};
use crate::curve::CurveGrid;
use crate::error::{Error, Result};
use crate::quantum::{PotentialOnCurve, WaveFunction};

/// `Hψ = −ħ²/(2m) (d/dS)² ψ + V ψ` at the state's staircase time.
pub fn hamiltonian_apply(psi: &WaveFunction, potential: Option<&PotentialOnCurve>) -> Result<WaveFunction> {
    let values = hamiltonian_values(psi, potential)?;
    psi.with_values(values)
}

fn hamiltonian_values(psi: &WaveFunction, potential: Option<&PotentialOnCurve>) -> Result<Vec<Complex64>> {
    let c = psi.constants();
    let kinetic = -c.hbar * c.hbar / (2.0 * c.mass);
    let lap = laplacian(psi.field())?;
    let mut out: Vec<Complex64> = lap.values().iter().map(|z| z * kinetic).collect();
    if let Some(p) = potential {
        p.check_chart(psi.space_chart())?;
        for ((o, v), z) in out.iter_mut().zip(p.values_at(psi.tau())).zip(psi.values()) {
            *o += z * v;
        }
    }
    Ok(out)
}

/// `P ψ = −iħ ∇ψ` along the curve.
pub fn momentum_apply(psi: &WaveFunction, grid: &CurveGrid) -> Result<VectorFieldOnCurve<Complex64>> {
    let scale = Complex64::new(0.0, -psi.constants().hbar);
    let grad = gradient(psi.field(), grid)?;
    let [x, y, z] = grad.components;
    VectorFieldOnCurve::new([x.map(|w| w * scale), y.map(|w| w * scale), z.map(|w| w * scale)])
}

/// Verifies three snapshots share a chart and are equally spaced in τ;
/// returns the spacing.
pub(crate) fn check_snapshots(prev: &WaveFunction, cur: &WaveFunction, next: &WaveFunction) -> Result<f64> {
    check_aligned(prev.space_chart(), cur.space_chart())?;
    check_aligned(cur.space_chart(), next.space_chart())?;
    let d1 = cur.tau() - prev.tau();
    let d2 = next.tau() - cur.tau();
    if !(d1 > 0.0) || (d1 - d2).abs() > 1e-9 * d1 {
        return Err(Error::Mismatch(format!(
            "snapshots are not equally spaced in τ: {} , {}, {}",
            prev.tau(),
            cur.tau(),
            next.tau()
        )));
    }
    Ok(0.5 * (d1 + d2))
}

/// `|iħ (ψ₊ − ψ₋)/(2Δτ) − Hψ|` at every node of the middle snapshot.
pub fn schrodinger_residual(
    prev: &WaveFunction,
    cur: &WaveFunction,
    next: &WaveFunction,
    potential: Option<&PotentialOnCurve>,
) -> Result<FieldOnCurve<f64>> {
    let dt = check_snapshots(prev, cur, next)?;
    let ih = Complex64::new(0.0, cur.constants().hbar);
    let h = hamiltonian_values(cur, potential)?;
    let values = prev
        .values()
        .iter()
        .zip(next.values())
        .zip(&h)
        .map(|((a, b), hz)| (ih * (b - a) / (2.0 * dt) - hz).norm())
        .collect();
    FieldOnCurve::new(cur.space_chart().clone(), values)
}
