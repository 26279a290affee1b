//! Crank–Nicolson evolution of `iħ ∂θ/∂τ = −ħ²/(2m) ∂²θ/∂ξ² + V θ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::conjugacy::{conjugate_map, inverse_map, to_uniform, ConjugateGrid};
use crate::quantum::tridiag::{solve_cyclic, solve_tridiagonal};
use crate::quantum::{Boundary, PhysicalConstants, PotentialOnCurve, WaveFunction};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub d_tau: f64,
    pub steps: usize,
    pub boundary: Boundary,
    /// Uniform ξ points; the knot count of the chart when `None`.
    pub xi_points: Option<usize>,
}

impl EvolveOptions {
    pub fn new(d_tau: f64, steps: usize, boundary: Boundary) -> Self {
        Self { d_tau, steps, boundary, xi_points: None }
    }
}

struct XiPotential {
    values: Vec<f64>,
    source: PotentialOnCurve,
}

/// Single-writer stepper holding θ on the uniform ξ grid.
pub struct Evolver {
    theta: ConjugateGrid,
    potential: Option<XiPotential>,
    d_tau: f64,
    boundary: Boundary,
    constants: PhysicalConstants,
    tau: f64,
    template: WaveFunction,
}

impl Evolver {
    pub fn new(
        psi: &WaveFunction,
        potential: Option<&PotentialOnCurve>,
        d_tau: f64,
        boundary: Boundary,
        xi_points: Option<usize>,
    ) -> Result<Self> {
        if !(d_tau > 0.0 && d_tau.is_finite()) {
            return Err(Error::Domain(format!("time step must be positive, got {d_tau}")));
        }
        let mut theta = conjugate_map(psi, xi_points)?;
        let n = theta.len();
        if n < 4 {
            return Err(Error::Solver(format!("need at least four ξ points, got {n}")));
        }
        let potential = match potential {
            Some(p) => {
                p.check_chart(psi.space_chart())?;
                let values = to_uniform(psi.space_chart(), p.field().values(), theta.xi0(), theta.dxi(), n);
                Some(XiPotential { values, source: p.clone() })
            }
            None => None,
        };
        let v = theta.values_mut();
        match boundary {
            Boundary::Dirichlet => {
                v[0] = Complex64::new(0.0, 0.0);
                v[n - 1] = Complex64::new(0.0, 0.0);
            }
            Boundary::Periodic => v[n - 1] = v[0],
        }
        Ok(Self {
            theta,
            potential,
            d_tau,
            boundary,
            constants: psi.constants(),
            tau: psi.tau(),
            template: psi.clone(),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn d_tau(&self) -> f64 {
        self.d_tau
    }

    pub fn theta(&self) -> &ConjugateGrid {
        &self.theta
    }

    /// Current state mapped back onto the curve nodes.
    pub fn state(&self) -> Result<WaveFunction> {
        Ok(inverse_map(&self.theta, &self.template)?.with_tau(self.tau))
    }

    fn potential_at(&self, j: usize, mult: f64) -> f64 {
        self.potential.as_ref().map_or(0.0, |p| p.values[j] * mult)
    }

    pub fn step(&mut self) -> Result<()> {
        let n = self.theta.len();
        let PhysicalConstants { hbar, mass } = self.constants;
        let kappa = hbar * hbar / (2.0 * mass * self.theta.dxi() * self.theta.dxi());
        let a = Complex64::new(0.0, self.d_tau / (2.0 * hbar));
        let mult = self.potential.as_ref().map_or(1.0, |p| p.source.multiplier(self.tau + 0.5 * self.d_tau));

        // Unknowns: interior nodes (Dirichlet) or all but the duplicated end (periodic).
        let (first, m) = match self.boundary {
            Boundary::Dirichlet => (1, n - 2),
            Boundary::Periodic => (0, n - 1),
        };
        let theta = self.theta.values();
        let at = |j: isize| -> Complex64 {
            match self.boundary {
                Boundary::Dirichlet => theta[j as usize],
                Boundary::Periodic => theta[j.rem_euclid(m as isize) as usize],
            }
        };
        let off = a * (-kappa);
        let sub = vec![off; m];
        let sup = vec![off; m];
        let mut diag = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for r in 0..m {
            let j = first + r;
            let h_jj = 2.0 * kappa + self.potential_at(j, mult);
            diag.push(1.0 + a * h_jj);
            let h_theta = h_jj * at(j as isize) - kappa * (at(j as isize - 1) + at(j as isize + 1));
            rhs.push(at(j as isize) - a * h_theta);
        }
        let next = match self.boundary {
            Boundary::Dirichlet => solve_tridiagonal(&sub, &diag, &sup, &rhs)?,
            Boundary::Periodic => solve_cyclic(&sub, &diag, &sup, &rhs)?,
        };
        let v = self.theta.values_mut();
        v[first..first + m].copy_from_slice(&next);
        if self.boundary == Boundary::Periodic {
            v[n - 1] = v[0];
        }
        self.tau += self.d_tau;
        Ok(())
    }

    pub fn advance(&mut self, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step()?;
        }
        Ok(())
    }
}

/// Evolves `psi` by `opts.steps` Crank–Nicolson steps in staircase time.
pub fn evolve(psi: &WaveFunction, potential: Option<&PotentialOnCurve>, opts: &EvolveOptions) -> Result<WaveFunction> {
    let mut ev = Evolver::new(psi, potential, opts.d_tau, opts.boundary, opts.xi_points)?;
    ev.advance(opts.steps)?;
    ev.state()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::FieldOnCurve;
    use crate::curve::build_line;
    use crate::measure::build_staircase;
    use std::sync::Arc;

    fn line_wave(n: usize, f: impl Fn(f64) -> Complex64) -> WaveFunction {
        let g = build_line([0.0; 3], [1.0, 0.0, 0.0], n).unwrap();
        let chart = Arc::new(build_staircase(&g, 1.0, 0.0).unwrap());
        WaveFunction::new(FieldOnCurve::from_fn(chart, |_, s| f(s)), PhysicalConstants::default())
    }

    #[test]
    fn one_step_preserves_norm() {
        let psi = line_wave(200, |s| Complex64::from_polar((-(s - 0.5) * (s - 0.5) / 0.005).exp(), 10.0 * s));
        for boundary in [Boundary::Dirichlet, Boundary::Periodic] {
            let before = psi.norm_squared();
            let after = evolve(&psi, None, &EvolveOptions::new(1e-3, 1, boundary)).unwrap();
            assert!(((after.norm_squared() - before) / before).abs() < 1e-12);
            assert!((after.tau() - 1e-3).abs() < 1e-18);
        }
    }

    #[test]
    fn rejects_bad_steps() {
        let psi = line_wave(10, |_| Complex64::new(1.0, 0.0));
        assert!(Evolver::new(&psi, None, 0.0, Boundary::Dirichlet, None).is_err());
        assert!(Evolver::new(&psi, None, f64::NAN, Boundary::Dirichlet, None).is_err());
        let tiny = line_wave(2, |_| Complex64::new(1.0, 0.0));
        assert!(matches!(Evolver::new(&tiny, None, 0.1, Boundary::Dirichlet, None), Err(Error::Solver(_))));
    }

    #[test]
    fn time_dependent_potential_is_sampled_at_midstep() {
        let psi = line_wave(64, |s| Complex64::new((std::f64::consts::PI * s).sin(), 0.0));
        let chart = psi.space_chart().clone();
        let flat = PotentialOnCurve::new(FieldOnCurve::from_fn(chart.clone(), |_, _| 1.0));
        let ramp = PotentialOnCurve::new(FieldOnCurve::from_fn(chart, |_, _| 1.0))
            .with_time_dependence(Arc::new(|tau| 2.0 * tau));
        // A spatially uniform potential only adds a global phase: ∫ V dτ.
        let dt = 0.001;
        let a = evolve(&psi, Some(&flat), &EvolveOptions::new(dt, 100, Boundary::Dirichlet)).unwrap();
        let b = evolve(&psi, Some(&ramp), &EvolveOptions::new(dt, 100, Boundary::Dirichlet)).unwrap();
        // ∫₀^0.1 2τ dτ = 0.01 vs ∫₀^0.1 1 dτ = 0.1.
        let i = 32;
        let phase = (b.values()[i] / a.values()[i]).arg();
        assert!((phase - 0.09).abs() < 1e-5, "phase {phase}");
    }
}
