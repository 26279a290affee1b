//! Single-step free propagator `K = A⁻¹ exp(i m δ² / (2ħε))` and its moments.
//!
//! The oscillatory integrals converge only conditionally; they are damped by
//! `ε → ε(1 − iη)`. Moments are evaluated by Gauss–Legendre quadrature on
//! panels of equal phase out to a cutoff radius plus an asymptotic series for
//! the tail, and then extrapolated to `η → 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::quantum::conjugacy::{conjugate_map, inverse_map, ConjugateGrid};
use crate::quantum::{Boundary, PhysicalConstants, WaveFunction};

/// Largest admissible damping.
pub const MAX_DAMPING: f64 = 1e-2;
/// Default damping of the oscillatory kernel.
pub const DEFAULT_DAMPING: f64 = 1e-4;
/// Minimum number of ξ cells spanned by the kernel width `sqrt(ħε/m)`.
pub const MIN_KERNEL_CELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelStep {
    epsilon: f64,
    damping_eta: f64,
    constants: PhysicalConstants,
}

impl KernelStep {
    pub fn new(epsilon: f64, damping_eta: f64, constants: PhysicalConstants) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::Domain(format!("ε must be positive, got {epsilon}")));
        }
        if !(damping_eta > 0.0 && damping_eta <= MAX_DAMPING) {
            return Err(Error::Domain(format!("damping η must lie in (0, {MAX_DAMPING}], got {damping_eta}")));
        }
        Ok(Self { epsilon, damping_eta, constants })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn damping_eta(&self) -> f64 {
        self.damping_eta
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    /// `A = sqrt(2iπħε/m)`, principal branch.
    pub fn normalization(&self) -> Complex64 {
        let PhysicalConstants { hbar, mass } = self.constants;
        Complex64::new(0.0, 2.0 * PI * hbar * self.epsilon / mass).sqrt()
    }

    /// Kernel width `sqrt(ħε/m)`.
    pub fn width(&self) -> f64 {
        (self.constants.hbar * self.epsilon / self.constants.mass).sqrt()
    }

    /// Gaussian exponent `c` with `K ∝ exp(c δ²)` at damping `eta`.
    fn exponent(&self, eta: f64) -> Complex64 {
        let PhysicalConstants { hbar, mass } = self.constants;
        Complex64::new(0.0, mass) / (2.0 * hbar * self.epsilon * Complex64::new(1.0, -eta))
    }

    /// Fourier multiplier of the kernel normalized to unit zeroth moment:
    /// `exp(−iħk²ε(1 − iη)/(2m))`.
    pub fn multiplier(&self, k: f64) -> Complex64 {
        let PhysicalConstants { hbar, mass } = self.constants;
        let eps = self.epsilon * Complex64::new(1.0, -self.damping_eta);
        (Complex64::new(0.0, -hbar * k * k / (2.0 * mass)) * eps).exp()
    }
}

/// Moments `∫ K`, `∫ δ K`, `∫ (δ²/2) K` of the normalized kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMoments {
    /// η → 0 extrapolation.
    pub m0: Complex64,
    pub m1: Complex64,
    pub m2: Complex64,
    /// Raw damped moments at `η`, `η/2`, `η/4`.
    pub raw: Vec<RawMoments>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawMoments {
    pub eta: f64,
    pub m0: Complex64,
    pub m1: Complex64,
    pub m2: Complex64,
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

const GL_ORDER: usize = 16;

/// `∫_0^R δ^p e^{cδ²} dδ` and `∫_{−R}^0`, for p = 0, 1, 2, on panels of equal
/// phase increment π/2.
fn near_field(c: Complex64, width: f64, radius: f64) -> ([Complex64; 3], [Complex64; 3]) {
    let (x, w) = gauss_legendre(GL_ORDER);
    let panels = ((radius / width).powi(2) / PI).ceil() as usize;
    let edge = |k: usize| radius * (k as f64 / panels as f64).sqrt();
    let mut pos = [Complex64::new(0.0, 0.0); 3];
    let mut neg = [Complex64::new(0.0, 0.0); 3];
    for k in 0..panels {
        let (a, b) = (edge(k), edge(k + 1));
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (&xi, &wi) in x.iter().zip(&w) {
            for (sign, acc) in [(1.0, &mut pos), (-1.0, &mut neg)] {
                let d = sign * (mid + half * xi);
                let e = (c * d * d).exp() * (wi * half);
                acc[0] += e;
                acc[1] += e * d;
                acc[2] += e * d * d;
            }
        }
    }
    (pos, neg)
}

/// Asymptotic tails `∫_R^∞ δ^p e^{cδ²} dδ` for p = 0, 1, 2 (Re c < 0).
fn tails(c: Complex64, radius: f64) -> [Complex64; 3] {
    let e = (c * radius * radius).exp();
    let two_c = 2.0 * c;
    // I₀ = Σ_j coef_j · (−R^{−2j−1} e / 2c), coef_{j} = coef_{j−1} (2j − 1)/(2c).
    let mut i0 = Complex64::new(0.0, 0.0);
    let mut coef = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for j in 0..200 {
        if j > 0 {
            coef *= (2 * j - 1) as f64 / two_c;
        }
        let term = coef * (-radius.powi(-(2 * j) - 1) * e / two_c);
        if term.norm() >= prev {
            break;
        }
        i0 += term;
        prev = term.norm();
        if prev <= 1e-18 * i0.norm() {
            break;
        }
    }
    let i1 = -e / two_c;
    let i2 = -radius * e / two_c - i0 / two_c;
    [i0, i1, i2]
}

fn raw_moments(step: &KernelStep, eta: f64, radius_widths: f64) -> RawMoments {
    let c = step.exponent(eta);
    let width = step.width();
    let radius = radius_widths * width;
    let (pos, neg) = near_field(c, width, radius);
    let tail = tails(c, radius);
    // The left tail mirrors the right one with δ^p → (−1)^p δ^p.
    let total = [pos[0] + neg[0] + 2.0 * tail[0], pos[1] + neg[1], pos[2] + neg[2] + 2.0 * tail[2]];
    let inv_a = step.normalization().inv();
    RawMoments { eta, m0: total[0] * inv_a, m1: total[1] * inv_a, m2: 0.5 * total[2] * inv_a }
}

/// Cutoff radii, in kernel widths, for the quadrature and its convergence check.
const RADII: (f64, f64) = (30.0, 40.0);
const QUADRATURE_TOL: f64 = 1e-9;

fn checked_raw(step: &KernelStep, eta: f64) -> Result<RawMoments> {
    let a = raw_moments(step, eta, RADII.0);
    let b = raw_moments(step, eta, RADII.1);
    let scale_m2 = step.epsilon * step.constants.hbar / (2.0 * step.constants.mass);
    let diffs = [(a.m0 - b.m0).norm(), (a.m1 - b.m1).norm(), (a.m2 - b.m2).norm() / scale_m2];
    if diffs.iter().any(|&d| !(d <= QUADRATURE_TOL)) {
        return Err(Error::Quadrature(format!(
            "moments changed by {diffs:?} between cutoffs {:?} kernel widths at η = {eta}",
            RADII
        )));
    }
    Ok(b)
}

/// Kernel moments, Richardson-extrapolated over `η, η/2, η/4` to `η → 0`.
pub fn kernel_moments(step: &KernelStep) -> Result<KernelMoments> {
    let eta = step.damping_eta;
    let raw = [checked_raw(step, eta)?, checked_raw(step, 0.5 * eta)?, checked_raw(step, 0.25 * eta)?];
    let extrapolate = |f: fn(&RawMoments) -> Complex64| (8.0 * f(&raw[2]) - 6.0 * f(&raw[1]) + f(&raw[0])) / 3.0;
    Ok(KernelMoments {
        m0: extrapolate(|r| r.m0),
        m1: extrapolate(|r| r.m1),
        m2: extrapolate(|r| r.m2),
        raw: raw.to_vec(),
    })
}

/// Checks that the kernel width spans enough ξ cells.
pub fn check_resolution(step: &KernelStep, dxi: f64) -> Result<()> {
    let width = step.width();
    if width < MIN_KERNEL_CELLS as f64 * dxi {
        return Err(Error::Resolution { width, cell: dxi, min_cells: MIN_KERNEL_CELLS });
    }
    Ok(())
}

/// Convolves θ with the kernel. The kernel acts on the band-limited
/// interpolant of the samples, so the convolution weights are the inverse
/// transform of the kernel's Fourier multiplier. Periodic grids use circular
/// convolution over the `n − 1` distinct points; Dirichlet grids are
/// zero-extended to four times their length.
pub fn apply_kernel(theta: &ConjugateGrid, step: &KernelStep, boundary: Boundary) -> Result<ConjugateGrid> {
    check_resolution(step, theta.dxi())?;
    let n = theta.len();
    let (len, active) = match boundary {
        Boundary::Periodic => (n - 1, n - 1),
        Boundary::Dirichlet => ((4 * n).next_power_of_two(), n),
    };
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    buf[..active].copy_from_slice(&theta.values()[..active]);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(len).process(&mut buf);
    let dk = 2.0 * PI / (len as f64 * theta.dxi());
    for (q, z) in buf.iter_mut().enumerate() {
        let wrapped = if q <= len / 2 { q as f64 } else { q as f64 - len as f64 };
        *z *= step.multiplier(wrapped * dk) / len as f64;
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    let mut out = buf[..active].to_vec();
    match boundary {
        Boundary::Periodic => out.push(out[0]),
        Boundary::Dirichlet => {
            out[0] = Complex64::new(0.0, 0.0);
            out[n - 1] = Complex64::new(0.0, 0.0);
        }
    }
    ConjugateGrid::new(theta.xi0(), theta.dxi(), out)
}

/// One kernel step of length ε on ψ; staircase time advances by ε.
pub fn kernel_step(
    psi: &WaveFunction,
    step: &KernelStep,
    boundary: Boundary,
    xi_points: Option<usize>,
) -> Result<WaveFunction> {
    let theta = conjugate_map(psi, xi_points)?;
    let next = apply_kernel(&theta, step, boundary)?;
    Ok(inverse_map(&next, psi)?.with_tau(psi.tau() + step.epsilon))
}
