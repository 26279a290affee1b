//! Browser bindings: Koch staircase, γ-dimension estimate, and a wave packet
//! evolving on a Koch curve.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::sync::Arc;

use fractalqm::curve::{build_cantor_dust, build_dyadic_line, build_koch};
use fractalqm::flow::total_probability;
use fractalqm::measure::{build_staircase, estimate_gamma_dimension};
use fractalqm::quantum::{gaussian_packet, Boundary, Evolver};
use fractalqm::{CurveGrid, PhysicalConstants, Staircase};
use wasm_bindgen::prelude::*;

const MAX_LEVEL: u32 = 8;

fn koch_dimension() -> f64 {
    4f64.ln() / 3f64.ln()
}

fn koch_chart(level: u32) -> Result<(CurveGrid, Arc<Staircase>), String> {
    if level > MAX_LEVEL {
        return Err(format!("level {level} exceeds {MAX_LEVEL}"));
    }
    let g = build_koch(level).map_err(|e| e.to_string())?;
    let s = build_staircase(&g, koch_dimension(), 0.0).map_err(|e| e.to_string())?;
    Ok((g, Arc::new(s)))
}

/// `[x₀, y₀, S₀, x₁, y₁, S₁, …]` for the Koch curve at `level`.
pub fn staircase_points(level: u32) -> Result<Vec<f64>, String> {
    let (g, s) = koch_chart(level)?;
    Ok(g.points().iter().zip(s.values()).flat_map(|(p, &v)| [p[0], p[1], v]).collect())
}

/// `[α*, bracket_lo, bracket_hi, slopes…]` for `kind` in `koch`, `dust`, `line`.
pub fn dimension_report(kind: &str, top_level: u32) -> Result<Vec<f64>, String> {
    if !(3..=MAX_LEVEL).contains(&top_level) {
        return Err(format!("top level must be in 3..={MAX_LEVEL}"));
    }
    let levels = top_level.saturating_sub(5).max(1)..=top_level;
    let grids: Result<Vec<_>, _> = levels
        .map(|l| match kind {
            "koch" => build_koch(l),
            "dust" => build_cantor_dust(l, 1.0),
            "line" => build_dyadic_line([0.0; 3], [1.0, 0.0, 0.0], l),
            other => Err(fractalqm::Error::Domain(format!("unknown curve {other:?}"))),
        })
        .collect();
    let est = estimate_gamma_dimension(&grids.map_err(|e| e.to_string())?, 1e-5).map_err(|e| e.to_string())?;
    let mut out = vec![est.alpha_star, est.bracket.0, est.bracket.1];
    out.extend(est.slopes_per_level);
    Ok(out)
}

#[wasm_bindgen(js_name = kochStaircase)]
pub fn koch_staircase(level: u32) -> Result<Vec<f64>, JsError> {
    staircase_points(level).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = estimateDimension)]
pub fn estimate_dimension(kind: &str, top_level: u32) -> Result<Vec<f64>, JsError> {
    dimension_report(kind, top_level).map_err(|e| JsError::new(&e))
}

/// Gaussian packet on a Koch curve, advanced by Crank–Nicolson steps.
#[wasm_bindgen]
pub struct WavePacket {
    evolver: Evolver,
    chart: Arc<Staircase>,
}

impl WavePacket {
    pub fn create(level: u32, sigma: f64, k0: f64, d_tau: f64, periodic: bool) -> Result<WavePacket, String> {
        if !(sigma > 0.0) {
            return Err(format!("sigma must be positive, got {sigma}"));
        }
        let (_, chart) = koch_chart(level)?;
        let center = 0.5 * chart.span();
        let psi = gaussian_packet(chart.clone(), center, sigma * chart.span(), k0, PhysicalConstants::default());
        let boundary = if periodic { Boundary::Periodic } else { Boundary::Dirichlet };
        let evolver = Evolver::new(&psi, None, d_tau, boundary, None).map_err(|e| e.to_string())?;
        Ok(WavePacket { evolver, chart })
    }
}

#[wasm_bindgen]
impl WavePacket {
    /// `sigma` is a fraction of the staircase span.
    #[wasm_bindgen(constructor)]
    pub fn new(level: u32, sigma: f64, k0: f64, d_tau: f64, periodic: bool) -> Result<WavePacket, JsError> {
        Self::create(level, sigma, k0, d_tau, periodic).map_err(|e| JsError::new(&e))
    }

    pub fn advance(&mut self, steps: u32) -> Result<(), JsError> {
        self.evolver.advance(steps as usize).map_err(|e| JsError::new(&e.to_string()))
    }

    pub fn tau(&self) -> f64 {
        self.evolver.tau()
    }

    /// `|ψ|²` at the curve nodes.
    pub fn density(&self) -> Vec<f64> {
        self.evolver.state().map(|s| s.values().iter().map(|z| z.norm_sqr()).collect()).unwrap_or_default()
    }

    pub fn staircase(&self) -> Vec<f64> {
        self.chart.values().to_vec()
    }

    #[wasm_bindgen(js_name = totalProbability)]
    pub fn total_probability(&self) -> f64 {
        self.evolver.state().map(|s| total_probability(&s)).unwrap_or(f64::NAN)
    }
}
