//! γ-pre-measure, γ-dimension and staircase charts.
//!
//! The infimum over partitions is realized by the finest node-aligned
//! partition of a grid, and the mesh limit by comparing successive
//! refinement levels.

use serde::Serialize;

use crate::curve::{norm, sub, CurveGrid, Point3};
use crate::error::{Error, Result};
use crate::special::gamma;

/// Slopes of `log γ` per level below this magnitude count as flat.
pub const FLAT_SLOPE: f64 = 1e-9;

/// Default distance within which a point snaps to a curve node.
pub const DEFAULT_SNAP_TOL: f64 = 1e-9;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("exponent must be positive, got {alpha}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PreMeasureResult {
    pub alpha: f64,
    pub level: u32,
    pub value: f64,
    /// Largest parameter gap of the partition used.
    pub mesh: f64,
}

/// `|w(v_{i+1}) − w(v_i)|^α / Γ(α+1)` for every segment; gap segments weigh 0.
pub fn segment_masses(grid: &CurveGrid, alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let g = gamma(alpha + 1.0);
    Ok((0..grid.len() - 1).map(|i| if grid.is_gap(i) { 0.0 } else { grid.chord(i).powf(alpha) / g }).collect())
}

/// Sum of chord masses between nodes `i < j`, splitting the chord wherever
/// the span crosses a gap segment.
fn span_mass(grid: &CurveGrid, i: usize, j: usize, alpha: f64) -> f64 {
    let pts = grid.points();
    let chord = |a: usize, b: usize| norm(sub(pts[b], pts[a])).powf(alpha);
    let mut total = 0.0;
    let mut run_start = i;
    for k in i..j {
        if grid.is_gap(k) {
            if run_start < k {
                total += chord(run_start, k);
            }
            run_start = k + 1;
        }
    }
    if run_start < j {
        total += chord(run_start, j);
    }
    total
}

/// γ-pre-measure of the whole grid over a node subdivision (all nodes when `None`).
pub fn gamma_premeasure(grid: &CurveGrid, alpha: f64, subdivision: Option<&[usize]>) -> Result<PreMeasureResult> {
    check_alpha(alpha)?;
    let params = grid.params();
    let (value, mesh) = match subdivision {
        None => {
            let value = segment_masses(grid, alpha)?.iter().sum();
            let mesh = params.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            (value, mesh)
        }
        Some(idx) => {
            let last = grid.len() - 1;
            if idx.len() < 2 || idx[0] != 0 || idx[idx.len() - 1] != last {
                return Err(Error::Domain("subdivision must start at the first node and end at the last".into()));
            }
            if idx.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Domain("subdivision indices must increase".into()));
            }
            let g = gamma(alpha + 1.0);
            let value = idx.windows(2).map(|w| span_mass(grid, w[0], w[1], alpha)).sum::<f64>() / g;
            let mesh = idx.windows(2).map(|w| params[w[1]] - params[w[0]]).fold(0.0, f64::max);
            (value, mesh)
        }
    };
    Ok(PreMeasureResult { alpha, level: grid.level(), value, mesh })
}

/// Monotone staircase chart `S(v)` tabulated at grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Staircase {
    alpha: f64,
    params: Vec<f64>,
    values: Vec<f64>,
    p0: f64,
}

impl Staircase {
    /// Builds a staircase from tabulated knots, checking monotonicity.
    pub fn from_knots(alpha: f64, params: Vec<f64>, values: Vec<f64>, p0: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if params.len() != values.len() || params.len() < 2 {
            return Err(Error::Mismatch(format!("{} parameters for {} staircase values", params.len(), values.len())));
        }
        if params.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("staircase parameters must increase".into()));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Domain(format!("staircase decreases after knot {i}")));
        }
        Ok(Self { alpha, params, values, p0 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `S(b₀) − S(a₀)`.
    pub fn span(&self) -> f64 {
        self.values[self.len() - 1] - self.values[0]
    }

    /// Index of the first zero increment, if any.
    pub fn first_plateau(&self) -> Option<usize> {
        self.values.windows(2).position(|w| w[1] <= w[0])
    }

    /// `S(v)` by linear interpolation between knots; clamped outside the domain.
    pub fn value_at(&self, v: f64) -> f64 {
        let n = self.len();
        if v <= self.params[0] {
            return self.values[0];
        }
        if v >= self.params[n - 1] {
            return self.values[n - 1];
        }
        let i = self.params.partition_point(|&p| p <= v);
        let (p0, p1) = (self.params[i - 1], self.params[i]);
        let t = (v - p0) / (p1 - p0);
        self.values[i - 1] + t * (self.values[i] - self.values[i - 1])
    }

    /// Left inverse of `S`: on a plateau the leftmost parameter is returned.
    pub fn inverse(&self, s: f64) -> f64 {
        let n = self.len();
        let i = self.values.partition_point(|&x| x < s);
        if i == 0 {
            return self.params[0];
        }
        if i == n {
            return self.params[n - 1];
        }
        let (s0, s1) = (self.values[i - 1], self.values[i]);
        let t = (s - s0) / (s1 - s0);
        self.params[i - 1] + t * (self.params[i] - self.params[i - 1])
    }
}

/// Staircase of order `alpha` based at `p0`: signed cumulative pre-measure.
pub fn build_staircase(grid: &CurveGrid, alpha: f64, p0: f64) -> Result<Staircase> {
    let masses = segment_masses(grid, alpha)?;
    let (a, b) = grid.domain();
    if !(p0 >= a && p0 <= b) {
        return Err(Error::Domain(format!("base point {p0} outside [{a}, {b}]")));
    }
    let mut cumulative = Vec::with_capacity(grid.len());
    cumulative.push(0.0);
    let mut acc = 0.0;
    for m in &masses {
        acc += m;
        cumulative.push(acc);
    }
    let params = grid.params().to_vec();
    let base = match grid.node_at_param(p0) {
        Some(i) => cumulative[i],
        None => {
            let i = params.partition_point(|&p| p <= p0);
            let t = (p0 - params[i - 1]) / (params[i] - params[i - 1]);
            cumulative[i - 1] + t * masses[i - 1]
        }
    };
    let values = cumulative.into_iter().map(|c| c - base).collect();
    Staircase::from_knots(alpha, params, values, p0)
}

/// Point staircase `J(θ) = S(w⁻¹(θ))`, inverting `w` on the nearest node.
pub fn j_of_point(stair: &Staircase, grid: &CurveGrid, theta: Point3, snap_tol: f64) -> Result<f64> {
    if stair.len() != grid.len() {
        return Err(Error::Mismatch(format!("staircase has {} knots, grid has {} nodes", stair.len(), grid.len())));
    }
    let (i, dist) = grid.nearest_node(theta);
    if dist > snap_tol {
        return Err(Error::NotOnCurve { point: theta, tol: snap_tol });
    }
    Ok(stair.values()[i])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub alpha_star: f64,
    pub bracket: (f64, f64),
    pub levels_used: Vec<u32>,
    /// Least-squares slope of `log γ^α_L` against `L` at `alpha_star`.
    pub slope_at_alpha: f64,
    /// Per-level growth `Δ log γ / Δ L` at `alpha_star`.
    pub slopes_per_level: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Growth {
    Diverging,
    Vanishing,
    Flat,
}

/// Precomputed chord lengths for repeated evaluation at many exponents.
struct LevelChords {
    level: f64,
    chords: Vec<f64>,
}

impl LevelChords {
    fn log_premeasure(&self, alpha: f64) -> f64 {
        let sum: f64 = self.chords.iter().map(|c| c.powf(alpha)).sum();
        sum.ln() - gamma(alpha + 1.0).ln()
    }
}

fn level_slopes(levels: &[LevelChords], alpha: f64) -> Vec<f64> {
    let logs: Vec<f64> = levels.iter().map(|l| l.log_premeasure(alpha)).collect();
    logs.windows(2).zip(levels.windows(2)).map(|(y, l)| (y[1] - y[0]) / (l[1].level - l[0].level)).collect()
}

fn least_squares_slope(levels: &[LevelChords], alpha: f64) -> f64 {
    let n = levels.len() as f64;
    let xs: Vec<f64> = levels.iter().map(|l| l.level).collect();
    let ys: Vec<f64> = levels.iter().map(|l| l.log_premeasure(alpha)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn classify(levels: &[LevelChords], alpha: f64) -> Result<Growth> {
    let slopes = level_slopes(levels, alpha);
    let up = slopes.iter().any(|&s| s > FLAT_SLOPE);
    let down = slopes.iter().any(|&s| s < -FLAT_SLOPE);
    match (up, down) {
        (true, false) => Ok(Growth::Diverging),
        (false, true) => Ok(Growth::Vanishing),
        (false, false) => Ok(Growth::Flat),
        (true, true) => Err(Error::Estimation {
            reason: format!("pre-measure is not monotone across levels at α = {alpha}"),
            slopes,
        }),
    }
}

/// Default search interval for the γ-dimension of a curve in R³.
pub const DEFAULT_BRACKET: (f64, f64) = (1e-3, 4.0);

/// Bisection for the exponent where the per-level pre-measure switches from
/// growing to vanishing.
pub fn estimate_gamma_dimension(grids: &[CurveGrid], tol: f64) -> Result<DimensionEstimate> {
    estimate_gamma_dimension_in(grids, tol, DEFAULT_BRACKET)
}

pub fn estimate_gamma_dimension_in(grids: &[CurveGrid], tol: f64, bracket: (f64, f64)) -> Result<DimensionEstimate> {
    if grids.len() < 3 {
        return Err(Error::Domain(format!("need at least 3 refinement levels, got {}", grids.len())));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if grids.windows(2).any(|w| w[1].level() <= w[0].level()) {
        return Err(Error::Domain("grid levels must strictly increase".into()));
    }
    let (mut lo, mut hi) = bracket;
    check_alpha(lo)?;
    if !(hi > lo) {
        return Err(Error::Domain(format!("empty search bracket ({lo}, {hi})")));
    }
    let levels: Vec<LevelChords> = grids
        .iter()
        .map(|g| LevelChords {
            level: f64::from(g.level()),
            chords: (0..g.len() - 1).filter(|&i| !g.is_gap(i)).map(|i| g.chord(i)).collect(),
        })
        .collect();

    if classify(&levels, lo)? != Growth::Diverging || classify(&levels, hi)? != Growth::Vanishing {
        return Err(Error::Estimation {
            reason: format!("dimension not bracketed by ({lo}, {hi})"),
            slopes: level_slopes(&levels, 0.5 * (lo + hi)),
        });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match classify(&levels, mid)? {
            Growth::Diverging => lo = mid,
            Growth::Vanishing => hi = mid,
            Growth::Flat => {
                lo = mid;
                hi = mid;
            }
        }
    }
    let alpha_star = 0.5 * (lo + hi);
    Ok(DimensionEstimate {
        alpha_star,
        bracket: (lo, hi),
        levels_used: grids.iter().map(CurveGrid::level).collect(),
        slope_at_alpha: least_squares_slope(&levels, alpha_star),
        slopes_per_level: level_slopes(&levels, alpha_star),
    })
}
