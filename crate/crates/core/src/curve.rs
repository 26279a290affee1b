//! Sampled fractal curves in R³ and Cantor-like time sets.
//!
//! Curves are built at a finite refinement level from an ordered list of
//! affine maps acting on the unit segment `[(0,0,0), (1,0,0)]`. Nodes are
//! addressed uniformly in generator index: node `i` of a level-`L` curve
//! with `g` maps sits at parameter `i / g^L`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measure::{build_staircase, Staircase};

/// Default cap on the refinement level of generator curves.
pub const DEFAULT_LEVEL_CAP: u32 = 10;

pub type Point3 = [f64; 3];

pub(crate) fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn norm(a: Point3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Similarity map `x ↦ scale · R x + t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub scale: f64,
    pub rotation: [[f64; 3]; 3],
    pub translation: Point3,
}

impl AffineMap {
    pub fn new(scale: f64, rotation: [[f64; 3]; 3], translation: Point3) -> Self {
        Self { scale, rotation, translation }
    }

    /// Map whose rotation turns the x-y plane by `angle` radians about z.
    pub fn planar(scale: f64, angle: f64, translation: Point3) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(scale, [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]], translation)
    }

    pub fn apply(&self, p: Point3) -> Point3 {
        let r = &self.rotation;
        let mut out = [0.0; 3];
        for (row, o) in r.iter().zip(out.iter_mut()) {
            *o = self.scale * (row[0] * p[0] + row[1] * p[1] + row[2] * p[2]);
        }
        [out[0] + self.translation[0], out[1] + self.translation[1], out[2] + self.translation[2]]
    }
}

/// Ordered affine maps replacing the unit segment.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    segments: Vec<AffineMap>,
}

impl GeneratorSpec {
    /// Validates scale factors and that consecutive images share endpoints.
    pub fn new(segments: Vec<AffineMap>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::Domain("generator needs at least one map".into()));
        }
        for (i, m) in segments.iter().enumerate() {
            if !(m.scale > 0.0 && m.scale < 1.0) {
                return Err(Error::Domain(format!("map {i} has scale {} outside (0, 1)", m.scale)));
            }
        }
        for (i, pair) in segments.windows(2).enumerate() {
            let end = pair[0].apply([1.0, 0.0, 0.0]);
            let start = pair[1].apply([0.0, 0.0, 0.0]);
            if norm(sub(end, start)) > 1e-12 {
                return Err(Error::DegenerateCurve(format!(
                    "images of maps {i} and {} do not share an endpoint",
                    i + 1
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[AffineMap] {
        &self.segments
    }

    /// The von Koch generator: four maps of ratio 1/3 in the z = 0 plane.
    pub fn koch() -> Self {
        let third = 1.0 / 3.0;
        let h = 3f64.sqrt() / 6.0;
        Self {
            segments: vec![
                AffineMap::planar(third, 0.0, [0.0, 0.0, 0.0]),
                AffineMap::planar(third, PI / 3.0, [third, 0.0, 0.0]),
                AffineMap::planar(third, -PI / 3.0, [0.5, h, 0.0]),
                AffineMap::planar(third, 0.0, [2.0 * third, 0.0, 0.0]),
            ],
        }
    }

    /// The unit segment split into two halves (a rectifiable generator).
    pub fn halving_line() -> Self {
        Self {
            segments: vec![AffineMap::planar(0.5, 0.0, [0.0, 0.0, 0.0]), AffineMap::planar(0.5, 0.0, [0.5, 0.0, 0.0])],
        }
    }

    /// Similarity dimension `s` solving `Σ rᵢ^s = 1`.
    pub fn similarity_dimension(&self) -> f64 {
        let f = |s: f64| self.segments.iter().map(|m| m.scale.powf(s)).sum::<f64>() - 1.0;
        let (mut lo, mut hi) = (0.0, 16.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// A curve sampled at a finite refinement level.
///
/// Segments flagged as gaps join disconnected pieces of a set (Cantor dust);
/// they are not part of the set and carry no mass.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGrid {
    params: Vec<f64>,
    points: Vec<Point3>,
    gaps: Vec<bool>,
    level: u32,
}

impl CurveGrid {
    /// Builds a grid from raw nodes, checking the node invariants.
    pub fn from_nodes(params: Vec<f64>, points: Vec<Point3>, level: u32) -> Result<Self> {
        let gaps = vec![false; params.len().saturating_sub(1)];
        Self::with_gaps(params, points, gaps, level)
    }

    pub(crate) fn with_gaps(params: Vec<f64>, points: Vec<Point3>, gaps: Vec<bool>, level: u32) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::Mismatch(format!("{} parameters for {} points", params.len(), points.len())));
        }
        if params.len() < 2 {
            return Err(Error::DegenerateCurve("a curve needs at least two nodes".into()));
        }
        for i in 0..params.len() - 1 {
            if !(params[i + 1] > params[i]) {
                return Err(Error::DegenerateCurve(format!("parameters not strictly increasing at node {i}")));
            }
            if norm(sub(points[i + 1], points[i])) == 0.0 {
                return Err(Error::DegenerateCurve(format!("nodes {i} and {} coincide", i + 1)));
            }
        }
        Ok(Self { params, points, gaps, level })
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    /// Closed parameter interval `[a₀, b₀]`.
    pub fn domain(&self) -> (f64, f64) {
        (self.params[0], self.params[self.params.len() - 1])
    }

    pub fn is_gap(&self, segment: usize) -> bool {
        self.gaps[segment]
    }

    pub fn has_gaps(&self) -> bool {
        self.gaps.iter().any(|&g| g)
    }

    /// Euclidean length of segment `i` (between nodes `i` and `i + 1`).
    pub fn chord(&self, i: usize) -> f64 {
        norm(sub(self.points[i + 1], self.points[i]))
    }

    /// Sum of the non-gap chord lengths.
    pub fn chord_length(&self) -> f64 {
        (0..self.len() - 1).filter(|&i| !self.gaps[i]).map(|i| self.chord(i)).sum()
    }

    /// Copy with every point multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let points = self.points.iter().map(|p| [p[0] * factor, p[1] * factor, p[2] * factor]).collect();
        Self::with_gaps(self.params.clone(), points, self.gaps.clone(), self.level)
    }

    /// Index of the node nearest to `theta` and its distance.
    pub fn nearest_node(&self, theta: Point3) -> (usize, f64) {
        self.points.iter().enumerate().map(|(i, &p)| (i, norm(sub(p, theta)))).fold((0, f64::INFINITY), |best, cur| {
            if cur.1 < best.1 {
                cur
            } else {
                best
            }
        })
    }

    /// Index of the node whose parameter equals `v` up to a relative tolerance.
    pub fn node_at_param(&self, v: f64) -> Option<usize> {
        let (a, b) = self.domain();
        let tol = 1e-10 * (b - a).abs().max(1.0);
        let i = self.params.partition_point(|&p| p < v - tol);
        (i < self.len() && (self.params[i] - v).abs() <= tol).then_some(i)
    }

    /// Unit chord tangents: normalized `w(i+1) − w(i−1)`, one-sided at the ends.
    pub fn tangents(&self) -> Vec<Point3> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(n - 1);
                let d = sub(self.points[hi], self.points[lo]);
                let len = norm(d);
                [d[0] / len, d[1] / len, d[2] / len]
            })
            .collect()
    }
}

fn check_level(level: u32, cap: u32) -> Result<()> {
    if level > cap {
        Err(Error::ResourceLimit { level, cap })
    } else {
        Ok(())
    }
}

/// Iterates `spec` `level` times on the unit segment with an explicit level cap.
pub fn build_from_generator_capped(spec: &GeneratorSpec, level: u32, cap: u32) -> Result<CurveGrid> {
    check_level(level, cap)?;
    let mut points: Vec<Point3> = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]];
    for _ in 0..level {
        let mut next = Vec::with_capacity(spec.segments.len() * (points.len() - 1) + 1);
        for (j, map) in spec.segments.iter().enumerate() {
            let skip = usize::from(j > 0);
            next.extend(points.iter().skip(skip).map(|&p| map.apply(p)));
        }
        points = next;
    }
    let segments = (points.len() - 1) as f64;
    let params = (0..points.len()).map(|i| i as f64 / segments).collect();
    CurveGrid::from_nodes(params, points, level)
}

pub fn build_from_generator(spec: &GeneratorSpec, level: u32) -> Result<CurveGrid> {
    build_from_generator_capped(spec, level, DEFAULT_LEVEL_CAP)
}

/// Koch curve on the unit segment in the z = 0 plane, `4^level + 1` nodes.
pub fn build_koch(level: u32) -> Result<CurveGrid> {
    build_from_generator(&GeneratorSpec::koch(), level)
}

/// `n + 1` equally spaced nodes from `a` to `b`, parameterized on `[0, 1]`.
pub fn build_line(a: Point3, b: Point3, n: usize) -> Result<CurveGrid> {
    if n == 0 {
        return Err(Error::Domain("a line needs at least one segment".into()));
    }
    if norm(sub(b, a)) == 0.0 {
        return Err(Error::DegenerateCurve("line endpoints coincide".into()));
    }
    let params: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let points = params
        .iter()
        .map(|&t| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])])
        .collect();
    CurveGrid::from_nodes(params, points, 0)
}

/// Line from `a` to `b` with `2^level` segments, tagged with `level`.
pub fn build_dyadic_line(a: Point3, b: Point3, level: u32) -> Result<CurveGrid> {
    check_level(level, 2 * DEFAULT_LEVEL_CAP)?;
    let mut grid = build_line(a, b, 1usize << level)?;
    grid.level = level;
    Ok(grid)
}

/// Left endpoints of the `2^level` kept middle-thirds intervals of `[0, 1]`,
/// as exact integers over `3^level`.
fn cantor_left_numerators(level: u32) -> Vec<u64> {
    (0..1u64 << level)
        .map(|j| {
            (0..level).fold(0u64, |acc, bit| {
                let digit = (j >> (level - 1 - bit)) & 1;
                3 * acc + 2 * digit
            })
        })
        .collect()
}

/// Middle-thirds Cantor set on the x-axis of length `length` as a polyline
/// through the endpoints of the kept intervals; the joins across removed
/// gaps are flagged and carry no mass. Parameter = x coordinate.
pub fn build_cantor_dust(level: u32, length: f64) -> Result<CurveGrid> {
    check_level(level, 2 * DEFAULT_LEVEL_CAP)?;
    if !(length > 0.0) {
        return Err(Error::Domain(format!("length must be positive, got {length}")));
    }
    let denom = 3f64.powi(level as i32);
    let mut params = Vec::with_capacity(2 << level);
    for num in cantor_left_numerators(level) {
        params.push(length * num as f64 / denom);
        params.push(length * (num + 1) as f64 / denom);
    }
    // Odd segments cross a removed middle third.
    let gaps = (0..params.len() - 1).map(|s| s % 2 == 1).collect();
    let points = params.iter().map(|&x| [x, 0.0, 0.0]).collect();
    CurveGrid::with_gaps(params, points, gaps, level)
}

/// Temporal support: the kept intervals of a middle-thirds construction on
/// `[0, T]` together with the staircase chart `τ = S(t)`.
#[derive(Debug, Clone)]
pub struct TimeSet {
    level: u32,
    duration: f64,
    kept_intervals: Vec<(f64, f64)>,
    grid: CurveGrid,
    time_staircase: Staircase,
}

/// Exponent of the middle-thirds Cantor set, `log 2 / log 3`.
pub fn cantor_exponent() -> f64 {
    2f64.ln() / 3f64.ln()
}

/// Cantor-like time set; its chart is the devil's staircase of exponent
/// `log 2 / log 3` based at `t = 0`.
pub fn build_cantor_time(duration: f64, level: u32) -> Result<TimeSet> {
    if !(duration > 0.0) {
        return Err(Error::Domain(format!("duration must be positive, got {duration}")));
    }
    let grid = build_cantor_dust(level, duration)?;
    let kept_intervals = grid.params().chunks(2).map(|c| (c[0], c[1])).collect();
    let time_staircase = build_staircase(&grid, cantor_exponent(), 0.0)?;
    Ok(TimeSet { level, duration, kept_intervals, grid, time_staircase })
}

impl TimeSet {
    /// Ordinary time `[0, T]` with the identity chart (α = 1).
    pub fn full(duration: f64) -> Result<Self> {
        if !(duration > 0.0) {
            return Err(Error::Domain(format!("duration must be positive, got {duration}")));
        }
        let grid = CurveGrid::from_nodes(vec![0.0, duration], vec![[0.0, 0.0, 0.0], [duration, 0.0, 0.0]], 0)?;
        let time_staircase = build_staircase(&grid, 1.0, 0.0)?;
        Ok(Self { level: 0, duration, kept_intervals: vec![(0.0, duration)], grid, time_staircase })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn kept_intervals(&self) -> &[(f64, f64)] {
        &self.kept_intervals
    }

    pub fn time_staircase(&self) -> &Staircase {
        &self.time_staircase
    }

    pub fn grid(&self) -> &CurveGrid {
        &self.grid
    }

    pub fn kept_length(&self) -> f64 {
        self.kept_intervals.iter().map(|(a, b)| b - a).sum()
    }

    /// Characteristic function χ_F(t) of the kept intervals.
    pub fn indicator(&self, t: f64) -> bool {
        let i = self.kept_intervals.partition_point(|&(_, b)| b < t);
        i < self.kept_intervals.len() && self.kept_intervals[i].0 <= t
    }
}
