//! Discrete F^α-calculus in the staircase chart.
//!
//! Every operator differentiates or integrates with respect to `S`, the
//! staircase of the field's chart. Interior derivatives use central
//! differences, endpoints use second-order one-sided stencils, and integrals
//! use the trapezoid rule against the increments of `S`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use crate::curve::CurveGrid;
use crate::error::{Error, Result};
use crate::measure::Staircase;

/// Field values: real or complex.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
    + 'static
{
    fn zero() -> Self;
    fn modulus(self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// Samples `f(w(vᵢ))` at the knots of a staircase chart.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldOnCurve<T> {
    values: Vec<T>,
    chart: Arc<Staircase>,
}

impl<T: Scalar> FieldOnCurve<T> {
    pub fn new(chart: Arc<Staircase>, values: Vec<T>) -> Result<Self> {
        if values.len() != chart.len() {
            return Err(Error::Mismatch(format!("{} values for a chart with {} knots", values.len(), chart.len())));
        }
        Ok(Self { values, chart })
    }

    /// Tabulates `f(v, S(v))` at every knot.
    pub fn from_fn(chart: Arc<Staircase>, f: impl Fn(f64, f64) -> T) -> Self {
        let values = chart.params().iter().zip(chart.values()).map(|(&v, &s)| f(v, s)).collect();
        Self { values, chart }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn chart(&self) -> &Arc<Staircase> {
        &self.chart
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> FieldOnCurve<U> {
        FieldOnCurve { values: self.values.iter().map(|&x| f(x)).collect(), chart: self.chart.clone() }
    }

    /// Pointwise combination of two fields sharing a chart.
    pub fn zip_with<U: Scalar, R: Scalar>(
        &self,
        other: &FieldOnCurve<U>,
        f: impl Fn(T, U) -> R,
    ) -> Result<FieldOnCurve<R>> {
        check_aligned(&self.chart, &other.chart)?;
        Ok(FieldOnCurve {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            chart: self.chart.clone(),
        })
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|x| x.modulus()).fold(0.0, f64::max)
    }
}

pub(crate) fn check_aligned(a: &Staircase, b: &Staircase) -> Result<()> {
    if std::ptr::eq(a, b) || (a.params() == b.params() && a.values() == b.values()) {
        Ok(())
    } else {
        Err(Error::Mismatch("fields live on different charts".into()))
    }
}

/// Three components on one chart.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldOnCurve<T> {
    pub components: [FieldOnCurve<T>; 3],
}

impl<T: Scalar> VectorFieldOnCurve<T> {
    pub fn new(components: [FieldOnCurve<T>; 3]) -> Result<Self> {
        check_aligned(components[0].chart(), components[1].chart())?;
        check_aligned(components[0].chart(), components[2].chart())?;
        Ok(Self { components })
    }

    pub fn len(&self) -> usize {
        self.components[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.components[0].is_empty()
    }

    pub fn at(&self, i: usize) -> [T; 3] {
        [self.components[0].values[i], self.components[1].values[i], self.components[2].values[i]]
    }
}

/// Finite-difference weights for the `order`-th derivative at `x0` on the
/// nodes `xs` (Fornberg's recursion).
pub fn fd_weights(x0: f64, xs: &[f64], order: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

fn check_no_plateau(chart: &Staircase) -> Result<()> {
    match chart.first_plateau() {
        Some(index) => Err(Error::Plateau { index }),
        None => Ok(()),
    }
}

fn weighted<T: Scalar>(weights: &[f64], values: &[T]) -> T {
    weights.iter().zip(values).fold(T::zero(), |acc, (&w, &v)| acc + v * w)
}

/// Intrinsic derivative `df/dS`.
pub fn falpha_derivative<T: Scalar>(f: &FieldOnCurve<T>) -> Result<FieldOnCurve<T>> {
    let chart = f.chart();
    check_no_plateau(chart)?;
    let s = chart.values();
    let v = f.values();
    let n = v.len();
    let mut out = vec![T::zero(); n];
    if n == 2 {
        let d = (v[1] - v[0]) / (s[1] - s[0]);
        out = vec![d, d];
    } else {
        for i in 1..n - 1 {
            out[i] = (v[i + 1] - v[i - 1]) / (s[i + 1] - s[i - 1]);
        }
        out[0] = weighted(&fd_weights(s[0], &s[..3], 1), &v[..3]);
        out[n - 1] = weighted(&fd_weights(s[n - 1], &s[n - 3..], 1), &v[n - 3..]);
    }
    FieldOnCurve::new(chart.clone(), out)
}

/// Second intrinsic derivative `(d/dS)² f`.
pub fn laplacian<T: Scalar>(f: &FieldOnCurve<T>) -> Result<FieldOnCurve<T>> {
    let chart = f.chart();
    check_no_plateau(chart)?;
    let s = chart.values();
    let v = f.values();
    let n = v.len();
    if n < 3 {
        return Err(Error::Domain("the Laplacian needs at least three nodes".into()));
    }
    let mut out = vec![T::zero(); n];
    for i in 1..n - 1 {
        let hp = s[i + 1] - s[i];
        let hm = s[i] - s[i - 1];
        out[i] = ((v[i + 1] - v[i]) / hp - (v[i] - v[i - 1]) / hm) * (2.0 / (hp + hm));
    }
    let m = n.min(4);
    out[0] = weighted(&fd_weights(s[0], &s[..m], 2), &v[..m]);
    out[n - 1] = weighted(&fd_weights(s[n - 1], &s[n - m..], 2), &v[n - m..]);
    FieldOnCurve::new(chart.clone(), out)
}

/// Trapezoid sum of `f` against `dS` between node indices `i0 ≤ i1`.
pub fn integral_between<T: Scalar>(f: &FieldOnCurve<T>, i0: usize, i1: usize) -> T {
    let s = f.chart().values();
    let v = f.values();
    (i0..i1).fold(T::zero(), |acc, i| acc + (v[i] + v[i + 1]) * (0.5 * (s[i + 1] - s[i])))
}

/// F^α-integral of `f` over the curve segment between parameters `a ≤ b`,
/// both of which must be nodes.
pub fn falpha_integral<T: Scalar>(f: &FieldOnCurve<T>, a: f64, b: f64) -> Result<T> {
    if a > b {
        return Err(Error::Domain(format!("integration bounds out of order: {a} > {b}")));
    }
    let i0 = node_of(f.chart(), a)?;
    let i1 = node_of(f.chart(), b)?;
    Ok(integral_between(f, i0, i1))
}

fn node_of(chart: &Staircase, v: f64) -> Result<usize> {
    let p = chart.params();
    let tol = 1e-10 * (p[p.len() - 1] - p[0]).abs().max(1.0);
    let i = p.partition_point(|&x| x < v - tol);
    if i < p.len() && (p[i] - v).abs() <= tol {
        Ok(i)
    } else {
        Err(Error::Alignment { value: v })
    }
}

/// `g(vⱼ) = ∫_{C(a₀, vⱼ)} f dS` at every node.
pub fn cumulative_integral<T: Scalar>(f: &FieldOnCurve<T>) -> FieldOnCurve<T> {
    let s = f.chart().values();
    let v = f.values();
    let mut out = Vec::with_capacity(v.len());
    let mut acc = T::zero();
    out.push(acc);
    for i in 0..v.len() - 1 {
        acc = acc + (v[i] + v[i + 1]) * (0.5 * (s[i + 1] - s[i]));
        out.push(acc);
    }
    FieldOnCurve { values: out, chart: f.chart().clone() }
}

fn check_grid(chart: &Staircase, grid: &CurveGrid) -> Result<()> {
    if chart.params() != grid.params() {
        return Err(Error::Mismatch("chart knots are not the grid nodes".into()));
    }
    Ok(())
}

/// `(df/dS) t(v)` with `t` the unit chord tangent.
pub fn gradient<T: Scalar>(f: &FieldOnCurve<T>, grid: &CurveGrid) -> Result<VectorFieldOnCurve<T>> {
    check_grid(f.chart(), grid)?;
    let d = falpha_derivative(f)?;
    let tangents = grid.tangents();
    let component = |c: usize| FieldOnCurve {
        values: d.values.iter().zip(&tangents).map(|(&x, t)| x * t[c]).collect(),
        chart: f.chart().clone(),
    };
    Ok(VectorFieldOnCurve { components: [component(0), component(1), component(2)] })
}

/// Divergence along the curve: the intrinsic derivative of the tangential
/// component `f · t`.
pub fn divergence<T: Scalar>(vf: &VectorFieldOnCurve<T>, grid: &CurveGrid) -> Result<FieldOnCurve<T>> {
    let chart = vf.components[0].chart();
    check_grid(chart, grid)?;
    let tangents = grid.tangents();
    let tangential = (0..vf.len())
        .map(|i| {
            let f = vf.at(i);
            let t = tangents[i];
            f[0] * t[0] + f[1] * t[1] + f[2] * t[2]
        })
        .collect();
    falpha_derivative(&FieldOnCurve { values: tangential, chart: chart.clone() })
}

/// Truncated Taylor sum `Σ_{n ≤ order} ΔS^n / n! · derivs[n]`.
pub fn taylor_eval<T: Scalar>(derivs: &[T], delta_s: f64, order: usize) -> Result<T> {
    if derivs.len() < order + 1 {
        return Err(Error::Domain(format!("order {order} needs {} derivatives, got {}", order + 1, derivs.len())));
    }
    let mut term = 1.0;
    let mut acc = T::zero();
    for (n, &d) in derivs.iter().take(order + 1).enumerate() {
        if n > 0 {
            term *= delta_s / n as f64;
        }
        acc = acc + d * term;
    }
    Ok(acc)
}
