//! Tridiagonal solves for the implicit step.

use num_complex::Complex64;

use crate::error::{Error, Result};

const PIVOT_FLOOR: f64 = 1e-300;

/// Thomas algorithm. Row `i` reads `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`;
/// `sub[0]` and `sup[n-1]` are ignored.
pub(crate) fn solve_tridiagonal(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    let mut pivot = diag[0];
    if pivot.norm() < PIVOT_FLOOR {
        return Err(Error::Solver("zero pivot in row 0".into()));
    }
    c[0] = sup[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - sub[i] * c[i - 1];
        if pivot.norm() < PIVOT_FLOOR {
            return Err(Error::Solver(format!("zero pivot in row {i}")));
        }
        c[i] = if i + 1 < n { sup[i] / pivot } else { Complex64::new(0.0, 0.0) };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = d[i + 1];
        d[i] -= c[i] * next;
    }
    Ok(d)
}

/// Cyclic tridiagonal solve (Sherman–Morrison). `sub[0]` couples row 0 to
/// `x[n-1]` and `sup[n-1]` couples row `n-1` to `x[0]`.
pub(crate) fn solve_cyclic(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    if n < 3 {
        return Err(Error::Solver("cyclic system needs at least three unknowns".into()));
    }
    let beta = sub[0];
    let alpha = sup[n - 1];
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] = diag[0] - gamma;
    bb[n - 1] = diag[n - 1] - alpha * beta / gamma;
    let x = solve_tridiagonal(sub, &bb, sup, rhs)?;
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = solve_tridiagonal(sub, &bb, sup, &u)?;
    let fact = (x[0] + beta * x[n - 1] / gamma) / (Complex64::new(1.0, 0.0) + z[0] + beta * z[n - 1] / gamma);
    Ok(x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect())
}
