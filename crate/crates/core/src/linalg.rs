use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense LU solve followed by one step of iterative refinement.
///
/// Returns the solution together with the relative residual
/// `‖b − A x‖∞ / (‖A‖∞ ‖x‖∞ + ‖b‖∞)`.
pub(crate) fn solve_refined(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let lu = a.clone().lu();
    let mut x = lu
        .solve(b)
        .ok_or_else(|| Error::Numerical("singular matrix in linear solve".into()))?;
    let r = b - a * &x;
    if let Some(dx) = lu.solve(&r) {
        x += dx;
    }
    let residual = relative_residual(a, &x, b);
    if !residual.is_finite() {
        return Err(Error::Numerical(format!(
            "linear solve produced a non-finite residual ({residual})"
        )));
    }
    Ok((x, residual))
}

pub(crate) fn relative_residual(a: &DMatrix<f64>, x: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let r = b - a * x;
    let denom = inf_norm_mat(a) * x.amax() + b.amax();
    if denom == 0.0 {
        r.amax()
    } else {
        r.amax() / denom
    }
}

pub(crate) fn inf_norm_mat(a: &DMatrix<f64>) -> f64 {
    a.row_iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `(I − t M) p = t u`.
pub(crate) fn solve_affine_fixed_point(
    m: &DMatrix<f64>,
    u: &DVector<f64>,
    t: f64,
) -> Result<(DVector<f64>, f64)> {
    let k = m.nrows();
    let lhs = DMatrix::identity(k, k) - m * t;
    solve_refined(&lhs, &(u * t))
}
