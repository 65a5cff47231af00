//! Lawson–Hanson non-negative least squares.

use nalgebra::{DMatrix, DVector};

const ACTIVE_TOL: f64 = 1e-13;

/// Minimizes `‖A x − b‖₂` subject to `x ≥ 0`.
pub(crate) fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let max_outer = 3 * n + 30;

    for _ in 0..max_outer {
        let gradient = a.tr_mul(&(b - a * &x));
        let entering = (0..n)
            .filter(|&j| !passive[j] && gradient[j] > ACTIVE_TOL)
            .max_by(|&i, &j| gradient[i].total_cmp(&gradient[j]));
        let Some(entering) = entering else { break };
        passive[entering] = true;

        for _ in 0..max_outer {
            let idx: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let z = restricted_lstsq(a, b, &idx);
            if z.iter().all(|&v| v > ACTIVE_TOL) {
                for (k, &j) in idx.iter().enumerate() {
                    x[j] = z[k];
                }
                break;
            }
            let mut step = f64::INFINITY;
            for (k, &j) in idx.iter().enumerate() {
                if z[k] <= ACTIVE_TOL {
                    let denom = x[j] - z[k];
                    if denom > 0.0 {
                        step = step.min(x[j] / denom);
                    }
                }
            }
            if !step.is_finite() {
                step = 0.0;
            }
            for (k, &j) in idx.iter().enumerate() {
                x[j] += step * (z[k] - x[j]);
                if x[j] <= ACTIVE_TOL {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            if passive.iter().all(|p| !p) {
                break;
            }
        }
        if !passive[entering] && x[entering] == 0.0 {
            // Numerically stuck on the entering column; the current iterate
            // is as good as this active-set pass gets.
            break;
        }
    }
    x
}

fn restricted_lstsq(a: &DMatrix<f64>, b: &DVector<f64>, columns: &[usize]) -> DVector<f64> {
    let sub = a.select_columns(columns);
    let svd = sub.svd(true, true);
    svd.solve(b, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(columns.len()))
}
