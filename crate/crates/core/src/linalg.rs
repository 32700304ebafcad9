//! Small dense solvers for the polynomial fits. Matrices are row-major.

use alloc::vec::Vec;

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
/// `b` receives the solution. Returns `None` for a (numerically) singular `a`.
pub(crate) fn solve_in_place(a: &mut [f64], b: &mut [f64], n: usize) -> Option<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert_eq!(b.len(), n);
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .unwrap_or(col);
        if a[pivot * n + col].abs() <= scale * 1e-14 {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            b.swap(pivot, col);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    Some(())
}

/// Least-squares solution of `design * x ~= rhs` through Householder QR.
/// `design` is `rows x cols` with `rows >= cols`. Returns `None` when the
/// design is rank deficient.
pub(crate) fn lstsq(design: &[f64], rows: usize, cols: usize, rhs: &[f64]) -> Option<Vec<f64>> {
    debug_assert_eq!(design.len(), rows * cols);
    debug_assert_eq!(rhs.len(), rows);
    if rows < cols {
        return None;
    }
    let mut a = design.to_vec();
    let mut y = rhs.to_vec();
    let col_norm_max = (0..cols)
        .map(|c| libm::sqrt((0..rows).map(|r| a[r * cols + c] * a[r * cols + c]).sum::<f64>()))
        .fold(0.0f64, f64::max);
    if col_norm_max == 0.0 {
        return None;
    }
    let mut diag = Vec::with_capacity(cols);
    for k in 0..cols {
        let norm = libm::sqrt((k..rows).map(|r| a[r * cols + k] * a[r * cols + k]).sum::<f64>());
        if norm <= col_norm_max * 1e-12 {
            return None;
        }
        let alpha = if a[k * cols + k] > 0.0 { -norm } else { norm };
        // v = x - alpha e1, stored over column k.
        a[k * cols + k] -= alpha;
        let vnorm_sq: f64 = (k..rows).map(|r| a[r * cols + k] * a[r * cols + k]).sum();
        if vnorm_sq > 0.0 {
            for c in k + 1..cols {
                let dot: f64 = (k..rows).map(|r| a[r * cols + k] * a[r * cols + c]).sum();
                let f = 2.0 * dot / vnorm_sq;
                for r in k..rows {
                    a[r * cols + c] -= f * a[r * cols + k];
                }
            }
            let dot: f64 = (k..rows).map(|r| a[r * cols + k] * y[r]).sum();
            let f = 2.0 * dot / vnorm_sq;
            for r in k..rows {
                y[r] -= f * a[r * cols + k];
            }
        }
        diag.push(alpha);
    }
    let mut x = alloc::vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut s = y[k];
        for c in k + 1..cols {
            s -= a[k * cols + c] * x[c];
        }
        x[k] = s / diag[k];
    }
    Some(x)
}
