//! Small dense linear solves for the Gram systems of local fits.
//!
//! Systems are k×k with k = segments per covering window (rarely above ~20),
//! so plain Gaussian elimination with partial pivoting is both adequate and
//! easy to audit. The factorization is reused to estimate the ∞-norm condition
//! number by solving for the k unit vectors.

/// A pivot fell below `RELATIVE_PIVOT_TOL`·‖A‖∞ during elimination.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Singular {
    pub pivot: f64,
    pub norm: f64,
}

/// Relative pivot threshold below which the matrix is treated as singular.
pub(crate) const RELATIVE_PIVOT_TOL: f64 = 1e-13;

/// In-place LU with partial pivoting; `a` is row-major k×k.
struct Lu {
    lu: Vec<f64>,
    perm: Vec<usize>,
    k: usize,
}

impl Lu {
    fn factor(a: &[f64], k: usize) -> Result<Self, Singular> {
        let norm = (0..k)
            .map(|i| a[i * k..(i + 1) * k].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..k).collect();
        for col in 0..k {
            let (pivot_row, pivot) = (col..k)
                .map(|r| (r, lu[r * k + col].abs()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .expect("nonempty column");
            if pivot < RELATIVE_PIVOT_TOL * norm.max(f64::MIN_POSITIVE) {
                return Err(Singular { pivot, norm });
            }
            if pivot_row != col {
                for c in 0..k {
                    lu.swap(col * k + c, pivot_row * k + c);
                }
                perm.swap(col, pivot_row);
            }
            let diag = lu[col * k + col];
            for r in col + 1..k {
                let factor = lu[r * k + col] / diag;
                lu[r * k + col] = factor;
                for c in col + 1..k {
                    lu[r * k + c] -= factor * lu[col * k + c];
                }
            }
        }
        Ok(Self { lu, perm, k })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let k = self.k;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for r in 1..k {
            for c in 0..r {
                x[r] -= self.lu[r * k + c] * x[c];
            }
        }
        for r in (0..k).rev() {
            for c in r + 1..k {
                x[r] -= self.lu[r * k + c] * x[c];
            }
            x[r] /= self.lu[r * k + r];
        }
        x
    }
}

/// Solves A x = b and returns (x, ∞-norm condition estimate ‖A‖·‖A⁻¹‖).
pub(crate) fn solve_with_cond(a: &[f64], b: &[f64]) -> Result<(Vec<f64>, f64), Singular> {
    let k = b.len();
    debug_assert_eq!(a.len(), k * k);
    let lu = Lu::factor(a, k)?;
    let x = lu.solve(b);
    let norm = (0..k)
        .map(|i| a[i * k..(i + 1) * k].iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    // ‖A⁻¹‖∞ from the explicit inverse, one unit-vector solve per column.
    let mut inv_row_sums = vec![0.0; k];
    let mut e = vec![0.0; k];
    for j in 0..k {
        e[j] = 1.0;
        let col = lu.solve(&e);
        e[j] = 0.0;
        for (sum, v) in inv_row_sums.iter_mut().zip(&col) {
            *sum += v.abs();
        }
    }
    let inv_norm = inv_row_sums.iter().fold(0.0f64, |m, &v| m.max(v));
    Ok((x, norm * inv_norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_known_system() {
        // [[2,1],[1,3]] x = [5,10] has x = [1,3].
        let a = [2.0, 1.0, 1.0, 3.0];
        let (x, cond) = solve_with_cond(&a, &[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 3.0).abs() < 1e-14);
        // cond_inf([[2,1],[1,3]]) = 4 * (4/5) = 3.2
        assert!((cond - 3.2).abs() < 1e-12);
    }

    #[test]
    fn pivots_rows_when_needed() {
        // Leading zero forces a swap.
        let a = [0.0, 1.0, 1.0, 0.0];
        let (x, _) = solve_with_cond(&a, &[2.0, 3.0]).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-14);
        assert!((x[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn reports_singularity() {
        let a = [1.0, 2.0, 2.0, 4.0];
        assert!(solve_with_cond(&a, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn random_residuals_are_small() {
        // Fixed linear congruential stream; checks A x ≈ b for 6x6 systems.
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for _ in 0..50 {
            let k = 6;
            let a: Vec<f64> = (0..k * k).map(|_| next()).collect();
            let b: Vec<f64> = (0..k).map(|_| next()).collect();
            // Singular draws are legitimate and simply skipped.
            if let Ok((x, _)) = solve_with_cond(&a, &b) {
                for i in 0..k {
                    let row: f64 = (0..k).map(|j| a[i * k + j] * x[j]).sum();
                    assert!((row - b[i]).abs() < 1e-9, "residual {}", row - b[i]);
                }
            }
        }
    }
}
