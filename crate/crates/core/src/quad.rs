//! Gauss–Legendre quadrature.
//!
//! Rules are generated at first use by Newton iteration on the Legendre
//! recurrence and cached. Data synthesis in [`crate::bench`] uses the 32-point
//! rule per smooth piece; error integrals and integral-defect checks use
//! composite/adaptive 16-point rules.

use std::f64::consts::PI;
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadError {
    #[error("adaptive quadrature did not reach tolerance {tol:e} on [{a}, {b}] (depth {depth})")]
    NonConvergence {
        a: f64,
        b: f64,
        tol: f64,
        depth: usize,
    },
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
///
/// Newton iteration on P_n with the Chebyshev-based initial guess; each root
/// converges in a handful of steps to full double precision. Weights are
/// 2 / ((1 - x^2) P_n'(x)^2).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    // P_n and P_n' at z via the Legendre recurrence.
    let eval = |z: f64| -> (f64, f64) {
        let mut p1 = 1.0;
        let mut p2 = 0.0;
        for j in 0..n {
            let p3 = p2;
            p2 = p1;
            p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
        }
        (p1, n as f64 * (z * p1 - p2) / (z * z - 1.0))
    };
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, pp) = eval(z);
            let dz = p / pp;
            z -= dz;
            if dz.abs() <= f64::EPSILON {
                break;
            }
        }
        // Weight from the derivative at the converged root; re-evaluating
        // here keeps the last Newton step out of the weight.
        let (_, pp) = eval(z);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Cached 16-point rule.
pub fn rule16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Cached 32-point rule.
pub fn rule32() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(32))
}

/// Single application of a rule to f on [a, b].
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rule: &(Vec<f64>, Vec<f64>),
) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (nodes, weights) = rule;
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        sum += w * f(mid + half * x);
    }
    half * sum
}

/// Adaptive 16-point integration of f on [a, b] to absolute tolerance `tol`.
///
/// Accepts a panel when the two-half refinement moves the value by less than
/// the panel's tolerance share, otherwise recurses on the halves.
pub fn integrate_adaptive<F: Fn(f64) -> f64 + Copy>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, QuadError> {
    fn recurse<F: Fn(f64) -> f64 + Copy>(
        f: F,
        a: f64,
        b: f64,
        tol: f64,
        coarse: f64,
        depth: usize,
    ) -> Result<f64, QuadError> {
        let mid = 0.5 * (a + b);
        let left = integrate(f, a, mid, rule16());
        let right = integrate(f, mid, b, rule16());
        let fine = left + right;
        // The halved tolerance cannot drop below the rounding floor of the
        // panel's own value, or refinement would chase noise forever.
        let slack = tol.max(4.0 * f64::EPSILON * fine.abs());
        if (fine - coarse).abs() <= slack || mid <= a || mid >= b {
            return Ok(fine);
        }
        if depth >= 48 {
            return Err(QuadError::NonConvergence { a, b, tol, depth });
        }
        Ok(recurse(f, a, mid, 0.5 * tol, left, depth + 1)?
            + recurse(f, mid, b, 0.5 * tol, right, depth + 1)?)
    }
    let coarse = integrate(f, a, b, rule16());
    recurse(f, a, b, tol, coarse, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_is_symmetric_and_normalized() {
        for n in [1, 2, 5, 16, 32, 33] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-14, "n={n}: weight sum {total}");
            for i in 0..n {
                assert!((x[i] + x[n - 1 - i]).abs() < 1e-15);
                assert!((w[i] - w[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rule_integrates_monomials_exactly() {
        // An n-point rule is exact through degree 2n-1; x^k on [-1,1] is
        // 0 for odd k and 2/(k+1) for even k.
        for n in [2, 8, 16, 32] {
            let rule = gauss_legendre(n);
            for k in 0..2 * n {
                let got = integrate(|x| x.powi(k as i32), -1.0, 1.0, &rule);
                let want = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k as f64 + 1.0)
                };
                assert!(
                    (got - want).abs() < 2e-14,
                    "n={n} k={k}: got {got}, want {want}"
                );
            }
        }
    }

    #[test]
    fn known_16_point_abscissa() {
        // Largest abscissa and its weight for n=16, from standard tables.
        let (x, w) = rule16();
        assert!((x[15] - 0.989_400_934_991_649_9).abs() < 1e-15);
        assert!((w[15] - 0.027_152_459_411_754_1).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // arctan'(x/eps) style peak: integral of eps/(x^2+eps^2) over [-1,1]
        // is 2*atan(1/eps).
        let eps = 1e-4_f64;
        let exact = 2.0 * (1.0 / eps).atan();
        let got = integrate_adaptive(|x| eps / (x * x + eps * eps), -1.0, 1.0, 1e-12).unwrap();
        assert!((got - exact).abs() < 1e-11, "got {got}, want {exact}");
    }

    #[test]
    fn adaptive_matches_plain_rule_on_smooth_integrand() {
        let exact = 2.0_f64.sin() - (-1.0_f64).sin();
        let got = integrate_adaptive(|x| x.cos(), -1.0, 2.0, 1e-13).unwrap();
        assert!((got - exact).abs() < 1e-12);
    }
}
