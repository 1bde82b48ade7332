//! Local polynomial fits to segment-integral data ("histopolation").
//!
//! For a window of k consecutive segments, the fit is the polynomial of
//! degree k−1 whose integral over each segment matches the given datum. With
//! chained segments the problem is uniquely solvable. The basis is Chebyshev
//! on the window — the k×k Gram matrix of basis-over-segment integrals stays
//! well conditioned where a monomial Vandermonde-style system would not — and
//! segment integrals of the basis come from the exact Chebyshev antiderivative
//! rather than quadrature.

use std::ops::Range;

use thiserror::Error;

use crate::grid::SegmentGrid;
use crate::linalg;

/// Per-segment fit residuals |∫p − datum| beyond this bound (scaled by
/// max(1, |datum|)) fail the fit; the solve then lost too much accuracy to
/// trust downstream error claims.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum HistopolyError {
    #[error("integration range [{u}, {v}] is not inside the basis window [{alpha}, {beta}]")]
    WindowViolation {
        u: f64,
        v: f64,
        alpha: f64,
        beta: f64,
    },
    #[error("Gram matrix is numerically singular (pivot {pivot:e} against norm {norm:e})")]
    SingularGram { pivot: f64, norm: f64 },
    #[error("fit residual {residual:e} on segment {segment} exceeds the bound {bound:e}")]
    ResidualTooLarge {
        segment: usize,
        residual: f64,
        bound: f64,
    },
}

/// Polynomial in the Chebyshev basis composed with the affine map that takes
/// its window [α, β] onto [−1, 1].
#[derive(Debug, Clone)]
pub struct ScaledChebyshevPoly {
    window: (f64, f64),
    coeffs: Vec<f64>,
}

impl ScaledChebyshevPoly {
    pub fn new(window: (f64, f64), coeffs: Vec<f64>) -> Self {
        assert!(
            window.0.is_finite() && window.1.is_finite() && window.1 > window.0,
            "window must be a proper interval"
        );
        assert!(
            !coeffs.is_empty() && coeffs.iter().all(|c| c.is_finite()),
            "coefficients must be nonempty and finite"
        );
        Self { window, coeffs }
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Pullback of x onto the reference interval [−1, 1].
    fn pull(&self, x: f64) -> f64 {
        let (a, b) = self.window;
        (2.0 * x - a - b) / (b - a)
    }

    /// Clenshaw evaluation; x need not lie inside the window.
    pub fn eval(&self, x: f64) -> f64 {
        let t = self.pull(x);
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.coeffs.iter().skip(1).rev() {
            let next = 2.0 * t * b1 - b2 + c;
            b2 = b1;
            b1 = next;
        }
        self.coeffs[0] + t * b1 - b2
    }

    /// ∫_u^v p dx via the exact Chebyshev antiderivative (valid for any finite
    /// u, v; polynomials extend past the window).
    pub fn integrate(&self, u: f64, v: f64) -> f64 {
        let jacobian = 0.5 * (self.window.1 - self.window.0);
        let tu = self.pull(u);
        let tv = self.pull(v);
        let mut total = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            total += c * (chebyshev_antiderivative(k, tv) - chebyshev_antiderivative(k, tu));
        }
        jacobian * total
    }
}

/// T_k(t) by the three-term recurrence.
fn chebyshev_t(k: usize, t: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = t;
    for _ in 1..k {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Antiderivative of T_k on the reference interval:
/// ∫T_0 = t, ∫T_1 = t²/2, and ∫T_k = T_{k+1}/(2(k+1)) − T_{k−1}/(2(k−1)).
fn chebyshev_antiderivative(k: usize, t: f64) -> f64 {
    match k {
        0 => t,
        1 => 0.5 * t * t,
        _ => {
            let kf = k as f64;
            0.5 * (chebyshev_t(k + 1, t) / (kf + 1.0) - chebyshev_t(k - 1, t) / (kf - 1.0))
        }
    }
}

/// ∫_u^v T_k(φ(x)) dx where φ maps [α, β] onto [−1, 1]. The range must lie
/// inside the window (up to rounding slack proportional to the window width).
pub fn basis_segment_integral(
    k: usize,
    window: (f64, f64),
    range: (f64, f64),
) -> Result<f64, HistopolyError> {
    let (alpha, beta) = window;
    let (u, v) = range;
    let tol = 1e-12 * (beta - alpha);
    // partial_cmp keeps NaN endpoints on the error path.
    if u.partial_cmp(&v) != Some(std::cmp::Ordering::Less) || u < alpha - tol || v > beta + tol {
        return Err(HistopolyError::WindowViolation { u, v, alpha, beta });
    }
    let jacobian = 0.5 * (beta - alpha);
    let pull = |x: f64| (2.0 * x - alpha - beta) / (beta - alpha);
    Ok(jacobian * (chebyshev_antiderivative(k, pull(v)) - chebyshev_antiderivative(k, pull(u))))
}

/// The polynomial matching the integral data of a window of segments.
#[derive(Debug, Clone)]
pub struct LocalHistopolant {
    /// Flattened covering index this fit belongs to.
    pub iota: usize,
    pub poly: ScaledChebyshevPoly,
    /// Contiguous segment indices the fit histopolates.
    pub segments: Range<usize>,
    /// Worst |∫p − datum| over the window's segments.
    pub residual: f64,
    /// ∞-norm condition estimate of the Gram system.
    pub gram_cond: f64,
}

/// Fits the degree-(k−1) polynomial whose segment integrals reproduce the
/// data of the k given segments. The basis window is the hull of the
/// segments.
pub fn fit_histopolant(
    grid: &SegmentGrid,
    segments: Range<usize>,
    iota: usize,
) -> Result<LocalHistopolant, HistopolyError> {
    assert!(
        !segments.is_empty() && segments.end <= grid.n_segments(),
        "segment window must be a nonempty range of grid segments"
    );
    let k = segments.len();
    let nodes = grid.nodes();
    let window = (nodes[segments.start], nodes[segments.end]);
    let data = &grid.data()[segments.clone()];

    let (coeffs, cond) = if k == 1 {
        // A single segment pins only the average value.
        (vec![data[0] / (window.1 - window.0)], 1.0)
    } else {
        let mut gram = vec![0.0; k * k];
        for (row, seg) in segments.clone().enumerate() {
            let range = grid.segment(seg);
            for col in 0..k {
                // The hull contains every window segment, so the checked
                // integral cannot fail here.
                gram[row * k + col] = basis_segment_integral(col, window, range)
                    .expect("segment lies inside its window hull");
            }
        }
        linalg::solve_with_cond(&gram, data).map_err(|s| HistopolyError::SingularGram {
            pivot: s.pivot,
            norm: s.norm,
        })?
    };

    let poly = ScaledChebyshevPoly::new(window, coeffs);
    let mut worst = 0.0f64;
    for (offset, seg) in segments.clone().enumerate() {
        let (u, v) = grid.segment(seg);
        let residual = (poly.integrate(u, v) - data[offset]).abs();
        let bound = RESIDUAL_TOL * data[offset].abs().max(1.0);
        if residual > bound {
            return Err(HistopolyError::ResidualTooLarge {
                segment: seg,
                residual,
                bound,
            });
        }
        worst = worst.max(residual);
    }
    let cond = if k == 1 { 1.0 } else { cond };
    Ok(LocalHistopolant {
        iota,
        poly,
        segments,
        residual: worst,
        gram_cond: cond,
    })
}
