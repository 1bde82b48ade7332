//! Assembly and evaluation of the global blended approximant.
//!
//! The pipeline: partition the grid at the jumps, cover every jump-free
//! region with equal-length windows of at least d+1 segments, fit one local
//! histopolation polynomial per window, place Shepard nodes inside each
//! window, and blend
//!
//! ```text
//! Q(x) = Σ_ι W_{μ,ι}(x) · p_ι(x)
//! ```
//!
//! The weights form a smooth partition of unity, each localized around its
//! window, so Q is globally smooth, matches every local fit near its own
//! nodes, and never averages polynomials across a discontinuity (windows stop
//! at jump-hosting segments). Q is defined on all of [a,b] — including inside
//! jump-hosting segments, where it smoothly bridges the two sides; callers
//! that want continuity-region metrics restrict *measurement*, not the
//! operator.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::covering::{self, Covering, CoveringError};
use crate::grid::{ContinuityPartition, GridError, SegmentGrid};
use crate::histopoly::{fit_histopolant, HistopolyError, LocalHistopolant};
use crate::quad::{integrate_adaptive, QuadError};
use crate::shepard::{self, Placement, ShepardError, ShepardNodes};

/// Per-segment tolerance for the integral-defect quadrature.
pub const DEFECT_QUAD_TOL: f64 = 1e-11;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
    #[error(transparent)]
    Histopoly(#[from] HistopolyError),
    #[error(transparent)]
    Shepard(#[from] ShepardError),
    #[error("mu must be positive and finite, got {0}")]
    BadMu(f64),
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("evaluation point #{index} = {x} lies outside the domain [{a}, {b}]")]
    OutOfDomain {
        x: f64,
        index: usize,
        a: f64,
        b: f64,
    },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Knobs for [`QuasiHistopolant::build`].
///
/// `d` is the guaranteed minimum local polynomial degree, `k` the number of
/// Shepard nodes per window, `mu` the inverse-distance exponent. Leaving
/// `placement` unset picks interior-equispaced nodes when the covering
/// windows only touch in single points and the shared pool otherwise.
#[derive(Debug, Clone, Copy)]
pub struct BuildParams {
    pub d: usize,
    pub k: usize,
    pub mu: f64,
    pub placement: Option<Placement>,
}

impl Default for BuildParams {
    fn default() -> Self {
        BuildParams {
            d: 3,
            k: 10,
            mu: 4.0,
            placement: None,
        }
    }
}

/// What a build did and how well the local fits went.
#[derive(Debug, Clone, Serialize)]
pub struct BuildReport {
    pub d: usize,
    pub k: usize,
    pub mu: f64,
    pub placement: &'static str,
    /// Common covering interval length.
    pub radius: f64,
    /// Flattened covering count (number of local fits and node sets).
    pub m: usize,
    pub n_segments: usize,
    pub n_jumps: usize,
    /// Worst |∫p − datum| over all fits and their segments.
    pub max_residual: f64,
    /// Worst ∞-norm condition estimate among the local Gram systems.
    pub max_gram_cond: f64,
    pub warnings: Vec<String>,
}

/// The built approximant: immutable, cheap to evaluate, safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct QuasiHistopolant {
    grid: SegmentGrid,
    partition: ContinuityPartition,
    covering: Covering,
    locals: Vec<LocalHistopolant>,
    nodes: ShepardNodes,
    mu: f64,
    report: BuildReport,
}

impl QuasiHistopolant {
    /// Runs the full pipeline on integral data and jump locations.
    pub fn build(
        grid: SegmentGrid,
        jump_points: &[f64],
        params: &BuildParams,
    ) -> Result<Self, BuildError> {
        if !(params.mu > 0.0 && params.mu.is_finite()) {
            return Err(BuildError::BadMu(params.mu));
        }
        let partition = grid.partition_continuity(jump_points)?;
        let covering = covering::build_covering(&grid, &partition, params.d)?;

        let placement = params.placement.unwrap_or_else(|| {
            if has_wide_overlaps(&covering, grid.length_tol()) {
                Placement::SharedPool
            } else {
                Placement::InteriorEquispaced
            }
        });
        let nodes = shepard::place_nodes(&covering, params.k, placement)?;

        let mut locals = Vec::with_capacity(covering.len());
        let mut max_residual = 0.0f64;
        let mut max_gram_cond = 0.0f64;
        for (iota, interval) in covering.flat().iter().enumerate() {
            let segments = covering::segments_in(*interval, &grid);
            let local = fit_histopolant(&grid, segments, iota)?;
            max_residual = max_residual.max(local.residual);
            max_gram_cond = max_gram_cond.max(local.gram_cond);
            locals.push(local);
        }

        let mut warnings = Vec::new();
        if params.mu.fract() == 0.0 && (params.mu as u64) % 2 == 1 {
            warnings.push(format!(
                "mu = {} is odd: the weights lose derivatives at the nodes; even mu keeps the blend infinitely smooth",
                params.mu
            ));
        }

        let report = BuildReport {
            d: params.d,
            k: params.k,
            mu: params.mu,
            placement: placement.name(),
            radius: covering.radius(),
            m: covering.len(),
            n_segments: grid.n_segments(),
            n_jumps: partition.n_jumps(),
            max_residual,
            max_gram_cond,
            warnings,
        };

        Ok(QuasiHistopolant {
            grid,
            partition,
            covering,
            locals,
            nodes,
            mu: params.mu,
            report,
        })
    }

    pub fn grid(&self) -> &SegmentGrid {
        &self.grid
    }

    pub fn partition(&self) -> &ContinuityPartition {
        &self.partition
    }

    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn nodes(&self) -> &ShepardNodes {
        &self.nodes
    }

    pub fn locals(&self) -> &[LocalHistopolant] {
        &self.locals
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn report(&self) -> &BuildReport {
        &self.report
    }

    pub fn domain(&self) -> (f64, f64) {
        self.grid.domain()
    }

    fn in_domain(&self, x: f64) -> bool {
        let (a, b) = self.grid.domain();
        let tol = self.grid.length_tol();
        x.is_finite() && x >= a - tol && x <= b + tol
    }

    /// Blend value at one point; the weight buffer must hold M entries.
    ///
    /// Zero-weight terms are skipped: their local polynomials may be
    /// evaluated far outside their windows, and a large extrapolated value
    /// times an underflowed weight must not poison the sum.
    pub(crate) fn eval_with(&self, x: f64, wbuf: &mut [f64]) -> f64 {
        shepard::fill_weights(&self.nodes, self.mu, x, wbuf);
        let mut acc = 0.0;
        for (w, local) in wbuf.iter().zip(&self.locals) {
            if *w != 0.0 {
                acc += w * local.poly.eval(x);
            }
        }
        acc
    }

    /// Q(x) for x in the domain.
    pub fn evaluate(&self, x: f64) -> Result<f64, EvalError> {
        if !self.in_domain(x) {
            let (a, b) = self.grid.domain();
            return Err(EvalError::OutOfDomain { x, index: 0, a, b });
        }
        let mut wbuf = vec![0.0; self.locals.len()];
        Ok(self.eval_with(x, &mut wbuf))
    }

    /// Elementwise [`Self::evaluate`], parallelized across points. Results
    /// are bit-identical to the scalar loop and keep the input order.
    pub fn evaluate_many(&self, xs: &[f64]) -> Result<Vec<f64>, EvalError> {
        if let Some(index) = xs.iter().position(|&x| !self.in_domain(x)) {
            let (a, b) = self.grid.domain();
            return Err(EvalError::OutOfDomain {
                x: xs[index],
                index,
                a,
                b,
            });
        }
        let m = self.locals.len();
        Ok(xs
            .par_iter()
            .with_min_len(64)
            .map_init(|| vec![0.0; m], |wbuf, &x| self.eval_with(x, wbuf))
            .collect())
    }

    /// |∫_{s_i} Q − μ_i| per segment; `None` in jump-hosting segments, which
    /// carry no usable datum. Quantifies how far the blend is from exact
    /// histopolation (it reproduces the data only approximately).
    ///
    /// Each segment is integrated adaptively after splitting at the Shepard
    /// nodes it contains, where the weights bend hardest.
    pub fn integral_defect(&self) -> Result<Vec<Option<f64>>, EvalError> {
        let all_nodes = self.nodes.all_nodes_sorted();
        let wbuf = std::cell::RefCell::new(vec![0.0; self.locals.len()]);
        let integrand = |x: f64| self.eval_with(x, &mut wbuf.borrow_mut());
        let mut defects = Vec::with_capacity(self.grid.n_segments());
        for i in 0..self.grid.n_segments() {
            if self.partition.hosts_jump(i) {
                defects.push(None);
                continue;
            }
            let (u, v) = self.grid.segment(i);
            let mut cuts = vec![u];
            let lo = all_nodes.partition_point(|&t| t <= u);
            cuts.extend(all_nodes[lo..].iter().take_while(|&&t| t < v));
            cuts.push(v);
            let panels = cuts.len() - 1;
            let tol = DEFECT_QUAD_TOL / panels as f64;
            let mut total = 0.0;
            for w in cuts.windows(2) {
                total += integrate_adaptive(integrand, w[0], w[1], tol)?;
            }
            defects.push(Some((total - self.grid.data()[i]).abs()));
        }
        Ok(defects)
    }
}

/// True when any two covering intervals overlap in more than a single point.
fn has_wide_overlaps(covering: &Covering, tol: f64) -> bool {
    (0..covering.n_groups()).any(|l| {
        covering.flat()[covering.group(l)]
            .windows(2)
            .any(|w| w[0].b - w[1].a > tol)
    })
}
