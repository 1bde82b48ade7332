//! Multinode inverse-distance weights over the covering intervals.
//!
//! Each covering interval ι gets a set C_ι of K nodes strictly inside it. The
//! weight of interval ι at x is
//!
//! ```text
//! W_ι(x) = Π_κ |x − ξ^ι_κ|^{−μ}  /  Σ_λ Π_κ |x − ξ^λ_κ|^{−μ}
//! ```
//!
//! a smooth partition of unity that equals 1 near "its" nodes and vanishes at
//! every node of a foreign set. Raw products underflow in double precision
//! (K = 20 factors of ~1e−3 at μ = 4), so evaluation happens in the log
//! domain with max-subtraction before exponentiating.
//!
//! Node placement offers two modes. `InteriorEquispaced` spreads each set
//! independently, which is the natural choice when covering intervals touch
//! in single points. `SharedPool` makes overlapping intervals share the exact
//! same nodes on their overlap — one global pool of points per jump-free
//! region, each set adopting the pool points inside its interval — which
//! removes the forced weight zeros (and the resulting oscillation) that
//! independent sets create inside overlaps.

use thiserror::Error;

use crate::covering::Covering;

/// Distances at or below this absolute guard count as node coincidence;
/// weights then degenerate to the indicator distribution over the sets owning
/// the node, realizing the cardinal limit exactly.
pub const NODE_COINCIDENCE_GUARD: f64 = 1e-300;

#[derive(Debug, Error)]
pub enum ShepardError {
    #[error("need at least 2 Shepard nodes per set, got {0}")]
    BadK(usize),
    #[error("could not give every node set exactly {k} shared-pool points (group {group}) after {rounds} densification rounds")]
    PoolUnderflow {
        k: usize,
        group: usize,
        rounds: usize,
    },
    #[error("gap index k = {k} must satisfy 1 <= k <= K-1 with K = {cap}")]
    BadIndex { k: usize, cap: usize },
}

/// Node placement strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    /// K equispaced points in the open interior of each covering interval,
    /// independently per interval.
    InteriorEquispaced,
    /// One shared pool of points per continuity interval; overlapping
    /// covering intervals hold identical nodes on their overlaps.
    SharedPool,
}

impl Placement {
    pub fn name(&self) -> &'static str {
        match self {
            Placement::InteriorEquispaced => "interior",
            Placement::SharedPool => "shared",
        }
    }
}

/// The per-interval node sets the weights are built from.
#[derive(Debug, Clone)]
pub struct ShepardNodes {
    sets: Vec<Vec<f64>>,
    k: usize,
    placement: Placement,
}

impl ShepardNodes {
    /// Node set of covering interval ι, sorted increasing.
    pub fn set(&self, iota: usize) -> &[f64] {
        &self.sets[iota]
    }

    pub fn sets(&self) -> &[Vec<f64>] {
        &self.sets
    }

    /// Number of sets (the flattened covering count M).
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Nodes per set.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    /// All nodes of all sets, sorted and deduplicated; error-integral panels
    /// split here because the blend turns fastest around the nodes.
    pub fn all_nodes_sorted(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.sets.iter().flatten().copied().collect();
        all.sort_unstable_by(f64::total_cmp);
        all.dedup();
        all
    }
}

/// Weights of all M sets at one point; nonnegative, summing to 1.
#[derive(Debug, Clone)]
pub struct WeightVector {
    pub at: f64,
    pub values: Vec<f64>,
}

/// Builds the node sets for a covering.
pub fn place_nodes(
    covering: &Covering,
    k: usize,
    placement: Placement,
) -> Result<ShepardNodes, ShepardError> {
    if k < 2 {
        return Err(ShepardError::BadK(k));
    }
    let sets = match placement {
        Placement::InteriorEquispaced => covering
            .flat()
            .iter()
            .map(|u| {
                (1..=k)
                    .map(|kappa| u.a + (u.b - u.a) * kappa as f64 / (k + 1) as f64)
                    .collect()
            })
            .collect(),
        Placement::SharedPool => {
            let mut sets = Vec::with_capacity(covering.len());
            for l in 0..covering.n_groups() {
                shared_pool_group(covering, l, k, &mut sets)?;
            }
            sets
        }
    };
    Ok(ShepardNodes { sets, k, placement })
}

/// Shared-pool placement for one continuity interval's covering group.
///
/// The group's interval endpoints cut its hull into open gaps; by
/// construction every gap lies wholly inside each interval it meets, so a
/// per-gap point budget gives overlapping intervals identical nodes on their
/// overlaps for free. Budgets start proportional to gap length
/// (largest-remainder rounding, minimum one point per gap) and are then
/// rebalanced to exactly k points per interval, adjusting gaps private to one
/// interval first and shared gaps only when a fully-overlapped interval
/// leaves no other choice. If rebalancing fails, the pool is densified and
/// retried; three failed rounds give up.
fn shared_pool_group(
    covering: &Covering,
    l: usize,
    k: usize,
    out: &mut Vec<Vec<f64>>,
) -> Result<(), ShepardError> {
    let group = covering.group(l);
    if group.is_empty() {
        return Ok(());
    }
    let intervals = &covering.flat()[group.clone()];

    // Distinct endpoints -> open gaps. The tolerance absorbs construction
    // rounding in interval endpoints that are nominally the same point.
    let scale = intervals
        .iter()
        .flat_map(|u| [u.a.abs(), u.b.abs()])
        .fold(covering.radius(), f64::max);
    let tol = 1e-12 * scale;
    let mut cuts: Vec<f64> = intervals.iter().flat_map(|u| [u.a, u.b]).collect();
    cuts.sort_unstable_by(f64::total_cmp);
    cuts.dedup_by(|b, a| (*b - *a).abs() <= tol);
    let gaps: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();

    // Gap membership per interval of the group (gap wholly inside interval).
    let members: Vec<Vec<usize>> = intervals
        .iter()
        .map(|u| {
            gaps.iter()
                .enumerate()
                .filter(|(_, g)| g.0 >= u.a - tol && g.1 <= u.b + tol)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let owners_of: Vec<usize> = (0..gaps.len())
        .map(|g| members.iter().filter(|m| m.contains(&g)).count())
        .collect();

    let total_len: f64 = gaps.iter().map(|g| g.1 - g.0).sum();
    let rounds = 3;
    let mut pool_target = k * intervals.len();
    for round in 0..=rounds {
        let mut counts = largest_remainder(&gaps, total_len, pool_target);
        if rebalance(&mut counts, &members, &owners_of, k) {
            for member in &members {
                let mut set = Vec::with_capacity(k);
                for &g in member {
                    let (ga, gb) = gaps[g];
                    let c = counts[g];
                    set.extend((1..=c).map(|kappa| ga + (gb - ga) * kappa as f64 / (c + 1) as f64));
                }
                debug_assert_eq!(set.len(), k);
                out.push(set);
            }
            return Ok(());
        }
        if round < rounds {
            pool_target *= 2;
        }
    }
    Err(ShepardError::PoolUnderflow {
        k,
        group: l,
        rounds,
    })
}

/// Proportional integer allocation with a floor of one point per gap.
fn largest_remainder(gaps: &[(f64, f64)], total_len: f64, target: usize) -> Vec<usize> {
    let quotas: Vec<f64> = gaps
        .iter()
        .map(|g| target as f64 * (g.1 - g.0) / total_len)
        .collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| (q.floor() as usize).max(1)).collect();
    let assigned: usize = counts.iter().sum();
    if assigned < target {
        let mut order: Vec<usize> = (0..gaps.len()).collect();
        order.sort_by(|&i, &j| {
            (quotas[j] - quotas[j].floor())
                .total_cmp(&(quotas[i] - quotas[i].floor()))
                .then(i.cmp(&j))
        });
        for g in order.into_iter().cycle().take(target - assigned) {
            counts[g] += 1;
        }
    }
    counts
}

/// Adjusts per-gap counts until every interval's member gaps sum to exactly k.
///
/// Intervals are revisited left to right; each correction moves one point.
/// Removals prefer the private gap with the most points, then shared gaps;
/// the floor of one point per gap is only broken when an interval spans more
/// gaps than it has points. Additions mirror this. Shared-gap changes
/// perturb sibling intervals, which later sweeps repair; the iteration cap
/// covers the non-convergent corner, reported as underflow upstream.
fn rebalance(counts: &mut [usize], members: &[Vec<usize>], owners_of: &[usize], k: usize) -> bool {
    let budget = 64 * members.len() + 64;
    for _ in 0..budget {
        let Some((_, member)) = members
            .iter()
            .enumerate()
            .find(|(_, m)| m.iter().map(|&g| counts[g]).sum::<usize>() != k)
        else {
            return true;
        };
        let have: usize = member.iter().map(|&g| counts[g]).sum();
        let private: Vec<usize> = member
            .iter()
            .copied()
            .filter(|&g| owners_of[g] == 1)
            .collect();
        if have > k {
            let floor = if member.len() > k { 0 } else { 1 };
            let pick = private
                .iter()
                .copied()
                .filter(|&g| counts[g] > floor)
                .max_by_key(|&g| counts[g])
                .or_else(|| {
                    member
                        .iter()
                        .copied()
                        .filter(|&g| counts[g] > floor)
                        .max_by_key(|&g| counts[g])
                });
            match pick {
                Some(g) => counts[g] -= 1,
                None => return false,
            }
        } else {
            let pick = private
                .iter()
                .copied()
                .min_by_key(|&g| counts[g])
                .or_else(|| member.iter().copied().min_by_key(|&g| counts[g]));
            match pick {
                Some(g) => counts[g] += 1,
                None => return false,
            }
        }
    }
    false
}

/// Weights of every set at x. Total on the real line; the node-coincidence
/// branch keeps it exact where the rational form is 0/0.
pub fn eval_weights(nodes: &ShepardNodes, mu: f64, x: f64) -> WeightVector {
    let mut values = vec![0.0; nodes.len()];
    fill_weights(nodes, mu, x, &mut values);
    WeightVector { at: x, values }
}

/// Allocation-free core of [`eval_weights`].
pub(crate) fn fill_weights(nodes: &ShepardNodes, mu: f64, x: f64, values: &mut [f64]) {
    debug_assert!(mu > 0.0 && mu.is_finite());
    debug_assert_eq!(values.len(), nodes.len());

    // Node coincidence: x belongs to one or more sets as an actual node; the
    // weight limit is uniform over exactly those sets.
    let mut coincident = 0usize;
    for (iota, set) in nodes.sets.iter().enumerate() {
        if set
            .iter()
            .any(|&xi| (x - xi).abs() <= NODE_COINCIDENCE_GUARD)
        {
            values[iota] = 1.0;
            coincident += 1;
        } else {
            values[iota] = 0.0;
        }
    }
    if coincident > 0 {
        for v in values.iter_mut() {
            *v /= coincident as f64;
        }
        return;
    }

    let mut max_log = f64::NEG_INFINITY;
    for (iota, set) in nodes.sets.iter().enumerate() {
        let log_prod: f64 = set.iter().map(|&xi| (x - xi).abs().ln()).sum();
        let l = -mu * log_prod;
        values[iota] = l;
        max_log = max_log.max(l);
    }
    let mut sum = 0.0;
    for v in values.iter_mut() {
        *v = (*v - max_log).exp();
        sum += *v;
    }
    for v in values.iter_mut() {
        *v /= sum;
    }
}

/// Upper bound on a foreign interval's weight across a gap.
///
/// Two-interval setting: intervals of common length r with `gap` between
/// them, K interior-equispaced nodes each. For x between the k-th and
/// (k+1)-th node of the host interval (counting from the end away from the
/// foreign one), the foreign weight never exceeds
///
/// ```text
/// F = [ k!(K−k)! / ( Π_{κ=1..K}(K−k+κ) + (K+1)^K · (gap/r)^K ) ]^μ
/// ```
///
/// For the mirrored orientation (x in the k-th gap counting from the side
/// nearest the foreign interval), call with k replaced by K−k. Factorials and
/// the product are combined via log-gamma, so large K cannot overflow.
pub fn weight_bound_f(
    gap: f64,
    r: f64,
    k: usize,
    cap_k: usize,
    mu: f64,
) -> Result<f64, ShepardError> {
    assert!(
        gap >= 0.0 && r > 0.0 && mu > 0.0,
        "geometry must be positive"
    );
    if k < 1 || k + 1 > cap_k {
        return Err(ShepardError::BadIndex { k, cap: cap_k });
    }
    let kk = cap_k;
    let ln_num = ln_factorial(k) + ln_factorial(kk - k);
    // Π_{κ=1..K}(K−k+κ) = Γ(2K−k+1)/Γ(K−k+1)
    let ln_prod = ln_factorial(2 * kk - k) - ln_factorial(kk - k);
    // (K+1)^K (gap/r)^K; gap = 0 gives ln = −∞ and the term drops out.
    let ln_tail = kk as f64 * (((kk + 1) as f64).ln() + (gap / r).ln());
    let ln_den = log_sum_exp(ln_prod, ln_tail);
    Ok((mu * (ln_num - ln_den)).exp())
}

/// ln(n!) summed over integer factors; n stays small (≤ 2K), so the direct
/// sum is exact to rounding and needs no gamma approximation.
fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::Covering;

    fn single_interval(a: f64, b: f64) -> Covering {
        Covering::from_intervals(vec![vec![(a, b)]], b - a, 1e-12).unwrap()
    }

    #[test]
    fn interior_equispaced_frozen_values() {
        let covering = single_interval(0.0, 1.0);
        let nodes = place_nodes(&covering, 3, Placement::InteriorEquispaced).unwrap();
        let set = nodes.set(0);
        assert!((set[0] - 0.25).abs() < 1e-15);
        assert!((set[1] - 0.50).abs() < 1e-15);
        assert!((set[2] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn two_disjoint_intervals_get_independent_equispaced_sets() {
        let covering =
            Covering::from_intervals(vec![vec![(-1.0, -0.1)], vec![(0.1, 1.0)]], 0.9, 1e-12)
                .unwrap();
        let nodes = place_nodes(&covering, 10, Placement::InteriorEquispaced).unwrap();
        for kappa in 1..=10usize {
            let expected = 0.1 + 0.9 * kappa as f64 / 11.0;
            assert!((nodes.set(1)[kappa - 1] - expected).abs() < 1e-14);
        }
        assert_eq!(nodes.len(), 2);
    }

    #[test]
    fn bad_k_is_rejected() {
        let covering = single_interval(0.0, 1.0);
        assert!(matches!(
            place_nodes(&covering, 1, Placement::InteriorEquispaced),
            Err(ShepardError::BadK(1))
        ));
    }

    #[test]
    fn shared_pool_shares_points_on_overlaps_with_exact_counts() {
        let covering =
            Covering::from_intervals(vec![vec![(0.0, 0.5), (0.25, 0.75)]], 0.5, 1e-12).unwrap();
        let nodes = place_nodes(&covering, 4, Placement::SharedPool).unwrap();
        assert_eq!(nodes.set(0).len(), 4);
        assert_eq!(nodes.set(1).len(), 4);
        let overlap = (0.25, 0.5);
        let in_overlap = |set: &[f64]| -> Vec<f64> {
            set.iter()
                .copied()
                .filter(|&x| x > overlap.0 && x < overlap.1)
                .collect()
        };
        assert_eq!(in_overlap(nodes.set(0)), in_overlap(nodes.set(1)));
        for set in nodes.sets() {
            assert!(set.windows(2).all(|w| w[0] < w[1]), "sets stay sorted");
        }
    }

    #[test]
    fn shared_pool_on_a_single_interval_is_equispaced() {
        let covering = single_interval(2.0, 3.0);
        let nodes = place_nodes(&covering, 5, Placement::SharedPool).unwrap();
        for (i, &xi) in nodes.set(0).iter().enumerate() {
            let expected = 2.0 + (i + 1) as f64 / 6.0;
            assert!((xi - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn single_set_weight_is_one_everywhere() {
        let covering = single_interval(0.0, 1.0);
        let nodes = place_nodes(&covering, 4, Placement::InteriorEquispaced).unwrap();
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            let w = eval_weights(&nodes, 4.0, x);
            assert_eq!(w.values, vec![1.0]);
        }
    }

    #[test]
    fn weights_vanish_exactly_at_foreign_nodes() {
        let covering =
            Covering::from_intervals(vec![vec![(0.0, 1.0)], vec![(2.0, 3.0)]], 1.0, 1e-12).unwrap();
        let nodes = place_nodes(&covering, 3, Placement::InteriorEquispaced).unwrap();
        let foreign = nodes.set(1)[1];
        let w = eval_weights(&nodes, 4.0, foreign);
        assert_eq!(w.values[0], 0.0);
        assert_eq!(w.values[1], 1.0);
    }

    #[test]
    fn symmetric_configuration_splits_evenly_at_zero() {
        let covering =
            Covering::from_intervals(vec![vec![(-2.0, -0.5)], vec![(0.5, 2.0)]], 1.5, 1e-12)
                .unwrap();
        let nodes = place_nodes(&covering, 6, Placement::InteriorEquispaced).unwrap();
        let w = eval_weights(&nodes, 4.0, 0.0);
        assert!((w.values[0] - 0.5).abs() < 1e-14);
        assert!((w.values[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn weights_form_a_partition_of_unity() {
        let covering = Covering::from_intervals(
            vec![vec![(0.0, 0.4), (0.3, 0.7), (0.6, 1.0)], vec![(1.5, 1.9)]],
            0.4,
            1e-12,
        )
        .unwrap();
        for placement in [Placement::InteriorEquispaced, Placement::SharedPool] {
            let nodes = place_nodes(&covering, 5, placement).unwrap();
            for mu in [1.0, 2.0, 4.0, 7.5] {
                for i in 0..=2000 {
                    let x = 1.9 * i as f64 / 2000.0;
                    let w = eval_weights(&nodes, mu, x);
                    let sum: f64 = w.values.iter().sum();
                    assert!((sum - 1.0).abs() <= 1e-12, "x={x} mu={mu} sum={sum}");
                    assert!(w.values.iter().all(|&v| v >= 0.0));
                }
            }
        }
    }

    #[test]
    fn weights_survive_extreme_magnitudes_without_underflow() {
        // 60 factors of distance ~1e-3 at mu=4: raw products are ~1e-720,
        // far past double range; the log-domain path must stay finite.
        let covering =
            Covering::from_intervals(vec![vec![(0.0, 1e-3), (0.5e-3, 1.5e-3)]], 1e-3, 1e-15)
                .unwrap();
        let nodes = place_nodes(&covering, 30, Placement::InteriorEquispaced).unwrap();
        let w = eval_weights(&nodes, 4.0, 0.25e-3);
        let sum: f64 = w.values.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(w.values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn scale_invariance_of_weights() {
        let covering =
            Covering::from_intervals(vec![vec![(0.0, 1.0), (0.8, 1.8)]], 1.0, 1e-12).unwrap();
        let nodes = place_nodes(&covering, 4, Placement::InteriorEquispaced).unwrap();
        let scaled =
            Covering::from_intervals(vec![vec![(5.0, 8.0), (7.4, 10.4)]], 3.0, 1e-12).unwrap();
        let scaled_nodes = place_nodes(&scaled, 4, Placement::InteriorEquispaced).unwrap();
        for i in 0..=50 {
            let x = 1.8 * i as f64 / 50.0;
            let w = eval_weights(&nodes, 4.0, x);
            let w2 = eval_weights(&scaled_nodes, 4.0, 5.0 + 3.0 * x);
            for (a, b) in w.values.iter().zip(&w2.values) {
                assert!((a - b).abs() <= 1e-12, "x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn bound_frozen_value_and_power_law() {
        // k!(K−k)! / Π_{κ=1..K}(K−k+κ) at gap=0, K=2, k=1: 1·1/(2·3) = 1/6.
        let f = weight_bound_f(0.0, 1.0, 1, 2, 1.0).unwrap();
        assert!((f - 1.0 / 6.0).abs() < 1e-15, "got {f}");
        // Doubling mu squares the bound.
        let f2 = weight_bound_f(0.3, 2.0, 3, 8, 2.0).unwrap();
        let f4 = weight_bound_f(0.3, 2.0, 3, 8, 4.0).unwrap();
        assert!((f4 - f2 * f2).abs() < 1e-15 * f2.max(1.0));
        // Zero gap drops the tail term entirely.
        let exact = |k: usize, kk: usize| -> f64 {
            let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
            fact(k) * fact(kk - k) / ((kk - k + 1..=2 * kk - k).map(|i| i as f64).product::<f64>())
        };
        for kk in 2..=12 {
            for k in 1..kk {
                let got = weight_bound_f(0.0, 1.0, k, kk, 1.0).unwrap();
                let want = exact(k, kk);
                assert!((got - want).abs() < 1e-13 * want, "k={k} K={kk}");
            }
        }
    }

    #[test]
    fn bound_is_maximal_at_the_last_gap() {
        for kk in 2..=30usize {
            for gap_over_r in [0.0, 0.1, 1.0] {
                let last = weight_bound_f(gap_over_r, 1.0, kk - 1, kk, 4.0).unwrap();
                for k in 1..kk {
                    let f = weight_bound_f(gap_over_r, 1.0, k, kk, 4.0).unwrap();
                    assert!(
                        f <= last * (1.0 + 1e-12),
                        "K={kk} k={k} gap={gap_over_r}: {f} > {last}"
                    );
                }
            }
        }
    }

    #[test]
    fn bound_rejects_out_of_range_indices() {
        assert!(matches!(
            weight_bound_f(0.0, 1.0, 0, 5, 1.0),
            Err(ShepardError::BadIndex { .. })
        ));
        assert!(matches!(
            weight_bound_f(0.0, 1.0, 5, 5, 1.0),
            Err(ShepardError::BadIndex { .. })
        ));
    }

    #[test]
    fn foreign_weight_respects_the_bound_in_the_two_interval_setting() {
        // Intervals [0,1] and [1.2, 2.2]: r = 1, gap = 0.2.
        let (r, gap, kk, mu) = (1.0, 0.2, 10usize, 4.0);
        let covering =
            Covering::from_intervals(vec![vec![(0.0, 1.0)], vec![(1.2, 2.2)]], r, 1e-12).unwrap();
        let nodes = place_nodes(&covering, kk, Placement::InteriorEquispaced).unwrap();
        let set = nodes.set(0).to_vec();
        for k in 1..kk {
            let bound = weight_bound_f(gap, r, k, kk, mu).unwrap();
            for i in 1..50 {
                let x = set[k - 1] + (set[k] - set[k - 1]) * i as f64 / 50.0;
                let w = eval_weights(&nodes, mu, x);
                assert!(
                    w.values[1] <= bound + 1e-12,
                    "k={k} x={x}: {} > {bound}",
                    w.values[1]
                );
            }
        }
    }
}
