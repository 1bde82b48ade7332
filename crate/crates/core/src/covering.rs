//! Equal-length interval coverings of the continuity intervals.
//!
//! For a window degree d, every jump-free region is covered by closed
//! intervals of one common length r_d ("the covering radius"), each containing
//! at least d+1 whole segments, chosen so that no interval is redundant. Local
//! polynomial fits happen per covering interval; the blending weights hand off
//! inside the overlaps. The radius is the maximum length over windows of d+1
//! consecutive jump-free segments inside one continuity interval, which for
//! d = 0 is exactly the largest jump-free segment length.
//!
//! Construction is greedy left to right: start flush with the region, restart
//! at the segment supplying the previous right endpoint, and right-align the
//! final interval when a full step would overrun. A post-pass drops intervals
//! whose segments are all covered elsewhere, restoring minimality when the
//! right-aligned tail made an earlier interval redundant.

use std::ops::Range;

use thiserror::Error;

use crate::grid::{ContinuityPartition, GridError, SegmentGrid};

#[derive(Debug, Error)]
pub enum CoveringError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(
        "inadmissible grid for degree {d}: window length {h_max_d} exceeds the \
         narrowest continuity interval ({h_min})"
    )]
    InadmissibleGrid { d: usize, h_max_d: f64, h_min: f64 },
    #[error("degree {d} needs {} segments per continuity interval, but interval {interval} has {have}", d + 1)]
    DegreeInfeasible {
        d: usize,
        interval: usize,
        have: usize,
    },
    #[error("covering construction violated its invariants: {0}")]
    CoverageViolation(String),
}

/// One covering interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverInterval {
    pub a: f64,
    pub b: f64,
}

impl CoverInterval {
    pub fn width(&self) -> f64 {
        self.b - self.a
    }
}

/// Equal-length covering, grouped by continuity interval.
///
/// Groups align index-for-index with the partition's interval list (empty
/// groups for empty continuity intervals). The flattened order — group by
/// group, left to right — is the index ι used everywhere downstream: Shepard
/// node set ι and local fit ι belong to `flat()[ι]`.
#[derive(Debug, Clone)]
pub struct Covering {
    radius: f64,
    groups: Vec<Range<usize>>,
    flat: Vec<CoverInterval>,
}

impl Covering {
    /// Common interval length.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Total number of covering intervals (the flattened count M).
    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    /// All intervals in flattened ι order.
    pub fn flat(&self) -> &[CoverInterval] {
        &self.flat
    }

    /// Flattened index range of group l (one group per continuity interval).
    pub fn group(&self, l: usize) -> Range<usize> {
        self.groups[l].clone()
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    /// Group index of flattened interval ι.
    pub fn group_of(&self, iota: usize) -> usize {
        self.groups
            .iter()
            .position(|g| g.contains(&iota))
            .expect("iota within some group")
    }

    /// Builds a covering from explicit per-group intervals, for configurations
    /// given as literal endpoint lists rather than constructed from a grid.
    /// Every interval must have width within `width_tol` of `radius`, and each
    /// group must be sorted by left endpoint.
    pub fn from_intervals(
        groups: Vec<Vec<(f64, f64)>>,
        radius: f64,
        width_tol: f64,
    ) -> Result<Self, CoveringError> {
        let mut flat = Vec::new();
        let mut ranges = Vec::with_capacity(groups.len());
        for (l, group) in groups.iter().enumerate() {
            let start = flat.len();
            for (j, &(a, b)) in group.iter().enumerate() {
                if !(a.is_finite() && b.is_finite()) || b <= a {
                    return Err(CoveringError::CoverageViolation(format!(
                        "group {l} interval {j} is not a proper interval: [{a}, {b}]"
                    )));
                }
                if ((b - a) - radius).abs() > width_tol {
                    return Err(CoveringError::CoverageViolation(format!(
                        "group {l} interval {j} has width {} but the radius is {radius}",
                        b - a
                    )));
                }
                if j > 0 && a <= group[j - 1].0 {
                    return Err(CoveringError::CoverageViolation(format!(
                        "group {l} intervals are not sorted by left endpoint at {j}"
                    )));
                }
                flat.push(CoverInterval { a, b });
            }
            ranges.push(start..flat.len());
        }
        if flat.is_empty() {
            return Err(CoveringError::CoverageViolation(
                "covering has no intervals".into(),
            ));
        }
        Ok(Self {
            radius,
            groups: ranges,
            flat,
        })
    }
}

/// Indices of the segments wholly contained in [a, b], as a contiguous range
/// (segments are chained, so containment is an index interval). Containment
/// is tested with the grid's endpoint slack ([`SegmentGrid::length_tol`]).
pub fn segments_in(interval: CoverInterval, grid: &SegmentGrid) -> Range<usize> {
    let tol = grid.length_tol();
    let nodes = grid.nodes();
    // First node at or after a - tol starts the first candidate segment; last
    // node at or before b + tol ends the final one.
    let first = nodes.partition_point(|&x| x < interval.a - tol);
    let end = nodes.partition_point(|&x| x <= interval.b + tol);
    if end == 0 || first + 1 >= end {
        return 0..0;
    }
    first..end - 1
}

/// Covering radius r_d: the maximum length over windows of d+1 consecutive
/// segments lying inside one continuity interval.
///
/// Fails when some nonempty continuity interval has fewer than d+1 segments,
/// or when the radius would exceed the narrowest continuity interval (the
/// covering could then spill across a jump).
pub fn covering_radius(
    grid: &SegmentGrid,
    partition: &ContinuityPartition,
    d: usize,
) -> Result<f64, CoveringError> {
    let metrics = grid.metrics(partition)?;
    let nodes = grid.nodes();
    let mut h_max_d = f64::NEG_INFINITY;
    for (l, interval) in partition.intervals().iter().enumerate() {
        let segs = interval.segments();
        if segs.is_empty() {
            continue;
        }
        if segs.len() < d + 1 {
            return Err(CoveringError::DegreeInfeasible {
                d,
                interval: l,
                have: segs.len(),
            });
        }
        for i in segs.start..segs.end - d {
            h_max_d = h_max_d.max(nodes[i + d + 1] - nodes[i]);
        }
    }
    if h_max_d > metrics.h_min_continuity + grid.length_tol() {
        return Err(CoveringError::InadmissibleGrid {
            d,
            h_max_d,
            h_min: metrics.h_min_continuity,
        });
    }
    Ok(h_max_d)
}

/// Largest degree d for which [`covering_radius`] succeeds: every nonempty
/// continuity interval must have at least d+1 segments and the d-window
/// length must not exceed the narrowest continuity interval.
pub fn max_degree(
    grid: &SegmentGrid,
    partition: &ContinuityPartition,
) -> Result<usize, CoveringError> {
    let d_cap = partition
        .intervals()
        .iter()
        .filter(|iv| !iv.is_empty())
        .map(|iv| iv.segments().len() - 1)
        .min()
        .ok_or(GridError::AllSegmentsHostJumps)?;
    // The window length grows with d, so scan down from the cap.
    for d in (0..=d_cap).rev() {
        match covering_radius(grid, partition, d) {
            Ok(_) => return Ok(d),
            Err(CoveringError::InadmissibleGrid { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    // Even d = 0 failed: the grid itself is inadmissible.
    Err(covering_radius(grid, partition, 0).expect_err("d = 0 just failed"))
}

/// Builds the equal-length covering of every continuity interval for degree d.
pub fn build_covering(
    grid: &SegmentGrid,
    partition: &ContinuityPartition,
    d: usize,
) -> Result<Covering, CoveringError> {
    let radius = covering_radius(grid, partition, d)?;
    let tol = grid.length_tol();
    let mut flat = Vec::new();
    let mut groups = Vec::with_capacity(partition.intervals().len());
    for interval in partition.intervals() {
        let start = flat.len();
        if let Some((left, right)) = interval.endpoints() {
            greedy_cover(grid, left, right, radius, tol, &mut flat);
        }
        groups.push(start..flat.len());
    }
    let mut covering = Covering {
        radius,
        groups,
        flat,
    };
    prune_redundant(grid, &mut covering);
    validate(grid, partition, d, &covering)?;
    Ok(covering)
}

/// Greedy construction over one continuity interval [left, right].
fn greedy_cover(
    grid: &SegmentGrid,
    left: f64,
    right: f64,
    radius: f64,
    tol: f64,
    out: &mut Vec<CoverInterval>,
) {
    // radius <= every continuity-interval width, so the first interval fits.
    let mut cur = CoverInterval {
        a: left,
        b: left + radius,
    };
    out.push(cur);
    while cur.b < right - tol {
        let start = next_start(grid, cur.b, tol);
        debug_assert!(start > cur.a, "greedy covering must advance");
        cur = if start + radius > right + tol {
            // A full step would overrun the region: right-align the last one.
            CoverInterval {
                a: right - radius,
                b: right,
            }
        } else {
            CoverInterval {
                a: start,
                b: start + radius,
            }
        };
        out.push(cur);
    }
}

/// Left endpoint of the segment that continues the covering past x: the
/// segment starting at x when x is (numerically) a node, otherwise the
/// segment containing x.
fn next_start(grid: &SegmentGrid, x: f64, tol: f64) -> f64 {
    let nodes = grid.nodes();
    let right = nodes.partition_point(|&v| v < x);
    // Candidate nodes around x; x stays inside the domain here because the
    // caller only asks while the region's right end is not yet reached.
    for idx in [right.saturating_sub(1), right.min(nodes.len() - 1)] {
        if (nodes[idx] - x).abs() <= tol {
            return nodes[idx];
        }
    }
    nodes[right - 1]
}

/// Drops covering intervals whose segments are all contained in other
/// intervals of the same group. After this pass every interval keeps at least
/// one segment that no sibling contains.
fn prune_redundant(grid: &SegmentGrid, covering: &mut Covering) {
    loop {
        let mut removed = false;
        'groups: for l in 0..covering.groups.len() {
            let group = covering.groups[l].clone();
            if group.len() <= 1 {
                continue;
            }
            for iota in group.clone() {
                let own = segments_in(covering.flat[iota], grid);
                let redundant = own.clone().all(|seg| {
                    group.clone().any(|other| {
                        other != iota && segments_in(covering.flat[other], grid).contains(&seg)
                    })
                });
                if redundant {
                    covering.flat.remove(iota);
                    for g in covering.groups.iter_mut() {
                        if g.start > iota {
                            g.start -= 1;
                        }
                        if g.end > iota {
                            g.end -= 1;
                        }
                    }
                    removed = true;
                    break 'groups;
                }
            }
        }
        if !removed {
            return;
        }
    }
}

/// Defensive check of the construction's guarantees; violations indicate a
/// bug, not bad input.
fn validate(
    grid: &SegmentGrid,
    partition: &ContinuityPartition,
    d: usize,
    covering: &Covering,
) -> Result<(), CoveringError> {
    let tol = grid.length_tol();
    for (l, interval) in partition.intervals().iter().enumerate() {
        let group = covering.group(l);
        let Some((left, right)) = interval.endpoints() else {
            if !group.is_empty() {
                return Err(CoveringError::CoverageViolation(format!(
                    "empty continuity interval {l} received covering intervals"
                )));
            }
            continue;
        };
        for iota in group.clone() {
            let u = covering.flat[iota];
            if (u.width() - covering.radius).abs() > tol {
                return Err(CoveringError::CoverageViolation(format!(
                    "interval {iota} has width {} instead of {}",
                    u.width(),
                    covering.radius
                )));
            }
            if u.a < left - tol || u.b > right + tol {
                return Err(CoveringError::CoverageViolation(format!(
                    "interval {iota} leaves its continuity interval {l}"
                )));
            }
            if segments_in(u, grid).len() < d + 1 {
                return Err(CoveringError::CoverageViolation(format!(
                    "interval {iota} contains fewer than {} whole segments",
                    d + 1
                )));
            }
        }
        for seg in interval.segments() {
            let covered = group
                .clone()
                .any(|iota| segments_in(covering.flat[iota], grid).contains(&seg));
            if !covered {
                return Err(CoveringError::CoverageViolation(format!(
                    "segment {seg} of continuity interval {l} is not covered"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_grid(n: usize) -> SegmentGrid {
        let nodes = SegmentGrid::equispaced_nodes(0.0, 1.0, n);
        SegmentGrid::new(nodes, vec![1.0; n]).unwrap()
    }

    /// Brute-force r_0 oracle: the largest jump-free segment length.
    fn max_free_segment(grid: &SegmentGrid, partition: &ContinuityPartition) -> f64 {
        (0..grid.n_segments())
            .filter(|&i| !partition.hosts_jump(i))
            .map(|i| grid.segment_len(i))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn radius_for_degree_zero_is_exactly_the_largest_free_segment() {
        let grid = unit_grid(10);
        let part = grid.partition_continuity(&[]).unwrap();
        let r = covering_radius(&grid, &part, 0).unwrap();
        assert_eq!(r, max_free_segment(&grid, &part));
        assert!((r - 0.1).abs() < 1e-15);
    }

    #[test]
    fn radius_for_higher_degree_on_a_nonuniform_grid() {
        // Windows of two consecutive segments: [0, .25], [.1, .5], [.25, 1];
        // the longest is 0.75.
        let grid = SegmentGrid::new(vec![0.0, 0.1, 0.25, 0.5, 1.0], vec![1.0; 4]).unwrap();
        let part = grid.partition_continuity(&[]).unwrap();
        let r = covering_radius(&grid, &part, 1).unwrap();
        assert!((r - 0.75).abs() < 1e-15);
    }

    #[test]
    fn radius_on_equispaced_grid_matches_closed_form() {
        let grid = unit_grid(10);
        let part = grid.partition_continuity(&[]).unwrap();
        for d in 0..10 {
            let r = covering_radius(&grid, &part, d).unwrap();
            let want = (d + 1) as f64 / 10.0;
            assert!((r - want).abs() < 1e-14, "d={d}: {r} vs {want}");
        }
    }

    #[test]
    fn degree_feasibility_errors() {
        let grid = unit_grid(10);
        let part = grid.partition_continuity(&[0.05, 0.35, 0.85]).unwrap();
        // The final interval has a single segment, so d = 1 is infeasible.
        assert!(matches!(
            covering_radius(&grid, &part, 1),
            Err(CoveringError::DegreeInfeasible {
                interval: 3,
                have: 1,
                ..
            })
        ));
        assert_eq!(max_degree(&grid, &part).unwrap(), 0);
    }

    #[test]
    fn max_degree_without_jumps_spans_the_whole_domain() {
        let grid = unit_grid(10);
        let part = grid.partition_continuity(&[]).unwrap();
        assert_eq!(max_degree(&grid, &part).unwrap(), 9);
        // A single-segment grid admits only d = 0.
        let tiny = SegmentGrid::new(vec![0.0, 1.0], vec![1.0]).unwrap();
        let part = tiny.partition_continuity(&[]).unwrap();
        assert_eq!(max_degree(&tiny, &part).unwrap(), 0);
    }

    #[test]
    fn max_degree_limited_by_admissibility_not_only_by_count() {
        // Two continuity intervals: [0,0.5] with 5 segments of 0.1 and
        // [0.52, 1.0] with 4 segments of 0.12. Window lengths for d = 3 on the
        // left reach 0.4 <= 0.48, but d = 3 on the right needs all 4 segments
        // (0.48 <= 0.48, fine) — push until admissibility, not count, binds:
        // d = 4 fails by count (right has 4 segments).
        let nodes = vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.52, 0.64, 0.76, 0.88, 1.0];
        let grid = SegmentGrid::new(nodes, vec![1.0; 10]).unwrap();
        let part = grid.partition_continuity(&[0.51]).unwrap();
        assert_eq!(max_degree(&grid, &part).unwrap(), 3);
    }

    #[test]
    fn degree_zero_covering_tiles_segment_by_segment_on_equispaced_grids() {
        let grid = unit_grid(10);
        let part = grid.partition_continuity(&[0.05, 0.35, 0.85]).unwrap();
        let covering = build_covering(&grid, &part, 0).unwrap();
        // Regions have 0, 2, 4, 1 segments; with r = h each segment is its
        // own covering interval.
        assert_eq!(covering.group(0).len(), 0);
        assert_eq!(covering.group(1).len(), 2);
        assert_eq!(covering.group(2).len(), 4);
        assert_eq!(covering.group(3).len(), 1);
        assert_eq!(covering.len(), 7);
        for (iota, u) in covering.flat().iter().enumerate() {
            assert_eq!(segments_in(*u, &grid).len(), 1, "interval {iota}");
        }
    }

    #[test]
    fn final_interval_right_aligns_on_nondivisible_regions() {
        // 5 segments of 0.2 with d = 1: r = 0.4, so the greedy pass lays
        // [0, .4], [.4, .8] and right-aligns [.6, 1.0].
        let grid = unit_grid(5);
        let part = grid.partition_continuity(&[]).unwrap();
        let covering = build_covering(&grid, &part, 1).unwrap();
        let flat = covering.flat();
        assert_eq!(flat.len(), 3);
        assert!((flat[0].a - 0.0).abs() < 1e-15 && (flat[0].b - 0.4).abs() < 1e-15);
        assert!((flat[1].a - 0.4).abs() < 1e-15 && (flat[1].b - 0.8).abs() < 1e-15);
        assert!((flat[2].a - 0.6).abs() < 1e-15 && (flat[2].b - 1.0).abs() < 1e-15);
    }

    #[test]
    fn every_interval_keeps_a_segment_of_its_own() {
        // Uneven segments force overlapping intervals; the pruned covering
        // must still give every interval a segment no sibling contains.
        let nodes = vec![0.0, 0.34, 0.5, 0.55, 0.83, 1.0];
        let grid = SegmentGrid::new(nodes, vec![1.0; 5]).unwrap();
        let part = grid.partition_continuity(&[]).unwrap();
        let covering = build_covering(&grid, &part, 0).unwrap();
        for iota in 0..covering.len() {
            let own = segments_in(covering.flat()[iota], &grid);
            let unique = own.clone().any(|seg| {
                (0..covering.len()).all(|other| {
                    other == iota || !segments_in(covering.flat()[other], &grid).contains(&seg)
                })
            });
            assert!(unique, "interval {iota} is redundant");
        }
    }

    #[test]
    fn segments_in_is_tolerant_at_endpoints() {
        let grid = unit_grid(10);
        let u = CoverInterval {
            a: 0.1 + 1e-15,
            b: 0.3 - 1e-15,
        };
        assert_eq!(segments_in(u, &grid), 1..3);
        let outside = CoverInterval { a: 2.0, b: 3.0 };
        assert_eq!(segments_in(outside, &grid), 0..0);
    }

    #[test]
    fn from_intervals_validates_widths() {
        let ok = Covering::from_intervals(
            vec![vec![(0.0, 0.5), (0.25, 0.75)], vec![(1.0, 1.5)]],
            0.5,
            1e-12,
        )
        .unwrap();
        assert_eq!(ok.len(), 3);
        assert_eq!(ok.group(0), 0..2);
        assert_eq!(ok.group_of(2), 1);
        assert!(Covering::from_intervals(vec![vec![(0.0, 0.4)]], 0.5, 1e-12).is_err());
        assert!(Covering::from_intervals(vec![], 0.5, 1e-12).is_err());
    }

    #[test]
    fn inadmissible_grid_is_refused() {
        let grid = SegmentGrid::new(vec![0.0, 0.5, 0.7, 1.0], vec![1.0; 3]).unwrap();
        let part = grid.partition_continuity(&[0.6]).unwrap();
        assert!(matches!(
            build_covering(&grid, &part, 0),
            Err(CoveringError::InadmissibleGrid { .. })
        ));
    }
}
