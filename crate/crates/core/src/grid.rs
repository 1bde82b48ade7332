//! Segment grids, integral data, and continuity bookkeeping.
//!
//! A grid is a strictly increasing node sequence `x_0 < … < x_n` defining `n`
//! chained segments; segment `i` spans `[nodes[i], nodes[i+1]]` and carries one
//! datum, the integral of the sampled function over that segment. Declared
//! jump locations must fall strictly inside segment interiors; the segments
//! hosting them are set aside, and the remaining segments group into maximal
//! jump-free runs ("continuity intervals") on which all downstream
//! construction operates.
//!
//! Segment indices are 0-based throughout the crate. Human-facing output (the
//! CLI `info` listing) prints 1-based indices, which is the convention used in
//! the literature this module's examples come from.

use thiserror::Error;

/// Relative tolerance, scaled by [`SegmentGrid::scale`], under which a
/// declared jump is considered to sit on a grid node. Such jumps are rejected:
/// a jump on a node belongs to no segment interior and the host map would be
/// ambiguous.
pub const JUMP_NODE_TOL: f64 = 1e-14;

/// Relative tolerance, scaled by [`SegmentGrid::scale`], for endpoint
/// arithmetic: segment containment, admissibility comparisons, and covering
/// bookkeeping. Lengths obtained by subtracting nearby nodes differ at the
/// ulp level even on nominally uniform grids, so exact comparisons would
/// reject valid configurations.
pub const ENDPOINT_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("a grid needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("nodes must be strictly increasing: nodes[{index}] = {value} does not exceed nodes[{}]", index - 1)]
    NonMonotoneNodes { index: usize, value: f64 },
    #[error("{nodes} nodes define {segments} segments, but {data} integral values were given")]
    LengthMismatch {
        nodes: usize,
        segments: usize,
        data: usize,
    },
    #[error("non-finite {what} at index {index}")]
    NonFiniteInput { what: &'static str, index: usize },
    #[error("jump {value} coincides with grid node {node} (index {index})")]
    JumpOnNode { value: f64, node: f64, index: usize },
    #[error("jump {0} lies outside the open domain interior")]
    JumpOutsideDomain(f64),
    #[error("jumps {first} and {second} fall inside the same segment {segment}")]
    TwoJumpsOneSegment {
        first: f64,
        second: f64,
        segment: usize,
    },
    #[error("every segment hosts a jump; no continuity interval remains")]
    AllSegmentsHostJumps,
}

/// Chained segments with one integral datum per segment.
#[derive(Debug, Clone)]
pub struct SegmentGrid {
    nodes: Vec<f64>,
    data: Vec<f64>,
}

impl SegmentGrid {
    /// Validates nodes (finite, strictly increasing) against the data vector
    /// (finite, one entry per segment).
    pub fn new(nodes: Vec<f64>, data: Vec<f64>) -> Result<Self, GridError> {
        if nodes.len() < 2 {
            return Err(GridError::TooFewNodes(nodes.len()));
        }
        for (i, &x) in nodes.iter().enumerate() {
            if !x.is_finite() {
                return Err(GridError::NonFiniteInput {
                    what: "node",
                    index: i,
                });
            }
            if i > 0 && x <= nodes[i - 1] {
                return Err(GridError::NonMonotoneNodes { index: i, value: x });
            }
        }
        if data.len() != nodes.len() - 1 {
            return Err(GridError::LengthMismatch {
                nodes: nodes.len(),
                segments: nodes.len() - 1,
                data: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFiniteInput {
                what: "integral datum",
                index: i,
            });
        }
        Ok(Self { nodes, data })
    }

    /// Equispaced nodes over [a, b]; the last node is set to b exactly.
    pub fn equispaced_nodes(a: f64, b: f64, n_segments: usize) -> Vec<f64> {
        assert!(n_segments >= 1 && b > a);
        let mut nodes: Vec<f64> = (0..=n_segments)
            .map(|i| a + (b - a) * i as f64 / n_segments as f64)
            .collect();
        nodes[n_segments] = b;
        nodes
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn n_segments(&self) -> usize {
        self.data.len()
    }

    /// Domain endpoints (x_0, x_n).
    pub fn domain(&self) -> (f64, f64) {
        (self.nodes[0], self.nodes[self.nodes.len() - 1])
    }

    pub fn domain_width(&self) -> f64 {
        let (a, b) = self.domain();
        b - a
    }

    /// Magnitude scale for tolerance comparisons: node differences carry
    /// rounding error proportional to the node magnitudes, not only to the
    /// domain width.
    pub fn scale(&self) -> f64 {
        let (a, b) = self.domain();
        (b - a).max(a.abs()).max(b.abs())
    }

    /// Absolute slack for length and endpoint comparisons on this grid.
    pub fn length_tol(&self) -> f64 {
        ENDPOINT_TOL * self.scale()
    }

    /// Endpoints of segment i.
    pub fn segment(&self, i: usize) -> (f64, f64) {
        (self.nodes[i], self.nodes[i + 1])
    }

    pub fn segment_len(&self, i: usize) -> f64 {
        self.nodes[i + 1] - self.nodes[i]
    }

    /// Index of the segment whose half-open span [x_i, x_{i+1}) contains x.
    /// The last segment also claims its right endpoint.
    pub fn segment_containing(&self, x: f64) -> Option<usize> {
        let (a, b) = self.domain();
        if x < a || x > b {
            return None;
        }
        let idx = self.nodes.partition_point(|&v| v <= x);
        Some(idx.saturating_sub(1).min(self.n_segments() - 1))
    }

    /// Splits the grid at the given jump locations.
    ///
    /// Jumps may arrive in any order; they are sorted internally, so a
    /// permuted input yields the identical partition. Each jump must lie
    /// strictly inside a segment interior, no two jumps may share a segment,
    /// and a jump within [`JUMP_NODE_TOL`]·(b−a) of a node is rejected.
    pub fn partition_continuity(&self, jumps: &[f64]) -> Result<ContinuityPartition, GridError> {
        let (a, b) = self.domain();
        let node_tol = JUMP_NODE_TOL * self.scale();
        let mut sorted: Vec<f64> = jumps.to_vec();
        for &y in &sorted {
            if !y.is_finite() || y <= a || y >= b {
                return Err(GridError::JumpOutsideDomain(y));
            }
        }
        sorted.sort_unstable_by(|p, q| p.partial_cmp(q).expect("finite by validation"));

        let mut hosts = Vec::with_capacity(sorted.len());
        for &y in &sorted {
            // Nearest node: the one at or before y, or its successor.
            let right = self.nodes.partition_point(|&v| v < y);
            let left = right - 1; // right >= 1 since y > nodes[0]
            for idx in [left, right] {
                if (self.nodes[idx] - y).abs() <= node_tol {
                    return Err(GridError::JumpOnNode {
                        value: y,
                        node: self.nodes[idx],
                        index: idx,
                    });
                }
            }
            hosts.push(left);
        }
        for w in hosts.windows(2) {
            if w[0] == w[1] {
                let seg = w[0];
                let pair: Vec<f64> = sorted
                    .iter()
                    .copied()
                    .filter(|&y| self.nodes[seg] < y && y < self.nodes[seg + 1])
                    .collect();
                return Err(GridError::TwoJumpsOneSegment {
                    first: pair[0],
                    second: pair[1],
                    segment: seg,
                });
            }
        }

        // Runs of jump-free segments between consecutive host segments. Empty
        // runs are kept so interval l always sits between jumps l-1 and l.
        let mut intervals = Vec::with_capacity(hosts.len() + 1);
        let mut first = 0usize;
        for &h in &hosts {
            intervals.push(self.make_interval(first, h));
            first = h + 1;
        }
        intervals.push(self.make_interval(first, self.n_segments()));

        Ok(ContinuityPartition {
            jumps: sorted,
            hosts,
            intervals,
        })
    }

    /// Run of segments [first, end) as a continuity interval.
    fn make_interval(&self, first: usize, end: usize) -> ContinuityInterval {
        if first >= end {
            ContinuityInterval::Empty
        } else {
            ContinuityInterval::Span {
                first_segment: first,
                last_segment: end - 1,
                left: self.nodes[first],
                right: self.nodes[end],
            }
        }
    }

    /// Mesh-size summary of the partitioned grid.
    pub fn metrics(&self, partition: &ContinuityPartition) -> Result<GridMetrics, GridError> {
        let mut h_max = f64::NEG_INFINITY;
        let mut h_min = f64::INFINITY;
        let mut h_min_jump: Option<f64> = None;
        let mut hosts = partition.hosts.iter().copied().peekable();
        for i in 0..self.n_segments() {
            let len = self.segment_len(i);
            if hosts.peek() == Some(&i) {
                hosts.next();
                h_min_jump = Some(h_min_jump.map_or(len, |v: f64| v.min(len)));
            } else {
                h_max = h_max.max(len);
                h_min = h_min.min(len);
            }
        }
        if !h_max.is_finite() {
            return Err(GridError::AllSegmentsHostJumps);
        }
        let h_min_continuity = partition
            .intervals
            .iter()
            .filter_map(ContinuityInterval::width)
            .fold(f64::INFINITY, f64::min);
        Ok(GridMetrics {
            h_min_continuity,
            h_max_segments: h_max,
            h_min_segments: h_min,
            h_min_jump_segments: h_min_jump,
            admissible: h_min_continuity >= h_max - self.length_tol(),
        })
    }
}

/// One maximal run of jump-free segments, or the empty run between two jumps
/// hosted by adjacent segments.
#[derive(Debug, Clone, PartialEq)]
pub enum ContinuityInterval {
    Empty,
    Span {
        first_segment: usize,
        last_segment: usize,
        left: f64,
        right: f64,
    },
}

impl ContinuityInterval {
    pub fn is_empty(&self) -> bool {
        matches!(self, ContinuityInterval::Empty)
    }

    /// Closed-interval width, or None when empty.
    pub fn width(&self) -> Option<f64> {
        match self {
            ContinuityInterval::Empty => None,
            ContinuityInterval::Span { left, right, .. } => Some(right - left),
        }
    }

    pub fn endpoints(&self) -> Option<(f64, f64)> {
        match self {
            ContinuityInterval::Empty => None,
            ContinuityInterval::Span { left, right, .. } => Some((*left, *right)),
        }
    }

    /// Contained segments as an index range.
    pub fn segments(&self) -> std::ops::Range<usize> {
        match self {
            ContinuityInterval::Empty => 0..0,
            ContinuityInterval::Span {
                first_segment,
                last_segment,
                ..
            } => *first_segment..*last_segment + 1,
        }
    }
}

/// Jump bookkeeping for a grid: sorted jump locations, the segments hosting
/// them, and the continuity intervals in between.
///
/// With m+1 jumps there are m+2 interval entries; entry 0 precedes the first
/// jump and the last entry follows the final one. Entries may be `Empty` when
/// two jumps sit in adjacent segments (or a jump sits in the first/last
/// segment); empties are kept so indices stay aligned with the jump list.
#[derive(Debug, Clone)]
pub struct ContinuityPartition {
    jumps: Vec<f64>,
    hosts: Vec<usize>,
    intervals: Vec<ContinuityInterval>,
}

impl ContinuityPartition {
    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    /// Host map: `hosts()[j]` is the 0-based index of the segment containing
    /// jump j. Strictly increasing.
    pub fn hosts(&self) -> &[usize] {
        &self.hosts
    }

    pub fn intervals(&self) -> &[ContinuityInterval] {
        &self.intervals
    }

    pub fn n_jumps(&self) -> usize {
        self.jumps.len()
    }

    /// True when segment i hosts a jump.
    pub fn hosts_jump(&self, segment: usize) -> bool {
        self.hosts.binary_search(&segment).is_ok()
    }

    /// Index of the continuity interval containing segment i, or None for
    /// jump-hosting segments.
    pub fn interval_of_segment(&self, segment: usize) -> Option<usize> {
        if self.hosts_jump(segment) {
            return None;
        }
        Some(self.hosts.partition_point(|&h| h < segment))
    }
}

/// Mesh sizes that decide whether a covering construction is possible.
#[derive(Debug, Clone, Copy)]
pub struct GridMetrics {
    /// Minimum width over nonempty continuity intervals.
    pub h_min_continuity: f64,
    /// Maximum length over jump-free segments.
    pub h_max_segments: f64,
    /// Minimum length over jump-free segments.
    pub h_min_segments: f64,
    /// Minimum length over jump-hosting segments; None without jumps.
    pub h_min_jump_segments: Option<f64>,
    /// Every nonempty continuity interval is at least as wide as the widest
    /// jump-free segment (up to [`ENDPOINT_TOL`] slack). Coverings refuse
    /// inadmissible grids.
    pub admissible: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tenths_grid() -> SegmentGrid {
        // Nodes 0.0, 0.1, …, 1.0 with dummy unit data.
        let nodes = SegmentGrid::equispaced_nodes(0.0, 1.0, 10);
        SegmentGrid::new(nodes, vec![1.0; 10]).unwrap()
    }

    #[test]
    fn rejects_malformed_inputs() {
        assert!(matches!(
            SegmentGrid::new(vec![0.0], vec![]),
            Err(GridError::TooFewNodes(1))
        ));
        assert!(matches!(
            SegmentGrid::new(vec![0.0, 1.0, 1.0], vec![1.0, 1.0]),
            Err(GridError::NonMonotoneNodes { index: 2, .. })
        ));
        assert!(matches!(
            SegmentGrid::new(vec![0.0, 1.0], vec![1.0, 2.0]),
            Err(GridError::LengthMismatch { .. })
        ));
        assert!(matches!(
            SegmentGrid::new(vec![0.0, f64::NAN, 1.0], vec![1.0, 1.0]),
            Err(GridError::NonFiniteInput { what: "node", .. })
        ));
        assert!(matches!(
            SegmentGrid::new(vec![0.0, 1.0], vec![f64::INFINITY]),
            Err(GridError::NonFiniteInput {
                what: "integral datum",
                ..
            })
        ));
    }

    #[test]
    fn three_jump_partition_matches_hand_enumeration() {
        // Jumps at 1/20, 7/20, 17/20 on the tenths grid sit inside segments
        // 0, 3, 8 (0-based). The runs in between are: nothing before segment
        // 0, segments 1–2 = [0.1, 0.3], segments 4–7 = [0.4, 0.8], and
        // segment 9 = [0.9, 1.0].
        let grid = tenths_grid();
        let part = grid.partition_continuity(&[0.05, 0.35, 0.85]).unwrap();
        assert_eq!(part.hosts(), &[0, 3, 8]);
        assert_eq!(part.intervals().len(), 4);
        assert!(part.intervals()[0].is_empty());
        assert_eq!(part.intervals()[1].endpoints(), Some((0.1, 0.3)));
        assert_eq!(part.intervals()[2].endpoints(), Some((0.4, 0.8)));
        assert_eq!(part.intervals()[3].endpoints(), Some((0.9, 1.0)));
        assert_eq!(part.intervals()[1].segments(), 1..3);
        assert_eq!(part.intervals()[2].segments(), 4..8);
        assert_eq!(part.intervals()[3].segments(), 9..10);

        let metrics = grid.metrics(&part).unwrap();
        assert!((metrics.h_min_continuity - 0.1).abs() < 1e-15);
        assert!((metrics.h_max_segments - 0.1).abs() < 1e-15);
        assert!(metrics.admissible);
        assert!(metrics.h_min_jump_segments.is_some());
    }

    #[test]
    fn jump_order_does_not_matter() {
        let grid = tenths_grid();
        let sorted = grid.partition_continuity(&[0.05, 0.35, 0.85]).unwrap();
        let shuffled = grid.partition_continuity(&[0.85, 0.05, 0.35]).unwrap();
        assert_eq!(sorted.hosts(), shuffled.hosts());
        assert_eq!(sorted.jumps(), shuffled.jumps());
        assert_eq!(sorted.intervals(), shuffled.intervals());
    }

    #[test]
    fn no_jumps_yields_single_full_interval() {
        let grid = tenths_grid();
        let part = grid.partition_continuity(&[]).unwrap();
        assert_eq!(part.intervals().len(), 1);
        assert_eq!(part.intervals()[0].endpoints(), Some((0.0, 1.0)));
        assert_eq!(part.intervals()[0].segments(), 0..10);
        let metrics = grid.metrics(&part).unwrap();
        assert!((metrics.h_min_continuity - 1.0).abs() < 1e-15);
        assert_eq!(metrics.h_min_jump_segments, None);
        assert!(metrics.admissible);
    }

    #[test]
    fn jump_validation() {
        let grid = tenths_grid();
        assert!(matches!(
            grid.partition_continuity(&[0.3]),
            Err(GridError::JumpOnNode { index: 3, .. })
        ));
        // Within relative tolerance of a node counts as on the node.
        assert!(matches!(
            grid.partition_continuity(&[0.3 + 1e-16]),
            Err(GridError::JumpOnNode { .. })
        ));
        assert!(matches!(
            grid.partition_continuity(&[1.5]),
            Err(GridError::JumpOutsideDomain(_))
        ));
        assert!(matches!(
            grid.partition_continuity(&[0.0]),
            Err(GridError::JumpOutsideDomain(_))
        ));
        assert!(matches!(
            grid.partition_continuity(&[f64::NAN]),
            Err(GridError::JumpOutsideDomain(_))
        ));
        assert!(matches!(
            grid.partition_continuity(&[0.31, 0.32]),
            Err(GridError::TwoJumpsOneSegment { segment: 3, .. })
        ));
    }

    #[test]
    fn all_segments_hosting_jumps_is_an_error() {
        let nodes = vec![0.0, 0.5, 1.0];
        let grid = SegmentGrid::new(nodes, vec![1.0, 1.0]).unwrap();
        let part = grid.partition_continuity(&[0.25, 0.75]).unwrap();
        assert!(matches!(
            grid.metrics(&part),
            Err(GridError::AllSegmentsHostJumps)
        ));
    }

    #[test]
    fn inadmissible_when_an_interval_is_narrower_than_the_widest_segment() {
        // Segment lengths 0.5 / 0.2 / 0.3 with a jump inside the middle one:
        // the right interval [0.7, 1.0] is narrower than the widest jump-free
        // segment (0.5).
        let grid = SegmentGrid::new(vec![0.0, 0.5, 0.7, 1.0], vec![1.0; 3]).unwrap();
        let part = grid.partition_continuity(&[0.6]).unwrap();
        let metrics = grid.metrics(&part).unwrap();
        assert!(!metrics.admissible);
        assert!((metrics.h_min_continuity - 0.3).abs() < 1e-15);
        assert!((metrics.h_max_segments - 0.5).abs() < 1e-15);
    }

    #[test]
    fn union_of_intervals_and_jump_segments_tiles_the_domain() {
        let grid = tenths_grid();
        let part = grid.partition_continuity(&[0.05, 0.35, 0.85]).unwrap();
        // Walk interval 0, host 0, interval 1, host 1, … and check the
        // endpoints chain exactly (shared node values, so bitwise equality).
        let mut cursor = grid.domain().0;
        for (l, interval) in part.intervals().iter().enumerate() {
            if let Some((left, right)) = interval.endpoints() {
                assert_eq!(left, cursor);
                cursor = right;
            }
            if l < part.hosts().len() {
                let (u, v) = grid.segment(part.hosts()[l]);
                assert_eq!(u, cursor);
                cursor = v;
            }
        }
        assert_eq!(cursor, grid.domain().1);
    }

    #[test]
    fn segment_containing_handles_boundaries() {
        let grid = tenths_grid();
        assert_eq!(grid.segment_containing(0.0), Some(0));
        assert_eq!(grid.segment_containing(0.15), Some(1));
        assert_eq!(grid.segment_containing(0.1), Some(1));
        assert_eq!(grid.segment_containing(1.0), Some(9));
        assert_eq!(grid.segment_containing(-0.1), None);
    }
}
