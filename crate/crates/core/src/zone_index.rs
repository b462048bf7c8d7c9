//! Latitude-strip search structure.
//!
//! Points are sorted by `z` and bucketed into `q = ceil(pi / delta)` strips
//! of colatitude width `delta`. Strip `k` (zero-based here) holds the points
//! with colatitude in `[k delta, (k + 1) delta)`; the last strip is closed at
//! `pi`. A cap query around a center in strip `k` scans strips
//! `k - i* ..= k + i*` with `i* = ceil(radius / delta)`, clamped to the
//! valid range.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sphere::{geodesic_distance, UnitVec};

/// Upper bound on the radius escalation loop in [`ZoneIndex::nearest_m`].
/// The radius saturates at `pi` once `2 sqrt(k) m / n >= 2`, so this is
/// reached only for absurd `n / m` ratios.
pub const MAX_ESCALATION: u64 = 1 << 40;

/// Cap radius `arccos(1 - 2 sqrt(k) m / n)`, with the argument clamped to
/// `[-1, 1]`.
pub fn compute_delta(n: usize, m: usize, k: u64) -> f64 {
    assert!(n >= 1 && m >= 1 && k >= 1, "compute_delta needs n, m, k >= 1");
    let arg = 1.0 - 2.0 * (k as f64).sqrt() * m as f64 / n as f64;
    arg.clamp(-1.0, 1.0).acos()
}

/// Neighbors of a query point, nearest first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NeighborSet {
    pub ids: Vec<usize>,
    pub distances: Vec<f64>,
}

impl NeighborSet {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn truncate(&mut self, m: usize) {
        self.ids.truncate(m);
        self.distances.truncate(m);
    }

    fn sort(&mut self) {
        let mut pairs: Vec<(f64, usize)> = self
            .distances
            .iter()
            .copied()
            .zip(self.ids.iter().copied())
            .collect();
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        (self.distances, self.ids) = pairs.into_iter().unzip();
    }
}

/// Result of a nearest-neighbor query together with the radius that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestResult {
    pub neighbors: NeighborSet,
    /// Escalation factor `k` at which enough points were found.
    pub escalation: u64,
    pub radius: f64,
}

#[derive(Debug, Clone)]
pub struct ZoneIndex {
    points: Vec<UnitVec>,
    ids: Vec<usize>,
    delta: f64,
    zone_count: usize,
    /// Boundaries in sorted (ascending `z`) order. Block `i` spans
    /// `zone_offsets[i]..zone_offsets[i + 1]` and holds strip `q - 1 - i`.
    zone_offsets: Vec<usize>,
}

impl ZoneIndex {
    /// Sorts `points` by `z` and partitions them into strips of width `delta`.
    pub fn build(points: &[UnitVec], delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= PI) {
            return Err(Error::InvalidInput(format!(
                "strip width {delta} outside (0, pi]"
            )));
        }
        let zone_count = ((PI / delta).ceil() as usize).max(1);

        let mut ids: Vec<usize> = (0..points.len()).collect();
        ids.sort_unstable_by(|&a, &b| points[a].z().total_cmp(&points[b].z()).then(a.cmp(&b)));
        let sorted: Vec<UnitVec> = ids.iter().map(|&i| points[i]).collect();

        let mut index = Self {
            points: sorted,
            ids,
            delta,
            zone_count,
            zone_offsets: Vec::new(),
        };
        let strips: Vec<usize> = index.points.iter().map(|p| index.strip_of(p)).collect();
        let mut offsets = Vec::with_capacity(zone_count + 1);
        offsets.push(0);
        for block in 0..zone_count {
            let strip = zone_count - 1 - block;
            // strips are non-increasing along ascending z
            let end = strips.partition_point(|&s| s >= strip);
            offsets.push(end);
        }
        index.zone_offsets = offsets;
        Ok(index)
    }

    /// Zero-based strip holding `p`.
    pub fn strip_of(&self, p: &UnitVec) -> usize {
        let k = (p.colatitude() / self.delta).floor() as usize;
        k.min(self.zone_count - 1)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn zone_count(&self) -> usize {
        self.zone_count
    }

    pub fn zone_offsets(&self) -> &[usize] {
        &self.zone_offsets
    }

    /// Points sorted by ascending `z`.
    pub fn sorted_points(&self) -> &[UnitVec] {
        &self.points
    }

    /// Original index of each sorted point.
    pub fn sorted_ids(&self) -> &[usize] {
        &self.ids
    }

    /// Sorted positions of the points in strip `k` (zero-based, from the
    /// north pole).
    pub fn strip_range(&self, k: usize) -> std::ops::Range<usize> {
        let block = self.zone_count - 1 - k;
        self.zone_offsets[block]..self.zone_offsets[block + 1]
    }

    /// Original ids of the points in strip `k`.
    pub fn strip_ids(&self, k: usize) -> &[usize] {
        &self.ids[self.strip_range(k)]
    }

    /// All points within geodesic `radius` of `center`, nearest first, ties
    /// by original index.
    pub fn query_cap(&self, center: &UnitVec, radius: f64) -> NeighborSet {
        let mut out = NeighborSet::default();
        if self.points.is_empty() {
            return out;
        }
        let k = self.strip_of(center);
        let reach = (radius / self.delta).ceil().max(0.0) as usize;
        let lo = k.saturating_sub(reach);
        let hi = (k + reach).min(self.zone_count - 1);
        // lo..=hi in strip order is one contiguous block run in sorted order
        let start = self.strip_range(hi).start;
        let end = self.strip_range(lo).end;
        for pos in start..end {
            let d = geodesic_distance(center, &self.points[pos]);
            if d <= radius {
                out.ids.push(self.ids[pos]);
                out.distances.push(d);
            }
        }
        out.sort();
        out
    }

    /// The `m` points nearest `center`, searched by caps of radius
    /// `compute_delta(formula_n, m, k)` for `k = 1, 2, ...` until one holds
    /// at least `m` points.
    pub fn nearest_m(&self, center: &UnitVec, m: usize, formula_n: usize) -> Result<NearestResult> {
        if m == 0 || m > self.points.len() {
            return Err(Error::InvalidInput(format!(
                "requested {m} neighbors from {} points",
                self.points.len()
            )));
        }
        let formula_n = formula_n.max(1);
        let mut k = 1u64;
        loop {
            let radius = compute_delta(formula_n, m, k);
            let mut found = self.query_cap(center, radius);
            if found.len() >= m || radius >= PI {
                found.truncate(m);
                return Ok(NearestResult {
                    neighbors: found,
                    escalation: k,
                    radius,
                });
            }
            k += 1;
            if k > MAX_ESCALATION {
                // unreachable for sane inputs; fall back to the whole sphere
                let mut found = self.query_cap(center, PI);
                found.truncate(m);
                return Ok(NearestResult {
                    neighbors: found,
                    escalation: k,
                    radius: PI,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::random_uniform_sphere;
    use approx::assert_abs_diff_eq;

    fn axis_points() -> Vec<UnitVec> {
        let u = |x, y, z| UnitVec::normalize(x, y, z).unwrap();
        vec![
            u(1.0, 0.0, 0.0),
            u(-1.0, 0.0, 0.0),
            u(0.0, 1.0, 0.0),
            u(0.0, -1.0, 0.0),
            u(0.0, 0.0, 1.0),
            u(0.0, 0.0, -1.0),
        ]
    }

    #[test]
    fn delta_examples() {
        // arccos(0.97)
        assert_abs_diff_eq!(compute_delta(1000, 15, 1), 0.97f64.acos(), epsilon = 1e-15);
        assert_abs_diff_eq!(compute_delta(1000, 15, 1), 0.245_566, epsilon = 1e-6);
        assert_abs_diff_eq!(compute_delta(2, 1, 1), PI / 2.0, epsilon = 1e-15);
        assert_eq!(compute_delta(10, 15, 4), PI);
    }

    #[test]
    fn delta_monotone() {
        let mut prev = 0.0;
        // saturates once sqrt(k) >= 1000 / 15
        for k in (1..5000).step_by(7) {
            let d = compute_delta(1000, 15, k);
            assert!(d >= prev);
            prev = d;
        }
        assert_eq!(prev, PI);
        assert!(compute_delta(1000, 20, 1) > compute_delta(1000, 15, 1));
    }

    #[test]
    fn whole_sphere_single_strip() {
        let pts = random_uniform_sphere(50, 1);
        let ix = ZoneIndex::build(pts.points(), PI).unwrap();
        assert_eq!(ix.zone_count(), 1);
        assert_eq!(ix.strip_range(0), 0..50);
        assert_eq!(ix.query_cap(&UnitVec::NORTH, PI).len(), 50);
    }

    #[test]
    fn axis_points_in_quarter_strips() {
        let ix = ZoneIndex::build(&axis_points(), PI / 4.0).unwrap();
        assert_eq!(ix.zone_count(), 4);
        assert_eq!(ix.strip_ids(0), &[4]);
        assert_eq!(ix.strip_ids(3), &[5]);
        assert!(ix.strip_ids(1).is_empty());
        let mut eq = ix.strip_ids(2).to_vec();
        eq.sort();
        assert_eq!(eq, vec![0, 1, 2, 3]);
    }

    #[test]
    fn zone_count_for_default_parameters() {
        let pts = random_uniform_sphere(1000, 2);
        let ix = ZoneIndex::build(pts.points(), compute_delta(1000, 15, 1)).unwrap();
        assert_eq!(ix.zone_count(), 13);
        assert_eq!(*ix.zone_offsets().last().unwrap(), 1000);
        assert!(ix.zone_offsets().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn strip_membership_matches_colatitude() {
        let pts = random_uniform_sphere(2000, 3);
        let delta = 0.3;
        let ix = ZoneIndex::build(pts.points(), delta).unwrap();
        for k in 0..ix.zone_count() {
            for &id in ix.strip_ids(k) {
                let theta = pts.points()[id].colatitude();
                assert!(theta >= k as f64 * delta);
                if k + 1 < ix.zone_count() {
                    assert!(theta < (k + 1) as f64 * delta);
                }
            }
        }
        assert!(ix.sorted_points().windows(2).all(|w| w[0].z() <= w[1].z()));
    }

    #[test]
    fn small_cap_on_axis_points() {
        let ix = ZoneIndex::build(&axis_points(), PI / 4.0).unwrap();
        let hit = ix.query_cap(&UnitVec::NORTH, 0.1);
        assert_eq!(hit.ids, vec![4]);
        assert_eq!(hit.distances, vec![0.0]);
    }

    #[test]
    fn empty_index() {
        let ix = ZoneIndex::build(&[], 0.5).unwrap();
        assert!(ix.is_empty());
        assert!(ix.query_cap(&UnitVec::NORTH, PI).is_empty());
        assert!(ix.nearest_m(&UnitVec::NORTH, 1, 1).is_err());
        assert!(ZoneIndex::build(&[], 0.0).is_err());
    }

    #[test]
    fn nearest_trivial_cases() {
        let pts = random_uniform_sphere(30, 5);
        let ix = ZoneIndex::build(pts.points(), compute_delta(30, 5, 1)).unwrap();
        let all = ix.nearest_m(&UnitVec::NORTH, 30, 30).unwrap();
        assert_eq!(all.neighbors.len(), 30);
        assert!(all.neighbors.distances.windows(2).all(|w| w[0] <= w[1]));
        let own = ix.nearest_m(&pts.points()[7], 1, 30).unwrap();
        assert_eq!(own.neighbors.ids, vec![7]);
        assert_eq!(own.neighbors.distances, vec![0.0]);
        assert!(ix.nearest_m(&UnitVec::NORTH, 31, 30).is_err());
    }

    #[test]
    fn ties_broken_by_index() {
        let ix = ZoneIndex::build(&axis_points(), 0.5).unwrap();
        let r = ix.nearest_m(&UnitVec::NORTH, 5, 6).unwrap();
        assert_eq!(r.neighbors.ids, vec![4, 0, 1, 2, 3]);
    }
}
