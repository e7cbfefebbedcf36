//! Partition-and-group trajectory clustering.
//!
//! Tracks are first partitioned into characteristic line segments (MDL cost
//! comparison), the pooled segments are grouped density-based under a
//! three-part segment distance, and each group is condensed into a
//! representative track by an axis-aligned sweep.

use std::collections::BTreeSet;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::scalar::Real;
use crate::track::{Track, TrackPoint};

/// Identifies where a segment came from: which day, which track, and the
/// position within that track's partition. Total order = (date, track, index),
/// used for all deterministic tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SegmentKey {
    pub date: NaiveDate,
    pub track: String,
    pub index: u32,
}

/// Directed line segment owned by one track.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment<S> {
    pub start: Point<S>,
    pub end: Point<S>,
    pub key: SegmentKey,
}

impl<S: Real> Segment<S> {
    pub fn length(&self) -> S {
        (self.end - self.start).norm()
    }

    fn vector(&self) -> Point<S> {
        self.end - self.start
    }

    fn is_degenerate(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterParams<S> {
    /// Segment-distance neighborhood radius, pixels.
    pub eps: S,
    /// Density threshold: a segment is core when its eps-neighborhood
    /// (itself included) holds at least this many segments. Also the minimum
    /// number of distinct tracks per surviving cluster and of overlapping
    /// segments per representative sweep position.
    pub min_lines: usize,
    /// Partition tracks by MDL cost; false keeps every consecutive pair.
    pub mdl_partition: bool,
    /// Sweep spacing for representative tracks, pixels. Zero sweeps the
    /// projected segment endpoints instead of a regular grid.
    pub smoothing_gamma: S,
    /// Weights of the perpendicular, parallel, and angular distance terms.
    pub weights: [S; 3],
}

impl<S: Real> Default for ClusterParams<S> {
    fn default() -> Self {
        ClusterParams {
            eps: S::from_config(25.0),
            min_lines: 3,
            mdl_partition: true,
            smoothing_gamma: S::from_config(12.5),
            weights: [S::one(), S::one(), S::one()],
        }
    }
}

impl<S: Real> ClusterParams<S> {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps.is_finite() && self.eps > S::zero()) {
            return Err(Error::Config("eps must be positive".into()));
        }
        if self.min_lines < 1 {
            return Err(Error::Config("min_lines must be at least 1".into()));
        }
        if !(self.smoothing_gamma.is_finite() && self.smoothing_gamma >= S::zero()) {
            return Err(Error::Config("smoothing_gamma must be non-negative".into()));
        }
        if self
            .weights
            .iter()
            .any(|w| !(w.is_finite() && *w >= S::zero()))
        {
            return Err(Error::Config("weights must be non-negative".into()));
        }
        Ok(())
    }
}

/// log2 code length of a Euclidean distance, floored at zero bits.
fn code_len<S: Real>(d: S) -> S {
    if d <= S::one() {
        S::zero()
    } else {
        d.log2()
    }
}

/// Perpendicular distances of `p` to the infinite line through a-b.
fn line_distance<S: Real>(p: Point<S>, a: Point<S>, b: Point<S>) -> S {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == S::zero() {
        return p.dist(a);
    }
    let t = (p - a).dot(ab) / len_sq;
    p.dist(a + ab.scale(t))
}

/// Projection of `p` onto the infinite line through a-b.
fn line_projection<S: Real>(p: Point<S>, a: Point<S>, b: Point<S>) -> Point<S> {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == S::zero() {
        return a;
    }
    let t = (p - a).dot(ab) / len_sq;
    a + ab.scale(t)
}

fn perp_pair_distance<S: Real>(l1: S, l2: S) -> S {
    let denom = l1 + l2;
    if denom == S::zero() {
        S::zero()
    } else {
        (l1 * l1 + l2 * l2) / denom
    }
}

/// Encoding cost terms of a raw segment against the characteristic segment
/// that replaces it: perpendicular plus angular contribution.
fn encoding_terms<S: Real>(
    char_a: Point<S>,
    char_b: Point<S>,
    raw_a: Point<S>,
    raw_b: Point<S>,
) -> (S, S) {
    let perp = perp_pair_distance(
        line_distance(raw_a, char_a, char_b),
        line_distance(raw_b, char_a, char_b),
    );
    let char_v = char_b - char_a;
    let raw_v = raw_b - raw_a;
    let raw_len = raw_v.norm();
    let char_len = char_v.norm();
    let angle = if raw_len == S::zero() {
        S::zero()
    } else if char_len == S::zero() {
        raw_len
    } else {
        (char_v.x * raw_v.y - char_v.y * raw_v.x).abs() / char_len
    };
    (perp, angle)
}

/// MDL cost of replacing points[start..=curr] with the single segment
/// points[start] → points[curr].
fn mdl_partitioned<S: Real>(points: &[Point<S>], start: usize, curr: usize) -> S {
    let mut sum_perp = S::zero();
    let mut sum_angle = S::zero();
    for k in start..curr {
        let (p, a) = encoding_terms(points[start], points[curr], points[k], points[k + 1]);
        sum_perp += p;
        sum_angle += a;
    }
    code_len(points[start].dist(points[curr])) + code_len(sum_perp) + code_len(sum_angle)
}

/// MDL cost of keeping points[start..=curr] as-is (no encoding cost).
fn mdl_unpartitioned<S: Real>(points: &[Point<S>], start: usize, curr: usize) -> S {
    (start..curr)
        .map(|k| code_len(points[k].dist(points[k + 1])))
        .fold(S::zero(), |acc, v| acc + v)
}

/// Reduce a track to characteristic segments. The first and last points are
/// always kept; with `mdl` a point becomes characteristic as soon as encoding
/// the running span as one segment costs more bits than keeping it verbatim.
/// Zero-length output segments are discarded.
pub fn partition_track<S: Real>(track: &Track<S>, date: NaiveDate, mdl: bool) -> Vec<Segment<S>> {
    let points: Vec<Point<S>> = track.positions().collect();
    let n = points.len();
    let mut characteristic = vec![0usize];
    if mdl {
        let mut start = 0;
        let mut length = 1;
        while start + length < n {
            let curr = start + length;
            if mdl_partitioned(&points, start, curr) > mdl_unpartitioned(&points, start, curr) {
                characteristic.push(curr - 1);
                start = curr - 1;
                length = 1;
            } else {
                length += 1;
            }
        }
    } else {
        characteristic.extend(1..n.saturating_sub(1));
    }
    characteristic.push(n - 1);

    let mut segments = Vec::new();
    for w in characteristic.windows(2) {
        let (a, b) = (points[w[0]], points[w[1]]);
        if a == b {
            continue;
        }
        segments.push(Segment {
            start: a,
            end: b,
            key: SegmentKey {
                date,
                track: track.id().to_string(),
                index: segments.len() as u32,
            },
        });
    }
    segments
}

/// Three-part grouping distance: perpendicular + parallel + angular, with the
/// shorter segment always projected onto the longer for symmetry. Equal-length
/// pairs use the lexicographically smaller endpoint tuple as the base.
pub fn segment_distance<S: Real>(a: &Segment<S>, b: &Segment<S>) -> Result<S> {
    if a.is_degenerate() || b.is_degenerate() {
        return Err(Error::DegenerateSegment);
    }
    Ok(segment_distance_weighted(a, b, &[S::one(), S::one(), S::one()]))
}

fn endpoint_tuple<S: Real>(s: &Segment<S>) -> [S; 4] {
    [s.start.x, s.start.y, s.end.x, s.end.y]
}

fn segment_distance_weighted<S: Real>(a: &Segment<S>, b: &Segment<S>, w: &[S; 3]) -> S {
    let la = a.length();
    let lb = b.length();
    let (base, other) = if la > lb {
        (a, b)
    } else if lb > la {
        (b, a)
    } else if endpoint_tuple(a) <= endpoint_tuple(b) {
        (a, b)
    } else {
        (b, a)
    };

    let perp = perp_pair_distance(
        line_distance(other.start, base.start, base.end),
        line_distance(other.end, base.start, base.end),
    );

    let ps = line_projection(other.start, base.start, base.end);
    let pe = line_projection(other.end, base.start, base.end);
    let parallel = base.start.dist(ps).min(base.end.dist(pe));

    let bv = base.vector();
    let ov = other.vector();
    let other_len = other.length();
    let angle = if bv.dot(ov) < S::zero() {
        other_len
    } else {
        (bv.x * ov.y - bv.y * ov.x).abs() / base.length()
    };

    w[0] * perp + w[1] * parallel + w[2] * angle
}

/// Density grouping output: each input segment lands in exactly one cluster
/// or in the noise set.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentClustering<S> {
    pub clusters: Vec<Vec<Segment<S>>>,
    pub noise: Vec<Segment<S>>,
}

/// Group segments by density reachability under `segment_distance`.
///
/// A segment is core when its eps-neighborhood (itself included) holds at
/// least min_lines segments; clusters are connected components of core-core
/// adjacency, plus border segments attached to the smallest-keyed adjacent
/// core. Clusters drawing on fewer than min_lines distinct tracks are demoted
/// to noise. Output order is by smallest member key, so the result does not
/// depend on input order.
pub fn cluster_segments<S: Real>(
    segments: &[Segment<S>],
    params: &ClusterParams<S>,
) -> Result<SegmentClustering<S>> {
    params.validate()?;
    if segments.iter().any(|s| s.is_degenerate()) {
        return Err(Error::DegenerateSegment);
    }
    let n = segments.len();

    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        neighbors[i].push(i);
        for j in i + 1..n {
            let d = segment_distance_weighted(&segments[i], &segments[j], &params.weights);
            if d <= params.eps {
                neighbors[i].push(j);
                neighbors[j].push(i);
            }
        }
    }
    let core: Vec<bool> = neighbors.iter().map(|ns| ns.len() >= params.min_lines).collect();

    let mut dsu = DisjointSets::new(n);
    for i in 0..n {
        if !core[i] {
            continue;
        }
        for &j in &neighbors[i] {
            if core[j] {
                dsu.union(i, j);
            }
        }
    }

    // assignment[i]: root of the cluster segment i belongs to
    let mut assignment: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if core[i] {
            assignment[i] = Some(dsu.find(i));
        } else {
            let anchor = neighbors[i]
                .iter()
                .filter(|&&j| core[j])
                .min_by(|&&x, &&y| segments[x].key.cmp(&segments[y].key));
            assignment[i] = anchor.map(|&j| dsu.find(j));
        }
    }

    let mut by_root: std::collections::HashMap<usize, Vec<usize>> = Default::default();
    for (i, a) in assignment.iter().enumerate() {
        if let Some(root) = a {
            by_root.entry(*root).or_default().push(i);
        }
    }

    let mut clusters: Vec<Vec<Segment<S>>> = Vec::new();
    let mut noise: Vec<Segment<S>> = assignment
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_none())
        .map(|(i, _)| segments[i].clone())
        .collect();

    for (_, mut idxs) in by_root {
        idxs.sort_by(|&x, &y| segments[x].key.cmp(&segments[y].key));
        let members: Vec<Segment<S>> = idxs.iter().map(|&i| segments[i].clone()).collect();
        let tracks: BTreeSet<(&NaiveDate, &str)> = members
            .iter()
            .map(|s| (&s.key.date, s.key.track.as_str()))
            .collect();
        if tracks.len() < params.min_lines {
            noise.extend(members);
        } else {
            clusters.push(members);
        }
    }

    clusters.sort_by(|a, b| a[0].key.cmp(&b[0].key));
    noise.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(SegmentClustering { clusters, noise })
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Condense cluster members into a representative track.
///
/// The frame is rotated so the members' summed direction vector becomes the
/// x-axis; a sweep line walks that axis at `smoothing_gamma` spacing and, at
/// every position covered by at least min_lines members, emits the mean of
/// the member intersections. Frames are synthesized 0,1,2,… since a centroid
/// has no native timeline. If the sweep finds fewer than two positions, the
/// longest member segment stands in.
pub fn representative_track<S: Real>(
    members: &[Segment<S>],
    params: &ClusterParams<S>,
) -> Result<Track<S>> {
    params.validate()?;
    if members.is_empty() {
        return Err(Error::InvalidInput("cluster has no members".into()));
    }

    let sum = members
        .iter()
        .fold(Point::new(S::zero(), S::zero()), |acc, m| acc + m.vector());
    let norm = sum.norm();
    if norm == S::zero() {
        return Err(Error::DegenerateDirection);
    }
    let (c, s) = (sum.x / norm, sum.y / norm);

    // member endpoints in the rotated frame, ordered along the sweep axis
    let spans: Vec<(Point<S>, Point<S>)> = members
        .iter()
        .map(|m| {
            let a = m.start.into_frame(c, s);
            let b = m.end.into_frame(c, s);
            if a.x <= b.x {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();

    let x_min = spans.iter().map(|(a, _)| a.x).fold(S::infinity(), S::min);
    let x_max = spans.iter().map(|(_, b)| b.x).fold(S::neg_infinity(), S::max);
    let tol = S::from_config(1e-9);

    let mut positions = Vec::new();
    if params.smoothing_gamma > S::zero() {
        let mut k = S::zero();
        loop {
            let pos = x_min + k * params.smoothing_gamma;
            if pos > x_max + tol {
                break;
            }
            positions.push(pos);
            k += S::one();
        }
    } else {
        let mut xs: Vec<S> = spans.iter().flat_map(|(a, b)| [a.x, b.x]).collect();
        xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
        xs.dedup();
        positions = xs;
    }

    let mut points = Vec::new();
    for pos in positions {
        let mut sum_y = S::zero();
        let mut count = 0usize;
        for (a, b) in &spans {
            if pos < a.x - tol || pos > b.x + tol {
                continue;
            }
            let dx = b.x - a.x;
            sum_y += if dx <= tol {
                (a.y + b.y) / S::from_config(2.0)
            } else {
                a.y + (b.y - a.y) * ((pos - a.x) / dx)
            };
            count += 1;
        }
        if count >= params.min_lines {
            let mean = sum_y / S::from_config(count as f64);
            points.push(Point::new(pos, mean).out_of_frame(c, s));
        }
    }

    if points.len() < 2 {
        let longest = members
            .iter()
            .max_by(|a, b| {
                a.length()
                    .partial_cmp(&b.length())
                    .unwrap()
                    .then_with(|| b.key.cmp(&a.key))
            })
            .unwrap();
        points = vec![longest.start, longest.end];
    }

    let track_points = points
        .into_iter()
        .enumerate()
        .map(|(i, p)| TrackPoint::new(i as u32, p.x, p.y))
        .collect();
    Track::new("rep", track_points)
}

/// A surviving cluster: its member segments and the condensed representative.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentCluster<S> {
    pub members: Vec<Segment<S>>,
    pub representative: Track<S>,
}

impl<S: Real> SegmentCluster<S> {
    /// Distinct (day, track id) pairs contributing members, sorted.
    pub fn member_tracks(&self) -> Vec<(NaiveDate, &str)> {
        let set: BTreeSet<(NaiveDate, &str)> = self
            .members
            .iter()
            .map(|s| (s.key.date, s.key.track.as_str()))
            .collect();
        set.into_iter().collect()
    }
}

/// Full pipeline over dated tracks: partition, pool, group, condense.
pub fn cluster_tracks<S: Real>(
    tracks: &[(NaiveDate, &Track<S>)],
    params: &ClusterParams<S>,
) -> Result<Vec<SegmentCluster<S>>> {
    params.validate()?;
    let mut segments = Vec::new();
    for (date, track) in tracks {
        segments.extend(partition_track(track, *date, params.mdl_partition));
    }
    let grouping = cluster_segments(&segments, params)?;
    grouping
        .clusters
        .into_iter()
        .map(|members| {
            let representative = representative_track(&members, params)?;
            Ok(SegmentCluster {
                members,
                representative,
            })
        })
        .collect()
}

/// Representative points as CSV lines `cluster_id,seq,x,y`.
pub fn representatives_csv<S: Real>(clusters: &[SegmentCluster<S>]) -> String {
    let mut out = String::from("cluster_id,seq,x,y\n");
    for (id, cluster) in clusters.iter().enumerate() {
        for (seq, p) in cluster.representative.points().iter().enumerate() {
            out.push_str(&format!("{id},{seq},{},{}\n", p.x, p.y));
        }
    }
    out
}

/// Cluster membership as CSV lines `cluster_id,day,track_id`, one line per
/// distinct contributing track.
pub fn membership_csv<S: Real>(clusters: &[SegmentCluster<S>]) -> String {
    let mut out = String::from("cluster_id,day,track_id\n");
    for (id, cluster) in clusters.iter().enumerate() {
        for (date, track) in cluster.member_tracks() {
            out.push_str(&format!("{id},{date},{track}\n"));
        }
    }
    out
}
