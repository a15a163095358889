//! Triangulations of a planar point set and the flip / parallel-flip
//! calculus on them.
//!
//! A triangulation is stored as its canonical edge set plus, per edge, the
//! one or two opposite vertices of its incident triangles. That map is all
//! a flip needs: exchanging a diagonal touches the flipped edge, the new
//! edge and the four quad boundary edges, so a flip is O(1).
//!
//! Validation relies on an exact counting argument: a planar straight-line
//! graph on n points with h convex-hull boundary points (collinear boundary
//! points included) has at most 3n - h - 3 edges, with equality exactly for
//! triangulations. `build` therefore checks edge sanity, the edge count,
//! hull boundary edges and pairwise planarity, then recovers the triangles
//! by walking the faces of the rotation system induced by the exact angular
//! order of neighbors around each vertex.

use std::collections::{HashMap, HashSet};
use std::hash::BuildHasherDefault;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    convex_hull, hull_boundary_cycle, is_strictly_convex_quad, orientation_sign,
    point_in_open_segment, segments_conflict, segments_cross, Point,
};
use crate::rng::{splitmix64, Rng};
use crate::seggrid::SegGrid;

/// Multiply-xor hasher (fxhash style). The std default hasher is randomly
/// seeded per process; a fixed hasher keeps internal walks reproducible.
#[derive(Default, Clone)]
pub struct FixedHasher {
    state: u64,
}

impl std::hash::Hasher for FixedHasher {
    #[inline]
    fn finish(&self) -> u64 {
        self.state
    }

    #[inline]
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.state = (self.state.rotate_left(5) ^ b as u64).wrapping_mul(0x517cc1b727220a95);
        }
    }

    #[inline]
    fn write_u32(&mut self, n: u32) {
        self.state = (self.state.rotate_left(5) ^ n as u64).wrapping_mul(0x517cc1b727220a95);
    }

    #[inline]
    fn write_u64(&mut self, n: u64) {
        self.state = (self.state.rotate_left(5) ^ n).wrapping_mul(0x517cc1b727220a95);
    }

    #[inline]
    fn write_usize(&mut self, n: usize) {
        self.write_u64(n as u64);
    }
}

pub type Map<K, V> = HashMap<K, V, BuildHasherDefault<FixedHasher>>;
pub type Set<K> = HashSet<K, BuildHasherDefault<FixedHasher>>;

/// An undirected edge between two point indices, stored with `u < v` so
/// that edge identity is canonical.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: u32,
    v: u32,
}

impl Edge {
    pub fn new(a: u32, b: u32) -> Self {
        assert_ne!(a, b, "edge endpoints must differ");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn endpoints(&self) -> (u32, u32) {
        (self.u, self.v)
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    /// Stable 64-bit hash used for the incremental triangulation hash.
    #[inline]
    pub fn stable_hash(&self) -> u64 {
        splitmix64(((self.u as u64) << 32) | self.v as u64)
    }
}

impl std::fmt::Debug for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl Serialize for Edge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (self.u, self.v).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (a, b) = <(u32, u32)>::deserialize(d)?;
        if a == b {
            return Err(serde::de::Error::custom("edge endpoints must differ"));
        }
        Ok(Edge::new(a, b))
    }
}

fn sorted_triple(a: u32, b: u32, c: u32) -> [u32; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

/// A shared, validated point set: distinct points, not all collinear, with
/// the convex hull and full boundary cycle precomputed.
#[derive(Debug)]
pub struct PointSet {
    points: Vec<Point>,
    hull: Vec<u32>,
    boundary_cycle: Vec<u32>,
    bbox: (Point, Point),
    content_hash: u64,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Arc<Self>, TriangulationError> {
        if points.len() < 3 {
            return Err(TriangulationError::DegenerateInput("fewer than 3 points"));
        }
        if points.len() > u32::MAX as usize {
            return Err(TriangulationError::DegenerateInput("too many points"));
        }
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_unstable_by_key(|&i| points[i]);
        for w in idx.windows(2) {
            if points[w[0]] == points[w[1]] {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(TriangulationError::DuplicatePoint {
                    first: a,
                    second: b,
                });
            }
        }
        let hull = convex_hull(&points)
            .map_err(|_| TriangulationError::DegenerateInput("all points collinear"))?;
        let boundary_cycle = hull_boundary_cycle(&points, &hull);
        let mut lo = points[0];
        let mut hi = points[0];
        for p in &points {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        let mut content_hash = 0x243f_6a88_85a3_08d3u64;
        for p in &points {
            content_hash = splitmix64(content_hash ^ p.x as u64);
            content_hash = splitmix64(content_hash ^ p.y as u64);
        }
        Ok(Arc::new(PointSet {
            points,
            hull,
            boundary_cycle,
            bbox: (lo, hi),
            content_hash,
        }))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: u32) -> Point {
        self.points[i as usize]
    }

    /// Hull corner indices in CCW order (collinear boundary points excluded).
    pub fn hull(&self) -> &[u32] {
        &self.hull
    }

    /// Number of points on the hull boundary, collinear ones included.
    pub fn hull_boundary_len(&self) -> usize {
        self.boundary_cycle.len()
    }

    /// Full CCW boundary cycle, collinear boundary points included.
    pub fn boundary_cycle(&self) -> &[u32] {
        &self.boundary_cycle
    }

    pub fn bbox(&self) -> (Point, Point) {
        self.bbox
    }

    pub fn content_hash(&self) -> u64 {
        self.content_hash
    }

    /// 3n - h - 3: the edge count of every triangulation of this set.
    pub fn expected_edge_count(&self) -> usize {
        3 * self.len() - self.hull_boundary_len() - 3
    }

    /// 2n - h - 2: the triangle count of every triangulation of this set.
    pub fn expected_triangle_count(&self) -> usize {
        2 * self.len() - self.hull_boundary_len() - 2
    }
}

/// One invariant violation found while validating an edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    IndexOutOfRange { edge: (u32, u32) },
    DuplicateEdge(Edge),
    WrongEdgeCount { expected: usize, actual: usize },
    MissingHullEdge(Edge),
    ConflictingEdges(Edge, Edge),
    BrokenFaceStructure(String),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::IndexOutOfRange { edge } => {
                write!(f, "edge ({}, {}) references a point index out of range", edge.0, edge.1)
            }
            Violation::DuplicateEdge(e) => write!(f, "edge {:?} listed more than once", e),
            Violation::WrongEdgeCount { expected, actual } => {
                write!(f, "wrong edge count (3n-h-3): expected {expected}, got {actual}")
            }
            Violation::MissingHullEdge(e) => {
                write!(f, "hull boundary edge {:?} is missing", e)
            }
            Violation::ConflictingEdges(a, b) => {
                write!(f, "edges {:?} and {:?} intersect", a, b)
            }
            Violation::BrokenFaceStructure(msg) => write!(f, "broken face structure: {msg}"),
        }
    }
}

#[derive(Error, Debug)]
pub enum TriangulationError {
    #[error("duplicate point: indices {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("not a triangulation: {}", format_violations(.0))]
    NotATriangulation(Vec<Violation>),
    #[error("edge {0:?} is not flippable")]
    NotFlippable(Edge),
    #[error("edge set is not an independent set of flippable edges: {0}")]
    NotIndependent(String),
    #[error("edge {0:?} is not part of the triangulation")]
    UnknownEdge(Edge),
    #[error("triangulations live on different point sets")]
    PointSetMismatch,
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Opposite vertices of an edge's incident triangles, relative to the
/// directed canonical edge u -> v: `left` is on the CCW side.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
struct OppositePair {
    left: Option<u32>,
    right: Option<u32>,
}

/// A flippable interior edge together with its replacement diagonal and the
/// containing quadrilateral in CCW boundary order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlippableEdge {
    pub edge: Edge,
    pub opposite: Edge,
    /// CCW boundary order: [u, right, v, left] for the canonical edge (u, v).
    pub quad: [u32; 4],
}

/// An independent set of flippable edges of one triangulation.
#[derive(Clone, Debug, Default)]
pub struct ParallelFlipSet {
    pub flips: Vec<FlippableEdge>,
}

impl ParallelFlipSet {
    pub fn edges(&self) -> Vec<Edge> {
        self.flips.iter().map(|f| f.edge).collect()
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }
}

/// A triangulation of a shared point set.
#[derive(Clone)]
pub struct Triangulation {
    ps: Arc<PointSet>,
    opp: Map<Edge, OppositePair>,
    triangle_count: usize,
    hash: u64,
}

impl Triangulation {
    /// Validates `edges` as a triangulation of `ps` and derives the
    /// triangle adjacency. All violated invariants are reported together.
    pub fn build(ps: Arc<PointSet>, edges: &[Edge]) -> Result<Self, TriangulationError> {
        let n = ps.len() as u32;
        let mut violations: Vec<Violation> = Vec::new();

        let mut seen: Set<Edge> = Set::default();
        let mut clean: Vec<Edge> = Vec::with_capacity(edges.len());
        for e in edges {
            if e.u >= n || e.v >= n {
                violations.push(Violation::IndexOutOfRange {
                    edge: (e.u, e.v),
                });
                continue;
            }
            if !seen.insert(*e) {
                violations.push(Violation::DuplicateEdge(*e));
                continue;
            }
            clean.push(*e);
        }

        let expected = ps.expected_edge_count();
        if clean.len() != expected {
            violations.push(Violation::WrongEdgeCount {
                expected,
                actual: clean.len(),
            });
        }

        let cycle = ps.boundary_cycle();
        for k in 0..cycle.len() {
            let e = Edge::new(cycle[k], cycle[(k + 1) % cycle.len()]);
            if !seen.contains(&e) {
                violations.push(Violation::MissingHullEdge(e));
            }
        }

        // Pairwise planarity through the segment grid. Conflicts are
        // reported per offending pair, capped to keep garbage inputs from
        // producing quadratic reports.
        const MAX_CONFLICTS: usize = 64;
        let mut grid = SegGrid::new(ps.bbox(), clean.len());
        let mut inserted: Vec<Edge> = Vec::with_capacity(clean.len());
        let mut conflicts = 0usize;
        for e in &clean {
            let a = ps.point(e.u);
            let b = ps.point(e.v);
            if conflicts < MAX_CONFLICTS {
                if let Some(id) = grid.find_match(a, b, |c, d| segments_conflict(a, b, c, d)) {
                    violations.push(Violation::ConflictingEdges(inserted[id as usize], *e));
                    conflicts += 1;
                }
            }
            grid.insert(a, b);
            inserted.push(*e);
        }

        if !violations.is_empty() {
            return Err(TriangulationError::NotATriangulation(violations));
        }

        let (opp, triangle_count) = derive_faces(&ps, &clean)?;
        let mut hash = 0u64;
        for e in &clean {
            hash ^= e.stable_hash();
        }
        Ok(Triangulation {
            ps,
            opp,
            triangle_count,
            hash,
        })
    }

    pub fn point_set(&self) -> &Arc<PointSet> {
        &self.ps
    }

    pub fn edge_count(&self) -> usize {
        self.opp.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangle_count
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.opp.contains_key(&e)
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.opp.keys().copied()
    }

    /// Edges in canonical sorted order.
    pub fn edges_sorted(&self) -> Vec<Edge> {
        let mut v: Vec<Edge> = self.opp.keys().copied().collect();
        v.sort_unstable();
        v
    }

    /// Order-independent hash of the edge set, maintained incrementally
    /// across flips. Used for tabu lists and search deduplication.
    pub fn canonical_hash(&self) -> u64 {
        self.hash
    }

    pub fn same_point_set(&self, other: &Triangulation) -> bool {
        Arc::ptr_eq(&self.ps, &other.ps) || self.ps.content_hash() == other.ps.content_hash()
    }

    /// All triangles as sorted index triples, in sorted order.
    pub fn triangles(&self) -> Vec<[u32; 3]> {
        let mut tris: Set<[u32; 3]> = Set::default();
        for (e, pair) in &self.opp {
            for w in [pair.left, pair.right].into_iter().flatten() {
                tris.insert(sorted_triple(e.u, e.v, w));
            }
        }
        let mut v: Vec<[u32; 3]> = tris.into_iter().collect();
        v.sort_unstable();
        v
    }

    /// The 1 or 2 triangles incident to an edge, as sorted triples.
    pub fn triangles_of(&self, e: Edge) -> Option<Vec<[u32; 3]>> {
        let pair = self.opp.get(&e)?;
        Some(
            [pair.left, pair.right]
                .into_iter()
                .flatten()
                .map(|w| sorted_triple(e.u, e.v, w))
                .collect(),
        )
    }

    /// Flip data for `e`, or None when `e` is a hull edge or its quad is
    /// not strictly convex.
    pub fn flippable_info(&self, e: Edge) -> Option<FlippableEdge> {
        let pair = self.opp.get(&e)?;
        let (l, r) = (pair.left?, pair.right?);
        let quad = [e.u, r, e.v, l];
        if !is_strictly_convex_quad(
            self.ps.point(e.u),
            self.ps.point(r),
            self.ps.point(e.v),
            self.ps.point(l),
        ) {
            return None;
        }
        Some(FlippableEdge {
            edge: e,
            opposite: Edge::new(l, r),
            quad,
        })
    }

    /// Every flippable edge, sorted by edge.
    pub fn flippable_edges(&self) -> Vec<FlippableEdge> {
        let mut out: Vec<FlippableEdge> = self
            .opp
            .keys()
            .filter_map(|&e| self.flippable_info(e))
            .collect();
        out.sort_unstable_by_key(|f| f.edge);
        out
    }

    /// Flips `e` in place, returning the new diagonal.
    pub fn flip_in_place(&mut self, e: Edge) -> Result<Edge, TriangulationError> {
        let info = self
            .flippable_info(e)
            .ok_or(TriangulationError::NotFlippable(e))?;
        let (u, v) = (e.u, e.v);
        let [_, r, _, l] = info.quad;
        self.opp.remove(&e);
        self.replace_opposite(Edge::new(u, l), v, r);
        self.replace_opposite(Edge::new(v, l), u, r);
        self.replace_opposite(Edge::new(u, r), v, l);
        self.replace_opposite(Edge::new(v, r), u, l);
        let f = info.opposite;
        let s = orientation_sign(self.ps.point(f.u), self.ps.point(f.v), self.ps.point(u));
        debug_assert_ne!(s, 0);
        let pair = if s > 0 {
            OppositePair {
                left: Some(u),
                right: Some(v),
            }
        } else {
            OppositePair {
                left: Some(v),
                right: Some(u),
            }
        };
        self.opp.insert(f, pair);
        self.hash ^= e.stable_hash() ^ f.stable_hash();
        Ok(f)
    }

    /// Returns a new triangulation with `e` flipped.
    pub fn flipped(&self, e: Edge) -> Result<Triangulation, TriangulationError> {
        let mut t = self.clone();
        t.flip_in_place(e)?;
        Ok(t)
    }

    fn replace_opposite(&mut self, e: Edge, old: u32, new: u32) {
        let pair = self
            .opp
            .get_mut(&e)
            .expect("quad boundary edge must exist");
        if pair.left == Some(old) {
            pair.left = Some(new);
        } else {
            debug_assert_eq!(pair.right, Some(old));
            pair.right = Some(new);
        }
    }

    /// True iff every edge of `d` is flippable and no two share an incident
    /// triangle. Edges absent from the triangulation are an error.
    pub fn is_independent(&self, d: &[Edge]) -> Result<bool, TriangulationError> {
        let mut blocked: Set<[u32; 3]> = Set::default();
        for &e in d {
            if !self.contains_edge(e) {
                return Err(TriangulationError::UnknownEdge(e));
            }
            let Some(info) = self.flippable_info(e) else {
                return Ok(false);
            };
            let [_, r, _, l] = info.quad;
            for t in [sorted_triple(e.u, e.v, l), sorted_triple(e.u, e.v, r)] {
                if !blocked.insert(t) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Applies all flips of an independent set in place. Independence makes
    /// the member flips commute, so the result does not depend on order.
    /// Returns the new diagonals.
    pub fn apply_parallel_flip_in_place(
        &mut self,
        d: &[Edge],
    ) -> Result<Vec<Edge>, TriangulationError> {
        if !self.is_independent(d)? {
            return Err(TriangulationError::NotIndependent(format!(
                "{} edges, some flip conflicts or is not flippable",
                d.len()
            )));
        }
        let mut sorted: Vec<Edge> = d.to_vec();
        sorted.sort_unstable();
        sorted
            .iter()
            .map(|&e| self.flip_in_place(e))
            .collect::<Result<Vec<_>, _>>()
    }

    /// Non-destructive parallel flip.
    pub fn apply_parallel_flip(&self, d: &ParallelFlipSet) -> Result<Triangulation, TriangulationError> {
        let mut t = self.clone();
        t.apply_parallel_flip_in_place(&d.edges())?;
        Ok(t)
    }

    /// Inclusion-maximal independent set of flippable edges, built greedily
    /// over a seeded random permutation. Deterministic per seed.
    pub fn maximal_independent_flippable_set(&self, seed: u64) -> ParallelFlipSet {
        let mut flippable = self.flippable_edges();
        let mut rng = Rng::new(seed);
        rng.shuffle(&mut flippable);
        let mut blocked: Set<[u32; 3]> = Set::default();
        let mut chosen: Vec<FlippableEdge> = Vec::new();
        for f in flippable {
            let e = f.edge;
            let [_, r, _, l] = f.quad;
            let t1 = sorted_triple(e.u, e.v, l);
            let t2 = sorted_triple(e.u, e.v, r);
            if blocked.contains(&t1) || blocked.contains(&t2) {
                continue;
            }
            blocked.insert(t1);
            blocked.insert(t2);
            chosen.push(f);
        }
        chosen.sort_unstable_by_key(|f| f.edge);
        ParallelFlipSet { flips: chosen }
    }

    /// Number of proper crossings between the edges of two triangulations
    /// of the same point set.
    pub fn crossing_number(&self, other: &Triangulation) -> Result<u64, TriangulationError> {
        if !self.same_point_set(other) {
            return Err(TriangulationError::PointSetMismatch);
        }
        let mut grid = SegGrid::new(self.ps.bbox(), other.edge_count());
        for e in other.edges_sorted() {
            grid.insert(self.ps.point(e.u), self.ps.point(e.v));
        }
        let mut total = 0u64;
        for e in self.opp.keys() {
            let a = self.ps.point(e.u);
            let b = self.ps.point(e.v);
            total += grid.count_matches(a, b, |c, d| segments_cross(a, b, c, d));
        }
        Ok(total)
    }

    /// Edges contained in both triangulations, sorted.
    pub fn happy_edges(&self, other: &Triangulation) -> Result<Vec<Edge>, TriangulationError> {
        if !self.same_point_set(other) {
            return Err(TriangulationError::PointSetMismatch);
        }
        let mut shared: Vec<Edge> = self
            .opp
            .keys()
            .filter(|e| other.contains_edge(**e))
            .copied()
            .collect();
        shared.sort_unstable();
        Ok(shared)
    }

    /// Number of edges of `self` not present in `other`. Both triangulations
    /// have the same edge count, so this symmetric-difference half is
    /// symmetric in its arguments.
    pub fn edge_difference(&self, other: &Triangulation) -> Result<usize, TriangulationError> {
        if !self.same_point_set(other) {
            return Err(TriangulationError::PointSetMismatch);
        }
        Ok(self
            .opp
            .keys()
            .filter(|e| !other.contains_edge(**e))
            .count())
    }
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.ps.content_hash() == other.ps.content_hash()
            && self.hash == other.hash
            && self.opp.len() == other.opp.len()
            && self.opp.keys().all(|e| other.opp.contains_key(e))
    }
}

impl Eq for Triangulation {}

impl std::fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Triangulation")
            .field("n", &self.ps.len())
            .field("edges", &self.edge_count())
            .field("triangles", &self.triangle_count)
            .finish()
    }
}

/// Recovers the triangles of a validated planar edge set by walking the
/// faces of the rotation system (neighbors in exact CCW angular order).
/// The face left of directed edge u -> v continues with the neighbor of v
/// immediately before u in CCW order around v; interior faces come out as
/// CCW triangles and the single CW face must be the hull boundary cycle.
fn derive_faces(
    ps: &Arc<PointSet>,
    edges: &[Edge],
) -> Result<(Map<Edge, OppositePair>, usize), TriangulationError> {
    let n = ps.len();
    let broken = |msg: String| {
        TriangulationError::NotATriangulation(vec![Violation::BrokenFaceStructure(msg)])
    };

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for e in edges {
        adj[e.u as usize].push(e.v);
        adj[e.v as usize].push(e.u);
    }
    for (v, nbrs) in adj.iter_mut().enumerate() {
        let origin = ps.point(v as u32);
        nbrs.sort_unstable_by(|&a, &b| ccw_angle_order(origin, ps.point(a), ps.point(b)));
    }

    let mut pos: Map<(u32, u32), u32> = Map::default();
    for (v, nbrs) in adj.iter().enumerate() {
        for (i, &u) in nbrs.iter().enumerate() {
            pos.insert((v as u32, u), i as u32);
        }
    }

    let mut edge_index: Map<Edge, u32> = Map::default();
    for (i, e) in edges.iter().enumerate() {
        edge_index.insert(*e, i as u32);
    }
    let directed_id = |a: u32, b: u32| -> usize {
        let e = Edge::new(a, b);
        let i = edge_index[&e] as usize;
        2 * i + usize::from(a > b)
    };

    let mut visited = vec![false; 2 * edges.len()];
    let mut opp: Map<Edge, OppositePair> = Map::default();
    for e in edges {
        opp.insert(
            *e,
            OppositePair {
                left: None,
                right: None,
            },
        );
    }

    let mut interior_faces = 0usize;
    let mut outer_face: Option<Vec<u32>> = None;

    for start_edge in edges {
        for (a0, b0) in [(start_edge.u, start_edge.v), (start_edge.v, start_edge.u)] {
            if visited[directed_id(a0, b0)] {
                continue;
            }
            let mut face: Vec<u32> = Vec::new();
            let (mut a, mut b) = (a0, b0);
            loop {
                let id = directed_id(a, b);
                if visited[id] {
                    return Err(broken("face walk revisited a directed edge".into()));
                }
                visited[id] = true;
                face.push(a);
                let nbrs = &adj[b as usize];
                let j = pos[&(b, a)] as usize;
                let w = nbrs[(j + nbrs.len() - 1) % nbrs.len()];
                a = b;
                b = w;
                if (a, b) == (a0, b0) {
                    break;
                }
                if face.len() > 2 * edges.len() {
                    return Err(broken("face walk does not close".into()));
                }
            }
            if face.len() == 3
                && orientation_sign(
                    ps.point(face[0]),
                    ps.point(face[1]),
                    ps.point(face[2]),
                ) > 0
            {
                interior_faces += 1;
                for k in 0..3 {
                    let (x, y, z) = (face[k], face[(k + 1) % 3], face[(k + 2) % 3]);
                    let e = Edge::new(x, y);
                    let pair = opp.get_mut(&e).unwrap();
                    // Face is left of x -> y; map to the canonical side.
                    let slot = if x == e.u { &mut pair.left } else { &mut pair.right };
                    if slot.is_some() {
                        return Err(broken(format!("edge {:?} bounded by three faces", e)));
                    }
                    *slot = Some(z);
                }
            } else if outer_face.is_none() {
                face.reverse();
                outer_face = Some(face);
            } else {
                return Err(broken("more than one non-triangular or clockwise face".into()));
            }
        }
    }

    let outer = outer_face.ok_or_else(|| broken("no outer face found".into()))?;
    let cycle = ps.boundary_cycle();
    if outer.len() != cycle.len() || !cyclic_eq(&outer, cycle) {
        return Err(broken("outer face does not match the hull boundary".into()));
    }
    if interior_faces != ps.expected_triangle_count() {
        return Err(broken(format!(
            "expected {} triangles, found {}",
            ps.expected_triangle_count(),
            interior_faces
        )));
    }
    Ok((opp, interior_faces))
}

/// CCW angular order around `origin`, starting from the positive x axis.
fn ccw_angle_order(origin: Point, a: Point, b: Point) -> std::cmp::Ordering {
    let half = |p: Point| -> u8 {
        let dy = p.y as i128 - origin.y as i128;
        let dx = p.x as i128 - origin.x as i128;
        if dy > 0 || (dy == 0 && dx > 0) {
            0
        } else {
            1
        }
    };
    let (ha, hb) = (half(a), half(b));
    if ha != hb {
        return ha.cmp(&hb);
    }
    // Same half plane: a before b iff a x b turns left.
    match orientation_sign(origin, a, b) {
        1 => std::cmp::Ordering::Less,
        -1 => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    }
}

fn cyclic_eq(a: &[u32], b: &[u32]) -> bool {
    if a.len() != b.len() || a.is_empty() {
        return a.len() == b.len();
    }
    let Some(offset) = a.iter().position(|&x| x == b[0]) else {
        return false;
    };
    (0..a.len()).all(|i| a[(offset + i) % a.len()] == b[i])
}

/// Builds a triangulation by drawing all point pairs in seeded random order
/// and greedily keeping each edge that does not conflict with an already
/// kept one. The result is a maximal planar straight-line graph, i.e. a
/// triangulation. Deterministic per seed.
pub fn greedy_random_triangulation(
    ps: &Arc<PointSet>,
    seed: u64,
) -> Result<Triangulation, TriangulationError> {
    greedy_completion(ps, &[], seed)
}

/// Greedy completion of a partial edge set to a full triangulation: the
/// `initial` edges are tried first in the given order, then all remaining
/// point pairs in seeded random order; every edge is kept only if it does
/// not conflict with an already kept one and its open interior contains no
/// point of the set (such an edge can never belong to any triangulation,
/// and accepting one would leave a collinear middle point unservable).
pub fn greedy_completion(
    ps: &Arc<PointSet>,
    initial: &[Edge],
    seed: u64,
) -> Result<Triangulation, TriangulationError> {
    let n = ps.len() as u32;
    let target = ps.expected_edge_count();
    let mut grid = SegGrid::new(ps.bbox(), target);
    // Zero-length segments make the grid double as a point index.
    let mut point_grid = SegGrid::new(ps.bbox(), ps.len());
    for p in ps.points() {
        point_grid.insert(*p, *p);
    }
    let mut kept: Vec<Edge> = Vec::with_capacity(target);
    let mut present: Set<Edge> = Set::default();

    let mut try_insert = |e: Edge,
                          grid: &mut SegGrid,
                          point_grid: &mut SegGrid,
                          present: &mut Set<Edge>,
                          kept: &mut Vec<Edge>| {
        if present.contains(&e) {
            return;
        }
        let a = ps.point(e.u);
        let b = ps.point(e.v);
        if point_grid
            .find_match(a, b, |p, _| point_in_open_segment(a, b, p))
            .is_some()
        {
            return;
        }
        if grid
            .find_match(a, b, |c, d| segments_conflict(a, b, c, d))
            .is_none()
        {
            grid.insert(a, b);
            present.insert(e);
            kept.push(e);
        }
    };

    for &e in initial {
        if e.u >= n || e.v >= n {
            return Err(TriangulationError::DegenerateInput("edge index out of range"));
        }
        try_insert(e, &mut grid, &mut point_grid, &mut present, &mut kept);
    }

    let mut candidates: Vec<u64> = Vec::with_capacity(n as usize * (n as usize - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            candidates.push(((u as u64) << 32) | v as u64);
        }
    }
    let mut rng = Rng::new(seed);
    rng.shuffle(&mut candidates);

    for cand in candidates {
        if kept.len() == target {
            break;
        }
        let e = Edge::new((cand >> 32) as u32, cand as u32);
        try_insert(e, &mut grid, &mut point_grid, &mut present, &mut kept);
    }

    Triangulation::build(Arc::clone(ps), &kept)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn square_ps() -> Arc<PointSet> {
        PointSet::new(vec![
            Point::new(0, 0),
            Point::new(2, 0),
            Point::new(2, 2),
            Point::new(0, 2),
        ])
        .unwrap()
    }

    /// The square triangulation holding diagonal (0,2) or (1,3).
    pub fn square_tri(ps: &Arc<PointSet>, diag02: bool) -> Triangulation {
        let mut edges = vec![
            Edge::new(0, 1),
            Edge::new(1, 2),
            Edge::new(2, 3),
            Edge::new(0, 3),
        ];
        edges.push(if diag02 { Edge::new(0, 2) } else { Edge::new(1, 3) });
        Triangulation::build(Arc::clone(ps), &edges).unwrap()
    }

    pub fn pentagon_ps() -> Arc<PointSet> {
        PointSet::new(vec![
            Point::new(0, 0),
            Point::new(4, 0),
            Point::new(6, 3),
            Point::new(2, 6),
            Point::new(-2, 3),
        ])
        .unwrap()
    }

    /// Fan triangulation of the convex pentagon from vertex `apex`.
    pub fn pentagon_fan(ps: &Arc<PointSet>, apex: u32) -> Triangulation {
        let mut edges: Vec<Edge> = (0..5).map(|i| Edge::new(i, (i + 1) % 5)).collect();
        edges.push(Edge::new(apex, (apex + 2) % 5));
        edges.push(Edge::new(apex, (apex + 3) % 5));
        Triangulation::build(Arc::clone(ps), &edges).unwrap()
    }
}
