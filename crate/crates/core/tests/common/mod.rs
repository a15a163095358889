//! Independent brute-force oracles for the integration tests.
//!
//! Everything here works on plain edge sets with its own predicates and its
//! own notion of faces and flips, so it exercises none of the library's
//! triangulation machinery beyond plain data extraction.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use flipcenter_core::{Edge, Point, PointSet, Triangulation};

pub type OEdge = (u32, u32);
pub type EdgeSet = BTreeSet<OEdge>;

pub fn oedge(a: u32, b: u32) -> OEdge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn edge_set_of(t: &Triangulation) -> EdgeSet {
    t.edges_sorted()
        .into_iter()
        .map(|e| (e.u(), e.v()))
        .collect()
}

pub fn edges_from_set(s: &EdgeSet) -> Vec<Edge> {
    s.iter().map(|&(u, v)| Edge::new(u, v)).collect()
}

fn orient_sign(pts: &[(i64, i64)], a: u32, b: u32, c: u32) -> i32 {
    let (ax, ay) = pts[a as usize];
    let (bx, by) = pts[b as usize];
    let (cx, cy) = pts[c as usize];
    let v = (bx as i128 - ax as i128) * (cy as i128 - ay as i128)
        - (by as i128 - ay as i128) * (cx as i128 - ax as i128);
    v.signum() as i32
}

pub fn points_of(ps: &Arc<PointSet>) -> Vec<(i64, i64)> {
    ps.points().iter().map(|p| (p.x, p.y)).collect()
}

/// Proper crossing of open segments, by strict orientation tests.
pub fn oracle_segments_cross(pts: &[(i64, i64)], e1: OEdge, e2: OEdge) -> bool {
    let (a, b) = e1;
    let (c, d) = e2;
    let o1 = orient_sign(pts, a, b, c);
    let o2 = orient_sign(pts, a, b, d);
    let o3 = orient_sign(pts, c, d, a);
    let o4 = orient_sign(pts, c, d, b);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// Number of proper crossings between two edge sets.
pub fn oracle_crossing_number(pts: &[(i64, i64)], s1: &EdgeSet, s2: &EdgeSet) -> u64 {
    let mut count = 0;
    for &e1 in s1 {
        for &e2 in s2 {
            if oracle_segments_cross(pts, e1, e2) {
                count += 1;
            }
        }
    }
    count
}

/// A triangle (u, v, w) is a face iff its three edges are present and no
/// other point lies strictly inside it.
fn is_face(pts: &[(i64, i64)], edges: &EdgeSet, u: u32, v: u32, w: u32) -> bool {
    if !edges.contains(&oedge(u, v)) || !edges.contains(&oedge(v, w)) || !edges.contains(&oedge(u, w))
    {
        return false;
    }
    let s = orient_sign(pts, u, v, w);
    if s == 0 {
        return false;
    }
    for p in 0..pts.len() as u32 {
        if p == u || p == v || p == w {
            continue;
        }
        if orient_sign(pts, u, v, p) == s
            && orient_sign(pts, v, w, p) == s
            && orient_sign(pts, w, u, p) == s
        {
            return false;
        }
    }
    true
}

/// The faces incident to an edge, found by trying every third point.
fn faces_of_edge(pts: &[(i64, i64)], edges: &EdgeSet, e: OEdge) -> Vec<[u32; 3]> {
    let (u, v) = e;
    let mut out = Vec::new();
    for w in 0..pts.len() as u32 {
        if w != u && w != v && is_face(pts, edges, u, v, w) {
            let mut t = [u, v, w];
            t.sort_unstable();
            out.push(t);
        }
    }
    out
}

/// A flippable edge with its opposite diagonal and its two faces.
#[derive(Clone, Debug)]
pub struct OracleFlip {
    pub edge: OEdge,
    pub opposite: OEdge,
    pub faces: [[u32; 3]; 2],
}

/// Interior edges whose two incident faces form a strictly convex quad;
/// equivalently, whose diagonals properly cross.
pub fn oracle_flippable(pts: &[(i64, i64)], edges: &EdgeSet) -> Vec<OracleFlip> {
    let mut out = Vec::new();
    for &e in edges {
        let faces = faces_of_edge(pts, edges, e);
        if faces.len() != 2 {
            continue;
        }
        let (u, v) = e;
        let w1 = *faces[0].iter().find(|&&x| x != u && x != v).unwrap();
        let w2 = *faces[1].iter().find(|&&x| x != u && x != v).unwrap();
        let opp = oedge(w1, w2);
        if oracle_segments_cross(pts, e, opp) {
            out.push(OracleFlip {
                edge: e,
                opposite: opp,
                faces: [faces[0], faces[1]],
            });
        }
    }
    out
}

fn apply_subset(edges: &EdgeSet, subset: &[&OracleFlip]) -> EdgeSet {
    let mut next = edges.clone();
    for f in subset {
        next.remove(&f.edge);
        next.insert(f.opposite);
    }
    next
}

/// All non-empty independent subsets of the flippable edges (no two sharing
/// a face), each applied to produce a successor edge set.
pub fn oracle_parallel_successors(pts: &[(i64, i64)], edges: &EdgeSet) -> Vec<EdgeSet> {
    let flips = oracle_flippable(pts, edges);
    assert!(flips.len() <= 22, "oracle subset enumeration too large");
    let mut out = Vec::new();
    for mask in 1u32..(1 << flips.len()) {
        let subset: Vec<&OracleFlip> = (0..flips.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &flips[i])
            .collect();
        let mut used: BTreeSet<[u32; 3]> = BTreeSet::new();
        let independent = subset
            .iter()
            .all(|f| used.insert(f.faces[0]) && used.insert(f.faces[1]));
        if independent {
            out.push(apply_subset(edges, &subset));
        }
    }
    out
}

/// Exact parallel flip distance by breadth-first search, or None if the
/// target is beyond `max_depth`.
pub fn oracle_parallel_distance(
    pts: &[(i64, i64)],
    start: &EdgeSet,
    target: &EdgeSet,
    max_depth: u32,
) -> Option<u32> {
    if start == target {
        return Some(0);
    }
    let mut seen: BTreeSet<EdgeSet> = BTreeSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start.clone()];
    for depth in 1..=max_depth {
        let mut next_frontier = Vec::new();
        for state in &frontier {
            for succ in oracle_parallel_successors(pts, state) {
                if &succ == target {
                    return Some(depth);
                }
                if seen.insert(succ.clone()) {
                    next_frontier.push(succ);
                }
            }
        }
        if next_frontier.is_empty() {
            return None;
        }
        frontier = next_frontier;
    }
    None
}

/// Distances from `start` to every reachable triangulation.
pub fn oracle_all_distances(
    pts: &[(i64, i64)],
    start: &EdgeSet,
) -> HashMap<EdgeSet, u32> {
    let mut dist: HashMap<EdgeSet, u32> = HashMap::new();
    dist.insert(start.clone(), 0);
    let mut queue: VecDeque<EdgeSet> = VecDeque::new();
    queue.push_back(start.clone());
    while let Some(state) = queue.pop_front() {
        let d = dist[&state];
        for succ in oracle_parallel_successors(pts, &state) {
            if !dist.contains_key(&succ) {
                dist.insert(succ.clone(), d + 1);
                queue.push_back(succ);
            }
        }
    }
    dist
}

/// All triangulations of the convex polygon 0..k (vertices in convex
/// position, cyclic order 0..k-1), as full edge sets including the hull.
pub fn convex_polygon_triangulations(k: u32) -> Vec<EdgeSet> {
    fn diagonal_sets(lo: u32, hi: u32) -> Vec<Vec<OEdge>> {
        // Triangulations of the sub-polygon lo..hi using base edge (lo, hi).
        if hi - lo < 2 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for apex in (lo + 1)..hi {
            for left in diagonal_sets(lo, apex) {
                for right in diagonal_sets(apex, hi) {
                    let mut d = left.clone();
                    d.extend(right.iter().copied());
                    if apex - lo >= 2 {
                        d.push((lo, apex));
                    }
                    if hi - apex >= 2 {
                        d.push((apex, hi));
                    }
                    out.push(d);
                }
            }
        }
        out
    }
    let mut result = Vec::new();
    for diagonals in diagonal_sets(0, k - 1) {
        let mut s: EdgeSet = (0..k).map(|i| oedge(i, (i + 1) % k)).collect();
        s.extend(diagonals);
        result.push(s);
    }
    result
}

/// n distinct random points on a grid, via a light multiplicative stream.
pub fn random_points(n: usize, range: i64, seed: u64) -> Vec<Point> {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut next = move || {
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        state.wrapping_mul(0x2545f4914f6cdd1d)
    };
    let mut seen = BTreeSet::new();
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let x = (next() % range as u64) as i64;
        let y = (next() % range as u64) as i64;
        if seen.insert((x, y)) {
            pts.push(Point::new(x, y));
        }
    }
    pts
}

/// n points in strictly convex position: integer parabola points.
pub fn parabola_points(n: usize) -> Vec<Point> {
    (0..n as i64).map(|i| Point::new(i, i * i)).collect()
}

pub fn pentagon_points() -> Vec<Point> {
    vec![
        Point::new(0, 0),
        Point::new(4, 0),
        Point::new(6, 3),
        Point::new(2, 6),
        Point::new(-2, 3),
    ]
}

/// Fan triangulation of the convex pentagon from vertex `apex`, as an
/// edge set.
pub fn pentagon_fan_set(apex: u32) -> EdgeSet {
    let mut s: EdgeSet = (0..5).map(|i| oedge(i, (i + 1) % 5)).collect();
    s.insert(oedge(apex, (apex + 2) % 5));
    s.insert(oedge(apex, (apex + 3) % 5));
    s
}

/// Builds a library triangulation from an oracle edge set.
pub fn build_from_set(ps: &Arc<PointSet>, s: &EdgeSet) -> Triangulation {
    Triangulation::build(Arc::clone(ps), &edges_from_set(s)).unwrap()
}
