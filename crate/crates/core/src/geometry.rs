//! Exact integer predicates on planar points.
//!
//! All decisions (turn direction, segment crossing, convexity, hull
//! membership) are made with exact signed integer arithmetic. Coordinate
//! differences of two i64 values fit in i128, and the products inside the
//! cross product are compared through 128-bit unsigned magnitudes, so no
//! input within the 64-bit coordinate range can overflow. There is no
//! floating point anywhere in a decision path.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point with exact integer coordinates.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

impl std::fmt::Debug for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

/// Turn direction of an ordered point triple.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
}

/// Sign of `a*b - c*d` for i128 factors whose magnitudes are at most
/// 2^64 - 1 (the range of differences of two i64 coordinates).
///
/// |a*b| <= (2^64 - 1)^2 < 2^128, so the magnitudes fit in u128 and the
/// comparison is exact.
fn sign_of_product_difference(a: i128, b: i128, c: i128, d: i128) -> i8 {
    let sign = |neg: bool, mag: u128| -> i8 {
        if mag == 0 {
            0
        } else if neg {
            -1
        } else {
            1
        }
    };
    let m1 = a.unsigned_abs() * b.unsigned_abs();
    let m2 = c.unsigned_abs() * d.unsigned_abs();
    let s1 = sign((a < 0) != (b < 0), m1);
    let s2 = sign((c < 0) != (d < 0), m2);
    match (s1 >= 0, s2 >= 0) {
        (true, false) => 1,
        (false, true) => -1,
        (true, true) => match m1.cmp(&m2) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        },
        (false, false) => match m2.cmp(&m1) {
            std::cmp::Ordering::Greater => 1,
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
        },
    }
}

/// Exact sign of the cross product `(q - p) x (r - p)`:
/// 1 for a left turn, -1 for a right turn, 0 for collinear.
#[inline]
pub fn orientation_sign(p: Point, q: Point, r: Point) -> i8 {
    let ax = q.x as i128 - p.x as i128;
    let ay = q.y as i128 - p.y as i128;
    let bx = r.x as i128 - p.x as i128;
    let by = r.y as i128 - p.y as i128;
    sign_of_product_difference(ax, by, ay, bx)
}

/// Orientation of the ordered triple (p, q, r).
#[inline]
pub fn orientation(p: Point, q: Point, r: Point) -> Orientation {
    match orientation_sign(p, q, r) {
        1 => Orientation::CounterClockwise,
        -1 => Orientation::Clockwise,
        _ => Orientation::Collinear,
    }
}

/// True if `p` lies on the closed segment `ab`. Assumes the three points
/// are collinear.
#[inline]
fn collinear_on_segment(a: Point, b: Point, p: Point) -> bool {
    debug_assert_eq!(orientation_sign(a, b, p), 0);
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// True iff the open segments `ab` and `cd` share exactly one interior
/// point (a proper crossing). Shared endpoints, endpoint-on-interior
/// contacts and collinear overlaps do not count.
pub fn segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orientation_sign(a, b, c);
    let o2 = orientation_sign(a, b, d);
    let o3 = orientation_sign(c, d, a);
    let o4 = orientation_sign(c, d, b);
    (o1 as i32) * (o2 as i32) < 0 && (o3 as i32) * (o4 as i32) < 0
}

/// True iff `p` lies on segment `st` but is not one of its endpoints. An
/// edge whose open interior contains another point of the set can never be
/// part of a straight-line triangulation of that set.
#[inline]
pub fn point_in_open_segment(s: Point, t: Point, p: Point) -> bool {
    p != s && p != t && orientation_sign(s, t, p) == 0 && collinear_on_segment(s, t, p)
}

/// True iff the closed segments `ab` and `cd` share any point other than a
/// common endpoint. This is the planarity test: proper crossings,
/// endpoint-on-interior contacts and collinear overlaps all conflict, while
/// two edges meeting only at a shared endpoint do not.
///
/// The non-crossing contact cases reduce to two checks: identical segments,
/// or an endpoint of one segment inside the relative interior of the other.
/// Any collinear overlap of positive length that is not the identical pair
/// puts some endpoint strictly inside the other segment.
pub fn segments_conflict(a: Point, b: Point, c: Point, d: Point) -> bool {
    if segments_cross(a, b, c, d) {
        return true;
    }
    if (a == c && b == d) || (a == d && b == c) {
        return true;
    }
    point_in_open_segment(a, b, c)
        || point_in_open_segment(a, b, d)
        || point_in_open_segment(c, d, a)
        || point_in_open_segment(c, d, b)
}

/// True iff a, b, c, d are the vertices of a strictly convex quadrilateral
/// in this boundary order. Any collinear triple makes the answer false.
pub fn is_strictly_convex_quad(a: Point, b: Point, c: Point, d: Point) -> bool {
    let s1 = orientation_sign(a, b, c);
    if s1 == 0 {
        return false;
    }
    s1 == orientation_sign(b, c, d)
        && s1 == orientation_sign(c, d, a)
        && s1 == orientation_sign(d, a, b)
}

/// Convex hull via Andrew's monotone chain, returning indices of hull
/// corners in counter-clockwise order. Points collinear on a hull edge are
/// excluded from the corner list (they still count toward the boundary
/// size, see [`hull_boundary_count`]).
pub fn convex_hull(points: &[Point]) -> Result<Vec<u32>, GeometryError> {
    if points.len() < 3 {
        return Err(GeometryError::DegenerateInput("fewer than 3 points"));
    }
    let mut idx: Vec<u32> = (0..points.len() as u32).collect();
    idx.sort_unstable_by_key(|&i| (points[i as usize].x, points[i as usize].y));

    let build = |order: &[u32]| -> Vec<u32> {
        let mut chain: Vec<u32> = Vec::new();
        for &i in order {
            while chain.len() >= 2 {
                let a = points[chain[chain.len() - 2] as usize];
                let b = points[chain[chain.len() - 1] as usize];
                // Strict left turns only: collinear middle points are dropped.
                if orientation_sign(a, b, points[i as usize]) <= 0 {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(i);
        }
        chain
    };

    let lower = build(&idx);
    let rev: Vec<u32> = idx.iter().rev().copied().collect();
    let upper = build(&rev);

    let mut hull = lower;
    hull.pop();
    hull.extend_from_slice(&upper[..upper.len().saturating_sub(1)]);
    if hull.len() < 3 {
        return Err(GeometryError::DegenerateInput("all points collinear"));
    }
    Ok(hull)
}

/// Number of points lying on the convex hull boundary, including points
/// collinear between two hull corners. This is the `h` in the edge and
/// triangle count formulas.
pub fn hull_boundary_count(points: &[Point], hull: &[u32]) -> usize {
    let mut on_boundary = 0usize;
    for (pi, &p) in points.iter().enumerate() {
        let mut found = hull.iter().any(|&h| h as usize == pi);
        if !found {
            for k in 0..hull.len() {
                let a = points[hull[k] as usize];
                let b = points[hull[(k + 1) % hull.len()] as usize];
                if orientation_sign(a, b, p) == 0 && collinear_on_segment(a, b, p) {
                    found = true;
                    break;
                }
            }
        }
        if found {
            on_boundary += 1;
        }
    }
    on_boundary
}

/// Hull boundary traversal as an ordered CCW cycle of point indices,
/// including collinear boundary points in their position along each edge.
pub fn hull_boundary_cycle(points: &[Point], hull: &[u32]) -> Vec<u32> {
    let mut cycle = Vec::with_capacity(hull.len());
    for k in 0..hull.len() {
        let ha = hull[k];
        let hb = hull[(k + 1) % hull.len()];
        let a = points[ha as usize];
        let b = points[hb as usize];
        let mut between: Vec<u32> = (0..points.len() as u32)
            .filter(|&i| {
                i != ha
                    && i != hb
                    && orientation_sign(a, b, points[i as usize]) == 0
                    && collinear_on_segment(a, b, points[i as usize])
            })
            .collect();
        // Order along the edge from a to b.
        between.sort_unstable_by_key(|&i| {
            let p = points[i as usize];
            ((p.x - a.x).abs(), (p.y - a.y).abs())
        });
        cycle.push(ha);
        cycle.extend(between);
    }
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn orientation_canonical_triples() {
        assert_eq!(orientation(p(0, 0), p(1, 0), p(0, 1)), Orientation::CounterClockwise);
        assert_eq!(orientation(p(0, 0), p(1, 1), p(2, 2)), Orientation::Collinear);
        assert_eq!(orientation(p(0, 0), p(0, 1), p(1, 0)), Orientation::Clockwise);
    }

    #[test]
    fn orientation_swap_antisymmetry() {
        let (a, b, c) = (p(3, 1), p(-2, 5), p(7, -4));
        assert_eq!(orientation_sign(a, b, c), -orientation_sign(a, c, b));
        assert_eq!(orientation_sign(a, b, c), -orientation_sign(b, a, c));
    }

    #[test]
    fn orientation_extreme_coordinates() {
        // Products of differences exceed i128 here; the u128 magnitude path
        // must still get the sign right.
        let a = p(i64::MIN, i64::MIN);
        let b = p(i64::MAX, i64::MIN);
        let c = p(i64::MAX, i64::MAX);
        assert_eq!(orientation(a, b, c), Orientation::CounterClockwise);
        assert_eq!(orientation(a, c, b), Orientation::Clockwise);
        let d = p(0, 0);
        assert_eq!(orientation(a, d, c), Orientation::Collinear);
    }

    #[test]
    fn crossing_examples() {
        assert!(segments_cross(p(0, 0), p(2, 2), p(0, 2), p(2, 0)));
        assert!(!segments_cross(p(0, 0), p(1, 0), p(1, 0), p(2, 1)));
        // Collinear overlap: not a crossing, but a conflict.
        assert!(!segments_cross(p(0, 0), p(2, 0), p(1, 0), p(3, 0)));
        assert!(segments_conflict(p(0, 0), p(2, 0), p(1, 0), p(3, 0)));
    }

    #[test]
    fn conflict_endpoint_cases() {
        // Shared endpoint only: fine.
        assert!(!segments_conflict(p(0, 0), p(1, 0), p(1, 0), p(2, 1)));
        // Endpoint of one in the interior of the other: conflict.
        assert!(segments_conflict(p(0, 0), p(2, 0), p(1, 0), p(1, 5)));
        // Collinear extension sharing one endpoint, opposite sides: fine.
        assert!(!segments_conflict(p(0, 0), p(2, 0), p(2, 0), p(4, 0)));
        // Collinear containment sharing one endpoint: conflict.
        assert!(segments_conflict(p(0, 0), p(2, 0), p(0, 0), p(1, 0)));
        // Identical segments: conflict.
        assert!(segments_conflict(p(0, 0), p(2, 0), p(0, 0), p(2, 0)));
        // Disjoint collinear: fine.
        assert!(!segments_conflict(p(0, 0), p(1, 0), p(2, 0), p(3, 0)));
    }

    #[test]
    fn convex_quad_examples() {
        assert!(is_strictly_convex_quad(p(0, 0), p(1, 0), p(1, 1), p(0, 1)));
        // Reflex at (1,1).
        assert!(!is_strictly_convex_quad(p(0, 0), p(2, 0), p(1, 1), p(1, 3)));
        // Collinear triple.
        assert!(!is_strictly_convex_quad(p(0, 0), p(1, 0), p(2, 0), p(1, 1)));
    }

    #[test]
    fn quad_cyclic_invariance() {
        let (a, b, c, d) = (p(0, 0), p(4, 1), p(5, 5), p(-1, 3));
        assert!(is_strictly_convex_quad(a, b, c, d));
        assert!(is_strictly_convex_quad(b, c, d, a));
        assert!(is_strictly_convex_quad(c, d, a, b));
        assert!(is_strictly_convex_quad(d, a, b, c));
        // Full reversal preserves convexity.
        assert!(is_strictly_convex_quad(d, c, b, a));
    }

    #[test]
    fn hull_square_and_interior() {
        let pts = [p(0, 0), p(10, 0), p(10, 10), p(0, 10), p(5, 5)];
        let hull = convex_hull(&pts).unwrap();
        let mut sorted = hull.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
        assert_eq!(hull_boundary_count(&pts, &hull), 4);
    }

    #[test]
    fn hull_five_convex_points() {
        let pts = [p(0, 0), p(4, 0), p(6, 3), p(2, 6), p(-2, 3)];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.len(), 5);
    }

    #[test]
    fn hull_collinear_boundary_points_counted() {
        // (1,0) sits between corners (0,0) and (2,0): not a corner, still
        // a boundary point.
        let pts = [p(0, 0), p(1, 0), p(2, 0), p(2, 2), p(0, 2)];
        let hull = convex_hull(&pts).unwrap();
        assert_eq!(hull.len(), 4);
        assert!(!hull.contains(&1));
        assert_eq!(hull_boundary_count(&pts, &hull), 5);
        let cycle = hull_boundary_cycle(&pts, &hull);
        assert_eq!(cycle.len(), 5);
        assert!(cycle.contains(&1));
    }

    #[test]
    fn hull_all_collinear_rejected() {
        let pts = [p(0, 0), p(1, 1), p(2, 2), p(3, 3)];
        assert!(convex_hull(&pts).is_err());
    }

    #[test]
    fn hull_ccw_order() {
        let pts = [p(0, 0), p(10, 0), p(10, 10), p(0, 10)];
        let hull = convex_hull(&pts).unwrap();
        for k in 0..hull.len() {
            let a = pts[hull[k] as usize];
            let b = pts[hull[(k + 1) % hull.len()] as usize];
            let c = pts[hull[(k + 2) % hull.len()] as usize];
            assert_eq!(orientation(a, b, c), Orientation::CounterClockwise);
        }
    }
}
