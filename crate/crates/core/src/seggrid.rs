//! Uniform grid over line segments for fast conflict and crossing queries.
//!
//! Segments are registered in every grid cell they pass through (computed by
//! an exact column sweep with one row of slack, so registration is always a
//! superset of the true cell cover). Two segments can only intersect inside
//! a cell that holds both, so querying the cells of a probe segment finds
//! every conflicting partner. Queries deduplicate candidates with a stamp
//! array, and callers supply the exact predicate.

use crate::geometry::Point;

#[derive(Copy, Clone)]
struct GridGeom {
    min_x: i64,
    min_y: i64,
    cell_w: u64,
    cell_h: u64,
    cols: usize,
    rows: usize,
}

impl GridGeom {
    #[inline]
    fn col_of(&self, x: i64) -> usize {
        let off = (x as i128 - self.min_x as i128).max(0) as u128;
        ((off / self.cell_w as u128) as usize).min(self.cols - 1)
    }

    #[inline]
    fn row_of(&self, y: i64) -> usize {
        let off = (y as i128 - self.min_y as i128).max(0) as u128;
        ((off / self.cell_h as u128) as usize).min(self.rows - 1)
    }

    /// Visits each (col, row_lo, row_hi) strip covered by the segment. The
    /// row interval per column comes from f64 interpolation widened by one
    /// row on each side; over-approximation is harmless, missing a cell is
    /// not, and one row of slack dominates any rounding error because row
    /// indices stay below 1024.
    fn strips(&self, a: Point, b: Point, mut visit: impl FnMut(usize, usize, usize)) {
        let (l, r) = if a.x <= b.x { (a, b) } else { (b, a) };
        let c0 = self.col_of(l.x);
        let c1 = self.col_of(r.x);
        if c0 == c1 {
            let r0 = self.row_of(a.y.min(b.y));
            let r1 = self.row_of(a.y.max(b.y));
            visit(c0, r0, r1);
            return;
        }
        let x0 = l.x as f64;
        let x1 = r.x as f64;
        let y0 = l.y as f64;
        let y1 = r.y as f64;
        let inv_dx = 1.0 / (x1 - x0);
        for c in c0..=c1 {
            // x-range of this column clipped to the segment's x-range.
            let cx_lo = self.min_x as f64 + c as f64 * self.cell_w as f64;
            let cx_hi = cx_lo + self.cell_w as f64;
            let sx_lo = cx_lo.max(x0);
            let sx_hi = cx_hi.min(x1);
            let t_lo = (sx_lo - x0) * inv_dx;
            let t_hi = (sx_hi - x0) * inv_dx;
            let ya = y0 + t_lo * (y1 - y0);
            let yb = y0 + t_hi * (y1 - y0);
            let (ymin, ymax) = if ya <= yb { (ya, yb) } else { (yb, ya) };
            let r0 = self.row_of(ymin.floor() as i64).saturating_sub(1);
            let r1 = (self.row_of(ymax.ceil() as i64) + 1).min(self.rows - 1);
            visit(c, r0, r1);
        }
    }
}

pub struct SegGrid {
    geom: GridGeom,
    cells: Vec<Vec<u32>>,
    segments: Vec<(Point, Point)>,
    stamps: Vec<u32>,
    stamp: u32,
}

impl SegGrid {
    /// An empty grid covering `bbox` sized for roughly `expected` segments.
    pub fn new(bbox: (Point, Point), expected: usize) -> Self {
        let (lo, hi) = bbox;
        let span_x = (hi.x as i128 - lo.x as i128).max(0) as u128;
        let span_y = (hi.y as i128 - lo.y as i128).max(0) as u128;
        let side = ((expected.max(1) as f64).sqrt().ceil() as usize).clamp(1, 1024);
        let cols = if span_x == 0 { 1 } else { side };
        let rows = if span_y == 0 { 1 } else { side };
        let cell_w = ((span_x + cols as u128) / cols as u128).max(1) as u64;
        let cell_h = ((span_y + rows as u128) / rows as u128).max(1) as u64;
        SegGrid {
            geom: GridGeom {
                min_x: lo.x,
                min_y: lo.y,
                cell_w,
                cell_h,
                cols,
                rows,
            },
            cells: vec![Vec::new(); cols * rows],
            segments: Vec::new(),
            stamps: Vec::new(),
            stamp: 0,
        }
    }

    pub fn insert(&mut self, a: Point, b: Point) -> u32 {
        let id = self.segments.len() as u32;
        self.segments.push((a, b));
        self.stamps.push(0);
        let geom = self.geom;
        let cells = &mut self.cells;
        geom.strips(a, b, |c, r0, r1| {
            for r in r0..=r1 {
                cells[r * geom.cols + c].push(id);
            }
        });
        id
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.stamps.iter_mut().for_each(|s| *s = 0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// Calls `pred` on every registered segment sharing a cell with `ab`
    /// (each candidate once). Returns the id of the first segment for which
    /// `pred` is true, or None.
    pub fn find_match(
        &mut self,
        a: Point,
        b: Point,
        mut pred: impl FnMut(Point, Point) -> bool,
    ) -> Option<u32> {
        let stamp = self.next_stamp();
        let geom = self.geom;
        let cells = &self.cells;
        let stamps = &mut self.stamps;
        let segments = &self.segments;
        let mut hit: Option<u32> = None;
        geom.strips(a, b, |c, r0, r1| {
            if hit.is_some() {
                return;
            }
            for r in r0..=r1 {
                for &id in &cells[r * geom.cols + c] {
                    if stamps[id as usize] == stamp {
                        continue;
                    }
                    stamps[id as usize] = stamp;
                    let (sa, sb) = segments[id as usize];
                    if pred(sa, sb) {
                        hit = Some(id);
                        return;
                    }
                }
            }
        });
        hit
    }

    /// Counts registered segments sharing a cell with `ab` that satisfy
    /// `pred` (each candidate tested once).
    pub fn count_matches(
        &mut self,
        a: Point,
        b: Point,
        mut pred: impl FnMut(Point, Point) -> bool,
    ) -> u64 {
        let stamp = self.next_stamp();
        let geom = self.geom;
        let cells = &self.cells;
        let stamps = &mut self.stamps;
        let segments = &self.segments;
        let mut count = 0u64;
        geom.strips(a, b, |c, r0, r1| {
            for r in r0..=r1 {
                for &id in &cells[r * geom.cols + c] {
                    if stamps[id as usize] == stamp {
                        continue;
                    }
                    stamps[id as usize] = stamp;
                    let (sa, sb) = segments[id as usize];
                    if pred(sa, sb) {
                        count += 1;
                    }
                }
            }
        });
        count
    }
}
