//! Largest-empty-rectangle queries over points in a rectangular region.
//!
//! All maximal empty rectangles are enumerated with corridor sweeps, the
//! region is cut into the grid induced by the point coordinates, and every
//! cell stores its largest covering rectangle (cells lie fully inside or
//! fully outside every maximal rectangle). Queries are two binary searches.

use std::collections::BTreeSet;

use crate::geom::{eps_geom, AxisRect, Error, Point2, QueryAnswer, Result};

#[derive(Debug)]
pub struct MerIndex {
    region: AxisRect,
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Maximal empty rectangles, ordered by decreasing area.
    pub mers: Vec<AxisRect>,
    /// cell_mer[row][col] indexes into `mers`.
    cell_mer: Vec<Vec<u32>>,
}

fn validate(points: &[Point2], region: &AxisRect) -> Result<()> {
    let eps = eps_geom();
    for p in points {
        if !region.contains_strict(*p) {
            return Err(Error::DegenerateInput("point not strictly inside region".into()));
        }
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ys: Vec<f64> = points.iter().map(|p| p.y).collect();
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for w in xs.windows(2) {
        if (w[1] - w[0]).abs() <= eps {
            return Err(Error::DegenerateInput("two points share an x coordinate".into()));
        }
    }
    for w in ys.windows(2) {
        if (w[1] - w[0]).abs() <= eps {
            return Err(Error::DegenerateInput("two points share a y coordinate".into()));
        }
    }
    Ok(())
}

/// All maximal empty rectangles: corridor sweeps from every left and right
/// point support plus the full-width gaps between consecutive y values.
pub fn enumerate_mers(points: &[Point2], region: &AxisRect) -> Result<Vec<AxisRect>> {
    validate(points, region)?;
    let mut out: Vec<AxisRect> = Vec::new();
    let mut push = |r: AxisRect| {
        if !out.iter().any(|o| o.same_as(&r, 1e-12)) {
            out.push(r);
        }
    };
    let mut by_x: Vec<Point2> = points.to_vec();
    by_x.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap());

    // Corridor walk rightward from a left support.
    for (i, p) in by_x.iter().enumerate() {
        let mut lo = region.ymin;
        let mut hi = region.ymax;
        for q in by_x[i + 1..].iter() {
            if q.y > lo && q.y < hi {
                push(AxisRect { xmin: p.x, xmax: q.x, ymin: lo, ymax: hi });
                if q.y > p.y {
                    hi = q.y;
                } else {
                    lo = q.y;
                }
            }
        }
        push(AxisRect { xmin: p.x, xmax: region.xmax, ymin: lo, ymax: hi });
    }
    // Leftward from a right support (catches rectangles pinned on the
    // region's left side).
    for (i, p) in by_x.iter().enumerate() {
        let mut lo = region.ymin;
        let mut hi = region.ymax;
        for q in by_x[..i].iter().rev() {
            if q.y > lo && q.y < hi {
                push(AxisRect { xmin: q.x, xmax: p.x, ymin: lo, ymax: hi });
                if q.y > p.y {
                    hi = q.y;
                } else {
                    lo = q.y;
                }
            }
        }
        push(AxisRect { xmin: region.xmin, xmax: p.x, ymin: lo, ymax: hi });
    }
    // Full-width corridors between consecutive y values.
    let mut ys: Vec<f64> = vec![region.ymin, region.ymax];
    ys.extend(points.iter().map(|p| p.y));
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for w in ys.windows(2) {
        if w[1] > w[0] {
            push(AxisRect { xmin: region.xmin, xmax: region.xmax, ymin: w[0], ymax: w[1] });
        }
    }
    Ok(out)
}

/// Grid cells, rectangle enumeration and the per-cell largest assignment.
pub fn preprocess_qmer(points: &[Point2], region: &AxisRect) -> Result<MerIndex> {
    let mut mers = enumerate_mers(points, region)?;
    mers.sort_by(|a, b| {
        b.area()
            .partial_cmp(&a.area())
            .unwrap()
            .then((a.xmin, a.ymin, a.xmax, a.ymax).partial_cmp(&(b.xmin, b.ymin, b.xmax, b.ymax)).unwrap())
    });
    let mut xs: Vec<f64> = vec![region.xmin, region.xmax];
    xs.extend(points.iter().map(|p| p.x));
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ys: Vec<f64> = vec![region.ymin, region.ymax];
    ys.extend(points.iter().map(|p| p.y));
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let cols = xs.len() - 1;
    let rows = ys.len() - 1;
    const UNASSIGNED: u32 = u32::MAX;
    let mut cell_mer = vec![vec![UNASSIGNED; cols]; rows];
    // Alive representative points per row, keyed by column; rectangles are
    // processed in decreasing area, reporting and deleting covered cells.
    let mut alive: Vec<BTreeSet<u32>> = (0..rows)
        .map(|_| (0..cols as u32).collect())
        .collect();
    for (mi, m) in mers.iter().enumerate() {
        // Cells covered by m form an index rectangle; grid lines include
        // every rectangle side, so lookups are exact.
        let c0 = xs.partition_point(|&x| x < m.xmin);
        let c1 = xs.partition_point(|&x| x < m.xmax);
        let r0 = ys.partition_point(|&y| y < m.ymin);
        let r1 = ys.partition_point(|&y| y < m.ymax);
        debug_assert!(xs[c0] == m.xmin && xs[c1] == m.xmax);
        for row in r0..r1 {
            let covered: Vec<u32> = alive[row]
                .range(c0 as u32..c1 as u32)
                .copied()
                .collect();
            for c in covered {
                cell_mer[row][c as usize] = mi as u32;
                alive[row].remove(&c);
            }
        }
    }
    // Every cell lies inside at least one maximal rectangle.
    for row in &cell_mer {
        for &c in row {
            if c == UNASSIGNED {
                return Err(Error::DegenerateInput("grid cell missed by every rectangle".into()));
            }
        }
    }
    Ok(MerIndex { region: *region, xs, ys, mers, cell_mer })
}

impl MerIndex {
    pub fn region(&self) -> &AxisRect {
        &self.region
    }

    /// Number of arrangement cells (faces, line segments and crossings) of
    /// the grid; the index stores the faces, lower-dimensional cells
    /// resolve through the larger neighbor at query time.
    pub fn cell_count(&self) -> usize {
        let k = self.xs.len() - 2; // interior vertical lines
        let m = self.ys.len() - 2;
        (2 * k + 1) * (2 * m + 1)
    }

    pub fn face_count(&self) -> usize {
        (self.xs.len() - 1) * (self.ys.len() - 1)
    }

    pub fn cell_of(&self, q: Point2) -> Option<(usize, usize)> {
        if !self.region.contains_strict(q) {
            return None;
        }
        let col = self.xs.partition_point(|&x| x <= q.x) - 1;
        let row = self.ys.partition_point(|&y| y <= q.y) - 1;
        Some((row.min(self.ys.len() - 2), col.min(self.xs.len() - 2)))
    }

    /// Largest empty rectangle containing q. Queries on a grid line take
    /// the neighboring cell with the larger assigned rectangle.
    pub fn query(&self, q: Point2) -> Result<QueryAnswer> {
        let eps = eps_geom();
        let (row, col) = self.cell_of(q).ok_or(Error::OutsideRegion)?;
        let mut cols = vec![col];
        let mut rows = vec![row];
        if col > 0 && (q.x - self.xs[col]).abs() <= eps {
            cols.push(col - 1);
        }
        if col + 2 < self.xs.len() && (q.x - self.xs[col + 1]).abs() <= eps {
            cols.push(col + 1);
        }
        if row > 0 && (q.y - self.ys[row]).abs() <= eps {
            rows.push(row - 1);
        }
        if row + 2 < self.ys.len() && (q.y - self.ys[row + 1]).abs() <= eps {
            rows.push(row + 1);
        }
        let mut best: Option<u32> = None;
        for &r in &rows {
            for &c in &cols {
                let mi = self.cell_mer[r][c];
                if best.map_or(true, |b| {
                    self.mers[mi as usize].area() > self.mers[b as usize].area()
                }) {
                    best = Some(mi);
                }
            }
        }
        let mi = best.unwrap();
        Ok(QueryAnswer::Rectangle { rect: self.mers[mi as usize], witness: Some(mi as usize) })
    }
}

pub fn query_qmer(idx: &MerIndex, q: Point2) -> Result<QueryAnswer> {
    idx.query(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use crate::instances::random_rect_instance;
    use crate::oracle::{brute_force_mers, oracle_qmer};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_region() -> AxisRect {
        AxisRect::new(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn zero_points_whole_region() {
        let region = unit_region();
        let mers = enumerate_mers(&[], &region).unwrap();
        assert_eq!(mers.len(), 1);
        assert!(mers[0].same_as(&region, 1e-15));
        let idx = preprocess_qmer(&[], &region).unwrap();
        let ans = idx.query(pt(0.3, 0.9)).unwrap();
        assert!(ans.rect().unwrap().same_as(&region, 1e-15));
    }

    #[test]
    fn one_point_four_slabs() {
        let region = unit_region();
        let p = [pt(0.3, 0.4)];
        let mers = enumerate_mers(&p, &region).unwrap();
        assert_eq!(mers.len(), 4);
        let idx = preprocess_qmer(&p, &region).unwrap();
        assert_eq!(idx.cell_count(), 9);
        // Larger slab contains this query.
        let ans = idx.query(pt(0.8, 0.8)).unwrap();
        assert!(ans
            .rect()
            .unwrap()
            .same_as(&AxisRect::new(0.3, 1.0, 0.0, 1.0).unwrap(), 1e-12));
        // Corner cell gets the larger adjacent slab: cell (0..0.3)x(0..0.4)
        // belongs to the left slab (area 0.3) vs bottom slab (area 0.4).
        let corner = idx.query(pt(0.1, 0.1)).unwrap();
        assert!(corner
            .rect()
            .unwrap()
            .same_as(&AxisRect::new(0.0, 1.0, 0.0, 0.4).unwrap(), 1e-12));
        assert_eq!(idx.query(pt(2.0, 0.5)), Err(Error::OutsideRegion));
    }

    #[test]
    fn enumeration_complete_against_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..40 {
            let n = rng.gen_range(0..=12);
            let (pts, region) = random_rect_instance(&mut rng, n);
            let mut got = enumerate_mers(&pts, &region).unwrap();
            let mut want = brute_force_mers(&pts, &region);
            let key = |r: &AxisRect| (r.xmin, r.ymin, r.xmax, r.ymax);
            got.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            want.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap());
            assert_eq!(got.len(), want.len(), "n={n}");
            for (g, w) in got.iter().zip(want.iter()) {
                assert!(g.same_as(w, 1e-9));
            }
            // Each point supports at least one rectangle side.
            assert!(got.len() >= n + 1);
        }
    }

    #[test]
    fn queries_match_oracle_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(92);
        for _ in 0..25 {
            let n = rng.gen_range(0..=12);
            let (pts, region) = random_rect_instance(&mut rng, n);
            let idx = preprocess_qmer(&pts, &region).unwrap();
            for _ in 0..30 {
                let q = pt(rng.gen_range(0.5..99.5), rng.gen_range(0.5..99.5));
                let got = idx.query(q).unwrap();
                let want = oracle_qmer(&pts, &region, q).unwrap();
                assert!(
                    got.rect().unwrap().same_as(want.rect().unwrap(), 1e-9),
                    "q={q:?}: {got:?} vs {want:?}"
                );
            }
        }
    }

    #[test]
    fn cell_invariance_and_maximality() {
        let mut rng = ChaCha8Rng::seed_from_u64(93);
        for _ in 0..10 {
            let n = rng.gen_range(1..=8);
            let (pts, region) = random_rect_instance(&mut rng, n);
            let idx = preprocess_qmer(&pts, &region).unwrap();
            for row in 0..idx.ys.len() - 1 {
                for col in 0..idx.xs.len() - 1 {
                    let (x0, x1) = (idx.xs[col], idx.xs[col + 1]);
                    let (y0, y1) = (idx.ys[row], idx.ys[row + 1]);
                    let mut seen: Option<AxisRect> = None;
                    for _ in 0..10 {
                        let q = pt(rng.gen_range(x0..x1), rng.gen_range(y0..y1));
                        let r = *idx.query(q).unwrap().rect().unwrap();
                        match seen {
                            None => seen = Some(r),
                            Some(s) => assert!(s.same_as(&r, 0.0), "cell answers differ"),
                        }
                    }
                    // Maximality: each side touches a point or the region.
                    let r = seen.unwrap();
                    let touch_v = |x: f64, at: bool| {
                        at || pts
                            .iter()
                            .any(|p| (p.x - x).abs() < 1e-12 && p.y > r.ymin && p.y < r.ymax)
                    };
                    let touch_h = |y: f64, at: bool| {
                        at || pts
                            .iter()
                            .any(|p| (p.y - y).abs() < 1e-12 && p.x > r.xmin && p.x < r.xmax)
                    };
                    assert!(touch_v(r.xmin, (r.xmin - region.xmin).abs() < 1e-12));
                    assert!(touch_v(r.xmax, (r.xmax - region.xmax).abs() < 1e-12));
                    assert!(touch_h(r.ymin, (r.ymin - region.ymin).abs() < 1e-12));
                    assert!(touch_h(r.ymax, (r.ymax - region.ymax).abs() < 1e-12));
                    // Emptiness.
                    assert!(pts.iter().all(|p| !(p.x > r.xmin + 1e-12
                        && p.x < r.xmax - 1e-12
                        && p.y > r.ymin + 1e-12
                        && p.y < r.ymax - 1e-12)));
                }
            }
        }
    }

    #[test]
    fn coordinate_ties_rejected() {
        let region = unit_region();
        let pts = [pt(0.3, 0.4), pt(0.3, 0.7)];
        assert!(matches!(
            enumerate_mers(&pts, &region),
            Err(Error::DegenerateInput(_))
        ));
    }
}
