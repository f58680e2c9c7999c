//! Brute-force reference answers for every query type.
//!
//! These never touch the index structures; they share only the planar
//! primitives, so index-vs-oracle agreement is a meaningful check. Cost is
//! no concern here (cubic and worse scans are fine at test sizes).

use crate::geom::{
    circumcircle, convex_hull, eps_geom, pt, AxisRect, Circle, Error, Point2, PointLocation,
    Polygon, QueryAnswer, Result,
};

/// Linear scan for the largest circle containing `q`; ties go to the
/// smaller index.
pub fn oracle_lcq(circles: &[Circle], q: Point2) -> QueryAnswer {
    let mut best: Option<(usize, &Circle)> = None;
    for (id, c) in circles.iter().enumerate() {
        if !c.contains(q) {
            continue;
        }
        match best {
            Some((_, b)) if b.radius >= c.radius => {}
            _ => best = Some((id, c)),
        }
    }
    match best {
        Some((id, c)) => QueryAnswer::bounded(*c, Some(id)),
        None => QueryAnswer::Null,
    }
}

fn inward_edge_normal(poly: &Polygon, i: usize) -> (Point2, Point2) {
    let (a, b) = poly.edge(i);
    let len = a.dist(b);
    // ccw ring: inward normal is the left normal of the edge direction.
    let n = pt(-(b.y - a.y) / len, (b.x - a.x) / len);
    (a, n)
}

fn line_dist(x: Point2, anchor: Point2, normal: Point2) -> f64 {
    (x.x - anchor.x) * normal.x + (x.y - anchor.y) * normal.y
}

/// Ground truth for convex-polygon circle queries: enumerate circles
/// tangent to edge triples plus circles through `q` tangent to edge pairs.
pub fn oracle_qmec_convex(poly: &Polygon, q: Point2) -> QueryAnswer {
    let eps = eps_geom();
    if poly.locate(q) != PointLocation::Inside {
        return QueryAnswer::UnboundedCircle;
    }
    let n = poly.len();
    let lines: Vec<(Point2, Point2)> = (0..n).map(|i| inward_edge_normal(poly, i)).collect();
    let empty_inside = |c: Point2, r: f64| -> bool {
        lines.iter().all(|&(a, nrm)| line_dist(c, a, nrm) >= r - 1e-9)
    };
    let mut best: Option<Circle> = None;
    let mut consider = |c: Point2, r: f64| {
        if r <= 0.0 || !empty_inside(c, r) || c.dist(q) > r + eps {
            return;
        }
        if best.map_or(true, |b| r > b.radius) {
            best = Some(Circle::new(c, r));
        }
    };

    // (a) circles tangent to three edge lines.
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (ai, ni) = lines[i];
                let (aj, nj) = lines[j];
                let (ak, nk) = lines[k];
                // d_i(x) = d_j(x) and d_j(x) = d_k(x): two affine equations.
                let a11 = ni.x - nj.x;
                let a12 = ni.y - nj.y;
                let b1 = ai.x * ni.x + ai.y * ni.y - (aj.x * nj.x + aj.y * nj.y);
                let a21 = nj.x - nk.x;
                let a22 = nj.y - nk.y;
                let b2 = aj.x * nj.x + aj.y * nj.y - (ak.x * nk.x + ak.y * nk.y);
                let det = a11 * a22 - a12 * a21;
                if det.abs() < 1e-14 {
                    continue;
                }
                let x = (b1 * a22 - b2 * a12) / det;
                let y = (a11 * b2 - a21 * b1) / det;
                let c = pt(x, y);
                consider(c, line_dist(c, ai, ni));
            }
        }
    }

    // (b) circles through q tangent to two edge lines: centers on the
    // bisector where the two inward distances agree.
    for i in 0..n {
        for j in i + 1..n {
            let (ai, ni) = lines[i];
            let (aj, nj) = lines[j];
            let a1 = ni.x - nj.x;
            let a2 = ni.y - nj.y;
            let b = ai.x * ni.x + ai.y * ni.y - (aj.x * nj.x + aj.y * nj.y);
            // Parametrize the bisector line a1*x + a2*y = b.
            let norm2 = a1 * a1 + a2 * a2;
            let (p0, dir) = if norm2 < 1e-18 {
                // Parallel opposing edges: the bisector is the midline.
                if b.abs() > 1e-12 {
                    continue;
                }
                let mid = pt(
                    (ai.x + aj.x) / 2.0 + (ni.x * line_dist(aj, ai, ni)) / 2.0,
                    (ai.y + aj.y) / 2.0 + (ni.y * line_dist(aj, ai, ni)) / 2.0,
                );
                // Midline direction is along either edge.
                let (ea, eb) = poly.edge(i);
                let len = ea.dist(eb);
                (mid, pt((eb.x - ea.x) / len, (eb.y - ea.y) / len))
            } else {
                let p0 = pt(a1 * b / norm2, a2 * b / norm2);
                let inv = norm2.sqrt();
                (p0, pt(-a2 / inv, a1 / inv))
            };
            // r(t) and |x(t)-q|^2 - r(t)^2 = 0 is quadratic in t.
            let r0 = line_dist(p0, ai, ni);
            let r1 = dir.x * ni.x + dir.y * ni.y; // d/dt of the distance
            let ex = p0.x - q.x;
            let ey = p0.y - q.y;
            let aa = 1.0 - r1 * r1;
            let bb = 2.0 * (ex * dir.x + ey * dir.y) - 2.0 * r0 * r1;
            let cc = ex * ex + ey * ey - r0 * r0;
            for t in quadratic_roots(aa, bb, cc) {
                let c = pt(p0.x + t * dir.x, p0.y + t * dir.y);
                consider(c, line_dist(c, ai, ni));
            }
        }
    }

    match best {
        Some(c) => QueryAnswer::bounded(c, None),
        None => QueryAnswer::Null,
    }
}

pub(crate) fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    if a.abs() < 1e-15 {
        if b.abs() < 1e-15 {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let mut disc = b * b - 4.0 * a * c;
    // Double roots (tangencies) sit at zero discriminant up to rounding.
    let scale = (b * b).max((4.0 * a * c).abs()).max(1e-300);
    if disc < 0.0 {
        if disc / scale > -1e-10 {
            disc = 0.0;
        } else {
            return Vec::new();
        }
    }
    let sq = disc.sqrt();
    // Numerically stable pair.
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// Ground truth for point-set circle queries: largest empty circle over the
/// pinned candidate set (site triples and site pairs plus `q` itself).
pub fn oracle_qmec_points(points: &[Point2], q: Point2) -> Result<QueryAnswer> {
    let eps = eps_geom();
    let hull = convex_hull(points)?;
    if hull.locate(q) != PointLocation::Inside {
        return Ok(QueryAnswer::UnboundedCircle);
    }
    let n = points.len();
    let empty = |c: &Circle| -> bool {
        points.iter().all(|p| c.center.dist(*p) >= c.radius - 1e-9)
    };
    let mut best: Option<Circle> = None;
    let mut consider = |c: Circle| {
        if best.map_or(true, |b| c.radius > b.radius) {
            best = Some(c);
        }
    };
    // (a) empty circumcircles of site triples that contain q.
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Ok(c) = circumcircle(points[i], points[j], points[k]) {
                    if c.center.dist(q) <= c.radius + eps && empty(&c) {
                        consider(c);
                    }
                }
            }
        }
    }
    // (b) empty circumcircles pinned by q through site pairs.
    for i in 0..n {
        for j in i + 1..n {
            if let Ok(c) = circumcircle(points[i], points[j], q) {
                if empty(&c) {
                    consider(c);
                }
            }
        }
    }
    match best {
        Some(c) => Ok(QueryAnswer::bounded(c, None)),
        None => Ok(QueryAnswer::Null),
    }
}

/// Grid-plus-refinement maximizer for simple polygons. The clearance grid
/// is built once per polygon and shared across queries.
pub struct SimpleMecOracle {
    poly: Polygon,
    seeds: Vec<(Point2, f64)>,
    step: f64,
}

const ORACLE_GRID: usize = 400;

impl SimpleMecOracle {
    pub fn new(poly: Polygon) -> SimpleMecOracle {
        let bbox = poly.bbox();
        let sx = bbox.width() / ORACLE_GRID as f64;
        let sy = bbox.height() / ORACLE_GRID as f64;
        let mut seeds = Vec::new();
        for i in 0..ORACLE_GRID {
            for j in 0..ORACLE_GRID {
                let p = pt(
                    bbox.xmin + (i as f64 + 0.5) * sx,
                    bbox.ymin + (j as f64 + 0.5) * sy,
                );
                if poly.locate(p) == PointLocation::Inside {
                    let c = crate::geom::boundary_distance(&poly, p);
                    if c > 0.0 {
                        seeds.push((p, c));
                    }
                }
            }
        }
        SimpleMecOracle { poly, seeds, step: sx.max(sy) }
    }

    pub fn query(&self, q: Point2) -> Result<QueryAnswer> {
        if self.poly.locate(q) != PointLocation::Inside {
            return Err(Error::OutsidePolygon);
        }
        // Feasible cells: the circle of the cell's clearance reaches q,
        // with one grid step of slack recovered by refinement.
        let mut feasible: Vec<(Point2, f64)> = self
            .seeds
            .iter()
            .copied()
            .filter(|&(p, c)| p.dist(q) <= c + self.step)
            .collect();
        feasible.push((q, crate::geom::boundary_distance(&self.poly, q)));
        feasible.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        feasible.truncate(32);
        let mut best: Option<Circle> = None;
        for &(seed, _) in &feasible {
            let c = self.refine(seed, q);
            if let Some(c) = c {
                if best.map_or(true, |b| c.radius > b.radius) {
                    best = Some(c);
                }
            }
        }
        // The pattern search can stall where the reach constraint binds;
        // polish by maximizing the feasible extent over directions from q,
        // seeding extra refinements at the pattern candidates' directions.
        let hints: Vec<f64> = best
            .iter()
            .map(|c| (c.center.y - q.y).atan2(c.center.x - q.x))
            .collect();
        if let Some(c) = self.angular_polish(q, &hints) {
            if best.map_or(true, |b| c.radius > b.radius) {
                best = Some(c);
            }
        }
        // Unconstrained optima are clearance peaks with three or more
        // boundary contacts; solve them in closed form near the candidate.
        if let Some(c0) = best {
            if let Some(c) = self.peak_polish(c0.center, q) {
                if c.radius > c0.radius {
                    best = Some(c);
                }
            }
        }
        match best {
            Some(c) => Ok(QueryAnswer::bounded(c, None)),
            None => Ok(QueryAnswer::Null),
        }
    }

    /// Feasible extent from q along a direction: once the segment leaves
    /// the feasible set it never returns (any feasible circle contains the
    /// whole segment back to q), so the boundary radius is unique.
    fn reach(&self, q: Point2, theta: f64) -> f64 {
        let u = pt(theta.cos(), theta.sin());
        let feasible = |rho: f64| -> bool {
            let p = q.add(rho * u.x, rho * u.y);
            self.poly.locate(p) == PointLocation::Inside
                && crate::geom::boundary_distance(&self.poly, p) >= rho
        };
        let diam = self.poly.bbox().diameter();
        let mut lo = 0.0;
        let mut hi = diam;
        if feasible(hi) {
            return hi;
        }
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if feasible(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn angular_polish(&self, q: Point2, hints: &[f64]) -> Option<Circle> {
        const COARSE: usize = 256;
        let mut vals: Vec<(f64, f64)> = (0..COARSE)
            .map(|i| {
                let theta = i as f64 / COARSE as f64 * std::f64::consts::TAU;
                (self.reach(q, theta), theta)
            })
            .collect();
        vals.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let width = std::f64::consts::TAU / COARSE as f64;
        let mut starts: Vec<f64> = vals.iter().take(6).map(|&(_, t)| t).collect();
        starts.extend_from_slice(hints);
        let mut best: Option<(f64, f64)> = None;
        for &theta in starts.iter() {
            let mut lo = theta - width;
            let mut hi = theta + width;
            for _ in 0..40 {
                let m1 = lo + (hi - lo) * 0.382;
                let m2 = lo + (hi - lo) * 0.618;
                if self.reach(q, m1) < self.reach(q, m2) {
                    lo = m1;
                } else {
                    hi = m2;
                }
            }
            let t = 0.5 * (lo + hi);
            let r = self.reach(q, t);
            if best.map_or(true, |(br, _)| r > br) {
                best = Some((r, t));
            }
        }
        best.map(|(r, t)| Circle::new(q.add(r * t.cos(), r * t.sin()), r))
    }

    /// Pattern search maximizing clearance subject to dist(c, q) <= clearance.
    fn refine(&self, seed: Point2, q: Point2) -> Option<Circle> {
        let feas = |p: Point2| -> Option<f64> {
            if self.poly.locate(p) != PointLocation::Inside {
                return None;
            }
            let c = crate::geom::boundary_distance(&self.poly, p);
            if p.dist(q) <= c + 1e-12 {
                Some(c)
            } else {
                None
            }
        };
        let mut cur = seed;
        let mut val = match feas(cur) {
            Some(v) => v,
            None => {
                // Pull the seed toward q until feasible.
                let mut t = 1.0;
                let mut found = None;
                while t > 1e-6 {
                    let p = cur.lerp(q, 1.0 - t);
                    if let Some(v) = feas(p) {
                        found = Some((p, v));
                        break;
                    }
                    t *= 0.5;
                }
                let (p, v) = found?;
                cur = p;
                v
            }
        };
        let mut h = self.step;
        while h > 1e-7 {
            let mut moved = false;
            for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0),
                             (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let p = cur.add(dx * h, dy * h);
                if let Some(v) = feas(p) {
                    if v > val {
                        cur = p;
                        val = v;
                        moved = true;
                    }
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
        Some(Circle::new(cur, val))
    }
}

#[derive(Clone, Copy)]
enum Obstacle {
    Seg { a: Point2, normal: Point2, b: Point2 },
    Pt(Point2),
}

impl Obstacle {
    fn dist(&self, x: Point2) -> f64 {
        match *self {
            Obstacle::Seg { a, b, .. } => crate::geom::dist_point_segment(x, a, b),
            Obstacle::Pt(p) => x.dist(p),
        }
    }

}

impl SimpleMecOracle {
    fn obstacles(&self) -> Vec<Obstacle> {
        let n = self.poly.len();
        let mut out: Vec<Obstacle> = (0..n)
            .map(|i| {
                let (a, nrm) = inward_edge_normal(&self.poly, i);
                let (_, b) = self.poly.edge(i);
                Obstacle::Seg { a, normal: nrm, b }
            })
            .collect();
        for vi in self.poly.reflex_vertices() {
            out.push(Obstacle::Pt(self.poly.vertex(vi)));
        }
        out
    }

    /// Exact equidistant solve over the obstacles near a pattern-search
    /// candidate; returns the best valid circle containing q.
    fn peak_polish(&self, c0: Point2, q: Point2) -> Option<Circle> {
        let obstacles = self.obstacles();
        let r0 = crate::geom::boundary_distance(&self.poly, c0);
        let band = r0 * 1.05 + 1e-9;
        let mut near: Vec<&Obstacle> = obstacles.iter().filter(|o| o.dist(c0) <= band).collect();
        near.truncate(8);
        if near.len() < 3 {
            return None;
        }
        let mut best: Option<Circle> = None;
        for i in 0..near.len() {
            for j in i + 1..near.len() {
                for k in j + 1..near.len() {
                    for (x, r) in equidistant_triple(near[i], near[j], near[k]) {
                        if r <= 0.0
                            || !x.is_finite()
                            || x.dist(c0) > 2.0 * r0
                            || x.dist(q) > r + eps_geom()
                            || self.poly.locate(x) != PointLocation::Inside
                        {
                            continue;
                        }
                        let true_r = obstacles
                            .iter()
                            .map(|o| o.dist(x))
                            .fold(f64::INFINITY, f64::min);
                        if (true_r - r).abs() > 1e-7 * r.max(1.0) {
                            continue;
                        }
                        if best.map_or(true, |b| true_r > b.radius) {
                            best = Some(Circle::new(x, true_r));
                        }
                    }
                }
            }
        }
        best
    }
}

/// Points equidistant from three obstacles, using supporting lines for
/// segments (verified against true distances by the caller).
fn equidistant_triple(o1: &Obstacle, o2: &Obstacle, o3: &Obstacle) -> Vec<(Point2, f64)> {
    let mut segs: Vec<(Point2, Point2)> = Vec::new(); // (anchor, inward normal)
    let mut pts: Vec<Point2> = Vec::new();
    for o in [o1, o2, o3] {
        match *o {
            Obstacle::Seg { a, normal, .. } => segs.push((a, normal)),
            Obstacle::Pt(p) => pts.push(p),
        }
    }
    match (segs.len(), pts.len()) {
        (3, 0) => {
            // Two affine equality rows, best-conditioned pair.
            let row = |(a1, n1): (Point2, Point2), (a2, n2): (Point2, Point2)| {
                (
                    n1.x - n2.x,
                    n1.y - n2.y,
                    a1.x * n1.x + a1.y * n1.y - (a2.x * n2.x + a2.y * n2.y),
                )
            };
            let rows = [row(segs[0], segs[1]), row(segs[1], segs[2]), row(segs[0], segs[2])];
            let mut best: Option<(f64, usize, usize)> = None;
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let det = rows[i].0 * rows[j].1 - rows[i].1 * rows[j].0;
                if best.map_or(true, |(d, _, _)| det.abs() > d.abs()) {
                    best = Some((det, i, j));
                }
            }
            let (det, i, j) = best.unwrap();
            if det.abs() < 1e-14 {
                return vec![];
            }
            let x = (rows[i].2 * rows[j].1 - rows[j].2 * rows[i].1) / det;
            let y = (rows[i].0 * rows[j].2 - rows[j].0 * rows[i].2) / det;
            let p = pt(x, y);
            let d = (p.x - segs[0].0.x) * segs[0].1.x + (p.y - segs[0].0.y) * segs[0].1.y;
            vec![(p, d)]
        }
        (2, 1) => {
            let (a1, n1) = segs[0];
            let (a2, n2) = segs[1];
            let v = pts[0];
            let ax = n1.x - n2.x;
            let ay = n1.y - n2.y;
            let b = a1.x * n1.x + a1.y * n1.y - (a2.x * n2.x + a2.y * n2.y);
            let norm2 = ax * ax + ay * ay;
            if norm2 < 1e-18 {
                return vec![];
            }
            let p0 = pt(ax * b / norm2, ay * b / norm2);
            let inv = norm2.sqrt();
            let u = pt(-ay / inv, ax / inv);
            let r0 = (p0.x - a1.x) * n1.x + (p0.y - a1.y) * n1.y;
            let r1 = u.x * n1.x + u.y * n1.y;
            let ex = p0.x - v.x;
            let ey = p0.y - v.y;
            quadratic_roots(
                1.0 - r1 * r1,
                2.0 * (ex * u.x + ey * u.y) - 2.0 * r0 * r1,
                ex * ex + ey * ey - r0 * r0,
            )
            .into_iter()
            .map(|t| {
                let x = pt(p0.x + t * u.x, p0.y + t * u.y);
                (x, (x.x - a1.x) * n1.x + (x.y - a1.y) * n1.y)
            })
            .collect()
        }
        (1, 2) => {
            let (a0, nrm) = segs[0];
            let (v1, v2) = (pts[0], pts[1]);
            if v1.dist(v2) == 0.0 {
                return vec![];
            }
            let mid = v1.lerp(v2, 0.5);
            let len = v1.dist(v2);
            let u = pt(-(v2.y - v1.y) / len, (v2.x - v1.x) / len);
            let d0 = (mid.x - a0.x) * nrm.x + (mid.y - a0.y) * nrm.y;
            let d1 = u.x * nrm.x + u.y * nrm.y;
            let ex = mid.x - v1.x;
            let ey = mid.y - v1.y;
            quadratic_roots(
                1.0 - d1 * d1,
                2.0 * (ex * u.x + ey * u.y) - 2.0 * d0 * d1,
                ex * ex + ey * ey - d0 * d0,
            )
            .into_iter()
            .map(|t| {
                let x = pt(mid.x + t * u.x, mid.y + t * u.y);
                (x, x.dist(v1))
            })
            .collect()
        }
        (0, 3) => match circumcircle(pts[0], pts[1], pts[2]) {
            Ok(c) => vec![(c.center, c.radius)],
            Err(_) => vec![],
        },
        _ => unreachable!(),
    }
}

/// One-shot convenience wrapper around [`SimpleMecOracle`].
pub fn oracle_qmec_simple(poly: &Polygon, q: Point2) -> Result<QueryAnswer> {
    SimpleMecOracle::new(poly.clone()).query(q)
}

/// Ground truth for rectangle queries: every axis rectangle with sides from
/// point coordinates or the region boundary, filtered for emptiness,
/// maximality and containment of `q`.
pub fn oracle_qmer(points: &[Point2], region: &AxisRect, q: Point2) -> Result<QueryAnswer> {
    if !region.contains(q) {
        return Err(Error::OutsideRegion);
    }
    let mers = brute_force_mers(points, region);
    let mut best: Option<AxisRect> = None;
    for r in &mers {
        if !r.contains(q) {
            continue;
        }
        let better = match best {
            None => true,
            Some(b) => {
                r.area() > b.area() + 1e-12
                    || (r.area() >= b.area() - 1e-12 && lex_less(r, &b))
            }
        };
        if better {
            best = Some(*r);
        }
    }
    match best {
        Some(r) => Ok(QueryAnswer::Rectangle { rect: r, witness: None }),
        None => Ok(QueryAnswer::Null),
    }
}

fn lex_less(a: &AxisRect, b: &AxisRect) -> bool {
    (a.xmin, a.ymin, a.xmax, a.ymax) < (b.xmin, b.ymin, b.xmax, b.ymax)
}

/// All maximal empty rectangles by exhaustive side-candidate enumeration.
pub fn brute_force_mers(points: &[Point2], region: &AxisRect) -> Vec<AxisRect> {
    let tol = 1e-12;
    let mut xs: Vec<f64> = vec![region.xmin, region.xmax];
    let mut ys: Vec<f64> = vec![region.ymin, region.ymax];
    xs.extend(points.iter().map(|p| p.x));
    ys.extend(points.iter().map(|p| p.y));
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    xs.dedup();
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ys.dedup();
    let empty = |r: &AxisRect| -> bool {
        points.iter().all(|p| {
            !(p.x > r.xmin + tol && p.x < r.xmax - tol && p.y > r.ymin + tol && p.y < r.ymax - tol)
        })
    };
    // A side is pinned when it lies on the region boundary or touches a
    // point strictly between the side's endpoints (a corner contact never
    // blocks growth).
    let pinned_v = |x: f64, ymin: f64, ymax: f64, at_bound: bool| -> bool {
        at_bound
            || points
                .iter()
                .any(|p| (p.x - x).abs() <= tol && p.y > ymin + tol && p.y < ymax - tol)
    };
    let pinned_h = |y: f64, xmin: f64, xmax: f64, at_bound: bool| -> bool {
        at_bound
            || points
                .iter()
                .any(|p| (p.y - y).abs() <= tol && p.x > xmin + tol && p.x < xmax - tol)
    };
    let mut out = Vec::new();
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            for k in 0..ys.len() {
                for l in k + 1..ys.len() {
                    let r = AxisRect { xmin: xs[i], xmax: xs[j], ymin: ys[k], ymax: ys[l] };
                    if !empty(&r) {
                        continue;
                    }
                    if pinned_v(r.xmin, r.ymin, r.ymax, r.xmin <= region.xmin + tol)
                        && pinned_v(r.xmax, r.ymin, r.ymax, r.xmax >= region.xmax - tol)
                        && pinned_h(r.ymin, r.xmin, r.xmax, r.ymin <= region.ymin + tol)
                        && pinned_h(r.ymax, r.xmin, r.xmax, r.ymax >= region.ymax - tol)
                    {
                        out.push(r);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;

    fn unit_square() -> Polygon {
        Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn lcq_oracle_basics() {
        assert!(oracle_lcq(&[], pt(0.0, 0.0)).is_null());
        let one = [Circle::new(pt(0.0, 0.0), 1.0)];
        assert_eq!(oracle_lcq(&one, pt(0.2, 0.0)).radius(), Some(1.0));
        let nested = [Circle::new(pt(0.0, 0.0), 2.0), Circle::new(pt(0.0, 0.0), 1.0)];
        let ans = oracle_lcq(&nested, pt(0.0, 0.0));
        assert_eq!(ans.radius(), Some(2.0));
    }

    #[test]
    fn convex_oracle_square() {
        let sq = unit_square();
        assert!(oracle_qmec_convex(&sq, pt(2.0, 2.0)).is_unbounded());
        let mid = oracle_qmec_convex(&sq, pt(0.5, 0.5));
        assert!((mid.radius().unwrap() - 0.5).abs() < 1e-9);

        // Known closed form: radius 0.1 * (2 + sqrt(2)) at the corner diagonal.
        let corner = oracle_qmec_convex(&sq, pt(0.1, 0.1));
        let expect = 0.1 * (2.0 + 2.0f64.sqrt());
        assert!((corner.radius().unwrap() - expect).abs() < 1e-9);
        let c = corner.circle().unwrap().center;
        assert!((c.x - c.y).abs() < 1e-9, "center stays on the diagonal");
    }

    #[test]
    fn convex_oracle_triangle_incenter() {
        let tri =
            Polygon::new(vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(0.0, 3.0)]).unwrap();
        // 3-4-5 triangle: inradius 1, incenter (1, 1).
        let ans = oracle_qmec_convex(&tri, pt(1.0, 1.0));
        assert!((ans.radius().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn points_oracle_square_centroid() {
        let pts = [pt(0.0, 0.001), pt(1.0, 0.0), pt(1.0012, 1.0), pt(0.0, 0.9987)];
        let ans = oracle_qmec_points(&pts, pt(0.5, 0.5)).unwrap();
        let r = ans.radius().unwrap();
        assert!((r - 0.70710678).abs() < 5e-3, "r = {r}");
        assert!(oracle_qmec_points(&pts, pt(5.0, 5.0)).unwrap().is_unbounded());
    }

    #[test]
    fn simple_oracle_agrees_with_convex_oracle() {
        let sq = unit_square();
        let oracle = SimpleMecOracle::new(sq.clone());
        for q in [pt(0.5, 0.5), pt(0.1, 0.1), pt(0.3, 0.62), pt(0.85, 0.2)] {
            let a = oracle.query(q).unwrap().radius().unwrap();
            let b = oracle_qmec_convex(&sq, q).radius().unwrap();
            assert!((a - b).abs() / b.max(1e-9) < 1e-4, "q={q:?}: {a} vs {b}");
        }
    }

    #[test]
    fn qmer_oracle_basics() {
        let region = AxisRect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let none = oracle_qmer(&[], &region, pt(0.3, 0.3)).unwrap();
        assert!(none.rect().unwrap().same_as(&region, 1e-12));

        let one = [pt(0.3, 0.4)];
        let ans = oracle_qmer(&one, &region, pt(0.8, 0.8)).unwrap();
        let r = ans.rect().unwrap();
        assert!(r.same_as(&AxisRect::new(0.3, 1.0, 0.0, 1.0).unwrap(), 1e-12), "{r:?}");

        assert_eq!(
            oracle_qmer(&one, &region, pt(2.0, 0.5)),
            Err(Error::OutsideRegion)
        );
    }

    #[test]
    fn mer_enumeration_single_point() {
        let region = AxisRect::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let mers = brute_force_mers(&[pt(0.3, 0.4)], &region);
        assert_eq!(mers.len(), 4);
    }
}
