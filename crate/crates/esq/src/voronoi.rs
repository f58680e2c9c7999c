//! Voronoi diagram of a point set, augmented with one artificial vertex on
//! every unbounded edge.
//!
//! The diagram comes from Delaunay duality over the lifted lower hull.
//! Artificial vertices are placed far enough out that (1) their circles
//! dominate every finite-vertex circle and (2) no two of their circles
//! overlap inside the convex hull of the sites.

use crate::geom::{
    circle_circle_intersections, convex_hull, eps_geom, pt, Circle, Error, Point2,
    PointLocation, Polygon, Result,
};
use crate::hull3d::LiftedHull;

#[derive(Debug, Clone)]
pub struct VoronoiVertex {
    pub pos: Point2,
    /// Radius of the empty circle centered here (through the defining sites).
    pub radius: f64,
    pub is_artificial: bool,
}

#[derive(Debug, Clone)]
pub struct VoronoiEdge {
    /// Finite endpoint ids; for unbounded edges `v2` is the artificial
    /// vertex sitting on the ray.
    pub v1: u32,
    pub v2: u32,
    /// The two sites equidistant from every interior point of the edge.
    pub sites: [u32; 2],
    /// Set when the edge continues as a ray beyond the artificial vertex.
    pub unbounded: bool,
    /// Unit ray direction from v1, for unbounded edges.
    pub ray: Option<Point2>,
}

#[derive(Debug)]
pub struct VoronoiDiagram {
    pub sites: Vec<Point2>,
    pub vertices: Vec<VoronoiVertex>,
    pub edges: Vec<VoronoiEdge>,
    /// Incident edge ids per vertex (artificial vertices included).
    pub adjacency: Vec<Vec<u32>>,
    pub hull: Polygon,
}

impl VoronoiDiagram {
    pub fn vertex_circle(&self, v: u32) -> Circle {
        Circle::new(self.vertices[v as usize].pos, self.vertices[v as usize].radius)
    }

    pub fn finite_vertex_count(&self) -> usize {
        self.vertices.iter().filter(|v| !v.is_artificial).count()
    }

    /// Empty-circle radius centered at parameter `t` along an edge
    /// (t in [0,1] between v1 and v2; beyond 1 continues along the ray of
    /// unbounded edges).
    pub fn edge_point(&self, e: u32, t: f64) -> Point2 {
        let edge = &self.edges[e as usize];
        let p1 = self.vertices[edge.v1 as usize].pos;
        let p2 = self.vertices[edge.v2 as usize].pos;
        p1.lerp(p2, t)
    }

    pub fn edge_radius(&self, e: u32, t: f64) -> f64 {
        let edge = &self.edges[e as usize];
        self.edge_point(e, t).dist(self.sites[edge.sites[0] as usize])
    }
}

/// Delaunay-dual construction; degenerate inputs (duplicates, collinear
/// sets, cocircular 4-tuples producing equal vertex radii) are rejected.
pub fn build_voronoi(points: &[Point2]) -> Result<VoronoiDiagram> {
    let eps = eps_geom();
    if points.len() < 3 {
        return Err(Error::DegenerateInput("need at least 3 points".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::DegenerateInput("non-finite site".into()));
        }
        for q in &points[i + 1..] {
            if p.dist(*q) <= eps {
                return Err(Error::DegenerateInput("duplicate sites".into()));
            }
        }
    }
    let hull = convex_hull(points)?;
    let triangles: Vec<[usize; 3]> = if points.len() == 3 {
        if crate::geom::orient2d(points[0], points[1], points[2]) > 0.0 {
            vec![[0, 1, 2]]
        } else {
            vec![[0, 2, 1]]
        }
    } else {
        let lifted: Vec<(Point2, f64)> = points.iter().map(|&p| (p, 0.0)).collect();
        let tri = LiftedHull::build(&lifted);
        if tri.is_flat() {
            return Err(Error::DegenerateInput("all sites collinear".into()));
        }
        if !tri.dropped_sites().is_empty() {
            return Err(Error::DegenerateInput(
                "cocircular sites collapse a Delaunay cell".into(),
            ));
        }
        tri.triangles().to_vec()
    };

    let mut vertices: Vec<VoronoiVertex> = Vec::with_capacity(triangles.len());
    for t in &triangles {
        let c = crate::geom::circumcircle(points[t[0]], points[t[1]], points[t[2]])
            .map_err(|_| Error::DegenerateInput("degenerate Delaunay triangle".into()))?;
        vertices.push(VoronoiVertex { pos: c.center, radius: c.radius, is_artificial: false });
    }
    // Distinct-radius assumption.
    let mut radii: Vec<f64> = vertices.iter().map(|v| v.radius).collect();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for w in radii.windows(2) {
        // Exact cocircularity lands many orders of magnitude below this.
        if (w[1] - w[0]).abs() < 1e-12 * w[1].max(1.0) {
            return Err(Error::DegenerateInput(
                "two Voronoi vertices have equal circle radii".into(),
            ));
        }
    }

    // Shared Delaunay edges connect circumcenters; hull edges emit rays.
    use std::collections::HashMap;
    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            let key = (a.min(b), a.max(b));
            by_edge.entry(key).or_default().push(ti);
        }
    }
    let mut edges: Vec<VoronoiEdge> = Vec::new();
    for (&(a, b), ts) in by_edge.iter() {
        match ts.as_slice() {
            [t1, t2] => {
                edges.push(VoronoiEdge {
                    v1: *t1 as u32,
                    v2: *t2 as u32,
                    sites: [a as u32, b as u32],
                    unbounded: false,
                    ray: None,
                });
            }
            [t1] => {
                // Outward perpendicular of the hull edge, away from the
                // triangle's third vertex.
                let tri_v = triangles[*t1];
                let third = tri_v.iter().copied().find(|&v| v != a && v != b).unwrap();
                let (pa, pb) = (points[a], points[b]);
                let len = pa.dist(pb);
                let mut dir = pt(-(pb.y - pa.y) / len, (pb.x - pa.x) / len);
                let mid = pa.lerp(pb, 0.5);
                let away = (mid.x - points[third].x) * dir.x + (mid.y - points[third].y) * dir.y;
                if away < 0.0 {
                    dir = pt(-dir.x, -dir.y);
                }
                edges.push(VoronoiEdge {
                    v1: *t1 as u32,
                    v2: u32::MAX, // patched by artificial placement
                    sites: [a as u32, b as u32],
                    unbounded: true,
                    ray: Some(dir),
                });
            }
            _ => {
                return Err(Error::DegenerateInput(
                    "Delaunay edge shared by more than two triangles".into(),
                ))
            }
        }
    }
    // Deterministic edge order (HashMap iteration is not).
    edges.sort_by_key(|e| (e.sites[0], e.sites[1]));

    let mut vd = VoronoiDiagram { sites: points.to_vec(), vertices, edges, adjacency: Vec::new(), hull };
    place_artificial_vertices(&mut vd)?;
    vd.adjacency = vec![Vec::new(); vd.vertices.len()];
    for (i, e) in vd.edges.iter().enumerate() {
        vd.adjacency[e.v1 as usize].push(i as u32);
        vd.adjacency[e.v2 as usize].push(i as u32);
    }
    validate(&vd)?;
    Ok(vd)
}

/// One artificial vertex per unbounded edge: start where the circle radius
/// reaches twice the largest finite radius (condition 1), then push the
/// worst overlapping pair outward until no two artificial circles meet
/// inside the hull (condition 2).
fn place_artificial_vertices(vd: &mut VoronoiDiagram) -> Result<()> {
    let r_max = vd
        .vertices
        .iter()
        .map(|v| v.radius)
        .fold(0.0f64, f64::max);
    let mut targets: Vec<(usize, f64)> = Vec::new(); // (edge id, radius target)
    for (i, e) in vd.edges.iter().enumerate() {
        if e.unbounded {
            targets.push((i, 2.0 * r_max));
        }
    }
    // Artificial vertices occupy ids [finite_count ..].
    let base = vd.vertices.len();
    for _ in 0..targets.len() {
        vd.vertices.push(VoronoiVertex { pos: pt(0.0, 0.0), radius: 0.0, is_artificial: true });
    }
    let position = |vd: &VoronoiDiagram, edge: usize, r_target: f64| -> (Point2, f64) {
        let e = &vd.edges[edge];
        let v1 = vd.vertices[e.v1 as usize].pos;
        let dir = e.ray.unwrap();
        let a = vd.sites[e.sites[0] as usize];
        // |v1 + t dir - a| = r_target, increasing branch.
        let foot = (a.x - v1.x) * dir.x + (a.y - v1.y) * dir.y;
        let h2 = v1.add(foot * dir.x - (a.x - v1.x), foot * dir.y - (a.y - v1.y));
        let _ = h2;
        let hx = (v1.x + foot * dir.x) - a.x;
        let hy = (v1.y + foot * dir.y) - a.y;
        let h2 = hx * hx + hy * hy;
        let t = foot + (r_target * r_target - h2).max(0.0).sqrt();
        let p = pt(v1.x + t * dir.x, v1.y + t * dir.y);
        (p, p.dist(a))
    };
    for iter in 0..64 {
        for &(edge, r) in &targets {
            let slot = base + targets.iter().position(|&(e, _)| e == edge).unwrap();
            let (p, radius) = position(vd, edge, r);
            vd.vertices[slot].pos = p;
            vd.vertices[slot].radius = radius;
            vd.edges[edge].v2 = slot as u32;
        }
        // Worst in-hull overlapping pair of artificial circles.
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in 0..targets.len() {
            for j in i + 1..targets.len() {
                let c1 = vd.vertex_circle((base + i) as u32);
                let c2 = vd.vertex_circle((base + j) as u32);
                let depth = c1.radius + c2.radius - c1.center.dist(c2.center);
                if depth <= 0.0 {
                    continue;
                }
                if lens_meets_hull_interior(&c1, &c2, &vd.hull)
                    && worst.map_or(true, |(_, _, d)| depth > d)
                {
                    worst = Some((i, j, depth));
                }
            }
        }
        match worst {
            None => {
                // Condition 1 sanity: artificial circles dominate.
                for t in &targets {
                    let slot = base + targets.iter().position(|x| x.0 == t.0).unwrap();
                    debug_assert!(vd.vertices[slot].radius > r_max);
                }
                let _ = iter;
                return Ok(());
            }
            Some((i, j, _)) => {
                targets[i].1 *= 2.0;
                targets[j].1 *= 2.0;
            }
        }
    }
    Err(Error::PlacementFailed)
}

/// Exact-ish test: does the lens of two circles reach the hull interior?
pub fn lens_meets_hull_interior(c1: &Circle, c2: &Circle, hull: &Polygon) -> bool {
    let eps = eps_geom();
    let d = c1.center.dist(c2.center);
    if d >= c1.radius + c2.radius - eps {
        return false;
    }
    // Lens vertices strictly inside the hull.
    if let Ok(pts) = circle_circle_intersections(c1, c2) {
        for p in pts {
            if hull.locate(p) == PointLocation::Inside {
                return true;
            }
        }
    }
    // Hull vertices strictly inside both disks.
    for &v in hull.vertices() {
        if c1.contains_strict(v) && c2.contains_strict(v) {
            return true;
        }
    }
    // Hull edges crossing the lens with positive length.
    for i in 0..hull.len() {
        let (a, b) = hull.edge(i);
        if let Some((lo1, hi1)) = segment_disk_interval(a, b, c1) {
            if let Some((lo2, hi2)) = segment_disk_interval(a, b, c2) {
                if lo1.max(lo2) + 1e-12 < hi1.min(hi2) {
                    return true;
                }
            }
        }
    }
    false
}

/// Parameter interval of a segment inside a closed disk, if any.
fn segment_disk_interval(a: Point2, b: Point2, c: &Circle) -> Option<(f64, f64)> {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    let fx = a.x - c.center.x;
    let fy = a.y - c.center.y;
    let aa = dx * dx + dy * dy;
    let bb = 2.0 * (fx * dx + fy * dy);
    let cc = fx * fx + fy * fy - c.radius * c.radius;
    let disc = bb * bb - 4.0 * aa * cc;
    if disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = (-bb - sq) / (2.0 * aa);
    let t1 = (-bb + sq) / (2.0 * aa);
    let lo = t0.max(0.0);
    let hi = t1.min(1.0);
    if lo < hi {
        Some((lo, hi))
    } else {
        None
    }
}

fn validate(vd: &VoronoiDiagram) -> Result<()> {
    // Each finite vertex equidistant from >= 3 sites.
    for (i, v) in vd.vertices.iter().enumerate() {
        if v.is_artificial {
            continue;
        }
        let touching = vd
            .sites
            .iter()
            .filter(|s| (v.pos.dist(**s) - v.radius).abs() < 1e-7 * v.radius.max(1.0))
            .count();
        if touching < 3 {
            return Err(Error::DegenerateInput(format!(
                "Voronoi vertex {i} touches only {touching} sites"
            )));
        }
    }
    // Edge interiors equidistant from exactly their defining sites.
    for e in &vd.edges {
        let m = vd.edge_point(
            vd.edges.iter().position(|x| std::ptr::eq(x, e)).unwrap() as u32,
            0.5,
        );
        let d0 = m.dist(vd.sites[e.sites[0] as usize]);
        let d1 = m.dist(vd.sites[e.sites[1] as usize]);
        if (d0 - d1).abs() > 1e-6 * d0.max(1.0) {
            return Err(Error::DegenerateInput("edge midpoint not equidistant".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::random_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangle_has_one_vertex_three_rays() {
        let pts = [pt(0.0, 0.0), pt(4.0, 0.0), pt(1.0, 3.0)];
        let vd = build_voronoi(&pts).unwrap();
        assert_eq!(vd.finite_vertex_count(), 1);
        assert_eq!(vd.edges.len(), 3);
        assert!(vd.edges.iter().all(|e| e.unbounded));
        // Condition 1: artificial circles dominate the circumcircle.
        let r0 = vd.vertices[0].radius;
        for v in vd.vertices.iter().filter(|v| v.is_artificial) {
            assert!(v.radius > r0);
        }
    }

    #[test]
    fn square_corners_rejected_as_cocircular() {
        let pts = [pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)];
        assert!(matches!(build_voronoi(&pts), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn duplicates_and_collinear_rejected() {
        assert!(build_voronoi(&[pt(0.0, 0.0), pt(0.0, 0.0), pt(1.0, 1.0)]).is_err());
        assert!(build_voronoi(&[pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0)]).is_err());
    }

    #[test]
    fn random_vertices_equidistant() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let pts = random_points(&mut rng, 20);
            let vd = match build_voronoi(&pts) {
                Ok(v) => v,
                Err(_) => continue,
            };
            for v in vd.vertices.iter().filter(|v| !v.is_artificial) {
                let touching = pts
                    .iter()
                    .filter(|p| (v.pos.dist(**p) - v.radius).abs() < 1e-9 * v.radius.max(1.0))
                    .count();
                assert!(touching >= 3);
            }
        }
    }

    #[test]
    fn artificial_conditions_hold_by_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for trial in 0..10 {
            let n = rng.gen_range(4..20);
            let pts = random_points(&mut rng, n);
            let vd = match build_voronoi(&pts) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let art: Vec<u32> = (0..vd.vertices.len() as u32)
                .filter(|&i| vd.vertices[i as usize].is_artificial)
                .collect();
            // Rejection sampling of each lens region, 1000 samples per pair.
            for (ai, &a) in art.iter().enumerate() {
                for &b in art.iter().skip(ai + 1) {
                    let c1 = vd.vertex_circle(a);
                    let c2 = vd.vertex_circle(b);
                    if !c1.overlaps(&c2) {
                        continue;
                    }
                    let xmin = (c1.center.x - c1.radius).max(c2.center.x - c2.radius);
                    let xmax = (c1.center.x + c1.radius).min(c2.center.x + c2.radius);
                    let ymin = (c1.center.y - c1.radius).max(c2.center.y - c2.radius);
                    let ymax = (c1.center.y + c1.radius).min(c2.center.y + c2.radius);
                    for _ in 0..1000 {
                        let p = pt(rng.gen_range(xmin..xmax.max(xmin + 1e-9)),
                                   rng.gen_range(ymin..ymax.max(ymin + 1e-9)));
                        if c1.contains_strict(p) && c2.contains_strict(p) {
                            assert_ne!(
                                vd.hull.locate(p),
                                PointLocation::Inside,
                                "trial {trial}: artificial lens reaches the hull interior"
                            );
                        }
                    }
                }
            }
        }
    }
}
