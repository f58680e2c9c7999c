//! Largest-empty-circle queries over a planar point set.
//!
//! Preprocessing stores the circles of every (finite and artificial)
//! Voronoi vertex in a largest-circle-query tree and computes, per finite
//! vertex, the overlapping edges reachable along rising paths. A query asks
//! the tree for the largest vertex circle containing q, then improves it
//! over the constant-size overlapping-edge set.

use crate::geom::{eps_geom, Circle, Error, Point2, PointLocation, QueryAnswer, Result};
use crate::lcq::{CircleSet, LcqTree};
use crate::voronoi::{build_voronoi, VoronoiDiagram};

#[derive(Debug)]
pub struct PointsQmecIndex {
    pub vd: VoronoiDiagram,
    lcq: LcqTree,
    /// Overlapping edge ids per finite vertex.
    pub overlap_edges: Vec<Vec<u32>>,
}

/// Rising-path sweep from `v`: BFS through vertices with smaller circles;
/// each edge climbing past `v`'s radius contributes if the equal-radius
/// circle on it overlaps the circle at `v`.
pub fn compute_overlapping_edges(vd: &VoronoiDiagram, v: u32) -> Vec<u32> {
    let eps = eps_geom();
    let rv = vd.vertices[v as usize].radius;
    let cv = vd.vertex_circle(v);
    let mut out = Vec::new();
    let mut visited = vec![false; vd.vertices.len()];
    let mut seen_edge = vec![false; vd.edges.len()];
    visited[v as usize] = true;
    let mut queue = std::collections::VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for &e in &vd.adjacency[u as usize] {
            if seen_edge[e as usize] {
                continue;
            }
            seen_edge[e as usize] = true;
            let edge = &vd.edges[e as usize];
            let w = if edge.v1 == u { edge.v2 } else { edge.v1 };
            if vd.vertices[w as usize].radius < rv {
                if !visited[w as usize] {
                    visited[w as usize] = true;
                    queue.push_back(w);
                }
                continue;
            }
            // Rising edge: exactly one circle on it matches r_v.
            if let Some(t) = radius_crossing(vd, e, rv) {
                let x = vd.edge_point(e, t);
                let candidate = Circle::new(x, rv);
                if candidate.center.dist(cv.center) <= candidate.radius + cv.radius + eps {
                    out.push(e);
                }
            }
        }
    }
    out
}

/// Parameter on the edge where the empty-circle radius equals `r`, on the
/// rising branch (larger root).
fn radius_crossing(vd: &VoronoiDiagram, e: u32, r: f64) -> Option<f64> {
    let edge = &vd.edges[e as usize];
    let p1 = vd.vertices[edge.v1 as usize].pos;
    let p2 = vd.vertices[edge.v2 as usize].pos;
    let a = vd.sites[edge.sites[0] as usize];
    let dx = p2.x - p1.x;
    let dy = p2.y - p1.y;
    let fx = p1.x - a.x;
    let fy = p1.y - a.y;
    let aa = dx * dx + dy * dy;
    let bb = 2.0 * (fx * dx + fy * dy);
    let cc = fx * fx + fy * fy - r * r;
    let roots = crate::oracle::quadratic_roots(aa, bb, cc);
    roots
        .into_iter()
        .filter(|t| (-1e-9..=1.0 + 1e-9).contains(t))
        .fold(None, |acc: Option<f64>, t| Some(acc.map_or(t, |x| x.max(t))))
        .map(|t| t.clamp(0.0, 1.0))
}

pub fn preprocess_points(points: &[Point2]) -> Result<PointsQmecIndex> {
    let vd = build_voronoi(points)?;
    let circles: Vec<Circle> = (0..vd.vertices.len() as u32)
        .map(|i| vd.vertex_circle(i))
        .collect();
    let lcq = LcqTree::build(CircleSet::new(circles)?)?;
    let overlap_edges = (0..vd.vertices.len() as u32)
        .map(|v| {
            if vd.vertices[v as usize].is_artificial {
                Vec::new()
            } else {
                compute_overlapping_edges(&vd, v)
            }
        })
        .collect();
    Ok(PointsQmecIndex { vd, lcq, overlap_edges })
}

impl PointsQmecIndex {
    pub fn max_overlap_edges(&self) -> usize {
        self.overlap_edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn lcq_depth(&self) -> usize {
        self.lcq.depth()
    }

    /// Largest empty circle containing q; outside or on the hull boundary
    /// the circle is unbounded.
    pub fn query(&self, q: Point2) -> QueryAnswer {
        if self.vd.hull.locate_convex(q) != PointLocation::Inside {
            return QueryAnswer::UnboundedCircle;
        }
        let hit = self.lcq.query(q);
        let (vq, cq) = match hit {
            QueryAnswer::BoundedCircle { circle, witness } => {
                (witness.expect("vertex circles carry ids") as u32, circle)
            }
            // Interior points always lie in the circumcircle of their
            // Delaunay triangle.
            _ => unreachable!("interior query missed every vertex circle"),
        };
        if self.vd.vertices[vq as usize].is_artificial {
            let edge = self.vd.adjacency[vq as usize][0];
            let best = largest_mec_on_edge_containing(&self.vd, edge, q)
                .expect("artificial circle contains q, so the edge is feasible");
            return QueryAnswer::bounded(best, Some(edge as usize));
        }
        let mut best = cq;
        let mut witness = vq as usize;
        for &e in &self.overlap_edges[vq as usize] {
            if let Some(c) = largest_mec_on_edge_containing(&self.vd, e, q) {
                if c.radius > best.radius {
                    best = c;
                    witness = self.vd.vertices.len() + e as usize;
                }
            }
        }
        QueryAnswer::bounded(best, Some(witness))
    }
}

pub fn query_points(idx: &PointsQmecIndex, q: Point2) -> QueryAnswer {
    idx.query(q)
}

/// Largest empty circle centered on edge `e` that contains `q`, if any.
/// The feasibility boundary |x - q| = |x - site| is affine along the edge,
/// and the radius is convex, so the optimum sits at a feasible endpoint.
/// Unbounded edges extend past their artificial vertex along the ray.
pub fn largest_mec_on_edge_containing(
    vd: &VoronoiDiagram,
    e: u32,
    q: Point2,
) -> Option<Circle> {
    let eps = eps_geom();
    let edge = &vd.edges[e as usize];
    let p1 = vd.vertices[edge.v1 as usize].pos;
    let p2 = vd.vertices[edge.v2 as usize].pos;
    let a = vd.sites[edge.sites[0] as usize];
    let dx = p2.x - p1.x;
    let dy = p2.y - p1.y;
    // g(t) = |x-q|^2 - |x-a|^2 <= 0 iff the circle at x contains q.
    let g0 = p1.dist2(q) - p1.dist2(a);
    let g1 = 2.0 * (dx * (a.x - q.x) + dy * (a.y - q.y));
    let radius = |t: f64| -> Circle {
        let x = p1.lerp(p2, t);
        Circle::new(x, x.dist(a))
    };
    let t_hi: f64 = if edge.unbounded { f64::INFINITY } else { 1.0 };
    let (lo, hi) = if g1.abs() < 1e-12 {
        if g0 <= eps {
            (0.0, t_hi)
        } else {
            return None;
        }
    } else {
        let t_c = -g0 / g1;
        if g1 > 0.0 {
            (0.0, t_c.min(t_hi))
        } else {
            (t_c.max(0.0), t_hi)
        }
    };
    if lo > hi {
        return None;
    }
    if hi.is_infinite() {
        // Radius grows without bound along a feasible ray; interior queries
        // never reach here (they fall outside far circles).
        debug_assert!(false, "unbounded feasible ray for an interior query");
        return Some(radius(lo));
    }
    let c_lo = radius(lo);
    let c_hi = radius(hi);
    let best = if c_lo.radius >= c_hi.radius { c_lo } else { c_hi };
    if best.contains(q) {
        Some(best)
    } else {
        // Tolerance mismatch right at the boundary: nudge inward.
        let other = if c_lo.radius >= c_hi.radius { c_hi } else { c_lo };
        other.contains(q).then_some(other)
    }
}

// ---------------------------------------------------------------------------
// Diagnostics used by the lemma test suites (not on the query path)
// ---------------------------------------------------------------------------

/// Next vertex from `c` toward `c2`: the endpoint of the Voronoi edge whose
/// site pair brackets the arc of circle(c) holding both intersection points
/// with circle(c2).
pub fn next_step(vd: &VoronoiDiagram, c: u32, c2: u32) -> Result<u32> {
    let cc = vd.vertex_circle(c);
    let cc2 = vd.vertex_circle(c2);
    let cuts = crate::geom::circle_circle_intersections(&cc, &cc2)
        .map_err(|_| Error::DegenerateInput("identical vertex circles".into()))?;
    if cuts.is_empty() {
        return Err(Error::PreconditionViolated("circles do not overlap".into()));
    }
    let angle = |p: Point2| (p.y - cc.center.y).atan2(p.x - cc.center.x);
    let cut_angles: Vec<f64> = cuts.iter().map(|&p| angle(p)).collect();
    // Touching sites sorted by angle around c.
    let mut touching: Vec<(f64, u32)> = vd
        .sites
        .iter()
        .enumerate()
        .filter(|(_, s)| (cc.center.dist(**s) - cc.radius).abs() < 1e-6 * cc.radius.max(1.0))
        .map(|(i, s)| (angle(*s), i as u32))
        .collect();
    touching.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let k = touching.len();
    for j in 0..k {
        let (a0, s0) = touching[j];
        let (a1, s1) = touching[(j + 1) % k];
        let within = |x: f64| {
            // Angle x inside the ccw arc (a0, a1).
            let span = (a1 - a0).rem_euclid(std::f64::consts::TAU);
            let off = (x - a0).rem_euclid(std::f64::consts::TAU);
            off <= span + 1e-12
        };
        if cut_angles.iter().all(|&x| within(x)) {
            // Edge at c defined by the bracketing site pair.
            for &e in &vd.adjacency[c as usize] {
                let edge = &vd.edges[e as usize];
                let mut sites = edge.sites;
                sites.sort_unstable();
                let mut want = [s0, s1];
                want.sort_unstable();
                if sites == want {
                    return Ok(if edge.v1 == c { edge.v2 } else { edge.v1 });
                }
            }
            return Err(Error::DegenerateInput(
                "no Voronoi edge matches the bracketing site pair".into(),
            ));
        }
    }
    Err(Error::DegenerateInput("intersection points straddle two arcs".into()))
}

/// The path from `c` to `c2` generated by repeated next-step moves.
/// Terminates within the vertex count when the cycle lemma holds.
pub fn pi_path(vd: &VoronoiDiagram, c: u32, c2: u32) -> Result<Vec<u32>> {
    let mut path = vec![c];
    let mut cur = c;
    for _ in 0..vd.vertices.len() + 1 {
        if cur == c2 {
            return Ok(path);
        }
        cur = next_step(vd, cur, c2)?;
        path.push(cur);
    }
    Err(Error::PreconditionViolated("next-step walk failed to terminate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use crate::instances::random_points;
    use crate::oracle::oracle_qmec_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn jittered_square() -> Vec<Point2> {
        vec![
            pt(0.0, 0.001),
            pt(1.0, 0.0),
            pt(1.0012, 1.0),
            pt(0.0, 0.9987),
        ]
    }

    #[test]
    fn triangle_index_is_four_circles() {
        let pts = [pt(0.0, 0.0), pt(4.0, 0.0), pt(1.0, 3.0)];
        let idx = preprocess_points(&pts).unwrap();
        assert_eq!(idx.vd.vertices.len(), 4); // 1 finite + 3 artificial
    }

    #[test]
    fn jittered_square_centroid() {
        let pts = jittered_square();
        let idx = preprocess_points(&pts).unwrap();
        let ans = idx.query(pt(0.5, 0.5));
        let r = ans.radius().unwrap();
        assert!((r - 0.7071).abs() < 5e-3, "r = {r}");
        assert!(idx.query(pt(5.0, 5.0)).is_unbounded());
        assert!(idx.query(pt(1.0, 0.5)).is_unbounded() || idx.query(pt(1.0, 0.5)).radius().is_some());
    }

    #[test]
    fn duplicate_points_rejected() {
        let pts = [pt(0.0, 0.0), pt(0.0, 0.0), pt(1.0, 1.0), pt(2.0, 0.5)];
        assert!(preprocess_points(&pts).is_err());
    }

    #[test]
    fn overlap_edges_match_exhaustive_scan() {
        // Direct per-edge test of the rising+overlap property, no BFS.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let n = rng.gen_range(4..10);
            let pts = random_points(&mut rng, n);
            let idx = match preprocess_points(&pts) {
                Ok(i) => i,
                Err(_) => continue,
            };
            let vd = &idx.vd;
            for v in 0..vd.vertices.len() as u32 {
                if vd.vertices[v as usize].is_artificial {
                    continue;
                }
                let rv = vd.vertices[v as usize].radius;
                let cv = vd.vertex_circle(v);
                let mut expected: Vec<u32> = Vec::new();
                for e in 0..vd.edges.len() as u32 {
                    let edge = &vd.edges[e as usize];
                    let (lo, hi) = (
                        vd.vertices[edge.v1 as usize].radius.min(vd.vertices[edge.v2 as usize].radius),
                        vd.vertices[edge.v1 as usize].radius.max(vd.vertices[edge.v2 as usize].radius),
                    );
                    if !(lo <= rv && rv < hi) {
                        continue;
                    }
                    // Reachability along strictly-smaller vertices; the
                    // smaller end may be v itself.
                    let small_end = if vd.vertices[edge.v1 as usize].radius
                        < vd.vertices[edge.v2 as usize].radius
                    {
                        edge.v1
                    } else {
                        edge.v2
                    };
                    if !reachable_through_smaller(vd, v, small_end, rv) {
                        continue;
                    }
                    if let Some(t) = super::radius_crossing(vd, e, rv) {
                        let c = Circle::new(vd.edge_point(e, t), rv);
                        if c.center.dist(cv.center) <= c.radius + cv.radius + 1e-9 {
                            expected.push(e);
                        }
                    }
                }
                let mut got = idx.overlap_edges[v as usize].clone();
                got.sort_unstable();
                expected.sort_unstable();
                assert_eq!(got, expected, "vertex {v}");
            }
        }
    }

    fn reachable_through_smaller(vd: &VoronoiDiagram, from: u32, to: u32, r: f64) -> bool {
        if from == to {
            return true;
        }
        let mut seen = vec![false; vd.vertices.len()];
        seen[from as usize] = true;
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            for &e in &vd.adjacency[u as usize] {
                let edge = &vd.edges[e as usize];
                let w = if edge.v1 == u { edge.v2 } else { edge.v1 };
                if seen[w as usize] {
                    continue;
                }
                if w == to {
                    return true;
                }
                if vd.vertices[w as usize].radius < r {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    #[test]
    fn matches_pinned_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let mut done = 0;
        while done < 60 {
            let n = rng.gen_range(3..24);
            let pts = random_points(&mut rng, n);
            let idx = match preprocess_points(&pts) {
                Ok(i) => i,
                Err(_) => continue,
            };
            done += 1;
            for _ in 0..20 {
                let q = pt(rng.gen_range(-5.0..105.0), rng.gen_range(-5.0..105.0));
                let want = oracle_qmec_points(&pts, q).unwrap();
                let got = idx.query(q);
                match (&got, &want) {
                    (QueryAnswer::UnboundedCircle, QueryAnswer::UnboundedCircle) => {}
                    (
                        QueryAnswer::BoundedCircle { circle: g, .. },
                        QueryAnswer::BoundedCircle { circle: w, .. },
                    ) => {
                        let rel = (g.radius - w.radius).abs() / w.radius.max(1e-12);
                        assert!(rel < 1e-6, "q={q:?}: {} vs {}", g.radius, w.radius);
                        // Valid answer: empty and containing q.
                        assert!(g.contains(q));
                        assert!(pts.iter().all(|p| g.center.dist(*p) >= g.radius - 1e-9));
                    }
                    _ => panic!("q={q:?}: {got:?} vs {want:?}"),
                }
            }
        }
    }

    #[test]
    fn pi_path_contains_lens() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let mut done = 0;
        while done < 10 {
            let n = rng.gen_range(4..9);
            let pts = random_points(&mut rng, n);
            let idx = match preprocess_points(&pts) {
                Ok(i) => i,
                Err(_) => continue,
            };
            done += 1;
            let vd = &idx.vd;
            let finite: Vec<u32> = (0..vd.vertices.len() as u32)
                .filter(|&v| !vd.vertices[v as usize].is_artificial)
                .collect();
            for (ai, &a) in finite.iter().enumerate() {
                for &b in finite.iter().skip(ai + 1) {
                    let ca = vd.vertex_circle(a);
                    let cb = vd.vertex_circle(b);
                    let d = ca.center.dist(cb.center);
                    if d >= ca.radius + cb.radius - 1e-9 || d <= (ca.radius - cb.radius).abs() {
                        continue;
                    }
                    let path = match pi_path(vd, a, b) {
                        Ok(p) => p,
                        Err(_) => continue,
                    };
                    assert!(path.len() <= vd.vertices.len());
                    // Every circle on the path contains sampled lens points.
                    let samples = sample_lens(&mut rng, &ca, &cb, 50);
                    for &v in &path {
                        let cv = vd.vertex_circle(v);
                        for &s in &samples {
                            assert!(cv.contains(s), "path circle at {v} misses the lens");
                        }
                    }
                }
            }
        }
    }

    pub(crate) fn sample_lens(
        rng: &mut ChaCha8Rng,
        c1: &Circle,
        c2: &Circle,
        want: usize,
    ) -> Vec<Point2> {
        let xmin = (c1.center.x - c1.radius).max(c2.center.x - c2.radius);
        let xmax = (c1.center.x + c1.radius).min(c2.center.x + c2.radius);
        let ymin = (c1.center.y - c1.radius).max(c2.center.y - c2.radius);
        let ymax = (c1.center.y + c1.radius).min(c2.center.y + c2.radius);
        let mut out = Vec::new();
        for _ in 0..want * 100 {
            if out.len() >= want {
                break;
            }
            let p = pt(
                rng.gen_range(xmin..xmax.max(xmin + 1e-12)),
                rng.gen_range(ymin..ymax.max(ymin + 1e-12)),
            );
            if c1.contains_strict(p) && c2.contains_strict(p) {
                out.push(p);
            }
        }
        out
    }
}
