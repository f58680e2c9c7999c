//! Lower convex hull of lifted weighted sites.
//!
//! A circle with center (a, b) and radius r lifts to the point
//! (a, b, a^2 + b^2 - r^2). The lower hull of the lifted set is the dual of
//! the upper envelope of the planes z = 2ax + 2by - (a^2 + b^2 - r^2), whose
//! owner at a query point is the site minimizing the power distance
//! |q - c|^2 - r^2. With all weights zero this is the Delaunay lift.

use std::collections::HashMap;

use crate::geom::{orient2d, Point2};

#[derive(Debug, Clone, Copy)]
struct P3 {
    x: f64,
    y: f64,
    z: f64,
}

fn orient3d(a: P3, b: P3, c: P3, d: P3) -> f64 {
    robust::orient3d(
        robust::Coord3D { x: a.x, y: a.y, z: a.z },
        robust::Coord3D { x: b.x, y: b.y, z: b.z },
        robust::Coord3D { x: c.x, y: c.y, z: c.z },
        robust::Coord3D { x: d.x, y: d.y, z: d.z },
    )
}

#[derive(Debug, Clone)]
pub struct LiftedHull {
    sites: Vec<(Point2, f64)>,
    lifted: Vec<P3>,
    /// Lower-hull triangles, reoriented counterclockwise in the xy plane.
    triangles: Vec<[usize; 3]>,
    /// Site adjacency restricted to lower-hull edges.
    neighbors: Vec<Vec<usize>>,
    /// Sites that appear on the lower hull.
    hull_sites: Vec<usize>,
    /// Sites that never made it onto the hull (degenerate ties only).
    dropped: Vec<usize>,
    /// Set when no initial tetrahedron exists; callers fall back to scans.
    flat: bool,
    /// Jump-start sample for the owner walk.
    sample: Vec<usize>,
}

impl LiftedHull {
    /// Lift `sites` (center, weight = radius^2) and build the lower hull.
    pub fn build(sites: &[(Point2, f64)]) -> LiftedHull {
        let lifted: Vec<P3> = sites
            .iter()
            .map(|&(p, w)| P3 { x: p.x, y: p.y, z: p.x * p.x + p.y * p.y - w })
            .collect();
        let mut hull = LiftedHull {
            sites: sites.to_vec(),
            lifted,
            triangles: Vec::new(),
            neighbors: vec![Vec::new(); sites.len()],
            hull_sites: Vec::new(),
            dropped: Vec::new(),
            flat: true,
            sample: Vec::new(),
        };
        if sites.len() >= 4 {
            hull.run();
        }
        if hull.flat {
            hull.triangles.clear();
        }
        hull.finish();
        hull
    }

    pub fn is_flat(&self) -> bool {
        self.flat
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn dropped_sites(&self) -> &[usize] {
        &self.dropped
    }

    /// Site minimizing the power distance at q, found by a greedy walk on
    /// the hull adjacency (local optimum is global on a convex envelope).
    /// Falls back to a full scan on flat configurations.
    pub fn power_owner(&self, q: Point2) -> usize {
        if self.flat || self.hull_sites.len() < 4 {
            return self.scan_owner(q);
        }
        let mut best = self.sample[0];
        let mut best_pow = self.power(best, q);
        for &s in self.sample.iter().skip(1) {
            let p = self.power(s, q);
            if p < best_pow {
                best_pow = p;
                best = s;
            }
        }
        loop {
            let mut improved = false;
            for &nb in &self.neighbors[best] {
                let p = self.power(nb, q);
                if p < best_pow {
                    best_pow = p;
                    best = nb;
                    improved = true;
                }
            }
            if !improved {
                return best;
            }
        }
    }

    /// Power distance |q - c|^2 - r^2 of site `i` at `q`.
    pub fn power(&self, i: usize, q: Point2) -> f64 {
        let (c, w) = self.sites[i];
        q.dist2(c) - w
    }

    fn scan_owner(&self, q: Point2) -> usize {
        let mut best = 0;
        let mut best_pow = self.power(0, q);
        for i in 1..self.sites.len() {
            let p = self.power(i, q);
            if p < best_pow {
                best_pow = p;
                best = i;
            }
        }
        best
    }

    fn run(&mut self) {
        let n = self.lifted.len();
        // Initial tetrahedron: greedy search for four points in general
        // position, using exact orientation for the final choice.
        let i0 = 0;
        let Some(i1) = (1..n).find(|&i| {
            let (a, b) = (self.lifted[i0], self.lifted[i]);
            (a.x - b.x).abs() + (a.y - b.y).abs() + (a.z - b.z).abs() > 0.0
        }) else {
            return;
        };
        let Some(i2) = (1..n).find(|&i| {
            i != i1 && {
                let (a, b, c) = (self.lifted[i0], self.lifted[i1], self.lifted[i]);
                let ux = b.x - a.x;
                let uy = b.y - a.y;
                let uz = b.z - a.z;
                let vx = c.x - a.x;
                let vy = c.y - a.y;
                let vz = c.z - a.z;
                let cx = uy * vz - uz * vy;
                let cy = uz * vx - ux * vz;
                let cz = ux * vy - uy * vx;
                cx * cx + cy * cy + cz * cz > 0.0
            }
        }) else {
            return;
        };
        let Some(i3) = (1..n).find(|&i| {
            i != i1
                && i != i2
                && orient3d(self.lifted[i0], self.lifted[i1], self.lifted[i2], self.lifted[i])
                    != 0.0
        }) else {
            return;
        };
        self.flat = false;

        // Faces oriented so that orient3d(face, p) > 0 iff p is on the
        // outward side.
        let mut faces: Vec<[usize; 3]> = Vec::new();
        let mut alive: Vec<bool> = Vec::new();
        let mut edge_face: HashMap<(usize, usize), usize> = HashMap::new();

        let mk = |a: usize, b: usize, c: usize, opp: P3, lifted: &[P3]| -> [usize; 3] {
            if orient3d(lifted[a], lifted[b], lifted[c], opp) > 0.0 {
                [a, c, b]
            } else {
                [a, b, c]
            }
        };
        let tetra = [
            mk(i0, i1, i2, self.lifted[i3], &self.lifted),
            mk(i0, i1, i3, self.lifted[i2], &self.lifted),
            mk(i0, i2, i3, self.lifted[i1], &self.lifted),
            mk(i1, i2, i3, self.lifted[i0], &self.lifted),
        ];
        for f in tetra {
            let id = faces.len();
            faces.push(f);
            alive.push(true);
            for k in 0..3 {
                edge_face.insert((f[k], f[(k + 1) % 3]), id);
            }
        }

        let mut in_tetra = [false; 4].to_vec();
        in_tetra.clear();
        let seed = [i0, i1, i2, i3];
        for p in 0..n {
            if seed.contains(&p) {
                continue;
            }
            // Visible faces: point strictly on the outward side.
            let visible: Vec<usize> = (0..faces.len())
                .filter(|&f| alive[f])
                .filter(|&f| {
                    let [a, b, c] = faces[f];
                    orient3d(self.lifted[a], self.lifted[b], self.lifted[c], self.lifted[p])
                        > 0.0
                })
                .collect();
            if visible.is_empty() {
                self.dropped.push(p);
                continue;
            }
            let vis_set: Vec<bool> = {
                let mut v = vec![false; faces.len()];
                for &f in &visible {
                    v[f] = true;
                }
                v
            };
            // Horizon: directed edges of visible faces whose twin face survives.
            let mut horizon: Vec<(usize, usize)> = Vec::new();
            for &f in &visible {
                let [a, b, c] = faces[f];
                for (u, v) in [(a, b), (b, c), (c, a)] {
                    let twin = edge_face.get(&(v, u)).copied();
                    match twin {
                        Some(t) if vis_set[t] => {}
                        _ => horizon.push((u, v)),
                    }
                }
            }
            for &f in &visible {
                alive[f] = false;
                let [a, b, c] = faces[f];
                for (u, v) in [(a, b), (b, c), (c, a)] {
                    edge_face.remove(&(u, v));
                }
            }
            for (u, v) in horizon {
                let id = faces.len();
                faces.push([u, v, p]);
                alive.push(true);
                for e in [(u, v), (v, p), (p, u)] {
                    edge_face.insert(e, id);
                }
            }
        }

        // Keep the lower hull: faces whose outward normal points down.
        let mut on_hull = vec![false; n];
        for (f, face) in faces.iter().enumerate() {
            if !alive[f] {
                continue;
            }
            let [a, b, c] = *face;
            let (pa, pb, pc) = (self.lifted[a], self.lifted[b], self.lifted[c]);
            let nz = (pb.x - pa.x) * (pc.y - pa.y) - (pb.y - pa.y) * (pc.x - pa.x);
            // Outward normal z-sign equals -sign(nz) under our face
            // orientation; verified by the tetra tests below.
            if nz > 0.0 {
                let tri = if orient2d(
                    Point2::new(pa.x, pa.y),
                    Point2::new(pb.x, pb.y),
                    Point2::new(pc.x, pc.y),
                ) > 0.0
                {
                    [a, b, c]
                } else {
                    [a, c, b]
                };
                self.triangles.push(tri);
                for k in 0..3 {
                    on_hull[tri[k]] = true;
                }
            }
        }
        for tri in &self.triangles {
            for k in 0..3 {
                let (u, v) = (tri[k], tri[(k + 1) % 3]);
                if !self.neighbors[u].contains(&v) {
                    self.neighbors[u].push(v);
                    self.neighbors[v].push(u);
                }
            }
        }
        self.hull_sites = (0..n).filter(|&i| on_hull[i]).collect();
        self.dropped.retain(|&i| !on_hull[i]);
        // Sites inside the upper portion only are fine; sites absent from
        // the lower hull keep empty cells and are never walk targets.
    }

    fn finish(&mut self) {
        if self.hull_sites.is_empty() {
            self.flat = true;
            return;
        }
        let k = (self.hull_sites.len() as f64).sqrt().ceil() as usize;
        let step = (self.hull_sites.len() / k.max(1)).max(1);
        self.sample = self.hull_sites.iter().copied().step_by(step).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cocircular_square_lifts_coplanar() {
        // Exactly cocircular points lift onto one plane: no tetrahedron,
        // flagged flat so callers can reject the degeneracy.
        let sites = vec![
            (pt(0.0, 0.0), 0.0),
            (pt(1.0, 0.0), 0.0),
            (pt(1.0, 1.0), 0.0),
            (pt(0.0, 1.0), 0.0),
        ];
        let hull = LiftedHull::build(&sites);
        assert!(hull.is_flat());
    }

    #[test]
    fn random_delaunay_euler_count_and_empty_circles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(4..40);
            let sites: Vec<(Point2, f64)> = (0..n)
                .map(|_| (pt(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)), 0.0))
                .collect();
            let hull = LiftedHull::build(&sites);
            if hull.is_flat() || !hull.dropped_sites().is_empty() {
                continue;
            }
            let pts: Vec<Point2> = sites.iter().map(|s| s.0).collect();
            let h = crate::geom::convex_hull(&pts).unwrap().len();
            assert_eq!(hull.triangles().len(), 2 * n - 2 - h);
            // Delaunay property: no site strictly inside a circumcircle.
            for tri in hull.triangles() {
                let (a, b, c) = (pts[tri[0]], pts[tri[1]], pts[tri[2]]);
                for (i, &p) in pts.iter().enumerate() {
                    if tri.contains(&i) {
                        continue;
                    }
                    assert!(
                        crate::geom::incircle(a, b, c, p) <= 0.0,
                        "site {i} inside circumcircle of {tri:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn power_owner_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..40 {
            let n = rng.gen_range(4..80);
            let sites: Vec<(Point2, f64)> = (0..n)
                .map(|_| {
                    let c = pt(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
                    let r: f64 = rng.gen_range(0.1..20.0);
                    (c, r * r)
                })
                .collect();
            let hull = LiftedHull::build(&sites);
            for _ in 0..50 {
                let q = pt(rng.gen_range(-60.0..60.0), rng.gen_range(-60.0..60.0));
                let owner = hull.power_owner(q);
                let best = (0..n)
                    .map(|i| hull.power(i, q))
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    hull.power(owner, q) <= best + 1e-9 * best.abs().max(1.0),
                    "walk owner not optimal: {} vs {}",
                    hull.power(owner, q),
                    best
                );
            }
        }
    }

    #[test]
    fn collinear_sites_flagged_flat() {
        let sites: Vec<(Point2, f64)> =
            (0..6).map(|i| (pt(i as f64, 0.0), 0.0)).collect();
        let hull = LiftedHull::build(&sites);
        assert!(hull.is_flat());
        // Scan fallback still answers.
        assert_eq!(hull.power_owner(pt(2.2, 0.0)), 2);
    }
}
