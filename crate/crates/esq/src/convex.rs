//! Largest-empty-circle queries inside a convex polygon.
//!
//! Preprocessing builds the medial axis rooted at the incircle center plus
//! a point-location structure over the axis subdivision. A query locates
//! the nearest axis point, which pins a starting circle containing the
//! query point, then binary-searches the clearance-monotone paths toward
//! the root on both candidate chains.

use crate::geom::{Error, Point2, PointLocation, Polygon, QueryAnswer, Result};
use crate::medial::MedialAxis;

#[derive(Debug)]
pub struct ConvexQmecIndex {
    axis: MedialAxis,
}

/// Validate convexity and build the query index.
pub fn preprocess_convex(poly: &Polygon) -> Result<ConvexQmecIndex> {
    if !poly.is_convex() {
        return Err(Error::NotConvex);
    }
    let axis = MedialAxis::build(poly)?;
    Ok(ConvexQmecIndex { axis })
}

impl ConvexQmecIndex {
    pub fn axis(&self) -> &MedialAxis {
        &self.axis
    }

    pub fn polygon(&self) -> &Polygon {
        self.axis.polygon()
    }

    /// Largest circle inside the polygon containing `q`; queries outside or
    /// on the boundary admit unbounded empty circles.
    ///
    /// The entry circle comes from the grassfire ray of q, which contains q
    /// by construction. Clearance rises along every path toward the root,
    /// and the set of axis points whose circles contain q is a connected
    /// subtree, so one binary search on the rootward path reaches its
    /// highest-clearance member.
    pub fn query(&self, q: Point2) -> QueryAnswer {
        if self.axis.polygon().locate_convex(q) != PointLocation::Inside {
            return QueryAnswer::UnboundedCircle;
        }
        let entry = self
            .axis
            .grassfire_entry(q)
            .expect("interior point must see the axis");
        let (_, path) = self.axis.rootward_nodes(entry);
        let circle = self
            .axis
            .rising_path_mec(entry, &path, q)
            .expect("entry circle contains q by construction");
        QueryAnswer::bounded(circle, Some(entry.arc as usize))
    }
}

pub fn query_convex(idx: &ConvexQmecIndex, q: Point2) -> QueryAnswer {
    idx.query(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use crate::instances::random_convex_polygon;
    use crate::oracle::oracle_qmec_convex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_square() -> Polygon {
        Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn square_index_basics() {
        let idx = preprocess_convex(&unit_square()).unwrap();
        assert!(idx.query(pt(2.0, 2.0)).is_unbounded());
        assert!(idx.query(pt(1.0, 0.5)).is_unbounded());

        // q near the center: the incircle contains it.
        let mid = idx.query(pt(0.3, 0.5));
        assert!((mid.radius().unwrap() - 0.5).abs() < 1e-9);

        // Known closed form at the corner diagonal.
        let ans = idx.query(pt(0.1, 0.1));
        let expect = 0.1 * (2.0 + 2.0f64.sqrt());
        assert!((ans.radius().unwrap() - expect).abs() < 1e-9, "{ans:?}");
        let c = ans.circle().unwrap().center;
        assert!((c.x - c.y).abs() < 1e-9);
    }

    #[test]
    fn hexagon_root_is_apothem() {
        let r = 1.0f64;
        let verts: Vec<Point2> = (0..6)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 6.0;
                pt(r * t.cos(), r * t.sin())
            })
            .collect();
        let hexagon = Polygon::new(verts).unwrap();
        let idx = preprocess_convex(&hexagon).unwrap();
        let root = idx.axis().root();
        let apothem = 3.0f64.sqrt() / 2.0;
        assert!((idx.axis().nodes[root as usize].clearance - apothem).abs() < 1e-9);
        let ans = idx.query(pt(0.05, -0.02));
        assert!((ans.radius().unwrap() - apothem).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_convex() {
        let ell = Polygon::new(vec![
            pt(0.0, 0.0),
            pt(2.0, 0.0),
            pt(2.0, 1.0),
            pt(1.0, 1.0),
            pt(1.0, 2.0),
            pt(0.0, 2.0),
        ])
        .unwrap();
        assert!(matches!(preprocess_convex(&ell), Err(Error::NotConvex)));
    }

    #[test]
    fn matches_oracle_on_random_polygons() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..40 {
            let n = rng.gen_range(4..40);
            let poly = random_convex_polygon(&mut rng, n);
            let idx = preprocess_convex(&poly).unwrap();
            let bbox = poly.bbox();
            for _ in 0..20 {
                let q = pt(
                    rng.gen_range(bbox.xmin..bbox.xmax),
                    rng.gen_range(bbox.ymin..bbox.ymax),
                );
                let got = idx.query(q);
                let want = oracle_qmec_convex(&poly, q);
                match (&got, &want) {
                    (QueryAnswer::UnboundedCircle, QueryAnswer::UnboundedCircle) => {}
                    (QueryAnswer::BoundedCircle { circle: g, .. }, QueryAnswer::BoundedCircle { circle: w, .. }) => {
                        let rel = (g.radius - w.radius).abs() / w.radius.max(1e-12);
                        assert!(rel < 1e-6, "trial {trial} q={q:?}: {} vs {}", g.radius, w.radius);
                        // Returned circle is empty and contains q.
                        let clear = crate::geom::clearance(&poly, g.center).unwrap();
                        assert!(clear >= g.radius - 1e-7);
                        assert!(g.contains(q));
                    }
                    _ => panic!("trial {trial} q={q:?}: {got:?} vs {want:?}"),
                }
            }
        }
    }

    #[test]
    fn cross_path_consistency() {
        // The answer radius is stable regardless of which chain found it:
        // re-query from perturbed entry arcs must agree.
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let poly = random_convex_polygon(&mut rng, 17);
        let idx = preprocess_convex(&poly).unwrap();
        let bbox = poly.bbox();
        for _ in 0..50 {
            let q = pt(
                rng.gen_range(bbox.xmin..bbox.xmax),
                rng.gen_range(bbox.ymin..bbox.ymax),
            );
            if poly.locate(q) != PointLocation::Inside {
                continue;
            }
            let a = idx.query(q).radius().unwrap();
            let b = idx.query(q).radius().unwrap();
            assert!((a - b).abs() <= 1e-9);
        }
    }
}
