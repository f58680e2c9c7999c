//! Seeded random and constructed instances shared by the self-test harness,
//! the benchmark runner and the test suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geom::{pt, AxisRect, Circle, Point2, Polygon};

/// Circles with centers in a box and radii in a fixed band.
pub fn random_circles(rng: &mut ChaCha8Rng, n: usize) -> Vec<Circle> {
    (0..n)
        .map(|_| {
            Circle::new(
                pt(rng.gen_range(-40.0..40.0), rng.gen_range(-40.0..40.0)),
                rng.gen_range(0.5..25.0),
            )
        })
        .collect()
}

/// Convex polygon: distinct random angles on a circle (any subset of a
/// circle is in convex position).
pub fn random_convex_polygon(rng: &mut ChaCha8Rng, n: usize) -> Polygon {
    loop {
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-4);
        if angles.len() < n.min(3) {
            continue;
        }
        let radius = rng.gen_range(5.0..50.0);
        let cx = rng.gen_range(-10.0..10.0);
        let cy = rng.gen_range(-10.0..10.0);
        let verts: Vec<Point2> = angles
            .iter()
            .map(|&t| pt(cx + radius * t.cos(), cy + radius * t.sin()))
            .collect();
        if let Ok(p) = Polygon::new(verts) {
            if p.is_convex() {
                return p;
            }
        }
    }
}

/// Star-shaped simple polygon with mixed reflexivity: sorted angles with
/// independently random radii.
pub fn random_simple_polygon(rng: &mut ChaCha8Rng, n: usize) -> Polygon {
    loop {
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        angles.dedup_by(|a, b| (*a - *b).abs() < 0.06);
        if angles.len() < 4 {
            continue;
        }
        let verts: Vec<Point2> = angles
            .iter()
            .map(|&t| {
                let r = rng.gen_range(2.5..10.0);
                pt(r * t.cos(), r * t.sin())
            })
            .collect();
        if let Ok(p) = Polygon::new(verts) {
            return p;
        }
    }
}

/// Point set in a box with pairwise separation.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::with_capacity(n);
    while out.len() < n {
        let p = pt(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0));
        if out.iter().all(|q| q.dist(p) > 1e-3) {
            out.push(p);
        }
    }
    out
}

pub fn random_rect_instance(rng: &mut ChaCha8Rng, n: usize) -> (Vec<Point2>, AxisRect) {
    let region = AxisRect::new(0.0, 100.0, 0.0, 100.0).unwrap();
    let mut out: Vec<Point2> = Vec::with_capacity(n);
    while out.len() < n {
        let p = pt(rng.gen_range(1.0..99.0), rng.gen_range(1.0..99.0));
        // Distinct coordinates in both axes.
        if out
            .iter()
            .all(|q| (q.x - p.x).abs() > 1e-3 && (q.y - p.y).abs() > 1e-3)
        {
            out.push(p);
        }
    }
    (out, region)
}

/// Two fat rooms joined by a thin corridor: at least two mountains. No
/// two facing walls are parallel, keeping axis-node clearances distinct.
pub fn dumbbell_polygon() -> Polygon {
    Polygon::new(vec![
        pt(0.0, 0.0),
        pt(2.0, 0.05),
        pt(2.0, 0.8),
        pt(3.0, 0.77),
        pt(3.0, -0.15),
        pt(5.3, -0.05),
        pt(5.2, 2.1),
        pt(3.0, 2.2),
        pt(3.0, 1.23),
        pt(2.0, 1.275),
        pt(2.0, 1.95),
        pt(0.0, 2.02),
    ])
    .unwrap()
}

/// Star with `lobes` fat lobes around a central chamber: one mountain per
/// lobe plus the hub. Lobe radii vary so clearances stay distinct.
pub fn star_polygon(lobes: usize, inner: f64, outer: f64) -> Polygon {
    let mut verts = Vec::new();
    let step = std::f64::consts::TAU / lobes as f64;
    for i in 0..lobes {
        let t = i as f64 * step;
        let scale = 1.0 + 0.035 * i as f64;
        // Wide lobe tip and a pinch between lobes.
        for (dr, dt) in [
            (outer * scale, -0.22 * step),
            (outer * scale, 0.22 * step),
            (inner * (1.0 + 0.03 * i as f64), 0.5 * step),
        ] {
            let a = t + dt;
            verts.push(pt(dr * a.cos(), dr * a.sin()));
        }
    }
    Polygon::new(verts).unwrap()
}

/// A handful of fixed multi-mountain polygons used by the acceptance suite.
pub fn constructed_simple_instances() -> Vec<Polygon> {
    vec![
        dumbbell_polygon(),
        star_polygon(5, 2.0, 6.0),
        star_polygon(3, 1.5, 7.0),
        // L-shaped hall; arm walls taper so no two are parallel.
        Polygon::new(vec![
            pt(0.0, 0.0),
            pt(6.0, 0.15),
            pt(5.9, 2.0),
            pt(1.7, 1.9),
            pt(1.8, 5.3),
            pt(0.0, 5.4),
        ])
        .unwrap(),
        // Zigzag corridor with rooms at both ends, tapered throughout.
        Polygon::new(vec![
            pt(0.0, 0.0),
            pt(3.0, 0.1),
            pt(3.05, 3.0),
            pt(5.0, 2.9),
            pt(4.95, -0.4),
            pt(8.4, -0.3),
            pt(8.3, 5.2),
            pt(4.6, 5.1),
            pt(4.65, 4.0),
            pt(3.4, 4.05),
            pt(3.45, 4.85),
            pt(0.1, 4.95),
        ])
        .unwrap(),
    ]
}
