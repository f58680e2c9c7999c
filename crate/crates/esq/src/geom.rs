//! Planar primitives and predicates shared by every index in the crate.
//!
//! All tolerances are absolute and assume inputs roughly normalized to a
//! bounding box of diameter <= 1000; see [`eps_geom`]. Containment is
//! closed-disk everywhere: boundary contact counts.

use std::fmt;
use std::sync::OnceLock;

/// Default absolute tolerance for geometric predicates.
pub const DEFAULT_EPS: f64 = 1e-9;

static EPS: OnceLock<f64> = OnceLock::new();

/// Geometric tolerance, overridable through the `ESQ_EPS` environment
/// variable (intended for tests only; read once per process).
pub fn eps_geom() -> f64 {
    *EPS.get_or_init(|| {
        std::env::var("ESQ_EPS")
            .ok()
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|v| v.is_finite() && *v > 0.0)
            .unwrap_or(DEFAULT_EPS)
    })
}

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    CollinearInput,
    IdenticalCircles,
    OutsidePolygon,
    OutsideRegion,
    NotConvex,
    NotSimple,
    DegenerateInput(String),
    PreconditionViolated(String),
    PlacementFailed,
    Io(String),
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CollinearInput => write!(f, "collinear input points"),
            Error::IdenticalCircles => write!(f, "identical circles"),
            Error::OutsidePolygon => write!(f, "point outside polygon"),
            Error::OutsideRegion => write!(f, "point outside region"),
            Error::NotConvex => write!(f, "polygon is not convex"),
            Error::NotSimple => write!(f, "polygon is not simple"),
            Error::DegenerateInput(m) => write!(f, "degenerate input: {m}"),
            Error::PreconditionViolated(m) => write!(f, "precondition violated: {m}"),
            Error::PlacementFailed => write!(f, "artificial vertex placement failed"),
            Error::Io(m) => write!(f, "io error: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

pub fn pt(x: f64, y: f64) -> Point2 {
    Point2 { x, y }
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist2(&self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn add(&self, dx: f64, dy: f64) -> Point2 {
        pt(self.x + dx, self.y + dy)
    }

    pub fn lerp(&self, other: Point2, t: f64) -> Point2 {
        pt(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }
}

/// Signed twice-area of triangle abc; positive when counterclockwise.
/// Evaluated with adaptive-precision arithmetic.
pub fn orient2d(a: Point2, b: Point2, c: Point2) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

/// Positive when d lies inside the circle through a, b, c (ccw order).
pub fn incircle(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    robust::incircle(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
        robust::Coord { x: d.x, y: d.y },
    )
}

/// Distance from `p` to the closed segment [a, b].
pub fn dist_point_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    p.dist(project_point_segment(p, a, b))
}

/// Closest point to `p` on the closed segment [a, b].
pub fn project_point_segment(p: Point2, a: Point2, b: Point2) -> Point2 {
    let abx = b.x - a.x;
    let aby = b.y - a.y;
    let len2 = abx * abx + aby * aby;
    if len2 == 0.0 {
        return a;
    }
    let t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len2;
    let t = t.clamp(0.0, 1.0);
    pt(a.x + t * abx, a.y + t * aby)
}

/// Signed distance from `p` to the line through a->b; positive on the left.
pub fn signed_line_dist(p: Point2, a: Point2, b: Point2) -> f64 {
    let len = a.dist(b);
    if len == 0.0 {
        return p.dist(a);
    }
    orient2d_fast(a, b, p) / len
}

// Plain f64 evaluation; used where adaptivity is unnecessary (distances).
fn orient2d_fast(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Proper + endpoint intersection test for closed segments.
pub fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let d1 = orient2d(c, d, a);
    let d2 = orient2d(c, d, b);
    let d3 = orient2d(a, b, c);
    let d4 = orient2d(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Point2, q: Point2, r: Point2| -> bool {
        orient2d(p, q, r) == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(c, d, a) || on(c, d, b) || on(a, b, c) || on(a, b, d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point2,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2, radius: f64) -> Self {
        debug_assert!(radius >= 0.0);
        Circle { center, radius }
    }

    /// Closed-disk containment: boundary contact counts.
    pub fn contains(&self, p: Point2) -> bool {
        self.center.dist(p) <= self.radius + eps_geom()
    }

    /// Proper interior containment with tolerance slack.
    pub fn contains_strict(&self, p: Point2) -> bool {
        self.center.dist(p) < self.radius - eps_geom()
    }

    pub fn same_as(&self, other: &Circle) -> bool {
        self.center.dist(other.center) <= eps_geom()
            && (self.radius - other.radius).abs() <= eps_geom()
    }

    /// Interiors intersect, or boundaries touch within tolerance.
    pub fn overlaps(&self, other: &Circle) -> bool {
        self.center.dist(other.center) <= self.radius + other.radius + eps_geom()
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }
}

/// Containment of `p` in circle `c` under closed-disk semantics.
pub fn circle_contains(c: &Circle, p: Point2) -> bool {
    c.contains(p)
}

/// Circle through three non-collinear points.
pub fn circumcircle(a: Point2, b: Point2, c: Point2) -> Result<Circle> {
    let det = orient2d(a, b, c);
    if det.abs() < eps_geom() {
        return Err(Error::CollinearInput);
    }
    // Perpendicular-bisector intersection, solved relative to `a` for stability.
    let bx = b.x - a.x;
    let by = b.y - a.y;
    let cx = c.x - a.x;
    let cy = c.y - a.y;
    let d = 2.0 * (bx * cy - by * cx);
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = pt(a.x + ux, a.y + uy);
    Ok(Circle::new(center, center.dist(a)))
}

/// Transversal intersection points of two circle boundaries. Tangency
/// yields one point. Identical circles are an error.
pub fn circle_circle_intersections(c1: &Circle, c2: &Circle) -> Result<Vec<Point2>> {
    let eps = eps_geom();
    let d = c1.center.dist(c2.center);
    if d <= eps && (c1.radius - c2.radius).abs() <= eps {
        return Err(Error::IdenticalCircles);
    }
    let (r1, r2) = (c1.radius, c2.radius);
    if d > r1 + r2 + eps || d < (r1 - r2).abs() - eps {
        return Ok(Vec::new());
    }
    // Radical line: distance from c1.center along the center line.
    let a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    let h2 = r1 * r1 - a * a;
    let ux = (c2.center.x - c1.center.x) / d;
    let uy = (c2.center.y - c1.center.y) / d;
    let base = pt(c1.center.x + a * ux, c1.center.y + a * uy);
    if h2 <= eps * eps {
        // External or internal tangency within tolerance.
        return Ok(vec![base]);
    }
    let h = h2.sqrt();
    Ok(vec![
        pt(base.x + h * uy, base.y - h * ux),
        pt(base.x - h * uy, base.y + h * ux),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointLocation {
    Inside,
    OnBoundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    /// Build a validated polygon: >= 3 vertices, counterclockwise, simple,
    /// no repeated consecutive vertices.
    pub fn new(vertices: Vec<Point2>) -> Result<Polygon> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::DegenerateInput("polygon needs >= 3 vertices".into()));
        }
        for p in &vertices {
            if !p.is_finite() {
                return Err(Error::DegenerateInput("non-finite vertex coordinate".into()));
            }
        }
        let eps = eps_geom();
        for i in 0..n {
            if vertices[i].dist(vertices[(i + 1) % n]) <= eps {
                return Err(Error::DegenerateInput("repeated consecutive vertices".into()));
            }
        }
        let poly = Polygon { vertices };
        // Convexity implies simplicity for a ccw ring; otherwise test all
        // non-adjacent edge pairs before judging orientation.
        if !poly.is_convex() {
            if !poly.is_simple() {
                return Err(Error::NotSimple);
            }
            if signed_area(&poly.vertices) <= 0.0 {
                return Err(Error::DegenerateInput("vertices must be counterclockwise".into()));
            }
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge i runs from vertex i to vertex i+1.
    pub fn edge(&self, i: usize) -> (Point2, Point2) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            if orient2d(self.vertex(i), self.vertex(i + 1), self.vertex(i + 2)) <= 0.0 {
                return false;
            }
        }
        true
    }

    fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            for j in i + 1..n {
                // Skip adjacent edges; they share exactly one endpoint.
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let (c, d) = self.edge(j);
                if segments_intersect(a, b, c, d) {
                    return false;
                }
            }
        }
        true
    }

    pub fn bbox(&self) -> AxisRect {
        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        for p in &self.vertices {
            xmin = xmin.min(p.x);
            xmax = xmax.max(p.x);
            ymin = ymin.min(p.y);
            ymax = ymax.max(p.y);
        }
        AxisRect { xmin, xmax, ymin, ymax }
    }

    /// Reflex vertices (interior angle > pi) of a simple polygon.
    pub fn reflex_vertices(&self) -> Vec<usize> {
        let n = self.vertices.len();
        (0..n)
            .filter(|&i| {
                orient2d(self.vertex(i + n - 1), self.vertex(i), self.vertex(i + 1)) < 0.0
            })
            .collect()
    }

    pub fn locate(&self, p: Point2) -> PointLocation {
        let eps = eps_geom();
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if dist_point_segment(p, a, b) <= eps {
                return PointLocation::OnBoundary;
            }
        }
        // Even-odd ray cast toward +x.
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            if (a.y > p.y) != (b.y > p.y) {
                let xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < xint {
                    inside = !inside;
                }
            }
        }
        if inside {
            PointLocation::Inside
        } else {
            PointLocation::Outside
        }
    }
}

impl Polygon {
    /// Logarithmic point classification for convex polygons: binary search
    /// on the vertex fan from vertex 0.
    pub fn locate_convex(&self, p: Point2) -> PointLocation {
        let eps = eps_geom();
        let n = self.vertices.len();
        let v0 = self.vertices[0];
        let o1 = orient2d(v0, self.vertices[1], p);
        let on = orient2d(v0, self.vertices[n - 1], p);
        if o1 < 0.0 || on > 0.0 {
            // Outside the fan; only the two v0 edges can be near.
            for i in [0, n - 1] {
                let (a, b) = self.edge(i);
                if dist_point_segment(p, a, b) <= eps {
                    return PointLocation::OnBoundary;
                }
            }
            return PointLocation::Outside;
        }
        // Largest k with p on or left of (v0, v_k).
        let (mut lo, mut hi) = (1usize, n - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if orient2d(v0, self.vertices[mid], p) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let side = orient2d(self.vertices[lo], self.vertices[hi], p);
        let near_boundary = {
            let mut near = dist_point_segment(p, self.vertices[lo], self.vertices[hi]) <= eps;
            if lo == 1 {
                let (a, b) = self.edge(0);
                near |= dist_point_segment(p, a, b) <= eps;
            }
            if hi == n - 1 {
                let (a, b) = self.edge(n - 1);
                near |= dist_point_segment(p, a, b) <= eps;
            }
            near
        };
        if near_boundary {
            PointLocation::OnBoundary
        } else if side > 0.0 {
            PointLocation::Inside
        } else {
            PointLocation::Outside
        }
    }
}

fn signed_area(vertices: &[Point2]) -> f64 {
    let n = vertices.len();
    let mut s = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    s / 2.0
}

/// Even-odd point-in-polygon classification with boundary detection.
pub fn point_in_polygon(poly: &Polygon, p: Point2) -> PointLocation {
    poly.locate(p)
}

/// Radius of the largest circle centered at `p` that fits inside `poly`;
/// equals the minimum distance from `p` to the boundary.
pub fn clearance(poly: &Polygon, p: Point2) -> Result<f64> {
    if poly.locate(p) != PointLocation::Inside {
        return Err(Error::OutsidePolygon);
    }
    Ok(boundary_distance(poly, p))
}

/// Minimum distance to the polygon boundary, regardless of sidedness.
pub fn boundary_distance(poly: &Polygon, p: Point2) -> f64 {
    let n = poly.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let (a, b) = poly.edge(i);
        best = best.min(dist_point_segment(p, a, b));
    }
    best
}

/// Counterclockwise convex hull; collinear boundary points are dropped.
pub fn convex_hull(points: &[Point2]) -> Result<Polygon> {
    if points.len() < 3 {
        return Err(Error::DegenerateInput("convex hull needs >= 3 points".into()));
    }
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    let n = pts.len();
    if n < 3 {
        return Err(Error::DegenerateInput("fewer than 3 distinct points".into()));
    }
    // Andrew's monotone chain; strict turns drop collinear points.
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * n);
    for &p in pts.iter() {
        while hull.len() >= 2
            && orient2d(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev() {
        while hull.len() >= lower_len
            && orient2d(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(Error::DegenerateInput("all points collinear".into()));
    }
    Polygon::new(hull)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl AxisRect {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<AxisRect> {
        if !(xmin < xmax && ymin < ymax) {
            return Err(Error::DegenerateInput("empty axis rectangle".into()));
        }
        Ok(AxisRect { xmin, xmax, ymin, ymax })
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    pub fn contains_strict(&self, p: Point2) -> bool {
        p.x > self.xmin && p.x < self.xmax && p.y > self.ymin && p.y < self.ymax
    }

    pub fn center(&self) -> Point2 {
        pt((self.xmin + self.xmax) / 2.0, (self.ymin + self.ymax) / 2.0)
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn same_as(&self, other: &AxisRect, tol: f64) -> bool {
        (self.xmin - other.xmin).abs() <= tol
            && (self.xmax - other.xmax).abs() <= tol
            && (self.ymin - other.ymin).abs() <= tol
            && (self.ymax - other.ymax).abs() <= tol
    }
}

/// Universal result of every query path.
#[derive(Debug, Clone, PartialEq)]
pub enum QueryAnswer {
    /// Largest bounded empty circle containing the query point. The witness
    /// identifies the supporting structure element (axis arc, Voronoi edge
    /// or vertex, circle id) when one exists.
    BoundedCircle { circle: Circle, witness: Option<usize> },
    /// The query point admits an arbitrarily large empty circle.
    UnboundedCircle,
    /// Largest empty axis-parallel rectangle containing the query point.
    Rectangle { rect: AxisRect, witness: Option<usize> },
    /// No structure element contains the query point.
    Null,
}

impl QueryAnswer {
    pub fn bounded(circle: Circle, witness: Option<usize>) -> Self {
        QueryAnswer::BoundedCircle { circle, witness }
    }

    pub fn circle(&self) -> Option<&Circle> {
        match self {
            QueryAnswer::BoundedCircle { circle, .. } => Some(circle),
            _ => None,
        }
    }

    pub fn rect(&self) -> Option<&AxisRect> {
        match self {
            QueryAnswer::Rectangle { rect, .. } => Some(rect),
            _ => None,
        }
    }

    pub fn radius(&self) -> Option<f64> {
        self.circle().map(|c| c.radius)
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, QueryAnswer::UnboundedCircle)
    }

    pub fn is_null(&self) -> bool {
        matches!(self, QueryAnswer::Null)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_square() -> Polygon {
        Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn circle_contains_cases() {
        let c = Circle::new(pt(0.0, 0.0), 1.0);
        assert!(circle_contains(&c, pt(0.0, 0.0)));
        assert!(circle_contains(&c, pt(1.0, 0.0)));
        assert!(!circle_contains(&c, pt(1.1, 0.0)));
    }

    #[test]
    fn circumcircle_right_triangle() {
        let c = circumcircle(pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)).unwrap();
        assert!(c.center.dist(pt(0.5, 0.5)) < 1e-12);
        assert!((c.radius - (2.0f64).sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn circumcircle_symmetric() {
        let c = circumcircle(pt(-1.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)).unwrap();
        assert!(c.center.dist(pt(0.0, 0.0)) < 1e-12);
        assert!((c.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circumcircle_collinear() {
        assert_eq!(
            circumcircle(pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0)),
            Err(Error::CollinearInput)
        );
    }

    #[test]
    fn circle_intersections_tangent() {
        let a = Circle::new(pt(0.0, 0.0), 1.0);
        let b = Circle::new(pt(2.0, 0.0), 1.0);
        let pts = circle_circle_intersections(&a, &b).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].dist(pt(1.0, 0.0)) < 1e-9);
    }

    #[test]
    fn circle_intersections_crossing() {
        let a = Circle::new(pt(0.0, 0.0), 1.0);
        let b = Circle::new(pt(1.0, 0.0), 1.0);
        let mut pts = circle_circle_intersections(&a, &b).unwrap();
        pts.sort_by(|p, q| q.y.partial_cmp(&p.y).unwrap());
        assert_eq!(pts.len(), 2);
        let h = 3.0f64.sqrt() / 2.0;
        assert!(pts[0].dist(pt(0.5, h)) < 1e-9);
        assert!(pts[1].dist(pt(0.5, -h)) < 1e-9);
    }

    #[test]
    fn circle_intersections_disjoint_and_identical() {
        let a = Circle::new(pt(0.0, 0.0), 1.0);
        let b = Circle::new(pt(5.0, 0.0), 1.0);
        assert!(circle_circle_intersections(&a, &b).unwrap().is_empty());
        assert_eq!(circle_circle_intersections(&a, &a), Err(Error::IdenticalCircles));
    }

    #[test]
    fn point_in_polygon_cases() {
        let sq = unit_square();
        assert_eq!(point_in_polygon(&sq, pt(0.5, 0.5)), PointLocation::Inside);
        assert_eq!(point_in_polygon(&sq, pt(1.0, 0.5)), PointLocation::OnBoundary);
        assert_eq!(point_in_polygon(&sq, pt(2.0, 2.0)), PointLocation::Outside);
    }

    #[test]
    fn clearance_cases() {
        let sq = unit_square();
        assert!((clearance(&sq, pt(0.5, 0.5)).unwrap() - 0.5).abs() < 1e-12);
        assert!((clearance(&sq, pt(0.25, 0.5)).unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(clearance(&sq, pt(1.5, 0.5)), Err(Error::OutsidePolygon));
    }

    #[test]
    fn convex_hull_cases() {
        let hull = convex_hull(&[
            pt(0.0, 0.0),
            pt(1.0, 0.0),
            pt(1.0, 1.0),
            pt(0.0, 1.0),
            pt(0.5, 0.5),
        ])
        .unwrap();
        assert_eq!(hull.len(), 4);

        let tri = convex_hull(&[pt(0.0, 0.0), pt(2.0, 0.0), pt(1.0, 1.0)]).unwrap();
        assert_eq!(tri.len(), 3);

        assert!(convex_hull(&[pt(0.0, 0.0), pt(1.0, 0.0), pt(2.0, 0.0)]).is_err());
    }

    #[test]
    fn polygon_rejects_self_intersection() {
        let bowtie = Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 1.0), pt(1.0, 0.0), pt(0.0, 1.0)]);
        assert!(bowtie.is_err());
    }

    proptest! {
        #[test]
        fn circumcircle_equidistant(
            ax in -100.0..100.0f64, ay in -100.0..100.0f64,
            bx in -100.0..100.0f64, by in -100.0..100.0f64,
            cx in -100.0..100.0f64, cy in -100.0..100.0f64,
        ) {
            let (a, b, c) = (pt(ax, ay), pt(bx, by), pt(cx, cy));
            prop_assume!(orient2d(a, b, c).abs() > 1e-6);
            let circ = circumcircle(a, b, c).unwrap();
            let scale = circ.radius.max(1.0);
            for p in [a, b, c] {
                prop_assert!((circ.center.dist(p) - circ.radius).abs() / scale < 1e-9);
            }
        }

        #[test]
        fn intersections_satisfy_both_circles(
            x1 in -10.0..10.0f64, y1 in -10.0..10.0f64, r1 in 0.1..10.0f64,
            x2 in -10.0..10.0f64, y2 in -10.0..10.0f64, r2 in 0.1..10.0f64,
        ) {
            let c1 = Circle::new(pt(x1, y1), r1);
            let c2 = Circle::new(pt(x2, y2), r2);
            prop_assume!(!c1.same_as(&c2));
            for p in circle_circle_intersections(&c1, &c2).unwrap() {
                prop_assert!((c1.center.dist(p) - r1).abs() < 1e-7 * r1.max(1.0));
                prop_assert!((c2.center.dist(p) - r2).abs() < 1e-7 * r2.max(1.0));
            }
        }

        #[test]
        fn point_in_polygon_rotation_invariant(
            px in -2.0..3.0f64, py in -2.0..3.0f64, rot in 0usize..4,
        ) {
            let sq = unit_square();
            let mut verts = sq.vertices().to_vec();
            verts.rotate_left(rot);
            let rotated = Polygon::new(verts).unwrap();
            let p = pt(px, py);
            prop_assert_eq!(point_in_polygon(&sq, p), point_in_polygon(&rotated, p));
        }

        #[test]
        fn clearance_equals_min_edge_distance(px in 0.05..0.95f64, py in 0.05..0.95f64) {
            let sq = unit_square();
            let p = pt(px, py);
            let direct = (0..4)
                .map(|i| { let (a, b) = sq.edge(i); dist_point_segment(p, a, b) })
                .fold(f64::INFINITY, f64::min);
            prop_assert!((clearance(&sq, p).unwrap() - direct).abs() < 1e-12);
        }
    }
}
