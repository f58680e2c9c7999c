//! Medial axis of a polygon: tree structure, clearance along arcs,
//! mountains, centroid splits and rising-path search.
//!
//! Convex polygons are built by simulating the inward offset (edge collapse
//! events off a priority queue); arcs are straight with affine clearance.
//! Simple polygons go through exhaustive equidistant-triple enumeration
//! over boundary elements (edges and reflex vertices); bisectors of an edge
//! and a reflex vertex are parabolic. Every stored arc is clearance-monotone:
//! interior extrema become explicit degree-2 breakpoint nodes.

use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::geom::{
    dist_point_segment, eps_geom, orient2d, project_point_segment, pt, Circle, Error, Point2,
    PointLocation, Polygon, Result,
};
use crate::trapmap::{TrapMap, OUTER};

/// Boundary element: a polygon edge or a reflex vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Element {
    Edge(usize),
    Reflex(usize),
}

#[derive(Debug, Clone, Copy)]
enum ElemGeom {
    Edge { a: Point2, b: Point2, normal: Point2 }, // normal points inward
    Vertex { p: Point2 },
}

impl ElemGeom {
    fn dist(&self, x: Point2) -> f64 {
        match *self {
            ElemGeom::Edge { a, b, .. } => dist_point_segment(x, a, b),
            ElemGeom::Vertex { p } => x.dist(p),
        }
    }

    /// Signed distance to the supporting line (edges) or the point.
    fn line_dist(&self, x: Point2) -> f64 {
        match *self {
            ElemGeom::Edge { a, normal, .. } => (x.x - a.x) * normal.x + (x.y - a.y) * normal.y,
            ElemGeom::Vertex { p } => x.dist(p),
        }
    }

    /// Distance achieved away from segment endpoints (vertices always).
    fn properly_achieves(&self, x: Point2, r: f64, tol: f64) -> bool {
        if (self.dist(x) - r).abs() > tol {
            return false;
        }
        match *self {
            ElemGeom::Vertex { .. } => true,
            ElemGeom::Edge { a, b, .. } => {
                let len2 = a.dist2(b);
                let t = ((x.x - a.x) * (b.x - a.x) + (x.y - a.y) * (b.y - a.y)) / len2;
                let margin = tol / len2.sqrt();
                t > margin && t < 1.0 - margin
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    /// Polygon vertex with zero clearance.
    Leaf,
    /// Equidistant to three or more boundary elements.
    Junction,
    /// Degree-2 node inserted where clearance changes monotonicity or the
    /// supporting element pair changes.
    Breakpoint,
}

#[derive(Debug, Clone)]
pub struct AxisNode {
    pub pos: Point2,
    pub clearance: f64,
    pub kind: NodeKind,
    pub arcs: Vec<u32>,
}

#[derive(Debug, Clone, Copy)]
enum Support {
    /// Straight bisector of two edge lines; clearance affine in t.
    Line,
    /// Straight bisector of two reflex vertices; clearance is the distance
    /// to either vertex.
    LineToVertex { v: Point2 },
    /// Parabola with the reflex vertex as focus and the edge line as
    /// directrix, parametrized by the foot coordinate u.
    Parabola { origin: Point2, dir: Point2, normal: Point2, uf: f64, h: f64, u0: f64, u1: f64 },
}

#[derive(Debug, Clone)]
pub struct AxisArc {
    pub a: u32,
    pub b: u32,
    pub elems: [Element; 2],
    support: Support,
}

#[derive(Debug, Clone)]
pub struct Mountain {
    pub arcs: Vec<u32>,
    pub nodes: Vec<u32>,
    pub peak: u32,
    /// Leaves of the mountain subtree: valley nodes and polygon vertices.
    pub valleys: Vec<u32>,
    /// parent[node] = (next node toward the peak, connecting arc).
    parent: HashMap<u32, (u32, u32)>,
}

/// A point on the axis: arc id plus normalized parameter.
#[derive(Debug, Clone, Copy)]
pub struct AxisLocation {
    pub arc: u32,
    pub t: f64,
}

#[derive(Debug)]
pub struct MedialAxis {
    poly: Polygon,
    pub nodes: Vec<AxisNode>,
    pub arcs: Vec<AxisArc>,
    elems: Vec<ElemGeom>,
    root: u32,
    parent: Vec<Option<(u32, u32)>>,
    depth: Vec<u32>,
    /// Any leaf under the child end of each arc; its root path contains the
    /// arc, giving O(1) access into the stored leaf paths.
    arc_leaf: Vec<u32>,
    leaf_paths: HashMap<u32, Vec<u32>>,
    /// Incident arcs per boundary element (the cell chains).
    cells: Vec<Vec<u32>>,
    locator: Option<TrapMap>,
}

const REL: f64 = 1e-9;

impl MedialAxis {
    pub fn build(poly: &Polygon) -> Result<MedialAxis> {
        let scale = poly.bbox().diameter().max(1.0);
        let tol = 1e-7 * scale;
        let mut axis = if poly.is_convex() {
            build_convex(poly, scale)?
        } else {
            build_simple(poly, scale, tol)?
        };
        axis.insert_breakpoints();
        // Candidate nodes that ended up with degree two sit in the middle
        // of an arc chain; only degree-3+ nodes are true junctions.
        for node in axis.nodes.iter_mut() {
            if node.kind == NodeKind::Junction && node.arcs.len() == 2 {
                node.kind = NodeKind::Breakpoint;
            }
        }
        axis.check_tree()?;
        axis.orient();
        if poly.is_convex() {
            axis.locator = Some(axis.build_locator());
        }
        Ok(axis)
    }

    pub fn polygon(&self) -> &Polygon {
        &self.poly
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn element_count(&self) -> usize {
        self.elems.len()
    }

    pub fn element_distance(&self, e: usize, x: Point2) -> f64 {
        self.elems[e].dist(x)
    }

    pub fn is_leaf(&self, node: u32) -> bool {
        self.nodes[node as usize].kind == NodeKind::Leaf
    }

    pub fn point_on_arc(&self, arc: u32, t: f64) -> Point2 {
        let a = &self.arcs[arc as usize];
        match a.support {
            Support::Line | Support::LineToVertex { .. } => self.nodes[a.a as usize]
                .pos
                .lerp(self.nodes[a.b as usize].pos, t),
            Support::Parabola { origin, dir, normal, uf, h, u0, u1 } => {
                let u = u0 + t * (u1 - u0);
                let v = ((u - uf) * (u - uf) + h * h) / (2.0 * h);
                pt(origin.x + u * dir.x + v * normal.x, origin.y + u * dir.y + v * normal.y)
            }
        }
    }

    /// Radius of the largest inscribed circle centered at the arc point.
    pub fn clearance_on_arc(&self, arc: u32, t: f64) -> f64 {
        let a = &self.arcs[arc as usize];
        match a.support {
            Support::Line => {
                let ra = self.nodes[a.a as usize].clearance;
                let rb = self.nodes[a.b as usize].clearance;
                ra + (rb - ra) * t
            }
            Support::LineToVertex { v } => self.point_on_arc(arc, t).dist(v),
            Support::Parabola { uf, h, u0, u1, .. } => {
                let u = u0 + t * (u1 - u0);
                ((u - uf) * (u - uf) + h * h) / (2.0 * h)
            }
        }
    }

    pub fn mec_at_node(&self, node: u32) -> Circle {
        Circle::new(self.nodes[node as usize].pos, self.nodes[node as usize].clearance)
    }

    pub fn mec_at(&self, loc: AxisLocation) -> Circle {
        Circle::new(self.point_on_arc(loc.arc, loc.t), self.clearance_on_arc(loc.arc, loc.t))
    }

    /// Nearest boundary element; the cells of the axis subdivision are the
    /// regions sharing one nearest element.
    pub fn locate_cell(&self, q: Point2) -> Result<usize> {
        if let Some(loc) = &self.locator {
            // Convex path: logarithmic containment plus the trapezoid map.
            if self.poly.locate_convex(q) != PointLocation::Inside {
                return Err(Error::OutsidePolygon);
            }
            let label = loc.locate(q);
            if label != OUTER {
                return Ok(label as usize);
            }
            // Boundary-degenerate hit; fall through to the scan.
        } else if self.poly.locate(q) != PointLocation::Inside {
            return Err(Error::OutsidePolygon);
        }
        let mut best = 0;
        let mut bd = f64::INFINITY;
        for (i, e) in self.elems.iter().enumerate() {
            let d = e.dist(q);
            if d < bd {
                bd = d;
                best = i;
            }
        }
        Ok(best)
    }

    /// Axis arc minimizing the distance to `q`, with the nearest point and
    /// its parameter. Point location narrows the scan to the containing
    /// cell's chain when a locator is available.
    pub fn locate_nearest_arc(&self, q: Point2) -> Result<(u32, Point2, f64)> {
        let cell = self.locate_cell(q)?;
        let candidates: Vec<u32> = if self.locator.is_some() {
            self.cells[cell].clone()
        } else {
            (0..self.arcs.len() as u32).collect()
        };
        let mut best: Option<(f64, u32, Point2, f64)> = None;
        for arc in candidates {
            let (p, t) = self.project_on_arc(arc, q);
            let d = p.dist(q);
            if best.map_or(true, |(bd, _, _, _)| d < bd) {
                best = Some((d, arc, p, t));
            }
        }
        let (_, arc, p, t) = best.ok_or(Error::DegenerateInput("no axis arcs".into()))?;
        Ok((arc, p, t))
    }

    /// Entry point on the axis whose circle provably contains `q`: follow
    /// the ray from q's nearest boundary point through q until it first
    /// crosses the containing cell's chain. Clearance grows linearly along
    /// that ray, so the crossing circle reaches back to q.
    pub fn grassfire_entry(&self, q: Point2) -> Result<AxisLocation> {
        let cell = self.locate_cell(q)?;
        let (f, _) = self.element_foot(cell, q);
        let rq = q.dist(f);
        if rq <= 0.0 {
            return Err(Error::DegenerateInput("query on the boundary".into()));
        }
        let dir = pt((q.x - f.x) / rq, (q.y - f.y) / rq);
        let chain: Vec<u32> = if self.locator.is_some() {
            self.cells[cell].clone()
        } else {
            (0..self.arcs.len() as u32).collect()
        };
        let mut best: Option<(f64, u32, f64)> = None; // (s along ray, arc, t)
        for arc in chain {
            for (s, t) in self.ray_arc_hits(f, dir, arc) {
                if s >= rq - 1e-9 && best.map_or(true, |(bs, _, _)| s < bs) {
                    best = Some((s, arc, t));
                }
            }
        }
        match best {
            Some((_, arc, t)) => {
                let loc = AxisLocation { arc, t };
                if self.mec_at(loc).contains(q) {
                    return Ok(loc);
                }
                self.entry_fallback(q)
            }
            None => self.entry_fallback(q),
        }
    }

    // Nearest arc first, then dense sampling; only reached on numerically
    // marginal ray shots.
    fn entry_fallback(&self, q: Point2) -> Result<AxisLocation> {
        let (arc, _, t) = self.locate_nearest_arc(q)?;
        let loc = AxisLocation { arc, t };
        if self.mec_at(loc).contains(q) {
            return Ok(loc);
        }
        for arc in 0..self.arcs.len() as u32 {
            for i in 0..=64 {
                let t = i as f64 / 64.0;
                let loc = AxisLocation { arc, t };
                if self.mec_at(loc).contains(q) {
                    return Ok(loc);
                }
            }
        }
        Err(Error::PreconditionViolated("no axis circle contains q".into()))
    }

    /// Nearest boundary point on one element.
    fn element_foot(&self, e: usize, q: Point2) -> (Point2, f64) {
        match self.elems[e] {
            ElemGeom::Edge { a, b, .. } => {
                let p = project_point_segment(q, a, b);
                (p, p.dist(q))
            }
            ElemGeom::Vertex { p } => (p, p.dist(q)),
        }
    }

    /// Intersections of the ray origin + s*dir (s >= 0) with an arc,
    /// returned as (s, arc parameter).
    fn ray_arc_hits(&self, origin: Point2, dir: Point2, arc: u32) -> Vec<(f64, f64)> {
        let a = &self.arcs[arc as usize];
        match a.support {
            Support::Line | Support::LineToVertex { .. } => {
                let pa = self.nodes[a.a as usize].pos;
                let pb = self.nodes[a.b as usize].pos;
                let ex = pb.x - pa.x;
                let ey = pb.y - pa.y;
                let det = dir.x * (-ey) - dir.y * (-ex);
                if det.abs() < 1e-15 {
                    return vec![];
                }
                let rx = pa.x - origin.x;
                let ry = pa.y - origin.y;
                let s = (rx * (-ey) + ry * ex) / det;
                let t = (dir.x * ry - dir.y * rx) / det;
                if s >= 0.0 && (-1e-9..=1.0 + 1e-9).contains(&t) {
                    vec![(s, t.clamp(0.0, 1.0))]
                } else {
                    vec![]
                }
            }
            Support::Parabola { origin: po, dir: pd, normal, uf, h, u0, u1 } => {
                // P(u) = po + u*pd + w(u)*normal with w quadratic; solve
                // cross(dir, P(u) - origin) = 0.
                let k2 = 1.0 / (2.0 * h);
                // w(u) = k2*(u - uf)^2 + h/2
                let c0x = po.x - origin.x;
                let c0y = po.y - origin.y;
                // coefficient of u^2, u, 1 in cross(dir, P(u)-origin)
                let cross = |vx: f64, vy: f64| dir.x * vy - dir.y * vx;
                let a2 = cross(normal.x, normal.y) * k2;
                let a1 = cross(pd.x, pd.y) + cross(normal.x, normal.y) * (-2.0 * k2 * uf);
                let a0 = cross(c0x, c0y)
                    + cross(normal.x, normal.y) * (k2 * uf * uf + h / 2.0);
                let mut out = Vec::new();
                for u in crate::oracle::quadratic_roots(a2, a1, a0) {
                    if u < u0 - 1e-9 || u > u1 + 1e-9 {
                        continue;
                    }
                    let w = k2 * (u - uf) * (u - uf) + h / 2.0;
                    let p = pt(po.x + u * pd.x + w * normal.x, po.y + u * pd.y + w * normal.y);
                    let s = (p.x - origin.x) * dir.x + (p.y - origin.y) * dir.y;
                    if s >= 0.0 {
                        let t = ((u - u0) / (u1 - u0)).clamp(0.0, 1.0);
                        out.push((s, t));
                    }
                }
                out
            }
        }
    }

    /// Closest point on one arc, returned with its parameter.
    pub fn project_on_arc(&self, arc: u32, q: Point2) -> (Point2, f64) {
        let a = &self.arcs[arc as usize];
        match a.support {
            Support::Line | Support::LineToVertex { .. } => {
                let pa = self.nodes[a.a as usize].pos;
                let pb = self.nodes[a.b as usize].pos;
                let p = project_point_segment(q, pa, pb);
                let len2 = pa.dist2(pb);
                let t = if len2 == 0.0 {
                    0.0
                } else {
                    (((p.x - pa.x) * (pb.x - pa.x)) + (p.y - pa.y) * (pb.y - pa.y)) / len2
                };
                (p, t.clamp(0.0, 1.0))
            }
            Support::Parabola { .. } => {
                // Sample then refine by golden-section on the squared
                // distance; the quartic has at most two local minima.
                let mut bt = 0.0;
                let mut bd = f64::INFINITY;
                for i in 0..=32 {
                    let t = i as f64 / 32.0;
                    let d = self.point_on_arc(arc, t).dist2(q);
                    if d < bd {
                        bd = d;
                        bt = t;
                    }
                }
                let mut lo = (bt - 1.0 / 32.0).max(0.0);
                let mut hi = (bt + 1.0 / 32.0).min(1.0);
                for _ in 0..60 {
                    let m1 = lo + (hi - lo) * 0.382;
                    let m2 = lo + (hi - lo) * 0.618;
                    if self.point_on_arc(arc, m1).dist2(q) < self.point_on_arc(arc, m2).dist2(q) {
                        hi = m2;
                    } else {
                        lo = m1;
                    }
                }
                let t = 0.5 * (lo + hi);
                (self.point_on_arc(arc, t), t)
            }
        }
    }

    /// Largest inscribed circle containing `q` centered on the node path
    /// `path` (clearance non-decreasing), entered at `entry` on the arc
    /// into `path[0]`. Binary search over the nodes, then a bisection solve
    /// on the final arc. On constant-clearance stretches the peakward-most
    /// center wins.
    pub fn rising_path_mec(&self, entry: AxisLocation, path: &[u32], q: Point2) -> Result<Circle> {
        let eps = eps_geom();
        let c0 = self.mec_at(entry);
        if !c0.contains(q) {
            return Err(Error::PreconditionViolated(
                "entry circle does not contain the query point".into(),
            ));
        }
        if path.is_empty() {
            return Ok(c0);
        }
        let contains = |node: u32| self.mec_at_node(node).contains(q);
        // Last index still containing q; containment is a prefix.
        let mut lo = 0usize;
        if !contains(path[0]) {
            // The boundary lies on the entry arc.
            let t_node = self.arc_param_of_node(entry.arc, path[0]);
            return Ok(self.solve_on_arc(entry.arc, entry.t, t_node, q));
        }
        let mut hi = path.len() - 1;
        if contains(path[hi]) {
            let peak = self.mec_at_node(path[hi]);
            let _ = eps;
            return Ok(peak);
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if contains(path[mid]) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let arc = self
            .arc_between(path[lo], path[hi])
            .ok_or_else(|| Error::PreconditionViolated("path nodes not adjacent".into()))?;
        let t_lo = self.arc_param_of_node(arc, path[lo]);
        let t_hi = self.arc_param_of_node(arc, path[hi]);
        Ok(self.solve_on_arc(arc, t_lo, t_hi, q))
    }

    fn arc_param_of_node(&self, arc: u32, node: u32) -> f64 {
        if self.arcs[arc as usize].a == node {
            0.0
        } else {
            debug_assert_eq!(self.arcs[arc as usize].b, node);
            1.0
        }
    }

    pub fn arc_between(&self, u: u32, v: u32) -> Option<u32> {
        self.nodes[u as usize]
            .arcs
            .iter()
            .copied()
            .find(|&a| {
                let arc = &self.arcs[a as usize];
                (arc.a == u && arc.b == v) || (arc.a == v && arc.b == u)
            })
    }

    /// Bisection for the farthest parameter (from t_in toward t_out) whose
    /// circle still contains q; containment flips once on a monotone arc.
    fn solve_on_arc(&self, arc: u32, t_in: f64, t_out: f64, q: Point2) -> Circle {
        let g = |t: f64| {
            let p = self.point_on_arc(arc, t);
            p.dist(q) - self.clearance_on_arc(arc, t)
        };
        let mut lo = t_in;
        let mut hi = t_out;
        if g(hi) <= 0.0 {
            let p = self.point_on_arc(arc, hi);
            return Circle::new(p, self.clearance_on_arc(arc, hi));
        }
        for _ in 0..64 {
            let mid = 0.5 * (lo + hi);
            if g(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo).abs() < 1e-12 {
                break;
            }
        }
        let p = self.point_on_arc(arc, lo);
        Circle::new(p, self.clearance_on_arc(arc, lo))
    }

    /// Node path from `from` up to the root, inclusive on both ends.
    pub fn path_to_root(&self, from: u32) -> Vec<u32> {
        let mut out = vec![from];
        let mut cur = from;
        while let Some((p, _)) = self.parent[cur as usize] {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Stored root path of a leaf (leaf first, root last).
    pub fn leaf_path(&self, leaf: u32) -> &[u32] {
        &self.leaf_paths[&leaf]
    }

    /// Peakward node sequence starting at the upper end of `loc`'s arc and
    /// ending at the root, using the precomputed leaf paths.
    pub fn rootward_nodes(&self, loc: AxisLocation) -> (f64, Vec<u32>) {
        let arc = &self.arcs[loc.arc as usize];
        // The child end is the one whose parent link crosses this arc.
        let (child, parent_node) = if self.parent[arc.a as usize].map(|(p, _)| p) == Some(arc.b) {
            (arc.a, arc.b)
        } else {
            (arc.b, arc.a)
        };
        let _ = parent_node;
        let leaf = self.arc_leaf[loc.arc as usize];
        let path = &self.leaf_paths[&leaf];
        let child_idx = (self.depth[leaf as usize] - self.depth[child as usize]) as usize;
        debug_assert_eq!(path[child_idx], child);
        let t_child = self.arc_param_of_node(loc.arc, child);
        (t_child, path[child_idx + 1..].to_vec())
    }

    /// Arcs bounding the cell of a boundary element.
    pub fn cell_chain(&self, element: usize) -> &[u32] {
        &self.cells[element]
    }

    /// Validate the distinct-clearance assumption over non-leaf nodes.
    pub fn validate_distinct_clearances(&self) -> Result<()> {
        let mut radii: Vec<f64> = self
            .nodes
            .iter()
            .filter(|n| n.kind != NodeKind::Leaf && !n.arcs.is_empty())
            .map(|n| n.clearance)
            .collect();
        radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for w in radii.windows(2) {
            if (w[1] - w[0]).abs() < 1e-9 {
                return Err(Error::DegenerateInput(
                    "two internal axis nodes have equal clearance".into(),
                ));
            }
        }
        Ok(())
    }

    /// Cut the tree at valley nodes into mountains. At every node at most
    /// one incident arc rises away, so each mountain has a unique peak.
    pub fn mountains(&self) -> Vec<Mountain> {
        let n = self.nodes.len();
        let mut is_valley = vec![false; n];
        for (id, node) in self.nodes.iter().enumerate() {
            if node.kind == NodeKind::Leaf || node.arcs.is_empty() {
                continue;
            }
            let all_rise = node.arcs.iter().all(|&a| {
                let arc = &self.arcs[a as usize];
                let other = if arc.a == id as u32 { arc.b } else { arc.a };
                self.nodes[other as usize].clearance >= node.clearance
            });
            if all_rise {
                is_valley[id] = true;
            }
        }
        // Flood-fill arcs without expanding through valley nodes.
        let mut arc_seen = vec![false; self.arcs.len()];
        let mut out = Vec::new();
        for start in 0..self.arcs.len() {
            if arc_seen[start] {
                continue;
            }
            let mut arcs = Vec::new();
            let mut nodes: HashSet<u32> = HashSet::new();
            let mut stack = vec![start as u32];
            arc_seen[start] = true;
            while let Some(a) = stack.pop() {
                arcs.push(a);
                let arc = &self.arcs[a as usize];
                for node in [arc.a, arc.b] {
                    nodes.insert(node);
                    if is_valley[node as usize] {
                        continue;
                    }
                    for &next in &self.nodes[node as usize].arcs {
                        if !arc_seen[next as usize] {
                            arc_seen[next as usize] = true;
                            stack.push(next);
                        }
                    }
                }
            }
            let peak = nodes
                .iter()
                .copied()
                .max_by(|&x, &y| {
                    self.nodes[x as usize]
                        .clearance
                        .partial_cmp(&self.nodes[y as usize].clearance)
                        .unwrap()
                        .then(y.cmp(&x))
                })
                .unwrap();
            // Orient every mountain node toward the peak.
            let arc_set: HashSet<u32> = arcs.iter().copied().collect();
            let mut parent = HashMap::new();
            let mut stack = vec![peak];
            let mut seen: HashSet<u32> = HashSet::new();
            seen.insert(peak);
            while let Some(u) = stack.pop() {
                for &a in &self.nodes[u as usize].arcs {
                    if !arc_set.contains(&a) {
                        continue;
                    }
                    let arc = &self.arcs[a as usize];
                    let v = if arc.a == u { arc.b } else { arc.a };
                    if seen.insert(v) {
                        parent.insert(v, (u, a));
                        stack.push(v);
                    }
                }
            }
            let valleys = nodes
                .iter()
                .copied()
                .filter(|&u| {
                    is_valley[u as usize] || self.nodes[u as usize].kind == NodeKind::Leaf
                })
                .collect();
            let mut nodes: Vec<u32> = nodes.into_iter().collect();
            nodes.sort_unstable();
            out.push(Mountain { arcs, nodes, peak, valleys, parent });
        }
        out
    }

    fn insert_breakpoints(&mut self) {
        let mut extra: Vec<(u32, f64)> = Vec::new(); // (arc, split t)
        for (id, arc) in self.arcs.iter().enumerate() {
            match arc.support {
                Support::Line => {}
                Support::LineToVertex { v } => {
                    // Clearance dips where the vertex projects onto the arc.
                    let pa = self.nodes[arc.a as usize].pos;
                    let pb = self.nodes[arc.b as usize].pos;
                    let len2 = pa.dist2(pb);
                    if len2 == 0.0 {
                        continue;
                    }
                    let t =
                        ((v.x - pa.x) * (pb.x - pa.x) + (v.y - pa.y) * (pb.y - pa.y)) / len2;
                    if t > 1e-9 && t < 1.0 - 1e-9 {
                        extra.push((id as u32, t));
                    }
                }
                Support::Parabola { uf, u0, u1, .. } => {
                    let t = (uf - u0) / (u1 - u0);
                    if t > 1e-9 && t < 1.0 - 1e-9 {
                        extra.push((id as u32, t));
                    }
                }
            }
        }
        for (arc_id, t) in extra {
            let p = self.point_on_arc(arc_id, t);
            let r = self.clearance_on_arc(arc_id, t);
            let node = self.nodes.len() as u32;
            self.nodes.push(AxisNode { pos: p, clearance: r, kind: NodeKind::Breakpoint, arcs: vec![] });
            let old = self.arcs[arc_id as usize].clone();
            // First half replaces the old arc; second half is appended.
            let second = self.arcs.len() as u32;
            let (sup1, sup2) = split_support(&old.support, t, self, &old);
            self.arcs[arc_id as usize] = AxisArc { a: old.a, b: node, elems: old.elems, support: sup1 };
            self.arcs.push(AxisArc { a: node, b: old.b, elems: old.elems, support: sup2 });
            let bn = old.b as usize;
            for slot in self.nodes[bn].arcs.iter_mut() {
                if *slot == arc_id {
                    *slot = second;
                }
            }
            self.nodes[node as usize].arcs = vec![arc_id, second];
        }
    }

    fn check_tree(&self) -> Result<()> {
        let used: HashSet<u32> = self
            .arcs
            .iter()
            .flat_map(|a| [a.a, a.b])
            .collect();
        if self.arcs.is_empty() || used.len() != self.arcs.len() + 1 {
            return Err(Error::DegenerateInput(format!(
                "medial axis is not a tree ({} nodes touched, {} arcs)",
                used.len(),
                self.arcs.len()
            )));
        }
        // Connectivity.
        let mut seen: HashSet<u32> = HashSet::new();
        let mut stack = vec![*used.iter().next().unwrap()];
        seen.insert(stack[0]);
        while let Some(u) = stack.pop() {
            for &a in &self.nodes[u as usize].arcs {
                let arc = &self.arcs[a as usize];
                let v = if arc.a == u { arc.b } else { arc.a };
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        if seen.len() != used.len() {
            return Err(Error::DegenerateInput("medial axis is disconnected".into()));
        }
        Ok(())
    }

    /// Root the tree at the global clearance maximum and store per-leaf
    /// root paths for binary searching.
    fn orient(&mut self) {
        let root = (0..self.nodes.len() as u32)
            .filter(|&i| !self.nodes[i as usize].arcs.is_empty())
            .max_by(|&x, &y| {
                self.nodes[x as usize]
                    .clearance
                    .partial_cmp(&self.nodes[y as usize].clearance)
                    .unwrap()
                    .then(y.cmp(&x))
            })
            .unwrap();
        self.root = root;
        self.parent = vec![None; self.nodes.len()];
        self.depth = vec![0; self.nodes.len()];
        let mut order = vec![root];
        let mut seen = vec![false; self.nodes.len()];
        seen[root as usize] = true;
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &a in &self.nodes[u as usize].arcs {
                let arc = &self.arcs[a as usize];
                let v = if arc.a == u { arc.b } else { arc.a };
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    self.parent[v as usize] = Some((u, a));
                    self.depth[v as usize] = self.depth[u as usize] + 1;
                    order.push(v);
                }
            }
        }
        // Deepest-first pass assigns to every arc a leaf below it.
        self.arc_leaf = vec![u32::MAX; self.arcs.len()];
        let mut carrier: Vec<u32> = (0..self.nodes.len() as u32).collect();
        for &u in order.iter().rev() {
            let carried = carrier[u as usize];
            if let Some((p, a)) = self.parent[u as usize] {
                self.arc_leaf[a as usize] = carried;
                if self.nodes[carried as usize].kind == NodeKind::Leaf
                    || self.nodes[p as usize].kind != NodeKind::Leaf
                {
                    carrier[p as usize] = carried;
                }
            }
        }
        self.leaf_paths = HashMap::new();
        for leaf in 0..self.nodes.len() as u32 {
            if self.nodes[leaf as usize].kind == NodeKind::Leaf
                && !self.nodes[leaf as usize].arcs.is_empty()
            {
                self.leaf_paths.insert(leaf, self.path_to_root(leaf));
            }
        }
        // Arc leaves must be actual leaves; fall back to any subtree walk.
        for a in 0..self.arcs.len() {
            let leaf = self.arc_leaf[a];
            if leaf == u32::MAX || self.nodes[leaf as usize].kind != NodeKind::Leaf {
                // Walk down from the child end to a leaf.
                let arc = &self.arcs[a];
                let child = if self.parent[arc.a as usize].map(|(_, ar)| ar) == Some(a as u32) {
                    arc.a
                } else {
                    arc.b
                };
                let mut cur = child;
                loop {
                    let down = self.nodes[cur as usize].arcs.iter().copied().find(|&x| {
                        let xa = &self.arcs[x as usize];
                        let other = if xa.a == cur { xa.b } else { xa.a };
                        self.parent[other as usize].map(|(p, _)| p) == Some(cur)
                    });
                    match down {
                        Some(x) => {
                            let xa = &self.arcs[x as usize];
                            cur = if xa.a == cur { xa.b } else { xa.a };
                        }
                        None => break,
                    }
                }
                debug_assert_eq!(self.nodes[cur as usize].kind, NodeKind::Leaf);
                self.arc_leaf[a] = cur;
                if !self.leaf_paths.contains_key(&cur) {
                    let path = self.path_to_root(cur);
                    self.leaf_paths.insert(cur, path);
                }
            }
        }
        // Cell chains.
        self.cells = vec![Vec::new(); self.elems.len()];
        for (id, arc) in self.arcs.iter().enumerate() {
            for e in arc.elems {
                let idx = match e {
                    Element::Edge(i) => i,
                    Element::Reflex(vi) => {
                        self.poly.len()
                            + self.reflex_index(vi).expect("reflex vertex not registered")
                    }
                };
                self.cells[idx].push(id as u32);
            }
        }
    }

    fn reflex_index(&self, vi: usize) -> Option<usize> {
        self.elems[self.poly.len()..]
            .iter()
            .position(|g| matches!(g, ElemGeom::Vertex { p } if p.dist(self.poly.vertex(vi)) == 0.0))
    }

    /// Trapezoidal map over polygon edges and (straight) axis arcs, with
    /// cell labels on both sides of every segment.
    fn build_locator(&self) -> TrapMap {
        let mut segs: Vec<(Point2, Point2, u32, u32)> = Vec::new();
        for i in 0..self.poly.len() {
            let (a, b) = self.poly.edge(i);
            segs.push((a, b, i as u32, OUTER));
        }
        for arc in &self.arcs {
            let (pa, pb) = (self.nodes[arc.a as usize].pos, self.nodes[arc.b as usize].pos);
            if pa.dist(pb) == 0.0 {
                continue;
            }
            let (e1, e2) = match (arc.elems[0], arc.elems[1]) {
                (Element::Edge(i), Element::Edge(j)) => (i, j),
                _ => unreachable!("convex axes carry edge pairs only"),
            };
            // Label sides by which edge's foot lies there.
            let mid = pa.lerp(pb, 0.5);
            let foot = match self.elems[e1] {
                ElemGeom::Edge { a, b, .. } => project_point_segment(mid, a, b),
                _ => unreachable!(),
            };
            let side = orient2d(pa, pb, foot);
            if side > 0.0 {
                segs.push((pa, pb, e1 as u32, e2 as u32));
            } else {
                segs.push((pa, pb, e2 as u32, e1 as u32));
            }
        }
        TrapMap::build(&segs, 0x9e3779b9)
    }
}

fn split_support(sup: &Support, t: f64, axis: &MedialAxis, old: &AxisArc) -> (Support, Support) {
    match *sup {
        Support::Line => {
            let _ = (axis, old);
            (Support::Line, Support::Line)
        }
        Support::LineToVertex { v } => {
            (Support::LineToVertex { v }, Support::LineToVertex { v })
        }
        Support::Parabola { origin, dir, normal, uf, h, u0, u1 } => {
            let um = u0 + t * (u1 - u0);
            (
                Support::Parabola { origin, dir, normal, uf, h, u0, u1: um },
                Support::Parabola { origin, dir, normal, uf, h, u0: um, u1 },
            )
        }
    }
}

/// Node satisfying the half-split bound for the subtree induced by `nodes`.
pub fn centroid_of_subtree(axis: &MedialAxis, nodes: &HashSet<u32>) -> u32 {
    assert!(!nodes.is_empty());
    let n = nodes.len();
    // Subtree sizes via one DFS from an arbitrary member.
    let root = *nodes.iter().min().unwrap();
    let mut order = vec![root];
    let mut parent: HashMap<u32, u32> = HashMap::new();
    let mut seen: HashSet<u32> = HashSet::new();
    seen.insert(root);
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &a in &axis.nodes[u as usize].arcs {
            let arc = &axis.arcs[a as usize];
            let v = if arc.a == u { arc.b } else { arc.a };
            if nodes.contains(&v) && seen.insert(v) {
                parent.insert(v, u);
                order.push(v);
            }
        }
    }
    debug_assert_eq!(order.len(), n, "induced node set must be connected");
    let mut size: HashMap<u32, usize> = HashMap::new();
    for &u in order.iter().rev() {
        let s = 1 + axis.nodes[u as usize]
            .arcs
            .iter()
            .map(|&a| {
                let arc = &axis.arcs[a as usize];
                let v = if arc.a == u { arc.b } else { arc.a };
                if parent.get(&v) == Some(&u) {
                    *size.get(&v).unwrap_or(&0)
                } else {
                    0
                }
            })
            .sum::<usize>();
        size.insert(u, s);
    }
    let bound = n.div_ceil(2);
    for &u in &order {
        // Components after removing u: each child subtree plus the rest.
        let mut worst = 0usize;
        let mut child_sum = 0usize;
        for &a in &axis.nodes[u as usize].arcs {
            let arc = &axis.arcs[a as usize];
            let v = if arc.a == u { arc.b } else { arc.a };
            if parent.get(&v) == Some(&u) {
                let s = size[&v];
                worst = worst.max(s);
                child_sum += s;
            }
        }
        let rest = n - 1 - child_sum;
        worst = worst.max(rest);
        if worst <= bound {
            return u;
        }
    }
    unreachable!("every tree has a centroid")
}

impl Mountain {
    pub fn contains_node(&self, node: u32) -> bool {
        self.nodes.binary_search(&node).is_ok()
    }

    pub fn contains_arc(&self, arc: u32) -> bool {
        self.arcs.contains(&arc)
    }

    /// Parent link of a non-peak node: (next node toward the peak, arc).
    pub fn parent_of(&self, node: u32) -> Option<(u32, u32)> {
        self.parent.get(&node).copied()
    }

    /// Node sequence from `from` to the peak (exclusive of `from` itself).
    pub fn path_to_peak(&self, from: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut cur = from;
        while let Some(&(p, _)) = self.parent.get(&cur) {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Peakward endpoint of an arc in this mountain.
    pub fn peakward_end(&self, axis: &MedialAxis, arc: u32) -> u32 {
        let a = &axis.arcs[arc as usize];
        if self.parent.get(&a.a).map(|&(p, _)| p) == Some(a.b) {
            a.b
        } else {
            a.a
        }
    }
}

// ---------------------------------------------------------------------------
// Convex construction: inward offset with edge-collapse events
// ---------------------------------------------------------------------------

#[derive(PartialEq)]
struct Event {
    r: f64,
    edge: usize,
    stamp: u64,
}

impl Eq for Event {}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Min-heap on r.
        other
            .r
            .partial_cmp(&self.r)
            .unwrap()
            .then(other.edge.cmp(&self.edge))
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn edge_line(poly: &Polygon, i: usize) -> ElemGeom {
    let (a, b) = poly.edge(i);
    let len = a.dist(b);
    ElemGeom::Edge { a, b, normal: pt(-(b.y - a.y) / len, (b.x - a.x) / len) }
}

/// Equidistant point of three inward edge lines.
fn tri_equidistant(e1: &ElemGeom, e2: &ElemGeom, e3: &ElemGeom) -> Option<(Point2, f64)> {
    let (a1, n1) = match e1 {
        ElemGeom::Edge { a, normal, .. } => (*a, *normal),
        _ => return None,
    };
    let (a2, n2) = match e2 {
        ElemGeom::Edge { a, normal, .. } => (*a, *normal),
        _ => return None,
    };
    let (a3, n3) = match e3 {
        ElemGeom::Edge { a, normal, .. } => (*a, *normal),
        _ => return None,
    };
    let rows = [
        (n1.x - n2.x, n1.y - n2.y, a1.x * n1.x + a1.y * n1.y - (a2.x * n2.x + a2.y * n2.y)),
        (n2.x - n3.x, n2.y - n3.y, a2.x * n2.x + a2.y * n2.y - (a3.x * n3.x + a3.y * n3.y)),
        (n1.x - n3.x, n1.y - n3.y, a1.x * n1.x + a1.y * n1.y - (a3.x * n3.x + a3.y * n3.y)),
    ];
    // Pick the best-conditioned pair of equations.
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let det = rows[i].0 * rows[j].1 - rows[i].1 * rows[j].0;
        if best.map_or(true, |(d, _, _)| det.abs() > d.abs()) {
            best = Some((det, i, j));
        }
    }
    let (det, i, j) = best?;
    if det.abs() < 1e-14 {
        return None;
    }
    let x = (rows[i].2 * rows[j].1 - rows[j].2 * rows[i].1) / det;
    let y = (rows[i].0 * rows[j].2 - rows[j].0 * rows[i].2) / det;
    let p = pt(x, y);
    Some((p, e1.line_dist(p)))
}

fn build_convex(poly: &Polygon, scale: f64) -> Result<MedialAxis> {
    let n = poly.len();
    for i in 0..n {
        let d = orient2d(poly.vertex(i), poly.vertex(i + 1), poly.vertex(i + 2));
        if d.abs() < REL * scale * scale {
            return Err(Error::DegenerateInput(
                "consecutive collinear edges in convex polygon".into(),
            ));
        }
    }
    let elems: Vec<ElemGeom> = (0..n).map(|i| edge_line(poly, i)).collect();
    let mut axis = MedialAxis {
        poly: poly.clone(),
        nodes: (0..n)
            .map(|i| AxisNode {
                pos: poly.vertex(i),
                clearance: 0.0,
                kind: NodeKind::Leaf,
                arcs: vec![],
            })
            .collect(),
        arcs: Vec::new(),
        elems,
        root: 0,
        parent: Vec::new(),
        depth: Vec::new(),
        arc_leaf: Vec::new(),
        leaf_paths: HashMap::new(),
        cells: Vec::new(),
        locator: None,
    };

    let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
    let mut alive = vec![true; n];
    let mut stamp = vec![0u64; n];
    // Pending axis node of the bisector between prev(f) and f.
    let mut node_before: Vec<u32> = (0..n as u32).collect();
    let mut alive_count = n;

    let mut heap: BinaryHeap<Event> = BinaryHeap::new();
    let push_event = |heap: &mut BinaryHeap<Event>,
                      axis: &MedialAxis,
                      prev: &[usize],
                      next: &[usize],
                      stamp: &[u64],
                      f: usize| {
        if let Some((_, r)) =
            tri_equidistant(&axis.elems[prev[f]], &axis.elems[f], &axis.elems[next[f]])
        {
            if r.is_finite() && r > 0.0 {
                heap.push(Event { r, edge: f, stamp: stamp[f] });
            }
        }
    };
    for f in 0..n {
        push_event(&mut heap, &axis, &prev, &next, &stamp, f);
    }

    let add_node = |axis: &mut MedialAxis, p: Point2, r: f64| -> u32 {
        // Reuse coincident nodes (simultaneous collapses).
        for (i, nd) in axis.nodes.iter().enumerate() {
            if nd.kind != NodeKind::Leaf && nd.pos.dist(p) <= REL * scale * 10.0 {
                return i as u32;
            }
        }
        axis.nodes.push(AxisNode { pos: p, clearance: r, kind: NodeKind::Junction, arcs: vec![] });
        (axis.nodes.len() - 1) as u32
    };
    let add_arc = |axis: &mut MedialAxis, u: u32, v: u32, e1: usize, e2: usize| {
        if u == v {
            return;
        }
        let id = axis.arcs.len() as u32;
        axis.arcs.push(AxisArc {
            a: u,
            b: v,
            elems: [Element::Edge(e1), Element::Edge(e2)],
            support: Support::Line,
        });
        axis.nodes[u as usize].arcs.push(id);
        axis.nodes[v as usize].arcs.push(id);
    };

    while alive_count > 3 {
        let ev = match heap.pop() {
            Some(e) => e,
            None => {
                return Err(Error::DegenerateInput("offset event queue ran dry".into()))
            }
        };
        let f = ev.edge;
        if !alive[f] || ev.stamp != stamp[f] {
            continue;
        }
        let (e, g) = (prev[f], next[f]);
        let (u_pos, r) =
            tri_equidistant(&axis.elems[e], &axis.elems[f], &axis.elems[g]).unwrap();
        let u = add_node(&mut axis, u_pos, r);
        add_arc(&mut axis, node_before[f], u, e, f);
        add_arc(&mut axis, node_before[g], u, f, g);
        alive[f] = false;
        alive_count -= 1;
        next[e] = g;
        prev[g] = e;
        node_before[g] = u;
        stamp[e] += 1;
        stamp[g] += 1;
        push_event(&mut heap, &axis, &prev, &next, &stamp, e);
        push_event(&mut heap, &axis, &prev, &next, &stamp, g);
    }

    // Close out the last three edges at their common equidistant point.
    let survivors: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    debug_assert_eq!(survivors.len(), 3);
    let (p, r) = tri_equidistant(
        &axis.elems[survivors[0]],
        &axis.elems[survivors[1]],
        &axis.elems[survivors[2]],
    )
    .ok_or_else(|| Error::DegenerateInput("degenerate final edge triple".into()))?;
    let u = add_node(&mut axis, p, r);
    let mut f = survivors[0];
    for _ in 0..3 {
        add_arc(&mut axis, node_before[f], u, prev[f], f);
        f = next[f];
    }
    Ok(axis)
}

// ---------------------------------------------------------------------------
// Simple-polygon construction: equidistant-triple enumeration
// ---------------------------------------------------------------------------

fn build_simple(poly: &Polygon, _scale: f64, tol: f64) -> Result<MedialAxis> {
    let n = poly.len();
    let reflex: Vec<usize> = poly.reflex_vertices();
    let mut elems: Vec<ElemGeom> = (0..n).map(|i| edge_line(poly, i)).collect();
    let mut elem_tags: Vec<Element> = (0..n).map(Element::Edge).collect();
    for &vi in &reflex {
        elems.push(ElemGeom::Vertex { p: poly.vertex(vi) });
        elem_tags.push(Element::Reflex(vi));
    }
    let m = elems.len();

    // Pairs that can support a medial arc: skip an edge against its own
    // endpoint and degenerate (collinear same-facing) edge pairs.
    let own_endpoint = |ei: usize, tag: Element| -> bool {
        match tag {
            Element::Reflex(vi) => vi == ei || vi == (ei + 1) % n,
            _ => false,
        }
    };
    let pair_ok = |i: usize, j: usize, elems: &[ElemGeom], tags: &[Element]| -> bool {
        match (tags[i], tags[j]) {
            (Element::Edge(ei), Element::Reflex(_)) => {
                if own_endpoint(ei, tags[j]) {
                    return false;
                }
                let v = match elems[j] {
                    ElemGeom::Vertex { p } => p,
                    _ => unreachable!(),
                };
                elems[i].line_dist(v).abs() > tol
            }
            (Element::Reflex(_), Element::Edge(ej)) => {
                if own_endpoint(ej, tags[i]) {
                    return false;
                }
                let v = match elems[i] {
                    ElemGeom::Vertex { p } => p,
                    _ => unreachable!(),
                };
                elems[j].line_dist(v).abs() > tol
            }
            (Element::Edge(_), Element::Edge(_)) => {
                let (n1, n2) = match (&elems[i], &elems[j]) {
                    (ElemGeom::Edge { normal: n1, .. }, ElemGeom::Edge { normal: n2, .. }) => {
                        (*n1, *n2)
                    }
                    _ => unreachable!(),
                };
                // Same-facing near-parallel lines have no usable bisector.
                (n1.x - n2.x).abs() + (n1.y - n2.y).abs() > 1e-9
            }
            _ => true,
        }
    };

    // Candidate nodes from all element triples.
    let mut cand: Vec<(Point2, f64)> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for (x, r) in solve_triple(&elems[i], &elems[j], &elems[k]) {
                    if r > tol && x.is_finite() {
                        cand.push((x, r));
                    }
                }
            }
        }
    }
    // Validate: inside, claimed radius equals true clearance.
    let mut nodes_pos: Vec<(Point2, f64)> = Vec::new();
    'cand: for (x, r) in cand {
        if poly.locate(x) != PointLocation::Inside {
            continue;
        }
        let true_r = elems.iter().map(|e| e.dist(x)).fold(f64::INFINITY, f64::min);
        if (true_r - r).abs() > tol {
            continue;
        }
        for (p, _) in &nodes_pos {
            if p.dist(x) <= tol {
                continue 'cand;
            }
        }
        nodes_pos.push((x, true_r));
    }

    let mut axis = MedialAxis {
        poly: poly.clone(),
        nodes: Vec::new(),
        arcs: Vec::new(),
        elems,
        root: 0,
        parent: Vec::new(),
        depth: Vec::new(),
        arc_leaf: Vec::new(),
        leaf_paths: HashMap::new(),
        cells: Vec::new(),
        locator: None,
    };
    // Leaves at convex vertices first, then junction candidates.
    let reflex_set: HashSet<usize> = reflex.iter().copied().collect();
    let mut leaf_of_vertex: HashMap<usize, u32> = HashMap::new();
    for i in 0..n {
        if !reflex_set.contains(&i) {
            leaf_of_vertex.insert(i, axis.nodes.len() as u32);
            axis.nodes.push(AxisNode {
                pos: poly.vertex(i),
                clearance: 0.0,
                kind: NodeKind::Leaf,
                arcs: vec![],
            });
        }
    }
    let first_junction = axis.nodes.len();
    for (p, r) in &nodes_pos {
        axis.nodes.push(AxisNode { pos: *p, clearance: *r, kind: NodeKind::Junction, arcs: vec![] });
    }

    // Assemble arcs per supporting pair.
    for i in 0..m {
        for j in i + 1..m {
            if !pair_ok(i, j, &axis.elems, &elem_tags) {
                continue;
            }
            let mut incident: Vec<u32> = Vec::new();
            for (idx, (p, r)) in nodes_pos.iter().enumerate() {
                if (axis.elems[i].dist(*p) - r).abs() <= tol
                    && (axis.elems[j].dist(*p) - r).abs() <= tol
                {
                    incident.push((first_junction + idx) as u32);
                }
            }
            // A convex vertex anchors the bisector of its two edges.
            if let (Element::Edge(ei), Element::Edge(ej)) = (elem_tags[i], elem_tags[j]) {
                for (&vi, &leaf) in &leaf_of_vertex {
                    if (vi == (ei + 1) % n && ej == (ei + 1) % n)
                        || (vi == (ej + 1) % n && ei == (ej + 1) % n)
                    {
                        incident.push(leaf);
                    }
                }
            }
            if incident.len() < 2 {
                continue;
            }
            add_pair_arcs(&mut axis, poly, i, j, &elem_tags, &mut incident, tol)?;
        }
    }
    Ok(axis)
}

/// Solutions of d(e1) = d(e2) = d(e3) over supporting lines and points.
fn solve_triple(e1: &ElemGeom, e2: &ElemGeom, e3: &ElemGeom) -> Vec<(Point2, f64)> {
    let verts = [e1, e2, e3]
        .iter()
        .filter(|e| matches!(e, ElemGeom::Vertex { .. }))
        .count();
    match verts {
        0 => tri_equidistant(e1, e2, e3).into_iter().collect(),
        3 => {
            let (p1, p2, p3) = match (e1, e2, e3) {
                (
                    ElemGeom::Vertex { p: p1 },
                    ElemGeom::Vertex { p: p2 },
                    ElemGeom::Vertex { p: p3 },
                ) => (*p1, *p2, *p3),
                _ => unreachable!(),
            };
            match crate::geom::circumcircle(p1, p2, p3) {
                Ok(c) => vec![(c.center, c.radius)],
                Err(_) => vec![],
            }
        }
        1 => {
            // Two edges, one vertex: walk the edge-pair bisector line.
            let (ea, eb, v) = {
                let mut edges = Vec::new();
                let mut vert = None;
                for e in [e1, e2, e3] {
                    match e {
                        ElemGeom::Vertex { p } => vert = Some(*p),
                        edge => edges.push(*edge),
                    }
                }
                (edges[0], edges[1], vert.unwrap())
            };
            let Some((p0, u)) = edge_bisector_line(&ea, &eb) else {
                return vec![];
            };
            // r(t) is affine along the bisector; |x(t)-v|^2 = r(t)^2.
            let r0 = ea.line_dist(p0);
            let r1 = match ea {
                ElemGeom::Edge { normal, .. } => u.x * normal.x + u.y * normal.y,
                _ => unreachable!(),
            };
            let ex = p0.x - v.x;
            let ey = p0.y - v.y;
            let aa = 1.0 - r1 * r1;
            let bb = 2.0 * (ex * u.x + ey * u.y) - 2.0 * r0 * r1;
            let cc = ex * ex + ey * ey - r0 * r0;
            crate::oracle::quadratic_roots(aa, bb, cc)
                .into_iter()
                .map(|t| {
                    let x = pt(p0.x + t * u.x, p0.y + t * u.y);
                    (x, ea.line_dist(x))
                })
                .collect()
        }
        2 => {
            // One edge, two vertices: walk the perpendicular bisector.
            let (edge, v1, v2) = {
                let mut verts = Vec::new();
                let mut ed = None;
                for e in [e1, e2, e3] {
                    match e {
                        ElemGeom::Vertex { p } => verts.push(*p),
                        other => ed = Some(*other),
                    }
                }
                (ed.unwrap(), verts[0], verts[1])
            };
            if v1.dist(v2) == 0.0 {
                return vec![];
            }
            let mid = v1.lerp(v2, 0.5);
            let len = v1.dist(v2);
            let u = pt(-(v2.y - v1.y) / len, (v2.x - v1.x) / len);
            // |x(t)-v1|^2 = d_edge(x(t))^2, quadratic in t.
            let (a0, nrm) = match edge {
                ElemGeom::Edge { a, normal, .. } => (a, normal),
                _ => unreachable!(),
            };
            let d0 = (mid.x - a0.x) * nrm.x + (mid.y - a0.y) * nrm.y;
            let d1 = u.x * nrm.x + u.y * nrm.y;
            let ex = mid.x - v1.x;
            let ey = mid.y - v1.y;
            let aa = 1.0 - d1 * d1;
            let bb = 2.0 * (ex * u.x + ey * u.y) - 2.0 * d0 * d1;
            let cc = ex * ex + ey * ey - d0 * d0;
            crate::oracle::quadratic_roots(aa, bb, cc)
                .into_iter()
                .map(|t| {
                    let x = pt(mid.x + t * u.x, mid.y + t * u.y);
                    (x, x.dist(v1))
                })
                .collect()
        }
        _ => unreachable!(),
    }
}

/// Bisector line of two edge supporting lines with signed inward distances.
fn edge_bisector_line(e1: &ElemGeom, e2: &ElemGeom) -> Option<(Point2, Point2)> {
    let (a1, n1) = match e1 {
        ElemGeom::Edge { a, normal, .. } => (*a, *normal),
        _ => return None,
    };
    let (a2, n2) = match e2 {
        ElemGeom::Edge { a, normal, .. } => (*a, *normal),
        _ => return None,
    };
    let ax = n1.x - n2.x;
    let ay = n1.y - n2.y;
    let b = a1.x * n1.x + a1.y * n1.y - (a2.x * n2.x + a2.y * n2.y);
    let norm2 = ax * ax + ay * ay;
    if norm2 < 1e-18 {
        return None;
    }
    let p0 = pt(ax * b / norm2, ay * b / norm2);
    let inv = norm2.sqrt();
    Some((p0, pt(-ay / inv, ax / inv)))
}

fn add_pair_arcs(
    axis: &mut MedialAxis,
    poly: &Polygon,
    i: usize,
    j: usize,
    tags: &[Element],
    incident: &mut Vec<u32>,
    tol: f64,
) -> Result<()> {
    incident.sort_unstable();
    incident.dedup();
    // Parametrize the bisector and sort the incident points along it.
    enum Param {
        Line { p0: Point2, u: Point2 },
        Parab { origin: Point2, dir: Point2, normal: Point2, uf: f64, h: f64 },
    }
    let param = match (tags[i], tags[j]) {
        (Element::Edge(_), Element::Edge(_)) => {
            let Some((p0, u)) = edge_bisector_line(&axis.elems[i], &axis.elems[j]) else {
                return Ok(());
            };
            Param::Line { p0, u }
        }
        (Element::Reflex(_), Element::Reflex(_)) => {
            let (v1, v2) = match (&axis.elems[i], &axis.elems[j]) {
                (ElemGeom::Vertex { p: v1 }, ElemGeom::Vertex { p: v2 }) => (*v1, *v2),
                _ => unreachable!(),
            };
            let mid = v1.lerp(v2, 0.5);
            let len = v1.dist(v2);
            Param::Line { p0: mid, u: pt(-(v2.y - v1.y) / len, (v2.x - v1.x) / len) }
        }
        _ => {
            let (edge, focus) = match (&axis.elems[i], &axis.elems[j]) {
                (ElemGeom::Edge { a, b, normal }, ElemGeom::Vertex { p }) => ((*a, *b, *normal), *p),
                (ElemGeom::Vertex { p }, ElemGeom::Edge { a, b, normal }) => ((*a, *b, *normal), *p),
                _ => unreachable!(),
            };
            let (a, b, normal) = edge;
            let len = a.dist(b);
            let dir = pt((b.x - a.x) / len, (b.y - a.y) / len);
            let h = (focus.x - a.x) * normal.x + (focus.y - a.y) * normal.y;
            if h <= tol {
                return Ok(());
            }
            let uf = (focus.x - a.x) * dir.x + (focus.y - a.y) * dir.y;
            Param::Parab { origin: a, dir, normal, uf, h }
        }
    };
    let param_of = |p: Point2| -> f64 {
        match &param {
            Param::Line { p0, u } => (p.x - p0.x) * u.x + (p.y - p0.y) * u.y,
            Param::Parab { origin, dir, .. } => {
                (p.x - origin.x) * dir.x + (p.y - origin.y) * dir.y
            }
        }
    };
    let mut pts: Vec<(f64, u32)> = incident
        .iter()
        .map(|&id| (param_of(axis.nodes[id as usize].pos), id))
        .collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for w in pts.windows(2) {
        let (ta, na) = w[0];
        let (tb, nb) = w[1];
        if tb - ta <= tol || na == nb {
            continue;
        }
        // Validate at the parameter midpoint: exactly this pair properly
        // achieves the clearance there.
        let tm = 0.5 * (ta + tb);
        let mid = match &param {
            Param::Line { p0, u } => pt(p0.x + tm * u.x, p0.y + tm * u.y),
            Param::Parab { origin, dir, normal, uf, h } => {
                let v = ((tm - uf) * (tm - uf) + h * h) / (2.0 * h);
                pt(origin.x + tm * dir.x + v * normal.x, origin.y + tm * dir.y + v * normal.y)
            }
        };
        if poly.locate(mid) != PointLocation::Inside {
            continue;
        }
        let rm = axis.elems[i].dist(mid);
        if (axis.elems[j].dist(mid) - rm).abs() > tol {
            continue;
        }
        let true_r = axis
            .elems
            .iter()
            .map(|e| e.dist(mid))
            .fold(f64::INFINITY, f64::min);
        if (true_r - rm).abs() > tol {
            continue;
        }
        if !axis.elems[i].properly_achieves(mid, true_r, tol)
            || !axis.elems[j].properly_achieves(mid, true_r, tol)
        {
            continue;
        }
        let extra = (0..axis.elems.len()).any(|k| {
            k != i && k != j && axis.elems[k].properly_achieves(mid, true_r, tol)
        });
        if extra {
            continue;
        }
        let support = match &param {
            Param::Line { .. } => match (tags[i], tags[j]) {
                (Element::Reflex(_), Element::Reflex(_)) => {
                    let v = match &axis.elems[i] {
                        ElemGeom::Vertex { p } => *p,
                        _ => unreachable!(),
                    };
                    Support::LineToVertex { v }
                }
                _ => Support::Line,
            },
            Param::Parab { origin, dir, normal, uf, h } => Support::Parabola {
                origin: *origin,
                dir: *dir,
                normal: *normal,
                uf: *uf,
                h: *h,
                u0: ta,
                u1: tb,
            },
        };
        let id = axis.arcs.len() as u32;
        axis.arcs.push(AxisArc { a: na, b: nb, elems: [tags[i], tags[j]], support });
        axis.nodes[na as usize].arcs.push(id);
        axis.nodes[nb as usize].arcs.push(id);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::clearance;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_square() -> Polygon {
        Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)]).unwrap()
    }

    fn rectangle_2x1() -> Polygon {
        Polygon::new(vec![pt(0.0, 0.0), pt(2.0, 0.0), pt(2.0, 1.0), pt(0.0, 1.0)]).unwrap()
    }

    pub(crate) fn dumbbell() -> Polygon {
        // Two 2x2 rooms joined by a thin corridor.
        Polygon::new(vec![
            pt(0.0, 0.0),
            pt(2.0, 0.0),
            pt(2.0, 0.8),
            pt(3.0, 0.8),
            pt(3.0, 0.0),
            pt(5.0, 0.0),
            pt(5.0, 2.0),
            pt(3.0, 2.0),
            pt(3.0, 1.2),
            pt(2.0, 1.2),
            pt(2.0, 2.0),
            pt(0.0, 2.0),
        ])
        .unwrap()
    }

    pub(crate) fn random_star_polygon(rng: &mut ChaCha8Rng, n: usize) -> Polygon {
        loop {
            let mut angles: Vec<f64> = (0..n)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect();
            angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
            angles.dedup_by(|a, b| (*a - *b).abs() < 0.05);
            if angles.len() < 4 {
                continue;
            }
            let verts: Vec<Point2> = angles
                .iter()
                .map(|&t| {
                    let r = rng.gen_range(2.0..10.0);
                    pt(r * t.cos(), r * t.sin())
                })
                .collect();
            if let Ok(p) = Polygon::new(verts) {
                return p;
            }
        }
    }

    #[test]
    fn square_axis_shape() {
        let axis = MedialAxis::build(&unit_square()).unwrap();
        assert_eq!(axis.arcs.len(), 4);
        let center = &axis.nodes[axis.root() as usize];
        assert!(center.pos.dist(pt(0.5, 0.5)) < 1e-9);
        assert!((center.clearance - 0.5).abs() < 1e-9);
    }

    #[test]
    fn rectangle_axis_shape() {
        let axis = MedialAxis::build(&rectangle_2x1()).unwrap();
        // 4 corner arcs plus the spine.
        assert_eq!(axis.arcs.len(), 5);
        let junctions: Vec<&AxisNode> = axis
            .nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Junction)
            .collect();
        assert_eq!(junctions.len(), 2);
        for j in junctions {
            assert!((j.clearance - 0.5).abs() < 1e-9);
            assert!(
                j.pos.dist(pt(0.5, 0.5)) < 1e-9 || j.pos.dist(pt(1.5, 0.5)) < 1e-9,
                "{:?}",
                j.pos
            );
        }
    }

    #[test]
    fn equilateral_triangle_incenter() {
        let h = 3.0f64.sqrt() / 2.0;
        let tri = Polygon::new(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(0.5, h)]).unwrap();
        let axis = MedialAxis::build(&tri).unwrap();
        let root = &axis.nodes[axis.root() as usize];
        assert!((root.clearance - 1.0 / (2.0 * 3.0f64.sqrt())).abs() < 1e-9);
        assert!(root.pos.dist(pt(0.5, h / 3.0)) < 1e-9);
    }

    #[test]
    fn clearance_along_square_diagonal() {
        let axis = MedialAxis::build(&unit_square()).unwrap();
        // Arc from corner (0,0) to the center.
        let arc = (0..axis.arcs.len() as u32)
            .find(|&a| {
                let arc = &axis.arcs[a as usize];
                axis.nodes[arc.a as usize].pos.dist(pt(0.0, 0.0)) < 1e-9
                    || axis.nodes[arc.b as usize].pos.dist(pt(0.0, 0.0)) < 1e-9
            })
            .unwrap();
        let a = &axis.arcs[arc as usize];
        let (t0, t1) = if axis.nodes[a.a as usize].clearance < 1e-12 {
            (0.0, 1.0)
        } else {
            (1.0, 0.0)
        };
        assert!((axis.clearance_on_arc(arc, t0) - 0.0).abs() < 1e-9);
        assert!((axis.clearance_on_arc(arc, t1) - 0.5).abs() < 1e-9);
        assert!((axis.clearance_on_arc(arc, 0.5) - 0.25).abs() < 1e-9);
    }

    #[test]
    fn rectangle_spine_constant_clearance() {
        let axis = MedialAxis::build(&rectangle_2x1()).unwrap();
        let spine = (0..axis.arcs.len() as u32)
            .find(|&a| {
                let arc = &axis.arcs[a as usize];
                axis.nodes[arc.a as usize].kind == NodeKind::Junction
                    && axis.nodes[arc.b as usize].kind == NodeKind::Junction
            })
            .unwrap();
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            assert!((axis.clearance_on_arc(spine, t) - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn nearest_arc_square_and_rectangle() {
        let axis = MedialAxis::build(&unit_square()).unwrap();
        // Symmetric query: either bottom diagonal acceptable.
        let (arc, _, _) = axis.locate_nearest_arc(pt(0.5, 0.25)).unwrap();
        let touches_bottom_corner = {
            let a = &axis.arcs[arc as usize];
            [a.a, a.b].iter().any(|&nid| {
                let p = axis.nodes[nid as usize].pos;
                p.dist(pt(0.0, 0.0)) < 1e-9 || p.dist(pt(1.0, 0.0)) < 1e-9
            })
        };
        assert!(touches_bottom_corner);

        let (arc2, _, _) = axis.locate_nearest_arc(pt(0.1, 0.12)).unwrap();
        let a2 = &axis.arcs[arc2 as usize];
        assert!([a2.a, a2.b]
            .iter()
            .any(|&nid| axis.nodes[nid as usize].pos.dist(pt(0.0, 0.0)) < 1e-9));

        let rect_axis = MedialAxis::build(&rectangle_2x1()).unwrap();
        let (_, near, _) = rect_axis.locate_nearest_arc(pt(1.0, 0.6)).unwrap();
        assert!(near.dist(pt(1.0, 0.5)) < 1e-9, "{near:?}");

        assert!(matches!(
            axis.locate_nearest_arc(pt(1.5, 0.5)),
            Err(Error::OutsidePolygon)
        ));
    }

    #[test]
    fn rising_path_square_corner() {
        let axis = MedialAxis::build(&unit_square()).unwrap();
        let q = pt(0.1, 0.1);
        let (arc, _, t) = axis.locate_nearest_arc(q).unwrap();
        let (t_child, path) = axis.rootward_nodes(AxisLocation { arc, t });
        let _ = t_child;
        let ans = axis
            .rising_path_mec(AxisLocation { arc, t }, &path, q)
            .unwrap();
        let expect = 0.1 * (2.0 + 2.0f64.sqrt());
        assert!((ans.radius - expect).abs() < 1e-9, "r = {}", ans.radius);
        assert!((ans.center.x - ans.center.y).abs() < 1e-9);

        // Peak contains the center query.
        let q2 = pt(0.5, 0.5);
        let (arc2, _, t2) = axis.locate_nearest_arc(q2).unwrap();
        let (_, path2) = axis.rootward_nodes(AxisLocation { arc: arc2, t: t2 });
        let ans2 = axis
            .rising_path_mec(AxisLocation { arc: arc2, t: t2 }, &path2, q2)
            .unwrap();
        assert!((ans2.radius - 0.5).abs() < 1e-9);
    }

    #[test]
    fn rising_path_constant_spine_returns_peakward_most() {
        let axis = MedialAxis::build(&rectangle_2x1()).unwrap();
        let q = pt(0.5, 0.5);
        // Entry at the left junction, path along the spine to the right one.
        let left = (0..axis.nodes.len() as u32)
            .find(|&i| axis.nodes[i as usize].pos.dist(pt(0.5, 0.5)) < 1e-9)
            .unwrap();
        let right = (0..axis.nodes.len() as u32)
            .find(|&i| axis.nodes[i as usize].pos.dist(pt(1.5, 0.5)) < 1e-9)
            .unwrap();
        let spine = axis.arc_between(left, right).unwrap();
        let t_left = axis.arc_param_of_node(spine, left);
        let ans = axis
            .rising_path_mec(AxisLocation { arc: spine, t: t_left }, &[right], q)
            .unwrap();
        assert!((ans.radius - 0.5).abs() < 1e-9);
        assert!(ans.center.dist(pt(1.0, 0.5)) < 1e-6, "{:?}", ans.center);
    }

    #[test]
    fn dumbbell_axis_and_mountains() {
        let poly = dumbbell();
        let axis = MedialAxis::build(&poly).unwrap();
        let mountains = axis.mountains();
        assert!(mountains.len() >= 2, "got {} mountains", mountains.len());
        // Partition: every arc in exactly one mountain.
        let mut count = vec![0usize; axis.arcs.len()];
        for m in &mountains {
            for &a in &m.arcs {
                count[a as usize] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 1));
        // Peaks in the two rooms have clearance ~1.
        let mut peaks: Vec<f64> = mountains
            .iter()
            .map(|m| axis.nodes[m.peak as usize].clearance)
            .collect();
        peaks.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert!((peaks[0] - 1.0).abs() < 1e-6);
        assert!((peaks[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn convex_polygon_single_mountain() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..5 {
            let poly = crate::instances::random_convex_polygon(&mut rng, 12);
            let axis = MedialAxis::build(&poly).unwrap();
            assert_eq!(axis.mountains().len(), 1);
        }
    }

    #[test]
    fn node_clearance_consistency_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..15 {
            let n = rng.gen_range(5..14);
            let poly = random_star_polygon(&mut rng, n);
            let axis = match MedialAxis::build(&poly) {
                Ok(a) => a,
                Err(_) => continue,
            };
            for node in &axis.nodes {
                if node.arcs.is_empty() || node.kind == NodeKind::Leaf {
                    continue;
                }
                let c = clearance(&poly, node.pos).unwrap_or(0.0);
                assert!(
                    (c - node.clearance).abs() <= 1e-7,
                    "trial {trial}: node at {:?} clearance {} vs {}",
                    node.pos,
                    node.clearance,
                    c
                );
            }
            // Junction circles touch >= 3 elements.
            for node in &axis.nodes {
                if node.kind != NodeKind::Junction || node.arcs.is_empty() {
                    continue;
                }
                let touching = (0..axis.element_count())
                    .filter(|&e| (axis.element_distance(e, node.pos) - node.clearance).abs() < 1e-6)
                    .count();
                assert!(touching >= 3, "junction touches only {touching}");
            }
        }
    }

    #[test]
    fn mountain_paths_rise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let n = rng.gen_range(6..14);
            let poly = random_star_polygon(&mut rng, n);
            let axis = match MedialAxis::build(&poly) {
                Ok(a) => a,
                Err(_) => continue,
            };
            for m in axis.mountains() {
                for &v in &m.valleys {
                    let mut cur = axis.nodes[v as usize].clearance;
                    for step in m.path_to_peak(v) {
                        let r = axis.nodes[step as usize].clearance;
                        assert!(r >= cur - 1e-9, "clearance dipped on a peak path");
                        cur = r;
                    }
                }
            }
        }
    }

    #[test]
    fn centroid_small_cases() {
        // Path of three nodes: middle is the centroid.
        let tri = Polygon::new(vec![pt(0.0, 0.0), pt(4.0, 0.0), pt(0.0, 3.0)]).unwrap();
        let axis = MedialAxis::build(&tri).unwrap();
        let all: HashSet<u32> = (0..axis.nodes.len() as u32).collect();
        let c = centroid_of_subtree(&axis, &all);
        // Star of 3 leaves + hub: hub is the centroid.
        assert_eq!(axis.nodes[c as usize].kind, NodeKind::Junction);
    }

    #[test]
    fn centroid_split_bound_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let poly = random_star_polygon(&mut rng, 16);
            let axis = match MedialAxis::build(&poly) {
                Ok(a) => a,
                Err(_) => continue,
            };
            let all: HashSet<u32> = (0..axis.nodes.len() as u32)
                .filter(|&i| !axis.nodes[i as usize].arcs.is_empty())
                .collect();
            let c = centroid_of_subtree(&axis, &all);
            // Check the bound directly by removing c.
            let mut seen: HashSet<u32> = HashSet::new();
            seen.insert(c);
            let mut worst = 0;
            for &start in &all {
                if seen.contains(&start) {
                    continue;
                }
                let mut comp = 0;
                let mut stack = vec![start];
                seen.insert(start);
                while let Some(u) = stack.pop() {
                    comp += 1;
                    for &a in &axis.nodes[u as usize].arcs {
                        let arc = &axis.arcs[a as usize];
                        let v = if arc.a == u { arc.b } else { arc.a };
                        if all.contains(&v) && seen.insert(v) {
                            stack.push(v);
                        }
                    }
                }
                worst = worst.max(comp);
            }
            assert!(worst <= all.len().div_ceil(2));
        }
    }
}
