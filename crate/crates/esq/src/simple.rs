//! Largest-empty-circle queries inside a simple polygon.
//!
//! The index is a centroid-decomposition tree over the medial axis. Each
//! tree node carries the circle of its axis node plus a guiding set: the
//! circles that dominate their path from the node and still overlap its
//! circle, organized in a largest-circle-query tree. A query descends the
//! decomposition by per-cell tags until some node circle contains the
//! query point, routes through the guiding set to candidate mountains, and
//! finishes with rising-path searches; if no node circle ever contains the
//! point, one rising-path search in the mountain of the query's grassfire
//! entry suffices.

use std::collections::{HashMap, HashSet};

use crate::geom::{Circle, Error, Point2, PointLocation, Polygon, QueryAnswer, Result};
use crate::lcq::{CircleSet, LcqTree};
use crate::medial::{centroid_of_subtree, AxisLocation, Mountain, MedialAxis, NodeKind};

#[derive(Debug, Clone)]
pub struct GuidingCircle {
    pub circle: Circle,
    /// Exact radius key (an entry of the node-radius array); circles of one
    /// key form a bucket.
    pub key: f64,
    /// Mountains to search from this circle, with the entry location.
    pub entries: Vec<(u32, AxisLocation)>,
}

#[derive(Debug)]
pub struct GuidingSet {
    pub circles: Vec<GuidingCircle>,
    lcq: Option<LcqTree>,
    /// Indices of `circles` grouped by radius key, ascending.
    buckets: Vec<(f64, Vec<u32>)>,
}

impl GuidingSet {
    pub fn max_bucket(&self) -> usize {
        self.buckets.iter().map(|b| b.1.len()).max().unwrap_or(0)
    }

    /// All guiding circles of the largest radius containing q.
    fn query_bucket(&self, q: Point2) -> Vec<u32> {
        let hit = match &self.lcq {
            Some(lcq) => lcq.query(q),
            None => return Vec::new(),
        };
        let id = match hit {
            QueryAnswer::BoundedCircle { witness, .. } => witness.unwrap() as u32,
            _ => return Vec::new(),
        };
        let key = self.circles[id as usize].key;
        let bucket = self
            .buckets
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[]);
        bucket
            .iter()
            .copied()
            .filter(|&i| self.circles[i as usize].circle.contains(q))
            .collect()
    }
}

#[derive(Debug)]
struct CtNode {
    axis_node: u32,
    mec: Circle,
    children: Vec<u32>,
    level: usize,
    guiding: GuidingSet,
    /// Child slot per arc of this node's subtree (arcs at the centroid go
    /// with the component of their far endpoint).
    arc_child: HashMap<u32, u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    Child(u32),
    /// Cell straddles several components at this level; resolved at query
    /// time from the grassfire entry arc.
    Ambiguous,
    None,
}

#[derive(Debug)]
pub struct SimpleQmecIndex {
    axis: MedialAxis,
    mountains: Vec<Mountain>,
    arc_mountain: Vec<u32>,
    nodes: Vec<CtNode>,
    root: u32,
    depth: usize,
    /// tags[cell][level]
    tags: Vec<Vec<Tag>>,
    /// Largest guiding bucket seen at build time.
    pub max_guiding_bucket: usize,
}

pub fn preprocess_simple(poly: &Polygon) -> Result<SimpleQmecIndex> {
    let axis = MedialAxis::build(poly)?;
    axis.validate_distinct_clearances()?;
    let mountains = axis.mountains();
    let mut arc_mountain = vec![u32::MAX; axis.arcs.len()];
    for (mi, m) in mountains.iter().enumerate() {
        for &a in &m.arcs {
            arc_mountain[a as usize] = mi as u32;
        }
    }
    let mut idx = SimpleQmecIndex {
        axis,
        mountains,
        arc_mountain,
        nodes: Vec::new(),
        root: 0,
        depth: 0,
        tags: Vec::new(),
        max_guiding_bucket: 0,
    };
    let all: HashSet<u32> = (0..idx.axis.nodes.len() as u32)
        .filter(|&i| !idx.axis.nodes[i as usize].arcs.is_empty())
        .collect();
    idx.tags = vec![Vec::new(); idx.axis.element_count()];
    idx.root = idx.decompose(&all, 0)?;
    idx.depth = idx.nodes.iter().map(|n| n.level).max().unwrap_or(0) + 1;
    Ok(idx)
}

impl SimpleQmecIndex {
    pub fn axis(&self) -> &MedialAxis {
        &self.axis
    }

    pub fn mountains(&self) -> &[Mountain] {
        &self.mountains
    }

    pub fn centroid_depth(&self) -> usize {
        self.depth
    }

    pub fn axis_node_count(&self) -> usize {
        self.axis
            .nodes
            .iter()
            .filter(|n| !n.arcs.is_empty())
            .count()
    }

    fn decompose(&mut self, component: &HashSet<u32>, level: usize) -> Result<u32> {
        let pivot = centroid_of_subtree(&self.axis, component);
        let mec = self.axis.mec_at_node(pivot);
        // Components of the subtree minus the centroid; arcs incident to
        // the centroid travel with their far endpoint.
        let mut comp_of: HashMap<u32, u32> = HashMap::new(); // node -> slot
        let mut slots: Vec<HashSet<u32>> = Vec::new();
        for &start in component.iter() {
            if start == pivot || comp_of.contains_key(&start) {
                continue;
            }
            let slot = slots.len() as u32;
            let mut set = HashSet::new();
            let mut stack = vec![start];
            comp_of.insert(start, slot);
            set.insert(start);
            while let Some(u) = stack.pop() {
                for &a in &self.axis.nodes[u as usize].arcs {
                    let arc = &self.axis.arcs[a as usize];
                    let v = if arc.a == u { arc.b } else { arc.a };
                    if v == pivot || !component.contains(&v) {
                        continue;
                    }
                    if !comp_of.contains_key(&v) {
                        comp_of.insert(v, slot);
                        set.insert(v);
                        stack.push(v);
                    }
                }
            }
            slots.push(set);
        }
        let mut arc_child: HashMap<u32, u32> = HashMap::new();
        for (&node, &slot) in comp_of.iter() {
            for &a in &self.axis.nodes[node as usize].arcs {
                let arc = &self.axis.arcs[a as usize];
                let other = if arc.a == node { arc.b } else { arc.a };
                if component.contains(&other) || other == pivot {
                    arc_child.insert(a, slot);
                }
            }
        }
        // Arcs fully inside a child keep that child's slot; arcs at the
        // pivot already carry the far side's slot via the loop above.

        let guiding = self.build_guiding_set(pivot, component)?;
        self.max_guiding_bucket = self.max_guiding_bucket.max(guiding.max_bucket());
        let id = self.nodes.len() as u32;
        self.nodes.push(CtNode {
            axis_node: pivot,
            mec,
            children: Vec::new(),
            level,
            guiding,
            arc_child,
        });

        // Per-cell tag for this level: the slot owning all of the cell's
        // arcs within this component.
        for cell in 0..self.axis.element_count() {
            let mut seen: Option<Tag> = None;
            for &a in self.axis.cell_chain(cell) {
                if let Some(&slot) = self.nodes[id as usize].arc_child.get(&a) {
                    seen = match seen {
                        None => Some(Tag::Child(slot)),
                        Some(Tag::Child(s)) if s == slot => seen,
                        _ => Some(Tag::Ambiguous),
                    };
                }
            }
            let tag = seen.unwrap_or(Tag::None);
            let row = &mut self.tags[cell];
            if row.len() <= level {
                row.resize(level + 1, Tag::None);
            }
            if row[level] == Tag::None {
                row[level] = tag;
            } else if row[level] != tag {
                row[level] = Tag::Ambiguous;
            }
        }

        let mut children = Vec::with_capacity(slots.len());
        for set in &slots {
            children.push(self.decompose(set, level + 1)?);
        }
        self.nodes[id as usize].children = children;
        Ok(id)
    }

    /// Guiding circles of one centroid node: breadth-first over its
    /// subtree, keeping circles that dominate their path and still overlap
    /// the node circle, with intermediate radii realized on arcs inserted
    /// as dummy circles.
    fn build_guiding_set(&self, pivot: u32, component: &HashSet<u32>) -> Result<GuidingSet> {
        let axis = &self.axis;
        let mut keys: Vec<f64> = component
            .iter()
            .filter(|&&n| axis.nodes[n as usize].kind != NodeKind::Leaf)
            .map(|&n| axis.nodes[n as usize].clearance)
            .collect();
        keys.sort_by(|a, b| a.partial_cmp(b).unwrap());
        keys.dedup();
        let mec_pivot = axis.mec_at_node(pivot);

        let mut circles: Vec<GuidingCircle> = Vec::new();
        let add_node_circle = |node: u32, circles: &mut Vec<GuidingCircle>| {
            let c = axis.mec_at_node(node);
            let mut entries = Vec::new();
            for (mi, m) in self.mountains.iter().enumerate() {
                if !m.contains_node(node) {
                    continue;
                }
                let loc = if node == m.peak {
                    // Any mountain arc incident to the peak anchors it.
                    axis.nodes[node as usize]
                        .arcs
                        .iter()
                        .copied()
                        .find(|a| m.contains_arc(*a))
                        .map(|a| AxisLocation { arc: a, t: axis_param_at(axis, a, node) })
                } else {
                    m.parent_of(node)
                        .map(|(_, a)| AxisLocation { arc: a, t: axis_param_at(axis, a, node) })
                };
                if let Some(loc) = loc {
                    entries.push((mi as u32, loc));
                }
            }
            circles.push(GuidingCircle { circle: c, key: c.radius, entries });
        };

        // The pivot's own circle is always guiding.
        if axis.nodes[pivot as usize].kind != NodeKind::Leaf {
            add_node_circle(pivot, &mut circles);
        }
        // BFS outward.
        let mut queue = std::collections::VecDeque::new();
        let mut seen: HashSet<u32> = HashSet::new();
        seen.insert(pivot);
        queue.push_back((pivot, mec_pivot.radius)); // (node, path max so far)
        while let Some((u, pathmax)) = queue.pop_front() {
            for &a in &axis.nodes[u as usize].arcs {
                let arc = &axis.arcs[a as usize];
                let v = if arc.a == u { arc.b } else { arc.a };
                if !component.contains(&v) || seen.contains(&v) {
                    continue;
                }
                seen.insert(v);
                let rv = axis.nodes[v as usize].clearance;
                let cv = axis.mec_at_node(v);
                // Dummy circles for intermediate radii realized on the arc;
                // these can overlap the pivot circle even when the far node
                // no longer does, so they come before the stop check.
                if rv > axis.nodes[u as usize].clearance {
                    let lo = axis.nodes[u as usize].clearance;
                    let from = keys.partition_point(|&k| k <= lo);
                    let to = keys.partition_point(|&k| k < rv);
                    for &rho in &keys[from..to] {
                        if rho < pathmax {
                            continue;
                        }
                        if let Some(t) = solve_radius_on_arc(axis, a, rho) {
                            let center = axis.point_on_arc(a, t);
                            let c = Circle::new(center, rho);
                            if c.overlaps(&mec_pivot) {
                                let mi = self.arc_mountain[a as usize];
                                circles.push(GuidingCircle {
                                    circle: c,
                                    key: rho,
                                    entries: vec![(mi, AxisLocation { arc: a, t })],
                                });
                            }
                        }
                    }
                }
                if !cv.overlaps(&mec_pivot) {
                    continue; // recursion stops along this path
                }
                let pathmax_v = pathmax.max(rv);
                if axis.nodes[v as usize].kind != NodeKind::Leaf && rv >= pathmax_v - 1e-15 {
                    add_node_circle(v, &mut circles);
                }
                queue.push_back((v, pathmax_v));
            }
        }

        // Bucket by exact key.
        let mut buckets: Vec<(f64, Vec<u32>)> = Vec::new();
        let mut order: Vec<u32> = (0..circles.len() as u32).collect();
        order.sort_by(|&a, &b| {
            circles[a as usize]
                .key
                .partial_cmp(&circles[b as usize].key)
                .unwrap()
        });
        for i in order {
            match buckets.last_mut() {
                Some((k, v)) if *k == circles[i as usize].key => v.push(i),
                _ => buckets.push((circles[i as usize].key, vec![i])),
            }
        }
        let lcq = if circles.is_empty() {
            None
        } else {
            Some(LcqTree::build(CircleSet::new(
                circles.iter().map(|g| g.circle).collect(),
            )?)?)
        };
        Ok(GuidingSet { circles, lcq, buckets })
    }

    /// Report the largest circle containing q routed through node `v`'s
    /// guiding set; q must lie in the node circle.
    pub fn qic_query(&self, ct: u32, q: Point2) -> Result<(Circle, usize)> {
        let node = &self.nodes[ct as usize];
        if !node.mec.contains(q) {
            return Err(Error::PreconditionViolated("q outside the node circle".into()));
        }
        let bucket = node.guiding.query_bucket(q);
        if bucket.is_empty() {
            // The node circle itself is guiding, so this cannot happen for
            // non-leaf centroids; leaves have zero-radius circles.
            return Ok((node.mec, 0));
        }
        let mut best: Option<Circle> = None;
        for &gi in &bucket {
            for &(mi, entry) in &node.guiding.circles[gi as usize].entries {
                let c = self.mim_query(mi as usize, entry, q)?;
                if best.map_or(true, |b| c.radius > b.radius) {
                    best = Some(c);
                }
            }
        }
        Ok((best.unwrap_or(node.mec), bucket.len()))
    }

    /// Largest circle containing q centered on one mountain, entered at a
    /// location whose circle contains q.
    pub fn mim_query(&self, mountain: usize, entry: AxisLocation, q: Point2) -> Result<Circle> {
        let m = &self.mountains[mountain];
        let pe = m.peakward_end(&self.axis, entry.arc);
        let mut path = vec![pe];
        path.extend(m.path_to_peak(pe));
        self.axis.rising_path_mec(entry, &path, q)
    }

    /// Full query: tag-routed descent, then a guiding-set hit or a single
    /// mountain search from the grassfire entry.
    pub fn query(&self, q: Point2) -> QueryAnswer {
        self.query_with_stats(q).0
    }

    /// Query plus the guiding-bucket size used (0 for the no-hit path).
    pub fn query_with_stats(&self, q: Point2) -> (QueryAnswer, usize) {
        if self.axis.polygon().locate(q) != PointLocation::Inside {
            return (QueryAnswer::UnboundedCircle, 0);
        }
        let cell = match self.axis.locate_cell(q) {
            Ok(c) => c,
            Err(_) => return (QueryAnswer::UnboundedCircle, 0),
        };
        let mut cur = Some(self.root);
        let mut entry_cache: Option<AxisLocation> = None;
        while let Some(ct) = cur {
            let node = &self.nodes[ct as usize];
            if node.mec.contains(q) {
                let (c, bucket) = self
                    .qic_query(ct, q)
                    .expect("containment checked before routing");
                return (QueryAnswer::bounded(c, Some(node.axis_node as usize)), bucket);
            }
            let tag = self.tags[cell].get(node.level).copied().unwrap_or(Tag::None);
            let slot = match tag {
                Tag::Child(k) => Some(k),
                _ => {
                    let entry = *entry_cache.get_or_insert_with(|| {
                        self.axis
                            .grassfire_entry(q)
                            .expect("interior point sees the axis")
                    });
                    node.arc_child.get(&entry.arc).copied()
                }
            };
            cur = slot.and_then(|k| node.children.get(k as usize).copied());
        }
        // No node circle contains q: the containment set sits inside one
        // arc; search its mountain from the grassfire entry.
        let entry = match entry_cache {
            Some(e) => e,
            None => self
                .axis
                .grassfire_entry(q)
                .expect("interior point sees the axis"),
        };
        let mi = self.arc_mountain[entry.arc as usize] as usize;
        let c = self
            .mim_query(mi, entry, q)
            .expect("grassfire entry circle contains q");
        (QueryAnswer::bounded(c, Some(entry.arc as usize)), 0)
    }
}

fn axis_param_at(axis: &MedialAxis, arc: u32, node: u32) -> f64 {
    if axis.arcs[arc as usize].a == node {
        0.0
    } else {
        debug_assert_eq!(axis.arcs[arc as usize].b, node);
        1.0
    }
}

/// Parameter where a monotone arc's clearance equals `rho`, by bisection.
fn solve_radius_on_arc(axis: &MedialAxis, arc: u32, rho: f64) -> Option<f64> {
    let r0 = axis.clearance_on_arc(arc, 0.0);
    let r1 = axis.clearance_on_arc(arc, 1.0);
    let (mut lo, mut hi) = if r0 <= r1 { (0.0, 1.0) } else { (1.0, 0.0) };
    if rho < r0.min(r1) - 1e-12 || rho > r0.max(r1) + 1e-12 {
        return None;
    }
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if axis.clearance_on_arc(arc, mid) < rho {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

pub fn query_simple(idx: &SimpleQmecIndex, q: Point2) -> QueryAnswer {
    idx.query(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::preprocess_convex;
    use crate::geom::pt;
    use crate::instances::{dumbbell_polygon, random_convex_polygon, random_simple_polygon, star_polygon};
    use crate::oracle::SimpleMecOracle;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn convex_input_single_mountain_matches_convex_index() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for _ in 0..5 {
            let poly = random_convex_polygon(&mut rng, 10);
            let simple = match preprocess_simple(&poly) {
                Ok(s) => s,
                Err(_) => continue,
            };
            assert_eq!(simple.mountains().len(), 1);
            let convex = preprocess_convex(&poly).unwrap();
            let bbox = poly.bbox();
            for _ in 0..100 {
                let q = pt(
                    rng.gen_range(bbox.xmin..bbox.xmax),
                    rng.gen_range(bbox.ymin..bbox.ymax),
                );
                let a = simple.query(q);
                let b = convex.query(q);
                match (a.radius(), b.radius()) {
                    (Some(ra), Some(rb)) => {
                        assert!((ra - rb).abs() <= 1e-9, "q={q:?}: {ra} vs {rb}")
                    }
                    (None, None) => {}
                    other => panic!("q={q:?}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn dumbbell_depth_and_mountains() {
        let poly = dumbbell_polygon();
        let idx = preprocess_simple(&poly).unwrap();
        assert!(idx.mountains().len() >= 2);
        let n = idx.axis_node_count();
        let bound = (n as f64).log2().ceil() as usize + 1;
        assert!(idx.centroid_depth() <= bound, "{} > {}", idx.centroid_depth(), bound);
    }

    #[test]
    fn dumbbell_left_room_answer() {
        let poly = dumbbell_polygon();
        let idx = preprocess_simple(&poly).unwrap();
        let oracle = SimpleMecOracle::new(poly.clone());
        // Query near the corridor in the left room: only the left room's
        // inscribed circle can contain it.
        for q in [pt(1.7, 1.0), pt(1.0, 1.0), pt(0.5, 0.5), pt(2.5, 1.0)] {
            let got = idx.query(q).radius().unwrap();
            let want = oracle.query(q).unwrap().radius().unwrap();
            assert!(
                (got - want).abs() / want.max(1e-9) < 1e-4,
                "q={q:?}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn star_spans_multiple_mountains() {
        let poly = star_polygon(5, 2.0, 6.0);
        let idx = preprocess_simple(&poly).unwrap();
        assert!(idx.mountains().len() >= 5);
        // A centroid whose subtree crosses a valley routes queries into
        // more than one mountain; lobe-level centroids must exhibit this.
        let spans = idx.nodes.iter().any(|n| {
            let mut mids: HashSet<u32> = HashSet::new();
            for g in &n.guiding.circles {
                for &(mi, _) in &g.entries {
                    mids.insert(mi);
                }
            }
            mids.len() >= 2
        });
        assert!(spans, "no guiding set crosses a mountain boundary");
    }

    #[test]
    fn guiding_buckets_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for _ in 0..25 {
            let n = rng.gen_range(6..24);
            let poly = random_simple_polygon(&mut rng, n);
            if let Ok(idx) = preprocess_simple(&poly) {
                assert!(idx.max_guiding_bucket <= 36, "bucket {}", idx.max_guiding_bucket);
            }
        }
    }

    #[test]
    fn matches_grid_oracle_on_random_polygons() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        let mut done = 0;
        while done < 12 {
            let n = rng.gen_range(6..20);
            let poly = random_simple_polygon(&mut rng, n);
            let idx = match preprocess_simple(&poly) {
                Ok(i) => i,
                Err(_) => continue,
            };
            done += 1;
            let oracle = SimpleMecOracle::new(poly.clone());
            let bbox = poly.bbox();
            let mut tested = 0;
            while tested < 8 {
                let q = pt(
                    rng.gen_range(bbox.xmin..bbox.xmax),
                    rng.gen_range(bbox.ymin..bbox.ymax),
                );
                if poly.locate(q) != PointLocation::Inside {
                    continue;
                }
                tested += 1;
                let (ans, bucket) = idx.query_with_stats(q);
                assert!(bucket <= 36);
                let got = ans.radius().unwrap();
                let want = oracle.query(q).unwrap().radius().unwrap();
                assert!(
                    (got - want).abs() / want.max(1e-9) < 1e-4,
                    "q={q:?}: {got} vs {want}"
                );
                // Answer circle is empty and contains q.
                let c = ans.circle().unwrap();
                assert!(c.contains(q));
                let clear = crate::geom::clearance(&poly, c.center).unwrap();
                assert!(clear >= c.radius - 1e-7);
            }
        }
    }
}
