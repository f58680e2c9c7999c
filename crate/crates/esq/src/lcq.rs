//! Largest-circle queries: given circles sorted by radius, report the
//! largest one containing a query point.
//!
//! Two interchangeable structures are provided. [`LcqTree`] answers by a
//! balanced descent over radius ranges, testing union membership per node
//! through a lifted power-diagram walk. [`LcqArrangement`] sweeps the circle
//! arrangement into vertical slabs and stores the largest covering circle
//! per cell, answering with two binary searches.

use std::collections::BTreeSet;

use crate::geom::{eps_geom, Circle, Error, Point2, QueryAnswer, Result};
use crate::hull3d::LiftedHull;

/// Circles sorted by non-increasing radius, keyed by their caller ids.
/// Ties in the whole module resolve to larger radius first, then smaller id.
#[derive(Debug, Clone)]
pub struct CircleSet {
    circles: Vec<Circle>,
    ids: Vec<usize>,
}

impl CircleSet {
    /// Sort and validate: finite data, no two circles identical.
    pub fn new(circles: Vec<Circle>) -> Result<CircleSet> {
        let eps = eps_geom();
        for c in &circles {
            if !c.center.is_finite() || !c.radius.is_finite() || c.radius < 0.0 {
                return Err(Error::DegenerateInput("non-finite circle".into()));
            }
        }
        let mut order: Vec<usize> = (0..circles.len()).collect();
        order.sort_by(|&a, &b| {
            circles[b]
                .radius
                .partial_cmp(&circles[a].radius)
                .unwrap()
                .then(a.cmp(&b))
        });
        let sorted: Vec<Circle> = order.iter().map(|&i| circles[i]).collect();
        for w in sorted.windows(2) {
            if w[0].same_as(&w[1]) {
                return Err(Error::DegenerateInput("two circles identical".into()));
            }
        }
        let _ = eps;
        Ok(CircleSet { circles: sorted, ids: order })
    }

    pub fn len(&self) -> usize {
        self.circles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circles.is_empty()
    }

    /// Circles in non-increasing radius order.
    pub fn circles(&self) -> &[Circle] {
        &self.circles
    }

    /// Caller id of the k-th sorted circle.
    pub fn id(&self, k: usize) -> usize {
        self.ids[k]
    }

    /// Reject configurations where three circle boundaries meet in a point,
    /// the degeneracy the sweep structure assumes away.
    pub fn validate_pairwise_crossings(&self) -> Result<()> {
        let eps = eps_geom();
        let n = self.circles.len();
        for i in 0..n {
            for j in i + 1..n {
                let pts =
                    match crate::geom::circle_circle_intersections(&self.circles[i], &self.circles[j]) {
                        Ok(p) => p,
                        Err(_) => return Err(Error::DegenerateInput("identical circles".into())),
                    };
                for p in pts {
                    for k in 0..n {
                        if k == i || k == j {
                            continue;
                        }
                        let d = self.circles[k].center.dist(p);
                        if (d - self.circles[k].radius).abs() <= eps {
                            return Err(Error::DegenerateInput(
                                "three circles share an intersection point".into(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn better(a: (f64, usize), b: (f64, usize)) -> bool {
    // (radius, id): larger radius wins, then smaller id.
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

// ---------------------------------------------------------------------------
// Divide-and-conquer tree
// ---------------------------------------------------------------------------

const SCAN_CUTOFF: usize = 8;

#[derive(Debug)]
enum Membership {
    /// Small or degenerate ranges: test each circle directly.
    Scan,
    /// Power-diagram owner walk over the lifted lower hull.
    Hull(LiftedHull),
}

#[derive(Debug)]
struct TreeNode {
    lo: usize,
    hi: usize,
    left: Option<usize>,
    right: Option<usize>,
    membership: Membership,
}

/// Balanced range tree over the sorted circles; each node answers "is q in
/// the union of my circles".
#[derive(Debug)]
pub struct LcqTree {
    set: CircleSet,
    nodes: Vec<TreeNode>,
    root: usize,
}

impl LcqTree {
    pub fn build(set: CircleSet) -> Result<LcqTree> {
        if set.is_empty() {
            return Err(Error::DegenerateInput("empty circle set".into()));
        }
        let mut tree = LcqTree { set, nodes: Vec::new(), root: 0 };
        tree.root = tree.build_node(0, tree.set.len());
        Ok(tree)
    }

    pub fn set(&self) -> &CircleSet {
        &self.set
    }

    fn build_node(&mut self, lo: usize, hi: usize) -> usize {
        let len = hi - lo;
        let membership = if len <= SCAN_CUTOFF {
            Membership::Scan
        } else {
            let sites: Vec<(Point2, f64)> = self.set.circles[lo..hi]
                .iter()
                .map(|c| (c.center, c.radius * c.radius))
                .collect();
            let hull = LiftedHull::build(&sites);
            if hull.is_flat() {
                Membership::Scan
            } else {
                Membership::Hull(hull)
            }
        };
        let id = self.nodes.len();
        self.nodes.push(TreeNode { lo, hi, left: None, right: None, membership });
        if len > 1 {
            // The left child keeps the larger-radius half.
            let mid = lo + len / 2;
            let l = self.build_node(lo, mid);
            let r = self.build_node(mid, hi);
            self.nodes[id].left = Some(l);
            self.nodes[id].right = Some(r);
        }
        id
    }

    /// Number of levels, counting the root as one.
    pub fn depth(&self) -> usize {
        self.depth_of(self.root)
    }

    fn depth_of(&self, node: usize) -> usize {
        let n = &self.nodes[node];
        match (n.left, n.right) {
            (Some(l), Some(r)) => 1 + self.depth_of(l).max(self.depth_of(r)),
            _ => 1,
        }
    }

    fn in_union(&self, node: usize, q: Point2) -> bool {
        let n = &self.nodes[node];
        match &n.membership {
            Membership::Scan => self.set.circles[n.lo..n.hi].iter().any(|c| c.contains(q)),
            Membership::Hull(hull) => {
                let owner = hull.power_owner(q);
                self.set.circles[n.lo + owner].contains(q)
            }
        }
    }

    /// Largest circle containing q, or Null.
    pub fn query(&self, q: Point2) -> QueryAnswer {
        match self.descend(q, None) {
            Some(k) => QueryAnswer::bounded(self.set.circles[k], Some(self.set.id(k))),
            None => QueryAnswer::Null,
        }
    }

    /// Query plus a per-step audit: every time the descent discards a left
    /// child, re-check by direct scan that q is outside that child's union.
    pub fn query_audited(&self, q: Point2) -> QueryAnswer {
        match self.descend(q, Some(&mut |lo, hi| {
            assert!(
                !self.set.circles[lo..hi].iter().any(|c| c.contains(q)),
                "descent discarded a containing left child"
            );
        })) {
            Some(k) => QueryAnswer::bounded(self.set.circles[k], Some(self.set.id(k))),
            None => QueryAnswer::Null,
        }
    }

    fn descend(&self, q: Point2, mut audit: Option<&mut dyn FnMut(usize, usize)>) -> Option<usize> {
        if !self.in_union(self.root, q) {
            return None;
        }
        let mut node = self.root;
        loop {
            let n = &self.nodes[node];
            match (n.left, n.right) {
                (Some(l), Some(r)) => {
                    if self.in_union(l, q) {
                        node = l;
                    } else {
                        if let Some(f) = audit.as_deref_mut() {
                            f(self.nodes[l].lo, self.nodes[l].hi);
                        }
                        node = r;
                    }
                }
                _ => return Some(n.lo),
            }
        }
    }

    /// Invariant check used by tests: balanced splits at every node.
    pub fn assert_balanced(&self) {
        for n in &self.nodes {
            if let (Some(l), Some(r)) = (n.left, n.right) {
                let ls = self.nodes[l].hi - self.nodes[l].lo;
                let rs = self.nodes[r].hi - self.nodes[r].lo;
                assert!(ls.abs_diff(rs) <= 1, "unbalanced node: {ls} vs {rs}");
            }
        }
        let n = self.set.len();
        let bound = (n as f64).log2().ceil() as usize + 1;
        assert!(self.depth() <= bound, "depth {} exceeds {}", self.depth(), bound);
    }
}

pub fn build_lcq_tree(set: CircleSet) -> Result<LcqTree> {
    LcqTree::build(set)
}

pub fn query_lcq_tree(tree: &LcqTree, q: Point2) -> QueryAnswer {
    tree.query(q)
}

// ---------------------------------------------------------------------------
// Line-sweep arrangement with slab point location
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct Arc {
    circle: usize, // index into the sorted set
    upper: bool,
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Arc {
    /// Arc height at `x`. Endpoints reuse the exact event coordinates so
    /// that arcs meeting at a vertex evaluate identically there.
    fn y_at(&self, c: &Circle, x: f64) -> f64 {
        if x == self.x0 {
            return self.y0;
        }
        if x == self.x1 {
            return self.y1;
        }
        let dx = (x - c.center.x).clamp(-c.radius, c.radius);
        let h = (c.radius * c.radius - dx * dx).max(0.0).sqrt();
        if self.upper {
            c.center.y + h
        } else {
            c.center.y - h
        }
    }
}

/// Arrangement of the circle boundaries cut into x-monotone arcs at circle
/// extremes and pairwise intersections, organized into vertical slabs.
#[derive(Debug)]
pub struct LcqArrangement {
    set: CircleSet,
    arcs: Vec<Arc>,
    /// Event abscissae, sorted ascending; slab k spans [xs[k], xs[k+1]].
    xs: Vec<f64>,
    /// Arcs crossing each slab, ordered top to bottom at the slab midline.
    slabs: Vec<Vec<u32>>,
    /// Fragment owner per slab: entry i is the largest circle covering the
    /// region below arc i-1 and above arc i (index 0 = above everything).
    slab_ids: Vec<Vec<Option<u32>>>,
    /// Canonical cell id per (slab, fragment), glued across slab borders.
    cell_of: Vec<Vec<u32>>,
    cell_count: usize,
}

impl LcqArrangement {
    pub fn build(set: CircleSet) -> Result<LcqArrangement> {
        if set.is_empty() {
            return Err(Error::DegenerateInput("empty circle set".into()));
        }
        set.validate_pairwise_crossings()?;
        let n = set.len();

        // Split points per circle: extremes plus every pairwise crossing,
        // shared exactly (same f64s on both circles).
        let mut upper_cuts: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n];
        let mut lower_cuts: Vec<Vec<(f64, f64)>> = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                let pts =
                    crate::geom::circle_circle_intersections(&set.circles[i], &set.circles[j])
                        .map_err(|_| Error::DegenerateInput("identical circles".into()))?;
                for p in pts {
                    for t in [i, j] {
                        let c = set.circles[t];
                        if p.y >= c.center.y {
                            upper_cuts[t].push((p.x, p.y));
                        }
                        if p.y <= c.center.y {
                            lower_cuts[t].push((p.x, p.y));
                        }
                    }
                }
            }
        }

        let mut arcs: Vec<Arc> = Vec::new();
        let mut xs: Vec<f64> = Vec::new();
        for i in 0..n {
            let c = set.circles[i];
            let (xl, xr) = (c.center.x - c.radius, c.center.x + c.radius);
            xs.push(xl);
            xs.push(xr);
            for (cuts, upper) in [(&mut upper_cuts[i], true), (&mut lower_cuts[i], false)] {
                cuts.push((xl, c.center.y));
                cuts.push((xr, c.center.y));
                cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
                cuts.dedup_by(|a, b| a.0 == b.0);
                for w in cuts.windows(2) {
                    if w[1].0 > w[0].0 {
                        arcs.push(Arc {
                            circle: i,
                            upper,
                            x0: w[0].0,
                            y0: w[0].1,
                            x1: w[1].0,
                            y1: w[1].1,
                        });
                    }
                }
            }
        }
        for a in &arcs {
            xs.push(a.x0);
            xs.push(a.x1);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();

        // Sweep slab by slab keeping the active arc set.
        let slab_count = xs.len().saturating_sub(1);
        let mut slabs: Vec<Vec<u32>> = Vec::with_capacity(slab_count);
        let mut slab_ids: Vec<Vec<Option<u32>>> = Vec::with_capacity(slab_count);
        let mut starts: Vec<Vec<u32>> = vec![Vec::new(); xs.len()];
        for (k, a) in arcs.iter().enumerate() {
            let s = xs.partition_point(|&x| x < a.x0);
            debug_assert_eq!(xs[s], a.x0);
            starts[s].push(k as u32);
        }
        let mut active: Vec<u32> = Vec::new();
        for s in 0..slab_count {
            active.retain(|&k| arcs[k as usize].x1 > xs[s]);
            active.extend(starts[s].iter().copied());
            let mid = 0.5 * (xs[s] + xs[s + 1]);
            active.sort_by(|&a, &b| {
                let ya = arcs[a as usize].y_at(&set.circles[arcs[a as usize].circle], mid);
                let yb = arcs[b as usize].y_at(&set.circles[arcs[b as usize].circle], mid);
                yb.partial_cmp(&ya).unwrap()
            });
            // Walk downward across the slab toggling disk membership; the
            // covering set changes exactly at each arc.
            let mut ids: Vec<Option<u32>> = Vec::with_capacity(active.len() + 1);
            let mut cover_sorted: BTreeSet<(OrdF64, std::cmp::Reverse<u32>)> = BTreeSet::new();
            ids.push(None); // above the topmost arc
            for &k in &active {
                let arc = arcs[k as usize];
                let c = arc.circle as u32;
                let entry = (OrdF64(set.circles[arc.circle].radius), std::cmp::Reverse(c));
                if arc.upper {
                    cover_sorted.insert(entry);
                } else {
                    cover_sorted.remove(&entry);
                }
                ids.push(cover_sorted.iter().next_back().map(|&(_, std::cmp::Reverse(c))| c));
            }
            slabs.push(active.clone());
            slab_ids.push(ids);
        }

        let mut arr = LcqArrangement {
            set,
            arcs,
            xs,
            slabs,
            slab_ids,
            cell_of: Vec::new(),
            cell_count: 0,
        };
        arr.glue_cells();
        Ok(arr)
    }

    /// Union-find over slab fragments: fragments in adjacent slabs whose
    /// open vertical intervals overlap at the border are one cell.
    fn glue_cells(&mut self) {
        let mut offsets: Vec<usize> = Vec::with_capacity(self.slabs.len() + 1);
        let mut total = 0;
        for ids in &self.slab_ids {
            offsets.push(total);
            total += ids.len();
        }
        offsets.push(total);
        let mut parent: Vec<u32> = (0..total as u32).collect();
        fn find(parent: &mut Vec<u32>, mut x: u32) -> u32 {
            while parent[x as usize] != x {
                parent[x as usize] = parent[parent[x as usize] as usize];
                x = parent[x as usize];
            }
            x
        }
        let union = |parent: &mut Vec<u32>, a: u32, b: u32| {
            let (ra, rb) = (find(parent, a), find(parent, b));
            if ra != rb {
                parent[ra as usize] = rb;
            }
        };

        for s in 0..self.slabs.len().saturating_sub(1) {
            let x = self.xs[s + 1];
            let left = &self.slabs[s];
            let right = &self.slabs[s + 1];
            let ys = |arcs: &Vec<u32>| -> Vec<f64> {
                arcs.iter()
                    .map(|&k| {
                        let a = self.arcs[k as usize];
                        a.y_at(&self.set.circles[a.circle], x)
                    })
                    .collect()
            };
            let yl = ys(left);
            let yr = ys(right);
            // Fragment i spans (y[i], y[i-1]) with +/- infinity at the ends.
            let bounds = |y: &Vec<f64>, i: usize| -> (f64, f64) {
                let hi = if i == 0 { f64::INFINITY } else { y[i - 1] };
                let lo = if i == y.len() { f64::NEG_INFINITY } else { y[i] };
                (lo, hi)
            };
            let (mut i, mut j) = (0usize, 0usize);
            while i <= yl.len() && j <= yr.len() {
                let (lo_a, hi_a) = bounds(&yl, i);
                let (lo_b, hi_b) = bounds(&yr, j);
                if lo_a.max(lo_b) < hi_a.min(hi_b) {
                    union(
                        &mut parent,
                        (offsets[s] + i) as u32,
                        (offsets[s + 1] + j) as u32,
                    );
                }
                // Advance the fragment with the higher low end.
                if lo_a >= lo_b {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }

        // Canonical numbering.
        let mut canon: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
        self.cell_of = Vec::with_capacity(self.slabs.len());
        for s in 0..self.slab_ids.len() {
            let mut row = Vec::with_capacity(self.slab_ids[s].len());
            for f in 0..self.slab_ids[s].len() {
                let root = find(&mut parent, (offsets[s] + f) as u32);
                let next = canon.len() as u32;
                let c = *canon.entry(root).or_insert(next);
                row.push(c);
            }
            self.cell_of.push(row);
        }
        self.cell_count = canon.len();
    }

    pub fn set(&self) -> &CircleSet {
        &self.set
    }

    /// Number of distinct cells, outer face included.
    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    /// Verify that all fragments of one cell agree on the covering circle.
    pub fn assert_cell_ids_consistent(&self) {
        let mut seen: Vec<Option<Option<u32>>> = vec![None; self.cell_count];
        for s in 0..self.slab_ids.len() {
            for f in 0..self.slab_ids[s].len() {
                let cell = self.cell_of[s][f] as usize;
                match seen[cell] {
                    None => seen[cell] = Some(self.slab_ids[s][f]),
                    Some(prev) => assert_eq!(
                        prev, self.slab_ids[s][f],
                        "cell {cell} has two covering ids"
                    ),
                }
            }
        }
    }

    pub fn query(&self, q: Point2) -> QueryAnswer {
        let m = self.xs.len();
        if m == 0 {
            return QueryAnswer::Null;
        }
        let mut idx = self.xs.partition_point(|&x| x <= q.x);
        if idx == 0 {
            return QueryAnswer::Null;
        }
        if idx == m {
            if q.x == self.xs[m - 1] {
                idx = m - 1; // rightmost event: evaluate in the last slab
            } else {
                return QueryAnswer::Null;
            }
        }
        let s = idx - 1;
        let arcs = &self.slabs[s];
        let frag = arcs.partition_point(|&k| {
            let a = self.arcs[k as usize];
            a.y_at(&self.set.circles[a.circle], q.x) > q.y
        });
        let mut best: Option<(f64, usize)> = None;
        let mut consider = |k: Option<u32>| {
            if let Some(k) = k {
                let c = self.set.circles[k as usize];
                if c.contains(q) {
                    let cand = (c.radius, self.set.id(k as usize));
                    if best.map_or(true, |b| better(cand, b)) {
                        best = Some(cand);
                    }
                }
            }
        };
        consider(self.slab_ids[s][frag]);
        // Boundary rule: arcs bounding the fragment may own q under
        // closed-disk semantics even when the located cell does not.
        if frag > 0 {
            consider(Some(self.arcs[arcs[frag - 1] as usize].circle as u32));
        }
        if frag < arcs.len() {
            consider(Some(self.arcs[arcs[frag] as usize].circle as u32));
        }
        match best {
            Some((_, id)) => {
                let k = self.set.ids.iter().position(|&v| v == id).unwrap();
                QueryAnswer::bounded(self.set.circles[k], Some(id))
            }
            None => QueryAnswer::Null,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&other.0).unwrap()
    }
}

pub fn build_lcq_arrangement(set: CircleSet) -> Result<LcqArrangement> {
    LcqArrangement::build(set)
}

pub fn query_lcq_arrangement(arr: &LcqArrangement, q: Point2) -> QueryAnswer {
    arr.query(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use crate::oracle::oracle_lcq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_set(rng: &mut ChaCha8Rng, n: usize) -> Vec<Circle> {
        (0..n)
            .map(|_| {
                Circle::new(
                    pt(rng.gen_range(-40.0..40.0), rng.gen_range(-40.0..40.0)),
                    rng.gen_range(0.5..25.0),
                )
            })
            .collect()
    }

    #[test]
    fn single_circle_tree() {
        let set = CircleSet::new(vec![Circle::new(pt(0.0, 0.0), 2.0)]).unwrap();
        let tree = LcqTree::build(set).unwrap();
        assert_eq!(tree.depth(), 1);
        assert_eq!(tree.query(pt(0.5, 0.0)).radius(), Some(2.0));
        assert!(tree.query(pt(5.0, 0.0)).is_null());
    }

    #[test]
    fn eight_circles_depth_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let set = CircleSet::new(random_set(&mut rng, 8)).unwrap();
        let tree = LcqTree::build(set).unwrap();
        assert!(tree.depth() <= 4);
        tree.assert_balanced();
    }

    #[test]
    fn nested_circles_return_outer() {
        let circles = vec![
            Circle::new(pt(0.0, 0.0), 3.0), // id 0 (outer)
            Circle::new(pt(0.5, 0.0), 1.0), // id 1 (inner)
        ];
        let tree = LcqTree::build(CircleSet::new(circles).unwrap()).unwrap();
        let ans = tree.query(pt(0.5, 0.0));
        assert_eq!(ans.radius(), Some(3.0));
    }

    #[test]
    fn only_container_wins() {
        let circles = vec![Circle::new(pt(0.0, 0.0), 3.0), Circle::new(pt(10.0, 0.0), 1.0)];
        let tree = LcqTree::build(CircleSet::new(circles).unwrap()).unwrap();
        let ans = tree.query(pt(10.0, 0.0));
        assert_eq!(ans.radius(), Some(1.0));
    }

    #[test]
    fn tree_matches_linear_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let n = rng.gen_range(1..50);
            let circles = random_set(&mut rng, n);
            let tree = LcqTree::build(CircleSet::new(circles.clone()).unwrap()).unwrap();
            tree.assert_balanced();
            for _ in 0..100 {
                let q = pt(rng.gen_range(-60.0..60.0), rng.gen_range(-60.0..60.0));
                let want = oracle_lcq(&circles, q);
                let got = tree.query_audited(q);
                assert_eq!(
                    got.circle().map(|c| c.radius),
                    want.circle().map(|c| c.radius),
                    "q = {q:?}"
                );
            }
        }
    }

    #[test]
    fn two_disjoint_circles_three_cells() {
        let circles = vec![Circle::new(pt(0.0, 0.0), 1.0), Circle::new(pt(5.0, 0.0), 1.0)];
        let arr = LcqArrangement::build(CircleSet::new(circles).unwrap()).unwrap();
        assert_eq!(arr.cell_count(), 3);
        arr.assert_cell_ids_consistent();
        assert_eq!(arr.query(pt(0.0, 0.0)).radius(), Some(1.0));
        assert_eq!(arr.query(pt(5.0, 0.1)).radius(), Some(1.0));
        assert!(arr.query(pt(2.5, 0.0)).is_null());
    }

    #[test]
    fn crossing_circles_lens_takes_larger() {
        // Different radii: the lens belongs to the larger circle.
        let circles = vec![Circle::new(pt(0.0, 0.0), 1.2), Circle::new(pt(1.0, 0.0), 1.0)];
        let arr = LcqArrangement::build(CircleSet::new(circles).unwrap()).unwrap();
        let ans = arr.query(pt(0.55, 0.0));
        assert_eq!(ans.radius(), Some(1.2));
        // Equal radii: lower id wins inside the lens.
        let circles = vec![Circle::new(pt(0.0, 0.0), 1.0), Circle::new(pt(1.0, 0.0), 1.0)];
        let arr = LcqArrangement::build(CircleSet::new(circles).unwrap()).unwrap();
        let ans = arr.query(pt(0.5, 0.0));
        assert_eq!(
            ans,
            QueryAnswer::bounded(Circle::new(pt(0.0, 0.0), 1.0), Some(0))
        );
    }

    #[test]
    fn arrangement_matches_linear_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(1..20);
            let circles = random_set(&mut rng, n);
            let arr = LcqArrangement::build(CircleSet::new(circles.clone()).unwrap()).unwrap();
            arr.assert_cell_ids_consistent();
            let bound = n * n + n + 2;
            assert!(arr.cell_count() <= bound, "{} cells > {}", arr.cell_count(), bound);
            for _ in 0..200 {
                let q = pt(rng.gen_range(-60.0..60.0), rng.gen_range(-60.0..60.0));
                let want = oracle_lcq(&circles, q);
                let got = arr.query(q);
                assert_eq!(
                    got.circle().map(|c| c.radius),
                    want.circle().map(|c| c.radius),
                    "q = {q:?}"
                );
            }
        }
    }

    #[test]
    fn variants_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let n = rng.gen_range(1..24);
            let circles = random_set(&mut rng, n);
            let set = CircleSet::new(circles).unwrap();
            let tree = LcqTree::build(set.clone()).unwrap();
            let arr = LcqArrangement::build(set).unwrap();
            for _ in 0..60 {
                let q = pt(rng.gen_range(-60.0..60.0), rng.gen_range(-60.0..60.0));
                assert_eq!(tree.query(q), arr.query(q), "q = {q:?}");
            }
        }
    }
}
