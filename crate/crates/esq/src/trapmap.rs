//! Trapezoidal-map point location over non-crossing segments.
//!
//! Randomized incremental construction with a history DAG; expected
//! O(n log n) build, O(n) space, O(log n) queries. Segments may share
//! endpoints but must not cross or overlap, and no endpoint may lie in
//! another segment's interior. Degenerate x-ties are handled by ordering
//! points lexicographically (a symbolic shear).
//!
//! Each segment carries two face labels (left and right of its direction);
//! a query returns the label of the face containing the point.

use crate::geom::{orient2d, Point2};

/// Face label returned for queries outside every labeled face.
pub const OUTER: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Seg {
    a: Point2, // lex smaller endpoint
    b: Point2,
    above: u32, // face label above the segment (left of a->b)
    below: u32,
}

fn lex_less(p: Point2, q: Point2) -> bool {
    (p.x, p.y) < (q.x, q.y)
}

fn lex_eq(p: Point2, q: Point2) -> bool {
    p.x == q.x && p.y == q.y
}

#[derive(Debug, Clone, Copy)]
struct Trap {
    leftp: Point2,
    rightp: Point2,
    top: Option<u32>,
    bottom: Option<u32>,
    ul: Option<u32>,
    ll: Option<u32>,
    ur: Option<u32>,
    lr: Option<u32>,
    node: u32,
    alive: bool,
}

#[derive(Debug, Clone, Copy)]
enum Node {
    X { p: Point2, left: u32, right: u32 },
    Y { seg: u32, above: u32, below: u32 },
    Leaf(u32),
}

#[derive(Debug)]
pub struct TrapMap {
    segs: Vec<Seg>,
    traps: Vec<Trap>,
    nodes: Vec<Node>,
    root: u32,
}

impl TrapMap {
    /// Build from labeled segments `(p, q, left_label, right_label)` where
    /// left/right are relative to the direction p -> q. Insertion order is
    /// shuffled deterministically from `seed`.
    pub fn build(segments: &[(Point2, Point2, u32, u32)], seed: u64) -> TrapMap {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;

        let mut segs: Vec<Seg> = Vec::with_capacity(segments.len());
        for &(p, q, left, right) in segments {
            if lex_eq(p, q) {
                continue;
            }
            if lex_less(p, q) {
                segs.push(Seg { a: p, b: q, above: left, below: right });
            } else {
                segs.push(Seg { a: q, b: p, above: right, below: left });
            }
        }

        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        let mut ymin = f64::INFINITY;
        let mut ymax = f64::NEG_INFINITY;
        for s in &segs {
            for p in [s.a, s.b] {
                xmin = xmin.min(p.x);
                xmax = xmax.max(p.x);
                ymin = ymin.min(p.y);
                ymax = ymax.max(p.y);
            }
        }
        let pad = 1.0 + 0.1 * ((xmax - xmin).abs() + (ymax - ymin).abs());
        let (lo, hi) = if segs.is_empty() {
            (Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0))
        } else {
            (Point2::new(xmin - pad, ymin - pad), Point2::new(xmax + pad, ymax + pad))
        };

        let mut map = TrapMap { segs, traps: Vec::new(), nodes: Vec::new(), root: 0 };
        map.nodes.push(Node::Leaf(0));
        map.traps.push(Trap {
            leftp: lo,
            rightp: hi,
            top: None,
            bottom: None,
            ul: None,
            ll: None,
            ur: None,
            lr: None,
            node: 0,
            alive: true,
        });

        let mut order: Vec<u32> = (0..map.segs.len() as u32).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
        for sid in order {
            map.insert(sid);
        }
        map
    }

    /// Label of the face containing `q`.
    pub fn locate(&self, q: Point2) -> u32 {
        let t = &self.traps[self.locate_trap(q) as usize];
        if let Some(b) = t.bottom {
            self.segs[b as usize].above
        } else if let Some(tp) = t.top {
            self.segs[tp as usize].below
        } else {
            OUTER
        }
    }

    fn locate_trap(&self, q: Point2) -> u32 {
        let mut node = self.root;
        loop {
            match self.nodes[node as usize] {
                Node::X { p, left, right } => {
                    node = if lex_less(q, p) { left } else { right };
                }
                Node::Y { seg, above, below } => {
                    let s = &self.segs[seg as usize];
                    let o = orient2d(s.a, s.b, q);
                    node = if o >= 0.0 { above } else { below };
                }
                Node::Leaf(t) => return t,
            }
        }
    }

    /// Locate the trapezoid whose interior the new segment enters at `p`.
    fn locate_insert(&self, p: Point2, toward: Point2) -> u32 {
        let mut node = self.root;
        loop {
            match self.nodes[node as usize] {
                Node::X { p: xp, left, right } => {
                    node = if lex_less(p, xp) { left } else { right };
                }
                Node::Y { seg, above, below } => {
                    let s = &self.segs[seg as usize];
                    let mut o = orient2d(s.a, s.b, p);
                    if o == 0.0 {
                        // Shared endpoint: break the tie by slope.
                        o = orient2d(s.a, s.b, toward);
                    }
                    node = if o > 0.0 { above } else { below };
                }
                Node::Leaf(t) => return t,
            }
        }
    }

    fn new_trap(&mut self, leftp: Point2, rightp: Point2, top: Option<u32>, bottom: Option<u32>) -> u32 {
        let id = self.traps.len() as u32;
        let node = self.nodes.len() as u32;
        self.nodes.push(Node::Leaf(id));
        self.traps.push(Trap {
            leftp,
            rightp,
            top,
            bottom,
            ul: None,
            ll: None,
            ur: None,
            lr: None,
            node,
            alive: true,
        });
        id
    }

    fn insert(&mut self, sid: u32) {
        let s = self.segs[sid as usize];
        let (p, q) = (s.a, s.b);

        // Trapezoids crossed by the segment, left to right. side[i] records
        // whether the boundary vertex after chain[i] lies above the segment.
        let mut chain: Vec<u32> = vec![self.locate_insert(p, q)];
        let mut side: Vec<bool> = Vec::new();
        loop {
            let t = &self.traps[*chain.last().unwrap() as usize];
            if !lex_less(t.rightp, q) {
                break;
            }
            let above = orient2d(p, q, t.rightp) > 0.0;
            side.push(above);
            let next = if above { t.lr } else { t.ur };
            chain.push(next.expect("segment walk fell off the map"));
        }
        let k = chain.len();
        let first = self.traps[chain[0] as usize];
        let last = self.traps[chain[k - 1] as usize];

        let has_a = lex_less(first.leftp, p);
        let has_d = lex_less(q, last.rightp);
        let a_trap = has_a.then(|| self.new_trap(first.leftp, p, first.top, first.bottom));
        let d_trap = has_d.then(|| self.new_trap(q, last.rightp, last.top, last.bottom));

        // Group the chain into runs merged above and below the segment.
        // The region above the segment splits at boundary vertices above it,
        // the region below at vertices below it.
        let mut tops: Vec<(usize, usize, u32)> = Vec::new(); // (first, last, trap)
        let mut bots: Vec<(usize, usize, u32)> = Vec::new();
        {
            let mut start = 0;
            for i in 0..k {
                if i == k - 1 || side[i] {
                    let leftp = if start == 0 { p } else { self.traps[chain[start] as usize].leftp };
                    let rightp = if i == k - 1 { q } else { self.traps[chain[i] as usize].rightp };
                    let top = self.traps[chain[start] as usize].top;
                    let t = self.new_trap(leftp, rightp, top, Some(sid));
                    tops.push((start, i, t));
                    start = i + 1;
                }
            }
            let mut start = 0;
            for i in 0..k {
                if i == k - 1 || !side[i] {
                    let leftp = if start == 0 { p } else { self.traps[chain[start] as usize].leftp };
                    let rightp = if i == k - 1 { q } else { self.traps[chain[i] as usize].rightp };
                    let bottom = self.traps[chain[start] as usize].bottom;
                    let t = self.new_trap(leftp, rightp, Some(sid), bottom);
                    bots.push((start, i, t));
                    start = i + 1;
                }
            }
        }

        // Internal wiring: consecutive runs share the new segment.
        for w in 0..tops.len() {
            if w + 1 < tops.len() {
                self.traps[tops[w].2 as usize].lr = Some(tops[w + 1].2);
                self.traps[tops[w + 1].2 as usize].ll = Some(tops[w].2);
            }
            // Outer-side links come from the dead run ends.
            let (i0, i1, t) = tops[w];
            let dl = self.traps[chain[i0] as usize];
            let dr = self.traps[chain[i1] as usize];
            if i0 > 0 || !has_a {
                self.traps[t as usize].ul = if i0 == 0 { dl.ul } else { dl.ul };
            }
            if i1 < k - 1 || !has_d {
                self.traps[t as usize].ur = dr.ur;
            }
        }
        for w in 0..bots.len() {
            if w + 1 < bots.len() {
                self.traps[bots[w].2 as usize].ur = Some(bots[w + 1].2);
                self.traps[bots[w + 1].2 as usize].ul = Some(bots[w].2);
            }
            let (i0, i1, t) = bots[w];
            let dl = self.traps[chain[i0] as usize];
            let dr = self.traps[chain[i1] as usize];
            if i0 > 0 || !has_a {
                self.traps[t as usize].ll = dl.ll;
            }
            if i1 < k - 1 || !has_d {
                self.traps[t as usize].lr = dr.lr;
            }
        }
        let t_first = tops[0].2;
        let t_last = tops.last().unwrap().2;
        let b_first = bots[0].2;
        let b_last = bots.last().unwrap().2;
        if let Some(a) = a_trap {
            self.traps[a as usize].ul = first.ul;
            self.traps[a as usize].ll = first.ll;
            self.traps[a as usize].ur = Some(t_first);
            self.traps[a as usize].lr = Some(b_first);
            self.traps[t_first as usize].ul = Some(a);
            self.traps[b_first as usize].ll = Some(a);
        }
        if let Some(d) = d_trap {
            self.traps[d as usize].ur = last.ur;
            self.traps[d as usize].lr = last.lr;
            self.traps[d as usize].ul = Some(t_last);
            self.traps[d as usize].ll = Some(b_last);
            self.traps[t_last as usize].ur = Some(d);
            self.traps[b_last as usize].lr = Some(d);
        }

        // Patch pointers of external neighbors of the dead chain.
        let mut new_traps: Vec<u32> = Vec::with_capacity(tops.len() + bots.len() + 2);
        new_traps.extend(a_trap);
        new_traps.extend(d_trap);
        new_traps.extend(tops.iter().map(|t| t.2));
        new_traps.extend(bots.iter().map(|t| t.2));
        let dead: Vec<u32> = chain.clone();
        let is_dead = |id: u32| dead.contains(&id);
        let mut externals: Vec<u32> = Vec::new();
        for &d in &dead {
            let t = self.traps[d as usize];
            for nb in [t.ul, t.ll, t.ur, t.lr].into_iter().flatten() {
                if !is_dead(nb) && !externals.contains(&nb) {
                    externals.push(nb);
                }
            }
        }
        for &x in &externals {
            let xt = self.traps[x as usize];
            let find = |right: bool, top: bool| -> Option<u32> {
                new_traps.iter().copied().find(|&n| {
                    let nt = &self.traps[n as usize];
                    let touching = if right {
                        lex_eq(nt.leftp, xt.rightp)
                    } else {
                        lex_eq(nt.rightp, xt.leftp)
                    };
                    touching && if top { nt.top == xt.top } else { nt.bottom == xt.bottom }
                })
            };
            let ur = xt.ur.is_some_and(is_dead).then(|| find(true, true));
            let lr = xt.lr.is_some_and(is_dead).then(|| find(true, false));
            let ul = xt.ul.is_some_and(is_dead).then(|| find(false, true));
            let ll = xt.ll.is_some_and(is_dead).then(|| find(false, false));
            let t = &mut self.traps[x as usize];
            if let Some(v) = ur {
                t.ur = v;
            }
            if let Some(v) = lr {
                t.lr = v;
            }
            if let Some(v) = ul {
                t.ul = v;
            }
            if let Some(v) = ll {
                t.ll = v;
            }
        }

        // DAG surgery: overwrite each dead leaf in place.
        for (i, &d) in chain.iter().enumerate() {
            let t_here = tops.iter().find(|&&(i0, i1, _)| i0 <= i && i <= i1).unwrap().2;
            let b_here = bots.iter().find(|&&(i0, i1, _)| i0 <= i && i <= i1).unwrap().2;
            let leaf_t = self.traps[t_here as usize].node;
            let leaf_b = self.traps[b_here as usize].node;
            let mut subtree = {
                let y = self.nodes.len() as u32;
                self.nodes.push(Node::Y { seg: sid, above: leaf_t, below: leaf_b });
                y
            };
            if i == k - 1 {
                if let Some(d_id) = d_trap {
                    let leaf_d = self.traps[d_id as usize].node;
                    let x = self.nodes.len() as u32;
                    self.nodes.push(Node::X { p: q, left: subtree, right: leaf_d });
                    subtree = x;
                }
            }
            if i == 0 {
                if let Some(a_id) = a_trap {
                    let leaf_a = self.traps[a_id as usize].node;
                    let x = self.nodes.len() as u32;
                    self.nodes.push(Node::X { p, left: leaf_a, right: subtree });
                    subtree = x;
                }
            }
            let dead_node = self.traps[d as usize].node;
            self.nodes[dead_node as usize] = self.nodes[subtree as usize];
            self.traps[d as usize].alive = false;
            // Re-anchor surviving leaves that we copied into the old slot.
            match self.nodes[dead_node as usize] {
                Node::Leaf(t) => self.traps[t as usize].node = dead_node,
                _ => {}
            }
        }
    }

    #[cfg(test)]
    fn audit(&self) {
        for (id, t) in self.traps.iter().enumerate() {
            if !t.alive {
                continue;
            }
            assert!(!lex_less(t.rightp, t.leftp), "trap {id} inverted");
            for nb in [t.ul, t.ll, t.ur, t.lr].into_iter().flatten() {
                assert!(self.traps[nb as usize].alive, "trap {id} points at dead {nb}");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Brute-force face location, matching locate(): the face above the
    // nearest segment at or below q, else below the nearest segment above.
    fn brute_locate(segments: &[(Point2, Point2, u32, u32)], q: Point2) -> u32 {
        let mut below_best: Option<(f64, u32)> = None;
        let mut above_best: Option<(f64, u32)> = None;
        for &(p0, p1, left, right) in segments {
            let (a, b) = if lex_less(p0, p1) { (p0, p1) } else { (p1, p0) };
            let (above, below) = if lex_less(p0, p1) { (left, right) } else { (right, left) };
            if q.x < a.x || q.x > b.x || a.x == b.x {
                continue;
            }
            let y = a.y + (b.y - a.y) * (q.x - a.x) / (b.x - a.x);
            if y <= q.y {
                if below_best.map_or(true, |(by, _)| y > by) {
                    below_best = Some((y, above));
                }
            } else if above_best.map_or(true, |(by, _)| y < by) {
                above_best = Some((y, below));
            }
        }
        below_best
            .map(|(_, l)| l)
            .or(above_best.map(|(_, l)| l))
            .unwrap_or(OUTER)
    }

    #[test]
    fn single_square_faces() {
        let segs = vec![
            (pt(0.0, 0.0), pt(1.0, 0.0), 1u32, OUTER),
            (pt(1.0, 0.0), pt(1.0, 1.0), 1, OUTER),
            (pt(1.0, 1.0), pt(0.0, 1.0), 1, OUTER),
            (pt(0.0, 1.0), pt(0.0, 0.0), 1, OUTER),
        ];
        let map = TrapMap::build(&segs, 7);
        assert_eq!(map.locate(pt(0.5, 0.5)), 1);
        assert_eq!(map.locate(pt(1.5, 0.5)), OUTER);
        assert_eq!(map.locate(pt(0.5, -0.2)), OUTER);
        assert_eq!(map.locate(pt(-3.0, 8.0)), OUTER);
    }

    #[test]
    fn triangulated_fan_labels() {
        // Fan around the origin: four faces.
        let o = pt(0.0, 0.0);
        let ring = [pt(2.0, 0.0), pt(0.0, 2.0), pt(-2.0, 0.0), pt(0.0, -2.0)];
        let mut segs: Vec<(Point2, Point2, u32, u32)> = Vec::new();
        for i in 0..4 {
            let a = ring[i];
            let b = ring[(i + 1) % 4];
            segs.push((a, b, i as u32, OUTER));
            segs.push((o, a, i as u32, (i + 3) as u32 % 4));
        }
        let map = TrapMap::build(&segs, 11);
        assert_eq!(map.locate(pt(0.5, 0.5)), 0);
        assert_eq!(map.locate(pt(-0.5, 0.5)), 1);
        assert_eq!(map.locate(pt(-0.5, -0.5)), 2);
        assert_eq!(map.locate(pt(0.5, -0.5)), 3);
        assert_eq!(map.locate(pt(3.0, 0.0)), OUTER);
    }

    #[test]
    fn random_segment_soup_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..30 {
            // Non-crossing horizontal-ish segments at distinct heights.
            let n = rng.gen_range(1..40);
            let mut segs = Vec::new();
            for i in 0..n {
                let y = i as f64 * 1.7 + rng.gen_range(0.0..0.4);
                let x0: f64 = rng.gen_range(-50.0..40.0);
                let len: f64 = rng.gen_range(1.0..30.0);
                let tilt: f64 = rng.gen_range(-0.3..0.3);
                segs.push((pt(x0, y), pt(x0 + len, y + tilt), 2 * i as u32, 2 * i as u32 + 1));
            }
            let map = TrapMap::build(&segs, trial as u64);
            map.audit();
            for _ in 0..300 {
                let q = pt(rng.gen_range(-55.0..55.0), rng.gen_range(-5.0..70.0));
                assert_eq!(map.locate(q), brute_locate(&segs, q), "trial {trial} q={q:?}");
            }
        }
    }

    #[test]
    fn shared_vertex_mesh_matches_brute_force() {
        // Triangulated random convex polygons: many shared endpoints.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..30 {
            let n = rng.gen_range(3..30);
            let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
            angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
            angles.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
            if angles.len() < 3 {
                continue;
            }
            let ring: Vec<Point2> = angles
                .iter()
                .map(|&t| pt(10.0 * t.cos(), 10.0 * t.sin()))
                .collect();
            let m = ring.len();
            let mut segs = Vec::new();
            for i in 0..m {
                segs.push((ring[i], ring[(i + 1) % m], (i % 7) as u32, OUTER));
            }
            // Fan triangulation diagonals from vertex 0.
            for i in 2..m - 1 {
                segs.push((ring[0], ring[i], 99, 99));
            }
            let map = TrapMap::build(&segs, 1000 + trial as u64);
            map.audit();
            for _ in 0..200 {
                let q = pt(rng.gen_range(-12.0..12.0), rng.gen_range(-12.0..12.0));
                let got = map.locate(q);
                let want = brute_locate(&segs, q);
                assert_eq!(got, want, "trial {trial} q={q:?}");
            }
        }
    }
}
