//! Randomized index-versus-oracle comparison harness, shared by the CLI
//! `selftest` subcommand and the acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex::preprocess_convex;
use crate::geom::{pt, Point2, PointLocation, QueryAnswer};
use crate::instances;
use crate::lcq::{CircleSet, LcqArrangement, LcqTree};
use crate::oracle;
use crate::points::preprocess_points;
use crate::rects::preprocess_qmer;
use crate::simple::preprocess_simple;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestMode {
    Lcq,
    Convex,
    Simple,
    Points,
    Rect,
}

impl std::str::FromStr for TestMode {
    type Err = crate::geom::Error;
    fn from_str(s: &str) -> Result<TestMode, Self::Err> {
        match s {
            "lcq" => Ok(TestMode::Lcq),
            "convex" => Ok(TestMode::Convex),
            "simple" => Ok(TestMode::Simple),
            "points" => Ok(TestMode::Points),
            "rect" => Ok(TestMode::Rect),
            other => Err(crate::geom::Error::Parse(format!("unknown selftest mode '{other}'"))),
        }
    }
}

#[derive(Debug, Default)]
pub struct Report {
    pub trials: usize,
    pub queries: usize,
    /// Reproducer lines for disagreements: (seed, trial, query point, detail).
    pub failures: Vec<String>,
    /// Worst relative radius deviation across agreeing answers.
    pub max_deviation: f64,
    /// Observed structural bounds.
    pub max_guiding_bucket: usize,
    pub max_overlap_edges: usize,
    pub max_depth: usize,
    pub skipped_degenerate: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, rel: f64) {
        self.max_deviation = self.max_deviation.max(rel);
    }
}

pub fn run(mode: TestMode, n_max: usize, trials: usize, seed: u64) -> Report {
    match mode {
        TestMode::Lcq => run_lcq(n_max.max(1), trials, seed),
        TestMode::Convex => run_convex(n_max.max(4), trials, seed),
        TestMode::Simple => run_simple(n_max.max(5), trials, seed),
        TestMode::Points => run_points(n_max.max(3), trials, seed),
        TestMode::Rect => run_rect(n_max.min(12), trials, seed),
    }
}

fn run_lcq(n_max: usize, trials: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::default();
    for trial in 0..trials {
        let n = rng.gen_range(1..=n_max);
        let circles = instances::random_circles(&mut rng, n);
        let set = match CircleSet::new(circles.clone()) {
            Ok(s) => s,
            Err(_) => {
                report.skipped_degenerate += 1;
                continue;
            }
        };
        let tree = LcqTree::build(set.clone()).expect("non-empty set");
        let arr = match LcqArrangement::build(set) {
            Ok(a) => a,
            Err(_) => {
                report.skipped_degenerate += 1;
                continue;
            }
        };
        report.trials += 1;
        report.max_depth = report.max_depth.max(tree.depth());
        let bound = (n as f64).log2().ceil() as usize + 1;
        if tree.depth() > bound {
            report
                .failures
                .push(format!("seed={seed} trial={trial}: tree depth {} > {bound}", tree.depth()));
        }
        for _ in 0..50 {
            let q = pt(rng.gen_range(-70.0..70.0), rng.gen_range(-70.0..70.0));
            report.queries += 1;
            let want = oracle::oracle_lcq(&circles, q);
            let got_t = tree.query(q);
            let got_a = arr.query(q);
            let same = |a: &QueryAnswer, b: &QueryAnswer| match (a, b) {
                (QueryAnswer::Null, QueryAnswer::Null) => true,
                (
                    QueryAnswer::BoundedCircle { witness: wa, .. },
                    QueryAnswer::BoundedCircle { witness: wb, .. },
                ) => wa == wb,
                _ => false,
            };
            if !same(&got_t, &want) || !same(&got_a, &want) {
                report.failures.push(format!(
                    "seed={seed} trial={trial} q=({}, {}): tree={got_t:?} sweep={got_a:?} oracle={want:?}",
                    q.x, q.y
                ));
            }
        }
    }
    report
}

fn run_convex(n_max: usize, trials: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::default();
    for trial in 0..trials {
        let n = rng.gen_range(4..=n_max);
        let poly = instances::random_convex_polygon(&mut rng, n);
        let idx = match preprocess_convex(&poly) {
            Ok(i) => i,
            Err(_) => {
                report.skipped_degenerate += 1;
                continue;
            }
        };
        report.trials += 1;
        let bbox = poly.bbox();
        for _ in 0..20 {
            let q = pt(
                rng.gen_range(bbox.xmin..bbox.xmax),
                rng.gen_range(bbox.ymin..bbox.ymax),
            );
            report.queries += 1;
            let got = idx.query(q);
            let want = oracle::oracle_qmec_convex(&poly, q);
            match (&got, &want) {
                (QueryAnswer::UnboundedCircle, QueryAnswer::UnboundedCircle) => {}
                (
                    QueryAnswer::BoundedCircle { circle: g, .. },
                    QueryAnswer::BoundedCircle { circle: w, .. },
                ) => {
                    let rel = (g.radius - w.radius).abs() / w.radius.max(1e-12);
                    report.record(rel);
                    let clear = crate::geom::clearance(&poly, g.center).unwrap_or(0.0);
                    if rel >= 1e-6 || (clear - g.radius).abs() > 1e-7 {
                        report.failures.push(format!(
                            "seed={seed} trial={trial} q=({}, {}): r={} oracle={} clearance={}",
                            q.x, q.y, g.radius, w.radius, clear
                        ));
                    }
                }
                _ => report.failures.push(format!(
                    "seed={seed} trial={trial} q=({}, {}): {got:?} vs {want:?}",
                    q.x, q.y
                )),
            }
        }
    }
    report
}

fn run_simple(n_max: usize, trials: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::default();
    let constructed = instances::constructed_simple_instances();
    let mut trial = 0;
    while report.trials < trials {
        trial += 1;
        if trial > trials * 20 {
            break;
        }
        // Mix the constructed multi-mountain shapes in.
        let poly = if report.trials < constructed.len() {
            constructed[report.trials].clone()
        } else {
            let n = rng.gen_range(5..=n_max);
            instances::random_simple_polygon(&mut rng, n)
        };
        let idx = match preprocess_simple(&poly) {
            Ok(i) => i,
            Err(_) => {
                report.skipped_degenerate += 1;
                continue;
            }
        };
        report.trials += 1;
        report.max_guiding_bucket = report.max_guiding_bucket.max(idx.max_guiding_bucket);
        report.max_depth = report.max_depth.max(idx.centroid_depth());
        let bound = (idx.axis_node_count() as f64).log2().ceil() as usize + 1;
        if idx.centroid_depth() > bound {
            report.failures.push(format!(
                "seed={seed} trial={trial}: centroid depth {} > {bound}",
                idx.centroid_depth()
            ));
        }
        let oracle = oracle::SimpleMecOracle::new(poly.clone());
        let bbox = poly.bbox();
        let mut tested = 0;
        while tested < 20 {
            let q = pt(
                rng.gen_range(bbox.xmin..bbox.xmax),
                rng.gen_range(bbox.ymin..bbox.ymax),
            );
            if poly.locate(q) != PointLocation::Inside {
                continue;
            }
            tested += 1;
            report.queries += 1;
            let (got, bucket) = idx.query_with_stats(q);
            report.max_guiding_bucket = report.max_guiding_bucket.max(bucket);
            let want = oracle.query(q).expect("interior query");
            let (g, w) = (got.radius().unwrap_or(0.0), want.radius().unwrap_or(0.0));
            let rel = (g - w).abs() / w.max(1e-12);
            report.record(rel);
            if rel >= 1e-4 {
                report.failures.push(format!(
                    "seed={seed} trial={trial} q=({}, {}): r={g} oracle={w}",
                    q.x, q.y
                ));
            }
        }
    }
    report
}

fn run_points(n_max: usize, trials: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::default();
    let mut trial = 0;
    while report.trials < trials {
        trial += 1;
        if trial > trials * 20 {
            break;
        }
        let n = rng.gen_range(3..=n_max);
        let points = instances::random_points(&mut rng, n);
        let idx = match preprocess_points(&points) {
            Ok(i) => i,
            Err(_) => {
                report.skipped_degenerate += 1;
                continue;
            }
        };
        report.trials += 1;
        report.max_overlap_edges = report.max_overlap_edges.max(idx.max_overlap_edges());
        report.max_depth = report.max_depth.max(idx.lcq_depth());
        if idx.max_overlap_edges() > 36 {
            report.failures.push(format!(
                "seed={seed} trial={trial}: overlap-edge set of {}",
                idx.max_overlap_edges()
            ));
        }
        for _ in 0..20 {
            let q = pt(rng.gen_range(-10.0..110.0), rng.gen_range(-10.0..110.0));
            report.queries += 1;
            let want = oracle::oracle_qmec_points(&points, q).expect("validated points");
            let got = idx.query(q);
            match (&got, &want) {
                (QueryAnswer::UnboundedCircle, QueryAnswer::UnboundedCircle) => {}
                (
                    QueryAnswer::BoundedCircle { circle: g, .. },
                    QueryAnswer::BoundedCircle { circle: w, .. },
                ) => {
                    let rel = (g.radius - w.radius).abs() / w.radius.max(1e-12);
                    report.record(rel);
                    if rel >= 1e-6 {
                        report.failures.push(format!(
                            "seed={seed} trial={trial} q=({}, {}): r={} oracle={}",
                            q.x, q.y, g.radius, w.radius
                        ));
                    }
                }
                _ => report.failures.push(format!(
                    "seed={seed} trial={trial} q=({}, {}): {got:?} vs {want:?}",
                    q.x, q.y
                )),
            }
        }
    }
    report
}

fn run_rect(n_max: usize, trials: usize, seed: u64) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::default();
    for trial in 0..trials {
        let n = rng.gen_range(0..=n_max);
        let (points, region) = instances::random_rect_instance(&mut rng, n);
        let idx = match preprocess_qmer(&points, &region) {
            Ok(i) => i,
            Err(_) => {
                report.skipped_degenerate += 1;
                continue;
            }
        };
        report.trials += 1;
        for _ in 0..20 {
            let q = pt(rng.gen_range(0.5..99.5), rng.gen_range(0.5..99.5));
            report.queries += 1;
            let got = idx.query(q).expect("interior query");
            let want = oracle::oracle_qmer(&points, &region, q).expect("interior query");
            let ok = match (got.rect(), want.rect()) {
                (Some(g), Some(w)) => g.same_as(w, 1e-9),
                _ => false,
            };
            if !ok {
                report.failures.push(format!(
                    "seed={seed} trial={trial} q=({}, {}): {got:?} vs {want:?}",
                    q.x, q.y
                ));
            }
        }
    }
    report
}

/// One line per mode, suitable for terminal output.
pub fn summarize(mode: TestMode, r: &Report) -> String {
    let status = if r.passed() { "ok" } else { "MISMATCH" };
    let mut extra = String::new();
    match mode {
        TestMode::Simple => extra = format!(" max|S_r|={}", r.max_guiding_bucket),
        TestMode::Points => extra = format!(" max|O_v|={}", r.max_overlap_edges),
        _ => {}
    }
    format!(
        "{mode:?}: {status} trials={} queries={} max_dev={:.3e} depth<={}{extra} skipped={}",
        r.trials, r.queries, r.max_deviation, r.max_depth, r.skipped_degenerate
    )
}

/// Uniform random query box used by the CLI.
pub fn random_queries(rng: &mut ChaCha8Rng, k: usize, lo: f64, hi: f64) -> Vec<Point2> {
    (0..k)
        .map(|_| pt(rng.gen_range(lo..hi), rng.gen_range(lo..hi)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_selftests_pass() {
        assert!(run(TestMode::Lcq, 24, 10, 1).passed());
        assert!(run(TestMode::Convex, 16, 5, 2).passed());
        assert!(run(TestMode::Points, 16, 5, 3).passed());
        assert!(run(TestMode::Rect, 8, 5, 4).passed());
    }

    #[test]
    fn simple_selftest_passes() {
        let r = run(TestMode::Simple, 14, 4, 5);
        assert!(r.passed(), "{:?}", r.failures.first());
        assert!(r.max_guiding_bucket <= 36);
    }
}
