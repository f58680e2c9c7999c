//! Build/query timing with CSV emission.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{pt, Error, Point2, Result};
use crate::instances;
use crate::lcq::{CircleSet, LcqArrangement, LcqTree};

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub mode: String,
    pub n: usize,
    pub seed: u64,
    pub build_ns: u128,
    pub mean_query_ns: f64,
    pub p99_query_ns: u128,
    pub queries: usize,
    pub depth: usize,
}

pub const CSV_HEADER: &str = "mode,n,seed,build_ns,mean_query_ns,p99_query_ns,queries,depth";

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.mode, r.n, r.seed, r.build_ns, r.mean_query_ns, r.p99_query_ns, r.queries, r.depth
        ));
    }
    out
}

pub fn from_csv(text: &str) -> Result<Vec<BenchRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        _ => return Err(Error::Parse("bad bench CSV header".into())),
    }
    let mut out = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(Error::Parse(format!("bad bench CSV row: {line}")));
        }
        let parse_err = |what: &str| Error::Parse(format!("bad {what}: {line}"));
        out.push(BenchRecord {
            mode: f[0].to_string(),
            n: f[1].parse().map_err(|_| parse_err("n"))?,
            seed: f[2].parse().map_err(|_| parse_err("seed"))?,
            build_ns: f[3].parse().map_err(|_| parse_err("build_ns"))?,
            mean_query_ns: f[4].parse().map_err(|_| parse_err("mean_query_ns"))?,
            p99_query_ns: f[5].parse().map_err(|_| parse_err("p99_query_ns"))?,
            queries: f[6].parse().map_err(|_| parse_err("queries"))?,
            depth: f[7].parse().map_err(|_| parse_err("depth"))?,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcqVariant {
    Tree,
    Sweep,
}

/// Time one instance family at one size. `queries` random queries run
/// against the built structure; times are wall-clock nanoseconds.
pub fn run_one(
    mode: &str,
    n: usize,
    seed: u64,
    queries: usize,
    lcq_variant: LcqVariant,
) -> Result<BenchRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Retry generation on degenerate instances, keeping the size.
    for _ in 0..64 {
        let result = try_run(mode, n, &mut rng, queries, lcq_variant, seed);
        match result {
            Err(Error::DegenerateInput(_)) => continue,
            other => return other,
        }
    }
    Err(Error::DegenerateInput(format!("no valid {mode} instance of size {n}")))
}

fn try_run(
    mode: &str,
    n: usize,
    rng: &mut ChaCha8Rng,
    queries: usize,
    lcq_variant: LcqVariant,
    seed: u64,
) -> Result<BenchRecord> {
    let qbox = 140.0;
    let qs: Vec<Point2> = (0..queries)
        .map(|_| pt(rng.gen_range(-qbox..qbox), rng.gen_range(-qbox..qbox)))
        .collect();
    let mut times: Vec<u128> = Vec::with_capacity(queries);
    let (build_ns, depth) = match mode {
        "lcq" => {
            let circles = instances::random_circles(rng, n);
            let t0 = Instant::now();
            let set = CircleSet::new(circles)?;
            match lcq_variant {
                LcqVariant::Tree => {
                    let tree = LcqTree::build(set)?;
                    let build = t0.elapsed().as_nanos();
                    for q in &qs {
                        let t = Instant::now();
                        std::hint::black_box(tree.query(*q));
                        times.push(t.elapsed().as_nanos());
                    }
                    (build, tree.depth())
                }
                LcqVariant::Sweep => {
                    let arr = LcqArrangement::build(set)?;
                    let build = t0.elapsed().as_nanos();
                    for q in &qs {
                        let t = Instant::now();
                        std::hint::black_box(arr.query(*q));
                        times.push(t.elapsed().as_nanos());
                    }
                    (build, 0)
                }
            }
        }
        "convex" => {
            let poly = instances::random_convex_polygon(rng, n);
            let bbox = poly.bbox();
            let qs: Vec<Point2> = (0..queries)
                .map(|_| {
                    pt(
                        rng.gen_range(bbox.xmin..bbox.xmax),
                        rng.gen_range(bbox.ymin..bbox.ymax),
                    )
                })
                .collect();
            let t0 = Instant::now();
            let idx = crate::convex::preprocess_convex(&poly)?;
            let build = t0.elapsed().as_nanos();
            for q in &qs {
                let t = Instant::now();
                std::hint::black_box(idx.query(*q));
                times.push(t.elapsed().as_nanos());
            }
            (build, idx.axis().nodes.len())
        }
        "simple" => {
            let poly = instances::random_simple_polygon(rng, n);
            let bbox = poly.bbox();
            let qs: Vec<Point2> = (0..queries)
                .map(|_| {
                    pt(
                        rng.gen_range(bbox.xmin..bbox.xmax),
                        rng.gen_range(bbox.ymin..bbox.ymax),
                    )
                })
                .collect();
            let t0 = Instant::now();
            let idx = crate::simple::preprocess_simple(&poly)?;
            let build = t0.elapsed().as_nanos();
            for q in &qs {
                let t = Instant::now();
                std::hint::black_box(idx.query(*q));
                times.push(t.elapsed().as_nanos());
            }
            (build, idx.centroid_depth())
        }
        "points" => {
            let points = instances::random_points(rng, n);
            let t0 = Instant::now();
            let idx = crate::points::preprocess_points(&points)?;
            let build = t0.elapsed().as_nanos();
            let qs: Vec<Point2> = (0..queries)
                .map(|_| pt(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
                .collect();
            for q in &qs {
                let t = Instant::now();
                std::hint::black_box(idx.query(*q));
                times.push(t.elapsed().as_nanos());
            }
            (build, idx.lcq_depth())
        }
        "rect" => {
            let (points, region) = instances::random_rect_instance(rng, n);
            let t0 = Instant::now();
            let idx = crate::rects::preprocess_qmer(&points, &region)?;
            let build = t0.elapsed().as_nanos();
            let qs: Vec<Point2> = (0..queries)
                .map(|_| pt(rng.gen_range(0.5..99.5), rng.gen_range(0.5..99.5)))
                .collect();
            for q in &qs {
                let t = Instant::now();
                std::hint::black_box(idx.query(*q).ok());
                times.push(t.elapsed().as_nanos());
            }
            (build, 0)
        }
        other => return Err(Error::Parse(format!("unknown bench mode '{other}'"))),
    };
    if times.is_empty() {
        return Err(Error::Parse("bench needs at least one query".into()));
    }
    times.sort_unstable();
    let mean = times.iter().sum::<u128>() as f64 / times.len() as f64;
    let p99 = times[(times.len() * 99 / 100).min(times.len() - 1)];
    Ok(BenchRecord {
        mode: mode.to_string(),
        n,
        seed,
        build_ns: build_ns.max(1),
        mean_query_ns: mean,
        p99_query_ns: p99,
        queries: times.len(),
        depth,
    })
}
