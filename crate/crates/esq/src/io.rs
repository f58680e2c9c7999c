//! Instance and answer documents.
//!
//! Instances are line-oriented key/value text, order independent except
//! that `point:` lines keep their relative order:
//!
//! ```text
//! # comment
//! mode: points            # convex | simple | points | rect
//! jitter_seed: 7          # optional; enables one degeneracy retry
//! region: 0 0 10 10       # xmin ymin xmax ymax; required for rect mode
//! point: 1.5 2.25
//! point: 4.0 0.5
//! ```
//!
//! Query files hold one `x y` pair per line. Answer documents hold one
//! line per query, in order: `unbounded`, `null`,
//! `circle <cx> <cy> <r> [witness=<id>]`, or
//! `rect <xmin> <ymin> <xmax> <ymax> [witness=<id>]`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::convex::{preprocess_convex, ConvexQmecIndex};
use crate::geom::{pt, AxisRect, Error, Point2, Polygon, QueryAnswer, Result};
use crate::points::{preprocess_points, PointsQmecIndex};
use crate::rects::{preprocess_qmer, MerIndex};
use crate::simple::{preprocess_simple, SimpleQmecIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Convex,
    Simple,
    Points,
    Rect,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "convex" => Ok(Mode::Convex),
            "simple" => Ok(Mode::Simple),
            "points" => Ok(Mode::Points),
            "rect" => Ok(Mode::Rect),
            other => Err(Error::Parse(format!("unknown mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Mode::Convex => "convex",
            Mode::Simple => "simple",
            Mode::Points => "points",
            Mode::Rect => "rect",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone)]
pub struct InstanceFile {
    pub mode: Mode,
    pub coordinates: Vec<Point2>,
    pub region: Option<AxisRect>,
    pub jitter_seed: Option<u64>,
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut mode: Option<Mode> = None;
    let mut coordinates = Vec::new();
    let mut region = None;
    let mut jitter_seed = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("line {}: expected 'key: value'", lineno + 1)))?;
        let value = value.trim();
        match key.trim() {
            "mode" => mode = Some(value.parse()?),
            "jitter_seed" => {
                jitter_seed = Some(value.parse().map_err(|_| {
                    Error::Parse(format!("line {}: bad jitter_seed", lineno + 1))
                })?)
            }
            "region" => {
                let nums = parse_floats(value, 4, lineno)?;
                region = Some(AxisRect::new(nums[0], nums[2], nums[1], nums[3]).map_err(
                    |_| Error::Parse(format!("line {}: empty region", lineno + 1)),
                )?);
            }
            "point" => {
                let nums = parse_floats(value, 2, lineno)?;
                coordinates.push(pt(nums[0], nums[1]));
            }
            other => return Err(Error::Parse(format!("line {}: unknown key '{other}'", lineno + 1))),
        }
    }
    let mode = mode.ok_or_else(|| Error::Parse("missing 'mode:' line".into()))?;
    if mode == Mode::Rect && region.is_none() {
        return Err(Error::Parse("rect mode requires a 'region:' line".into()));
    }
    Ok(InstanceFile { mode, coordinates, region, jitter_seed })
}

fn parse_floats(s: &str, want: usize, lineno: usize) -> Result<Vec<f64>> {
    let nums: std::result::Result<Vec<f64>, _> =
        s.split_whitespace().map(str::parse::<f64>).collect();
    match nums {
        Ok(v) if v.len() == want && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(Error::Parse(format!(
            "line {}: expected {want} finite numbers",
            lineno + 1
        ))),
    }
}

pub fn format_instance(inst: &InstanceFile) -> String {
    let mut out = format!("mode: {}\n", inst.mode);
    if let Some(seed) = inst.jitter_seed {
        out.push_str(&format!("jitter_seed: {seed}\n"));
    }
    if let Some(r) = inst.region {
        out.push_str(&format!("region: {} {} {} {}\n", r.xmin, r.ymin, r.xmax, r.ymax));
    }
    for p in &inst.coordinates {
        out.push_str(&format!("point: {} {}\n", p.x, p.y));
    }
    out
}

pub fn parse_queries(text: &str) -> Result<Vec<Point2>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums = parse_floats(line, 2, lineno)?;
        out.push(pt(nums[0], nums[1]));
    }
    Ok(out)
}

/// A built index of any mode.
pub enum BuiltIndex {
    Convex(ConvexQmecIndex),
    Simple(SimpleQmecIndex),
    Points(PointsQmecIndex),
    Rect(MerIndex),
}

impl BuiltIndex {
    pub fn query(&self, q: Point2) -> QueryAnswer {
        match self {
            BuiltIndex::Convex(idx) => idx.query(q),
            BuiltIndex::Simple(idx) => idx.query(q),
            BuiltIndex::Points(idx) => idx.query(q),
            // Outside-region rectangle queries answer null.
            BuiltIndex::Rect(idx) => idx.query(q).unwrap_or(QueryAnswer::Null),
        }
    }
}

impl InstanceFile {
    /// Build the index for this instance; on degenerate input with a
    /// jitter seed present, perturb once by 1e-9 of the bounding box
    /// diameter and retry.
    pub fn build(&self) -> Result<BuiltIndex> {
        match self.try_build(&self.coordinates) {
            Err(Error::DegenerateInput(_)) if self.jitter_seed.is_some() => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.jitter_seed.unwrap());
                let mag = 1e-9 * bbox_diameter(&self.coordinates);
                let jittered: Vec<Point2> = self
                    .coordinates
                    .iter()
                    .map(|p| {
                        pt(
                            p.x + rng.gen_range(-1.0..1.0) * mag,
                            p.y + rng.gen_range(-1.0..1.0) * mag,
                        )
                    })
                    .collect();
                self.try_build(&jittered)
            }
            other => other,
        }
    }

    fn try_build(&self, coords: &[Point2]) -> Result<BuiltIndex> {
        match self.mode {
            Mode::Convex => {
                let poly = Polygon::new(coords.to_vec())?;
                Ok(BuiltIndex::Convex(preprocess_convex(&poly)?))
            }
            Mode::Simple => {
                let poly = Polygon::new(coords.to_vec())?;
                Ok(BuiltIndex::Simple(preprocess_simple(&poly)?))
            }
            Mode::Points => Ok(BuiltIndex::Points(preprocess_points(coords)?)),
            Mode::Rect => {
                let region = self.region.expect("validated at parse");
                Ok(BuiltIndex::Rect(preprocess_qmer(coords, &region)?))
            }
        }
    }
}

fn bbox_diameter(points: &[Point2]) -> f64 {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for p in points {
        xmin = xmin.min(p.x);
        xmax = xmax.max(p.x);
        ymin = ymin.min(p.y);
        ymax = ymax.max(p.y);
    }
    if points.is_empty() {
        1.0
    } else {
        ((xmax - xmin).hypot(ymax - ymin)).max(1e-12)
    }
}

pub fn format_answer(a: &QueryAnswer) -> String {
    match a {
        QueryAnswer::UnboundedCircle => "unbounded".into(),
        QueryAnswer::Null => "null".into(),
        QueryAnswer::BoundedCircle { circle, witness } => match witness {
            Some(w) => format!(
                "circle {} {} {} witness={w}",
                circle.center.x, circle.center.y, circle.radius
            ),
            None => format!("circle {} {} {}", circle.center.x, circle.center.y, circle.radius),
        },
        QueryAnswer::Rectangle { rect, witness } => match witness {
            Some(w) => format!(
                "rect {} {} {} {} witness={w}",
                rect.xmin, rect.ymin, rect.xmax, rect.ymax
            ),
            None => format!("rect {} {} {} {}", rect.xmin, rect.ymin, rect.xmax, rect.ymax),
        },
    }
}

pub fn format_answers(answers: &[QueryAnswer]) -> String {
    let mut out = String::new();
    for a in answers {
        out.push_str(&format_answer(a));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip_and_order_independence() {
        let text = "point: 0 0\nmode: points\npoint: 1 0\n# comment\npoint: 0.5 1.2\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.mode, Mode::Points);
        assert_eq!(inst.coordinates.len(), 3);
        let reparsed = parse_instance(&format_instance(&inst)).unwrap();
        assert_eq!(reparsed.coordinates, inst.coordinates);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_instance("mode: hexagons\n").is_err());
        assert!(parse_instance("point: 1 2\n").is_err()); // no mode
        assert!(parse_instance("mode: rect\npoint: 1 2\n").is_err()); // no region
        assert!(parse_instance("mode: points\npoint: 1\n").is_err());
    }

    #[test]
    fn self_intersecting_simple_instance_fails_as_not_simple() {
        let text = "mode: simple\npoint: 0 0\npoint: 1 1\npoint: 1 0\npoint: 0 1\n";
        let inst = parse_instance(text).unwrap();
        assert!(matches!(inst.build(), Err(Error::NotSimple)));
    }

    #[test]
    fn jitter_rescues_cocircular_points() {
        // Cocircular points away from inscribed right angles: the radius
        // tie is first-order sensitive, so the jitter separates it.
        let mut text = String::from("mode: points\njitter_seed: 7\n");
        for deg in [0.0f64, 40.0, 90.0, 200.0] {
            let t = deg.to_radians();
            text.push_str(&format!("point: {} {}\n", t.cos(), t.sin()));
        }
        let inst = parse_instance(&text).unwrap();
        let no_seed = InstanceFile { jitter_seed: None, ..inst.clone() };
        assert!(matches!(no_seed.build(), Err(Error::DegenerateInput(_))));
        let built = inst.build().unwrap();
        let q = pt(0.01, 0.02);
        let got = built.query(q).radius().unwrap();
        let want = crate::oracle::oracle_qmec_points(&inst.coordinates, q)
            .unwrap()
            .radius()
            .unwrap();
        assert!((got - want).abs() / want < 1e-6, "{got} vs {want}");
    }

    #[test]
    fn square_corners_stay_degenerate_even_jittered() {
        // At inscribed right angles the circumradius is second-order
        // insensitive to the perturbation; both outcomes the format allows
        // collapse to a degeneracy report.
        let text = "mode: points\njitter_seed: 7\npoint: 0 0\npoint: 1 0\npoint: 1 1\npoint: 0 1\n";
        let inst = parse_instance(text).unwrap();
        assert!(matches!(inst.build(), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn answers_format() {
        let a = QueryAnswer::bounded(crate::geom::Circle::new(pt(0.5, 0.25), 1.5), Some(3));
        assert_eq!(format_answer(&a), "circle 0.5 0.25 1.5 witness=3");
        assert_eq!(format_answer(&QueryAnswer::UnboundedCircle), "unbounded");
        assert_eq!(format_answer(&QueryAnswer::Null), "null");
    }
}
