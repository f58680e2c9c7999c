//! Static SVG rendering of instances, query points and answers.
//!
//! Inputs draw in black, query points as crosses, answer circles and
//! rectangles as outlined shapes. `<circle>` elements are reserved for
//! answer circles so they stay countable in tests.

use crate::geom::{Point2, QueryAnswer};
use crate::io::{BuiltIndex, InstanceFile, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Overlay {
    #[default]
    None,
    Axis,
    Voronoi,
    Grid,
}

impl std::str::FromStr for Overlay {
    type Err = crate::geom::Error;
    fn from_str(s: &str) -> Result<Overlay, Self::Err> {
        match s {
            "none" => Ok(Overlay::None),
            "axis" => Ok(Overlay::Axis),
            "voronoi" => Ok(Overlay::Voronoi),
            "grid" => Ok(Overlay::Grid),
            other => Err(crate::geom::Error::Parse(format!("unknown overlay '{other}'"))),
        }
    }
}

pub fn render(
    inst: &InstanceFile,
    built: Option<&BuiltIndex>,
    queries: &[Point2],
    answers: &[QueryAnswer],
    overlay: Overlay,
) -> String {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    let mut grow = |x: f64, y: f64| {
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    };
    for p in &inst.coordinates {
        grow(p.x, p.y);
    }
    if let Some(r) = inst.region {
        grow(r.xmin, r.ymin);
        grow(r.xmax, r.ymax);
    }
    for q in queries {
        grow(q.x, q.y);
    }
    for a in answers {
        if let Some(c) = a.circle() {
            grow(c.center.x - c.radius, c.center.y - c.radius);
            grow(c.center.x + c.radius, c.center.y + c.radius);
        }
        if let Some(r) = a.rect() {
            grow(r.xmin, r.ymin);
            grow(r.xmax, r.ymax);
        }
    }
    let empty = inst.coordinates.is_empty() && inst.region.is_none() && queries.is_empty() && answers.is_empty();
    if empty {
        grow(0.0, 0.0);
        grow(1.0, 1.0);
    }
    drop(grow);
    let pad = 0.05 * ((xmax - xmin) + (ymax - ymin)).max(1e-9);
    let (x0, y0, w, h) = (xmin - pad, ymin - pad, xmax - xmin + 2.0 * pad, ymax - ymin + 2.0 * pad);
    let sw = 0.003 * w.max(h); // stroke width in world units
    let mark = 2.0 * sw;

    let mut body = String::new();
    // Input set.
    match inst.mode {
        Mode::Convex | Mode::Simple => {
            let pts: Vec<String> = inst
                .coordinates
                .iter()
                .map(|p| format!("{},{}", p.x, p.y))
                .collect();
            body.push_str(&format!(
                "<polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{sw}\"/>\n",
                pts.join(" ")
            ));
        }
        Mode::Points | Mode::Rect => {
            if let Some(r) = inst.region {
                body.push_str(&format!(
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{sw}\"/>\n",
                    r.xmin, r.ymin, r.width(), r.height()
                ));
            }
            for p in &inst.coordinates {
                body.push_str(&format!(
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"black\"/>\n",
                    p.x - mark / 2.0,
                    p.y - mark / 2.0,
                    mark,
                    mark
                ));
            }
        }
    }
    // Structure overlays.
    match (overlay, built) {
        (Overlay::Axis, Some(BuiltIndex::Convex(idx))) => {
            axis_overlay(&mut body, idx.axis(), sw);
        }
        (Overlay::Axis, Some(BuiltIndex::Simple(idx))) => {
            axis_overlay(&mut body, idx.axis(), sw);
        }
        (Overlay::Voronoi, Some(BuiltIndex::Points(idx))) => {
            for e in 0..idx.vd.edges.len() as u32 {
                let edge = &idx.vd.edges[e as usize];
                let a = idx.vd.vertices[edge.v1 as usize].pos;
                let b = idx.vd.vertices[edge.v2 as usize].pos;
                body.push_str(&line(a, b, "steelblue", sw));
            }
        }
        (Overlay::Grid, Some(BuiltIndex::Rect(_))) => {
            if let Some(r) = inst.region {
                for p in &inst.coordinates {
                    body.push_str(&line(
                        Point2::new(p.x, r.ymin),
                        Point2::new(p.x, r.ymax),
                        "silver",
                        sw * 0.6,
                    ));
                    body.push_str(&line(
                        Point2::new(r.xmin, p.y),
                        Point2::new(r.xmax, p.y),
                        "silver",
                        sw * 0.6,
                    ));
                }
            }
        }
        _ => {}
    }
    // Answers.
    for a in answers {
        match a {
            QueryAnswer::BoundedCircle { circle, .. } => {
                body.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"crimson\" stroke-width=\"{sw}\"/>\n",
                    circle.center.x, circle.center.y, circle.radius
                ));
            }
            QueryAnswer::Rectangle { rect, .. } => {
                body.push_str(&format!(
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"crimson\" stroke-width=\"{sw}\"/>\n",
                    rect.xmin, rect.ymin, rect.width(), rect.height()
                ));
            }
            _ => {}
        }
    }
    // Query crosses on top.
    for q in queries {
        body.push_str(&line(
            Point2::new(q.x - mark, q.y - mark),
            Point2::new(q.x + mark, q.y + mark),
            "darkorange",
            sw,
        ));
        body.push_str(&line(
            Point2::new(q.x - mark, q.y + mark),
            Point2::new(q.x + mark, q.y - mark),
            "darkorange",
            sw,
        ));
    }

    // Flip y so the world's +y points up.
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0} {} {w} {h}\">\n\
         <g transform=\"translate(0 {}) scale(1 -1)\">\n{body}</g>\n</svg>\n",
        -(y0 + h),
        0.0
    )
}

fn line(a: Point2, b: Point2, stroke: &str, sw: f64) -> String {
    format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{sw}\"/>\n",
        a.x, a.y, b.x, b.y
    )
}

fn axis_overlay(body: &mut String, axis: &crate::medial::MedialAxis, sw: f64) {
    for arc in 0..axis.arcs.len() as u32 {
        // Parabolic arcs render as short polylines.
        let mut prev = axis.point_on_arc(arc, 0.0);
        for i in 1..=16 {
            let p = axis.point_on_arc(arc, i as f64 / 16.0);
            body.push_str(&line(prev, p, "seagreen", sw * 0.8));
            prev = p;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use crate::io::parse_instance;

    #[test]
    fn square_with_one_query_has_one_circle_element() {
        let inst = parse_instance(
            "mode: convex\npoint: 0 0\npoint: 1 0\npoint: 1 1\npoint: 0 1\n",
        )
        .unwrap();
        let built = inst.build().unwrap();
        let queries = vec![pt(0.3, 0.4)];
        let answers: Vec<_> = queries.iter().map(|&q| built.query(q)).collect();
        let svg = render(&inst, Some(&built), &queries, &answers, Overlay::None);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.starts_with("<svg"));
    }

    #[test]
    fn voronoi_overlay_draws_edges() {
        let inst = parse_instance(
            "mode: points\npoint: 0 0.01\npoint: 4 0\npoint: 1 3\npoint: 3.1 2.9\n",
        )
        .unwrap();
        let built = inst.build().unwrap();
        let svg = render(&inst, Some(&built), &[], &[], Overlay::Voronoi);
        assert!(svg.matches("steelblue").count() >= 5, "few voronoi edges drawn");
        // Instance-only render with no queries still works.
        assert_eq!(svg.matches("<circle").count(), 0);
    }
}
