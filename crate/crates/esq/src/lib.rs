//! Preprocess-then-query engine for largest-empty-space queries.
//!
//! Given a convex polygon, a simple polygon or a planar point set, build an
//! index that reports the largest circle (or axis-parallel rectangle, for
//! point sets) avoiding the input but containing an arbitrary query point.
//! Every query path is verified against an independent brute-force oracle;
//! see the `oracle` module and the acceptance suite.
//!
//! Entry points:
//! - [`convex::preprocess_convex`] / queries in O(log n)
//! - [`simple::preprocess_simple`] / centroid-tree queries
//! - [`points::preprocess_points`] / Voronoi-based queries
//! - [`rects::preprocess_qmer`] / largest empty rectangle queries
//! - [`lcq`] - the shared largest-circle-query structure, two ways
//!
//! The `examples/` directory has one runnable example per capability; the
//! thin `esq` binary drives files through the same code paths.

pub mod bench;
pub mod cli;
pub mod convex;
pub mod geom;
pub mod hull3d;
pub mod instances;
pub mod io;
pub mod lcq;
pub mod medial;
pub mod oracle;
pub mod points;
pub mod rects;
pub mod selftest;
pub mod simple;
pub mod svg;
pub mod trapmap;
pub mod voronoi;
