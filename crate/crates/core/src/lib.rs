//! Exact analysis of edge shifts over finitely presented infinite directed graphs.
//!
//! A graph is given by a finite presentation: a finite list of exceptional edges plus
//! finitely many affine edge families. Every edge `e_k` carries an index `k >= 1` and the
//! indices enumerate the edge set. Paths are ordered by an explicit enumeration that
//! induces an ultrametric on infinite paths; this crate computes ranks, distances,
//! pseudo-orbit (chain) constructions, bounded shadowing searches and the classifiers
//! that decide shadowing for structured classes of graphs.
//!
//! Module map:
//! - [`graph`]: presentations, the text format, builtins, follower sets.
//! - [`path`]: finite paths and eventually periodic (possibly drifting) infinite paths.
//! - [`enumeration`]: the path enumeration, `N(k)`, rank and unrank.
//! - [`metric`]: disagreement indices, the exact dyadic distance and the threshold predicate.
//! - [`dynamics`]: the shift, chains, family-to-chain constructors and shadow construction.
//! - [`shadowing`]: bounded searches, condition checkers, classifiers, certificates.

pub mod affine;
pub mod dynamics;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod metric;
pub mod path;
pub mod shadowing;

pub use affine::AffineForm;
pub use dynamics::{Chain, ChainTail, ChainValidity, PathFamily};
pub use enumeration::{nk, rank, unrank, Rank, Threshold};
pub use error::{Error, Result};
pub use graph::{builtin, Edge, EdgeFamily, GraphPresentation, Vertex, VertexTerm};
pub use metric::{Disagreement, Distance};
pub use path::{FinitePath, InfinitePath, Path};
