//! Community detection by iterative edge removal on top of a flocking-like
//! particle-alignment system.
//!
//! Every vertex carries a unit direction vector that is repeatedly pulled
//! toward the mean direction of its neighbours. Edges whose endpoints are still
//! far apart when the dynamics is interrupted are likely to cross community
//! boundaries; removing the worst of them round after round splits the graph
//! into connected components, and the round with the best modularity wins.
//!
//! The crate is organised as:
//!
//! - [`graph`]: simple undirected graph with stable edge ids and [`Partition`].
//! - [`dynamics`]: the alignment map, misalignment coefficients, energy.
//! - [`detector`]: the round loop and its [`DetectionTrace`].
//! - [`metrics`]: modularity, adjusted Rand index, normalized mutual information.
//! - [`baselines`]: greedy agglomerative modularity (CNM) and Louvain.
//! - [`generators`]: planted-partition benchmark networks.
//! - [`io`]: edge lists, GML, LFR files, CSV traces and summaries.
//!
//! With the default `parallel` feature, independent runs inside a round are
//! executed on the rayon pool; without it the same code runs sequentially and
//! produces bit-identical results.

pub mod baselines;
pub mod detector;
pub mod dynamics;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod par;
pub mod seed;

pub use detector::{detect, DetectionTrace, DetectorConfig, Removal, StopRule};
pub use dynamics::{DynParams, MisalignmentTable, VelocityState};
pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, Partition};
pub use par::Exec;
