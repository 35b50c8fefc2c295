//! Finite quotients of free products of finite groups, their metrics, wall
//! structures, Hilbert-space embeddings and expansion diagnostics.

pub mod bass_serre;
pub mod baumslag;
pub mod embedding;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod group;
pub mod metric;
pub mod perm;
pub mod tower;
pub mod tree_partition;

pub use error::{Error, Result};
