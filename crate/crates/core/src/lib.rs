//! DP-colouring (correspondence colouring) of finite simple graphs: covers,
//! transversal search, exhaustive DP invariants and product constructions.

pub mod coloring;
pub mod cover;
pub mod dp;
pub mod error;
pub mod explore;
pub mod format;
pub mod graph;
pub mod product;
pub mod solver;

pub use cover::{Cover, Matching, Transversal};
pub use dp::Mode;
pub use error::{Error, Limits, Resource, Result};
pub use graph::SimpleGraph;
pub use product::{CoverCertificate, ProductCover};
