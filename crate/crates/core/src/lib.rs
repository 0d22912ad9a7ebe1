//! Net total curvature of polygonal spatial graphs.

pub mod cli;
pub mod curves;
pub mod direction_analysis;
pub mod double_cover;
pub mod error;
pub mod graph_model;
pub mod random_graphs;
pub mod refinement;
pub mod sampling;
pub mod theta_tools;
pub mod vertex_curvature;

pub use error::{Error, Result};
