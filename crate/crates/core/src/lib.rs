//! Random temporal graphs generated by the random spanning tree model: sampling,
//! temporal reachability, temporal DFS, exploration schedules, hard-instance
//! model constructions, closed-form predictions and exact small-instance oracles.

pub mod error;
pub mod io;
pub mod model;
pub mod models;
pub mod oracle;
pub mod predict;
pub mod reach;
pub mod schedulers;
pub mod rng;
pub mod search;
pub mod set;
pub mod stars;
pub mod tree;
pub mod walk;
pub mod window;

pub use error::{Error, Result};
pub use model::{build_model, uniform_model, Model};
pub use set::VertexSet;
pub use tree::{validate_tree, Edge, Tree};
pub use walk::{validate_walk, Walk, WalkReport};
pub use window::TemporalWindow;
