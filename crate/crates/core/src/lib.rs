//! Poincaré-Reeb graphs of plane regions bounded by circles.

pub mod algebraic;
pub mod cli;
pub mod error;
pub mod format;
pub mod fuzz;
pub mod geom;
pub mod grammar;
pub mod ops;
pub mod planner;
pub mod reeb;
pub mod region;
pub mod svg;
pub mod tree;

pub use error::{Error, Result};
pub use geom::{Axis, Circle, Point, Tolerance};
pub use reeb::{compute_pr_graph, PRGraph};
pub use region::{HalfConstraint, SSRegion, Side};
pub use tree::Tree;
