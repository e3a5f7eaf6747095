//! Nubot active self-assembly: a continuous-time simulator for the nubot
//! model on the triangular grid, compilers for the classic constructions,
//! and analysis tools for verifying their behavior.

pub mod analysis;
pub mod grid;
pub mod io_render;
pub mod kinetics;
pub mod model;
pub mod programs;
pub mod rules;
pub mod state;
pub mod text;

pub use grid::{Direction, GridPoint};
pub use model::Configuration;
pub use rules::{Rule, RuleSet};
pub use state::{Bond, State};
