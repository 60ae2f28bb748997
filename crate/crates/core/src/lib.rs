//! Non-empty faces of a line arrangement with respect to a point set.

pub mod bench;
pub mod cutting;
pub mod dual;
pub mod error;
pub mod face;
pub mod generate;
pub mod geom;
pub mod hull;
pub mod io;
pub mod num;
pub mod oracle;
pub mod primal;
pub mod render;
pub mod segments;
pub mod solver;

pub use error::{Error, Result};
pub use geom::{Instance, Line, Point, Policy, RawInstance, RawLine, Side};
pub use num::Coord;
pub use solver::{solve, solve_instance, Backend, Solution, SolverConfig};
