//! Reachable Assignment on cycles.
//!
//! Agents sit on a cycle, each holding one object, and neighbours may swap
//! objects when both strictly prefer the exchange. [`solver::solve`] decides
//! in polynomial time whether a target assignment can be reached and
//! returns a witness sequence of swaps. [`oracle`] is a brute-force search
//! for small instances, and [`reduction`] turns Reachable Object on a
//! complete graph into Reachable Assignment.

pub mod dynamics;
pub mod generate;
pub mod geometry;
pub mod io;
pub mod model;
pub mod oracle;
pub mod reduction;
pub mod selection;
pub mod solver;
pub mod twosat;

pub use dynamics::{greedy_swap, verify_trace, GreedyFailure, GreedyOutcome, Swap, SwapTrace};
pub use geometry::{is_valid, theta, CandidateTable};
pub use model::{AgentId, Assignment, Instance, ModelError, ObjectId, Topology};
pub use oracle::{oracle_reachable_assignment, oracle_reachable_object, OracleAnswer};
pub use reduction::{reduce_ro_to_ra, RoInstance};
pub use selection::{Direction, Selection};
pub use solver::{solve, solve_observed, Solution, SolveError};
