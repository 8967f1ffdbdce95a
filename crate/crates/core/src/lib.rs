//! Binary constraint networks over generalized staircase constraints:
//! classification, constraint algebra, optimal arc consistency and a
//! direct solver for down staircase networks.

pub mod acids;
pub mod algebra;
pub mod classify;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod model;
pub mod network;
pub mod ops;
pub mod oracle;
pub mod solver;

pub use error::{Error, Result};
pub use model::{
    Assignment, CspInstance, Direction, Domain, Grid, RowConvexConstraint, SupportInterval, VarId,
};
pub use ops::OpCount;
