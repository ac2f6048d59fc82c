//! Choice procedures over algebraic menu representations.

pub mod canonical;
pub mod enumeration;
pub mod guarantee;
pub mod procedures;
pub mod properties;
pub mod rationality;
pub mod replication;
pub mod schema;
pub mod term;
pub mod universe;
