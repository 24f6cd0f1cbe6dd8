pub mod analysis;
pub mod components;
pub mod error;
pub mod executor;
pub mod function;
pub mod netlist;
pub mod ternary;

pub use error::{Budget, BudgetKind, Error, Result};
