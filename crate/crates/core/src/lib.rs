//! A desk-scale workbench for algorithmic information theory: concrete
//! prefix-free machines, exact halting-probability and partition-function
//! truncations, Kraft–Chaitin code allocation, busy-beaver tables, and
//! instrumented oracle reductions whose query sizes are measured against
//! declared bounds.
//!
//! Everything is exact-rational or certified-interval arithmetic; nothing is
//! floating point. Quantities that are limits in the underlying theory are
//! represented here as certified truncations, and existential constants are
//! reported as horizon-relative measurements, never asserted as theorems.

pub mod bits;
pub mod complexity;
pub mod enumerate;
pub mod error;
pub mod exact;
pub mod fixtures;
pub mod interval;
pub mod kraft;
pub mod machine;
pub mod order;
pub mod reduction;
pub mod thermo;

pub use bits::BitString;
pub use error::{Error, Result};
pub use exact::{binary_prefix, ExactNumber};
pub use interval::NumberInterval;
pub use machine::{Machine, RunResult, TableMachine};
pub use order::OrderFunction;
