//! Scenario-driven experiments producing plot-ready result tables.

mod runs;
mod scenario;
mod table;
mod units;
mod validate;

pub use runs::*;
pub use scenario::*;
pub use table::*;
pub use units::*;
pub use validate::*;
