//! Scalar profiles and their exact derivative jets.

pub mod expr;
pub mod interval;
pub mod jet;
pub mod parse;
pub mod profile;

pub use expr::{Expr, Func};
pub use interval::{sample_grid, GridSpec, Interval, DEFAULT_CAP};
pub use jet::{Jet2, Jet2D, JetScalar};
pub use parse::parse_expr;
pub use profile::{eval_jet, finite_diff_jet, JetFn, Profile1D};
