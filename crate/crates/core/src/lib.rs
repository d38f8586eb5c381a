pub mod adcore;
pub mod catalog;
pub mod classify;
pub mod conformal;
pub mod error;
pub mod geometry;
pub mod obata;
pub mod weighted;

pub use error::{Result, SmmsError};
