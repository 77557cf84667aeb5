//! Library side of the `knaf` command: problem files, dispatch, fixtures and
//! report formatting.

pub mod expr;
pub mod fixtures;
pub mod problem;
pub mod report;
pub mod run;
