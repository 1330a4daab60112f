//! Command-line front end: experiment runs, regression tables, degree
//! selection, and the end-to-end reproduction directory.

pub mod commands;
pub mod grid;
pub mod io;
pub mod render;
pub mod svg;
