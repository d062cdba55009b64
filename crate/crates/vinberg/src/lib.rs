//! File formats, reports and the command-line front end for `vinberg-core`.

pub mod cli;
pub mod commands;
pub mod input;
pub mod load;
pub mod report;
pub mod svg;

pub use commands::{Outcome, Output};
pub use input::{InputDocument, InputError};
pub use load::{load, LoadError, Loaded, Options};
