//! File formats, the remote slide generator and the `vapokit` command line
//! on top of [`vapokit_core`].

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod remote;
pub mod report;

pub use error::{Error, Result};
