//! File formats and subcommands behind the `ccc2d` binary.

pub mod commands;
pub mod family_file;

pub use family_file::{FamilyFile, FormatError, Provenance};
