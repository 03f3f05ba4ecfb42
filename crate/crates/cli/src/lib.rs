//! Configuration, scenario orchestration, and data export for the `fanoring`
//! command-line tool.
//!
//! Four scenarios cover the response chain: `metamolecule` (Fano
//! polarizability of one MNP-QD pair), `bare-ring` and `qd-ring` (effective
//! permeability of the nanoring metamaterial), and `nonlinear` (saturable
//! polarizability from the master-equation steady state). Every physical
//! parameter defaults to the reference silver/CdSe-like parameter set, so an
//! empty config document reproduces the shipped figure data.

pub mod config;
pub mod output;
pub mod scenario;

use std::fmt;

/// Top-level error, classified for process exit codes: configuration
/// problems exit 2, solver failures 3, I/O failures 4.
#[derive(Debug)]
pub enum Error {
    Config(String),
    Solver(fanoring::Error),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::Solver(e) => write!(f, "solver error: {e}"),
            Error::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Solver(_) => 3,
            Error::Io(_) => 4,
        }
    }
}

impl From<fanoring::Error> for Error {
    fn from(e: fanoring::Error) -> Self {
        Error::Solver(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
