use thiserror::Error;

/// Errors raised by the constructions and checks in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("group table is not a group: {0}")]
    NotAGroup(String),

    #[error("generators do not generate the group; unreached elements: {unreached:?}")]
    NotGenerating { unreached: Vec<usize> },

    #[error("size cap exceeded: {what} needs {} but the cap is {cap}", show_needed(*needed))]
    CapExceeded {
        what: &'static str,
        /// Saturates at `u128::MAX`.
        needed: u128,
        cap: u128,
    },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("no wall structure on a level without a base")]
    NoWallStructure,

    #[error("word is not in the commutator subgroup")]
    NotInKernel,

    #[error("rewriting failed: {0}")]
    Rewriting(String),

    #[error("graph is not regular: {0}")]
    NotRegular(String),

    #[error("graph has {vertices} vertices; exact Cheeger search supports at most {max}, use the spectral estimator")]
    TooLargeForExact { vertices: usize, max: usize },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("not a metric: {0}")]
    NotAMetric(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

fn show_needed(needed: u128) -> String {
    if needed == u128::MAX {
        "at least 2^128".into()
    } else {
        needed.to_string()
    }
}

pub type Result<T> = std::result::Result<T, Error>;
