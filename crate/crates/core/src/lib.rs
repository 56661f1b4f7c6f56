//! Wiring diagrams, oriented graphs with free loops, and wheeled props.
//!
//! The crate is organised bottom-up:
//!
//! * [`wiring`]: diagrams as perfect matchings of labelled endpoints, their
//!   operadic composition and the identity and permutation diagrams.
//! * [`graphs`]: flag-based oriented graphs, strict and loose isomorphism,
//!   corollas and graph substitution.
//! * [`translate`]: the two-way translation between graphs and diagrams.
//! * [`wprop`]: decorated graphs, the free wheeled prop on a signature and its
//!   monad structure, the abstract [`wprop::WheeledProp`] interface, the action
//!   of diagrams on any wheeled prop, and the axiom suite.
//! * [`endo`]: the endomorphism wheeled prop of `Q^d` (dense exact tensors).
//! * [`lie`]: multilinear Lie words, trace spaces and Killing forms.
//! * [`cli`]: the `wirecat` command line front end.
//!
//! Runnable walkthroughs live in `examples/`; try
//! `cargo run --example operad_composition`.

pub mod cli;
pub mod endo;
pub mod graphs;
pub mod label;
pub mod lie;
pub mod random;
pub mod translate;
pub mod wiring;
pub mod wprop;

use thiserror::Error;

/// Exact rational scalars.
pub type Q = num::BigRational;

/// Any error raised by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Label(#[from] label::LabelError),
    #[error(transparent)]
    Wiring(#[from] wiring::WiringError),
    #[error(transparent)]
    Graph(#[from] graphs::GraphError),
    #[error("InvalidGraph: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidGraph(Vec<graphs::GraphError>),
    #[error(transparent)]
    WProp(#[from] wprop::WPropError),
    #[error(transparent)]
    Endo(#[from] endo::EndoError),
    #[error(transparent)]
    Lie(#[from] lie::LieError),
    #[error("ParseError: {0}")]
    Json(#[from] serde_json::Error),
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Vec<graphs::GraphError>> for Error {
    fn from(errs: Vec<graphs::GraphError>) -> Self {
        Error::InvalidGraph(errs)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Parses `"p/q"` or `"n"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    s.trim().parse::<Q>().ok()
}

/// Builds an exact rational from a numerator and denominator.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
