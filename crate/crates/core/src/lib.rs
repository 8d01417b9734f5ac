//! Exact computations for affine Springer fibers of split regular elements in `gl(n)`
//! over `F_q((ε))`: fundamental-domain point counts, weighted orbital integrals, the
//! `(G,M)`-family calculus relating them, and rational generating-series fits.

pub mod rational;
pub mod series;
pub mod asf_engine;
pub mod fq;
pub mod gm_calculus;
pub mod transition;
pub mod typea_roots;
pub mod valuation;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("computation error: {0}")]
    Compute(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
