//! Independent closed-form and reduced-complexity solvers that
//! cross-validate the exact-diagonalization pipeline.

pub mod bessel;
pub mod freefermion;
pub mod longrange;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("time {t} precedes the epoch {t0}")]
    TimeBeforeEpoch { t: f64, t0: f64 },
    #[error("free-fermion solver supports only the vacuum initial state |00..0>")]
    NonVacuumInitialState,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("{0}")]
    Eigensolve(String),
}
