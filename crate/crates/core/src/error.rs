use thiserror::Error;

use crate::angular::HalfInt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid coupling ({l} x {s} -> {j}, m = {m}): triangle or projection rule violated")]
    InvalidCoupling {
        l: HalfInt,
        s: HalfInt,
        j: HalfInt,
        m: HalfInt,
    },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("<J^2> = {value} does not correspond to any j(j+1)")]
    UnassignableJ { value: f64 },
    #[error("initial state is not an eigenvector of the initial-subspace Hamiltonian (residual {residual:e})")]
    NotEigenvector { residual: f64 },
    #[error("photoelectron spin {spin} does not match subspace {subspace}")]
    SpinSubspaceMismatch { spin: String, subspace: String },
    #[error("all XEPECS amplitudes vanish; the entangled state is undefined")]
    ZeroAmplitudes,
    #[error("line width must be positive, got {0}")]
    NonPositiveWidth(f64),
    #[error("energy grid must be strictly ascending")]
    GridNotAscending,
    #[error("invalid model parameter: {0}")]
    InvalidParams(String),
    #[error("invalid emission geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
}
