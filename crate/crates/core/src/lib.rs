//! Spin-polarization entanglement between photoelectrons and emitted X-ray
//! photons in 2p→1s X-ray emission / photoemission coincidence spectroscopy
//! (XEPECS), computed in a minimal sp atomic model.
//!
//! The pipeline is: [`model`] builds and diagonalizes the sp Hamiltonian,
//! [`amplitudes`] combines photoemission and dipole matrix elements into the
//! second-order coefficients `A(σ, λ; ε)`, and [`entanglement`] turns those
//! into density matrices and von Neumann entropies. [`spectra`] produces the
//! spin-resolved XPS and XEPECS line shapes.

pub mod amplitudes;
pub mod angular;
pub mod entanglement;
mod error;
pub mod fockspace;
pub mod model;
pub mod polarization;
pub mod spectra;

pub use amplitudes::{xepecs_amplitudes, AmplitudeSet, DipoleBlock, XepecsCalculator};
pub use angular::{cg, coupled_state, CoupledLabel, HalfInt};
pub use entanglement::{
    closed_form_state, entangled_state, entropy_sweep, full_density_matrix, reduce_to_spin, von_neumann_entropy,
    DensityMatrix, EntangledState, EntropyCurve,
};
pub use error::{Error, Result};
pub use fockspace::{FockState, ManyBodyVector, Polarization, Spin, SpinOrbital, C64};
pub use model::{EigenSystem, ModelParams, SpModel, Subspace, SubspaceLabel};
pub use polarization::{alpha_coeffs, EmissionGeometry, PolarizationCoeffs};
pub use spectra::{broaden, xepecs_spectrum, xps_lines, Channel, LineSpectrum, SpectrumSeries};
