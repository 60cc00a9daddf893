//! The spin ⊗ polarization pure state, its density matrices and the
//! entanglement entropy between photoelectron spin and photon polarization.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::amplitudes::{AmplitudeSet, XepecsCalculator};
use crate::error::{Error, Result};
use crate::fockspace::{Polarization, Spin, C64};
use crate::model::ModelParams;
use crate::polarization::EmissionGeometry;

/// Normalization `C = Σ|A|²` of the closed-form state with unit prefactors
/// `(sin θ, i, −cos θ)/3`.
pub const CLOSED_FORM_NORMALIZATION: f64 = 2.0 / 9.0;

/// Product-basis ordering `(U1, U2, D1, D2)`.
pub const PRODUCT_BASIS: [(Spin, Polarization); 4] = [
    (Spin::Up, Polarization::Lambda1),
    (Spin::Up, Polarization::Lambda2),
    (Spin::Down, Polarization::Lambda1),
    (Spin::Down, Polarization::Lambda2),
];

/// Normalized `Σ c(σ,λ) |σ⟩_A |λ⟩_B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntangledState {
    /// Indexed `[spin.index()][polarization.index()]`.
    pub coeffs: [[C64; 2]; 2],
    /// Photoelectron kinetic energy; `None` for the closed-form state.
    pub epsilon: Option<f64>,
    pub geometry: EmissionGeometry,
}

impl EntangledState {
    pub fn get(&self, spin: Spin, pol: Polarization) -> C64 {
        self.coeffs[spin.index()][pol.index()]
    }

    /// Coefficients in `(U1, U2, D1, D2)` order.
    pub fn as_vector(&self) -> [C64; 4] {
        PRODUCT_BASIS.map(|(s, p)| self.get(s, p))
    }

    pub fn norm(&self) -> f64 {
        self.as_vector().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &EntangledState) -> C64 {
        self.as_vector().iter().zip(other.as_vector()).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|`, insensitive to a global phase.
    pub fn fidelity(&self, other: &EntangledState) -> f64 {
        self.overlap(other).norm()
    }
}

/// Normalizes the amplitudes into a two-qubit state.
pub fn entangled_state(amps: &AmplitudeSet) -> Result<EntangledState> {
    let weight = amps.total_weight();
    if !(weight > 0.0 && weight.is_finite()) {
        return Err(Error::ZeroAmplitudes);
    }
    let scale = 1.0 / weight.sqrt();
    let mut coeffs = amps.values;
    coeffs.iter_mut().flatten().for_each(|c| *c *= scale);
    Ok(EntangledState { coeffs, epsilon: Some(amps.epsilon), geometry: amps.geometry })
}

fn same_angle(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d) < 1e-9
}

/// The analytic state `[sin θ |↑λ2⟩ + e^{iφ}(i |↓λ1⟩ − cos θ |↓λ2⟩)] / (3√C)`,
/// valid for `β1 = 90°`, `β2 = 180°`.
pub fn closed_form_state(geom: &EmissionGeometry) -> Result<EntangledState> {
    if !same_angle(geom.beta1, PI / 2.0) || !same_angle(geom.beta2, PI) {
        return Err(Error::InvalidGeometry(
            "closed form requires beta1 = 90° and beta2 = 180°".into(),
        ));
    }
    let prefactor = 1.0 / (3.0 * CLOSED_FORM_NORMALIZATION.sqrt());
    let phase = C64::from_polar(1.0, geom.phi);
    let (st, ct) = geom.theta.sin_cos();
    let mut coeffs = [[C64::default(); 2]; 2];
    coeffs[Spin::Up.index()][Polarization::Lambda2.index()] = C64::new(st * prefactor, 0.0);
    coeffs[Spin::Down.index()][Polarization::Lambda1.index()] = C64::new(0.0, prefactor) * phase;
    coeffs[Spin::Down.index()][Polarization::Lambda2.index()] = phase * (-ct * prefactor);
    Ok(EntangledState { coeffs, epsilon: None, geometry: *geom })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityBasis {
    /// `(U1, U2, D1, D2)`.
    SpinPolarization,
    /// `(U, D)`.
    Spin,
    /// `(1, 2)`.
    Polarization,
}

impl DensityBasis {
    pub fn labels(self) -> &'static [&'static str] {
        match self {
            DensityBasis::SpinPolarization => &["U1", "U2", "D1", "D2"],
            DensityBasis::Spin => &["U", "D"],
            DensityBasis::Polarization => &["1", "2"],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub basis: DensityBasis,
    pub entries: DMatrix<C64>,
}

/// Tolerance applied when checking Hermiticity, trace and positivity.
pub const DENSITY_TOL: f64 = 1e-8;
/// Eigenvalues below this are treated as exact zeros in `x log x`.
pub const EIGEN_CLIP: f64 = 1e-12;

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    pub fn hermitian_deviation(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.entries.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if self.entries.ncols() != n || self.basis.labels().len() != n {
            return Err(Error::InvalidDensityMatrix(format!("shape {}x{} does not match basis", n, self.entries.ncols())));
        }
        let dev = self.hermitian_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} differs from 1")));
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    fn partial_trace(&self, keep_spin: bool) -> Result<DensityMatrix> {
        if self.basis != DensityBasis::SpinPolarization {
            return Err(Error::InvalidDensityMatrix("partial trace needs the spin ⊗ polarization basis".into()));
        }
        // Row index = 2·spin + polarization.
        let mut out = DMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..2 {
                    let (i, j) = if keep_spin { (2 * a + k, 2 * b + k) } else { (2 * k + a, 2 * k + b) };
                    out[(a, b)] += self.entries[(i, j)];
                }
            }
        }
        let basis = if keep_spin { DensityBasis::Spin } else { DensityBasis::Polarization };
        Ok(DensityMatrix { basis, entries: out })
    }

    /// `ρ_A = Tr_B ρ` (photoelectron spin).
    pub fn trace_out_polarization(&self) -> Result<DensityMatrix> {
        self.partial_trace(true)
    }

    /// `ρ_B = Tr_A ρ` (photon polarization).
    pub fn trace_out_spin(&self) -> Result<DensityMatrix> {
        self.partial_trace(false)
    }
}

/// `|ψ⟩⟨ψ|` in the `(U1, U2, D1, D2)` basis.
pub fn full_density_matrix(state: &EntangledState) -> DensityMatrix {
    let v = state.as_vector();
    DensityMatrix { basis: DensityBasis::SpinPolarization, entries: DMatrix::from_fn(4, 4, |i, j| v[i] * v[j].conj()) }
}

/// `ρ_A[σ, σ'] = Σ_λ c(σ,λ) c*(σ',λ)`.
pub fn reduce_to_spin(state: &EntangledState) -> DensityMatrix {
    let entries = DMatrix::from_fn(2, 2, |a, b| {
        Polarization::ALL
            .iter()
            .map(|p| state.coeffs[a][p.index()] * state.coeffs[b][p.index()].conj())
            .sum()
    });
    DensityMatrix { basis: DensityBasis::Spin, entries }
}

/// `ρ_B[λ, λ'] = Σ_σ c(σ,λ) c*(σ,λ')`.
pub fn reduce_to_polarization(state: &EntangledState) -> DensityMatrix {
    let entries = DMatrix::from_fn(2, 2, |a, b| {
        Spin::ALL.iter().map(|s| state.coeffs[s.index()][a] * state.coeffs[s.index()][b].conj()).sum()
    });
    DensityMatrix { basis: DensityBasis::Polarization, entries }
}

/// `S = −Σ x log₂ x` over the eigenvalues of `rho`, in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    rho.validate()?;
    let entropy = rho
        .eigenvalues()
        .into_iter()
        .map(|x| x.clamp(0.0, 1.0))
        .filter(|&x| x > EIGEN_CLIP)
        .map(|x| -x * x.log2())
        .sum::<f64>();
    Ok(entropy.max(0.0))
}

/// Entanglement entropy of a state between spin and polarization.
pub fn entanglement_entropy(state: &EntangledState) -> Result<f64> {
    von_neumann_entropy(&reduce_to_spin(state))
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyCurve {
    pub thetas_deg: Vec<f64>,
    /// Entropy in bits, one value per angle.
    pub entropy: Vec<f64>,
}

/// Entanglement entropy versus emission angle `θ` (degrees), evaluated through
/// the full amplitude path. `template` supplies `φ`, `β1` and `β2`.
pub fn entropy_sweep(
    params: &ModelParams,
    template: &EmissionGeometry,
    thetas_deg: &[f64],
    epsilon: f64,
) -> Result<EntropyCurve> {
    let calc = XepecsCalculator::new(*params)?;
    entropy_sweep_with(&calc, template, thetas_deg, epsilon)
}

pub fn entropy_sweep_with(
    calc: &XepecsCalculator,
    template: &EmissionGeometry,
    thetas_deg: &[f64],
    epsilon: f64,
) -> Result<EntropyCurve> {
    let mut entropy = Vec::with_capacity(thetas_deg.len());
    for &theta in thetas_deg {
        let geom = EmissionGeometry { theta: theta.to_radians(), ..*template };
        geom.validate()?;
        let state = entangled_state(&calc.amplitudes(&geom, epsilon))?;
        entropy.push(entanglement_entropy(&state)?);
    }
    Ok(EntropyCurve { thetas_deg: thetas_deg.to_vec(), entropy })
}
