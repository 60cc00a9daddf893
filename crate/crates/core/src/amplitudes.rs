//! Photoemission and dipole-emission matrix elements, and the second-order
//! XEPECS coefficients
//!
//! ```text
//! A(σ, λ; ε) = Σ_i ⟨f_σλ|M_ph|i_σ⟩⟨i_σ|c†_εσ s_σ a|g⟩ / (Ω + E_g − E_i − ε + iΓ_1s)
//! ```
//!
//! The radial dipole integral and all interaction prefactors are set to 1.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fockspace::{FockState, Ladder, ManyBodyVector, Mode, Operator, Polarization, Spin, SpinOrbital, C64};
use crate::model::{EigenSystem, ModelParams, SpModel, Subspace, SubspaceLabel};
use crate::polarization::{polarization_vector, spherical_component, EmissionGeometry};

/// `1/√3`, the angular factor of `⟨Y₀₀|r̂_q|Y₁ₘ⟩`.
pub(crate) const FRAC_1_SQRT_3: f64 = 0.577_350_269_189_625_8;

/// `c†_σ s_σ a`: absorb the incident photon and eject a 1s electron of spin σ.
pub fn photoemission_operator(spin: Spin) -> Operator {
    Operator::product(
        1.0,
        vec![
            Ladder::Create(Mode::Photoelectron(spin)),
            Ladder::Annihilate(SpinOrbital::s(spin).into()),
            Ladder::Annihilate(Mode::Incident),
        ],
    )
}

/// `⟨i|c†_σ s_σ a|g⟩` for every eigenstate `i` of the intermediate subspace
/// matching `spin`.
pub fn photoemission_elements(g: &ManyBodyVector, eig: &EigenSystem, spin: Spin) -> Result<Vec<C64>> {
    if eig.subspace.label.photoelectron() != Some(spin) {
        return Err(Error::SpinSubspaceMismatch { spin: spin.to_string(), subspace: eig.subspace.label.to_string() });
    }
    let excited = photoemission_operator(spin).apply(g);
    Ok((0..eig.len()).map(|i| eig.state(i).inner(&excited)).collect())
}

/// Angular dipole integrals `⟨1s|e_λ·r|2p_m⟩ = e_m/√3` for `m = −1, 0, 1`,
/// with `e_m` the spherical components of the polarization vector.
pub fn dipole_integrals(geom: &EmissionGeometry, pol: Polarization) -> [C64; 3] {
    let e = polarization_vector(geom, pol);
    [-1i8, 0, 1].map(|m| spherical_component(&e, m) * FRAC_1_SQRT_3)
}

/// `M_ph` restricted to one polarization mode: `Σ_{m,σ} ⟨s|e_λ·r|p_m⟩ b†_λ s†_σ p_mσ`.
pub fn emission_operator(geom: &EmissionGeometry, pol: Polarization) -> Operator {
    let integrals = dipole_integrals(geom, pol);
    let mut op = Operator::zero();
    for (k, m) in (-1i8..=1).enumerate() {
        for spin in Spin::ALL {
            op += Operator::product(
                integrals[k],
                vec![
                    Ladder::Create(Mode::Emitted(pol)),
                    Ladder::Create(SpinOrbital::s(spin).into()),
                    Ladder::Annihilate(SpinOrbital::p(m, spin).into()),
                ],
            );
        }
    }
    op
}

/// `|f_σλ⟩ = s†↑ s†↓ c†_σ b†_λ |0⟩`.
pub fn final_state(spin: Spin, pol: Polarization) -> ManyBodyVector {
    let state = FockState::from_modes([
        SpinOrbital::s(Spin::Up).into(),
        SpinOrbital::s(Spin::Down).into(),
        Mode::Photoelectron(spin),
        Mode::Emitted(pol),
    ])
    .expect("distinct modes");
    ManyBodyVector::basis(state)
}

/// Dipole matrix between final states `(f↑λ1, f↑λ2, f↓λ1, f↓λ2)` and the
/// intermediate bases `(M=0 | M=1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DipoleBlock {
    /// Full 4×7 matrix including the off-diagonal spin blocks.
    pub full: DMatrix<C64>,
}

impl DipoleBlock {
    /// `M_ph^(↑λ)`: rows λ1, λ2 over the M=0 basis.
    pub fn up_block(&self) -> DMatrix<C64> {
        self.full.view((0, 0), (2, 4)).into_owned()
    }

    /// `M_ph^(↓λ)`: rows λ1, λ2 over the M=1 basis.
    pub fn down_block(&self) -> DMatrix<C64> {
        self.full.view((2, 4), (2, 3)).into_owned()
    }

    pub fn block(&self, spin: Spin) -> DMatrix<C64> {
        match spin {
            Spin::Up => self.up_block(),
            Spin::Down => self.down_block(),
        }
    }

    /// Largest entry of the two spin-flip blocks.
    pub fn cross_block_max(&self) -> f64 {
        let a = self.full.view((0, 4), (2, 3)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let b = self.full.view((2, 0), (2, 4)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        a.max(b)
    }
}

pub fn dipole_block(geom: &EmissionGeometry) -> DipoleBlock {
    let columns: Vec<FockState> = [SubspaceLabel::M0, SubspaceLabel::M1]
        .into_iter()
        .flat_map(|l| Subspace::new(l).basis)
        .collect();
    let mut full = DMatrix::zeros(4, columns.len());
    for (row, (spin, pol)) in Spin::ALL
        .into_iter()
        .flat_map(|s| Polarization::ALL.map(|p| (s, p)))
        .enumerate()
    {
        let op = emission_operator(geom, pol);
        let f = final_state(spin, pol);
        for (col, basis) in columns.iter().enumerate() {
            full[(row, col)] = op.element(&f, &ManyBodyVector::basis(*basis));
        }
    }
    DipoleBlock { full }
}

/// The coefficients `A(σ, λ)` at one kinetic energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeSet {
    pub epsilon: f64,
    pub geometry: EmissionGeometry,
    /// Indexed `[spin.index()][polarization.index()]`.
    pub values: [[C64; 2]; 2],
}

impl AmplitudeSet {
    pub fn get(&self, spin: Spin, pol: Polarization) -> C64 {
        self.values[spin.index()][pol.index()]
    }

    /// `C = Σ |A(σ, λ)|²`.
    pub fn total_weight(&self) -> f64 {
        self.values.iter().flatten().map(|a| a.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: C64) -> AmplitudeSet {
        let mut out = *self;
        out.values.iter_mut().flatten().for_each(|a| *a *= factor);
        out
    }
}

/// Caches the eigensystems and photoemission elements for one parameter set
/// so amplitudes can be evaluated cheaply over many geometries and energies.
#[derive(Clone, Debug)]
pub struct XepecsCalculator {
    pub model: SpModel,
    photoemission: [Vec<C64>; 2],
}

impl XepecsCalculator {
    pub fn new(params: ModelParams) -> Result<XepecsCalculator> {
        let model = SpModel::new(params)?;
        let up = photoemission_elements(&model.initial, &model.m0, Spin::Up)?;
        let down = photoemission_elements(&model.initial, &model.m1, Spin::Down)?;
        Ok(XepecsCalculator { model, photoemission: [up, down] })
    }

    pub fn params(&self) -> &ModelParams {
        &self.model.params
    }

    pub fn photoemission(&self, spin: Spin) -> &[C64] {
        &self.photoemission[spin.index()]
    }

    /// `Ω + E_g − E_i`, the kinetic energy at which intermediate state `i` resonates.
    pub fn resonance_energy(&self, spin: Spin, i: usize) -> f64 {
        let p = self.params();
        p.omega + self.model.initial_energy - self.model.intermediate(spin).energies[i]
    }

    /// Per-eigenstate contributions to `A(σ, λ; ε)`, in eigensystem order.
    pub fn amplitude_terms(&self, dipoles: &DipoleBlock, spin: Spin, pol: Polarization, epsilon: f64) -> Vec<C64> {
        let eig = self.model.intermediate(spin);
        let row = dipoles.block(spin).row(pol.index()).into_owned();
        let gamma = self.params().gamma_1s;
        (0..eig.len())
            .map(|i| {
                let emission = (&row * eig.vectors.column(i))[(0, 0)];
                let denominator = C64::new(self.resonance_energy(spin, i) - epsilon, gamma);
                emission * self.photoemission[spin.index()][i] / denominator
            })
            .collect()
    }

    pub fn amplitudes(&self, geom: &EmissionGeometry, epsilon: f64) -> AmplitudeSet {
        let dipoles = dipole_block(geom);
        let mut values = [[C64::default(); 2]; 2];
        for spin in Spin::ALL {
            for pol in Polarization::ALL {
                values[spin.index()][pol.index()] = self.amplitude_terms(&dipoles, spin, pol, epsilon).into_iter().sum();
            }
        }
        AmplitudeSet { epsilon, geometry: *geom, values }
    }
}

pub fn xepecs_amplitudes(params: &ModelParams, geom: &EmissionGeometry, epsilon: f64) -> Result<AmplitudeSet> {
    geom.validate()?;
    Ok(XepecsCalculator::new(*params)?.amplitudes(geom, epsilon))
}
