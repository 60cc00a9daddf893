//! Emission geometry: the outgoing photon direction, its two linear
//! polarization vectors and their spherical components.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fockspace::Polarization;

pub type Vec3 = [f64; 3];

/// Direction `(θ, φ)` of the emitted photon and the angles `β1`, `β2` of its
/// two linear polarization vectors in the `(e_θ, e_φ)` plane. All radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmissionGeometry {
    pub theta: f64,
    pub phi: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl Default for EmissionGeometry {
    fn default() -> Self {
        EmissionGeometry { theta: PI / 2.0, phi: 0.0, beta1: PI / 2.0, beta2: PI }
    }
}

impl EmissionGeometry {
    pub fn new(theta: f64, phi: f64, beta1: f64, beta2: f64) -> Result<Self> {
        let geom = EmissionGeometry { theta, phi, beta1, beta2 };
        geom.validate()?;
        Ok(geom)
    }

    /// Default polarization pair (`β1 = 90°`, `β2 = 180°`) at the given direction.
    pub fn with_direction(theta: f64, phi: f64) -> Self {
        EmissionGeometry { theta, phi, ..EmissionGeometry::default() }
    }

    pub fn from_degrees(theta: f64, phi: f64, beta1: f64, beta2: f64) -> Result<Self> {
        EmissionGeometry::new(theta.to_radians(), phi.to_radians(), beta1.to_radians(), beta2.to_radians())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("theta", self.theta), ("phi", self.phi), ("beta1", self.beta1), ("beta2", self.beta2)] {
            if !v.is_finite() {
                return Err(Error::InvalidGeometry(format!("{name} is not finite")));
            }
        }
        if !(0.0..=PI + 1e-12).contains(&self.theta) {
            return Err(Error::InvalidGeometry(format!(
                "theta = {}° outside [0°, 180°]",
                self.theta.to_degrees()
            )));
        }
        // Linearly dependent when the two angles differ by a multiple of π.
        if (self.beta1 - self.beta2).sin().abs() < 1e-9 {
            return Err(Error::InvalidGeometry("beta1 and beta2 coincide modulo 180°".into()));
        }
        Ok(())
    }

    pub fn beta(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::Lambda1 => self.beta1,
            Polarization::Lambda2 => self.beta2,
        }
    }
}

/// Unit vectors `(e_θ, e_φ, k̂)` for the emission direction.
pub fn basis_vectors(geom: &EmissionGeometry) -> (Vec3, Vec3, Vec3) {
    let (st, ct) = geom.theta.sin_cos();
    let (sp, cp) = geom.phi.sin_cos();
    let e_theta = [ct * cp, ct * sp, -st];
    let e_phi = [-sp, cp, 0.0];
    let k_hat = [st * cp, st * sp, ct];
    (e_theta, e_phi, k_hat)
}

/// `e_λ = cos β · e_θ + sin β · e_φ`.
pub fn polarization_vector(geom: &EmissionGeometry, pol: Polarization) -> Vec3 {
    let (e_theta, e_phi, _) = basis_vectors(geom);
    let (sb, cb) = geom.beta(pol).sin_cos();
    [
        cb * e_theta[0] + sb * e_phi[0],
        cb * e_theta[1] + sb * e_phi[1],
        cb * e_theta[2] + sb * e_phi[2],
    ]
}

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Spherical component `e_q = ê_q · e` with `ê₀ = ẑ`, `ê±1 = ∓(x̂ ± iŷ)/√2`.
pub fn spherical_component(v: &Vec3, q: i8) -> Complex64 {
    match q {
        0 => Complex64::new(v[2], 0.0),
        1 => -Complex64::new(v[0], v[1]) * FRAC_1_SQRT_2,
        -1 => Complex64::new(v[0], -v[1]) * FRAC_1_SQRT_2,
        _ => panic!("spherical component index out of range: {q}"),
    }
}

/// Projection `⟨ê_q|e⟩ = ê_q* · e` of a real vector onto a spherical unit vector.
pub fn spherical_projection(v: &Vec3, q: i8) -> Complex64 {
    match q {
        0 => Complex64::new(v[2], 0.0),
        1 => -Complex64::new(v[0], -v[1]) * FRAC_1_SQRT_2,
        -1 => Complex64::new(v[0], v[1]) * FRAC_1_SQRT_2,
        _ => panic!("spherical component index out of range: {q}"),
    }
}

/// `α₀` and `α₋₁` for both polarization modes, indexed by [`Polarization::index`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationCoeffs {
    pub alpha0: [Complex64; 2],
    pub alpha_m1: [Complex64; 2],
}

impl PolarizationCoeffs {
    pub fn alpha0(&self, pol: Polarization) -> Complex64 {
        self.alpha0[pol.index()]
    }

    pub fn alpha_m1(&self, pol: Polarization) -> Complex64 {
        self.alpha_m1[pol.index()]
    }
}

/// Closed forms `α₀ = −cos β sin θ`, `α₋₁ = (cos β cos θ + i sin β) e^{iφ}/√2`.
pub fn alpha_coeffs(geom: &EmissionGeometry) -> PolarizationCoeffs {
    let (st, ct) = geom.theta.sin_cos();
    let phase = Complex64::from_polar(1.0, geom.phi);
    let mut out = PolarizationCoeffs { alpha0: [Complex64::default(); 2], alpha_m1: [Complex64::default(); 2] };
    for pol in Polarization::ALL {
        let (sb, cb) = geom.beta(pol).sin_cos();
        out.alpha0[pol.index()] = Complex64::new(-cb * st, 0.0);
        out.alpha_m1[pol.index()] = Complex64::new(cb * ct, sb) * phase * FRAC_1_SQRT_2;
    }
    out
}

/// The same coefficients obtained by projecting each polarization vector onto
/// `ê₀` and `ê₋₁`.
pub fn alpha_coeffs_by_projection(geom: &EmissionGeometry) -> PolarizationCoeffs {
    let mut out = PolarizationCoeffs { alpha0: [Complex64::default(); 2], alpha_m1: [Complex64::default(); 2] };
    for pol in Polarization::ALL {
        let e = polarization_vector(geom, pol);
        out.alpha0[pol.index()] = spherical_projection(&e, 0);
        out.alpha_m1[pol.index()] = spherical_projection(&e, -1);
    }
    out
}
