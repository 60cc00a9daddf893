//! Spin-resolved 1s XPS and polarization/spin-resolved XEPECS line spectra,
//! broadened with unit-area Lorentzians.

use std::f64::consts::PI;
use std::fmt;

use crate::amplitudes::{AmplitudeSet, XepecsCalculator};
use crate::angular::HalfInt;
use crate::error::{Error, Result};
use crate::fockspace::{Polarization, Spin};
use crate::model::{number_1s, ModelParams};
use crate::polarization::EmissionGeometry;

/// Default XPS kinetic-energy window (eV).
pub const XPS_GRID: (f64, f64, f64) = (5.0, 8.0, 0.005);
/// Half-width of the default XEPECS emission-energy window around the line (eV).
pub const XEPECS_HALF_WINDOW: f64 = 3.0;
pub const XEPECS_STEP: f64 = 0.005;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Channel {
    Xps(Spin),
    Xepecs(Spin, Polarization),
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Xps(s) => write!(f, "{s}"),
            Channel::Xepecs(s, p) => {
                let s = match s {
                    Spin::Up => 'U',
                    Spin::Down => 'D',
                };
                write!(f, "{s}{}", p.index() + 1)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub position: f64,
    pub weight: f64,
    /// Total angular momentum of the intermediate state behind the line.
    pub j: Option<HalfInt>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineSpectrum {
    pub channel: Channel,
    pub lines: Vec<Line>,
}

impl LineSpectrum {
    pub fn total_weight(&self) -> f64 {
        self.lines.iter().map(|l| l.weight).sum()
    }

    /// Concatenates the lines of two spectra, keeping `self`'s channel.
    pub fn merged(&self, other: &LineSpectrum) -> LineSpectrum {
        let mut lines = self.lines.clone();
        lines.extend_from_slice(&other.lines);
        LineSpectrum { channel: self.channel, lines }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSeries {
    pub channel: Channel,
    pub grid: Vec<f64>,
    pub intensity: Vec<f64>,
}

impl SpectrumSeries {
    /// Grid point and value of the largest intensity.
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.intensity
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(k, v)| (self.grid[k], *v))
    }
}

/// Unit-area Lorentzian with half width at half maximum `hwhm`.
pub fn lorentzian(x: f64, center: f64, hwhm: f64) -> f64 {
    hwhm / PI / ((x - center).powi(2) + hwhm * hwhm)
}

/// Inclusive grid `start, start + step, …, end`.
pub fn energy_grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !end.is_finite() || end < start {
        return Err(Error::GridNotAscending);
    }
    let n = ((end - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| start + k as f64 * step).collect())
}

pub fn broaden(lines: &LineSpectrum, width: f64, grid: &[f64]) -> Result<SpectrumSeries> {
    if width.is_nan() || width <= 0.0 {
        return Err(Error::NonPositiveWidth(width));
    }
    if grid.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
        return Err(Error::GridNotAscending);
    }
    let intensity = grid
        .iter()
        .map(|&x| lines.lines.iter().map(|l| l.weight * lorentzian(x, l.position, width)).sum())
        .collect();
    Ok(SpectrumSeries { channel: lines.channel, grid: grid.to_vec(), intensity })
}

/// XPS lines of one photoelectron spin: one per intermediate eigenstate, at
/// `ε_i = Ω + E_g − E_i`.
///
/// Weights are `|⟨i|c† s_σ a|g⟩|²` per 1s electron of the initial state, so
/// both spin channels together sum to one.
pub fn xps_lines_with(calc: &XepecsCalculator, spin: Spin) -> LineSpectrum {
    let model = &calc.model;
    let core_electrons = number_1s().element(&model.initial, &model.initial).re;
    let eig = model.intermediate(spin);
    let lines = calc
        .photoemission(spin)
        .iter()
        .enumerate()
        .map(|(i, elem)| Line {
            position: calc.resonance_energy(spin, i),
            weight: elem.norm_sqr() / core_electrons,
            j: Some(eig.j_labels[i]),
        })
        .collect();
    LineSpectrum { channel: Channel::Xps(spin), lines }
}

pub fn xps_lines(params: &ModelParams, spin: Spin) -> Result<LineSpectrum> {
    Ok(xps_lines_with(&XepecsCalculator::new(*params)?, spin))
}

/// Spin-resolved XPS broadened by `Γ_1s`.
pub fn xps_spectrum(calc: &XepecsCalculator, spin: Spin, grid: &[f64]) -> Result<SpectrumSeries> {
    broaden(&xps_lines_with(calc, spin), calc.params().gamma_1s, grid)
}

/// Kinetic energy of the strongest J=1 XPS line.
pub fn default_kinetic_energy(calc: &XepecsCalculator) -> f64 {
    xps_lines_with(calc, Spin::Down)
        .lines
        .into_iter()
        .filter(|l| l.j == Some(HalfInt::ONE))
        .max_by(|a, b| a.weight.total_cmp(&b.weight))
        .map(|l| l.position)
        .expect("the M=1 subspace always holds J=1 states")
}

/// Emitted photon energy `ω₀ = Ω + E_g − ε − E_f` fixed by energy conservation.
pub fn emission_energy(calc: &XepecsCalculator, epsilon: f64) -> f64 {
    let p = calc.params();
    p.omega + calc.model.initial_energy - epsilon - calc.model.final_energy()
}

/// Single emission line of weight `|A(σ,λ)|²` at `omega0`.
pub fn xepecs_lines(amps: &AmplitudeSet, omega0: f64, spin: Spin, pol: Polarization) -> LineSpectrum {
    LineSpectrum {
        channel: Channel::Xepecs(spin, pol),
        lines: vec![Line { position: omega0, weight: amps.get(spin, pol).norm_sqr(), j: None }],
    }
}

pub fn default_emission_grid(calc: &XepecsCalculator, epsilon: f64) -> Vec<f64> {
    let w0 = emission_energy(calc, epsilon);
    energy_grid(w0 - XEPECS_HALF_WINDOW, w0 + XEPECS_HALF_WINDOW, XEPECS_STEP).expect("valid default grid")
}

/// All four XEPECS channels in `(U1, U2, D1, D2)` order.
pub fn xepecs_spectra_with(
    calc: &XepecsCalculator,
    geom: &EmissionGeometry,
    epsilon: f64,
    grid: &[f64],
) -> Result<Vec<SpectrumSeries>> {
    geom.validate()?;
    let amps = calc.amplitudes(geom, epsilon);
    let w0 = emission_energy(calc, epsilon);
    let mut out = Vec::with_capacity(4);
    for spin in Spin::ALL {
        for pol in Polarization::ALL {
            out.push(broaden(&xepecs_lines(&amps, w0, spin, pol), calc.params().gamma, grid)?);
        }
    }
    Ok(out)
}

pub fn xepecs_spectrum(
    params: &ModelParams,
    geom: &EmissionGeometry,
    epsilon: f64,
    channel: (Spin, Polarization),
    grid: &[f64],
) -> Result<SpectrumSeries> {
    geom.validate()?;
    let calc = XepecsCalculator::new(*params)?;
    let amps = calc.amplitudes(geom, epsilon);
    let (spin, pol) = channel;
    broaden(&xepecs_lines(&amps, emission_energy(&calc, epsilon), spin, pol), params.gamma, grid)
}
