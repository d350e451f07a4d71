//! Input states of the probe and the spectra measured after the cell.
//!
//! Spectra are stationary and normalised so that a vacuum quadrature has
//! spectral value 1. For the two-beam difference variable
//! `Z(θ, φ) = X^θ(t + τ) − Y^φ(t)` the spectrum 𝒜 is half the raw variance,
//! which puts two independent vacua at 𝒜 = 1 and makes `I < 1` the
//! inseparability threshold.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::langevin::{noise_floor, noise_floor_with_attenuation};
use crate::medium::MediumParams;

const UNCERTAINTY_TOLERANCE: f64 = 1e-12;
const IMAGINARY_TOLERANCE: f64 = 1e-10;

/// Optical depth above which the low-absorption approximation is flagged.
pub const LOW_ABSORPTION_LIMIT: f64 = 0.1;

/// Sideband frequencies (rad/s from the carrier), strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::invalid("grid", 0.0, "needs at least one frequency"));
        }
        if let Some(&bad) = omegas.iter().find(|w| !w.is_finite()) {
            return Err(Error::invalid("grid", bad, "frequencies must be finite"));
        }
        if let Some(pair) = omegas.windows(2).find(|p| p[1] <= p[0]) {
            return Err(Error::invalid("grid", pair[1], "frequencies must be strictly increasing"));
        }
        Ok(FrequencyGrid { omegas })
    }

    /// `points` evenly spaced values from `min` to `max` inclusive.
    pub fn linspace(min: f64, max: f64, points: usize) -> Result<Self> {
        match points {
            0 => Err(Error::invalid("points", 0.0, "needs at least one point")),
            1 if min == max => Self::new(alloc::vec![min]),
            1 => Err(Error::invalid("points", 1.0, "a single point needs min == max")),
            _ => {
                let step = (max - min) / (points - 1) as f64;
                Self::new((0..points).map(|k| min + step * k as f64).collect())
            }
        }
    }

    pub fn single(omega: f64) -> Result<Self> {
        Self::new(alloc::vec![omega])
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }
}

/// Frequency dependence of the input nonclassicality: a weight in [0, 1]
/// interpolating between vacuum (0) and the nominal state (1).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum FrequencyProfile {
    #[default]
    Flat,
    /// `1 / (1 + (ω / half_width)²)`, as from a cavity-enhanced source.
    Lorentzian { half_width: f64 },
}

impl FrequencyProfile {
    pub fn weight(&self, omega: f64) -> f64 {
        match *self {
            FrequencyProfile::Flat => 1.0,
            FrequencyProfile::Lorentzian { half_width } => {
                let x = omega / half_width;
                1.0 / (1.0 + x * x)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            FrequencyProfile::Flat => Ok(()),
            FrequencyProfile::Lorentzian { half_width } if half_width > 0.0 && half_width.is_finite() => Ok(()),
            FrequencyProfile::Lorentzian { half_width } => Err(Error::invalid(
                "half_width",
                half_width,
                "must be finite and positive",
            )),
        }
    }
}

/// A single squeezed probe beam.
///
/// `s_min` and `s_max` are the spectra of the squeezed and anti-squeezed
/// quadratures; `theta` is the interrogated quadrature measured from the
/// squeezed one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedInput {
    s_min: f64,
    s_max: f64,
    theta: f64,
    profile: FrequencyProfile,
}

impl SqueezedInput {
    pub fn new(s_min: f64, s_max: f64, theta: f64) -> Result<Self> {
        if !(s_min > 0.0 && s_min <= 1.0) {
            return Err(Error::invalid("s_min", s_min, "must lie in (0, 1]"));
        }
        if !(s_max >= 1.0 && s_max.is_finite()) {
            return Err(Error::invalid("s_max", s_max, "must be finite and at least 1"));
        }
        if s_min * s_max < 1.0 - UNCERTAINTY_TOLERANCE {
            return Err(Error::invalid(
                "s_max",
                s_max,
                "s_min * s_max violates the uncertainty bound",
            ));
        }
        if !theta.is_finite() {
            return Err(Error::invalid("theta", theta, "must be finite"));
        }
        Ok(SqueezedInput {
            s_min,
            s_max,
            theta,
            profile: FrequencyProfile::Flat,
        })
    }

    /// Minimum-uncertainty state with squeezed spectrum `s_min`.
    pub fn pure(s_min: f64, theta: f64) -> Result<Self> {
        Self::new(s_min, 1.0 / s_min, theta)
    }

    pub fn with_profile(mut self, profile: FrequencyProfile) -> Result<Self> {
        profile.validate()?;
        self.profile = profile;
        Ok(self)
    }

    /// The same state interrogated at `theta + delta`.
    pub fn rotated(mut self, delta: f64) -> Self {
        self.theta += delta;
        self
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }
    pub fn s_max(&self) -> f64 {
        self.s_max
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn profile(&self) -> FrequencyProfile {
        self.profile
    }

    /// Input spectrum S_in(ω) of the interrogated quadrature.
    pub fn spectrum(&self, omega: f64) -> f64 {
        let (s, c) = self.theta.sin_cos();
        let nominal = self.s_min * c * c + self.s_max * s * s;
        1.0 + self.profile.weight(omega) * (nominal - 1.0)
    }
}

/// Symmetrised second moments of the two beams' quadratures at one sideband,
/// each the coefficient of `δ(ω + ω′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputMoments {
    pub xx: f64,
    pub xy: Complex64,
    pub yx: Complex64,
    pub yy: f64,
}

/// A pair of beams X (sent through the cell) and Y (sent through vacuum),
/// modelled as a two-mode squeezed vacuum with optional uncorrelated excess
/// noise on each beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntangledInput {
    r: f64,
    excess_noise: f64,
    profile: FrequencyProfile,
}

impl EntangledInput {
    pub fn new(r: f64, excess_noise: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::invalid("r", r, "must be finite and nonnegative"));
        }
        if !(excess_noise >= 0.0 && excess_noise.is_finite()) {
            return Err(Error::invalid("excess_noise", excess_noise, "must be finite and nonnegative"));
        }
        Ok(EntangledInput {
            r,
            excess_noise,
            profile: FrequencyProfile::Flat,
        })
    }

    pub fn with_profile(mut self, profile: FrequencyProfile) -> Result<Self> {
        profile.validate()?;
        self.profile = profile;
        Ok(self)
    }

    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn excess_noise(&self) -> f64 {
        self.excess_noise
    }
    pub fn profile(&self) -> FrequencyProfile {
        self.profile
    }

    /// Variance of either beam alone, `cosh 2r + excess`.
    pub fn single_beam_variance(&self, omega: f64) -> f64 {
        (2.0 * self.r * self.profile.weight(omega)).cosh() + self.excess_noise
    }

    pub fn moments(&self, theta: f64, phi: f64, omega: f64) -> InputMoments {
        let r = self.r * self.profile.weight(omega);
        let variance = (2.0 * r).cosh() + self.excess_noise;
        let correlation = Complex64::new((2.0 * r).sinh() * (theta + phi).cos(), 0.0);
        InputMoments {
            xx: variance,
            xy: correlation,
            yx: correlation,
            yy: variance,
        }
    }

    /// Normalised input difference spectrum 𝒜_in(θ, φ, ω).
    pub fn difference_spectrum(&self, theta: f64, phi: f64, omega: f64) -> f64 {
        let m = self.moments(theta, phi, omega);
        (m.xx + m.yy - (m.xy + m.yx).re) / 2.0
    }

    /// Input Duan measure for the pair (θ, φ), (θ + π/2, φ − π/2).
    pub fn duan(&self, theta: f64, phi: f64, omega: f64) -> f64 {
        (self.difference_spectrum(theta, phi, omega)
            * self.difference_spectrum(theta + FRAC_PI_2, phi - FRAC_PI_2, omega))
        .sqrt()
    }
}

/// Symmetric two-mode squeezed vacuum whose input Duan measure is
/// `target_duan` at every frequency: `r = −ln(target) / 2`.
pub fn make_epr_input(target_duan: f64) -> Result<EntangledInput> {
    if !(target_duan > 0.0 && target_duan <= 1.0) {
        return Err(Error::invalid("target_duan", target_duan, "must lie in (0, 1]"));
    }
    EntangledInput::new(-target_duan.ln() / 2.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpectrumKind {
    Squeezing,
    Entanglement,
    Duan,
    NoiseFloor,
    Transmission,
}

impl SpectrumKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumKind::Squeezing => "squeezing",
            SpectrumKind::Entanglement => "entanglement",
            SpectrumKind::Duan => "duan",
            SpectrumKind::NoiseFloor => "noise_floor",
            SpectrumKind::Transmission => "transmission",
        }
    }
}

/// A real, nonnegative spectrum sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumCurve {
    grid: FrequencyGrid,
    values: Vec<f64>,
    kind: SpectrumKind,
}

impl SpectrumCurve {
    pub fn new(grid: FrequencyGrid, values: Vec<f64>, kind: SpectrumKind) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(&bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::invalid("spectrum", bad, "values must be finite and nonnegative"));
        }
        Ok(SpectrumCurve { grid, values, kind })
    }

    fn evaluate<F>(grid: &FrequencyGrid, kind: SpectrumKind, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let values = grid.omegas().iter().map(|&w| f(w)).collect::<Result<Vec<_>>>()?;
        Self::new(grid.clone(), values, kind)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    /// `(ω, value)` pairs.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.grid.omegas().iter().copied().zip(self.values.iter().copied())
    }
}

/// Power transmission `e^{−2 Re Λ(ω) L}`.
pub fn transmission(params: &MediumParams, grid: &FrequencyGrid) -> Result<SpectrumCurve> {
    SpectrumCurve::evaluate(grid, SpectrumKind::Transmission, |w| {
        Ok((-2.0 * params.lambda(w).re * params.length()).exp())
    })
}

pub fn noise_floor_curve(params: &MediumParams, grid: &FrequencyGrid) -> Result<SpectrumCurve> {
    SpectrumCurve::evaluate(grid, SpectrumKind::NoiseFloor, |w| noise_floor(params, w))
}

/// Output squeezing spectrum `S_in(ω) e^{−2 Re Λ L}` plus the atomic noise floor.
pub fn squeezing_out(
    params: &MediumParams,
    input: &SqueezedInput,
    grid: &FrequencyGrid,
) -> Result<SpectrumCurve> {
    SpectrumCurve::evaluate(grid, SpectrumKind::Squeezing, |w| {
        let attenuation = params.lambda(w).re;
        let transmitted = input.spectrum(w) * (-2.0 * attenuation * params.length()).exp();
        Ok(transmitted + noise_floor_with_attenuation(params, w, attenuation)?)
    })
}

/// Contributions to the raw (unnormalised) difference spectrum at one sideband.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementBreakdown {
    /// Sum of the four propagated input-moment terms.
    pub input_terms: Complex64,
    /// Atomic noise added to the delayed beam.
    pub added_noise: f64,
}

impl EntanglementBreakdown {
    /// Normalised 𝒜_out, after checking the imaginary residue.
    pub fn normalized(&self) -> Result<f64> {
        if self.input_terms.im.abs() > IMAGINARY_TOLERANCE {
            return Err(Error::ImaginaryResidue(self.input_terms.im));
        }
        Ok((self.input_terms.re + self.added_noise) / 2.0)
    }
}

/// Terms of the output difference spectrum when beam X is read out a time
/// `compensation` later than beam Y.
pub fn entanglement_breakdown(
    params: &MediumParams,
    input: &EntangledInput,
    theta: f64,
    phi: f64,
    omega: f64,
    compensation: f64,
) -> Result<EntanglementBreakdown> {
    let length = params.length();
    let lam = params.lambda(omega);
    let lam_conj_freq = params.lambda(-omega);
    // Free propagation of Y over L plus the readout offset of X.
    let shift = Complex64::new(0.0, omega * (compensation + length / params.c_light()));
    let m = input.moments(theta, phi, omega);

    let xx = m.xx * (-2.0 * lam.re * length).exp();
    let xy = -m.xy * (-(lam * length) - shift).exp();
    let yx = -m.yx * (-(lam_conj_freq * length) + shift).exp();
    let input_terms = xy + yx + xx + m.yy;

    Ok(EntanglementBreakdown {
        input_terms,
        added_noise: noise_floor_with_attenuation(params, omega, lam.re)?,
    })
}

/// Exact output difference spectrum 𝒜_out(θ, φ, ω), with beam X delay-
/// compensated by τ_d.
pub fn entanglement_out_full(
    params: &MediumParams,
    input: &EntangledInput,
    theta: f64,
    phi: f64,
    grid: &FrequencyGrid,
) -> Result<SpectrumCurve> {
    let delay = params.derived_figures()?.delay;
    entanglement_out_compensated(params, input, theta, phi, grid, delay)
}

/// Like [`entanglement_out_full`] with an arbitrary compensation delay.
pub fn entanglement_out_compensated(
    params: &MediumParams,
    input: &EntangledInput,
    theta: f64,
    phi: f64,
    grid: &FrequencyGrid,
    compensation: f64,
) -> Result<SpectrumCurve> {
    SpectrumCurve::evaluate(grid, SpectrumKind::Entanglement, |w| {
        entanglement_breakdown(params, input, theta, phi, w, compensation)?.normalized()
    })
}

/// Result of the low-absorption approximation.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxSpectrum {
    pub curve: SpectrumCurve,
    /// Set when K·L exceeds [`LOW_ABSORPTION_LIMIT`].
    pub high_absorption: bool,
}

/// `𝒜_in e^{−KL}` plus the noise floor evaluated with attenuation K.
pub fn entanglement_out_approx(
    params: &MediumParams,
    input: &EntangledInput,
    theta: f64,
    phi: f64,
    grid: &FrequencyGrid,
) -> Result<ApproxSpectrum> {
    let figures = params.derived_figures()?;
    let k = figures.absorption;
    let decay = (-k * params.length()).exp();
    let curve = SpectrumCurve::evaluate(grid, SpectrumKind::Entanglement, |w| {
        let noise = noise_floor_with_attenuation(params, w, k)?;
        Ok(input.difference_spectrum(theta, phi, w) * decay + noise / 2.0)
    })?;
    Ok(ApproxSpectrum {
        curve,
        high_absorption: figures.optical_depth() > LOW_ABSORPTION_LIMIT,
    })
}

/// Pointwise geometric mean of the two conjugate difference spectra.
pub fn duan_measure(a1: &SpectrumCurve, a2: &SpectrumCurve) -> Result<SpectrumCurve> {
    if a1.grid != a2.grid {
        return Err(Error::GridMismatch);
    }
    let values = a1
        .values
        .iter()
        .zip(&a2.values)
        .map(|(x, y)| (x * y).sqrt())
        .collect();
    SpectrumCurve::new(a1.grid.clone(), values, SpectrumKind::Duan)
}

/// Both conjugate output spectra and their Duan measure, for the pair
/// (θ, φ) and (θ + π/2, φ − π/2).
pub fn duan_out_full(
    params: &MediumParams,
    input: &EntangledInput,
    theta: f64,
    phi: f64,
    grid: &FrequencyGrid,
) -> Result<SpectrumCurve> {
    let a1 = entanglement_out_full(params, input, theta, phi, grid)?;
    let a2 = entanglement_out_full(params, input, theta + FRAC_PI_2, phi - FRAC_PI_2, grid)?;
    duan_measure(&a1, &a2)
}
