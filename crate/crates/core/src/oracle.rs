//! Time-domain Maxwell–Bloch integration of a classical probe pulse.
//!
//! With the Langevin forces dropped (their means vanish) the weak-probe
//! equations are linear in the envelope:
//!
//! ```text
//! ∂τ σ_ba = −γ_ba σ_ba + i g ℰ + i Ω_c σ_bc
//! ∂τ σ_bc = −γ_bc σ_bc + i Ω_c σ_ba
//! ∂z ℰ    = (i g N / c) σ_ba
//! ```
//!
//! in the retarded time `τ = t − z/c`, so free propagation is removed and the
//! characteristics are the lines of constant τ. All atoms start in |b⟩ with
//! vanishing coherences.
//!
//! The integrator marches in τ with the trapezoidal rule. The envelope is
//! rebuilt along the cell from the input boundary by trapezoidal quadrature
//! of σ_ba, so the envelope at a node depends on the coherences at that node
//! and upstream only; the implicit step is solved node by node in one sweep.
//! Explicit steppers are unusable here: the instantaneous coupling along z
//! makes the semi-discrete system strongly non-normal. The local error is
//! estimated from the second difference of successive slopes.
//!
//! Everything here is independent of the frequency-domain transfer function,
//! which [`transfer_equivalence`] compares against.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::medium::MediumParams;

/// Maximum accepted local error estimate per step, relative to the
/// atomic response scale.
pub const STEP_TOLERANCE: f64 = 1e-6;

pub const MIN_Z_STEPS: usize = 64;
pub const MIN_T_STEPS: usize = 256;

/// Gaussian probe envelope.
///
/// The intensity `|ℰ|²` has rms duration `rms_width`, so the envelope is
/// `A exp(−(t − t₀)² / 4σ²) e^{−iΔ(t − t₀)}` and sits at sideband `Δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub center_time: f64,
    pub rms_width: f64,
    pub peak_amplitude: f64,
    pub carrier_detuning: f64,
}

impl PulseSpec {
    pub fn gaussian(center_time: f64, rms_width: f64, peak_amplitude: f64) -> Result<Self> {
        if !(rms_width > 0.0 && rms_width.is_finite()) {
            return Err(Error::invalid("rms_width", rms_width, "must be finite and positive"));
        }
        if !center_time.is_finite() {
            return Err(Error::invalid("center_time", center_time, "must be finite"));
        }
        if !(peak_amplitude > 0.0 && peak_amplitude.is_finite()) {
            return Err(Error::invalid("peak_amplitude", peak_amplitude, "must be finite and positive"));
        }
        Ok(PulseSpec {
            center_time,
            rms_width,
            peak_amplitude,
            carrier_detuning: 0.0,
        })
    }

    pub fn detuned(mut self, detuning: f64) -> Self {
        self.carrier_detuning = detuning;
        self
    }

    pub fn envelope(&self, t: f64) -> Complex64 {
        let s = t - self.center_time;
        let amplitude = self.peak_amplitude * (-s * s / (4.0 * self.rms_width * self.rms_width)).exp();
        Complex64::from_polar(amplitude, -self.carrier_detuning * s)
    }

    /// Spectral extent 1/σ.
    pub fn bandwidth(&self) -> f64 {
        1.0 / self.rms_width
    }

    /// Whether the whole pulse spectrum sits well inside a window `window`.
    pub fn in_window(&self, window: f64) -> bool {
        self.bandwidth() + self.carrier_detuning.abs() <= window / 5.0
    }

    /// Whether the peak field keeps the probe Rabi frequency far below Ω_c.
    pub fn is_weak(&self, params: &MediumParams) -> bool {
        params.coupling() * self.peak_amplitude <= 0.01 * params.omega_c()
    }
}

/// Discretisation of the oracle: `nz` steps over the cell, `nt` samples of
/// retarded time at `t_n = n · duration / nt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    nz: usize,
    nt: usize,
    duration: f64,
    z_stride: usize,
}

impl OracleGrid {
    pub fn new(nz: usize, nt: usize, duration: f64) -> Result<Self> {
        if nz < MIN_Z_STEPS {
            return Err(Error::invalid("nz", nz as f64, "need at least 64 z steps"));
        }
        if nt < MIN_T_STEPS {
            return Err(Error::invalid("nt", nt as f64, "need at least 256 time samples"));
        }
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::invalid("duration", duration, "must be finite and positive"));
        }
        Ok(OracleGrid {
            nz,
            nt,
            duration,
            z_stride: (nz / 64).max(1),
        })
    }

    /// A window long enough for `pulse` to enter, be delayed and leave:
    /// twice the pulse center time plus one and a half slow-light delays.
    pub fn for_pulse(params: &MediumParams, pulse: &PulseSpec, nz: usize, nt: usize) -> Result<Self> {
        let delay = params.derived_figures()?.delay;
        Self::new(nz, nt, 2.0 * pulse.center_time + 1.5 * delay)
    }

    /// Store every `stride`-th z-slice (the exit slice is always stored).
    pub fn with_z_stride(mut self, stride: usize) -> Self {
        self.z_stride = stride.max(1);
        self
    }

    /// Both steps halved over the same window.
    pub fn refined(&self) -> Self {
        OracleGrid {
            nz: self.nz * 2,
            nt: self.nt * 2,
            duration: self.duration,
            z_stride: self.z_stride * 2,
        }
    }

    pub fn nz(&self) -> usize {
        self.nz
    }
    pub fn nt(&self) -> usize {
        self.nt
    }
    pub fn duration(&self) -> f64 {
        self.duration
    }
    pub fn dt(&self) -> f64 {
        self.duration / self.nt as f64
    }
}

/// Row-major complex samples, one row per stored z-slice.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTime {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl SpaceTime {
    fn zeros(rows: usize, cols: usize) -> Self {
        SpaceTime {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }
    fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.cols + col] = value;
    }
}

/// Envelope and atomic coherences on the stored z-slices, against retarded time.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseField {
    z_grid: Vec<f64>,
    t_grid: Vec<f64>,
    envelope: SpaceTime,
    sigma_ba: SpaceTime,
    sigma_bc: SpaceTime,
    max_error_estimate: f64,
}

impl PulseField {
    pub fn z_grid(&self) -> &[f64] {
        &self.z_grid
    }
    /// Retarded time τ = t − z/c; lab time at slice z is `τ + z/c`.
    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }
    pub fn envelope(&self) -> &SpaceTime {
        &self.envelope
    }
    pub fn sigma_ba(&self) -> &SpaceTime {
        &self.sigma_ba
    }
    pub fn sigma_bc(&self) -> &SpaceTime {
        &self.sigma_bc
    }
    pub fn input(&self) -> &[Complex64] {
        self.envelope.row(0)
    }
    pub fn output(&self) -> &[Complex64] {
        self.envelope.row(self.envelope.rows - 1)
    }
    /// Largest relative local error estimate met during integration.
    pub fn max_error_estimate(&self) -> f64 {
        self.max_error_estimate
    }
}

/// Atomic coherences along the cell.
struct AtomState {
    ba: Vec<Complex64>,
    bc: Vec<Complex64>,
}

impl AtomState {
    fn zeros(n: usize) -> Self {
        AtomState {
            ba: vec![Complex64::new(0.0, 0.0); n],
            bc: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    fn max_norm(&self) -> f64 {
        self.ba
            .iter()
            .chain(&self.bc)
            .fold(0.0, |m, v| m.max(v.norm()))
    }
}

struct Equations<'a> {
    pulse: &'a PulseSpec,
    gamma_ba: f64,
    gamma_bc: f64,
    rabi: Complex64,
    drive: Complex64,
    /// `(i g N / c) · dz / 2`
    half_step_gain: Complex64,
}

impl Equations<'_> {
    /// Rebuild the envelope from the input boundary and evaluate the atomic slopes.
    #[allow(clippy::needless_range_loop)]
    fn eval(&self, tau: f64, state: &AtomState, slope: &mut AtomState, envelope: &mut [Complex64]) {
        let mut field = self.pulse.envelope(tau);
        for j in 0..state.ba.len() {
            if j > 0 {
                field += (state.ba[j - 1] + state.ba[j]) * self.half_step_gain;
            }
            envelope[j] = field;
            slope.ba[j] = state.ba[j] * -self.gamma_ba + self.drive * field + self.rabi * state.bc[j];
            slope.bc[j] = state.bc[j] * -self.gamma_bc + self.rabi * state.ba[j];
        }
    }

    /// Trapezoidal step from `tau` to `tau + h`; `slope` holds the slopes at `tau`.
    #[allow(clippy::needless_range_loop)]
    fn step(&self, tau: f64, h: f64, state: &mut AtomState, slope: &AtomState, envelope: &mut [Complex64]) {
        let a = h / 2.0;
        let off = -self.rabi * a;
        let m22 = Complex64::new(1.0 + a * self.gamma_bc, 0.0);
        let mut upstream = self.pulse.envelope(tau + h);
        for j in 0..state.ba.len() {
            // ℰ_j = upstream + gain · σ_ba,j, the node's own share of the quadrature.
            let gain = if j == 0 { Complex64::new(0.0, 0.0) } else { self.half_step_gain };
            let b1 = state.ba[j] + slope.ba[j] * a + self.drive * upstream * a;
            let b2 = state.bc[j] + slope.bc[j] * a;
            let m11 = Complex64::new(1.0 + a * self.gamma_ba, 0.0) - self.drive * gain * a;
            let det = m11 * m22 - off * off;
            let ba = (b1 * m22 - off * b2) / det;
            let bc = (m11 * b2 - off * b1) / det;
            state.ba[j] = ba;
            state.bc[j] = bc;
            envelope[j] = upstream + gain * ba;
            upstream = envelope[j] + self.half_step_gain * ba;
        }
    }
}

/// Integrate the weak-probe Maxwell–Bloch equations for `pulse` through the cell.
pub fn propagate(params: &MediumParams, pulse: &PulseSpec, grid: &OracleGrid) -> Result<PulseField> {
    let nodes = grid.nz + 1;
    let dz = params.length() / grid.nz as f64;
    let h = grid.dt();
    let g = params.coupling();
    let eq = Equations {
        pulse,
        gamma_ba: params.gamma_ba(),
        gamma_bc: params.gamma_bc(),
        rabi: Complex64::new(0.0, params.omega_c()),
        drive: Complex64::new(0.0, g),
        half_step_gain: Complex64::new(0.0, g * params.atom_number() / params.c_light() * dz / 2.0),
    };

    let mut stored: Vec<usize> = (0..nodes).step_by(grid.z_stride).collect();
    if *stored.last().unwrap() != grid.nz {
        stored.push(grid.nz);
    }
    let z_grid = stored.iter().map(|&j| j as f64 * dz).collect();
    let t_grid = (0..grid.nt).map(|n| n as f64 * h).collect();
    let mut envelope_out = SpaceTime::zeros(stored.len(), grid.nt);
    let mut ba_out = SpaceTime::zeros(stored.len(), grid.nt);
    let mut bc_out = SpaceTime::zeros(stored.len(), grid.nt);

    let mut y = AtomState::zeros(nodes);
    let mut previous = AtomState::zeros(nodes);
    let mut current = AtomState::zeros(nodes);
    let mut next = AtomState::zeros(nodes);
    let mut envelope = vec![Complex64::new(0.0, 0.0); nodes];

    // Scale of σ for a field of the pulse's peak amplitude.
    let reference = g * pulse.peak_amplitude / params.omega_c();
    let mut scale = reference;
    let mut max_estimate: f64 = 0.0;

    eq.eval(0.0, &y, &mut current, &mut envelope);
    let record = |n: usize, y: &AtomState, envelope: &[Complex64], e: &mut SpaceTime, a: &mut SpaceTime, b: &mut SpaceTime| {
        for (row, &j) in stored.iter().enumerate() {
            e.set(row, n, envelope[j]);
            a.set(row, n, y.ba[j]);
            b.set(row, n, y.bc[j]);
        }
    };
    record(0, &y, &envelope, &mut envelope_out, &mut ba_out, &mut bc_out);

    for n in 0..grid.nt - 1 {
        let tau = n as f64 * h;
        eq.step(tau, h, &mut y, &current, &mut envelope);
        eq.eval(tau + h, &y, &mut next, &mut envelope);

        // h³/12 |y'''| with y''' from the second difference of the slopes.
        if n > 0 {
            let curvature = (0..nodes).fold(0.0, |m: f64, j| {
                let ba = next.ba[j] - current.ba[j] * 2.0 + previous.ba[j];
                let bc = next.bc[j] - current.bc[j] * 2.0 + previous.bc[j];
                m.max(ba.norm()).max(bc.norm())
            });
            scale = scale.max(y.max_norm());
            if scale > 0.0 {
                let estimate = curvature * h / 12.0 / scale;
                max_estimate = max_estimate.max(estimate);
                // Negated so that a NaN estimate also fails.
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                if !(estimate <= STEP_TOLERANCE) {
                    return Err(Error::StepSizeTooCoarse { step: h, estimate });
                }
            }
        }
        core::mem::swap(&mut previous, &mut current);
        core::mem::swap(&mut current, &mut next);

        record(n + 1, &y, &envelope, &mut envelope_out, &mut ba_out, &mut bc_out);
    }

    Ok(PulseField {
        z_grid,
        t_grid,
        envelope: envelope_out,
        sigma_ba: ba_out,
        sigma_bc: bc_out,
        max_error_estimate: max_estimate,
    })
}

fn energy(samples: &[Complex64]) -> f64 {
    samples.iter().map(|v| v.norm_sqr()).sum()
}

fn centroid(samples: &[Complex64], times: &[f64]) -> f64 {
    let weighted: f64 = samples.iter().zip(times).map(|(v, t)| v.norm_sqr() * t).sum();
    weighted / energy(samples)
}

/// Slow-light delay of the pulse: intensity centroid at the exit minus that
/// at the entrance, in retarded time (i.e. with the vacuum transit L/c removed).
pub fn measure_delay(field: &PulseField) -> Result<f64> {
    let input = energy(field.input());
    let output = energy(field.output());
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(output >= 1e-12 * input) || input == 0.0 {
        return Err(Error::NoPeak);
    }
    Ok(centroid(field.output(), field.t_grid()) - centroid(field.input(), field.t_grid()))
}

/// Unnormalised discrete Fourier transforms, as provided by an FFT library.
pub trait Dft {
    /// `X_k = Σ x_n e^{−2πi kn/N}`
    fn forward(&self, buffer: &mut [Complex64]);
    /// `x_n = Σ X_k e^{+2πi kn/N}`
    fn inverse(&self, buffer: &mut [Complex64]);
}

/// Angular frequency of DFT bin `k` for `n` samples spaced `dt`.
pub fn bin_frequency(k: usize, n: usize, dt: f64) -> f64 {
    let signed = if k < n.div_ceil(2) { k as f64 } else { k as f64 - n as f64 };
    2.0 * PI * signed / (n as f64 * dt)
}

/// Exit envelope predicted by multiplying the input spectrum by `e^{−Λ(ω) L}`
/// (without the vacuum phase, matching retarded time).
pub fn frequency_domain_output<D: Dft + ?Sized>(
    params: &MediumParams,
    input: &[Complex64],
    dt: f64,
    dft: &D,
) -> Vec<Complex64> {
    let n = input.len();
    let mut buffer = input.to_vec();
    // F(ω) = ∫ f(t) e^{iωt} dt
    dft.inverse(&mut buffer);
    for (k, value) in buffer.iter_mut().enumerate() {
        let omega = bin_frequency(k, n, dt);
        *value *= (-params.medium_response(omega) * params.length()).exp();
    }
    dft.forward(&mut buffer);
    let norm = 1.0 / n as f64;
    buffer.iter_mut().for_each(|v| *v *= norm);
    buffer
}

/// Comparison between the time-domain oracle and the frequency-domain transfer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferReport {
    /// `‖ℰ_td − ℰ_fd‖₂ / ‖ℰ_fd‖₂` at the cell exit.
    pub relative_l2: f64,
    /// `∫|ℰ_out|² / ∫|ℰ_in|²` from the time-domain run.
    pub energy_time_domain: f64,
    /// `∫|ẽ_in|² e^{−2 Re Λ L} dω / ∫|ẽ_in|² dω`.
    pub energy_frequency_domain: f64,
    /// Measured delay from the time-domain run.
    pub measured_delay: f64,
    pub max_error_estimate: f64,
    /// False when the pulse spectrum is not well inside the transparency window.
    pub in_window: bool,
}

/// Run [`propagate`] and compare its exit envelope with the frequency-domain
/// prediction for the same sampled input.
pub fn transfer_equivalence<D: Dft + ?Sized>(
    params: &MediumParams,
    pulse: &PulseSpec,
    grid: &OracleGrid,
    dft: &D,
) -> Result<TransferReport> {
    let field = propagate(params, pulse, grid)?;
    compare_with_transfer(params, pulse, grid, &field, dft)
}

/// Same as [`transfer_equivalence`] for an already computed field.
pub fn compare_with_transfer<D: Dft + ?Sized>(
    params: &MediumParams,
    pulse: &PulseSpec,
    grid: &OracleGrid,
    field: &PulseField,
    dft: &D,
) -> Result<TransferReport> {
    let dt = grid.dt();
    let input = field.input();
    let output = field.output();
    let predicted = frequency_domain_output(params, input, dt, dft);

    let diff: f64 = output.iter().zip(&predicted).map(|(a, b)| (a - b).norm_sqr()).sum();
    let relative_l2 = (diff / energy(&predicted)).sqrt();

    let mut spectrum = input.to_vec();
    dft.inverse(&mut spectrum);
    let n = spectrum.len();
    let (passed, total) = spectrum.iter().enumerate().fold((0.0, 0.0), |(p, t), (k, v)| {
        let omega = bin_frequency(k, n, dt);
        let weight = v.norm_sqr();
        let transmission = (-2.0 * params.lambda(omega).re * params.length()).exp();
        (p + weight * transmission, t + weight)
    });

    let window = params.derived_figures().map(|f| f.window).unwrap_or(0.0);
    Ok(TransferReport {
        relative_l2,
        energy_time_domain: energy(output) / energy(input),
        energy_frequency_domain: passed / total,
        measured_delay: measure_delay(field)?,
        max_error_estimate: field.max_error_estimate(),
        in_window: pulse.in_window(window),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell() -> MediumParams {
        MediumParams::builder()
            .length(0.035)
            .density(1e18)
            .beam_area(1e-6)
            .gamma_ba(6.0 * PI * 1e6)
            .gamma_bc(10.0)
            .omega_c(30.0 * PI * 1e6)
            .coupling(156_662.255_030_887_1)
            .build()
            .unwrap()
    }

    #[test]
    fn grid_preconditions() {
        assert!(OracleGrid::new(32, 1024, 1e-5).is_err());
        assert!(OracleGrid::new(64, 128, 1e-5).is_err());
        assert!(OracleGrid::new(64, 256, 0.0).is_err());
        let g = OracleGrid::new(64, 256, 1e-5).unwrap().refined();
        assert_eq!((g.nz(), g.nt()), (128, 512));
    }

    #[test]
    fn pulse_envelope() {
        let p = PulseSpec::gaussian(5e-6, 1e-6, 2.0).unwrap();
        assert_eq!(p.envelope(5e-6), Complex64::new(2.0, 0.0));
        // intensity falls to e^{-1/2} one rms width away
        let ratio = p.envelope(6e-6).norm_sqr() / 4.0;
        assert!((ratio - (-0.5f64).exp()).abs() < 1e-15);
        assert!(PulseSpec::gaussian(0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn bins_are_signed() {
        assert_eq!(bin_frequency(0, 8, 1.0), 0.0);
        assert!(bin_frequency(3, 8, 1.0) > 0.0);
        assert!(bin_frequency(4, 8, 1.0) < 0.0);
        assert!((bin_frequency(7, 8, 1.0) + 2.0 * PI / 8.0).abs() < 1e-15);
    }

    #[test]
    fn uncoupled_medium_is_free_propagation() {
        let params = cell().with_coupling(0.0).unwrap();
        let pulse = PulseSpec::gaussian(8e-6, 1e-6, 1.0).unwrap();
        let grid = OracleGrid::new(64, 512, 16e-6).unwrap();
        let field = propagate(&params, &pulse, &grid).unwrap();
        assert_eq!(field.input(), field.output());
        assert_eq!(measure_delay(&field).unwrap(), 0.0);
    }

    #[test]
    fn coarse_time_step_is_detected() {
        let pulse = PulseSpec::gaussian(16e-6, 2e-6, 1e-3).unwrap();
        let grid = OracleGrid::new(64, 256, 50e-6).unwrap();
        let err = propagate(&cell(), &pulse, &grid).unwrap_err();
        assert!(matches!(err, Error::StepSizeTooCoarse { .. }), "{err:?}");
    }
}
