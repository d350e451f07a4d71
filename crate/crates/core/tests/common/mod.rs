#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use slowlight_core::{Complex64, Dft, MediumParams};

/// Reference cell: 3.5 cm, 1e12 atoms/cm³, γ_ba = 6π·10⁶ s⁻¹, Ω_c = 30π·10⁶ s⁻¹.
pub fn reference_cell(gamma_bc: f64) -> MediumParams {
    MediumParams::builder()
        .length(0.035)
        .density(1e18)
        .beam_area(1e-6)
        .gamma_ba(6.0 * PI * 1e6)
        .gamma_bc(gamma_bc)
        .omega_c(30.0 * PI * 1e6)
        .build()
        .unwrap()
        .calibrated(3100.0)
        .unwrap()
}

pub struct RustFft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl RustFft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        RustFft {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }
}

impl Dft for RustFft {
    fn forward(&self, buffer: &mut [Complex64]) {
        self.forward.process(buffer);
    }
    fn inverse(&self, buffer: &mut [Complex64]) {
        self.inverse.process(buffer);
    }
}

/// Random EIT cells: strong control, γ_bc well below γ_ba, slow light,
/// optical depth K·L at most 10.
pub fn valid_medium() -> impl proptest::strategy::Strategy<Value = MediumParams> {
    use proptest::prelude::*;
    (
        1e-3..0.1f64,
        16.0..19.0f64,
        6.0..8.0f64,
        -9.0..-2.0f64,
        1.0..10.0f64,
        2.0..5.0f64,
    )
        .prop_map(|(length, log_density, log_gamma, dephasing, control, log_vg)| {
            let gamma_ba = 10f64.powf(log_gamma);
            MediumParams::builder()
                .length(length)
                .density(10f64.powf(log_density))
                .beam_area(1e-6)
                .gamma_ba(gamma_ba)
                .gamma_bc(10f64.powf(dephasing) * gamma_ba)
                .omega_c(control * gamma_ba)
                .build()
                .unwrap()
                .calibrated(10f64.powf(log_vg))
                .unwrap()
        })
        .prop_filter("optically thick", |p| p.derived_figures().unwrap().optical_depth() <= 10.0)
}

pub fn relative(expected: f64, actual: f64) -> f64 {
    (expected - actual).abs() / expected.abs()
}
