use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use slowlight_core::{Complex64, Dft};

/// [`Dft`] backed by rustfft plans for one transform length.
pub struct RustFft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl RustFft {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        RustFft {
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_scales_by_length() {
        let dft = RustFft::new(8);
        let original: Vec<Complex64> = (0..8).map(|k| Complex64::new(k as f64, -(k as f64) / 2.0)).collect();
        let mut buffer = original.clone();
        dft.forward(&mut buffer);
        dft.inverse(&mut buffer);
        for (a, b) in buffer.iter().zip(&original) {
            assert!((a / 8.0 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn forward_uses_negative_exponent() {
        let dft = RustFft::new(4);
        // x_n = e^{+2πi n/4} lands in bin 1 under X_k = Σ x_n e^{−2πi kn/N}.
        let mut buffer: Vec<Complex64> = (0..4)
            .map(|n| Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * n as f64))
            .collect();
        dft.forward(&mut buffer);
        assert!((buffer[1] - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        assert!(buffer[0].norm() < 1e-12);
    }
}
