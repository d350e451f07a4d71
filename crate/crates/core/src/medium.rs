//! The EIT cell: physical parameters, the transfer exponent Λ(ω) and the
//! slow-light figures derived from its low-frequency expansion.
//!
//! In the rotating frame a probe sideband at detuning ω leaves the cell as
//! `e^{-Λ(ω) L}` times its input amplitude, with
//!
//! ```text
//! Λ(ω) = (N g² / c) (γ_bc − iω) / [(γ_ba − iω)(γ_bc − iω) + Ω_c²] − iω / c
//! ```
//!
//! Expanding `Λ(ω) L = K L − iωL/v_g + ω²/δω² + O(ω³)` gives the residual
//! absorption `K`, the group velocity `v_g`, and the transparency window `δω`.

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Vacuum speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Allowed relative mismatch between a supplied atom number and `n·A·L`.
const ATOM_NUMBER_TOLERANCE: f64 = 1e-9;

/// Physical constants of the cell and the two optical fields.
///
/// Rates are angular frequencies in rad/s. The control Rabi frequency and the
/// atom-field coupling are real and nonnegative; a global control phase only
/// rotates the quadrature angles.
///
/// Build with [`MediumParams::builder`]. Values are validated once and are
/// immutable afterwards; use [`MediumParams::to_builder`] to derive variants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    length: f64,
    atom_number: f64,
    density: f64,
    beam_area: f64,
    gamma_ba: f64,
    gamma_bc: f64,
    gamma_b: f64,
    gamma_c: f64,
    gamma_ac: f64,
    omega_c: f64,
    coupling: f64,
    c_light: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MediumBuilder {
    length: Option<f64>,
    atom_number: Option<f64>,
    density: Option<f64>,
    beam_area: Option<f64>,
    gamma_ba: Option<f64>,
    gamma_bc: Option<f64>,
    gamma_b: Option<f64>,
    gamma_c: Option<f64>,
    gamma_ac: Option<f64>,
    omega_c: Option<f64>,
    coupling: Option<f64>,
    c_light: Option<f64>,
}

macro_rules! setter {
    ($($(#[$doc:meta])* $name:ident),* $(,)?) => {
        $(
            $(#[$doc])*
            pub fn $name(mut self, value: f64) -> Self {
                self.$name = Some(value);
                self
            }
        )*
    };
}

impl MediumBuilder {
    setter! {
        /// Cell length L in metres.
        length,
        /// Total atom number N. Derived from `density · beam_area · length` when omitted.
        atom_number,
        /// Atomic density n in atoms/m³.
        density,
        /// Beam cross section 𝒜 in m².
        beam_area,
        /// Optical coherence decay γ_ba.
        gamma_ba,
        /// Ground-state dephasing γ_bc; may be zero.
        gamma_bc,
        gamma_b,
        gamma_c,
        gamma_ac,
        /// Control Rabi frequency |Ω_c|.
        omega_c,
        /// Atom-field coupling g (defaults to zero).
        coupling,
        c_light,
    }

    pub fn build(self) -> Result<MediumParams> {
        let length = positive("length", required("length", self.length)?)?;
        let density = positive("density", required("density", self.density)?)?;
        let beam_area = positive("beam_area", required("beam_area", self.beam_area)?)?;
        let gamma_ba = positive("gamma_ba", required("gamma_ba", self.gamma_ba)?)?;
        let gamma_bc = required("gamma_bc", self.gamma_bc)?;
        if !(gamma_bc.is_finite() && gamma_bc >= 0.0) {
            return Err(Error::invalid("gamma_bc", gamma_bc, "must be finite and nonnegative"));
        }
        let omega_c = positive("omega_c", required("omega_c", self.omega_c)?)?;
        let gamma_b = positive("gamma_b", self.gamma_b.unwrap_or(gamma_ba))?;
        let gamma_c = positive("gamma_c", self.gamma_c.unwrap_or(gamma_ba))?;
        let gamma_ac = positive("gamma_ac", self.gamma_ac.unwrap_or(gamma_ba))?;
        let c_light = positive("c_light", self.c_light.unwrap_or(SPEED_OF_LIGHT))?;
        let coupling = self.coupling.unwrap_or(0.0);
        if !(coupling.is_finite() && coupling >= 0.0) {
            return Err(Error::invalid("coupling_g", coupling, "must be finite and nonnegative"));
        }

        let derived = density * beam_area * length;
        let atom_number = match self.atom_number {
            Some(n) => {
                let n = positive("atom_number", n)?;
                if (n - derived).abs() / n > ATOM_NUMBER_TOLERANCE {
                    return Err(Error::invalid(
                        "atom_number",
                        n,
                        "inconsistent with density * beam_area * length",
                    ));
                }
                n
            }
            None => derived,
        };

        Ok(MediumParams {
            length,
            atom_number,
            density,
            beam_area,
            gamma_ba,
            gamma_bc,
            gamma_b,
            gamma_c,
            gamma_ac,
            omega_c,
            coupling,
            c_light,
        })
    }
}

fn required(name: &'static str, value: Option<f64>) -> Result<f64> {
    value.ok_or(Error::invalid(name, f64::NAN, "missing"))
}

fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, value, "must be finite and strictly positive"))
    }
}

/// Slow-light figures of merit from the expansion of Λ(ω) about line center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Susceptibility {
    /// Zeroth-order absorption coefficient K in 1/m.
    pub absorption: f64,
    /// Group velocity v_g in m/s.
    pub group_velocity: f64,
    /// Transparency window δω in rad/s; infinite for an uncoupled medium.
    pub window: f64,
    /// Delay τ_d = L (1/v_g − 1/c) relative to vacuum, in seconds.
    pub delay: f64,
    params: MediumParams,
}

impl Susceptibility {
    /// Exact Λ(ω) of the medium these figures were derived from.
    pub fn lambda(&self, omega: f64) -> Complex64 {
        self.params.lambda(omega)
    }

    /// Optical depth K·L of the residual line-center absorption.
    pub fn optical_depth(&self) -> f64 {
        self.absorption * self.params.length
    }

    pub fn params(&self) -> &MediumParams {
        &self.params
    }
}

/// Relative mismatch between the closed-form expansion coefficients and
/// finite differences of the exact Λ(ω).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorResiduals {
    pub absorption: f64,
    pub inverse_group_velocity: f64,
    pub curvature: f64,
    /// Finite-difference step used, rad/s.
    pub step: f64,
}

impl TaylorResiduals {
    pub fn max(&self) -> f64 {
        self.absorption
            .max(self.inverse_group_velocity)
            .max(self.curvature)
    }
}

impl MediumParams {
    pub fn builder() -> MediumBuilder {
        MediumBuilder::default()
    }

    /// A builder seeded with these values. The atom number is left to be
    /// re-derived so that changing the geometry stays consistent.
    pub fn to_builder(&self) -> MediumBuilder {
        MediumBuilder {
            length: Some(self.length),
            atom_number: None,
            density: Some(self.density),
            beam_area: Some(self.beam_area),
            gamma_ba: Some(self.gamma_ba),
            gamma_bc: Some(self.gamma_bc),
            gamma_b: Some(self.gamma_b),
            gamma_c: Some(self.gamma_c),
            gamma_ac: Some(self.gamma_ac),
            omega_c: Some(self.omega_c),
            coupling: Some(self.coupling),
            c_light: Some(self.c_light),
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }
    pub fn atom_number(&self) -> f64 {
        self.atom_number
    }
    pub fn density(&self) -> f64 {
        self.density
    }
    pub fn beam_area(&self) -> f64 {
        self.beam_area
    }
    pub fn gamma_ba(&self) -> f64 {
        self.gamma_ba
    }
    pub fn gamma_bc(&self) -> f64 {
        self.gamma_bc
    }
    pub fn gamma_b(&self) -> f64 {
        self.gamma_b
    }
    pub fn gamma_c(&self) -> f64 {
        self.gamma_c
    }
    pub fn gamma_ac(&self) -> f64 {
        self.gamma_ac
    }
    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }
    pub fn coupling(&self) -> f64 {
        self.coupling
    }
    pub fn c_light(&self) -> f64 {
        self.c_light
    }

    /// Collective coupling strength N g² in rad²/s².
    pub fn collective_coupling(&self) -> f64 {
        self.atom_number * self.coupling * self.coupling
    }

    /// Atoms per metre of beam, n·𝒜.
    pub fn linear_density(&self) -> f64 {
        self.density * self.beam_area
    }

    /// `(γ_ba − iω)(γ_bc − iω) + Ω_c²`, the common denominator of the atomic response.
    pub fn denominator(&self, omega: f64) -> Complex64 {
        Complex64::new(self.gamma_ba, -omega) * Complex64::new(self.gamma_bc, -omega)
            + self.omega_c * self.omega_c
    }

    /// Medium part of Λ(ω), i.e. the exponent in the frame co-moving at c.
    pub fn medium_response(&self, omega: f64) -> Complex64 {
        Complex64::new(self.gamma_bc, -omega) * (self.collective_coupling() / self.c_light)
            / self.denominator(omega)
    }

    /// Exact complex transfer exponent Λ(ω) in 1/m.
    pub fn lambda(&self, omega: f64) -> Complex64 {
        self.medium_response(omega) - Complex64::new(0.0, omega / self.c_light)
    }

    /// Closed-form K, v_g, δω and τ_d.
    ///
    /// Fails with [`Error::DegenerateRegime`] when `Ω_c ≤ γ_bc`, where EIT has
    /// broken down and a group velocity is not meaningful, or when the
    /// quadratic coefficient of the expansion is not positive.
    pub fn derived_figures(&self) -> Result<Susceptibility> {
        if self.omega_c <= self.gamma_bc {
            return Err(Error::DegenerateRegime(
                "control Rabi frequency must exceed the ground-state dephasing",
            ));
        }
        let w = self.omega_c * self.omega_c;
        let gbc = self.gamma_bc;
        let d0 = self.gamma_ba * gbc + w;
        let ng2 = self.collective_coupling();
        let c = self.c_light;

        let curvature = w * (2.0 * gbc + self.gamma_ba) - gbc * gbc * gbc;
        if curvature <= 0.0 {
            return Err(Error::DegenerateRegime("transparency window is not positive"));
        }

        let absorption = ng2 * gbc / (c * d0);
        let group_velocity = c / (1.0 + ng2 * (w - gbc * gbc) / (d0 * d0));
        let window = if ng2 == 0.0 {
            f64::INFINITY
        } else {
            (c * d0 * d0 * d0 / (ng2 * self.length * curvature)).sqrt()
        };
        let delay = self.length * (1.0 / group_velocity - 1.0 / c);

        Ok(Susceptibility {
            absorption,
            group_velocity,
            window,
            delay,
            params: *self,
        })
    }

    /// Compare the expansion coefficients with central finite differences of
    /// [`lambda`](Self::lambda).
    ///
    /// The default step is a thousandth of the smallest frequency scale of the
    /// response: the window δω, Ω_c, and Ω_c²/γ_ba.
    pub fn taylor_check(&self, step: Option<f64>) -> Result<TaylorResiduals> {
        let figures = self.derived_figures()?;
        let h = step.unwrap_or_else(|| {
            let w = self.omega_c;
            figures.window.min(w).min(w * w / self.gamma_ba) / 1000.0
        });
        let at0 = self.lambda(0.0);
        let up = self.lambda(h);
        let down = self.lambda(-h);

        let absorption = relative(figures.absorption, at0.re);

        let slope = (up - down) / (2.0 * h);
        let inverse_vg = 1.0 / figures.group_velocity;
        let inverse_group_velocity = (inverse_vg + slope.im).abs() / inverse_vg;

        // Re Λ = K + ω²/(δω² L) + ...
        let second = (up - at0 * 2.0 + down).re / (h * h) / 2.0;
        let d0 = self.gamma_ba * self.gamma_bc + self.omega_c * self.omega_c;
        let expected = self.collective_coupling()
            * (self.omega_c * self.omega_c * (2.0 * self.gamma_bc + self.gamma_ba)
                - self.gamma_bc * self.gamma_bc * self.gamma_bc)
            / (self.c_light * d0 * d0 * d0);
        let curvature = relative(expected, second);

        Ok(TaylorResiduals {
            absorption,
            inverse_group_velocity,
            curvature,
            step: h,
        })
    }

    /// Coupling g that makes the medium's group velocity equal `target_vg`.
    ///
    /// Inverts the v_g expression: `N g² = (c/v_g − 1)(γ_ba γ_bc + Ω_c²)² / (Ω_c² − γ_bc²)`.
    pub fn calibrate_coupling(&self, target_vg: f64) -> Result<f64> {
        if !(target_vg > 0.0 && target_vg <= self.c_light) {
            return Err(Error::invalid(
                "target_vg",
                target_vg,
                "must lie in (0, c]",
            ));
        }
        let w = self.omega_c * self.omega_c;
        let gbc2 = self.gamma_bc * self.gamma_bc;
        if w <= gbc2 {
            return Err(Error::DegenerateRegime(
                "control Rabi frequency must exceed the ground-state dephasing",
            ));
        }
        let d0 = self.gamma_ba * self.gamma_bc + w;
        let ng2 = (self.c_light / target_vg - 1.0) * d0 * d0 / (w - gbc2);
        Ok((ng2 / self.atom_number).sqrt())
    }

    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        self.to_builder().coupling(coupling).build()
    }

    /// These parameters with g calibrated to `target_vg`.
    pub fn calibrated(&self, target_vg: f64) -> Result<Self> {
        self.with_coupling(self.calibrate_coupling(target_vg)?)
    }
}

fn relative(expected: f64, actual: f64) -> f64 {
    let scale = expected.abs().max(actual.abs());
    if scale == 0.0 {
        0.0
    } else {
        (expected - actual).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn cell(gamma_bc: f64) -> MediumParams {
        MediumParams::builder()
            .length(0.035)
            .density(1e18)
            .beam_area(1e-6)
            .gamma_ba(6.0 * PI * 1e6)
            .gamma_bc(gamma_bc)
            .omega_c(30.0 * PI * 1e6)
            .build()
            .unwrap()
    }

    #[test]
    fn atom_number_is_derived_or_checked() {
        let p = cell(10.0);
        assert!((p.atom_number() - 3.5e10).abs() < 1.0);
        let ok = p.to_builder().atom_number(3.5e10).build();
        assert!(ok.is_ok());
        let bad = p.to_builder().atom_number(3.6e10).build();
        assert!(matches!(bad, Err(Error::InvalidParameter { name: "atom_number", .. })));
    }

    #[test]
    fn rejects_nonpositive_rates() {
        let b = cell(10.0).to_builder();
        assert!(b.gamma_ba(0.0).build().is_err());
        assert!(b.gamma_bc(-1.0).build().is_err());
        assert!(b.omega_c(f64::NAN).build().is_err());
        assert!(b.gamma_bc(0.0).build().is_ok());
        assert!(MediumParams::builder().length(1.0).build().is_err());
    }

    #[test]
    fn transparent_at_line_center_without_dephasing() {
        let p = cell(0.0).calibrated(3100.0).unwrap();
        assert_eq!(p.lambda(0.0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn strong_control_makes_medium_invisible() {
        let p = cell(10.0).with_coupling(1.5e5).unwrap();
        let omega = 2.0e6;
        let strong = p.to_builder().omega_c(1e15).build().unwrap();
        let lam = strong.lambda(omega);
        let free = Complex64::new(0.0, -omega / SPEED_OF_LIGHT);
        assert!((lam - free).norm() < 1e-9 * free.norm());
    }

    #[test]
    fn undephased_figures() {
        let p = cell(0.0).with_coupling(1.5e5).unwrap();
        let f = p.derived_figures().unwrap();
        assert_eq!(f.absorption, 0.0);
        let w = p.omega_c() * p.omega_c();
        let vg = SPEED_OF_LIGHT / (1.0 + p.collective_coupling() / w);
        assert!((f.group_velocity - vg).abs() / vg < 1e-14);
    }

    #[test]
    fn weak_control_is_degenerate() {
        let p = cell(1e6).to_builder().omega_c(1e6).build().unwrap();
        assert!(matches!(p.derived_figures(), Err(Error::DegenerateRegime(_))));
        assert!(matches!(p.calibrate_coupling(3100.0), Err(Error::DegenerateRegime(_))));
    }

    #[test]
    fn delay_is_exactly_length_times_slowness() {
        let f = cell(10.0).calibrated(3100.0).unwrap().derived_figures().unwrap();
        let p = f.params();
        assert_eq!(f.delay, p.length() * (1.0 / f.group_velocity - 1.0 / p.c_light()));
    }

    #[test]
    fn calibration_round_trip() {
        let base = cell(10.0);
        assert_eq!(base.calibrate_coupling(SPEED_OF_LIGHT).unwrap(), 0.0);
        let p = base.calibrated(3100.0).unwrap();
        let vg = p.derived_figures().unwrap().group_velocity;
        assert!((vg - 3100.0).abs() / 3100.0 < 1e-12);

        let halved = base.to_builder().density(0.5e18).build().unwrap();
        let ratio = halved.calibrate_coupling(3100.0).unwrap() / p.coupling();
        assert!((ratio - 2f64.sqrt()).abs() < 1e-12);

        assert!(base.calibrate_coupling(0.0).is_err());
        assert!(base.calibrate_coupling(2.0 * SPEED_OF_LIGHT).is_err());
    }

    #[test]
    fn taylor_check_on_reference_cell() {
        for gbc in [10.0, 5000.0] {
            let r = cell(gbc).calibrated(3100.0).unwrap().taylor_check(None).unwrap();
            assert!(r.max() <= 1e-6, "{r:?}");
        }
        let r = cell(0.0).calibrated(3100.0).unwrap().taylor_check(None).unwrap();
        assert_eq!(r.absorption, 0.0);
    }

    #[test]
    fn medium_term_is_hermitian_in_frequency() {
        let p = cell(5000.0).calibrated(3100.0).unwrap();
        for omega in [1e3, 1e6, 7.5e7, 3e9] {
            let plus = p.medium_response(omega);
            let minus = p.medium_response(-omega);
            assert!((minus - plus.conj()).norm() <= 1e-14 * plus.norm());
        }
    }
}
