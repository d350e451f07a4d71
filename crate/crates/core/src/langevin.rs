//! Langevin noise of the atomic ensemble.
//!
//! The locally averaged Langevin forces are white, delta-correlated in `z` and
//! in frequency. Only the amplitudes multiplying `δ(z₁−z₂) δ(ω₁+ω₂)` are kept
//! here, already divided by the linear atom density `n𝒜`.
//!
//! Integrating the forces through the cell gives the vacuum noise added to a
//! probe quadrature, [`noise_floor`]. The same term shows up in the squeezing
//! and in the entanglement spectra.

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::medium::MediumParams;

const POPULATION_TOLERANCE: f64 = 1e-12;
const EQUAL_RATE_TOLERANCE: f64 = 1e-12;

/// Below this value of `|2 Re Λ · L|` the path integral uses its series.
const SERIES_THRESHOLD: f64 = 1e-8;

/// Atomic populations and ground-excited coherences entering the diffusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Populations {
    pub sigma_bb: f64,
    pub sigma_cc: f64,
    pub sigma_aa: f64,
    pub sigma_ac: Complex64,
    pub sigma_ca: Complex64,
}

impl Populations {
    pub fn new(
        sigma_bb: f64,
        sigma_cc: f64,
        sigma_aa: f64,
        sigma_ac: Complex64,
        sigma_ca: Complex64,
    ) -> Result<Self> {
        for (name, p) in [("sigma_bb", sigma_bb), ("sigma_cc", sigma_cc), ("sigma_aa", sigma_aa)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid(name, p, "population must lie in [0, 1]"));
            }
        }
        let total = sigma_bb + sigma_cc + sigma_aa;
        if (total - 1.0).abs() > POPULATION_TOLERANCE {
            return Err(Error::invalid("populations", total, "must sum to one"));
        }
        Ok(Populations {
            sigma_bb,
            sigma_cc,
            sigma_aa,
            sigma_ac,
            sigma_ca,
        })
    }

    /// Every atom in |b⟩, as for a probe much weaker than the control.
    pub fn weak_probe() -> Self {
        Populations {
            sigma_bb: 1.0,
            sigma_cc: 0.0,
            sigma_aa: 0.0,
            sigma_ac: Complex64::new(0.0, 0.0),
            sigma_ca: Complex64::new(0.0, 0.0),
        }
    }
}

impl Default for Populations {
    fn default() -> Self {
        Self::weak_probe()
    }
}

/// Diffusion amplitudes in units of 1/(atoms per metre).
///
/// Field names follow the operator ordering of the correlator, e.g.
/// `ba_ab` is ⟨F_ba F_ab†⟩ and `cb_bc` is ⟨F_bc† F_bc⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionCoefficients {
    pub ba_ab: f64,
    pub ab_bc: Complex64,
    pub cb_ba: Complex64,
    pub bc_cb: f64,
    pub cb_bc: f64,
}

fn require_equal_rates(params: &MediumParams) -> Result<()> {
    let reference = params.gamma_ba();
    let equal = [params.gamma_b(), params.gamma_c(), params.gamma_ac()]
        .iter()
        .all(|g| (g - reference).abs() <= EQUAL_RATE_TOLERANCE * reference);
    if equal {
        Ok(())
    } else {
        Err(Error::UnequalDecayRates)
    }
}

/// Evaluate the five nonzero correlators of the Langevin forces.
pub fn diffusion(params: &MediumParams, pops: &Populations) -> Result<DiffusionCoefficients> {
    require_equal_rates(params)?;
    let gba = params.gamma_ba();
    let gbc = params.gamma_bc();
    let per_atom = 1.0 / params.linear_density();

    let ba_ab =
        gba * pops.sigma_aa + 2.0 * gba * pops.sigma_bb - gbc * (pops.sigma_bb - pops.sigma_cc);
    let ground = gba * pops.sigma_aa + gbc * (pops.sigma_cc + pops.sigma_bb);

    Ok(DiffusionCoefficients {
        ba_ab: ba_ab * per_atom,
        ab_bc: pops.sigma_ac * (gbc * per_atom),
        cb_ba: pops.sigma_ca * (gbc * per_atom),
        bc_cb: ground * per_atom,
        cb_bc: ground * per_atom,
    })
}

/// `∫₀ᴸ e^{−2x(L−s)} ds = (1 − e^{−2xL}) / 2x`, continuous through `x = 0`.
pub fn path_integral(attenuation: f64, length: f64) -> f64 {
    let u = 2.0 * attenuation * length;
    if u.abs() < SERIES_THRESHOLD {
        length * (1.0 - attenuation * length + u * u / 6.0)
    } else {
        -(-u).exp_m1() / (2.0 * attenuation)
    }
}

/// Composite Simpson estimate of the same integral; `panels` is rounded up to even.
pub fn simpson_path_integral(attenuation: f64, length: f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = length / panels as f64;
    let f = |s: f64| (-2.0 * attenuation * (length - s)).exp();
    let interior: f64 = (1..panels)
        .map(|k| {
            let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
            weight * f(k as f64 * h)
        })
        .sum();
    (f(0.0) + f(length) + interior) * h / 3.0
}

/// Spectral weight of the forces projected onto a quadrature, before the
/// propagation prefactor: `(ω² + γ_bc²)·⟨F_ba F_ab†⟩ + Ω_c² (⟨F_bc F_bc†⟩ + ⟨F_bc† F_bc⟩)`
/// per unit of `1/n𝒜`, divided by `|(γ_ba − iω)(γ_bc − iω) + Ω_c²|²`.
///
/// The ⟨σ_ac⟩ cross correlators are not included; they vanish for the weak
/// probe and their contribution away from it is not modelled.
fn projected_weight(params: &MediumParams, diffusion: &DiffusionCoefficients, omega: f64) -> f64 {
    let gbc = params.gamma_bc();
    let w = params.omega_c() * params.omega_c();
    let n_a = params.linear_density();
    let numerator = (omega * omega + gbc * gbc) * diffusion.ba_ab * n_a
        + w * (diffusion.bc_cb + diffusion.cb_bc) * n_a;
    numerator / params.denominator(omega).norm_sqr()
}

/// Added noise for a uniform field attenuation rate `attenuation` (1/m).
///
/// The exact spectrum uses `Re Λ(ω)`; the low-absorption approximation uses `K`.
pub fn noise_floor_with_attenuation(
    params: &MediumParams,
    omega: f64,
    attenuation: f64,
) -> Result<f64> {
    let d = diffusion(params, &Populations::weak_probe())?;
    let prefactor = params.collective_coupling() / params.c_light();
    Ok(prefactor * path_integral(attenuation, params.length()) * projected_weight(params, &d, omega))
}

/// Vacuum noise, in shot-noise units, that the atoms add to any probe
/// quadrature at sideband `omega`.
pub fn noise_floor(params: &MediumParams, omega: f64) -> Result<f64> {
    noise_floor_with_attenuation(params, omega, params.lambda(omega).re)
}

/// Relative difference between the closed-form path integral and Simpson
/// quadrature at `Re Λ(ω)`.
pub fn noise_floor_quadrature_check(
    params: &MediumParams,
    omega: f64,
    panels: usize,
) -> Result<f64> {
    if panels < 16 {
        return Err(Error::invalid("n_panels", panels as f64, "need at least 16 panels"));
    }
    let x = params.lambda(omega).re;
    let closed = path_integral(x, params.length());
    let quadrature = simpson_path_integral(x, params.length(), panels);
    Ok((closed - quadrature).abs() / closed.abs())
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
            .coupling(156_662.255_030_887_1)
            .build()
            .unwrap()
    }

    #[test]
    fn weak_probe_diffusion() {
        let p = cell(10.0);
        let na = p.linear_density();
        let d = diffusion(&p, &Populations::weak_probe()).unwrap();
        let gba = p.gamma_ba();
        assert!((d.ba_ab - (2.0 * gba - 10.0) / na).abs() <= 1e-15 * d.ba_ab);
        assert!((d.bc_cb - 10.0 / na).abs() <= 1e-15 * d.bc_cb);
        assert_eq!(d.bc_cb, d.cb_bc);
        assert_eq!(d.ab_bc, Complex64::new(0.0, 0.0));
        assert_eq!(d.cb_ba, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn all_atoms_in_c() {
        let p = cell(10.0);
        let zero = Complex64::new(0.0, 0.0);
        let pops = Populations::new(0.0, 1.0, 0.0, zero, zero).unwrap();
        let d = diffusion(&p, &pops).unwrap();
        assert!((d.ba_ab - 10.0 / p.linear_density()).abs() <= 1e-15 * d.ba_ab);
    }

    #[test]
    fn uniform_populations() {
        // Exact rational values: γ_ba = 3, γ_bc = 1, n𝒜 = 1, σ = 1/3 each:
        //   ⟨F_ba F_ab†⟩ = 3/3 + 2·3/3 − (1/3 − 1/3) = 3
        //   ⟨F_bc F_bc†⟩ = 3/3 + (1/3 + 1/3)        = 5/3
        //   ⟨F_ba† F_bc⟩ = γ_bc σ_ac = (1 + 2i)/5 for σ_ac = (1 + 2i)/5
        let p = MediumParams::builder()
            .length(1.0)
            .density(1.0)
            .beam_area(1.0)
            .gamma_ba(3.0)
            .gamma_bc(1.0)
            .omega_c(2.0)
            .build()
            .unwrap();
        let third = 1.0 / 3.0;
        let coherence = Complex64::new(0.2, 0.4);
        let pops = Populations::new(third, third, third, coherence, coherence.conj()).unwrap();
        let d = diffusion(&p, &pops).unwrap();
        assert!((d.ba_ab - 3.0).abs() < 1e-15);
        assert!((d.bc_cb - 5.0 / 3.0).abs() < 1e-15);
        assert!((d.ab_bc - coherence).norm() < 1e-15);
        assert!((d.cb_ba - coherence.conj()).norm() < 1e-15);
    }

    #[test]
    fn populations_must_be_normalised() {
        let zero = Complex64::new(0.0, 0.0);
        assert!(Populations::new(0.5, 0.4, 0.0, zero, zero).is_err());
        assert!(Populations::new(1.2, -0.2, 0.0, zero, zero).is_err());
    }

    #[test]
    fn unequal_rates_rejected() {
        let p = cell(10.0).to_builder().gamma_c(1.0).build().unwrap();
        assert_eq!(diffusion(&p, &Populations::weak_probe()), Err(Error::UnequalDecayRates));
        assert!(noise_floor(&p, 0.0).is_err());
    }

    #[test]
    fn no_noise_at_line_center_without_dephasing() {
        assert_eq!(noise_floor(&cell(0.0), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn path_integral_limit_and_series() {
        assert_eq!(path_integral(0.0, 0.035), 0.035);
        assert_eq!(simpson_path_integral(0.0, 0.035, 16), 0.035);
        let x = 1e-9;
        let exact = -(-2.0 * x * 0.035f64).exp_m1() / (2.0 * x);
        assert!((path_integral(x, 0.035) - exact).abs() <= 1e-15 * exact);
    }

    #[test]
    fn line_center_noise_matches_absorption() {
        // At ω = 0: N g² γ_bc / (2cK) = (γ_ba γ_bc + Ω_c²) / 2, so the floor is
        // (1 − e^{−2KL}) · (1 − γ_bc² / 2(γ_ba γ_bc + Ω_c²)).
        for gbc in [10.0, 5000.0, 1e5] {
            let p = cell(gbc);
            let k = p.derived_figures().unwrap().absorption;
            let d0 = p.gamma_ba() * gbc + p.omega_c() * p.omega_c();
            let expected = -(-2.0 * k * p.length()).exp_m1() * (1.0 - gbc * gbc / (2.0 * d0));
            let got = noise_floor(&p, 0.0).unwrap();
            assert!((got - expected).abs() <= 1e-12 * expected, "{got} vs {expected}");
        }
    }

    #[test]
    fn quadrature_check_needs_panels() {
        assert!(noise_floor_quadrature_check(&cell(10.0), 0.0, 8).is_err());
        let r = noise_floor_quadrature_check(&cell(10.0), 0.0, 4096).unwrap();
        assert!(r <= 1e-8, "{r}");
    }
}
