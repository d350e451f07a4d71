//! Propagation of squeezed and entangled light through a slow-light medium.
//!
//! A weak quantum probe crosses a cell of Λ-type atoms held transparent by a
//! strong control field. This crate evaluates the complex transfer exponent
//! Λ(ω) of the cell and its slow-light figures of merit ([`medium`]), the
//! Langevin diffusion coefficients and the vacuum noise they inject
//! ([`langevin`]), the resulting squeezing and entanglement spectra together
//! with the Duan inseparability measure ([`spectra`]), and an independent
//! time-domain Maxwell–Bloch integrator that cross-checks the transfer
//! function ([`oracle`]).
//!
//! All rates and frequencies are angular (rad/s), lengths are metres.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod error;
pub mod langevin;
pub mod medium;
pub mod oracle;
pub mod spectra;

pub use error::{Error, Result};
pub use langevin::{DiffusionCoefficients, Populations};
pub use medium::{MediumBuilder, MediumParams, Susceptibility, TaylorResiduals, SPEED_OF_LIGHT};
pub use num_complex::Complex64;
pub use oracle::{Dft, OracleGrid, PulseField, PulseSpec, TransferReport};
pub use spectra::{
    EntangledInput, FrequencyGrid, FrequencyProfile, SpectrumCurve, SpectrumKind, SqueezedInput,
};
