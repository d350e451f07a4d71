use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid value for `{name}` ({value}): {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The control field is too weak for the slow-light expansion to make sense.
    #[error("degenerate regime: {0}")]
    DegenerateRegime(&'static str),

    #[error("Langevin correlations require gamma_b = gamma_c = gamma_ba = gamma_ac")]
    UnequalDecayRates,

    #[error("spectra are sampled on different frequency grids")]
    GridMismatch,

    #[error("imaginary residue {0:e} in a spectrum that must be real")]
    ImaginaryResidue(f64),

    #[error("time step {step:e} s too coarse: local error estimate {estimate:e} exceeds tolerance")]
    StepSizeTooCoarse { step: f64, estimate: f64 },

    #[error("output pulse carries no measurable energy")]
    NoPeak,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
