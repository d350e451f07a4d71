//! Scenario files: a JSON tree describing the cell, the probe input, the
//! analysis grid and an optional sweep axis.
//!
//! ```json
//! {
//!   "medium": {
//!     "length": "3.5 cm", "density": "1e12 cm^-3", "beam_area": "1 mm^2",
//!     "gamma_ba": "6pi MHz", "gamma_bc": "10 Hz", "omega_c": "30pi MHz",
//!     "calibrate_vg": "3100 m/s"
//!   },
//!   "input": { "squeezed": { "s_min": 0.4 } },
//!   "analysis": { "omegas": ["1 MHz"] },
//!   "sweep": { "parameter": "gamma_bc", "values": ["10 Hz", "5 kHz"] }
//! }
//! ```

use std::path::Path;

use serde::Deserialize;
use slowlight_core::oracle::{OracleGrid, PulseSpec};
use slowlight_core::spectra::{make_epr_input, EntangledInput, FrequencyGrid, FrequencyProfile, SqueezedInput};
use slowlight_core::MediumParams;

use crate::error::CliError;
use crate::units::{AngularConvention, Dimension, Quantity};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    angular_convention: AngularConvention,
    medium: MediumSection,
    input: InputSection,
    analysis: Option<AnalysisSection>,
    oracle: Option<OracleSection>,
    sweep: Option<SweepSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MediumSection {
    length: Quantity,
    density: Option<Quantity>,
    beam_area: Option<Quantity>,
    atom_number: Option<Quantity>,
    gamma_ba: Quantity,
    gamma_bc: Quantity,
    gamma_b: Option<Quantity>,
    gamma_c: Option<Quantity>,
    gamma_ac: Option<Quantity>,
    omega_c: Quantity,
    coupling: Option<Quantity>,
    calibrate_vg: Option<Quantity>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum InputSection {
    Squeezed(SqueezedSection),
    Entangled(EntangledSection),
    Pulse(PulseSection),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SqueezedSection {
    s_min: Quantity,
    s_max: Option<Quantity>,
    theta: Option<Quantity>,
    profile: Option<ProfileSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntangledSection {
    duan: Option<Quantity>,
    r: Option<Quantity>,
    excess_noise: Option<Quantity>,
    theta: Option<Quantity>,
    phi: Option<Quantity>,
    profile: Option<ProfileSection>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum ProfileSection {
    Flat,
    Lorentzian { half_width: Quantity },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PulseSection {
    center_time: Quantity,
    rms_width: Quantity,
    peak_amplitude: Quantity,
    carrier_detuning: Option<Quantity>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalysisSection {
    min: Option<Quantity>,
    max: Option<Quantity>,
    points: Option<usize>,
    omegas: Option<Vec<Quantity>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OracleSection {
    nz: Option<usize>,
    nt: Option<usize>,
    duration: Option<Quantity>,
    #[serde(default)]
    convergence: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    parameter: String,
    values: Vec<Quantity>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    Fixed(f64),
    /// Pick g so that the cell has this group velocity.
    Calibrated(f64),
}

/// Cell parameters in SI units, before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct MediumSpec {
    pub length: f64,
    pub density: Option<f64>,
    pub beam_area: Option<f64>,
    pub atom_number: Option<f64>,
    pub gamma_ba: f64,
    pub gamma_bc: f64,
    pub gamma_b: Option<f64>,
    pub gamma_c: Option<f64>,
    pub gamma_ac: Option<f64>,
    pub omega_c: f64,
    pub coupling: Coupling,
}

impl MediumSpec {
    pub fn build(&self) -> Result<MediumParams, CliError> {
        let mut b = MediumParams::builder()
            .length(self.length)
            .gamma_ba(self.gamma_ba)
            .gamma_bc(self.gamma_bc)
            .omega_c(self.omega_c);
        if let Some(v) = self.density {
            b = b.density(v);
        }
        if let Some(v) = self.beam_area {
            b = b.beam_area(v);
        }
        if let Some(v) = self.atom_number {
            b = b.atom_number(v);
        }
        if let Some(v) = self.gamma_b {
            b = b.gamma_b(v);
        }
        if let Some(v) = self.gamma_c {
            b = b.gamma_c(v);
        }
        if let Some(v) = self.gamma_ac {
            b = b.gamma_ac(v);
        }
        match self.coupling {
            Coupling::Fixed(g) => b.coupling(g).build().map_err(|e| CliError::core("medium", e)),
            Coupling::Calibrated(vg) => b
                .build()
                .map_err(|e| CliError::core("medium", e))?
                .calibrated(vg)
                .map_err(|e| CliError::core("medium.calibrate_vg", e)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    Squeezed {
        s_min: f64,
        /// `None` means the minimum-uncertainty partner `1/s_min`.
        s_max: Option<f64>,
        theta: f64,
        profile: FrequencyProfile,
    },
    Entangled {
        r: f64,
        excess_noise: f64,
        theta: f64,
        phi: f64,
        profile: FrequencyProfile,
    },
    Pulse {
        center_time: f64,
        rms_width: f64,
        peak_amplitude: f64,
        carrier_detuning: f64,
    },
}

impl InputSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            InputSpec::Squeezed { .. } => "squeezed",
            InputSpec::Entangled { .. } => "entangled",
            InputSpec::Pulse { .. } => "pulse",
        }
    }

    pub fn squeezed(&self) -> Result<Option<SqueezedInput>, CliError> {
        let InputSpec::Squeezed { s_min, s_max, theta, profile } = *self else {
            return Ok(None);
        };
        let input = SqueezedInput::new(s_min, s_max.unwrap_or(1.0 / s_min), theta)
            .and_then(|i| i.with_profile(profile))
            .map_err(|e| CliError::core("input.squeezed", e))?;
        Ok(Some(input))
    }

    /// The entangled pair with its quadrature angles (θ, φ).
    pub fn entangled(&self) -> Result<Option<(EntangledInput, f64, f64)>, CliError> {
        let InputSpec::Entangled { r, excess_noise, theta, phi, profile } = *self else {
            return Ok(None);
        };
        let input = EntangledInput::new(r, excess_noise)
            .and_then(|i| i.with_profile(profile))
            .map_err(|e| CliError::core("input.entangled", e))?;
        Ok(Some((input, theta, phi)))
    }

    pub fn pulse(&self) -> Result<Option<PulseSpec>, CliError> {
        let InputSpec::Pulse { center_time, rms_width, peak_amplitude, carrier_detuning } = *self else {
            return Ok(None);
        };
        let pulse = PulseSpec::gaussian(center_time, rms_width, peak_amplitude)
            .map_err(|e| CliError::core("input.pulse", e))?
            .detuned(carrier_detuning);
        Ok(Some(pulse))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Range { min: f64, max: f64, points: usize },
    List(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub nz: usize,
    pub nt: usize,
    /// Retarded-time window; by default sized from the pulse and the delay.
    pub duration: Option<f64>,
    /// Also run on the grid refined by two in both directions.
    pub convergence: bool,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            nz: 512,
            nt: 8192,
            duration: None,
            convergence: false,
        }
    }
}

impl OracleSettings {
    pub fn grid(&self, params: &MediumParams, pulse: &PulseSpec) -> Result<OracleGrid, CliError> {
        let grid = match self.duration {
            Some(d) => OracleGrid::new(self.nz, self.nt, d),
            None => OracleGrid::for_pulse(params, pulse, self.nz, self.nt),
        };
        grid.map_err(|e| CliError::core("oracle", e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub parameter: String,
    /// SI values.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub medium_spec: MediumSpec,
    /// The validated cell, with g resolved.
    pub medium: MediumParams,
    pub input: InputSpec,
    pub analysis: Option<GridSpec>,
    pub oracle: OracleSettings,
    pub sweep: Option<Sweep>,
}

const MEDIUM_FIELDS: &[(&str, Dimension)] = &[
    ("length", Dimension::Length),
    ("density", Dimension::Density),
    ("beam_area", Dimension::Area),
    ("atom_number", Dimension::Dimensionless),
    ("gamma_ba", Dimension::Rate),
    ("gamma_bc", Dimension::Rate),
    ("gamma_b", Dimension::Rate),
    ("gamma_c", Dimension::Rate),
    ("gamma_ac", Dimension::Rate),
    ("omega_c", Dimension::Rate),
    ("coupling", Dimension::Rate),
    ("calibrate_vg", Dimension::Velocity),
];

fn input_fields(kind: &str) -> &'static [(&'static str, Dimension)] {
    match kind {
        "squeezed" => &[
            ("s_min", Dimension::Dimensionless),
            ("s_max", Dimension::Dimensionless),
            ("theta", Dimension::Angle),
        ],
        "entangled" => &[
            ("duan", Dimension::Dimensionless),
            ("r", Dimension::Dimensionless),
            ("excess_noise", Dimension::Dimensionless),
            ("theta", Dimension::Angle),
            ("phi", Dimension::Angle),
        ],
        _ => &[
            ("center_time", Dimension::Time),
            ("rms_width", Dimension::Time),
            ("peak_amplitude", Dimension::Dimensionless),
            ("carrier_detuning", Dimension::Rate),
        ],
    }
}

struct Resolver {
    convention: AngularConvention,
}

impl Resolver {
    fn get(&self, field: &str, q: &Quantity, dimension: Dimension) -> Result<f64, CliError> {
        q.resolve(dimension, self.convention)
            .map_err(|e| CliError::Invalid(format!("{field}: {e}")))
    }

    fn opt(&self, field: &str, q: &Option<Quantity>, dimension: Dimension) -> Result<Option<f64>, CliError> {
        q.as_ref().map(|q| self.get(field, q, dimension)).transpose()
    }

    fn profile(&self, field: &str, p: &Option<ProfileSection>) -> Result<FrequencyProfile, CliError> {
        Ok(match p {
            None | Some(ProfileSection::Flat) => FrequencyProfile::Flat,
            Some(ProfileSection::Lorentzian { half_width }) => FrequencyProfile::Lorentzian {
                half_width: self.get(&format!("{field}.lorentzian.half_width"), half_width, Dimension::Rate)?,
            },
        })
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                CliError::Invalid(e.inner().to_string())
            } else {
                CliError::Invalid(format!("{path}: {}", e.inner()))
            }
        })?;
        Self::resolve(file)
    }

    fn resolve(file: ScenarioFile) -> Result<Self, CliError> {
        let r = Resolver {
            convention: file.angular_convention,
        };
        let m = &file.medium;
        let coupling = match (&m.coupling, &m.calibrate_vg) {
            (Some(g), None) => Coupling::Fixed(r.get("medium.coupling", g, Dimension::Rate)?),
            (None, Some(v)) => Coupling::Calibrated(r.get("medium.calibrate_vg", v, Dimension::Velocity)?),
            _ => {
                return Err(CliError::Invalid(
                    "medium: give exactly one of `coupling` and `calibrate_vg`".into(),
                ))
            }
        };
        let medium_spec = MediumSpec {
            length: r.get("medium.length", &m.length, Dimension::Length)?,
            density: r.opt("medium.density", &m.density, Dimension::Density)?,
            beam_area: r.opt("medium.beam_area", &m.beam_area, Dimension::Area)?,
            atom_number: r.opt("medium.atom_number", &m.atom_number, Dimension::Dimensionless)?,
            gamma_ba: r.get("medium.gamma_ba", &m.gamma_ba, Dimension::Rate)?,
            gamma_bc: r.get("medium.gamma_bc", &m.gamma_bc, Dimension::Rate)?,
            gamma_b: r.opt("medium.gamma_b", &m.gamma_b, Dimension::Rate)?,
            gamma_c: r.opt("medium.gamma_c", &m.gamma_c, Dimension::Rate)?,
            gamma_ac: r.opt("medium.gamma_ac", &m.gamma_ac, Dimension::Rate)?,
            omega_c: r.get("medium.omega_c", &m.omega_c, Dimension::Rate)?,
            coupling,
        };
        let medium = medium_spec.build()?;

        let input = match &file.input {
            InputSection::Squeezed(s) => InputSpec::Squeezed {
                s_min: r.get("input.squeezed.s_min", &s.s_min, Dimension::Dimensionless)?,
                s_max: r.opt("input.squeezed.s_max", &s.s_max, Dimension::Dimensionless)?,
                theta: r.opt("input.squeezed.theta", &s.theta, Dimension::Angle)?.unwrap_or(0.0),
                profile: r.profile("input.squeezed.profile", &s.profile)?,
            },
            InputSection::Entangled(e) => {
                let r_value = match (&e.duan, &e.r) {
                    (Some(d), None) => {
                        let d = r.get("input.entangled.duan", d, Dimension::Dimensionless)?;
                        make_epr_input(d)
                            .map_err(|err| CliError::core("input.entangled", err))?
                            .r()
                    }
                    (None, Some(v)) => r.get("input.entangled.r", v, Dimension::Dimensionless)?,
                    _ => {
                        return Err(CliError::Invalid(
                            "input.entangled: give exactly one of `duan` and `r`".into(),
                        ))
                    }
                };
                InputSpec::Entangled {
                    r: r_value,
                    excess_noise: r
                        .opt("input.entangled.excess_noise", &e.excess_noise, Dimension::Dimensionless)?
                        .unwrap_or(0.0),
                    theta: r.opt("input.entangled.theta", &e.theta, Dimension::Angle)?.unwrap_or(0.0),
                    phi: r.opt("input.entangled.phi", &e.phi, Dimension::Angle)?.unwrap_or(0.0),
                    profile: r.profile("input.entangled.profile", &e.profile)?,
                }
            }
            InputSection::Pulse(p) => InputSpec::Pulse {
                center_time: r.get("input.pulse.center_time", &p.center_time, Dimension::Time)?,
                rms_width: r.get("input.pulse.rms_width", &p.rms_width, Dimension::Time)?,
                peak_amplitude: r.get("input.pulse.peak_amplitude", &p.peak_amplitude, Dimension::Dimensionless)?,
                carrier_detuning: r
                    .opt("input.pulse.carrier_detuning", &p.carrier_detuning, Dimension::Rate)?
                    .unwrap_or(0.0),
            },
        };

        let analysis = file
            .analysis
            .as_ref()
            .map(|a| match (&a.min, &a.max, a.points, &a.omegas) {
                (Some(min), Some(max), Some(points), None) => Ok(GridSpec::Range {
                    min: r.get("analysis.min", min, Dimension::Rate)?,
                    max: r.get("analysis.max", max, Dimension::Rate)?,
                    points,
                }),
                (None, None, None, Some(list)) => list
                    .iter()
                    .enumerate()
                    .map(|(i, q)| r.get(&format!("analysis.omegas[{i}]"), q, Dimension::Rate))
                    .collect::<Result<Vec<_>, _>>()
                    .map(GridSpec::List),
                _ => Err(CliError::Invalid(
                    "analysis: give either `min`, `max` and `points`, or `omegas`".into(),
                )),
            })
            .transpose()?;

        let oracle = match &file.oracle {
            None => OracleSettings::default(),
            Some(o) => OracleSettings {
                nz: o.nz.unwrap_or(512),
                nt: o.nt.unwrap_or(8192),
                duration: r.opt("oracle.duration", &o.duration, Dimension::Time)?,
                convergence: o.convergence,
            },
        };

        let sweep = file
            .sweep
            .as_ref()
            .map(|s| {
                let dimension = MEDIUM_FIELDS
                    .iter()
                    .chain(input_fields(input.kind()))
                    .find(|(name, _)| *name == s.parameter)
                    .map(|(_, d)| *d)
                    .ok_or_else(|| {
                        CliError::Invalid(format!(
                            "sweep.parameter: `{}` is not a medium field or a field of the {} input",
                            s.parameter,
                            input.kind()
                        ))
                    })?;
                if s.values.is_empty() {
                    return Err(CliError::Invalid("sweep.values: the sweep list is empty".into()));
                }
                let values = s
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, q)| r.get(&format!("sweep.values[{i}]"), q, dimension))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Sweep {
                    parameter: s.parameter.clone(),
                    values,
                })
            })
            .transpose()?;

        let scenario = Scenario {
            medium_spec,
            medium,
            input,
            analysis,
            oracle,
            sweep,
        };
        // Surface input errors at load time rather than mid-run.
        scenario.input.squeezed()?;
        scenario.input.entangled()?;
        scenario.input.pulse()?;
        Ok(scenario)
    }

    /// The analysis grid, optionally with `points` samples over the same range.
    pub fn grid(&self, points: Option<usize>) -> Result<FrequencyGrid, CliError> {
        let spec = self
            .analysis
            .as_ref()
            .ok_or_else(|| CliError::Invalid("analysis: this command needs an analysis grid".into()))?;
        let grid = match (spec, points) {
            (GridSpec::Range { min, max, points: default }, n) => {
                FrequencyGrid::linspace(*min, *max, n.unwrap_or(*default))
            }
            (GridSpec::List(_), Some(_)) => {
                return Err(CliError::Invalid(
                    "analysis.omegas: --grid-points needs a `min`/`max` grid".into(),
                ))
            }
            (GridSpec::List(list), None) => FrequencyGrid::new(list.clone()),
        };
        grid.map_err(|e| CliError::core("analysis", e))
    }

    /// This scenario with one field changed. The coupling found for the base
    /// cell is kept unless the field is `coupling` or `calibrate_vg` itself.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Scenario, CliError> {
        let mut next = self.clone();
        let spec = &mut next.medium_spec;
        spec.coupling = Coupling::Fixed(self.medium.coupling());
        let mut medium_changed = true;
        match name {
            "length" | "density" | "beam_area" => {
                match name {
                    "length" => spec.length = value,
                    "density" => spec.density = Some(value),
                    _ => spec.beam_area = Some(value),
                }
                if spec.density.is_some() && spec.beam_area.is_some() {
                    spec.atom_number = None;
                }
            }
            "atom_number" => {
                spec.atom_number = Some(value);
                spec.density = None;
                spec.beam_area = None;
            }
            "gamma_ba" => spec.gamma_ba = value,
            "gamma_bc" => spec.gamma_bc = value,
            "gamma_b" => spec.gamma_b = Some(value),
            "gamma_c" => spec.gamma_c = Some(value),
            "gamma_ac" => spec.gamma_ac = Some(value),
            "omega_c" => spec.omega_c = value,
            "coupling" => spec.coupling = Coupling::Fixed(value),
            "calibrate_vg" => spec.coupling = Coupling::Calibrated(value),
            _ => {
                medium_changed = false;
                set_input_field(&mut next.input, name, value)?;
            }
        }
        if medium_changed {
            next.medium = next
                .medium_spec
                .build()
                .map_err(|e| prefix(e, &format!("sweep {name} = {value}")))?;
        }
        next.input.squeezed()?;
        next.input.entangled()?;
        next.input.pulse()?;
        Ok(next)
    }
}

fn prefix(error: CliError, context: &str) -> CliError {
    match error {
        CliError::Invalid(m) => CliError::Invalid(format!("{context}: {m}")),
        CliError::Degenerate(m) => CliError::Degenerate(format!("{context}: {m}")),
        CliError::Convergence(m) => CliError::Convergence(format!("{context}: {m}")),
    }
}

fn set_input_field(input: &mut InputSpec, name: &str, value: f64) -> Result<(), CliError> {
    match (input, name) {
        (InputSpec::Squeezed { s_min, .. }, "s_min") => *s_min = value,
        (InputSpec::Squeezed { s_max, .. }, "s_max") => *s_max = Some(value),
        (InputSpec::Squeezed { theta, .. }, "theta") => *theta = value,
        (InputSpec::Entangled { r, .. }, "duan") => {
            *r = make_epr_input(value).map_err(|e| CliError::core("sweep duan", e))?.r()
        }
        (InputSpec::Entangled { r, .. }, "r") => *r = value,
        (InputSpec::Entangled { excess_noise, .. }, "excess_noise") => *excess_noise = value,
        (InputSpec::Entangled { theta, .. }, "theta") => *theta = value,
        (InputSpec::Entangled { phi, .. }, "phi") => *phi = value,
        (InputSpec::Pulse { center_time, .. }, "center_time") => *center_time = value,
        (InputSpec::Pulse { rms_width, .. }, "rms_width") => *rms_width = value,
        (InputSpec::Pulse { peak_amplitude, .. }, "peak_amplitude") => *peak_amplitude = value,
        (InputSpec::Pulse { carrier_detuning, .. }, "carrier_detuning") => *carrier_detuning = value,
        (input, _) => {
            return Err(CliError::Invalid(format!(
                "sweep.parameter: `{name}` is not a field of the {} input",
                input.kind()
            )))
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CELL: &str = r#"{
        "medium": {
            "length": "3.5 cm", "density": "1e12 cm^-3", "beam_area": "1 mm^2",
            "gamma_ba": "6pi MHz", "gamma_bc": "10 Hz", "omega_c": "30pi MHz",
            "calibrate_vg": "3100 m/s"
        },
        "input": { "squeezed": { "s_min": 0.4 } },
        "analysis": { "omegas": ["1 MHz"] }
    }"#;

    fn with(replace: &str, by: &str) -> Result<Scenario, CliError> {
        Scenario::from_json(&CELL.replace(replace, by))
    }

    fn message(r: Result<Scenario, CliError>) -> String {
        r.unwrap_err().to_string()
    }

    #[test]
    fn reference_cell_resolves() {
        let s = Scenario::from_json(CELL).unwrap();
        assert!((s.medium.length() - 0.035).abs() < 1e-15);
        assert_eq!(s.medium.gamma_bc(), 10.0);
        let vg = s.medium.derived_figures().unwrap().group_velocity;
        assert!((vg - 3100.0).abs() < 1e-8);
        assert_eq!(s.grid(None).unwrap().omegas(), &[1e6]);
        assert!(matches!(s.input, InputSpec::Squeezed { s_max: None, .. }));
    }

    #[test]
    fn errors_name_the_field() {
        assert!(message(with(r#""10 Hz""#, "10")).contains("medium.gamma_bc"));
        assert!(message(with(r#""3.5 cm""#, r#""3.5 Hz""#)).contains("medium.length"));
        assert!(message(with(r#""s_min": 0.4"#, r#""s_min": 0.4, "colour": 1"#)).contains("colour"));
        assert!(message(with(r#""calibrate_vg": "3100 m/s""#, r#""coupling": "1 rad/s", "calibrate_vg": "3100 m/s""#))
            .contains("exactly one"));
        assert!(message(with(r#""s_min": 0.4"#, r#""s_min": 1.4"#)).contains("s_min"));
    }

    #[test]
    fn exactly_one_input_kind() {
        let two = r#""input": { "squeezed": { "s_min": 0.4 }, "entangled": { "duan": 0.4 } }"#;
        assert!(with(r#""input": { "squeezed": { "s_min": 0.4 } }"#, two).is_err());
        assert!(with(r#""input": { "squeezed": { "s_min": 0.4 } }"#, r#""input": {}"#).is_err());
    }

    #[test]
    fn degenerate_cell_is_classified() {
        let e = with(r#""30pi MHz""#, r#""5 Hz""#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn sweeps_resolve_units_and_reject_empty_lists() {
        let sweep = r#""analysis": { "omegas": ["1 MHz"] }, "sweep": { "parameter": "gamma_bc", "values": ["10 Hz", "5 kHz"] }"#;
        let s = with(r#""analysis": { "omegas": ["1 MHz"] }"#, sweep).unwrap();
        assert_eq!(s.sweep.as_ref().unwrap().values, vec![10.0, 5000.0]);

        let empty = r#""analysis": { "omegas": ["1 MHz"] }, "sweep": { "parameter": "gamma_bc", "values": [] }"#;
        let e = with(r#""analysis": { "omegas": ["1 MHz"] }"#, empty).unwrap_err();
        assert_eq!(e.exit_code(), 1);
        assert!(e.to_string().contains("sweep.values"));

        let unknown = r#""analysis": { "omegas": ["1 MHz"] }, "sweep": { "parameter": "phi", "values": [1] }"#;
        assert!(message(with(r#""analysis": { "omegas": ["1 MHz"] }"#, unknown)).contains("sweep.parameter"));
    }

    #[test]
    fn sweep_keeps_base_coupling() {
        let s = Scenario::from_json(CELL).unwrap();
        let fast = s.with_parameter("gamma_bc", 5000.0).unwrap();
        assert_eq!(fast.medium.coupling(), s.medium.coupling());
        assert_eq!(fast.medium.gamma_bc(), 5000.0);
        let recalibrated = s.with_parameter("calibrate_vg", 1000.0).unwrap();
        let vg = recalibrated.medium.derived_figures().unwrap().group_velocity;
        assert!((vg - 1000.0).abs() < 1e-8);
    }

    #[test]
    fn grid_point_override() {
        let s = with(r#""omegas": ["1 MHz"]"#, r#""min": "-1 MHz", "max": "1 MHz", "points": 3"#).unwrap();
        assert_eq!(s.grid(None).unwrap().len(), 3);
        assert_eq!(s.grid(Some(11)).unwrap().len(), 11);
        assert!(Scenario::from_json(CELL).unwrap().grid(Some(5)).is_err());
    }

    #[test]
    fn cyclic_convention() {
        let text = CELL.replacen('{', r#"{ "angular_convention": "cyclic","#, 1);
        let s = Scenario::from_json(&text).unwrap();
        assert!((s.medium.gamma_bc() - 20.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
