//! The report each CLI command produces from a scenario.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use slowlight_core::oracle::{compare_with_transfer, propagate, OracleGrid, PulseField};
use slowlight_core::spectra::{
    duan_measure, entanglement_out_approx, entanglement_out_full, noise_floor_curve, squeezing_out,
    transmission, FrequencyGrid,
};

use crate::error::CliError;
use crate::fft::RustFft;
use crate::scenario::Scenario;
use crate::table::Table;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Figures,
    Squeezing,
    Entanglement,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Figures => "figures",
            Command::Squeezing => "squeezing",
            Command::Entanglement => "entanglement",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Resample a `min`/`max` analysis grid with this many points.
    pub grid_points: Option<usize>,
}

pub fn run(scenario: &Scenario, command: Command, options: &RunOptions) -> Result<Table, CliError> {
    match command {
        Command::Figures => figures(scenario),
        Command::Squeezing => squeezing(scenario, &scenario.grid(options.grid_points)?),
        Command::Entanglement => entanglement(scenario, &scenario.grid(options.grid_points)?),
        Command::Oracle => oracle(scenario).map(|(table, _)| table),
    }
}

/// Repeat `command` at every value of the scenario's sweep axis. Points run in
/// parallel; rows keep the order of the sweep values.
pub fn sweep(scenario: &Scenario, command: Command, options: &RunOptions) -> Result<Table, CliError> {
    let axis = scenario
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Invalid("sweep: the scenario has no sweep section".into()))?;
    let column = format!("sweep_{}", axis.parameter);
    let tables = axis
        .values
        .par_iter()
        .map(|&value| {
            let point = scenario.with_parameter(&axis.parameter, value)?;
            Ok(run(&point, command, options)?.with_leading_column(&column, value))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut tables = tables.into_iter();
    let mut table = tables.next().expect("sweep lists are never empty");
    for t in tables {
        table.extend(t);
    }
    Ok(table)
}

pub fn figures(scenario: &Scenario) -> Result<Table, CliError> {
    let p = &scenario.medium;
    let f = p.derived_figures().map_err(|e| CliError::core("medium", e))?;
    let mut table = Table::new([
        "absorption_per_m",
        "group_velocity_m_per_s",
        "window_rad_per_s",
        "window_hz",
        "delay_s",
        "optical_depth",
        "coupling_rad_per_s",
    ]);
    table.push(vec![
        f.absorption,
        f.group_velocity,
        f.window,
        f.window / (2.0 * PI),
        f.delay,
        f.optical_depth(),
        p.coupling(),
    ]);
    Ok(table)
}

fn wrong_input(command: Command, needed: &str, scenario: &Scenario) -> CliError {
    CliError::Invalid(format!(
        "input: `{}` needs a {needed} input, the scenario has a {} input",
        command.name(),
        scenario.input.kind()
    ))
}

pub fn squeezing(scenario: &Scenario, grid: &FrequencyGrid) -> Result<Table, CliError> {
    let input = scenario
        .input
        .squeezed()?
        .ok_or_else(|| wrong_input(Command::Squeezing, "squeezed", scenario))?;
    let p = &scenario.medium;
    let context = |e| CliError::core("squeezing", e);
    let out = squeezing_out(p, &input, grid).map_err(context)?;
    let noise = noise_floor_curve(p, grid).map_err(context)?;
    let passed = transmission(p, grid).map_err(context)?;

    let mut table = Table::new(["omega_rad_per_s", "s_in", "s_out", "noise_floor", "transmission"]);
    for (i, &w) in grid.omegas().iter().enumerate() {
        table.push(vec![
            w,
            input.spectrum(w),
            out.values()[i],
            noise.values()[i],
            passed.values()[i],
        ]);
    }
    Ok(table)
}

pub fn entanglement(scenario: &Scenario, grid: &FrequencyGrid) -> Result<Table, CliError> {
    let (input, theta, phi) = scenario
        .input
        .entangled()?
        .ok_or_else(|| wrong_input(Command::Entanglement, "entangled", scenario))?;
    let p = &scenario.medium;
    let context = |e| CliError::core("entanglement", e);
    let (theta2, phi2) = (theta + FRAC_PI_2, phi - FRAC_PI_2);

    let a1 = entanglement_out_full(p, &input, theta, phi, grid).map_err(context)?;
    let a2 = entanglement_out_full(p, &input, theta2, phi2, grid).map_err(context)?;
    let duan = duan_measure(&a1, &a2).map_err(context)?;
    let b1 = entanglement_out_approx(p, &input, theta, phi, grid).map_err(context)?;
    let b2 = entanglement_out_approx(p, &input, theta2, phi2, grid).map_err(context)?;
    let approx = duan_measure(&b1.curve, &b2.curve).map_err(context)?;
    let flag = if b1.high_absorption { 1.0 } else { 0.0 };

    let mut table = Table::new([
        "omega_rad_per_s",
        "duan_in",
        "a_out",
        "a_out_conjugate",
        "duan_out",
        "duan_out_approx",
        "high_absorption",
    ]);
    for (i, &w) in grid.omegas().iter().enumerate() {
        table.push(vec![
            w,
            input.duan(theta, phi, w),
            a1.values()[i],
            a2.values()[i],
            duan.values()[i],
            approx.values()[i],
            flag,
        ]);
    }
    Ok(table)
}

const ORACLE_COLUMNS: [&str; 9] = [
    "nz",
    "nt",
    "relative_l2",
    "energy_time_domain",
    "energy_frequency_domain",
    "measured_delay_s",
    "group_delay_s",
    "max_error_estimate",
    "in_window",
];

/// Oracle report, plus the field of the first (unrefined) run.
pub fn oracle(scenario: &Scenario) -> Result<(Table, PulseField), CliError> {
    let pulse = scenario
        .input
        .pulse()?
        .ok_or_else(|| wrong_input(Command::Oracle, "pulse", scenario))?;
    let p = &scenario.medium;
    let delay = p.derived_figures().map_err(|e| CliError::core("medium", e))?.delay;
    let grid = scenario.oracle.grid(p, &pulse)?;

    let run = |grid: &OracleGrid| -> Result<(Vec<f64>, PulseField), CliError> {
        let context = |e| CliError::core(&format!("oracle nz={} nt={}", grid.nz(), grid.nt()), e);
        let field = propagate(p, &pulse, grid).map_err(context)?;
        let report = compare_with_transfer(p, &pulse, grid, &field, &RustFft::new(grid.nt())).map_err(context)?;
        let row = vec![
            grid.nz() as f64,
            grid.nt() as f64,
            report.relative_l2,
            report.energy_time_domain,
            report.energy_frequency_domain,
            report.measured_delay,
            delay,
            report.max_error_estimate,
            if report.in_window { 1.0 } else { 0.0 },
        ];
        Ok((row, field))
    };

    let mut table = Table::new(ORACLE_COLUMNS);
    let (row, field) = run(&grid)?;
    table.push(row);
    if scenario.oracle.convergence {
        table.push(run(&grid.refined())?.0);
    }
    Ok((table, field))
}

/// Envelope samples of an oracle run, one row per (z, t).
pub fn field_table(field: &PulseField) -> Table {
    let mut table = Table::new(["z_m", "t_s", "re_envelope", "im_envelope"]);
    let envelope = field.envelope();
    for (i, &z) in field.z_grid().iter().enumerate() {
        for (j, &t) in field.t_grid().iter().enumerate() {
            let v = envelope.get(i, j);
            table.push(vec![z, t, v.re, v.im]);
        }
    }
    table
}
