use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, ValueEnum};
use slowlight::commands::{self, Command, RunOptions};
use slowlight::{CliError, Scenario, Table};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Action {
    Figures,
    Squeezing,
    Entanglement,
    Oracle,
    Sweep,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Swept {
    Figures,
    Squeezing,
    Entanglement,
    Oracle,
}

impl From<Swept> for Command {
    fn from(s: Swept) -> Self {
        match s {
            Swept::Figures => Command::Figures,
            Swept::Squeezing => Command::Squeezing,
            Swept::Entanglement => Command::Entanglement,
            Swept::Oracle => Command::Oracle,
        }
    }
}

/// Squeezing and entanglement of slow light in an EIT cell.
#[derive(Debug, Parser)]
#[command(name = "slowlight", version)]
struct Args {
    #[arg(value_enum)]
    command: Action,
    /// Scenario file (JSON).
    #[arg(long)]
    scenario: PathBuf,
    /// Output CSV file.
    #[arg(long)]
    out: PathBuf,
    /// Omit the `# generated_at_unix=` header line.
    #[arg(long)]
    no_timestamp: bool,
    /// Resample the analysis range with N points.
    #[arg(long, value_name = "N")]
    grid_points: Option<usize>,
    /// Command repeated over the sweep axis by `sweep`.
    #[arg(long, value_enum, default_value = "figures")]
    of: Swept,
    /// With `oracle`: also write the envelope ℰ(z, t) to this CSV file.
    #[arg(long, value_name = "FILE")]
    dump_field: Option<PathBuf>,
}

fn write_table(table: &Table, path: &Path) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    table.write(BufWriter::new(file))
}

fn stamp(table: &mut Table, no_timestamp: bool) {
    if !no_timestamp {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        table.comments.insert(0, format!("generated_at_unix={now}"));
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    if args.dump_field.is_some() && !matches!(args.command, Action::Oracle) {
        return Err(CliError::Invalid("--dump-field: only valid with `oracle`".into()));
    }
    let scenario = Scenario::load(&args.scenario)?;
    let options = RunOptions {
        grid_points: args.grid_points,
    };
    let mut table = match args.command {
        Action::Figures => commands::run(&scenario, Command::Figures, &options)?,
        Action::Squeezing => commands::run(&scenario, Command::Squeezing, &options)?,
        Action::Entanglement => commands::run(&scenario, Command::Entanglement, &options)?,
        Action::Oracle => {
            let (table, field) = commands::oracle(&scenario)?;
            if let Some(path) = &args.dump_field {
                let mut dump = commands::field_table(&field);
                stamp(&mut dump, args.no_timestamp);
                write_table(&dump, path)?;
            }
            table
        }
        Action::Sweep => commands::sweep(&scenario, args.of.into(), &options)?,
    };
    stamp(&mut table, args.no_timestamp);
    write_table(&table, &args.out)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("slowlight: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
