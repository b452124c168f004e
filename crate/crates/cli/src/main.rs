use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdf_cli::csv::plot_script;
use qdf_cli::runner::{assemble, thread_cap};
use qdf_cli::{run_baseline, run_figure, run_single, run_verify, CliError, FigureKind, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "qdf", version, about = "Charge qubits under an island QPC detector")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one trajectory and write `t,F,trace_err,pop_*` as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Reproduce one figure's data set as CSV plus a gnuplot script.
    Figure {
        figure: FigureKind,
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON config overriding the shared defaults (Ω, dt, t_end, ...).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Fidelity under pure collective dephasing.
    Baseline {
        #[arg(long)]
        state: String,
        #[arg(long = "gamma-d", allow_negative_numbers = true)]
        gamma_d: f64,
        #[arg(long = "t-end", default_value_t = 50.0)]
        t_end: f64,
        #[arg(long = "sample-interval", default_value_t = 0.5)]
        sample_interval: f64,
    },
    /// Run the invariant and oracle self-checks.
    Verify,
    /// Print the generator entries of a configuration, one per line.
    DumpGenerator {
        #[arg(long)]
        config: PathBuf,
    },
}

fn write_csv_with_script(csv_path: &Path, csv: &str, script: impl FnOnce(&str) -> String) -> Result<(), CliError> {
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(csv_path, csv)?;
    let file_name = csv_path.file_name().and_then(|f| f.to_str()).unwrap_or("out.csv");
    fs::write(csv_path.with_extension("gp"), script(file_name))?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { config } => {
            let cfg = RunConfig::load(&config)?;
            let report = run_single(&cfg.resolve()?)?;
            let csv = report.table.to_csv();
            match &cfg.output {
                Some(path) => {
                    write_csv_with_script(path, &csv, |name| plot_script(name, &report.table, "value"))?;
                    eprintln!("wrote {}", path.display());
                }
                None => print!("{csv}"),
            }
            eprintln!(
                "F(t_end) = {:.12}, max trace error {:.2e}, max hermiticity defect {:.2e}",
                report.final_fidelity, report.max_trace_error, report.max_hermiticity_defect
            );
        }
        Command::Figure { figure, out, config } => {
            let base = match config {
                Some(path) => RunConfig::load(&path)?,
                None => RunConfig::default(),
            };
            let fig = run_figure(figure, &base, thread_cap()?)?;
            fs::create_dir_all(&out)?;
            let csv_path = out.join(format!("{}.csv", fig.name));
            fs::write(&csv_path, fig.table.to_csv())?;
            fs::write(out.join(format!("{}.gp", fig.name)), &fig.script)?;
            eprintln!("wrote {}", csv_path.display());
        }
        Command::Baseline { state, gamma_d, t_end, sample_interval } => {
            print!("{}", run_baseline(&state, gamma_d, t_end, sample_interval)?.to_csv());
        }
        Command::Verify => {
            let checks = run_verify()?;
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            println!("{} checks, {failed} failed", checks.len());
            if failed > 0 {
                return Err(CliError::Checks(failed));
            }
        }
        Command::DumpGenerator { config } => {
            let cfg = RunConfig::load(&config)?;
            print!("{}", assemble(&cfg.resolve()?)?.dump());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
