//! `xqcorr` command line: quantum correlation measures for two-qubit X
//! states and their dynamics under dephasing and collective radiative decay.
//!
//! Exit codes: 0 success, 1 verification failure (or I/O trouble), 2 parse
//! error, 3 invalid state.

mod config;
mod sweeps;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::CliConfigError;
use xqcorr::measures::measure_set;

#[derive(Parser)]
#[command(
    name = "xqcorr",
    about = "Local quantum uncertainty, trace-distance discord and concurrence for two-qubit X states under decoherence",
    long_about = None,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the three measures on a state file.
    ///
    /// State files are lines of `key = float` with `#` comments. Use either
    /// the matrix keys {rho11, rho22, rho33, rho44, re14, im14, re23, im23}
    /// or the Bell-diagonal keys {c1, c2, c3}; the families cannot be mixed.
    Measures {
        /// Path to the state file.
        #[arg(long)]
        state: PathBuf,
        /// Also write the measures as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Sweep the dephasing model and write PREFIX.csv/PREFIX.json.
    ///
    /// Config keys: c1, c2, c3, s, lambda, omega, beta ('inf' for T = 0),
    /// optional v1, v2 (default omega), t_max (default 10/omega), n_steps
    /// (default 400). CSV columns: t,gamma_t,lqu,d_t,conc.
    DephasingSweep {
        #[arg(long)]
        config: PathBuf,
        /// Output path prefix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep the radiative model and write PREFIX.csv/PREFIX.json.
    ///
    /// Config keys: gamma_ratio OR both k0r and mu_dot_rhat (mutually
    /// exclusive), optional tau_max (default 5), n_steps (default 400).
    /// CSV columns: tau,a,b,c,lqu,d_t,conc.
    RadiativeSweep {
        #[arg(long)]
        config: PathBuf,
        /// Output path prefix.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the oracle batteries; exit 0 only if every check passes.
    Verify {
        /// Seed for all randomized batteries.
        #[arg(long, default_value_t = 12345)]
        seed: u64,
        /// Simplex restarts per state in the discord search.
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        /// LQU battery size (the discord battery uses a tenth of this).
        #[arg(long, default_value_t = 1000)]
        battery: usize,
        /// Write the full verdict list as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INVALID_STATE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Measures { state, json } => cmd_measures(&state, json.as_deref()),
        Command::DephasingSweep { config, out } => cmd_dephasing_sweep(&config, &out),
        Command::RadiativeSweep { config, out } => cmd_radiative_sweep(&config, &out),
        Command::Verify {
            seed,
            restarts,
            battery,
            json,
        } => cmd_verify(seed, restarts, battery, json.as_deref()),
    }
}

fn read_file(path: &std::path::Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

fn write_file(path: &std::path::Path, contents: &str) -> Result<(), ExitCode> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(EXIT_VERIFY_FAILED)
    })
}

#[derive(Serialize)]
struct MeasuresJson {
    lqu: f64,
    trace_discord: f64,
    concurrence: f64,
}

fn cmd_measures(state_path: &std::path::Path, json: Option<&std::path::Path>) -> ExitCode {
    let text = match read_file(state_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let spec = match config::parse_state_file(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let state = match spec.build() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_STATE);
        }
    };
    let m = match measure_set(&state) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_STATE);
        }
    };

    // 12 significant digits.
    println!("lqu           = {:.11e}", m.lqu);
    println!("trace_discord = {:.11e}", m.trace_discord);
    println!("concurrence   = {:.11e}", m.concurrence);

    if let Some(json_path) = json {
        let payload = MeasuresJson {
            lqu: m.lqu,
            trace_discord: m.trace_discord,
            concurrence: m.concurrence,
        };
        let body = serde_json::to_string_pretty(&payload).expect("measures serialize") + "\n";
        if let Err(code) = write_file(json_path, &body) {
            return code;
        }
    }
    ExitCode::SUCCESS
}

fn config_error_exit(e: &CliConfigError) -> ExitCode {
    eprintln!("error: {e}");
    match e {
        CliConfigError::Parse(_) => ExitCode::from(EXIT_PARSE),
        CliConfigError::Invalid(_) => ExitCode::from(EXIT_INVALID_STATE),
    }
}

fn write_sweep(out: &std::path::Path, output: &sweeps::SweepOutput) -> Result<(), ExitCode> {
    let csv_path = out.with_extension("csv");
    let json_path = out.with_extension("json");
    write_file(&csv_path, &output.csv)?;
    write_file(&json_path, &output.json)?;
    println!("wrote {} and {}", csv_path.display(), json_path.display());
    Ok(())
}

fn cmd_dephasing_sweep(config_path: &std::path::Path, out: &std::path::Path) -> ExitCode {
    let text = match read_file(config_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let cfg = match config::parse_dephasing_config(&text) {
        Ok(c) => c,
        Err(e) => return config_error_exit(&e),
    };
    let output = match sweeps::run_dephasing_sweep(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_STATE);
        }
    };
    match write_sweep(out, &output) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn cmd_radiative_sweep(config_path: &std::path::Path, out: &std::path::Path) -> ExitCode {
    let text = match read_file(config_path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let cfg = match config::parse_radiative_config(&text) {
        Ok(c) => c,
        Err(e) => return config_error_exit(&e),
    };
    let output = match sweeps::run_radiative_sweep(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_STATE);
        }
    };
    match write_sweep(out, &output) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}

fn cmd_verify(
    seed: u64,
    restarts: usize,
    battery: usize,
    json: Option<&std::path::Path>,
) -> ExitCode {
    let opts = verify::VerifyOptions {
        seed,
        restarts,
        battery,
    };
    let report = verify::run_verify(&opts);
    for check in &report.checks {
        println!(
            "{:<40} max deviation {:>12.5e}  (tolerance {:.0e})  {}",
            check.name,
            check.max_deviation,
            check.tolerance,
            if check.pass { "pass" } else { "FAIL" }
        );
        if !check.notes.is_empty() {
            println!("{:<40} note: {}", "", check.notes);
        }
    }
    if let Some(json_path) = json {
        let body = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
        if let Err(code) = write_file(json_path, &body) {
            return code;
        }
    }
    if report.all_pass {
        println!("all checks passed");
        ExitCode::SUCCESS
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        eprintln!("verification failed: {}", failed.join(", "));
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}
