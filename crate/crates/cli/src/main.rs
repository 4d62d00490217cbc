use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ionpair::qcore::text::format_matrix;
use ionpair::runner::{
    analysis_loss, calibrate_heating, emit_report, fit_gaussian_decay_with, fit_summary_string, read_decay_csv,
    run_decay_experiment, tomography_after_delay, EstimationMode, FitOptions, CALIBRATION_TIME_S,
};
use ionpair::sequence::{prepare_bell, transfer_to_dfs};
use ionpair::tomo::io::write_counts_csv;
use ionpair::{best_phase, f_min, fidelity_vs_bell, Error, Result, Scenario};

#[derive(Parser)]
#[command(name = "ionpair", version, about = "Long-lived Bell state of two trapped ions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for every random draw
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Prepare the Bell state, transfer it, and print states and fidelities
    Prepare {
        #[command(flatten)]
        common: Common,
    },
    /// Simulate tomography after a storage delay and reconstruct the state
    Tomo {
        #[command(flatten)]
        common: Common,
        /// Storage delay in seconds
        #[arg(long, default_value_t = 1.0)]
        delay: f64,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
    },
    /// Run the storage-delay experiment, fit the decay and write the report
    Decay {
        #[command(flatten)]
        common: Common,
        /// full_tomography or parity_fmin
        #[arg(long)]
        mode: Option<String>,
        /// Fit a constant offset as well
        #[arg(long)]
        offset: bool,
    },
    /// Fit a Gaussian decay to a `t_s,fmin,stderr` CSV file
    Fit {
        curve: PathBuf,
        #[arg(long)]
        offset: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Calibrate the Lamb-Dicke factor from the heating-induced loss
    Calibrate {
        #[command(flatten)]
        common: Common,
    },
}

fn load_scenario(common: &Common) -> Result<Scenario> {
    let mut sc = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            Scenario::from_config_str(&text)?
        }
        None => Scenario::default(),
    };
    if let Some(seed) = common.seed {
        sc.seed = seed;
    }
    Ok(sc)
}

fn prepare(common: &Common) -> Result<()> {
    let sc = load_scenario(common)?;
    let prepared = prepare_bell(&sc.noise)?;
    let transferred = transfer_to_dfs(&prepared, &sc.noise)?;
    for (label, res) in [("prepared", &prepared), ("transferred", &transferred)] {
        let s = &res.state;
        println!("[{label}]");
        println!("fidelity = {}", fidelity_vs_bell(s, best_phase(s)));
        println!("fmin = {}", f_min(s));
        println!("{}", format_matrix(s.matrix()));
    }
    if let Some(dir) = &common.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("sequence.log"), transferred.log_text())?;
    }
    Ok(())
}

fn tomo(common: &Common, delay: f64, shots: u64) -> Result<()> {
    let sc = load_scenario(common)?;
    let snap = tomography_after_delay(&sc.noise, delay, shots, sc.seed)?;
    println!("delay_s = {delay}");
    println!("fidelity = {}", snap.fidelity);
    println!("fmin = {}", snap.fmin);
    println!("true_fidelity = {}", fidelity_vs_bell(&snap.truth, best_phase(&snap.truth)));
    println!("mle_iterations = {}", snap.iterations);
    println!("{}", format_matrix(snap.estimate.matrix()));
    if let Some(dir) = &common.out {
        fs::create_dir_all(dir)?;
        write_counts_csv(&snap.records, fs::File::create(dir.join("counts.csv"))?)?;
        fs::write(dir.join("rho.txt"), format_matrix(snap.estimate.matrix()) + "\n")?;
    }
    Ok(())
}

fn decay(common: &Common, mode: Option<&str>, offset: bool) -> Result<()> {
    let mut sc = load_scenario(common)?;
    if let Some(m) = mode {
        sc.mode = m.parse::<EstimationMode>()?;
    }
    let curve = run_decay_experiment(&sc)?;
    let fit = fit_gaussian_decay_with(&curve, FitOptions { offset })?;
    let out = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    emit_report(&curve, &fit, &out)?;
    print!("{}", fit_summary_string(&curve, &fit));
    Ok(())
}

fn fit(path: &Path, offset: bool, out: Option<&Path>) -> Result<()> {
    let file = fs::File::open(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let curve = read_decay_csv(file)?;
    let fit = fit_gaussian_decay_with(&curve, FitOptions { offset })?;
    if let Some(dir) = out {
        emit_report(&curve, &fit, dir)?;
    }
    print!("{}", fit_summary_string(&curve, &fit));
    Ok(())
}

fn calibrate(common: &Common) -> Result<()> {
    let sc = load_scenario(common)?;
    let cal = calibrate_heating(&sc.noise)?;
    println!("noise.lamb_dicke = {}", cal.lamb_dicke);
    println!("loss_at_{}s = {}", CALIBRATION_TIME_S, analysis_loss(CALIBRATION_TIME_S, &cal)?);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Prepare { common } => prepare(&common),
        Command::Tomo { common, delay, shots } => tomo(&common, delay, shots),
        Command::Decay { common, mode, offset } => decay(&common, mode.as_deref(), offset),
        Command::Fit { curve, offset, out } => fit(&curve, offset, out.as_deref()),
        Command::Calibrate { common } => calibrate(&common),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
