use std::path::PathBuf;
use std::process::ExitCode;

use chanent::states::Base;
use chanent_cli::config::{parse_tol, CliError, RunConfig};
use chanent_cli::entropy::{read_spec, run_entropy};
use chanent_cli::figure::{run_figure, write_figure, Figure};
use chanent_cli::verify::{run_suite, Suite, SuiteReport};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "chanent", version, about = "Entropies of quantum channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Map entropy and minimal output entropy of a channel file.
    Entropy { file: PathBuf },
    /// Run a randomized verification suite.
    Verify { suite: Suite },
    /// Generate figure data and a gnuplot script.
    Figure { which: Figure },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BaseArg {
    #[value(name = "e")]
    E,
    #[value(name = "2")]
    Two,
}

#[derive(Args, Debug)]
struct Opts {
    /// Rényi order (default 2; prop2 runs 0.5, 1, 2, 3 unless set).
    #[arg(long, global = true)]
    q: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "e")]
    base: BaseArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Optimizer starts per minimization.
    #[arg(long, global = true, default_value_t = 32)]
    starts: usize,
    /// Tolerance override, `name=value`; repeatable.
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    tol: Vec<(String, f64)>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Region grid size and samples per tetrahedron edge.
    #[arg(long, global = true, default_value_t = 101)]
    grid: usize,
}

impl Opts {
    fn config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            trials: self.trials,
            starts: self.starts,
            base: match self.base {
                BaseArg::E => Base::Natural,
                BaseArg::Two => Base::Two,
            },
            q: self.q,
            tol: self.tol.iter().cloned().collect(),
            out: self.out.clone(),
            grid: self.grid,
        }
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = cli.opts.config();
    cfg.validate()?;
    if let Some(n) = cli.opts.threads {
        if n == 0 {
            return Err(CliError::Input("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    match &cli.command {
        Command::Entropy { file } => {
            let spec = read_spec(file)?;
            run_entropy(&spec, &cfg)?.emit(cfg.out.as_deref())?;
            Ok(true)
        }
        Command::Verify { suite } => {
            let report = run_suite(*suite, &cfg)?;
            report.table.emit(cfg.out.as_deref())?;
            let summary = format!(
                "{}\n{}",
                SuiteReport::summary_header(),
                report.summary_line()
            );
            if cfg.out.is_some() {
                println!("{summary}");
            } else {
                eprintln!("{summary}");
            }
            Ok(report.failures == 0)
        }
        Command::Figure { which } => {
            let data = run_figure(*which, &cfg)?;
            let out = cfg
                .out
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{}.csv", which.name())));
            write_figure(&data, &out, &cfg)?;
            for n in &data.notes {
                eprintln!("{n}");
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
