use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use leolink::cli::{analyze_report, run_simulate, run_sweep, run_validate};
use leolink::scenario::{parse_scenario, Scenario, SweepSpec};
use leolink::{Error, Result};

#[derive(Parser)]
#[command(name = "leolink", version, about = "LEO satellite-to-ground link analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic throughput, energy-efficiency and delay-outage report.
    Analyze(Common),
    /// Sweep one scenario key and write a CSV row per value.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// KEY=START:STOP:STEPS or KEY=V1,V2,...
        #[arg(long)]
        sweep: String,
        /// Add Monte-Carlo columns.
        #[arg(long)]
        with_sim: bool,
    },
    /// Monte-Carlo estimates as a one-row CSV.
    Simulate(Common),
    /// Cross-check the analytic results against independent routes.
    Validate(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scenario: PathBuf,
    /// Overrides `[sim] seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<Scenario> {
        let text = std::fs::read_to_string(&self.scenario)
            .map_err(|e| Error::Io(format!("{}: {e}", self.scenario.display())))?;
        let scn = parse_scenario(&text)?;
        Ok(match self.seed {
            Some(seed) => scn.with_seed(seed),
            None => scn,
        })
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string())),
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Analyze(c) => c.emit(&analyze_report(&c.load()?)?)?,
        Command::Sweep { common, sweep, with_sim } => {
            let sweep: SweepSpec = sweep.parse()?;
            common.emit(&run_sweep(&common.load()?, &sweep, with_sim)?.to_csv()?)?
        }
        Command::Simulate(c) => c.emit(&run_simulate(&c.load()?)?.to_csv()?)?,
        Command::Validate(c) => {
            let v = run_validate(&c.load()?)?;
            c.emit(&v.render())?;
            if !v.all_pass() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {first}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.to_string().replace('\n', " "));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
