use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use entcap_cli::config::{Purpose, Resolved, Settings};
use entcap_cli::error::{CliError, Result};
use entcap_cli::plot::plot_script;
use entcap_cli::point::{format_result, run_point};
use entcap_cli::selftest::run_selftest;
use entcap_cli::sweep::{run_sweep, write_csv, SweepSpec};

const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "entcap",
    version,
    about = "Entangling and disentangling capacities of two-qubit random-unitary channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity at a single parameter point.
    Point(ParamArgs),
    /// Capacities over a grid of the family's sweep variable, as CSV.
    Sweep(ParamArgs),
    /// gnuplot script overlaying one or more sweep CSVs.
    PlotScript {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quick invariant checks.
    Selftest,
}

#[derive(Args)]
struct ParamArgs {
    /// cnot-mix, dcnot-mix, swap-mix or gaussian
    #[arg(long)]
    family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    xi: Option<String>,
    #[arg(long = "xi-y", allow_negative_numbers = true)]
    xi_y: Option<String>,
    #[arg(long = "xi-z", allow_negative_numbers = true)]
    xi_z: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<String>,
    /// Weight of the first branch.
    #[arg(long)]
    p: Option<String>,
    /// Mean angle of the Gaussian channel.
    #[arg(long, allow_negative_numbers = true)]
    mean: Option<String>,
    /// Standard deviation of the Gaussian channel.
    #[arg(long)]
    sigma: Option<String>,
    /// up, down or both
    #[arg(long)]
    dir: Option<String>,
    /// method1 (CNOT-class scan) or method2 (ancilla ascent)
    #[arg(long)]
    method: Option<String>,
    /// start:stop:points
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    restarts: Option<String>,
    #[arg(long)]
    out: Option<String>,
    /// Flat key = value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Read every angle in degrees.
    #[arg(long)]
    degrees: bool,
    /// Worker threads for sweeps and restarts.
    #[arg(long)]
    jobs: Option<String>,
}

impl ParamArgs {
    fn settings(&self) -> Result<Settings> {
        let base = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("family", &self.family),
            ("xi", &self.xi),
            ("xi-y", &self.xi_y),
            ("xi-z", &self.xi_z),
            ("delta", &self.delta),
            ("p", &self.p),
            ("mean", &self.mean),
            ("sigma", &self.sigma),
            ("dir", &self.dir),
            ("method", &self.method),
            ("grid", &self.grid),
            ("seed", &self.seed),
            ("restarts", &self.restarts),
            ("out", &self.out),
            ("jobs", &self.jobs),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v.clone());
            }
        }
        if self.degrees {
            flags.set("degrees", "true");
        }
        Ok(base.merged_with(flags))
    }
}

fn io_error(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::validation(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(io_error(path)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(io_error(std::path::Path::new("<stdout>"))),
    }
}

fn point(args: &ParamArgs) -> Result<u8> {
    let r: Resolved = args.settings()?.resolve(Purpose::Point)?;
    let results = with_pool(r.jobs, || run_point(&r))??;
    let text: Vec<String> = results.iter().map(|res| format_result(&r, res)).collect();
    emit(&r.out, &text.join("\n"))?;
    Ok(if results.iter().all(|res| res.converged) {
        0
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn sweep(args: &ParamArgs) -> Result<u8> {
    let r = args.settings()?.resolve(Purpose::Sweep)?;
    let spec = SweepSpec::from_resolved(&r)?;
    let rows = with_pool(r.jobs, || run_sweep(&spec))??;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).expect("writing to memory");
    emit(&r.out, &String::from_utf8(buf).expect("ascii output"))?;
    if let Some(bad) = rows.iter().find(|row| !row.converged()) {
        eprintln!(
            "warning: optimizer did not converge at sweep value {}",
            bad.sweep_value
        );
        return Ok(EXIT_NOT_CONVERGED);
    }
    Ok(0)
}

fn plot(csv: &[PathBuf], out: &Option<PathBuf>) -> Result<u8> {
    let files = csv
        .iter()
        .map(|p| {
            Ok((
                p.display().to_string(),
                fs::read_to_string(p).map_err(io_error(p))?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    emit(out, &plot_script(&files)?)?;
    Ok(0)
}

fn selftest() -> u8 {
    let checks = run_selftest();
    for c in &checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    u8::from(!checks.iter().all(|c| c.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Point(a) => point(a),
        Command::Sweep(a) => sweep(a),
        Command::PlotScript { csv, out } => plot(csv, out),
        Command::Selftest => Ok(selftest()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
