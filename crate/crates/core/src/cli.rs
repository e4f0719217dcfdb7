//! Command-line front end over PACE `.gr`/`.td` files.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::decomposition::{parse_td, validate_td, write_td, TreeDecomposition};
use crate::driver::{
    decide_treewidth, two_approx, Bootstrap, Constants, DriverError, ModePolicy, Outcome, Report, RunConfig,
};
use crate::graph::Graph;
use crate::oracle::{
    coarsen_decomposition, exact_treewidth, generate, Family, GeneratorSpec, OracleError, MAX_EXACT_N,
};
use crate::partition::Mode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_TW_EXCEEDS: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_UNAVAILABLE: i32 = 69;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_CANT_CREATE: i32 = 73;

#[derive(Parser, Debug)]
#[command(name = "twsplit", version, about = "Tree decompositions of width at most 2k+1")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a decomposition of width at most 2K+1, or report tw > K.
    Decompose {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// JSON-lines round telemetry.
        #[arg(long)]
        telemetry: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check a decomposition against a graph.
    Validate {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(short = 't', long)]
        td: PathBuf,
        /// Also require width at most 2K+1.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Print the exact treewidth (n ≤ 20).
    Exact {
        #[arg(short = 'i', long)]
        input: PathBuf,
    },
    /// CSV of runs on generated graphs.
    Bench {
        #[arg(long, default_value = "partial-k-tree")]
        family: Family,
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Width of the starting decomposition; defaults to 2K+2.
        #[arg(long)]
        start_width: Option<usize>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Round-by-round potential snapshots as JSON lines.
    Stats {
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Starting decomposition (width at most 4K+3); defaults to the bootstrap.
        #[arg(short = 't', long)]
        td: Option<PathBuf>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Three,
    Four,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BootstrapArg {
    Greedy,
    SingleBag,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "greedy")]
    pub bootstrap: BootstrapArg,
    #[arg(long, default_value_t = 8)]
    pub c_alpha: u64,
    #[arg(long, default_value_t = 1)]
    pub c_beta: u64,
    #[arg(long, default_value_t = 2)]
    pub c_gamma: u64,
    #[arg(long, default_value_t = 4)]
    pub c_delta: u64,
    /// Check structural invariants after every tree operation.
    #[arg(long)]
    pub audit: bool,
    #[arg(long)]
    pub parallel_components: bool,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig, String> {
        let constants = Constants {
            alpha: self.c_alpha,
            beta: self.c_beta,
            gamma: self.c_gamma,
            delta: self.c_delta,
        };
        if !constants.is_admissible() {
            return Err("constants must be positive with c-alpha larger than the others".into());
        }
        let mut cfg = RunConfig::new(self.k);
        cfg.constants = constants;
        cfg.mode = match self.mode {
            ModeArg::Auto => ModePolicy::Auto,
            ModeArg::Three => ModePolicy::Forced(Mode::Three),
            ModeArg::Four => ModePolicy::Forced(Mode::Four),
        };
        cfg.bootstrap = match self.bootstrap {
            BootstrapArg::Greedy => Bootstrap::Greedy,
            BootstrapArg::SingleBag => Bootstrap::SingleBag,
        };
        cfg.audit = self.audit;
        cfg.parallel_components = self.parallel_components;
        Ok(cfg)
    }
}

/// A failure with its exit status.
struct Fail(i32, String);

type CliResult = Result<i32, Fail>;

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| Fail(EXIT_NO_INPUT, format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Fail> {
    Graph::parse_pace(&read(path)?).map_err(|e| Fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn read_td(path: &Path) -> Result<(TreeDecomposition, usize), Fail> {
    parse_td(&read(path)?).map_err(|e| Fail(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &[u8]) -> Result<(), Fail> {
    fs::write(path, text).map_err(|e| Fail(EXIT_CANT_CREATE, format!("{}: {e}", path.display())))
}

fn driver_fail(e: DriverError) -> Fail {
    let code = match e {
        DriverError::InvalidInput(_) | DriverError::WidthTooLarge { .. } | DriverError::Decomposition(_) => EXIT_DATA,
        DriverError::TableTooLarge { .. } => EXIT_UNAVAILABLE,
        DriverError::Engine(_) => EXIT_SOFTWARE,
    };
    Fail(code, e.to_string())
}

fn io_fail(e: std::io::Error) -> Fail {
    Fail(EXIT_CANT_CREATE, e.to_string())
}

/// Parses `argv` (program name first) and runs one subcommand.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Fail(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Decompose {
            input,
            output,
            telemetry,
            run,
        } => decompose(&input, output.as_deref(), telemetry.as_deref(), &run, out),
        Command::Validate { input, td, k } => validate(&input, &td, k, out),
        Command::Exact { input } => exact(&input, out),
        Command::Bench {
            family,
            sizes,
            seed,
            start_width,
            run,
        } => bench(family, &sizes, seed, start_width, &run, out),
        Command::Stats { input, td, run } => stats(&input, td.as_deref(), &run, out),
    }
}

fn decompose(
    input: &Path,
    output: Option<&Path>,
    telemetry: Option<&Path>,
    run: &RunArgs,
    out: &mut dyn Write,
) -> CliResult {
    let cfg = run.config().map_err(|m| Fail(EXIT_USAGE, m))?;
    let g = read_graph(input)?;
    let (outcome, report) = decide_treewidth(&g, &cfg).map_err(driver_fail)?;
    if let Some(path) = telemetry {
        let mut buf = Vec::new();
        report.write_telemetry(&mut buf).map_err(io_fail)?;
        write_file(path, &buf)?;
    }
    match outcome {
        Outcome::TreewidthExceeds { k } => {
            writeln!(out, "tw > {k}").map_err(io_fail)?;
            Ok(EXIT_TW_EXCEEDS)
        }
        Outcome::Decomposition(t) => {
            if t.width() > 2 * cfg.k + 1 || !validate_td(&g, &t).is_valid() {
                return Err(Fail(
                    EXIT_SOFTWARE,
                    format!("output of width {} failed its own check", t.width()),
                ));
            }
            let text = write_td(&t, g.n());
            match output {
                Some(p) => write_file(p, text.as_bytes())?,
                None => out.write_all(text.as_bytes()).map_err(io_fail)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn validate(input: &Path, td: &Path, k: Option<usize>, out: &mut dyn Write) -> CliResult {
    let g = read_graph(input)?;
    let (t, n) = read_td(td)?;
    if n != g.n() {
        writeln!(out, "decomposition is for {n} vertices, graph has {}", g.n()).map_err(io_fail)?;
        return Ok(EXIT_INVALID);
    }
    if let Some(v) = validate_td(&g, &t).first() {
        writeln!(out, "invalid: {v}").map_err(io_fail)?;
        return Ok(EXIT_INVALID);
    }
    if let Some(k) = k {
        if t.width() > 2 * k + 1 {
            writeln!(out, "invalid: width {} exceeds 2k+1 = {}", t.width(), 2 * k + 1).map_err(io_fail)?;
            return Ok(EXIT_INVALID);
        }
    }
    writeln!(out, "valid, width {}", t.width()).map_err(io_fail)?;
    Ok(EXIT_OK)
}

fn exact(input: &Path, out: &mut dyn Write) -> CliResult {
    let g = read_graph(input)?;
    match exact_treewidth(&g) {
        Ok(tw) => {
            writeln!(out, "{tw}").map_err(io_fail)?;
            Ok(EXIT_OK)
        }
        Err(OracleError::TooLarge { size, .. }) => Err(Fail(
            EXIT_USAGE,
            format!("exact treewidth supports at most {MAX_EXACT_N} vertices, got {size}"),
        )),
        Err(e) => Err(Fail(EXIT_SOFTWARE, e.to_string())),
    }
}

/// One bench row: the first round's φ and the totals of the run.
pub struct BenchRow {
    pub n: usize,
    pub width_out: Option<usize>,
    pub rounds: usize,
    pub dp_recomputes: u64,
    pub phi_start: u64,
    pub wall_ms: u128,
}

/// Generates a graph of `family`, coarsens its witness (or the greedy
/// decomposition) to width `start_width`, and runs one `two_approx`.
pub fn bench_row(family: Family, n: usize, seed: u64, start_width: usize, cfg: &RunConfig) -> Result<BenchRow, String> {
    let gen = generate(&GeneratorSpec::new(family, n, cfg.k, seed)).map_err(|e| e.to_string())?;
    let base = gen
        .witness
        .clone()
        .unwrap_or_else(|| crate::decomposition::greedy_decomposition(&gen.graph));
    let t = coarsen_decomposition(&base, start_width + 1, seed);
    let started = Instant::now();
    let (outcome, report): (Outcome, Report) = two_approx(&gen.graph, &t, cfg).map_err(|e| e.to_string())?;
    let wall_ms = started.elapsed().as_millis();
    Ok(BenchRow {
        n,
        width_out: match outcome {
            Outcome::Decomposition(t) => Some(t.width()),
            Outcome::TreewidthExceeds { .. } => None,
        },
        rounds: report.rounds.len(),
        dp_recomputes: report.counters.dp_recomputes,
        phi_start: report.rounds.first().map_or(0, |r| r.phi_start.phi),
        wall_ms,
    })
}

fn bench(
    family: Family,
    sizes: &[usize],
    seed: u64,
    start_width: Option<usize>,
    run: &RunArgs,
    out: &mut dyn Write,
) -> CliResult {
    let cfg = run.config().map_err(|m| Fail(EXIT_USAGE, m))?;
    let start = start_width.unwrap_or(2 * cfg.k + 2);
    writeln!(out, "n,width_out,rounds,dp_recomputes,phi_start,wall_ms").map_err(io_fail)?;
    for &n in sizes {
        let row = bench_row(family, n, seed, start, &cfg).map_err(|m| Fail(EXIT_DATA, m))?;
        let width = row.width_out.map_or_else(|| "tw>k".to_string(), |w| w.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.n, width, row.rounds, row.dp_recomputes, row.phi_start, row.wall_ms
        )
        .map_err(io_fail)?;
    }
    Ok(EXIT_OK)
}

fn stats(input: &Path, td: Option<&Path>, run: &RunArgs, out: &mut dyn Write) -> CliResult {
    let cfg = run.config().map_err(|m| Fail(EXIT_USAGE, m))?;
    let g = read_graph(input)?;
    let (outcome, report) = match td {
        Some(p) => {
            let (t, n) = read_td(p)?;
            if n != g.n() {
                return Err(Fail(
                    EXIT_DATA,
                    format!("decomposition is for {n} vertices, graph has {}", g.n()),
                ));
            }
            two_approx(&g, &t, &cfg).map_err(driver_fail)?
        }
        None => decide_treewidth(&g, &cfg).map_err(driver_fail)?,
    };
    report.write_telemetry(&mut *out).map_err(io_fail)?;
    Ok(match outcome {
        Outcome::Decomposition(_) => EXIT_OK,
        Outcome::TreewidthExceeds { .. } => EXIT_TW_EXCEEDS,
    })
}
