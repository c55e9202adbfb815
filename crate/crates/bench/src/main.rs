use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dpset_bench::bounds::BoundsRow;
use dpset_bench::preset::{figure1_preset, PRESET_DELTA};
use dpset_bench::report::{write_audit, write_bounds, write_calibration, write_utility};
use dpset_bench::{calibrate_band_width, dp_audit, run_utility, MasterSeed, TrialStats};
use dpset_core::{encode, select_field, Encoding, FieldSpec, Mode, Params, ParamsBuilder, UniverseElement};
use rand::rngs::OsRng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

#[derive(Parser)]
#[command(name = "dpset", version, about = "Differentially private set encodings: tool and evaluation harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Target privacy level [default: ln 3]
    #[arg(long)]
    epsilon: Option<f64>,
    /// Failure probability for band mode [default: 2^-40]
    #[arg(long)]
    delta: Option<f64>,
    /// Set size
    #[arg(long, default_value_t = 4096)]
    k: usize,
    /// Capacity the parameters are sized for [default: k]
    #[arg(long)]
    k_hat: Option<usize>,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    /// Fixed band width instead of the derived one
    #[arg(long)]
    band_width: Option<usize>,
    /// band, vandermonde or trivial
    #[arg(long, default_value = "band")]
    mode: Mode,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    /// Master seed, hex, up to 32 bytes
    #[arg(long)]
    seed: Option<MasterSeed>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Leave timing columns empty so output is reproducible
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Measure error rates, timings and sizes at one parameter point
    Utility(Common),
    /// Failure rate of the band solver across band widths
    Calibrate {
        #[command(flatten)]
        common: Common,
        /// Field order [default: chosen from epsilon]
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64")]
        grid: Vec<usize>,
    },
    /// Compare decode likelihoods on neighbouring inputs
    Audit {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100_000)]
        per_side: u64,
    },
    /// Reference utility and space lower bounds
    Bounds {
        #[command(flatten)]
        common: Common,
        /// log2 of the universe size
        #[arg(long, default_value_t = 128)]
        universe_bits: u32,
    },
    /// Encode hex elements (one per line) into a .dpset file given by --out
    Encode {
        #[command(flatten)]
        common: Common,
        /// Input file [default: stdin]
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Print 0/1 for each hex query (one per line) against a .dpset file
    Decode {
        #[arg(long)]
        encoding: PathBuf,
        /// Query file [default: stdin]
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run the standard grid of eight privacy levels
    PresetFigure1 {
        #[command(flatten)]
        common: Common,
        /// Also run k = 2^20
        #[arg(long)]
        include_2_20: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Precondition(_) => 2,
            CliError::SelfCheck(_) => 3,
        }
    }
}

impl From<dpset_core::Error> for CliError {
    fn from(e: dpset_core::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Precondition(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dpset: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl Common {
    fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or_else(|| 3f64.ln())
    }

    fn seed(&self) -> MasterSeed {
        self.seed.unwrap_or_default()
    }

    fn params(&self, k_hat: usize) -> Result<Params, CliError> {
        let mut b = ParamsBuilder::new(self.mode, self.epsilon(), k_hat).beta(self.beta);
        if let Some(d) = self.delta {
            b = b.delta(d);
        }
        if let Some(w) = self.band_width {
            b = b.band_width(w);
        }
        Ok(b.build()?)
    }

    fn output(&self) -> Result<Box<dyn Write>, CliError> {
        Ok(match &self.out {
            Some(path) => Box::new(fs::File::create(path)?),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn self_check(rows: &[TrialStats]) -> Result<(), CliError> {
    let failures: Vec<String> = rows.iter().flat_map(TrialStats::self_check).collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::SelfCheck(failures.join("; ")))
    }
}

fn read_hex_lines(input: &Option<PathBuf>) -> Result<Vec<UniverseElement>, CliError> {
    let text = match input {
        Some(path) => fs::read_to_string(path)?,
        None => {
            let mut s = String::new();
            io::stdin().lock().read_to_string(&mut s)?;
            s
        }
    };
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            hex::decode(l.trim())
                .map(UniverseElement::new)
                .map_err(|e| CliError::Precondition(format!("line {}: {e}", i + 1)))
        })
        .collect()
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Utility(c) => {
            let params = c.params(c.k_hat.unwrap_or(c.k))?;
            let stats = run_utility(&params, c.k, c.trials, &c.seed(), !c.no_timing)?;
            write_utility(c.output()?, std::slice::from_ref(&stats), !c.no_timing)?;
            self_check(&[stats])
        }
        Command::Calibrate { common: c, q, grid } => {
            let field = match q {
                Some(q) => FieldSpec::from_parts(
                    if q.is_power_of_two() {
                        dpset_core::FieldKind::BinaryExtension
                    } else {
                        dpset_core::FieldKind::Prime
                    },
                    q,
                )?,
                None => select_field(1.0 / (c.epsilon().exp() + 1.0))?,
            };
            if grid.is_empty() {
                return Err(CliError::Usage("--grid needs at least one width".into()));
            }
            let rows = calibrate_band_width(c.k, c.beta, field, &grid, c.trials, &c.seed())?;
            write_calibration(c.output()?, &rows)?;
            Ok(())
        }
        Command::Audit { common: c, per_side } => {
            let params = c.params(c.k_hat.unwrap_or(c.k + 1))?;
            let report = dp_audit(&params, c.k, per_side, &c.seed())?;
            write_audit(c.output()?, &params, c.k, &report)?;
            if report.pass() {
                Ok(())
            } else {
                Err(CliError::SelfCheck(format!(
                    "likelihood ratio lower limit {} exceeds e^epsilon = {}",
                    report.worst_ratio_lo, report.bound
                )))
            }
        }
        Command::Bounds { common: c, universe_bits } => {
            let delta = c.delta.unwrap_or(PRESET_DELTA);
            let n = 2f64.powi(universe_bits as i32);
            let epsilons: Vec<f64> = match c.epsilon {
                Some(e) => vec![e],
                None => figure1_preset(false).iter().take(8).map(|p| p.epsilon).collect(),
            };
            let rows: Vec<BoundsRow> = epsilons.iter().map(|&e| BoundsRow::new(e, delta, c.k, n)).collect();
            write_bounds(c.output()?, &rows)?;
            Ok(())
        }
        Command::Encode { common: c, input } => {
            let out = c
                .out
                .clone()
                .ok_or_else(|| CliError::Usage("encode needs --out <path>".into()))?;
            let set = read_hex_lines(&input)?;
            let params = c.params(c.k_hat.unwrap_or(set.len().max(1)))?;
            let enc = match c.seed {
                Some(seed) => encode(&set, &params, &mut ChaCha20Rng::from_seed(*seed.as_bytes()))?,
                None => encode(&set, &params, &mut OsRng)?,
            };
            if enc.is_fallback() {
                eprintln!("dpset: warning: the solver failed; the encoding holds the input set in the clear");
            }
            fs::write(out, enc.to_bytes())?;
            Ok(())
        }
        Command::Decode { encoding, input } => {
            let bytes = fs::read(&encoding)?;
            let enc = Encoding::from_bytes(&bytes)
                .map_err(|e| CliError::Precondition(format!("{}: {e}", encoding.display())))?;
            let queries = read_hex_lines(&input)?;
            let mut out = io::BufWriter::new(io::stdout().lock());
            for u in &queries {
                writeln!(out, "{}", enc.decode(u) as u8)?;
            }
            out.flush()?;
            Ok(())
        }
        Command::PresetFigure1 { common: c, include_2_20 } => {
            let mut rows = Vec::new();
            for point in figure1_preset(include_2_20) {
                let params = point.params()?;
                let seed = c.seed().derive(point.k as u64 ^ ((params.field().order() as u64) << 32));
                let stats = run_utility(&params, point.k, c.trials, &seed, !c.no_timing)?;
                eprintln!(
                    "epsilon {} k {}: error {:.4}",
                    point.label(),
                    point.k,
                    stats.error.point
                );
                rows.push(stats);
            }
            write_utility(c.output()?, &rows, !c.no_timing)?;
            self_check(&rows)
        }
    }
}
