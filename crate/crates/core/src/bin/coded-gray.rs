use std::fs::{self, File};
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use coded_gray::cli::{self, RunConfig};
use coded_gray::{BitWord, Error, Result, SchemeKind};

#[derive(Parser)]
#[command(
    name = "coded-gray",
    version,
    about = "Robust Gray code encoder, decoder and simulation harness"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Flags override values from `--config`.
#[derive(Args)]
struct Opts {
    /// Flat key=value config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Inner code dimension
    #[arg(long, global = true)]
    kb: Option<usize>,
    /// Inner code block length
    #[arg(long, global = true)]
    nb: Option<usize>,
    /// Number of staircase block-rows
    #[arg(long, global = true)]
    s: Option<usize>,
    #[arg(long, global = true)]
    inner_seed: Option<u64>,
    /// BSC crossover probability
    #[arg(long, global = true)]
    p: Option<f64>,
    #[arg(long, global = true)]
    channel_seed: Option<u64>,
    /// lp4, fw or coded-gray
    #[arg(long, global = true)]
    scheme: Option<SchemeKind>,
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Comma-separated tail thresholds
    #[arg(long, global = true)]
    t_grid: Option<String>,
    /// Output file (CSV or word file, depending on the command)
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode one integer; prints the packed word in hex and the layout sizes
    Encode { x: u64 },
    /// Decode a word given as a word file or as hex
    Decode {
        #[arg(long, conflicts_with = "hex")]
        file: Option<PathBuf>,
        #[arg(long)]
        hex: Option<String>,
    },
    /// Monte-Carlo survival function of the decoding error
    TailSweep,
    /// Word length, size and rate of every scheme
    RateReport,
    /// Scatter entries on a shared tape and query them back
    TapeDemo {
        /// File of `index value` lines
        entries: PathBuf,
        #[arg(long)]
        tape_len: Option<usize>,
        #[arg(long)]
        tape_seed: Option<u64>,
        /// Randomize agreeing multi-writes as well as conflicts
        #[arg(long)]
        randomize_all_collisions: bool,
        /// Also write the tape as a word file
        #[arg(long)]
        tape_out: Option<PathBuf>,
    },
}

impl Opts {
    fn config(&self) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        if let Some(path) = &self.config {
            c.apply_file(path)?;
        }
        if let Some(v) = self.kb {
            c.params.kb = v;
        }
        if let Some(v) = self.nb {
            c.params.nb = v;
        }
        if let Some(v) = self.s {
            c.params.s = v;
        }
        if let Some(v) = self.inner_seed {
            c.params.inner_seed = v;
        }
        if let Some(v) = self.p {
            c.p = v;
        }
        if let Some(v) = self.channel_seed {
            c.channel_seed = v;
        }
        if let Some(v) = self.scheme {
            c.scheme = v;
        }
        if let Some(v) = self.trials {
            c.trials = v;
        }
        if let Some(v) = &self.t_grid {
            c.t_grid = cli::parse_t_grid(v)?;
        }
        if let Some(v) = &self.output {
            c.output = Some(v.clone());
        }
        Ok(c)
    }
}

fn io_err(e: io::Error) -> Error {
    Error::Parse(e.to_string())
}

fn csv_sink(config: &RunConfig) -> Result<Box<dyn Write>> {
    Ok(match &config.output {
        Some(path) => Box::new(File::create(path).map_err(io_err)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<()> {
    let mut config = cli.opts.config()?;
    match cli.cmd {
        Cmd::Encode { x } => {
            let scheme = config.build()?;
            let (word, text) = cli::encode_report(scheme.as_ref(), x)?;
            print!("{text}");
            if let Some(path) = &config.output {
                cli::write_word_file(path, &word).map_err(io_err)?;
            }
        }
        Cmd::Decode { file, hex } => {
            let scheme = config.build()?;
            let word = match (file, hex) {
                (Some(path), _) => cli::read_word_file(&path)?,
                (None, Some(hex)) => {
                    BitWord::from_hex(&hex, scheme.word_len()).ok_or_else(|| {
                        Error::Parse(format!("hex does not hold {} bits", scheme.word_len()))
                    })?
                }
                (None, None) => {
                    return Err(Error::InvalidParameter(
                        "decode needs --file or --hex".into(),
                    ))
                }
            };
            println!("{}", scheme.decode(&word)?);
        }
        Cmd::TailSweep => {
            let rows = cli::tail_sweep(&config)?;
            cli::write_tail_csv(csv_sink(&config)?, &config, &rows)?;
        }
        Cmd::RateReport => {
            let rows = cli::rate_report(&config)?;
            cli::write_rate_csv(csv_sink(&config)?, &rows)?;
        }
        Cmd::TapeDemo {
            entries,
            tape_len,
            tape_seed,
            randomize_all_collisions,
            tape_out,
        } => {
            let text = fs::read_to_string(&entries).map_err(io_err)?;
            let entries = cli::parse_entries(&text)?;
            config.tape_len = tape_len.or(config.tape_len);
            if let Some(seed) = tape_seed {
                config.tape_seed = seed;
            }
            config.randomize_all_collisions |= randomize_all_collisions;
            let (tape, rows) = cli::tape_demo(&config, &entries)?;
            if let Some(path) = tape_out {
                cli::write_word_file(&path, &tape).map_err(io_err)?;
            }
            cli::write_tape_csv(csv_sink(&config)?, &rows)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
