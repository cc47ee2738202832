use approval_dap::{Affinity, IndexKind, IndexSettings};
use approval_dap_cli::commands::{self, CliError, CliResult, GenerateArgs, EXIT_RUNTIME};
use std::io::Write;
use approval_dap_cli::manifest::{ResampleManifest, RunManifest};
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "approval-dap", version, about = "Agreement, diversity and polarization of approval elections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one election from a statistical culture.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        phi: Option<f64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        variant: Option<u8>,
        /// Comma-separated approval probabilities (iam).
        #[arg(long, value_delimiter = ',')]
        probs: Option<Vec<f64>>,
        /// Base culture of `noisy`: a family name or a JSON object.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        label: Option<String>,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute indices for election files (native JSON or Pabulib .pb).
    Index {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Comma-separated index names; all if omitted.
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<String>>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 5)]
        sample_multiplier: usize,
        #[arg(long, value_enum, default_value = "rescaled")]
        affinity: AffinityArg,
    },
    /// Run a table manifest.
    Table { manifest: PathBuf },
    /// Run a map manifest.
    Map { manifest: PathBuf },
    /// Run a resampling experiment from a manifest or from flags.
    Resample {
        manifest: Option<PathBuf>,
        #[arg(long, conflicts_with = "manifest")]
        index: Option<String>,
        #[arg(long, default_value_t = 60)]
        m: usize,
        #[arg(long, default_value_t = 60)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run any manifest, dispatching on its `command` field.
    Run { manifest: PathBuf },
    /// Turn a CSV score matrix into an approval election by thresholding.
    Convert {
        input: PathBuf,
        #[arg(long)]
        threshold: f64,
        #[arg(long)]
        label: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum AffinityArg {
    Rescaled,
    Literal,
}

fn seed_or_default(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        eprintln!("note: no --seed given, using seed 0");
        0
    })
}

fn parse_kinds(names: &Option<Vec<String>>) -> CliResult<Vec<IndexKind>> {
    match names {
        None => Ok(IndexKind::ALL.to_vec()),
        Some(v) => v
            .iter()
            .map(|s| s.parse::<IndexKind>().map_err(|e| CliError::validation(format!("--indices: {e}"))))
            .collect(),
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) ends the process quietly.
fn say(text: &str) {
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(EXIT_RUNTIME);
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            say(&format!("{text}\n"));
            Ok(())
        }
    }
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var("APPROVAL_DAP_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::validation(format!("APPROVAL_DAP_THREADS must be a number, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::runtime(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Generate {
            family,
            m,
            n,
            seed,
            p,
            phi,
            k,
            x,
            y,
            variant,
            probs,
            base,
            label,
            out,
        } => {
            let args = GenerateArgs {
                family,
                m,
                n,
                seed: seed_or_default(seed),
                p,
                phi,
                k,
                x,
                y,
                variant,
                probs,
                base,
                label,
            };
            let (json, stats) = commands::generate(&args)?;
            emit(&out, &json)?;
            eprintln!("{stats}");
        }
        Command::Index {
            files,
            indices,
            seed,
            sample_multiplier,
            affinity,
        } => {
            let kinds = parse_kinds(&indices)?;
            if sample_multiplier == 0 {
                return Err(CliError::validation("--sample-multiplier must be at least 1"));
            }
            let needs_seed = kinds.iter().any(|k| k.is_randomized());
            let seed = if needs_seed { seed_or_default(seed) } else { seed.unwrap_or(0) };
            let settings = IndexSettings {
                sample_multiplier,
                affinity: match affinity {
                    AffinityArg::Rescaled => Affinity::Rescaled,
                    AffinityArg::Literal => Affinity::Literal,
                },
                ..IndexSettings::with_seed(seed)
            };
            let (csv, errors) = commands::index_files(&files, &kinds, &settings);
            say(&csv);
            if !errors.is_empty() {
                for e in &errors {
                    eprintln!("error: {e}");
                }
                return Err(CliError::runtime(format!("{} of {} files failed", errors.len(), files.len())));
            }
        }
        Command::Table { manifest } => say(&format!("{}\n", commands::run_manifest(&commands::load_for(&manifest, Some("table"))?)?)),
        Command::Map { manifest } => say(&format!("{}\n", commands::run_manifest(&commands::load_for(&manifest, Some("map"))?)?)),
        Command::Run { manifest } => say(&format!("{}\n", commands::run_manifest(&commands::load_for(&manifest, None)?)?)),
        Command::Resample {
            manifest,
            index,
            m,
            n,
            samples,
            seed,
            out,
        } => {
            let r = match (manifest, index) {
                (Some(path), _) => commands::load_for(&path, Some("resample"))?,
                (None, Some(index)) => {
                    let index = index.parse::<IndexKind>().map_err(|e| CliError::validation(format!("--index: {e}")))?;
                    if m == 0 || n == 0 || samples == 0 {
                        return Err(CliError::validation("--m, --n and --samples must be positive"));
                    }
                    RunManifest::Resample(ResampleManifest {
                        command: "resample".into(),
                        seed: seed_or_default(seed),
                        index,
                        m,
                        n,
                        samples,
                        out_dir: out,
                    })
                }
                (None, None) => return Err(CliError::validation("give a manifest or --index")),
            };
            say(&format!("{}\n", commands::run_manifest(&r)?));
        }
        Command::Convert {
            input,
            threshold,
            label,
            out,
        } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| CliError::runtime(format!("{}: {e}", input.display())))?;
            let json = commands::convert_scores(&text, threshold, label.as_deref())
                .map_err(|e| CliError { message: format!("{}: {}", input.display(), e.message), ..e })?;
            emit(&out, &json)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
