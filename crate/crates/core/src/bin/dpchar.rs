use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dpchar::characterize::{DEFAULT_EPSILON, DEFAULT_J, DEFAULT_MAX_SYNERGY_SIZE};
use dpchar::miner::{DEFAULT_DELTA, DEFAULT_MAX_PATTERN_SIZE, DEFAULT_MINSUP};
use dpchar::pipeline::{self, AnalysisConfig, RunConfig};
use dpchar::report;
use dpchar::significance::{self, DEFAULT_PERMUTATIONS, DEFAULT_SEED};
use dpchar::{synth, CharParams, Characterizer, Error, Format, MinerConfig, Statistic, TransactionDataset};

#[derive(Parser)]
#[command(name = "dpchar", version, about = "Mine and characterize discriminative patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the planted four-pattern fixture.
    Synth {
        #[arg(long, default_value = "fixtures")]
        out: PathBuf,
        /// Repeat every row this many times.
        #[arg(long, default_value_t = 1)]
        replicate: usize,
    },
    /// Mine closed frequent itemsets into closed.tsv.
    Mine(MineArgs),
    /// Mine and characterize discriminative patterns into patterns.tsv.
    Characterize(CharArgs),
    /// Estimate label-permutation FDR for every closed pattern into fdr.tsv.
    Fdr(FdrArgs),
    /// Full pipeline: patterns.tsv, summary.json and scatter files.
    Run(FdrArgs),
    /// Regenerate scatter files from an existing run directory.
    Plotdata {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct MineArgs {
    #[arg(long)]
    input: PathBuf,
    /// transaction-list or matrix-csv
    #[arg(long, default_value = "transaction-list")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_MINSUP)]
    minsup: f64,
    #[arg(long = "max-size", default_value_t = DEFAULT_MAX_PATTERN_SIZE)]
    max_size: usize,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct CharArgs {
    #[command(flatten)]
    mine: MineArgs,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_J)]
    j: f64,
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long = "max-synergy-size", default_value_t = DEFAULT_MAX_SYNERGY_SIZE)]
    max_synergy_size: usize,
}

#[derive(Args)]
struct FdrArgs {
    #[command(flatten)]
    character: CharArgs,
    #[arg(long, default_value_t = DEFAULT_PERMUTATIONS)]
    permutations: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Statistic re-scored under permutation: mi or synergy.
    #[arg(long, default_value = "mi")]
    statistic: Statistic,
}

impl MineArgs {
    fn miner(&self, delta: f64) -> MinerConfig {
        MinerConfig {
            minsup: self.minsup,
            max_pattern_size: self.max_size,
            delta,
        }
    }

    fn load(&self) -> Result<TransactionDataset, Error> {
        TransactionDataset::load(&self.input, self.format)
    }
}

impl CharArgs {
    fn params(&self) -> CharParams {
        CharParams {
            delta: self.delta,
            j: self.j,
            epsilon: self.epsilon,
            max_synergy_size: self.max_synergy_size,
        }
    }
}

impl FdrArgs {
    fn analysis(&self) -> AnalysisConfig {
        AnalysisConfig {
            miner: self.character.mine.miner(self.character.delta),
            params: self.character.params(),
            permutations: self.permutations,
            seed: self.seed,
            statistic: self.statistic,
        }
    }
}

fn write(dir: &Path, name: &str, body: &str) -> Result<(), Error> {
    report::ensure_dir(dir)?;
    report::write_atomic(&dir.join(name), body.as_bytes())
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Synth { out, replicate } => {
            let text = synth::fixture_text(replicate)?;
            write(&out, synth::FIXTURE_FILE, &text)?;
            println!("wrote {}", out.join(synth::FIXTURE_FILE).display());
        }
        Command::Mine(args) => {
            let ds = args.load()?;
            let set = dpchar::mine_closed(&ds, &args.miner(DEFAULT_DELTA))?;
            write(&args.out, report::CLOSED_FILE, &report::closed_tsv(&ds, &set))?;
            println!("{} closed patterns", set.len());
        }
        Command::Characterize(args) => {
            let params = args.params();
            params.validate()?;
            let ds = args.mine.load()?;
            let set = dpchar::mine_closed(&ds, &args.mine.miner(args.delta))?;
            let disc = dpchar::filter_discriminative(&set, &ds, args.delta);
            let rows = Characterizer::new(params)?.characterize_all(&ds, &disc)?;
            pipeline::check_invariants(&rows)?;
            write(&args.mine.out, report::PATTERNS_FILE, &report::patterns_tsv(&ds, &rows, None))?;
            println!("{} discriminative of {} closed patterns", rows.len(), set.len());
        }
        Command::Fdr(args) => {
            let cfg = args.analysis();
            cfg.validate()?;
            if cfg.permutations == 0 {
                return Err(Error::Config("fdr needs at least one permutation".into()));
            }
            let ds = args.character.mine.load()?;
            let ch = Characterizer::new(cfg.params)?;
            let set = dpchar::mine_closed(&ds, &cfg.miner)?;
            let observed = significance::observed_statistics(&ds, &set, cfg.statistic, Some(&ch))?;
            let null = significance::build_null_with(
                &ds,
                &set,
                &significance::seeded_shuffles(cfg.permutations, cfg.seed),
                cfg.statistic,
                Some(&ch),
            )?;
            let res = significance::estimate_fdr(&null, &observed)?;
            write(
                &args.character.mine.out,
                report::FDR_FILE,
                &report::fdr_tsv(&ds, &set, &observed, &res.fdr),
            )?;
            println!("{} patterns tested", set.len());
        }
        Command::Run(args) => {
            let cfg = RunConfig {
                input: args.character.mine.input.clone(),
                format: args.character.mine.format,
                analysis: args.analysis(),
                out_dir: args.character.mine.out.clone(),
            };
            let summary = pipeline::run(&cfg)?;
            println!(
                "{} discriminative patterns: T2 {} T3 {} T4 {}",
                summary.discriminative, summary.types.t2, summary.types.t3, summary.types.t4
            );
        }
        Command::Plotdata { out } => pipeline::plotdata(&out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
