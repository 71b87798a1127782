use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use laurent_core::engine::{execute_exact, FixedKernel};
use laurent_core::testbench::{format_output_words, format_stimulus, parse_stimulus, Stimulus};
use laurent_core::{
    build_plan, count_ops, dft_direct, dht_direct, pack_fixed, run_device_with, FixedConfig,
    LaurentPlan, MemoryImage, OpCount, Rounding, Signal, TransformOutput, TransformSelect,
};

mod render;

#[derive(Parser)]
#[command(
    name = "laurent",
    version,
    about = "Laurent-series DFT/DHT engine and device golden model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transform a sample file.
    Transform(TransformArgs),
    /// Print the factored plan and its operation counts.
    Plan(PlanArgs),
    /// Run the device model on a stimulus file and write output words.
    Testbench(TestbenchArgs),
    /// Quantize a sample file into a stimulus file.
    Stimulus(StimulusArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Select {
    Dft,
    Dht,
}

impl From<Select> for TransformSelect {
    fn from(s: Select) -> Self {
        match s {
            Select::Dft => TransformSelect::Dft,
            Select::Dht => TransformSelect::Dht,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Arith {
    Exact,
    Fixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Round {
    HalfAway,
    HalfEven,
    Truncate,
}

impl From<Round> for Rounding {
    fn from(r: Round) -> Self {
        match r {
            Round::HalfAway => Rounding::HalfAwayFromZero,
            Round::HalfEven => Rounding::HalfEven,
            Round::Truncate => Rounding::Truncate,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Hex,
}

#[derive(Args)]
struct FixedArgs {
    /// Fractional bits of the 16-bit input and 32-bit accumulator words.
    #[arg(long, default_value_t = 7)]
    frac_bits: u32,
    #[arg(long, value_enum, default_value_t = Round::HalfAway)]
    round: Round,
}

impl FixedArgs {
    fn config(&self) -> Result<FixedConfig> {
        Ok(FixedConfig::with_frac_bits(
            self.frac_bits,
            self.round.into(),
        )?)
    }
}

#[derive(Args)]
struct TransformArgs {
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Select::Dft)]
    select: Select,
    #[arg(long, value_enum, default_value_t = Arith::Fixed)]
    arith: Arith,
    #[command(flatten)]
    fixed: FixedArgs,
    /// Samples, one per line or comma-separated.
    #[arg(long)]
    input: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Report the deviation from direct O(N²) summation on stderr.
    #[arg(long)]
    compare: bool,
    /// Print the plan listing on stderr.
    #[arg(long)]
    dump_plan: bool,
    /// Print the operation counts on stderr.
    #[arg(long)]
    count_ops: bool,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, default_value_t = 16)]
    n: usize,
}

#[derive(Args)]
struct TestbenchArgs {
    /// Stimulus file: `SELECT DFT|DHT` then one 16-bit hex word per line.
    stimulus: PathBuf,
    /// Defaults to stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    fixed: FixedArgs,
}

#[derive(Args)]
struct StimulusArgs {
    #[arg(long, value_enum, default_value_t = Select::Dft)]
    select: Select,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    fixed: FixedArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Transform(args) => cmd_transform(&args),
        Command::Plan(args) => cmd_plan(&args),
        Command::Testbench(args) => cmd_testbench(&args),
        Command::Stimulus(args) => cmd_stimulus(&args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let message = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn read_samples(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let samples = render::parse_samples(&text)?;
    if samples.is_empty() {
        bail!("{}: no samples", path.display());
    }
    Ok(samples)
}

fn emit(output: Option<&Path>, body: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => io::stdout()
            .write_all(body.as_bytes())
            .context("writing stdout"),
    }
}

fn counts_text(count: &OpCount) -> String {
    format!(
        "multiplications: {}\nadditions: {}\nadditions without row sharing: {}\ndht extra additions: {}\n",
        count.multiplications,
        count.additions,
        count.additions_without_row_sharing,
        count.dht_extra_additions
    )
}

fn cmd_transform(args: &TransformArgs) -> Result<ExitCode> {
    let plan = build_plan(args.n)?;
    let samples = read_samples(&args.input)?;
    if samples.len() != args.n {
        bail!(
            "{}: expected {} samples, found {}",
            args.input.display(),
            args.n,
            samples.len()
        );
    }
    let signal = Signal::new(samples)?;
    let select = args.select.into();

    let output = match args.arith {
        Arith::Exact => execute_exact(&plan, &signal, select)?,
        Arith::Fixed => TransformOutput::Fixed(
            FixedKernel::new(&plan, args.fixed.config()?)?.run_signal(&signal, select)?,
        ),
    };

    let body = match (args.format, &output) {
        (Format::Hex, TransformOutput::Fixed(f)) => format_output_words(&pack_fixed(f)?),
        (Format::Hex, _) => bail!("hex output requires --arith fixed"),
        (Format::Text, out) => render::text(out),
        (Format::Csv, out) => render::csv(out),
    };
    emit(args.output.as_deref(), &body)?;

    if let TransformOutput::Fixed(f) = &output {
        if f.overflow {
            eprintln!("warning: fixed-point saturation occurred");
        }
    }
    if args.compare {
        let dev = match select {
            TransformSelect::Dft => render::max_deviation_dft(&output, &dft_direct(&signal)?),
            TransformSelect::Dht => render::max_deviation_dht(&output, &dht_direct(&signal)?),
        };
        eprintln!("max deviation vs direct summation: {dev:e}");
    }
    if args.dump_plan {
        eprint!("{}", plan.dump());
    }
    if args.count_ops {
        eprint!("{}", counts_text(&count_ops(&plan)));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_plan(args: &PlanArgs) -> Result<ExitCode> {
    let plan: LaurentPlan = build_plan(args.n)?;
    print!("{}", plan.dump());
    print!("{}", counts_text(&count_ops(&plan)));
    if !plan.is_optimal() {
        eprintln!("error: non-optimal factorization (distinct-row fallback used)");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_testbench(args: &TestbenchArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.stimulus)
        .with_context(|| format!("reading {}", args.stimulus.display()))?;
    let stimulus = parse_stimulus(&text).with_context(|| format!("{}", args.stimulus.display()))?;
    let plan = build_plan(stimulus.words.len())?;
    let image = run_device_with(
        &MemoryImage::new(stimulus.words, stimulus.select),
        &plan,
        args.fixed.config()?,
    )?;
    if image.overflow {
        eprintln!("warning: fixed-point saturation occurred");
    }
    emit(
        args.output.as_deref(),
        &format_output_words(&image.output_words),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_stimulus(args: &StimulusArgs) -> Result<ExitCode> {
    let signal = Signal::new(read_samples(&args.input)?)?;
    let plan = build_plan(signal.len())?;
    let kernel = FixedKernel::new(&plan, args.fixed.config()?)?;
    let image = MemoryImage::from_signal(&signal, args.select.into(), &kernel)?;
    let body = format_stimulus(&Stimulus {
        select: image.select,
        words: image.input_words,
    });
    emit(args.output.as_deref(), &body)?;
    Ok(ExitCode::SUCCESS)
}
