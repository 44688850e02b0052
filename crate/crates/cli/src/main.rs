use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use autoarray::diophantine::{mult_independence, Independence};
use autoarray::enclosure::{format_sci, Rounding};
use autoarray::experiment::{self, ExperimentConfig, OutputFormat};
use autoarray::series::{alpha_n_exact, approximants, build_p_n, error_bound};
use autoarray::spec::{load_generator, load_spec, parse_rational, show_rational};
use autoarray::stammering::{find_seed, matched_len, stammer_pair, verify_pair};
use autoarray::words::CodedFixedPoint;
use autoarray::Error;

#[derive(Parser)]
#[command(name = "autoarray", version, about = "Automatic arrays, periodic approximants and heights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the invariant suite on a spec.
    Check(RangeArgs),
    /// Emit one report row per n.
    Run(RunArgs),
    /// Single generator queries.
    #[command(subcommand)]
    Seq(SeqCommand),
    /// Series value and approximants of a spec.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// Base lattice queries.
    #[command(subcommand)]
    Bases(BasesCommand),
}

#[derive(Args)]
struct RangeArgs {
    /// Array spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 1)]
    n_min: u32,
    #[arg(long, default_value_t = 4)]
    n_max: u32,
    #[arg(long, env = "AUTOARRAY_WORKERS", default_value_t = 1)]
    workers: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    range: RangeArgs,
    /// Largest width of the alpha enclosure, e.g. 1e-40 or 1/1000.
    #[arg(long, default_value = "1e-40")]
    alpha_width: String,
    /// Margin in the threshold -(2^r + 1 + epsilon).
    #[arg(long, default_value = "1/1000")]
    epsilon: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SeqCommand {
    /// Term a(n) of a generator.
    Eval {
        #[arg(long)]
        generator: PathBuf,
        #[arg(long)]
        n: u64,
        /// Print a(n), ..., a(n + count - 1).
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
    /// The k-kernel, as states of the minimized automaton.
    Kernel {
        #[arg(long)]
        generator: PathBuf,
        #[arg(long, default_value_t = 16)]
        terms: u64,
    },
    /// The n-th stammering pair U_n, V_n.
    Stammer {
        #[arg(long)]
        generator: PathBuf,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum SeriesCommand {
    /// Enclosure of alpha.
    Alpha {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "1e-40")]
        width: String,
    },
    /// The periodic approximant alpha_n and its error bounds.
    Approx {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
enum BasesCommand {
    /// Decide multiplicative independence; dependent lists print a relation.
    Independent {
        #[arg(required = true, num_args = 1..)]
        bases: Vec<u64>,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Schema { .. } | Error::Configuration(_) | Error::Io(_) | Error::InputDomain(_) => 2,
        Error::DependentBases { .. } => 3,
        Error::PrecisionExhausted { .. } => 4,
        _ => 1,
    }
}

fn config(range: &RangeArgs) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(&range.spec, range.n_min, range.n_max);
    cfg.workers = range.workers;
    cfg
}

fn show_certificate(c: &[BigInt]) -> String {
    let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Check(range) => {
            let summary = experiment::check(&config(&range))?;
            print!("{}", summary.render());
            Ok(if summary.passed() { 0 } else { 1 })
        }
        Command::Run(args) => {
            let mut cfg = config(&args.range);
            cfg.alpha_width = parse_rational(&args.alpha_width)?;
            cfg.epsilon = parse_rational(&args.epsilon)?;
            cfg.format = match args.format {
                Format::Csv => OutputFormat::Csv,
                Format::Json => OutputFormat::Json,
            };
            let rows = experiment::run_experiment(&cfg)?;
            write_out(args.output.as_deref(), &experiment::render(&rows, cfg.format))?;
            Ok(0)
        }
        Command::Seq(SeqCommand::Eval { generator, n, count }) => {
            let g = load_generator(&generator)?;
            let terms = (n..n.saturating_add(count))
                .map(|i| g.term(i))
                .collect::<Result<Vec<_>, _>>()?;
            println!("{}", join(&terms));
            Ok(0)
        }
        Command::Seq(SeqCommand::Kernel { generator, terms }) => {
            let g = load_generator(&generator)?;
            let kernel = g.dfao().kernel()?;
            println!("kernel size {}", kernel.len());
            let k = g.base() as u64;
            for el in kernel.elements() {
                let prefix: Vec<i64> = (0..terms).map(|t| kernel.term(el.state, t)).collect();
                println!(
                    "a({}^{} n + {}): {}",
                    k,
                    el.exponent,
                    el.residue,
                    join(&prefix)
                );
            }
            Ok(0)
        }
        Command::Seq(SeqCommand::Stammer { generator, n }) => {
            let g = load_generator(&generator)?;
            let m = g.morphism();
            let seed = find_seed(m);
            let pair = stammer_pair(&seed, m, n)?;
            let coded = pair.coded(|s| m.code(*s));
            let w = &seed.exponent;
            let ok = verify_pair(&coded, w, &CodedFixedPoint(m))?;
            println!("w {}", show_rational(w));
            println!("r_n {}", pair.preperiod());
            println!("s_n {}", pair.period());
            println!("matched {}", matched_len(&pair, w)?);
            println!("verified {ok}");
            println!("U {}", join(coded.u.as_slice()));
            println!("V {}", join(coded.v.as_slice()));
            Ok(if ok { 0 } else { 1 })
        }
        Command::Series(SeriesCommand::Alpha { spec, width }) => {
            let spec = load_spec(&spec)?;
            let alpha = spec.evaluate_alpha(&parse_rational(&width)?)?;
            println!("lo {}", format_sci(alpha.lo(), 40, Rounding::Down));
            println!("hi {}", format_sci(alpha.hi(), 40, Rounding::Up));
            println!("width {}", format_sci(&alpha.width(), 6, Rounding::Up));
            if alpha.is_point() {
                println!("exact {}", show_rational(alpha.lo()));
            }
            Ok(0)
        }
        Command::Series(SeriesCommand::Approx { spec, n }) => {
            let spec = load_spec(&spec)?;
            let approx = approximants(&spec, n)?;
            let alpha_n = alpha_n_exact(&spec, &approx)?;
            let bound = error_bound(&spec, &approx)?;
            let stats = build_p_n(&spec, &approx).stats();
            let shape: Vec<String> = approx
                .shape()
                .iter()
                .map(|(r, s)| format!("({r},{s})"))
                .collect();
            println!("w {}", show_rational(&approx.w));
            println!("(r_i,s_i) {}", shape.join(" "));
            println!("alpha_n {}", show_rational(&alpha_n));
            println!("alpha_n~ {}", format_sci(&alpha_n, 20, Rounding::Down));
            println!("denominator {}", approx.denominator(&spec));
            let degrees: Vec<String> = stats
                .degrees
                .iter()
                .map(|d| d.map_or("-".to_string(), |d| d.to_string()))
                .collect();
            println!("P_n degrees {}", degrees.join(" "));
            println!("P_n max|coeff| {}", stats.max_abs);
            println!("rigorous bound {}", format_sci(&bound.rigorous, 12, Rounding::Up));
            println!(
                "nominal bound [{}, {}]",
                format_sci(bound.nominal.lo(), 12, Rounding::Down),
                format_sci(bound.nominal.hi(), 12, Rounding::Up)
            );
            Ok(0)
        }
        Command::Bases(BasesCommand::Independent { bases }) => {
            match mult_independence(&bases)? {
                Independence::Independent => println!("independent"),
                Independence::Dependent(c) => println!("dependent {}", show_certificate(&c)),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::DependentBases { certificate } = &e {
                eprintln!("certificate {}", show_certificate(certificate));
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
