//! `muway`: construct, search, validate and catalog mu-way latin squares
//! by intersection size.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use muway_core::compact::{parse_compact, resolve};
use muway_core::construct::{
    double_construction, embed_construction, gear1_square, gear2_square, trade_into_trade,
    two_n_plus_one,
};
use muway_core::mwls::{self, Parsed};
use muway_core::search::{search, Mode, PruneSet, SearchSpec, SearchStatus};
use muway_core::spectrum::{
    assemble, reconcile, AssembleOptions, SpectrumSet, TheoremTable,
};
use muway_core::square::MuWaySquare;
use muway_core::trades::{full_trade, trade_of_volume, VolumeOutcome};
use muway_core::Error;

#[derive(Parser)]
#[command(name = "muway", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Print wall-clock timing to stderr (output stays deterministic
    /// without it).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an MWLS or compact fixture file.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Report the intersection size of a square or rectangle file.
    Intersect {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Build a mu-way latin trade of the requested volume.
    Trade {
        #[arg(long, default_value = "4")]
        mu: usize,
        #[arg(long)]
        volume: usize,
        /// Optional shape hint `RxN` for a full trade of that shape.
        #[arg(long)]
        shape: Option<String>,
    },
    /// Run one of the composition techniques.
    Construct(ConstructArgs),
    /// Exhaustive or witness-seeking search at fixed (mu, n, k).
    Search {
        #[arg(long, default_value = "4")]
        mu: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "first-witness")]
        mode: String,
        /// Node budget (0 = unlimited); LI_BUDGET supplies the default.
        #[arg(long)]
        budget: Option<u64>,
        /// Disable a prune family: sequence, symbol-counts, local-content.
        #[arg(long = "no-prune")]
        no_prune: Vec<String>,
        /// Worker threads (LI_THREADS caps the default of 1).
        #[arg(long)]
        threads: Option<usize>,
        /// Write the witness, if any, to this file as MWLS.
        #[arg(long)]
        witness_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Assemble the proven spectrum for an order and reconcile it against
    /// the shipped result table.
    Spectrum {
        #[arg(long, default_value = "4")]
        mu: usize,
        #[arg(long)]
        n: usize,
        /// Evidence sources: all | constructions | fixtures.
        #[arg(long, default_value = "all")]
        ingredients: String,
        #[arg(long, default_value = "text")]
        report: String,
        /// Fixture corpus root (defaults to ./fixtures).
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Verify the fixture corpus.
    Fixtures {
        /// Directory of transcribed fixtures (defaults to ./fixtures).
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Convert a compact appendix fixture to canonical MWLS.
    Convert { file: PathBuf },
}

#[derive(Args)]
struct ConstructArgs {
    /// double | embed | 2n1 | product | gear1 | gear2
    #[arg(long)]
    technique: String,
    #[arg(long, default_value = "4")]
    mu: usize,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    x: Option<usize>,
    #[arg(long)]
    y: Option<usize>,
    /// Input files (four for double; A' then B' for 2n1; host for product;
    /// inner square for embed).
    #[arg(long)]
    input: Vec<PathBuf>,
    /// Outer order for embed.
    #[arg(long)]
    outer: Option<usize>,
    /// Plug order for product (trade-into-trade).
    #[arg(long)]
    plug_order: Option<usize>,
}

fn load_square(path: &Path) -> Result<MuWaySquare, Error> {
    let text = std::fs::read_to_string(path)?;
    let head = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .unwrap_or("");
    if head.starts_with("label:") {
        let fx = parse_compact(&text)?;
        resolve(&fx)
    } else {
        match mwls::parse(&text)? {
            Parsed::Square(sq) => Ok(sq),
            Parsed::Trade(_) => Err(Error::Dimension(
                "expected a square or rectangle, found a trade".into(),
            )),
        }
    }
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    let t0 = std::time::Instant::now();
    let status = dispatch(&cli)?;
    if cli.timing {
        eprintln!("elapsed: {:.3?}", t0.elapsed());
    }
    Ok(status)
}

fn dispatch(cli: &Cli) -> Result<i32, Error> {
    match &cli.cmd {
        Cmd::Validate { file, format } => {
            let sq = load_square(file)?;
            let kind = if sq.is_square() { "square" } else { "rectangle" };
            match format {
                Format::Text => println!(
                    "valid {}-way n={} k={} ({kind})",
                    sq.mu(),
                    sq.order(),
                    sq.intersection_size()
                ),
                Format::Tsv => println!(
                    "mu\tn\trows\tk\tkind\n{}\t{}\t{}\t{}\t{kind}",
                    sq.mu(),
                    sq.order(),
                    sq.rows(),
                    sq.intersection_size()
                ),
            }
            Ok(0)
        }
        Cmd::Intersect { file, format } => {
            let sq = load_square(file)?;
            match format {
                Format::Text => println!("{}", sq.intersection_size()),
                Format::Tsv => println!("k\n{}", sq.intersection_size()),
            }
            Ok(0)
        }
        Cmd::Trade { mu, volume, shape } => {
            if let Some(shape) = shape {
                let (r, n) = shape
                    .split_once('x')
                    .ok_or_else(|| Error::Dimension("shape must look like RxN".into()))?;
                let r: usize = r.parse().map_err(|_| Error::Dimension("bad rows".into()))?;
                let n: usize = n.parse().map_err(|_| Error::Dimension("bad cols".into()))?;
                if r * n != *volume {
                    return Err(Error::Dimension(format!(
                        "shape {r}x{n} does not realize volume {volume}"
                    )));
                }
                let t = full_trade(*mu, r, n)?;
                print!("{}", mwls::render_trade(&t));
                return Ok(0);
            }
            match trade_of_volume(*mu, *volume)? {
                VolumeOutcome::Trade(t) => {
                    print!("{}", mwls::render_trade(&t));
                    Ok(0)
                }
                VolumeOutcome::Infeasible => {
                    println!("INFEASIBLE volume={volume} (proven-impossible set)");
                    Ok(1)
                }
                VolumeOutcome::Unknown => {
                    println!("UNKNOWN volume={volume}");
                    Ok(1)
                }
            }
        }
        Cmd::Construct(args) => {
            let (sq, desc) = run_construct(args)?;
            print!("{}", mwls::render_square(&sq));
            println!("# provenance");
            println!("# technique: {}", args.technique);
            println!("# inputs: {desc}");
            println!("# k: {}", sq.intersection_size());
            Ok(0)
        }
        Cmd::Search {
            mu,
            n,
            k,
            mode,
            budget,
            no_prune,
            threads,
            witness_out,
            format,
        } => {
            let mode = match mode.as_str() {
                "exhaustive" => Mode::Exhaustive,
                "first-witness" => Mode::FirstWitness,
                other => {
                    return Err(Error::Dimension(format!("unknown mode {other:?}")));
                }
            };
            let mut prunes = PruneSet::ALL;
            for p in no_prune {
                match p.as_str() {
                    "sequence" => prunes.sequence = false,
                    "symbol-counts" => prunes.symbol_counts = false,
                    "local-content" => prunes.local_content = false,
                    other => {
                        return Err(Error::Dimension(format!("unknown prune {other:?}")))
                    }
                }
            }
            let budget = budget
                .or_else(|| std::env::var("LI_BUDGET").ok().and_then(|v| v.parse().ok()))
                .unwrap_or(0);
            let threads = threads
                .or_else(|| std::env::var("LI_THREADS").ok().and_then(|v| v.parse().ok()))
                .unwrap_or(1);
            let spec = SearchSpec {
                mu: *mu,
                n: *n,
                k: *k,
                mode,
                budget,
                prunes,
                threads,
            };
            let out = search(&spec)?;
            match format {
                Format::Text => print!("{}", out.certificate(&spec)),
                Format::Tsv => println!(
                    "mu\tn\tk\tverdict\tnodes\tskeletons\n{}\t{}\t{}\t{}\t{}\t{}",
                    mu,
                    n,
                    k,
                    match out.status {
                        SearchStatus::Witness => "witness",
                        SearchStatus::ExhaustedNonexistent => "nonexistent",
                        SearchStatus::BudgetExceeded => "budget-exceeded",
                    },
                    out.nodes,
                    out.skeletons
                ),
            }
            if let (Some(path), Some(w)) = (witness_out, &out.witness) {
                std::fs::write(path, mwls::render_square(w))?;
            }
            Ok(match out.status {
                SearchStatus::Witness | SearchStatus::ExhaustedNonexistent => 0,
                SearchStatus::BudgetExceeded => 1,
            })
        }
        Cmd::Spectrum {
            mu,
            n,
            ingredients,
            report,
            fixtures,
        } => {
            if *mu != 4 {
                return Err(Error::Dimension("spectrum bookkeeping is for mu = 4".into()));
            }
            let fixture_dir = fixtures
                .clone()
                .or_else(|| Some(PathBuf::from("fixtures")).filter(|p| p.exists()));
            let mut opts = AssembleOptions {
                fixture_dir,
                ..Default::default()
            };
            match ingredients.as_str() {
                "all" => {}
                "constructions" => opts.fixture_dir = None,
                "fixtures" => {
                    opts.full_trades = false;
                    opts.gear_sweep = false;
                    opts.technique1 = false;
                    opts.proposition = false;
                    opts.trade_into_trade_examples = false;
                    opts.pad_rectangles = false;
                    opts.search_up_to = 0;
                }
                other => {
                    return Err(Error::Dimension(format!(
                        "unknown ingredient set {other:?}"
                    )))
                }
            }
            let mut smaller: BTreeMap<usize, SpectrumSet> = BTreeMap::new();
            for i in 1..*n {
                let done = assemble(i, &opts, &smaller)?;
                smaller.insert(i, done);
            }
            let assembled = assemble(*n, &opts, &smaller)?;
            let table = TheoremTable::load_shipped()?;
            let rep = reconcile(*n, &assembled, &table);
            match report.as_str() {
                "text" => print!("{}", rep.render_text()),
                "tsv" => {
                    println!("k\tclass\tevidence");
                    for row in &rep.rows {
                        println!(
                            "{}\t{}\t{}",
                            row.k,
                            row.class,
                            row.evidence
                                .iter()
                                .map(|k| k.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        );
                    }
                }
                other => {
                    return Err(Error::Dimension(format!("unknown report {other:?}")));
                }
            }
            Ok(0)
        }
        Cmd::Fixtures { dir, format } => {
            let dir = dir.clone().unwrap_or_else(|| PathBuf::from("fixtures"));
            let report = muway_core::fixtures::verify_dir(&dir)?;
            for r in &report.results {
                let name = r.path.file_name().unwrap_or_default().to_string_lossy();
                match (&r.status, format) {
                    (muway_core::fixtures::FixtureStatus::Pass { n, k, mu }, Format::Text) => {
                        println!("PASS {name} ({mu}-way n={n} k={k})")
                    }
                    (muway_core::fixtures::FixtureStatus::Pass { n, k, mu }, Format::Tsv) => {
                        println!("{name}\tpass\t{mu}\t{n}\t{k}")
                    }
                    (muway_core::fixtures::FixtureStatus::Fail(e), Format::Text) => {
                        println!("FAIL {name}: {e}")
                    }
                    (muway_core::fixtures::FixtureStatus::Fail(e), Format::Tsv) => {
                        println!("{name}\tfail\t\t\t{e}")
                    }
                    (muway_core::fixtures::FixtureStatus::Quarantined(e), Format::Text) => {
                        println!("QUARANTINED {name}: {e}")
                    }
                    (muway_core::fixtures::FixtureStatus::Quarantined(e), Format::Tsv) => {
                        println!("{name}\tquarantined\t\t\t{e}")
                    }
                }
            }
            println!(
                "total: {} passed, {} failed, {} quarantined",
                report.passed(),
                report.failed(),
                report.quarantined()
            );
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Cmd::Convert { file } => {
            let sq = load_square(file)?;
            print!("{}", mwls::render_square(&sq));
            Ok(0)
        }
    }
}

fn run_construct(args: &ConstructArgs) -> Result<(MuWaySquare, String), Error> {
    let need = |v: Option<usize>, name: &str| {
        v.ok_or_else(|| Error::Dimension(format!("--{name} is required for this technique")))
    };
    match args.technique.as_str() {
        "gear1" => {
            let (a, b, x, y) = (
                need(args.a, "a")?,
                need(args.b, "b")?,
                need(args.x, "x")?,
                need(args.y, "y")?,
            );
            let sq = gear1_square(args.mu, a, b, x, y)?;
            Ok((sq, format!("a={a} b={b} x={x} y={y}")))
        }
        "gear2" => {
            let (a, b, c, x, y) = (
                need(args.a, "a")?,
                need(args.b, "b")?,
                need(args.c, "c")?,
                need(args.x, "x")?,
                need(args.y, "y")?,
            );
            let sq = gear2_square(args.mu, a, b, c, x, y)?;
            Ok((sq, format!("a={a} b={b} c={c} x={x} y={y}")))
        }
        "double" => {
            if args.input.len() != 4 {
                return Err(Error::Dimension("double needs four --input files".into()));
            }
            let sqs: Vec<MuWaySquare> = args
                .input
                .iter()
                .map(|p| load_square(p))
                .collect::<Result<_, _>>()?;
            let sq = double_construction([&sqs[0], &sqs[1], &sqs[2], &sqs[3]])?;
            Ok((sq, format!("{} files", args.input.len())))
        }
        "embed" => {
            if args.input.len() != 1 {
                return Err(Error::Dimension("embed needs one --input file".into()));
            }
            let inner = load_square(&args.input[0])?;
            let outer = need(args.outer, "outer")?;
            let sq = embed_construction(&inner, outer)?;
            Ok((sq, format!("inner order {} into {outer}", inner.order())))
        }
        "2n1" => {
            if args.input.len() != 2 {
                return Err(Error::Dimension(
                    "2n1 needs two --input files (A' then B')".into(),
                ));
            }
            let a = load_square(&args.input[0])?;
            let b = load_square(&args.input[1])?;
            let sq = two_n_plus_one(&a, &b)?;
            Ok((sq, "A', B'".to_string()))
        }
        "product" => {
            if args.input.len() != 1 {
                return Err(Error::Dimension("product needs one --input host file".into()));
            }
            let host = load_square(&args.input[0])?;
            let m = args.plug_order.unwrap_or(2);
            let plugs = vec![full_trade(2, m, m)?; host.mu()];
            let sq = trade_into_trade(&host, &plugs)?;
            Ok((sq, format!("host order {}, plug order {m}", host.order())))
        }
        other => Err(Error::Dimension(format!("unknown technique {other:?}"))),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
