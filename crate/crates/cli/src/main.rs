use std::fs;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use vertexnim::check::{explore_circuits, run_check, CheckOptions, Discrepancy, CIRCUIT_CSV_HEADER};
use vertexnim::enumerate::{enumerate_instances, sample_instances, EnumerateError, Envelope, GraphFamily, LoopPolicy};
use vertexnim::solver::{route, solve_adjacent_nim};
use vertexnim::{
    parse_instance, Budget, Convention, Oracle, OracleError, Orientation, Position, Ruleset, SolveError, Solver,
    SolverConfig,
};
use vertexnim_service::ServeOptions;

#[derive(Parser)]
#[command(name = "vertexnim", version, about = "Solve, check and serve VertexNim positions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the outcome of an instance file.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveMethod::Auto)]
        method: SolveMethod,
        /// Also print a winning move for N positions.
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Compare the closed-form rules with the oracle over a family of positions.
    Check(CheckArgs),
    /// Outcome of Nim played cyclically on heaps W1..Wn, starting at W1.
    AdjacentNim {
        #[arg(required = true, num_args = 1..)]
        weights: Vec<u64>,
    },
    /// Oracle outcomes of directed circuits holding weight-1 vertices, as CSV.
    ExploreCircuits {
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        max_weight: u64,
        #[arg(long, default_value_t = 1)]
        min_ones: usize,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Run the game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Directory of static files served next to the API.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
        /// Games are restored from and saved to this file.
        #[arg(long)]
        state_file: Option<PathBuf>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Print an instance file as a Graphviz graph.
    Dot { file: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolveMethod {
    /// Closed form when one applies, otherwise the oracle.
    Auto,
    Theorem,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Loops {
    Any,
    All,
    None,
}

#[derive(Args)]
struct BudgetArgs {
    /// Largest vertex count the oracle will search.
    #[arg(long, default_value_t = 8)]
    oracle_vertices: usize,
    /// Largest total weight the oracle will search.
    #[arg(long, default_value_t = 24)]
    oracle_weight: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        Budget::new(self.oracle_vertices, self.oracle_weight)
    }

    fn solver(&self, oracle_fallback: bool) -> Solver {
        Solver::new(SolverConfig {
            budget: self.budget(),
            oracle_fallback,
        })
    }
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["exhaustive", "samples"]))]
struct CheckArgs {
    #[arg(long)]
    orientation: Orientation,
    #[arg(long, default_value = "vertexnim")]
    ruleset: Ruleset,
    #[arg(long, default_value = "normal")]
    convention: Convention,
    #[arg(long, default_value_t = 1)]
    min_vertices: usize,
    #[arg(long)]
    max_vertices: usize,
    #[arg(long, default_value_t = 1)]
    min_weight: u64,
    #[arg(long)]
    max_weight: u64,
    #[arg(long, value_enum, default_value_t = Loops::Any)]
    loops: Loops,
    /// Only cycles v1 - v2 - ... - vn - v1.
    #[arg(long)]
    circuits: bool,
    /// Every position in the envelope.
    #[arg(long)]
    exhaustive: bool,
    /// A seeded random sample of this many positions.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also verify a winning move for every N position.
    #[arg(long)]
    witness: bool,
    /// Write one reproduction file per mismatch into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
}

enum Failure {
    Usage(String),
    Mismatches(usize),
    Budget(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Mismatches(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Oracle(OracleError::BudgetExceeded { .. }) | SolveError::OpenProblem(_) => {
                Failure::Budget(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        SolveError::from(e).into()
    }
}

impl From<EnumerateError> for Failure {
    fn from(e: EnumerateError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) | Failure::Budget(msg) => eprintln!("error: {msg}"),
                Failure::Mismatches(n) => eprintln!("{n} mismatches found"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            file,
            method,
            witness,
            budget,
        } => solve(&load(&file)?, method, witness, &budget),
        Command::Check(args) => check(&args),
        Command::AdjacentNim { weights } => {
            println!("{}", solve_adjacent_nim(&weights)?);
            Ok(())
        }
        Command::ExploreCircuits {
            n_min,
            n_max,
            max_weight,
            min_ones,
            budget,
        } => {
            let rows = explore_circuits(n_min..=n_max, max_weight, min_ones, &Oracle::new(budget.budget()))?;
            println!("{CIRCUIT_CSV_HEADER}");
            for row in rows {
                println!("{}", row.csv());
            }
            Ok(())
        }
        Command::Serve {
            port,
            host,
            static_dir,
            state_file,
            budget,
        } => {
            let options = ServeOptions {
                static_dir,
                state_file,
                solver: SolverConfig {
                    budget: budget.budget(),
                    oracle_fallback: true,
                },
            };
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Usage(e.to_string()))?;
            let addr = SocketAddr::new(host, port);
            info!("listening on {addr}");
            runtime
                .block_on(vertexnim_service::serve(addr, options))
                .map_err(|e| Failure::Usage(e.to_string()))
        }
        Command::Dot { file } => {
            let pos = load(&file)?;
            print!("{}", pos.graph().to_dot(pos.current()));
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Position, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn solve(pos: &Position, method: SolveMethod, witness: bool, budget: &BudgetArgs) -> Result<(), Failure> {
    let (outcome, tag, best) = match method {
        SolveMethod::Auto | SolveMethod::Theorem => {
            let solver = budget.solver(method == SolveMethod::Auto);
            if method == SolveMethod::Theorem {
                route(pos)?;
            }
            let report = solver.solve(pos)?;
            (report.outcome, report.method.to_string(), report.witness)
        }
        SolveMethod::Oracle => {
            let oracle = Oracle::new(budget.budget());
            let outcome = oracle.solve(pos)?;
            let best = if witness { oracle.best_move(pos)? } else { None };
            (outcome, "oracle".to_string(), best)
        }
    };
    println!("{outcome}");
    println!("method {tag}");
    if witness {
        if let Some(m) = best {
            println!("witness {}", pos.describe_move(&m));
        }
    }
    Ok(())
}

fn check(args: &CheckArgs) -> Result<(), Failure> {
    let env = Envelope::new(args.orientation, args.ruleset, args.convention)
        .vertices(args.min_vertices..=args.max_vertices)
        .weights(args.min_weight..=args.max_weight)
        .loops(match args.loops {
            Loops::Any => LoopPolicy::Any,
            Loops::All => LoopPolicy::All,
            Loops::None => LoopPolicy::None,
        })
        .family(if args.circuits {
            GraphFamily::Circuits
        } else {
            GraphFamily::Connected
        });
    let solver = args.budget.solver(true);
    let options = CheckOptions {
        witnesses: args.witness,
    };
    let report = match args.samples {
        Some(count) => run_check(sample_instances(&env, count, args.seed)?, &solver, options)?,
        None => run_check(enumerate_instances(&env)?, &solver, options)?,
    };
    println!("{}", report.summary());
    for (i, mismatch) in report.mismatches.iter().enumerate() {
        let reason = describe(&mismatch.discrepancy);
        println!("mismatch {}: {reason}", i + 1);
        for line in mismatch.instance.lines() {
            println!("  {line}");
        }
        if let Some(dir) = &args.out {
            fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("mismatch-{:04}.txt", i + 1));
            fs::write(&path, format!("# {reason}\n{}", mismatch.instance))
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Mismatches(report.mismatches.len()))
    }
}

fn describe(discrepancy: &Discrepancy) -> String {
    match discrepancy {
        Discrepancy::Outcome {
            method,
            theorem,
            oracle,
        } => format!("{method} says {theorem}, oracle says {oracle}"),
        Discrepancy::Witness { method, detail } => format!("{method} witness: {detail}"),
        Discrepancy::FullScan { method } => format!("{method} witness needed a full reduction scan"),
    }
}
