//! Command-line front end for the Petri-net to statechart pipeline.
//!
//! Subcommands: `convert` (full pipeline), `init-only`, `reduce-only`,
//! `invert`, `check`, `gen` and `bench`. Models travel through files
//! (`.pn` and `.sc`); diagnostics go to stderr. Exit codes: 0 success,
//! 1 input or validation error, 2 internal invariant failure (reachable
//! only with `--paranoid`).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pn2sc::bench::{format_csv, format_table, generate_sp, run_bench, GenSpec};
use pn2sc::cleanup::cleanup;
use pn2sc::initialise::initialise;
use pn2sc::inverse::invert_initialisation;
use pn2sc::io::{
    parse_petri_net, parse_statechart, serialize_petri_net, serialize_statechart, ParseDiagnostic,
};
use pn2sc::model::{
    check_inv, check_name_uniqueness, check_pn_links, check_sc_links, ModelReport, PetriNet,
    ScModel,
};
use pn2sc::reduce::{run_to_fixpoint, ReduceError, ReduceOpts, RunStats};

#[derive(Parser)]
#[command(
    name = "pn2sc",
    version,
    about = "Transforms Petri nets into hierarchical statecharts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ReduceFlags {
    /// Shuffle the rule-match candidate order with this seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Evaluate rule succedents before applying instead of skipping the
    /// provably false check. Output is identical either way.
    #[arg(long)]
    no_nac_opt: bool,
    /// Re-check every invariant after every rewrite step.
    #[arg(long)]
    paranoid: bool,
    /// Write the rule application trace to this file, one step per line.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
}

impl ReduceFlags {
    fn opts(&self) -> ReduceOpts {
        ReduceOpts {
            nac_optimisation: !self.no_nac_opt,
            order_seed: self.seed,
            paranoid: self.paranoid,
            record_trace: self.trace.is_some(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: parse, initialise, reduce, cleanup, write.
    Convert {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long = "out", value_name = "PATH")]
        output: PathBuf,
        #[command(flatten)]
        flags: ReduceFlags,
    },
    /// Copy the net into a flat statechart without reducing it.
    InitOnly {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long = "out", value_name = "PATH")]
        output: PathBuf,
    },
    /// Reduce an already-initialised net/statechart pair to its fixpoint.
    ReduceOnly {
        /// The Petri net (`.pn`).
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// The flat statechart produced by init-only (`.sc`).
        #[arg(long = "sc", value_name = "PATH")]
        statechart: PathBuf,
        /// Where the reduced statechart goes.
        #[arg(long = "out", value_name = "PATH")]
        output: PathBuf,
        /// Optionally write the reduced net as well.
        #[arg(long = "out-pn", value_name = "PATH")]
        output_pn: Option<PathBuf>,
        #[command(flatten)]
        flags: ReduceFlags,
    },
    /// Rebuild a Petri net from a flat statechart.
    Invert {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long = "out", value_name = "PATH")]
        output: PathBuf,
    },
    /// Parse a model and run every applicable invariant check.
    Check {
        /// A `.pn` or `.sc` file.
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Optional statechart to check jointly with a `.pn` input.
        #[arg(long = "sc", value_name = "PATH")]
        statechart: Option<PathBuf>,
    },
    /// Generate a fully reducible series-parallel net.
    Gen {
        #[arg(long, value_name = "N")]
        places: usize,
        #[arg(long, value_name = "N", default_value_t = 0)]
        seed: u64,
        /// Probability of a parallel split where the budget allows one.
        #[arg(long, value_name = "F", default_value_t = 0.3)]
        pprob: f64,
        #[arg(long = "out", value_name = "PATH")]
        output: PathBuf,
    },
    /// Generate nets of the given sizes and time each pipeline phase.
    Bench {
        /// Comma-separated place counts, e.g. 200,1000.
        #[arg(long, value_name = "CSV")]
        sizes: String,
        #[arg(long, value_name = "N", default_value_t = 3)]
        reps: usize,
        #[arg(long, value_name = "N", default_value_t = 0)]
        seed: u64,
        /// Also write the rows as CSV to this path.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
}

enum CliError {
    /// Bad input or failed validation: exit 1.
    Input(String),
    /// Invariant failure detected mid-run: exit 2.
    Internal(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap would exit 2 on usage errors; this tool reserves 2 for
            // internal invariant failures
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(message)) => {
            eprintln!("{message}");
            ExitCode::from(1)
        }
        Err(CliError::Internal(message)) => {
            eprintln!("{message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Convert {
            input,
            output,
            flags,
        } => {
            let pn = read_net(&input)?;
            let mut pn = pn;
            let mut sc = initialise(&pn).map_err(|report| report_error(&input, &report))?;
            let stats = reduce(&mut pn, &mut sc, &flags)?;
            let report = cleanup(&mut sc);
            for warning in &report.warnings {
                eprintln!("cleanup: {warning}");
            }
            write_trace(&flags, &stats)?;
            write_file(&output, &serialize_statechart(&sc))
        }
        Command::InitOnly { input, output } => {
            let pn = read_net(&input)?;
            let sc = initialise(&pn).map_err(|report| report_error(&input, &report))?;
            write_file(&output, &serialize_statechart(&sc))
        }
        Command::ReduceOnly {
            input,
            statechart,
            output,
            output_pn,
            flags,
        } => {
            let mut pn = read_net(&input)?;
            let mut sc = read_statechart(&statechart)?;
            let mut pre = check_inv(&pn, &sc).merge(check_name_uniqueness(&pn, &sc));
            if sc.ands().count() != 0 {
                pre.violations.push(pn2sc::model::Violation {
                    invariant: pn2sc::model::InvariantId::StatechartUnpopulated,
                    element: "statechart".into(),
                    message: "AND states present before reduction".into(),
                });
            }
            if !pre.passed() {
                return Err(CliError::Input(format!(
                    "{}: models are not a valid initialisation result:\n{pre}",
                    input.display()
                )));
            }
            let stats = reduce(&mut pn, &mut sc, &flags)?;
            write_trace(&flags, &stats)?;
            if let Some(path) = output_pn {
                write_file(&path, &serialize_petri_net(&pn))?;
            }
            write_file(&output, &serialize_statechart(&sc))
        }
        Command::Invert { input, output } => {
            let sc = read_statechart(&input)?;
            let pn =
                invert_initialisation(&sc).map_err(|diags| diagnostics_error(&input, &diags))?;
            write_file(&output, &serialize_petri_net(&pn))
        }
        Command::Check { input, statechart } => check(&input, statechart.as_deref()),
        Command::Gen {
            places,
            seed,
            pprob,
            output,
        } => {
            if places == 0 {
                return Err(CliError::Input("--places must be at least 1".into()));
            }
            if !(0.0..=1.0).contains(&pprob) {
                return Err(CliError::Input("--pprob must lie in [0, 1]".into()));
            }
            let spec = GenSpec {
                target_places: places,
                seed,
                parallel_probability: pprob,
            };
            write_file(&output, &serialize_petri_net(&generate_sp(&spec)))
        }
        Command::Bench {
            sizes,
            reps,
            seed,
            csv,
        } => {
            let sizes = parse_sizes(&sizes)?;
            if reps == 0 {
                return Err(CliError::Input("--reps must be at least 1".into()));
            }
            let rows = run_bench(&sizes, seed, reps);
            print!("{}", format_table(&rows));
            if let Some(path) = csv {
                write_file(&path, &format_csv(&rows))?;
            }
            Ok(())
        }
    }
}

fn reduce(pn: &mut PetriNet, sc: &mut ScModel, flags: &ReduceFlags) -> Result<RunStats, CliError> {
    run_to_fixpoint(pn, sc, &flags.opts()).map_err(|err| match err {
        ReduceError::InvariantViolation { .. } | ReduceError::PriorityViolation { .. } => {
            CliError::Internal(format!("internal invariant failure: {err}"))
        }
    })
}

fn check(input: &Path, statechart: Option<&Path>) -> Result<(), CliError> {
    let mut results: Vec<(&str, ModelReport)> = Vec::new();
    let is_statechart = input.extension().is_some_and(|e| e == "sc");
    if is_statechart {
        let sc = read_statechart(input)?;
        let pn = PetriNet::new();
        results.push(("name uniqueness", check_name_uniqueness(&pn, &sc)));
        results.push(("statechart structure", check_sc_links(&sc)));
    } else {
        let pn = read_net(input)?;
        let sc = match statechart {
            Some(path) => Some(read_statechart(path)?),
            None => None,
        };
        match sc {
            Some(sc) => {
                results.push(("name uniqueness", check_name_uniqueness(&pn, &sc)));
                results.push(("place/OR correspondence", check_inv(&pn, &sc)));
                results.push(("net inverse links", check_pn_links(&pn)));
                results.push(("statechart structure", check_sc_links(&sc)));
            }
            None => {
                results.push((
                    "name uniqueness",
                    check_name_uniqueness(&pn, &ScModel::new()),
                ));
                results.push(("net inverse links", check_pn_links(&pn)));
            }
        }
    }

    let mut failed = false;
    let mut out = String::new();
    for (name, report) in &results {
        if report.passed() {
            let _ = writeln!(out, "{name}: pass");
        } else {
            failed = true;
            let _ = writeln!(out, "{name}: FAIL");
            for violation in &report.violations {
                let _ = writeln!(out, "  {violation}");
            }
        }
    }
    print!("{out}");
    if failed {
        Err(CliError::Input(format!(
            "{}: invariant violations found",
            input.display()
        )))
    } else {
        println!("all invariants passed");
        Ok(())
    }
}

fn parse_sizes(csv: &str) -> Result<Vec<usize>, CliError> {
    let sizes: Result<Vec<usize>, _> = csv.split(',').map(|s| s.trim().parse()).collect();
    match sizes {
        Ok(sizes) if !sizes.is_empty() && sizes.iter().all(|&s| s >= 1) => Ok(sizes),
        _ => Err(CliError::Input(format!(
            "--sizes must be a comma-separated list of positive integers, got `{csv}`"
        ))),
    }
}

fn read_net(path: &Path) -> Result<PetriNet, CliError> {
    let text = read_file(path)?;
    parse_petri_net(&text).map_err(|diags| diagnostics_error(path, &diags))
}

fn read_statechart(path: &Path) -> Result<ScModel, CliError> {
    let text = read_file(path)?;
    parse_statechart(&text).map_err(|diags| diagnostics_error(path, &diags))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|err| CliError::Input(format!("{}: {err}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|err| CliError::Input(format!("{}: {err}", path.display())))
}

fn write_trace(flags: &ReduceFlags, stats: &RunStats) -> Result<(), CliError> {
    if let Some(path) = &flags.trace {
        let mut text = String::new();
        for step in &stats.trace {
            let _ = writeln!(text, "{step}");
        }
        write_file(path, &text)?;
    }
    Ok(())
}

fn diagnostics_error(path: &Path, diagnostics: &[ParseDiagnostic]) -> CliError {
    let mut message = String::new();
    for (i, diagnostic) in diagnostics.iter().enumerate() {
        if i > 0 {
            message.push('\n');
        }
        let _ = write!(message, "{}:{diagnostic}", path.display());
    }
    CliError::Input(message)
}

fn report_error(path: &Path, report: &ModelReport) -> CliError {
    CliError::Input(format!(
        "{}: precondition failed:\n{report}",
        path.display()
    ))
}
