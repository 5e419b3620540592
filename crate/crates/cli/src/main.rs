//! Command-line front end: repair a CSV relation, classify an FD set,
//! run a benchmark grid, emit the solver model, or generate a hardness
//! instance from a CNF formula.
//!
//! Exit codes: 0 success, 1 validation error, 2 solver node cap exhausted,
//! 3 I/O error. Diagnostics go to standard error.

use rsrepair_cli::{bench, csvio, dimacs, dsl, report};

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use rsrepair_core::gadget::sat_gadget;
use rsrepair_core::heuristics::AlgorithmChoice;
use rsrepair_core::ilp::{build_rs_ilp, emit_lp_file};
use rsrepair_core::structure::{classify_dichotomy, DichotomyClass, Simplification};
use rsrepair_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "rsrepair",
    version,
    about = "Representative subset repairs of CSV relations under functional dependencies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Repair a relation with a chosen algorithm and write the result.
    Repair {
        /// Input relation (CSV with a header row).
        #[arg(long)]
        input: PathBuf,
        /// Name of the sensitive attribute.
        #[arg(long)]
        sensitive: String,
        /// FD file (`LHS -> RHS` statements).
        #[arg(long)]
        fds: PathBuf,
        /// Representation constraint file (`value >= num/den` lines; an
        /// empty file means no constraint).
        #[arg(long)]
        rc: PathBuf,
        /// Algorithm: global-ilp, lhschain-dp, fdcleanser, lp-repr-rounding,
        /// lp-greedy-rounding, ilp-postclean, dp-postclean, vc-postclean.
        #[arg(long)]
        algo: String,
        /// Accepted for reproducibility bookkeeping; every repair algorithm
        /// is deterministic, so the seed does not change outputs.
        #[arg(long)]
        seed: Option<u64>,
        /// Branch-and-bound node budget for the exact solver.
        #[arg(long, default_value_t = 1_000_000)]
        node_cap: u64,
        /// Output CSV for the repaired relation.
        #[arg(long)]
        out: PathBuf,
        /// Optional stats JSON (single object, deterministic).
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Classify an FD set as PolyTime or NpHard and print the
    /// simplification trace.
    Classify {
        #[arg(long)]
        fds: PathBuf,
    },
    /// Run a benchmark grid from a TOML config.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write the 0/1 program for an instance in CPLEX LP format.
    EmitLp {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        sensitive: String,
        #[arg(long)]
        fds: PathBuf,
        #[arg(long)]
        rc: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate the 3-CNF hardness instance for a DIMACS formula.
    Gadget {
        /// DIMACS CNF file with at most three literals per clause.
        #[arg(long)]
        cnf: PathBuf,
        /// Output directory (created if absent): relation.csv, fds, rc,
        /// meta.json.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) if err.use_stderr() => {
            eprintln!("{err}");
            return ExitCode::from(1);
        }
        Err(err) => {
            // --help / --version.
            print!("{err}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify_exit(&err))
        }
    }
}

/// 2 for solver-cap exhaustion, 3 for I/O failures, 1 for everything else.
fn classify_exit(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<CoreError>() {
            if matches!(core, CoreError::NodeCapExceeded { .. }) {
                return 2;
            }
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 3;
        }
        if let Some(csv_err) = cause.downcast_ref::<csv::Error>() {
            if matches!(csv_err.kind(), csv::ErrorKind::Io(_)) {
                return 3;
            }
        }
    }
    1
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(
    input: &Path,
    sensitive: &str,
    fds: &Path,
    rc: &Path,
) -> Result<(
    rsrepair_core::relation::Relation,
    rsrepair_core::fd::FdSet,
    rsrepair_core::rc::ReprConstraint,
)> {
    let relation = csvio::load_relation_csv(input, sensitive)?;
    let named = dsl::parse_fd_dsl(&read_to_string(fds)?)?;
    let bound = dsl::bind_fds(&named, relation.schema())?;
    let constraint = dsl::parse_rc_dsl(&read_to_string(rc)?)?;
    Ok((relation, bound, constraint))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Repair {
            input,
            sensitive,
            fds,
            rc,
            algo,
            seed,
            node_cap,
            out,
            stats,
        } => {
            let (relation, fds, rc) = load_instance(&input, &sensitive, &fds, &rc)?;
            let choice: AlgorithmChoice = algo.parse::<AlgorithmChoice>()?;
            if let Some(seed) = seed {
                log::info!("seed {seed} recorded; repair algorithms are deterministic");
            }
            let (output, report, runtime_ms) =
                report::execute(choice, &relation, &fds, &rc, node_cap)?;
            csvio::save_relation_csv(&output, &out)?;
            if let Some(stats_path) = stats {
                let mut json = serde_json::to_string_pretty(&report)?;
                json.push('\n');
                fs::write(&stats_path, json)
                    .with_context(|| format!("writing {}", stats_path.display()))?;
            }
            eprintln!(
                "{}: kept {} of {} rows ({} deleted) in {} ms",
                report.algorithm, report.output_size, report.input_size, report.deleted,
                runtime_ms
            );
            Ok(())
        }
        Command::Classify { fds } => {
            let named = dsl::parse_fd_dsl(&read_to_string(&fds)?)?;
            let schema = dsl::schema_from_fd_names(&named)?;
            let bound = dsl::bind_fds(&named, &schema)?;
            match classify_dichotomy(&bound) {
                DichotomyClass::PolyTime(trace) => {
                    println!("PolyTime");
                    for (index, step) in trace.iter().enumerate() {
                        println!("  {}. {}", index + 1, describe_step(step, &schema));
                    }
                }
                DichotomyClass::NpHard => println!("NpHard"),
            }
            Ok(())
        }
        Command::Bench { config } => bench::run_bench(&config),
        Command::EmitLp {
            input,
            sensitive,
            fds,
            rc,
            out,
        } => {
            let (relation, fds, rc) = load_instance(&input, &sensitive, &fds, &rc)?;
            let model = build_rs_ilp(&relation, &fds, &rc)?;
            fs::write(&out, emit_lp_file(&model))
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(())
        }
        Command::Gadget { cnf, out } => {
            let formula = dimacs::parse_dimacs(&read_to_string(&cnf)?)?;
            let instance = sat_gadget(&formula)?;
            fs::create_dir_all(&out)
                .with_context(|| format!("creating {}", out.display()))?;
            csvio::save_relation_csv(&instance.relation, &out.join("relation.csv"))?;
            fs::write(out.join("fds"), "A -> B\n")?;
            let mut rc_text = String::new();
            for (value, proportion) in instance.rc.bounds() {
                rc_text.push_str(&format!("{value} >= {proportion}\n"));
            }
            fs::write(out.join("rc"), rc_text)?;
            let meta = serde_json::json!({
                "variables": formula.n_vars(),
                "clauses": formula.clauses().len(),
                "rows": instance.relation.len(),
                "target": instance.target,
            });
            fs::write(out.join("meta.json"), format!("{meta:#}\n"))?;
            println!(
                "wrote {} rows; satisfiable iff an optimal repair keeps >= {} rows",
                instance.relation.len(),
                instance.target
            );
            Ok(())
        }
    }
}

fn describe_step(step: &Simplification, schema: &rsrepair_core::relation::Schema) -> String {
    let name = |index: usize| schema.attribute_name(index).to_string();
    let set = |attrs: &std::collections::BTreeSet<usize>| {
        attrs.iter().map(|&a| name(a)).collect::<Vec<_>>().join(",")
    };
    match step {
        Simplification::ConsensusFd(fd) => format!("consensus-fd: -> {}", name(fd.rhs())),
        Simplification::CommonLhs(attr) => format!("common-lhs: {}", name(*attr)),
        Simplification::LhsMarriage(x1, x2) => {
            format!("lhs-marriage: ({}) ~ ({})", set(x1), set(x2))
        }
    }
}
