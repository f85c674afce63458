//! `normred`: family sweeps, curve bounds, dual-graph checks and the acceptance suite.
//!
//! Exit codes: 0 ok, 1 acceptance failure, 2 usage error, 3 internal invariant violation.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use normred::acceptance::AcceptOptions;
use normred::par::Exec;
use normred::qseq::{FamilySpec, RunOptions};
use normred::{Error, Result};
use serde_json::Value;

use crate::config::{list, narrow, parse_field, pick, require, FileConfig};
use crate::report::Report;

#[derive(Parser, Debug)]
#[command(name = "normred", version, about = "Normal reduction numbers and q-sequences of graded surface singularities")]
struct Cli {
    /// JSON file with default values for any flag.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Outputs {
    /// Write the report as one JSON object.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write one CSV row per (family, n).
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// `q` for the rationals or `fp:P` for a prime field.
    #[arg(long)]
    field: Option<String>,
    /// Largest n in the q-sequence.
    #[arg(long)]
    nmax: Option<u32>,
    /// Largest degree tried for equations of integral dependence.
    #[arg(long)]
    umax: Option<u32>,
    /// Consecutive zero degrees required before a length sum counts as stable.
    #[arg(long)]
    window: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: Outputs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The maximal ideal of cones over Fermat curves of degree d.
    Hypersurface {
        /// One or more degrees, comma separated.
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u64>>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// The ideals (L) + m^(r+1) on cones over Fermat curves.
    BlowupFamily {
        #[arg(long, value_delimiter = ',')]
        d: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<u64>>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// The Veronese example over a hyperelliptic curve of genus g.
    Veronese {
        #[arg(long, value_delimiter = ',')]
        g: Option<Vec<u64>>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Curve-side invariants of a cone over a hyperelliptic curve with D = b g^1_2.
    Hyperelliptic {
        #[arg(long)]
        g: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        nmax: Option<u32>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Genus, a-invariant and reduction-number bounds of a complete-intersection curve.
    CiBound {
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<u64>>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Fundamental cycle and cycle checks for a dual graph read from a JSON file.
    Graph {
        #[arg(long, value_name = "PATH")]
        file: Option<PathBuf>,
        #[command(flatten)]
        out: Outputs,
    },
    /// The resolution graph of (L) + m^(r+1) on the cone over a degree-d plane curve.
    Star {
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        r: Option<u64>,
        /// Also write the graph and its cycles as a graph file.
        #[arg(long, value_name = "PATH")]
        graph_out: Option<PathBuf>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Run the acceptance suite, one line per criterion.
    Accept {
        #[arg(long)]
        seed: Option<u64>,
        /// Only these criteria, comma separated.
        #[arg(long, value_delimiter = ',')]
        criterion: Option<Vec<u64>>,
        /// Swap in a deliberately wrong closure oracle.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn run_options(args: RunArgs, file: &FileConfig, exec: Exec) -> Result<(RunOptions, Outputs)> {
    let defaults = RunOptions::default();
    let opts = RunOptions {
        field: parse_field(args.field, file.field.clone())?,
        n_max: pick(args.nmax, file.nmax),
        seed: pick(args.seed, file.seed).unwrap_or(defaults.seed),
        window: pick(args.window, file.window).unwrap_or(defaults.window),
        u_max: pick(args.umax, file.umax).unwrap_or(defaults.u_max),
        exec,
        ..defaults
    };
    Ok((opts, outputs(args.out, file)))
}

fn outputs(out: Outputs, file: &FileConfig) -> Outputs {
    Outputs {
        json: pick(out.json, file.json.clone()),
        csv: pick(out.csv, file.csv.clone()),
    }
}

fn echo_run(report: &mut Report, opts: &RunOptions) {
    report.input("field", opts.field.to_string());
    report.input("seed", opts.seed);
    report.input("window", opts.window);
    report.input("umax", opts.u_max);
    report.input("nmax", opts.n_max.map_or(Value::from("default"), Value::from));
}

fn narrow_all(v: Vec<u64>, flag: &str) -> Result<Vec<u32>> {
    v.into_iter().map(|x| narrow(x, flag)).collect()
}

fn joined(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

enum Outcome {
    Done,
    AcceptFailed(String),
}

fn run(cli: Cli) -> Result<Outcome> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let exec = if cli.sequential || file.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let (report, out) = match cli.command {
        Command::Hypersurface { d, run } => {
            let ds = narrow_all(require(list(d, file.d.clone()), "d")?, "d")?;
            let (opts, out) = run_options(run, &file, exec)?;
            let mut report = Report::new("hypersurface");
            report.input("d", joined(&ds));
            echo_run(&mut report, &opts);
            let specs = ds.into_iter().map(|d| FamilySpec::Hypersurface { d }).collect();
            commands::families(&mut report, specs, &opts)?;
            (report, out)
        }
        Command::BlowupFamily { d, r, run } => {
            let ds = narrow_all(require(list(d, file.d.clone()), "d")?, "d")?;
            let rs = narrow_all(require(list(r, file.r.clone()), "r")?, "r")?;
            let (opts, out) = run_options(run, &file, exec)?;
            let mut report = Report::new("blowup-family");
            report.input("d", joined(&ds));
            report.input("r", joined(&rs));
            echo_run(&mut report, &opts);
            let specs = ds
                .iter()
                .flat_map(|&d| rs.iter().map(move |&r| FamilySpec::Blowup { d, r }))
                .collect();
            commands::families(&mut report, specs, &opts)?;
            (report, out)
        }
        Command::Veronese { g, run } => {
            let gs = narrow_all(require(list(g, file.g.clone()), "g")?, "g")?;
            let (opts, out) = run_options(run, &file, exec)?;
            let mut report = Report::new("veronese");
            report.input("g", joined(&gs));
            echo_run(&mut report, &opts);
            let specs = gs.into_iter().map(|g| FamilySpec::Vero { g }).collect();
            commands::families(&mut report, specs, &opts)?;
            (report, out)
        }
        Command::Hyperelliptic { g, b, nmax, out } => {
            let g = require(list(g.map(|v| vec![v]), file.g.clone()), "g")?;
            let [g] = g[..] else {
                return Err(Error::Usage("hyperelliptic takes a single --g".into()));
            };
            let b = pick(b, file.b).unwrap_or(1);
            let nmax = pick(nmax, file.nmax);
            let mut report = Report::new("hyperelliptic");
            report.input("g", g);
            report.input("b", b);
            report.input("nmax", nmax.map_or(Value::from("default"), Value::from));
            commands::hyperelliptic(&mut report, g, b, nmax)?;
            (report, outputs(out, &file))
        }
        Command::CiBound { degrees, out } => {
            let degrees = require(pick(degrees, file.degrees.clone()), "degrees")?;
            let mut report = Report::new("ci-bound");
            report.input("degrees", degrees.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
            commands::ci_bound(&mut report, degrees)?;
            (report, outputs(out, &file))
        }
        Command::Graph { file: path, out } => {
            let path = require(pick(path, file.file.clone()), "file")?;
            let mut report = Report::new("graph");
            report.input("file", path.display().to_string());
            commands::graph(&mut report, &path, exec)?;
            (report, outputs(out, &file))
        }
        Command::Star { d, r, graph_out, out } => {
            let single = |v: Option<u64>, f: Option<config::OneOrMany>, flag: &str| -> Result<u32> {
                match require(list(v.map(|x| vec![x]), f), flag)?[..] {
                    [x] => narrow(x, flag),
                    _ => Err(Error::Usage(format!("star takes a single --{flag}"))),
                }
            };
            let d = single(d, file.d.clone(), "d")?;
            let r = single(r, file.r.clone(), "r")?;
            let graph_out = pick(graph_out, file.graph_out.clone());
            let mut report = Report::new("star");
            report.input("d", d);
            report.input("r", r);
            commands::star(&mut report, d, r, graph_out.as_deref(), exec)?;
            (report, outputs(out, &file))
        }
        Command::Accept {
            seed,
            criterion,
            inject_fault,
        } => {
            let criteria = narrow_all(list(criterion, file.criterion.clone()).unwrap_or_default(), "criterion")?;
            let opts = AcceptOptions {
                seed: pick(seed, file.seed).unwrap_or(0),
                exec,
                inject_fault,
            };
            let results = commands::accept(&criteria, &opts)?;
            let passed = results.iter().filter(|r| r.passed).count();
            println!("acceptance: {passed} of {} criteria passed", results.len());
            return Ok(match results.iter().find(|r| !r.passed) {
                Some(r) => Outcome::AcceptFailed(format!("criterion {}: {}", r.number, r.title)),
                None => Outcome::Done,
            });
        }
    };
    report.emit(out.json.as_deref(), out.csv.as_deref())?;
    let failed = report.failed_checks();
    if let Some(first) = failed.first() {
        return Err(Error::Invariant(format!("{} failed checks, first: {first}", failed.len())));
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli);
    eprintln!("normred: finished in {:.2}s", start.elapsed().as_secs_f64());
    match outcome {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::AcceptFailed(first)) => {
            eprintln!("normred: acceptance failed at {first}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("normred: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
