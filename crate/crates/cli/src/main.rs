use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use elp_vc::bench::{compare, hunt, solve_instance, BenchError, HuntConfig, HuntGenerator, Instance, SolveOptions};
use elp_vc::elp::ElpError;
use elp_vc::graph::{parse_graph, write_dimacs, write_edge_list, Format, GeneratorKind, Graph};
use elp_vc::oracle::{exact_vc, OracleError, DEFAULT_CAP, DEFAULT_ENUMERATE_CAP};
use elp_vc::reduce::{EdgeRule, Mode, PipelineConfig, PipelineError};

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_CAP: u8 = 4;

/// Approximate minimum vertex cover via odd-cycle LP reductions.
#[derive(Parser)]
#[command(name = "vc", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the reduction algorithm and print the cover with its certificate.
    Solve(SolveArgs),
    /// Exact minimum vertex cover by branch and bound.
    Exact {
        #[command(flatten)]
        input: InputArgs,
        /// Also list every optimal cover.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Compare against the matching and LP-rounding 2-approximations.
    Compare {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a generated graph, e.g. `cycle:5`, `petersen`, `torus:5x5`, `gnp:10:0.3:1`.
    Gen {
        spec: GeneratorKind,
        #[arg(long, default_value = "dimacs")]
        format: Format,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Batch search over random instances for runs with a nonzero error term.
    Hunt(HuntArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Instance file, or `-` for stdin.
    path: PathBuf,
    /// Input format; detected from the content when omitted.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "enhanced")]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "maxsum")]
    edge_rule: EdgeRule,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
    /// Print the cutting-plane rounds of the first relaxation to stderr.
    #[arg(long)]
    cut_log: bool,
    /// Largest graph checked against the exact optimum; 0 disables.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    oracle_cap: usize,
    /// Cap on pinned re-solves per alternate-optimum search.
    #[arg(long)]
    pin_budget: Option<usize>,
}

#[derive(Args)]
struct HuntArgs {
    /// Inclusive vertex-count range, `lo..hi`.
    #[arg(long, default_value = "6..10", value_parser = parse_range)]
    n_range: (u32, u32),
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "gen", default_value = "mixed")]
    generator: HuntGenerator,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    edge_seed: u64,
    #[arg(long, default_value = "maxsum")]
    edge_rule: EdgeRule,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    oracle_cap: usize,
    /// Directory for hunt.csv, hunt.json and DIMACS dumps.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(u32, u32), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let hi = hi.trim_start_matches('=');
    let lo = lo.parse().map_err(|e| format!("{e}"))?;
    let hi = hi.parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

enum Failure {
    Parse(String),
    Hypothesis,
    Cap(String),
    Other(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Other(e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        match e {
            OracleError::CapExceeded { .. } | OracleError::TooManyCovers(_) | OracleError::TooManyCycles(_) => {
                Failure::Cap(e.to_string())
            }
            _ => Failure::Other(e.to_string()),
        }
    }
}

impl From<BenchError> for Failure {
    fn from(e: BenchError) -> Failure {
        match e {
            BenchError::Oracle(o) => o.into(),
            BenchError::Pipeline(PipelineError::Elp(ElpError::RoundLimit(_))) | BenchError::Elp(ElpError::RoundLimit(_)) => {
                Failure::Cap(e.to_string())
            }
            _ => Failure::Other(e.to_string()),
        }
    }
}

fn read_graph(input: &InputArgs) -> Result<(String, Graph), Failure> {
    let mut text = String::new();
    let name = if input.path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
        "stdin".to_string()
    } else {
        text = fs::read_to_string(&input.path)
            .map_err(|e| Failure::Other(format!("{}: {e}", input.path.display())))?;
        input.path.file_stem().map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned())
    };
    let format = input.format.unwrap_or_else(|| Format::detect(&text));
    let g = parse_graph(&text, format).map_err(|e| Failure::Parse(e.to_string()))?;
    Ok((name, g))
}

fn emit(target: &Path, text: &str) -> Result<(), Failure> {
    if target.as_os_str() == "-" {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(target, text)?;
    }
    Ok(())
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let (name, g) = read_graph(&args.input)?;
    let opts = SolveOptions {
        pipeline: PipelineConfig {
            mode: args.mode,
            edge_rule: args.edge_rule,
            seed: args.seed,
            pin_budget: args.pin_budget,
            ..Default::default()
        },
        oracle_cap: (args.oracle_cap > 0).then_some(args.oracle_cap),
        timings: args.timings,
        cut_log: args.cut_log,
    };
    let source = args.input.path.display().to_string();
    let report = solve_instance(Instance::new(&name, &source, &g), &g, &opts)?;
    if let Some(lines) = &report.cut_log {
        for l in lines {
            eprintln!("{l}");
        }
    }
    match &args.json {
        Some(path) => emit(path, &report.to_json())?,
        None => {
            println!("instance  {} (n={}, m={})", name, g.vertex_count(), g.edge_count());
            println!("mode      {}", report.mode);
            println!("f1        {}", report.f1);
            if let (Some(cover), Some(cert)) = (&report.cover, &report.certificate) {
                let list: Vec<String> = cover.iter().map(|v| v.to_string()).collect();
                println!("cover     {} (size {})", list.join(" "), cover.len());
                println!("counters  eta={} gamma={} delta={} sigma={}", cert.eta, cert.gamma, cert.delta, cert.sigma);
                println!("xi        {}", cert.xi);
            }
            if let Some(o) = &report.oracle {
                println!("optimum   {} (ratio {})", o.opt_size, o.ratio);
            }
        }
    }
    if report.hypothesis_failed() {
        eprintln!("no reduction applies to some intermediate graph; rerun with --mode enhanced");
        return Err(Failure::Hypothesis);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Solve(args) => solve(args),
        Cmd::Exact { input, all, cap } => {
            let (_, g) = read_graph(&input)?;
            let cap = cap.unwrap_or(if all { DEFAULT_ENUMERATE_CAP } else { DEFAULT_CAP });
            let r = exact_vc(&g, all, cap)?;
            let list: Vec<String> = r.one_optimal_cover.members.iter().map(|v| v.to_string()).collect();
            println!("optimum {}", r.opt_size);
            println!("cover   {}", list.join(" "));
            if let Some(all) = r.all_optimal_covers {
                println!("optimal covers: {}", all.len());
                for c in all {
                    let list: Vec<String> = c.members.iter().map(|v| v.to_string()).collect();
                    println!("  {}", list.join(" "));
                }
            }
            Ok(())
        }
        Cmd::Compare { input, json } => {
            let (name, g) = read_graph(&input)?;
            let opts = SolveOptions { oracle_cap: Some(DEFAULT_CAP), ..Default::default() };
            let r = compare(Instance::new(&name, &input.path.display().to_string(), &g), &g, &opts)?;
            match json {
                Some(path) => emit(&path, &(serde_json::to_string_pretty(&r).map_err(|e| Failure::Other(e.to_string()))? + "\n")),
                None => {
                    print!("{}", r.table());
                    Ok(())
                }
            }
        }
        Cmd::Gen { spec, format, out } => {
            let g = spec.generate().map_err(|e| Failure::Parse(e.to_string()))?;
            let text = match format {
                Format::Dimacs => write_dimacs(&g),
                Format::EdgeList => write_edge_list(&g),
            };
            emit(out.as_deref().unwrap_or(Path::new("-")), &text)
        }
        Cmd::Hunt(args) => {
            let cfg = HuntConfig {
                n_min: args.n_range.0,
                n_max: args.n_range.1,
                trials: args.trials,
                seed: args.seed,
                generator: args.generator,
                jobs: args.jobs,
                solve: SolveOptions {
                    pipeline: PipelineConfig { edge_rule: args.edge_rule, seed: args.edge_seed, ..Default::default() },
                    oracle_cap: (args.oracle_cap > 0).then_some(args.oracle_cap),
                    ..Default::default()
                },
            };
            let s = hunt(&cfg, args.out.as_deref())?;
            println!("trials          {}", s.trials);
            println!("failures        {}", s.failures);
            println!("xi = 0          {}", s.xi_zero);
            println!("xi != 0         {:?}", s.xi_nonzero);
            println!("random-edge     {}", s.random_edge_runs);
            for (ratio, count) in &s.ratio_histogram {
                println!("ratio {ratio:<8} {count}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("VC_LOG")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = match f {
                Failure::Parse(msg) => {
                    eprintln!("parse error: {msg}");
                    EXIT_PARSE
                }
                Failure::Hypothesis => EXIT_HYPOTHESIS,
                Failure::Cap(msg) => {
                    eprintln!("limit exceeded: {msg}");
                    EXIT_CAP
                }
                Failure::Other(msg) => {
                    eprintln!("error: {msg}");
                    EXIT_OTHER
                }
            };
            ExitCode::from(code)
        }
    }
}
