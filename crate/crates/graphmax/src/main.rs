use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphmax::error::{Error, Result};
use graphmax::io::{emit, function_json, graph_json, read_function, read_graph, to_json};
use graphmax::parallel::Runner;
use graphmax::verify::{self, Suite};
use graphmax_core::constants::closed_form;
use graphmax_core::search::DEFAULT_SEED;
use graphmax_core::{
    lp_norm, p_variation, Alpha, Family, Graph, MaximalOperator, PExponent, SearchConfig, Target,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "graphmax",
    version,
    about = "Maximal operators and their sharp constants on finite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family graph as JSON.
    Gen {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the maximal function of a vertex function.
    Maxop {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        function: PathBuf,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// p-variation of a vertex function (of its maximal function with --maximal).
    Var {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        function: PathBuf,
        #[arg(long, value_parser = parse_p, default_value = "2")]
        p: PExponent,
        #[arg(long)]
        maximal: bool,
        #[command(flatten)]
        op: OperatorArgs,
    },
    /// l^p norm of a vertex function (of its maximal function with --maximal).
    Norm {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        function: PathBuf,
        #[arg(long, value_parser = parse_p, default_value = "2")]
        p: PExponent,
        #[arg(long)]
        maximal: bool,
        #[command(flatten)]
        op: OperatorArgs,
    },
    /// Look up a tabulated sharp constant.
    Constant {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_p, default_value = "2")]
        p: PExponent,
        #[arg(long, value_parser = parse_target, default_value = "variation")]
        target: Target,
    },
    /// Estimate a supremum ratio by multi-start coordinate ascent.
    Search {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_parser = parse_target, default_value = "variation")]
        target: Target,
        #[arg(long, value_parser = parse_p, default_value = "2")]
        p: PExponent,
        #[command(flatten)]
        op: OperatorArgs,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run a verification suite; exits 1 if any entry fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Record the current time in the report metadata.
        #[arg(long)]
        timestamp: bool,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Graph JSON file.
    #[arg(long, conflicts_with_all = ["family", "n"])]
    graph: Option<PathBuf>,
    #[arg(long, value_parser = parse_family, requires = "n")]
    family: Option<Family>,
    #[arg(long, requires = "family")]
    n: Option<usize>,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        match (&self.graph, self.family, self.n) {
            (Some(path), _, _) => read_graph(path),
            (None, Some(family), Some(n)) => Ok(family.build(n)?),
            _ => Err(Error::usage("give --graph FILE or --family NAME --n N")),
        }
    }
}

#[derive(Args)]
struct OperatorArgs {
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[arg(long)]
    uncentered: bool,
}

impl OperatorArgs {
    fn operator(&self) -> Result<MaximalOperator> {
        let alpha = Alpha::new(self.alpha)?;
        Ok(if self.uncentered {
            MaximalOperator::uncentered(alpha)
        } else {
            MaximalOperator::centered(alpha)
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s)
        .ok_or_else(|| format!("unknown family {s:?} (expected complete, star, path or cycle)"))
}

fn parse_p(s: &str) -> Result<PExponent, String> {
    PExponent::parse(s).map_err(|e| e.to_string())
}

fn parse_target(s: &str) -> Result<Target, String> {
    match s {
        "variation" | "variation_ratio" | "variation-ratio" => Ok(Target::VariationRatio),
        "norm" | "norm_ratio" | "norm-ratio" | "l2" => Ok(Target::NormRatio),
        _ => Err(format!("unknown target {s:?} (expected variation or norm)")),
    }
}

#[derive(Serialize)]
struct ValueOut {
    quantity: &'static str,
    p: PExponent,
    value: f64,
}

#[derive(Serialize)]
struct ConstantOut {
    family: Family,
    n: usize,
    p: PExponent,
    target: Target,
    #[serde(flatten)]
    result: graphmax_core::ConstantResult,
}

fn measure(
    graph: &GraphArgs,
    function: &Path,
    maximal: bool,
    op: &OperatorArgs,
    quantity: &'static str,
    p: PExponent,
) -> Result<()> {
    let g = graph.load()?;
    let mut f = read_function(function)?;
    f.check_on(&g)?;
    if maximal {
        f = op.operator()?.apply(&g, &f)?;
    }
    let value = match quantity {
        "variation" => p_variation(&g, &f, p)?,
        _ => lp_norm(&f, p),
    };
    emit(None, &to_json(&ValueOut { quantity, p, value })?)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { family, n, out } => {
            emit(out.as_deref(), &graph_json(&family.build(n)?)?)?;
        }
        Command::Maxop {
            graph,
            function,
            op,
            out,
        } => {
            let g = graph.load()?;
            let f = read_function(&function)?;
            let mf = op.operator()?.apply(&g, &f)?;
            emit(out.as_deref(), &function_json(&mf)?)?;
        }
        Command::Var {
            graph,
            function,
            p,
            maximal,
            op,
        } => measure(&graph, &function, maximal, &op, "variation", p)?,
        Command::Norm {
            graph,
            function,
            p,
            maximal,
            op,
        } => measure(&graph, &function, maximal, &op, "norm", p)?,
        Command::Constant {
            family,
            n,
            p,
            target,
        } => {
            let result = closed_form(family, n, target, p, MaximalOperator::CLASSICAL)?;
            emit(
                None,
                &to_json(&ConstantOut {
                    family,
                    n,
                    p,
                    target,
                    result,
                })?,
            )?;
        }
        Command::Search {
            graph,
            target,
            p,
            op,
            restarts,
            max_iters,
            seed,
            out,
            format,
        } => {
            let g = graph.load()?;
            let cfg = SearchConfig {
                restarts,
                max_iters,
                seed,
                target,
                p,
                operator: op.operator()?,
                ..SearchConfig::default()
            };
            let report = Runner::from_env()?.estimate(&g, &cfg)?;
            let text = match format {
                Format::Json => to_json(&report)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["restart", "best_ratio", "sweeps"])?;
                    for (i, (r, s)) in report
                        .per_restart_best
                        .iter()
                        .zip(&report.iterations_used)
                        .enumerate()
                    {
                        w.write_record([
                            i.to_string(),
                            graphmax::io::round_sig(*r).to_string(),
                            s.to_string(),
                        ])?;
                    }
                    let bytes = w
                        .into_inner()
                        .map_err(|e| csv::Error::from(e.into_error()))?;
                    String::from_utf8(bytes).expect("ascii csv")
                }
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Verify {
            suite,
            seed,
            out,
            format,
            timestamp,
        } => {
            let mut report = verify::run(suite, seed, &Runner::from_env()?)?;
            if timestamp {
                let now = SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0);
                report.metadata.timestamp = Some(now);
            }
            let text = match format {
                Format::Json => to_json(&report)?,
                Format::Csv => report.to_csv()?,
            };
            emit(out.as_deref(), &text)?;
            for e in report.failures() {
                eprintln!(
                    "FAIL {} family={} n={} expected={:?} computed={}",
                    e.name,
                    e.family.as_deref().unwrap_or("-"),
                    e.n.map_or("-".into(), |n| n.to_string()),
                    e.expected,
                    e.computed
                );
            }
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
