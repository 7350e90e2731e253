use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use entbound::cli::sweep::{sweep, to_csv};
use entbound::cli::verify::{verify, VerifyConfig};
use entbound::cli::{emit, parse_vertex_list, Analysis, AnalysisConfig, GraphSource, LogBase, OutputFormat, Report};
use entbound::graph::{FamilyKind, FamilySpec};
use entbound::{Error, Result};

#[derive(Parser)]
#[command(name = "entbound", version, about = "Ground-state entanglement and its symmetry bounds for the antiferromagnetic Ising model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one graph.
    Analyze {
        /// Generated family, e.g. `cycle:8` or `complete_bipartite:3,3`.
        #[arg(long, conflicts_with = "edges", required_unless_present = "edges")]
        family: Option<String>,
        /// Edge-list file (`u v` per line, optional `n <count>` header).
        #[arg(long)]
        edges: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Analyze a family over a range of sizes and emit a CSV table.
    Sweep {
        /// Family kind: path, cycle, complete or star.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant checks on the family corpus and seeded random graphs.
    Verify {
        /// Number of random graphs.
        #[arg(long, default_value_t = 20)]
        random_graphs: usize,
        /// Break the first graph's automorphism generators (negative control).
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Vertices of part A, e.g. `0,2,4`; defaults to the first ⌊n/2⌋.
    #[arg(long)]
    bipartition: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative singular-value cutoff for numerical ranks.
    #[arg(long, default_value_t = entbound::entangle::DEFAULT_RANK_TOL)]
    rank_tol: f64,
    /// Random optimizer starts.
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    /// Largest group that is enumerated element by element.
    #[arg(long, default_value_t = entbound::perm_group::DEFAULT_ENUMERATION_CAP)]
    max_group: usize,
    #[arg(long, value_enum, default_value_t = LogBase::Nats)]
    base: LogBase,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<AnalysisConfig> {
        let cfg = AnalysisConfig {
            bipartition: self.bipartition.as_deref().map(parse_vertex_list).transpose()?,
            seed: self.seed,
            rank_tol: self.rank_tol,
            restarts: self.restarts,
            max_group: self.max_group,
            log_base: self.base,
            ..AnalysisConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn analyze(source: GraphSource, common: &Common) -> Result<u8> {
    let cfg = common.config()?;
    let graph = source.load()?;
    let a = Analysis::run(graph, source.family(), &cfg)?;
    let report = Report::from_analysis(&a, &source.label(), &cfg);
    if let Err(e) = a.check_bound() {
        eprint!("{}", report.to_json()?);
        return Err(e);
    }
    let text = match common.format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => report.to_json()?,
        OutputFormat::Csv => report.to_csv(cfg.log_base)?,
        OutputFormat::Text => report.to_text(cfg.log_base),
    };
    emit(&text, common.out.as_deref())?;
    if let Some(why) = a.cap_error() {
        eprintln!("entbound: partial report: {why}");
        return Ok(3);
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze { family, edges, common } => {
            let source = match (family, edges) {
                (Some(f), _) => GraphSource::Family(f.parse::<FamilySpec>()?),
                (None, Some(path)) => GraphSource::EdgeFile(path),
                (None, None) => return Err(Error::InvalidFamily("either --family or --edges is required".into())),
            };
            analyze(source, &common)
        }
        Command::Sweep { kind, from, to, step, common } => {
            let cfg = common.config()?;
            let rows = sweep(kind.parse::<FamilyKind>()?, from, to, step, &cfg)?;
            let text = match common.format.unwrap_or(OutputFormat::Csv) {
                OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&rows)?),
                _ => to_csv(&rows)?,
            };
            emit(&text, common.out.as_deref())?;
            Ok(0)
        }
        Command::Verify { random_graphs, inject_fault, common } => {
            let cfg = VerifyConfig {
                analysis: common.config()?,
                random_graphs,
                inject_fault,
                ..VerifyConfig::default()
            };
            let summary = verify(&cfg)?;
            let text = match common.format.unwrap_or(OutputFormat::Text) {
                OutputFormat::Json => summary.to_json()?,
                _ => summary.to_text(),
            };
            emit(&text, common.out.as_deref())?;
            Ok(if summary.all_passed() { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("entbound: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
