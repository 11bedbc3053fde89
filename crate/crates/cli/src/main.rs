use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use peakwalk_core::dynamics;
use peakwalk_core::enumerate;
use peakwalk_core::families;
use peakwalk_core::graph6;
use peakwalk_core::named;
use peakwalk_core::peak::{self, PeakAnalyzer, PeakOptions, PeakReport, TransferClass, Verdict};
use peakwalk_core::survey::{self, ScanOptions};
use peakwalk_core::{Error, MatrixKind, WeightedGraph};

#[derive(Parser)]
#[command(
    name = "peakwalk",
    version,
    about = "Peak state transfer in continuous-time quantum walks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide peak state transfer between two vertices (JSON on stdout).
    Analyze(AnalyzeArgs),
    /// Transfer probability |U(t)_{v,u}|^2 on a time grid (CSV).
    Simulate(SimulateArgs),
    /// Closed-form facts for the X_n or G_n family, checked against the engine.
    Family(FamilyArgs),
    /// Census of peak and perfect state transfer (TSV).
    Scan(ScanArgs),
    /// Every vertex pair with peak state transfer (JSON lines).
    Witness(WitnessArgs),
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Eigenvalue clustering tolerance [default: 1e-8 (1 + spectral radius)]
    #[arg(long, env = "PEAKWALK_TOL_CLUSTER")]
    tol_cluster: Option<f64>,
    /// Idempotent entries at most this large count as zero
    #[arg(long, env = "PEAKWALK_TOL_ENTRY", default_value_t = 1e-9)]
    tol_entry: f64,
    /// Tolerance for recognising quadratic integers
    #[arg(long, env = "PEAKWALK_TOL_RECOG", default_value_t = 1e-6)]
    tol_recog: f64,
    /// Distance from 1 within which a bound counts as perfect transfer
    #[arg(long, env = "PEAKWALK_TOL_PST", default_value_t = 1e-7)]
    tol_pst: f64,
}

impl TolArgs {
    fn options(&self) -> Result<PeakOptions> {
        for (name, x) in [
            ("tol-entry", self.tol_entry),
            ("tol-recog", self.tol_recog),
            ("tol-pst", self.tol_pst),
            ("tol-cluster", self.tol_cluster.unwrap_or(1.0)),
        ] {
            if !x.is_finite() || x <= 0.0 {
                bail!("--{name} must be a positive number, got {x}");
            }
        }
        Ok(PeakOptions {
            cluster_tol: self.tol_cluster,
            entry_tol: self.tol_entry,
            recog_tol: self.tol_recog,
            pst_tol: self.tol_pst,
            ..PeakOptions::default()
        })
    }
}

#[derive(Args)]
struct GraphArgs {
    /// Named graph (petersen, g11, g12, c4neg, k2, path9, cycle:6, xn(4), ...)
    /// or a JSON / graph6 file
    #[arg(long)]
    graph: String,
    #[arg(long, value_parser = parse_kind, default_value = "A")]
    matrix: MatrixKind,
    /// Vertex pair `u,v`; defaults to the graph's designated pair
    #[arg(long, value_parser = parse_pair)]
    pair: Option<(usize, usize)>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    tmax: f64,
    #[arg(long, default_value_t = 1001)]
    steps: usize,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Xn,
    Gn,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    name: FamilyName,
    #[arg(long)]
    n: usize,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// graph6 file, one graph per line (`-` for stdin)
    #[arg(long)]
    graph6: Option<PathBuf>,
    /// All connected graphs on N vertices
    #[arg(long, value_name = "N")]
    enumerate: Option<usize>,
    /// All trees on N vertices
    #[arg(long, value_name = "N")]
    trees: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kinds {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "both")]
    Both,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "both")]
    matrix: Kinds,
    #[arg(long)]
    workers: Option<usize>,
    /// Re-verify every Peak verdict at its transfer time before counting
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_parser = parse_kind, default_value = "A")]
    matrix: MatrixKind,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    tol: TolArgs,
}

fn parse_kind(s: &str) -> std::result::Result<MatrixKind, String> {
    s.parse::<MatrixKind>().map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let (u, v) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `u,v`, got `{s}`"))?;
    let p = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad vertex `{x}`: {e}"))
    };
    Ok((p(u)?, p(v)?))
}

fn load_graph(spec: &str) -> Result<WeightedGraph> {
    let path = Path::new(spec);
    match named::resolve_name(spec) {
        Ok(g) => return Ok(g),
        Err(_) if path.exists() => {}
        Err(Error::UnknownName(_)) => {
            bail!("`{spec}` is neither a known graph name nor an existing file")
        }
        Err(e) => return Err(e.into()),
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return WeightedGraph::from_json_str(trimmed).with_context(|| format!("parsing {spec}"));
    }
    let mut graphs = graph6::read_graph6(text.as_bytes());
    let g = graphs
        .next()
        .ok_or_else(|| anyhow!("{spec} contains no graph"))?
        .with_context(|| format!("parsing {spec}"))?;
    if graphs.next().is_some() {
        eprintln!("note: {spec} holds several graphs; using the first");
    }
    Ok(g)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn pair_for(g: &WeightedGraph, pair: Option<(usize, usize)>) -> Result<(usize, usize)> {
    pair.or(g.pair())
        .ok_or_else(|| anyhow!("graph has no designated pair; pass --pair u,v"))
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    graph: Option<&'a str>,
    n: usize,
    matrix: &'static str,
    u: usize,
    v: usize,
    transfer: TransferClass,
    #[serde(flatten)]
    report: PeakReport,
}

fn analyze(args: &AnalyzeArgs) -> Result<ExitCode> {
    let g = load_graph(&args.graph.graph)?;
    let (u, v) = pair_for(&g, args.graph.pair)?;
    let opts = args.tol.options()?;
    let kind = args.graph.matrix;
    let analyzer = PeakAnalyzer::for_graph(&g, kind, opts)?;
    let result = match kind {
        MatrixKind::Adjacency => analyzer.check(u, v)?,
        MatrixKind::Laplacian => analyzer.check_laplacian(u, v)?,
    };
    let out = AnalyzeOutput {
        graph: g.label(),
        n: g.order(),
        matrix: kind.short_name(),
        u,
        v,
        transfer: peak::classify_pst(&result, opts.pst_tol),
        report: result.report(),
    };
    emit(&format!("{}\n", serde_json::to_string_pretty(&out)?))?;
    Ok(if result.verdict == Verdict::Peak {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let g = load_graph(&args.graph.graph)?;
    let (u, v) = pair_for(&g, args.graph.pair)?;
    let dec = peakwalk_core::decompose(&g.matrix(args.graph.matrix), None)?;
    let mut series = dynamics::probability_series(&dec, u, v, args.tmax, args.steps)?;
    series.kind = Some(args.graph.matrix);
    let csv = series.to_csv();
    match &args.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => emit(&csv)?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct FamilyOutput<T: Serialize> {
    family: &'static str,
    facts: T,
    engine: PeakReport,
    engine_match: bool,
}

fn family(args: &FamilyArgs) -> Result<ExitCode> {
    let opts = PeakOptions::default();
    let close = |a: Option<f64>, b: f64, tol: f64| a.is_some_and(|a| (a - b).abs() <= tol);
    let text = match args.name {
        FamilyName::Xn => {
            let facts = families::xn_facts(args.n)?;
            let g = named::xn(args.n)?;
            let (u, v) = g.pair().expect("xn has a pair");
            let r = PeakAnalyzer::for_graph(&g, MatrixKind::Adjacency, opts)?.check(u, v)?;
            let ok = r.is_peak()
                && close(r.tau0, facts.tau0, 1e-8)
                && close(Some(r.bound), facts.bound, 1e-8)
                && close(r.phase, facts.phase, 1e-8);
            serde_json::to_string_pretty(&FamilyOutput {
                family: "xn",
                facts,
                engine: r.report(),
                engine_match: ok,
            })?
        }
        FamilyName::Gn => {
            let facts = families::gn_facts(args.n)?;
            let g = named::k2_family(args.n)?;
            let (u, v) = g.pair().expect("k2family has a pair");
            let r = PeakAnalyzer::for_graph(&g, MatrixKind::Adjacency, opts)?.check(u, v)?;
            let ok = r.is_peak()
                && close(r.tau0, facts.tau0, 1e-8)
                && close(Some(r.bound), facts.bound, 1e-9);
            serde_json::to_string_pretty(&FamilyOutput {
                family: "gn",
                facts,
                engine: r.report(),
                engine_match: ok,
            })?
        }
    };
    emit(&format!("{text}\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn graphs_from(source: &Source) -> Result<Vec<peakwalk_core::Result<WeightedGraph>>> {
    if let Some(path) = &source.graph6 {
        let reader: Box<dyn io::BufRead> = if path.as_os_str() == "-" {
            Box::new(BufReader::new(io::stdin()))
        } else {
            let f = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
            Box::new(BufReader::new(f))
        };
        return Ok(graph6::read_graph6(reader).collect());
    }
    let gs = match (source.enumerate, source.trees) {
        (Some(n), _) => enumerate::connected_graphs(n)?,
        (_, Some(n)) => enumerate::trees(n)?,
        _ => bail!("one of --graph6, --enumerate, --trees is required"),
    };
    Ok(gs.into_iter().map(Ok).collect())
}

fn scan(args: &ScanArgs) -> Result<ExitCode> {
    let opts = ScanOptions {
        peak: args.tol.options()?,
        adjacency: matches!(args.matrix, Kinds::A | Kinds::Both),
        laplacian: matches!(args.matrix, Kinds::L | Kinds::Both),
        strict: args.strict,
        workers: args.workers,
        ..ScanOptions::default()
    };
    let report = survey::scan(graphs_from(&args.source)?, &opts)?;
    for f in &report.failures {
        eprintln!(
            "engine failure: graph {} (n = {}): {}",
            f.index, f.n, f.message
        );
    }
    emit(&survey::rows_to_tsv(&report.rows))?;
    Ok(ExitCode::SUCCESS)
}

fn witness(args: &WitnessArgs) -> Result<ExitCode> {
    let opts = ScanOptions {
        peak: args.tol.options()?,
        strict: args.strict,
        workers: args.workers,
        ..ScanOptions::default()
    };
    let found = survey::list_witnesses(graphs_from(&args.source)?, args.matrix, &opts)?;
    let mut text = String::new();
    for w in &found {
        text.push_str(&w.to_json_line()?);
        text.push('\n');
    }
    emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Simulate(a) => simulate(a),
        Command::Family(a) => family(a),
        Command::Scan(a) => scan(a),
        Command::Witness(a) => witness(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
