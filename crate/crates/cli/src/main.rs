use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use roadjoin::bench::{open_csv, run_bench, BenchSpec};
use roadjoin::{
    build_hierarchy, closest_pairs_parallel, load_hierarchy, load_network, oracle_closest_pairs, sample_sets,
    save_hierarchy, synthetic, write_pairs, Error, MatchPair, PartitionHierarchy, QueryParams, QuerySets, RoadNetwork,
    SchedulerConfig, SmoothingConfig, ThresholdMode, VertexId,
};

/// Parallel k-closest-pairs and distance joins on road networks.
#[derive(Parser)]
#[command(name = "roadjoin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a partition hierarchy and write it as JSON.
    Partition(PartitionArgs),
    /// Answer a closest-pairs or distance-join query.
    Query(QueryArgs),
    /// Brute-force answer in the same format as `query`.
    Oracle(OracleArgs),
    /// Draw disjoint R and S vertex sets.
    SampleSets(SampleArgs),
    /// Run the parameter sweeps and append CSV rows.
    Bench(BenchArgs),
}

#[derive(Args)]
struct NetworkArgs {
    /// Node file: `<id> <x> <y>` per line.
    #[arg(long)]
    nodes: PathBuf,
    /// Edge file: `<eid> <a> <b> <weight>` per line.
    #[arg(long)]
    edges: PathBuf,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, value_parser = parse_alpha)]
    alpha: f64,
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    max_leaf_size: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SetArgs {
    /// File of vertex ids, one per line.
    #[arg(long)]
    r_set: PathBuf,
    #[arg(long)]
    s_set: PathBuf,
    /// Number of pairs to return.
    #[arg(long, required_unless_present = "join", conflicts_with = "join")]
    k: Option<usize>,
    /// Return every pair within --theta.
    #[arg(long, requires = "theta")]
    join: bool,
    /// Distance bound; unbounded when omitted.
    #[arg(long, allow_negative_numbers = true, value_parser = parse_theta)]
    theta: Option<f64>,
    /// Write result lines here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Global,
    Local,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    net: NetworkArgs,
    /// Hierarchy file written by `partition`.
    #[arg(long)]
    hier: PathBuf,
    #[command(flatten)]
    sets: SetArgs,
    #[arg(long, env = "ROADJOIN_THREADS", default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    threads: u64,
    #[arg(long, value_enum, default_value = "global")]
    threshold_mode: ModeArg,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[command(flatten)]
    sets: SetArgs,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[arg(long, default_value_t = 8.0, value_parser = parse_pct)]
    r_pct: f64,
    #[arg(long, default_value_t = 8.0, value_parser = parse_pct)]
    s_pct: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    r_out: PathBuf,
    #[arg(long)]
    s_out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, requires = "edges", conflicts_with = "grid")]
    nodes: Option<PathBuf>,
    #[arg(long, requires = "nodes")]
    edges: Option<PathBuf>,
    /// Synthetic random grid `WIDTHxHEIGHT` instead of files.
    #[arg(long, value_parser = parse_grid, required_unless_present = "nodes")]
    grid: Option<(usize, usize)>,
    /// Dataset name for the CSV; defaults to the node file stem or `grid`.
    #[arg(long)]
    dataset: Option<String>,
    /// TOML sweep description; the built-in defaults otherwise.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// CSV file, created with a header or appended to.
    #[arg(long)]
    out: PathBuf,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&a) {
        Ok(a)
    } else {
        Err(format!("alpha must lie in [0, 1], got {a}"))
    }
}

fn parse_theta(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if t >= 0.0 {
        Ok(t)
    } else {
        Err(format!("theta must be non-negative, got {t}"))
    }
}

fn parse_pct(s: &str) -> Result<f64, String> {
    let p: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=100.0).contains(&p) {
        Ok(p)
    } else {
        Err(format!("percentage must lie in [0, 100], got {p}"))
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once('x')
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got `{s}`"))?;
    match (w.parse(), h.parse()) {
        (Ok(w), Ok(h)) if w > 0 && h > 0 => Ok((w, h)),
        _ => Err(format!("expected WIDTHxHEIGHT, got `{s}`")),
    }
}

/// A failure and its exit status: 1 for input and I/O problems, 2 for
/// invalid arguments.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl ToString) -> Self {
        Failure {
            code: 1,
            msg: msg.to_string(),
        }
    }

    fn usage(msg: impl ToString) -> Self {
        Failure {
            code: 2,
            msg: msg.to_string(),
        }
    }
}

/// Errors raised by the data itself (loading, files) are input errors.
fn from_input(e: Error) -> Failure {
    Failure::input(e)
}

/// Errors raised by a query are usage errors when they reject parameters.
fn from_query(e: Error) -> Failure {
    match e {
        Error::Domain(_) => Failure::usage(e),
        other => Failure::input(other),
    }
}

type Run<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // clap lists missing arguments on the lines after a trailing colon
            let text = e.to_string();
            let mut lines = text.lines().take_while(|l| !l.trim().is_empty());
            let mut msg = lines
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            if msg.ends_with(':') {
                for l in lines {
                    msg.push(' ');
                    msg.push_str(l.trim());
                }
            }
            eprintln!("roadjoin: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Partition(a) => cmd_partition(a),
        Command::Query(a) => cmd_query(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::SampleSets(a) => cmd_sample_sets(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("roadjoin: {}", f.msg.lines().next().unwrap_or_default());
            ExitCode::from(f.code)
        }
    }
}

fn load(args: &NetworkArgs) -> Run<RoadNetwork> {
    load_network(&args.nodes, &args.edges).map_err(from_input)
}

fn cmd_partition(a: PartitionArgs) -> Run {
    let net = load(&a.net)?;
    let cfg = SmoothingConfig::new(a.alpha).map_err(Failure::usage)?;
    let h = build_hierarchy(&net, a.max_leaf_size as usize, cfg).map_err(Failure::usage)?;
    save_hierarchy(&h, &a.out).map_err(from_input)?;
    print_summary(&h);
    Ok(())
}

fn print_summary(h: &PartitionHierarchy) {
    let leaves = h.leaves().count();
    let min_sep = h
        .nodes()
        .iter()
        .filter(|n| n.parent().is_some())
        .map(|n| n.separation_degree())
        .fold(f64::INFINITY, f64::min);
    let imbalances: Vec<f64> = h
        .nodes()
        .iter()
        .filter_map(|n| n.children())
        .map(|(l, r)| {
            let (l, r) = (h.node(l).population() as f64, h.node(r).population() as f64);
            (l - r).abs() / (l + r)
        })
        .collect();
    let max_imb = imbalances.iter().copied().fold(0.0, f64::max);
    let mean_imb = if imbalances.is_empty() {
        0.0
    } else {
        imbalances.iter().sum::<f64>() / imbalances.len() as f64
    };
    println!("nodes {}", h.nodes().len());
    println!("leaves {leaves}");
    println!("largest leaf {}", h.leaves().map(|l| l.population()).max().unwrap_or(0));
    println!("min separation degree {min_sep}");
    println!("imbalance mean {mean_imb:.4} max {max_imb:.4}");
}

fn read_set(net: &RoadNetwork, path: &Path) -> Run<Vec<VertexId>> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let id: i64 = line
            .parse()
            .map_err(|_| Failure::input(format!("{}:{}: `{line}` is not a vertex id", path.display(), i + 1)))?;
        let v = net
            .vertex_by_external_id(id)
            .ok_or_else(|| Failure::input(format!("{}:{}: unknown vertex id {id}", path.display(), i + 1)))?;
        out.push(v);
    }
    Ok(out)
}

fn query_inputs(net: &RoadNetwork, s: &SetArgs) -> Run<(QuerySets, QueryParams)> {
    let r = read_set(net, &s.r_set)?;
    let sv = read_set(net, &s.s_set)?;
    let sets = QuerySets::new(r, sv).map_err(Failure::usage)?;
    let theta = s.theta.unwrap_or(f64::INFINITY);
    let k = if s.join { None } else { s.k };
    let params = QueryParams::new(k, theta).map_err(Failure::usage)?;
    Ok((sets, params))
}

fn emit(net: &RoadNetwork, pairs: &[MatchPair], out: Option<&Path>) -> Run {
    let result = match out {
        Some(path) => {
            let f = File::create(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let mut w = BufWriter::new(f);
            write_pairs(&mut w, net, pairs).and_then(|_| w.flush())
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            write_pairs(&mut w, net, pairs).and_then(|_| w.flush())
        }
    };
    result.map_err(Failure::input)
}

fn cmd_query(a: QueryArgs) -> Run {
    let net = load(&a.net)?;
    let h = load_hierarchy(&a.hier).map_err(from_input)?;
    let (sets, params) = query_inputs(&net, &a.sets)?;
    let cfg = SchedulerConfig {
        parallelism: a.threads as usize,
        threshold_mode: match a.threshold_mode {
            ModeArg::Global => ThresholdMode::Global,
            ModeArg::Local => ThresholdMode::Local,
        },
        ..SchedulerConfig::default()
    };
    let start = Instant::now();
    let outcome = closest_pairs_parallel(&net, &h, &sets, params, &cfg).map_err(from_query)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    emit(&net, &outcome.pairs, a.sets.out.as_deref())?;
    let s = outcome.stats;
    eprintln!(
        "pairs {} wall_ms {wall_ms:.3} expanded {} early_breaks {} settled {} threshold_updates {} peak_concurrency {}",
        outcome.pairs.len(),
        s.expanded_cross_edges,
        s.early_breaks,
        s.settled_vertices,
        s.threshold_updates,
        s.peak_concurrency
    );
    Ok(())
}

fn cmd_oracle(a: OracleArgs) -> Run {
    let net = load(&a.net)?;
    let (sets, params) = query_inputs(&net, &a.sets)?;
    let pairs = oracle_closest_pairs(&net, &sets, params.k(), params.theta()).map_err(from_query)?;
    emit(&net, &pairs, a.sets.out.as_deref())
}

fn write_ids(net: &RoadNetwork, ids: impl Iterator<Item = VertexId>, path: &Path) -> Run {
    let io_err = |e: io::Error| Failure::input(format!("{}: {e}", path.display()));
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    for v in ids {
        writeln!(w, "{}", net.external_id(v)).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

fn cmd_sample_sets(a: SampleArgs) -> Run {
    let net = load(&a.net)?;
    let sets = sample_sets(&net, a.r_pct, a.s_pct, a.seed).map_err(Failure::usage)?;
    write_ids(&net, sets.r().iter().copied(), &a.r_out)?;
    write_ids(&net, sets.s().iter().copied(), &a.s_out)?;
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Run {
    let spec = match &a.spec {
        Some(p) => BenchSpec::load(p).map_err(from_input)?,
        None => BenchSpec::default(),
    };
    let (net, default_name) = match (&a.nodes, &a.edges, a.grid) {
        (Some(nodes), Some(edges), _) => {
            let stem = nodes.file_stem().map(|s| s.to_string_lossy().into_owned());
            (
                load_network(nodes, edges).map_err(from_input)?,
                stem.unwrap_or_else(|| "dataset".into()),
            )
        }
        (_, _, Some((w, h))) => (synthetic::random_grid(w, h, spec.seed), format!("grid{w}x{h}")),
        _ => return Err(Failure::usage("either --nodes/--edges or --grid is required")),
    };
    let dataset = a.dataset.unwrap_or(default_name);
    let mut csv = open_csv(&a.out).map_err(from_input)?;
    run_bench(&net, &dataset, &spec, |rec| {
        writeln!(csv, "{}", rec.csv_row())
            .and_then(|_| csv.flush())
            .map_err(|e| Error::Io {
                path: a.out.clone(),
                source: e,
            })
    })
    .map_err(from_input)
}
