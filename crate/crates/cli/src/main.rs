//! `firefly`: scriptable front end to the firefly analysis library.
//!
//! Exit status is 0 on success or a passing verdict, 2 when a checked claim
//! fails, and 1 on usage or input errors.

mod export;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use firefly_core::analysis::{
    compare_quotient_dynamics, fig8_family, high_degree_tree, is_irreducible, is_n_synchronizing, k3_three_states,
    max_sync_time_path, n7_star_search, one_branch_pruning, return_map, verify_blinking_theorem, verify_branch_width,
    verify_degree_lemma, verify_tree_theorem, AnalysisError, DegreeLemmaMode,
};
use firefly_core::dynamics::{compute_orbit, Configuration, Trace};
use firefly_core::graph::{
    non_isomorphic_trees, parse_edge_list, random_connected_graph, to_dot, to_edge_list, Family, Graph, GraphJson,
};
use firefly_core::stochastic::{build_and_analyze_chain, mc_ensemble, ChainReport, NoiseMode, NoiseModel, StochasticError};

use export::TraceFormat;

#[derive(Parser, Debug)]
#[command(name = "firefly", version, about = "Finite-state pulse-coupled oscillator networks")]
struct Cli {
    /// Worker threads for sweeps and ensembles (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GraphArgs {
    /// `path:5`, `cycle:4`, `star:3`, `complete:3` or `tree:0-1,1-2,1-3`.
    #[arg(long)]
    family: Option<String>,
    /// Edge-list file.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// JSON graph file.
    #[arg(long)]
    graph_json: Option<PathBuf>,
}

impl GraphArgs {
    fn load(&self) -> Result<Graph> {
        if let Some(f) = &self.family {
            return Ok(f.parse::<Family>()?.build()?);
        }
        if let Some(p) = &self.edges {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            return Ok(parse_edge_list(&text)?);
        }
        let p = self.graph_json.as_ref().expect("clap enforces one graph source");
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let j: GraphJson = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
        Ok(Graph::try_from(j)?)
    }
}

#[derive(Args, Debug)]
struct StartArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Period.
    #[arg(long)]
    n: u32,
    /// Initial states, comma separated.
    #[arg(long)]
    config: String,
}

impl StartArgs {
    fn load(&self) -> Result<(Graph, Configuration)> {
        let g = self.graph.load()?;
        let x = Configuration::parse(self.n, &self.config)?;
        if x.len() != g.vertex_count() {
            bail!("configuration has {} states but the graph has {} vertices", x.len(), g.vertex_count());
        }
        Ok((g, x))
    }
}

#[derive(Args, Debug)]
struct NoiseArgs {
    /// Uniform presence probability.
    #[arg(long, conflicts_with = "probs")]
    p: Option<f64>,
    /// Per-edge (or per-vertex) probabilities, comma separated.
    #[arg(long)]
    probs: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::EdgeReception)]
    mode: Mode,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    EdgeReception,
    VertexEmission,
}

impl NoiseArgs {
    fn model(&self, g: &Graph) -> Result<NoiseModel> {
        let mode = match self.mode {
            Mode::EdgeReception => NoiseMode::EdgeReception,
            Mode::VertexEmission => NoiseMode::VertexEmission,
        };
        match (&self.p, &self.probs) {
            (Some(p), _) => Ok(NoiseModel::uniform(g, mode, *p)?),
            (None, Some(list)) => {
                let probs = list
                    .split(',')
                    .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad probability `{t}`")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(NoiseModel::new(g, mode, probs)?)
            }
            (None, None) => bail!("give --p or --probs"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one orbit to its limit cycle and export the trace.
    Simulate {
        #[command(flatten)]
        start: StartArgs,
        /// Step cap (default: n^|V| + 1).
        #[arg(long)]
        cap: Option<usize>,
        /// Trace destination; a directory for dot-frames. Prints JSON to stdout if absent.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = TraceFormat::Json)]
        format: TraceFormat,
    },
    /// Exhaustively decide whether every configuration synchronizes.
    CheckSync {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Worst-case synchronization time on a path against the linear bounds.
    PathBounds {
        #[arg(long)]
        n: u32,
        /// Number of vertices.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degree criterion on all trees up to a size; CSV on stdout.
    VerifyTree {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        max_vertices: usize,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        /// Full JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synchrony versus every vertex blinking, over all configurations of a tree.
    VerifyBlinking {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A vertex of degree below n blinks in every limit cycle.
    VerifyDegree {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        vertex: usize,
        /// Sample this many random configurations instead of enumerating.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Return map at a vertex with recurrent/transient classification.
    Classify {
        #[command(flatten)]
        start: StartArgs,
        #[arg(long)]
        vertex: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a proper connected subgraph the dynamic restricts to.
    Irreducible {
        #[command(flatten)]
        start: StartArgs,
        #[arg(long, default_value_t = 1 << 20)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-state quotient path, simulated side by side with the graph.
    Quotient {
        #[command(flatten)]
        start: StartArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Branch width claims for the branch centered at a vertex.
    BranchWidth {
        #[command(flatten)]
        start: StartArgs,
        #[arg(long)]
        center: usize,
        /// Report the leaf-pruning bound instead (1-branches).
        #[arg(long)]
        one_branch: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build and check a non-synchronizing construction.
    Counterexample {
        #[arg(long, value_enum)]
        kind: CounterexampleArg,
        /// Period for the tree construction.
        #[arg(long, default_value_t = 4)]
        n: u32,
        /// Tree for the tree construction (default: star with n leaves).
        #[arg(long)]
        family: Option<String>,
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded Monte Carlo absorption ensemble under random presence.
    Mc {
        #[command(flatten)]
        start: StartArgs,
        #[command(flatten)]
        noise: NoiseArgs,
        #[arg(long, default_value_t = 1000)]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        cap: u64,
        /// Per-run results as CSV.
        #[arg(long)]
        runs_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact absorbing chain with expected absorption times.
    Chain {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        noise: NoiseArgs,
        /// Also report the expected time from this configuration.
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit graphs: a family, all trees up to a size, or a random connected graph.
    Gen {
        #[arg(long, group = "what")]
        family: Option<String>,
        #[arg(long, group = "what")]
        trees: Option<usize>,
        /// Vertex count of a random connected graph.
        #[arg(long, group = "what")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra-edge probability for --random.
        #[arg(long, default_value_t = 0.3)]
        extra_p: f64,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Named scenarios.
    PaperExamples {
        #[command(subcommand)]
        example: Example,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CounterexampleArg {
    HighDegreeTree,
    K3ThreeStates,
    N7StarSearch,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edges,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Example {
    /// `[b, n-1, ..., n-1]` on a path.
    Fig8Path {
        #[arg(long, default_value_t = 6)]
        n: u32,
        #[arg(long, default_value_t = 8)]
        m: usize,
    },
    /// K3 with states 0, q, 2q at period 2q+1.
    K3ThreeStates {
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Least all-blinking non-synchronizing configuration on star(4), n = 7.
    N7Star,
    /// High-degree tree construction.
    HighDegreeTree {
        #[arg(long, default_value_t = 4)]
        n: u32,
        #[arg(long)]
        family: Option<String>,
    },
}

enum Verdict {
    Pass,
    Fail,
}

impl From<bool> for Verdict {
    fn from(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_or_print(&text, out)
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn tree_or_star(family: &Option<String>, n: u32) -> Result<Graph> {
    match family {
        Some(f) => Ok(f.parse::<Family>()?.build()?),
        None => Ok(Graph::star(n as usize)?),
    }
}

#[derive(Serialize)]
struct SimulateSummary {
    transient: usize,
    period: usize,
    sync_time: Option<usize>,
    truncated: bool,
}

#[derive(Serialize)]
struct ChainOutput<'a> {
    #[serde(flatten)]
    report: &'a ChainReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_from: Option<f64>,
}

#[derive(Serialize)]
struct EnsembleOutput<'a> {
    #[serde(flatten)]
    report: &'a firefly_core::stochastic::EnsembleReport,
    fraction_absorbed: f64,
}

fn run(cli: Cli) -> Result<Verdict> {
    if let Some(j) = cli.jobs {
        if j == 0 {
            bail!("--jobs must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
    }
    match cli.command {
        Command::Simulate { start, cap, trace, format } => {
            let (g, x) = start.load()?;
            let orbit = compute_orbit(&g, &x, cap)?;
            match trace {
                None => emit(&Trace::new(&g, &orbit), None)?,
                Some(path) => {
                    export::export_trace(&g, &orbit, format, &path)?;
                    emit(
                        &SimulateSummary {
                            transient: orbit.transient(),
                            period: orbit.period(),
                            sync_time: orbit.sync_time(),
                            truncated: orbit.is_truncated(),
                        },
                        None,
                    )?;
                }
            }
            Ok(Verdict::Pass)
        }
        Command::CheckSync { graph, n, budget, out } => {
            let r = is_n_synchronizing(&graph.load()?, n, budget)?;
            emit(&r, out.as_deref())?;
            Ok(Verdict::Pass)
        }
        Command::PathBounds { n, m, budget, out } => {
            let r = max_sync_time_path(n, m, budget)?;
            emit(&r, out.as_deref())?;
            Ok((r.within_upper && r.all_synchronize && r.inhibitory_violations == 0).into())
        }
        Command::VerifyTree { n, max_vertices, budget, out } => {
            let r = verify_tree_theorem(n, max_vertices, budget)?;
            print!("{}", r.to_csv());
            if let Some(p) = out {
                emit(&r, Some(&p))?;
            }
            Ok(r.pass.into())
        }
        Command::VerifyBlinking { graph, n, budget, out } => {
            let r = verify_blinking_theorem(n, &graph.load()?, budget)?;
            emit(&r, out.as_deref())?;
            Ok(r.pass.into())
        }
        Command::VerifyDegree { graph, n, vertex, samples, seed, budget, out } => {
            let mode = match samples {
                Some(samples) => DegreeLemmaMode::Sampled { samples, seed },
                None => DegreeLemmaMode::Exhaustive { budget },
            };
            let r = verify_degree_lemma(&graph.load()?, n, vertex, mode)?;
            emit(&r, out.as_deref())?;
            Ok(r.pass.into())
        }
        Command::Classify { start, vertex, out } => {
            let (g, x) = start.load()?;
            emit(&return_map(&g, &x, vertex)?, out.as_deref())?;
            Ok(Verdict::Pass)
        }
        Command::Irreducible { start, budget, out } => {
            let (g, x) = start.load()?;
            emit(&is_irreducible(&g, &x, budget)?, out.as_deref())?;
            Ok(Verdict::Pass)
        }
        Command::Quotient { start, out } => {
            let (g, x) = start.load()?;
            let r = compare_quotient_dynamics(&g, &x)?;
            emit(&r, out.as_deref())?;
            Ok((r.first_mismatch.is_none() && r.sync_time.is_some()).into())
        }
        Command::BranchWidth { start, center, one_branch, out } => {
            let (g, x) = start.load()?;
            let star = g
                .find_stars_and_branches()
                .into_iter()
                .find(|s| s.center == center)
                .ok_or_else(|| anyhow!("vertex {center} is not the center of a star"))?;
            if one_branch {
                let r = one_branch_pruning(&g, &star, &x)?;
                emit(&r, out.as_deref())?;
                Ok((r.restricts_eventually && r.within_bound).into())
            } else {
                let r = verify_branch_width(&g, &star, &x)?;
                emit(&r, out.as_deref())?;
                Ok(r.pass.into())
            }
        }
        Command::Counterexample { kind, n, family, q, out } => {
            let ce = match kind {
                CounterexampleArg::HighDegreeTree => high_degree_tree(&tree_or_star(&family, n)?, n)?,
                CounterexampleArg::K3ThreeStates => k3_three_states(q)?,
                CounterexampleArg::N7StarSearch => n7_star_search()?,
            };
            emit(&ce, out.as_deref())?;
            Ok(Verdict::Pass)
        }
        Command::Mc { start, noise, runs, seed, cap, runs_csv, out } => {
            let (g, x) = start.load()?;
            let model = noise.model(&g)?;
            let r = mc_ensemble(&g, &x, &model, runs, seed, cap)?;
            if let Some(p) = runs_csv {
                let mut csv = String::from("run,seed,absorbed,steps_to_sync\n");
                for (i, a) in r.results.iter().enumerate() {
                    let steps = a.steps_to_sync.map(|s| s.to_string()).unwrap_or_default();
                    csv.push_str(&format!("{i},{},{},{steps}\n", a.seed, a.absorbed));
                }
                write_or_print(&csv, Some(&p))?;
            }
            emit(&EnsembleOutput { report: &r, fraction_absorbed: r.fraction_absorbed() }, out.as_deref())?;
            Ok(Verdict::Pass)
        }
        Command::Chain { graph, n, noise, from, out } => {
            let g = graph.load()?;
            let model = noise.model(&g)?;
            let r = build_and_analyze_chain(&g, n, &model)?;
            let expected_from = match from {
                Some(lit) => {
                    let x = Configuration::parse(n, &lit)?;
                    Some(r.expected_from(&x).ok_or_else(|| anyhow!("{lit} is not a state of this chain"))?)
                }
                None => None,
            };
            emit(&ChainOutput { report: &r, expected_from }, out.as_deref())?;
            Ok((r.sync_is_unique_absorbing() && r.reaches_sync_from_all).into())
        }
        Command::Gen { family, trees, random, seed, extra_p, format, out } => {
            let graphs = match (family, trees, random) {
                (Some(f), _, _) => vec![f.parse::<Family>()?.build()?],
                (_, Some(k), _) => non_isomorphic_trees(k),
                (_, _, Some(v)) => {
                    use rand::SeedableRng;
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    vec![random_connected_graph(&mut rng, v, extra_p)]
                }
                _ => bail!("give one of --family, --trees, --random"),
            };
            let text = match format {
                GraphFormat::Json if graphs.len() == 1 => {
                    serde_json::to_string_pretty(&GraphJson::from(&graphs[0]))? + "\n"
                }
                GraphFormat::Json => {
                    let all: Vec<GraphJson> = graphs.iter().map(GraphJson::from).collect();
                    serde_json::to_string_pretty(&all)? + "\n"
                }
                GraphFormat::Edges => graphs.iter().map(to_edge_list).collect::<Vec<_>>().join("\n"),
                GraphFormat::Dot => graphs
                    .iter()
                    .enumerate()
                    .map(|(i, g)| to_dot(g, &format!("g{i}"), None))
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            write_or_print(&text, out.as_deref())?;
            Ok(Verdict::Pass)
        }
        Command::PaperExamples { example, out } => paper_example(example, out.as_deref()),
    }
}

fn paper_example(example: Example, out: Option<&Path>) -> Result<Verdict> {
    match example {
        Example::Fig8Path { n, m } => {
            let r = fig8_family(n, m)?;
            match r.sync_time {
                Some(t) => eprintln!("path({m}) n={n}: sync at t={t}, formula n(n/2-1+m) = {}", r.formula),
                None => eprintln!("path({m}) n={n}: no sync"),
            }
            emit(&r, out)?;
            Ok((r.sync_time.is_some() && r.inhibitory_violations == 0).into())
        }
        Example::K3ThreeStates { q } => {
            let ce = k3_three_states(q)?;
            eprintln!("no sync, cycle length {}", ce.period);
            emit(&ce, out)?;
            Ok(Verdict::Pass)
        }
        Example::N7Star => {
            let ce = n7_star_search()?;
            eprintln!(
                "witness {} on star(4), n=7: no sync, every vertex blinks, cycle length {}",
                ce.configuration, ce.period
            );
            emit(&ce, out)?;
            Ok(Verdict::Pass)
        }
        Example::HighDegreeTree { n, family } => {
            let ce = high_degree_tree(&tree_or_star(&family, n)?, n)?;
            eprintln!(
                "configuration {}: no sync, vertex {} never blinks in the cycle",
                ce.configuration,
                ce.center.unwrap_or_default()
            );
            emit(&ce, out)?;
            Ok(Verdict::Pass)
        }
    }
}

fn is_falsification(e: &anyhow::Error) -> bool {
    matches!(e.downcast_ref::<AnalysisError>(), Some(AnalysisError::Falsified(_)))
        || matches!(
            e.downcast_ref::<StochasticError>(),
            Some(StochasticError::NotAbsorbing { .. } | StochasticError::Singular)
        )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_falsification(&e) { 2 } else { 1 })
        }
    }
}
