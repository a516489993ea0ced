//! Subcommand bodies. Each returns the process exit code on completion, or an
//! error that [`exit_code`] maps to one.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use conpath::cp::{self, CpRun, VerifyLevel};
use conpath::decomposition::{parse_decomposition, PathDecomposition};
use conpath::derived::DerivedGraph;
use conpath::expansion::{run_simple, FirstApplicable, MoveChooser, SeededRandom};
use conpath::generators::{connected_graphs_up_to_iso, random_decomposition};
use conpath::graph::{parse_graph, Graph, Vertex};
use conpath::oracle::{self, DEFAULT_CAP};
use conpath::search::{self, parse_strategy, Mode};
use conpath::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVARIANT: u8 = 1;
pub const EXIT_INVALID_DECOMPOSITION: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;
pub const EXIT_PARSE: u8 = 4;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Invariant(_) | Error::EmptyBorder => EXIT_INVARIANT,
        Error::InvalidDecomposition(_) | Error::NotConnected(_) | Error::Strategy(_) => EXIT_INVALID_DECOMPOSITION,
        Error::Disconnected | Error::Oracle(_) => EXIT_PRECONDITION,
        Error::Parse { .. }
        | Error::UnknownLabel(_)
        | Error::UnknownVertex(_)
        | Error::SelfLoop(_)
        | Error::IllFormedMove { .. }
        | Error::Io(_) => EXIT_PARSE,
    }
}

fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

fn read_pair(graph: &Path, decomposition: &Path) -> Result<(Graph, PathDecomposition)> {
    let g = read_graph(graph)?;
    let p = parse_decomposition(&fs::read_to_string(decomposition)?, &g)?;
    Ok((g, p))
}

fn vertex(g: &Graph, label: &str) -> Result<Vertex> {
    g.vertex(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Writes `artifact` to `output`, or prepends it to the statistics.
fn finish(artifact: Option<&str>, output: Option<&Path>, stats: &str) -> Result<()> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if let Some(text) = artifact {
        match output {
            Some(path) => fs::write(path, text)?,
            None => out.write_all(text.as_bytes())?,
        }
    }
    out.write_all(stats.as_bytes())?;
    Ok(())
}

/// Space separated `key=value` pairs as one pair per line.
fn lines(pairs: &str) -> String {
    pairs.split_whitespace().map(|kv| format!("{kv}\n")).collect()
}

pub fn validate(graph: &Path, decomposition: &Path) -> Result<u8> {
    let (g, p) = read_pair(graph, decomposition)?;
    let report = p.validate(&g);
    let mut stats = report.render(&g);
    let connected = report.is_valid() && p.is_connected(&g);
    let _ = writeln!(stats, "valid={}", report.is_valid());
    let _ = writeln!(stats, "connected={connected}");
    if let (true, Some(i)) = (report.is_valid(), p.first_disconnected_prefix(&g)) {
        let _ = writeln!(stats, "first_disconnected_prefix={i}");
    }
    let _ = writeln!(stats, "d={}", p.d());
    let _ = writeln!(stats, "width={}", p.width());
    finish(None, None, &stats)?;
    Ok(if report.is_valid() { EXIT_OK } else { EXIT_INVALID_DECOMPOSITION })
}

pub fn derive(graph: &Path, decomposition: &Path, output: Option<&Path>) -> Result<u8> {
    let (g, p) = read_pair(graph, decomposition)?;
    let report = p.validate(&g);
    if !report.is_valid() {
        return Err(Error::InvalidDecomposition(report.render(&g).trim().replace('\n', "; ")));
    }
    let dg = DerivedGraph::build(&g, &p);
    let stats = format!(
        "layers={}\nvertices={}\nedges={}\nwidth={}\n",
        dg.d(),
        dg.len(),
        dg.edge_count(),
        dg.width()
    );
    finish(Some(&dg.dump(Some(&g))), output, &stats)?;
    Ok(EXIT_OK)
}

pub struct ScpConfig {
    pub graph: PathBuf,
    pub decomposition: PathBuf,
    /// Random chooser seed; `None` picks the first growing move.
    pub seed: Option<u64>,
    pub trace: bool,
    pub dump_derived: bool,
    pub output: Option<PathBuf>,
}

pub fn scp(cfg: &ScpConfig) -> Result<u8> {
    let (g, p) = read_pair(&cfg.graph, &cfg.decomposition)?;
    let mut first = FirstApplicable;
    let mut random;
    let chooser: &mut dyn MoveChooser = match cfg.seed {
        Some(seed) => {
            random = SeededRandom::new(seed);
            &mut random
        }
        None => &mut first,
    };
    let run = run_simple(&g, &p, chooser)?;
    if cfg.dump_derived {
        eprint!("{}", run.derived.dump(Some(&g)));
    }
    if cfg.trace {
        eprint!("{}", run.trace.render(&run.derived));
    }
    let out = &run.decomposition;
    let ok = out.validate(&g).is_valid() && out.is_connected(&g);
    let stats = format!(
        "k_in={}\nwidth_out={}\nd={}\nm={}\nok={ok}\n",
        p.width(),
        out.width(),
        p.d(),
        run.trace.len(),
    );
    finish(Some(&out.to_text(&g)), cfg.output.as_deref(), &stats)?;
    Ok(if ok { EXIT_OK } else { EXIT_INVARIANT })
}

pub struct ConvertConfig {
    pub graph: PathBuf,
    pub decomposition: PathBuf,
    pub homebase: Option<String>,
    pub verify: VerifyLevel,
    pub trace: bool,
    pub dump_derived: bool,
    pub output: Option<PathBuf>,
}

fn run_conversion(g: &Graph, p: &PathDecomposition, homebase: Option<Vertex>, verify: VerifyLevel) -> Result<CpRun> {
    match homebase {
        Some(h) => cp::run_cph(g, p, h, verify),
        None => cp::run_cp(g, p, verify),
    }
}

/// Whether a run meets its guarantees: valid, connected, within the width
/// bound and, with a homebase, starting at it.
fn run_ok(g: &Graph, run: &CpRun, homebase: Option<Vertex>) -> bool {
    let out = &run.decomposition;
    let starts = homebase.is_none_or(|h| out.bags().first().is_some_and(|b| b.contains(&h)));
    out.validate(g).is_valid() && out.is_connected(g) && out.width() <= run.bound() && starts
}

pub fn convert(cfg: &ConvertConfig) -> Result<u8> {
    let (g, p) = read_pair(&cfg.graph, &cfg.decomposition)?;
    let homebase = cfg.homebase.as_deref().map(|h| vertex(&g, h)).transpose()?;
    let run = run_conversion(&g, &p, homebase, cfg.verify)?;
    if cfg.dump_derived {
        eprint!("{}", run.derived.dump(Some(&g)));
    }
    if cfg.trace {
        eprint!("{}", run.trace.render(&run.derived));
        eprint!("{}", cp::render_iterations(&run));
    }
    let ok = run_ok(&g, &run, homebase);
    let mut stats = lines(&run.stats(&g));
    if let Some(h) = &cfg.homebase {
        let _ = writeln!(stats, "homebase={h}");
    }
    let _ = writeln!(stats, "iterations={}", run.iterations.len());
    let _ = writeln!(stats, "unchanged={}", run.unchanged);
    finish(Some(&run.decomposition.to_text(&g)), cfg.output.as_deref(), &stats)?;
    Ok(if ok { EXIT_OK } else { EXIT_INVARIANT })
}

pub fn to_strategy(
    graph: &Path,
    decomposition: &Path,
    mode: Mode,
    homebase: Option<&str>,
    output: Option<&Path>,
) -> Result<u8> {
    let (g, p) = read_pair(graph, decomposition)?;
    let report = p.validate(&g);
    if !report.is_valid() {
        return Err(Error::InvalidDecomposition(report.render(&g).trim().replace('\n', "; ")));
    }
    let strategy = match mode {
        Mode::Node => search::decomposition_to_node_strategy(&p),
        Mode::Edge => {
            let start = homebase.map(|h| vertex(&g, h)).transpose()?;
            search::connected_decomposition_to_edge_strategy(&g, &p, start)?
        }
    };
    let stats = format!("moves={}\nsearchers={}\n", strategy.moves.len(), strategy.searchers);
    finish(Some(&strategy.to_text(&g)), output, &stats)?;
    Ok(EXIT_OK)
}

pub fn simulate(graph: &Path, strategy: &Path, mode: Mode) -> Result<u8> {
    let g = read_graph(graph)?;
    let s = parse_strategy(&fs::read_to_string(strategy)?, &g)?;
    let verdict = search::simulate(&g, &s, mode)?;
    finish(None, None, &format!("{verdict}\n"))?;
    Ok(EXIT_OK)
}

pub fn oracle(graph: &Path, connected: bool, budget: Option<usize>, cap: usize, output: Option<&Path>) -> Result<u8> {
    let g = read_graph(graph)?;
    match oracle::solve(&g, connected, budget, cap)? {
        Some(sol) => {
            let order: Vec<&str> = sol.order.iter().map(|&v| g.label(v)).collect();
            let stats = format!("width={}\norder={}\n", sol.width, order.join(","));
            finish(Some(&sol.witness.to_text(&g)), output, &stats)?;
        }
        None => finish(None, None, &format!("width=exceeds:{}\n", budget.unwrap_or(0)))?,
    }
    Ok(EXIT_OK)
}

pub struct BatchConfig {
    pub graphs: Vec<PathBuf>,
    pub corpus: Option<usize>,
    pub random: usize,
    pub seed: u64,
    pub homebase_all: bool,
    pub verify: VerifyLevel,
    pub jobs: usize,
}

struct Instance {
    name: String,
    graph: Graph,
    /// A decomposition supplied next to the graph file.
    given: Option<PathDecomposition>,
    index: u64,
}

/// The decompositions converted for one graph: the supplied one, an optimal
/// one when the graph is small enough, and the requested random ones.
fn decompositions(inst: &Instance, random: usize, seed: u64) -> Result<Vec<(String, PathDecomposition)>> {
    let g = &inst.graph;
    let mut out = Vec::new();
    if let Some(p) = &inst.given {
        out.push(("given".to_string(), p.clone()));
    }
    if g.n() <= DEFAULT_CAP {
        out.push(("optimal".to_string(), oracle::exact_pathwidth(g)?.witness));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ inst.index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    for r in 0..random {
        out.push((format!("random{r}"), random_decomposition(g, &mut rng, 3)));
    }
    Ok(out)
}

fn batch_instance(inst: &Instance, cfg: &BatchConfig) -> (String, bool) {
    let g = &inst.graph;
    let list = match decompositions(inst, cfg.random, cfg.seed) {
        Ok(list) => list,
        Err(e) => {
            let e = e.to_string().replace(' ', "_");
            return (format!("instance={} error={e}\n", inst.name), false);
        }
    };
    let mut text = String::new();
    let mut all_ok = true;
    for (source, p) in list {
        let _ = write!(text, "instance={} source={source} ", inst.name);
        let run = match cp::run_cp(g, &p, cfg.verify) {
            Ok(run) => run,
            Err(e) => {
                all_ok = false;
                let _ = writeln!(text, "error={}", e.to_string().replace(' ', "_"));
                continue;
            }
        };
        let mut ok = run_ok(g, &run, None);
        let _ = write!(text, "{}", run.stats(g));
        if cfg.homebase_all {
            let failures = (0..g.n())
                .filter(|&h| !cp::run_cph(g, &p, h, cfg.verify).is_ok_and(|r| run_ok(g, &r, Some(h))))
                .count();
            ok &= failures == 0;
            let _ = write!(text, " homebase_failures={failures}");
        }
        all_ok &= ok;
        text.push('\n');
    }
    (text, all_ok)
}

pub fn batch(cfg: &BatchConfig) -> Result<u8> {
    let mut instances = Vec::new();
    for path in &cfg.graphs {
        let graph = read_graph(path)?;
        let pd = path.with_extension("pd");
        let given = if pd.is_file() {
            Some(parse_decomposition(&fs::read_to_string(&pd)?, &graph)?)
        } else {
            None
        };
        let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into());
        instances.push((name, graph, given));
    }
    if let Some(n) = cfg.corpus {
        for size in 1..=n {
            for (i, graph) in connected_graphs_up_to_iso(size).into_iter().enumerate() {
                instances.push((format!("n{size}g{i}"), graph, None));
            }
        }
    }
    let instances: Vec<Instance> = instances
        .into_iter()
        .enumerate()
        .map(|(index, (name, graph, given))| Instance {
            name,
            graph,
            given,
            index: index as u64,
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    let results: Vec<(String, bool)> = pool.install(|| instances.par_iter().map(|i| batch_instance(i, cfg)).collect());

    let failures = results.iter().filter(|(_, ok)| !ok).count();
    let mut stats: String = results.iter().map(|(text, _)| text.as_str()).collect();
    let _ = writeln!(stats, "graphs={}", instances.len());
    let _ = writeln!(stats, "runs={}", results.iter().map(|(t, _)| t.lines().count()).sum::<usize>());
    let _ = writeln!(stats, "failures={failures}");
    finish(None, None, &stats)?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_INVARIANT })
}
