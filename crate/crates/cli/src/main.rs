mod bench;
mod costs;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use cvd_core::cost::int;
use cvd_core::generate;
use cvd_core::goodness::{find_2good, verify_certificate, Kind};
use cvd_core::localratio::{cluster_vd_apx, cluster_vd_exact, validate, SubsetEnumeration, EXACT_LIMIT};
use cvd_core::sa::{build_sa, integrality_gap};
use cvd_core::{parse_graph, CostFn, Graph, Rational};

use report::{join, Report};

#[derive(Parser)]
#[command(name = "cvd", version, about = "Cluster vertex deletion: approximation, exact solving, certificates and LP gaps")]
struct Cli {
    /// Seed for random generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the 2-approximation.
    Solve {
        graph: PathBuf,
        #[arg(long)]
        costs: Option<PathBuf>,
        /// Also compute the optimum (n <= 20) and check the ratio.
        #[arg(long)]
        verify: bool,
    },
    /// Exact optimum by subset enumeration (n <= 20).
    Exact {
        graph: PathBuf,
        #[arg(long)]
        costs: Option<PathBuf>,
    },
    /// Build and verify a 2-good certificate around a root (twin-free graphs).
    Certify {
        graph: PathBuf,
        #[arg(long)]
        root: usize,
    },
    /// SA_r value, optimum and their ratio.
    Gap {
        graph: PathBuf,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        r: u8,
        #[arg(long)]
        costs: Option<PathBuf>,
        /// Also write the LP in text form to this file.
        #[arg(long)]
        lp_out: Option<PathBuf>,
    },
    /// Print a generated graph in edge-list form.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Time the approximation on every file of a corpus directory.
    Bench { corpus: PathBuf },
}

#[derive(Subcommand)]
enum GenKind {
    /// Random G(n, p).
    Gnp {
        #[arg(long)]
        n: usize,
        /// Edge probability, e.g. 1/2 or 0.25.
        #[arg(long)]
        p: String,
    },
    /// Path on n vertices.
    Path {
        #[arg(long)]
        n: usize,
    },
    /// Cycle on n vertices.
    Cycle {
        #[arg(long)]
        n: usize,
    },
    /// Complete graph on n vertices.
    Complete {
        #[arg(long)]
        n: usize,
    },
    /// Wheel on k vertices.
    Wheel {
        #[arg(long)]
        k: usize,
    },
    /// Star with a center and the given number of leaves.
    Star {
        #[arg(long)]
        leaves: usize,
    },
    /// Two disjoint P3s plus a vertex adjacent to all six.
    TwoP3Apex,
    /// The Petersen graph.
    Petersen,
    /// Universal root over a K4 with three pendants (8 vertices).
    Figure3,
    /// Small graph whose peel step creates two twin pairs (6 vertices).
    Figure4,
    /// A directory of G(n, p) instances for `bench`, one per size.
    Corpus {
        #[arg(long, value_delimiter = ',', default_values_t = [100usize, 200, 400, 800])]
        sizes: Vec<usize>,
        #[arg(long, default_value = "1/2")]
        p: String,
        /// Target directory.
        #[arg(long)]
        dir: PathBuf,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<cvd_core::Error> for Failure {
    fn from(e: cvd_core::Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Input(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> CliResult<Graph> {
    parse_graph(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_costs(path: Option<&Path>, n: usize) -> CliResult<CostFn> {
    match path {
        Some(p) => Ok(costs::parse_costs(&read(p)?, n)?),
        None => Ok(CostFn::unit(n)),
    }
}

fn elapsed_ms(start: Instant) -> String {
    format!("{:.3}", start.elapsed().as_secs_f64() * 1e3)
}

fn header(r: &mut Report, path: &Path, g: &Graph) {
    r.add("instance", path.display()).add("n", g.n()).add("m", g.m());
}

fn solve(path: &Path, costs: Option<&Path>, verify: bool) -> CliResult<String> {
    let g = load_graph(path)?;
    let c = load_costs(costs, g.n())?;
    if verify && g.n() > EXACT_LIMIT {
        return Err(Failure::Input(format!(
            "--verify needs an exact optimum, which is limited to {EXACT_LIMIT} vertices (n = {})",
            g.n()
        )));
    }
    let start = Instant::now();
    let x = cluster_vd_apx(&g, &c)?;
    let wall = elapsed_ms(start);
    let v = validate(&g, &c, &x.vertices);
    let mut r = Report::default();
    header(&mut r, path, &g);
    r.add("algorithm", "local-ratio")
        .add("hitting_set", join(&x.vertices))
        .add("cost", &x.cost)
        .add("is_hitting", v.is_hitting)
        .add("is_minimal", v.is_minimal);
    if verify {
        let opt = cluster_vd_exact(&g, &c)?.cost;
        r.add("opt", &opt);
        if opt > int(0) {
            let ratio = &x.cost / &opt;
            r.add("ratio", &ratio);
            if ratio > int(2) {
                return Err(Failure::Internal(format!("ratio {ratio} exceeds 2")));
            }
        } else if x.cost > opt {
            return Err(Failure::Internal(format!("cost {} on an instance with optimum 0", x.cost)));
        }
    }
    r.add("wall_ms", wall);
    Ok(r.to_string())
}

fn exact(path: &Path, costs: Option<&Path>) -> CliResult<String> {
    let g = load_graph(path)?;
    let c = load_costs(costs, g.n())?;
    let start = Instant::now();
    let x = cluster_vd_exact(&g, &c)?;
    let mut r = Report::default();
    header(&mut r, path, &g);
    r.add("algorithm", "exact")
        .add("hitting_set", join(&x.vertices))
        .add("cost", &x.cost)
        .add("wall_ms", elapsed_ms(start));
    Ok(r.to_string())
}

fn certify(path: &Path, root: usize) -> CliResult<String> {
    let g = load_graph(path)?;
    let start = Instant::now();
    let cert = find_2good(&g, root)?;
    let ok = verify_certificate(&g, &cert, &SubsetEnumeration)?;
    let mut r = Report::default();
    header(&mut r, path, &g);
    r.add("root", root);
    match cert.kind {
        Kind::Strong => r.add("kind", "strong"),
        Kind::Central { .. } => r.add("kind", "central"),
    };
    r.add("vertices", join(&cert.vertices))
        .add("costs", join(&cert.costs))
        .add("total", cert.total())
        .add("verified", ok)
        .add("wall_ms", elapsed_ms(start));
    if !ok {
        eprint!("{r}");
        return Err(Failure::Internal("certificate failed verification".into()));
    }
    Ok(r.to_string())
}

fn gap(path: &Path, r_level: u8, costs: Option<&Path>, lp_out: Option<&Path>) -> CliResult<String> {
    let g = load_graph(path)?;
    let c = load_costs(costs, g.n())?;
    let start = Instant::now();
    if let Some(lp_path) = lp_out {
        let text = build_sa(&g, r_level)?.to_lp_text(&c);
        fs::write(lp_path, text).map_err(|e| Failure::Input(format!("{}: {e}", lp_path.display())))?;
    }
    let report = integrality_gap(&g, &c, r_level)?;
    let mut r = Report::default();
    header(&mut r, path, &g);
    r.add("r", r_level)
        .add("lp", &report.lp)
        .add("opt", &report.opt)
        .add("gap", &report.gap)
        .add("wall_ms", elapsed_ms(start));
    Ok(r.to_string())
}

fn probability(p: &str) -> CliResult<Rational> {
    generate::parse_probability(p).ok_or_else(|| Failure::Input(format!("bad probability {p:?}")))
}

fn gen(kind: &GenKind, seed: u64) -> CliResult<String> {
    let need = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(Failure::Input(msg.to_string())) };
    let g = match *kind {
        GenKind::Gnp { n, ref p } => generate::gnp(n, &probability(p)?, seed)?,
        GenKind::Path { n } => generate::path(n),
        GenKind::Cycle { n } => {
            need(n >= 3, "a cycle needs at least 3 vertices")?;
            generate::cycle(n)
        }
        GenKind::Complete { n } => generate::complete(n),
        GenKind::Wheel { k } => {
            need(k >= 4, "a wheel needs at least 4 vertices")?;
            generate::wheel(k)
        }
        GenKind::Star { leaves } => generate::star(leaves),
        GenKind::TwoP3Apex => generate::two_p3_apex(),
        GenKind::Petersen => generate::petersen(),
        GenKind::Figure3 => generate::figure3(),
        GenKind::Figure4 => generate::figure4(),
        GenKind::Corpus { ref sizes, ref p, ref dir } => return corpus(sizes, &probability(p)?, dir, seed),
    };
    Ok(g.to_edge_list())
}

fn corpus(sizes: &[usize], p: &Rational, dir: &Path, seed: u64) -> CliResult<String> {
    fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
    let mut listing = String::new();
    for (i, &n) in sizes.iter().enumerate() {
        let g = generate::gnp(n, p, seed.wrapping_add(i as u64))?;
        let file = dir.join(format!("gnp_n{n:05}_s{seed}.txt"));
        fs::write(&file, g.to_edge_list()).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
        listing += &format!("{}\n", file.display());
    }
    Ok(listing)
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Solve { graph, costs, verify } => solve(graph, costs.as_deref(), *verify),
        Command::Exact { graph, costs } => exact(graph, costs.as_deref()),
        Command::Certify { graph, root } => certify(graph, *root),
        Command::Gap { graph, r, costs, lp_out } => gap(graph, *r, costs.as_deref(), lp_out.as_deref()),
        Command::Gen { kind } => gen(kind, cli.seed),
        Command::Bench { corpus } => {
            let files = bench::corpus_files(corpus)?;
            Ok(bench::table(&bench::run(&files)))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
