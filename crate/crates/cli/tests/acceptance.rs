//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use cvd_core::cost::{int, ratio};
use cvd_core::generate;
use cvd_core::goodness::{base_case_certificate, find_2good, two_p3_certificate, verify_certificate, wheel_certificate, Kind};
use cvd_core::chordal::{Hole, TwoP3};
use cvd_core::localratio::{cluster_vd_exact, ExactSolver, P3Branching, SubsetEnumeration};
use cvd_core::sa::{lb_point, sa_value};
use cvd_core::sweep::{apx_all_graphs, apx_random, certificates_all_graphs, gap_all_graphs, nonisomorphic, oracles_all_graphs, Mode};
use cvd_core::{CostFn, Error, Graph, P3};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn approximation_soundness() -> Outcome {
    let mut exhaustive = 0;
    for n in 0..=6 {
        let report = apx_all_graphs(n, Mode::Parallel);
        ensure(report.passed(), format!("n = {n}: {:?}", report.failures.first()))?;
        exhaustive += report.checked;
    }
    let random = apx_random(10_000, 7..15, (0, 10), 2024, Mode::Parallel);
    ensure(random.passed(), format!("random: {:?}", random.failures.first()))?;
    Ok(format!("{exhaustive} labeled graphs, {} random weighted instances", random.checked))
}

fn certificates() -> Outcome {
    let mut graphs = 0;
    for n in 1..=7 {
        let report = certificates_all_graphs(n, Mode::Parallel);
        ensure(report.passed(), format!("n = {n}: {:?}", report.failures.first()))?;
        graphs += report.checked;
    }
    Ok(format!("{graphs} connected twin-free labeled graphs, every root"))
}

fn figures() -> Outcome {
    let f3 = generate::figure3();
    let cert = base_case_certificate(&f3, 0).map_err(|e| e.to_string())?;
    ensure(cert.costs == [6, 1, 1, 1, 1, 3, 3, 3], format!("figure 3 costs {:?}", cert.costs))?;
    ensure(verify_certificate(&f3, &cert, &SubsetEnumeration) == Ok(true), "figure 3 certificate fails")?;

    let f4 = generate::figure4();
    let cert = find_2good(&f4, 0).map_err(|e| e.to_string())?;
    ensure(cert.costs == [1, 1, 1, 1, 1, 2], format!("figure 4 costs {:?}", cert.costs))?;
    ensure(cert.cost_of(5) == Some(2), "peeled vertex does not carry cost 2")?;
    ensure(cert.kind == Kind::Central { root: 0 }, "figure 4 certificate is not central")?;
    ensure(verify_certificate(&f4, &cert, &SubsetEnumeration) == Ok(true), "figure 4 certificate fails")?;
    Ok("(6,1,1,1,1,3,3,3) and (1,1,1,1,1,2)".into())
}

fn wheels() -> Outcome {
    for k in 5..=10 {
        let g = generate::wheel(k);
        let cert = wheel_certificate(&g, &Hole { cycle: (1..k).collect() }, 0).map_err(|e| e.to_string())?;
        let costs = CostFn::from_ints(&cert.costs);
        let opt = cluster_vd_exact(&g, &costs).map_err(|e| e.to_string())?.cost;
        let expected = (k - 3) as u64;
        ensure(cert.total() == 2 * expected, format!("W{k}: total {}", cert.total()))?;
        ensure(opt == int(expected as i64), format!("W{k}: optimum {opt}"))?;
    }
    Ok("k = 5..10: total 2(k-3), optimum k-3".into())
}

fn two_p3() -> Outcome {
    let g = generate::two_p3_apex();
    let six = TwoP3 {
        first: P3::new(1, 2, 3),
        second: P3::new(4, 5, 6),
    };
    let cert = two_p3_certificate(&g, &six, 0).map_err(|e| e.to_string())?;
    let opt = cluster_vd_exact(&g, &CostFn::from_ints(&cert.costs)).map_err(|e| e.to_string())?.cost;
    ensure(cert.total() == 8, format!("total {}", cert.total()))?;
    ensure(opt == int(4), format!("optimum {opt}"))?;
    Ok("total 8, optimum 4".into())
}

fn sa0_structure() -> Outcome {
    for n in 4..=9 {
        let lp = sa_value(&generate::cycle(n), &CostFn::unit(n), 0).map_err(|e| e.to_string())?;
        ensure(lp == ratio(n as i64, 3), format!("C{n}: {lp}"))?;
    }
    for n in 1..=10 {
        let g = generate::path(n);
        let c = CostFn::unit(n);
        let lp = sa_value(&g, &c, 0).map_err(|e| e.to_string())?;
        let opt = cluster_vd_exact(&g, &c).map_err(|e| e.to_string())?.cost;
        ensure(lp.is_integer() && lp == opt, format!("P{n}: relaxation {lp}, optimum {opt}"))?;
    }
    Ok("cycles n/3, paths integral and optimal".into())
}

fn sa1_gap() -> Outcome {
    let mut worst = int(0);
    let mut classes = 0;
    for n in 1..=6 {
        let sweep = gap_all_graphs(n, 1, Mode::Parallel);
        ensure(sweep.failures.is_empty(), format!("n = {n}: {:?}", sweep.failures.first()))?;
        ensure(sweep.max_gap <= ratio(5, 2), format!("n = {n}: gap {} on {:?}", sweep.max_gap, sweep.witness))?;
        worst = worst.max(sweep.max_gap);
        classes += sweep.classes;
    }
    Ok(format!("{classes} isomorphism classes, largest gap {worst}"))
}

fn lower_bound_point() -> Outcome {
    for (name, g, objective) in [("Petersen", generate::petersen(), 4), ("C5", generate::cycle(5), 2)] {
        let report = lb_point(&g).map_err(|e| e.to_string())?;
        ensure(report.feasible(), format!("{name}: violates {:?}", report.first_violation))?;
        ensure(report.objective == int(objective), format!("{name}: objective {}", report.objective))?;
    }
    ensure(
        matches!(lb_point(&generate::complete(3)), Err(Error::Precondition(_))),
        "K3 is not rejected",
    )?;
    Ok("Petersen 4, C5 2, K3 rejected".into())
}

fn oracle_consistency() -> Outcome {
    let mut labeled = 0;
    for n in 0..=7 {
        let report = oracles_all_graphs(n, Mode::Parallel);
        ensure(report.passed(), format!("n = {n}: {:?}", report.failures.first()))?;
        labeled += report.checked;
    }
    let classes = nonisomorphic(8, Mode::Parallel);
    for g in &classes {
        let c = CostFn::unit(8);
        let a = SubsetEnumeration.opt(g, &c).map_err(|e| e.to_string())?;
        let b = P3Branching.opt(g, &c).map_err(|e| e.to_string())?;
        ensure(a == b, format!("{g:?}: {a} against {b}"))?;
    }
    Ok(format!("{labeled} labeled graphs on n <= 7, {} classes on n = 8", classes.len()))
}

/// Runs the binary and returns its stdout, or an error with stderr.
fn cvd(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cvd"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("cvd {args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

/// Drops timing: `wall_ms` lines, the slope line, and the last column of table rows.
fn without_timing(text: &str, table: bool) -> String {
    text.lines()
        .filter(|l| !l.starts_with("wall_ms:") && !l.starts_with("loglog_slope_ms:"))
        .map(|l| {
            let mut words: Vec<&str> = l.split_whitespace().collect();
            if table && words.len() == 6 {
                words.pop();
            }
            words.join(" ")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn read_dir_sorted(dir: &Path) -> Result<Vec<(PathBuf, String)>, String> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.map(|e| e.path()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    files.sort();
    files
        .into_iter()
        .map(|p| fs::read_to_string(&p).map(|s| (p, s)).map_err(|e| e.to_string()))
        .collect()
}

fn determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let graph = dir.join("g.txt");
    let small = dir.join("g7.txt");
    let costs = dir.join("c.txt");
    let corpus = dir.join("corpus");
    let lp = dir.join("sa1.lp");
    let graph_text = cvd(&["gen", "gnp", "--n", "10", "--p", "1/2", "--seed", "7"])?;
    fs::write(&graph, &graph_text).map_err(|e| e.to_string())?;
    fs::write(&small, cvd(&["gen", "gnp", "--n", "7", "--p", "1/2", "--seed", "7"])?).map_err(|e| e.to_string())?;
    fs::write(&costs, "0 3\n2 1/2\n5 7\n").map_err(|e| e.to_string())?;
    let (g, g7, c, corpus_s, lp_s) = (
        graph.to_str().unwrap(),
        small.to_str().unwrap(),
        costs.to_str().unwrap(),
        corpus.to_str().unwrap(),
        lp.to_str().unwrap(),
    );

    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "gnp", "--n", "10", "--p", "1/2", "--seed", "7"],
        vec!["gen", "gnp", "--n", "200", "--p", "0.3", "--seed", "11"],
        vec!["gen", "wheel", "--k", "7"],
        vec!["gen", "petersen"],
        vec!["solve", g, "--seed", "3"],
        vec!["solve", g, "--costs", c, "--verify"],
        vec!["exact", g, "--costs", c],
        vec!["certify", g, "--root", "0"],
        vec!["gap", g7, "--r", "1", "--lp-out", lp_s],
        vec!["gap", g, "--r", "0", "--costs", c],
        vec!["gen", "corpus", "--sizes", "50,100,150", "--dir", corpus_s, "--seed", "9"],
        vec!["bench", corpus_s],
    ];
    let library_text = Graph::to_edge_list(&generate::gnp(10, &ratio(1, 2), 7).map_err(|e| e.to_string())?);
    ensure(library_text == graph_text, "gen gnp output differs from the library generator")?;

    for args in &commands {
        let table = args[0] == "bench";
        let mut runs = Vec::new();
        for _ in 0..2 {
            let mut snapshot = match cvd(args) {
                Ok(out) => without_timing(&out, table),
                // A graph with twins cannot be certified; the error text must then repeat too.
                Err(e) if args[0] == "certify" => e,
                Err(e) => return Err(e),
            };
            if args[0] == "gap" && args.contains(&"--lp-out") {
                snapshot += &fs::read_to_string(&lp).map_err(|e| e.to_string())?;
            }
            if args[1] == "corpus" {
                for (p, text) in read_dir_sorted(&corpus)? {
                    snapshot += &format!("{}\n{text}", p.display());
                }
            }
            runs.push(snapshot);
        }
        ensure(runs[0] == runs[1], format!("cvd {args:?} differs between runs"))?;
    }
    Ok(format!("{} commands, each run twice", commands.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("approximation is a minimal hitting set within twice the optimum", approximation_soundness),
        ("every root of every small twin-free graph has a verified certificate", certificates),
        ("figure instances give the exact certificate costs", figures),
        ("wheel certificates", wheels),
        ("2P3 plus apex certificate", two_p3),
        ("base relaxation on cycles and paths", sa0_structure),
        ("one-round lift gap stays within 5/2 up to six vertices", sa1_gap),
        ("lower-bound point", lower_bound_point),
        ("the two exact solvers agree", oracle_consistency),
        ("CLI output is deterministic", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("AC{} PASS {name}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("AC{} FAIL {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
