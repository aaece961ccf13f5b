use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use cvd_core::localratio::cluster_vd_apx;
use cvd_core::{parse_graph, CostFn};
use rayon::prelude::*;

pub struct Row {
    pub name: String,
    pub outcome: Result<Solved, String>,
}

pub struct Solved {
    pub n: usize,
    pub m: usize,
    pub cost: String,
    pub wall_ms: f64,
}

pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(format!("{}: empty corpus", dir.display()));
    }
    Ok(files)
}

fn solve_file(path: &Path) -> Result<Solved, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let g = parse_graph(&text).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let x = cluster_vd_apx(&g, &CostFn::unit(g.n())).map_err(|e| e.to_string())?;
    Ok(Solved {
        n: g.n(),
        m: g.m(),
        cost: x.cost.to_string(),
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn run(files: &[PathBuf]) -> Vec<Row> {
    files
        .par_iter()
        .map(|p| Row {
            name: p.file_name().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()),
            outcome: solve_file(p),
        })
        .collect()
}

/// Least-squares slope of `ln(ms)` against `ln(n)`.
pub fn loglog_slope(points: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, t)| *n > 0 && *t > 0.0)
        .map(|&(n, t)| ((n as f64).ln(), t.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if pts.len() < 2 || sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

pub fn table(rows: &[Row]) -> String {
    let mut out = format!("{:<28} {:>6} {:>8} {:>10} {:<8} {:>12}\n", "instance", "n", "m", "cost", "status", "wall_ms");
    let mut points = Vec::new();
    for row in rows {
        match &row.outcome {
            Ok(s) => {
                points.push((s.n, s.wall_ms));
                out += &format!(
                    "{:<28} {:>6} {:>8} {:>10} {:<8} {:>12.3}\n",
                    row.name, s.n, s.m, s.cost, "ok", s.wall_ms
                );
            }
            Err(e) => {
                out += &format!("{:<28} {:>6} {:>8} {:>10} {:<8} {:>12}\n", row.name, "-", "-", "-", "failed", "-");
                out += &format!("  error: {e}\n");
            }
        }
    }
    let ok = points.len();
    out += &format!("solved: {ok}/{}\n", rows.len());
    match loglog_slope(&points) {
        Some(s) => out += &format!("loglog_slope_ms: {s:.3}\n"),
        None => out += "loglog_slope_ms: n/a\n",
    }
    out
}
