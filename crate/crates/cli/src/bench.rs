//! Benchmark harness: run every (problem, solver, repeat) cell over a
//! directory of .dat-s files and emit one CSV row per cell. Cells may run on
//! worker threads (capped by `CONEKIT_THREADS`, default 1); the CSV is
//! assembled in deterministic order regardless of the thread count.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::sdpa::parse_sdpa;
use crate::solvers::{run_solver, SolveOptions, SolverKind};
use conekit::ConicProblem;

pub struct BenchSpec {
    pub suite_dir: PathBuf,
    pub solvers: Vec<SolverKind>,
    pub repeat: usize,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub theta: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub problem: String,
    pub solver: &'static str,
    pub repeat: usize,
    pub status: String,
    pub objective: f64,
    pub iterations: usize,
    pub inner_iterations: usize,
    pub wall_time_s: f64,
}

pub fn thread_cap() -> usize {
    std::env::var("CONEKIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Load every `.dat-s` file in the directory, sorted by file name.
pub fn load_suite(dir: &Path) -> std::io::Result<Vec<(String, ConicProblem)>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|e| e == "dat-s").unwrap_or(false))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let text = std::fs::read_to_string(&path)?;
        let problem = parse_sdpa(&text).map_err(|e| {
            std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{}: {e}", path.display()))
        })?;
        out.push((name, problem));
    }
    Ok(out)
}

pub fn run_bench(spec: &BenchSpec) -> std::io::Result<Vec<BenchRow>> {
    let suite = load_suite(&spec.suite_dir)?;
    if suite.is_empty() {
        return Err(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("no .dat-s files in {}", spec.suite_dir.display()),
        ));
    }

    // cells in deterministic order
    let mut cells = Vec::new();
    for (pi, _) in suite.iter().enumerate() {
        for solver in &spec.solvers {
            for rep in 0..spec.repeat.max(1) {
                cells.push((pi, *solver, rep));
            }
        }
    }

    let threads = thread_cap().min(cells.len().max(1));
    let mut rows: Vec<Option<BenchRow>> = vec![None; cells.len()];
    let next = AtomicUsize::new(0);
    let rows_ref = std::sync::Mutex::new(&mut rows);

    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::SeqCst);
                if idx >= cells.len() {
                    break;
                }
                let (pi, solver, rep) = cells[idx];
                let (name, problem) = &suite[pi];
                let opts = SolveOptions {
                    solver,
                    tol: spec.tol,
                    max_iter: spec.max_iter,
                    theta: if solver == SolverKind::LrIpm {
                        Some(spec.theta.unwrap_or_else(|| default_theta(problem)))
                    } else {
                        None
                    },
                };
                let row = match run_solver(problem, &opts) {
                    Ok((_, report)) => BenchRow {
                        problem: name.clone(),
                        solver: solver.as_str(),
                        repeat: rep,
                        status: report.status.as_str().to_string(),
                        objective: report.primal_obj,
                        iterations: report.newton_iters,
                        inner_iterations: report.inner_iters,
                        wall_time_s: report.wall_time,
                    },
                    Err(e) => BenchRow {
                        problem: name.clone(),
                        solver: solver.as_str(),
                        repeat: rep,
                        status: format!("error: {e}"),
                        objective: f64::NAN,
                        iterations: 0,
                        inner_iterations: 0,
                        wall_time_s: 0.0,
                    },
                };
                rows_ref.lock().unwrap()[idx] = Some(row);
            });
        }
    });

    Ok(rows.into_iter().map(|r| r.expect("all cells completed")).collect())
}

/// Default low-rank bound when the caller gives none: a third of the total
/// dimension, at least one.
pub fn default_theta(p: &ConicProblem) -> usize {
    (p.total_dim() / 3).max(1).min(p.total_dim().saturating_sub(1)).max(1)
}

/// RFC 4180 CSV: header row, fields quoted when needed, quotes doubled.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "problem,solver,repeat,status,objective,iterations,inner_iterations,wall_time_s\r\n",
    );
    for r in rows {
        let fields = [
            csv_field(&r.problem),
            csv_field(r.solver),
            r.repeat.to_string(),
            csv_field(&r.status),
            format!("{:.17e}", r.objective),
            r.iterations.to_string(),
            r.inner_iterations.to_string(),
            format!("{:.6}", r.wall_time_s),
        ];
        out.push_str(&fields.join(","));
        out.push_str("\r\n");
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') || s.contains('\r') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
