//! `conekit` command line: solve SDPA files, build relaxations from JSON
//! problem descriptions, and benchmark solver back-ends.
//!
//! Exit codes for `solve`: 0 optimal, 2 iteration cap, 3 lost interiority or
//! degenerate data, 1 for I/O, parse, and usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use conekit_cli::bench::{run_bench, to_csv, BenchSpec};
use conekit_cli::gen::regression_suite;
use conekit_cli::relax_io::*;
use conekit_cli::runrecord::{config_hash, RunRecord};
use conekit_cli::sdpa::{parse_sdpa, write_sdpa};
use conekit_cli::solvers::{config_parts, run_solver, SolveOptions, SolverKind};

const USAGE: &str = "usage:
  conekit solve --input <file.dat-s> --solver <ipm|admm|lr-ipm> [--theta <int>]
                [--tol <real>] [--max-iter <int>] [--json-out <path>] [--seed <int>]
  conekit relax <qcqp|completion|rankmin|stateest|gl|krivine|lasserre1>
                --input <problem.json> --output <out.dat-s|out.json>
  conekit bench --suite <dir> --solvers <list> [--repeat <int>] [--csv-out <path>]
                [--tol <real>] [--max-iter <int>] [--theta <int>] [--seed <int>]
  conekit gen   --out <dir> [--seed <int>]
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

struct Flags {
    named: std::collections::BTreeMap<String, String>,
}

impl Flags {
    fn parse(args: &[String]) -> Result<Flags, String> {
        let mut named = std::collections::BTreeMap::new();
        let mut it = args.iter();
        while let Some(a) = it.next() {
            let Some(key) = a.strip_prefix("--") else {
                return Err(format!("unexpected argument `{a}`\n{USAGE}"));
            };
            let value =
                it.next().ok_or_else(|| format!("flag --{key} needs a value\n{USAGE}"))?;
            named.insert(key.to_string(), value.clone());
        }
        Ok(Flags { named })
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.named.get(key).map(|s| s.as_str())
    }

    fn require(&self, key: &str) -> Result<&str, String> {
        self.get(key).ok_or_else(|| format!("missing required flag --{key}\n{USAGE}"))
    }

    fn parse_opt<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| format!("flag --{key}: cannot parse `{v}`")),
        }
    }
}

fn dispatch(args: &[String]) -> Result<ExitCode, String> {
    let Some(cmd) = args.first() else {
        return Err(format!("no command given\n{USAGE}"));
    };
    match cmd.as_str() {
        "solve" => cmd_solve(&args[1..]),
        "relax" => cmd_relax(&args[1..]),
        "bench" => cmd_bench(&args[1..]),
        "gen" => cmd_gen(&args[1..]),
        other => Err(format!("unknown command `{other}`\n{USAGE}")),
    }
}

fn cmd_solve(args: &[String]) -> Result<ExitCode, String> {
    let flags = Flags::parse(args)?;
    let input = flags.require("input")?;
    let solver_name = flags.require("solver")?;
    let solver = SolverKind::parse(solver_name)
        .ok_or_else(|| format!("unknown solver `{solver_name}`\n{USAGE}"))?;
    let theta: Option<usize> = flags.parse_opt("theta")?;
    if solver == SolverKind::LrIpm && theta.is_none() {
        return Err(format!("--solver lr-ipm requires --theta\n{USAGE}"));
    }
    let opts = SolveOptions {
        solver,
        tol: flags.parse_opt("tol")?,
        max_iter: flags.parse_opt("max-iter")?,
        theta,
    };
    let seed: Option<u64> = flags.parse_opt("seed")?;

    let text = std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?;
    let problem = parse_sdpa(&text).map_err(|e| e.to_string())?;
    let (_, report) = run_solver(&problem, &opts).map_err(|e| e.to_string())?;

    let problem_name = PathBuf::from(input)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| input.to_string());
    let record = RunRecord::from_report(
        &problem_name,
        solver.as_str(),
        config_hash(&config_parts(&opts, seed)),
        &report,
    );

    if let Some(path) = flags.get("json-out") {
        let json = serde_json::to_string_pretty(&record)
            .map_err(|e| format!("serializing record: {e}"))?;
        std::fs::write(path, json).map_err(|e| format!("{path}: {e}"))?;
    }
    println!(
        "{}: status {} primal {:.12e} dual {:.12e} ({} iterations, {:.3}s)",
        problem_name,
        record.status,
        record.primal_obj,
        record.dual_obj,
        record.newton_iters,
        record.wall_time_s
    );
    Ok(ExitCode::from(record.exit_code() as u8))
}

fn cmd_relax(args: &[String]) -> Result<ExitCode, String> {
    let Some(kind) = args.first() else {
        return Err(format!("relax needs a subcommand\n{USAGE}"));
    };
    let flags = Flags::parse(&args[1..])?;
    let input = flags.require("input")?;
    let output = flags.require("output")?;
    let text = std::fs::read_to_string(input).map_err(|e| format!("{input}: {e}"))?;

    let write_problem = |p: conekit::ConicProblem| -> Result<(), String> {
        std::fs::write(output, write_sdpa(&p)).map_err(|e| format!("{output}: {e}"))
    };

    match kind.as_str() {
        "qcqp" => {
            let parsed: QcqpInput = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            write_problem(parsed.build().map_err(|e| e.to_string())?)?;
        }
        "completion" => {
            let parsed: CompletionInput =
                serde_json::from_str(&text).map_err(|e| e.to_string())?;
            write_problem(parsed.build().map_err(|e| e.to_string())?)?;
        }
        "rankmin" => {
            let parsed: RankMinInput = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            write_problem(parsed.build().map_err(|e| e.to_string())?)?;
        }
        "stateest" => {
            let parsed: StateEstInput =
                serde_json::from_str(&text).map_err(|e| e.to_string())?;
            write_problem(parsed.build().map_err(|e| e.to_string())?)?;
        }
        "krivine" => {
            let parsed: KrivineInput = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            write_problem(parsed.build().map_err(|e| e.to_string())?)?;
        }
        "lasserre1" => {
            let parsed: Lasserre1Input =
                serde_json::from_str(&text).map_err(|e| e.to_string())?;
            write_problem(parsed.build().map_err(|e| e.to_string())?)?;
        }
        "gl" => {
            // solved directly; the estimate matrix is emitted as JSON
            let parsed: GlInput = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let solution = parsed.solve().map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&serde_json::json!({
                "schema": "conekit/gl-solution/1",
                "s": solution,
            }))
            .map_err(|e| e.to_string())?;
            std::fs::write(output, json).map_err(|e| format!("{output}: {e}"))?;
        }
        other => return Err(format!("unknown relax subcommand `{other}`\n{USAGE}")),
    }
    println!("wrote {output}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &[String]) -> Result<ExitCode, String> {
    let flags = Flags::parse(args)?;
    let suite = flags.require("suite")?;
    let solver_list = flags.require("solvers")?;
    let mut solvers = Vec::new();
    for name in solver_list.split(',').filter(|s| !s.is_empty()) {
        solvers.push(
            SolverKind::parse(name).ok_or_else(|| format!("unknown solver `{name}`\n{USAGE}"))?,
        );
    }
    if solvers.is_empty() {
        return Err(format!("--solvers needs at least one entry\n{USAGE}"));
    }
    let spec = BenchSpec {
        suite_dir: PathBuf::from(suite),
        solvers,
        repeat: flags.parse_opt("repeat")?.unwrap_or(1),
        tol: flags.parse_opt("tol")?,
        max_iter: flags.parse_opt("max-iter")?,
        theta: flags.parse_opt("theta")?,
        seed: flags.parse_opt("seed")?,
    };
    let rows = run_bench(&spec).map_err(|e| e.to_string())?;
    let csv = to_csv(&rows);
    match flags.get("csv-out") {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| format!("{path}: {e}"))?;
            println!("wrote {} rows to {path}", rows.len());
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(args: &[String]) -> Result<ExitCode, String> {
    let flags = Flags::parse(args)?;
    let out_dir = PathBuf::from(flags.require("out")?);
    let seed: u64 = flags.parse_opt("seed")?.unwrap_or(1);
    std::fs::create_dir_all(&out_dir).map_err(|e| format!("{}: {e}", out_dir.display()))?;
    let suite = regression_suite(seed);
    for (name, problem) in &suite {
        let path = out_dir.join(format!("{name}.dat-s"));
        std::fs::write(&path, write_sdpa(problem))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    println!("wrote {} problems to {}", suite.len(), out_dir.display());
    Ok(ExitCode::SUCCESS)
}
