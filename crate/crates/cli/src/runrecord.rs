//! Per-run JSON records and their schema versioning.

use serde::{Deserialize, Serialize};

use conekit::report::{SolveReport, SolveStatus};

pub const RUNRECORD_SCHEMA: &str = "conekit/runrecord/1";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResidualsOut {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub schema: String,
    pub problem: String,
    pub solver: String,
    pub config_hash: String,
    pub status: String,
    pub primal_obj: f64,
    pub dual_obj: f64,
    pub newton_iters: usize,
    pub inner_iters: usize,
    pub preconditioner_fallbacks: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_penalty: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub neighborhood_margin_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_residuals: Option<ResidualsOut>,
    pub residual_history_len: usize,
    pub wall_time_s: f64,
    pub timestamp_unix: u64,
    pub timestamp: String,
}

impl RunRecord {
    pub fn from_report(
        problem: &str,
        solver: &str,
        config_hash: String,
        report: &SolveReport,
    ) -> Self {
        let now = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunRecord {
            schema: RUNRECORD_SCHEMA.to_string(),
            problem: problem.to_string(),
            solver: solver.to_string(),
            config_hash,
            status: report.status.as_str().to_string(),
            primal_obj: report.primal_obj,
            dual_obj: report.dual_obj,
            newton_iters: report.newton_iters,
            inner_iters: report.inner_iters,
            preconditioner_fallbacks: report.preconditioner_fallbacks,
            final_penalty: report.final_penalty,
            neighborhood_margin_min: if report.neighborhood_margin_min.is_finite() {
                Some(report.neighborhood_margin_min)
            } else {
                None
            },
            final_residuals: report.final_residuals().map(|r| ResidualsOut {
                primal: r.primal,
                dual: r.dual,
                gap: r.gap,
            }),
            residual_history_len: report.residual_history.len(),
            wall_time_s: report.wall_time,
            timestamp_unix: now,
            timestamp: format_utc(now),
        }
    }

    pub fn exit_code(&self) -> i32 {
        status_exit_code(&self.status)
    }
}

/// Exit codes are a total function of the solve status: 0 optimal,
/// 2 iteration cap, 3 interiority/degeneracy; I/O and parse problems use 1
/// before a record exists.
pub fn status_exit_code(status: &str) -> i32 {
    match status {
        s if s == SolveStatus::Optimal.as_str() => 0,
        s if s == SolveStatus::MaxIter.as_str() => 2,
        _ => 3,
    }
}

/// FNV-1a hash of a canonical configuration string.
pub fn config_hash(parts: &[(&str, String)]) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for (k, v) in parts {
        for b in k.bytes().chain("=".bytes()).chain(v.bytes()).chain(";".bytes()) {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    format!("{h:016x}")
}

/// RFC 3339 UTC timestamp from unix seconds (civil-from-days conversion).
pub fn format_utc(unix: u64) -> String {
    let secs_of_day = unix % 86_400;
    let days = (unix / 86_400) as i64;
    let (y, m, d) = civil_from_days(days);
    format!(
        "{y:04}-{m:02}-{d:02}T{:02}:{:02}:{:02}Z",
        secs_of_day / 3600,
        (secs_of_day % 3600) / 60,
        secs_of_day % 60
    )
}

fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = if z >= 0 { z } else { z - 146_096 } / 146_097;
    let doe = (z - era * 146_097) as u64;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe as i64 + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}
