//! JSON input schemas for the `relax` subcommands. Shapes are documented in
//! `docs/schemas/`; semantic violations are reported with the offending
//! field's path.

use serde::Deserialize;

use conekit::linalg::Mat;
use conekit::relax::{
    completion_sdp, graphical_lasso_solve, krivine_lp, lasserre1_sdp, qcqp_to_sdp,
    rankmin_to_sdp, state_est_sdp, Extension, PartialMatrix, Polynomial, Qcqp, StateEstProblem,
};
use conekit::ConicProblem;

#[derive(Debug)]
pub struct RelaxError(pub String);

impl std::fmt::Display for RelaxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for RelaxError {}

fn fail<T>(path: &str, msg: impl std::fmt::Display) -> Result<T, RelaxError> {
    Err(RelaxError(format!("{path}: {msg}")))
}

fn matrix(path: &str, rows: &[Vec<f64>]) -> Result<Mat, RelaxError> {
    if rows.is_empty() {
        return fail(path, "matrix must have at least one row");
    }
    let cols = rows[0].len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return fail(&format!("{path}[{i}]"), "ragged matrix rows");
        }
    }
    Ok(Mat::from_rows(rows))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QcqpInput {
    /// Quadratic forms; index 0 is the objective, the rest are `≤ 0`
    /// constraints.
    pub a: Vec<Vec<Vec<f64>>>,
    pub b: Vec<Vec<f64>>,
    pub c: Vec<f64>,
}

impl QcqpInput {
    pub fn build(&self) -> Result<ConicProblem, RelaxError> {
        let mats: Vec<Mat> = self
            .a
            .iter()
            .enumerate()
            .map(|(k, rows)| matrix(&format!("a[{k}]"), rows))
            .collect::<Result<_, _>>()?;
        let q = Qcqp::new(mats, self.b.clone(), self.c.clone())
            .map_err(|e| RelaxError(format!("qcqp: {e}")))?;
        qcqp_to_sdp(&q).map_err(|e| RelaxError(format!("qcqp: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompletionInput {
    pub diag: Vec<f64>,
    /// Known entries as `[i, j, value]` with 0-based indices.
    pub entries: Vec<(usize, usize, f64)>,
    /// "complete", "min-degree-chordal", or an explicit edge list.
    #[serde(default = "default_extension")]
    pub extension: ExtensionInput,
    #[serde(default = "default_penalty")]
    pub t: f64,
}

fn default_extension() -> ExtensionInput {
    ExtensionInput::Named("complete".into())
}

fn default_penalty() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum ExtensionInput {
    Named(String),
    Edges(Vec<(usize, usize)>),
}

impl CompletionInput {
    pub fn build(&self) -> Result<ConicProblem, RelaxError> {
        let pm = PartialMatrix::new(self.diag.clone(), self.entries.clone())
            .map_err(|e| RelaxError(format!("completion: {e}")))?;
        let ext = match &self.extension {
            ExtensionInput::Named(name) => match name.as_str() {
                "complete" => Extension::Complete,
                "min-degree-chordal" => Extension::MinDegreeChordal,
                other => return fail("extension", format!("unknown extension `{other}`")),
            },
            ExtensionInput::Edges(edges) => Extension::Edges(edges.clone()),
        };
        completion_sdp(&pm, ext, self.t)
            .map(|(p, _)| p)
            .map_err(|e| RelaxError(format!("completion: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankMinInput {
    pub n_mats: Vec<Vec<Vec<f64>>>,
    pub a: Vec<f64>,
}

impl RankMinInput {
    pub fn build(&self) -> Result<ConicProblem, RelaxError> {
        let mats: Vec<Mat> = self
            .n_mats
            .iter()
            .enumerate()
            .map(|(k, rows)| matrix(&format!("n_mats[{k}]"), rows))
            .collect::<Result<_, _>>()?;
        rankmin_to_sdp(&mats, &self.a)
            .map(|(p, _)| p)
            .map_err(|e| RelaxError(format!("rankmin: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateEstInput {
    pub m_meas: Vec<Vec<Vec<f64>>>,
    pub z: Vec<f64>,
    pub sigma: Vec<f64>,
    pub mu_pen: f64,
    pub m_obj: Vec<Vec<f64>>,
}

impl StateEstInput {
    pub fn build(&self) -> Result<ConicProblem, RelaxError> {
        let meas: Vec<Mat> = self
            .m_meas
            .iter()
            .enumerate()
            .map(|(k, rows)| matrix(&format!("m_meas[{k}]"), rows))
            .collect::<Result<_, _>>()?;
        let obj = matrix("m_obj", &self.m_obj)?;
        let se = StateEstProblem::new(meas, self.z.clone(), self.sigma.clone(), self.mu_pen, obj)
            .map_err(|e| RelaxError(format!("stateest: {e}")))?;
        state_est_sdp(&se).map_err(|e| RelaxError(format!("stateest: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlInput {
    pub sigma: Vec<Vec<f64>>,
    pub lambda: f64,
}

impl GlInput {
    pub fn solve(&self) -> Result<Vec<Vec<f64>>, RelaxError> {
        let s = matrix("sigma", &self.sigma)?;
        let out = graphical_lasso_solve(&s, self.lambda)
            .map_err(|e| RelaxError(format!("gl: {e}")))?;
        Ok((0..out.rows()).map(|i| out.row(i).to_vec()).collect())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrivineInput {
    /// Coefficients `[c₀, c₁, …]` of the univariate objective.
    pub coeffs: Vec<f64>,
    pub order: u32,
}

impl KrivineInput {
    pub fn build(&self) -> Result<ConicProblem, RelaxError> {
        if self.coeffs.is_empty() {
            return fail("coeffs", "objective needs at least one coefficient");
        }
        let terms: Vec<(Vec<u32>, f64)> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| (vec![k as u32], c))
            .collect();
        let poly = Polynomial::from_terms(1, &terms)
            .map_err(|e| RelaxError(format!("coeffs: {e}")))?;
        krivine_lp(&poly, self.order).map_err(|e| RelaxError(format!("krivine: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyInput {
    pub nvars: usize,
    /// Terms as `{ "exps": [..], "coeff": v }`.
    pub terms: Vec<PolyTerm>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub exps: Vec<u32>,
    pub coeff: f64,
}

impl PolyInput {
    fn to_poly(&self, path: &str) -> Result<Polynomial, RelaxError> {
        let terms: Vec<(Vec<u32>, f64)> =
            self.terms.iter().map(|t| (t.exps.clone(), t.coeff)).collect();
        Polynomial::from_terms(self.nvars, &terms)
            .map_err(|e| RelaxError(format!("{path}: {e}")))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lasserre1Input {
    pub f: PolyInput,
    #[serde(default)]
    pub g: Vec<PolyInput>,
}

impl Lasserre1Input {
    pub fn build(&self) -> Result<ConicProblem, RelaxError> {
        let f = self.f.to_poly("f")?;
        let g: Vec<Polynomial> = self
            .g
            .iter()
            .enumerate()
            .map(|(k, p)| p.to_poly(&format!("g[{k}]")))
            .collect::<Result<_, _>>()?;
        lasserre1_sdp(&f, &g).map_err(|e| RelaxError(format!("lasserre1: {e}")))
    }
}
