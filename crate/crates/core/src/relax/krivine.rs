//! Linear-programming moment lift for univariate problems on [0, 1]: every
//! product `x^a (1−x)^b` with `a + b ≤ r` is nonnegative on the domain, and
//! expanding it in moments `y_k ~ x^k` gives one linear constraint each.

use crate::cones::{BlockStructure, BlockSymMatrix, ConicProblem};
use crate::error::{Error, Result};
use crate::relax::poly::Polynomial;

/// Build the order-`r` LP lift of `min p(x)` over `x ∈ [0,1]` (constraints
/// `x ≥ 0`, `1 − x ≥ 0`). The optimal value of the LP lower-bounds the
/// minimum of `p` on [0, 1].
///
/// The returned problem uses only size-1 blocks: the moments `y₁..y_r`
/// (their nonnegativity is the lift of `x^a ≥ 0`) followed by one slack per
/// remaining product constraint.
pub fn krivine_lp(objective: &Polynomial, r: u32) -> Result<ConicProblem> {
    if objective.nvars() != 1 {
        return Err(Error::Unsupported("the LP lift handles univariate objectives".into()));
    }
    if r < objective.degree() {
        return Err(Error::InvalidArgument(format!(
            "order {r} is below the objective degree {}",
            objective.degree()
        )));
    }
    let r = r as usize;
    let c0 = objective.coeff(&[0]);

    // moment coefficients of x^a(1−x)^b: coefficient binom(b,k)(−1)^k on y_{a+k}
    let mut products: Vec<(usize, usize)> = Vec::new(); // (a, b) with b ≥ 1
    for total in 1..=r {
        for b in 1..=total {
            let a = total - b;
            products.push((a, b));
        }
    }

    // blocks: y₁..y_r, one slack per product constraint, and (only when the
    // objective has a constant term) one auxiliary variable pinned to 1 that
    // carries the constant into the standard-form objective.
    let num_slack = products.len();
    let aux = usize::from(c0 != 0.0);
    let sizes = vec![1usize; r + num_slack + aux];
    let st = BlockStructure::new(sizes)?;

    // objective: min Σ c_k y_k (+ c₀·z)
    let mut c = BlockSymMatrix::zeros(&st);
    for k in 1..=r {
        let coef = objective.coeff(&[k as u32]);
        if coef != 0.0 {
            c.set(k - 1, 0, 0, coef);
        }
    }
    if aux == 1 {
        c.set(r + num_slack, 0, 0, c0);
    }

    let mut a_mats = Vec::with_capacity(num_slack + aux);
    let mut b_vec = Vec::with_capacity(num_slack + aux);
    for (slack_idx, &(a, b)) in products.iter().enumerate() {
        // x^a(1−x)^b = Σ_k binom(b,k)(−1)^k x^{a+k} ≥ 0
        //   → const + Σ_{j≥1} coef_j·y_j − s = 0 with s ≥ 0
        let mut constant = 0.0;
        let mut row = BlockSymMatrix::zeros(&st);
        for k in 0..=b {
            let coef = binom(b, k) * if k % 2 == 0 { 1.0 } else { -1.0 };
            let power = a + k;
            if power == 0 {
                constant += coef;
            } else {
                row.set(power - 1, 0, 0, row.get(power - 1, 0, 0) + coef);
            }
        }
        row.set(r + slack_idx, 0, 0, -1.0);
        a_mats.push(row);
        b_vec.push(-constant);
    }
    if aux == 1 {
        let mut pin = BlockSymMatrix::zeros(&st);
        pin.set(r + num_slack, 0, 0, 1.0);
        a_mats.push(pin);
        b_vec.push(1.0);
    }

    ConicProblem::new(st, c, a_mats, b_vec)
}

fn binom(n: usize, k: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
