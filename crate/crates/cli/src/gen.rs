//! Seeded problem generators for the regression and benchmark suites.
//! Every generated problem has strictly feasible primal and dual points by
//! construction, normalized data magnitudes, and a full-rank constraint
//! operator (with probability one).

use conekit::cones::{inner, BlockStructure, BlockSymMatrix, ConicProblem};
use conekit::linalg::Mat;

use crate::rng::CounterRng;

fn random_block_sym(rng: &mut CounterRng, st: &BlockStructure) -> BlockSymMatrix {
    let mut m = BlockSymMatrix::zeros(st);
    for (blk, &n) in st.sizes().iter().enumerate() {
        for i in 0..n {
            for j in 0..=i {
                m.set(blk, i, j, rng.unit());
            }
        }
    }
    m
}

fn random_block_pd(rng: &mut CounterRng, st: &BlockStructure, ridge: f64) -> BlockSymMatrix {
    let blocks: Vec<Mat> = st
        .sizes()
        .iter()
        .map(|&n| {
            let b = Mat::from_fn(n, n, |_, _| rng.unit());
            let mut g = b.mul(&b.transpose()).scale(1.0 / n as f64);
            for i in 0..n {
                g[(i, i)] += ridge;
            }
            g
        })
        .collect();
    BlockSymMatrix::from_dense_blocks(st, &blocks).expect("sizes match")
}

/// One random standard-form problem: `b = A(X₀)` with `X₀ ≻ 0` and
/// `C = Σ y₀ᵢAᵢ + S₀` with `S₀ ≻ 0`.
pub fn random_feasible_problem(
    rng: &mut CounterRng,
    sizes: &[usize],
    m: usize,
) -> ConicProblem {
    let st = BlockStructure::new(sizes.to_vec()).expect("valid sizes");
    let mut a = Vec::with_capacity(m);
    for _ in 0..m {
        a.push(random_block_sym(rng, &st));
    }
    let x0 = random_block_pd(rng, &st, 1.0);
    let b: Vec<f64> = a.iter().map(|ai| inner(ai, &x0).expect("same structure")).collect();
    let y0: Vec<f64> = (0..m).map(|_| 0.5 * rng.unit()).collect();
    let mut c = random_block_pd(rng, &st, 1.0);
    for (ai, &yi) in a.iter().zip(&y0) {
        c.add_assign_scaled(yi, ai);
    }
    ConicProblem::new(st, c, a, b).expect("constructed data is consistent")
}

/// The 25-problem regression suite: names plus problems, all within the
/// n ≤ 30, m ≤ 60 envelope, seeded through the counter generator.
pub fn regression_suite(seed: u64) -> Vec<(String, ConicProblem)> {
    let root = CounterRng::new(seed);
    let mut out = Vec::with_capacity(25);
    for idx in 0..25u64 {
        let mut rng = root.stream(idx + 1);
        let shape = idx % 5;
        let sizes: Vec<usize> = match shape {
            0 => vec![3 + rng.below(6)],                       // one moderate block
            1 => vec![3 + rng.below(4), 1, 1],                 // block plus scalars
            2 => vec![2 + rng.below(3), 2 + rng.below(3)],     // two blocks
            3 => vec![8 + rng.below(8)],                       // one larger block
            _ => vec![2 + rng.below(2), 1 + rng.below(3), 1],  // mixed small
        };
        let svec_len: usize = sizes.iter().map(|&n| n * (n + 1) / 2).sum();
        let m = (3 + rng.below(8)).min(svec_len).min(60);
        let p = random_feasible_problem(&mut rng, &sizes, m);
        out.push((format!("reg{idx:02}"), p));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_deterministic_and_well_sized() {
        let a = regression_suite(11);
        let b = regression_suite(11);
        assert_eq!(a.len(), 25);
        for ((na, pa), (nb, pb)) in a.iter().zip(&b) {
            assert_eq!(na, nb);
            assert_eq!(pa, pb);
            assert!(pa.total_dim() <= 30);
            assert!(pa.num_constraints() <= 60);
        }
        let c = regression_suite(12);
        assert_ne!(a[0].1, c[0].1, "different seeds must differ");
    }

    #[test]
    fn generated_problems_assemble() {
        for (_, p) in regression_suite(5).iter().take(6) {
            assert!(conekit::assemble_operator(p).is_ok());
        }
    }
}
