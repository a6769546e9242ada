//! Shared test support: an independent eigensolver (Householder
//! tridiagonalization + implicit QL), deterministic random generators, and
//! problem builders. The QL solver deliberately shares no code with the
//! production Jacobi path so the two can serve as oracles for each other.

#![allow(dead_code)]
// index loops follow the classical statement of the algorithms
#![allow(clippy::needless_range_loop)]

use conekit::cones::{BlockStructure, BlockSymMatrix, ConicProblem};
use conekit::linalg::Mat;

/// Splitmix-style deterministic generator for test data.
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed.wrapping_mul(2685821657736338717).wrapping_add(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [-0.5, 0.5).
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (self.unit() + 0.5) * (hi - lo)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Random dense symmetric matrix with entries in [-0.5, 0.5].
pub fn random_symmetric(rng: &mut TestRng, n: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = rng.unit();
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Random positive definite matrix `B Bᵀ + ridge·I`.
pub fn random_pd(rng: &mut TestRng, n: usize, ridge: f64) -> Mat {
    let b = Mat::from_fn(n, n, |_, _| rng.unit());
    let mut g = b.mul(&b.transpose());
    for i in 0..n {
        g[(i, i)] += ridge;
    }
    g
}

/// Random block symmetric matrix.
pub fn random_block_sym(rng: &mut TestRng, st: &BlockStructure) -> BlockSymMatrix {
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

/// Random block PD matrix.
pub fn random_block_pd(rng: &mut TestRng, st: &BlockStructure, ridge: f64) -> BlockSymMatrix {
    let blocks: Vec<Mat> = st.sizes().iter().map(|&n| random_pd(rng, n, ridge)).collect();
    BlockSymMatrix::from_dense_blocks(st, &blocks).unwrap()
}

/// Random standard-form problem with strictly feasible primal and dual
/// points by construction (`b = A(X₀)`, `C = Σ y₀ᵢAᵢ + S₀`).
pub fn random_feasible_problem(
    rng: &mut TestRng,
    sizes: &[usize],
    m: usize,
) -> ConicProblem {
    let st = BlockStructure::new(sizes.to_vec()).unwrap();
    let mut a = Vec::with_capacity(m);
    for _ in 0..m {
        a.push(random_block_sym(rng, &st));
    }
    let x0 = random_block_pd(rng, &st, 1.0);
    let b: Vec<f64> = a.iter().map(|ai| conekit::inner(ai, &x0).unwrap()).collect();
    let y0: Vec<f64> = (0..m).map(|_| 0.5 * rng.unit()).collect();
    let s0 = random_block_pd(rng, &st, 1.0);
    let mut c = s0;
    for (ai, &yi) in a.iter().zip(&y0) {
        c.add_assign_scaled(yi, ai);
    }
    ConicProblem::new(st, c, a, b).unwrap()
}

/// Eigendecomposition by Householder tridiagonalization and the implicit-QL
/// iteration; ascending eigenvalues, eigenvectors as columns.
pub fn ql_eig(m: &Mat) -> (Vec<f64>, Mat) {
    let n = m.rows();
    assert_eq!(n, m.cols());
    if n == 0 {
        return (Vec::new(), Mat::zeros(0, 0));
    }
    let mut z: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];

    // Householder reduction to tridiagonal form, accumulating transforms.
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| z[i][k].abs()).sum();
            if scale == 0.0 {
                e[i] = z[i][l];
            } else {
                for k in 0..=l {
                    z[i][k] /= scale;
                    h += z[i][k] * z[i][k];
                }
                let mut f = z[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i][l] = f - g;
                f = 0.0;
                for j in 0..=l {
                    z[j][i] = z[i][j] / h;
                    let mut g2 = 0.0;
                    for k in 0..=j {
                        g2 += z[j][k] * z[i][k];
                    }
                    for k in j + 1..=l {
                        g2 += z[k][j] * z[i][k];
                    }
                    e[j] = g2 / h;
                    f += e[j] * z[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let fj = z[i][j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        z[j][k] -= fj * e[k] + gj * z[i][k];
                    }
                }
            }
        } else {
            e[i] = z[i][l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[i][k] * z[k][j];
                }
                for k in 0..i {
                    z[k][j] -= g * z[k][i];
                }
            }
        }
        d[i] = z[i][i];
        z[i][i] = 1.0;
        for j in 0..i {
            z[j][i] = 0.0;
            z[i][j] = 0.0;
        }
    }

    // Implicit QL sweeps on the tridiagonal matrix.
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            iter += 1;
            assert!(iter <= 64, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0;
            let mut broke_early = false;
            let mut i = mm;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    broke_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k][i + 1];
                    z[k][i + 1] = s * z[k][i] + c * f;
                    z[k][i] = c * z[k][i] - s * f;
                }
            }
            if broke_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }

    // ascending sort with matching eigenvector columns
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors = Mat::from_fn(n, n, |i, j| z[i][order[j]]);
    (values, vectors)
}

/// PSD projection computed through the QL oracle.
pub fn ql_psd_project(m: &Mat) -> Mat {
    let (vals, vecs) = ql_eig(m);
    let n = m.rows();
    let mut out = Mat::zeros(n, n);
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] += lam * vecs[(i, k)] * vecs[(j, k)];
            }
        }
    }
    out
}
