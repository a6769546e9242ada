//! Sparse multivariate polynomials over exponent tuples. Coefficient maps
//! are kept ordered so arithmetic is deterministic; zero coefficients are
//! never stored.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(&vec![0; nvars], c);
        p
    }

    /// The monomial `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0u32; nvars];
        exps[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(&exps, 1.0);
        p
    }

    pub fn from_terms(nvars: usize, terms: &[(Vec<u32>, f64)]) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (exps, coef) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    context: "polynomial exponent tuple",
                    expected: nvars,
                    got: exps.len(),
                });
            }
            p.add_term(exps, *coef);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: &[u32], coef: f64) {
        debug_assert_eq!(exps.len(), self.nvars);
        let entry = self.terms.entry(exps.to_vec()).or_insert(0.0);
        *entry += coef;
        if *entry == 0.0 {
            self.terms.remove(exps);
        }
    }

    pub fn coeff(&self, exps: &[u32]) -> f64 {
        self.terms.get(exps).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        if s == 0.0 {
            return Polynomial::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect();
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Polynomial::zero(self.nvars);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&exps, ca * cb);
            }
        }
        out
    }

    pub fn square(&self) -> Polynomial {
        self.mul(self)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.nvars);
        self.terms()
            .map(|(e, c)| {
                c * e.iter().zip(x).map(|(&p, &xi)| xi.powi(p as i32)).product::<f64>()
            })
            .sum()
    }
}
