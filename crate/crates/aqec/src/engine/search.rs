//! Budgeted worst-case search over purified code states.
//!
//! States are parametrised by `V ∈ C^{K×K}` with `τ = V V† / ‖V‖²`. Each restart climbs a
//! finite-difference gradient with a backtracking step; the best value over all restarts
//! (and any extra probe points) is reported. Restart `r` always uses the same seed, so
//! raising any budget field can only raise the result.

use serde::{Deserialize, Serialize};

use super::blocks::tau_of;
use crate::error::Result;
use crate::kernel::random::{gaussian_matrix, seeded};
use crate::linalg::{frobenius, identity, scale_re, CMat, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { restarts: 16, max_iterations: 500, tolerance: 1e-7, seed: 0x00ae_c5ee_d000 }
    }
}

impl SearchBudget {
    pub fn quick(seed: u64) -> Self {
        SearchBudget { restarts: 2, max_iterations: 4, tolerance: 1e-7, seed }
    }

    pub fn restart_seed(&self, r: usize) -> u64 {
        self.seed ^ (r as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }
}

/// Matrix payload for JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl MatrixJson {
    pub fn from_mat(m: &CMat) -> Self {
        let mut re = Vec::with_capacity(m.nrows() * m.ncols());
        let mut im = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                re.push(m[(i, j)].re);
                im.push(m[(i, j)].im);
            }
        }
        MatrixJson { rows: m.nrows(), cols: m.ncols(), re, im }
    }

    pub fn to_mat(&self) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| C64::new(self.re[i * self.cols + j], self.im[i * self.cols + j]))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchDiagnostics {
    pub restarts: usize,
    pub iterations: usize,
    pub evaluations: usize,
    pub seeds: Vec<u64>,
    pub restart_values: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub value: f64,
    /// Coefficient matrix `V` of the best state found.
    pub witness: CMat,
    pub diagnostics: SearchDiagnostics,
}

impl SearchResult {
    pub fn witness_tau(&self) -> CMat {
        tau_of(&self.witness)
    }
}

fn normalized(v: &CMat) -> CMat {
    scale_re(v, 1.0 / frobenius(v))
}

/// Maximises `f(τ)` over code states.
pub fn maximize(
    k: usize,
    budget: &SearchBudget,
    probes: &[CMat],
    mut f: impl FnMut(&CMat) -> Result<f64>,
) -> Result<SearchResult> {
    let mut evals = 0usize;
    let mut eval = |v: &CMat, evals: &mut usize| -> Result<f64> {
        *evals += 1;
        f(&tau_of(v))
    };
    let start = normalized(&identity(k));
    let mut best_v = start.clone();
    let mut best = f64::NEG_INFINITY;
    let mut iterations = 0usize;
    let mut seeds = Vec::new();
    let mut restart_values = Vec::new();
    for p in probes {
        if p.nrows() != k || frobenius(p) == 0.0 {
            continue;
        }
        let v = normalized(p);
        let val = eval(&v, &mut evals)?;
        if val > best {
            best = val;
            best_v = v;
        }
    }
    let h = 1e-6;
    for r in 0..budget.restarts.max(1) {
        let seed = budget.restart_seed(r);
        seeds.push(seed);
        let mut v = if r == 0 { start.clone() } else { normalized(&gaussian_matrix(k, k, &mut seeded(seed))) };
        let mut cur = eval(&v, &mut evals)?;
        let mut step = 0.2;
        for _ in 0..budget.max_iterations {
            iterations += 1;
            let mut grad = CMat::zeros(k, k);
            for j in 0..k {
                for i in 0..k {
                    for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                        let mut w = v.clone();
                        w[(i, j)] += dir * h;
                        let d = (eval(&normalized(&w), &mut evals)? - cur) / h;
                        grad[(i, j)] += dir * d;
                    }
                }
            }
            let gn = frobenius(&grad);
            if gn < 1e-12 {
                break;
            }
            let mut improved = false;
            let mut s = step;
            for _ in 0..8 {
                let trial = normalized(&(&v + scale_re(&grad, s / gn)));
                let val = eval(&trial, &mut evals)?;
                if val > cur {
                    let gain = val - cur;
                    v = trial;
                    cur = val;
                    step = (s * 1.5).min(1.0);
                    improved = gain > budget.tolerance;
                    break;
                }
                s *= 0.5;
            }
            if !improved {
                break;
            }
        }
        restart_values.push(cur);
        if cur > best {
            best = cur;
            best_v = v;
        }
    }
    Ok(SearchResult {
        value: best,
        witness: best_v,
        diagnostics: SearchDiagnostics {
            restarts: budget.restarts.max(1),
            iterations,
            evaluations: evals,
            seeds,
            restart_values,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace;

    #[test]
    fn finds_the_top_eigenvalue_of_a_linear_objective() {
        // f(τ) = Tr(H τ) is maximised at the top eigenvector of H
        let h = CMat::from_fn(3, 3, |i, j| if i == j { C64::new([0.1, 0.7, 0.3][i], 0.0) } else { C64::new(0.05, 0.0) });
        let top = crate::linalg::eigvalsh(&h).unwrap()[2];
        let res = maximize(3, &SearchBudget { restarts: 3, max_iterations: 200, tolerance: 1e-12, seed: 1 }, &[], |t| {
            Ok(trace(&(&h * t)).re)
        })
        .unwrap();
        assert!((res.value - top).abs() < 1e-4, "{} vs {top}", res.value);
    }

    #[test]
    fn more_budget_never_lowers_the_value() {
        let h = CMat::from_fn(2, 2, |i, j| C64::new((i + 2 * j) as f64 * 0.3, (i as f64 - j as f64) * 0.2));
        let f = |t: &CMat| Ok(trace(&(&h * t)).re.powi(2));
        let mut last = f64::NEG_INFINITY;
        for (restarts, iters) in [(1, 0), (1, 2), (2, 2), (4, 10)] {
            let b = SearchBudget { restarts, max_iterations: iters, tolerance: 1e-7, seed: 9 };
            let v = maximize(2, &b, &[], f).unwrap().value;
            assert!(v >= last - 1e-15);
            last = v;
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = CMat::from_fn(2, 3, |i, j| C64::new(i as f64, j as f64 * 0.5));
        assert_eq!(MatrixJson::from_mat(&m).to_mat(), m);
    }
}
