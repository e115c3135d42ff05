//! Finite-depth circuits of geometrically local gates.

use crate::error::{invalid, Error, Result};
use crate::geometry::{Layout, SiteMetric};
use crate::kernel::random::{gaussian_matrix, seeded, Rng};
use crate::kernel::tensor::apply_local;
use crate::linalg::{adjoint, col_vec, expm_herm, herm_part, identity, is_unitary, op_norm, scale_re, zeros, CMat, C64};

use super::pauli::Pauli;

/// Dense circuit unitaries are built only up to this size.
pub const MAX_DENSE_CIRCUIT_QUBITS: usize = 12;

#[derive(Clone, Debug)]
pub struct Gate {
    pub qubits: Vec<usize>,
    pub unitary: CMat,
}

impl Gate {
    pub fn new(qubits: Vec<usize>, unitary: CMat) -> Result<Self> {
        let d = 1usize << qubits.len();
        if unitary.nrows() != d || unitary.ncols() != d {
            return invalid(format!("gate on {} qubits needs a {d}x{d} matrix", qubits.len()));
        }
        if !is_unitary(&unitary, 1e-9) {
            return invalid("gate matrix is not unitary");
        }
        Ok(Gate { qubits, unitary })
    }

    /// `exp(-i eps P)` for a single-qubit Pauli letter.
    pub fn single(q: usize, letter: char, eps: f64) -> Result<Self> {
        let p = Pauli::single(1, 0, letter)?.to_matrix();
        Gate::new(vec![q], expm_herm(&p, eps)?)
    }

    /// `exp(-i eps h)` with `h` a random Hermitian of unit operator norm.
    pub fn random(qubits: Vec<usize>, eps: f64, rng: &mut Rng) -> Result<Self> {
        let d = 1usize << qubits.len();
        let h = herm_part(&gaussian_matrix(d, d, rng));
        let norm = op_norm(&h)?;
        let h = scale_re(&h, 1.0 / norm);
        Gate::new(qubits, expm_herm(&h, eps)?)
    }
}

#[derive(Clone, Debug)]
pub struct LocalCircuit {
    n: usize,
    layers: Vec<Vec<Gate>>,
}

fn displacement(layout: &Layout, a: usize, b: usize) -> Vec<f64> {
    let lat = &layout.lattice;
    let ca = layout.coords(a);
    let cb = layout.coords(b);
    let l = lat.linear_size as f64;
    (0..lat.dimension)
        .map(|ax| {
            let mut d = cb[ax] as f64 - ca[ax] as f64;
            if lat.periodic[ax] {
                if d > l / 2.0 {
                    d -= l;
                } else if d < -l / 2.0 {
                    d += l;
                }
            }
            d * lat.spacing
        })
        .collect()
}

impl LocalCircuit {
    pub fn new(n: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        for layer in &layers {
            let mut used = vec![false; n];
            for g in layer {
                for &q in &g.qubits {
                    if q >= n || used[q] {
                        return invalid(format!("qubit {q} is out of range or used twice in one layer"));
                    }
                    used[q] = true;
                }
            }
        }
        Ok(LocalCircuit { n, layers })
    }

    pub fn identity(n: usize) -> Self {
        LocalCircuit { n, layers: vec![] }
    }

    /// Brickwork of random two-qubit gates `exp(-i eps h)` on nearest-neighbour pairs.
    pub fn brickwork(layout: &Layout, depth: usize, eps: f64, seed: u64) -> Result<Self> {
        let n = layout.num_sites();
        let mut rng = seeded(seed);
        let mut layers = Vec::with_capacity(depth);
        for t in 0..depth {
            let pairs = if layout.lattice.dimension == 1 {
                let mut order: Vec<usize> = (0..n).collect();
                order.sort_by_key(|&q| layout.coords(q)[0]);
                order.windows(2).enumerate().filter(|(i, _)| i % 2 == t % 2).map(|(_, w)| (w[0], w[1])).collect()
            } else {
                Self::matching(layout, t)
            };
            let mut layer = Vec::with_capacity(pairs.len());
            for (a, b) in pairs {
                layer.push(Gate::random(vec![a, b], eps, &mut rng)?);
            }
            layers.push(layer);
        }
        Self::new(n, layers)
    }

    fn matching(layout: &Layout, t: usize) -> Vec<(usize, usize)> {
        let n = layout.num_sites();
        let dim = layout.lattice.dimension;
        let mut nearest = f64::INFINITY;
        for a in 0..n {
            for b in a + 1..n {
                nearest = nearest.min(layout.dist(a, b));
            }
        }
        let axis = t % dim;
        let sign = if (t / dim) % 2 == 0 { 1.0 } else { -1.0 };
        let mut matched = vec![false; n];
        let mut pairs = Vec::new();
        for a in 0..n {
            if matched[a] {
                continue;
            }
            let mut best: Option<(f64, usize)> = None;
            for b in 0..n {
                if b == a || matched[b] || layout.dist(a, b) > nearest * (1.0 + 1e-9) {
                    continue;
                }
                let score = sign * displacement(layout, a, b)[axis];
                if best.is_none_or(|(s, _)| score > s + 1e-12) {
                    best = Some((score, b));
                }
            }
            if let Some((_, b)) = best {
                matched[a] = true;
                matched[b] = true;
                pairs.push((a, b));
            }
        }
        pairs
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn is_identity(&self) -> bool {
        self.layers.iter().all(|l| l.is_empty())
    }

    /// Largest distance between qubits of one gate.
    pub fn gate_range(&self, layout: &Layout) -> f64 {
        self.layers
            .iter()
            .flatten()
            .flat_map(|g| g.qubits.iter().flat_map(|&a| g.qubits.iter().map(move |&b| layout.dist(a, b))))
            .fold(0.0, f64::max)
    }

    /// Qubits touched by `U† X U` for `X` supported on `sites`.
    pub fn heisenberg_cone(&self, sites: &[usize]) -> Vec<usize> {
        cone(self.layers.iter().rev(), sites)
    }

    /// Qubits touched by `U X U†` for `X` supported on `sites`.
    pub fn schrodinger_cone(&self, sites: &[usize]) -> Vec<usize> {
        cone(self.layers.iter(), sites)
    }

    pub fn apply(&self, psi: &[C64]) -> Vec<C64> {
        let mut v = psi.to_vec();
        for g in self.layers.iter().flatten() {
            v = apply_local(&v, self.n, &g.qubits, &g.unitary);
        }
        v
    }

    pub fn apply_inverse(&self, psi: &[C64]) -> Vec<C64> {
        let mut v = psi.to_vec();
        for g in self.layers.iter().rev().flat_map(|l| l.iter().rev()) {
            v = apply_local(&v, self.n, &g.qubits, &adjoint(&g.unitary));
        }
        v
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        if self.n > MAX_DENSE_CIRCUIT_QUBITS {
            return Err(Error::Capacity(format!("dense circuit unitary limited to {MAX_DENSE_CIRCUIT_QUBITS} qubits")));
        }
        let d = 1usize << self.n;
        let id = identity(d);
        let mut m = zeros(d, d);
        for j in 0..d {
            let col = self.apply(&col_vec(&id, j));
            for i in 0..d {
                m[(i, j)] = col[i];
            }
        }
        Ok(m)
    }
}

fn cone<'a>(layers: impl Iterator<Item = &'a Vec<Gate>>, sites: &[usize]) -> Vec<usize> {
    let mut set: std::collections::BTreeSet<usize> = sites.iter().copied().collect();
    for layer in layers {
        for g in layer {
            if g.qubits.iter().any(|q| set.contains(q)) {
                set.extend(g.qubits.iter().copied());
            }
        }
    }
    set.into_iter().collect()
}
