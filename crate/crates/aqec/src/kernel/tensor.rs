//! Index plumbing for little-endian qubit registers: bit `j` of a basis index
//! belongs to the `j`-th entry of the sorted site list.

use crate::error::{invalid, Result};
use crate::linalg::{zeros, CMat, C64, ZERO};

/// Positions of `sub` inside the sorted label list `all`.
pub fn positions(all: &[usize], sub: &[usize]) -> Result<Vec<usize>> {
    sub.iter()
        .map(|s| match all.binary_search(s) {
            Ok(p) => Ok(p),
            Err(_) => invalid(format!("site {s} is not among the labels {all:?}")),
        })
        .collect()
}

pub fn complement_positions(m: usize, pos: &[usize]) -> Vec<usize> {
    (0..m).filter(|p| !pos.contains(p)).collect()
}

/// `table[v]` scatters the bits of `v` onto the bit positions `pos`.
pub fn deposit_table(pos: &[usize]) -> Vec<usize> {
    let len = 1usize << pos.len();
    let mut table = vec![0usize; len];
    for (v, slot) in table.iter_mut().enumerate() {
        let mut out = 0usize;
        for (b, &p) in pos.iter().enumerate() {
            if v >> b & 1 == 1 {
                out |= 1 << p;
            }
        }
        *slot = out;
    }
    table
}

/// Gathers the bits at `pos` from `index` into a compact value.
pub fn extract(index: usize, pos: &[usize]) -> usize {
    pos.iter()
        .enumerate()
        .fold(0, |acc, (b, &p)| acc | ((index >> p & 1) << b))
}

/// Reshapes a vector on `m` qubits into a matrix whose rows are indexed by the
/// qubits at `rows` and columns by the remaining qubits (both ascending).
pub fn split_vector(psi: &[C64], m: usize, rows: &[usize]) -> CMat {
    let cols = complement_positions(m, rows);
    let dr = deposit_table(rows);
    let dc = deposit_table(&cols);
    CMat::from_fn(dr.len(), dc.len(), |a, b| psi[dr[a] | dc[b]])
}

pub fn merge_matrix(mat: &CMat, m: usize, rows: &[usize]) -> Vec<C64> {
    let cols = complement_positions(m, rows);
    let dr = deposit_table(rows);
    let dc = deposit_table(&cols);
    let mut out = vec![ZERO; 1 << m];
    for b in 0..dc.len() {
        for a in 0..dr.len() {
            out[dr[a] | dc[b]] = mat[(a, b)];
        }
    }
    out
}

/// Applies `op` (acting on the qubits at `pos`, in that order) to a vector on `m` qubits.
pub fn apply_local(psi: &[C64], m: usize, pos: &[usize], op: &CMat) -> Vec<C64> {
    let rest = complement_positions(m, pos);
    let dp = deposit_table(pos);
    let dr = deposit_table(&rest);
    let d = dp.len();
    let mut out = vec![ZERO; psi.len()];
    let mut buf = vec![ZERO; d];
    for &base in &dr {
        for (a, slot) in buf.iter_mut().enumerate() {
            *slot = psi[base | dp[a]];
        }
        for a in 0..d {
            let mut s = ZERO;
            for b in 0..d {
                s += op[(a, b)] * buf[b];
            }
            out[base | dp[a]] = s;
        }
    }
    out
}

/// Partial trace of a matrix on `m` qubits keeping the qubits at `keep`.
pub fn partial_trace_positions(rho: &CMat, m: usize, keep: &[usize]) -> CMat {
    let rest = complement_positions(m, keep);
    let dk = deposit_table(keep);
    let dr = deposit_table(&rest);
    let d = dk.len();
    let mut out = zeros(d, d);
    for &r in &dr {
        for b in 0..d {
            for a in 0..d {
                out[(a, b)] += rho[(dk[a] | r, dk[b] | r)];
            }
        }
    }
    out
}

/// Permutes a matrix on `m` qubits so that qubit `perm[j]` of the input becomes qubit `j`.
pub fn permute_qubits(a: &CMat, perm: &[usize]) -> CMat {
    let d = a.nrows();
    let map: Vec<usize> = (0..d)
        .map(|i| {
            let mut out = 0;
            for (j, &p) in perm.iter().enumerate() {
                out |= (i >> j & 1) << p;
            }
            out
        })
        .collect();
    CMat::from_fn(d, d, |i, j| a[(map[i], map[j])])
}

/// Tensor product of two operators on disjoint sorted label sets; returns the
/// operator on the merged sorted labels.
pub fn tensor_by_labels(a: &CMat, la: &[usize], b: &CMat, lb: &[usize]) -> Result<(CMat, Vec<usize>)> {
    if la.iter().any(|s| lb.contains(s)) {
        return invalid("tensor factors share labels");
    }
    let mut merged: Vec<usize> = la.iter().chain(lb).copied().collect();
    merged.sort_unstable();
    let pa = positions(&merged, la)?;
    let pb = positions(&merged, lb)?;
    let da = deposit_table(&pa);
    let db = deposit_table(&pb);
    let d = da.len() * db.len();
    let mut out = zeros(d, d);
    for i1 in 0..da.len() {
        for j1 in 0..da.len() {
            let x = a[(i1, j1)];
            if x == ZERO {
                continue;
            }
            for i2 in 0..db.len() {
                for j2 in 0..db.len() {
                    out[(da[i1] | db[i2], da[j1] | db[j2])] = x * b[(i2, j2)];
                }
            }
        }
    }
    Ok((out, merged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, kron, max_abs_diff};

    #[test]
    fn split_and_merge_round_trip() {
        let psi: Vec<C64> = (0..16).map(|i| c(i as f64, -(i as f64) / 3.0)).collect();
        let m = split_vector(&psi, 4, &[1, 3]);
        assert_eq!((m.nrows(), m.ncols()), (4, 4));
        assert_eq!(merge_matrix(&m, 4, &[1, 3]), psi);
        // row index bit 0 <-> qubit 1, column bit 0 <-> qubit 0
        assert_eq!(m[(1, 0)], psi[2]);
        assert_eq!(m[(0, 1)], psi[1]);
    }

    #[test]
    fn tensor_by_labels_matches_kron_on_contiguous_labels() {
        let a = CMat::from_fn(2, 2, |i, j| c((i + 2 * j) as f64, 1.0));
        let b = CMat::from_fn(4, 4, |i, j| c((i * j) as f64, (i + j) as f64));
        let (t, labels) = tensor_by_labels(&a, &[0], &b, &[1, 2]).unwrap();
        assert_eq!(labels, vec![0, 1, 2]);
        // little endian: label 0 is the fast index, so the kron has b as major factor
        assert!(max_abs_diff(&t, &kron(&b, &a)) < 1e-14);
    }

    #[test]
    fn apply_local_matches_embedded_operator() {
        let op = CMat::from_fn(2, 2, |i, j| c((1 + i + j) as f64, (i as f64) - (j as f64)));
        let psi: Vec<C64> = (0..8).map(|i| c(1.0 + i as f64, 0.5)).collect();
        let out = apply_local(&psi, 3, &[1], &op);
        let full = kron(&kron(&crate::linalg::identity(2), &op), &crate::linalg::identity(2));
        for i in 0..8 {
            let mut s = ZERO;
            for j in 0..8 {
                s += full[(i, j)] * psi[j];
            }
            assert!((s - out[i]).norm() < 1e-12);
        }
    }
}
