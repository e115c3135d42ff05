//! Reshapes of code basis vectors shared by the recovery and decoupling models.

use crate::codes::CodeSpace;
use crate::error::{invalid, Result};
use crate::geometry::Region;
use crate::kernel::tensor::{deposit_table, positions, split_vector};
use crate::linalg::{CMat, C64};

/// Relative eigenvalue cutoff for reduced-state supports.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// `Ω_i`: code basis vector `i` reshaped with the `rows` qubits as row index.
pub fn code_blocks(space: &CodeSpace, rows: &[usize]) -> Vec<CMat> {
    let n = space.num_qubits();
    (0..space.code_dim()).map(|i| split_vector(&space.basis_vector(i), n, rows)).collect()
}

/// `(⟨x|_erased ⊗ I) Ω` for every basis value `x` of the erased qubits, where `Ω` has
/// rows indexed by the sorted sites `out` and `kept = out \ erased`.
pub fn erased_slices(omega: &CMat, out: &[usize], erased: &[usize], kept: &[usize]) -> Result<Vec<CMat>> {
    let pe = positions(out, erased)?;
    let pk = positions(out, kept)?;
    let de = deposit_table(&pe);
    let dk = deposit_table(&pk);
    Ok(de.iter().map(|&x| CMat::from_fn(dk.len(), omega.ncols(), |b, c| omega[(x | dk[b], c)])).collect())
}

/// Sorted union of disjoint site lists.
pub fn disjoint_union(a: &[usize], b: &[usize]) -> Result<Vec<usize>> {
    if a.iter().any(|s| b.contains(s)) {
        return invalid("regions overlap");
    }
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    Ok(v)
}

pub fn check_region(space: &CodeSpace, r: &Region) -> Result<()> {
    r.check_universe(space.layout())
}

/// `τ = V V† / ‖V‖²`.
pub fn tau_of(v: &CMat) -> CMat {
    let t = v * v.adjoint();
    let tr: f64 = (0..t.nrows()).map(|i| t[(i, i)].re).sum();
    CMat::from_fn(t.nrows(), t.ncols(), |i, j| t[(i, j)] / C64::new(tr, 0.0))
}

/// Column-major `vec(τ)`: entry `i + K l` is `τ[i, l]`.
pub fn vec_of(tau: &CMat) -> Vec<C64> {
    let k = tau.nrows();
    (0..k * k).map(|c| tau[(c % k, c / k)]).collect()
}
