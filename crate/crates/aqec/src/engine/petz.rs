//! Transpose (Petz) recovery of an erased region from its surroundings.

use super::blocks::{check_region, code_blocks, disjoint_union, erased_slices, SUPPORT_CUTOFF};
use super::channel::{Completion, KrausTerm, QuantumChannel};
use crate::codes::CodeSpace;
use crate::error::{invalid, Result};
use crate::geometry::Region;
use crate::linalg::{adjoint, hcat, scale_re, support_svd, CMat};

/// Pseudo-inverse directions below this fraction of the top eigenvalue get a warning.
pub const NEAR_SINGULAR: f64 = 1e-9;

fn scale_cols(m: &CMat, s: &[f64]) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s[j])
}

fn scale_rows(m: &CMat, s: &[f64]) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * s[i])
}

/// Transpose channel of `Tr_A` with respect to `σ = Π / Tr Π`, reading `B` and writing `AB`.
///
/// Kraus operators `σ_AB^{1/2} (|x⟩_A ⊗ σ_B^{-1/2})` with pseudo-inverses on the support;
/// inputs outside the support of `σ_B` are sent to `σ_AB`.
pub fn petz_recovery(space: &CodeSpace, a: &Region, b: &Region) -> Result<QuantumChannel> {
    check_region(space, a)?;
    check_region(space, b)?;
    if !a.is_disjoint(b) {
        return invalid("erased region and recovery input overlap");
    }
    if a.is_empty() {
        return QuantumChannel::identity(b.sites());
    }
    let out = disjoint_union(a.sites(), b.sites())?;
    let k = space.code_dim();
    let blocks = code_blocks(space, &out);
    let norm = 1.0 / (k as f64).sqrt();
    let (u1, l1) = support_svd(&scale_re(&hcat(&blocks), norm), SUPPORT_CUTOFF)?;
    let mut slices = Vec::new();
    for om in &blocks {
        slices.extend(erased_slices(om, &out, a.sites(), b.sites())?);
    }
    let (u2, l2) = support_svd(&scale_re(&hcat(&slices), norm), SUPPORT_CUTOFF)?;
    let sq1: Vec<f64> = l1.iter().map(|v| v.sqrt()).collect();
    let isq2: Vec<f64> = l2.iter().map(|v| 1.0 / v.sqrt()).collect();
    let u1_slices = erased_slices(&u1, &out, a.sites(), b.sites())?;
    let terms = u1_slices
        .iter()
        .map(|u1x| KrausTerm { core: scale_cols(&scale_rows(&(adjoint(u1x) * &u2), &sq1), &isq2), right: 0 })
        .collect();
    let d_b = 1usize << b.len();
    let completion = (u2.ncols() < d_b).then(|| Completion { f: u2.clone(), omega: scale_cols(&u1, &sq1) });
    let mut ch = QuantumChannel::factored("petz", b.sites(), &out, u1, terms, vec![u2], completion)?;
    if let (Some(top), Some(bottom)) = (l2.first(), l2.last()) {
        if bottom / top < NEAR_SINGULAR {
            ch = ch.with_warning(format!("σ_B nearly singular: eigenvalue ratio {:.3e}", bottom / top));
        }
    }
    Ok(ch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::zoo;
    use crate::linalg::{identity, max_abs_diff};

    #[test]
    fn five_qubit_petz_is_trace_preserving() {
        let code = zoo::five_qubit();
        let lay = code.layout();
        let a = Region::new(lay, [2]).unwrap();
        let b = a.complement(lay).unwrap();
        let ch = petz_recovery(&code, &a, &b).unwrap();
        assert!(ch.trace_preservation_defect().unwrap() < 1e-9);
        let unital = ch.adjoint_apply(&identity(32)).unwrap();
        assert!(max_abs_diff(&unital, &identity(16)) < 1e-9);
    }

    #[test]
    fn petz_maps_sigma_b_to_sigma_ab() {
        let code = zoo::toric_code(2, 2).unwrap();
        let lay = code.layout();
        let a = Region::new(lay, [0]).unwrap();
        let b = crate::geometry::boundary_shell(lay, &a, 1.0).unwrap();
        let ch = petz_recovery(&code, &a, &b).unwrap();
        let out: Vec<usize> = disjoint_union(a.sites(), b.sites()).unwrap();
        let pi = code.projector().unwrap();
        let keep_ab: Vec<usize> = out.clone();
        let sigma_ab = scale_re(&crate::kernel::tensor::partial_trace_positions(&pi, 8, &keep_ab), 0.25);
        let sigma_b = scale_re(&crate::kernel::tensor::partial_trace_positions(&pi, 8, b.sites()), 0.25);
        let mapped = ch.apply(&sigma_b).unwrap();
        assert!(max_abs_diff(&mapped, &sigma_ab) < 1e-10);
        assert!(ch.trace_preservation_defect().unwrap() < 1e-9);
    }
}
