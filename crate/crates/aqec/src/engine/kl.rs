//! Knill–Laflamme test: `Π O Π ∝ Π` for every Pauli `O` on a region.

use serde::{Deserialize, Serialize};

use super::blocks::code_blocks;
use crate::codes::pauli::all_paulis;
use crate::codes::CodeSpace;
use crate::error::{Error, Result};
use crate::geometry::Region;
use crate::linalg::{adjoint, identity, op_norm, scale, sub, CMat, C64};

pub const MAX_KL_SITES: usize = 6;
/// Residuals below this count as exact.
pub const KL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KlReport {
    pub holds: bool,
    pub max_residual: f64,
    /// Pauli on A (as a string over the region's sites in order) with the largest residual.
    pub worst_operator: Option<String>,
}

pub fn knill_laflamme_check(space: &CodeSpace, a: &Region) -> Result<KlReport> {
    a.check_universe(space.layout())?;
    if a.len() > MAX_KL_SITES {
        return Err(Error::Capacity(format!("Knill-Laflamme enumeration limited to {MAX_KL_SITES} sites, region has {}", a.len())));
    }
    if a.is_empty() {
        return Ok(KlReport { holds: true, max_residual: 0.0, worst_operator: None });
    }
    let k = space.code_dim();
    let blocks = code_blocks(space, a.sites());
    // g[i + K l] = A_l A_i†, so ⟨w_i|O|w_l⟩ = Tr(O g)
    let mut g = Vec::with_capacity(k * k);
    for l in 0..k {
        for i in 0..k {
            g.push(&blocks[l] * adjoint(&blocks[i]));
        }
    }
    let d = 1usize << a.len();
    let mut worst = (0.0f64, None);
    for p in all_paulis(a.len()).into_iter().skip(1) {
        let om = p.to_matrix();
        let xmask = p.x_bits().ones().fold(0usize, |acc, q| acc | 1 << q);
        let t = CMat::from_fn(k, k, |i, l| {
            let gm = &g[i + k * l];
            let mut acc = C64::new(0.0, 0.0);
            for col in 0..d {
                let row = col ^ xmask;
                acc += om[(row, col)] * gm[(col, row)];
            }
            acc
        });
        let c: C64 = (0..k).map(|i| t[(i, i)]).sum::<C64>() / k as f64;
        let res = op_norm(&sub(&t, &scale(&identity(k), c)))?;
        if res > worst.0 {
            worst = (res, Some(p.to_string()));
        }
    }
    Ok(KlReport { holds: worst.0 < KL_TOL, max_residual: worst.0, worst_operator: worst.1 })
}
