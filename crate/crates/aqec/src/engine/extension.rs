//! Unitary dilation of a contraction.

use crate::error::{invalid, Result};
use crate::linalg::{adjoint, identity, op_norm, psd_sqrt, sub, zeros, CMat};

/// `[[M, √(I − M M†)], [√(I − M† M), −M†]]`, unitary whenever `‖M‖ ≤ 1`.
pub fn unitary_extension(m: &CMat) -> Result<CMat> {
    let (r, c) = (m.nrows(), m.ncols());
    if r == 0 || c == 0 {
        return invalid("empty matrix");
    }
    let norm = op_norm(m)?;
    if norm > 1.0 + 1e-10 {
        return invalid(format!("operator norm {norm} exceeds 1"));
    }
    let md = adjoint(m);
    let top_right = psd_sqrt(&sub(&identity(r), &(m * &md)))?;
    let bottom_left = psd_sqrt(&sub(&identity(c), &(&md * m)))?;
    let d = r + c;
    let mut u = zeros(d, d);
    for i in 0..r {
        for j in 0..c {
            u[(i, j)] = m[(i, j)];
            u[(r + j, c + i)] = -md[(j, i)];
        }
        for j in 0..r {
            u[(i, c + j)] = top_right[(i, j)];
        }
    }
    for i in 0..c {
        for j in 0..c {
            u[(r + i, j)] = bottom_left[(i, j)];
        }
    }
    Ok(u)
}
