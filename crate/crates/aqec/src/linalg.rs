//! Thin wrappers over faer for the dense complex kernels used everywhere else.

use faer::{Mat, Side};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub type CMat = Mat<C64>;

/// Eigenvalues at or below this are treated as zero in square roots and inverses.
pub const EIG_CLIP: f64 = 1e-12;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(r: usize, cols: usize) -> CMat {
    Mat::zeros(r, cols)
}

pub fn identity(d: usize) -> CMat {
    Mat::from_fn(d, d, |i, j| if i == j { ONE } else { ZERO })
}

pub fn from_rows(rows: &[Vec<C64>]) -> CMat {
    let r = rows.len();
    let cols = rows.first().map_or(0, |x| x.len());
    Mat::from_fn(r, cols, |i, j| rows[i][j])
}

pub fn column(v: &[C64]) -> CMat {
    Mat::from_fn(v.len(), 1, |i, _| v[i])
}

pub fn col_vec(m: &CMat, j: usize) -> Vec<C64> {
    (0..m.nrows()).map(|i| m[(i, j)]).collect()
}

pub fn adjoint(a: &CMat) -> CMat {
    a.adjoint().to_owned()
}

pub fn trace(a: &CMat) -> C64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)]).sum()
}

pub fn scale(a: &CMat, s: C64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

pub fn scale_re(a: &CMat, s: f64) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] * s)
}

pub fn add(a: &CMat, b: &CMat) -> CMat {
    a + b
}

pub fn sub(a: &CMat, b: &CMat) -> CMat {
    a - b
}

/// `a += s * b`
pub fn axpy(a: &mut CMat, s: C64, b: &CMat) {
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            a[(i, j)] += s * b[(i, j)];
        }
    }
}

pub fn herm_part(a: &CMat) -> CMat {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

pub fn frobenius(a: &CMat) -> f64 {
    a.norm_l2()
}

/// Largest |a_ij - a_ji^*|.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Frobenius inner product Tr(a† b).
pub fn inner(a: &CMat, b: &CMat) -> C64 {
    let mut s = ZERO;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            s += a[(i, j)].conj() * b[(i, j)];
        }
    }
    s
}

pub fn vdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vnorm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Standard Kronecker product, `a` is the major (slow) factor.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (br, bc) = (b.nrows(), b.ncols());
    Mat::from_fn(a.nrows() * br, a.ncols() * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Hermitian eigendecomposition, eigenvalues ascending.
pub fn eigh(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    if a.nrows() == 0 {
        return Ok((vec![], zeros(0, 0)));
    }
    let h = herm_part(a);
    let e = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigendecomposition: {e:?}")))?;
    let s = e.S().column_vector();
    let vals = (0..h.nrows()).map(|i| s[i].re).collect();
    Ok((vals, e.U().to_owned()))
}

pub fn eigvalsh(a: &CMat) -> Result<Vec<f64>> {
    if a.nrows() == 0 {
        return Ok(vec![]);
    }
    herm_part(a)
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Numerical(format!("eigenvalues: {e:?}")))
}

pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(vec![]);
    }
    a.singular_values()
        .map_err(|e| Error::Numerical(format!("singular values: {e:?}")))
}

/// Thin SVD `a = u diag(s) v†`.
pub fn svd(a: &CMat) -> Result<(CMat, Vec<f64>, CMat)> {
    let s = a
        .thin_svd()
        .map_err(|e| Error::Numerical(format!("svd: {e:?}")))?;
    let d = s.S().column_vector();
    let vals = (0..d.nrows()).map(|i| d[i].re).collect();
    Ok((s.U().to_owned(), vals, s.V().to_owned()))
}

pub fn op_norm(a: &CMat) -> Result<f64> {
    Ok(singular_values(a)?.into_iter().fold(0.0, f64::max))
}

pub fn trace_norm(a: &CMat) -> Result<f64> {
    Ok(singular_values(a)?.into_iter().sum())
}

/// Sum of |eigenvalues| of a Hermitian matrix.
pub fn trace_norm_herm(a: &CMat) -> Result<f64> {
    Ok(eigvalsh(a)?.into_iter().map(f64::abs).sum())
}

/// Upper-triangular factor of a thin QR; `‖a x‖ = ‖r x‖` for every x.
pub fn qr_r(a: &CMat) -> CMat {
    if a.nrows() == 0 || a.ncols() == 0 {
        return zeros(a.nrows().min(a.ncols()), a.ncols());
    }
    a.qr().thin_R().to_owned()
}

/// Applies `f` to the eigenvalues of a Hermitian matrix.
pub fn herm_fn(a: &CMat, f: impl Fn(f64) -> f64) -> Result<CMat> {
    let (vals, u) = eigh(a)?;
    let d = a.nrows();
    let mut scaled = u.clone();
    for (j, &v) in vals.iter().enumerate() {
        let fv = f(v);
        for i in 0..d {
            scaled[(i, j)] *= fv;
        }
    }
    Ok(&scaled * u.adjoint())
}

/// PSD square root with eigenvalues below [`EIG_CLIP`] clipped to zero.
pub fn psd_sqrt(a: &CMat) -> Result<CMat> {
    herm_fn(a, |v| if v > EIG_CLIP { v.sqrt() } else { 0.0 })
}

/// Pseudo-inverse square root on the support `λ > EIG_CLIP`.
pub fn psd_inv_sqrt(a: &CMat) -> Result<CMat> {
    herm_fn(a, |v| if v > EIG_CLIP { 1.0 / v.sqrt() } else { 0.0 })
}

/// Orthonormal eigenbasis of `F F†` restricted to eigenvalues above `cutoff`,
/// computed on whichever side of `F` is smaller. Returns `(U, λ)` with
/// `F F† ≈ U diag(λ) U†`, λ descending.
pub fn thin_support(f: &CMat, cutoff: f64) -> Result<(CMat, Vec<f64>)> {
    let (rows, cols) = (f.nrows(), f.ncols());
    if rows == 0 || cols == 0 {
        return Ok((zeros(rows, 0), vec![]));
    }
    let mut keep: Vec<(f64, Vec<C64>)> = Vec::new();
    if rows <= cols {
        let g = f * f.adjoint();
        let (vals, u) = eigh(&g)?;
        for j in (0..rows).rev() {
            if vals[j] > cutoff {
                keep.push((vals[j], col_vec(&u, j)));
            }
        }
    } else {
        let g = f.adjoint() * f;
        let (vals, v) = eigh(&g)?;
        for j in (0..cols).rev() {
            if vals[j] > cutoff {
                let vj = column(&col_vec(&v, j));
                let uj = f * &vj;
                let s = 1.0 / vals[j].sqrt();
                keep.push((vals[j], (0..rows).map(|i| uj[(i, 0)] * s).collect()));
            }
        }
    }
    let r = keep.len();
    let u = Mat::from_fn(rows, r, |i, j| keep[j].1[i]);
    let lambda = keep.iter().map(|k| k.0).collect();
    Ok((u, lambda))
}

/// Like [`thin_support`] but from an SVD of `F`, keeping `λ = s²` above `rel_cutoff · λ_max`.
/// Slower, but the small-eigenvalue directions come out accurate.
pub fn support_svd(f: &CMat, rel_cutoff: f64) -> Result<(CMat, Vec<f64>)> {
    let (rows, cols) = (f.nrows(), f.ncols());
    if rows == 0 || cols == 0 {
        return Ok((zeros(rows, 0), vec![]));
    }
    let (u, s, _) = svd(f)?;
    let top = s.iter().fold(0.0f64, |m, &v| m.max(v * v));
    let keep: Vec<usize> = (0..s.len()).filter(|&j| s[j] * s[j] > rel_cutoff * top && s[j] > 0.0).collect();
    let out = Mat::from_fn(rows, keep.len(), |i, j| u[(i, keep[j])]);
    Ok((out, keep.iter().map(|&j| s[j] * s[j]).collect()))
}

/// Horizontal concatenation.
pub fn hcat(blocks: &[CMat]) -> CMat {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let total: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, total);
    let mut off = 0;
    for b in blocks {
        for j in 0..b.ncols() {
            for i in 0..rows {
                out[(i, off + j)] = b[(i, j)];
            }
        }
        off += b.ncols();
    }
    out
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            worst = worst.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    worst
}

pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    u.nrows() == u.ncols() && max_abs_diff(&(u.adjoint() * u), &identity(u.nrows())) <= tol
}

/// exp(-i t h) for Hermitian h.
pub fn expm_herm(h: &CMat, t: f64) -> Result<CMat> {
    let (vals, u) = eigh(h)?;
    let d = h.nrows();
    let mut scaled = u.clone();
    for (j, &v) in vals.iter().enumerate() {
        let ph = C64::from_polar(1.0, -t * v);
        for i in 0..d {
            scaled[(i, j)] *= ph;
        }
    }
    Ok(&scaled * u.adjoint())
}
