//! Distance of `ρ^{ACR}` from product form, for code states parametrised by `τ`.
//!
//! With `σ_AB`'s support basis `U1` and `ω_i = U1† Ω_i`, the state is
//! `Σ_s |u_s⟩_{AB} |χ_s⟩_{CR}` with Gram matrix `N = Σ τ_il ω_i ω_l†`. By Uhlmann,
//! `F(ρ^{ACR}, S² ⊗ ρ^{CR}) = ‖𝒰 (S̄ ⊗ N)‖₁` where `𝒰[b, (a, s)] = U1[(a, b), s]`;
//! only the triangular factor of `𝒰` matters.

use super::blocks::{code_blocks, disjoint_union, erased_slices, SUPPORT_CUTOFF};
use crate::codes::CodeSpace;
use crate::error::{invalid, Result};
use crate::geometry::Region;
use crate::kernel::spectrum_entropy;
use crate::linalg::{
    adjoint, eigvalsh, hcat, psd_sqrt, qr_r, scale_re, singular_values, support_svd, trace_norm_herm, zeros, CMat, C64,
};

#[derive(Clone, Debug)]
pub struct DecouplingModel {
    k: usize,
    d_a: usize,
    r1: usize,
    /// `ω_i ω_l†`, index `i + K l`.
    xc: Vec<CMat>,
    /// `A_i A_l†` on A, index `i + K l`.
    aa: Vec<CMat>,
    /// Column blocks `R^{(a)}` of the triangular factor, one per basis value of A.
    r_blocks: Vec<CMat>,
    /// A is empty.
    trivial: bool,
}

fn combine(mats: &[CMat], tau: &CMat) -> CMat {
    let k = tau.nrows();
    let (r, c) = (mats[0].nrows(), mats[0].ncols());
    let mut out = zeros(r, c);
    for l in 0..k {
        for i in 0..k {
            let t = tau[(i, l)];
            if t == C64::new(0.0, 0.0) {
                continue;
            }
            let m = &mats[i + k * l];
            for cc in 0..c {
                for rr in 0..r {
                    out[(rr, cc)] += t * m[(rr, cc)];
                }
            }
        }
    }
    out
}

impl DecouplingModel {
    /// `A` and `C` disjoint; `B` is everything else.
    pub fn new(space: &CodeSpace, a: &Region, c: &Region) -> Result<Self> {
        a.check_universe(space.layout())?;
        c.check_universe(space.layout())?;
        if !a.is_disjoint(c) {
            return invalid("A and C must be disjoint");
        }
        let k = space.code_dim();
        let d_a = 1usize << a.len();
        if a.is_empty() {
            return Ok(DecouplingModel { k, d_a, r1: 0, xc: vec![], aa: vec![], r_blocks: vec![], trivial: true });
        }
        let lay = space.layout();
        let ac = a.union(c)?;
        let b = ac.complement(lay)?;
        let ab = disjoint_union(a.sites(), b.sites())?;
        let blocks = code_blocks(space, &ab);
        let (u1, _) = support_svd(&scale_re(&hcat(&blocks), 1.0 / (k as f64).sqrt()), SUPPORT_CUTOFF)?;
        let r1 = u1.ncols();
        let u1a = adjoint(&u1);
        let small: Vec<CMat> = blocks.iter().map(|om| &u1a * om).collect();
        let mut xc = Vec::with_capacity(k * k);
        for l in 0..k {
            for i in 0..k {
                xc.push(&small[i] * adjoint(&small[l]));
            }
        }
        // 𝒰 with columns a * r1 + s
        let u1_slices = erased_slices(&u1, &ab, a.sites(), b.sites())?;
        let d_b = 1usize << b.len();
        let big_u = CMat::from_fn(d_b, d_a * r1, |bb, col| u1_slices[col / r1][(bb, col % r1)]);
        let r = qr_r(&big_u);
        let r_blocks = (0..d_a).map(|x| CMat::from_fn(r.nrows(), r1, |i, s| r[(i, x * r1 + s)])).collect();
        let a_blocks = code_blocks(space, a.sites());
        let mut aa = Vec::with_capacity(k * k);
        for l in 0..k {
            for i in 0..k {
                aa.push(&a_blocks[i] * adjoint(&a_blocks[l]));
            }
        }
        Ok(DecouplingModel { k, d_a, r1, xc, aa, r_blocks, trivial: false })
    }

    pub fn code_dim(&self) -> usize {
        self.k
    }

    pub fn a_dim(&self) -> usize {
        self.d_a
    }

    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// Rank of `σ_AB`; the model's matrices are `d_A r1` wide.
    pub fn support_rank(&self) -> usize {
        self.r1
    }

    pub fn rho_a(&self, tau: &CMat) -> CMat {
        if self.trivial {
            return CMat::from_fn(1, 1, |_, _| C64::new(1.0, 0.0));
        }
        combine(&self.aa, tau)
    }

    fn gram_n(&self, tau: &CMat) -> CMat {
        combine(&self.xc, tau)
    }

    /// `F(ρ^{ACR}, S² ⊗ ρ^{CR})` for a given `S` on A.
    pub fn fidelity_with_root(&self, tau: &CMat, s: &CMat) -> Result<f64> {
        if self.trivial {
            return Ok(1.0);
        }
        let n = self.gram_n(tau);
        let t: Vec<CMat> = self.r_blocks.iter().map(|r| r * &n).collect();
        let rows = t[0].nrows();
        let r1 = self.r1;
        let mut m = zeros(rows, self.d_a * r1);
        for ap in 0..self.d_a {
            for a in 0..self.d_a {
                let w = s[(a, ap)].conj();
                if w == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..r1 {
                    for i in 0..rows {
                        m[(i, ap * r1 + j)] += w * t[a][(i, j)];
                    }
                }
            }
        }
        let f: f64 = singular_values(&m)?.into_iter().sum();
        Ok(f.clamp(0.0, 1.0))
    }

    /// `𝔅(ρ^{ACR}, ρ^A ⊗ ρ^{CR})`.
    pub fn mu(&self, tau: &CMat) -> Result<f64> {
        if self.trivial {
            return Ok(0.0);
        }
        let s = psd_sqrt(&self.rho_a(tau))?;
        Ok((1.0 - self.fidelity_with_root(tau, &s)?).max(0.0).sqrt())
    }

    /// `𝔅(ρ^{ACR}, ω ⊗ ρ^{CR})` for a fixed state `ω` on A.
    pub fn fixed_witness(&self, tau: &CMat, omega: &CMat) -> Result<f64> {
        if self.trivial {
            return Ok(0.0);
        }
        let s = psd_sqrt(omega)?;
        Ok((1.0 - self.fidelity_with_root(tau, &s)?).max(0.0).sqrt())
    }

    /// `I(A:CR) = S(A) + S(AB) − S(B)` in nats.
    pub fn mutual_information_a_cr(&self, tau: &CMat) -> Result<f64> {
        if self.trivial {
            return Ok(0.0);
        }
        let n = self.gram_n(tau);
        let s_ab = spectrum_entropy(&eigvalsh(&n)?);
        let s_a = spectrum_entropy(&eigvalsh(&self.rho_a(tau))?);
        let t: Vec<CMat> = self.r_blocks.iter().map(|r| r * &n).collect();
        let rows = t[0].nrows();
        let mut rho_b = zeros(rows, rows);
        for (a, r) in self.r_blocks.iter().enumerate() {
            rho_b += &t[a] * adjoint(r);
        }
        let rho_b = crate::linalg::herm_part(&rho_b);
        let s_b = spectrum_entropy(&eigvalsh(&rho_b)?);
        Ok((s_a + s_ab - s_b).max(0.0))
    }

    /// `ρ^{AR}` in the order `(a, r)` with `a` fast, for coefficients `V` (`τ = V V†`).
    pub fn rho_ar(&self, v: &CMat) -> CMat {
        let k = self.k;
        let d_a = self.d_a;
        let cols = v.ncols();
        if self.trivial {
            return crate::linalg::herm_part(&(v.transpose().to_owned() * v.conjugate().to_owned()));
        }
        CMat::from_fn(d_a * cols, d_a * cols, |row, col| {
            let (a, r) = (row % d_a, row / d_a);
            let (ap, rp) = (col % d_a, col / d_a);
            let mut acc = C64::new(0.0, 0.0);
            for l in 0..k {
                for i in 0..k {
                    acc += v[(i, r)] * v[(l, rp)].conj() * self.aa[i + k * l][(a, ap)];
                }
            }
            acc
        })
    }

    /// `‖ρ^{AR} − ω ⊗ ρ^R‖₁`.
    pub fn trace_distance_ar(&self, v: &CMat, omega: &CMat) -> Result<f64> {
        let rho = self.rho_ar(v);
        let d_a = self.d_a;
        let cols = v.ncols();
        let rho_r = CMat::from_fn(cols, cols, |r, rp| (0..d_a).map(|a| rho[(a + d_a * r, a + d_a * rp)]).sum());
        let prod = CMat::from_fn(d_a * cols, d_a * cols, |row, col| {
            omega[(row % d_a, col % d_a)] * rho_r[(row / d_a, col / d_a)]
        });
        trace_norm_herm(&(rho - prod))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{zoo, LocalCircuit};
    use crate::engine::blocks::tau_of;
    use crate::geometry::{neighborhood, Region};
    use crate::kernel::random::{gaussian_matrix, seeded};
    use crate::kernel::{fidelity, mutual_information, partial_trace, tensor, PureState, StateMatrix};
    use crate::linalg::{frobenius, identity};

    fn dense_check(space: &CodeSpace, a: &Region, c: &Region, v: &CMat) {
        let model = DecouplingModel::new(space, a, c).unwrap();
        let tau = tau_of(v);
        let n = space.num_qubits();
        let m = n + space.num_logical();
        let psi = PureState::new((0..m).collect(), space.code_state(v).unwrap()).unwrap().to_density();
        let mut acr: Vec<usize> = a.sites().iter().chain(c.sites()).copied().chain(n..m).collect();
        acr.sort_unstable();
        let cr: Vec<usize> = c.sites().iter().copied().chain(n..m).collect();
        let rho_acr = partial_trace(&psi, &acr).unwrap();
        let rho_a = partial_trace(&psi, a.sites()).unwrap();
        let rho_cr = partial_trace(&psi, &cr).unwrap();
        let prod = tensor(&rho_a, &rho_cr).unwrap();
        let f = fidelity(&rho_acr, &prod).unwrap();
        let fast = model.fidelity_with_root(&tau, &psd_sqrt(&model.rho_a(&tau)).unwrap()).unwrap();
        assert!((f - fast).abs() < 1e-8, "{f} vs {fast}");
        let omega = StateMatrix::density(a.sites().to_vec(), scale_re(&identity(model.a_dim()), 1.0 / model.a_dim() as f64)).unwrap();
        let f2 = fidelity(&rho_acr, &tensor(&omega, &rho_cr).unwrap()).unwrap();
        let fast2 = 1.0 - model.fixed_witness(&tau, omega.matrix()).unwrap().powi(2);
        assert!((f2 - fast2).abs() < 1e-8);
        let mi = mutual_information(&rho_acr, a.sites(), &cr).unwrap();
        assert!((mi - model.mutual_information_a_cr(&tau).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn matches_dense_fidelity_on_a_perturbed_code() {
        let code = zoo::five_qubit();
        let lay = code.layout();
        let pert = code.perturb(&LocalCircuit::brickwork(lay, 2, 0.3, 8).unwrap()).unwrap();
        let mut rng = seeded(4);
        for (a, c) in [(vec![0], vec![3, 4]), (vec![2], vec![]), (vec![1, 2], vec![4])] {
            let a = Region::new(lay, a).unwrap();
            let c = Region::new(lay, c).unwrap();
            let g = gaussian_matrix(2, 2, &mut rng);
            dense_check(&pert, &a, &c, &scale_re(&g, 1.0 / frobenius(&g)));
        }
    }

    #[test]
    fn exact_toric_edge_decouples() {
        let code = zoo::toric_code(2, 2).unwrap();
        let lay = code.layout();
        let a = Region::new(lay, [0]).unwrap();
        let c = neighborhood(lay, &a, 1.0).unwrap().complement(lay).unwrap();
        let model = DecouplingModel::new(&code, &a, &c).unwrap();
        let tau = scale_re(&identity(4), 0.25);
        assert!(model.mu(&tau).unwrap() < 1e-6);
        let empty = DecouplingModel::new(&code, &Region::empty(lay), &c).unwrap();
        assert_eq!(empty.mu(&tau).unwrap(), 0.0);
    }
}
