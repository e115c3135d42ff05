//! Recovery fidelity of a channel after erasing a region, as a quadratic form in `τ`.
//!
//! For a purified code state with coefficient matrix `V` and `τ = V V†`, the entanglement
//! fidelity of recover-after-erase is `vec(τ)† G vec(τ)`. Each Kraus term `K_j` and erased
//! basis value `x` contributes one linear functional `φ_{jx}(τ) = ⟨ψ| K_j ⟨x|_A |ψ⟩`.

use super::blocks::{code_blocks, erased_slices, vec_of};
use super::channel::QuantumChannel;
use crate::codes::CodeSpace;
use crate::error::{invalid, Result};
use crate::linalg::{adjoint, frobenius, zeros, CMat, C64};

/// Functional rows are kept for the disentangling check up to this many entries.
pub const MAX_KEPT_FUNCTIONAL_ENTRIES: usize = 1 << 22;

#[derive(Clone, Debug)]
pub struct RecoveryModel {
    k: usize,
    erased: Vec<usize>,
    gram: CMat,
    functionals: Option<CMat>,
    erased_dim: usize,
    /// `Σ ‖Q Ω_i^{(x)}‖²`: weight the completion would see; ignoring it only lowers the fidelity.
    pub completion_leak: f64,
}

fn vec_cols(blocks: &[CMat]) -> CMat {
    let rows = blocks.first().map_or(0, |b| b.nrows() * b.ncols());
    CMat::from_fn(rows, blocks.len(), |r, c| {
        let b = &blocks[c];
        b[(r % b.nrows(), r / b.nrows())]
    })
}

impl RecoveryModel {
    /// Model for `channel ∘ Tr_erased`; the channel must read `output \ erased` and write `output`.
    pub fn new(channel: &QuantumChannel, space: &CodeSpace, erased: &[usize]) -> Result<Self> {
        let out = channel.output_sites().to_vec();
        let input = channel.input_sites().to_vec();
        let mut erased = erased.to_vec();
        erased.sort_unstable();
        let mut joined: Vec<usize> = erased.iter().chain(&input).copied().collect();
        joined.sort_unstable();
        if joined != out || erased.iter().any(|s| input.contains(s)) {
            return invalid("channel output must be exactly the erased region plus the channel input");
        }
        if out.iter().any(|&s| s >= space.num_qubits()) {
            return invalid("channel acts on sites outside the code");
        }
        let k = space.code_dim();
        let blocks = code_blocks(space, &out);
        let d_e = 1usize << erased.len();
        let mut slices: Vec<Vec<CMat>> = Vec::with_capacity(k);
        for om in &blocks {
            slices.push(erased_slices(om, &out, &erased, &input)?);
        }
        // B_s columns ordered (x, i) -> i + K x
        let right_stacks: Vec<CMat> = channel
            .rights()
            .iter()
            .map(|r| {
                let ra = adjoint(r);
                let mut cols = Vec::with_capacity(k * d_e);
                for x in 0..d_e {
                    for sl in &slices {
                        cols.push(&ra * &sl[x]);
                    }
                }
                vec_cols(&cols)
            })
            .collect();
        let left_proj: Vec<CMat> = blocks.iter().map(|om| adjoint(channel.left()) * om).collect();
        let kk = k * k;
        let mut gram = zeros(kk, kk);
        let rows_total = channel.terms().len() * d_e;
        let keep = rows_total * kk <= MAX_KEPT_FUNCTIONAL_ENTRIES;
        let mut functionals = if keep { Some(zeros(rows_total, kk)) } else { None };
        for (j, t) in channel.terms().iter().enumerate() {
            let ct = adjoint(&t.core);
            let a_cols: Vec<CMat> = left_proj.iter().map(|lo| &ct * lo).collect();
            let a = vec_cols(&a_cols);
            let m = adjoint(&a) * &right_stacks[t.right];
            // phi rows x, columns i + K l
            let phi = CMat::from_fn(d_e, kk, |x, c| m[(c / k, c % k + k * x)]);
            gram += adjoint(&phi) * &phi;
            if let Some(f) = functionals.as_mut() {
                for x in 0..d_e {
                    for c in 0..kk {
                        f[(j * d_e + x, c)] = phi[(x, c)];
                    }
                }
            }
        }
        let mut leak = 0.0;
        if let Some(c) = channel.completion() {
            let fa = adjoint(&c.f);
            for sl in &slices {
                for s in sl {
                    let total = frobenius(s).powi(2);
                    let covered = frobenius(&(&fa * s)).powi(2);
                    leak += (total - covered).max(0.0);
                }
            }
        }
        Ok(RecoveryModel { k, erased, gram, functionals, erased_dim: d_e, completion_leak: leak })
    }

    pub fn code_dim(&self) -> usize {
        self.k
    }

    pub fn erased(&self) -> &[usize] {
        &self.erased
    }

    pub fn gram(&self) -> &CMat {
        &self.gram
    }

    pub fn erased_dim(&self) -> usize {
        self.erased_dim
    }

    /// Rows `(term j, erased value x)` at index `j * d_A + x`, when small enough to keep.
    pub fn functionals(&self) -> Option<&CMat> {
        self.functionals.as_ref()
    }

    pub fn quadratic(&self, u: &[C64], v: &[C64]) -> C64 {
        let g = &self.gram;
        let mut acc = C64::new(0.0, 0.0);
        for c in 0..v.len() {
            if v[c] == C64::new(0.0, 0.0) {
                continue;
            }
            let mut col = C64::new(0.0, 0.0);
            for r in 0..u.len() {
                col += u[r].conj() * g[(r, c)];
            }
            acc += col * v[c];
        }
        acc
    }

    /// `⟨ψ| ℛ(Tr_A ψ) |ψ⟩` for the code state with density coefficients `τ`.
    pub fn entanglement_fidelity(&self, tau: &CMat) -> f64 {
        let v = vec_of(tau);
        self.quadratic(&v, &v).re.clamp(0.0, 1.0)
    }

    /// Bures distance `sqrt(1 − sqrt(F_e))` between the recovered and the original state.
    pub fn error(&self, tau: &CMat) -> f64 {
        (1.0 - self.entanglement_fidelity(tau).sqrt()).max(0.0).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{zoo, LocalCircuit};
    use crate::engine::blocks::tau_of;
    use crate::engine::petz::petz_recovery;
    use crate::geometry::{boundary_shell, Region};
    use crate::kernel::random::{gaussian_matrix, seeded};
    use crate::kernel::tensor::{apply_local, partial_trace_positions};
    use crate::linalg::{identity, scale_re, vdot};

    /// `⟨ψ| (ℛ ⊗ id)(Tr_A ψψ†) |ψ⟩` through dense Kraus operators; `erased ∪ input = output`.
    fn dense_fidelity(ch: &QuantumChannel, space: &CodeSpace, v: &CMat, erased: &[usize]) -> f64 {
        let psi = space.code_state(v).unwrap();
        let n = space.num_qubits();
        let m = n + space.num_logical();
        let out = ch.output_sites();
        let input = ch.input_sites();
        let kraus = ch.kraus_dense().unwrap();
        let d_e = 1usize << erased.len();
        let pe: Vec<usize> = erased.to_vec();
        let mut total = 0.0;
        // (K ⊗ I)(⟨x|_A ⊗ I)ψ, written back onto the output qubits with A reset
        for x in 0..d_e {
            let mut proj = zeros(d_e, d_e);
            proj[(0, x)] = C64::new(1.0, 0.0);
            let moved = apply_local(&psi, m, &pe, &proj);
            for k in &kraus {
                // K is d_out x d_in; embed as an operator on out sites whose input ignores A (A is |0⟩)
                let pos_in: Vec<usize> = input.iter().map(|s| out.binary_search(s).unwrap()).collect();
                let pos_e: Vec<usize> = erased.iter().map(|s| out.binary_search(s).unwrap()).collect();
                let d_out = 1usize << out.len();
                let lifted = CMat::from_fn(d_out, d_out, |r, c| {
                    let extract = |idx: usize, pos: &[usize]| pos.iter().enumerate().fold(0, |acc, (b, &p)| acc | ((idx >> p & 1) << b));
                    if extract(c, &pos_e) != 0 {
                        C64::new(0.0, 0.0)
                    } else {
                        k[(r, extract(c, &pos_in))]
                    }
                });
                let phi = apply_local(&moved, m, out, &lifted);
                total += vdot(&psi, &phi).norm_sqr();
            }
        }
        total
    }

    #[test]
    fn quadratic_form_matches_dense_kraus() {
        let code = zoo::five_qubit();
        let lay = code.layout();
        let circ = LocalCircuit::brickwork(lay, 2, 0.15, 4).unwrap();
        let pert = code.perturb(&circ).unwrap();
        let a = Region::new(lay, [1]).unwrap();
        let b = boundary_shell(lay, &a, 1.0).unwrap();
        let mut rng = seeded(2);
        for ch in [
            petz_recovery(&pert, &a, &b).unwrap(),
            QuantumChannel::fixed_garbage(a.sites(), b.sites(), &scale_re(&identity(2), 0.5)).unwrap(),
        ] {
            let model = RecoveryModel::new(&ch, &pert, a.sites()).unwrap();
            for _ in 0..3 {
                let g = gaussian_matrix(2, 2, &mut rng);
                let v = scale_re(&g, 1.0 / frobenius(&g));
                let dense = dense_fidelity(&ch, &pert, &v, a.sites());
                let fast = model.entanglement_fidelity(&tau_of(&v));
                assert!((dense - fast).abs() < 1e-9, "{} vs {}", dense, fast);
            }
        }
        let _ = partial_trace_positions;
    }

    #[test]
    fn exact_codes_recover_perfectly() {
        let code = zoo::five_qubit();
        let lay = code.layout();
        for q in 0..5 {
            let a = Region::new(lay, [q]).unwrap();
            let b = a.complement(lay).unwrap();
            let ch = petz_recovery(&code, &a, &b).unwrap();
            let model = RecoveryModel::new(&ch, &code, a.sites()).unwrap();
            let tau = scale_re(&identity(2), 0.5);
            assert!(model.error(&tau) < 1e-6);
            assert!(model.completion_leak < 1e-12, "{}", model.completion_leak);
        }
    }

    #[test]
    fn mismatched_channel_is_rejected() {
        let code = zoo::five_qubit();
        let ch = QuantumChannel::identity(&[1, 2]).unwrap();
        assert!(RecoveryModel::new(&ch, &code, &[0]).is_err());
    }
}
