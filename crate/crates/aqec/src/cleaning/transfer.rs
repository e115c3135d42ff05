//! Carrying a recovery across a finite-depth circuit `Π ↦ U Π U†`.

use serde::{Deserialize, Serialize};

use super::REPORT_VERSION;
use crate::codes::{CodeSpace, LocalCircuit};
use crate::engine::{
    delta_ell_interval, maximize, petz_recovery, shell_and_far, tau_of, QuantumChannel, RecoveryModel, SearchBudget,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::{interior, neighborhood, Region};
use crate::kernel::tensor::{deposit_table, positions};
use crate::linalg::{adjoint, scale_re, zeros, CMat, ONE, ZERO};

/// Dense transferred channels are built on at most this many qubits.
pub const MAX_TRANSFER_QUBITS: usize = 8;
/// Slack on the transferred bound; Bures errors carry a square root of rounding noise.
pub const TRANSFER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransferReport {
    pub report_version: u32,
    pub region: Vec<usize>,
    /// `Z = A^{−r}`
    pub interior: Vec<usize>,
    pub ell: f64,
    pub r: f64,
    pub original_delta_upper: f64,
    pub transferred_error: f64,
    /// 0 when `U† X U` stays inside `A` for every `X` on `Z`; otherwise 1 and no claim.
    pub epsilon_circuit: f64,
    pub heisenberg_cone: Vec<usize>,
    pub recovery_support: Vec<usize>,
    /// `recovery_support ⊆ Z^{+(ℓ+2r)}`
    pub support_within: bool,
    pub bound: f64,
    pub holds: bool,
    pub degenerate: bool,
}

/// `𝒮(σ) = 𝒰 ∘ 𝒟 ∘ 𝒰† (I^Z/d_Z ⊗ σ)` with `𝒟 = 𝓡 ∘ Tr_A` the Petz recovery of `A` on the
/// original code, measured as a recovery of `Z` on the rotated code.
pub fn perturbation_transfer_check(
    space0: &CodeSpace,
    circuit: &LocalCircuit,
    a: &Region,
    ell: f64,
    r: f64,
    budget: &SearchBudget,
) -> Result<TransferReport> {
    let lay = space0.layout();
    let n = space0.num_qubits();
    if n > MAX_TRANSFER_QUBITS {
        return Err(Error::Capacity(format!("transferred recovery is built densely on at most {MAX_TRANSFER_QUBITS} qubits")));
    }
    if !(r >= 0.0) {
        return invalid("need r >= 0");
    }
    let z = interior(lay, a, r)?;
    let iv0 = delta_ell_interval(space0, a, ell, budget)?;
    let mut rep = TransferReport {
        report_version: REPORT_VERSION,
        region: a.sites().to_vec(),
        interior: z.sites().to_vec(),
        ell,
        r,
        original_delta_upper: iv0.delta_upper,
        transferred_error: 0.0,
        epsilon_circuit: 0.0,
        heisenberg_cone: vec![],
        recovery_support: vec![],
        support_within: true,
        bound: iv0.delta_upper,
        holds: true,
        degenerate: z.is_empty(),
    };
    if z.is_empty() {
        return Ok(rep);
    }
    let (b, _) = shell_and_far(space0, a, ell)?;
    let petz = petz_recovery(space0, a, &b)?;
    let space1 = space0.perturb(circuit)?;
    let transferred = transferred_channel(&petz, circuit, a, &z, n)?;

    let cone = circuit.heisenberg_cone(z.sites());
    let eps = if cone.iter().all(|q| a.contains(*q)) { 0.0 } else { 1.0 };
    let ab: Vec<usize> = petz.output_sites().to_vec();
    let mut support = circuit.schrodinger_cone(&ab);
    support.extend(z.sites());
    support.sort_unstable();
    support.dedup();
    let reach = neighborhood(lay, &z, ell + 2.0 * r)?;

    let k = space0.code_dim();
    let rec1 = RecoveryModel::new(&transferred, &space1, z.sites())?;
    let rec0 = RecoveryModel::new(&petz, space0, a.sites())?;
    let got = maximize(k, budget, &[iv0.upper_witness.to_mat()], |t| Ok(rec1.error(t)))?;
    // the same coefficients describe the matching state of the original code
    let original = iv0.delta_upper.max(rec0.error(&tau_of(&got.witness)));
    rep.original_delta_upper = original;
    rep.transferred_error = got.value;
    rep.epsilon_circuit = eps;
    rep.heisenberg_cone = cone;
    rep.support_within = support.iter().all(|&q| reach.contains(q));
    rep.recovery_support = support;
    rep.bound = original + 2.0 * eps;
    rep.holds = got.value <= rep.bound + TRANSFER_TOL;
    Ok(rep)
}

/// Kraus operators `U (K_j ⟨x|_A) U† (|z⟩_Z ⊗ I) / √d_Z`, reading everything but `Z`.
fn transferred_channel(
    petz: &QuantumChannel,
    circuit: &LocalCircuit,
    a: &Region,
    z: &Region,
    n: usize,
) -> Result<QuantumChannel> {
    let all: Vec<usize> = (0..n).collect();
    let out = petz.output_sites();
    let b = petz.input_sites();
    let c: Vec<usize> = all.iter().copied().filter(|s| !out.contains(s)).collect();
    let zc: Vec<usize> = all.iter().copied().filter(|s| !z.contains(*s)).collect();
    let dep_out = deposit_table(&positions(&all, out)?);
    let dep_a = deposit_table(&positions(&all, a.sites())?);
    let dep_b = deposit_table(&positions(&all, b)?);
    let dep_c = deposit_table(&positions(&all, &c)?);
    let dep_z = deposit_table(&positions(&all, z.sites())?);
    let dep_zc = deposit_table(&positions(&all, &zc)?);
    let dim = 1usize << n;
    let u = circuit.to_matrix()?;
    let ud = adjoint(&u);
    let norm = 1.0 / (dep_z.len() as f64).sqrt();
    // U† (|z⟩ ⊗ I) for every z
    let lifts: Vec<CMat> = dep_z
        .iter()
        .map(|&zb| {
            let mut j = zeros(dim, dep_zc.len());
            for (m, &rest) in dep_zc.iter().enumerate() {
                j[(zb | rest, m)] = ONE;
            }
            &ud * j
        })
        .collect();
    let mut kraus = Vec::new();
    for k in petz.kraus_dense()? {
        for &xa in &dep_a {
            let mut e = zeros(dim, dim);
            for &cc in &dep_c {
                for (bi, &bb) in dep_b.iter().enumerate() {
                    for (o, &ob) in dep_out.iter().enumerate() {
                        let v = k[(o, bi)];
                        if v != ZERO {
                            e[(ob | cc, xa | bb | cc)] = v;
                        }
                    }
                }
            }
            let ue = &u * e;
            for lift in &lifts {
                kraus.push(scale_re(&(&ue * lift), norm));
            }
        }
    }
    QuantumChannel::from_kraus("transferred-petz", &zc, &all, kraus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::zoo;

    fn quick() -> SearchBudget {
        SearchBudget { restarts: 2, max_iterations: 4, tolerance: 1e-7, seed: 11 }
    }

    #[test]
    fn identity_circuit_changes_nothing() {
        let code = zoo::five_qubit();
        let pert = code.perturb(&LocalCircuit::brickwork(code.layout(), 1, 0.1, 1).unwrap()).unwrap();
        let a = Region::new(code.layout(), [1, 2]).unwrap();
        let rep = perturbation_transfer_check(&pert, &LocalCircuit::identity(5), &a, 4.0, 0.0, &quick()).unwrap();
        assert_eq!(rep.interior, vec![1, 2]);
        assert_eq!(rep.epsilon_circuit, 0.0);
        assert!((rep.transferred_error - rep.original_delta_upper).abs() < 1e-8, "{rep:?}");
        assert!(rep.holds && rep.original_delta_upper > 0.0);
    }

    #[test]
    fn brickwork_transfer_holds() {
        let code = zoo::five_qubit();
        let a = Region::new(code.layout(), [0, 1]).unwrap();
        for eps in [0.2, 0.05] {
            let circuit = LocalCircuit::brickwork(code.layout(), 1, eps, 9).unwrap();
            let rep = perturbation_transfer_check(&code, &circuit, &a, 4.0, 1.0, &quick()).unwrap();
            assert_eq!(rep.interior, vec![0]);
            assert!(rep.holds && !rep.degenerate, "{rep:?}");
            if rep.heisenberg_cone.iter().all(|q| a.contains(*q)) {
                assert!(rep.transferred_error < 1e-6, "{rep:?}");
            }
        }
    }

    #[test]
    fn deep_interior_is_degenerate() {
        let code = zoo::five_qubit();
        let a = Region::new(code.layout(), [2]).unwrap();
        let rep = perturbation_transfer_check(&code, &LocalCircuit::identity(5), &a, 4.0, 1.0, &quick()).unwrap();
        assert!(rep.degenerate && rep.holds && rep.interior.is_empty());
    }
}
