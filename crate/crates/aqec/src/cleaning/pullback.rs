//! Heisenberg-picture pull-back of logical operators through a recovery channel.

use serde::{Deserialize, Serialize};

use super::REPORT_VERSION;
use crate::codes::{CodeSpace, Pauli};
use crate::engine::{
    delta_ell_interval, maximize, petz_recovery, shell_and_far, DecouplingModel, MatrixJson, QuantumChannel,
    SearchBudget, SearchDiagnostics,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::Region;
use crate::kernel::random::seeded;
use crate::kernel::tensor::{deposit_table, extract, positions};
use crate::linalg::{adjoint, identity, max_abs_diff, op_norm, psd_sqrt, scale_re, sub, zeros, CMat, C64, ZERO};

/// Operators are pulled back densely on at most this many qubits.
pub const MAX_PULLBACK_QUBITS: usize = 10;
/// Slack on every cleaning inequality.
pub const CLEANING_TOL: f64 = 1e-8;
/// Slack on the converse (trace-norm) inequality.
pub const CONVERSE_TOL: f64 = 1e-6;

/// `I_A ⊗ (𝓡* ⊗ id_C)(U)` as an operator on all `n` qubits, where `A` is what the channel
/// writes but does not read.
pub fn pull_back_logical(channel: &QuantumChannel, u: &CMat, n: usize) -> Result<CMat> {
    if n > MAX_PULLBACK_QUBITS {
        return Err(Error::Capacity(format!("dense pull-back limited to {MAX_PULLBACK_QUBITS} qubits")));
    }
    let dim = 1usize << n;
    if u.nrows() != dim || u.ncols() != dim {
        return invalid(format!("operator must be {dim}x{dim}"));
    }
    let input = channel.input_sites();
    let output = channel.output_sites();
    if output.iter().any(|&s| s >= n) || input.iter().any(|s| !output.contains(s)) {
        return invalid("channel must write a superset of what it reads, inside the system");
    }
    let defect = channel.trace_preservation_defect()?;
    if defect > CLEANING_TOL {
        return invalid(format!("adjoint channel is not unital (defect {defect:.3e})"));
    }
    let all: Vec<usize> = (0..n).collect();
    let erased: Vec<usize> = output.iter().copied().filter(|s| !input.contains(s)).collect();
    let kept: Vec<usize> = all.iter().copied().filter(|s| !erased.contains(s)).collect();
    let spectator: Vec<usize> = all.iter().copied().filter(|s| !output.contains(s)).collect();
    let dep_out = deposit_table(&positions(&all, output)?);
    let dep_spec = deposit_table(&positions(&all, &spectator)?);
    let in_pos = positions(&kept, input)?;
    let spec_pos = positions(&kept, &spectator)?;
    let d_kept = 1usize << kept.len();

    let mut v_kept = zeros(d_kept, d_kept);
    let main: Vec<CMat> =
        channel.terms().iter().map(|t| channel.left() * &t.core * adjoint(&channel.rights()[t.right])).collect();
    for k in main {
        // K ⊗ I_C as a map from the kept qubits to all of them
        let mut wide = zeros(dim, d_kept);
        for j in 0..d_kept {
            let (b, c) = (extract(j, &in_pos), extract(j, &spec_pos));
            for o in 0..dep_out.len() {
                let x = k[(o, b)];
                if x != ZERO {
                    wide[(dep_out[o] | dep_spec[c], j)] = x;
                }
            }
        }
        v_kept += adjoint(&wide) * u * &wide;
    }
    // completion adjoint Y ↦ Tr(Ω Y) Q, with C along for the ride: Q ⊗ Tr_out[(Ω ⊗ I) U]
    if let Some(c) = channel.completion() {
        let q = sub(&identity(c.f.nrows()), &(&c.f * adjoint(&c.f)));
        let omega = &c.omega * adjoint(&c.omega);
        let m = CMat::from_fn(dep_spec.len(), dep_spec.len(), |c1, c2| {
            let mut acc = ZERO;
            for (o1, &r) in dep_out.iter().enumerate() {
                for (o2, &s) in dep_out.iter().enumerate() {
                    acc += omega[(o2, o1)] * u[(r | dep_spec[c1], s | dep_spec[c2])];
                }
            }
            acc
        });
        for j1 in 0..d_kept {
            let (b1, c1) = (extract(j1, &in_pos), extract(j1, &spec_pos));
            for j2 in 0..d_kept {
                let (b2, c2) = (extract(j2, &in_pos), extract(j2, &spec_pos));
                v_kept[(j1, j2)] += q[(b1, b2)] * m[(c1, c2)];
            }
        }
    }

    let dep_erased = deposit_table(&positions(&all, &erased)?);
    let dep_kept = deposit_table(&positions(&all, &kept)?);
    let mut v = zeros(dim, dim);
    for &e in &dep_erased {
        for j in 0..d_kept {
            for i in 0..d_kept {
                v[(e | dep_kept[i], e | dep_kept[j])] = v_kept[(i, j)];
            }
        }
    }
    let (nv, nu) = (op_norm(&v)?, op_norm(u)?);
    if nv > nu + CLEANING_TOL {
        return Err(Error::Numerical(format!("pull-back norm {nv} exceeds the original {nu}")));
    }
    Ok(v)
}

/// `‖(U−V)Π‖`, `‖Π(U−V)‖`, `‖Π(U−V)Π‖`.
pub fn cleaning_norms(u: &CMat, v: &CMat, pi: &CMat) -> Result<(f64, f64, f64)> {
    let d = sub(u, v);
    Ok((op_norm(&(&d * pi))?, op_norm(&(pi * &d))?, op_norm(&(pi * &d * pi))?))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CleaningReport {
    pub report_version: u32,
    pub region: Vec<usize>,
    pub logical: String,
    pub delta: f64,
    pub operator_norm: f64,
    /// `‖(U−V)Π‖`
    pub right_norm: f64,
    /// `‖Π(U−V)‖`
    pub left_norm: f64,
    /// `‖Π(U−V)Π‖`
    pub sandwich_norm: f64,
    /// `4√δ`
    pub sqrt_bound: f64,
    /// `2δ‖U‖`
    pub sandwich_bound: f64,
    pub right_pass: bool,
    pub left_pass: bool,
    pub sandwich_pass: bool,
    pub passed: bool,
    /// Smallest gap between a bound and its norm.
    pub slack: f64,
}

impl CleaningReport {
    fn new(region: &Region, logical: String, delta: f64, operator_norm: f64, norms: (f64, f64, f64)) -> Self {
        let (right_norm, left_norm, sandwich_norm) = norms;
        let sqrt_bound = 4.0 * delta.max(0.0).sqrt();
        let sandwich_bound = 2.0 * delta * operator_norm;
        let right_pass = right_norm <= sqrt_bound + CLEANING_TOL;
        let left_pass = left_norm <= sqrt_bound + CLEANING_TOL;
        let sandwich_pass = sandwich_norm <= sandwich_bound + CLEANING_TOL;
        let slack = (sqrt_bound - right_norm).min(sqrt_bound - left_norm).min(sandwich_bound - sandwich_norm);
        CleaningReport {
            report_version: REPORT_VERSION,
            region: region.sites().to_vec(),
            logical,
            delta,
            operator_norm,
            right_norm,
            left_norm,
            sandwich_norm,
            sqrt_bound,
            sandwich_bound,
            right_pass,
            left_pass,
            sandwich_pass,
            passed: right_pass && left_pass && sandwich_pass,
            slack,
        }
    }
}

fn chosen_logicals(space: &CodeSpace, logicals: Option<&[Pauli]>) -> Vec<Pauli> {
    match logicals {
        Some(l) => l.to_vec(),
        None => space.logical_paulis(),
    }
}

/// Pulls every logical back through the Petz recovery of `A` from its ℓ-shell and checks
/// the cleaning inequalities against that recovery's measured error.
pub fn verify_cleaning(
    space: &CodeSpace,
    a: &Region,
    ell: f64,
    logicals: Option<&[Pauli]>,
    budget: &SearchBudget,
) -> Result<Vec<CleaningReport>> {
    let iv = delta_ell_interval(space, a, ell, budget)?;
    cleaning_reports(space, a, ell, iv.delta_upper, logicals)
}

/// As [`verify_cleaning`] with the recovery error `delta` already measured.
pub fn cleaning_reports(
    space: &CodeSpace,
    a: &Region,
    ell: f64,
    delta: f64,
    logicals: Option<&[Pauli]>,
) -> Result<Vec<CleaningReport>> {
    let (b, _) = shell_and_far(space, a, ell)?;
    let channel = petz_recovery(space, a, &b)?;
    let pi = space.projector()?;
    let n = space.num_qubits();
    let mut out = Vec::new();
    for p in chosen_logicals(space, logicals) {
        let u = space.logical_matrix(&p)?;
        let v = pull_back_logical(&channel, &u, n)?;
        let norms = cleaning_norms(&u, &v, &pi)?;
        out.push(CleaningReport::new(a, p.to_string(), delta, op_norm(&u)?, norms));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConverseReport {
    pub report_version: u32,
    pub region: Vec<usize>,
    /// Worst `max(‖(U−V)Π‖, ‖(U†−V†)Π‖)` over the logicals, each `V` acting off `A`.
    pub epsilon: f64,
    pub per_logical: Vec<(String, f64)>,
    /// Largest `‖ρ^{AR} − ω^A ⊗ ρ^R‖₁` found, `ω^A = Tr_B Π / Tr Π`.
    pub sup_trace_norm: f64,
    pub bound: f64,
    pub holds: bool,
    /// `√(5ε/2)`
    pub implied_correctability: f64,
    /// `max |avg_P (P⊗I) ρ (P⊗I)† − Π/TrΠ ⊗ ρ^R|` on a seeded random code state.
    pub twirl_defect: f64,
    pub twirl_ok: bool,
    pub witness: MatrixJson,
    pub search: SearchDiagnostics,
}

fn herm_cleaning_error(u: &CMat, v: &CMat, pi: &CMat) -> Result<f64> {
    let right = op_norm(&(sub(u, v) * pi))?;
    let dagger = op_norm(&(sub(&adjoint(u), &adjoint(v)) * pi))?;
    Ok(right.max(dagger))
}

/// `ω^A` is the A-marginal of the maximally mixed code state.
pub fn code_marginal(space: &CodeSpace, a: &Region) -> Result<CMat> {
    let none = Region::empty(space.layout());
    let dec = DecouplingModel::new(space, a, &none)?;
    let k = space.code_dim();
    Ok(dec.rho_a(&scale_re(&identity(k), 1.0 / k as f64)))
}

/// Worst `‖ρ^{AR} − ω ⊗ ρ^R‖₁` found over code states.
pub fn sup_product_distance(
    space: &CodeSpace,
    a: &Region,
    omega: &CMat,
    budget: &SearchBudget,
    probes: &[CMat],
) -> Result<crate::engine::SearchResult> {
    let none = Region::empty(space.layout());
    let dec = DecouplingModel::new(space, a, &none)?;
    maximize(space.code_dim(), budget, probes, |t| dec.trace_distance_ar(&psd_sqrt(t)?, omega))
}

/// Cleans every logical off `A` by pulling it back through the Petz recovery from the
/// whole complement, then checks the resulting product-form bound on `ρ^{AR}`.
pub fn converse_cleaning(
    space: &CodeSpace,
    a: &Region,
    logicals: Option<&[Pauli]>,
    budget: &SearchBudget,
) -> Result<ConverseReport> {
    let lay = space.layout();
    let n = space.num_qubits();
    let b = a.complement(lay)?;
    let channel = petz_recovery(space, a, &b)?;
    let pi = space.projector()?;
    let mut per_logical = Vec::new();
    let mut epsilon = 0.0f64;
    for p in chosen_logicals(space, logicals) {
        let u = space.logical_matrix(&p)?;
        let v = pull_back_logical(&channel, &u, n)?;
        let e = herm_cleaning_error(&u, &v, &pi)?;
        epsilon = epsilon.max(e);
        per_logical.push((p.to_string(), e));
    }
    let omega = code_marginal(space, a)?;
    let k = space.code_dim();
    let sup = sup_product_distance(space, a, &omega, budget, &[identity(k)])?;
    let bound = 5.0 * epsilon;
    let twirl_defect = twirl_defect(space, budget.seed)?;
    Ok(ConverseReport {
        report_version: REPORT_VERSION,
        region: a.sites().to_vec(),
        epsilon,
        per_logical,
        sup_trace_norm: sup.value,
        bound,
        holds: sup.value <= bound + CONVERSE_TOL,
        implied_correctability: (5.0 * epsilon / 2.0).sqrt(),
        twirl_defect,
        twirl_ok: twirl_defect <= CLEANING_TOL,
        witness: MatrixJson::from_mat(&sup.witness),
        search: sup.diagnostics,
    })
}

/// Averages a random purified code state over the logical Pauli group and compares it with
/// `Π/TrΠ ⊗ ρ^R`.
pub fn twirl_defect(space: &CodeSpace, seed: u64) -> Result<f64> {
    let n = space.num_qubits();
    let k = space.code_dim();
    let kq = space.num_logical();
    if n + kq > crate::codes::space::MAX_DENSE_QUBITS {
        return Err(Error::Capacity("twirl check needs a dense state on the system and reference".into()));
    }
    let psi = space.random_code_state(&mut seeded(seed))?;
    let amps = psi.amplitudes();
    let dim = 1usize << n;
    let total = dim * k;
    let paulis = space.logical_paulis();
    let mut avg = zeros(total, total);
    for p in &paulis {
        let mut moved = vec![ZERO; total];
        for r in 0..k {
            let block = space.apply_logical(p, &amps[r * dim..(r + 1) * dim]);
            moved[r * dim..(r + 1) * dim].copy_from_slice(&block);
        }
        for j in 0..total {
            let cj = moved[j].conj();
            for i in 0..total {
                avg[(i, j)] += moved[i] * cj;
            }
        }
    }
    let avg = scale_re(&avg, 1.0 / paulis.len() as f64);
    let rho_r = CMat::from_fn(k, k, |r, rp| (0..dim).map(|s| amps[s + dim * r] * amps[s + dim * rp].conj()).sum::<C64>());
    let pi = scale_re(&space.projector()?, 1.0 / k as f64);
    let target = CMat::from_fn(total, total, |i, j| pi[(i % dim, j % dim)] * rho_r[(i / dim, j / dim)]);
    Ok(max_abs_diff(&avg, &target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{zoo, LocalCircuit};
    use crate::linalg::frobenius;

    fn quick() -> SearchBudget {
        SearchBudget { restarts: 2, max_iterations: 4, tolerance: 1e-7, seed: 5 }
    }

    /// `Σ_K (K ⊗ I_C)† U (K ⊗ I_C)` over every dense Kraus operator, completion included.
    fn pull_back_by_kraus(channel: &QuantumChannel, u: &CMat, n: usize) -> CMat {
        let all: Vec<usize> = (0..n).collect();
        let (input, output) = (channel.input_sites(), channel.output_sites());
        let erased: Vec<usize> = output.iter().copied().filter(|s| !input.contains(s)).collect();
        let kept: Vec<usize> = all.iter().copied().filter(|s| !erased.contains(s)).collect();
        let spectator: Vec<usize> = all.iter().copied().filter(|s| !output.contains(s)).collect();
        let dep_out = deposit_table(&positions(&all, output).unwrap());
        let dep_spec = deposit_table(&positions(&all, &spectator).unwrap());
        let (in_pos, spec_pos) = (positions(&kept, input).unwrap(), positions(&kept, &spectator).unwrap());
        let d_kept = 1usize << kept.len();
        let mut v = zeros(d_kept, d_kept);
        for k in channel.kraus_dense().unwrap() {
            let wide = CMat::from_fn(1 << n, d_kept, |r, j| {
                let (b, c) = (extract(j, &in_pos), extract(j, &spec_pos));
                match dep_out.iter().position(|&o| o | dep_spec[c] == r) {
                    Some(o) => k[(o, b)],
                    None => ZERO,
                }
            });
            v += adjoint(&wide) * u * &wide;
        }
        v
    }

    #[test]
    fn completion_is_pulled_back_like_its_kraus_form() {
        let code = zoo::toric_code(2, 2).unwrap();
        let lay = code.layout();
        let a = Region::new(lay, [0]).unwrap();
        let u = code.logical_matrix(&code.logical_pairs()[1].z).unwrap();
        let all: Vec<usize> = (0..8).collect();
        let kept = positions(&all, &(1..8).collect::<Vec<_>>()).unwrap();
        let dep = deposit_table(&kept);
        for b in [a.complement(lay).unwrap(), shell_and_far(&code, &a, 1.0).unwrap().0] {
            let ch = petz_recovery(&code, &a, &b).unwrap();
            assert!(ch.completion().is_some());
            let v = pull_back_logical(&ch, &u, 8).unwrap();
            let v_kept = CMat::from_fn(dep.len(), dep.len(), |i, j| v[(dep[i], dep[j])]);
            assert!(max_abs_diff(&v_kept, &pull_back_by_kraus(&ch, &u, 8)) < 1e-10);
        }
        let b = a.complement(lay).unwrap();
        let ch = petz_recovery(&code, &a, &b).unwrap();
        let v = pull_back_logical(&ch, &u, 8).unwrap();
        let v_kept = CMat::from_fn(dep.len(), dep.len(), |i, j| v[(dep[i], dep[j])]);
        assert!(max_abs_diff(&v_kept, &ch.adjoint_apply(&u).unwrap()) < 1e-10);
    }

    #[test]
    fn identity_channel_returns_the_operator() {
        let code = zoo::five_qubit();
        let ch = QuantumChannel::identity(&[1, 2]).unwrap();
        let u = code.logical_matrix(&code.logical_pairs()[0].x).unwrap();
        let v = pull_back_logical(&ch, &u, 5).unwrap();
        assert!(max_abs_diff(&u, &v) < 1e-14);
    }

    #[test]
    fn identity_pulls_back_to_identity() {
        let code = zoo::five_qubit();
        let lay = code.layout();
        let a = Region::new(lay, [0]).unwrap();
        let ch = petz_recovery(&code, &a, &a.complement(lay).unwrap()).unwrap();
        let v = pull_back_logical(&ch, &identity(32), 5).unwrap();
        assert!(max_abs_diff(&v, &identity(32)) < 1e-10);
    }

    #[test]
    fn exact_code_pull_back_cleans_the_region() {
        let code = zoo::five_qubit();
        let lay = code.layout();
        let a = Region::new(lay, [3]).unwrap();
        let ch = petz_recovery(&code, &a, &a.complement(lay).unwrap()).unwrap();
        let pi = code.projector().unwrap();
        for p in code.logical_paulis() {
            let u = code.logical_matrix(&p).unwrap();
            let v = pull_back_logical(&ch, &u, 5).unwrap();
            let (r, l, _) = cleaning_norms(&u, &v, &pi).unwrap();
            assert!(r < 1e-6 && l < 1e-6, "{p}: {r} {l}");
            // V acts trivially on A: it commutes with every Pauli there
            for letter in ['X', 'Y', 'Z'] {
                let q = Pauli::single(5, 3, letter).unwrap().to_matrix();
                assert!(frobenius(&sub(&(&q * &v), &(&v * &q))) < 1e-9);
            }
        }
    }

    #[test]
    fn non_trace_preserving_channels_are_rejected() {
        let half = scale_re(&identity(2), 0.5);
        let ch = QuantumChannel::from_kraus("shrink", &[0], &[0], vec![half]).unwrap();
        let u = identity(4);
        assert!(matches!(pull_back_logical(&ch, &u, 2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn exact_five_qubit_cleaning() {
        let code = zoo::five_qubit();
        let a = Region::new(code.layout(), [1]).unwrap();
        let reps = verify_cleaning(&code, &a, 4.0, None, &quick()).unwrap();
        assert_eq!(reps.len(), 4);
        for r in &reps {
            assert!(r.passed && r.right_norm < 1e-6 && r.left_norm < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn perturbed_cleaning_respects_the_bounds() {
        let code = zoo::five_qubit();
        let pert = code.perturb(&LocalCircuit::brickwork(code.layout(), 1, 0.1, 4).unwrap()).unwrap();
        let a = Region::new(code.layout(), [2]).unwrap();
        let reps = verify_cleaning(&pert, &a, 4.0, None, &quick()).unwrap();
        assert!(reps.iter().all(|r| r.passed), "{reps:?}");
        assert!(reps.iter().any(|r| r.right_norm > 0.0));
    }

    #[test]
    fn empty_region_cleans_for_free() {
        let code = zoo::toric_code(2, 2).unwrap();
        let e = Region::empty(code.layout());
        let reps = cleaning_reports(&code, &e, 1.0, 0.0, None).unwrap();
        for r in reps {
            assert_eq!((r.right_norm, r.left_norm, r.sandwich_norm), (0.0, 0.0, 0.0));
            assert!(r.passed);
        }
        let conv = converse_cleaning(&code, &e, None, &quick()).unwrap();
        assert!(conv.sup_trace_norm < 1e-12 && conv.holds);
    }

    #[test]
    fn converse_on_an_exact_code() {
        let code = zoo::toric_code(2, 2).unwrap();
        let a = Region::new(code.layout(), [0]).unwrap();
        let rep = converse_cleaning(&code, &a, None, &quick()).unwrap();
        assert!(rep.epsilon < 1e-6 && rep.sup_trace_norm < 1e-6 && rep.holds, "{rep:?}");
        assert!(rep.twirl_ok, "{}", rep.twirl_defect);
    }

    #[test]
    fn converse_on_a_logical_loop() {
        let code = zoo::toric_code(2, 2).unwrap();
        let a = Region::new(code.layout(), code.logical_pairs()[0].x.support()).unwrap();
        let rep = converse_cleaning(&code, &a, None, &quick()).unwrap();
        assert!(rep.epsilon > 0.1 && rep.sup_trace_norm > 0.1, "{rep:?}");
        assert!(rep.holds);
    }

    #[test]
    fn product_distance_is_zero_on_the_code_marginal() {
        let code = zoo::five_qubit();
        let a = Region::new(code.layout(), [0, 4]).unwrap();
        let omega = code_marginal(&code, &a).unwrap();
        assert!(max_abs_diff(&omega, &scale_re(&identity(4), 0.25)) < 1e-12);
        let res = sup_product_distance(&code, &a, &omega, &quick(), &[]).unwrap();
        assert!(res.value < 1e-9);
    }
}
