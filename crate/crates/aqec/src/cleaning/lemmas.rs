//! Growing correctable regions: the shell expansion and the far-apart union.

use serde::{Deserialize, Serialize};

use super::pullback::code_marginal;
use super::REPORT_VERSION;
use crate::codes::CodeSpace;
use crate::engine::{
    delta_ell_interval, interval_for_channel, maximize, petz_recovery, shell_and_far, CorrectabilityInterval,
    DecouplingModel, RecoveryModel, SearchBudget, INTERVAL_SLACK,
};
use crate::error::{invalid, Result};
use crate::geometry::{neighborhood, region_distance, Region, DIST_EPS};
use crate::kernel::tensor::tensor_by_labels;
use crate::linalg::CMat;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub report_version: u32,
    pub region: Vec<usize>,
    pub shell: Vec<usize>,
    /// Recovery input for the grown region, `A^{+2ℓ} \ A^{+ℓ}`.
    pub input: Vec<usize>,
    pub ell: f64,
    /// Worst `𝔅(ρ^{ACDR}, ω^A ⊗ ρ^{CDR})` found.
    pub eps_a: f64,
    /// Worst error of the Petz recovery of the shell from `AC`.
    pub eps_b: f64,
    pub composite_error: f64,
    /// `composite_error ≤ eps_a + eps_b + 1e-8`
    pub certified: bool,
    /// The same inequality at the composite's worst state, each term evaluated there.
    pub pointwise: bool,
    pub interval: CorrectabilityInterval,
}

/// Recovers `A ∪ B` (`B` the ℓ-shell of `A`) from the next shell by preparing `ω^A` and running
/// the shell's own Petz recovery from `AC`.
pub fn expansion_lemma_apply(
    space: &CodeSpace,
    a: &Region,
    b: &Region,
    ell: f64,
    budget: &SearchBudget,
) -> Result<ExpansionReport> {
    let lay = space.layout();
    if a.is_empty() {
        return invalid("expansion needs a nonempty region");
    }
    let (shell, _) = shell_and_far(space, a, ell)?;
    if shell.sites() != b.sites() {
        return invalid(format!("B = {:?} is not the {ell}-shell {:?} of A", b.sites(), shell.sites()));
    }
    let ab = a.union(b)?;
    let abc = neighborhood(lay, a, 2.0 * ell)?;
    let c = abc.difference(&ab)?;
    let cd = ab.complement(lay)?;
    let ac = a.union(&c)?;

    let omega = code_marginal(space, a)?;
    let petz_b = petz_recovery(space, b, &ac)?;
    let composite = petz_b.compose_prepare(a.sites(), &omega)?;
    let rec_b = RecoveryModel::new(&petz_b, space, b.sites())?;
    let dec_a = DecouplingModel::new(space, a, &cd)?;

    let interval = interval_for_channel(space, &ab, ell, &composite, budget)?;
    let worst = interval.upper_witness.to_mat();
    let k = space.code_dim();
    let eb = maximize(k, budget, std::slice::from_ref(&worst), |t| Ok(rec_b.error(t)))?;
    let ea = maximize(k, budget, &[worst.clone(), eb.witness.clone()], |t| dec_a.fixed_witness(t, &omega))?;

    let rec_comp = RecoveryModel::new(&composite, space, ab.sites())?;
    let tau = crate::engine::tau_of(&worst);
    let pointwise = rec_comp.error(&tau) <= dec_a.fixed_witness(&tau, &omega)? + rec_b.error(&tau) + INTERVAL_SLACK;
    Ok(ExpansionReport {
        report_version: REPORT_VERSION,
        region: a.sites().to_vec(),
        shell: b.sites().to_vec(),
        input: c.sites().to_vec(),
        ell,
        eps_a: ea.value,
        eps_b: eb.value,
        composite_error: interval.delta_upper,
        certified: interval.delta_upper <= ea.value + eb.value + INTERVAL_SLACK,
        pointwise,
        interval,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnionReport {
    pub report_version: u32,
    pub region_a: Vec<usize>,
    pub region_b: Vec<usize>,
    pub separation: f64,
    pub ell: f64,
    /// Worst `𝔅(ρ^{ACR}, ω^A ⊗ ρ^{CR})` with `C` everything beyond `A^{+ℓ}` (and `B`).
    pub eps_a: f64,
    /// Worst `𝔅(ρ^{BR}, ω^B ⊗ ρ^R)`.
    pub eps_b: f64,
    /// Worst `𝔅(ρ^{ABR}, ω^A ⊗ ω^B ⊗ ρ^R)`.
    pub union_error: f64,
    pub certified: bool,
    pub pointwise: bool,
    /// Interval of `A ∪ B` at the same ℓ; `A`'s own interval when `B` is empty.
    pub interval: CorrectabilityInterval,
}

/// Product witness `ω^A ⊗ ω^B` for two separated regions and the triangle chain bounding it.
pub fn union_lemma_apply(
    space: &CodeSpace,
    a: &Region,
    b_far: &Region,
    ell: f64,
    budget: &SearchBudget,
) -> Result<UnionReport> {
    let lay = space.layout();
    let separation = if b_far.is_empty() || a.is_empty() { f64::INFINITY } else { region_distance(lay, a, b_far)? };
    if separation + DIST_EPS < ell {
        return invalid(format!("regions are {separation} apart, need at least {ell}"));
    }
    let none = Region::empty(lay);
    let (_, far) = shell_and_far(space, a, ell)?;
    let c_a = far.union(b_far)?;
    let union = a.union(b_far)?;
    let omega_a = code_marginal(space, a)?;
    let omega_b = code_marginal(space, b_far)?;
    let (omega_ab, _) = tensor_by_labels(&omega_a, a.sites(), &omega_b, b_far.sites())?;
    let dec_a = DecouplingModel::new(space, a, &c_a)?;
    let dec_b = DecouplingModel::new(space, b_far, &none)?;
    let dec_ab = DecouplingModel::new(space, &union, &none)?;

    let k = space.code_dim();
    let fw = |d: &DecouplingModel, w: &CMat, t: &CMat| d.fixed_witness(t, w);
    let un = maximize(k, budget, &[], |t| fw(&dec_ab, &omega_ab, t))?;
    let ea = maximize(k, budget, std::slice::from_ref(&un.witness), |t| fw(&dec_a, &omega_a, t))?;
    let eb = maximize(k, budget, &[un.witness.clone(), ea.witness.clone()], |t| fw(&dec_b, &omega_b, t))?;
    let tau = un.witness_tau();
    let pointwise =
        fw(&dec_ab, &omega_ab, &tau)? <= fw(&dec_a, &omega_a, &tau)? + fw(&dec_b, &omega_b, &tau)? + INTERVAL_SLACK;
    let interval = delta_ell_interval(space, &union, ell, budget)?;
    Ok(UnionReport {
        report_version: REPORT_VERSION,
        region_a: a.sites().to_vec(),
        region_b: b_far.sites().to_vec(),
        separation,
        ell,
        eps_a: ea.value,
        eps_b: eb.value,
        union_error: un.value,
        certified: un.value <= ea.value + eb.value + INTERVAL_SLACK,
        pointwise,
        interval,
    })
}
