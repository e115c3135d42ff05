//! Worst-case recovery error, decoupling, and the bracket they put around `δ_ℓ(A)`.

use serde::{Deserialize, Serialize};

use super::blocks::vec_of;
use super::channel::QuantumChannel;
use super::decoupling::DecouplingModel;
use super::petz::petz_recovery;
use super::recovery::RecoveryModel;
use super::search::{maximize, MatrixJson, SearchBudget, SearchDiagnostics, SearchResult};
use crate::codes::CodeSpace;
use crate::error::{Error, Result};
use crate::geometry::{neighborhood, Region};
use crate::linalg::{CMat, C64};

pub const SANDWICH_TOL: f64 = 1e-6;
/// Bures values carry a square root of rounding noise, about 1.5e-8 at an exact zero.
pub const INTERVAL_SLACK: f64 = 1e-6;

/// `(B, C)` for region `A` and width `ell`: `B = A^{+ℓ} \ A`, `C` the rest.
pub fn shell_and_far(space: &CodeSpace, a: &Region, ell: f64) -> Result<(Region, Region)> {
    let lay = space.layout();
    let grown = neighborhood(lay, a, ell)?;
    Ok((grown.difference(a)?, grown.complement(lay)?))
}

/// Worst recovery error found for `channel ∘ Tr_A` over purified code states.
pub fn recovery_error(
    channel: &QuantumChannel,
    space: &CodeSpace,
    a: &Region,
    budget: &SearchBudget,
) -> Result<SearchResult> {
    recovery_error_probed(channel, space, a, budget, &[])
}

pub fn recovery_error_probed(
    channel: &QuantumChannel,
    space: &CodeSpace,
    a: &Region,
    budget: &SearchBudget,
    probes: &[CMat],
) -> Result<SearchResult> {
    a.check_universe(space.layout())?;
    let model = RecoveryModel::new(channel, space, a.sites())?;
    maximize(space.code_dim(), budget, probes, |t| Ok(model.error(t)))
}

/// Lower estimate of `μ = sup 𝔅(ρ^{ACR}, ρ^A ⊗ ρ^{CR})`.
pub fn decoupling_mu(space: &CodeSpace, a: &Region, c: &Region, budget: &SearchBudget) -> Result<SearchResult> {
    decoupling_mu_probed(space, a, c, budget, &[])
}

pub fn decoupling_mu_probed(
    space: &CodeSpace,
    a: &Region,
    c: &Region,
    budget: &SearchBudget,
    probes: &[CMat],
) -> Result<SearchResult> {
    let model = DecouplingModel::new(space, a, c)?;
    maximize(space.code_dim(), budget, probes, |t| model.mu(t))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorrectabilityInterval {
    pub region: Vec<usize>,
    pub ell: f64,
    pub delta_lower: f64,
    pub delta_upper: f64,
    pub mu: f64,
    pub witness_recovery: String,
    pub recovery_warnings: Vec<String>,
    pub completion_leak: f64,
    /// Coefficient matrix of the state attaining `delta_upper`.
    pub upper_witness: MatrixJson,
    /// Coefficient matrix of the state attaining `mu`.
    pub lower_witness: MatrixJson,
    pub upper_search: SearchDiagnostics,
    pub lower_search: SearchDiagnostics,
    pub budget: SearchBudget,
}

impl CorrectabilityInterval {
    pub fn is_consistent(&self) -> bool {
        self.delta_lower <= self.delta_upper + INTERVAL_SLACK
    }
}

/// Petz upper bound and `μ/2` lower bound on `δ_ℓ(A)`, each search probing the other's witness.
pub fn delta_ell_interval(space: &CodeSpace, a: &Region, ell: f64, budget: &SearchBudget) -> Result<CorrectabilityInterval> {
    let (b, _) = shell_and_far(space, a, ell)?;
    let channel = petz_recovery(space, a, &b)?;
    interval_for_channel(space, a, ell, &channel, budget)
}

/// Same bracket with `channel` (reading inside `A^{+ℓ}`) as the candidate recovery.
pub fn interval_for_channel(
    space: &CodeSpace,
    a: &Region,
    ell: f64,
    channel: &QuantumChannel,
    budget: &SearchBudget,
) -> Result<CorrectabilityInterval> {
    let (_, c) = shell_and_far(space, a, ell)?;
    let rec = RecoveryModel::new(channel, space, a.sites())?;
    let dec = DecouplingModel::new(space, a, &c)?;
    let k = space.code_dim();
    let mut lower = maximize(k, budget, &[], |t| dec.mu(t))?;
    let upper = maximize(k, budget, &[lower.witness.clone()], |t| Ok(rec.error(t)))?;
    let cross = dec.mu(&upper.witness_tau())?;
    if cross > lower.value {
        lower.value = cross;
        lower.witness = upper.witness.clone();
    }
    Ok(CorrectabilityInterval {
        region: a.sites().to_vec(),
        ell,
        delta_lower: lower.value / 2.0,
        delta_upper: upper.value,
        mu: lower.value,
        witness_recovery: channel.label().to_string(),
        recovery_warnings: channel.warnings().to_vec(),
        completion_leak: rec.completion_leak,
        upper_witness: MatrixJson::from_mat(&upper.witness),
        lower_witness: MatrixJson::from_mat(&lower.witness),
        upper_search: upper.diagnostics,
        lower_search: lower.diagnostics,
        budget: *budget,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SandwichReport {
    pub region: Vec<usize>,
    pub ell: f64,
    pub mu: f64,
    pub delta_lower: f64,
    pub delta_upper: f64,
    /// `(1/9) δ_lower² ≤ μ + tol`.
    pub lower_holds: bool,
    /// `μ ≤ 2 δ_upper + tol`.
    pub upper_holds: bool,
    /// `(1/9) δ_upper² ≤ μ + tol`; informational, since `δ_upper` may exceed the optimum.
    pub upper_squared_holds: bool,
    pub passed: bool,
}

pub fn verify_decoupling_sandwich(space: &CodeSpace, a: &Region, ell: f64, budget: &SearchBudget) -> Result<SandwichReport> {
    let iv = delta_ell_interval(space, a, ell, budget)?;
    Ok(sandwich_from_interval(&iv))
}

pub fn sandwich_from_interval(iv: &CorrectabilityInterval) -> SandwichReport {
    let lower_holds = iv.delta_lower.powi(2) / 9.0 <= iv.mu + SANDWICH_TOL;
    let upper_holds = iv.mu <= 2.0 * iv.delta_upper + SANDWICH_TOL;
    SandwichReport {
        region: iv.region.clone(),
        ell: iv.ell,
        mu: iv.mu,
        delta_lower: iv.delta_lower,
        delta_upper: iv.delta_upper,
        lower_holds,
        upper_holds,
        upper_squared_holds: iv.delta_upper.powi(2) / 9.0 <= iv.mu + SANDWICH_TOL,
        passed: lower_holds && upper_holds,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DisentanglingReport {
    pub region: Vec<usize>,
    pub ell: f64,
    /// Worst `𝔅(𝒱(ρ), ω^{AB'} ⊗ ρ^{B''CR})` found with the chosen `ω`.
    pub deviation: f64,
    pub delta_upper: f64,
    /// Worst `𝔅(ρ^{ACR}, ω^A ⊗ ρ^{CR})` with `ω^A` the A-marginal of `ω^{AB'}`.
    pub fixed_witness_decoupling: f64,
    pub product_form: bool,
    pub within_delta_upper: bool,
    /// Pointwise facts: decoupling ≤ deviation and Petz error ≤ deviation at every probed state.
    pub consistent: bool,
    pub witness: MatrixJson,
}

/// Builds the disentangling isometry from the Petz Stinespring dilation and measures how far
/// its output is from `ω^{AB'} ⊗ ρ^{B''CR}`.
pub fn disentangling_check(space: &CodeSpace, a: &Region, ell: f64, budget: &SearchBudget) -> Result<DisentanglingReport> {
    let (b, c) = shell_and_far(space, a, ell)?;
    let k = space.code_dim();
    if a.is_empty() {
        return Ok(DisentanglingReport {
            region: vec![],
            ell,
            deviation: 0.0,
            delta_upper: 0.0,
            fixed_witness_decoupling: 0.0,
            product_form: true,
            within_delta_upper: true,
            consistent: true,
            witness: MatrixJson::from_mat(&crate::linalg::identity(k)),
        });
    }
    let channel = petz_recovery(space, a, &b)?;
    let rec = RecoveryModel::new(&channel, space, a.sites())?;
    let phi = rec
        .functionals()
        .ok_or_else(|| Error::Capacity("Stinespring functionals too large to keep".into()))?
        .clone();
    let dec = DecouplingModel::new(space, a, &c)?;
    let upper = maximize(k, budget, &[], |t| Ok(rec.error(t)))?;
    let apply = |t: &CMat| -> Vec<C64> {
        let v = vec_of(t);
        (0..phi.nrows()).map(|r| (0..v.len()).map(|c| phi[(r, c)] * v[c]).sum()).collect()
    };
    let unit = |w: Vec<C64>| -> Vec<C64> {
        let n = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        w.into_iter().map(|z| if n > 0.0 { z / n } else { z }).collect()
    };
    let deviation_at = |omega: &[C64], t: &CMat| -> f64 {
        let f = apply(t);
        let overlap: C64 = omega.iter().zip(&f).map(|(o, x)| o.conj() * x).sum();
        (1.0 - overlap.norm().min(1.0)).max(0.0).sqrt()
    };
    let mixed = crate::linalg::scale_re(&crate::linalg::identity(k), 1.0 / k as f64);
    let mut best: Option<(f64, Vec<C64>, SearchResult)> = None;
    for anchor in [mixed.clone(), upper.witness_tau()] {
        let omega = unit(apply(&anchor));
        let res = maximize(k, budget, std::slice::from_ref(&upper.witness), |t| Ok(deviation_at(&omega, t)))?;
        if best.as_ref().is_none_or(|b| res.value < b.0) {
            best = Some((res.value, omega, res));
        }
    }
    let (deviation, omega, res) = best.expect("at least one anchor");
    let d_e = rec.erased_dim();
    let terms = omega.len() / d_e;
    let omega_a = CMat::from_fn(d_e, d_e, |x, y| (0..terms).map(|j| omega[j * d_e + x] * omega[j * d_e + y].conj()).sum());
    let witness_tau = res.witness_tau();
    let mut consistent = true;
    let mut fixed = 0.0f64;
    for t in [witness_tau.clone(), upper.witness_tau(), mixed] {
        let dev = deviation_at(&omega, &t);
        let fw = dec.fixed_witness(&t, &omega_a)?;
        fixed = fixed.max(fw);
        consistent &= fw <= dev + 1e-7 && rec.error(&t) <= dev + 1e-7;
    }
    Ok(DisentanglingReport {
        region: a.sites().to_vec(),
        ell,
        deviation,
        delta_upper: upper.value,
        fixed_witness_decoupling: fixed,
        product_form: deviation < 1e-6,
        within_delta_upper: deviation <= upper.value + 1e-6,
        consistent,
        witness: MatrixJson::from_mat(&res.witness),
    })
}
