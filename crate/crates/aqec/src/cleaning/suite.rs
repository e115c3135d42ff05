//! Five exact-correctability conditions evaluated side by side on a stabilizer code.

use serde::{Deserialize, Serialize};

use super::REPORT_VERSION;
use crate::codes::{zoo, CodeSpace};
use crate::engine::{
    delta_ell_interval, disentangling_check, knill_laflamme_check, maximize, shell_and_far, DecouplingModel,
    SearchBudget,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::Region;
use crate::linalg::identity;

/// Dense suite limit.
pub const MAX_SUITE_QUBITS: usize = 12;
/// Threshold below which a measured quantity counts as zero.
pub const EXACT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub report_version: u32,
    pub region: Vec<usize>,
    pub ell: f64,
    pub knill_laflamme: bool,
    pub kl_residual: f64,
    pub decoupled: bool,
    /// Largest `I(A:CR)` found, in nats.
    pub mutual_information: f64,
    pub recoverable: bool,
    pub recovery_error: f64,
    pub disentangled: bool,
    pub deviation: f64,
    pub cleanable: bool,
    pub agree: bool,
    pub status: String,
}

impl EquivalenceReport {
    pub fn conditions(&self) -> [bool; 5] {
        [self.knill_laflamme, self.decoupled, self.recoverable, self.disentangled, self.cleanable]
    }
}

pub fn equivalence_suite(space: &CodeSpace, a: &Region, ell: f64, budget: &SearchBudget) -> Result<EquivalenceReport> {
    let code = space.stabilizer().ok_or_else(|| Error::InvalidArgument("suite needs a stabilizer code".into()))?;
    if space.num_qubits() > MAX_SUITE_QUBITS {
        return Err(Error::Capacity(format!("equivalence suite limited to {MAX_SUITE_QUBITS} qubits")));
    }
    let w = zoo::generator_diameter(space);
    if ell + 1e-9 < w {
        return invalid(format!("shield width {ell} is below the generator diameter {w}"));
    }
    let kl = knill_laflamme_check(space, a)?;
    let (_, c) = shell_and_far(space, a, ell)?;
    let dec = DecouplingModel::new(space, a, &c)?;
    let k = space.code_dim();
    let mi = maximize(k, budget, &[identity(k)], |t| dec.mutual_information_a_cr(t))?;
    let iv = delta_ell_interval(space, a, ell, budget)?;
    let dis = disentangling_check(space, a, ell, budget)?;
    let cleanable = !code.region_supports_logical(a.sites());
    let mut rep = EquivalenceReport {
        report_version: REPORT_VERSION,
        region: a.sites().to_vec(),
        ell,
        knill_laflamme: kl.holds,
        kl_residual: kl.max_residual,
        decoupled: mi.value < EXACT_TOL,
        mutual_information: mi.value,
        recoverable: iv.delta_upper < EXACT_TOL,
        recovery_error: iv.delta_upper,
        disentangled: dis.deviation < EXACT_TOL,
        deviation: dis.deviation,
        cleanable,
        agree: false,
        status: String::new(),
    };
    let conds = rep.conditions();
    rep.agree = conds.iter().all(|&c| c == conds[0]);
    rep.status = match (rep.agree, conds[0]) {
        (true, true) => "correctable (consistent)",
        (true, false) => "uncorrectable (consistent)",
        (false, _) => "inconsistent",
    }
    .to_string();
    Ok(rep)
}
