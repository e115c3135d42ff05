//! Arithmetic of the tradeoff, distance and logical-support bounds.

use serde::{Deserialize, Serialize};

use super::REPORT_VERSION;
use crate::codes::CodeSpace;
use crate::error::{invalid, Result};
use crate::geometry::{logical_support_grid, Lattice, Role, SiteMetric};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeParameters {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub delta: f64,
    pub ell: f64,
    pub dimension: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExponentialProfile {
    pub amplitude: f64,
    pub xi: f64,
    /// `rhs / (n (log n)^{2D/(D−1)})`, constant along the family.
    pub rhs_per_log_scale: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundEvaluation {
    pub report_version: u32,
    pub params: CodeParameters,
    /// `nδ/d`
    pub epsilon: f64,
    /// `1 − c ε log(1/ε)`
    pub prefactor: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub c: f64,
    pub c_prime: f64,
    pub holds: bool,
    /// The prefactor is not positive, or ε ≥ 1 where `log(1/ε)` changes sign.
    pub vacuous: bool,
    pub profile: Option<ExponentialProfile>,
}

fn check_params(p: &CodeParameters) -> Result<()> {
    if p.dimension < 2 {
        return invalid(format!("exponent 2/(D-1) is undefined for D = {}", p.dimension));
    }
    if p.d == 0 || p.n == 0 {
        return invalid("need n > 0 and d > 0");
    }
    if !(p.delta >= 0.0) || !(p.ell > 0.0) {
        return invalid("need δ >= 0 and ℓ > 0");
    }
    Ok(())
}

/// `(1 − c ε log(1/ε)) k d^{2/(D−1)} ≤ c′ n ℓ^{2D/(D−1)}` with `ε = nδ/d`.
pub fn evaluate_tradeoff(p: CodeParameters, c: f64, c_prime: f64) -> Result<BoundEvaluation> {
    check_params(&p)?;
    let dm1 = (p.dimension - 1) as f64;
    let eps = p.n as f64 * p.delta / p.d as f64;
    let log_term = if eps > 0.0 { eps * (1.0 / eps).ln() } else { 0.0 };
    let prefactor = 1.0 - c * log_term;
    let lhs = prefactor * p.k as f64 * (p.d as f64).powf(2.0 / dm1);
    let rhs = c_prime * p.n as f64 * p.ell.powf(2.0 * p.dimension as f64 / dm1);
    Ok(BoundEvaluation {
        report_version: REPORT_VERSION,
        params: p,
        epsilon: eps,
        prefactor,
        lhs,
        rhs,
        c,
        c_prime,
        holds: lhs <= rhs,
        vacuous: prefactor <= 0.0 || eps >= 1.0,
        profile: None,
    })
}

/// `δ(ℓ) = a e^{−ℓ/ξ}` evaluated at `ℓ = ξ log n`, so that `nδ = a`.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_exponential_profile(
    n: usize,
    k: usize,
    d: usize,
    dimension: usize,
    amplitude: f64,
    xi: f64,
    c: f64,
    c_prime: f64,
) -> Result<BoundEvaluation> {
    if n < 2 || !(xi > 0.0) || !(amplitude >= 0.0) {
        return invalid("need n >= 2, ξ > 0 and a >= 0");
    }
    let ell = xi * (n as f64).ln();
    let delta = amplitude * (-ell / xi).exp();
    let mut ev = evaluate_tradeoff(CodeParameters { n, k, d, delta, ell, dimension }, c, c_prime)?;
    let expo = 2.0 * dimension as f64 / (dimension - 1) as f64;
    ev.profile = Some(ExponentialProfile {
        amplitude,
        xi,
        rhs_per_log_scale: ev.rhs / (n as f64 * (n as f64).ln().powf(expo)),
    });
    Ok(ev)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistanceBoundReport {
    pub report_version: u32,
    pub linear_size: usize,
    pub dimension: usize,
    pub ell: f64,
    pub delta: f64,
    /// `5 ℓ L^{D−1}`
    pub bound: f64,
    /// `10 L δ < ℓ`
    pub guard: bool,
    pub measured_distance: Option<usize>,
    /// `None` when the guard fails or no distance was supplied.
    pub holds: Option<bool>,
}

pub fn code_distance_bound_check(
    linear_size: usize,
    dimension: usize,
    ell: f64,
    delta: f64,
    measured_distance: Option<usize>,
) -> DistanceBoundReport {
    let bound = 5.0 * ell * (linear_size as f64).powi(dimension as i32 - 1);
    let guard = 10.0 * linear_size as f64 * delta < ell;
    let holds = match (guard, measured_distance) {
        (true, Some(d)) => Some(d as f64 <= bound),
        _ => None,
    };
    DistanceBoundReport {
        report_version: REPORT_VERSION,
        linear_size,
        dimension,
        ell,
        delta,
        bound,
        guard,
        measured_distance,
        holds,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogicalSupportReport {
    pub report_version: u32,
    pub d: usize,
    pub ell: f64,
    pub n: usize,
    pub cell_side: usize,
    pub cells: usize,
    /// `|Y|`
    pub d_tilde: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub c_double_prime: f64,
    pub holds: bool,
    /// `√(nδ/d)`
    pub accuracy: f64,
    /// Per X cell: whether it carries a logical (stabilizer codes only).
    pub cells_support_logical: Vec<bool>,
    /// Every logical has a representative on Y.
    pub logicals_on_y: Option<bool>,
}

fn support_report(
    n: usize,
    dimension: usize,
    d: usize,
    ell: f64,
    delta: f64,
    side: usize,
    cells: usize,
    d_tilde: usize,
    c2: f64,
) -> LogicalSupportReport {
    let dm1 = (dimension - 1) as f64;
    let lhs = d_tilde as f64 * (d as f64).powf(1.0 / dm1);
    let rhs = c2 * n as f64 * ell.powf(dimension as f64 / dm1);
    LogicalSupportReport {
        report_version: REPORT_VERSION,
        d,
        ell,
        n,
        cell_side: side,
        cells,
        d_tilde,
        lhs,
        rhs,
        c_double_prime: c2,
        holds: lhs <= rhs,
        accuracy: (n as f64 * delta / d as f64).sqrt(),
        cells_support_logical: vec![],
        logicals_on_y: None,
    }
}

/// The grid construction on a bare lattice, one qubit per site.
pub fn logical_support_params(lat: &Lattice, d: usize, ell: f64, delta: f64, c2: f64) -> Result<LogicalSupportReport> {
    let (plan, side) = logical_support_grid(lat, d, ell)?;
    let y = plan.role_region(lat, Role::YCell)?;
    Ok(support_report(lat.num_sites(), lat.dimension, d, ell, delta, side, plan.count(Role::XCell), y.len(), c2))
}

/// The grid construction on a code's qubits; for stabilizer codes each X cell is checked to
/// carry no logical and the logicals are checked to fit on Y.
pub fn logical_support_evaluate(space: &CodeSpace, d: usize, ell: f64, delta: f64, c2: f64) -> Result<LogicalSupportReport> {
    let lay = space.layout();
    let (plan, side) = logical_support_grid(&lay.lattice, d, ell)?;
    let plan = plan.restrict_to_layout(lay)?;
    let y = plan.role_region(lay, Role::YCell)?;
    let n = space.num_qubits();
    let mut rep = support_report(n, lay.lattice.dimension, d, ell, delta, side, plan.count(Role::XCell), y.len(), c2);
    if let Some(code) = space.stabilizer() {
        rep.cells_support_logical = plan
            .parts
            .iter()
            .filter(|p| p.role == Role::XCell)
            .map(|p| code.region_supports_logical(p.region.sites()))
            .collect();
        let x = plan.role_region(lay, Role::XCell)?;
        let all_fit = space
            .logical_pairs()
            .iter()
            .flat_map(|pair| [&pair.x, &pair.z])
            .all(|p| code.clean_off(p, x.sites()).is_some());
        rep.logicals_on_y = Some(all_fit && code.logical_count_on(y.sites()) == 2 * code.num_logical());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::zoo;
    use proptest::prelude::*;

    #[test]
    fn exact_toric_reads_kd2_le_n() {
        for l in 2..8usize {
            let p = CodeParameters { n: 2 * l * l, k: 2, d: l, delta: 0.0, ell: 1.0, dimension: 2 };
            let ev = evaluate_tradeoff(p, 1.0, 1.0).unwrap();
            assert_eq!(ev.prefactor, 1.0);
            assert_eq!(ev.lhs, (2 * l * l) as f64);
            assert_eq!(ev.rhs, (2 * l * l) as f64);
            assert!(ev.holds && !ev.vacuous);
        }
    }

    #[test]
    fn vacuous_when_the_prefactor_dies() {
        // ε = 0.3: ε log(1/ε) ≈ 0.361, so c = 3 kills the prefactor
        let p = CodeParameters { n: 30, k: 1, d: 10, delta: 0.1, ell: 2.0, dimension: 2 };
        let ev = evaluate_tradeoff(p, 3.0, 1.0).unwrap();
        assert!((ev.epsilon - 0.3).abs() < 1e-12);
        assert!(ev.prefactor < 0.0 && ev.vacuous);
        let big = CodeParameters { delta: 1.0, ..p };
        assert!(evaluate_tradeoff(big, 1.0, 1.0).unwrap().vacuous);
    }

    #[test]
    fn one_dimension_is_rejected() {
        let p = CodeParameters { n: 5, k: 1, d: 3, delta: 0.0, ell: 1.0, dimension: 1 };
        assert!(evaluate_tradeoff(p, 1.0, 1.0).is_err());
    }

    #[test]
    fn exponential_profile_keeps_the_log_scale_constant() {
        let mut scales = vec![];
        for n in [100usize, 1000, 10000] {
            let ev = evaluate_exponential_profile(n, 1, 10, 2, 0.5, 2.0, 1.0, 1.0).unwrap();
            assert!((ev.params.delta * n as f64 - 0.5).abs() < 1e-9);
            assert!((ev.epsilon - 0.05).abs() < 1e-9);
            scales.push(ev.profile.unwrap().rhs_per_log_scale);
        }
        // c′ ξ^{2D/(D−1)} = 2^4
        for s in scales {
            assert!((s - 16.0).abs() < 1e-9, "{s}");
        }
    }

    proptest! {
        #[test]
        fn rhs_grows_with_ell(l1 in 0.5f64..10.0, extra in 0.01f64..5.0, dim in 2usize..5, n in 1usize..500) {
            let p = CodeParameters { n, k: 1, d: 3, delta: 0.0, ell: l1, dimension: dim };
            let a = evaluate_tradeoff(p, 1.0, 1.0).unwrap();
            let b = evaluate_tradeoff(CodeParameters { ell: l1 + extra, ..p }, 1.0, 1.0).unwrap();
            prop_assert!(b.rhs > a.rhs);
        }
    }

    #[test]
    fn distance_bound_on_the_zoo() {
        let toric = code_distance_bound_check(3, 2, 1.0, 0.0, Some(3));
        assert_eq!(toric.bound, 15.0);
        assert!(toric.guard && toric.holds == Some(true));
        let chain = code_distance_bound_check(4, 1, 1.0, 0.0, Some(1));
        assert_eq!(chain.bound, 5.0);
        assert_eq!(chain.holds, Some(true));
        let unguarded = code_distance_bound_check(3, 2, 1.0, 0.05, Some(3));
        assert!(!unguarded.guard && unguarded.holds.is_none());
    }

    #[test]
    fn toric_cells_carry_no_logicals() {
        let code = zoo::toric_code(3, 3).unwrap();
        let rep = logical_support_evaluate(&code, 3, 1.0, 0.0, 1.0).unwrap();
        assert!(rep.cells_support_logical.iter().all(|&s| !s), "{rep:?}");
        assert_eq!(rep.logicals_on_y, Some(true), "{rep:?}");
        assert_eq!(rep.d_tilde, 16);
        // 16·3 against 18·c″
        assert!(!rep.holds);
        assert!(logical_support_evaluate(&code, 3, 1.0, 0.0, 3.0).unwrap().holds);
        assert_eq!(rep.accuracy, 0.0);
    }

    #[test]
    fn d_tilde_shrinks_with_distance() {
        let lat = Lattice::torus(2, 40).unwrap();
        let mut last = usize::MAX;
        for d in [20usize, 40, 80, 160] {
            let rep = logical_support_params(&lat, d, 1.0, 0.0, 1.0).unwrap();
            assert!(rep.d_tilde <= last, "d = {d}: {}", rep.d_tilde);
            last = rep.d_tilde;
        }
        assert!(last < 1600);
    }
}
