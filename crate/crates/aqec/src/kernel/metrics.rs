use serde::{Deserialize, Serialize};

use super::state::{partial_trace, StateMatrix};
use crate::error::{invalid, Error, Result};
use crate::linalg::{eigvalsh, psd_sqrt, trace_norm, trace_norm_herm};

/// Eigenvalues below this count as exact zeros in entropies.
pub const ENTROPY_CUTOFF: f64 = 1e-14;

fn same_space(rho: &StateMatrix, sigma: &StateMatrix) -> Result<()> {
    if rho.labels() != sigma.labels() {
        return invalid(format!("label mismatch: {:?} vs {:?}", rho.labels(), sigma.labels()));
    }
    rho.check_psd()?;
    sigma.check_psd()
}

/// Root fidelity Tr√(√σ ρ √σ), evaluated as ‖√ρ √σ‖₁.
pub fn fidelity(rho: &StateMatrix, sigma: &StateMatrix) -> Result<f64> {
    same_space(rho, sigma)?;
    let a = psd_sqrt(rho.matrix())?;
    let b = psd_sqrt(sigma.matrix())?;
    Ok(trace_norm(&(&a * &b))?.clamp(0.0, 1.0))
}

pub fn bures_from_fidelity(f: f64) -> f64 {
    (1.0 - f.clamp(0.0, 1.0)).max(0.0).sqrt()
}

pub fn bures_distance(rho: &StateMatrix, sigma: &StateMatrix) -> Result<f64> {
    Ok(bures_from_fidelity(fidelity(rho, sigma)?))
}

pub fn trace_distance(rho: &StateMatrix, sigma: &StateMatrix) -> Result<f64> {
    same_space(rho, sigma)?;
    Ok((0.5 * trace_norm_herm(&(rho.matrix() - sigma.matrix()))?).clamp(0.0, 1.0))
}

/// Margins of the four Fuchs–van de Graaf inequalities; each must be ≥ −slack.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FuchsVanDeGraaf {
    pub fidelity: f64,
    pub trace_distance: f64,
    pub bures: f64,
    /// 1 − F² − T²
    pub upper_margin: f64,
    /// F + T − 1
    pub lower_margin: f64,
    /// ‖ρ−σ‖₁ − 2B²
    pub bures_lower_margin: f64,
    /// 2√2·B − ‖ρ−σ‖₁
    pub bures_upper_margin: f64,
    pub holds: bool,
}

pub fn check_fuchs_van_de_graaf(rho: &StateMatrix, sigma: &StateMatrix, slack: f64) -> Result<FuchsVanDeGraaf> {
    let f = fidelity(rho, sigma)?;
    let t = trace_distance(rho, sigma)?;
    let b = bures_from_fidelity(f);
    let one_norm = 2.0 * t;
    let upper_margin = 1.0 - f * f - t * t;
    let lower_margin = f + t - 1.0;
    let bures_lower_margin = one_norm - 2.0 * b * b;
    let bures_upper_margin = 2.0 * std::f64::consts::SQRT_2 * b - one_norm;
    let holds = [upper_margin, lower_margin, bures_lower_margin, bures_upper_margin]
        .iter()
        .all(|&m| m >= -slack);
    Ok(FuchsVanDeGraaf { fidelity: f, trace_distance: t, bures: b, upper_margin, lower_margin, bures_lower_margin, bures_upper_margin, holds })
}

/// −Σ λ log λ over a spectrum, ignoring eigenvalues below [`ENTROPY_CUTOFF`].
pub fn spectrum_entropy(vals: &[f64]) -> f64 {
    vals.iter().filter(|&&l| l > ENTROPY_CUTOFF).map(|&l| -l * l.ln()).sum::<f64>().max(0.0)
}

pub fn entropy(rho: &StateMatrix) -> Result<f64> {
    rho.check_psd()?;
    Ok(spectrum_entropy(&eigvalsh(rho.matrix())?))
}

/// S(A) + S(B) − S(AB) for disjoint label sets.
pub fn mutual_information(rho: &StateMatrix, part_a: &[usize], part_b: &[usize]) -> Result<f64> {
    if part_a.iter().any(|s| part_b.contains(s)) {
        return invalid("mutual information parts overlap");
    }
    let ab: Vec<usize> = part_a.iter().chain(part_b).copied().collect();
    let s_ab = entropy(&partial_trace(rho, &ab)?)?;
    let s_a = entropy(&partial_trace(rho, part_a)?)?;
    let s_b = entropy(&partial_trace(rho, part_b)?)?;
    Ok(s_a + s_b - s_ab)
}

/// 9·t·log(d_A / t), the continuity bound on I(A:B) for states at trace distance t.
pub fn mi_continuity_bound(t: f64, d_a: usize) -> Result<f64> {
    if d_a < 2 {
        return invalid(format!("subsystem dimension must be at least 2, got {d_a}"));
    }
    if !(0.0..0.5).contains(&t) {
        return Err(Error::OutOfDomain(format!("trace distance {t} outside [0, 1/2)")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(9.0 * t * (d_a as f64 / t).ln())
}

/// 18√2·δ·log(2^k / (2√2·δ)), bounding I(A:R) on a δ-correctable region.
pub fn mi_correctability_bound(k: usize, delta: f64) -> Result<f64> {
    if k == 0 {
        return invalid("need at least one logical qubit");
    }
    if !(delta > 0.0 && delta <= (-1.0f64).exp()) {
        return Err(Error::OutOfDomain(format!("delta {delta} outside (0, 1/e]")));
    }
    let r = 2.0 * std::f64::consts::SQRT_2 * delta;
    Ok(18.0 * std::f64::consts::SQRT_2 * delta * ((k as f64) * std::f64::consts::LN_2 - r.ln()))
}

/// End of the range where [`mi_correctability_bound`] increases with δ.
pub fn mi_correctability_monotone_limit(k: usize) -> f64 {
    2f64.powi(k as i32) / (2.0 * std::f64::consts::SQRT_2 * std::f64::consts::E)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::random::{random_density, random_pure, seeded};
    use crate::kernel::state::{tensor, PureState};
    use crate::linalg::{c, CMat, ONE, ZERO};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn ket(v: [f64; 2]) -> StateMatrix {
        PureState::normalized(vec![0], vec![c(v[0], 0.0), c(v[1], 0.0)]).unwrap().to_density()
    }

    #[test]
    fn single_qubit_values() {
        let (z0, z1, plus) = (ket([1.0, 0.0]), ket([0.0, 1.0]), ket([1.0, 1.0]));
        assert_abs_diff_eq!(fidelity(&z0, &z0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity(&z0, &z1).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity(&z0, &plus).unwrap(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-10);
        assert_abs_diff_eq!(bures_distance(&z0, &z1).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bures_distance(&z0, &plus).unwrap(), 0.541_196_1, epsilon = 1e-6);
        assert_abs_diff_eq!(trace_distance(&z0, &plus).unwrap(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(trace_distance(&z0, &z0).unwrap(), 0.0, epsilon = 1e-15);
        let fg = check_fuchs_van_de_graaf(&z0, &z1, 1e-8).unwrap();
        assert!(fg.holds);
        assert_abs_diff_eq!(fg.upper_margin, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn entropies() {
        let mixed = StateMatrix::density(vec![0], CMat::from_fn(2, 2, |i, j| if i == j { c(0.5, 0.0) } else { ZERO })).unwrap();
        assert_abs_diff_eq!(entropy(&mixed).unwrap(), std::f64::consts::LN_2, epsilon = 1e-14);
        assert_abs_diff_eq!(entropy(&ket([1.0, 2.0])).unwrap(), 0.0, epsilon = 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = PureState::new(vec![0, 1], vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]).unwrap().to_density();
        assert_abs_diff_eq!(mutual_information(&bell, &[0], &[1]).unwrap(), 2.0 * std::f64::consts::LN_2, epsilon = 1e-12);
        let prod = tensor(&ket([1.0, 1.0]), &StateMatrix::density(vec![1], mixed.matrix().clone()).unwrap()).unwrap();
        assert_abs_diff_eq!(mutual_information(&prod, &[0], &[1]).unwrap(), 0.0, epsilon = 1e-12);
        assert!(mutual_information(&bell, &[0], &[0]).is_err());
    }

    #[test]
    fn ghz_mutual_information_matches_entropies() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![ZERO; 8];
        amps[0] = c(s, 0.0);
        amps[7] = c(s, 0.0);
        let ghz = PureState::new(vec![0, 1, 2], amps).unwrap().to_density();
        let direct = entropy(&partial_trace(&ghz, &[0]).unwrap()).unwrap()
            + entropy(&partial_trace(&ghz, &[1]).unwrap()).unwrap()
            - entropy(&partial_trace(&ghz, &[0, 1]).unwrap()).unwrap();
        assert_abs_diff_eq!(mutual_information(&ghz, &[0], &[1]).unwrap(), direct, epsilon = 1e-12);
        assert_abs_diff_eq!(direct, std::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn bound_arithmetic() {
        assert_eq!(mi_continuity_bound(0.0, 2).unwrap(), 0.0);
        assert_abs_diff_eq!(mi_continuity_bound(0.1, 2).unwrap(), 0.9 * 20f64.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(mi_continuity_bound(0.1, 2).unwrap(), 2.696, epsilon = 1e-3);
        assert!(matches!(mi_continuity_bound(0.5, 2), Err(Error::OutOfDomain(_))));
        let v = mi_correctability_bound(1, 0.01).unwrap();
        let expect = 18.0 * 2f64.sqrt() * 0.01 * (2.0 / (2.0 * 2f64.sqrt() * 0.01)).ln();
        assert_abs_diff_eq!(v, expect, epsilon = 1e-12);
        // quoted to three figures upstream; the formula gives 1.0841
        assert_abs_diff_eq!(v, 1.083, epsilon = 2e-3);
        assert!(mi_correctability_bound(1, 1e-12).unwrap() < 1e-9);
        assert!(matches!(mi_correctability_bound(1, 0.0), Err(Error::OutOfDomain(_))));
        assert!(matches!(mi_correctability_bound(1, 0.4), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn correctability_bound_turns_over_before_one_over_e_for_one_qubit() {
        let limit = mi_correctability_monotone_limit(1);
        assert!(limit < (-1.0f64).exp());
        let below = mi_correctability_bound(1, limit - 0.01).unwrap();
        let at = mi_correctability_bound(1, limit).unwrap();
        let above = mi_correctability_bound(1, (-1.0f64).exp()).unwrap();
        assert!(below < at && above < at);
        let mut prev = 0.0;
        for i in 1..100 {
            let v = mi_correctability_bound(1, limit * i as f64 / 100.0).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn label_mismatch_is_rejected() {
        let a = ket([1.0, 0.0]);
        let b = StateMatrix::density(vec![4], a.matrix().clone()).unwrap();
        assert!(fidelity(&a, &b).is_err());
        let bad = StateMatrix::new(vec![0], CMat::from_fn(2, 2, |i, j| if i == j { c(2.0 * i as f64 - 0.5, 0.0) } else { ZERO })).unwrap();
        assert!(fidelity(&a, &bad).is_err());
        let _ = ONE;
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bures_triangle_and_fvdg(seed in any::<u64>(), m in 1usize..4) {
            let mut rng = seeded(seed);
            let labels: Vec<usize> = (0..m).collect();
            let a = random_density(&labels, 1 + seed as usize % 3, &mut rng);
            let b = random_density(&labels, 2, &mut rng);
            let x = random_pure(&labels, &mut rng).to_density();
            let ab = bures_distance(&a, &b).unwrap();
            let bx = bures_distance(&b, &x).unwrap();
            let ax = bures_distance(&a, &x).unwrap();
            prop_assert!(ax <= ab + bx + 1e-8);
            prop_assert!(check_fuchs_van_de_graaf(&a, &b, 1e-8).unwrap().holds);
            prop_assert!((fidelity(&a, &b).unwrap() - fidelity(&b, &a).unwrap()).abs() < 1e-8);
        }

        #[test]
        fn distances_contract_under_partial_trace(seed in any::<u64>(), m in 3usize..5) {
            let mut rng = seeded(seed);
            let labels: Vec<usize> = (0..m).collect();
            let a = random_density(&labels, 2, &mut rng);
            let b = random_density(&labels, 3, &mut rng);
            let keep = &labels[..2];
            let (ra, rb) = (partial_trace(&a, keep).unwrap(), partial_trace(&b, keep).unwrap());
            prop_assert!(trace_distance(&ra, &rb).unwrap() <= trace_distance(&a, &b).unwrap() + 1e-10);
            prop_assert!(bures_distance(&ra, &rb).unwrap() <= bures_distance(&a, &b).unwrap() + 1e-8);
        }

        #[test]
        fn fidelity_concave_in_second_argument(seed in any::<u64>(), t in 0.0f64..1.0) {
            let mut rng = seeded(seed);
            let labels = [0usize, 1];
            let r = random_density(&labels, 2, &mut rng);
            let s1 = random_density(&labels, 1, &mut rng);
            let s2 = random_density(&labels, 3, &mut rng);
            let mix = StateMatrix::density(labels.to_vec(), crate::linalg::herm_part(&(crate::linalg::scale_re(s1.matrix(), t) + crate::linalg::scale_re(s2.matrix(), 1.0 - t)))).unwrap();
            let lhs = fidelity(&r, &mix).unwrap();
            let rhs = t * fidelity(&r, &s1).unwrap() + (1.0 - t) * fidelity(&r, &s2).unwrap();
            prop_assert!(lhs >= rhs - 1e-8);
        }

        #[test]
        fn subadditivity_on_four_qubits(seed in any::<u64>()) {
            let mut rng = seeded(seed);
            let labels = [0usize, 1, 2, 3];
            let r = random_density(&labels, 3, &mut rng);
            let s_ab = entropy(&r).unwrap();
            let s_a = entropy(&partial_trace(&r, &[0, 1]).unwrap()).unwrap();
            let s_b = entropy(&partial_trace(&r, &[2, 3]).unwrap()).unwrap();
            prop_assert!(s_ab <= s_a + s_b + 1e-10);
            let i = mutual_information(&r, &[0, 1], &[2, 3]).unwrap();
            prop_assert!((-1e-8..=4.0 * std::f64::consts::LN_2 + 1e-8).contains(&i));
        }

        #[test]
        fn continuity_bound_holds(seed in any::<u64>()) {
            let mut rng = seeded(seed);
            let labels = [0usize, 1];
            let r = random_density(&labels, 4, &mut rng);
            let s = super::super::random::nearby_density(&r, 0.3, &mut rng);
            let t = trace_distance(&r, &s).unwrap();
            prop_assume!(t > 0.0 && t < 0.4);
            let gap = (mutual_information(&r, &[0], &[1]).unwrap() - mutual_information(&s, &[0], &[1]).unwrap()).abs();
            prop_assert!(gap <= mi_continuity_bound(t, 2).unwrap() + 1e-8);
        }
    }
}
