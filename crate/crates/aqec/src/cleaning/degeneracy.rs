//! Ground-space dimension from flexible logical operators on a two-dimensional torus.

use serde::{Deserialize, Serialize};

use super::pullback::{code_marginal, sup_product_distance, CONVERSE_TOL};
use super::REPORT_VERSION;
use crate::codes::{CodeSpace, Pauli};
use crate::engine::{SearchBudget, INTERVAL_SLACK};
use crate::error::{Error, Result};
use crate::geometry::{four_square_partition_layout, Region, Role};
use crate::kernel::spectrum_entropy;
use crate::kernel::tensor::split_vector;
use crate::linalg::{adjoint, eigvalsh, identity, scale_re, zeros, CMat, C64};

/// Deformations of every logical generator, one list per direction, aligned with
/// `logical_pairs` flattened as `x₁, z₁, x₂, z₂, …`.
#[derive(Clone, Debug, Default)]
pub struct FlexibleOperators {
    /// Supported on `Y ∪ Z`.
    pub on_yz: Option<Vec<Pauli>>,
    /// Supported on `X ∪ Z`.
    pub on_xz: Option<Vec<Pauli>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegeneracyReport {
    pub report_version: u32,
    pub ell: f64,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    pub disk_radius: f64,
    pub eps_ell: f64,
    /// Measured `max ‖(L − V)Π‖` over both directions.
    pub measured_eps: f64,
    pub operators_verified: bool,
    /// Worst `‖ρ^{XR} − ω^X ⊗ ρ^R‖₁` found.
    pub product_distance_x: f64,
    pub product_distance_y: f64,
    /// `5·eps_ell`
    pub product_bound: f64,
    pub product_ok: bool,
    /// `√(5·eps_ell/2)`
    pub correctability: f64,
    pub log_dim: f64,
    pub entropy_z: f64,
    pub entropy_cap: f64,
    pub mi_x: f64,
    pub mi_y: f64,
    /// `S(R) ≤ S(Z) + (I(X:R) + I(Y:R))/2` on the measured entropies.
    pub exact_link: bool,
    /// `log K − (b_X + b_Y)/2`, the continuity-bound floor on `S(Z)`.
    pub lower_bound: Option<f64>,
    pub prefactor: Option<f64>,
    pub lower_link: Option<bool>,
    pub upper_link: bool,
    pub status: String,
}

/// Cleans each logical generator off `X` and off `Y`; a direction is `None` if any fails.
pub fn flexible_operators(space: &CodeSpace, x: &Region, y: &Region) -> Result<FlexibleOperators> {
    let code = space.stabilizer().ok_or_else(|| Error::InvalidArgument("flexible operators need a stabilizer code".into()))?;
    let gens = logical_generators(space);
    let clean = |avoid: &Region| gens.iter().map(|p| code.clean_off(p, avoid.sites())).collect::<Option<Vec<_>>>();
    Ok(FlexibleOperators { on_yz: clean(x), on_xz: clean(y) })
}

fn logical_generators(space: &CodeSpace) -> Vec<Pauli> {
    space.logical_pairs().iter().flat_map(|p| [p.x.clone(), p.z.clone()]).collect()
}

pub fn flexible_degeneracy_check(space: &CodeSpace, ell: f64, eps_ell: f64, budget: &SearchBudget) -> Result<DegeneracyReport> {
    let (plan, _) = four_square_partition_layout(space.layout(), ell)?;
    let x = plan.role_region(space.layout(), Role::XCell)?;
    let y = plan.role_region(space.layout(), Role::YCell)?;
    let ops = flexible_operators(space, &x, &y)?;
    flexible_degeneracy_check_with(space, ell, eps_ell, &ops, budget)
}

pub fn flexible_degeneracy_check_with(
    space: &CodeSpace,
    ell: f64,
    eps_ell: f64,
    ops: &FlexibleOperators,
    budget: &SearchBudget,
) -> Result<DegeneracyReport> {
    let lay = space.layout();
    if !(eps_ell >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps_ell must be nonnegative, got {eps_ell}")));
    }
    let (plan, disk_radius) = four_square_partition_layout(lay, ell)?;
    let x = plan.role_region(lay, Role::XCell)?;
    let y = plan.role_region(lay, Role::YCell)?;
    let z = plan.role_region(lay, Role::CornerDisk)?;
    let k = space.code_dim();
    let log_dim = (k as f64).ln();
    let mut rep = DegeneracyReport {
        report_version: REPORT_VERSION,
        ell,
        x: x.sites().to_vec(),
        y: y.sites().to_vec(),
        z: z.sites().to_vec(),
        disk_radius,
        eps_ell,
        measured_eps: 0.0,
        operators_verified: false,
        product_distance_x: 0.0,
        product_distance_y: 0.0,
        product_bound: 5.0 * eps_ell,
        product_ok: false,
        correctability: (2.5 * eps_ell).sqrt(),
        log_dim,
        entropy_z: 0.0,
        entropy_cap: z.len() as f64 * std::f64::consts::LN_2,
        mi_x: 0.0,
        mi_y: 0.0,
        exact_link: false,
        lower_bound: None,
        prefactor: None,
        lower_link: None,
        upper_link: false,
        status: String::new(),
    };
    let (Some(on_yz), Some(on_xz)) = (&ops.on_yz, &ops.on_xz) else {
        rep.status = "refused".into();
        return Ok(rep);
    };
    let gens = logical_generators(space);
    if on_yz.len() != gens.len() || on_xz.len() != gens.len() {
        return Err(Error::InvalidArgument(format!("expected {} operators per direction", gens.len())));
    }
    let mut eps = 0.0f64;
    for (avoid, list) in [(&x, on_yz), (&y, on_xz)] {
        for (p, v) in gens.iter().zip(list) {
            if v.num_qubits() != space.num_qubits() || v.support().iter().any(|&q| avoid.contains(q)) {
                return Err(Error::InvalidArgument(format!("operator {v:?} reaches the region it must avoid")));
            }
            eps = eps.max(deformation_error(space, p, v)?);
        }
    }
    rep.measured_eps = eps;
    rep.operators_verified = eps <= eps_ell + INTERVAL_SLACK;

    let none: [CMat; 0] = [];
    rep.product_distance_x = sup_product_distance(space, &x, &code_marginal(space, &x)?, budget, &none)?.value;
    rep.product_distance_y = sup_product_distance(space, &y, &code_marginal(space, &y)?, budget, &none)?.value;
    rep.product_ok = rep.product_distance_x.max(rep.product_distance_y) <= rep.product_bound + CONVERSE_TOL;

    let ent = Entropies::new(space)?;
    let s_r = log_dim;
    rep.entropy_z = ent.of(z.sites())?;
    rep.mi_x = ent.of(x.sites())? + s_r - ent.of_with_reference(x.sites())?;
    rep.mi_y = ent.of(y.sites())? + s_r - ent.of_with_reference(y.sites())?;
    rep.exact_link = s_r <= rep.entropy_z + (rep.mi_x + rep.mi_y) / 2.0 + 1e-9;
    rep.upper_link = rep.entropy_z <= rep.entropy_cap + 1e-9;

    let t = 2.5 * eps_ell;
    if t < 0.5 && k >= 2 {
        let bx = crate::kernel::mi_continuity_bound(t, (1usize << x.len()).min(k).max(2))?;
        let by = crate::kernel::mi_continuity_bound(t, (1usize << y.len()).min(k).max(2))?;
        let lower = log_dim - (bx + by) / 2.0;
        let pre = lower / log_dim;
        rep.lower_bound = Some(lower);
        rep.prefactor = Some(pre);
        if pre > 0.0 {
            rep.lower_link = Some(lower <= rep.entropy_z + 1e-9);
        }
    }
    rep.status = if !rep.operators_verified {
        "failed"
    } else if rep.lower_link.is_none() {
        "inconclusive"
    } else if rep.product_ok && rep.exact_link && rep.upper_link && rep.lower_link == Some(true) {
        "certified"
    } else {
        "failed"
    }
    .into();
    Ok(rep)
}

/// `max(‖(L − V)Π‖, ‖(L† − V†)Π‖)` with `L` the code's logical for the Pauli `p`.
fn deformation_error(space: &CodeSpace, p: &Pauli, v: &Pauli) -> Result<f64> {
    if let Some(code) = space.stabilizer() {
        if !space.is_perturbed() && code.stabilizer_contains(&p.mul(v)) {
            return Ok(0.0);
        }
    }
    let k = space.code_dim();
    let mut worst = 0.0f64;
    for (pp, vv) in [(p.clone(), v.clone()), (dagger(p), dagger(v))] {
        let mut gram = zeros(k, k);
        let cols: Vec<Vec<C64>> = (0..k)
            .map(|i| {
                let w = space.basis_vector(i);
                let l = space.apply_logical(&pp, &w);
                let m = vv.apply(&w);
                l.iter().zip(&m).map(|(a, b)| a - b).collect()
            })
            .collect();
        for i in 0..k {
            for j in 0..k {
                gram[(i, j)] = cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
            }
        }
        let top = eigvalsh(&gram)?.into_iter().fold(0.0f64, f64::max);
        worst = worst.max(top.max(0.0).sqrt());
    }
    Ok(worst)
}

fn dagger(p: &Pauli) -> Pauli {
    let ph = p.phase();
    let flipped = if p.is_hermitian() { ph } else { (ph + 2) % 4 };
    p.clone().with_phase(flipped)
}

/// Entropies of the maximally entangled code state `Σ |w_i⟩|i⟩/√K`.
struct Entropies {
    psi: Vec<C64>,
    m: usize,
    n: usize,
}

impl Entropies {
    fn new(space: &CodeSpace) -> Result<Self> {
        let k = space.code_dim();
        let v = scale_re(&identity(k), 1.0 / (k as f64).sqrt());
        Ok(Entropies { psi: space.code_state(&v)?, m: space.num_qubits() + space.num_logical(), n: space.num_qubits() })
    }

    fn entropy(&self, rows: &[usize]) -> Result<f64> {
        let s = split_vector(&self.psi, self.m, rows);
        // the smaller Gram matrix has the same nonzero spectrum
        let g = if s.nrows() <= s.ncols() { &s * adjoint(&s) } else { adjoint(&s) * &s };
        Ok(spectrum_entropy(&eigvalsh(&g)?))
    }

    fn of(&self, sites: &[usize]) -> Result<f64> {
        self.entropy(sites)
    }

    fn of_with_reference(&self, sites: &[usize]) -> Result<f64> {
        let rows: Vec<usize> = sites.iter().copied().chain(self.n..self.m).collect();
        self.entropy(&rows)
    }
}
