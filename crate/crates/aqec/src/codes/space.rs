//! Code subspaces as explicit isometries, optionally dressed by a local circuit.

use super::circuit::LocalCircuit;
use super::pauli::Pauli;
use super::stabilizer::{LogicalPair, StabilizerCode};
use crate::error::{invalid, Error, Result};
use crate::geometry::{Layout, SiteMetric};
use crate::kernel::random::{gaussian_matrix, random_vector, seeded, Rng};
use crate::kernel::{PureState, StateMatrix};
use crate::linalg::{adjoint, col_vec, frobenius, identity, max_abs_diff, scale_re, vnorm, zeros, CMat, C64, ZERO};

/// Dense projectors and density matrices are built only up to this many qubits.
pub const MAX_DENSE_QUBITS: usize = 12;
/// Isometries are stored densely; beyond this the vectors get unwieldy.
pub const MAX_ENCODED_QUBITS: usize = 22;

#[derive(Clone, Debug)]
pub struct CodeSpace {
    name: String,
    layout: Layout,
    stabilizer: Option<StabilizerCode>,
    logicals: Vec<LogicalPair>,
    circuit: Option<LocalCircuit>,
    isometry: CMat,
}

fn project(code: &StabilizerCode, z_logicals: &[Pauli], psi: &[C64]) -> Vec<C64> {
    let mut v = psi.to_vec();
    for g in code.generators().iter().chain(z_logicals) {
        let gv = g.apply(&v);
        for (a, b) in v.iter_mut().zip(gv) {
            *a = (*a + b) * 0.5;
        }
    }
    v
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = vnorm(v);
    if n > 0.0 {
        for a in v.iter_mut() {
            *a /= n;
        }
    }
    n
}

impl CodeSpace {
    /// Encodes the stabilizer code: `|0̄⟩` from a projected seed, then `X̄^y|0̄⟩`.
    pub fn from_stabilizer(name: impl Into<String>, code: StabilizerCode, layout: Layout) -> Result<Self> {
        let n = code.num_qubits();
        if layout.num_sites() != n {
            return invalid(format!("layout has {} qubits, code has {n}", layout.num_sites()));
        }
        if n > MAX_ENCODED_QUBITS {
            return Err(Error::Capacity(format!("explicit encoding limited to {MAX_ENCODED_QUBITS} qubits")));
        }
        let logicals = code.logical_operators();
        let k = logicals.len();
        let zs: Vec<Pauli> = logicals.iter().map(|p| p.z.clone()).collect();
        let dim = 1usize << n;
        let mut zero = None;
        for s in 0..dim.min(64) {
            let mut e = vec![ZERO; dim];
            e[s] = C64::new(1.0, 0.0);
            let mut v = project(&code, &zs, &e);
            if normalize(&mut v) > 1e-6 {
                zero = Some(v);
                break;
            }
        }
        let zero = match zero {
            Some(v) => v,
            None => {
                let mut rng = seeded(0x5eed);
                let mut v = project(&code, &zs, &random_vector(dim, &mut rng));
                if normalize(&mut v) < 1e-9 {
                    return Err(Error::Numerical("code space appears empty".into()));
                }
                v
            }
        };
        let kdim = 1usize << k;
        let mut w = zeros(dim, kdim);
        for y in 0..kdim {
            let mut v = zero.clone();
            for (j, pair) in logicals.iter().enumerate() {
                if y >> j & 1 == 1 {
                    v = pair.x.apply(&v);
                }
            }
            for i in 0..dim {
                w[(i, y)] = v[i];
            }
        }
        Ok(CodeSpace { name: name.into(), layout, stabilizer: Some(code), logicals, circuit: None, isometry: w })
    }

    /// Arbitrary code given by an isometry with orthonormal columns.
    pub fn from_isometry(name: impl Into<String>, layout: Layout, isometry: CMat) -> Result<Self> {
        let n = layout.num_sites();
        if isometry.nrows() != 1usize << n {
            return invalid("isometry row count must be 2^n");
        }
        let k = isometry.ncols().trailing_zeros() as usize;
        if isometry.ncols() != 1usize << k || isometry.ncols() == 0 {
            return invalid("code dimension must be a power of two");
        }
        if max_abs_diff(&(adjoint(&isometry) * &isometry), &identity(isometry.ncols())) > 1e-9 {
            return invalid("columns are not orthonormal");
        }
        Ok(CodeSpace { name: name.into(), layout, stabilizer: None, logicals: vec![], circuit: None, isometry })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn stabilizer(&self) -> Option<&StabilizerCode> {
        self.stabilizer.as_ref()
    }

    pub fn logical_pairs(&self) -> &[LogicalPair] {
        &self.logicals
    }

    pub fn circuit(&self) -> Option<&LocalCircuit> {
        self.circuit.as_ref()
    }

    pub fn num_qubits(&self) -> usize {
        self.layout.num_sites()
    }

    pub fn num_logical(&self) -> usize {
        self.isometry.ncols().trailing_zeros() as usize
    }

    pub fn code_dim(&self) -> usize {
        self.isometry.ncols()
    }

    pub fn isometry(&self) -> &CMat {
        &self.isometry
    }

    pub fn basis_vector(&self, i: usize) -> Vec<C64> {
        col_vec(&self.isometry, i)
    }

    /// `U W` for a circuit `U`; logical operators follow as `U P U†`.
    pub fn perturb(&self, circuit: &LocalCircuit) -> Result<CodeSpace> {
        if circuit.num_qubits() != self.num_qubits() {
            return invalid("circuit and code act on different qubit counts");
        }
        let k = self.code_dim();
        let dim = self.isometry.nrows();
        let mut w = zeros(dim, k);
        for j in 0..k {
            let v = circuit.apply(&self.basis_vector(j));
            for i in 0..dim {
                w[(i, j)] = v[i];
            }
        }
        let combined = match &self.circuit {
            None => circuit.clone(),
            Some(prev) => {
                let layers = prev.layers().iter().chain(circuit.layers()).cloned().collect();
                LocalCircuit::new(self.num_qubits(), layers)?
            }
        };
        Ok(CodeSpace {
            name: format!("{}~", self.name),
            layout: self.layout.clone(),
            stabilizer: self.stabilizer.clone(),
            logicals: self.logicals.clone(),
            circuit: Some(combined),
            isometry: w,
        })
    }

    pub fn is_perturbed(&self) -> bool {
        self.circuit.as_ref().is_some_and(|c| !c.is_identity())
    }

    fn check_dense(&self, extra: usize) -> Result<()> {
        let n = self.num_qubits() + extra;
        if n > MAX_DENSE_QUBITS {
            return Err(Error::Capacity(format!("dense operator on {n} qubits exceeds the limit of {MAX_DENSE_QUBITS}")));
        }
        Ok(())
    }

    pub fn projector(&self) -> Result<CMat> {
        self.check_dense(0)?;
        Ok(&self.isometry * adjoint(&self.isometry))
    }

    /// Every logical Pauli (all `4^k` products of the conjugate pairs), identity first.
    pub fn logical_paulis(&self) -> Vec<Pauli> {
        let n = self.num_qubits();
        let k = self.logicals.len();
        (0..1usize << (2 * k))
            .map(|code| {
                let mut p = Pauli::identity(n);
                for (j, pair) in self.logicals.iter().enumerate() {
                    if code >> (2 * j) & 1 == 1 {
                        p = p.mul(&pair.x);
                    }
                    if code >> (2 * j + 1) & 1 == 1 {
                        p = p.mul(&pair.z);
                    }
                }
                p.hermitian_form()
            })
            .collect()
    }

    /// `U P U†` applied to a vector.
    pub fn apply_logical(&self, p: &Pauli, psi: &[C64]) -> Vec<C64> {
        match &self.circuit {
            None => p.apply(psi),
            Some(c) => c.apply(&p.apply(&c.apply_inverse(psi))),
        }
    }

    pub fn logical_matrix(&self, p: &Pauli) -> Result<CMat> {
        self.check_dense(0)?;
        let m = p.to_matrix();
        match &self.circuit {
            None => Ok(m),
            Some(c) => {
                let u = c.to_matrix()?;
                Ok(&u * &m * adjoint(&u))
            }
        }
    }

    /// `Σ V[i,r] w_i ⊗ |r⟩` with the reference qubits labelled `n..n+k`.
    pub fn code_state(&self, v: &CMat) -> Result<Vec<C64>> {
        let k = self.code_dim();
        if v.nrows() != k {
            return invalid("coefficient matrix must have one row per code basis vector");
        }
        let dim = self.isometry.nrows();
        let r = v.ncols();
        let mut psi = vec![ZERO; dim * r];
        for col in 0..r {
            for i in 0..k {
                let c = v[(i, col)];
                if c == ZERO {
                    continue;
                }
                for s in 0..dim {
                    psi[s + dim * col] += c * self.isometry[(s, i)];
                }
            }
        }
        let norm = vnorm(&psi);
        if (norm - 1.0).abs() > 1e-9 {
            return invalid(format!("code state has norm {norm}, expected 1"));
        }
        Ok(psi)
    }

    fn joint_labels(&self) -> Vec<usize> {
        (0..self.num_qubits() + self.num_logical()).collect()
    }

    /// Code half of a maximally entangled state with a `k`-qubit reference.
    pub fn maximally_mixed_code_state(&self) -> Result<StateMatrix> {
        self.check_dense(self.num_logical())?;
        let k = self.code_dim();
        let v = scale_re(&identity(k), 1.0 / (k as f64).sqrt());
        Ok(PureState::new(self.joint_labels(), self.code_state(&v)?)?.to_density())
    }

    pub fn random_code_state(&self, rng: &mut Rng) -> Result<PureState> {
        let k = self.code_dim();
        let g = gaussian_matrix(k, k, rng);
        let v = scale_re(&g, 1.0 / frobenius(&g));
        PureState::new(self.joint_labels(), self.code_state(&v)?)
    }
}
