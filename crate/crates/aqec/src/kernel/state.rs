use serde::{Deserialize, Serialize};

use super::tensor::{partial_trace_positions, positions};
use crate::error::{invalid, Result};
use crate::linalg::{eigvalsh, hermiticity_defect, trace, CMat, C64};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
pub const NORM_TOL: f64 = 1e-12;

/// Hermitian operator on the qubits named by `labels` (sorted, little-endian).
#[derive(Clone, Debug)]
pub struct StateMatrix {
    labels: Vec<usize>,
    mat: CMat,
}

fn check_labels(labels: &[usize], dim: usize) -> Result<()> {
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("labels must be strictly increasing");
    }
    if labels.len() >= usize::BITS as usize || dim != 1usize << labels.len() {
        return invalid(format!("dimension {dim} does not match {} qubit labels", labels.len()));
    }
    Ok(())
}

impl StateMatrix {
    /// Any Hermitian matrix (within [`HERMITIAN_TOL`]) with matching labels.
    pub fn new(labels: Vec<usize>, mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return invalid("state matrix must be square");
        }
        check_labels(&labels, mat.nrows())?;
        let defect = hermiticity_defect(&mat);
        if !(defect <= HERMITIAN_TOL) {
            return invalid(format!("matrix is not Hermitian (defect {defect:e})"));
        }
        Ok(StateMatrix { labels, mat })
    }

    /// Unit-trace positive semidefinite matrix.
    pub fn density(labels: Vec<usize>, mat: CMat) -> Result<Self> {
        let s = Self::new(labels, mat)?;
        s.check_density()?;
        Ok(s)
    }

    pub fn check_density(&self) -> Result<()> {
        let tr = trace(&self.mat);
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return invalid(format!("trace {tr} is not 1"));
        }
        self.check_psd()
    }

    pub fn check_psd(&self) -> Result<()> {
        let low = eigvalsh(&self.mat)?.into_iter().fold(f64::INFINITY, f64::min);
        if low < -PSD_TOL {
            return invalid(format!("matrix has negative eigenvalue {low:e}"));
        }
        Ok(())
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn trace(&self) -> f64 {
        trace(&self.mat).re
    }
}

/// Unit vector on the qubits named by `labels`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    labels: Vec<usize>,
    amps: Vec<C64>,
}

impl PureState {
    pub fn new(labels: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        check_labels(&labels, amps.len())?;
        let norm = crate::linalg::vnorm(&amps);
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return invalid(format!("state norm {norm} is not 1"));
        }
        Ok(PureState { labels, amps })
    }

    /// Normalises `amps` first.
    pub fn normalized(labels: Vec<usize>, mut amps: Vec<C64>) -> Result<Self> {
        let norm = crate::linalg::vnorm(&amps);
        if !(norm > 0.0 && norm.is_finite()) {
            return invalid("cannot normalise a zero vector");
        }
        for a in &mut amps {
            *a /= norm;
        }
        Self::new(labels, amps)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn to_density(&self) -> StateMatrix {
        let d = self.amps.len();
        let mat = CMat::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj());
        StateMatrix { labels: self.labels.clone(), mat }
    }
}

/// Reduced state on `keep` (a subset of the labels).
pub fn partial_trace(rho: &StateMatrix, keep: &[usize]) -> Result<StateMatrix> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let pos = positions(rho.labels(), &keep)?;
    let mat = partial_trace_positions(rho.matrix(), rho.num_qubits(), &pos);
    Ok(StateMatrix { labels: keep, mat })
}

/// Tensor product of states on disjoint labels.
pub fn tensor(a: &StateMatrix, b: &StateMatrix) -> Result<StateMatrix> {
    let (mat, labels) = super::tensor::tensor_by_labels(a.matrix(), a.labels(), b.matrix(), b.labels())?;
    Ok(StateMatrix { labels, mat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, max_abs_diff, ONE, ZERO};

    pub(crate) fn bell() -> PureState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![0, 1], vec![c(s, 0.0), ZERO, ZERO, c(s, 0.0)]).unwrap()
    }

    #[test]
    fn bell_reduces_to_maximally_mixed() {
        let r = partial_trace(&bell().to_density(), &[1]).unwrap();
        assert_eq!(r.labels(), &[1]);
        let half = CMat::from_fn(2, 2, |i, j| if i == j { c(0.5, 0.0) } else { ZERO });
        assert!(max_abs_diff(r.matrix(), &half) < 1e-15);
    }

    #[test]
    fn product_state_trace_recovers_factor() {
        let a = StateMatrix::density(vec![3], CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(0.7, 0.0),
            (1, 1) => c(0.3, 0.0),
            (0, 1) => c(0.1, 0.2),
            _ => c(0.1, -0.2),
        }))
        .unwrap();
        let b = StateMatrix::density(vec![1, 5], CMat::from_fn(4, 4, |i, j| if i == j { c(0.25, 0.0) } else { ZERO })).unwrap();
        let ab = tensor(&a, &b).unwrap();
        assert_eq!(ab.labels(), &[1, 3, 5]);
        let back = partial_trace(&ab, &[3]).unwrap();
        assert!(max_abs_diff(back.matrix(), a.matrix()) < 1e-14);
        assert!(partial_trace(&ab, &[2]).is_err());
    }

    #[test]
    fn validation() {
        let m = CMat::from_fn(2, 2, |i, j| if i == 0 && j == 1 { ONE } else { ZERO });
        assert!(StateMatrix::new(vec![0], m).is_err());
        let neg = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => c(1.5, 0.0),
            (1, 1) => c(-0.5, 0.0),
            _ => ZERO,
        });
        assert!(StateMatrix::density(vec![0], neg).is_err());
        assert!(StateMatrix::new(vec![1, 0], crate::linalg::identity(4)).is_err());
        assert!(PureState::new(vec![0], vec![ONE, ONE]).is_err());
        assert!(PureState::normalized(vec![0], vec![ZERO, ZERO]).is_err());
    }
}
