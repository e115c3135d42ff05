//! Seeded sampling of states and unitaries.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::state::{PureState, StateMatrix};
use crate::linalg::{c, trace, CMat, C64, ZERO};

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut Rng) -> CMat {
    let mut m = CMat::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Haar unitary: Gram–Schmidt of a Ginibre matrix, i.e. QR with positive diagonal R.
pub fn haar_unitary(d: usize, rng: &mut Rng) -> CMat {
    let mut m = gaussian_matrix(d, d, rng);
    for j in 0..d {
        for _ in 0..2 {
            for k in 0..j {
                let mut proj = ZERO;
                for i in 0..d {
                    proj += m[(i, k)].conj() * m[(i, j)];
                }
                for i in 0..d {
                    let v = m[(i, k)];
                    m[(i, j)] -= proj * v;
                }
            }
        }
        let norm = (0..d).map(|i| m[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..d {
            m[(i, j)] /= norm;
        }
    }
    m
}

pub fn random_vector(d: usize, rng: &mut Rng) -> Vec<C64> {
    let mut v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
    let norm = crate::linalg::vnorm(&v);
    for x in &mut v {
        *x /= norm;
    }
    v
}

pub fn random_pure(labels: &[usize], rng: &mut Rng) -> PureState {
    PureState::new(labels.to_vec(), random_vector(1 << labels.len(), rng)).expect("normalised")
}

/// Random mixed state G G† / Tr with G a d × rank Ginibre matrix.
pub fn random_density(labels: &[usize], rank: usize, rng: &mut Rng) -> StateMatrix {
    let d = 1 << labels.len();
    let g = gaussian_matrix(d, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = trace(&m).re;
    let m = crate::linalg::herm_part(&crate::linalg::scale_re(&m, 1.0 / tr));
    StateMatrix::density(labels.to_vec(), m).expect("positive by construction")
}

/// (1 − s)ρ + s·σ for a random σ of full rank; trace distance at most s.
pub fn nearby_density(rho: &StateMatrix, s: f64, rng: &mut Rng) -> StateMatrix {
    let other = random_density(rho.labels(), rho.dim(), rng);
    let m = crate::linalg::herm_part(&(crate::linalg::scale_re(rho.matrix(), 1.0 - s) + crate::linalg::scale_re(other.matrix(), s)));
    StateMatrix::density(rho.labels().to_vec(), m).expect("convex combination")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_unitary;

    #[test]
    fn haar_is_unitary_and_reproducible() {
        let a = haar_unitary(6, &mut seeded(9));
        let b = haar_unitary(6, &mut seeded(9));
        assert!(is_unitary(&a, 1e-12));
        assert_eq!(a, b);
        assert_ne!(a, haar_unitary(6, &mut seeded(10)));
    }

    #[test]
    fn densities_are_states() {
        let mut rng = seeded(1);
        for rank in 1..5 {
            let r = random_density(&[0, 2], rank, &mut rng);
            assert!(r.check_density().is_ok());
        }
    }
}
