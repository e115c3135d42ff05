//! Fixed values the library must reproduce, checked through the public API.

use approx::assert_abs_diff_eq;

use aqec::cleaning::{code_distance_bound_check, evaluate_tradeoff, twirl_defect, CodeParameters};
use aqec::codes::{zoo, Gate, LocalCircuit};
use aqec::engine::{
    decoupling_mu, delta_ell_interval, interval_for_channel, knill_laflamme_check, petz_recovery, recovery_error,
    shell_and_far, unitary_extension, QuantumChannel, SearchBudget,
};
use aqec::geometry::{
    boundary_shell, checkerboard_partition, four_square_partition, logical_support_grid, neighborhood, ring_sequence,
    winding_axes, Lattice, Region, Role,
};
use aqec::kernel::random::{gaussian_matrix, seeded};
use aqec::kernel::{bures_distance, fidelity, mi_continuity_bound, mi_correctability_bound, mutual_information};
use aqec::kernel::{trace_distance, PureState, StateMatrix};
use aqec::linalg::{c, max_abs_diff, op_norm, scale_re, sub, zeros, CMat};

fn quick(seed: u64) -> SearchBudget {
    SearchBudget { restarts: 2, max_iterations: 4, tolerance: 1e-7, seed }
}

fn ket(amps: &[(f64, f64)]) -> StateMatrix {
    let q = amps.len().trailing_zeros() as usize;
    PureState::normalized((0..q).collect(), amps.iter().map(|&(re, im)| c(re, im)).collect())
        .unwrap()
        .to_density()
}

#[test]
fn euclidean_balls_on_an_open_plane() {
    let lat = Lattice::open(2, 9).unwrap();
    let centre = Region::from_coords(&lat, &[vec![4, 4]]).unwrap();
    assert_eq!(neighborhood(&lat, &centre, 0.0).unwrap(), centre);
    assert_eq!(neighborhood(&lat, &centre, 1.0).unwrap().len(), 5);
    assert_eq!(neighborhood(&lat, &centre, 2.0).unwrap().len(), 13);
    assert_eq!(boundary_shell(&lat, &centre, 1.0).unwrap().len(), 4);
    assert_eq!(boundary_shell(&lat, &centre, 2.0).unwrap().len(), 12);
    assert!(boundary_shell(&lat, &Region::full(&lat), 1.0).unwrap().is_empty());
}

#[test]
fn rings_grow_by_the_perimeter() {
    let lat = Lattice::open(2, 31).unwrap();
    let seed = Region::from_coords(&lat, &[vec![15, 15]]).unwrap();
    let rings = ring_sequence(&lat, &seed, 1.0, 6).unwrap();
    assert_eq!(rings.regions.len(), 7);
    assert!(rings.regions.windows(2).all(|w| w[0].is_subset(&w[1]) && w[0].len() < w[1].len()));
    assert_eq!(rings.shell_sizes, vec![4, 8, 12, 16, 20, 24]);
}

#[test]
fn checkerboard_of_ten() {
    let lat = Lattice::torus(2, 10).unwrap();
    let plan = checkerboard_partition(&lat, 4, 1).unwrap();
    assert_eq!(plan.count(Role::XCell), 2);
    assert_eq!(plan.count(Role::YCell), 2);
    let z = plan.role_region(&lat, Role::ZBar).unwrap();
    assert_eq!(z.len(), 36);
    assert!(plan.verify(&lat).unwrap().ok());
    assert!(checkerboard_partition(&lat, 3, 1).is_err());
}

#[test]
fn four_squares_of_eight() {
    let lat = Lattice::torus(2, 8).unwrap();
    let (plan, _) = four_square_partition(&lat, 2.0).unwrap();
    assert!(plan.verify(&lat).unwrap().ok());
    let x = plan.role_region(&lat, Role::XCell).unwrap();
    let y = plan.role_region(&lat, Role::YCell).unwrap();
    let z = plan.role_region(&lat, Role::CornerDisk).unwrap();
    assert_eq!(x.len() + y.len() + z.len(), 64);
    assert_eq!(winding_axes(&lat, &x.union(&z).unwrap()).unwrap(), vec![true, true]);
    assert_eq!(winding_axes(&lat, &y.union(&z).unwrap()).unwrap(), vec![true, true]);
    assert!(four_square_partition(&lat, 0.0).is_err());
}

#[test]
fn logical_grid_shrinks_its_complement() {
    let lat = Lattice::open(2, 10).unwrap();
    let ys: Vec<usize> = [4, 8, 16]
        .iter()
        .map(|&d| logical_support_grid(&lat, d, 1.0).unwrap().0.part("Y").unwrap().region.len())
        .collect();
    assert!(ys.windows(2).all(|w| w[1] <= w[0]), "{ys:?}");
}

#[test]
fn zero_and_plus() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let zero = ket(&[(1.0, 0.0), (0.0, 0.0)]);
    let plus = ket(&[(h, 0.0), (h, 0.0)]);
    assert_abs_diff_eq!(fidelity(&zero, &plus).unwrap(), h, epsilon = 1e-10);
    assert_abs_diff_eq!(bures_distance(&zero, &plus).unwrap(), (1.0 - h).sqrt(), epsilon = 1e-10);
    assert_abs_diff_eq!(bures_distance(&zero, &plus).unwrap(), 0.5412, epsilon = 1e-4);
    assert_abs_diff_eq!(trace_distance(&zero, &plus).unwrap(), h, epsilon = 1e-10);
}

#[test]
fn ghz_mutual_information() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![(0.0, 0.0); 8];
    amps[0] = (h, 0.0);
    amps[7] = (h, 0.0);
    let ghz = ket(&amps);
    let i = mutual_information(&ghz, &[0], &[1]).unwrap();
    assert_abs_diff_eq!(i, std::f64::consts::LN_2, epsilon = 1e-10);
}

#[test]
fn bound_arithmetic() {
    assert_abs_diff_eq!(mi_continuity_bound(0.1, 2).unwrap(), 2.696, epsilon = 1e-3);
    let r2 = std::f64::consts::SQRT_2;
    let exact = 18.0 * r2 * 0.01 * (2.0 / (2.0 * r2 * 0.01)).ln();
    assert_abs_diff_eq!(mi_correctability_bound(1, 0.01).unwrap(), exact, epsilon = 1e-12);
    // 1.0841, usually quoted truncated to 1.083
    assert_abs_diff_eq!(exact, 1.083, epsilon = 2e-3);
    for l in [3usize, 4, 6] {
        let p = CodeParameters { n: 2 * l * l, k: 2, d: l, delta: 0.0, ell: 1.0, dimension: 2 };
        assert!(evaluate_tradeoff(p, 1.0, 1.0).unwrap().holds, "L = {l}");
    }
    let toric = code_distance_bound_check(3, 2, 1.0, 0.0, Some(3));
    assert!(toric.guard);
    assert_eq!((toric.bound, toric.holds), (15.0, Some(true)));
    let chain = code_distance_bound_check(4, 1, 1.0, 0.0, Some(1));
    assert_eq!((chain.bound, chain.holds), (5.0, Some(true)));
}

#[test]
fn zoo_distances_and_logicals() {
    let five = zoo::five_qubit();
    let s = five.stabilizer().unwrap();
    assert_eq!(s.distance().unwrap(), 3);
    assert_eq!(five.logical_pairs().len(), 1);
    assert!(!five.logical_pairs()[0].x.commutes_with(&five.logical_pairs()[0].z));
    for a in 0..5 {
        for b in a + 1..5 {
            assert!(!s.region_supports_logical(&[a, b]));
        }
    }
    assert!((0..5).any(|a| (a + 1..5).any(|b| (b + 1..5).any(|c| s.region_supports_logical(&[a, b, c])))));

    let t2 = zoo::toric_code(2, 2).unwrap();
    assert_eq!(t2.stabilizer().unwrap().distance().unwrap(), 2);
    assert_eq!(t2.logical_pairs().len(), 2);
    let loop_x = &t2.logical_pairs()[0].x;
    assert_eq!(loop_x.weight(), 2);
    assert!(t2.stabilizer().unwrap().region_supports_logical(&loop_x.support()));

    let t3 = zoo::toric_code(3, 3).unwrap();
    assert_eq!((t3.num_qubits(), t3.num_logical()), (18, 2));
    assert_eq!(t3.stabilizer().unwrap().distance().unwrap(), 3);

    assert_eq!(zoo::repetition(4).unwrap().stabilizer().unwrap().distance().unwrap(), 1);
}

#[test]
fn single_rotation_keeps_a_projector() {
    let five = zoo::five_qubit();
    let circuit = LocalCircuit::new(5, vec![vec![Gate::single(0, 'X', 0.05).unwrap()]]).unwrap();
    let pert = five.perturb(&circuit).unwrap();
    let p0 = five.projector().unwrap();
    let p1 = pert.projector().unwrap();
    assert_abs_diff_eq!(aqec::linalg::trace(&p1).re, 2.0, epsilon = 1e-10);
    assert!(max_abs_diff(&(&p1 * &p1), &p1) < 1e-9);
    assert!(op_norm(&sub(&p1, &p0)).unwrap() > 1e-3);
}

#[test]
fn knill_laflamme_on_five_qubits() {
    let five = zoo::five_qubit();
    for a in 0..5 {
        for b in a + 1..5 {
            let r = knill_laflamme_check(&five, &Region::new(five.layout(), [a, b]).unwrap()).unwrap();
            assert!(r.holds && r.max_residual < 1e-9, "{a},{b}: {r:?}");
        }
    }
    let r = knill_laflamme_check(&five, &Region::new(five.layout(), [1, 2, 3]).unwrap()).unwrap();
    assert!(!r.holds);
}

#[test]
fn exact_recoveries_and_a_loop() {
    let five = zoo::five_qubit();
    for q in 0..5 {
        let a = Region::new(five.layout(), [q]).unwrap();
        let (b, _) = shell_and_far(&five, &a, 4.0).unwrap();
        let petz = petz_recovery(&five, &a, &b).unwrap();
        assert!(recovery_error(&petz, &five, &a, &quick(q as u64)).unwrap().value < 1e-6);
    }
    let t2 = zoo::toric_code(2, 2).unwrap();
    let edge = Region::new(t2.layout(), [0]).unwrap();
    let iv = delta_ell_interval(&t2, &edge, 1.0, &quick(1)).unwrap();
    assert!(iv.delta_upper < 1e-6 && iv.mu < 1e-6, "{iv:?}");

    let lp = Region::new(t2.layout(), t2.logical_pairs()[0].z.support()).unwrap();
    let (_, far) = shell_and_far(&t2, &lp, 1.0).unwrap();
    assert!(decoupling_mu(&t2, &lp, &far, &quick(2)).unwrap().value > 0.1);
    let iv = delta_ell_interval(&t2, &lp, 1.0, &quick(3)).unwrap();
    assert!(iv.delta_lower > 0.1 && iv.is_consistent(), "{iv:?}");

    // throwing the loop away and preparing junk in its place
    let (shell, _) = shell_and_far(&t2, &lp, 1.0).unwrap();
    let mut omega = zeros(1 << lp.len(), 1 << lp.len());
    omega[(0, 0)] = c(1.0, 0.0);
    let junk = QuantumChannel::fixed_garbage(lp.sites(), shell.sites(), &omega).unwrap();
    let iv = interval_for_channel(&t2, &lp, 1.0, &junk, &quick(4)).unwrap();
    assert!(iv.delta_upper > 0.3, "{iv:?}");
}

#[test]
fn perturbed_recovery_shrinks_with_the_circuit() {
    let five = zoo::five_qubit();
    let a = Region::new(five.layout(), [1, 2]).unwrap();
    let errs: Vec<f64> = [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|&eps| {
            let pert = five.perturb(&LocalCircuit::brickwork(five.layout(), 1, eps, 4).unwrap()).unwrap();
            delta_ell_interval(&pert, &a, 4.0, &quick(5)).unwrap().delta_upper
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[3] > 0.0);
}

#[test]
fn contraction_extends_to_a_unitary() {
    let mut rng = seeded(21);
    let g = gaussian_matrix(3, 3, &mut rng);
    let m: CMat = scale_re(&g, 0.99 / op_norm(&g).unwrap());
    let u = unitary_extension(&m).unwrap();
    assert!(aqec::linalg::is_unitary(&u, 1e-10));
    let top = u.as_ref().submatrix(0, 0, 3, 3).to_owned();
    assert!(max_abs_diff(&top, &m) < 1e-10);
}

#[test]
fn logical_pauli_twirl_is_exact() {
    assert!(twirl_defect(&zoo::five_qubit(), 3).unwrap() < 1e-8);
    assert!(twirl_defect(&zoo::toric_code(2, 2).unwrap(), 3).unwrap() < 1e-8);
}
