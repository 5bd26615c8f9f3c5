use concbound_core::bounds::{self, chen_global, kappa, tau22, tau_roof_estimate, zeta};
use concbound_core::concurrence::{pure_concurrence, pure_concurrence_minors, roof_estimate, RoofOptions};
use concbound_core::distill::{self, Distillable, SearchOptions};
use concbound_core::linalg::{
    kron, partial_trace, partial_transpose_a, realign, trace_norm, unrealign, BipartiteIndex, Side,
};
use concbound_core::random::{haar_pure_state, haar_unitary, random_density, seeded};
use concbound_core::states::{builtin, from_pure, tensor_copies, BipartiteState};
use concbound_core::subspace::{binomial, enumerate, project};
use concbound_core::ComplexMatrix;
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 2usize..=4)
}

fn state(m: usize, n: usize, rank: usize, seed: u64) -> BipartiteState {
    random_density(BipartiteIndex::new(m, n).unwrap(), rank, &mut seeded(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_an_involution((m, n) in dims(), rank in 1usize..6, seed: u64) {
        let rho = state(m, n, rank, seed);
        let idx = rho.index();
        let twice = partial_transpose_a(&partial_transpose_a(rho.matrix(), idx).unwrap(), idx).unwrap();
        prop_assert!(twice.max_abs_diff(rho.matrix()) <= 1e-12);
    }

    #[test]
    fn partial_trace_keeps_trace((m, n) in dims(), rank in 1usize..6, seed: u64, scale in 0.1f64..3.0) {
        let rho = state(m, n, rank, seed);
        let mat = rho.matrix().scale(scale);
        for side in [Side::A, Side::B] {
            let tr = partial_trace(&mat, rho.index(), side).unwrap().trace().re;
            prop_assert!((tr - scale).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn realign_inverts_exactly((m, n) in dims(), rank in 1usize..6, seed: u64) {
        let rho = state(m, n, rank, seed);
        let back = unrealign(&realign(rho.matrix(), rho.index()).unwrap(), rho.index()).unwrap();
        prop_assert_eq!(&back, rho.matrix());
    }

    #[test]
    fn kron_multiplies_traces(seed: u64, a in 1usize..5, b in 1usize..5) {
        let mut rng = seeded(seed);
        let x = ComplexMatrix::from_fn(a, a, |_, _| concbound_core::random::complex_gaussian(&mut rng));
        let y = ComplexMatrix::from_fn(b, b, |_, _| concbound_core::random::complex_gaussian(&mut rng));
        let got = kron(&x, &y).unwrap().trace();
        let want = x.trace() * y.trace();
        prop_assert!((got - want).norm() <= 1e-12 * want.norm().max(1.0));
    }

    #[test]
    fn block_traces_count_each_diagonal_entry((m, n) in dims(), seed: u64, rank in 1usize..6) {
        let rho = state(m, n, rank, seed);
        for s in 2..=m {
            for t in 2..=n {
                let total: f64 = enumerate(m, n, s, t)
                    .unwrap()
                    .iter()
                    .map(|sel| project(&rho, sel).unwrap().trace())
                    .sum();
                let want = (binomial(m - 1, s - 1) * binomial(n - 1, t - 1)) as f64;
                prop_assert!((total - want).abs() <= 1e-12 * want);
            }
        }
    }

    #[test]
    fn pure_concurrence_forms_agree((m, n) in dims(), seed: u64) {
        let psi = haar_pure_state(m, n, &mut seeded(seed)).unwrap();
        let minors = pure_concurrence_minors(psi.coeffs(), None).unwrap();
        prop_assert!((pure_concurrence(&psi) - minors).abs() <= 1e-10);
    }

    #[test]
    fn bounds_are_invariant_under_local_unitaries(seed: u64, rank in 1usize..5) {
        let rho = state(3, 3, rank, seed);
        let mut rng = seeded(seed ^ 0x55);
        let rotated = rho.local_unitary(&haar_unitary(3, &mut rng), &haar_unitary(3, &mut rng)).unwrap();
        let (a, b) = (chen_global(&rho).unwrap().value_sq, chen_global(&rotated).unwrap().value_sq);
        prop_assert!((a - b).abs() <= 1e-10);
    }
}

#[test]
fn partial_transpose_norm_dominates_trace() {
    let mut rng = seeded(3);
    let mut worst = f64::INFINITY;
    for i in 0..1000 {
        let (m, n) = (2 + i % 3, 2 + (i / 3) % 3);
        let idx = BipartiteIndex::new(m, n).unwrap();
        let rho = random_density(idx, 1 + i % (m * n), &mut rng).unwrap();
        let scaled = rho.matrix().scale(0.5 + (i % 7) as f64);
        let gap = trace_norm(&partial_transpose_a(&scaled, idx).unwrap()).unwrap() - scaled.trace().re;
        worst = worst.min(gap / scaled.trace().re);
    }
    assert!(worst >= -1e-12, "worst relative gap {worst}");
}

#[test]
fn builtins_are_valid_states() {
    for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
        for alpha in [2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0] {
            for (name, params) in [
                ("rho0", vec![("p", p)]),
                ("sigma_alpha", vec![("alpha", alpha)]),
                ("rho1", vec![("p", p), ("alpha", alpha)]),
                ("isotropic", vec![("d", 3.0), ("w", p)]),
            ] {
                let rho = builtin(name, &params).unwrap();
                assert!((rho.trace() - 1.0).abs() < 1e-12);
                assert!(rho.matrix().hermitian_deviation() == 0.0);
                assert!(rho.min_eigenvalue().unwrap() >= -1e-12, "{name} {params:?}");
            }
        }
        // The literal rho2 is Hermitian with unit trace but has one negative eigenvalue.
        let rho2 = builtin("rho2", &[("p", p)]).unwrap();
        assert!((rho2.trace() - 1.0).abs() < 1e-12);
        let want = p * (1.0 - 2f64.sqrt()) / 6.0;
        assert!((rho2.min_eigenvalue().unwrap() - want.min(0.0)).abs() < 1e-12);
    }
}

#[test]
fn sigma_alpha_ppt_boundary() {
    for i in 0..=20 {
        let alpha = 2.0 + 0.1 * i as f64;
        let rho = builtin("sigma_alpha", &[("alpha", alpha)]).unwrap();
        let (_, min) = distill::is_npt(&rho, 0.0).unwrap();
        assert!(min >= -1e-10, "α = {alpha}: {min}");
    }
    for alpha in [4.05, 4.1, 4.3, 4.5, 4.8, 5.0] {
        let rho = builtin("sigma_alpha", &[("alpha", alpha)]).unwrap();
        let (_, min) = distill::is_npt(&rho, 0.0).unwrap();
        assert!(min < -1e-6, "α = {alpha}: {min}");
    }
}

#[test]
fn tensor_copies_preserve_positivity() {
    let mut rng = seeded(8);
    for (m, n) in [(2, 2), (2, 3), (3, 3), (4, 4)] {
        let rho = random_density(BipartiteIndex::new(m, n).unwrap(), 2, &mut rng).unwrap();
        let two = tensor_copies(&rho, 2).unwrap();
        assert_eq!((two.m(), two.n()), (m * m, n * n));
        assert!((two.trace() - 1.0).abs() < 1e-12);
        assert!(two.min_eigenvalue().unwrap() >= -1e-8);
    }
}

#[test]
fn bound_chain_on_random_states() {
    let roof = RoofOptions {
        restarts: 1,
        seed: 12,
        ..RoofOptions::default()
    };
    let mut rng = seeded(50);
    let idx = BipartiteIndex::new(3, 3).unwrap();
    for i in 0..50 {
        let rho = random_density(idx, 1 + i % 3, &mut rng).unwrap();
        let global = roof_estimate(&rho, &roof).unwrap().value;
        let ceiling = global * global + 1e-4;
        let t22 = tau22(&rho).unwrap().value_sq;
        assert!(t22 <= ceiling, "state {i}: tau22 {t22} > roof² {ceiling}");
        assert!(chen_global(&rho).unwrap().value() <= global + 1e-8);
        for (s, t) in [(2, 2), (3, 2), (3, 3)] {
            let k = kappa(&rho, s, t).unwrap().value_sq;
            let z = zeta(&rho, s, t).unwrap().value_sq;
            let r = tau_roof_estimate(&rho, s, t, &roof).unwrap().value_sq;
            assert!(k <= z + 1e-12, "state {i} ({s},{t}): kappa {k} > zeta {z}");
            assert!(z <= r + 1e-6, "state {i} ({s},{t}): zeta {z} > roof {r}");
            assert!(z <= ceiling, "state {i} ({s},{t}): zeta {z} > roof² {ceiling}");
        }
    }
}

#[test]
fn tau_roof_is_exact_on_pure_states() {
    let mut rng = seeded(77);
    for _ in 0..5 {
        let psi = haar_pure_state(3, 3, &mut rng).unwrap();
        let c2 = pure_concurrence(&psi).powi(2);
        let rho = from_pure(&psi);
        for (s, t) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let r = tau_roof_estimate(&rho, s, t, &RoofOptions::default()).unwrap();
            assert!((r.value_sq - c2).abs() <= 1e-8, "({s},{t}): {} vs {c2}", r.value_sq);
        }
    }
}

#[test]
fn subspace_zeta_is_at_least_global_for_rho1() {
    for alpha in [3.2, 3.5, 3.8, 4.0] {
        let rho = builtin("rho1", &[("p", 0.8), ("alpha", alpha)]).unwrap();
        let global = zeta(&rho, 4, 4).unwrap().value_sq;
        let best = (2..=4)
            .flat_map(|s| (2..=4).map(move |t| (s, t)))
            .filter(|&st| st != (4, 4))
            .map(|(s, t)| zeta(&rho, s, t).unwrap().value_sq)
            .fold(0.0, f64::max);
        assert!(global <= best * (1.0 + 1e-12), "α = {alpha}: global {global}, best {best}");
        // The realignment norm already sees σ_α inside the direct sum.
        assert!(global > 1e-6, "α = {alpha}: global {global}");
    }
}

#[test]
fn ou_implies_theorem3_and_separable_is_never_yes() {
    let mut rng = seeded(31);
    let opts = SearchOptions {
        max_copies: 1,
        ..SearchOptions::default()
    };
    for i in 0..40 {
        let (m, n) = (2 + i % 2, 3);
        let rho = random_density(BipartiteIndex::new(m, n).unwrap(), 1 + i % 4, &mut rng).unwrap();
        if distill::ou_criterion(&rho, 1).unwrap().is_some() {
            assert!(distill::theorem3_witness(&rho, &opts).unwrap().is_some());
        }
    }
    for i in 0..10 {
        let mut mat = ComplexMatrix::zeros(9, 9);
        for _ in 0..3 {
            let x = from_pure(&haar_pure_state(3, 3, &mut rng).unwrap());
            let ra = partial_trace(x.matrix(), x.index(), Side::B).unwrap();
            let rb = partial_trace(x.matrix(), x.index(), Side::A).unwrap();
            mat = &mat + &kron(&ra, &rb).unwrap().scale(1.0 / 3.0);
        }
        let sep = BipartiteState::new(BipartiteIndex::new(3, 3).unwrap(), mat).unwrap();
        let v = distill::verdict(&sep, &SearchOptions { max_copies: 2, rotations: 2, seed: i }).unwrap();
        assert_eq!(v.distillable, Distillable::Unknown, "separable mixture {i}");
    }
}

#[test]
fn ppt_states_have_no_witness() {
    for alpha in [2.0, 2.5, 3.0, 3.5, 4.0] {
        let rho = builtin("sigma_alpha", &[("alpha", alpha)]).unwrap();
        let w = distill::theorem3_witness(&rho, &SearchOptions { max_copies: 1, ..SearchOptions::default() }).unwrap();
        assert!(w.is_none(), "α = {alpha}");
    }
}

#[test]
fn kappa_and_tau22_share_zero_sets_on_two_qubits() {
    let mut rng = seeded(19);
    let idx = BipartiteIndex::new(2, 2).unwrap();
    for i in 0..200 {
        let rho = random_density(idx, 1 + i % 4, &mut rng).unwrap();
        let k = bounds::kappa(&rho, 2, 2).unwrap().value_sq;
        let t = tau22(&rho).unwrap().value_sq;
        assert_eq!(k > 1e-10, t > 1e-10, "state {i}: kappa {k}, tau22 {t}");
        assert!(k <= t + 1e-12);
    }
}
