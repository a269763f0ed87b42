mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bellgap::games::{chsh_game, hat_construction, tensor_product};
use bellgap::io::GameFile;
use bellgap::model::{
    behaviour_from_correlation, correlation_from_behaviour, evaluate, Behaviour, Scenario,
};
use bellgap::quantum::random::random_strategy;
use bellgap::quantum::{behaviour_of, hat_strategy, seesaw_run, K_G_UPPER};
use bellgap::sampling::{random_correlation, random_correlation_functional, random_game};
use bellgap::solvers::{
    bilocal_correlation_value, bilocal_value_general, bilocal_value_ns, local_correlation_value,
    local_value, ns_correlation_value, ns_value, SolverOptions,
};
use bellgap::BellFunctional;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_behaviour(s: &Scenario, r: &mut ChaCha8Rng) -> Behaviour {
    let n_out = s.num_output_tuples();
    let mut t: Vec<f64> = (0..s.table_len()).map(|_| r.gen::<f64>() + 1e-3).collect();
    for row in t.chunks_mut(n_out) {
        let z: f64 = row.iter().sum();
        row.iter_mut().for_each(|p| *p /= z);
    }
    Behaviour::new(s.clone(), t).unwrap()
}

fn signed_functional(s: &Scenario, r: &mut ChaCha8Rng) -> BellFunctional {
    BellFunctional::general(s.clone(), (0..s.table_len()).map(|_| r.gen_range(-1.0..1.0)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn correlations_round_trip_through_ns_behaviours(seed: u64, k in 2usize..=3, n in 1usize..=4) {
        let s = Scenario::uniform(k, n, 2).unwrap();
        let gamma = random_correlation(&s, &mut rng(seed)).unwrap();
        let p = behaviour_from_correlation(&gamma);
        prop_assert!(common::ns_defect(&s, p.table()) <= 1e-9);
        prop_assert!(p.is_non_signalling());
        let back = correlation_from_behaviour(&p).unwrap();
        for (a, b) in back.table().iter().zip(gamma.table()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn evaluation_is_linear(seed: u64, alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let mut r = rng(seed);
        let s = Scenario::new(vec![2, 3], vec![3, 2]).unwrap();
        let (m, n) = (signed_functional(&s, &mut r), signed_functional(&s, &mut r));
        let p = random_behaviour(&s, &mut r);
        let lhs = evaluate(&m.combine(alpha, &n, beta).unwrap(), &p).unwrap();
        let rhs = alpha * evaluate(&m, &p).unwrap() + beta * evaluate(&n, &p).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
    }

    #[test]
    fn best_response_matches_brute_force(seed: u64, k in 1usize..=3, n in 1usize..=2, kk in 2usize..=3) {
        let s = Scenario::uniform(k, n, kk).unwrap();
        let m = signed_functional(&s, &mut rng(seed));
        let fast = local_value(&m, &SolverOptions::default()).unwrap();
        prop_assert!((fast.value - common::brute_force_local(&m)).abs() <= 1e-12);
        prop_assert!((fast.recheck(&m).unwrap() - fast.value).abs() <= 1e-9);
    }

    #[test]
    fn bilocal_matches_oracle(seed: u64, n in 1usize..=2, kk in 2usize..=3) {
        let s = Scenario::uniform(3, n, kk).unwrap();
        let g = random_game(&s, &mut rng(seed)).unwrap();
        let r = bilocal_value_general(&g, &SolverOptions::default()).unwrap();
        prop_assert!((r.value - common::brute_force_bilocal(&g)).abs() <= 1e-12);
        prop_assert!((r.recheck(&g).unwrap() - r.value).abs() <= 1e-9);
    }

    #[test]
    fn class_sandwich(seed: u64) {
        let mut r = rng(seed);
        let s = Scenario::uniform(3, 2, 2).unwrap();
        let g = random_game(&s, &mut r).unwrap();
        let o = SolverOptions::default();
        let local = local_value(&g, &o).unwrap().value;
        let blns = bilocal_value_ns(&g, &o).unwrap();
        let blg = bilocal_value_general(&g, &o).unwrap().value;
        let ns = ns_value(&g, &o).unwrap();
        prop_assert!(local <= blns.value + 1e-7);
        prop_assert!(blns.value <= blg + 1e-7);
        prop_assert!(local <= ns.value + 1e-7);
        prop_assert!((blns.recheck(&g).unwrap() - blns.value).abs() <= 1e-9);
        prop_assert!((ns.recheck(&g).unwrap() - ns.value).abs() <= 1e-9);
        let qs = random_strategy(&[2, 2, 2], s.inputs(), s.outputs(), &mut r).unwrap();
        let q = evaluate(&g, &behaviour_of(&qs).unwrap()).unwrap();
        prop_assert!(q <= ns.value + 1e-7);
    }

    #[test]
    fn correlation_sandwich_and_gap_bound(seed: u64, n in 1usize..=4) {
        let f = random_correlation_functional(&Scenario::uniform(3, n, 2).unwrap(), &mut rng(seed)).unwrap();
        let o = SolverOptions::default();
        let local = local_correlation_value(&f, &o).unwrap();
        let bl = bilocal_correlation_value(&f, &o).unwrap();
        let ns = ns_correlation_value(&f).unwrap().value;
        prop_assert!((local.value - common::brute_force_local_correlation(&f)).abs() <= 1e-12);
        prop_assert!(local.value <= bl.value + 1e-9);
        prop_assert!(bl.value <= ns + 1e-9);
        prop_assert!(bl.value <= (2.0 * n as f64).sqrt() * local.value + 1e-9);
        prop_assert!((bl.recheck(&f).unwrap() - bl.value).abs() <= 1e-9);
        prop_assert!((local.recheck(&f).unwrap() - local.value).abs() <= 1e-9);
    }

    #[test]
    fn game_files_round_trip_bit_for_bit(seed: u64, k in 1usize..=3, n in 1usize..=3, kk in 1usize..=3) {
        let mut r = rng(seed);
        let s = Scenario::uniform(k, n, kk).unwrap();
        let g = random_game(&s, &mut r).unwrap().with_label("g");
        let text = GameFile::from_functional(&g, None).unwrap().to_json().unwrap();
        let back = GameFile::from_json(&text).unwrap().to_functional().unwrap();
        prop_assert_eq!(&back, &g);
        for (a, b) in back.coeffs().iter().zip(g.coeffs()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn quantum_behaviours_are_non_signalling(seed: u64, d in 1usize..=3) {
        let qs = random_strategy(&[d, d, 2], &[2, 3, 2], &[2, 2, 3], &mut rng(seed)).unwrap();
        let p = behaviour_of(&qs).unwrap();
        prop_assert!(p.is_non_signalling());
        prop_assert!(p.table().iter().all(|&v| (-1e-9..=1.0 + 1e-9).contains(&v)));
    }

    #[test]
    fn hat_strategy_cubes_the_value(seed: u64, d1 in 1usize..=2, d2 in 1usize..=2) {
        let mut r = rng(seed);
        let s = Scenario::uniform(2, 2, 2).unwrap();
        let g = random_game(&s, &mut r).unwrap();
        let qs = random_strategy(&[d1, d2], s.inputs(), s.outputs(), &mut r).unwrap();
        let base = evaluate(&g, &behaviour_of(&qs).unwrap()).unwrap();
        let hat = hat_construction(&g).unwrap();
        let v = evaluate(&hat, &behaviour_of(&hat_strategy(&qs, &g).unwrap()).unwrap()).unwrap();
        prop_assert!((v - base.powi(3)).abs() <= 1e-9);
    }

    #[test]
    fn hat_bilocal_is_below_parallel_local(seed: u64) {
        let s = Scenario::uniform(2, 2, 2).unwrap();
        let g = random_game(&s, &mut rng(seed)).unwrap();
        let o = SolverOptions::default();
        let hat = bilocal_value_general(&hat_construction(&g).unwrap(), &o).unwrap().value;
        let par = local_value(&tensor_product(&g, &g).unwrap(), &o).unwrap().value;
        let crossed = local_value(&tensor_product(&g, &common::swap_players(&g)).unwrap(), &o).unwrap().value;
        // The lone-Bob split plays g against its transpose.
        prop_assert!(hat <= par.max(crossed) + 1e-9);

        let sym = g.combine(0.5, &common::swap_players(&g), 0.5).unwrap();
        prop_assert!(sym.normalization_sum() <= 1.0 + 1e-12);
        let hat = bilocal_value_general(&hat_construction(&sym).unwrap(), &o).unwrap().value;
        let par = local_value(&tensor_product(&sym, &sym).unwrap(), &o).unwrap().value;
        prop_assert!(hat <= par + 1e-9);
    }

    #[test]
    fn seesaw_is_monotone_and_certified(seed: u64, k in 2usize..=3, d in 1usize..=3) {
        let f = random_correlation_functional(&Scenario::uniform(k, 2, 2).unwrap(), &mut rng(seed)).unwrap();
        let run = seesaw_run(&f, &vec![d; k], seed).unwrap();
        for w in run.trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12, "{:?}", w);
        }
        let again = run.observables.value(&f).unwrap().abs();
        prop_assert!((again - run.value).abs() <= 1e-10);
        let o = SolverOptions::default();
        let classical = if k == 2 {
            local_correlation_value(&f, &o).unwrap().value
        } else {
            bilocal_correlation_value(&f, &o).unwrap().value
        };
        prop_assert!(run.value <= K_G_UPPER * classical + 1e-9);
    }
}

/// For a game that is not symmetric under exchanging its players the bound
/// by `local(g⊗g)` alone fails.
#[test]
fn hat_bilocal_can_exceed_parallel_local_for_asymmetric_games() {
    let s = Scenario::uniform(2, 2, 2).unwrap();
    let g = random_game(&s, &mut rng(18228677797615572180)).unwrap();
    let o = SolverOptions::default();
    let hat = bilocal_value_general(&hat_construction(&g).unwrap(), &o).unwrap().value;
    let par = local_value(&tensor_product(&g, &g).unwrap(), &o).unwrap().value;
    let crossed = local_value(&tensor_product(&g, &common::swap_players(&g)).unwrap(), &o).unwrap().value;
    assert!(hat > par + 1e-3, "{hat} vs {par}");
    assert!((hat - crossed).abs() <= 1e-12);
    assert!((hat - common::brute_force_bilocal(&hat_construction(&g).unwrap())).abs() <= 1e-12);
}

#[test]
fn chsh_squared_best_response_agrees_with_full_enumeration() {
    let g = tensor_product(&chsh_game(), &chsh_game()).unwrap();
    let v = local_value(&g, &SolverOptions::default()).unwrap().value;
    assert_eq!(v, common::brute_force_local(&g));
}
