use biaswalk_core::bias::{brw_kernel, ma_epsilon, power_mean, trajectory_boost, BiasMatrix, TrajectoryPredicate};
use biaswalk_core::chain::{spectral_profile, srw_kernel, stationary};
use biaswalk_core::graph::{generate, GraphFamily};
use biaswalk_core::strategy::{
    emulate_weights, emulation_gap, emulation_threshold, max_stationary, optimal_cover_policy,
    optimal_hitting_policy, simple_walk_sandwich, WeightScheme,
};
use biaswalk_core::{Graph, VertexSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Connected G(n, p) sample, retrying seeds until connected.
fn connected_gnp(n: usize, p: f64, seed: u64) -> Graph {
    (0..)
        .map(|k| generate(&GraphFamily::Gnp { n, p, seed: seed.wrapping_mul(1000).wrapping_add(k) }).unwrap())
        .find(|g| n == 1 || g.is_irreducible())
        .unwrap()
}

/// Random labelled tree from a Prüfer-like attachment sequence.
fn random_tree(parents: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p % (i + 1), i + 1)).collect();
    Graph::new(parents.len() + 1, false, &edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn power_mean_below_max_average(xs in prop::collection::vec(0.0f64..1e3, 1..30), eps in 0.0f64..0.99) {
        let delta = eps / (1.0 - eps);
        let m = power_mean(1.0 + delta, &xs).unwrap();
        let ma = ma_epsilon(&eps, &xs).unwrap();
        prop_assert!(m <= ma + 1e-12 * ma.max(1.0), "M = {m}, MA = {ma}");
    }

    #[test]
    fn max_average_is_between_mean_and_max(xs in prop::collection::vec(0.0f64..10.0, 1..20), eps in 0.0f64..=1.0) {
        let ma = ma_epsilon(&eps, &xs).unwrap();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let max = xs.iter().cloned().fold(0.0, f64::max);
        prop_assert!(mean - 1e-12 <= ma && ma <= max + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn handshake_and_regular_rings(units in 2usize..6, d in 1usize..5) {
        let g = generate(&GraphFamily::Ring { units, d }).unwrap();
        let s = g.degree_stats();
        prop_assert_eq!(s.d_min, d + 1);
        prop_assert_eq!(s.d_max, d + 1);
        let total: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn trajectory_boost_bound_and_potential(n in 2usize..7, seed in 0u64..10_000, t in 1usize..5,
                                            eps in 0.0f64..0.95, mask in 1u64..64, hit in any::<bool>()) {
        let g = connected_gnp(n, 0.5, seed);
        let set = VertexSet::from_mask(n, mask & ((1 << n) - 1) | 1);
        let pred = if hit { TrajectoryPredicate::hit_by(set, t) } else { TrajectoryPredicate::at_set(set, t) };
        let b = trajectory_boost(&g, 0, &pred, &eps).unwrap();
        prop_assert!(b.q >= b.p.powf(1.0 - eps) - 1e-12);
        prop_assert!(b.potential.windows(2).all(|w| w[0] >= w[1] - 1e-12));
    }

    #[test]
    fn rational_and_float_recursions_agree(n in 2usize..6, seed in 0u64..10_000, t in 1usize..4, num in 0i64..=6) {
        let g = connected_gnp(n, 0.6, seed);
        let pred = TrajectoryPredicate::at_set(VertexSet::singleton(n, n - 1), t);
        let exact = trajectory_boost(&g, 0, &pred, &BigRational::new(BigInt::from(num), BigInt::from(6))).unwrap();
        let float = trajectory_boost(&g, 0, &pred, &(num as f64 / 6.0)).unwrap();
        prop_assert!((exact.q.to_f64().unwrap() - float.q).abs() < 1e-12);
        prop_assert!((exact.p.to_f64().unwrap() - float.p).abs() < 1e-12);
    }

    #[test]
    fn hitting_times_decrease_with_bias(n in 2usize..8, seed in 0u64..10_000, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
        let g = connected_gnp(n, 0.4, seed);
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let target = VertexSet::singleton(n, 0);
        let a = optimal_hitting_policy(&g, &target, lo).unwrap();
        let b = optimal_hitting_policy(&g, &target, hi).unwrap();
        for v in 0..n {
            prop_assert!(b.values[v] <= a.values[v] * (1.0 + 1e-10) + 1e-10);
        }
    }

    #[test]
    fn optimal_policy_beats_random_bias(n in 3usize..7, seed in 0u64..10_000, eps in 0.05f64..1.0,
                                        choice in prop::collection::vec(0usize..8, 7)) {
        let g = connected_gnp(n, 0.5, seed);
        let target = VertexSet::singleton(n, n - 1);
        let opt = optimal_hitting_policy(&g, &target, eps).unwrap();
        let pick: Vec<Option<usize>> = (0..n).map(|v| Some(g.neighbours(v)[choice[v] % g.degree(v)])).collect();
        let b = BiasMatrix::point_masses(&g, &pick).unwrap();
        let k = brw_kernel(&g, eps, &b).unwrap();
        let h = biaswalk_core::chain::hitting_times(&g, &k, &target).unwrap();
        for v in 0..n {
            prop_assert!(opt.values[v] <= h[v] * (1.0 + 1e-10));
        }
    }

    #[test]
    fn stationary_mass_can_only_grow(n in 2usize..8, seed in 0u64..10_000, eps in 0.0f64..1.0) {
        let g = connected_gnp(n, 0.5, seed);
        let pi = stationary(&srw_kernel(&g).unwrap()).unwrap();
        for v in 0..n {
            let (best, b) = max_stationary(&g, v, eps).unwrap();
            prop_assert!(best >= pi[v] * (1.0 - 1e-10));
            let pq = stationary(&brw_kernel(&g, eps, &b).unwrap()).unwrap();
            prop_assert!((pq[v] - best).abs() < 1e-9);
        }
    }

    #[test]
    fn emulation_on_random_trees(parents in prop::collection::vec(0usize..100, 1..8), a_idx in 0usize..3, extra in 0.0f64..1.0) {
        let g = random_tree(&parents);
        let a = [-0.5, 0.5, 1.0][a_idx];
        let s = WeightScheme::new(&g, 0, a).unwrap();
        let e0 = emulation_threshold(a);
        let eps = e0 + extra * (1.0 - e0);
        prop_assert!(emulation_gap(&g, &s, e0).unwrap() < 1e-12);
        prop_assert!(emulation_gap(&g, &s, eps).unwrap() < 1e-12);
        prop_assert!(emulate_weights(&g, &s, e0 * 0.9 - 1e-3).is_err());
    }

    #[test]
    fn biased_walks_satisfy_the_sandwich(n in 3usize..9, seed in 0u64..10_000, eps in 0.0f64..0.9,
                                         choice in prop::collection::vec(0usize..8, 8)) {
        let g = connected_gnp(n, 0.5, seed);
        let pick: Vec<Option<usize>> = (0..n).map(|v| Some(g.neighbours(v)[choice[v] % g.degree(v)])).collect();
        let b = BiasMatrix::point_masses(&g, &pick).unwrap();
        let s = simple_walk_sandwich(&g, &brw_kernel(&g, eps, &b).unwrap()).unwrap();
        prop_assert!(s.holds, "{s:?}");
    }

    #[test]
    fn cover_value_decreases_with_bias(n in 2usize..6, seed in 0u64..10_000, e1 in 0.0f64..1.0, e2 in 0.0f64..1.0) {
        let g = connected_gnp(n, 0.5, seed);
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let a = optimal_cover_policy(&g, 0, lo).unwrap();
        let b = optimal_cover_policy(&g, 0, hi).unwrap();
        let (va, vb) = (a.value(0, 1).unwrap(), b.value(0, 1).unwrap());
        prop_assert!(vb <= va * (1.0 + 1e-10));
        prop_assert!(vb >= (n - 1) as f64 - 1e-9);
    }
}

#[test]
fn spectral_profile_of_complete_graph() {
    // Lazy walk on K_n has second eigenvalue (1 - 1/(n-1))/2.
    for n in 3..8 {
        let prof = spectral_profile(&generate(&GraphFamily::Complete(n)).unwrap()).unwrap();
        let lam2 = (1.0 - 1.0 / (n - 1) as f64) / 2.0;
        assert!((prof.lambda2_lazy - lam2).abs() < 1e-12);
        assert!((prof.t_rel - 1.0 / (1.0 - lam2)).abs() < 1e-9);
        assert!((prof.lambda_star - 1.0 / (n - 1) as f64).abs() < 1e-12);
    }
}
