use biaswalk_core::gadget::{
    octopus_stats, qsat_graph, quincunx_optimum, quincunx_success, roundabout, slow_path, slow_path_closed_form,
    slow_path_expected, QsatInstance,
};
use biaswalk_core::strategy::optimal_hitting_policy;
use biaswalk_core::{Connectivity, VertexSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn slow_path_recursion_agrees_with_solver() {
    for l in 1..=25 {
        let exact = slow_path_expected(l).unwrap();
        assert_eq!(exact, slow_path_closed_form(l), "l = {l}");
        let p = slow_path(l).unwrap();
        let target = VertexSet::singleton(p.graph.n(), p.port("finish").unwrap());
        let h = optimal_hitting_policy(&p.graph, &target, 0.25).unwrap();
        let want = exact.to_f64().unwrap();
        assert!((h.values[p.port("start").unwrap()] - want).abs() <= 1e-9 * want, "l = {l}");
    }
}

#[test]
fn quincunx_success_lower_bound() {
    let quarter = ratio(1, 4);
    for l in (1..=25).step_by(2) {
        let p = quincunx_success(l, &quarter).unwrap();
        let bound = BigRational::one() - num_traits::pow(ratio(99, 100), l);
        assert!(p >= bound, "l = {l}");
        let opt = quincunx_optimum(l, 0.25).unwrap();
        assert!((opt - p.to_f64().unwrap()).abs() < 1e-12, "l = {l}");
    }
}

#[test]
fn star_connector_bounds() {
    for l in 1..=6 {
        for k in 2..=4 {
            let s = octopus_stats(l, k).unwrap();
            assert!(s.holds, "S({l},{k}): {s:?}");
        }
    }
}

#[test]
fn roundabout_sizes() {
    for (lp, lq, k) in [(1, 1, 1), (2, 3, 2), (3, 3, 3), (4, 5, 3)] {
        let r = roundabout(lp, lq, k).unwrap();
        let quincunx = (lq + 1) * (lq + 2) / 2 + 2;
        assert_eq!(r.graph.n(), k * (lp + 3 + quincunx - 2));
    }
}

#[test]
fn qsat_graphs_are_strongly_connected() {
    let cases = [
        (2, vec![[1, 2, -1i32]]),
        (2, vec![[1, 2, 1]]),
    ];
    for (vars, clauses) in cases {
        assert!(QsatInstance::new(vars, clauses).is_err());
    }
    let instances = [
        QsatInstance::new(2, vec![[1, 2, -2]]).ok(),
        QsatInstance::new(4, vec![[1, 2, 3], [-1, -2, -3], [2, 3, 4], [-4, 1, 3]]).ok(),
        QsatInstance::new(6, vec![[1, -3, 5], [2, 4, 6]]).ok(),
    ];
    assert!(instances[0].is_none());
    for phi in instances.into_iter().flatten() {
        for (lp, lq, ls) in [(1, 1, 1), (2, 3, 2)] {
            let g = qsat_graph(&phi, lp, lq, ls).unwrap();
            assert_eq!(g.graph.connectivity(), Connectivity::StronglyConnected);
            assert_eq!(g.quincunx_count(), 6 * phi.clause_count() + phi.n());
            assert_eq!(g.ports["star_ports"].len(), 6 * phi.clause_count());
        }
    }
}
