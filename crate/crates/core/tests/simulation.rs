use biaswalk_core::bias::{trajectory_boost, TrajectoryPredicate};
use biaswalk_core::graph::{generate, GraphFamily};
use biaswalk_core::sim::{estimate, estimate_event, phase_cover_strategy, simulate, vacant_profile, Stop, Strategy};
use biaswalk_core::strategy::optimal_cover_policy;
use biaswalk_core::{Graph, VertexSet};

fn figure_one() -> Graph {
    Graph::new(6, false, &[(0, 1), (0, 4), (0, 2), (2, 3), (2, 5), (1, 3), (1, 5), (5, 4)]).unwrap()
}

#[test]
fn figure_one_strategy_replay() {
    let g = figure_one();
    let pred = TrajectoryPredicate::at_set(VertexSet::from_iter(6, [4, 5]), 2);
    let boost = trajectory_boost(&g, 0, &pred, &(1.0 / 3.0)).unwrap();
    let hit = estimate_event(&g, 0, Strategy::Trajectory(&boost.strategy), 1.0 / 3.0, &pred, 100_000, 7).unwrap();
    assert!(hit.within(50.0 / 81.0, 3.0), "{hit:?}");
    let srw = estimate_event(&g, 0, Strategy::None, 0.0, &pred, 100_000, 7).unwrap();
    assert!(srw.within(7.0 / 18.0, 3.0), "{srw:?}");
}

#[test]
fn hit_by_strategy_replay() {
    let g = generate(&GraphFamily::Cycle(6)).unwrap();
    let pred = TrajectoryPredicate::hit_by(VertexSet::singleton(6, 3), 5);
    for eps in [0.25, 0.5] {
        let boost = trajectory_boost(&g, 0, &pred, &eps).unwrap();
        let e = estimate_event(&g, 0, Strategy::Trajectory(&boost.strategy), eps, &pred, 100_000, 11).unwrap();
        assert!(e.within(boost.q, 3.0), "eps {eps}: {e:?} vs {}", boost.q);
    }
}

#[test]
fn two_vertex_calibration() {
    let g = generate(&GraphFamily::Path(2)).unwrap();
    let pred = TrajectoryPredicate::at_set(VertexSet::singleton(2, 1), 1);
    let e = estimate_event(&g, 0, Strategy::None, 0.0, &pred, 1000, 1).unwrap();
    assert_eq!((e.mean, e.se), (1.0, 0.0));
}

#[test]
fn triangle_cover_replay() {
    let g = generate(&GraphFamily::Complete(3)).unwrap();
    let p = optimal_cover_policy(&g, 0, 0.25).unwrap();
    let e = estimate(&g, 0, Strategy::Cover(&p), 0.25, Stop::Cover, 100_000, 3).unwrap();
    assert!(e.within(2.6, 3.0), "{e:?}");
}

#[test]
fn unbiased_walk_matches_simple_walk_law() {
    // SRW on the 4-cycle: the position after two steps is the start or the
    // antipode with probability 1/2 each.
    let g = generate(&GraphFamily::Cycle(4)).unwrap();
    let pred = TrajectoryPredicate::at_set(VertexSet::singleton(4, 2), 2);
    let e = estimate_event(&g, 0, Strategy::None, 0.0, &pred, 50_000, 5).unwrap();
    assert!(e.within(0.5, 3.0), "{e:?}");
}

#[test]
fn vacant_bounds() {
    for (fam, xs) in [(GraphFamily::Cycle(8), vec![0, 1, 2]), (GraphFamily::Path(6), vec![1, 2])] {
        let g = generate(&fam).unwrap();
        for row in vacant_profile(&g, 0, &xs, 17, 10_000).unwrap() {
            assert!(!row.flagged, "{}: {row:?}", fam.id());
        }
    }
}

#[test]
fn phase_cover_beats_simple_walk_on_average() {
    let g = generate(&GraphFamily::Cycle(8)).unwrap();
    let (mut biased, mut plain) = (0usize, 0usize);
    for seed in 0..1000 {
        biased += phase_cover_strategy(&g, 0, 0.5, seed).unwrap().steps();
        plain += simulate(&g, 0, Strategy::None, 0.0, Stop::Cover, seed).unwrap().steps();
    }
    assert!(biased <= plain, "{biased} vs {plain}");
}
