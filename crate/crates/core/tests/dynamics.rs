mod common;

use proptest::prelude::*;
use proptest::strategy::Strategy as Gen;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sfcoop::engine::{accumulate_scores, imitation_update, is_homogeneous};
use sfcoop::mechanisms::decide;
use sfcoop::sim::{init_strategies, run, run_from};
use sfcoop::{
    Exact, GenParams, Graph, MechanismSpec, MechanismSpec64, PayoffParams, PayoffParams64, PopulationState,
    ScoreVector, SimConfig, SimConfig64, Strategy,
};

use common::{all_graphs, boundary_grid, check_mechanism_algebra, check_oracle_case, q, random_case, random_graph, Q};

fn case_strategy() -> impl Gen<Value = common::OracleCase> {
    any::<u64>().prop_map(|seed| random_case(&mut ChaCha8Rng::seed_from_u64(seed), 10))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_reference_implementation(case in case_strategy()) {
        if let Err(msg) = check_oracle_case(&case, 8) {
            prop_assert!(false, "{}", msg);
        }
    }

    /// Adding the same amount to every score never changes who is imitated.
    #[test]
    fn imitation_is_shift_invariant(seed in any::<u64>(), shift in -50i64..50) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 12, 0.3);
        let state = init_strategies(12, seed);
        let scores = accumulate_scores(&g, &state, &PayoffParams::new(q(9, 5)).unwrap()).unwrap();
        let shifted = ScoreVector::new(scores.as_slice().iter().map(|&s| s + Q::from(shift)).collect());
        prop_assert_eq!(imitation_update(&g, &state, &scores), imitation_update(&g, &state, &shifted));
    }

    /// Relabelling nodes relabels the outcome when no two scores tie.
    #[test]
    fn imitation_ignores_labels(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 10;
        let g = random_graph(&mut rng, n, 0.4);
        let state = init_strategies(n, seed);
        let scores: Vec<Q> = (0..n as i64).map(|i| q(i * 7 % 11 + 100 * i, 3)).collect();
        let perm: Vec<usize> = {
            let mut p: Vec<usize> = (0..n).collect();
            use rand::seq::SliceRandom;
            p.shuffle(&mut rng);
            p
        };
        let edges: Vec<(usize, usize)> = g.edges().map(|(i, j)| (perm[i], perm[j])).collect();
        let pg = Graph::from_edges(n, &edges).unwrap();
        let mut ps = vec![Strategy::Defect; n];
        let mut pscores = vec![Q::from(0); n];
        for i in 0..n {
            ps[perm[i]] = state.get(i);
            pscores[perm[i]] = scores[i];
        }
        let next = imitation_update(&g, &state, &ScoreVector::new(scores));
        let pnext = imitation_update(&pg, &PopulationState::new(ps), &ScoreVector::new(pscores));
        for (i, &pi) in perm.iter().enumerate() {
            prop_assert_eq!(next.get(i), pnext.get(pi));
        }
    }

    #[test]
    fn homogeneous_states_are_absorbing(seed in any::<u64>(), all_c in any::<bool>(), theta in 1i64..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, 12, 0.5);
        let s = if all_c { Strategy::Cooperate } else { Strategy::Defect };
        let initial = PopulationState::uniform(12, s);
        let spec = MechanismSpec::pop(Q::from(100), Q::from(theta));
        prop_assert!(decide(&g, &initial, &spec).invested.is_empty());
        let cfg = SimConfig::new(PayoffParams::new(q(3, 2)).unwrap(), spec, 0).with_generations(20, 5);
        let r = run_from(&g, &cfg, initial).unwrap();
        prop_assert_eq!(r.absorbed_at, Some((0, s)));
        prop_assert_eq!(r.total_cost, Q::from(0));
        let expected = if all_c { 12 } else { 0 };
        prop_assert!(r.cooperator_counts.iter().all(|&c| c == expected));
    }
}

#[test]
fn mechanism_algebra_on_all_small_graphs() {
    let grid = boundary_grid(4);
    let mut profiles = 0;
    for n in 1..=4 {
        for g in all_graphs(n) {
            profiles += check_mechanism_algebra(&g, &grid).unwrap();
        }
    }
    assert!(profiles > 1000);
}

#[test]
fn initial_assignment_is_fair() {
    let n = 5000;
    for seed in 0..30 {
        let frac = init_strategies(n, seed).cooperation_fraction();
        assert!((frac - 0.5).abs() < 0.03, "seed {seed}: {frac}");
    }
}

#[test]
fn accounting_on_a_large_run() {
    let g = sfcoop::netgen::generate(&GenParams::dms(3000, 5)).unwrap();
    for (i, spec) in [
        MechanismSpec64::pop(60.0, 1.0),
        MechanismSpec64::node_influence(0.1, 2.0),
        MechanismSpec64::local_cooperation(0.5, 0.5),
        MechanismSpec64::influence_and_local(0.05, 0.75, 4.0),
    ]
    .into_iter()
    .enumerate()
    {
        let cfg = SimConfig64::new(PayoffParams64::nowak_may(1.8).unwrap(), spec, i as u64);
        let r = run(&g, &cfg).unwrap();
        assert_eq!(r.coop_trajectory.len(), 76);
        assert_eq!(r.per_generation_cost.len(), 75);
        assert_eq!(r.total_cost, r.investments as f64 * spec.theta);
        assert_eq!(r.per_generation_cost.iter().sum::<f64>(), r.total_cost);
        assert_eq!(r.per_generation_investments.iter().sum::<usize>(), r.investments);
        if let Some((t, s)) = r.absorbed_at {
            assert!(r.per_generation_cost[t..].iter().all(|&c| c == 0.0));
            assert!(r.cooperator_counts[t..].iter().all(|&c| c == if s == Strategy::Cooperate { 3000 } else { 0 }));
        }
    }
}

#[test]
fn scalar_types_agree_on_dyadic_parameters() {
    let g = sfcoop::netgen::generate(&GenParams::ba(400, 2, 9)).unwrap();
    let exact = SimConfig::new(
        PayoffParams::<Exact>::nowak_may(q(7, 4)).unwrap(),
        MechanismSpec::local_cooperation(q(1, 2), q(3, 2)),
        4,
    );
    let float =
        SimConfig64::new(PayoffParams64::nowak_may(1.75).unwrap(), MechanismSpec64::local_cooperation(0.5, 1.5), 4);
    let (a, b) = (run(&g, &exact).unwrap(), run(&g, &float).unwrap());
    assert_eq!(a.cooperator_counts, b.cooperator_counts);
    assert_eq!(a.investments, b.investments);
    assert_eq!(a.total_cost.to_string(), b.total_cost.to_string());
}

#[test]
fn neighbourless_nodes_never_change() {
    let g = Graph::from_edges(4, &[(0, 1)]).unwrap();
    let state = PopulationState::from_symbols("CDCD").unwrap();
    let scores = accumulate_scores(&g, &state, &PayoffParams::new(Q::from(2)).unwrap()).unwrap();
    let next = imitation_update(&g, &state, &scores);
    assert_eq!(next.symbols(), "DDCD");
    assert_eq!(is_homogeneous(&next), None);
}
