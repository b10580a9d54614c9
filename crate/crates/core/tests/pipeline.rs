//! Property tests across the reduce, lp, round and local stages.

mod common;

use bikmeans::cost::{cost_partition_kmeans, cost_partition_kmedian};
use bikmeans::local::{run_local_search, Init, SearchConfig};
use bikmeans::lp::{normalize, solve_lp, LpOptions};
use bikmeans::oracle::{brute_kmeans, brute_kmedian};
use bikmeans::reduce::{build_instance, ReductionConfig};
use bikmeans::round::{round_many, sample_solution, Openings, RoundingPlan};
use bikmeans::{rng, ClusteringSolution, KMedianInstance, Partition};
use proptest::prelude::*;

fn instance(seed: u64, n: usize, centers: usize, dim: usize) -> KMedianInstance {
    let mut r = rng::from_seed(seed);
    common::random_instance(&mut r, n, centers, dim)
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 128, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn normalized_solution_is_feasible_and_split(
        seed in any::<u64>(), n in 1usize..9, c in 1usize..8, k in 1usize..4,
    ) {
        let inst = instance(seed, n, c, 2);
        let k = k.min(c);
        let raw = solve_lp(&inst, k, &LpOptions::default()).unwrap();
        let sol = normalize(&inst, &raw);
        prop_assert!((sol.total_weight() - k as f64).abs() < 1e-9);
        prop_assert!(sol.copies.iter().all(|c| c.weight > 0.0));
        for x in 0..n {
            let served: f64 = sol.support[x].iter().map(|&c| sol.copies[c].weight).sum();
            prop_assert!((served - 1.0).abs() < 1e-6, "demand {} served {}", x, served);
            prop_assert!(sol.support[x].windows(2).all(|w| w[0] < w[1]));
        }
        prop_assert!((sol.lp_value - raw.value).abs() <= 1e-6 * (1.0 + raw.value));
        let recomputed: f64 = sol.radii.iter().sum();
        prop_assert!((recomputed - sol.lp_value).abs() <= 1e-9 * (1.0 + recomputed));
    }

    #[test]
    fn lp_value_bounds_integral_optimum(
        seed in any::<u64>(), n in 1usize..8, c in 1usize..8, k in 1usize..4,
    ) {
        let inst = instance(seed, n, c, 3);
        let k = k.min(c);
        let lp = solve_lp(&inst, k, &LpOptions::default()).unwrap().value;
        let opt = brute_kmedian(&inst, k).unwrap().opt_cost;
        prop_assert!(lp <= opt + 1e-6, "lp {} opt {}", lp, opt);
        // opening every center is a lower bound on any k-subset
        let all: Vec<usize> = (0..c).collect();
        let floor = ClusteringSolution::evaluate(&inst, &all).unwrap().total_cost;
        prop_assert!(lp >= floor - 1e-6);
    }

    #[test]
    fn rounding_structure(
        seed in any::<u64>(), n in 2usize..11, c in 2usize..9, k in 1usize..3, extra in 1usize..4,
    ) {
        let inst = instance(seed, n, c, 2);
        let k = k.min(c - 1).max(1);
        let openings = Openings::from_m(k, k + extra).unwrap();
        let raw = solve_lp(&inst, k, &LpOptions::default()).unwrap();
        let plan = RoundingPlan::new(&inst, normalize(&inst, &raw), openings).unwrap();
        let sol = &plan.solution;
        prop_assert_eq!(plan.partition.groups.len(), openings.m);
        for g in &plan.partition.groups {
            prop_assert!((g.mass() - openings.group_mass()).abs() < 1e-9);
        }
        // every copy's weight is spread over the groups exactly once
        let mut spread = vec![0.0; sol.copies.len()];
        for g in &plan.partition.groups {
            for &(copy, share) in &g.shares {
                prop_assert!(share > 0.0);
                spread[copy] += share;
            }
        }
        for (copy, s) in spread.iter().enumerate() {
            prop_assert!((s - sol.copies[copy].weight).abs() < 1e-9);
        }
        for x in 0..n {
            let w = plan.witnesses.witness[x];
            prop_assert!(plan.witnesses.selected.contains(&w));
            prop_assert!(sol.radii[w] <= sol.radii[x]);
            prop_assert!((plan.balls[x].mass() - openings.group_mass()).abs() < 1e-9);
        }
        let mut r = rng::from_seed(seed);
        let s = sample_solution(&plan.partition, sol, &inst, &mut r).unwrap();
        prop_assert_eq!(s.selections.len(), openings.m);
        prop_assert!(s.solution.opened.len() <= openings.m);
        prop_assert!(s.solution.total_cost >= brute_kmedian(&inst, s.solution.opened.len()).unwrap().opt_cost - 1e-9);
    }

    #[test]
    fn trial_statistics_are_reproducible(seed in any::<u64>(), n in 2usize..9) {
        let mut r = rng::from_seed(seed);
        let inst = common::self_instance(&mut r, n, 2);
        let raw = solve_lp(&inst, 1, &LpOptions::default()).unwrap();
        let plan = RoundingPlan::new(&inst, normalize(&inst, &raw), Openings::from_m(1, 2).unwrap()).unwrap();
        let a = round_many(&plan, &inst, 20, seed, 1).unwrap();
        let b = round_many(&plan, &inst, 20, seed, 3).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.min <= a.mean_ratio + 1e-12 && a.mean_ratio <= a.max + 1e-12);
        prop_assert!(a.std >= 0.0);
    }

    #[test]
    fn local_search_descends(
        seed in any::<u64>(), n in 2usize..10, c in 3usize..9, m in 1usize..4, p in 1usize..3,
        random_start in any::<bool>(),
    ) {
        let inst = instance(seed, n, c, 2);
        let m = m.min(c - 1);
        let p = p.min(m);
        let mut cfg = SearchConfig::new(m, p);
        if random_start {
            cfg.init = Init::Random { seed };
        }
        let trace = run_local_search(&inst, &cfg).unwrap();
        prop_assert!(trace.converged);
        prop_assert_eq!(trace.final_solution.opened.len(), m);
        let mut prev = trace.initial_cost;
        for step in &trace.iterations {
            prop_assert!(step.new_cost < prev);
            prop_assert!(step.new_cost <= trace.threshold_factor * prev);
            prop_assert!(step.close.len() == step.open.len() && step.close.len() <= p);
            prev = step.new_cost;
        }
        prop_assert!(trace.final_solution.total_cost <= trace.initial_cost);
        prop_assert!(trace.final_solution.total_cost >= brute_kmedian(&inst, m).unwrap().opt_cost - 1e-9);
    }

    #[test]
    fn reduction_sandwiches_partition_costs(
        seed in any::<u64>(), n in 2usize..8, dim in 1usize..6, eps in 0.1f64..0.49,
    ) {
        let mut r = rng::from_seed(seed);
        let x = common::random_points(&mut r, n, dim, 10.0);
        let mut cfg = ReductionConfig::new(eps);
        cfg.seed = seed;
        let red = build_instance(&x, &cfg).unwrap();
        prop_assert_eq!(red.psi.len(), n);
        for _ in 0..8 {
            let s = Partition::from_labels(&common::random_labels(&mut r, n)).unwrap();
            let reduced = cost_partition_kmedian(&red.instance, &s).unwrap();
            let orig = cost_partition_kmeans(&x, &s.map_indices(&red.psi).unwrap()).unwrap();
            let tol = 1e-9 * (1.0 + orig);
            prop_assert!(orig <= reduced + tol, "orig {} reduced {}", orig, reduced);
            prop_assert!(reduced <= (1.0 + eps) * orig + tol, "orig {} reduced {}", orig, reduced);
        }
        let k = 2.min(n);
        let opt = brute_kmeans(&x, k).unwrap().opt_cost;
        let opt_red = brute_kmedian(&red.instance, k).unwrap().opt_cost;
        prop_assert!(opt <= opt_red + 1e-9 * (1.0 + opt));
        prop_assert!(opt_red <= (1.0 + eps) * opt + 1e-9 * (1.0 + opt));
    }
}
