//! Acceptance suite. Runs every criterion, prints one line per check and
//! exits nonzero if any check fails.

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use bikmeans::bench::{run_experiment, ExperimentSpec};
use bikmeans::cost::{cost_partition_kmeans, cost_partition_kmedian};
use bikmeans::local::{best_swap, run_local_search, SearchConfig};
use bikmeans::lp::{normalize, solve_lp, LpOptions};
use bikmeans::oracle::{brute_kmeans, brute_kmedian, verify_centroid_set};
use bikmeans::reduce::{build_centroid_set, build_instance, CentroidParams, CentroidStrategy, ReductionConfig};
use bikmeans::round::{round_many, sample_solution, Openings, RoundingPlan};
use bikmeans::triangle::{check_relaxed_3hop_exhaustive, hop_ratio, Quadruple};
use bikmeans::{bounds, io, rng, KMedianInstance, Partition, PointSet};
use rand::Rng as _;

struct Outcome {
    lines: Vec<(bool, String)>,
}

impl Outcome {
    fn new() -> Self {
        Self { lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, text: impl Into<String>) {
        self.lines.push((ok, text.into()));
    }

    fn ok(&self) -> bool {
        self.lines.iter().all(|l| l.0)
    }
}

fn timed(limit: Duration, out: &mut Outcome, start: Instant) {
    let elapsed = start.elapsed();
    out.check(elapsed < limit, format!("runtime {:.2?} < {:.0?}", elapsed, limit));
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    for (beta, limit) in [(1.3, 6.45), (1.5, 4.8), (2.0, 2.59), (3.0, 1.4)] {
        let t = bounds::alpha_lp_tight(beta).unwrap();
        out.check(t.value < limit, format!("alpha_lp_tight({beta}) = {:.6} < {limit}", t.value));
    }
    let local = bounds::alpha_local(1.0001, 1_000_000, 0.0).unwrap();
    out.check(local <= 9.0 + 1e-2, format!("alpha_local(1.0001, 1e6, 0) = {local:.6} <= 9.01"));
    timed(Duration::from_secs(1), &mut out, start);
    // the headline values as the best guarantee over the three algorithms
    for (beta, limit) in [(1.3, 6.45), (1.5, 4.8), (2.0, 2.59), (3.0, 1.4)] {
        let e = bounds::alpha_envelope(beta).unwrap();
        out.check(
            e.value < limit,
            format!("alpha_envelope({beta}) = {:.6} ({:?}) < {limit}", e.value, e.attained_by),
        );
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let mut r = rng::from_seed(2002);
    let mut worst = f64::NEG_INFINITY;
    let mut bad = 0;
    for _ in 0..100 {
        let n = r.random_range(1..=8);
        let c = r.random_range(1..=8);
        let k = r.random_range(1..=3usize).min(c);
        let inst = common::random_instance(&mut r, n, c, 2);
        let lp = solve_lp(&inst, k, &LpOptions::default()).unwrap().value;
        let opt = brute_kmedian(&inst, k).unwrap().opt_cost;
        worst = worst.max(lp - opt);
        if lp > opt + 1e-6 {
            bad += 1;
        }
    }
    out.check(bad == 0, format!("lp_value <= brute_kmedian + 1e-6 on 100 instances (violations {bad}, max lp-opt {worst:.3e})"));
    timed(Duration::from_secs(30), &mut out, start);
    out
}

fn rounding_plan(inst: &KMedianInstance, k: usize, openings: Openings) -> RoundingPlan {
    let raw = solve_lp(inst, k, &LpOptions::default()).unwrap();
    RoundingPlan::new(inst, normalize(inst, &raw), openings).unwrap()
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let bound = bounds::alpha_lp_tight(2.0).unwrap().value;
    let mut r = rng::from_seed(3003);
    let mut failures = Vec::new();
    let mut worst_margin = f64::NEG_INFINITY;
    for i in 0..30 {
        let n = r.random_range(4..=12);
        let inst = common::self_instance(&mut r, n, 2);
        let plan = rounding_plan(&inst, 2, Openings::from_beta(2, 2.0).unwrap());
        let stats = round_many(&plan, &inst, 500, i, 1).unwrap();
        let allowed = bound + 3.0 * stats.std / 500f64.sqrt();
        worst_margin = worst_margin.max(stats.mean_ratio - allowed);
        if stats.mean_ratio > allowed {
            failures.push((i, stats.mean_ratio, allowed));
        }
    }
    out.check(
        failures.is_empty(),
        format!(
            "mean cost/lp_value <= alpha_lp_tight(2) + 3 std/sqrt(500) on 30 instances (failures {failures:?}, max excess {worst_margin:.4})"
        ),
    );
    timed(Duration::from_secs(300), &mut out, start);
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let mut r = rng::from_seed(4004);
    let (mut mass, mut selections, mut witness, mut markov) = (0, 0, 0, 0);
    let mut instances = 0;
    let configs: [(usize, usize); 6] = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 6), (3, 4)];
    for round in 0..10 {
        for &(k, m) in &configs {
            let n = r.random_range(k.max(2)..=12);
            let inst = if round % 2 == 0 {
                common::self_instance(&mut r, n, 2)
            } else {
                let c = r.random_range(k..=10);
                common::random_instance(&mut r, n, c, 3)
            };
            let openings = Openings::from_m(k, m).unwrap();
            let raw = solve_lp(&inst, k, &LpOptions::default()).unwrap();
            let sol = normalize(&inst, &raw);
            let plan = match RoundingPlan::new(&inst, sol.clone(), openings) {
                Ok(p) => p,
                Err(bikmeans::Error::Invariant(_)) => {
                    markov += 1;
                    continue;
                }
                Err(e) => panic!("{e}"),
            };
            instances += 1;
            let target = openings.group_mass();
            mass += plan.partition.groups.iter().filter(|g| (g.mass() - target).abs() > 1e-9).count();
            if plan.partition.groups.len() != m {
                mass += 1;
            }
            for x in 0..n {
                let w = plan.witnesses.witness[x];
                if sol.radii[w] > sol.radii[x] {
                    witness += 1;
                }
                let b = openings.beta();
                if plan.balls[x].radius > b * sol.radii[x] / (b - 1.0) + 1e-9 {
                    markov += 1;
                }
            }
            let mut rr = rng::from_seed(round as u64);
            for _ in 0..20 {
                let s = sample_solution(&plan.partition, &plan.solution, &inst, &mut rr).unwrap();
                if s.selections.len() != m || s.solution.opened.len() > m || s.solution.opened.is_empty() {
                    selections += 1;
                }
            }
        }
    }
    out.check(mass == 0, format!("(a) group masses = 1/beta +- 1e-9 on {instances} instances (violations {mass})"));
    out.check(selections == 0, format!("(b) exactly beta*k selections per sample (violations {selections})"));
    out.check(witness == 0, format!("(c) R_w(x) <= R_x (violations {witness})"));
    out.check(markov == 0, format!("(d) R_x^beta <= beta R_x/(beta-1) + 1e-9 (violations {markov})"));
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let mut r = rng::from_seed(5005);
    let (mut bound_bad, mut descent_bad, mut converge_bad) = (0, 0, 0);
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let n = r.random_range(3..=10);
        let c = r.random_range(4..=10);
        let inst = common::random_instance(&mut r, n, c, 2);
        let opt = brute_kmedian(&inst, 2).unwrap().opt_cost;
        for p in [1usize, 2] {
            let cfg = SearchConfig::new(4, p);
            let trace = run_local_search(&inst, &cfg).unwrap();
            let cost = trace.final_solution.total_cost;
            let limit = bounds::alpha_local(2.0, p as u64, 0.0).unwrap() * 1.1 * opt;
            if cost > limit + 1e-9 {
                bound_bad += 1;
            }
            if opt > 0.0 {
                worst = worst.max(cost / opt);
            }
            let factor = cfg.threshold_factor(&inst);
            let mut prev = trace.initial_cost;
            for step in &trace.iterations {
                if step.old_cost != prev || !(step.new_cost < step.old_cost) || step.new_cost > factor * step.old_cost {
                    descent_bad += 1;
                }
                prev = step.new_cost;
            }
            if (cost - prev).abs() > 1e-9 * (1.0 + prev) {
                descent_bad += 1;
            }
            let max_steps = if cost > 0.0 {
                ((trace.initial_cost / cost + 1.0).ln() / (1.0 / factor).ln()).floor() as usize + 1
            } else {
                usize::MAX
            };
            if !trace.converged
                || best_swap(&inst, &trace.final_solution.opened, p, factor).is_some()
                || trace.iterations.len() > max_steps
            {
                converge_bad += 1;
            }
        }
    }
    out.check(
        bound_bad == 0,
        format!("final cost <= alpha_local(2,p,0) * 1.1 * OPT_2 on 30 instances x p in {{1,2}} (violations {bound_bad}, worst cost/OPT_2 {worst:.4})"),
    );
    out.check(descent_bad == 0, format!("monotone descent by factor (1 - delta/N) (violations {descent_bad})"));
    out.check(converge_bad == 0, format!("convergence, local optimality and step-count bound (violations {converge_bad})"));
    timed(Duration::from_secs(120), &mut out, start);
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let mut r = rng::from_seed(6006);
    let dims = [1usize, 2, 3, 5, 8, 12, 16, 20];
    let (mut opt_bad, mut part_bad) = (0, 0);
    let mut worst = 1.0f64;
    for i in 0..20 {
        let n = r.random_range(3..=8);
        let p = dims[i % dims.len()];
        let x = common::random_points(&mut r, n, p, 10.0);
        let k = 2;
        let mut cfg = ReductionConfig::new(0.3);
        cfg.seed = i as u64;
        let red = build_instance(&x, &cfg).unwrap();
        let opt_x = brute_kmeans(&x, k).unwrap().opt_cost;
        let opt = brute_kmedian(&red.instance, k).unwrap().opt_cost;
        let tol = 1e-9 * (1.0 + opt_x);
        if !(opt_x <= opt + tol && opt <= 1.3 * opt_x + tol) {
            opt_bad += 1;
        }
        if opt_x > 0.0 {
            worst = worst.max(opt / opt_x);
        }
        for _ in 0..20 {
            let labels = common::random_labels(&mut r, n);
            let s = Partition::from_labels(&labels).unwrap();
            let reduced = cost_partition_kmedian(&red.instance, &s).unwrap();
            let orig = cost_partition_kmeans(&x, &s.map_indices(&red.psi).unwrap()).unwrap();
            let tol = 1e-9 * (1.0 + orig);
            if !(orig <= reduced + tol && reduced <= 1.3 * orig + tol) {
                part_bad += 1;
            }
            if orig > 0.0 {
                worst = worst.max(reduced / orig);
            }
        }
    }
    out.check(opt_bad == 0, format!("OPT_X <= OPT_reduced <= 1.3 OPT_X on 20 instances (violations {opt_bad})"));
    out.check(
        part_bad == 0,
        format!("cost_X(psi(S)) <= cost_D(S) <= 1.3 cost_X(psi(S)) on 400 partitions (violations {part_bad}, worst ratio {worst:.6})"),
    );
    timed(Duration::from_secs(120), &mut out, start);
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let mut r = rng::from_seed(7007);
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut worst = 1.0f64;
    for dim in 1..=3 {
        for eps in [0.1, 0.3] {
            for t in 0..6 {
                let n = 1 + (t + dim) % 8;
                let n = if t == 5 { 8 } else { n };
                let mut x = common::random_points(&mut r, n, dim, 10.0);
                if t == 4 && n > 2 {
                    // include a repeated point
                    let mut rows = x.to_rows();
                    rows[1] = rows[0].clone();
                    x = PointSet::new(rows).unwrap();
                }
                for strategy in [CentroidStrategy::Grid, CentroidStrategy::Auto] {
                    let params = CentroidParams { strategy, ..CentroidParams::default() };
                    let c = build_centroid_set(&x, eps, &params).unwrap();
                    let check = verify_centroid_set(&x, &c, eps).unwrap();
                    checked += 1;
                    worst = worst.max(check.worst_ratio);
                    if !check.ok {
                        bad.push((dim, eps, n, strategy));
                    }
                }
            }
        }
    }
    out.check(
        bad.is_empty(),
        format!("verify_centroid_set ok for {checked} centroid sets, dim <= 3, eps' in {{0.1, 0.3}} (failures {bad:?}, worst ratio {worst:.6})"),
    );
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let mut r = rng::from_seed(8008);
    let mut violations = 0;
    let mut worst = 0.0f64;
    for t in 0..12 {
        let n = 4 + t % 9;
        let dim = 1 + t % 3;
        let inst = common::self_instance(&mut r, n, dim);
        let rep = check_relaxed_3hop_exhaustive(&inst, 3.0).unwrap();
        violations += rep.violations;
        worst = worst.max(rep.worst_ratio);
    }
    out.check(violations == 0, format!("no violations of the 3-relaxed 3-hop inequality on 12 instances (worst ratio {worst:.6})"));
    let line = PointSet::new((0..4).map(|i| vec![i as f64]).collect()).unwrap();
    let inst = KMedianInstance::sq_euclidean(line.clone(), line).unwrap();
    let tight = hop_ratio(&inst, Quadruple { j: 0, i_prime: 1, j_prime: 2, i: 3 }).unwrap();
    out.check((tight - 3.0).abs() <= 1e-9, format!("collinear unit-spacing quadruple ratio {tight} = 3 +- 1e-9"));
    out
}

fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                files.insert(rel, fs::read(&path).unwrap());
            }
        }
    }
    files
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let spec = ExperimentSpec::from_toml(
        r#"
        name = "determinism"
        k = 2
        beta = 2.0
        p_swap = 2
        epsilon = 0.45
        trials = 25
        seeds = [1, 2, 3]

        [generator]
        kind = "gaussian-mixture"
        n = 7
        p = 2
        true_k = 2
        separation = 8.0
        "#,
    )
    .unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    run_experiment(&spec, 1).unwrap().write_to(a.path()).unwrap();
    run_experiment(&spec, 1).unwrap().write_to(b.path()).unwrap();
    run_experiment(&spec, 3).unwrap().write_to(c.path()).unwrap();
    let (fa, fb, fc) = (dir_contents(a.path()), dir_contents(b.path()), dir_contents(c.path()));
    out.check(
        fa == fb && fa == fc && fa.len() > 2,
        format!("bench artifacts byte-identical across reruns and job counts ({} files)", fa.len()),
    );

    // library pipeline: reduce -> lp -> round, serialized
    let pipeline = || {
        let mut r = rng::from_seed(99);
        let x = common::random_points(&mut r, 6, 2, 5.0);
        let mut cfg = ReductionConfig::new(0.45);
        cfg.seed = 5;
        let red = build_instance(&x, &cfg).unwrap();
        let raw = solve_lp(&red.instance, 2, &LpOptions::default()).unwrap();
        let sol = normalize(&red.instance, &raw);
        let plan = RoundingPlan::new(&red.instance, sol.clone(), Openings::from_beta(2, 2.0).unwrap()).unwrap();
        let stats = round_many(&plan, &red.instance, 50, 5, 2).unwrap();
        let mut text = io::to_json_string(&io::InstanceFile::from_instance(&red.instance)).unwrap();
        text += &io::to_json_string(&io::LpSolutionFile::from_solution(&sol)).unwrap();
        text += &io::to_json_string(&stats).unwrap();
        text
    };
    out.check(pipeline() == pipeline(), "seeded reduce/lp/round JSON byte-identical on rerun");
    out
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("bound formulas", criterion_1),
        ("LP lower bound", criterion_2),
        ("rounding guarantee", criterion_3),
        ("rounding invariants", criterion_4),
        ("local search guarantee", criterion_5),
        ("reduction sandwich", criterion_6),
        ("centroid set", criterion_7),
        ("relaxed triangle inequality", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.ok() { "PASS" } else { "FAIL" };
        println!("criterion {} ({name}): {status} [{:.2?}]", i + 1, start.elapsed());
        for (ok, text) in &outcome.lines {
            println!("    {} {text}", if *ok { "pass" } else { "FAIL" });
        }
        if !outcome.ok() {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria passed");
    } else {
        println!("acceptance: criteria {failed:?} failed");
        std::process::exit(1);
    }
}
