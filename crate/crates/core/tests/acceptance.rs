//! Acceptance run: ten criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p swapreach --test acceptance`. The process exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;
use swapreach::dynamics::{greedy_swap, greedy_swap_with, verify_trace, LowestHolder, RandomOrder};
use swapreach::generate::{generate, rng_for, GenMode};
use swapreach::geometry::{theta, total_displacement, CandidateTable};
use swapreach::oracle::enumerate_valid_selections;
use swapreach::solver::{normalise, Prepared};
use swapreach::twosat::{Lit, TwoSat};
use swapreach::{dynamics::is_rational_swap, is_valid, reduce_ro_to_ra, solve, AgentId, Direction, ObjectId, Selection};

use common::*;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fig1_reproduction() -> Outcome {
    let inst = fig1();
    let _ = solve(&inst);
    let start = Instant::now();
    let sol = solve(&inst).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(sol.reachable, || "answered no".into())?;
    let trace = sol.trace.unwrap();
    verify_trace(&inst, &trace).map_err(|e| e.to_string())?;
    let pairs: Vec<[usize; 2]> = trace
        .iter()
        .map(|s| {
            let mut p = [s.a.0 + 1, s.b.0 + 1];
            p.sort();
            p
        })
        .collect();
    check(pairs == [[2, 3], [1, 3]], || format!("swaps {pairs:?}"))?;
    check(elapsed < Duration::from_millis(1), || format!("took {elapsed:?}"))?;
    Ok(format!("swaps {{2,3}} then {{3,1}}, {elapsed:?}"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let (mut total, mut yes) = (0, 0);
    for seed in 0..600u64 {
        let n = 3 + (seed % 5) as usize;
        let mode = if seed % 2 == 0 { GenMode::Random } else { GenMode::YesGuaranteed };
        let inst = generate(n, mode, seed);
        let fast = solve(&inst).map_err(|e| format!("seed {seed}: {e}"))?.reachable;
        let slow = brute_force_assignment(&inst);
        check(fast == slow, || format!("seed {seed} n {n}: solve {fast}, search {slow}"))?;
        total += 1;
        yes += usize::from(slow);
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{total} instances ({yes} yes) agree, {elapsed:.2?}"))
}

/// Rule-1 reduced instances for the exhaustive selection checks.
fn selection_corpus(count: usize, max_n: usize) -> Vec<swapreach::Instance> {
    let modes = [GenMode::Random, GenMode::YesGuaranteed, GenMode::Perturbed];
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let n = 3 + (seed as usize % (max_n - 2));
        let inst = generate(n, modes[seed as usize % 3], 10_000 + seed);
        if let Some(reduced) = normalise(&inst).unwrap() {
            out.push(reduced);
        }
        seed += 1;
    }
    out
}

fn characterisation() -> Outcome {
    let corpus = selection_corpus(200, 10);
    let mut checked = 0u64;
    let mut reached = 0u64;
    for inst in &corpus {
        let n = inst.n();
        let table = CandidateTable::build(inst).map_err(|e| e.to_string())?;
        for m in 0..1u64 << n {
            let gamma = Selection::from_mask(m, n);
            let greedy = greedy_swap(inst, &gamma).is_reached();
            let valid = is_valid(&gamma, &table);
            check(greedy == valid, || {
                format!("n {n} selection {gamma}: greedy {greedy}, valid {valid}")
            })?;
            checked += 1;
            reached += u64::from(greedy);
        }
    }
    Ok(format!(
        "{} instances, {checked} selections, {reached} reach the target",
        corpus.len()
    ))
}

fn formula_correctness() -> Outcome {
    let corpus = selection_corpus(300, 8);
    let (mut guesses, mut instances) = (0, 0);
    for inst in &corpus {
        let n = inst.n();
        if inst.initial() == inst.target() {
            continue;
        }
        instances += 1;
        let valid = enumerate_valid_selections(inst);
        let prep = Prepared::new(inst.clone()).map_err(|e| e.to_string())?;
        for edge in 0..n {
            if !is_rational_swap(inst, inst.initial(), AgentId(edge), AgentId((edge + 1) % n)) {
                continue;
            }
            let mut analysis = prep.analyse(edge);
            analysis.infer();
            let formula = analysis.formula();
            let guess = analysis.guess;
            let models: Vec<u64> = (0..1u64 << n)
                .filter(|&m| {
                    let bits: Vec<bool> = (0..n).map(|o| m >> o & 1 == 1).collect();
                    formula.satisfied_by(&bits)
                })
                .collect();
            let want: Vec<u64> = valid
                .iter()
                .copied()
                .filter(|&m| m >> guess.x.0 & 1 == 1 && m >> guess.y.0 & 1 == 0)
                .collect();
            check(models == want, || {
                format!("n {n} edge {edge}: models {models:?}, valid {want:?}")
            })?;
            guesses += 1;
        }
    }
    Ok(format!("{instances} instances, {guesses} guesses, model sets equal"))
}

fn theta_conservation() -> Outcome {
    let corpus = selection_corpus(200, 10);
    let mut checked = 0;
    for inst in &corpus {
        let n = inst.n();
        let y = total_displacement(inst);
        let table = CandidateTable::build(inst).map_err(|e| e.to_string())?;
        for m in 0..1u64 << n {
            let gamma = Selection::from_mask(m, n);
            if !greedy_swap(inst, &gamma).is_reached() {
                continue;
            }
            check(y % n == 0, || format!("n {n}: Y = {y} but a selection succeeds"))?;
            let cw = (0..n)
                .map(ObjectId)
                .filter(|&o| table.is_stationary(o) || gamma.get(o) == Direction::Cw)
                .count();
            check(cw == n - y / n, || format!("n {n} selection {gamma}: {cw} clockwise, n - Y/n = {}", n - y / n))?;
            check(theta(inst) == Ok(cw), || "theta disagrees".into())?;
            checked += 1;
        }
    }
    Ok(format!("{checked} successful selections conserve the clockwise count"))
}

fn candidate_bound() -> Outcome {
    let mut worst = (0usize, 0usize);
    let mut count = 0;
    for (i, &n) in [3usize, 5, 8, 13, 21, 50, 100, 200, 350, 500].iter().enumerate() {
        for (j, mode) in [GenMode::Random, GenMode::YesGuaranteed, GenMode::Perturbed].into_iter().enumerate() {
            let inst = generate(n, mode, (i * 3 + j) as u64);
            let Some(inst) = normalise(&inst).unwrap() else { continue };
            let table = CandidateTable::build(&inst).map_err(|e| e.to_string())?;
            for p in (0..n).map(ObjectId) {
                let size: usize = [Direction::Ccw, Direction::Cw]
                    .iter()
                    .flat_map(|&d| table.lists_along(p, d))
                    .map(Vec::len)
                    .sum();
                check(size <= 4 * n, || format!("n {n} object {p}: {size} > 4n"))?;
                if size * worst.1 > worst.0 * n.max(1) || worst.1 == 0 {
                    worst = (size, n);
                }
            }
            count += 1;
        }
    }
    Ok(format!(
        "{count} instances up to n = 500, largest ratio {}/{} = {:.2}n",
        worst.0,
        worst.1,
        worst.0 as f64 / worst.1 as f64
    ))
}

fn order_invariance() -> Outcome {
    let mut rng = rng_for(77);
    let mut pairs = 0;
    let mut reached = 0;
    let mut seed = 0u64;
    while pairs < 100 {
        let n = rng.gen_range(4..=8);
        let mode = if seed % 2 == 0 { GenMode::YesGuaranteed } else { GenMode::Perturbed };
        let inst = generate(n, mode, 20_000 + seed);
        seed += 1;
        let Some(inst) = normalise(&inst).unwrap() else { continue };
        let valid = enumerate_valid_selections(&inst);
        // Alternate between a successful selection and a random one.
        let mask = if pairs % 2 == 0 && !valid.is_empty() {
            valid[rng.gen_range(0..valid.len())]
        } else {
            rng.gen_range(0..1u64 << n)
        };
        let gamma = Selection::from_mask(mask, n);
        let base = greedy_swap_with(&inst, &gamma, &mut LowestHolder);
        for policy in 0..20u64 {
            let mut order = RandomOrder(rng_for(1000 * seed + policy));
            let other = greedy_swap_with(&inst, &gamma, &mut order);
            check(other.is_reached() == base.is_reached(), || {
                format!("n {n} selection {gamma}: policy {policy} disagrees")
            })?;
        }
        pairs += 1;
        reached += usize::from(base.is_reached());
    }
    Ok(format!("{pairs} pairs ({reached} reach the target) x 20 policies agree"))
}

fn twosat_engine() -> Outcome {
    let mut rng = rng_for(5);
    let mut sat = 0;
    for f in 0..1000 {
        let vars = rng.gen_range(1..=12);
        let mut formula = TwoSat::new(vars);
        for _ in 0..rng.gen_range(0..=3 * vars) {
            let a = Lit::new(rng.gen_range(0..vars), rng.gen_bool(0.5));
            let b = Lit::new(rng.gen_range(0..vars), rng.gen_bool(0.5));
            formula.add_clause(a, b);
        }
        let brute = (0..1u32 << vars).any(|m| {
            let bits: Vec<bool> = (0..vars).map(|v| m >> v & 1 == 1).collect();
            formula.satisfied_by(&bits)
        });
        let model = formula.solve();
        check(model.is_some() == brute, || format!("formula {f}: engine {}, brute {brute}", model.is_some()))?;
        if let Some(model) = model {
            check(formula.satisfied_by(&model), || format!("formula {f}: model violates a clause"))?;
            sat += 1;
        }
    }
    Ok(format!("1000 formulas ({sat} satisfiable) agree"))
}

fn reduction_equivalence() -> Outcome {
    let mut rng = rng_for(9);
    let (mut cases, mut yes) = (0, 0);
    for _ in 0..300 {
        let n = rng.gen_range(2..=4);
        let ro = random_clique_ro(n, &mut rng);
        let ra = reduce_ro_to_ra(&ro).map_err(|e| e.to_string())?;
        check(ra.n() == 2 * n && ra.edges().len() == n * (2 * n - 1), || {
            format!("output has {} agents and {} edges", ra.n(), ra.edges().len())
        })?;
        let a = brute_force_object(&ro);
        let b = brute_force_assignment(&ra);
        check(a == b, || format!("n {n}: object {a}, assignment {b}"))?;
        cases += 1;
        yes += usize::from(a);
    }
    Ok(format!("{cases} cases ({yes} yes) agree, outputs complete on 2n agents"))
}

fn median_solve(n: usize, trials: u64) -> Result<(Duration, Duration), String> {
    let mut times = Vec::new();
    for t in 0..trials {
        let inst = generate(n, GenMode::YesGuaranteed, 30_000 + t);
        let start = Instant::now();
        let sol = solve(&inst).map_err(|e| e.to_string())?;
        times.push(start.elapsed());
        check(sol.reachable, || format!("n {n} trial {t} answered no"))?;
    }
    times.sort();
    Ok((times[times.len() / 2], *times.last().unwrap()))
}

fn cubic_scaling() -> Outcome {
    let (m200, _) = median_solve(200, 7)?;
    let (m400, max400) = median_solve(400, 7)?;
    let ratio = m400.as_secs_f64() / m200.as_secs_f64();
    check(ratio <= 10.0, || format!("median ratio {ratio:.2} ({m200:.2?} -> {m400:.2?})"))?;
    check(max400 < Duration::from_secs(5), || format!("n = 400 took {max400:.2?}"))?;
    Ok(format!("median {m200:.2?} -> {m400:.2?}, ratio {ratio:.2}, slowest n=400 {max400:.2?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("figure 1 reproduction", fig1_reproduction),
        ("solver agrees with exhaustive search", oracle_equivalence),
        ("greedy swap matches validity", characterisation),
        ("formula models equal valid selections", formula_correctness),
        ("clockwise count conservation", theta_conservation),
        ("candidate lists within 4n", candidate_bound),
        ("swap order invariance", order_invariance),
        ("2-SAT engine against brute force", twosat_engine),
        ("clique reduction equivalence", reduction_equivalence),
        ("cubic scaling", cubic_scaling),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.2?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{took:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
