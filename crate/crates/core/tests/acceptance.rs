//! Acceptance criteria 1 to 10. Each test prints one `PASS` or `FAIL` line
//! and then asserts the verdict.

use std::time::{Duration, Instant};

use erglab::box_seminorm::{box_measure, is_magic, magic_extension, seminorm4, seminorm4_by_averages, seminorm4_on};
use erglab::corpus::{random_observable, random_partition, random_space, rng, standard_corpus, NamedSystem};
use erglab::dynamics::{ergodic_components, is_ergodic, lift_observable, CommutingSystem};
use erglab::measure::{holder_product_bound, integrate, Observable};
use erglab::rational::{pow, q, qi, Q};
use erglab::recurrence::{
    cesaro_bound_check_with, diff_bound_check_with, j0_lower_bound_check, product_rotation_khintchine3, recurrence_set,
    Exponent, PairBoxes, ScanOptions,
};
use erglab::symbolic::{
    counterexample_certificate, counterexample_intersection, counterexample_measure, counterexample_power,
};
use num_traits::Zero;

const CORPUS_SEED: u64 = 20_240_601;

fn verdict(id: u32, title: &str, started: Instant, limit: Duration, failures: &[String]) {
    let elapsed = started.elapsed();
    let mut problems = failures.to_vec();
    if elapsed > limit {
        problems.push(format!("took {elapsed:?}, limit {limit:?}"));
    }
    let status = if problems.is_empty() { "PASS" } else { "FAIL" };
    println!("acceptance {id:>2} {status} {title} ({:.2}s)", elapsed.as_secs_f64());
    for p in problems.iter().take(5) {
        println!("    {p}");
    }
    assert!(problems.is_empty(), "criterion {id} failed: {problems:?}");
}

fn corpus() -> Vec<NamedSystem> {
    standard_corpus(CORPUS_SEED)
}

/// A few fixed observables plus seeded random ones, all with values in `[lo, hi]`.
fn test_functions(sys: &CommutingSystem, seed: u64, lo: i64, hi: i64, count: usize) -> Vec<Observable> {
    let mut r = rng(seed);
    let n = sys.len();
    let mut out = vec![
        Observable::constant(sys.space(), Q::from_integer(hi.into())),
        Observable::indicator(sys.space(), &[0]).expect("point 0 exists"),
    ];
    if lo < 0 {
        let mut alt = vec![qi(0); n];
        for (x, v) in alt.iter_mut().enumerate() {
            *v = if x % 2 == 0 { qi(hi) } else { qi(lo) };
        }
        out.push(Observable::new(sys.space(), alt).expect("length n"));
    }
    while out.len() < count {
        out.push(random_observable(&mut r, sys.space(), lo, hi, 6));
    }
    out
}

#[test]
fn criterion_01_counterexample_exactness() {
    let started = Instant::now();
    let mut failures = Vec::new();
    if counterexample_measure() != q(16, 27) {
        failures.push(format!("mu(A) = {}", counterexample_measure()));
    }
    for n in [1, -1, 5, -7] {
        let v = counterexample_intersection(n);
        if v != q(145, 729) {
            failures.push(format!("I_{n} = {v}"));
        }
    }
    let certified = q(3915, 19683) < q(96, 100) * q(4096, 19683) && counterexample_certificate();
    if !certified || q(145, 729) != q(3915, 19683) || pow(&q(16, 27), 3) != q(4096, 19683) {
        failures.push("inequality certificate".into());
    }
    verdict(1, "counterexample exactness", started, Duration::from_secs(1), &failures);
}

#[test]
fn criterion_02_amplification() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let r = q(3915, 4096);
    for c in [qi(1), q(96, 100), q(1, 2), q(1, 100)] {
        let mut brute = 1u32;
        let mut power = r.clone();
        while power >= c {
            power *= &r;
            brute += 1;
        }
        match counterexample_power(&c) {
            Ok(p) if p.l == brute && p.certificate && p.lhs < p.rhs => {}
            other => failures.push(format!("c = {c}: {other:?}, brute force {brute}")),
        }
    }
    if counterexample_power(&q(96, 100)).map(|p| p.l).ok() != Some(1) {
        failures.push("c = 96/100 needs l = 1".into());
    }
    verdict(2, "amplification", started, Duration::from_secs(1), &failures);
}

#[test]
fn criterion_03_seminorm_dual_computation() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let corpus = corpus();
    if corpus.len() < 20 {
        failures.push(format!("corpus has {} systems", corpus.len()));
    }
    for (i, named) in corpus.iter().enumerate() {
        let sys = &named.system;
        let quad = box_measure(sys).expect("small system");
        for f in test_functions(sys, 300 + i as u64, -2, 3, 6) {
            let by_box = seminorm4_on(&f, &quad).expect("same space").fourth_power;
            let by_avg = seminorm4_by_averages(&f, sys).expect("small system");
            if by_box != by_avg {
                failures.push(format!("{}: {by_box} vs {by_avg}", named.name));
            }
        }
    }
    verdict(3, "seminorm via box measure equals seminorm via averages", started, Duration::from_secs(60), &failures);
}

#[test]
fn criterion_04_magic_extension() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for named in corpus() {
        let ext = match magic_extension(&named.system) {
            Ok(e) => e,
            Err(e) => {
                failures.push(format!("{}: {e}", named.name));
                continue;
            }
        };
        // π₀₀ pushes μ* forward to μ
        let mut pushed = vec![Q::zero(); named.system.len()];
        for (i, &x) in ext.factor.map().iter().enumerate() {
            pushed[x] += ext.system.space().weight(i);
        }
        if pushed != named.system.space().weights() {
            failures.push(format!("{}: pushforward differs", named.name));
        }
        match is_magic(&ext.system) {
            Ok(v) if v.magic => {}
            other => failures.push(format!("{}: extension not magic {other:?}", named.name)),
        }
        for comp in ergodic_components(&ext.system) {
            if !is_magic(&comp.system).map(|v| v.magic).unwrap_or(false) {
                failures.push(format!("{}: component {} not magic", named.name, comp.index));
            }
        }
    }
    verdict(4, "magic extension", started, Duration::from_secs(120), &failures);
}

#[test]
fn criterion_05_seminorm_laws() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for (i, named) in corpus().iter().enumerate() {
        let sys = &named.system;
        let ext = magic_extension(sys).expect("small system");
        let comps = ergodic_components(sys);
        for f in test_functions(sys, 500 + i as u64, -1, 2, 4) {
            let v = seminorm4(&f, sys).expect("small system").fourth_power;
            let swapped = seminorm4(&f, &sys.swapped()).expect("small system").fourth_power;
            let inverted = seminorm4(&f, &sys.with_inverse_t1()).expect("small system").fourth_power;
            if v != swapped || v != inverted {
                failures.push(format!("{}: symmetry {v} {swapped} {inverted}", named.name));
            }
            let f4 = integrate(&f.map(|x| pow(x, 4)));
            if v > f4 {
                failures.push(format!("{}: domination {v} > {f4}", named.name));
            }
            let lifted = lift_observable(&f, &ext.factor).expect("factor of this system");
            let up =
                seminorm4_on(&lifted, &box_measure(&ext.system).expect("extension")).expect("same space").fourth_power;
            if up != v {
                failures.push(format!("{}: lift {up} vs {v}", named.name));
            }
            let decomposed: Q = comps
                .iter()
                .map(|c| &c.mass * seminorm4(&c.restrict(&f), &c.system).expect("component").fourth_power)
                .sum();
            if decomposed != v {
                failures.push(format!("{}: decomposition {decomposed} vs {v}", named.name));
            }
        }
    }
    verdict(5, "seminorm laws", started, Duration::from_secs(120), &failures);
}

/// `∫ f ∏ E(f | P_i) dμ` by averaging over blocks directly.
fn holder_lhs(f: &Observable, parts: &[erglab::measure::Partition]) -> Q {
    let space = f.space();
    let mut conds = Vec::new();
    for p in parts {
        let mut e = vec![Q::zero(); space.len()];
        for block in p.blocks() {
            let mass: Q = block.iter().map(|&x| space.weight(x)).sum();
            let weighted: Q = block.iter().map(|&x| space.weight(x) * f.value(x)).sum();
            for &x in block {
                e[x] = &weighted / &mass;
            }
        }
        conds.push(e);
    }
    (0..space.len()).map(|x| conds.iter().fold(space.weight(x) * f.value(x), |acc, e| acc * &e[x])).sum()
}

#[test]
fn criterion_06_holder_fuzz() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut r = rng(6);
    for trial in 0..1000 {
        let space = random_space(&mut r, 10);
        let k = 1 + trial % 4;
        let parts: Vec<_> = (0..k).map(|_| random_partition(&mut r, &space)).collect();
        let f = random_observable(&mut r, &space, 0, 3, 4);
        let b = holder_product_bound(&f, &parts).expect("valid input");
        let oracle_rhs = pow(&integrate(&f), k as u32 + 1);
        if !b.holds || b.lhs < b.rhs || b.lhs != holder_lhs(&f, &parts) || b.rhs != oracle_rhs {
            failures.push(format!("trial {trial}: {} < {}", b.lhs, b.rhs));
        }
    }
    verdict(6, "Holder product inequality fuzz (1000 instances)", started, Duration::from_secs(60), &failures);
}

/// `μ(A ∩ T₁⁻ⁿA ∩ T₂⁻ⁿA)` by stepping each point.
fn brute_intersection(sys: &CommutingSystem, set: &[usize], n: u64) -> Q {
    let mut member = vec![false; sys.len()];
    for &x in set {
        member[x] = true;
    }
    set.iter()
        .filter(|&&x| {
            let (mut a, mut b) = (x, x);
            for _ in 0..n {
                a = sys.t1().apply(a);
                b = sys.t2().apply(b);
            }
            member[a] && member[b]
        })
        .map(|&x| sys.space().weight(x).clone())
        .sum()
}

#[test]
fn criterion_07_khintchine_exponent_four() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for named in corpus().iter().filter(|s| is_ergodic(&s.system)) {
        let sys = &named.system;
        let n = sys.len();
        let period = sys.period();
        for mask in 1u32..(1 << n) - 1 {
            let set: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).collect();
            let mu: Q = set.iter().map(|&x| sys.space().weight(x).clone()).sum();
            let eps = pow(&mu, 4) / qi(2);
            let report = recurrence_set(sys, &set, Exponent::Four, &eps, &ScanOptions::default()).expect("valid input");
            let threshold = pow(&mu, 4) - &eps;
            let brute: Vec<u64> = (0..period).filter(|&k| brute_intersection(sys, &set, k) > threshold).collect();
            let ok = report.syndetic
                && report.complete
                && report.period == period
                && report.max_gap.is_some_and(|g| g <= period)
                && report.hits == brute;
            if !ok {
                failures.push(format!("{} A={set:?}: hits {:?} vs {brute:?}", named.name, report.hits));
            }
            checked += 1;
        }
    }
    if checked == 0 {
        failures.push("no ergodic systems with proper subsets".into());
    }
    verdict(7, "Khintchine recurrence, exponent 4", started, Duration::from_secs(60), &failures);
}

#[test]
fn criterion_08_product_rotation_exponent_three() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for (p, qq) in [(2usize, 3usize), (2, 2), (4, 6), (3, 5)] {
        for a in 0..p * qq {
            let eps = q(1, 1_000_000);
            match product_rotation_khintchine3(p, qq, &[a], &eps) {
                Ok(r) => {
                    let f = Observable::indicator(r.system.space(), &[a]).expect("in range");
                    let bound = pow(&integrate(&f), 3);
                    if !(r.report.syndetic && r.i0_holds && r.i0 >= bound && r.i0_bound == bound) {
                        failures.push(format!("Z{p}xZ{qq} A={{{a}}}: I0 {} bound {bound}", r.i0));
                    }
                }
                Err(e) => failures.push(format!("Z{p}xZ{qq} A={{{a}}}: {e}")),
            }
        }
    }
    verdict(8, "product rotations, exponent 3", started, Duration::from_secs(60), &failures);
}

#[test]
fn criterion_09_j0_bound() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for (i, named) in corpus().iter().enumerate() {
        for f in test_functions(&named.system, 900 + i as u64, 0, 1, 50) {
            match j0_lower_bound_check(&named.system, &f) {
                Ok(c) if c.holds && c.j0 >= c.bound => {}
                other => failures.push(format!("{}: {other:?}", named.name)),
            }
        }
    }
    verdict(9, "J0 lower bound", started, Duration::from_secs(60), &failures);
}

#[test]
fn criterion_10_cesaro_bounds() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let mut discrete_cases = 0;
    for (i, named) in corpus().iter().enumerate() {
        let sys = &named.system;
        let boxes = PairBoxes::new(sys).expect("small system");
        let signed = test_functions(sys, 1000 + i as u64, -1, 1, 8);
        for (j, f0) in signed.iter().enumerate() {
            let f1 = &signed[(j + 1) % signed.len()];
            let f2 = &signed[(j + 3) % signed.len()];
            match cesaro_bound_check_with(sys, &boxes, f0, f1, f2, &qi(0)) {
                Ok(c) => {
                    let avg4 = pow(c.average.as_ref().expect("t = 0 average is rational"), 4);
                    let exact = c.bounds.iter().all(|b| avg4 <= *b);
                    if !(c.holds && c.certified && exact) {
                        failures.push(format!("{}: average {:?} bounds {:?}", named.name, c.average, c.bounds));
                    }
                }
                Err(e) => failures.push(format!("{}: {e}", named.name)),
            }
        }
        for f in test_functions(sys, 1100 + i as u64, 0, 1, 8) {
            match diff_bound_check_with(sys, &boxes, &f) {
                Ok(d) => {
                    let zero_ok = !d.joins_discrete || (d.average.is_zero() && d.seminorms.iter().all(Zero::is_zero));
                    if d.joins_discrete {
                        discrete_cases += 1;
                    }
                    if !(d.holds && d.certified && zero_ok) {
                        failures.push(format!("{}: difference {} bound {:?}", named.name, d.average, d.bound_sum));
                    }
                }
                Err(e) => failures.push(format!("{}: {e}", named.name)),
            }
        }
    }
    if discrete_cases == 0 {
        failures.push("no system with discrete pairwise joins exercised".into());
    }
    verdict(10, "Cesaro averages and the difference bound", started, Duration::from_secs(120), &failures);
}
