//! Seeded property suites. Instances are drawn from one ChaCha stream, so a
//! seed and a count determine the report byte for byte.

use anyhow::Result;
use clap::ValueEnum;
use erglab::box_seminorm::box_measure;
use erglab::box_seminorm::{seminorm4_by_averages, seminorm4_on};
use erglab::corpus::{
    random_ergodic_system, random_observable, random_partition, random_space, random_subset, random_system, rng,
    CorpusRng,
};
use erglab::dynamics::CommutingSystem;
use erglab::measure::{holder_product_bound, integrate, Observable};
use erglab::rational::{format, pow, Q};
use erglab::recurrence::{
    cesaro_bound_check_with, diff_bound_check_with, j0_lower_bound_check, multi_corr, recurrence_set, Exponent,
    PairBoxes, ScanOptions,
};
use rand::Rng;
use serde_json::{json, Value};

use crate::report::{digest, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Inequality,
    Seminorm,
    Recurrence,
    Bounds,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Inequality => "inequality",
            Suite::Seminorm => "seminorm",
            Suite::Recurrence => "recurrence",
            Suite::Bounds => "bounds",
        }
    }
}

fn system_json(sys: &CommutingSystem) -> Value {
    json!({
        "points": sys.len(),
        "weights": sys.space().weights().iter().map(format).collect::<Vec<_>>(),
        "t1": sys.t1().forward(),
        "t2": sys.t2().forward(),
    })
}

fn values_json(f: &Observable) -> Value {
    json!(f.values().iter().map(format).collect::<Vec<_>>())
}

/// `Ok(None)` when the instance passes, `Ok(Some(details))` on a violation.
type Check = Result<Option<Value>>;

fn inequality(r: &mut CorpusRng) -> Check {
    let space = random_space(r, 10);
    let k = r.gen_range(1..=4);
    let parts: Vec<_> = (0..k).map(|_| random_partition(r, &space)).collect();
    let f = random_observable(r, &space, 0, 2, 5);
    let b = holder_product_bound(&f, &parts)?;
    Ok((!b.holds).then(|| {
        json!({
            "weights": space.weights().iter().map(format).collect::<Vec<_>>(),
            "partitions": parts.iter().map(|p| p.blocks().to_vec()).collect::<Vec<_>>(),
            "f": values_json(&f),
            "lhs": format(&b.lhs),
            "rhs": format(&b.rhs),
        })
    }))
}

fn seminorm(r: &mut CorpusRng) -> Check {
    let sys = random_system(r, 8);
    let f = random_observable(r, sys.space(), -2, 2, 3);
    let quad = box_measure(&sys)?;
    let v = seminorm4_on(&f, &quad)?.fourth_power;
    let avg = seminorm4_by_averages(&f, &sys)?;
    let swapped = seminorm4_on(&f, &box_measure(&sys.swapped())?)?.fourth_power;
    let inverted = seminorm4_on(&f, &box_measure(&sys.with_inverse_t1())?)?.fourth_power;
    let f4 = integrate(&f.map(|x| pow(x, 4)));
    let ok = v == avg && v == swapped && v == inverted && v <= f4 && v >= Q::from_integer(0.into());
    Ok((!ok).then(|| {
        json!({
            "system": system_json(&sys),
            "f": values_json(&f),
            "box": format(&v),
            "averages": format(&avg),
            "swapped": format(&swapped),
            "inverted": format(&inverted),
            "fourth_moment": format(&f4),
        })
    }))
}

fn recurrence(r: &mut CorpusRng) -> Check {
    let sys = random_ergodic_system(r, 8);
    let set = random_subset(r, sys.len());
    let a = Observable::indicator(sys.space(), &set)?;
    let mu = integrate(&a);
    let eps = pow(&mu, 4) / Q::from_integer(2.into());
    let report = recurrence_set(&sys, &set, Exponent::Four, &eps, &ScanOptions::default())?;
    let threshold = pow(&mu, 4) - &eps;
    let mut brute = Vec::new();
    for n in 0..sys.period() {
        if multi_corr(&sys, &a, &a, &a, n as i64)? > threshold {
            brute.push(n);
        }
    }
    let ok = report.syndetic && report.hits == brute && report.max_gap.is_some_and(|g| g <= report.period);
    Ok((!ok).then(|| json!({ "system": system_json(&sys), "set": set, "hits": report.hits, "brute_force": brute })))
}

fn bounds(r: &mut CorpusRng) -> Check {
    let sys = random_system(r, 6);
    let boxes = PairBoxes::new(&sys)?;
    let fs: Vec<Observable> = (0..3).map(|_| random_observable(r, sys.space(), -1, 1, 4)).collect();
    let g = random_observable(r, sys.space(), 0, 1, 4);
    let c = cesaro_bound_check_with(&sys, &boxes, &fs[0], &fs[1], &fs[2], &Q::from_integer(0.into()))?;
    let j = j0_lower_bound_check(&sys, &g)?;
    let d = diff_bound_check_with(&sys, &boxes, &g)?;
    let ok = c.holds && j.holds && d.holds;
    Ok((!ok).then(|| {
        json!({
            "system": system_json(&sys),
            "f": fs.iter().map(values_json).collect::<Vec<_>>(),
            "g": values_json(&g),
            "cesaro": c.holds,
            "j0": j.holds,
            "difference": d.holds,
        })
    }))
}

pub fn run(suite: Suite, seed: u64, count: u64) -> Result<Outcome> {
    let mut r = rng(seed);
    let mut first_failure = Value::Null;
    let mut failures = 0u64;
    for instance in 0..count {
        let found = match suite {
            Suite::Inequality => inequality(&mut r)?,
            Suite::Seminorm => seminorm(&mut r)?,
            Suite::Recurrence => recurrence(&mut r)?,
            Suite::Bounds => bounds(&mut r)?,
        };
        if let Some(details) = found {
            failures += 1;
            if first_failure.is_null() {
                first_failure = json!({ "instance": instance, "details": details });
            }
        }
    }
    let result = json!({
        "suite": suite.name(),
        "seed": seed,
        "count": count,
        "failures": failures,
        "first_failure": first_failure,
    });
    let echo = format!("fuzz suite={} seed={seed} count={count}", suite.name());
    Ok(Outcome::new("fuzz", digest(echo.as_bytes()), result, json!({ "all_pass": failures == 0 })))
}
