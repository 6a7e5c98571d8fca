use anyhow::{anyhow, bail, Context, Result};
use erglab::box_seminorm::{
    box_measure, g_algebra_of, invariant_join, is_magic, is_magic_with, magic_extension_from, seminorm4_by_averages,
    seminorm4_on,
};
use erglab::dynamics::{ergodic_components, group_orbit_partition, invariant_partition, is_ergodic, Which};
use erglab::measure::{integrate, Observable};
use erglab::rational::{format, parse, to_f64, Q};
use erglab::recurrence::{
    cesaro_bound_check_with, diff_bound_check_with, j0_lower_bound_check, recurrence_set, Exponent, PairBoxes,
    ScanOptions,
};
use erglab::symbolic::{
    counterexample_certificate, counterexample_entries, counterexample_intersection, counterexample_measure,
    counterexample_power,
};
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::document::{read_document, LoadedSystem, SystemDocument};
use crate::report::{blocks, digest, exact, exact_list, Outcome};

/// Default size guard for commands that build the box measure.
pub const BOX_MAX_POINTS: usize = 40;
/// Default size guard for everything else.
pub const DEFAULT_MAX_POINTS: usize = 4096;

pub struct Input {
    pub digest: String,
    pub loaded: LoadedSystem,
}

pub fn load(path: &std::path::Path, max_points: usize) -> Result<Input> {
    let (bytes, doc) = read_document(path)?;
    if doc.len() > max_points {
        bail!("size limit exceeded: {} points, limit {max_points} (see --max-points)", doc.len());
    }
    let loaded = doc.load()?;
    Ok(Input { digest: digest(&bytes), loaded })
}

pub fn parse_rational(s: &str) -> Result<Q> {
    parse(s).ok_or_else(|| anyhow!("`{s}` is not a rational p/q"))
}

/// `--f` takes `one` or a comma-separated list of rationals, one per point;
/// `--set` takes a comma-separated list of points (labels or indices).
pub fn parse_observable(loaded: &LoadedSystem, f: Option<&str>, set: Option<&str>) -> Result<Observable> {
    let space = loaded.system.space();
    match (f, set) {
        (Some("one"), None) => Ok(Observable::constant(space, Q::one())),
        (Some(list), None) => {
            let values = list.split(',').map(|s| parse_rational(s.trim())).collect::<Result<Vec<_>>>()?;
            Observable::new(space, values).context("--f")
        }
        (None, Some(_)) => Ok(Observable::indicator(space, &parse_set(loaded, set.unwrap_or_default())?)?),
        (Some(_), Some(_)) => bail!("give either --f or --set, not both"),
        (None, None) => bail!("an observable is required: --f or --set"),
    }
}

pub fn parse_set(loaded: &LoadedSystem, list: &str) -> Result<Vec<usize>> {
    let mut out = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| loaded.point(s))
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn inspect(input: &Input) -> Outcome {
    let sys = &input.loaded.system;
    let result = json!({
        "name": input.loaded.name,
        "points": sys.len(),
        "weights": exact_list(sys.space().weights()),
        "ergodic": is_ergodic(sys),
        "period": sys.period(),
        "orders": { "t1": sys.t1().order(), "t2": sys.t2().order(), "t3": sys.t3().order() },
        "invariant_partitions": {
            "t1": blocks(&invariant_partition(sys, Which::T1)),
            "t2": blocks(&invariant_partition(sys, Which::T2)),
            "t3": blocks(&invariant_partition(sys, Which::T3)),
            "t1_join_t2": blocks(&invariant_join(sys)),
        },
        "joint_orbits": blocks(&group_orbit_partition(sys)),
        "document": serde_json::to_value(SystemDocument::from_system(&input.loaded)).expect("serializable"),
    });
    Outcome::new("inspect", input.digest.clone(), result, json!({ "valid": true }))
}

pub fn seminorm(input: &Input, f: &Observable) -> Result<Outcome> {
    let sys = &input.loaded.system;
    let quad = box_measure(sys)?;
    let by_box = seminorm4_on(f, &quad)?;
    let by_averages = seminorm4_by_averages(f, sys)?;
    let result = json!({
        "fourth_power": exact(&by_box.fourth_power),
        "fourth_power_by_averages": exact(&by_averages),
        "seminorm": by_box.root,
        "box_measure_support": quad.len(),
        "integral": exact(&integrate(f)),
    });
    let verdicts = json!({ "box_equals_averages": by_box.fourth_power == by_averages });
    Ok(Outcome::new("seminorm", input.digest.clone(), result, verdicts))
}

pub fn magic_extend(input: &Input, emit: Option<&std::path::Path>) -> Result<Outcome> {
    let sys = &input.loaded.system;
    let quad = box_measure(sys)?;
    let base = is_magic_with(sys, &quad);
    let g = g_algebra_of(&quad);
    let ext = magic_extension_from(sys, quad)?;
    let ext_magic = is_magic(&ext.system)?;
    let components = ergodic_components(&ext.system);
    let mut component_magic = true;
    for c in &components {
        component_magic &= is_magic(&c.system)?.magic;
    }
    let mut pushed = vec![Q::zero(); sys.len()];
    for (i, &x) in ext.factor.map().iter().enumerate() {
        pushed[x] += ext.system.space().weight(i);
    }
    if let Some(path) = emit {
        let doc = SystemDocument::from_system(&LoadedSystem {
            name: Some(format!("{}-extension", input.loaded.name.as_deref().unwrap_or("system"))),
            labels: None,
            system: ext.system.clone(),
        });
        crate::write_atomic(path, &doc.to_json())?;
    }
    let result = json!({
        "base": {
            "magic": base.magic,
            "witness": base.witness.as_ref().map(|w| exact_list(w.values())),
            "witness_fourth_power": base.witness_fourth_power.as_ref().map(exact),
            "g_algebra": blocks(&g),
            "invariant_join": blocks(&invariant_join(sys)),
        },
        "extension": {
            "points": ext.system.len(),
            "tuples": ext.quad.support(),
            "weights": exact_list(ext.system.space().weights()),
            "t1": ext.system.t1().forward(),
            "t2": ext.system.t2().forward(),
            "factor_map": ext.factor.map(),
            "ergodic_components": components.len(),
        },
    });
    let verdicts = json!({
        "extension_valid": true,
        "pushforward_is_base_measure": pushed == sys.space().weights(),
        "extension_magic": ext_magic.magic,
        "components_magic": component_magic,
    });
    Ok(Outcome::new("magic-extend", input.digest.clone(), result, verdicts))
}

pub struct ScanArgs {
    pub set: Vec<usize>,
    pub exponent: Exponent,
    pub epsilon: Q,
    pub options: ScanOptions,
}

pub fn recurrence_scan(input: &Input, args: &ScanArgs) -> Result<Outcome> {
    let sys = &input.loaded.system;
    let r = recurrence_set(sys, &args.set, args.exponent, &args.epsilon, &args.options)?;
    let hit_set: std::collections::HashSet<u64> = r.hits.iter().copied().collect();
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["n", "I_n", "hit"]).expect("in-memory write");
    let mut rows = Vec::with_capacity(r.values.len());
    for (n, v) in r.values.iter().enumerate() {
        let hit = hit_set.contains(&(n as u64));
        csv.write_record([n.to_string(), format(v), hit.to_string()]).expect("in-memory write");
        rows.push(json!({ "n": n, "I_n": exact(v), "hit": hit }));
    }
    let csv = String::from_utf8(csv.into_inner().expect("in-memory flush")).expect("ascii");
    let result = json!({
        "set": args.set.iter().map(|&x| input.loaded.label(x)).collect::<Vec<_>>(),
        "measure": exact(&r.measure),
        "exponent": args.exponent.value(),
        "epsilon": exact(&args.epsilon),
        "threshold": exact(&r.threshold),
        "period": r.period,
        "scanned": r.scanned,
        "complete": r.complete,
        "hits": r.hits,
        "max_gap": r.max_gap,
        "syndetic": r.syndetic,
        "ergodic": r.ergodic,
        "ergodicity_hypothesis_violated": r.ergodicity_hypothesis_violated(),
        "rows": rows,
    });
    let mut verdicts = Map::new();
    if r.ergodic && r.complete && args.exponent == Exponent::Four {
        verdicts.insert("syndetic".into(), Value::Bool(r.syndetic));
    }
    Ok(Outcome::new("recurrence-scan", input.digest.clone(), result, Value::Object(verdicts)).with_csv(csv))
}

pub struct BoundsArgs {
    pub f0: Observable,
    pub f1: Observable,
    pub f2: Observable,
    pub t: Q,
}

pub fn bounds_check(input: &Input, args: &BoundsArgs) -> Result<Outcome> {
    let sys = &input.loaded.system;
    let boxes = PairBoxes::new(sys)?;
    let mut result = Map::new();
    let mut verdicts = Map::new();
    let c = cesaro_bound_check_with(sys, &boxes, &args.f0, &args.f1, &args.f2, &args.t)?;
    result.insert(
        "cesaro".into(),
        json!({
            "t": exact(&c.t),
            "average": c.average.as_ref().map(exact),
            "average_abs": c.avg_abs,
            "bounds_fourth_power": {
                "f0_t1_t2": exact(&c.bounds[0]),
                "f1_t1_t3": exact(&c.bounds[1]),
                "f2_t2_t3": exact(&c.bounds[2]),
            },
            "holds": c.holds_each,
            "certified": c.certified,
        }),
    );
    verdicts.insert("cesaro_bounds".into(), Value::Bool(c.holds));

    let unit = args.f0.check_range(&Q::zero(), &Q::one()).is_ok();
    if unit {
        let j = j0_lower_bound_check(sys, &args.f0)?;
        result.insert("j0".into(), json!({ "j0": exact(&j.j0), "bound": exact(&j.bound) }));
        verdicts.insert("j0_bound".into(), Value::Bool(j.holds));
        let d = diff_bound_check_with(sys, &boxes, &args.f0)?;
        result.insert(
            "difference".into(),
            json!({
                "average": exact(&d.average),
                "seminorms_fourth_power": exact_list(&d.seminorms),
                "bound_sum_lower": exact(&d.bound_sum.0),
                "bound_sum_upper": exact(&d.bound_sum.1),
                "certified": d.certified,
                "pairwise_joins_discrete": d.joins_discrete,
            }),
        );
        verdicts.insert("difference_bound".into(), Value::Bool(d.holds));
    } else {
        result.insert("note".into(), json!("f0 leaves [0, 1]; J0 and difference checks skipped"));
    }
    Ok(Outcome::new("bounds-check", input.digest.clone(), Value::Object(result), Value::Object(verdicts)))
}

pub fn counterexample(c: &Q, shifts: &[i64]) -> Result<Outcome> {
    let power = counterexample_power(c)?;
    let measure = counterexample_measure();
    let values: Map<String, Value> =
        shifts.iter().map(|&n| (n.to_string(), exact(&counterexample_intersection(n)))).collect();
    let table: Map<String, Value> =
        counterexample_entries().into_iter().map(|((i, j, k), v)| (format!("{i},{j},{k}"), json!(v))).collect();
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["i", "j", "k", "f"]).expect("in-memory write");
    for ((i, j, k), v) in counterexample_entries() {
        csv.write_record([i.to_string(), j.to_string(), k.to_string(), v.to_string()]).expect("in-memory write");
    }
    let csv = String::from_utf8(csv.into_inner().expect("in-memory flush")).expect("ascii");
    let scaled = Q::new(96.into(), 100.into()) * erglab::rational::pow(&measure, 3);
    let result = json!({
        "measure": exact(&measure),
        "intersections": values,
        "scaled_cube": exact(&scaled),
        "c": exact(c),
        "l": power.l,
        "lhs": exact(&power.lhs),
        "rhs": exact(&power.rhs),
        "ratio_decimal": to_f64(&(&power.lhs / &power.rhs)),
        "table": table,
    });
    let verdicts = json!({
        "inequality_certified": counterexample_certificate(),
        "power_certified": power.certificate,
    });
    let echo = format!("counterexample c={} n={shifts:?}", format(c));
    Ok(Outcome::new("counterexample", digest(echo.as_bytes()), result, verdicts).with_csv(csv))
}
