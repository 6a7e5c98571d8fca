//! Seeded generators for commuting systems, partitions and observables.
//!
//! Random systems are disjoint unions of blocks `Z_a × Z_b` on which `T₁`
//! and `T₂` act by random translations, relabelled by a random permutation.
//! Weights are random but constant on each joint orbit, so both maps
//! preserve them.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{
    group_orbit_partition, is_ergodic, product_system, rotation_system, validate_system, CommutingSystem, Pairing,
    Transformation,
};
use crate::measure::{Observable, Partition, WeightedSpace};
use crate::rational::{q, Q};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone)]
pub struct NamedSystem {
    pub name: String,
    pub system: CommutingSystem,
}

fn random_split(rng: &mut CorpusRng, n: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let take = rng.gen_range(1..=left);
        parts.push(take);
        left -= take;
    }
    parts
}

fn random_factorization(rng: &mut CorpusRng, m: usize) -> (usize, usize) {
    let divisors: Vec<usize> = (1..=m).filter(|d| m.is_multiple_of(*d)).collect();
    let a = *divisors.choose(rng).expect("1 divides m");
    (a, m / a)
}

/// Block translations on `0..n` before relabelling.
fn random_block_maps(rng: &mut CorpusRng, blocks: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut t1 = Vec::new();
    let mut t2 = Vec::new();
    let mut offset = 0;
    for &m in blocks {
        let (a, b) = random_factorization(rng, m);
        let g1 = (rng.gen_range(0..a), rng.gen_range(0..b));
        let g2 = (rng.gen_range(0..a), rng.gen_range(0..b));
        for x in 0..a {
            for y in 0..b {
                t1.push(offset + ((x + g1.0) % a) * b + (y + g1.1) % b);
                t2.push(offset + ((x + g2.0) % a) * b + (y + g2.1) % b);
            }
        }
        offset += m;
    }
    (t1, t2)
}

fn assemble(rng: &mut CorpusRng, t1: Vec<usize>, t2: Vec<usize>) -> CommutingSystem {
    let n = t1.len();
    let mut relabel: Vec<usize> = (0..n).collect();
    relabel.shuffle(rng);
    let mut f1 = vec![0; n];
    let mut f2 = vec![0; n];
    for x in 0..n {
        f1[relabel[x]] = relabel[t1[x]];
        f2[relabel[x]] = relabel[t2[x]];
    }
    let t1 = Transformation::new(f1).expect("relabelled translation");
    let t2 = Transformation::new(f2).expect("relabelled translation");
    let uniform = Arc::new(WeightedSpace::uniform(n).expect("nonempty"));
    let orbits =
        group_orbit_partition(&validate_system(&uniform, t1.clone(), t2.clone()).expect("translations commute"));
    let raw: Vec<u64> = (0..orbits.num_blocks()).map(|_| rng.gen_range(1..=4)).collect();
    let total: u64 = (0..n).map(|x| raw[orbits.block_of(x)]).sum();
    let weights = (0..n).map(|x| q(raw[orbits.block_of(x)] as i64, total as i64)).collect();
    let space = Arc::new(WeightedSpace::new(weights).expect("positive weights summing to one"));
    validate_system(&space, t1, t2).expect("weights are constant on joint orbits")
}

/// A random commuting system on `1..=max_points` points.
pub fn random_system(rng: &mut CorpusRng, max_points: usize) -> CommutingSystem {
    let n = rng.gen_range(1..=max_points.max(1));
    let blocks = random_split(rng, n);
    let (t1, t2) = random_block_maps(rng, &blocks);
    assemble(rng, t1, t2)
}

/// A random ergodic system on `1..=max_points` points (a single block whose
/// translations generate the group).
pub fn random_ergodic_system(rng: &mut CorpusRng, max_points: usize) -> CommutingSystem {
    loop {
        let n = rng.gen_range(1..=max_points.max(1));
        let (t1, t2) = random_block_maps(rng, &[n]);
        let sys = assemble(rng, t1, t2);
        if is_ergodic(&sys) {
            return sys;
        }
    }
}

/// Named fixtures plus seeded random systems: at least 20 systems, all on at
/// most 8 points.
pub fn standard_corpus(seed: u64) -> Vec<NamedSystem> {
    let mut out = Vec::new();
    let mut push = |name: &str, system: CommutingSystem| out.push(NamedSystem { name: name.to_string(), system });
    push("z3", rotation_system(3, 1, 1).expect("valid"));
    push(
        "z2xz3",
        product_system(
            &rotation_system(2, 1, 1).expect("valid"),
            &rotation_system(3, 1, 1).expect("valid"),
            Pairing::Split,
        ),
    );
    push("z4-t2-identity", rotation_system(4, 1, 0).expect("valid"));
    push("z6-1-2", rotation_system(6, 1, 2).expect("valid"));
    push(
        "z2xz2",
        product_system(
            &rotation_system(2, 1, 1).expect("valid"),
            &rotation_system(2, 1, 1).expect("valid"),
            Pairing::Split,
        ),
    );
    for n in [1, 2, 5] {
        let space = Arc::new(WeightedSpace::uniform(n).expect("nonempty"));
        push(&format!("identity-{n}"), CommutingSystem::identity(&space));
    }
    let skewed = Arc::new(WeightedSpace::new(vec![q(1, 2), q(1, 3), q(1, 6)]).expect("valid"));
    push("identity-weighted-3", CommutingSystem::identity(&skewed));

    let mut rng = rng(seed);
    for i in 0..8 {
        push(&format!("random-{i}"), random_system(&mut rng, 8));
    }
    for i in 0..6 {
        push(&format!("ergodic-{i}"), random_ergodic_system(&mut rng, 8));
    }
    out
}

/// Random probability weights on `1..=max_points` points.
pub fn random_space(rng: &mut CorpusRng, max_points: usize) -> Arc<WeightedSpace> {
    let n = rng.gen_range(1..=max_points.max(1));
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    Arc::new(WeightedSpace::new(raw.iter().map(|&r| q(r, total)).collect()).expect("valid weights"))
}

pub fn random_partition(rng: &mut CorpusRng, space: &Arc<WeightedSpace>) -> Partition {
    let k = rng.gen_range(1..=space.len());
    let labels: Vec<usize> = (0..space.len()).map(|_| rng.gen_range(0..k)).collect();
    Partition::from_labels(space, &labels).expect("labels cover the space")
}

/// Values `a/denom` with `a` drawn uniformly from `lo·denom..=hi·denom`.
pub fn random_observable(rng: &mut CorpusRng, space: &Arc<WeightedSpace>, lo: i64, hi: i64, denom: i64) -> Observable {
    let values: Vec<Q> = (0..space.len()).map(|_| q(rng.gen_range(lo * denom..=hi * denom), denom)).collect();
    Observable::new(space, values).expect("one value per point")
}

/// A random nonempty subset.
pub fn random_subset(rng: &mut CorpusRng, n: usize) -> Vec<usize> {
    loop {
        let set: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !set.is_empty() {
            return set;
        }
    }
}
