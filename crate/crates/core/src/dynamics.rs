//! Pairs of commuting measure-preserving bijections on finite spaces.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::measure::{same_space, Observable, Partition, UnionFind, WeightedSpace};
use crate::rational::{gcd, Q};

/// An invertible map of `0..m`, stored in both directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transformation {
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl Transformation {
    pub fn new(forward: Vec<usize>) -> Result<Self> {
        let n = forward.len();
        let mut inverse = vec![usize::MAX; n];
        for (x, &y) in forward.iter().enumerate() {
            if y >= n {
                return Err(Error::NotBijective(format!("image {y} of point {x} is out of range")));
            }
            if inverse[y] != usize::MAX {
                return Err(Error::NotBijective(format!("point {y} has two preimages")));
            }
            inverse[y] = x;
        }
        Ok(Self { forward, inverse })
    }

    /// Accepts an explicit inverse and checks it against `forward`.
    pub fn from_parts(forward: Vec<usize>, inverse: Vec<usize>) -> Result<Self> {
        let t = Self::new(forward)?;
        if t.inverse != inverse {
            return Err(Error::NotBijective("supplied inverse does not invert the map".into()));
        }
        Ok(t)
    }

    pub fn identity(n: usize) -> Self {
        let id: Vec<usize> = (0..n).collect();
        Self { forward: id.clone(), inverse: id }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.forward[x]
    }

    pub fn apply_inverse(&self, x: usize) -> usize {
        self.inverse[x]
    }

    pub fn forward(&self) -> &[usize] {
        &self.forward
    }

    pub fn inverse_map(&self) -> &[usize] {
        &self.inverse
    }

    pub fn inverse(&self) -> Self {
        Self { forward: self.inverse.clone(), inverse: self.forward.clone() }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let forward = other.forward.iter().map(|&y| self.forward[y]).collect();
        let inverse = self.inverse.iter().map(|&y| other.inverse[y]).collect();
        Self { forward, inverse }
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Cycles, each starting at its smallest point, ordered by that point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.forward[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.forward[x];
            }
            out.push(cycle);
        }
        out
    }

    /// Order of the permutation, saturating at `u64::MAX`.
    pub fn order(&self) -> u64 {
        self.orbits().iter().fold(1u64, |acc, c| {
            let l = c.len() as u64;
            let g = gcd(acc, l);
            acc.saturating_mul(l / g)
        })
    }

    /// The map `x ↦ T^n x` for any integer `n`.
    pub fn pow(&self, n: i64) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for cycle in self.orbits() {
            let l = cycle.len() as i64;
            let s = n.rem_euclid(l) as usize;
            for (i, &x) in cycle.iter().enumerate() {
                out[x] = cycle[(i + s) % cycle.len()];
            }
        }
        out
    }

    pub fn pow_transformation(&self, n: i64) -> Self {
        Self::new(self.pow(n)).expect("powers of bijections are bijections")
    }
}

/// Selects one of the two generators or the derived `T₃ = T₁T₂⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    T1,
    T2,
    T3,
}

/// A weighted space with two commuting measure-preserving bijections.
/// `t3 = t1 ∘ t2⁻¹` is derived at construction.
#[derive(Debug, Clone)]
pub struct CommutingSystem {
    space: Arc<WeightedSpace>,
    t1: Arc<Transformation>,
    t2: Arc<Transformation>,
    t3: Arc<Transformation>,
}

pub fn validate_system(space: &Arc<WeightedSpace>, t1: Transformation, t2: Transformation) -> Result<CommutingSystem> {
    let n = space.len();
    for t in [&t1, &t2] {
        if t.len() != n {
            return Err(Error::NotBijective(format!("map acts on {} points, space has {n}", t.len())));
        }
        if let Some(x) = (0..n).find(|&x| space.weight(t.apply(x)) != space.weight(x)) {
            return Err(Error::NotMeasurePreserving(x));
        }
    }
    if let Some(x) = (0..n).find(|&x| t1.apply(t2.apply(x)) != t2.apply(t1.apply(x))) {
        return Err(Error::DoesNotCommute(x));
    }
    let t3 = t1.compose(&t2.inverse());
    Ok(CommutingSystem { space: space.clone(), t1: Arc::new(t1), t2: Arc::new(t2), t3: Arc::new(t3) })
}

impl CommutingSystem {
    pub fn identity(space: &Arc<WeightedSpace>) -> Self {
        let id = Transformation::identity(space.len());
        validate_system(space, id.clone(), id).expect("identity pair is valid")
    }

    pub fn space(&self) -> &Arc<WeightedSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn t1(&self) -> &Transformation {
        &self.t1
    }

    pub fn t2(&self) -> &Transformation {
        &self.t2
    }

    pub fn t3(&self) -> &Transformation {
        &self.t3
    }

    pub fn transformation(&self, which: Which) -> &Transformation {
        match which {
            Which::T1 => &self.t1,
            Which::T2 => &self.t2,
            Which::T3 => &self.t3,
        }
    }

    /// The system generated by two of `T₁, T₂, T₃` (any two of them commute).
    pub fn pair(&self, first: Which, second: Which) -> CommutingSystem {
        validate_system(&self.space, self.transformation(first).clone(), self.transformation(second).clone())
            .expect("powers of a commuting pair commute")
    }

    /// `(T₂, T₁)`.
    pub fn swapped(&self) -> CommutingSystem {
        self.pair(Which::T2, Which::T1)
    }

    /// `(T₁⁻¹, T₂)`.
    pub fn with_inverse_t1(&self) -> CommutingSystem {
        validate_system(&self.space, self.t1.inverse(), (*self.t2).clone()).expect("still commuting")
    }

    /// `(T₁, T₂⁻¹)`.
    pub fn with_inverse_t2(&self) -> CommutingSystem {
        validate_system(&self.space, (*self.t1).clone(), self.t2.inverse()).expect("still commuting")
    }

    /// Least common multiple of the orders of `T₁` and `T₂`; every correlation
    /// sequence of the system is periodic with this period.
    pub fn period(&self) -> u64 {
        let (a, b) = (self.t1.order(), self.t2.order());
        if a == u64::MAX || b == u64::MAX {
            return u64::MAX;
        }
        let g = gcd(a, b);
        a.saturating_mul(b / g)
    }
}

/// Orbits of one transformation: the atoms of its invariant σ-algebra.
pub fn invariant_partition(sys: &CommutingSystem, which: Which) -> Partition {
    Partition::from_blocks(&sys.space, &sys.transformation(which).orbits()).expect("orbits partition the space")
}

/// Orbits of the group generated by `T₁` and `T₂`.
pub fn group_orbit_partition(sys: &CommutingSystem) -> Partition {
    let n = sys.len();
    let mut uf = UnionFind::new(n);
    for x in 0..n {
        uf.union(x, sys.t1.apply(x));
        uf.union(x, sys.t2.apply(x));
    }
    let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    Partition::from_labels(&sys.space, &labels).expect("lengths match")
}

pub fn is_ergodic(sys: &CommutingSystem) -> bool {
    group_orbit_partition(sys).is_trivial()
}

/// One ergodic component: a joint orbit with the renormalized measure.
#[derive(Debug, Clone)]
pub struct ErgodicComponent {
    pub index: usize,
    /// Points of the parent system, in increasing order.
    pub support: Vec<usize>,
    /// Parent-measure mass of the support.
    pub mass: Q,
    /// The component as a system of its own; local point `i` is `support[i]`.
    pub system: CommutingSystem,
}

impl ErgodicComponent {
    /// Conditional weight of each support point.
    pub fn conditional_weights(&self) -> &[Q] {
        self.system.space().weights()
    }

    pub fn restrict(&self, f: &Observable) -> Observable {
        let values = self.support.iter().map(|&x| f.value(x).clone()).collect();
        Observable::new(self.system.space(), values).expect("support length")
    }
}

pub fn ergodic_components(sys: &CommutingSystem) -> Vec<ErgodicComponent> {
    let orbits = group_orbit_partition(sys);
    orbits
        .blocks()
        .iter()
        .enumerate()
        .map(|(index, block)| {
            let mass = sys.space.mass(block);
            let mut local = vec![usize::MAX; sys.len()];
            for (i, &x) in block.iter().enumerate() {
                local[x] = i;
            }
            let weights = block.iter().map(|&x| sys.space.weight(x) / &mass).collect();
            let space = Arc::new(WeightedSpace::new(weights).expect("renormalized weights"));
            let restrict = |t: &Transformation| {
                Transformation::new(block.iter().map(|&x| local[t.apply(x)]).collect()).expect("invariant support")
            };
            let system =
                validate_system(&space, restrict(&sys.t1), restrict(&sys.t2)).expect("restriction of a system");
            ErgodicComponent { index, support: block.clone(), mass, system }
        })
        .collect()
}

/// How the transformations of two systems combine on their product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// `(T₁ × id, id × T₂)`: first generator from the left factor, second from the right.
    Split,
    /// `(T₁ × T₁', T₂ × T₂')`.
    Diagonal,
}

/// Cartesian product; the point `(a, b)` gets index `a * |B| + b`.
pub fn product_system(a: &CommutingSystem, b: &CommutingSystem, pairing: Pairing) -> CommutingSystem {
    let (na, nb) = (a.len(), b.len());
    let mut weights = Vec::with_capacity(na * nb);
    for x in 0..na {
        for y in 0..nb {
            weights.push(a.space.weight(x) * b.space.weight(y));
        }
    }
    let space = Arc::new(WeightedSpace::new(weights).expect("product of probability measures"));
    let id_a = Transformation::identity(na);
    let id_b = Transformation::identity(nb);
    let prod = |ta: &Transformation, tb: &Transformation| {
        let mut fwd = Vec::with_capacity(na * nb);
        for x in 0..na {
            for y in 0..nb {
                fwd.push(ta.apply(x) * nb + tb.apply(y));
            }
        }
        Transformation::new(fwd).expect("product of bijections")
    };
    let (t1, t2) = match pairing {
        Pairing::Split => (prod(&a.t1, &id_b), prod(&id_a, &b.t2)),
        Pairing::Diagonal => (prod(&a.t1, &b.t1), prod(&a.t2, &b.t2)),
    };
    validate_system(&space, t1, t2).expect("products of commuting pairs commute")
}

/// `l`-fold diagonal self-product.
pub fn power_system(sys: &CommutingSystem, l: usize) -> CommutingSystem {
    assert!(l >= 1, "power must be positive");
    let mut out = sys.clone();
    for _ in 1..l {
        out = product_system(&out, sys, Pairing::Diagonal);
    }
    out
}

/// Disjoint union; the left copy keeps indices `0..|A|` and carries total mass `mass_a`.
pub fn disjoint_union(a: &CommutingSystem, b: &CommutingSystem, mass_a: &Q) -> Result<CommutingSystem> {
    if *mass_a <= Q::zero() || *mass_a >= Q::one() {
        return Err(Error::OutOfRange(mass_a.clone()));
    }
    let mass_b = Q::one() - mass_a;
    let na = a.len();
    let weights =
        a.space.weights().iter().map(|w| w * mass_a).chain(b.space.weights().iter().map(|w| w * &mass_b)).collect();
    let space = Arc::new(WeightedSpace::new(weights)?);
    let union = |ta: &Transformation, tb: &Transformation| {
        let fwd = ta.forward().iter().copied().chain(tb.forward().iter().map(|&y| y + na)).collect();
        Transformation::new(fwd).expect("disjoint bijections")
    };
    validate_system(&space, union(&a.t1, &b.t1), union(&a.t2, &b.t2))
}

/// Uniform `Z_N` with `t1 = +a1`, `t2 = +a2`.
pub fn rotation_system(n: usize, a1: i64, a2: i64) -> Result<CommutingSystem> {
    let space = Arc::new(WeightedSpace::uniform(n)?);
    let rot = |a: i64| {
        let fwd = (0..n).map(|x| (x as i64 + a).rem_euclid(n as i64) as usize).collect();
        Transformation::new(fwd).expect("rotation")
    };
    validate_system(&space, rot(a1), rot(a2))
}

/// The common rotation factor `Z_g`, `g = gcd(p, q)`, of `Z_p` and `Z_q` under `+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationFactor {
    pub g: usize,
    pub proj1: Vec<usize>,
    pub proj2: Vec<usize>,
}

pub fn common_rotation_factor(p: usize, q: usize) -> RotationFactor {
    assert!(p >= 1 && q >= 1, "rotation orders must be positive");
    let g = gcd(p as u64, q as u64) as usize;
    RotationFactor { g, proj1: (0..p).map(|x| x % g).collect(), proj2: (0..q).map(|x| x % g).collect() }
}

/// A measure-preserving map from `source` onto `target` intertwining both generators.
#[derive(Debug, Clone)]
pub struct FactorMap {
    source: CommutingSystem,
    target: CommutingSystem,
    map: Vec<usize>,
}

impl FactorMap {
    pub fn new(source: &CommutingSystem, target: &CommutingSystem, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::NotAFactorMap(format!("map has {} entries for {} points", map.len(), source.len())));
        }
        let mut pushed = vec![Q::zero(); target.len()];
        for (x, &y) in map.iter().enumerate() {
            if y >= target.len() {
                return Err(Error::NotAFactorMap(format!("image {y} of point {x} is out of range")));
            }
            pushed[y] += source.space.weight(x);
        }
        if let Some(y) = (0..target.len()).find(|&y| pushed[y] != *target.space.weight(y)) {
            return Err(Error::NotAFactorMap(format!("pushforward mass at {y} is {}", pushed[y])));
        }
        for (name, s, t) in [("T1", &source.t1, &target.t1), ("T2", &source.t2, &target.t2)] {
            if let Some(x) = (0..source.len()).find(|&x| map[s.apply(x)] != t.apply(map[x])) {
                return Err(Error::NotAFactorMap(format!("{name} is not intertwined at point {x}")));
            }
        }
        Ok(Self { source: source.clone(), target: target.clone(), map })
    }

    pub fn source(&self) -> &CommutingSystem {
        &self.source
    }

    pub fn target(&self) -> &CommutingSystem {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn compose(&self, then: &FactorMap) -> Result<FactorMap> {
        if !same_space(self.target.space(), then.source.space()) {
            return Err(Error::SpaceMismatch);
        }
        let map = self.map.iter().map(|&y| then.map[y]).collect();
        FactorMap::new(&self.source, &then.target, map)
    }
}

/// `f ∘ π` for an observable on the factor.
pub fn lift_observable(f: &Observable, factor: &FactorMap) -> Result<Observable> {
    if !same_space(f.space(), factor.target.space()) {
        return Err(Error::SpaceMismatch);
    }
    let values = factor.map.iter().map(|&y| f.value(y).clone()).collect();
    Observable::new(factor.source.space(), values)
}
