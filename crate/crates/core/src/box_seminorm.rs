//! Box measures and the two-transformation box seminorm.
//!
//! For a system `(X, μ, T₁, T₂)` the relatively independent square
//! `μ₁ = μ ×_{I(T₁)} μ` lives on pairs `(x00, x01)` in a common `T₁`-orbit,
//! and the box measure `μ* = μ₁ ×_{I(T₂×T₂)} μ₁` lives on 4-tuples
//! `(x00, x01, x10, x11)` whose two halves lie in a common `T₂×T₂`-orbit.
//! It is invariant under `T₁* = T₁×id×T₁×id` and `T₂* = T₂×T₂×id×id`, and
//! `‖f‖⁴ = ∫ f(x00) f(x01) f(x10) f(x11) dμ*`.
//!
//! Everything here is materialized exactly; inputs whose box measure would
//! exceed [`DEFAULT_MAX_TUPLES`] are rejected up front.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::dynamics::{invariant_partition, validate_system, CommutingSystem, FactorMap, Transformation, Which};
use crate::error::{Error, Result};
use crate::measure::{cond_exp, join_partitions, same_space, Observable, Partition, UnionFind, WeightedSpace};
use crate::rational::{pow, to_f64, Q};

/// Largest box-measure support materialized by default.
pub const DEFAULT_MAX_TUPLES: usize = 2_000_000;

pub type Tuple = [usize; 4];

/// Exact measure on `X × X` (the relatively independent square).
#[derive(Debug, Clone, PartialEq)]
pub struct PairMeasure {
    space: Arc<WeightedSpace>,
    support: Vec<(usize, usize)>,
    masses: Vec<Q>,
}

impl PairMeasure {
    pub fn support(&self) -> &[(usize, usize)] {
        &self.support
    }

    pub fn masses(&self) -> &[Q] {
        &self.masses
    }

    pub fn mass(&self, x: usize, y: usize) -> Q {
        match self.support.binary_search(&(x, y)) {
            Ok(i) => self.masses[i].clone(),
            Err(_) => Q::zero(),
        }
    }

    /// Marginal on the first (`0`) or second (`1`) coordinate.
    pub fn marginal(&self, coord: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.space.len()];
        for (&(x, y), m) in self.support.iter().zip(&self.masses) {
            out[if coord == 0 { x } else { y }] += m;
        }
        out
    }

    pub fn integrate_tensor(&self, f0: &Observable, f1: &Observable) -> Q {
        self.support.iter().zip(&self.masses).map(|(&(x, y), m)| m * f0.value(x) * f1.value(y)).sum()
    }
}

/// `μ ×_{I(T)} μ`: mass `μ(x)μ(y)/μ(atom)` on pairs sharing a `T`-orbit.
pub fn relative_square(sys: &CommutingSystem, over: Which) -> PairMeasure {
    let atoms = invariant_partition(sys, over);
    let space = sys.space();
    let mut cells = Vec::new();
    for atom in atoms.blocks() {
        let m = space.mass(atom);
        for &x in atom {
            for &y in atom {
                cells.push(((x, y), space.weight(x) * space.weight(y) / &m));
            }
        }
    }
    cells.sort_by_key(|a| a.0);
    let (support, masses) = cells.into_iter().unzip();
    PairMeasure { space: space.clone(), support, masses }
}

/// Exact sparse measure on `X⁴`, support sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadMeasure {
    space: Arc<WeightedSpace>,
    support: Vec<Tuple>,
    masses: Vec<Q>,
}

impl QuadMeasure {
    pub fn space(&self) -> &Arc<WeightedSpace> {
        &self.space
    }

    pub fn support(&self) -> &[Tuple] {
        &self.support
    }

    pub fn masses(&self) -> &[Q] {
        &self.masses
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn index_of(&self, t: &Tuple) -> Option<usize> {
        self.support.binary_search(t).ok()
    }

    pub fn mass(&self, t: &Tuple) -> Q {
        self.index_of(t).map_or_else(Q::zero, |i| self.masses[i].clone())
    }

    pub fn total_mass(&self) -> Q {
        self.masses.iter().sum()
    }

    /// Pushforward under the projection onto coordinate `coord` (0 is `x00`).
    pub fn marginal(&self, coord: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.space.len()];
        for (t, m) in self.support.iter().zip(&self.masses) {
            out[t[coord]] += m;
        }
        out
    }

    /// `∫ f(x00) f(x01) f(x10) f(x11) dμ*`.
    pub fn integrate_diagonal(&self, f: &Observable) -> Q {
        self.support
            .iter()
            .zip(&self.masses)
            .map(|(t, m)| m * f.value(t[0]) * f.value(t[1]) * f.value(t[2]) * f.value(t[3]))
            .sum()
    }

    /// Checks total mass, invariance under `T₁*` and `T₂*`, and that the
    /// `x00` marginal is `μ`. Returns a description of the first failure.
    pub fn check_invariants(&self, sys: &CommutingSystem) -> std::result::Result<(), String> {
        if !self.total_mass().is_one() {
            return Err(format!("total mass {}", self.total_mass()));
        }
        let (s1, s2) = (t1_star(sys), t2_star(sys));
        for (t, m) in self.support.iter().zip(&self.masses) {
            if self.mass(&s1(t)) != *m {
                return Err(format!("T1* moves mass at {t:?}"));
            }
            if self.mass(&s2(t)) != *m {
                return Err(format!("T2* moves mass at {t:?}"));
            }
        }
        if self.marginal(0) != sys.space().weights() {
            return Err("x00 marginal differs from μ".into());
        }
        Ok(())
    }
}

fn t1_star(sys: &CommutingSystem) -> impl Fn(&Tuple) -> Tuple + '_ {
    move |t| [sys.t1().apply(t[0]), t[1], sys.t1().apply(t[2]), t[3]]
}

fn t2_star(sys: &CommutingSystem) -> impl Fn(&Tuple) -> Tuple + '_ {
    move |t| [sys.t2().apply(t[0]), sys.t2().apply(t[1]), t[2], t[3]]
}

pub fn box_measure(sys: &CommutingSystem) -> Result<QuadMeasure> {
    box_measure_with_limit(sys, DEFAULT_MAX_TUPLES)
}

pub fn box_measure_with_limit(sys: &CommutingSystem, max_tuples: usize) -> Result<QuadMeasure> {
    let mu1 = relative_square(sys, Which::T1);
    let index: HashMap<(usize, usize), usize> = mu1.support.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    // Orbits of T₂×T₂ on the support of μ₁.
    let t2 = sys.t2();
    let mut seen = vec![false; mu1.support.len()];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..mu1.support.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            orbit.push(i);
            let (x, y) = mu1.support[i];
            i = index[&(t2.apply(x), t2.apply(y))];
        }
        orbits.push(orbit);
    }

    let size: u128 = orbits.iter().map(|o| (o.len() as u128).pow(2)).sum();
    if size > max_tuples as u128 {
        return Err(Error::SizeLimitExceeded { what: "box measure support", size, limit: max_tuples as u128 });
    }

    let mut cells: Vec<(Tuple, Q)> = Vec::with_capacity(size as usize);
    for orbit in &orbits {
        let total: Q = orbit.iter().map(|&i| &mu1.masses[i]).sum();
        for &i in orbit {
            let (x00, x01) = mu1.support[i];
            let scaled = &mu1.masses[i] / &total;
            for &j in orbit {
                let (x10, x11) = mu1.support[j];
                cells.push(([x00, x01, x10, x11], &scaled * &mu1.masses[j]));
            }
        }
    }
    cells.sort_unstable_by_key(|a| a.0);
    let (support, masses) = cells.into_iter().unzip();
    Ok(QuadMeasure { space: sys.space().clone(), support, masses })
}

/// Exact fourth power of the seminorm; `root` is for display only.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormValue {
    pub fourth_power: Q,
    pub root: f64,
}

impl SeminormValue {
    fn new(fourth_power: Q) -> Self {
        assert!(!fourth_power.is_negative(), "box seminorm fourth power is negative: {fourth_power}");
        let root = to_f64(&fourth_power).powf(0.25);
        Self { fourth_power, root }
    }
}

pub fn seminorm4(f: &Observable, sys: &CommutingSystem) -> Result<SeminormValue> {
    seminorm4_on(f, &box_measure(sys)?)
}

pub fn seminorm4_on(f: &Observable, quad: &QuadMeasure) -> Result<SeminormValue> {
    if !same_space(f.space(), &quad.space) {
        return Err(Error::SpaceMismatch);
    }
    Ok(SeminormValue::new(quad.integrate_diagonal(f)))
}

/// Largest `ord(T₁)·ord(T₂)·|X|` accepted by [`seminorm4_by_averages`].
pub const MAX_AVERAGE_WORK: u128 = 50_000_000;

/// The seminorm through iterated ergodic averages of
/// `∫ f · T₁^{n₁}f · T₂^{n₂}f · T₁^{n₁}T₂^{n₂}f dμ`; each Cesàro limit of a
/// periodic sequence is its average over one period.
pub fn seminorm4_by_averages(f: &Observable, sys: &CommutingSystem) -> Result<Q> {
    if !same_space(f.space(), sys.space()) {
        return Err(Error::SpaceMismatch);
    }
    let (o1, o2) = (sys.t1().order(), sys.t2().order());
    let work = o1 as u128 * o2 as u128 * sys.len() as u128;
    if work > MAX_AVERAGE_WORK {
        return Err(Error::SizeLimitExceeded { what: "period average", size: work, limit: MAX_AVERAGE_WORK });
    }
    let w = sys.space().weights();
    let p1: Vec<Vec<usize>> = (0..o1 as i64).map(|n| sys.t1().pow(n)).collect();
    let p2: Vec<Vec<usize>> = (0..o2 as i64).map(|n| sys.t2().pow(n)).collect();
    let mut total = Q::zero();
    for a in &p2 {
        for b in &p1 {
            for x in 0..sys.len() {
                let v = f.value(x);
                if v.is_zero() {
                    continue;
                }
                total += &w[x] * v * f.value(b[x]) * f.value(a[x]) * f.value(b[a[x]]);
            }
        }
    }
    Ok(total / Q::from_integer(((o1 as u128 * o2 as u128) as u64).into()))
}

/// The σ-algebra of sets `B` whose indicator at `x00` is a function of
/// `(x01, x10, x11)` on the support of `μ*`: blocks are the connected
/// components of the support viewed as a bipartite graph.
pub fn g_algebra(sys: &CommutingSystem) -> Result<Partition> {
    Ok(g_algebra_of(&box_measure(sys)?))
}

pub fn g_algebra_of(quad: &QuadMeasure) -> Partition {
    let mut uf = UnionFind::new(quad.space.len());
    let mut first: HashMap<[usize; 3], usize> = HashMap::new();
    for t in &quad.support {
        let tail = [t[1], t[2], t[3]];
        let x = *first.entry(tail).or_insert(t[0]);
        uf.union(x, t[0]);
    }
    let labels: Vec<usize> = (0..quad.space.len()).map(|x| uf.find(x)).collect();
    Partition::from_labels(&quad.space, &labels).expect("lengths match")
}

/// `I(T₁) ∨ I(T₂)`.
pub fn invariant_join(sys: &CommutingSystem) -> Partition {
    join_partitions(&invariant_partition(sys, Which::T1), &invariant_partition(sys, Which::T2)).expect("same space")
}

/// Basis of `{f : E(f | P) = 0}`: for each block `B = {b₀, …, b_k}` the
/// functions `μ(B)/μ(bᵢ)·1_{bᵢ} − 1_B` for `i < k`.
pub fn kernel_basis(p: &Partition) -> Vec<Observable> {
    let space = p.space();
    let mut out = Vec::new();
    for block in p.blocks() {
        let mass = space.mass(block);
        for &b in &block[..block.len() - 1] {
            let mut values = vec![Q::zero(); space.len()];
            for &x in block {
                values[x] = -Q::one();
            }
            values[b] = &mass / space.weight(b) - Q::one();
            out.push(Observable::new(space, values).expect("lengths match"));
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct MagicVerdict {
    pub magic: bool,
    /// A kernel basis element with positive seminorm, when not magic.
    pub witness: Option<Observable>,
    pub witness_fourth_power: Option<Q>,
}

pub fn is_magic(sys: &CommutingSystem) -> Result<MagicVerdict> {
    Ok(is_magic_with(sys, &box_measure(sys)?))
}

/// Evaluates the seminorm of every [`kernel_basis`] element of
/// `I(T₁) ∨ I(T₂)` in one pass over the box measure.
///
/// For `u = c·1_p − 1_B` the integrand vanishes unless all four coordinates
/// lie in `B`, and then equals `(c−1)^m (−1)^{4−m}` where `m` counts the
/// coordinates equal to `p`. Summing the tuples inside `B` once and
/// correcting only tuples that touch `p` gives every basis value.
pub fn is_magic_with(sys: &CommutingSystem, quad: &QuadMeasure) -> MagicVerdict {
    let join = invariant_join(sys);
    let space = sys.space();
    let mut inside = vec![Q::zero(); join.num_blocks()];
    let mut correction = vec![Q::zero(); space.len()];
    let coeff: Vec<Q> =
        (0..space.len()).map(|x| space.mass(&join.blocks()[join.block_of(x)]) / space.weight(x) - Q::one()).collect();
    for (t, m) in quad.support.iter().zip(&quad.masses) {
        let b = join.block_of(t[0]);
        if t[1..].iter().any(|&x| join.block_of(x) != b) {
            continue;
        }
        inside[b] += m;
        let mut distinct: Vec<usize> = t.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        for p in distinct {
            let k = t.iter().filter(|&&x| x == p).count() as u32;
            let mut term = pow(&coeff[p], k);
            if (4 - k) % 2 == 1 {
                term = -term;
            }
            correction[p] += m * (term - Q::one());
        }
    }
    for block in join.blocks() {
        for &p in &block[..block.len() - 1] {
            let value = &inside[join.block_of(p)] + &correction[p];
            if !value.is_zero() {
                let mut values = vec![Q::zero(); space.len()];
                for &x in block {
                    values[x] = -Q::one();
                }
                values[p] = coeff[p].clone();
                let witness = Observable::new(space, values).expect("lengths match");
                return MagicVerdict { magic: false, witness: Some(witness), witness_fourth_power: Some(value) };
            }
        }
    }
    MagicVerdict { magic: true, witness: None, witness_fourth_power: None }
}

/// `(X*, μ*, T₁*, T₂*)` with the factor map `π₀₀` back to the base.
#[derive(Debug, Clone)]
pub struct MagicExtension {
    pub system: CommutingSystem,
    pub factor: FactorMap,
    /// Point `i` of the extension is the tuple `quad.support()[i]`.
    pub quad: QuadMeasure,
}

pub fn magic_extension(sys: &CommutingSystem) -> Result<MagicExtension> {
    let quad = box_measure(sys)?;
    magic_extension_from(sys, quad)
}

pub fn magic_extension_from(sys: &CommutingSystem, quad: QuadMeasure) -> Result<MagicExtension> {
    if !same_space(quad.space(), sys.space()) {
        return Err(Error::SpaceMismatch);
    }
    let space = Arc::new(WeightedSpace::new(quad.masses.clone())?);
    let lift = |map: &dyn Fn(&Tuple) -> Tuple| -> Result<Transformation> {
        let fwd = quad
            .support
            .iter()
            .map(|t| {
                quad.index_of(&map(t))
                    .ok_or_else(|| Error::NotBijective(format!("box measure is not invariant at {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Transformation::new(fwd)
    };
    let t1 = lift(&t1_star(sys))?;
    let t2 = lift(&t2_star(sys))?;
    let system = validate_system(&space, t1, t2)?;
    let map = quad.support.iter().map(|t| t[0]).collect();
    let factor = FactorMap::new(&system, sys, map)?;
    Ok(MagicExtension { system, factor, quad })
}

/// `f − E(f | I(T₁) ∨ I(T₂))`.
pub fn invariant_residual(f: &Observable, sys: &CommutingSystem) -> Result<Observable> {
    f.sub(&cond_exp(f, &invariant_join(sys))?)
}
