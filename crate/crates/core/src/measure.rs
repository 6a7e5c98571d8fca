//! Finite probability spaces with exact weights, partitions standing in for
//! finite sub-σ-algebras, observables and conditional expectation.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{pow, Q};

/// A finite point set `0..m` with strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedSpace {
    weights: Vec<Q>,
}

impl WeightedSpace {
    pub fn new(weights: Vec<Q>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace);
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::NonPositiveWeight(w.clone()));
        }
        let total: Q = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::WeightsDontSumToOne(total));
        }
        Ok(Self { weights })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::EmptySpace);
        }
        let w = Q::new(1.into(), (m as u64).into());
        Ok(Self { weights: vec![w; m] })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, x: usize) -> &Q {
        &self.weights[x]
    }

    pub fn weights(&self) -> &[Q] {
        &self.weights
    }

    pub fn mass<'a>(&self, points: impl IntoIterator<Item = &'a usize>) -> Q {
        points.into_iter().map(|&x| &self.weights[x]).sum()
    }
}

/// Builds a space with canonical point identifiers `0..weights.len()`.
pub fn make_space(weights: Vec<Q>) -> Result<Arc<WeightedSpace>> {
    WeightedSpace::new(weights).map(Arc::new)
}

pub(crate) fn same_space(a: &Arc<WeightedSpace>, b: &Arc<WeightedSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A partition of the point set. Blocks are stored canonically: each block is
/// sorted and blocks are ordered by their smallest point, so two partitions
/// are equal exactly when they have the same blocks.
#[derive(Debug, Clone)]
pub struct Partition {
    space: Arc<WeightedSpace>,
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.block_of == other.block_of
    }
}

impl Eq for Partition {}

impl Partition {
    /// Builds a partition from any labelling of the points; points with equal
    /// labels share a block.
    pub fn from_labels<L: Eq + std::hash::Hash>(space: &Arc<WeightedSpace>, labels: &[L]) -> Result<Self> {
        if labels.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), got: labels.len() });
        }
        let mut ids: HashMap<&L, usize> = HashMap::new();
        let mut block_of = Vec::with_capacity(labels.len());
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (x, l) in labels.iter().enumerate() {
            let next = ids.len();
            let b = *ids.entry(l).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(x);
            block_of.push(b);
        }
        Ok(Self { space: space.clone(), block_of, blocks })
    }

    pub fn from_blocks(space: &Arc<WeightedSpace>, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; space.len()];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &x in block {
                if x >= space.len() {
                    return Err(Error::PointOutOfRange(x));
                }
                if labels[x] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("point {x} lies in two blocks")));
                }
                labels[x] = b;
            }
        }
        if let Some(x) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("point {x} is not covered")));
        }
        Self::from_labels(space, &labels)
    }

    pub fn trivial(space: &Arc<WeightedSpace>) -> Self {
        Self::from_labels(space, &vec![0u8; space.len()]).expect("lengths match")
    }

    pub fn singletons(space: &Arc<WeightedSpace>) -> Self {
        let labels: Vec<usize> = (0..space.len()).collect();
        Self::from_labels(space, &labels).expect("lengths match")
    }

    pub fn space(&self) -> &Arc<WeightedSpace> {
        &self.space
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.blocks.len() == 1
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.space.len()
    }

    /// True when every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&x| coarser.block_of[x] == coarser.block_of[b[0]]))
    }

    /// True when `f` is constant on every block.
    pub fn measures(&self, f: &Observable) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&x| f.values[x] == f.values[b[0]]))
    }
}

/// Common refinement of two partitions.
pub fn join_partitions(p: &Partition, q: &Partition) -> Result<Partition> {
    if !same_space(&p.space, &q.space) {
        return Err(Error::SpaceMismatch);
    }
    let labels: Vec<(usize, usize)> = (0..p.space.len()).map(|x| (p.block_of[x], q.block_of[x])).collect();
    Partition::from_labels(&p.space, &labels)
}

/// Finest common coarsening (the intersection of the two σ-algebras).
pub fn meet_partitions(p: &Partition, q: &Partition) -> Result<Partition> {
    if !same_space(&p.space, &q.space) {
        return Err(Error::SpaceMismatch);
    }
    let n = p.space.len();
    let mut uf = UnionFind::new(n);
    for part in [p, q] {
        for b in &part.blocks {
            for &x in &b[1..] {
                uf.union(b[0], x);
            }
        }
    }
    let labels: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
    Partition::from_labels(&p.space, &labels)
}

/// A real-valued function on a weighted space, stored exactly.
#[derive(Debug, Clone)]
pub struct Observable {
    space: Arc<WeightedSpace>,
    values: Vec<Q>,
}

impl PartialEq for Observable {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.values == other.values
    }
}

impl Observable {
    pub fn new(space: &Arc<WeightedSpace>, values: Vec<Q>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), got: values.len() });
        }
        Ok(Self { space: space.clone(), values })
    }

    pub fn constant(space: &Arc<WeightedSpace>, c: Q) -> Self {
        Self { space: space.clone(), values: vec![c; space.len()] }
    }

    pub fn indicator(space: &Arc<WeightedSpace>, set: &[usize]) -> Result<Self> {
        let mut values = vec![Q::zero(); space.len()];
        for &x in set {
            if x >= space.len() {
                return Err(Error::PointOutOfRange(x));
            }
            values[x] = Q::one();
        }
        Ok(Self { space: space.clone(), values })
    }

    pub fn space(&self) -> &Arc<WeightedSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn value(&self, x: usize) -> &Q {
        &self.values[x]
    }

    pub fn map(&self, f: impl Fn(&Q) -> Q) -> Self {
        Self { space: self.space.clone(), values: self.values.iter().map(f).collect() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Q, &Q) -> Q) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect();
        Ok(Self { space: self.space.clone(), values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// `f ∘ perm`, i.e. the value at `x` is `f(perm[x])`.
    pub fn compose(&self, perm: &[usize]) -> Self {
        Self { space: self.space.clone(), values: perm.iter().map(|&y| self.values[y].clone()).collect() }
    }

    pub fn check_range(&self, lo: &Q, hi: &Q) -> Result<()> {
        match self.values.iter().position(|v| v < lo || v > hi) {
            Some(x) => Err(Error::ObservableOutOfRange(x)),
            None => Ok(()),
        }
    }
}

/// `Σ_x f(x) μ(x)`.
pub fn integrate(f: &Observable) -> Q {
    f.values.iter().zip(f.space.weights()).map(|(v, w)| v * w).sum()
}

/// Atom-wise weighted average of `f`.
pub fn cond_exp(f: &Observable, p: &Partition) -> Result<Observable> {
    if !same_space(&f.space, &p.space) {
        return Err(Error::SpaceMismatch);
    }
    let w = f.space.weights();
    let mut values = vec![Q::zero(); f.values.len()];
    for block in &p.blocks {
        let mass: Q = block.iter().map(|&x| &w[x]).sum();
        let total: Q = block.iter().map(|&x| &f.values[x] * &w[x]).sum();
        let avg = total / mass;
        for &x in block {
            values[x] = avg.clone();
        }
    }
    Ok(Observable { space: f.space.clone(), values })
}

/// Both sides of `∫ f·∏ E(f|P_i) dμ ≥ (∫ f dμ)^(k+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderBound {
    pub lhs: Q,
    pub rhs: Q,
    pub holds: bool,
}

pub fn holder_product_bound(f: &Observable, parts: &[Partition]) -> Result<HolderBound> {
    if parts.is_empty() {
        return Err(Error::NoPartitions);
    }
    if let Some(x) = f.values.iter().position(Signed::is_negative) {
        return Err(Error::NegativeObservable(x));
    }
    let mut product = f.clone();
    for p in parts {
        product = product.mul(&cond_exp(f, p)?)?;
    }
    let lhs = integrate(&product);
    let rhs = pow(&integrate(f), parts.len() as u32 + 1);
    let holds = lhs >= rhs;
    Ok(HolderBound { lhs, rhs, holds })
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}
