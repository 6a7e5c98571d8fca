//! Exact integration of shifted cylinder functions on products of
//! two-sided Bernoulli shifts, and the three-sequence counterexample built
//! from a 27-cell 0/1 table.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::dynamics::{validate_system, CommutingSystem, Transformation};
use crate::error::{Error, Result};
use crate::measure::{Observable, WeightedSpace};
use crate::rational::{pow, q, qi, Q};

/// Largest number of joint letter assignments `exact_correlation` enumerates.
pub const MAX_ASSIGNMENTS: u128 = 50_000_000;

/// Independent two-sided Bernoulli sequences, one probability vector each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliSpec {
    components: Vec<Vec<Q>>,
}

impl BernoulliSpec {
    pub fn new(components: Vec<Vec<Q>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidBernoulli("no components".into()));
        }
        for (c, probs) in components.iter().enumerate() {
            if probs.is_empty() || probs.iter().any(|p| *p <= Q::zero()) {
                return Err(Error::InvalidBernoulli(format!("component {c} needs positive letter probabilities")));
            }
            let total: Q = probs.iter().sum();
            if !total.is_one() {
                return Err(Error::InvalidBernoulli(format!("component {c} sums to {total}")));
            }
        }
        Ok(Self { components })
    }

    /// `copies` independent uniform sequences over `alphabet` letters.
    pub fn uniform(alphabet: usize, copies: usize) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidBernoulli("empty alphabet".into()));
        }
        let p = Q::new(1.into(), alphabet.into());
        Self::new(vec![vec![p; alphabet]; copies])
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn alphabet(&self, component: usize) -> usize {
        self.components[component].len()
    }

    pub fn probabilities(&self, component: usize) -> &[Q] {
        &self.components[component]
    }
}

/// A function of finitely many coordinates. The table is indexed by the
/// letters at `coords[0][0], coords[0][1], …, coords[1][0], …` in mixed radix,
/// the last coordinate varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderObservable {
    alphabets: Vec<usize>,
    coords: Vec<Vec<i64>>,
    table: Vec<Q>,
}

impl CylinderObservable {
    pub fn new(spec: &BernoulliSpec, coords: Vec<Vec<i64>>, table: Vec<Q>) -> Result<Self> {
        if coords.len() != spec.num_components() {
            return Err(Error::InvalidCylinder(format!(
                "{} coordinate lists for {} components",
                coords.len(),
                spec.num_components()
            )));
        }
        for (c, list) in coords.iter().enumerate() {
            let mut sorted = list.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != list.len() {
                return Err(Error::InvalidCylinder(format!("repeated coordinate in component {c}")));
            }
        }
        let alphabets: Vec<usize> = (0..spec.num_components()).map(|c| spec.alphabet(c)).collect();
        let cells = coords
            .iter()
            .zip(&alphabets)
            .try_fold(1usize, |acc, (list, &a)| list.iter().try_fold(acc, |acc, _| acc.checked_mul(a)))
            .ok_or_else(|| Error::InvalidCylinder("table too large".into()))?;
        if table.len() != cells {
            return Err(Error::InvalidCylinder(format!("table has {} entries, expected {cells}", table.len())));
        }
        Ok(Self { alphabets, coords, table })
    }

    /// Builds the table by evaluating `f` on each assignment, given as letters
    /// in the same order as the flattened coordinates.
    pub fn from_fn(spec: &BernoulliSpec, coords: Vec<Vec<i64>>, f: impl Fn(&[usize]) -> Q) -> Result<Self> {
        let radices: Vec<usize> =
            coords.iter().enumerate().flat_map(|(c, list)| std::iter::repeat_n(spec.alphabet(c), list.len())).collect();
        let mut table = Vec::new();
        for_each_assignment(&radices, |letters| table.push(f(letters)));
        Self::new(spec, coords, table)
    }

    pub fn coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    pub fn table(&self) -> &[Q] {
        &self.table
    }

    fn radices(&self) -> Vec<usize> {
        self.coords.iter().zip(&self.alphabets).flat_map(|(list, &a)| std::iter::repeat_n(a, list.len())).collect()
    }

    /// Value on a letter assignment ordered like the flattened coordinates.
    pub fn eval(&self, letters: &[usize]) -> &Q {
        let idx = letters.iter().zip(self.radices()).fold(0, |acc, (&l, r)| acc * r + l);
        &self.table[idx]
    }

    /// The function `x ↦ F(σ^{shifts} x)`: coordinate `m` of component `c`
    /// is read at `m + shifts[c]`.
    pub fn shifted(&self, shifts: &[i64]) -> Self {
        let coords = self.coords.iter().zip(shifts).map(|(list, s)| list.iter().map(|m| m + s).collect()).collect();
        Self { alphabets: self.alphabets.clone(), coords, table: self.table.clone() }
    }
}

/// An observable whose coordinates are translated per component.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftTerm {
    pub observable: CylinderObservable,
    pub shifts: Vec<i64>,
}

impl ShiftTerm {
    pub fn new(observable: CylinderObservable, shifts: Vec<i64>) -> Self {
        Self { observable, shifts }
    }

    pub fn unshifted(observable: CylinderObservable) -> Self {
        let shifts = vec![0; observable.coords.len()];
        Self { observable, shifts }
    }
}

fn for_each_assignment(radices: &[usize], mut visit: impl FnMut(&[usize])) {
    if radices.contains(&0) {
        return;
    }
    let mut letters = vec![0usize; radices.len()];
    loop {
        visit(&letters);
        let mut i = radices.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            letters[i] += 1;
            if letters[i] < radices[i] {
                break;
            }
            letters[i] = 0;
        }
    }
}

/// `∫ ∏ terms dν`, summing over the letters at every touched coordinate.
pub fn exact_correlation(spec: &BernoulliSpec, terms: &[ShiftTerm]) -> Result<Q> {
    let k = spec.num_components();
    // (component, absolute coordinate) → variable index
    let mut vars: BTreeMap<(usize, i64), usize> = BTreeMap::new();
    for term in terms {
        if term.shifts.len() != k || term.observable.coords.len() != k {
            return Err(Error::InvalidCylinder("term does not match the component count".into()));
        }
        if (0..k).any(|c| term.observable.alphabets[c] != spec.alphabet(c)) {
            return Err(Error::InvalidCylinder("term built over a different alphabet".into()));
        }
        for (c, list) in term.observable.coords.iter().enumerate() {
            for m in list {
                vars.entry((c, m + term.shifts[c])).or_insert(0);
            }
        }
    }
    let keys: Vec<(usize, i64)> = vars.keys().copied().collect();
    for (i, key) in keys.iter().enumerate() {
        vars.insert(*key, i);
    }
    let radices: Vec<usize> = keys.iter().map(|&(c, _)| spec.alphabet(c)).collect();
    let size = radices.iter().fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
    if size > MAX_ASSIGNMENTS {
        return Err(Error::SizeLimitExceeded { what: "cylinder assignments", size, limit: MAX_ASSIGNMENTS });
    }
    let slots: Vec<Vec<usize>> = terms
        .iter()
        .map(|t| {
            t.observable
                .coords
                .iter()
                .enumerate()
                .flat_map(|(c, list)| list.iter().map(move |m| (c, m + t.shifts[c])))
                .map(|key| vars[&key])
                .collect()
        })
        .collect();
    let term_radices: Vec<Vec<usize>> = terms.iter().map(|t| t.observable.radices()).collect();

    let mut total = Q::zero();
    for_each_assignment(&radices, |letters| {
        let mut value = Q::one();
        for (t, term) in terms.iter().enumerate() {
            let idx = slots[t].iter().zip(&term_radices[t]).fold(0, |acc, (&v, &r)| acc * r + letters[v]);
            let entry = &term.observable.table[idx];
            if entry.is_zero() {
                return;
            }
            value *= entry;
        }
        for (v, &l) in letters.iter().enumerate() {
            value *= &spec.components[keys[v].0][l];
        }
        total += value;
    });
    Ok(total)
}

/// Rows `j`, columns `i`, inner index `k`.
const COUNTEREXAMPLE_ROWS: [[[u8; 3]; 3]; 3] =
    [[[0, 0, 1], [0, 0, 1], [1, 1, 1]], [[0, 1, 1], [0, 0, 1], [1, 1, 0]], [[1, 1, 0], [1, 1, 1], [1, 0, 0]]];

/// Three independent uniform sequences over `{0, 1, 2}`.
pub fn counterexample_spec() -> BernoulliSpec {
    BernoulliSpec::uniform(3, 3).expect("uniform spec is valid")
}

/// `f(i, j, k)` on the three time-0 letters.
pub fn counterexample_entry(i: usize, j: usize, k: usize) -> u8 {
    COUNTEREXAMPLE_ROWS[j][i][k]
}

/// `F(y, z, w) = f(y₀, z₀, w₀)`.
pub fn counterexample_table() -> CylinderObservable {
    CylinderObservable::from_fn(&counterexample_spec(), vec![vec![0]; 3], |l| {
        qi(counterexample_entry(l[0], l[1], l[2]).into())
    })
    .expect("27-entry table")
}

/// All 27 entries as `((i, j, k), f(i, j, k))` in lexicographic order.
pub fn counterexample_entries() -> Vec<((usize, usize, usize), u8)> {
    let mut out = Vec::with_capacity(27);
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out.push(((i, j, k), counterexample_entry(i, j, k)));
            }
        }
    }
    out
}

/// `μ(A)` for the set `A = {F = 1}`.
pub fn counterexample_measure() -> Q {
    exact_correlation(&counterexample_spec(), &[ShiftTerm::unshifted(counterexample_table())])
        .expect("three touched coordinates")
}

fn counterexample_terms(n: i64) -> Vec<ShiftTerm> {
    // T₁ = S×id×S and T₂ = id×S×S, so T₁⁻ⁿF reads y and w at −n.
    let f = counterexample_table();
    vec![
        ShiftTerm::new(f.clone(), vec![0, 0, 0]),
        ShiftTerm::new(f.clone(), vec![-n, 0, -n]),
        ShiftTerm::new(f, vec![0, -n, -n]),
    ]
}

/// `μ(A ∩ T₁ⁿA ∩ T₂ⁿA)` for `n ≠ 0`.
pub fn counterexample_value(n: i64) -> Result<Q> {
    if n == 0 {
        return Err(Error::ZeroShift);
    }
    exact_correlation(&counterexample_spec(), &counterexample_terms(n))
}

/// `μ(A ∩ T₁ⁿA ∩ T₂ⁿA)` for every `n`; at `n = 0` it is `μ(A)`.
pub fn counterexample_intersection(n: i64) -> Q {
    match counterexample_value(n) {
        Ok(v) => v,
        Err(_) => counterexample_measure(),
    }
}

/// The ratio `(145/729) / (16/27)³ = 3915/4096`.
pub fn counterexample_ratio() -> Q {
    counterexample_intersection(1) / pow(&counterexample_measure(), 3)
}

/// Whether `I_n < 0.96 μ(A)³` holds exactly for the table.
pub fn counterexample_certificate() -> bool {
    counterexample_intersection(1) < q(96, 100) * pow(&counterexample_measure(), 3)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerCertificate {
    pub l: u32,
    /// `I_n` for the `l`-fold product system and product set.
    pub lhs: Q,
    /// `c · μ(A')³` for the product set `A'`.
    pub rhs: Q,
    pub certificate: bool,
}

/// Hard stop for the search in `counterexample_power`.
pub const MAX_POWER: u32 = 100_000;

/// Least `l` with `(145/729)^l < c · ((16/27)³)^l`.
pub fn counterexample_power(c: &Q) -> Result<PowerCertificate> {
    if *c <= Q::zero() || *c > Q::one() {
        return Err(Error::OutOfRange(c.clone()));
    }
    let value = counterexample_intersection(1);
    let cube = pow(&counterexample_measure(), 3);
    let ratio = &value / &cube;
    let mut r_l = ratio.clone();
    let mut l = 1u32;
    while r_l >= *c {
        if l >= MAX_POWER {
            return Err(Error::OutOfRange(c.clone()));
        }
        r_l *= &ratio;
        l += 1;
    }
    let lhs = pow(&value, l);
    let rhs = c * pow(&cube, l);
    Ok(PowerCertificate { certificate: lhs < rhs, l, lhs, rhs })
}

/// Points of the window system: component `c` holds a word of length
/// `window` over its alphabet; word digits are little-endian, component 0
/// is the most significant.
fn window_radices(spec: &BernoulliSpec, window: usize) -> Vec<usize> {
    (0..spec.num_components()).flat_map(|c| std::iter::repeat_n(spec.alphabet(c), window)).collect()
}

fn window_letters(radices: &[usize], mut x: usize) -> Vec<usize> {
    let mut letters = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        letters[i] = x % radices[i];
        x /= radices[i];
    }
    letters
}

fn window_index(radices: &[usize], letters: &[usize]) -> usize {
    letters.iter().zip(radices).fold(0, |acc, (&l, &r)| acc * r + l)
}

/// Largest window system `cyclic_window_system` builds.
pub const MAX_WINDOW_POINTS: usize = 1 << 22;

/// Finite marginal of the shift: each component is a cyclic word of length
/// `window` with product weights, and `T₁`, `T₂` rotate the components
/// flagged in `t1_moves` and `t2_moves` by one place (`(Sy)_m = y_{m+1}`).
pub fn cyclic_window_system(
    spec: &BernoulliSpec,
    window: usize,
    t1_moves: &[bool],
    t2_moves: &[bool],
) -> Result<CommutingSystem> {
    let k = spec.num_components();
    if window == 0 || t1_moves.len() != k || t2_moves.len() != k {
        return Err(Error::InvalidBernoulli("window system needs a positive window and one flag per component".into()));
    }
    let radices = window_radices(spec, window);
    let size = radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r)).filter(|&s| s <= MAX_WINDOW_POINTS);
    let Some(size) = size else {
        return Err(Error::SizeLimitExceeded {
            what: "window system points",
            size: radices.iter().fold(1u128, |acc, &r| acc.saturating_mul(r as u128)),
            limit: MAX_WINDOW_POINTS as u128,
        });
    };
    let mut weights = Vec::with_capacity(size);
    let mut fwd1 = Vec::with_capacity(size);
    let mut fwd2 = Vec::with_capacity(size);
    for x in 0..size {
        let letters = window_letters(&radices, x);
        let mut w = Q::one();
        for (i, &l) in letters.iter().enumerate() {
            w *= &spec.components[i / window][l];
        }
        weights.push(w);
        let step = |moves: &[bool]| {
            let mut out = letters.clone();
            for c in (0..k).filter(|&c| moves[c]) {
                for m in 0..window {
                    out[c * window + m] = letters[c * window + (m + 1) % window];
                }
            }
            window_index(&radices, &out)
        };
        fwd1.push(step(t1_moves));
        fwd2.push(step(t2_moves));
    }
    let space = Arc::new(WeightedSpace::new(weights)?);
    validate_system(&space, Transformation::new(fwd1)?, Transformation::new(fwd2)?)
}

/// Evaluates a cylinder observable on the window system, reading coordinate
/// `m` at `m mod window`. Coordinates that collide modulo the window must
/// not occur.
pub fn window_observable(
    spec: &BernoulliSpec,
    window: usize,
    sys: &CommutingSystem,
    f: &CylinderObservable,
) -> Result<Observable> {
    let radices = window_radices(spec, window);
    for list in &f.coords {
        let mut residues: Vec<i64> = list.iter().map(|m| m.rem_euclid(window as i64)).collect();
        residues.sort_unstable();
        residues.dedup();
        if residues.len() != list.len() {
            return Err(Error::InvalidCylinder("coordinates collide modulo the window".into()));
        }
    }
    let values = (0..sys.len())
        .map(|x| {
            let letters = window_letters(&radices, x);
            let picked: Vec<usize> = f
                .coords
                .iter()
                .enumerate()
                .flat_map(|(c, list)| {
                    let letters = &letters;
                    list.iter().map(move |m| letters[c * window + m.rem_euclid(window as i64) as usize])
                })
                .collect();
            f.eval(&picked).clone()
        })
        .collect();
    Observable::new(sys.space(), values)
}

/// Window-`window` surrogate of the counterexample with `T₁ = S×id×S`,
/// `T₂ = id×S×S`, together with the set `A = {f(y₀, z₀, w₀) = 1}`.
/// Not ergodic: the rotations preserve letter counts.
pub fn cyclic_surrogate(window: usize) -> Result<(CommutingSystem, Vec<usize>)> {
    let spec = counterexample_spec();
    let sys = cyclic_window_system(&spec, window, &[true, false, true], &[false, true, true])?;
    let f = window_observable(&spec, window, &sys, &counterexample_table())?;
    let set = (0..sys.len()).filter(|&x| f.value(x).is_one()).collect();
    Ok((sys, set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::power_system;
    use crate::measure::integrate;
    use crate::recurrence::multi_corr;
    use proptest::prelude::*;

    #[test]
    fn table_entries() {
        assert_eq!(counterexample_entry(0, 0, 2), 1);
        assert_eq!(counterexample_entry(2, 2, 0), 1);
        assert_eq!(counterexample_entry(2, 2, 1), 0);
        let ones: u32 = counterexample_entries().iter().map(|e| u32::from(e.1)).sum();
        assert_eq!(ones, 16);
        assert_eq!(counterexample_table().table().len(), 27);
    }

    #[test]
    fn constant_integrates_to_one() {
        let spec = BernoulliSpec::new(vec![vec![q(1, 4), q(3, 4)], vec![q(1, 3); 3]]).unwrap();
        let one = CylinderObservable::new(&spec, vec![vec![], vec![]], vec![qi(1)]).unwrap();
        assert_eq!(exact_correlation(&spec, &[ShiftTerm::unshifted(one)]).unwrap(), qi(1));
        assert_eq!(exact_correlation(&spec, &[]).unwrap(), qi(1));
    }

    /// Independent oracle: the six time-0 / time-(−n) letters enumerated
    /// directly with the integrand read off the integral.
    fn brute_value() -> Q {
        let f = |i: usize, j: usize, k: usize| u32::from(counterexample_entry(i, j, k));
        let mut count = 0u32;
        for y0 in 0..3 {
            for y1 in 0..3 {
                for z0 in 0..3 {
                    for z1 in 0..3 {
                        for w0 in 0..3 {
                            for w1 in 0..3 {
                                count += f(y0, z0, w0) * f(y1, z0, w1) * f(y0, z1, w1);
                            }
                        }
                    }
                }
            }
        }
        Q::new(count.into(), 729.into())
    }

    #[test]
    fn counterexample_values() {
        assert_eq!(counterexample_measure(), q(16, 27));
        assert_eq!(brute_value(), q(145, 729));
        for n in [1, -7, 2, 100] {
            assert_eq!(counterexample_value(n).unwrap(), q(145, 729));
        }
        assert_eq!(counterexample_value(0), Err(Error::ZeroShift));
        assert_eq!(counterexample_intersection(0), q(16, 27));
        assert_eq!(q(145, 729), q(3915, 19683));
        assert_eq!(pow(&q(16, 27), 3), q(4096, 19683));
        assert!(counterexample_certificate());
        assert_eq!(counterexample_ratio(), q(3915, 4096));
    }

    #[test]
    fn powers() {
        let oracle = |c: &Q| {
            let r = q(3915, 4096);
            (1u32..).find(|&l| pow(&r, l) < *c).unwrap()
        };
        for (c, l) in [(qi(1), 1), (q(1, 2), 16), (q(96, 100), 1)] {
            let p = counterexample_power(&c).unwrap();
            assert_eq!(p.l, l);
            assert_eq!(p.l, oracle(&c));
            assert!(p.certificate && p.lhs < p.rhs);
        }
        assert!((1.0f64 / 2.0).ln() / (3915.0f64 / 4096.0).ln() > 15.0);
        assert!(matches!(counterexample_power(&qi(0)), Err(Error::OutOfRange(_))));
        assert!(matches!(counterexample_power(&q(3, 2)), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn surrogate_matches_symbolic() {
        let (sys, set) = cyclic_surrogate(2).unwrap();
        assert_eq!(sys.len(), 729);
        let f = Observable::indicator(sys.space(), &set).unwrap();
        assert_eq!(integrate(&f), q(16, 27));
        assert_eq!(multi_corr(&sys, &f, &f, &f, 1).unwrap(), q(145, 729));
        assert_eq!(multi_corr(&sys, &f, &f, &f, -1).unwrap(), q(145, 729));
        assert_eq!(multi_corr(&sys, &f, &f, &f, 2).unwrap(), q(16, 27));
        assert!(!crate::dynamics::is_ergodic(&sys));
    }

    #[test]
    fn product_power_factorizes() {
        // Two-fold product of the window-1 marginal on a 2-letter alphabet.
        let spec = BernoulliSpec::new(vec![vec![q(1, 3), q(2, 3)]]).unwrap();
        let sys = cyclic_window_system(&spec, 2, &[true], &[true]).unwrap();
        let g = CylinderObservable::new(&spec, vec![vec![0]], vec![qi(1), qi(0)]).unwrap();
        let obs = window_observable(&spec, 2, &sys, &g).unwrap();
        let single = multi_corr(&sys, &obs, &obs, &obs, 1).unwrap();
        let sq = power_system(&sys, 2);
        let set: Vec<usize> =
            (0..sq.len()).filter(|x| obs.value(x / 4).is_one() && obs.value(x % 4).is_one()).collect();
        let prod = Observable::indicator(sq.space(), &set).unwrap();
        assert_eq!(multi_corr(&sq, &prod, &prod, &prod, 1).unwrap(), pow(&single, 2));
    }

    fn spec_strategy() -> impl Strategy<Value = BernoulliSpec> {
        prop::collection::vec(prop::collection::vec(1u32..5, 2..4), 1..3).prop_map(|comps| {
            BernoulliSpec::new(
                comps
                    .into_iter()
                    .map(|w| {
                        let s: u32 = w.iter().sum();
                        w.into_iter().map(|x| Q::new(x.into(), s.into())).collect()
                    })
                    .collect(),
            )
            .unwrap()
        })
    }

    fn cylinder(spec: &BernoulliSpec, coords: Vec<Vec<i64>>, seed: u64) -> CylinderObservable {
        CylinderObservable::from_fn(spec, coords, |l| {
            let h = l.iter().fold(seed, |acc, &x| acc.wrapping_mul(31).wrapping_add(x as u64 + 7));
            qi((h % 5) as i64 - 2)
        })
        .unwrap()
    }

    fn coord_sets(spec: &BernoulliSpec, lo: i64, seed: u64) -> Vec<Vec<i64>> {
        (0..spec.num_components())
            .map(|c| {
                let n = ((seed >> (c * 3)) % 3) as i64;
                (0..n).map(|m| lo + 2 * m).collect()
            })
            .collect()
    }

    proptest! {
        #[test]
        fn shift_invariance(spec in spec_strategy(), seed in any::<u64>(), t in -5i64..5, s in -3i64..3) {
            let k = spec.num_components();
            let a = cylinder(&spec, coord_sets(&spec, 0, seed), seed);
            let b = cylinder(&spec, coord_sets(&spec, 1, seed.rotate_left(7)), seed ^ 99);
            let shifts: Vec<i64> = (0..k).map(|c| s * c as i64).collect();
            let base = exact_correlation(&spec, &[ShiftTerm::unshifted(a.clone()), ShiftTerm::new(b.clone(), shifts.clone())]).unwrap();
            let moved: Vec<i64> = shifts.iter().map(|x| x + t).collect();
            let translated = exact_correlation(&spec, &[ShiftTerm::new(a, vec![t; k]), ShiftTerm::new(b, moved)]).unwrap();
            prop_assert_eq!(base, translated);
        }

        #[test]
        fn factorization(spec in spec_strategy(), seed in any::<u64>()) {
            let a = cylinder(&spec, coord_sets(&spec, 0, seed), seed);
            let b = cylinder(&spec, coord_sets(&spec, 10, seed >> 5), seed ^ 1234);
            let ia = exact_correlation(&spec, &[ShiftTerm::unshifted(a.clone())]).unwrap();
            let ib = exact_correlation(&spec, &[ShiftTerm::unshifted(b.clone())]).unwrap();
            let joint = exact_correlation(&spec, &[ShiftTerm::unshifted(a), ShiftTerm::unshifted(b)]).unwrap();
            prop_assert_eq!(joint, ia * ib);
        }

        #[test]
        fn window_marginal_agrees(spec in spec_strategy(), seed in any::<u64>(), n in 1i64..3) {
            // time-0 observable; a window of 3 keeps 0 and −n apart
            let coords = vec![vec![0]; spec.num_components()];
            let f = cylinder(&spec, coords, seed);
            let k = spec.num_components();
            let t1: Vec<bool> = (0..k).map(|c| c % 2 == 0).collect();
            let t2: Vec<bool> = (0..k).map(|c| c >= 1).collect();
            let sys = cyclic_window_system(&spec, 3, &t1, &t2).unwrap();
            let obs = window_observable(&spec, 3, &sys, &f).unwrap();
            let finite = multi_corr(&sys, &obs, &obs, &obs, n).unwrap();
            let sh = |m: &[bool]| m.iter().map(|&b| if b { n } else { 0 }).collect::<Vec<_>>();
            let symbolic = exact_correlation(&spec, &[
                ShiftTerm::unshifted(f.clone()),
                ShiftTerm::new(f.clone(), sh(&t1)),
                ShiftTerm::new(f, sh(&t2)),
            ]).unwrap();
            prop_assert_eq!(finite, symbolic);
        }
    }
}
