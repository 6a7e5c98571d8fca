//! Multiple correlation sequences, syndetic recurrence scans, and the
//! seminorm bounds that control their averages.
//!
//! Every sequence here is periodic in `n` with period dividing
//! `lcm(ord T₁, ord T₂)`, so a Cesàro limit is the exact average over one
//! period and "syndetic" means "nonempty" for the periodic hit set.

use num_traits::{One, Signed, Zero};

use crate::box_seminorm::{box_measure, seminorm4_on, QuadMeasure};
use crate::cyclotomic::{certified_sign, CyclotomicField};
use crate::dynamics::{
    common_rotation_factor, invariant_partition, is_ergodic, product_system, rotation_system, CommutingSystem, Pairing,
    Which,
};
use crate::error::{Error, Result};
use crate::measure::{cond_exp, holder_product_bound, integrate, join_partitions, same_space, Observable, Partition};
use crate::rational::{fourth_root_enclosure, pow, q, Q};

/// Largest `period × |X|` a scan will walk.
pub const MAX_SCAN_WORK: u128 = 200_000_000;

/// `I_n(f₀, f₁, f₂) = ∫ f₀ · T₁ⁿf₁ · T₂ⁿf₂ dμ` with `(Tf)(x) = f(Tx)`.
pub fn multi_corr(sys: &CommutingSystem, f0: &Observable, f1: &Observable, f2: &Observable, n: i64) -> Result<Q> {
    check_on(sys, [f0, f1, f2])?;
    let a = sys.t1().pow(n);
    let b = sys.t2().pow(n);
    Ok(corr_with_maps(sys, f0, f1, f2, &a, &b))
}

fn check_on(sys: &CommutingSystem, fs: [&Observable; 3]) -> Result<()> {
    if fs.iter().any(|f| !same_space(f.space(), sys.space())) {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

fn corr_with_maps(
    sys: &CommutingSystem,
    f0: &Observable,
    f1: &Observable,
    f2: &Observable,
    a: &[usize],
    b: &[usize],
) -> Q {
    let w = sys.space().weights();
    let mut total = Q::zero();
    for x in 0..sys.len() {
        let v = f0.value(x);
        if v.is_zero() {
            continue;
        }
        total += &w[x] * v * f1.value(a[x]) * f2.value(b[x]);
    }
    total
}

fn checked_period(sys: &CommutingSystem) -> Result<u64> {
    let p = sys.period();
    let work = p as u128 * sys.len() as u128;
    if p == u64::MAX || work > MAX_SCAN_WORK {
        return Err(Error::SizeLimitExceeded { what: "period scan", size: work, limit: MAX_SCAN_WORK });
    }
    Ok(p)
}

/// `I_0, …, I_{len−1}`, stepping the powers of `T₁` and `T₂` incrementally.
pub fn correlation_sequence(
    sys: &CommutingSystem,
    f0: &Observable,
    f1: &Observable,
    f2: &Observable,
    len: u64,
) -> Result<Vec<Q>> {
    check_on(sys, [f0, f1, f2])?;
    let mut a: Vec<usize> = (0..sys.len()).collect();
    let mut b = a.clone();
    let mut out = Vec::with_capacity(len as usize);
    for _ in 0..len {
        out.push(corr_with_maps(sys, f0, f1, f2, &a, &b));
        for x in 0..sys.len() {
            a[x] = sys.t1().apply(a[x]);
            b[x] = sys.t2().apply(b[x]);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Three,
    Four,
}

impl Exponent {
    pub fn value(self) -> u32 {
        match self {
            Exponent::Three => 3,
            Exponent::Four => 4,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ScanOptions {
    /// Scan at most this many shifts instead of a full period.
    pub horizon: Option<u64>,
    /// Accept non-ergodic systems; the report then records the violation.
    pub allow_non_ergodic: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceReport {
    pub measure: Q,
    pub threshold: Q,
    pub period: u64,
    /// Number of shifts actually scanned, starting at 0.
    pub scanned: u64,
    /// Whether a full period was scanned.
    pub complete: bool,
    /// `I_n` for every scanned `n`.
    pub values: Vec<Q>,
    pub hits: Vec<u64>,
    /// Largest gap between consecutive hits, taken cyclically over a full
    /// period (so a lone hit has gap `period`).
    pub max_gap: Option<u64>,
    pub syndetic: bool,
    pub ergodic: bool,
}

impl RecurrenceReport {
    pub fn ergodicity_hypothesis_violated(&self) -> bool {
        !self.ergodic
    }
}

/// Scans `{n : μ(A ∩ T₁⁻ⁿA ∩ T₂⁻ⁿA) > μ(A)^k − ε}` over one period.
pub fn recurrence_set(
    sys: &CommutingSystem,
    set: &[usize],
    exponent: Exponent,
    epsilon: &Q,
    options: &ScanOptions,
) -> Result<RecurrenceReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon(epsilon.clone()));
    }
    let f = Observable::indicator(sys.space(), set)?;
    let ergodic = is_ergodic(sys);
    if !ergodic && !options.allow_non_ergodic {
        return Err(Error::NotErgodic);
    }
    let measure = integrate(&f);
    let threshold = pow(&measure, exponent.value()) - epsilon;
    let period = checked_period(sys)?;
    let scanned = options.horizon.map_or(period, |h| h.min(period));
    let values = correlation_sequence(sys, &f, &f, &f, scanned)?;
    let hits: Vec<u64> = (0..scanned).filter(|&n| values[n as usize] > threshold).collect();
    let complete = scanned == period;
    let max_gap = gap_of(&hits, complete.then_some(period));
    Ok(RecurrenceReport {
        measure,
        threshold,
        period,
        scanned,
        complete,
        values,
        syndetic: !hits.is_empty(),
        hits,
        max_gap,
        ergodic,
    })
}

fn gap_of(hits: &[u64], period: Option<u64>) -> Option<u64> {
    let first = *hits.first()?;
    let last = *hits.last()?;
    let inner = hits.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    Some(match period {
        Some(p) => inner.max(first + p - last),
        None => inner.max(1),
    })
}

/// Box measures for the three generator pairs `(T₁,T₂)`, `(T₁,T₃)`, `(T₂,T₃)`.
#[derive(Debug, Clone)]
pub struct PairBoxes {
    pub t1t2: QuadMeasure,
    pub t1t3: QuadMeasure,
    pub t2t3: QuadMeasure,
}

impl PairBoxes {
    pub fn new(sys: &CommutingSystem) -> Result<Self> {
        Ok(Self {
            t1t2: box_measure(sys)?,
            t1t3: box_measure(&sys.pair(Which::T1, Which::T3))?,
            t2t3: box_measure(&sys.pair(Which::T2, Which::T3))?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct CesaroCheck {
    pub t: Q,
    /// The period average itself when it is real and rational (`t ∈ {0, 1/2}`).
    pub average: Option<Q>,
    pub avg_abs: f64,
    /// Fourth powers of `‖f₀‖_{T₁,T₂}`, `‖f₁‖_{T₁,T₃}`, `‖f₂‖_{T₂,T₃}`.
    pub bounds: [Q; 3],
    pub holds_each: [bool; 3],
    pub holds: bool,
    /// False when a sign could not be certified (then `holds` is false too).
    pub certified: bool,
}

pub fn cesaro_bound_check(
    sys: &CommutingSystem,
    f0: &Observable,
    f1: &Observable,
    f2: &Observable,
    t: &Q,
) -> Result<CesaroCheck> {
    cesaro_bound_check_with(sys, &PairBoxes::new(sys)?, f0, f1, f2, t)
}

/// Compares `|avg_{n<P} e(nt) I_n|⁴` with the fourth power of the seminorm
/// of each function, taken for the pair of transformations that leaves that
/// function unshifted after a change of variables:
/// `f₀` with `(T₁,T₂)`, `f₁` with `(T₁,T₃)`, `f₂` with `(T₂,T₃)`.
pub fn cesaro_bound_check_with(
    sys: &CommutingSystem,
    boxes: &PairBoxes,
    f0: &Observable,
    f1: &Observable,
    f2: &Observable,
    t: &Q,
) -> Result<CesaroCheck> {
    check_on(sys, [f0, f1, f2])?;
    let one = Q::one();
    for f in [f0, f1, f2] {
        f.check_range(&-&one, &one)?;
    }
    let period = checked_period(sys)?;
    let frac = t - t.floor();
    let d = frac.denom().clone();
    let d_usize: usize = d.to_string().parse().unwrap_or(usize::MAX);
    if d_usize == 0 || period % d_usize as u64 != 0 {
        return Err(Error::InvalidFrequency { t: t.clone(), period });
    }
    let a: u64 = frac.numer().to_string().parse().expect("reduced numerator below denominator");
    let values = correlation_sequence(sys, f0, f1, f2, period)?;

    let field = CyclotomicField::new(d_usize);
    let mut coeffs = vec![Q::zero(); d_usize];
    for (n, v) in values.iter().enumerate() {
        coeffs[((a * n as u64) % d_usize as u64) as usize] += v;
    }
    let sum = field.from_powers(&coeffs);
    let abs2 = field.mul(&sum, &field.conj(&sum));
    let abs4 = field.mul(&abs2, &abs2);
    let p4 = pow(&Q::from_integer(period.into()), 4);

    let bounds = [
        seminorm4_on(f0, &boxes.t1t2)?.fourth_power,
        seminorm4_on(f1, &boxes.t1t3)?.fourth_power,
        seminorm4_on(f2, &boxes.t2t3)?.fourth_power,
    ];
    let mut certified = true;
    let mut holds_each = [false; 3];
    for (i, b) in bounds.iter().enumerate() {
        let gap = field.sub(&field.from_rational(b * &p4), &abs4);
        match certified_sign(&field, &gap) {
            Some(ord) => holds_each[i] = ord != std::cmp::Ordering::Less,
            None => certified = false,
        }
    }
    let average = (d_usize <= 2).then(|| {
        let s: Q = values
            .iter()
            .enumerate()
            .map(|(n, v)| if d_usize == 2 && (a * n as u64) % 2 == 1 { -v } else { v.clone() })
            .sum();
        s / Q::from_integer(period.into())
    });
    let avg_abs = field.real_part_f64(&abs2).max(0.0).sqrt() / period as f64;
    Ok(CesaroCheck {
        t: frac,
        average,
        avg_abs,
        bounds,
        holds: certified && holds_each.iter().all(|&h| h),
        holds_each,
        certified,
    })
}

/// `g₀ = E(h | I(T₁)∨I(T₂))`, `g₁ = E(h | I(T₁)∨I(T₃))`, `g₂ = E(h | I(T₂)∨I(T₃))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseProjections {
    pub h: Observable,
    pub g0: Observable,
    pub g1: Observable,
    pub g2: Observable,
}

pub fn pairwise_join(sys: &CommutingSystem, a: Which, b: Which) -> Partition {
    join_partitions(&invariant_partition(sys, a), &invariant_partition(sys, b)).expect("same space")
}

pub fn pairwise_projections(sys: &CommutingSystem, f: &Observable) -> Result<PairwiseProjections> {
    if !same_space(f.space(), sys.space()) {
        return Err(Error::SpaceMismatch);
    }
    Ok(PairwiseProjections {
        h: f.clone(),
        g0: cond_exp(f, &pairwise_join(sys, Which::T1, Which::T2))?,
        g1: cond_exp(f, &pairwise_join(sys, Which::T1, Which::T3))?,
        g2: cond_exp(f, &pairwise_join(sys, Which::T2, Which::T3))?,
    })
}

/// `J_n = I_n(g₀, g₁, g₂)`.
pub fn j_sequence(sys: &CommutingSystem, f: &Observable, n: i64) -> Result<Q> {
    let p = pairwise_projections(sys, f)?;
    multi_corr(sys, &p.g0, &p.g1, &p.g2, n)
}

#[derive(Debug, Clone, PartialEq)]
pub struct J0Check {
    pub j0: Q,
    pub bound: Q,
    pub holds: bool,
}

/// `J₀ ≥ (∫ f)⁴` for `0 ≤ f ≤ 1`.
pub fn j0_lower_bound_check(sys: &CommutingSystem, f: &Observable) -> Result<J0Check> {
    f.check_range(&Q::zero(), &Q::one())?;
    let j0 = j_sequence(sys, f, 0)?;
    let bound = pow(&integrate(f), 4);
    Ok(J0Check { holds: j0 >= bound, j0, bound })
}

#[derive(Debug, Clone)]
pub struct DiffCheck {
    /// Exact period average of `I_n − J_n`.
    pub average: Q,
    pub avg_abs_fourth: Q,
    /// Fourth powers of `‖h−g₂‖_{T₂,T₃}`, `‖h−g₁‖_{T₁,T₃}`, `‖h−g₀‖_{T₁,T₂}`.
    pub seminorms: [Q; 3],
    /// Rational enclosures of the sum of the three seminorms (fourth roots).
    pub bound_sum: (Q, Q),
    pub holds: bool,
    pub certified: bool,
    /// All three pairwise joins are the discrete partition, forcing `g_i = h`.
    pub joins_discrete: bool,
}

pub fn diff_bound_check(sys: &CommutingSystem, f: &Observable) -> Result<DiffCheck> {
    diff_bound_check_with(sys, &PairBoxes::new(sys)?, f)
}

/// `|avg (I_n − J_n)| ≤ ‖h−g₂‖_{T₂,T₃} + ‖h−g₁‖_{T₁,T₃} + ‖h−g₀‖_{T₁,T₂}`,
/// the telescoping `I(h,h,h) → I(h,h,g₂) → I(h,g₁,g₂) → I(g₀,g₁,g₂)`
/// with one seminorm bound per step.
pub fn diff_bound_check_with(sys: &CommutingSystem, boxes: &PairBoxes, f: &Observable) -> Result<DiffCheck> {
    f.check_range(&Q::zero(), &Q::one())?;
    let p = pairwise_projections(sys, f)?;
    let period = checked_period(sys)?;
    let i_seq = correlation_sequence(sys, f, f, f, period)?;
    let j_seq = correlation_sequence(sys, &p.g0, &p.g1, &p.g2, period)?;
    let diff: Q = i_seq.iter().zip(&j_seq).map(|(a, b)| a - b).sum();
    let average = diff / Q::from_integer(period.into());
    let seminorms = [
        seminorm4_on(&f.sub(&p.g2)?, &boxes.t2t3)?.fourth_power,
        seminorm4_on(&f.sub(&p.g1)?, &boxes.t1t3)?.fourth_power,
        seminorm4_on(&f.sub(&p.g0)?, &boxes.t1t2)?.fourth_power,
    ];
    let joins_discrete = [(Which::T1, Which::T2), (Which::T1, Which::T3), (Which::T2, Which::T3)]
        .iter()
        .all(|&(a, b)| pairwise_join(sys, a, b).is_discrete());
    let target = average.abs();
    let mut width = q(1, 1_000_000_000_000);
    let mut result = (false, false, (Q::zero(), Q::zero()));
    for _ in 0..4 {
        let encl: Vec<(Q, Q)> = seminorms.iter().map(|s| fourth_root_enclosure(s, &width)).collect();
        let lo: Q = encl.iter().map(|e| &e.0).sum();
        let hi: Q = encl.iter().map(|e| &e.1).sum();
        if target <= lo {
            result = (true, true, (lo, hi));
            break;
        }
        if target > hi {
            result = (false, true, (lo, hi));
            break;
        }
        result = (false, false, (lo, hi));
        width = &width * q(1, 1_000_000_000_000);
    }
    let (holds, certified, bound_sum) = result;
    Ok(DiffCheck { avg_abs_fourth: pow(&target, 4), average, seminorms, bound_sum, holds, certified, joins_discrete })
}

#[derive(Debug, Clone)]
pub struct ProductRotationCheck {
    /// `Z_p × Z_q` with `T₁ = (+1, id)`, `T₂ = (id, +1)`; `(x, y)` has index `x·q + y`.
    pub system: CommutingSystem,
    pub factor_order: usize,
    pub report: RecurrenceReport,
    pub f_hat: Observable,
    pub f_tilde: Observable,
    pub i0: Q,
    pub i0_bound: Q,
    pub i0_holds: bool,
}

/// Exponent-3 recurrence on a product of two rotations, together with
/// `I₀(f, f̂, f̃) ≥ (∫f)³` where `f̂`, `f̃` condition on the common rotation
/// factor in one coordinate and keep the other coordinate whole.
pub fn product_rotation_khintchine3(p: usize, q_: usize, set: &[usize], epsilon: &Q) -> Result<ProductRotationCheck> {
    if p == 0 || q_ == 0 {
        return Err(Error::EmptySpace);
    }
    let system = product_system(&rotation_system(p, 1, 0)?, &rotation_system(q_, 0, 1)?, Pairing::Split);
    let report = recurrence_set(&system, set, Exponent::Three, epsilon, &ScanOptions::default())?;
    let factor = common_rotation_factor(p, q_);
    let hat_labels: Vec<(usize, usize)> = (0..p * q_).map(|i| (factor.proj1[i / q_], i % q_)).collect();
    let tilde_labels: Vec<(usize, usize)> = (0..p * q_).map(|i| (i / q_, factor.proj2[i % q_])).collect();
    let hat = Partition::from_labels(system.space(), &hat_labels)?;
    let tilde = Partition::from_labels(system.space(), &tilde_labels)?;
    let f = Observable::indicator(system.space(), set)?;
    let f_hat = cond_exp(&f, &hat)?;
    let f_tilde = cond_exp(&f, &tilde)?;
    let i0 = multi_corr(&system, &f, &f_hat, &f_tilde, 0)?;
    let check = holder_product_bound(&f, &[hat, tilde])?;
    debug_assert_eq!(check.lhs, i0);
    Ok(ProductRotationCheck {
        system,
        factor_order: factor.g,
        report,
        f_hat,
        f_tilde,
        i0_holds: i0 >= check.rhs,
        i0,
        i0_bound: check.rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::box_seminorm::seminorm4;
    use crate::dynamics::Transformation;
    use crate::measure::WeightedSpace;
    use crate::rational::qi;
    use std::sync::Arc;

    fn z2xz3() -> CommutingSystem {
        product_system(&rotation_system(2, 1, 1).unwrap(), &rotation_system(3, 1, 1).unwrap(), Pairing::Split)
    }

    fn obs(sys: &CommutingSystem, v: &[i64]) -> Observable {
        Observable::new(sys.space(), v.iter().map(|&x| qi(x)).collect()).unwrap()
    }

    /// Direct set intersection, stepping the maps one application at a time.
    fn brute_intersection(sys: &CommutingSystem, set: &[usize], n: usize) -> Q {
        let mut total = Q::zero();
        for &x in set {
            let (mut a, mut b) = (x, x);
            for _ in 0..n {
                a = sys.t1().apply(a);
                b = sys.t2().apply(b);
            }
            if set.contains(&a) && set.contains(&b) {
                total += sys.space().weight(x);
            }
        }
        total
    }

    #[test]
    fn multi_corr_cases() {
        let s = Arc::new(WeightedSpace::uniform(4).unwrap());
        let id = CommutingSystem::identity(&s);
        let (f0, f1, f2) = (obs(&id, &[1, 2, 3, 4]), obs(&id, &[0, 1, 0, 2]), obs(&id, &[5, 1, 1, 1]));
        let direct = integrate(&f0.mul(&f1).unwrap().mul(&f2).unwrap());
        for n in [-3, 0, 7] {
            assert_eq!(multi_corr(&id, &f0, &f1, &f2, n).unwrap(), direct);
        }
        let sys = z2xz3();
        let a = Observable::indicator(sys.space(), &[0, 4]).unwrap();
        assert_eq!(multi_corr(&sys, &a, &a, &a, 0).unwrap(), q(1, 3));
        let a = Observable::indicator(sys.space(), &[0]).unwrap();
        for n in -7..13i64 {
            let expected = if n % 6 == 0 { q(1, 6) } else { qi(0) };
            assert_eq!(multi_corr(&sys, &a, &a, &a, n).unwrap(), expected);
            if n >= 0 {
                assert_eq!(brute_intersection(&sys, &[0], n as usize), expected);
            }
        }
    }

    #[test]
    fn recurrence_cases() {
        let sys = z2xz3();
        let all: Vec<usize> = (0..6).collect();
        let r = recurrence_set(&sys, &all, Exponent::Four, &q(1, 10), &ScanOptions::default()).unwrap();
        assert_eq!(r.hits, (0..6).collect::<Vec<_>>());
        assert_eq!(r.max_gap, Some(1));

        let r = recurrence_set(&sys, &[0], Exponent::Four, &q(1, 2000), &ScanOptions::default()).unwrap();
        assert_eq!(r.period, 6);
        assert_eq!(r.hits, vec![0]);
        assert_eq!(r.max_gap, Some(6));
        assert!(r.syndetic && r.complete);
        assert_eq!(r.threshold, q(1, 1296) - q(1, 2000));

        assert_eq!(
            recurrence_set(&sys, &[], Exponent::Four, &q(1, 2), &ScanOptions::default()).unwrap_err(),
            Error::EmptySet
        );
        assert!(matches!(
            recurrence_set(&sys, &[0], Exponent::Four, &qi(0), &ScanOptions::default()),
            Err(Error::NonPositiveEpsilon(_))
        ));
        let id = CommutingSystem::identity(sys.space());
        assert_eq!(
            recurrence_set(&id, &[0], Exponent::Four, &q(1, 2), &ScanOptions::default()).unwrap_err(),
            Error::NotErgodic
        );
        let opts = ScanOptions { allow_non_ergodic: true, ..Default::default() };
        let r = recurrence_set(&id, &[0], Exponent::Four, &q(1, 2), &opts).unwrap();
        assert!(r.ergodicity_hypothesis_violated());

        let opts = ScanOptions { horizon: Some(4), ..Default::default() };
        let r = recurrence_set(&sys, &[0, 1, 2], Exponent::Three, &q(1, 100), &opts).unwrap();
        assert!(!r.complete);
        assert_eq!(r.scanned, 4);
    }

    #[test]
    fn cesaro_cases() {
        let sys = z2xz3();
        let one = Observable::constant(sys.space(), qi(1));
        let c = cesaro_bound_check(&sys, &one, &one, &one, &qi(0)).unwrap();
        assert_eq!(c.average, Some(qi(1)));
        assert_eq!(c.bounds, [qi(1), qi(1), qi(1)]);
        assert!(c.holds);

        let f = Observable::indicator(sys.space(), &[0]).unwrap();
        let c = cesaro_bound_check(&sys, &f, &f, &f, &qi(0)).unwrap();
        assert_eq!(c.average, Some(q(1, 36)));
        assert_eq!(c.bounds[0], q(1, 36));
        assert!(c.holds);

        // mean zero, so every I_n vanishes for any frequency
        let g = obs(&sys, &[1, -1, 0, 0, 0, 0]);
        for t in [qi(0), q(1, 2), q(1, 3), q(5, 6)] {
            let c = cesaro_bound_check(&sys, &g, &one, &one, &t).unwrap();
            assert!(c.holds && c.certified);
        }
        let c = cesaro_bound_check(&sys, &g, &one, &one, &qi(0)).unwrap();
        assert_eq!(c.bounds[0], crate::box_seminorm::seminorm4_by_averages(&g, &sys).unwrap());
        assert!(c.bounds[0].is_positive());
        assert_eq!(c.average, Some(qi(0)));

        assert!(matches!(cesaro_bound_check(&sys, &f, &f, &f, &q(1, 4)), Err(Error::InvalidFrequency { .. })));
        let big = obs(&sys, &[2, 0, 0, 0, 0, 0]);
        assert!(matches!(cesaro_bound_check(&sys, &big, &f, &f, &qi(0)), Err(Error::ObservableOutOfRange(0))));
    }

    /// On `Z₄` with `T₁ = +1`, `T₂ = id`, the sequence `I_n(g, 1, g)` is
    /// constantly `∫g²`. Bounding it by `‖g‖_{T₁,T₃}` (the assignment with
    /// `f₁` and `f₂` exchanged) fails, while `‖g‖_{T₂,T₃}` bounds it.
    #[test]
    fn swapped_pairing_is_not_a_bound() {
        let sys = rotation_system(4, 1, 0).unwrap();
        let g = obs(&sys, &[1, 1, 1, -1]);
        let one = Observable::constant(sys.space(), qi(1));
        let c = cesaro_bound_check(&sys, &g, &one, &g, &qi(0)).unwrap();
        assert_eq!(c.average, Some(qi(1)));
        assert!(c.holds);
        let swapped = seminorm4(&g, &sys.pair(Which::T1, Which::T3)).unwrap().fourth_power;
        assert_eq!(swapped, q(1, 4));
        assert!(pow(&qi(1), 4) > swapped);
    }

    #[test]
    fn projections() {
        let sys = z2xz3();
        let f = Observable::indicator(sys.space(), &[0]).unwrap();
        let p = pairwise_projections(&sys, &f).unwrap();
        assert_eq!(p.g0, f);
        // (x, y) ↦ 3x + y; g₁ averages over x, g₂ over y.
        assert_eq!(p.g1.values(), &[q(1, 2), qi(0), qi(0), q(1, 2), qi(0), qi(0)]);
        assert_eq!(p.g2.values(), &[q(1, 3), q(1, 3), q(1, 3), qi(0), qi(0), qi(0)]);
        for g in [&p.g0, &p.g1, &p.g2] {
            assert_eq!(integrate(g), integrate(&f));
        }
        let s = Arc::new(WeightedSpace::uniform(3).unwrap());
        let id = CommutingSystem::identity(&s);
        let h = obs(&id, &[1, 0, 2]);
        let p = pairwise_projections(&id, &h).unwrap();
        assert!(p.g0 == h && p.g1 == h && p.g2 == h);
        let c = Observable::constant(sys.space(), q(1, 3));
        let p = pairwise_projections(&sys, &c).unwrap();
        assert!(p.g0 == c && p.g1 == c && p.g2 == c);
    }

    #[test]
    fn j_values() {
        let sys = z2xz3();
        let c = Observable::constant(sys.space(), q(2, 3));
        assert_eq!(j_sequence(&sys, &c, 5).unwrap(), pow(&q(2, 3), 3));
        let f = Observable::indicator(sys.space(), &[0]).unwrap();
        assert_eq!(j_sequence(&sys, &f, 0).unwrap(), q(1, 36));
        let chk = j0_lower_bound_check(&sys, &f).unwrap();
        assert_eq!((chk.j0, chk.bound, chk.holds), (q(1, 36), q(1, 1296), true));

        let s = Arc::new(WeightedSpace::uniform(3).unwrap());
        let id = CommutingSystem::identity(&s);
        let h = Observable::new(&s, vec![q(1, 2), qi(1), qi(0)]).unwrap();
        assert_eq!(j_sequence(&id, &h, 3).unwrap(), integrate(&h.mul(&h).unwrap().mul(&h).unwrap()));

        let one_pt = rotation_system(1, 0, 0).unwrap();
        let v = Observable::constant(one_pt.space(), q(3, 5));
        let chk = j0_lower_bound_check(&one_pt, &v).unwrap();
        assert_eq!((chk.j0, chk.bound), (pow(&q(3, 5), 3), pow(&q(3, 5), 4)));
        let bad = Observable::constant(one_pt.space(), qi(2));
        assert!(matches!(j0_lower_bound_check(&one_pt, &bad), Err(Error::ObservableOutOfRange(0))));
    }

    #[test]
    fn diff_bounds() {
        let sys = z2xz3();
        let c = Observable::constant(sys.space(), q(1, 2));
        let d = diff_bound_check(&sys, &c).unwrap();
        assert!(d.average.is_zero() && d.holds);

        let z3 = rotation_system(3, 1, 1).unwrap();
        let f = Observable::indicator(z3.space(), &[0]).unwrap();
        let d = diff_bound_check(&z3, &f).unwrap();
        // Brute force: T₃ = id here, so I(T₁)∨I(T₃) and I(T₂)∨I(T₃) are discrete
        // and g₁ = g₂ = f, while g₀ = 1/3. I_n = (1/3)[3 | n] and J_n = 1/9.
        let i_avg: Q = (0..3).map(|n| brute_intersection(&z3, &[0], n)).sum::<Q>() / qi(3);
        assert_eq!(i_avg, q(1, 9));
        assert_eq!(j_sequence(&z3, &f, 1).unwrap(), q(1, 9));
        assert!(d.average.is_zero());
        assert_eq!(d.seminorms[0], qi(0));
        assert_eq!(d.seminorms[1], qi(0));
        assert!(d.seminorms[2].is_positive());
        assert!(d.holds && d.certified);
        assert!(!d.joins_discrete);
    }

    #[test]
    fn diff_vanishes_when_joins_are_discrete() {
        // T₁ = (+1, id), T₂ = (id, +1) on Z₂ × Z₂, so T₃ = (+1, +1) and I(T₃)
        // is labelled by x + y; each pairwise join separates points.
        let s = Arc::new(WeightedSpace::uniform(4).unwrap());
        let t1 = Transformation::new(vec![2, 3, 0, 1]).unwrap();
        let t2 = Transformation::new(vec![1, 0, 3, 2]).unwrap();
        let sys = crate::dynamics::validate_system(&s, t1, t2).unwrap();
        let f = Observable::new(&s, vec![q(1, 3), qi(1), qi(0), q(1, 2)]).unwrap();
        let d = diff_bound_check(&sys, &f).unwrap();
        assert!(d.joins_discrete);
        assert!(d.average.is_zero() && d.seminorms.iter().all(Zero::is_zero) && d.holds);
    }

    #[test]
    fn product_rotations() {
        let r = product_rotation_khintchine3(2, 3, &[0], &q(1, 1000)).unwrap();
        assert_eq!(r.factor_order, 1);
        assert_eq!(r.i0, q(1, 36));
        assert_eq!(r.i0_bound, q(1, 216));
        assert!(r.i0_holds && r.report.syndetic);

        let all: Vec<usize> = (0..6).collect();
        let r = product_rotation_khintchine3(2, 3, &all, &q(1, 1000)).unwrap();
        assert_eq!(r.report.hits.len(), 6);

        // Brute force on 4 points: g = 2 so both conditionings keep full
        // information and f̂ = f̃ = f; I₀ = μ({(0,0)}) = 1/4.
        let r = product_rotation_khintchine3(2, 2, &[0], &q(1, 1000)).unwrap();
        assert_eq!(r.factor_order, 2);
        assert_eq!(r.f_hat.values(), r.f_tilde.values());
        assert_eq!(r.i0, q(1, 4));
        assert!(r.i0 >= q(1, 64) && r.i0_holds);
    }
}
