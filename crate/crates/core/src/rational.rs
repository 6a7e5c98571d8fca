//! Exact rational helpers shared by every module.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn pow(base: &Q, exp: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

pub fn to_f64(x: &Q) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Very large numerator/denominator: scale down through the bit lengths.
    let n = x.numer();
    let d = x.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
    let ns = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let ds = (d >> shift).to_f64().unwrap_or(f64::NAN);
    ns / ds
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

/// Parses `p/q` or `p` into a normalized rational.
pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

/// Normalized `p/q` (or `p` for integers), denominator positive.
pub fn format(x: &Q) -> String {
    x.to_string()
}

fn exact_int_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// The exact fourth root when `x` is the fourth power of a rational.
pub fn exact_fourth_root(x: &Q) -> Option<Q> {
    let n = exact_int_root(x.numer(), 4)?;
    let d = exact_int_root(x.denom(), 4)?;
    Some(Q::new(n, d))
}

/// Rational enclosure `lo <= x^(1/4) <= hi` with `hi - lo <= width`.
pub fn fourth_root_enclosure(x: &Q, width: &Q) -> (Q, Q) {
    assert!(!x.is_negative(), "fourth root of a negative value");
    if let Some(r) = exact_fourth_root(x) {
        return (r.clone(), r);
    }
    let guess = to_f64(x).powf(0.25);
    let slack = guess.abs() * 1e-9 + 1e-300;
    let mut lo = from_f64((guess - slack).max(0.0));
    let mut hi = from_f64(guess + slack);
    if pow(&lo, 4) > *x {
        lo = Q::zero();
    }
    while pow(&hi, 4) < *x {
        hi = &hi * qi(2) + Q::one();
    }
    let two = qi(2);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        // keep the representation small
        let mid = round_to_bits(&mid, 96).max(lo.clone()).min(hi.clone());
        if mid == lo || mid == hi {
            let m = (&lo + &hi) / &two;
            if pow(&m, 4) <= *x {
                lo = m
            } else {
                hi = m
            }
            continue;
        }
        if pow(&mid, 4) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn round_to_bits(x: &Q, bits: u32) -> Q {
    let scale = BigInt::one() << bits;
    let scaled = (x * Q::from_integer(scale.clone())).floor();
    Q::new(scaled.to_integer(), scale)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
