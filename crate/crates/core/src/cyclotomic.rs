//! Exact arithmetic in `Q(ζ_n)`, `ζ_n = e(1/n)`, with elements reduced
//! modulo the `n`-th cyclotomic polynomial. Used for character-weighted
//! averages `Σ e(nt) I_n` with rational `t`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{from_f64, Q};

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    // x^n − 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![BigInt::zero(); n + 1];
    poly[0] = -BigInt::one();
    poly[n] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = divide_exact(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn divide_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

#[derive(Debug, Clone)]
pub struct CyclotomicField {
    n: usize,
    modulus: Vec<BigInt>,
}

/// Element of `Q(ζ_n)` in the power basis `1, ζ, …, ζ^{φ(n)−1}`.
pub type Element = Vec<Q>;

impl CyclotomicField {
    pub fn new(n: usize) -> Self {
        Self { n, modulus: cyclotomic_polynomial(n) }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn zero(&self) -> Element {
        vec![Q::zero(); self.degree()]
    }

    pub fn from_rational(&self, c: Q) -> Element {
        let mut e = self.zero();
        e[0] = c;
        e
    }

    /// Reduces an arbitrary polynomial in `ζ` modulo `Φ_n` (monic).
    pub fn reduce(&self, mut poly: Vec<Q>) -> Element {
        let deg = self.degree();
        while poly.len() > deg {
            let top = poly.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = poly.len() - deg;
            for (j, mj) in self.modulus[..deg].iter().enumerate() {
                poly[shift + j] -= &top * Q::from_integer(mj.clone());
            }
        }
        poly.resize(deg, Q::zero());
        poly
    }

    /// `Σ coeffs[k] ζ^k` for `k` taken modulo `n`.
    pub fn from_powers(&self, coeffs: &[Q]) -> Element {
        let mut poly = vec![Q::zero(); self.n];
        for (k, c) in coeffs.iter().enumerate() {
            poly[k % self.n] += c;
        }
        self.reduce(poly)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut poly = vec![Q::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                poly[i + j] += x * y;
            }
        }
        self.reduce(poly)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self, a: &Element) -> Element {
        let mut poly = vec![Q::zero(); self.n];
        for (k, c) in a.iter().enumerate() {
            poly[(self.n - k) % self.n] += c;
        }
        self.reduce(poly)
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        a.iter().all(Zero::is_zero)
    }

    /// Real part as `(approximation, error bound)`: the exact real part lies
    /// within `error` of `approximation`. Each cosine is taken from `f64` and
    /// charged an error of `1e-14`.
    pub fn real_part_enclosure(&self, a: &Element) -> (Q, Q) {
        let delta = from_f64(1e-14);
        let mut value = Q::zero();
        let mut err = Q::zero();
        for (k, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cos = rational_cosine(k, self.n);
            match cos {
                Some(v) => value += c * v,
                None => {
                    let angle = 2.0 * std::f64::consts::PI * k as f64 / self.n as f64;
                    value += c * from_f64(angle.cos());
                    err += c.abs() * &delta;
                }
            }
        }
        (value, err)
    }

    pub fn real_part_f64(&self, a: &Element) -> f64 {
        a.iter()
            .enumerate()
            .map(|(k, c)| crate::rational::to_f64(c) * (2.0 * std::f64::consts::PI * k as f64 / self.n as f64).cos())
            .sum()
    }
}

/// `cos(2πk/n)` when it is rational.
fn rational_cosine(k: usize, n: usize) -> Option<Q> {
    if (4 * k).is_multiple_of(n) {
        return Some(match (4 * k / n) % 4 {
            0 => Q::one(),
            2 => -Q::one(),
            _ => Q::zero(),
        });
    }
    if (6 * k).is_multiple_of(n) {
        let half = Q::new(1.into(), 2.into());
        return Some(match (6 * k / n) % 6 {
            1 | 5 => half,
            _ => -half,
        });
    }
    None
}

/// Sign of a real element: `Some(ordering vs 0)` when certified.
pub fn certified_sign(field: &CyclotomicField, a: &Element) -> Option<std::cmp::Ordering> {
    if field.is_zero(a) {
        return Some(std::cmp::Ordering::Equal);
    }
    let (value, err) = field.real_part_enclosure(a);
    if value > err {
        Some(std::cmp::Ordering::Greater)
    } else if -&value > err {
        Some(std::cmp::Ordering::Less)
    } else {
        None
    }
}
