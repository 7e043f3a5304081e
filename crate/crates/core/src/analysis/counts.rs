//! Closed-form counts of minimum-weight failing configurations, evaluated in
//! exact integer arithmetic.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use serde::Serialize;

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn pow(base: u32, exp: usize) -> BigInt {
    num::pow(BigInt::from(base), exp)
}

/// `(M/2) * sum` with the halving checked to be exact.
fn half_m_times(m: usize, sum: BigInt) -> BigInt {
    let twice = sum * m;
    assert!(
        (&twice % 2u32).is_zero(),
        "count for M={m} is not an integer"
    );
    twice / 2u32
}

/// Weight-`M` failures of the restricted decoder.
pub fn n_fail_restricted(m: usize) -> BigInt {
    assert!(m >= 1, "M must be positive");
    let sum = (0..=m / 2)
        .map(|k| binom(m, k) * binom(m - k, k) * pow(4, m - k))
        .sum();
    half_m_times(m, sum)
}

/// Weight-`M` failures of a decoder that corrects every row containing a
/// diagonal pair.
pub fn n_fail_unified(m: usize) -> BigInt {
    assert!(m >= 1, "M must be positive");
    let sum = (0..=m / 2)
        .map(|k| binom(m, k) * binom(m - k, k) * pow(2, k) * pow(4, m - 2 * k))
        .sum();
    half_m_times(m, sum)
}

/// Contribution of `i` adjacent diagonal pairs and `j` top/bottom edge pairs
/// to the boundary count, over both boundary rows.
///
/// Panics unless `1 <= i` and `4i + 2j <= M`.
pub fn n_boundary_term(m: usize, i: usize, j: usize) -> BigInt {
    assert!(
        i >= 1 && 4 * i + 2 * j <= m,
        "(i={i}, j={j}) not admissible for M={m}"
    );
    let term = binom(m - i, i) * binom(m - 2 * i, j) * binom(m - 2 * i - j, m - 4 * i - 2 * j);
    let expanded = &term * pow(4, i) * pow(2, j) * pow(4, m - 4 * i - 2 * j);
    // the same term written as 4^(M - 3i - 3j/2) must be integral and agree
    let exp2 = 2 * m - 6 * i - 3 * j;
    assert!(
        2 * m >= 6 * i + 3 * j,
        "4^(M-3i-3j/2) is fractional at (M={m}, i={i}, j={j})"
    );
    assert_eq!(expanded, term * pow(2, exp2));
    expanded
}

/// Extra boundary failures of the correlated decoder, both boundary rows.
pub fn n_boundary(m: usize) -> BigInt {
    assert!(m >= 1, "M must be positive");
    let mut total = BigInt::zero();
    for i in 1..=m / 4 {
        for j in 0..=(m - 4 * i) / 2 {
            total += n_boundary_term(m, i, j);
        }
    }
    total
}

pub fn n_fail_correlated(m: usize) -> BigInt {
    n_fail_unified(m) + n_boundary(m)
}

/// `N_b / N_uni` as an exact fraction.
pub fn boundary_ratio(m: usize) -> BigRational {
    BigRational::new(n_boundary(m), n_fail_unified(m))
}

/// All closed-form counts at `M = d/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailureCountTable {
    pub d: usize,
    pub m: usize,
    #[serde(serialize_with = "as_string")]
    pub restricted: BigInt,
    #[serde(serialize_with = "as_string")]
    pub unified: BigInt,
    #[serde(serialize_with = "as_string")]
    pub boundary: BigInt,
    #[serde(serialize_with = "as_string")]
    pub correlated: BigInt,
    #[serde(serialize_with = "as_string")]
    pub ratio: BigRational,
    pub ratio_f64: f64,
}

fn as_string<T: std::fmt::Display, S: serde::Serializer>(
    x: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

impl FailureCountTable {
    /// Counts at an even distance `d >= 2`.
    pub fn for_distance(d: usize) -> crate::Result<Self> {
        if d < 2 || d % 2 != 0 {
            return Err(crate::Error::InvalidDistance {
                distance: d,
                reason: "must be even and at least 2",
            });
        }
        let m = d / 2;
        let ratio = boundary_ratio(m);
        let ratio_f64 = ratio_to_f64(&ratio);
        Ok(FailureCountTable {
            d,
            m,
            restricted: n_fail_restricted(m),
            unified: n_fail_unified(m),
            boundary: n_boundary(m),
            correlated: n_fail_correlated(m),
            ratio,
            ratio_f64,
        })
    }
}

/// Float value of a fraction whose parts may exceed `f64` range.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let shift = r.denom().bits().saturating_sub(60);
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}
