//! Exact rational helpers and comparisons of sums of `d`-th roots.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi<T: Into<BigInt>>(n: T) -> Q {
    Q::from_integer(n.into())
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Ratios whose parts overflow f64 on their own.
        let (n, d) = (x.numer(), x.denom());
        let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as usize;
        (n >> shift).to_f64().unwrap_or(f64::NAN) / (d >> shift).to_f64().unwrap_or(f64::NAN)
    })
}

pub fn pow(x: &Q, e: u32) -> Q {
    num_traits::pow(x.clone(), e as usize)
}

pub fn ceil_int(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

/// Formats as `p/q`, or `p` for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `0.25`.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().ok()? };
        let f: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = int.abs() * &scale + f;
        let v = Q::new(mag, scale);
        return Some(if neg { -v } else { v });
    }
    s.parse::<BigInt>().ok().map(Q::from_integer)
}

/// Rational bracket `lo <= x^{1/d} <= hi` of width at most `2^-bits` times
/// the denominator scale.
pub fn root_bracket(x: &Q, d: u32, bits: u32) -> (Q, Q) {
    assert!(!x.is_negative(), "root of a negative rational");
    if x.is_zero() {
        return (Q::zero(), Q::zero());
    }
    let p = x.numer().to_biguint().expect("nonnegative");
    let qd = x.denom().to_biguint().expect("positive");
    let scale = BigUint::one() << bits;
    let radicand = p * qd.pow(d - 1) * scale.pow(d);
    let r = radicand.nth_root(d);
    let exact = r.pow(d) == radicand;
    let den = BigInt::from_biguint(Sign::Plus, qd * &scale);
    let lo = Q::new(BigInt::from_biguint(Sign::Plus, r.clone()), den.clone());
    let hi = if exact { lo.clone() } else { Q::new(BigInt::from_biguint(Sign::Plus, r + 1u32), den) };
    (lo, hi)
}

/// Exact `d`-th root if `x` is a `d`-th power of a rational.
pub fn exact_root(x: &Q, d: u32) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().to_biguint()?;
    let m = x.denom().to_biguint()?;
    let rn = n.nth_root(d);
    let rm = m.nth_root(d);
    (rn.pow(d) == n && rm.pow(d) == m)
        .then(|| Q::new(BigInt::from_biguint(Sign::Plus, rn), BigInt::from_biguint(Sign::Plus, rm)))
}

/// Sign of `a^{1/d} + b^{1/d} - c^{1/d}` for nonnegative rationals, decided
/// without floating point. Closed forms for `d <= 3`; bracketing above.
pub fn compare_root_sum(a: &Q, b: &Q, c: &Q, d: u32) -> Ordering {
    assert!(d >= 1);
    assert!(!a.is_negative() && !b.is_negative() && !c.is_negative());
    match d {
        1 => (a + b).cmp(c),
        2 => {
            // sqrt(a) + sqrt(b) >= sqrt(c)  <=>  2 sqrt(ab) >= c - a - b
            let s = c - a - b;
            let four_ab = Q::from_integer(4.into()) * a * b;
            if s.is_negative() {
                Ordering::Greater
            } else if s.is_zero() {
                if four_ab.is_zero() { Ordering::Equal } else { Ordering::Greater }
            } else {
                four_ab.cmp(&(&s * &s))
            }
        }
        3 => {
            // u^3 + v^3 - w^3 + 3uvw = (u + v - w) * (nonnegative, zero only at 0)
            if a.is_zero() && b.is_zero() && c.is_zero() {
                return Ordering::Equal;
            }
            let t = c - a - b;
            if t.is_negative() {
                return Ordering::Greater;
            }
            let lhs = Q::from_integer(27.into()) * a * b * c;
            lhs.cmp(&(&t * &t * &t))
        }
        _ => {
            if let (Some(ra), Some(rb), Some(rc)) = (exact_root(a, d), exact_root(b, d), exact_root(c, d)) {
                return (ra + rb).cmp(&rc);
            }
            let mut bits = 32;
            loop {
                let (al, ah) = root_bracket(a, d, bits);
                let (bl, bh) = root_bracket(b, d, bits);
                let (cl, ch) = root_bracket(c, d, bits);
                if &al + &bl > ch {
                    return Ordering::Greater;
                }
                if ah + bh < cl {
                    return Ordering::Less;
                }
                if bits >= 4096 {
                    // Not a perfect-power configuration and indistinguishable at
                    // this precision.
                    return Ordering::Equal;
                }
                bits *= 2;
            }
        }
    }
}

/// `a^{1/d} + b^{1/d} - c^{1/d}` in floating point, for reporting slack.
pub fn root_sum_slack(a: &Q, b: &Q, c: &Q, d: u32) -> f64 {
    let r = |x: &Q| to_f64(x).max(0.0).powf(1.0 / d as f64);
    r(a) + r(b) - r(c)
}

/// Exact outcome of `first^{1/d} + second^{1/d} >= combined^{1/d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSumReport {
    pub dim: u32,
    pub first: Q,
    pub second: Q,
    pub combined: Q,
    /// Sign of the left side minus the right side.
    pub ordering: Ordering,
    pub slack: f64,
}

impl RootSumReport {
    pub fn decide(first: Q, second: Q, combined: Q, dim: u32) -> Self {
        Self {
            dim,
            ordering: compare_root_sum(&first, &second, &combined, dim),
            slack: root_sum_slack(&first, &second, &combined, dim),
            first,
            second,
            combined,
        }
    }

    pub fn holds(&self) -> bool {
        self.ordering != Ordering::Less
    }

    pub fn is_equality(&self) -> bool {
        self.ordering == Ordering::Equal
    }
}

pub fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}
