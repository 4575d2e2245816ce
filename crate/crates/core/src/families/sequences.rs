//! Exponent sequences `n ↦ b_n` of families `I_n = m^{b_n}`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::rational::{ceil_int, Q};

/// `σ(m)`: starts at 2 and drops by `1/2^k` at `m = 2^{2^k}`, `k >= 1`.
pub fn sigma(m: u64) -> Q {
    assert!(m >= 1, "σ is defined for m >= 1");
    let mut s = Q::from_integer(BigInt::from(2));
    let mut k = 1u32;
    // 2^{2^k} <= m requires 2^k <= 63 for u64 inputs.
    while (1u64 << k) < 64 && (1u64 << (1u64 << k)) <= m {
        s -= Q::new(BigInt::one(), BigInt::one() << k);
        k += 1;
    }
    s
}

/// `⌈m σ(m)⌉`, with `b_0 = 0`.
pub fn sigma_exponent(m: u64) -> u64 {
    if m == 0 {
        return 0;
    }
    let v = Q::from_integer(BigInt::from(m)) * sigma(m);
    ceil_int(&v).to_u64().expect("sigma exponent fits u64")
}

/// `a_0 = 0`, `a_1 = 1`, and `a_i = s` for `i = 2^s + r`, `0 <= r < 2^s`.
pub fn log_increment(i: u64) -> u64 {
    match i {
        0 => 0,
        1 => 1,
        _ => 63 - i.leading_zeros() as u64,
    }
}

/// `b_n = n + a_n`.
pub fn log_exponent(n: u64) -> u64 {
    n + log_increment(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1), q(2, 1));
        assert_eq!(sigma(3), q(2, 1));
        assert_eq!(sigma(4), q(3, 2));
        assert_eq!(sigma(15), q(3, 2));
        assert_eq!(sigma(16), q(5, 4));
        assert_eq!(sigma(255), q(5, 4));
        assert_eq!(sigma(256), q(9, 8));
        assert_eq!(sigma(65535), q(9, 8));
        assert_eq!(sigma(65536), q(17, 16));
        assert_eq!(sigma(u64::MAX), q(33, 32));
    }

    #[test]
    fn sigma_exponents() {
        let b: Vec<u64> = (1..=5).map(sigma_exponent).collect();
        assert_eq!(b, vec![2, 4, 6, 6, 8]);
        assert_eq!(sigma_exponent(15), 23);
        assert_eq!(sigma_exponent(16), 20);
        assert_eq!(sigma_exponent(255), 319);
        assert_eq!(sigma_exponent(256), 288);
        assert_eq!(sigma_exponent(65535), 73727);
        assert_eq!(sigma_exponent(65536), 69632);
    }

    #[test]
    fn log_exponents() {
        assert_eq!(log_exponent(2), 3);
        assert_eq!(log_exponent(4), 6);
        assert_eq!(log_exponent(8), 11);
        assert_eq!(log_exponent(1), 2);
        assert_eq!(log_exponent(0), 0);
        assert_eq!(log_increment(7), 2);
        assert_eq!(log_increment(1023), 9);
        assert_eq!(log_increment(1024), 10);
    }

    #[test]
    fn sigma_exponents_are_subadditive() {
        for m in 1..300u64 {
            for n in 1..300u64 {
                assert!(sigma_exponent(m) + sigma_exponent(n) >= sigma_exponent(m + n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn log_increments_bracket_log2() {
        for n in 2..5000u64 {
            let a = log_increment(n) as f64;
            let l = (n as f64).log2();
            assert!(l - 1.0 <= a && a <= l, "n={n}");
            assert!(log_increment(n + 1) >= log_increment(n));
        }
        for m in 0..200u64 {
            for n in 0..200u64 {
                assert!(log_increment(m) + log_increment(n) >= log_increment(m + n));
            }
        }
    }
}
