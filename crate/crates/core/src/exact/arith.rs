use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ExactRational;
use crate::error::{domain, Result};

/// s_2(m): number of ones in the binary expansion of `m`.
pub fn digit_sum_base2(m: u64) -> u32 {
    m.count_ones()
}

/// ν_2(m!) = m − s_2(m).
pub fn factorial_valuation2(m: u64) -> u64 {
    m - u64::from(digit_sum_base2(m))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// C(n, r), zero outside `0 <= r <= n`.
pub fn binomial(n: u64, r: i64) -> BigInt {
    if r < 0 || r as u64 > n {
        return BigInt::zero();
    }
    let r = (r as u64).min(n - r as u64);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// C(n, r) mod 2 by Lucas: odd iff the bits of `r` are a subset of those of `n`.
pub fn binomial_mod2(n: u64, r: u64) -> u8 {
    u8::from(r & !n == 0 && r <= n)
}

/// Bernoulli numbers B_0, B_1, ... with B_1 = -1/2, shared across threads.
fn bernoulli_table() -> &'static RwLock<Vec<ExactRational>> {
    static TABLE: OnceLock<RwLock<Vec<ExactRational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![ExactRational::one()]))
}

/// Exact Bernoulli number B_n from Σ_{j=0}^{n} C(n+1, j) B_j = 0.
pub fn bernoulli(n: u32) -> ExactRational {
    let n = n as usize;
    if n >= 3 && n % 2 == 1 {
        return ExactRational::zero();
    }
    {
        let table = bernoulli_table().read().expect("bernoulli table poisoned");
        if let Some(b) = table.get(n) {
            return b.clone();
        }
    }
    let mut table = bernoulli_table().write().expect("bernoulli table poisoned");
    while table.len() <= n {
        let m = table.len();
        let value = if m >= 3 && m % 2 == 1 {
            ExactRational::zero()
        } else {
            // B_m = -1/(m+1) Σ_{j<m} C(m+1, j) B_j, skipping the vanishing odd
            // terms; summed over the (small, squarefree) common denominator.
            let den = table
                .iter()
                .fold(BigInt::one(), |acc, b| acc.lcm(b.denom()));
            let mut sum = BigInt::zero();
            let mut binom = BigInt::one();
            for (j, b) in table.iter().enumerate() {
                if !b.is_zero() {
                    sum += &binom * b.numer() * (&den / b.denom());
                }
                binom = binom * (m + 1 - j) / (j + 1);
            }
            ExactRational::new(-sum, den * (m + 1)).expect("nonzero")
        };
        table.push(value);
    }
    table[n].clone()
}

/// r_k = 2ζ(k)/π^k = (−1)^{k/2−1} 2^k B_k / k!, the exact rational standing in
/// for ζ(k) everywhere in the crate.
pub fn zeta_ratio(k: u32) -> Result<ExactRational> {
    if k < 2 || k % 2 == 1 {
        return Err(domain("zeta_ratio", k, "even k >= 2"));
    }
    let sign = if (k / 2 - 1) % 2 == 0 { 1 } else { -1 };
    let num = BigInt::from(sign) * (BigInt::one() << k);
    let factor = ExactRational::new(num, factorial(u64::from(k)))?;
    Ok(bernoulli(k) * factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{valuation, Valuation};

    fn q(n: i64, d: i64) -> ExactRational {
        ExactRational::new(n, d).unwrap()
    }

    fn legendre_valuation2(m: u64) -> u64 {
        let mut total = 0;
        let mut pow = 2;
        while pow <= m {
            total += m / pow;
            pow *= 2;
        }
        total
    }

    fn pascal_row(n: usize) -> Vec<BigInt> {
        let mut row = vec![BigInt::one()];
        for _ in 0..n {
            let mut next = vec![BigInt::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        row
    }

    #[test]
    fn digit_sums() {
        assert_eq!(digit_sum_base2(12), 2);
        assert_eq!(digit_sum_base2(0), 0);
        for l in 0..63 {
            assert_eq!(digit_sum_base2(1 << l), 1);
        }
    }

    #[test]
    fn factorial_valuations() {
        assert_eq!(factorial_valuation2(4), 3);
        assert_eq!(factorial_valuation2(1), 0);
        assert_eq!(factorial_valuation2(0), 0);
        assert_eq!(factorial_valuation2(10), 8);
        assert_eq!(legendre_valuation2(10), 8);
    }

    #[test]
    fn factorial_valuation_matches_legendre_up_to_ten_thousand() {
        for m in 0..=10_000u64 {
            assert_eq!(factorial_valuation2(m), legendre_valuation2(m), "m = {m}");
        }
    }

    #[test]
    fn factorial_valuation_matches_direct_factorial() {
        for m in 1..=200u64 {
            let v = valuation(&ExactRational::from_integer(factorial(m)), 2).unwrap();
            assert_eq!(v, Valuation::Finite(factorial_valuation2(m) as i64));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(pascal_row(24)[11], BigInt::from(2496144));
        assert_eq!(binomial(24, 11), BigInt::from(2496144));
    }

    #[test]
    fn binomial_matches_pascal() {
        for n in 0..60usize {
            let row = pascal_row(n);
            for (r, c) in row.iter().enumerate() {
                assert_eq!(&binomial(n as u64, r as i64), c);
            }
        }
    }

    #[test]
    fn lucas_parity() {
        assert_eq!(binomial_mod2(6, 2), 1);
        assert_eq!(binomial_mod2(6, 1), 0);
        assert_eq!(binomial_mod2(9, 0), 1);
        assert_eq!(binomial_mod2(3, 5), 0);
    }

    #[test]
    fn lucas_parity_matches_binomials_up_to_256() {
        let two = BigInt::from(2);
        for n in 0..=256u64 {
            for r in 0..=n {
                let expected = u8::from(!(binomial(n, r as i64) % &two).is_zero());
                assert_eq!(binomial_mod2(n, r), expected, "C({n},{r})");
            }
        }
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), ExactRational::one());
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(4), q(-1, 30));
        assert_eq!(bernoulli(6), q(1, 42));
        assert_eq!(bernoulli(12), q(-691, 2730));
        assert_eq!(bernoulli(7), ExactRational::zero());
    }

    #[test]
    fn bernoulli_defining_recurrence() {
        for n in 1..40u32 {
            let s: ExactRational = (0..=n)
                .map(|j| bernoulli(j).scale(&binomial(u64::from(n) + 1, i64::from(j))))
                .sum();
            assert!(s.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn bernoulli_concurrent_reads() {
        let handles: Vec<_> = (0..4)
            .map(|t| std::thread::spawn(move || bernoulli(60 + 2 * t)))
            .collect();
        let vals: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for (t, v) in vals.iter().enumerate() {
            assert_eq!(v, &bernoulli(60 + 2 * t as u32));
        }
    }

    #[test]
    fn zeta_ratios() {
        assert_eq!(zeta_ratio(2).unwrap(), q(1, 3));
        assert_eq!(zeta_ratio(4).unwrap(), q(1, 45));
        assert_eq!(zeta_ratio(6).unwrap(), q(2, 945));
        assert!(zeta_ratio(5).is_err());
        assert!(zeta_ratio(0).is_err());
    }

    #[test]
    fn zeta_ratio_valuations() {
        for k in (2..=200u32).step_by(2) {
            let r = zeta_ratio(k).unwrap();
            assert_eq!(valuation(&bernoulli(k), 2).unwrap(), Valuation::Finite(-1), "B_{k}");
            let direct = bernoulli(k).scale(&(BigInt::one() << k));
            let direct = direct.checked_div(&ExactRational::from_integer(factorial(u64::from(k)))).unwrap();
            assert_eq!(valuation(&r, 2).unwrap(), valuation(&direct, 2).unwrap());
            // ν_2(ζ(k)/π^k) = s_2(k) − 2, which vanishes exactly when s_2(k) = 2
            let half = r.checked_div(&q(2, 1)).unwrap();
            let expected = i64::from(digit_sum_base2(u64::from(k))) - 2;
            assert_eq!(valuation(&half, 2).unwrap(), Valuation::Finite(expected), "k = {k}");
        }
        for l in 0..8 {
            let k = 12 << l;
            let half = zeta_ratio(k).unwrap().checked_div(&q(2, 1)).unwrap();
            assert_eq!(valuation(&half, 2).unwrap(), Valuation::Finite(0));
        }
    }
}
