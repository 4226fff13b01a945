//! Distinct-degree factorization over `F_p` for small word-sized primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Dense polynomial over `F_p`, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut f = Self {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        f.trim();
        f
    }

    pub fn from_integers(p: u64, coeffs: &[BigInt]) -> Self {
        let modulus = BigInt::from(p);
        Self::new(
            p,
            coeffs
                .iter()
                .map(|c| c.mod_floor(&modulus).to_u64().expect("reduced below p"))
                .collect(),
        )
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        // Fermat: a^(p-2)
        let mut result = 1u64;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mulmod(result, base);
            }
            base = self.mulmod(base, base);
            e >>= 1;
        }
        result
    }

    fn with_coeffs(&self, coeffs: Vec<u64>) -> Self {
        let mut f = Self { p: self.p, coeffs };
        f.trim();
        f
    }

    pub fn monic(&self) -> Self {
        let Some(&lead) = self.coeffs.last() else {
            return self.clone();
        };
        let inv = self.inv(lead);
        self.with_coeffs(self.coeffs.iter().map(|&c| self.mulmod(c, inv)).collect())
    }

    pub fn derivative(&self) -> Self {
        self.with_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mulmod(c, i as u64 % self.p))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        self.with_coeffs(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).copied().unwrap_or(0);
                    let b = other.coeffs.get(i).copied().unwrap_or(0);
                    (a + self.p - b) % self.p
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.with_coeffs(Vec::new());
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + self.mulmod(a, b)) % self.p;
            }
        }
        self.with_coeffs(out)
    }

    /// `(quotient, remainder)`; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv = self.inv(divisor.coeffs[dd]);
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (self.with_coeffs(Vec::new()), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = self.mulmod(rem[i], inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + self.p - self.mulmod(c, d)) % self.p;
            }
        }
        (self.with_coeffs(quot), self.with_coeffs(rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut result = self.with_coeffs(vec![1]).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        result
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => {
                let d = self.derivative();
                !d.is_zero() && self.gcd(&d).degree() == Some(0)
            }
        }
    }
}

/// Degrees of the irreducible factors of a squarefree polynomial, ascending.
///
/// Peels off `gcd(f, x^{p^i} − x)` for `i = 1, 2, …`; each such gcd is the
/// product of all irreducible factors of degree `i`.
pub fn distinct_degree_pattern(f: &FpPoly) -> Vec<usize> {
    let mut f = f.monic();
    let p = f.p;
    let x = f.with_coeffs(vec![0, 1]);
    let mut h = x.clone();
    let mut degrees = Vec::new();
    let mut i = 1;
    while let Some(n) = f.degree() {
        if n < 2 * i {
            if n > 0 {
                degrees.push(n);
            }
            break;
        }
        h = h.pow_mod(p, &f);
        let g = f.gcd(&h.sub(&x));
        let gd = g.degree().unwrap_or(0);
        if gd > 0 {
            degrees.extend(std::iter::repeat_n(i, gd / i));
            f = f.div_rem(&g).0;
            h = h.rem(&f);
        }
        i += 1;
    }
    degrees
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        FpPoly::new(p, c.to_vec())
    }

    #[test]
    fn basic_arithmetic() {
        let a = fp(7, &[1, 1]);
        let b = fp(7, &[6, 1]);
        assert_eq!(a.mul(&b), fp(7, &[6, 0, 1]));
        let (q, r) = fp(7, &[6, 0, 1]).div_rem(&a);
        assert_eq!(q, b);
        assert!(r.is_zero());
        assert_eq!(fp(5, &[2, 4]).monic(), fp(5, &[3, 1]));
    }

    #[test]
    fn squarefree_detection() {
        assert!(fp(7, &[1, 0, 1]).is_squarefree());
        assert!(!fp(7, &[1, 2, 1]).is_squarefree());
        // x^3 over F_3 has zero derivative
        assert!(!fp(3, &[0, 0, 0, 1]).is_squarefree());
    }

    #[test]
    fn ddf_patterns() {
        assert_eq!(distinct_degree_pattern(&fp(3, &[1, 0, 1])), vec![2]);
        assert_eq!(distinct_degree_pattern(&fp(5, &[1, 0, 1])), vec![1, 1]);
        // x^4 + 1 mod 3 = (x^2+x+2)(x^2+2x+2)
        assert_eq!(distinct_degree_pattern(&fp(3, &[1, 0, 0, 0, 1])), vec![2, 2]);
        // x^5 - x = x(x-1)(x-2)(x-3)(x-4) mod 5
        assert_eq!(distinct_degree_pattern(&fp(5, &[0, 4, 0, 0, 0, 1])), vec![1; 5]);
        // x^3 + x + 1 irreducible over F_2
        assert_eq!(distinct_degree_pattern(&fp(2, &[1, 1, 0, 1])), vec![3]);
    }

    #[test]
    fn ddf_on_product_of_known_factors() {
        // (x^2+1)(x^3+x+1)(x+3) over F_7: x^2+1 and x^3+x+1 irreducible mod 7
        let f = fp(7, &[1, 0, 1]).mul(&fp(7, &[1, 1, 0, 1])).mul(&fp(7, &[3, 1]));
        assert_eq!(distinct_degree_pattern(&f), vec![1, 2, 3]);
    }
}
