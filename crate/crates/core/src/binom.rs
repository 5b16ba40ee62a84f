//! Exact binomial coefficients.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` by the multiplicative formula; every partial product is itself a
/// binomial coefficient, so each division is exact.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(k + r, r)` for `k = 0..=max_k`: the number of degree-`k` monomials in
/// `r + 1` variables. One row is built in `max_k` small multiply/divide steps.
pub fn monomial_counts(r: u64, max_k: u32) -> Vec<BigUint> {
    let mut row = Vec::with_capacity(max_k as usize + 1);
    let mut acc = BigUint::one();
    row.push(acc.clone());
    for k in 1..=max_k as u64 {
        acc *= r + k;
        acc /= k;
        row.push(acc.clone());
    }
    row
}
