//! Expected dimensions of Fano schemes of `r`-planes on `(q; a)`-tic complete
//! intersections, and the numerical side conditions built from them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::multiprofile::MultiProfile;
use crate::poset::pointed_line_count;
use crate::profile::{PrimePower, Profile};

/// `prod_j C(a_j + r, r)`, the number of monomials spanning `S^a` in `r + 1`
/// variables.
pub fn monomial_count(a: &Profile, r: u64) -> BigUint {
    a.coeffs()
        .iter()
        .map(|&c| binomial(c as u64 + r, r))
        .product()
}

/// `sum_{a in a} prod_j C(a_j + r, r)` with multiplicity.
pub fn equation_count(a: &MultiProfile, r: u64) -> BigUint {
    a.iter()
        .map(|(p, m)| monomial_count(p, r) * BigUint::from(m))
        .sum()
}

fn check_dims(n: u64, r: u64) -> Result<()> {
    if r > n {
        return Err(Error::InvalidArgument(format!(
            "plane dimension r = {r} exceeds ambient dimension n = {n}"
        )));
    }
    Ok(())
}

/// `δ(n, a, r) = (r + 1)(n - r) - sum prod_j C(a_j + r, r)`.
pub fn delta(n: u64, a: &MultiProfile, r: u64) -> Result<BigInt> {
    check_dims(n, r)?;
    let grassmannian = BigInt::from(r + 1) * BigInt::from(n - r);
    Ok(grassmannian - BigInt::from(equation_count(a, r)))
}

/// `δ₋ = min(δ, n - 2r - #a)`.
pub fn delta_minus(n: u64, a: &MultiProfile, r: u64) -> Result<BigInt> {
    let d = delta(n, a, r)?;
    let bound = BigInt::from(n) - BigInt::from(2 * r) - BigInt::from(a.len());
    Ok(d.min(bound))
}

/// True for multi-profiles made of monomials `t^m` plus at most one `2t^k`,
/// where the signs of `δ` and `δ₋` may disagree.
pub fn is_exceptional_shape(a: &MultiProfile) -> bool {
    let mut doubles = 0;
    for (p, m) in a.iter() {
        let Some(deg) = p.degree() else { continue };
        let lead = p.coeff(deg);
        let monomial = p.coeffs()[..deg].iter().all(|&c| c == 0);
        match (monomial, lead) {
            (true, 1) => {}
            (true, 2) => doubles += m,
            _ => return false,
        }
    }
    doubles <= 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FanoVerdict {
    /// `δ₋ < 0`: no `r`-planes on a general member.
    EmptyForGeneral,
    /// `δ₋ = 0`: nonempty of dimension `δ`.
    NonemptyExpectedDim,
    /// `δ₋ > 0`: nonempty of dimension `δ` and connected.
    NonemptyConnected,
}

impl FanoVerdict {
    pub fn from_delta_minus(dm: &BigInt) -> Self {
        if dm.is_negative() {
            FanoVerdict::EmptyForGeneral
        } else if dm.is_zero() {
            FanoVerdict::NonemptyExpectedDim
        } else {
            FanoVerdict::NonemptyConnected
        }
    }
}

/// `γ(a, r, q) = (1 / (r + 1)) sum_a a(q) prod_j C(a_j + r, r)`.
pub fn gamma(a: &MultiProfile, r: u64, q: PrimePower) -> BigRational {
    let total: BigUint = a
        .iter()
        .map(|(p, m)| p.numerical_degree(q) * monomial_count(p, r) * BigUint::from(m))
        .sum();
    BigRational::new(BigInt::from(total), BigInt::from(r + 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    #[serde(serialize_with = "crate::serde_big::rational")]
    pub value: BigRational,
    pub integral: bool,
    /// `γ - n - 1`, the Plücker exponent of the dualizing sheaf.
    #[serde(serialize_with = "crate::serde_big::opt_bigint")]
    pub canonical_exponent: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanoReport {
    pub n: u64,
    pub r: u64,
    #[serde(serialize_with = "crate::serde_big::bigint")]
    pub delta: BigInt,
    #[serde(serialize_with = "crate::serde_big::bigint")]
    pub delta_minus: BigInt,
    pub verdict: FanoVerdict,
    pub gamma: Option<GammaReport>,
    /// Only defined for `r >= 1`.
    pub covered_by_planes: Option<bool>,
}

/// Full numerical report. `γ` needs `q`; every other field is independent of it.
pub fn fano_verdict(n: u64, a: &MultiProfile, r: u64, q: Option<PrimePower>) -> Result<FanoReport> {
    check_dims(n, r)?;
    if let Some(q) = q {
        if let Some(bad) = a.profiles().find(|p| !p.is_profile(q)) {
            return Err(Error::NotAProfile {
                profile: bad.to_string(),
                q: q.q(),
            });
        }
    }
    let d = delta(n, a, r)?;
    let dm = delta_minus(n, a, r)?;
    let gamma = q.map(|q| {
        let value = gamma(a, r, q);
        let integral = value.is_integer();
        let canonical_exponent =
            integral.then(|| value.to_integer() - BigInt::from(n) - BigInt::from(1u8));
        GammaReport {
            value,
            integral,
            canonical_exponent,
        }
    });
    Ok(FanoReport {
        n,
        r,
        verdict: FanoVerdict::from_delta_minus(&dm),
        delta: d,
        delta_minus: dm,
        gamma,
        covered_by_planes: (r >= 1).then(|| covered_by_planes(n, a, r)).transpose()?,
    })
}

fn line_threshold(a: &MultiProfile, r: u64) -> BigInt {
    BigInt::from(2 * r) + BigInt::from(pointed_line_count(a)) - BigInt::from(1u8)
}

/// `n >= max(2r - 1 + #a_1, r + (sum prod C(a_j + r, r) - #a) / r)`, compared
/// exactly.
pub fn covered_by_planes(n: u64, a: &MultiProfile, r: u64) -> Result<bool> {
    if r == 0 {
        return Err(Error::InvalidArgument("covering by planes needs r >= 1".into()));
    }
    let n = BigInt::from(n);
    let r_big = BigInt::from(r);
    let lines = line_threshold(a, r);
    let numerator = &r_big * &r_big + BigInt::from(equation_count(a, r)) - BigInt::from(a.len());
    Ok(n >= lines && &n * &r_big >= numerator)
}

/// The threshold of [`covered_by_planes`] as the least admissible `n`.
pub fn covering_threshold(a: &MultiProfile, r: u64) -> Result<BigInt> {
    if r == 0 {
        return Err(Error::InvalidArgument("covering by planes needs r >= 1".into()));
    }
    let r_big = BigInt::from(r);
    let lines = line_threshold(a, r);
    let numerator = &r_big * &r_big + BigInt::from(equation_count(a, r)) - BigInt::from(a.len());
    Ok(lines.max(Integer::div_ceil(&numerator, &r_big)))
}

/// The parameter space of `(q; a)`-tics in `P^n` dominates the Hilbert scheme
/// of complete intersections exactly when `#a <= n`.
pub fn dominance(n: u64, a: &MultiProfile) -> bool {
    a.len() <= n as u128
}

/// Dimension `n - #a` of a general member, when `a` is reduced and the
/// parameter space is dominant.
pub fn general_smooth_dim(n: u64, a: &MultiProfile) -> Option<u128> {
    let reduced = a.profiles().all(|p| !p.is_nonreduced());
    (reduced && dominance(n, a)).then(|| n as u128 - a.len())
}
