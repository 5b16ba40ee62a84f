//! The three orderings on profiles.
//!
//! * `a ≼ b`: coefficientwise comparison.
//! * `a ⊑ b`: `a(q) = b(q)` and `S^a(V^) ⊆ S^b(V^)` inside `Sym^{a(q)}(V^)`
//!   for every finite-dimensional `V`.
//! * `a ⇝ b`: some `a'` in `Z≥0[t]` has `a ≼ a'` and `a' ⊑ b`.
//!
//! # Deciding `⊑` at one dimension
//!
//! Write an exponent vector `e = sum_j q^j e_j` with `|e_j| = a_j` column by
//! column: coordinate `i` carries the tuple `(e_{0,i}, e_{1,i}, ...)`. The
//! nonzero columns form a multiset of nonzero vectors summing to
//! `(a_0, a_1, ...)`, so there are at most `a(1)` of them. Decomposability is
//! unchanged by permuting coordinates or by adding zero coordinates. Hence the
//! comparison for any `dim V >= a(1)` is the same as the comparison at
//! `m* = a(1)`, and smaller dimensions only see a subset of the same orbits.
//! The procedure below enumerates those column multisets (vector partitions
//! of the coefficient vector of `a`) and tests each resulting orbit against
//! `b`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::profile::{PrimePower, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Prec,
    Contain,
    Squig,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Prec => "prec",
            Relation::Contain => "contain",
            Relation::Squig => "squig",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// First coefficient index with `a_j > b_j`.
    Index(usize),
    /// `a(q) != b(q)`.
    DegreeMismatch { left: BigUint, right: BigUint },
    /// An `a`-decomposable exponent vector that is not `b`-decomposable, at
    /// dimension `a(1)`.
    Exponent(Vec<u64>),
    /// The intermediate `a'` with `a ≼ a' ⊑ b`.
    Intermediate(Profile),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Index(j) => write!(f, "j={j}"),
            Witness::DegreeMismatch { left, right } => write!(f, "degree {left} != {right}"),
            Witness::Exponent(e) => {
                let parts: Vec<String> = e.iter().map(u64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Witness::Intermediate(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderVerdict {
    pub relation: Relation,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl OrderVerdict {
    fn yes(relation: Relation, witness: Option<Witness>) -> Self {
        OrderVerdict {
            relation,
            holds: true,
            witness,
        }
    }

    fn no(relation: Relation, witness: Witness) -> Self {
        OrderVerdict {
            relation,
            holds: false,
            witness: Some(witness),
        }
    }
}

/// `a ≼ b`, missing coefficients read as zero.
pub fn prec(a: &Profile, b: &Profile) -> OrderVerdict {
    let n = a.coeffs().len().max(b.coeffs().len());
    match (0..n).find(|&j| a.coeff(j) > b.coeff(j)) {
        None => OrderVerdict::yes(Relation::Prec, None),
        Some(j) => OrderVerdict::no(Relation::Prec, Witness::Index(j)),
    }
}

/// `a ⊑ b`. `a` may be any nonzero element of `Z≥0[t]`; `b` should be a
/// profile for `q`.
pub fn contains(a: &Profile, b: &Profile, q: PrimePower) -> Result<OrderVerdict> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroProfile);
    }
    let (da, db) = (a.numerical_degree(q), b.numerical_degree(q));
    if da != db {
        return Ok(OrderVerdict::no(
            Relation::Contain,
            Witness::DegreeMismatch { left: da, right: db },
        ));
    }
    if a == b {
        return Ok(OrderVerdict::yes(Relation::Contain, None));
    }
    let dim = a.coeff_sum() as usize;
    let mut failing: Option<Vec<u64>> = None;
    for orbit in column_orbits(a, q)? {
        if !orbit_fits(&orbit, b, q.q() as u128) {
            // least vector of the orbit at dimension a(1): zeros, then ascending
            let mut v = vec![0u64; dim - orbit.len()];
            v.extend(orbit.iter().rev().map(|&x| x as u64));
            if failing.as_ref().is_none_or(|f| v < *f) {
                failing = Some(v);
            }
        }
    }
    Ok(match failing {
        None => OrderVerdict::yes(Relation::Contain, None),
        Some(v) => OrderVerdict::no(Relation::Contain, Witness::Exponent(v)),
    })
}

/// `a ⇝ b`: searches `a'` with `a ≼ a'`, `a'(q) = b(q)` and `a' ⊑ b`, lowest
/// coefficients first.
pub fn squig(a: &Profile, b: &Profile, q: PrimePower) -> Result<OrderVerdict> {
    for x in [a, b] {
        if x.is_zero() {
            return Err(Error::ZeroProfile);
        }
        if !x.is_profile(q) {
            return Err(Error::NotAProfile {
                profile: x.to_string(),
                q: q.q(),
            });
        }
    }
    let target = b.numerical_degree(q);
    if a.numerical_degree(q) > target {
        return Ok(OrderVerdict {
            relation: Relation::Squig,
            holds: false,
            witness: None,
        });
    }
    let mut found = None;
    let mut digits = Vec::new();
    lift(a, b, q, &target, 0, &mut digits, &mut found)?;
    Ok(match found {
        Some(p) => OrderVerdict::yes(Relation::Squig, Some(Witness::Intermediate(p))),
        None => OrderVerdict {
            relation: Relation::Squig,
            holds: false,
            witness: None,
        },
    })
}

/// Chooses `a'_j` for `j = 0, 1, ...` with `a'_j >= a_j` and
/// `sum_j a'_j q^j = target`; `remaining` is what positions `>= j` still owe,
/// divided by `q^j`.
fn lift(
    a: &Profile,
    b: &Profile,
    q: PrimePower,
    remaining: &BigUint,
    j: usize,
    digits: &mut Vec<u32>,
    found: &mut Option<Profile>,
) -> Result<()> {
    if found.is_some() {
        return Ok(());
    }
    let qq = BigUint::from(q.q());
    if *remaining == BigUint::ZERO {
        if (j..a.coeffs().len()).all(|i| a.coeff(i) == 0) {
            let candidate = Profile::new(digits.clone());
            if contains(&candidate, b, q)?.holds {
                *found = Some(candidate);
            }
        }
        return Ok(());
    }
    let low = BigUint::from(a.coeff(j));
    if low > *remaining {
        return Ok(());
    }
    let residue = remaining % &qq;
    // smallest x >= low with x = remaining (mod q)
    let low_residue = &low % &qq;
    let mut x = if low_residue <= residue {
        &low - &low_residue + &residue
    } else {
        &low - &low_residue + &qq + &residue
    };
    while x <= *remaining {
        let Some(xd) = x.to_u32() else { break };
        digits.push(xd);
        lift(a, b, q, &((remaining - &x) / &qq), j + 1, digits, found)?;
        digits.pop();
        if found.is_some() {
            return Ok(());
        }
        x += &qq;
    }
    Ok(())
}

/// Distinct multisets of column values `sum_j q^j c_j`, one per orbit of
/// `a`-decomposable exponent vectors, each sorted in decreasing order.
fn column_orbits(a: &Profile, q: PrimePower) -> Result<BTreeSet<Vec<u128>>> {
    let qq = q.q() as u128;
    let mut scale = Vec::with_capacity(a.coeffs().len());
    let mut s: u128 = 1;
    for j in 0..a.coeffs().len() {
        scale.push(s);
        if j + 1 < a.coeffs().len() {
            s = s
                .checked_mul(qq)
                .ok_or_else(|| Error::InvalidArgument("a(q) exceeds 128 bits".into()))?;
        }
    }
    // every nonzero column shape below a, with its value
    let mut parts: Vec<(Vec<u32>, u128)> = a
        .interval_below()
        .filter(|b| !b.is_zero())
        .map(|b| {
            let mut c = b.coeffs().to_vec();
            c.resize(a.coeffs().len(), 0);
            let v = c.iter().zip(&scale).map(|(&x, &s)| x as u128 * s).sum();
            (c, v)
        })
        .collect();
    parts.sort();
    let mut out = BTreeSet::new();
    let mut values = Vec::new();
    let mut rem = a.coeffs().to_vec();
    vector_partitions(&parts, parts.len(), &mut rem, &mut values, &mut out);
    Ok(out)
}

/// Multisets of `parts` (indices `< limit`, non-increasing) summing to `rem`.
fn vector_partitions(
    parts: &[(Vec<u32>, u128)],
    limit: usize,
    rem: &mut Vec<u32>,
    values: &mut Vec<u128>,
    out: &mut BTreeSet<Vec<u128>>,
) {
    if rem.iter().all(|&x| x == 0) {
        let mut v = values.clone();
        v.sort_unstable_by(|x, y| y.cmp(x));
        out.insert(v);
        return;
    }
    for i in (0..limit).rev() {
        let (shape, value) = &parts[i];
        if shape.iter().zip(rem.iter()).all(|(s, r)| s <= r) {
            for (r, s) in rem.iter_mut().zip(shape) {
                *r -= s;
            }
            values.push(*value);
            vector_partitions(parts, i + 1, rem, values, out);
            values.pop();
            for (r, s) in rem.iter_mut().zip(shape) {
                *r += s;
            }
        }
    }
}

/// Whether the orbit with nonzero exponents `orbit` is `b`-decomposable: each
/// value must be split into a column `sum_j q^j x_j` and the columns must use
/// up the coefficients of `b` exactly.
fn orbit_fits(orbit: &[u128], b: &Profile, q: u128) -> bool {
    let mut scale = Vec::with_capacity(b.coeffs().len());
    let mut s: u128 = 1;
    for _ in b.coeffs() {
        scale.push(s);
        s = s.saturating_mul(q);
    }
    let mut memo = HashMap::new();
    let mut rem = b.coeffs().to_vec();
    fits_from(orbit, 0, &mut rem, &scale, &mut memo)
}

fn fits_from(
    orbit: &[u128],
    i: usize,
    rem: &mut Vec<u32>,
    scale: &[u128],
    memo: &mut HashMap<(usize, Vec<u32>), bool>,
) -> bool {
    if i == orbit.len() {
        return rem.iter().all(|&x| x == 0);
    }
    if let Some(&v) = memo.get(&(i, rem.clone())) {
        return v;
    }
    let key = (i, rem.clone());
    let mut ok = false;
    let mut column = vec![0u32; rem.len()];
    split_value(orbit[i], rem.len(), rem, scale, &mut column, &mut |column, rem| {
        for (r, c) in rem.iter_mut().zip(column) {
            *r -= c;
        }
        let r = fits_from(orbit, i + 1, rem, scale, memo);
        for (r, c) in rem.iter_mut().zip(column) {
            *r += c;
        }
        r
    }, &mut ok);
    memo.insert(key, ok);
    ok
}

/// Enumerates digit columns `x` with `x <= rem` and `sum_{j<top} x_j scale_j
/// = value`, highest position first, stopping once `f` accepts one.
fn split_value(
    value: u128,
    top: usize,
    rem: &mut Vec<u32>,
    scale: &[u128],
    column: &mut Vec<u32>,
    f: &mut dyn FnMut(&[u32], &mut Vec<u32>) -> bool,
    ok: &mut bool,
) {
    if *ok {
        return;
    }
    if top == 0 {
        if value == 0 {
            let snapshot = column.clone();
            *ok = f(&snapshot, rem);
        }
        return;
    }
    let j = top - 1;
    // positions below j can absorb at most this much
    let below: u128 = (0..j).map(|i| rem[i] as u128 * scale[i]).sum();
    let most = (value / scale[j]).min(rem[j] as u128);
    let least = value.saturating_sub(below).div_ceil(scale[j]);
    if least > most {
        return;
    }
    for x in (least..=most).rev() {
        column[j] = x as u32;
        split_value(value - x * scale[j], j, rem, scale, column, f, ok);
        if *ok {
            break;
        }
    }
    column[j] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn p(s: &str) -> Profile {
        s.parse().unwrap()
    }

    fn q(x: u64) -> PrimePower {
        PrimePower::from_q(x).unwrap()
    }

    #[test]
    fn prec_examples() {
        assert!(prec(&p("1+t"), &p("2+t")).holds);
        let v = prec(&p("2"), &p("1+t"));
        assert!(!v.holds);
        assert_eq!(v.witness, Some(Witness::Index(0)));
        assert!(prec(&p("t^2"), &p("1+t^2")).holds);
        assert!(!prec(&p("t^2"), &p("5+5t")).holds);
    }

    #[test]
    fn base_expansion_is_least_constant_is_greatest() {
        for qq in [2u64, 3, 4, 5] {
            for d in 1..40u64 {
                let base = Profile::base_expansion(d, q(qq));
                let constant = Profile::constant(d as u32);
                assert!(contains(&base, &constant, q(qq)).unwrap().holds, "{d} q={qq}");
            }
        }
    }

    #[test]
    fn incomparable_pair_at_q2() {
        let (a, b) = (p("t^2+3"), p("3t+1"));
        let ab = contains(&a, &b, q(2)).unwrap();
        let ba = contains(&b, &a, q(2)).unwrap();
        assert!(!ab.holds && !ba.holds);
        for (x, y, v) in [(&a, &b, ab), (&b, &a, ba)] {
            let Some(Witness::Exponent(e)) = v.witness else {
                panic!("missing witness")
            };
            assert!(oracle::is_decomposable(&e, x, q(2)));
            assert!(!oracle::is_decomposable(&e, y, q(2)));
            let full = oracle::span_subset(x, y, q(2), x.coeff_sum() as usize, oracle::DEFAULT_CAP)
                .unwrap();
            assert_eq!(full.witness.unwrap().0, e);
        }
    }

    #[test]
    fn reflexive_and_degree_mismatch() {
        assert!(contains(&p("1+t"), &p("1+t"), q(3)).unwrap().holds);
        let v = contains(&p("1+t"), &p("5"), q(3)).unwrap();
        assert!(matches!(v.witness, Some(Witness::DegreeMismatch { .. })));
    }

    #[test]
    fn squig_examples() {
        // a ⊑ b gives a ⇝ b
        let v = squig(&p("1+t+t^2"), &p("7"), q(2)).unwrap();
        assert!(v.holds);
        // a ≼ b with a(q) < b(q)
        let v = squig(&p("1"), &p("1+t"), q(3)).unwrap();
        assert!(v.holds);
        assert!(!squig(&p("5"), &p("1+t"), q(3)).unwrap().holds);
        assert!(squig(&p("2+t"), &p("1"), q(2)).is_err());
    }

    #[test]
    fn matches_oracle_at_reduction_dimension() {
        let universe = ["7", "1+t+t^2", "3+2t", "1+3t", "3+t^2", "5+t", "1+t", "3", "t", "2t"];
        for x in universe {
            for y in universe {
                let (x, y) = (p(x), p(y));
                if x.numerical_degree(q(2)) != y.numerical_degree(q(2)) || !y.is_profile(q(2)) {
                    continue;
                }
                let m = x.coeff_sum() as usize;
                let expected = oracle::span_subset(&x, &y, q(2), m, oracle::DEFAULT_CAP).unwrap();
                let got = contains(&x, &y, q(2)).unwrap();
                assert_eq!(got.holds, expected.holds, "{x} ⊑ {y}");
                if let Some(Witness::Exponent(e)) = got.witness {
                    assert_eq!(Some(e), expected.witness.map(|w| w.0));
                }
            }
        }
    }
}
