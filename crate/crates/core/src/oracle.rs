//! Brute-force ground truth over monomial exponent vectors.
//!
//! Multiplication `S^a(V^) -> Sym^{a(q)}(V^)` sends a basis tensor
//! `x^{e_0} (x^{e_1})^q (x^{e_2})^{q^2} ...` to the single monomial with
//! exponent `sum_j q^j e_j`, so injectivity and containment questions reduce to
//! counting these decompositions. Nothing here shares code with the decision
//! procedures in [`crate::order`] or with [`Profile::check`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::binom::binomial;
use crate::error::{Error, Result};
use crate::profile::{PrimePower, Profile};

/// Default limit on the number of basis tensors one enumeration may visit.
pub const DEFAULT_CAP: u64 = 10_000_000;

/// Exponents of a monomial in `m` variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Layers `e_0, e_1, ...` with `|e_j| = a_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub layers: Vec<ExponentVector>,
}

impl Decomposition {
    pub fn combine(&self, q: u64) -> ExponentVector {
        let m = self.layers.first().map_or(0, |l| l.dim());
        let mut out = vec![0u64; m];
        let mut scale = 1u64;
        for layer in &self.layers {
            for (o, x) in out.iter_mut().zip(&layer.0) {
                *o += scale * x;
            }
            scale = scale.saturating_mul(q);
        }
        ExponentVector(out)
    }
}

/// All vectors of length `m` with entries summing to `n`, in colexicographic
/// order (the last coordinate varies slowest).
pub fn compositions(n: u64, m: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; m];
    fn rec(n: u64, len: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if len == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if len == 1 {
            cur[0] = n;
            out.push(cur.clone());
            return;
        }
        for last in 0..=n {
            cur[len - 1] = last;
            rec(n - last, len - 1, cur, out);
        }
        cur[len - 1] = 0;
    }
    if m > 0 {
        rec(n, m, &mut cur, &mut out);
    } else if n == 0 {
        out.push(Vec::new());
    }
    out
}

/// `dim S^a(V^)` for `dim V = m`: `prod_j C(a_j + m - 1, a_j)`.
pub fn sa_dimension(a: &Profile, m: u64) -> BigUint {
    a.coeffs()
        .iter()
        .map(|&c| binomial(c as u64 + m - 1, c as u64))
        .fold(BigUint::one(), |acc, x| acc * x)
}

fn check_size(a: &Profile, m: usize, cap: u64) -> Result<()> {
    let size = sa_dimension(a, m as u64);
    match size.to_u64() {
        Some(n) if n <= cap => Ok(()),
        _ => Err(Error::CapExceeded {
            what: "basis tensors",
            count: size.to_u64().unwrap_or(u64::MAX),
            cap,
        }),
    }
}

fn scales(a: &Profile, q: PrimePower) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(a.coeffs().len());
    let mut s = 1u64;
    for j in 0..a.coeffs().len() {
        out.push(s);
        if j + 1 < a.coeffs().len() {
            s = s
                .checked_mul(q.q())
                .ok_or_else(|| Error::InvalidArgument("a(q) does not fit in 64 bits".into()))?;
        }
    }
    Ok(out)
}

/// Every basis tensor of `S^a(V^)` with `dim V = m`, paired with the exponent
/// vector of its image. Layers run through [`compositions`] with `e_0` varying
/// fastest.
pub fn veronese_exponents(
    a: &Profile,
    q: PrimePower,
    m: usize,
    cap: u64,
) -> Result<Vec<(Decomposition, ExponentVector)>> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one variable".into()));
    }
    check_size(a, m, cap)?;
    let scales = scales(a, q)?;
    let layers: Vec<Vec<Vec<u64>>> = a
        .coeffs()
        .iter()
        .map(|&c| compositions(c as u64, m))
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; layers.len()];
    loop {
        let mut e = vec![0u64; m];
        for (j, &i) in idx.iter().enumerate() {
            for (x, y) in e.iter_mut().zip(&layers[j][i]) {
                *x += scales[j] * y;
            }
        }
        let decomposition = Decomposition {
            layers: idx
                .iter()
                .enumerate()
                .map(|(j, &i)| ExponentVector(layers[j][i].clone()))
                .collect(),
        };
        out.push((decomposition, ExponentVector(e)));
        // odometer, layer 0 fastest
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(out);
            }
            idx[j] += 1;
            if idx[j] < layers[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// The set `{ sum_j q^j e_j : |e_j| = a_j }` at dimension `m`, each vector
/// with its number of decompositions.
pub fn decomposable_set(
    a: &Profile,
    q: PrimePower,
    m: usize,
    cap: u64,
) -> Result<BTreeMap<ExponentVector, u64>> {
    let mut out = BTreeMap::new();
    for (_, e) in veronese_exponents(a, q, m, cap)? {
        *out.entry(e).or_insert(0) += 1;
    }
    Ok(out)
}

/// Multiplication is injective at dimension `m` iff every image monomial has
/// exactly one preimage tensor.
///
/// Streams the tensors with a running image and stops at the first repeat.
pub fn mult_injective_bruteforce(a: &Profile, q: PrimePower, m: usize, cap: u64) -> Result<bool> {
    if m == 0 {
        return Err(Error::InvalidArgument("need at least one variable".into()));
    }
    check_size(a, m, cap)?;
    let scales = scales(a, q)?;
    let layers: Vec<Vec<Vec<u64>>> = a
        .coeffs()
        .iter()
        .map(|&c| compositions(c as u64, m))
        .collect();
    let mut e = vec![0u64; m];
    for (j, layer) in layers.iter().enumerate() {
        for (x, y) in e.iter_mut().zip(&layer[0]) {
            *x += scales[j] * y;
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut idx = vec![0usize; layers.len()];
    loop {
        if !seen.insert(e.clone()) {
            return Ok(false);
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Ok(true);
            }
            let old = &layers[j][idx[j]];
            idx[j] = (idx[j] + 1) % layers[j].len();
            let new = &layers[j][idx[j]];
            for ((x, o), n) in e.iter_mut().zip(old).zip(new) {
                *x = *x - scales[j] * o + scales[j] * n;
            }
            if idx[j] != 0 {
                break;
            }
            j += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanCheck {
    pub holds: bool,
    /// Lexicographically least `a`-decomposable vector that is not
    /// `b`-decomposable.
    pub witness: Option<ExponentVector>,
}

fn require_same_degree(a: &Profile, b: &Profile, q: PrimePower) -> Result<()> {
    if a.numerical_degree(q) != b.numerical_degree(q) {
        return Err(Error::InvalidArgument(format!(
            "span comparison needs a(q) = b(q); got {a} and {b} at q = {q}"
        )));
    }
    Ok(())
}

/// `S^a(V^) ⊆ S^b(V^)` inside `Sym^{a(q)}` at `dim V = m`, by comparing the
/// full monomial sets.
pub fn span_subset(a: &Profile, b: &Profile, q: PrimePower, m: usize, cap: u64) -> Result<SpanCheck> {
    require_same_degree(a, b, q)?;
    let da = decomposable_set(a, q, m, cap)?;
    let db = decomposable_set(b, q, m, cap)?;
    let witness = da.keys().find(|e| !db.contains_key(*e)).cloned();
    Ok(SpanCheck {
        holds: witness.is_none(),
        witness,
    })
}

/// Whether `e` is `sum_j q^j e_j` for some layers with `|e_j| = a_j`.
///
/// Peels one layer at a time: `e_0` must agree with `e` modulo `q` in every
/// coordinate, then the rest is `(e - e_0) / q` against `a / t`. Coordinates
/// are interchangeable, so intermediate states are memoized sorted.
pub fn is_decomposable(e: &[u64], a: &Profile, q: PrimePower) -> bool {
    let mut start: Vec<u64> = e.iter().copied().filter(|&x| x > 0).collect();
    start.sort_unstable_by(|x, y| y.cmp(x));
    let mut memo = HashMap::new();
    peel(start, a.coeffs(), q.q(), &mut memo)
}

fn peel(e: Vec<u64>, layers: &[u32], q: u64, memo: &mut HashMap<(usize, Vec<u64>), bool>) -> bool {
    let Some((&a0, rest)) = layers.split_first() else {
        return e.is_empty();
    };
    let key = (layers.len(), e);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let e = &key.1;
    let residues: Vec<u64> = e.iter().map(|x| x % q).collect();
    let rsum: u64 = residues.iter().sum();
    let a0 = a0 as u64;
    let mut found = false;
    if rsum <= a0 && (a0 - rsum) % q == 0 {
        let extra = (a0 - rsum) / q;
        let caps: Vec<u64> = e.iter().zip(&residues).map(|(x, r)| (x - r) / q).collect();
        let mut take = vec![0u64; e.len()];
        found = distribute(extra, 0, &caps, &mut take, &mut |take| {
            let mut next: Vec<u64> = e
                .iter()
                .zip(&residues)
                .zip(take)
                .map(|((x, r), k)| (x - r - k * q) / q)
                .filter(|&x| x > 0)
                .collect();
            next.sort_unstable_by(|x, y| y.cmp(x));
            peel(next, rest, q, memo)
        });
    }
    memo.insert(key, found);
    found
}

/// Tries every way of writing `n` as `sum take_i` with `take_i <= caps_i`.
fn distribute(
    n: u64,
    i: usize,
    caps: &[u64],
    take: &mut Vec<u64>,
    f: &mut dyn FnMut(&[u64]) -> bool,
) -> bool {
    if i == caps.len() {
        return n == 0 && f(take);
    }
    let room: u64 = caps[i + 1..].iter().sum();
    let lo = n.saturating_sub(room);
    for k in lo..=n.min(caps[i]) {
        take[i] = k;
        if distribute(n - k, i + 1, caps, take, f) {
            return true;
        }
    }
    take[i] = 0;
    false
}

/// Partitions of `n` into at most `max_parts` parts, largest part first.
pub fn partitions(n: u64, max_parts: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: u64, largest: u64, max_parts: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if cur.len() == max_parts {
            return;
        }
        for part in (1..=largest.min(n)).rev() {
            cur.push(part);
            rec(n - part, part, max_parts, cur, out);
            cur.pop();
        }
    }
    rec(n, n, max_parts, &mut cur, &mut out);
    out
}

/// The `a`-decomposable monomials of `Sym^{a(q)}` with at most `max_parts`
/// nonzero exponents, one representative per coordinate permutation (the
/// exponents sorted in decreasing order).
pub fn decomposable_orbits(a: &Profile, q: PrimePower, max_parts: usize) -> Result<BTreeSet<Vec<u64>>> {
    let d = a
        .numerical_degree(q)
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("a(q) does not fit in 64 bits".into()))?;
    Ok(partitions(d, max_parts)
        .into_iter()
        .filter(|lambda| is_decomposable(lambda, a, q))
        .collect())
}

/// Least vector of dimension `m` in the permutation orbit of `lambda`.
pub fn orbit_min(lambda: &[u64], m: usize) -> ExponentVector {
    let mut v = vec![0u64; m - lambda.len()];
    v.extend(lambda.iter().rev());
    ExponentVector(v)
}

/// Same question as [`span_subset`], answered over permutation orbits, so it
/// stays cheap for large `m`.
pub fn span_subset_orbits(a: &Profile, b: &Profile, q: PrimePower, m: usize) -> Result<SpanCheck> {
    require_same_degree(a, b, q)?;
    let witness = decomposable_orbits(a, q, m)?
        .into_iter()
        .filter(|lambda| !is_decomposable(lambda, b, q))
        .map(|lambda| orbit_min(&lambda, m))
        .min();
    Ok(SpanCheck {
        holds: witness.is_none(),
        witness,
    })
}

/// Whether the Fermat polynomial `sum_i x_i^d` lies in the span of
/// `(q;a)`-tic monomials in `m` variables.
pub fn fermat_membership(d: u64, a: &Profile, q: PrimePower, m: usize) -> bool {
    let member = (0..m).all(|i| {
        let mut e = vec![0u64; m];
        e[i] = d;
        is_decomposable(&e, a, q)
    });
    debug_assert_eq!(member, a.numerical_degree(q) == BigUint::from(d));
    member
}
