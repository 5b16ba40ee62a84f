//! The recursive thresholds `r`, `n_1`, `n_2` and `n_0` on the multi-profile
//! poset.
//!
//! With `sh = 1` for nlr covers and `0` otherwise,
//!
//! ```text
//! r(a)     = max {r_0(a)}                        ∪ {r(a') + sh}
//! n_1(a,r) = max {2r - 1 + #a_1}                 ∪ {n_1(a', r - sh) + sh}
//! n_2(a,r) = max {⌈r + (sum prod C(a_j + r, r) - #a) / r⌉} ∪ {n_2(a', r - sh) + sh}
//! ```
//!
//! over the covers `a'` of `a`, and `n_0 = max(n_1, n_2)`. The `1/r` term is
//! undefined for `r <= 0`; there it is replaced according to a
//! [`LeafConvention`]. The empty multi-profile has `r(∅) = -1`,
//! `n_1(∅, r) = 2r - 1` and `n_2(∅, r) = 0`.
//!
//! Unrolling the recursion, every value is a maximum over pairs `(b, s)`
//! where `b` is reachable from `a` by covers and `s` counts the nlr steps on
//! the way: `r(a) = max r_0(b) + s` and `n_i(a, r) = max term_i(b, r - s) + s`.
//! [`Engine`] evaluates these maxima in one downward sweep in decreasing
//! [`descent_key`] order, which visits every node after all of its parents.
//! [`Recursive`] evaluates the definitions directly and serves as the
//! reference.

use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::binom::monomial_counts;
use crate::cache::BoundsCache;
use crate::error::{Error, Result};
use crate::multiprofile::MultiProfile;
use crate::poset::{descent_key, pointed_line_count, Coverer, Flavour, Phi};

/// What the `n_2` closed-form term becomes at `r <= 0` for a nonempty node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafConvention {
    /// `#a`, the number of equations.
    #[default]
    NodeCount,
    /// `0`.
    Zero,
}

fn shift(flavour: Flavour) -> i128 {
    match flavour {
        Flavour::Nlr => 1,
        Flavour::Pow | Flavour::Lin => 0,
    }
}

fn to_i128(x: u128, what: &'static str) -> Result<i128> {
    i128::try_from(x).map_err(|_| Error::MultiplicityOverflow(what))
}

/// `r_0(a) = sum_a prod_j (a_j + 1) - 2 #a - 1`.
pub fn r0(a: &MultiProfile) -> Result<i128> {
    let mut total: i128 = -1;
    for (p, m) in a.iter() {
        let boxed = to_i128(p.interval_len(), "r_0")? - 2;
        total = (m as i128)
            .checked_mul(boxed)
            .and_then(|x| x.checked_add(total))
            .ok_or(Error::MultiplicityOverflow("r_0"))?;
    }
    Ok(total)
}

/// `2r - 1 + #a_1`.
pub fn line_term(a: &MultiProfile, r: i128) -> Result<i128> {
    let lines = to_i128(pointed_line_count(a), "#a_1")?;
    (2 * r - 1)
        .checked_add(lines)
        .ok_or(Error::MultiplicityOverflow("n_1"))
}

fn max_coefficient(a: &MultiProfile) -> u32 {
    a.profiles()
        .flat_map(|p| p.coeffs().iter().copied())
        .max()
        .unwrap_or(0)
}

/// `⌈r + (sum prod C(a_j + r, r) - #a) / r⌉`, with the leaf conventions.
/// `row[k]` must hold `C(k + r, r)` for every coefficient `k` of `a`.
fn plane_term_with(a: &MultiProfile, r: i128, convention: LeafConvention, row: &[BigUint]) -> BigInt {
    if a.is_empty() {
        return BigInt::zero();
    }
    if r <= 0 {
        return match convention {
            LeafConvention::NodeCount => BigInt::from(a.len()),
            LeafConvention::Zero => BigInt::zero(),
        };
    }
    let mut sum = BigUint::zero();
    for (p, m) in a.iter() {
        let mut prod = BigUint::one();
        for &c in p.coeffs() {
            prod *= &row[c as usize];
        }
        sum += prod * m;
    }
    let r_big = BigInt::from(r);
    let numerator = &r_big * &r_big + BigInt::from(sum) - BigInt::from(a.len());
    Integer::div_ceil(&numerator, &r_big)
}

/// The closed-form `n_2` term at `r`.
pub fn plane_term(a: &MultiProfile, r: i128, convention: LeafConvention) -> BigInt {
    let row = if r > 0 {
        monomial_counts(r as u64, max_coefficient(a))
    } else {
        Vec::new()
    };
    plane_term_with(a, r, convention, &row)
}

/// Downward sweep over the interval below a multi-profile.
#[derive(Debug, Default)]
pub struct Engine {
    convention: LeafConvention,
    coverer: Coverer,
    node_cap: Option<u64>,
    visited: u64,
}

type Pending = BTreeMap<(Reverse<(Phi, u128)>, MultiProfile), Vec<i128>>;

impl Engine {
    pub fn new(convention: LeafConvention) -> Self {
        Engine {
            convention,
            ..Engine::default()
        }
    }

    /// Stop with [`Error::CapExceeded`] after visiting this many nodes.
    pub fn with_node_cap(mut self, cap: u64) -> Self {
        self.node_cap = Some(cap);
        self
    }

    /// Nodes visited by the most recent sweep.
    pub fn visited(&self) -> u64 {
        self.visited
    }

    /// Calls `visit(b, s)` once per reachable `b` with the sorted, distinct
    /// nlr-step counts `s` of the paths reaching it.
    fn traverse(
        &mut self,
        top: &MultiProfile,
        mut visit: impl FnMut(&MultiProfile, &[i128]) -> Result<()>,
    ) -> Result<()> {
        self.visited = 0;
        let mut pending: Pending = BTreeMap::new();
        let mut current = Some((top.clone(), vec![0i128]));
        loop {
            let (node, mut steps) = match current.take() {
                Some(x) => x,
                None => match pending.pop_first() {
                    Some(((_, node), steps)) => (node, steps),
                    None => break,
                },
            };
            steps.sort_unstable();
            steps.dedup();
            self.visited += 1;
            if let Some(cap) = self.node_cap {
                if self.visited > cap {
                    return Err(Error::CapExceeded {
                        what: "bounds nodes",
                        count: self.visited,
                        cap,
                    });
                }
            }
            visit(&node, &steps)?;
            let mut covers = self.coverer.covers(&node)?;
            if covers.len() == 1 && pending.is_empty() {
                let cover = covers.pop().expect("one cover");
                let sh = shift(cover.flavour);
                steps.iter_mut().for_each(|s| *s += sh);
                current = Some((cover.target, steps));
                continue;
            }
            for cover in covers {
                let sh = shift(cover.flavour);
                let key = (Reverse(descent_key(&cover.target)), cover.target);
                pending
                    .entry(key)
                    .or_default()
                    .extend(steps.iter().map(|s| s + sh));
            }
        }
        Ok(())
    }

    pub fn r_bound(&mut self, top: &MultiProfile) -> Result<i128> {
        let mut best = i128::MIN;
        self.traverse(top, |node, steps| {
            let deepest = *steps.last().expect("nonempty step set");
            best = best.max(r0(node)? + deepest);
            Ok(())
        })?;
        Ok(best)
    }

    /// `(n_1(a, r), n_2(a, r))` in a single sweep.
    pub fn n_values(&mut self, top: &MultiProfile, r: i128) -> Result<(i128, BigInt)> {
        let convention = self.convention;
        let width = max_coefficient(top);
        let mut n1 = i128::MIN;
        let mut n2: Option<BigInt> = None;
        self.traverse(top, |node, steps| {
            let shallowest = steps[0];
            n1 = n1.max(line_term(node, r - shallowest)? + shallowest);
            for &s in steps {
                let at = r - s;
                let row = if at > 0 && !node.is_empty() {
                    monomial_counts(at as u64, width)
                } else {
                    Vec::new()
                };
                let value = plane_term_with(node, at, convention, &row) + BigInt::from(s);
                if n2.as_ref().is_none_or(|best| value > *best) {
                    n2 = Some(value);
                }
            }
            Ok(())
        })?;
        Ok((n1, n2.expect("the top node is always visited")))
    }
}

/// Direct evaluation of the recursive definitions, optionally memoized.
#[derive(Debug, Default)]
pub struct Recursive {
    convention: LeafConvention,
    coverer: Coverer,
    memo: Option<Memo>,
    node_cap: Option<usize>,
}

#[derive(Debug, Default)]
struct Memo {
    r: HashMap<MultiProfile, i128>,
    n1: HashMap<(MultiProfile, i128), i128>,
    n2: HashMap<(MultiProfile, i128), BigInt>,
}

/// One node of a memoized recursion: the values requested at it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceNode {
    pub key: MultiProfile,
    pub r0: i128,
    pub r: Option<i128>,
    #[serde(serialize_with = "crate::serde_big::bigint_map")]
    pub n1: BTreeMap<i128, i128>,
    #[serde(serialize_with = "crate::serde_big::bigint_map")]
    pub n2: BTreeMap<i128, BigInt>,
}

impl Recursive {
    pub fn new(convention: LeafConvention, memoize: bool) -> Self {
        Recursive {
            convention,
            memo: memoize.then(Memo::default),
            ..Recursive::default()
        }
    }

    /// With memoization on, fail once more than `cap` distinct nodes are
    /// remembered.
    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = Some(cap);
        self
    }

    fn check_cap(&self) -> Result<()> {
        if let (Some(cap), Some(memo)) = (self.node_cap, &self.memo) {
            let count = memo.r.len().max(memo.n1.len()).max(memo.n2.len());
            if count > cap {
                return Err(Error::CapExceeded {
                    what: "recursion nodes",
                    count: count as u64,
                    cap: cap as u64,
                });
            }
        }
        Ok(())
    }

    pub fn r_bound(&mut self, a: &MultiProfile) -> Result<i128> {
        if let Some(v) = self.memo.as_ref().and_then(|m| m.r.get(a)) {
            return Ok(*v);
        }
        let mut best = r0(a)?;
        for cover in self.coverer.covers(a)? {
            best = best.max(self.r_bound(&cover.target)? + shift(cover.flavour));
        }
        if let Some(memo) = &mut self.memo {
            memo.r.insert(a.clone(), best);
        }
        self.check_cap()?;
        Ok(best)
    }

    pub fn n1(&mut self, a: &MultiProfile, r: i128) -> Result<i128> {
        let key = (a.clone(), r);
        if let Some(v) = self.memo.as_ref().and_then(|m| m.n1.get(&key)) {
            return Ok(*v);
        }
        let mut best = line_term(a, r)?;
        for cover in self.coverer.covers(a)? {
            let sh = shift(cover.flavour);
            best = best.max(self.n1(&cover.target, r - sh)? + sh);
        }
        if let Some(memo) = &mut self.memo {
            memo.n1.insert(key, best);
        }
        self.check_cap()?;
        Ok(best)
    }

    pub fn n2(&mut self, a: &MultiProfile, r: i128) -> Result<BigInt> {
        let key = (a.clone(), r);
        if let Some(v) = self.memo.as_ref().and_then(|m| m.n2.get(&key)) {
            return Ok(v.clone());
        }
        let mut best = plane_term(a, r, self.convention);
        for cover in self.coverer.covers(a)? {
            let sh = shift(cover.flavour);
            best = best.max(self.n2(&cover.target, r - sh)? + BigInt::from(sh));
        }
        if let Some(memo) = &mut self.memo {
            memo.n2.insert(key, best.clone());
        }
        self.check_cap()?;
        Ok(best)
    }

    /// Every memoized node in decreasing descent order, top first.
    pub fn trace(&self) -> Result<Vec<TraceNode>> {
        let Some(memo) = &self.memo else {
            return Ok(Vec::new());
        };
        let mut nodes = TraceNodes::new();
        for (key, r) in &memo.r {
            trace_slot(&mut nodes, key)?.r = Some(*r);
        }
        for ((key, at), v) in &memo.n1 {
            trace_slot(&mut nodes, key)?.n1.insert(*at, *v);
        }
        for ((key, at), v) in &memo.n2 {
            trace_slot(&mut nodes, key)?.n2.insert(*at, v.clone());
        }
        Ok(nodes.into_values().collect())
    }
}

type TraceNodes = BTreeMap<(Reverse<(Phi, u128)>, MultiProfile), TraceNode>;

fn trace_slot<'a>(nodes: &'a mut TraceNodes, key: &MultiProfile) -> Result<&'a mut TraceNode> {
    let slot = (Reverse(descent_key(key)), key.clone());
    if !nodes.contains_key(&slot) {
        let node = TraceNode {
            key: key.clone(),
            r0: r0(key)?,
            r: None,
            n1: BTreeMap::new(),
            n2: BTreeMap::new(),
        };
        nodes.insert(slot.clone(), node);
    }
    Ok(nodes.get_mut(&slot).expect("just inserted"))
}

/// Everything computed for one top multi-profile.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsRecord {
    pub key: MultiProfile,
    pub r0: i128,
    pub r: i128,
    #[serde(serialize_with = "crate::serde_big::bigint_map")]
    pub n1_at: BTreeMap<i128, BigInt>,
    #[serde(serialize_with = "crate::serde_big::bigint_map")]
    pub n2_at: BTreeMap<i128, BigInt>,
    /// `max(n_1, n_2)` at `r = r(a)`.
    #[serde(serialize_with = "crate::serde_big::bigint")]
    pub n0: BigInt,
}

impl BoundsRecord {
    pub fn n0_at(&self, r: i128) -> Option<BigInt> {
        Some(self.n1_at.get(&r)?.clone().max(self.n2_at.get(&r)?.clone()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
    pub writes: u64,
}

/// Bounds with an optional persistent cache of top-level results. The cache
/// only serves the default leaf convention.
#[derive(Debug, Default)]
pub struct Bounds {
    engine: Engine,
    convention: LeafConvention,
    cache: Option<BoundsCache>,
    stats: CacheStats,
}

impl Bounds {
    pub fn new(convention: LeafConvention) -> Self {
        Bounds {
            engine: Engine::new(convention),
            convention,
            ..Bounds::default()
        }
    }

    pub fn with_cache(mut self, cache: BoundsCache) -> Self {
        if self.convention == LeafConvention::NodeCount {
            self.cache = Some(cache);
        }
        self
    }

    pub fn with_node_cap(mut self, cap: u64) -> Self {
        self.engine = std::mem::take(&mut self.engine).with_node_cap(cap);
        self
    }

    pub fn stats(&self) -> CacheStats {
        self.stats
    }

    pub fn has_cache(&self) -> bool {
        self.cache.is_some()
    }

    pub fn r_bound(&mut self, a: &MultiProfile) -> Result<i128> {
        let key = a.compact();
        if let Some(v) = self.cache.as_ref().and_then(|c| c.get_r(&key)) {
            self.stats.hits += 1;
            return Ok(v);
        }
        self.stats.misses += 1;
        let r = self.engine.r_bound(a)?;
        if let Some(cache) = &mut self.cache {
            if cache.put_r(&key, r)? {
                self.stats.writes += 1;
            }
        }
        Ok(r)
    }

    /// `(n_1(a, r), n_2(a, r))`.
    pub fn n_at(&mut self, a: &MultiProfile, r: i128) -> Result<(BigInt, BigInt)> {
        let key = a.compact();
        if let Some(v) = self.cache.as_ref().and_then(|c| c.get_n(&key, r)) {
            self.stats.hits += 1;
            return Ok(v.clone());
        }
        self.stats.misses += 1;
        let (n1, n2) = self.engine.n_values(a, r)?;
        let n1 = BigInt::from(n1);
        if let Some(cache) = &mut self.cache {
            if cache.put_n(&key, r, &n1, &n2)? {
                self.stats.writes += 1;
            }
        }
        Ok((n1, n2))
    }

    /// `(r(a), n_0(a, r(a)))`.
    pub fn n0_auto(&mut self, a: &MultiProfile) -> Result<(i128, BigInt)> {
        let r = self.r_bound(a)?;
        let (n1, n2) = self.n_at(a, r)?;
        Ok((r, n1.max(n2)))
    }

    /// The values at `r(a)`, plus those at `extra_r` when given.
    pub fn record(&mut self, a: &MultiProfile, extra_r: Option<i128>) -> Result<BoundsRecord> {
        let r = self.r_bound(a)?;
        let mut n1_at = BTreeMap::new();
        let mut n2_at = BTreeMap::new();
        for at in std::iter::once(r).chain(extra_r) {
            let (n1, n2) = self.n_at(a, at)?;
            n1_at.insert(at, n1);
            n2_at.insert(at, n2);
        }
        let n0 = n1_at[&r].clone().max(n2_at[&r].clone());
        Ok(BoundsRecord {
            key: a.clone(),
            r0: r0(a)?,
            r,
            n1_at,
            n2_at,
            n0,
        })
    }
}

pub fn r_bound(a: &MultiProfile) -> Result<i128> {
    Engine::default().r_bound(a)
}

pub fn n1(a: &MultiProfile, r: i128) -> Result<i128> {
    Ok(Engine::default().n_values(a, r)?.0)
}

pub fn n2(a: &MultiProfile, r: i128) -> Result<BigInt> {
    Ok(Engine::default().n_values(a, r)?.1)
}

pub fn n0(a: &MultiProfile, r: i128) -> Result<BigInt> {
    let (n1, n2) = Engine::default().n_values(a, r)?;
    Ok(BigInt::from(n1).max(n2))
}

/// `(r(a), n_0(a, r(a)))`.
pub fn n0_auto(a: &MultiProfile) -> Result<(i128, BigInt)> {
    Bounds::default().n0_auto(a)
}

/// Classical reference bounds `n'_0(d)` for degree-`d` hypersurfaces, for
/// display next to `n_0(d)`. Entries beginning with `≈` are orders of
/// magnitude only.
pub const CLASSICAL_N0: &[(u32, &str)] = &[
    (3, "3"),
    (4, "20"),
    (5, "8855"),
    (6, "454205040715033146"),
    (7, "≈10^103"),
    (8, "≈10^717"),
    (9, "≈10^5738"),
    (10, "≈10^51641"),
];

pub fn classical_n0(d: u32) -> Option<&'static str> {
    CLASSICAL_N0.iter().find(|(k, _)| *k == d).map(|(_, v)| *v)
}
