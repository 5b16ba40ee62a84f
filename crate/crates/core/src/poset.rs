//! The poset of multi-profiles and its cover relations.
//!
//! A multi-profile `a` splits as `a_lin ⊔ a_pow ⊔ a_nlr`: linear members
//! (`a(t) = 1`), nonreduced members (`a(0) = 0`) and the remaining nonlinear
//! reduced ones. What `a` covers depends on which parts are present:
//!
//! * pow: if `a = a_pow`, the single element `a / t`;
//! * lin: if `a = a_lin ⊔ a_pow` with `a_lin` nonempty, the single element
//!   `a \ a_lin`;
//! * nlr: if `a_nlr` is nonempty, one element `a_1 \ (a_0, a_0 - 1)` for each
//!   distinct `a_0` in `a_nlr` of maximal coefficient sum, where `a_1` is the
//!   multiset of all nonzero `b ≼ a` over the members `a`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fmt::Write as _;
use std::rc::Rc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::multiprofile::MultiProfile;
use crate::profile::{PrimePower, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavour {
    Pow,
    Lin,
    Nlr,
}

impl fmt::Display for Flavour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavour::Pow => "pow",
            Flavour::Lin => "lin",
            Flavour::Nlr => "nlr",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDecomposition {
    pub lin: MultiProfile,
    pub pow: MultiProfile,
    /// Members with `a(t) != 1` and `a(0) != 0`.
    pub nlr: MultiProfile,
}

pub fn type_decomposition(a: &MultiProfile) -> TypeDecomposition {
    TypeDecomposition {
        lin: a.filter(Profile::is_linear),
        pow: a.filter(Profile::is_nonreduced),
        nlr: a.filter(Profile::is_nlr),
    }
}

/// `(max deg_t, max a(1) over a_nlr, #{nlr members attaining it}, #a_nlr)`,
/// compared lexicographically. Never increases along a cover, and strictly
/// decreases along pow and nlr covers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Phi {
    pub delta: usize,
    pub sigma: u64,
    pub mu: u128,
    pub nlr_count: u128,
}

/// `φ` extended by `#a_lin`. Lin covers only drop linear members and can leave
/// `φ` unchanged (`(1) -> ∅`), so this is the key that strictly decreases
/// along every cover.
pub fn descent_key(a: &MultiProfile) -> (Phi, u128) {
    let lin = a.iter().filter(|(p, _)| p.is_linear()).map(|(_, m)| m as u128).sum();
    (phi(a), lin)
}

pub fn phi(a: &MultiProfile) -> Phi {
    let delta = a.profiles().filter_map(Profile::degree).max().unwrap_or(0);
    let mut out = Phi {
        delta,
        ..Phi::default()
    };
    for (p, m) in a.iter().filter(|(p, _)| p.is_nlr()) {
        let s = p.coeff_sum();
        out.nlr_count += m as u128;
        if s > out.sigma {
            out.sigma = s;
            out.mu = 0;
        }
        if s == out.sigma {
            out.mu += m as u128;
        }
    }
    out
}

/// `#a_1 = sum_a (prod_j (a_j + 1) - 1)`, without building `a_1`.
pub fn pointed_line_count(a: &MultiProfile) -> u128 {
    a.iter()
        .map(|(p, m)| m as u128 * (p.interval_len() - 1))
        .sum()
}

/// `a_1`: one copy of each nonzero `b ≼ a` for every member `a`.
pub fn pointed_line_multiprofile(a: &MultiProfile) -> Result<MultiProfile> {
    Coverer::default().pointed_line(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub target: MultiProfile,
    pub flavour: Flavour,
    /// The chosen maximal-sum member for an nlr cover.
    pub a0: Option<Profile>,
}

pub fn covers(a: &MultiProfile) -> Result<Vec<Cover>> {
    Coverer::default().covers(a)
}

/// Computes covers while remembering the interval below each profile seen.
#[derive(Debug, Default)]
pub struct Coverer {
    below: HashMap<Profile, Rc<Vec<Profile>>>,
}

impl Coverer {
    fn below(&mut self, p: &Profile) -> Rc<Vec<Profile>> {
        if let Some(v) = self.below.get(p) {
            return Rc::clone(v);
        }
        let v: Rc<Vec<Profile>> = Rc::new(p.interval_below().filter(|b| !b.is_zero()).collect());
        self.below.insert(p.clone(), Rc::clone(&v));
        v
    }

    pub fn pointed_line(&mut self, a: &MultiProfile) -> Result<MultiProfile> {
        let mut out = MultiProfile::new();
        for (p, m) in a.iter() {
            for b in self.below(p).iter() {
                out.insert(b.clone(), m)
                    .map_err(|_| Error::MultiplicityOverflow("pointed-line multi-profile"))?;
            }
        }
        Ok(out)
    }

    /// Covers in a fixed order: the single pow or lin cover, or the nlr covers
    /// by ascending `a_0`.
    pub fn covers(&mut self, a: &MultiProfile) -> Result<Vec<Cover>> {
        if a.is_empty() {
            return Ok(Vec::new());
        }
        let sigma = a
            .profiles()
            .filter(|p| p.is_nlr())
            .map(Profile::coeff_sum)
            .max();
        let Some(sigma) = sigma else {
            return Ok(vec![self.nlr_free_cover(a)]);
        };
        let base = self.pointed_line(a)?;
        let mut out = Vec::new();
        for a0 in a.profiles().filter(|p| p.is_nlr() && p.coeff_sum() == sigma) {
            let lowered = a0.minus_one().expect("nlr member has a nonzero constant term");
            let mut target = base.clone();
            assert!(target.remove_one(a0), "a_0 = {a0} missing from a_1");
            assert!(target.remove_one(&lowered), "a_0 - 1 = {lowered} missing from a_1");
            out.push(Cover {
                target,
                flavour: Flavour::Nlr,
                a0: Some(a0.clone()),
            });
        }
        Ok(out)
    }

    fn nlr_free_cover(&mut self, a: &MultiProfile) -> Cover {
        if a.profiles().any(Profile::is_linear) {
            Cover {
                target: a.filter(|p| !p.is_linear()),
                flavour: Flavour::Lin,
                a0: None,
            }
        } else {
            let mut target = MultiProfile::new();
            for (p, m) in a.iter() {
                target
                    .insert(p.div_t(), m)
                    .expect("a nonreduced profile stays nonzero after dividing by t");
            }
            Cover {
                target,
                flavour: Flavour::Pow,
                a0: None,
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HasseEdge {
    pub child: usize,
    pub parent: usize,
    pub flavour: Flavour,
    pub a0: Option<Profile>,
}

/// The interval `[∅, a]`: nodes ordered by decreasing [`descent_key`] (ties
/// by key), so the requested top comes first and `∅` last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseGraph {
    pub nodes: Vec<MultiProfile>,
    pub edges: Vec<HasseEdge>,
}

#[derive(Debug, Clone, Copy)]
pub struct IntervalOptions {
    pub max_nodes: usize,
    /// When set, every member of the top element must be a profile for `q`.
    pub q: Option<PrimePower>,
}

impl Default for IntervalOptions {
    fn default() -> Self {
        IntervalOptions {
            max_nodes: 100_000,
            q: None,
        }
    }
}

/// Breadth-first closure of the cover relation from `top` down to `∅`.
pub fn interval(top: &MultiProfile, opts: IntervalOptions) -> Result<HasseGraph> {
    if let Some(q) = opts.q {
        if let Some(bad) = top.profiles().find(|p| !p.is_profile(q)) {
            return Err(Error::NotAProfile {
                profile: bad.to_string(),
                q: q.q(),
            });
        }
    }
    let mut coverer = Coverer::default();
    let mut seen: BTreeMap<MultiProfile, ()> = BTreeMap::new();
    let mut raw_edges = Vec::new();
    let mut frontier = vec![top.clone()];
    seen.insert(top.clone(), ());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for node in &frontier {
            for cover in coverer.covers(node)? {
                if !seen.contains_key(&cover.target) {
                    if seen.len() >= opts.max_nodes {
                        return Err(Error::CapExceeded {
                            what: "interval nodes",
                            count: seen.len() as u64 + 1,
                            cap: opts.max_nodes as u64,
                        });
                    }
                    seen.insert(cover.target.clone(), ());
                    next.push(cover.target.clone());
                }
                raw_edges.push((node.clone(), cover));
            }
        }
        // canonical frontier order
        next.sort();
        frontier = next;
    }
    let mut nodes: Vec<MultiProfile> = seen.into_keys().collect();
    nodes.sort_by_cached_key(|n| (std::cmp::Reverse(descent_key(n)), n.clone()));
    let index: HashMap<&MultiProfile, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
    let mut edges: Vec<HasseEdge> = raw_edges
        .into_iter()
        .map(|(parent, cover)| HasseEdge {
            child: index[&cover.target],
            parent: index[&parent],
            flavour: cover.flavour,
            a0: cover.a0,
        })
        .collect();
    edges.sort_by(|x, y| (x.parent, x.child, &x.a0).cmp(&(y.parent, y.child, &y.a0)));
    edges.dedup_by(|x, y| x.parent == y.parent && x.child == y.child && x.a0 == y.a0);
    Ok(HasseGraph { nodes, edges })
}

impl HasseGraph {
    /// True when every node has at most one cover and the edges form a single
    /// path through all nodes.
    pub fn is_chain(&self) -> bool {
        self.edges.len() + 1 == self.nodes.len()
            && self
                .edges
                .iter()
                .enumerate()
                .all(|(i, e)| e.parent == i && e.child == i + 1)
    }

    /// `(6) - (4, 3, 2, 1) - ... - ∅` for a chain; otherwise one line per
    /// edge, parent first, with the flavour in brackets.
    pub fn to_text(&self) -> String {
        if self.is_chain() {
            let parts: Vec<String> = self.nodes.iter().map(MultiProfile::display_text).collect();
            return parts.join(" - ") + "\n";
        }
        let mut out = String::new();
        for e in &self.edges {
            let _ = write!(
                out,
                "{} - {} [{}",
                self.nodes[e.parent].display_text(),
                self.nodes[e.child].display_text(),
                e.flavour
            );
            if let Some(a0) = &e.a0 {
                let _ = write!(out, " a0={a0}");
            }
            out.push_str("]\n");
        }
        out
    }

    /// Graphviz, edges pointing from parent down to child.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph hasse {\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", n.canonical());
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"{}\"];", e.parent, e.child, e.flavour);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<String> = self.nodes.iter().map(MultiProfile::canonical).collect();
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|e| {
                serde_json::json!({
                    "child": nodes[e.child],
                    "parent": nodes[e.parent],
                    "flavour": e.flavour,
                    "a0": e.a0.as_ref().map(Profile::to_string),
                })
            })
            .collect();
        serde_json::json!({ "nodes": nodes, "edges": edges })
    }
}
