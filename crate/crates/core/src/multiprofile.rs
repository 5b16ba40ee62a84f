use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::profile::{parse_profile_at, Profile};

/// A finite multiset of nonzero profiles, stored as multiplicities.
///
/// Iteration, equality, hashing and the text forms all follow the profile
/// order (`deg_t`, then coefficients), so two multi-profiles with the same
/// members compare equal regardless of how they were built.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiProfile {
    entries: BTreeMap<Profile, u64>,
}

impl MultiProfile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_profiles<I: IntoIterator<Item = Profile>>(profiles: I) -> Result<Self> {
        let mut out = MultiProfile::new();
        for p in profiles {
            out.insert(p, 1)?;
        }
        Ok(out)
    }

    pub fn single(p: Profile) -> Result<Self> {
        Self::from_profiles([p])
    }

    /// Adds `multiplicity` copies of `p`.
    pub fn insert(&mut self, p: Profile, multiplicity: u64) -> Result<()> {
        if p.is_zero() {
            return Err(Error::ZeroProfile);
        }
        if multiplicity == 0 {
            return Ok(());
        }
        let slot = self.entries.entry(p).or_insert(0);
        *slot = slot
            .checked_add(multiplicity)
            .ok_or(Error::MultiplicityOverflow("multi-profile"))?;
        Ok(())
    }

    /// Removes one copy of `p`; false if `p` is absent.
    pub fn remove_one(&mut self, p: &Profile) -> bool {
        match self.entries.get_mut(p) {
            None => false,
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.entries.remove(p);
                true
            }
        }
    }

    pub fn multiplicity(&self, p: &Profile) -> u64 {
        self.entries.get(p).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `#a`, counted with multiplicity.
    pub fn len(&self) -> u128 {
        self.entries.values().map(|&m| m as u128).sum()
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// Distinct profiles in ascending order with their multiplicities.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Profile, u64)> + ExactSizeIterator {
        self.entries.iter().map(|(p, &m)| (p, m))
    }

    pub fn profiles(&self) -> btree_map::Keys<'_, Profile, u64> {
        self.entries.keys()
    }

    /// Every member, expanded with repetition.
    pub fn expanded(&self) -> impl Iterator<Item = &Profile> {
        self.iter()
            .flat_map(|(p, m)| std::iter::repeat(p).take(m as usize))
    }

    pub fn filter(&self, mut keep: impl FnMut(&Profile) -> bool) -> MultiProfile {
        MultiProfile {
            entries: self
                .entries
                .iter()
                .filter(|(p, _)| keep(p))
                .map(|(p, &m)| (p.clone(), m))
                .collect(),
        }
    }

    /// Multiset union.
    pub fn union(&self, other: &MultiProfile) -> Result<MultiProfile> {
        let mut out = self.clone();
        for (p, m) in other.iter() {
            out.insert(p.clone(), m)?;
        }
        Ok(out)
    }

    /// `[p1,p2,...]` in canonical order with repetition.
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    /// Like [`canonical`](Self::canonical) but with multiplicities written as
    /// `k^m` for a constant `k` and `(p)^m` otherwise. Used as the cache key.
    pub fn compact(&self) -> String {
        let items: Vec<String> = self.iter().map(|(p, m)| entry_text(p, m)).collect();
        format!("[{}]", items.join(","))
    }

    /// Display form close to the printed notation: `(4, 3, 2^3, 1)` with the
    /// largest profiles first, `∅` for the empty multi-profile.
    pub fn display_text(&self) -> String {
        if self.is_empty() {
            return "∅".to_string();
        }
        let items: Vec<String> = self.iter().rev().map(|(p, m)| entry_text(p, m)).collect();
        format!("({})", items.join(", "))
    }
}

fn entry_text(p: &Profile, m: u64) -> String {
    match (m, p.degree()) {
        (1, _) => p.to_string(),
        (m, Some(0)) => format!("{p}^{m}"),
        (m, _) => format!("({p})^{m}"),
    }
}

impl fmt::Display for MultiProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let mut first = true;
        for p in self.expanded() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for MultiProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_multiprofile(s)
    }
}

impl Serialize for MultiProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.compact())
    }
}

impl<'de> Deserialize<'de> for MultiProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_multiprofile(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses `[p1, p2, ...]` (or with parentheses). Entries are profiles, and a
/// multiplicity may be attached as `k^m` for a constant `k` or `(p)^m`.
/// `[]`, `()` and `∅` are the empty multi-profile.
pub fn parse_multiprofile(text: &str) -> Result<MultiProfile> {
    let trimmed = text.trim();
    let lead = text.len() - text.trim_start().len();
    if trimmed == "∅" {
        return Ok(MultiProfile::new());
    }
    let close = match trimmed.as_bytes().first() {
        Some(b'[') => b']',
        Some(b'(') => b')',
        _ => {
            return Err(ParseError::syntax(lead, "expected '[' to open a multi-profile").into())
        }
    };
    if trimmed.as_bytes().last() != Some(&close) || trimmed.len() < 2 {
        return Err(ParseError::syntax(
            lead + trimmed.len(),
            format!("expected closing '{}'", close as char),
        )
        .into());
    }
    let inner = &trimmed[1..trimmed.len() - 1];
    let base = lead + 1;
    let mut out = MultiProfile::new();
    if inner.trim().is_empty() {
        return Ok(out);
    }
    let mut offset = 0;
    for piece in split_top_level(inner) {
        let (profile, m) = parse_entry(piece, base + offset)?;
        if profile.is_zero() {
            return Err(ParseError::syntax(base + offset, "zero profile in a multi-profile").into());
        }
        out.insert(profile, m)?;
        offset += piece.len() + 1;
    }
    Ok(out)
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_entry(piece: &str, base: usize) -> Result<(Profile, u64), ParseError> {
    let lead = piece.len() - piece.trim_start().len();
    let body = piece.trim();
    let at = base + lead;
    if body.is_empty() {
        return Err(ParseError::syntax(at, "empty entry"));
    }
    if let Some(rest) = body.strip_prefix('(') {
        let close = rest
            .find(')')
            .ok_or_else(|| ParseError::syntax(at, "unbalanced '('"))?;
        let profile = parse_profile_at(&rest[..close], at + 1)?;
        let tail = rest[close + 1..].trim();
        let m = if tail.is_empty() {
            1
        } else {
            let digits = tail
                .strip_prefix('^')
                .ok_or_else(|| ParseError::syntax(at + close + 2, "expected '^' after ')'"))?;
            parse_count(digits.trim(), at + close + 2)?
        };
        return Ok((profile, m));
    }
    if let Some((k, m)) = body.split_once('^') {
        let k = k.trim();
        if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) {
            let profile = parse_profile_at(k, at)?;
            return Ok((profile, parse_count(m.trim(), at + k.len() + 1)?));
        }
    }
    Ok((parse_profile_at(body, at)?, 1))
}

fn parse_count(digits: &str, at: usize) -> Result<u64, ParseError> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseError::syntax(at, "expected a multiplicity"));
    }
    digits.parse().map_err(|_| ParseError::Overflow { offset: at })
}
