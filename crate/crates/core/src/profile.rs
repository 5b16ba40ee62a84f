//! Profiles: polynomials `a(t) = a_0 + a_1 t + ... + a_m t^m` with nonnegative
//! integer coefficients, read as the shape `prod_j f_j^(q^j)` with
//! `deg f_j = a_j` of a polynomial of degree `a(q)`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};

/// A prime power `q = p^e` that fits in 64 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    p: u64,
    e: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if e == 0 || !primal_check::miller_rabin(p) {
            return Err(Error::NotPrimePower(format!("{p}^{e}")));
        }
        let q = p
            .checked_pow(e)
            .ok_or_else(|| Error::NotPrimePower(format!("{p}^{e}")))?;
        Ok(PrimePower { p, e, q })
    }

    /// Recovers `p` and `e` from `q`.
    pub fn from_q(q: u64) -> Result<Self> {
        if q >= 2 {
            for e in (1..=63u32).rev() {
                let p = q.nth_root(e);
                if p >= 2 && p.checked_pow(e) == Some(q) && primal_check::miller_rabin(p) {
                    return Ok(PrimePower { p, e, q });
                }
            }
        }
        Err(Error::NotPrimePower(q.to_string()))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `q^k`, if it still fits.
    pub fn pow(&self, k: u32) -> Result<Self> {
        PrimePower::new(self.p, self.e * k)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}

/// A polynomial in `t` with nonnegative integer coefficients.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial is
/// the empty vector. Whether it is a profile depends on `q`, see
/// [`Profile::check`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Profile {
    coeffs: Vec<u32>,
}

impl Profile {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Profile { coeffs }
    }

    pub fn zero() -> Self {
        Profile { coeffs: Vec::new() }
    }

    pub fn constant(d: u32) -> Self {
        Profile::new(vec![d])
    }

    /// The monomial `t^j`.
    pub fn monomial(j: usize) -> Self {
        let mut coeffs = vec![0; j + 1];
        coeffs[j] = 1;
        Profile { coeffs }
    }

    /// Base-`q` digits of `d`, read as a polynomial in `t`.
    pub fn base_expansion(mut d: u64, q: PrimePower) -> Self {
        let mut coeffs = Vec::new();
        while d > 0 {
            coeffs.push((d % q.q()) as u32);
            d /= q.q();
        }
        Profile::new(coeffs)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `t^j`, zero past the degree.
    pub fn coeff(&self, j: usize) -> u32 {
        self.coeffs.get(j).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `deg_t a`; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(0)
    }

    /// `a(1)`.
    pub fn coeff_sum(&self) -> u64 {
        self.coeffs.iter().map(|&c| c as u64).sum()
    }

    /// `a(q)`, the degree of a `(q;a)`-tic polynomial.
    pub fn numerical_degree(&self, q: PrimePower) -> BigUint {
        self.eval(q.q())
    }

    pub fn eval(&self, x: u64) -> BigUint {
        let x = BigUint::from(x);
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &c| acc * &x + BigUint::from(c))
    }

    /// `a(t) = 1`.
    pub fn is_linear(&self) -> bool {
        self.coeffs == [1]
    }

    /// `a(0) = 0` for a nonzero `a`.
    pub fn is_nonreduced(&self) -> bool {
        !self.is_zero() && self.coeffs[0] == 0
    }

    /// Nonlinear and reduced: `a(t) != 1` and `a(0) != 0`.
    pub fn is_nlr(&self) -> bool {
        !self.is_zero() && !self.is_linear() && self.coeffs[0] != 0
    }

    /// `a / t`; the caller guarantees `a(0) = 0`.
    pub fn div_t(&self) -> Profile {
        debug_assert_eq!(self.constant_term(), 0);
        Profile::new(self.coeffs.iter().skip(1).copied().collect())
    }

    /// `a - 1`, lowering the constant coefficient.
    pub fn minus_one(&self) -> Option<Profile> {
        let mut coeffs = self.coeffs.clone();
        let c0 = coeffs.first_mut()?;
        *c0 = c0.checked_sub(1)?;
        Some(Profile::new(coeffs))
    }

    /// Componentwise `self <= other`.
    pub fn is_dominated_by(&self, other: &Profile) -> bool {
        self.coeffs.len() <= other.coeffs.len()
            && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    /// `prod_j (a_j + 1)`, the size of the interval `[0, a]`.
    pub fn interval_len(&self) -> u128 {
        self.coeffs.iter().map(|&c| c as u128 + 1).product()
    }

    /// All `b` with `0 <= b <= a` componentwise, in lexicographic order of the
    /// coefficient vectors (`b_0` varies slowest), including `0` and `a`.
    pub fn interval_below(&self) -> IntervalBelow<'_> {
        IntervalBelow {
            bound: &self.coeffs,
            current: Some(vec![0; self.coeffs.len()]),
        }
    }

    /// Decides whether `b -> b(q)` is injective on `[0, a]`.
    ///
    /// A collision `b(q) = b'(q)` is the same as a nonzero integer vector
    /// `d = b - b'` with `|d_j| <= a_j` and `sum_j d_j q^j = 0`. Such a `d` is
    /// found, or ruled out, by walking the positions from `j = 0` upwards and
    /// tracking the carry `(d_j + c_j) / q`; carries stay below
    /// `max_j a_j / (q - 1)` in absolute value, so the search is polynomial in
    /// the coefficients.
    pub fn check(&self, q: PrimePower) -> ProfileCheck {
        let mut search = CarrySearch {
            bound: &self.coeffs,
            q: q.q() as i128,
            dead: HashSet::new(),
            digits: Vec::with_capacity(self.coeffs.len()),
        };
        match search.run(0, 0, false) {
            false => ProfileCheck {
                is_profile: true,
                witness: None,
            },
            true => {
                let plus = search.digits.iter().map(|&d| d.max(0) as u32).collect();
                let minus = search.digits.iter().map(|&d| (-d).max(0) as u32).collect();
                ProfileCheck {
                    is_profile: false,
                    witness: Some((Profile::new(plus), Profile::new(minus))),
                }
            }
        }
    }

    pub fn is_profile(&self, q: PrimePower) -> bool {
        self.check(q).is_profile
    }

    pub fn stats(&self, q: PrimePower) -> ProfileStats {
        ProfileStats {
            numerical_degree: self.numerical_degree(q),
            coeff_sum: self.coeff_sum(),
            deg_t: self.degree().unwrap_or(0),
            constant_term: self.constant_term(),
            is_linear: self.is_linear(),
            is_nonreduced: self.is_nonreduced(),
            is_nlr: self.is_nlr(),
        }
    }
}

/// Outcome of [`Profile::check`]. A witness is a pair `b != b'` below `a` with
/// `b(q) = b'(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileCheck {
    pub is_profile: bool,
    pub witness: Option<(Profile, Profile)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileStats {
    #[serde(serialize_with = "crate::serde_big::biguint")]
    pub numerical_degree: BigUint,
    pub coeff_sum: u64,
    pub deg_t: usize,
    pub constant_term: u32,
    pub is_linear: bool,
    pub is_nonreduced: bool,
    pub is_nlr: bool,
}

struct CarrySearch<'a> {
    bound: &'a [u32],
    q: i128,
    dead: HashSet<(usize, i128, bool)>,
    digits: Vec<i128>,
}

impl CarrySearch<'_> {
    /// Extends `digits` from position `j` with incoming carry `carry`; returns
    /// true once a nonzero `d` summing to zero is complete. The first nonzero
    /// digit is kept positive so `d` and `-d` are not both explored.
    fn run(&mut self, j: usize, carry: i128, started: bool) -> bool {
        if j == self.bound.len() {
            return carry == 0 && started;
        }
        if self.dead.contains(&(j, carry, started)) {
            return false;
        }
        let a = self.bound[j] as i128;
        let low = if started { -a } else { 0 };
        // smallest d >= low with d + carry = 0 (mod q)
        let mut d = low + (-(low + carry)).rem_euclid(self.q);
        while d <= a {
            self.digits.push(d);
            if self.run(j + 1, (d + carry) / self.q, started || d != 0) {
                return true;
            }
            self.digits.pop();
            d += self.q;
        }
        self.dead.insert((j, carry, started));
        false
    }
}

/// Iterator returned by [`Profile::interval_below`].
pub struct IntervalBelow<'a> {
    bound: &'a [u32],
    current: Option<Vec<u32>>,
}

impl Iterator for IntervalBelow<'_> {
    type Item = Profile;

    fn next(&mut self) -> Option<Profile> {
        let current = self.current.as_mut()?;
        let out = Profile::new(current.clone());
        let mut j = current.len();
        loop {
            if j == 0 {
                self.current = None;
                break;
            }
            j -= 1;
            if current[j] < self.bound[j] {
                current[j] += 1;
                break;
            }
            current[j] = 0;
        }
        Some(out)
    }
}

impl Ord for Profile {
    /// `deg_t` first, then lexicographic on coefficients.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Profile {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Profile {
    type Output = Profile;

    fn add(self, rhs: &Profile) -> Profile {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Profile::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl fmt::Display for Profile {
    /// Ascending powers, e.g. `3+t^2`, `1+2t`; `0` for the zero polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (j, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("t")?,
                (1, c) => write!(f, "{c}t")?,
                (j, 1) => write!(f, "t^{j}")?,
                (j, c) => write!(f, "{c}t^{j}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Profile {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_profile(s)
    }
}

impl Serialize for Profile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Profile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_profile(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses a sum of terms `k`, `t`, `k*t`, `kt`, `t^j`, `k*t^j`, `kt^j`.
/// Whitespace is ignored and like terms are summed.
pub fn parse_profile(text: &str) -> Result<Profile, ParseError> {
    parse_profile_at(text, 0)
}

pub(crate) fn parse_profile_at(text: &str, base: usize) -> Result<Profile, ParseError> {
    let mut lexer = Lexer::new(text, base);
    let mut coeffs: Vec<u32> = Vec::new();
    lexer.skip_ws();
    if lexer.at_end() {
        return Err(ParseError::syntax(lexer.offset(), "empty profile"));
    }
    loop {
        let (power, coeff) = lexer.term()?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] = coeffs[power]
            .checked_add(coeff)
            .ok_or(ParseError::Overflow { offset: lexer.offset() })?;
        lexer.skip_ws();
        match lexer.peek() {
            None => break,
            Some(b'+') => {
                lexer.bump();
                lexer.skip_ws();
            }
            Some(b'-') => return Err(ParseError::Negative { offset: lexer.offset() }),
            Some(c) => {
                return Err(ParseError::syntax(
                    lexer.offset(),
                    format!("unexpected '{}'", c as char),
                ))
            }
        }
    }
    Ok(Profile::new(coeffs))
}

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, base: usize) -> Self {
        Lexer {
            bytes: text.as_bytes(),
            pos: 0,
            base,
        }
    }

    fn offset(&self) -> usize {
        self.base + self.pos
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> Result<Option<u32>, ParseError> {
        let start = self.offset();
        let mut value: Option<u32> = None;
        while let Some(c @ b'0'..=b'9') = self.peek() {
            let v = value.unwrap_or(0);
            value = Some(
                v.checked_mul(10)
                    .and_then(|v| v.checked_add((c - b'0') as u32))
                    .ok_or(ParseError::Overflow { offset: start })?,
            );
            self.bump();
        }
        Ok(value)
    }

    /// One term, returned as `(power, coefficient)`.
    fn term(&mut self) -> Result<(usize, u32), ParseError> {
        if self.peek() == Some(b'-') {
            return Err(ParseError::Negative { offset: self.offset() });
        }
        let coeff = self.number()?;
        self.skip_ws();
        if coeff.is_some() && self.peek() == Some(b'*') {
            self.bump();
            self.skip_ws();
            if self.peek() != Some(b't') {
                return Err(ParseError::syntax(self.offset(), "expected 't' after '*'"));
            }
        }
        if self.peek() != Some(b't') {
            return match coeff {
                Some(c) => Ok((0, c)),
                None => Err(ParseError::syntax(
                    self.offset(),
                    "expected a coefficient or 't'",
                )),
            };
        }
        self.bump();
        self.skip_ws();
        let mut power = 1usize;
        if self.peek() == Some(b'^') {
            self.bump();
            self.skip_ws();
            if self.peek() == Some(b'-') {
                return Err(ParseError::syntax(self.offset(), "negative exponent"));
            }
            let at = self.offset();
            power = self
                .number()?
                .ok_or_else(|| ParseError::syntax(at, "expected exponent after '^'"))?
                as usize;
            if power > 4096 {
                return Err(ParseError::Overflow { offset: at });
            }
        }
        Ok((power, coeff.unwrap_or(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Profile {
        s.parse().unwrap()
    }

    fn q(q: u64) -> PrimePower {
        PrimePower::from_q(q).unwrap()
    }

    #[test]
    fn parses_notation() {
        assert_eq!(p("1+t").coeffs(), &[1, 1]);
        assert_eq!(p("t^2+3").coeffs(), &[3, 0, 1]);
        assert_eq!(p("2t + t").coeffs(), &[0, 3]);
        assert_eq!(p("3*t^2 + 2 * t + 1").coeffs(), &[1, 2, 3]);
        assert_eq!(p("4t^0").coeffs(), &[4]);
        assert_eq!(p("0").coeffs(), &[] as &[u32]);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert_eq!(parse_profile("1+-t"), Err(ParseError::Negative { offset: 2 }));
        assert_eq!(parse_profile("-3"), Err(ParseError::Negative { offset: 0 }));
        assert_eq!(parse_profile("1 - t"), Err(ParseError::Negative { offset: 2 }));
        assert_eq!(parse_profile("1+x").unwrap_err().offset(), 2);
        assert_eq!(parse_profile("t^").unwrap_err().offset(), 2);
        assert_eq!(parse_profile("").unwrap_err().offset(), 0);
        assert_eq!(parse_profile("1+").unwrap_err().offset(), 2);
        assert!(matches!(
            parse_profile("99999999999"),
            Err(ParseError::Overflow { offset: 0 })
        ));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(p("t^2+3").to_string(), "3+t^2");
        assert_eq!(p("3t+1").to_string(), "1+3t");
        assert_eq!(p("t").to_string(), "t");
        assert_eq!(p("2t^3+t^4").to_string(), "2t^3+t^4");
        assert_eq!(Profile::zero().to_string(), "0");
    }

    #[test]
    fn prime_powers() {
        let q9 = q(9);
        assert_eq!((q9.p(), q9.e()), (3, 2));
        assert!(PrimePower::from_q(6).is_err());
        assert!(PrimePower::from_q(1).is_err());
        assert!(PrimePower::new(4, 1).is_err());
        assert!(PrimePower::new(2, 64).is_err());
        assert_eq!(PrimePower::new(2, 63).unwrap().q(), 1 << 63);
        assert_eq!(q(18446744073709551557).e(), 1);
    }

    #[test]
    fn profile_criterion_examples() {
        for qq in [2u64, 3, 4, 5, 7, 8, 9, 25] {
            let qp = q(qq);
            // t + q collides: q = t at t = q
            let a = Profile::new(vec![qq as u32, 1]);
            let check = a.check(qp);
            assert!(!check.is_profile);
            assert_eq!(
                check.witness,
                Some((Profile::constant(qq as u32), Profile::monomial(1)))
            );
            assert!(a.is_profile(qp.pow(2).unwrap()));
            assert!(Profile::constant(1000).is_profile(qp));
            let small = Profile::new(vec![qq as u32 - 1; 4]);
            assert!(small.is_profile(qp));
        }
        assert!(!p("2+t").is_profile(q(2)));
        assert!(p("2+t").is_profile(q(3)));
        assert!(p("t^2+3").is_profile(q(2)));
        assert!(p("1+3t").is_profile(q(2)));
    }

    #[test]
    fn interval_enumeration() {
        let all: Vec<_> = p("1+t").interval_below().map(|b| b.to_string()).collect();
        assert_eq!(all, ["0", "t", "1", "1+t"]);
        let all: Vec<_> = p("3").interval_below().map(|b| b.to_string()).collect();
        assert_eq!(all, ["0", "1", "2", "3"]);
        assert_eq!(p("3t+1").interval_below().count(), 8);
        assert_eq!(Profile::zero().interval_below().count(), 1);
    }

    #[test]
    fn stats() {
        let s = p("1+t").stats(q(3));
        assert_eq!(s.numerical_degree, BigUint::from(4u32));
        assert_eq!(s.coeff_sum, 2);
        assert!(s.is_nlr && !s.is_linear && !s.is_nonreduced);
        let s = p("t^2").stats(q(2));
        assert_eq!(s.numerical_degree, BigUint::from(4u32));
        assert!(s.is_nonreduced && !s.is_nlr);
        assert!(p("1").stats(q(2)).is_linear);
    }

    #[test]
    fn ordering_is_degree_then_lex() {
        let mut v = vec![p("t^2"), p("3"), p("1+t"), p("t"), p("1")];
        v.sort();
        let s: Vec<_> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["1", "3", "t", "1+t", "t^2"]);
    }

    #[test]
    fn base_expansion() {
        assert_eq!(Profile::base_expansion(7, q(2)).to_string(), "1+t+t^2");
        assert_eq!(Profile::base_expansion(9, q(3)).to_string(), "t^2");
    }
}
