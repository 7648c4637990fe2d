//! Finite binary strings and the string/number identification.
//!
//! Strings are ordered quasi-lexicographically (λ, 0, 1, 00, 01, 10, 11, ...),
//! and that order is exactly the order of the natural numbers under the
//! bijection s ↦ value(1s) − 1. Everything downstream that compares "strings
//! of length at most n" with "numbers at most g(n)" goes through this one
//! bijection.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A finite word over {0,1}. The empty string λ is `BitString::default()`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: impl IntoIterator<Item = u8>) -> Self {
        let bits: Vec<u8> = bits.into_iter().collect();
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitString { bits }
    }

    /// All-zero (or all-one) word of the given length.
    pub fn repeated(bit: u8, len: u64) -> Self {
        debug_assert!(bit <= 1);
        BitString { bits: vec![bit; len as usize] }
    }

    pub fn len(&self) -> u64 {
        self.bits.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: u64) -> u8 {
        self.bits[i as usize]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn push(&mut self, bit: u8) {
        debug_assert!(bit <= 1);
        self.bits.push(bit);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    /// First `n` bits; the whole string when `n ≥ len`.
    pub fn prefix(&self, n: u64) -> BitString {
        let n = (n as usize).min(self.bits.len());
        BitString { bits: self.bits[..n].to_vec() }
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.len() >= self.bits.len() && other.bits[..self.bits.len()] == self.bits[..]
    }

    /// Value of the word read as a dyadic integer (MSB first; λ ↦ 0).
    pub fn dyadic_value(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &b in &self.bits {
            v = (v << 1) + BigUint::from(b);
        }
        v
    }

    /// The word of length `len` whose dyadic value is `value`.
    pub fn from_dyadic_value(value: &BigUint, len: u64) -> BitString {
        let mut bits = vec![0u8; len as usize];
        for i in 0..len {
            if value.bit(i) {
                bits[(len - 1 - i) as usize] = 1;
            }
        }
        BitString { bits }
    }

    /// Plain dictionary order. On prefix-incomparable strings this is the
    /// left-to-right order of the dyadic intervals they name; a proper prefix
    /// sorts before its extensions.
    pub fn lex_cmp(&self, other: &BitString) -> Ordering {
        self.bits.cmp(&other.bits)
    }
}

/// Quasi-lexicographic order: by length, then bitwise.
impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for BitString {
    type Err = Error;

    /// Parses an ASCII 0/1 word; `""` and `"-"` both denote λ (the dash form
    /// is for whitespace-separated file formats where an empty token is
    /// invisible).
    fn from_str(s: &str) -> Result<BitString> {
        if s == "-" {
            return Ok(BitString::empty());
        }
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("invalid bit character {:?}", ch),
                    })
                }
            }
        }
        Ok(BitString { bits })
    }
}

/// Convenience constructor for literals in tests and fixtures.
pub fn bs(s: &str) -> BitString {
    s.parse().expect("valid bit literal")
}

/// φ(s) = value(1s) − 1, the paper's identification of strings with ℕ.
pub fn string_to_nat(s: &BitString) -> BigUint {
    let mut v = BigUint::one();
    for &b in s.bits() {
        v = (v << 1) + BigUint::from(b);
    }
    v - BigUint::one()
}

/// Inverse of [`string_to_nat`].
pub fn nat_to_string(n: &BigUint) -> BitString {
    let v = n + BigUint::one();
    let nbits = v.bits();
    // drop the leading 1
    let mut bits = Vec::with_capacity(nbits as usize - 1);
    for i in (0..nbits - 1).rev() {
        bits.push(if v.bit(i) { 1 } else { 0 });
    }
    BitString { bits }
}

pub fn nat_to_string_u64(n: u64) -> BitString {
    nat_to_string(&BigUint::from(n))
}

pub fn string_to_nat_u64(s: &BitString) -> Option<u64> {
    string_to_nat(s).to_u64()
}

/// All strings of exactly length `n`, in quasi-lexicographic (= numeric) order.
pub fn strings_of_length(n: u64) -> impl Iterator<Item = BitString> {
    let count: u128 = 1u128 << n.min(64);
    (0..count).map(move |v| {
        let mut bits = Vec::with_capacity(n as usize);
        for i in (0..n).rev() {
            bits.push(((v >> i) & 1) as u8);
        }
        BitString { bits }
    })
}

/// All strings of length ≤ `n` in quasi-lexicographic order (λ first).
pub fn strings_up_to(n: u64) -> impl Iterator<Item = BitString> {
    (0..=n).flat_map(strings_of_length)
}

/// True iff no element of `set` is a prefix of a distinct element.
pub fn is_prefix_free<'a, I>(set: I) -> bool
where
    I: IntoIterator<Item = &'a BitString>,
{
    // sort lexicographically; a prefix is then adjacent to its extension
    let mut sorted: Vec<&BitString> = set.into_iter().collect();
    sorted.sort_by(|a, b| a.lex_cmp(b));
    sorted.windows(2).all(|w| w[0] == w[1] || !w[0].is_prefix_of(w[1]))
}

/// Finds an offending pair if the set is not prefix-free.
pub fn prefix_free_violation(set: &[BitString]) -> Option<(BitString, BitString)> {
    let mut sorted: Vec<&BitString> = set.iter().collect();
    sorted.sort_by(|a, b| a.lex_cmp(b));
    for w in sorted.windows(2) {
        if w[0] != w[1] && w[0].is_prefix_of(w[1]) {
            return Some(((*w[0]).clone(), (*w[1]).clone()));
        }
    }
    None
}

/// s ∈ Pf(α), decided from finitely many expansion bits of α.
///
/// `alpha_bits` must be at least as long as `s`; the caller owns the claim
/// that they are genuine leading bits of the expansion.
pub fn pf_membership(alpha_bits: &BitString, s: &BitString) -> Result<bool> {
    if s.len() > alpha_bits.len() {
        return Err(Error::InsufficientBits {
            needed: s.len(),
            have: alpha_bits.len(),
        });
    }
    Ok(*s == alpha_bits.prefix(s.len()))
}
