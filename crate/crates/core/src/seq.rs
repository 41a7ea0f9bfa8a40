//! Bidirectional ballot sequences.
//!
//! A 0/1 word is a bidirectional ballot sequence (BBS) when every prefix and
//! every suffix holds strictly more ones than zeros. Read as a ±1 lattice
//! path, that is the same as the path having its unique minimum at the start
//! and its unique maximum at the end.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BallotError, Result};
use crate::rational::Rational;

/// Default length cap for exhaustive 2^n scans.
pub const DEFAULT_BRUTE_CAP: usize = 22;

/// A non-empty 0/1 word, stored as `b_1 … b_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BitSequence(Vec<bool>);

impl BitSequence {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(BallotError::InvalidBits("sequence must have length >= 1".into()));
        }
        Ok(Self(bits))
    }

    /// The low `len` bits of `word`, most significant first.
    pub(crate) fn from_word(word: u64, len: usize) -> Self {
        Self((0..len).rev().map(|i| word >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// 1-based access.
    pub fn bit(&self, j: usize) -> bool {
        self.0[j - 1]
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 1)
    }
}

impl FromStr for BitSequence {
    type Err = BallotError;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(BallotError::InvalidBits(format!(
                    "character {other:?} at position {} is not '0' or '1'",
                    i + 1
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }
}

impl fmt::Display for BitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for BitSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Heights of a ±1 lattice path starting at 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HeightPath(Vec<i64>);

impl HeightPath {
    pub fn new(heights: Vec<i64>) -> Result<Self> {
        if heights.first() != Some(&0) {
            return Err(BallotError::Precondition("height path must start at 0".into()));
        }
        if heights.windows(2).any(|w| (w[1] - w[0]).abs() != 1) {
            return Err(BallotError::Precondition("height path steps must be +1 or -1".into()));
        }
        Ok(Self(heights))
    }

    pub fn heights(&self) -> &[i64] {
        &self.0
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when index 0 is the unique minimum and the last index the unique maximum.
    pub fn is_culminating(&self) -> bool {
        let h = &self.0;
        let last = h.len() - 1;
        h.iter().enumerate().all(|(t, &y)| {
            (t == 0 || y > h[0]) && (t == last || y < h[last])
        })
    }
}

pub fn bbs_to_path(b: &BitSequence) -> HeightPath {
    let mut heights = Vec::with_capacity(b.len() + 1);
    let mut y = 0i64;
    heights.push(y);
    for &bit in b.bits() {
        y += if bit { 1 } else { -1 };
        heights.push(y);
    }
    HeightPath(heights)
}

pub fn is_bbs(b: &BitSequence) -> bool {
    let bits = b.bits();
    let total: i64 = bits.iter().map(|&x| if x { 1 } else { -1 }).sum();
    let mut prefix = 0i64;
    for &bit in bits {
        prefix += if bit { 1 } else { -1 };
        // prefix > 0 for every prefix; total - prefix_before > 0 for every suffix
        if prefix <= 0 {
            return false;
        }
    }
    let mut prefix = 0i64;
    for &bit in bits {
        if total - prefix <= 0 {
            return false;
        }
        prefix += if bit { 1 } else { -1 };
    }
    true
}

fn word_is_bbs(word: u64, len: usize) -> bool {
    let mut h = 0i32;
    let mut total = 0i32;
    for i in (0..len).rev() {
        total += if word >> i & 1 == 1 { 1 } else { -1 };
    }
    for i in (0..len).rev() {
        if total - h <= 0 {
            return false;
        }
        h += if word >> i & 1 == 1 { 1 } else { -1 };
        if h <= 0 {
            return false;
        }
    }
    true
}

fn check_cap(operation: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap || n >= 64 {
        return Err(BallotError::CapExceeded { operation, n, cap: cap.min(63) });
    }
    Ok(())
}

/// All BBS of length `n` in lexicographic order, by exhaustive scan.
pub fn enumerate_bbs(n: usize) -> Result<Vec<BitSequence>> {
    enumerate_bbs_capped(n, DEFAULT_BRUTE_CAP)
}

pub fn enumerate_bbs_capped(n: usize, cap: usize) -> Result<Vec<BitSequence>> {
    if n == 0 {
        return Err(BallotError::Precondition("n must be >= 1".into()));
    }
    check_cap("enumerate_bbs", n, cap)?;
    // Every BBS starts and ends with 1; scanning words in increasing order keeps
    // the output lexicographic.
    Ok((0..1u64 << n)
        .into_par_iter()
        .filter(|&w| word_is_bbs(w, n))
        .map(|w| BitSequence::from_word(w, n))
        .collect())
}

pub fn count_bbs_brute(n: usize) -> Result<BigUint> {
    count_bbs_brute_capped(n, DEFAULT_BRUTE_CAP)
}

pub fn count_bbs_brute_capped(n: usize, cap: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(BallotError::Precondition("n must be >= 1".into()));
    }
    check_cap("count_bbs_brute", n, cap)?;
    let count = (0..1u64 << n)
        .into_par_iter()
        .filter(|&w| word_is_bbs(w, n))
        .count();
    Ok(BigUint::from(count))
}

/// Exact count of BBS of length `n`.
pub fn count_bbs(n: usize) -> BigUint {
    assert!(n >= 1, "count_bbs requires n >= 1");
    count_bbs_table(n).pop().unwrap_or_default()
}

/// `[B_1, …, B_max_n]`.
///
/// A BBS of length `n` is a path ending at some height `h` whose interior
/// heights all lie in `1..=h-1`. For each `h` a banded walk over those heights
/// counts such paths for every length at once, so the whole table costs
/// O(max_n^3) big-integer additions.
pub fn count_bbs_table(max_n: usize) -> Vec<BigUint> {
    if max_n == 0 {
        return Vec::new();
    }
    let per_height: Vec<Vec<BigUint>> = (1..=max_n)
        .into_par_iter()
        .map(|h| counts_ending_at_height(h, max_n))
        .collect();
    let mut table = vec![BigUint::zero(); max_n];
    for counts in per_height {
        for (slot, c) in table.iter_mut().zip(counts) {
            *slot += c;
        }
    }
    table
}

/// Entry `n-1` counts paths of length `n` ending at `h` with interior heights in `1..h`.
fn counts_ending_at_height(h: usize, max_n: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); max_n];
    if h == 1 {
        out[0] = BigUint::one();
        return out;
    }
    // band[j] = number of admissible walks currently at height j (1 <= j <= h-1);
    // slots 0 and h stay zero as walls.
    let mut band = vec![BigUint::zero(); h + 1];
    band[1] = BigUint::one();
    let mut next = band.clone();
    for t in 1..max_n {
        // one more up-step from h-1 finishes a path of length t+1
        out[t] = band[h - 1].clone();
        if t + 1 == max_n {
            break;
        }
        for j in 1..h {
            next[j] = &band[j - 1] + &band[j + 1];
        }
        std::mem::swap(&mut band, &mut next);
    }
    out
}

/// `n · B_n / 2^n`, exactly.
pub fn ratio(n: usize) -> Rational {
    ratio_from_count(n, &count_bbs(n))
}

pub fn ratio_from_count(n: usize, count: &BigUint) -> Rational {
    use num_bigint::BigInt;
    let numer = BigInt::from(count.clone()) * BigInt::from(n);
    let denom = BigInt::one() << n;
    Rational::new(numer, denom)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumsetReport {
    pub sumset_full: bool,
    pub diffset_full: bool,
    pub sumset: Vec<i64>,
    pub diffset: Vec<i64>,
}

/// Sumset and difference set of `A = {i : b_i = 1}` against their largest possible ranges.
pub fn sumset_fullness(b: &BitSequence) -> SumsetReport {
    let n = b.len() as i64;
    let a: Vec<i64> = b.ones().map(|i| i as i64).collect();
    let mut sums = BTreeSet::new();
    let mut diffs = BTreeSet::new();
    for &x in &a {
        for &y in &a {
            sums.insert(x + y);
            diffs.insert(x - y);
        }
    }
    let sumset_full = sums.len() as i64 == 2 * n - 1 && sums.iter().copied().eq(2..=2 * n);
    let diffset_full =
        diffs.len() as i64 == 2 * n - 1 && diffs.iter().copied().eq(-(n - 1)..=(n - 1));
    SumsetReport {
        sumset_full,
        diffset_full,
        sumset: sums.into_iter().collect(),
        diffset: diffs.into_iter().collect(),
    }
}
