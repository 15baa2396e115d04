//! Permutations in one-line notation with 1-based letters.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest n for which permutations can be built and ranked.
pub const MAX_N: usize = 20;

/// A permutation of `1..=n`, stored as its one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn new(letters: Vec<u8>) -> Result<Perm> {
        let n = letters.len();
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidPermutation(format!("length {n} not in 1..={MAX_N}")));
        }
        let mut seen = [false; MAX_N + 1];
        for &v in &letters {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{letters:?} is not a permutation of 1..{n}")));
            }
            seen[v] = true;
        }
        Ok(Perm(letters))
    }

    pub(crate) fn from_vec_unchecked(letters: Vec<u8>) -> Perm {
        debug_assert!(Perm::new(letters.clone()).is_ok());
        Perm(letters)
    }

    pub fn identity(n: usize) -> Perm {
        Perm((1..=n as u8).collect())
    }

    pub fn decreasing(n: usize) -> Perm {
        Perm((1..=n as u8).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    /// 0-based position of letter `v`.
    pub fn position(&self, v: u8) -> usize {
        self.0.iter().position(|&x| x == v).expect("letter in range")
    }

    /// Inverse permutation as a table: `pos[v]` is the 0-based position of `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len() + 1];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v as usize] = i;
        }
        pos
    }

    pub fn complement(&self) -> Perm {
        let m = self.len() as u8 + 1;
        Perm(self.0.iter().map(|&v| m - v).collect())
    }

    pub fn reverse(&self) -> Perm {
        Perm(self.0.iter().rev().copied().collect())
    }

    /// True when the permutation has an even number of inversions.
    pub fn is_even(&self) -> bool {
        inversions(&self.0).is_multiple_of(2)
    }

    pub fn rank(&self) -> u64 {
        rank_slice(&self.0)
    }

    pub fn unrank(n: usize, r: u64) -> Result<Perm> {
        if n == 0 || n > MAX_N || r >= factorial(n) {
            return Err(Error::RankOutOfRange { rank: r, n });
        }
        let mut out = vec![0u8; n];
        unrank_into(r, &mut out);
        Ok(Perm(out))
    }

    /// Lexicographic successor in place; false when already the last one.
    pub fn next_in_place(&mut self) -> bool {
        next_permutation(&mut self.0)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() >= 10 {
            let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        } else {
            for v in &self.0 {
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({self})")
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Perm> {
        let s = s.trim();
        let letters: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u8>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidPermutation(s.to_string()))?
        } else {
            if s.len() > 9 {
                return Err(Error::InvalidPermutation(format!(
                    "{s}: use comma-separated letters when n >= 10"
                )));
            }
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as u8))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidPermutation(s.to_string()))?
        };
        Perm::new(letters)
    }
}

impl serde::Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Order permutation of a word with distinct letters.
pub fn standardize(word: &[u32]) -> Result<Perm> {
    if word.is_empty() || word.len() > MAX_N {
        return Err(Error::InvalidWord(format!("length {} not in 1..={MAX_N}", word.len())));
    }
    let mut sorted = word.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidWord(format!("{word:?} has repeated letters")));
    }
    Ok(Perm(
        word.iter()
            .map(|x| sorted.binary_search(x).unwrap() as u8 + 1)
            .collect(),
    ))
}

/// 1-based start positions of consecutive occurrences of `pattern`.
pub fn factor_occurrences(p: &Perm, pattern: &Perm) -> Vec<usize> {
    let c = pattern.len();
    if c > p.len() {
        return Vec::new();
    }
    let target = pattern.rank();
    (0..=p.len() - c)
        .filter(|&i| rank_slice(&p.0[i..i + c]) == target)
        .map(|i| i + 1)
        .collect()
}

/// All increasing 1-based index tuples whose letters form `pattern`.
pub fn subword_occurrences(p: &Perm, pattern: &Perm) -> Vec<Vec<usize>> {
    let c = pattern.len();
    let mut out = Vec::new();
    if c > p.len() {
        return out;
    }
    let target = pattern.rank();
    let mut buf = vec![0u8; c];
    for_each_combination(p.len(), c, |idx| {
        for (b, &i) in buf.iter_mut().zip(idx) {
            *b = p.0[i];
        }
        if rank_slice(&buf) == target {
            out.push(idx.iter().map(|i| i + 1).collect());
        }
    });
    out
}

/// Calls `f` with every increasing `k`-subset of `0..n`, lexicographically.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Lexicographic rank of the order permutation of `w` (letters distinct).
pub(crate) fn rank_slice(w: &[u8]) -> u64 {
    let n = w.len();
    let mut r = 0u64;
    for i in 0..n {
        let smaller = w[i + 1..].iter().filter(|&&y| y < w[i]).count() as u64;
        r = r * (n - i) as u64 + smaller;
    }
    r
}

pub(crate) fn unrank_into(mut r: u64, out: &mut [u8]) {
    let n = out.len();
    let mut digits = [0u8; MAX_N];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = (r % base) as u8;
        r /= base;
    }
    let mut avail: Vec<u8> = (1..=n as u8).collect();
    for i in 0..n {
        out[i] = avail.remove(digits[i] as usize);
    }
}

pub(crate) fn next_permutation(a: &mut [u8]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] > a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] < a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn inversions(w: &[u8]) -> usize {
    let mut count = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                count += 1;
            }
        }
    }
    count
}

/// Iterates `S_n` in lexicographic order.
pub fn all_perms(n: usize) -> impl Iterator<Item = Perm> {
    let mut cur = Some(Perm::identity(n));
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        if next.next_in_place() {
            cur = Some(next);
        }
        Some(out)
    })
}
