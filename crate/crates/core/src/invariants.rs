//! Relation-specific invariants, canonical forms and special families.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::Serialize;

use crate::engine;
use crate::error::{Error, Result};
use crate::oracle;
use crate::perm::Perm;
use crate::relation::{has_no_hit, Mode, Partition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    /// Parity of a 0-based index, counted 1-based.
    pub fn of_index(i: usize) -> Parity {
        if i.is_multiple_of(2) {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

fn same_parity(i: usize, j: usize) -> bool {
    i % 2 == j % 2
}

fn perm_of(letters: Vec<u8>) -> Perm {
    Perm::from_vec_unchecked(letters)
}

// ---------------------------------------------------------------- A_k

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AkSignature {
    pub k: usize,
    pub parity_of_1: Parity,
}

/// Largest k with property A_k, and the position parity of the letter 1.
pub fn a_k_max(p: &Perm) -> AkSignature {
    let pos = p.positions();
    let n = p.len();
    let mut k = 1;
    while k < n && pos[k + 1] < pos[k] && same_parity(pos[k + 1], pos[k]) {
        k += 1;
    }
    AkSignature { k, parity_of_1: Parity::of_index(pos[1]) }
}

/// One-line notation of a product of cycles `(1,2,..,m)`, applied right to left.
fn cycle_product(n: usize, lengths: &[usize]) -> Perm {
    let mut img: Vec<u8> = (1..=n as u8).collect();
    for &m in lengths.iter().rev() {
        for v in img.iter_mut() {
            let x = *v as usize;
            if x <= m && m > 1 {
                *v = if x == m { 1 } else { x as u8 + 1 };
            }
        }
    }
    perm_of(img)
}

fn tail_lengths(first: usize, n: usize) -> Vec<usize> {
    let mut out = vec![first];
    let stop = if n % 2 == 1 { 1 } else { 2 };
    let mut m = n as isize - 4;
    while m >= stop as isize {
        out.push(m as usize);
        m -= 2;
    }
    out
}

pub fn b_perm(n: usize) -> Result<Perm> {
    if !(3..=crate::perm::MAX_N).contains(&n) {
        return Err(Error::InvalidArgument(format!("b_n needs 3 <= n <= 20, got {n}")));
    }
    Ok(cycle_product(n, &tail_lengths(n - 2, n)))
}

pub fn generate_b(n: usize) -> Result<Vec<Perm>> {
    let b = b_perm(n)?;
    let mut out = if n == 3 {
        Vec::new()
    } else {
        generate_b(n - 1)?
            .into_iter()
            .map(|w| {
                let mut v = w.into_letters();
                v.push(n as u8);
                perm_of(v)
            })
            .collect()
    };
    out.push(b);
    out.sort();
    Ok(out)
}

pub fn generate_c(n: usize) -> Result<Vec<Perm>> {
    let b = b_perm(n)?;
    let mut out: Vec<Perm> = generate_b(n)?.into_iter().filter(|w| *w != b).collect();
    out.push(cycle_product(n, &tail_lengths(n, n)));
    out.sort();
    out.dedup();
    Ok(out)
}

// ---------------------------------------------------------------- odd-tailed

/// Letters that are left-to-right minima whose x-min has the other position parity.
pub fn odd_tailed_set(p: &Perm) -> Vec<u8> {
    let w = p.letters();
    let mut is_min = vec![false; w.len()];
    let mut low = u8::MAX;
    for (i, &x) in w.iter().enumerate() {
        if x < low {
            is_min[i] = true;
            low = x;
        }
    }
    let mut out: Vec<u8> = (0..w.len())
        .filter(|&i| is_min[i])
        .filter(|&i| match (i + 1..w.len()).find(|&j| is_min[j]) {
            Some(j) => !same_parity(i, j),
            None => false,
        })
        .map(|i| w[i])
        .collect();
    out.sort_unstable();
    out
}

// ---------------------------------------------------------------- W_w

/// Leftmost of the largest and smallest letters.
pub fn proximum(w: &[u8]) -> usize {
    let lo = (0..w.len()).min_by_key(|&i| w[i]).expect("non-empty word");
    let hi = (0..w.len()).max_by_key(|&i| w[i]).expect("non-empty word");
    lo.min(hi)
}

/// 0-based positions of W_w, left to right.
fn w_positions(w: &[u8]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut end = w.len();
    while end > 1 {
        let u = proximum(&w[..end]);
        out.push(u);
        end = u + 1;
    }
    out.reverse();
    out
}

/// Letters of W_w in order of appearance.
pub fn w_set(p: &Perm) -> Vec<u8> {
    w_positions(p.letters()).into_iter().map(|i| p.letters()[i]).collect()
}

pub fn origin_permutation(p: &Perm) -> Perm {
    let head = w_set(p);
    let mut out = head.clone();
    out.extend((1..=p.len() as u8).filter(|v| !head.contains(v)));
    perm_of(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Extremum {
    Valley,
    Peak,
}

/// Letters of W_w read right to left, each labeled valley or peak.
pub fn valleys_peaks(p: &Perm) -> Vec<(u8, Extremum)> {
    let n = p.len() as u8;
    let g: Vec<u8> = w_set(p).into_iter().rev().collect();
    if g.len() == 1 {
        let label = if g[0] == 1 { Extremum::Valley } else { Extremum::Peak };
        debug_assert!(g[0] == 1 || g[0] == n);
        return vec![(g[0], label)];
    }
    (0..g.len())
        .map(|i| {
            let below = |j: Option<usize>| j.is_none_or(|j| g[i] < g[j]);
            let left = i.checked_sub(1);
            let right = (i + 1 < g.len()).then_some(i + 1);
            let label = if below(left) && below(right) {
                Extremum::Valley
            } else {
                Extremum::Peak
            };
            (g[i], label)
        })
        .collect()
}

/// The j-values: g for a valley, n - g for a peak.
pub fn j_values(p: &Perm) -> Vec<u64> {
    let n = p.len() as u64;
    valleys_peaks(p)
        .into_iter()
        .map(|(g, e)| match e {
            Extremum::Valley => g as u64,
            Extremum::Peak => n - g as u64,
        })
        .collect()
}

/// Class size predicted from the j-values.
pub fn w_class_size(p: &Perm) -> BigUint {
    oracle::class_size_product(p.len(), &j_values(p)).expect("j-values are positive")
}

// ---------------------------------------------------------------- fall

/// Letters k such that every larger letter has k's position parity.
pub fn fall(p: &Perm) -> Vec<u8> {
    let pos = p.positions();
    let n = p.len();
    let mut out = Vec::new();
    for k in (1..=n).rev() {
        if (k + 1..=n).all(|m| same_parity(pos[m], pos[k])) {
            out.push(k as u8);
        } else {
            break;
        }
    }
    out.reverse();
    out
}

/// Fall letters in order of appearance.
pub fn fall_order(p: &Perm) -> Vec<u8> {
    let f = fall(p);
    p.letters().iter().copied().filter(|v| f.contains(v)).collect()
}

/// Position parity of each letter 1..=n.
pub fn parity_profile(p: &Perm) -> Vec<Parity> {
    p.positions()[1..].iter().map(|&i| Parity::of_index(i)).collect()
}

// ---------------------------------------------------------------- predicates

pub fn is_v(p: &Perm) -> bool {
    let w = p.letters();
    let one = p.position(1);
    w[..=one].windows(2).all(|x| x[0] > x[1]) && w[one..].windows(2).all(|x| x[0] < x[1])
}

/// Every letter of one position parity is below every letter of the other.
pub fn is_layered(p: &Perm) -> bool {
    let w = p.letters();
    if w.len() < 2 {
        return true;
    }
    let odd_max = w.iter().step_by(2).max().unwrap();
    let odd_min = w.iter().step_by(2).min().unwrap();
    let even_max = w.iter().skip(1).step_by(2).max().unwrap();
    let even_min = w.iter().skip(1).step_by(2).min().unwrap();
    odd_max < even_min || even_max < odd_min
}

pub fn is_zipped(p: &Perm) -> bool {
    p.letters().windows(3).all(|x| x[2] < x[0])
}

pub fn is_partially_zipped(p: &Perm) -> bool {
    let w = p.letters();
    let n = w.len();
    n >= 3
        && w[n - 2] == 1
        && w[n - 1] == n as u8
        && w[..n - 1].windows(3).all(|x| x[2] < x[0])
}

fn peak_count(f: &[u8]) -> usize {
    (0..f.len())
        .filter(|&i| (i == 0 || f[i - 1] < f[i]) && (i + 1 == f.len() || f[i + 1] < f[i]))
        .count()
}

/// Splits a word before the second letter of its first 321 factor.
fn split_321(w: &[u8]) -> (&[u8], &[u8]) {
    for i in 0..w.len().saturating_sub(2) {
        if w[i] > w[i + 1] && w[i + 1] > w[i + 2] {
            return w.split_at(i + 1);
        }
    }
    (w, &[])
}

fn compact_condition_1(w: &[u8]) -> bool {
    let n = w.len();
    if n < 2 || w[0] < w[1] {
        return false;
    }
    let (lead, rest) = split_321(w);
    for i in 0..lead.len() - 1 {
        if (lead[i] > lead[i + 1]) != (i % 2 == 0) {
            return false;
        }
    }
    let peaks: Vec<u8> = lead.iter().step_by(2).copied().collect();
    let dips: Vec<u8> = lead.iter().skip(1).step_by(2).copied().collect();
    if !peaks.windows(2).all(|x| x[0] > x[1]) || !dips.windows(2).all(|x| x[0] < x[1]) {
        return false;
    }
    let mut sorted = w.to_vec();
    sorted.sort_unstable();
    let rank = |v: u8| sorted.binary_search(&v).unwrap() + 1;
    if peaks.iter().any(|&v| rank(v) <= n - peaks.len()) {
        return false;
    }
    if rest.is_empty() {
        return true;
    }
    if !compact_condition_1(rest) {
        return false;
    }
    match dips.last() {
        Some(&j) => peak_count(lead) + peak_count(split_321(rest).0) <= n - rank(j),
        None => true,
    }
}

pub fn is_compact(p: &Perm) -> bool {
    let w = p.letters();
    if w.len() >= 2 && w[0] < w[1] {
        let mut lifted = vec![w.len() as u8 + 1];
        lifted.extend_from_slice(w);
        compact_condition_1(&lifted)
    } else {
        w.len() == 1 || compact_condition_1(w)
    }
}

/// Odd and even positions of the prefix through 1 decrease; letters sharing
/// 1's parity there sit below their neighbors; the rest increases.
pub fn is_bushy_tailed(p: &Perm) -> bool {
    let w = p.letters();
    let one = p.position(1);
    let x = &w[..=one];
    let dec = |s: Vec<u8>| s.windows(2).all(|a| a[0] > a[1]);
    if !dec(x.iter().step_by(2).copied().collect()) || !dec(x.iter().skip(1).step_by(2).copied().collect()) {
        return false;
    }
    for i in (0..=one).filter(|&i| same_parity(i, one)) {
        if i > 0 && x[i - 1] < x[i] {
            return false;
        }
        if i < one && x[i + 1] < x[i] {
            return false;
        }
    }
    w[one..].windows(2).all(|a| a[0] < a[1])
}

pub fn is_fronted(p: &Perm) -> bool {
    let w = p.letters();
    let n = w.len() as u8;
    if n < 2 {
        return false;
    }
    w[0] == n - 1 || (w.len() >= 3 && w[0] <= n.saturating_sub(2) && w[1] == n && w[2] == n - 1)
}

fn partition_cache(slot: &'static OnceLock<Partition>, text: &str) -> &'static Partition {
    slot.get_or_init(|| text.parse().expect("built-in partition"))
}

fn k_132_213_231() -> &'static Partition {
    static K: OnceLock<Partition> = OnceLock::new();
    partition_cache(&K, "{132,213,231}")
}

pub fn is_reductive(p: &Perm) -> bool {
    let w = p.letters();
    let n = w.len();
    n >= 3
        && w[0] != (n - 2) as u8
        && w[n - 2] == (n - 1) as u8
        && w[n - 1] == n as u8
        && !has_no_hit(&w[..n - 1], k_132_213_231(), Mode::Factor)
}

pub fn is_decent(p: &Perm) -> bool {
    let w = p.letters();
    let n = w.len();
    n >= 3
        && w[0] == (n - 2) as u8
        && w[1] != (n - 1) as u8
        && w[n - 1] == n as u8
        && !has_no_hit(&w[1..], k_132_213_231(), Mode::Factor)
}

/// Largest k such that the permutation satisfies C_k, if any.
///
/// The hill letters are `n-1, n-2, .., n-k` in that order, either as a prefix
/// not followed by n, or split by a factor `j n`.
pub fn hill_c_k(p: &Perm) -> Option<usize> {
    let w = p.letters();
    let n = w.len();
    let top = n as u8;
    let run = |k: usize| (0..k).map(move |t| top - 1 - t as u8);
    let holds = |k: usize| -> bool {
        if w.iter().take(k).copied().eq(run(k)) && w.get(k) != Some(&top) {
            return true;
        }
        (0..=k).any(|g| {
            g + 2 + (k - g) <= n
                && w[..g].iter().copied().eq(run(g))
                && w[g + 1] == top
                && w[g + 2..g + 2 + k - g].iter().copied().eq(run(k).skip(g))
        })
    };
    (1..n).rev().find(|&k| holds(k))
}

pub fn is_lefted(p: &Perm, k: &Partition) -> bool {
    p.len() >= 2 && !has_no_hit(&p.letters()[1..], k, Mode::Factor)
}

pub fn is_righted(p: &Perm, k: &Partition) -> bool {
    p.len() >= 2 && !has_no_hit(&p.letters()[..p.len() - 1], k, Mode::Factor)
}

pub fn is_middled(p: &Perm, k: &Partition) -> bool {
    p.len() >= 3 && !has_no_hit(&p.letters()[1..p.len() - 1], k, Mode::Factor)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub is_v: bool,
    pub is_layered: bool,
    pub is_zipped: bool,
    pub is_partially_zipped: bool,
    pub is_compact: bool,
    pub is_bushy_tailed: bool,
    pub is_fronted: bool,
    pub is_reductive: bool,
    pub is_decent: bool,
    pub hill_c_k: Option<usize>,
}

pub fn predicates(p: &Perm) -> Predicates {
    Predicates {
        is_v: is_v(p),
        is_layered: is_layered(p),
        is_zipped: is_zipped(p),
        is_partially_zipped: is_partially_zipped(p),
        is_compact: is_compact(p),
        is_bushy_tailed: is_bushy_tailed(p),
        is_fronted: is_fronted(p),
        is_reductive: is_reductive(p),
        is_decent: is_decent(p),
        hill_c_k: hill_c_k(p),
    }
}

// ---------------------------------------------------------------- canonical forms

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalKind {
    Bushy,
    Root,
    VPerm,
    VPermSplit,
    Compact,
}

impl CanonicalKind {
    pub const ALL: [CanonicalKind; 5] = [
        CanonicalKind::Bushy,
        CanonicalKind::Root,
        CanonicalKind::VPerm,
        CanonicalKind::VPermSplit,
        CanonicalKind::Compact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CanonicalKind::Bushy => "bushy",
            CanonicalKind::Root => "root",
            CanonicalKind::VPerm => "v_perm",
            CanonicalKind::VPermSplit => "v_perm_split",
            CanonicalKind::Compact => "compact",
        }
    }

    /// Relation under which the form is computed.
    pub fn relation(self) -> &'static str {
        match self {
            CanonicalKind::Bushy => "{123,132}{213,321}",
            CanonicalKind::Root => "{123,132}{213,312}",
            CanonicalKind::VPerm => "{123,132,231}",
            CanonicalKind::VPermSplit => "{123,132}{213,231}",
            CanonicalKind::Compact => "{123,231}{213,312}",
        }
    }
}

impl fmt::Display for CanonicalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CanonicalKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<CanonicalKind> {
        CanonicalKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnknownRelation(format!("no canonical form named {s:?}")))
    }
}

pub fn canonical_form(p: &Perm, kind: CanonicalKind) -> Perm {
    let mut w = p.letters().to_vec();
    match kind {
        CanonicalKind::Bushy => bushy_canon(&mut w),
        CanonicalKind::Root => slide_max_left(&mut w),
        CanonicalKind::VPerm => v_canon(&mut w, false),
        CanonicalKind::VPermSplit => v_canon(&mut w, true),
        CanonicalKind::Compact => compact_canon(&mut w),
    }
    perm_of(w)
}

/// Root permutation: slide n left with 123->132 and 213->312.
pub fn root_permutation(p: &Perm) -> Perm {
    canonical_form(p, CanonicalKind::Root)
}

fn slide_max_left(w: &mut [u8]) {
    let mut m = w.iter().enumerate().max_by_key(|x| x.1).map_or(0, |x| x.0);
    while m >= 2 {
        let (a, b, top) = (w[m - 2], w[m - 1], w[m]);
        if a < b {
            w[m - 2..=m].copy_from_slice(&[a, top, b]);
            m -= 1;
        } else {
            w[m - 2..=m].copy_from_slice(&[top, b, a]);
            m -= 2;
        }
    }
}

fn v_canon(w: &mut [u8], split: bool) {
    let n = w.len();
    if n <= 1 {
        return;
    }
    let mut m = w.iter().enumerate().max_by_key(|x| x.1).unwrap().0;
    if m == 0 {
        v_canon(&mut w[1..], split);
        return;
    }
    while m + 1 < n {
        let (a, b, top) = (w[m - 1], w[m + 1], w[m]);
        let (x, y) = if split || a < b { (a, b) } else { (b, a) };
        w[m - 1..=m + 1].copy_from_slice(&[x, y, top]);
        m += 1;
    }
    v_canon(&mut w[..n - 1], split);
}

fn compact_canon(w: &mut [u8]) {
    'outer: loop {
        for i in 0..w.len().saturating_sub(2) {
            let (a, b, c) = (w[i], w[i + 1], w[i + 2]);
            if b < a && a < c {
                w[i] = c;
                w[i + 2] = a;
                continue 'outer;
            }
        }
        return;
    }
}

fn k_bushy() -> &'static Partition {
    static K: OnceLock<Partition> = OnceLock::new();
    partition_cache(&K, "{123,132}{213,321}")
}

/// Lexicographically least word in the class, found by alternately
/// minimizing the first and last n-1 letters.
fn bushy_canon(w: &mut [u8]) {
    let n = w.len();
    if n <= 4 {
        let std = crate::perm::standardize(&w.iter().map(|&v| v as u32).collect::<Vec<_>>())
            .expect("distinct letters");
        let class = engine::class_of(&std, k_bushy(), Mode::Factor, usize::MAX).expect("small class");
        let mut sorted = w.to_vec();
        sorted.sort_unstable();
        for (slot, &r) in w.iter_mut().zip(class[0].letters()) {
            *slot = sorted[r as usize - 1];
        }
        return;
    }
    loop {
        let before = w.to_vec();
        bushy_canon(&mut w[..n - 1]);
        bushy_canon(&mut w[1..]);
        if *w == before[..] {
            return;
        }
    }
}

// ---------------------------------------------------------------- special families

/// Letters other than 1, 2 increasing, with 21 adjacent.
pub fn t_family(n: usize) -> Result<Vec<Perm>> {
    check_family_n(n, 2)?;
    let rest: Vec<u8> = (3..=n as u8).collect();
    let mut out: Vec<Perm> = (0..=rest.len())
        .map(|i| {
            let mut v = rest[..i].to_vec();
            v.extend_from_slice(&[2, 1]);
            v.extend_from_slice(&rest[i..]);
            perm_of(v)
        })
        .collect();
    out.sort();
    Ok(out)
}

/// The decreasing permutation with one adjacent pair swapped.
pub fn e_family(n: usize) -> Result<Vec<Perm>> {
    check_family_n(n, 2)?;
    let mut out: Vec<Perm> = (0..n - 1)
        .map(|i| {
            let mut v = Perm::decreasing(n).into_letters();
            v.swap(i, i + 1);
            perm_of(v)
        })
        .collect();
    out.sort();
    Ok(out)
}

fn check_family_n(n: usize, min: usize) -> Result<()> {
    if n < min || n > crate::perm::MAX_N {
        return Err(Error::InvalidArgument(format!("n={n} outside {min}..={}", crate::perm::MAX_N)));
    }
    Ok(())
}

/// Odd positions from the left take 2, 3, ..; the last is 1; the other
/// positions are filled right to left with the remaining letters increasing.
fn zigzag(n: usize, last_odd: usize) -> Perm {
    let mut v = vec![0u8; n];
    let mut next = 2u8;
    for i in (0..last_odd).step_by(2) {
        v[i] = next;
        next += 1;
    }
    v[n - 1] = 1;
    for i in (0..n).rev() {
        if v[i] == 0 {
            v[i] = next;
            next += 1;
        }
    }
    perm_of(v)
}

pub fn s_perm(n: usize) -> Result<Perm> {
    check_family_n(n, 3)?;
    if n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("s needs odd n, got {n}")));
    }
    Ok(zigzag(n, n - 2))
}

pub fn d_perm(n: usize) -> Result<Perm> {
    check_family_n(n, 4)?;
    if n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("d needs even n, got {n}")));
    }
    Ok(zigzag(n, n - 1))
}

pub fn f_perm(n: usize) -> Result<Perm> {
    let mut v = d_perm(n)?.into_letters();
    v.swap(n - 2, n - 1);
    Ok(perm_of(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialFamilies {
    pub n: usize,
    pub t: Vec<Perm>,
    pub e: Vec<Perm>,
    pub s: Option<Perm>,
    pub s_prime: Option<Perm>,
    pub d: Option<Perm>,
    pub f: Option<Perm>,
    pub d_prime: Option<Perm>,
    pub f_prime: Option<Perm>,
}

/// All families for `n`; the parity-restricted ones are `None` when undefined.
pub fn special_families(n: usize) -> Result<SpecialFamilies> {
    let s = s_perm(n).ok();
    let d = d_perm(n).ok();
    let f = f_perm(n).ok();
    Ok(SpecialFamilies {
        n,
        t: t_family(n)?,
        e: e_family(n)?,
        s_prime: s.as_ref().map(Perm::complement),
        d_prime: f.as_ref().map(Perm::complement),
        f_prime: d.as_ref().map(Perm::complement),
        s,
        d,
        f,
    })
}

// ---------------------------------------------------------------- dangerous pairs

/// Pairs (j, k) with j < k, j left of k, equal position parity, and more
/// j,k-extremes of the other parity than of theirs.
pub fn dangerous_pairs(p: &Perm) -> Vec<(u8, u8)> {
    let w = p.letters();
    let mut out = Vec::new();
    for a in 0..w.len() {
        for b in (a + 2..w.len()).step_by(2) {
            let (j, k) = (w[a], w[b]);
            if j > k {
                continue;
            }
            let mut same = 0;
            let mut other = 0;
            for (i, &s) in w.iter().enumerate().take(b).skip(a + 1) {
                if s < j || s > k {
                    if same_parity(i, a) {
                        same += 1;
                    } else {
                        other += 1;
                    }
                }
            }
            if other > same {
                out.push((j, k));
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn pdangerous_pairs(p: &Perm) -> Vec<(u8, u8)> {
    let n = p.len() as u8;
    let pos = p.positions();
    dangerous_pairs(p)
        .into_iter()
        .filter(|&(j, k)| {
            let ext = |v: u8| v == 1 || v == n;
            match (ext(j), ext(k)) {
                (false, false) => true,
                (true, true) => false,
                _ => {
                    let e = if ext(j) { j } else { k };
                    let other = if e == 1 { n } else { 1 };
                    let (lo, hi) = (pos[j as usize], pos[k as usize]);
                    let at = pos[other as usize];
                    !(lo < at && at < hi)
                }
            }
        })
        .collect()
}

// ---------------------------------------------------------------- report

/// A named invariant value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(u64),
    OptInt(Option<u64>),
    Text(String),
    Letters(Vec<u8>),
    Parities(Vec<Parity>),
    Pairs(Vec<(u8, u8)>),
    Labels(Vec<(u8, Extremum)>),
    Perm(Perm),
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub relation: &'static str,
    pub value: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub relation_key: Option<String>,
    pub permutation: Perm,
    pub values: BTreeMap<String, Entry>,
}

/// Names of every value in a full report.
pub const INVARIANT_NAMES: &[&str] = &[
    "a_k_max",
    "parity_of_1",
    "odd_tailed",
    "is_v",
    "v_perm",
    "fronted",
    "reductive",
    "decent",
    "w_set",
    "origin_permutation",
    "valleys_peaks",
    "j_values",
    "w_class_size",
    "hill_c_k",
    "bushy",
    "is_bushy_tailed",
    "root",
    "fall",
    "fall_order",
    "parity_profile",
    "is_layered",
    "dangerous_pairs",
    "pdangerous_pairs",
    "is_zipped",
    "is_partially_zipped",
    "compact",
    "is_compact",
    "v_perm_split",
];

fn entries(p: &Perm) -> Vec<(&'static str, &'static str, Value)> {
    let ak = a_k_max(p);
    let canon = |k: CanonicalKind| Value::Perm(canonical_form(p, k));
    let big = w_class_size(p);
    let size = oracle::to_u64(&big).map_or(Value::Text(big.to_string()), Value::Int);
    let letters = |v: Vec<u8>| Value::Letters(v);
    vec![
        ("a_k_max", "{123,132,321}", Value::Int(ak.k as u64)),
        ("parity_of_1", "{123,132,321}", Value::Text(ak.parity_of_1.to_string())),
        ("odd_tailed", "{123,132,231}", letters(odd_tailed_set(p))),
        ("is_v", "{123,132,231}", Value::Bool(is_v(p))),
        ("v_perm", "{123,132,231}", canon(CanonicalKind::VPerm)),
        ("fronted", "{123,132,312}", Value::Bool(is_fronted(p))),
        ("reductive", "{132,213,231}", Value::Bool(is_reductive(p))),
        ("decent", "{132,213,231}", Value::Bool(is_decent(p))),
        ("w_set", "{123,132}{312,321}", letters(w_set(p))),
        ("origin_permutation", "{123,132}{312,321}", Value::Perm(origin_permutation(p))),
        ("valleys_peaks", "{123,132}{312,321}", Value::Labels(valleys_peaks(p))),
        ("j_values", "{123,132}{312,321}", letters(j_values(p).iter().map(|&j| j as u8).collect())),
        ("w_class_size", "{123,132}{312,321}", size),
        ("hill_c_k", "{123,231}{132,213}", Value::OptInt(hill_c_k(p).map(|k| k as u64))),
        ("bushy", "{123,132}{213,321}", canon(CanonicalKind::Bushy)),
        ("is_bushy_tailed", "{123,132}{213,321}", Value::Bool(is_bushy_tailed(p))),
        ("root", "{123,132}{213,312}", canon(CanonicalKind::Root)),
        ("fall", "{123,321}{132,231}", letters(fall(p))),
        ("fall_order", "{123,321}{132,231}", letters(fall_order(p))),
        ("parity_profile", "{123,321}{132,231}", Value::Parities(parity_profile(p))),
        ("is_layered", "{123,231}{213,321}", Value::Bool(is_layered(p))),
        ("dangerous_pairs", "{123,321}{132,213}", Value::Pairs(dangerous_pairs(p))),
        ("pdangerous_pairs", "{123,321}{132,213}", Value::Pairs(pdangerous_pairs(p))),
        ("is_zipped", "{123,321}{132,213}", Value::Bool(is_zipped(p))),
        ("is_partially_zipped", "{123,321}{132,213}", Value::Bool(is_partially_zipped(p))),
        ("compact", "{123,231}{213,312}", canon(CanonicalKind::Compact)),
        ("is_compact", "{123,231}{213,312}", Value::Bool(is_compact(p))),
        ("v_perm_split", "{123,132}{213,231}", canon(CanonicalKind::VPermSplit)),
    ]
}

/// Every invariant of `p`, or only those attached to `relation` when given.
pub fn invariant_report(p: &Perm, relation: Option<&Partition>) -> InvariantReport {
    let mut values = BTreeMap::new();
    for (name, rel, value) in entries(p) {
        if let Some(k) = relation {
            let r: Partition = rel.parse().expect("built-in partition");
            if r != *k {
                continue;
            }
        }
        values.insert(name.to_string(), Entry { relation: rel, value });
    }
    InvariantReport {
        relation_key: relation.map(|k| k.to_string()),
        permutation: p.clone(),
        values,
    }
}
