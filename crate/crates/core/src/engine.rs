//! Exhaustive class decomposition of `S_n`.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{factorial, for_each_combination, next_permutation, rank_slice, unrank_into, Perm};
use crate::relation::{for_each_neighbor, Mode, Partition};

pub const FACTOR_BOUND: usize = 10;
pub const SUBWORD_BOUND: usize = 8;
pub const LARGE_BOUND: usize = 12;

/// Approximate bytes held per permutation during enumeration.
const BYTES_PER_PERM: u64 = 12;

const BLOCK: usize = 1 << 12;
const BLOCKS_PER_BATCH: usize = 256;

#[derive(Debug, Clone)]
pub struct EngineConfig {
    /// Worker threads; `None` uses every core.
    pub workers: Option<usize>,
    pub allow_large: bool,
    /// Overrides `PERMCLASS_MEMORY_CAP_MB` and `/proc/meminfo`.
    pub memory_cap_mb: Option<u64>,
    /// Largest class `class_of` will explore.
    pub class_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            workers: None,
            allow_large: false,
            memory_cap_mb: None,
            class_cap: 20_000_000,
        }
    }
}

impl EngineConfig {
    pub fn with_workers(workers: usize) -> Self {
        EngineConfig {
            workers: Some(workers),
            ..Default::default()
        }
    }

    fn memory_cap(&self) -> Option<u64> {
        self.memory_cap_mb.or_else(|| {
            std::env::var("PERMCLASS_MEMORY_CAP_MB")
                .ok()
                .and_then(|v| v.trim().parse().ok())
        })
    }

    fn run<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        match self.workers {
            Some(w) => rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .expect("thread pool")
                .install(f),
            None => f(),
        }
    }
}

/// Megabytes needed to decompose `S_n`.
pub fn memory_estimate_mb(n: usize) -> u64 {
    let edges = (BLOCK * BLOCKS_PER_BATCH) as u64 * 8 * 8;
    (factorial(n) * BYTES_PER_PERM + edges) / (1 << 20) + 1
}

fn available_mb() -> Option<u64> {
    let info = std::fs::read_to_string("/proc/meminfo").ok()?;
    info.lines()
        .find(|l| l.starts_with("MemAvailable:"))
        .and_then(|l| l.split_whitespace().nth(1))
        .and_then(|kb| kb.parse::<u64>().ok())
        .map(|kb| kb / 1024)
}

/// Refuses sizes over the configured bounds or the available memory.
pub fn check_bounds(n: usize, mode: Mode, cfg: &EngineConfig) -> Result<()> {
    let required_mb = memory_estimate_mb(n.min(crate::perm::MAX_N));
    let bound = match mode {
        Mode::Factor => FACTOR_BOUND,
        Mode::Subword => SUBWORD_BOUND,
    };
    if n > bound && (!cfg.allow_large || n > LARGE_BOUND) {
        return Err(Error::TooLarge {
            n,
            mode: mode.as_str(),
            bound: if cfg.allow_large { LARGE_BOUND } else { bound },
            required_mb,
        });
    }
    let cap = cfg.memory_cap();
    let available = match (cap, n > bound) {
        (Some(c), _) => Some(c),
        (None, true) => Some(available_mb().unwrap_or(0)),
        (None, false) => None,
    };
    if let Some(available_mb) = available {
        if required_mb > available_mb {
            return Err(Error::InsufficientMemory {
                required_mb,
                available_mb,
            });
        }
    }
    Ok(())
}

/// Partition of `S_n` into classes; ids follow the smallest rank in each class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecomposition {
    n: usize,
    mode: Mode,
    class_id: Vec<u32>,
    sizes: Vec<u64>,
    rep_ranks: Vec<u64>,
    num_trivial: u64,
}

impl ClassDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn num_classes(&self) -> usize {
        self.sizes.len()
    }

    pub fn num_trivial(&self) -> u64 {
        self.num_trivial
    }

    /// Class id of every rank.
    pub fn class_ids(&self) -> &[u32] {
        &self.class_id
    }

    pub fn class_id(&self, p: &Perm) -> u32 {
        self.class_id[p.rank() as usize]
    }

    pub fn same_class(&self, p: &Perm, q: &Perm) -> bool {
        self.class_id(p) == self.class_id(q)
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn class_size_of(&self, p: &Perm) -> u64 {
        self.sizes[self.class_id(p) as usize]
    }

    /// Sorted multiset of class sizes.
    pub fn sorted_sizes(&self) -> Vec<u64> {
        let mut s = self.sizes.clone();
        s.sort_unstable();
        s
    }

    pub fn representative(&self, id: u32) -> Perm {
        Perm::unrank(self.n, self.rep_ranks[id as usize]).expect("stored rank")
    }

    pub fn representatives(&self) -> Vec<Perm> {
        (0..self.num_classes() as u32).map(|i| self.representative(i)).collect()
    }

    /// Members of every class, each list in lexicographic order.
    pub fn classes(&self) -> Vec<Vec<Perm>> {
        let mut out: Vec<Vec<Perm>> = self.sizes.iter().map(|&s| Vec::with_capacity(s as usize)).collect();
        let mut buf = vec![0u8; self.n];
        for (r, &id) in self.class_id.iter().enumerate() {
            unrank_into(r as u64, &mut buf);
            out[id as usize].push(Perm::from_vec_unchecked(buf.clone()));
        }
        out
    }

    pub fn report(&self, k: &Partition) -> ClassReport {
        ClassReport {
            partition: k.to_string(),
            n: self.n,
            mode: self.mode,
            num_classes: self.num_classes(),
            num_trivial: self.num_trivial,
            class_sizes: self.sorted_sizes(),
            representatives: self.representatives().iter().map(|p| p.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub partition: String,
    pub n: usize,
    pub mode: Mode,
    pub num_classes: usize,
    pub num_trivial: u64,
    pub class_sizes: Vec<u64>,
    pub representatives: Vec<String>,
}

struct Dsu {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl Dsu {
    fn new(len: usize) -> Dsu {
        Dsu {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

// Lehmer digits and inverse of each pattern, indexed by pattern rank.
struct PatternTables {
    lehmer: Vec<Vec<u8>>,
    inverse: Vec<Vec<u8>>,
}

impl PatternTables {
    fn new(k: &Partition) -> PatternTables {
        let c = k.c();
        let total = factorial(c) as usize;
        let mut lehmer = Vec::with_capacity(total);
        let mut inverse = Vec::with_capacity(total);
        let mut buf = vec![0u8; c];
        for r in 0..total {
            unrank_into(r as u64, &mut buf);
            lehmer.push(lehmer_digits(&buf));
            let mut inv = vec![0u8; c];
            for (t, &v) in buf.iter().enumerate() {
                inv[v as usize - 1] = t as u8;
            }
            inverse.push(inv);
        }
        PatternTables { lehmer, inverse }
    }
}

fn lehmer_digits(w: &[u8]) -> Vec<u8> {
    (0..w.len())
        .map(|i| w[i + 1..].iter().filter(|&&y| y < w[i]).count() as u8)
        .collect()
}

/// Edges `(rank, neighbor rank)` out of ranks `lo..hi`, only towards later part members.
fn block_edges(n: usize, k: &Partition, mode: Mode, tables: &PatternTables, lo: u64, hi: u64) -> Vec<(u32, u32)> {
    let c = k.c();
    let fact: Vec<u64> = (0..=n).map(factorial).collect();
    let mut w = vec![0u8; n];
    unrank_into(lo, &mut w);
    let mut digits = vec![0u8; n];
    let mut out = Vec::new();
    for r in lo..hi {
        match mode {
            Mode::Factor => {
                for (i, d) in digits.iter_mut().enumerate() {
                    *d = w[i + 1..].iter().filter(|&&y| y < w[i]).count() as u8;
                }
                for i in 0..=n - c {
                    let from = rank_slice(&w[i..i + c]) as u32;
                    let members = k.members(k.part_index(from as usize));
                    if members.len() < 2 {
                        continue;
                    }
                    let ls = &tables.lehmer[from as usize];
                    let inv_s = &tables.inverse[from as usize];
                    for &to in members.iter().filter(|&&m| m > from) {
                        let q = k.pattern_letters(to);
                        let lq = &tables.lehmer[to as usize];
                        let mut next = r as i64;
                        for t in 0..c {
                            let src = inv_s[q[t] as usize - 1] as usize;
                            let new_digit = lq[t] as i64 + digits[i + src] as i64 - ls[src] as i64;
                            next += (new_digit - digits[i + t] as i64) * fact[n - 1 - i - t] as i64;
                        }
                        out.push((r as u32, next as u32));
                    }
                }
            }
            Mode::Subword => {
                for_each_neighbor(&w, k, mode, |_, from, to, target| {
                    if to > from {
                        out.push((r as u32, rank_slice(target) as u32));
                    }
                });
            }
        }
        next_permutation(&mut w);
    }
    out
}

/// Decomposes `S_n` into classes under `k`.
pub fn enumerate_classes(n: usize, k: &Partition, mode: Mode, cfg: &EngineConfig) -> Result<ClassDecomposition> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if k.c() > n || k.is_discrete() {
        if n > LARGE_BOUND {
            check_bounds(n, mode, cfg)?;
        }
        return Ok(discrete(n, mode));
    }
    check_bounds(n, mode, cfg)?;
    let total = factorial(n);
    let tables = PatternTables::new(k);
    let mut dsu = Dsu::new(total as usize);
    let batch = (BLOCK * BLOCKS_PER_BATCH) as u64;
    cfg.run(|| {
        let mut start = 0u64;
        while start < total {
            let end = (start + batch).min(total);
            let blocks: Vec<(u64, u64)> = (start..end)
                .step_by(BLOCK)
                .map(|lo| (lo, (lo + BLOCK as u64).min(end)))
                .collect();
            let edges: Vec<Vec<(u32, u32)>> = blocks
                .par_iter()
                .map(|&(lo, hi)| block_edges(n, k, mode, &tables, lo, hi))
                .collect();
            for (a, b) in edges.into_iter().flatten() {
                dsu.union(a, b);
            }
            start = end;
        }
    });
    Ok(relabel(n, mode, dsu))
}

fn discrete(n: usize, mode: Mode) -> ClassDecomposition {
    let total = factorial(n);
    ClassDecomposition {
        n,
        mode,
        class_id: (0..total as u32).collect(),
        sizes: vec![1; total as usize],
        rep_ranks: (0..total).collect(),
        num_trivial: total,
    }
}

fn relabel(n: usize, mode: Mode, mut dsu: Dsu) -> ClassDecomposition {
    const UNSET: u32 = u32::MAX;
    let total = dsu.parent.len();
    for r in 0..total as u32 {
        let root = dsu.find(r);
        dsu.parent[r as usize] = root;
    }
    let Dsu { mut parent, size: mut label } = dsu;
    label.fill(UNSET);
    let mut sizes: Vec<u64> = Vec::new();
    let mut rep_ranks = Vec::new();
    for r in 0..total {
        let root = parent[r] as usize;
        if label[root] == UNSET {
            label[root] = sizes.len() as u32;
            sizes.push(0);
            rep_ranks.push(r as u64);
        }
        let id = label[root];
        sizes[id as usize] += 1;
        parent[r] = id;
    }
    let num_trivial = sizes.iter().filter(|&&s| s == 1).count() as u64;
    ClassDecomposition {
        n,
        mode,
        class_id: parent,
        sizes,
        rep_ranks,
        num_trivial,
    }
}

/// The class of `p`, found by breadth-first search, in lexicographic order.
pub fn class_of(p: &Perm, k: &Partition, mode: Mode, cap: usize) -> Result<Vec<Perm>> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(p.letters().to_vec());
    queue.push_back(p.letters().to_vec());
    while let Some(w) = queue.pop_front() {
        let mut found = Vec::new();
        for_each_neighbor(&w, k, mode, |_, _, _, target| {
            if !seen.contains(target) {
                found.push(target.to_vec());
            }
        });
        for t in found {
            if seen.insert(t.clone()) {
                if seen.len() > cap {
                    return Err(Error::ClassTooLarge(cap));
                }
                queue.push_back(t);
            }
        }
    }
    let mut out: Vec<Perm> = seen.into_iter().map(Perm::from_vec_unchecked).collect();
    out.sort();
    Ok(out)
}

pub fn identity_class_size(n: usize, k: &Partition, mode: Mode, cap: usize) -> Result<u64> {
    class_of(&Perm::identity(n), k, mode, cap).map(|c| c.len() as u64)
}

pub fn class_sizes_multiset(n: usize, k: &Partition, mode: Mode, cfg: &EngineConfig) -> Result<Vec<u64>> {
    enumerate_classes(n, k, mode, cfg).map(|d| d.sorted_sizes())
}

/// Number of permutations of `S_n` with no hit, by pruned depth-first search.
pub fn count_trivial(n: usize, k: &Partition, mode: Mode) -> u64 {
    let forbidden: Vec<bool> = (0..factorial(k.c()) as usize)
        .map(|r| k.members(k.part_index(r)).len() > 1)
        .collect();
    count_avoiding(n, k.c(), &forbidden, mode)
}

/// Number of permutations of `S_n` avoiding every pattern rank marked in `forbidden`.
pub fn count_avoiding(n: usize, c: usize, forbidden: &[bool], mode: Mode) -> u64 {
    fn go(prefix: &mut Vec<u8>, used: &mut [bool], n: usize, c: usize, forbidden: &[bool], mode: Mode) -> u64 {
        let m = prefix.len();
        if m == n {
            return 1;
        }
        let mut total = 0;
        for v in 1..=n as u8 {
            if used[v as usize] {
                continue;
            }
            prefix.push(v);
            if !ends_in_forbidden(prefix, c, forbidden, mode) {
                used[v as usize] = true;
                total += go(prefix, used, n, c, forbidden, mode);
                used[v as usize] = false;
            }
            prefix.pop();
        }
        total
    }
    if c > n {
        return factorial(n);
    }
    go(&mut Vec::with_capacity(n), &mut vec![false; n + 1], n, c, forbidden, mode)
}

fn ends_in_forbidden(prefix: &[u8], c: usize, forbidden: &[bool], mode: Mode) -> bool {
    let m = prefix.len();
    if m < c {
        return false;
    }
    match mode {
        Mode::Factor => forbidden[rank_slice(&prefix[m - c..]) as usize],
        Mode::Subword => {
            let mut buf = vec![0u8; c];
            let mut hit = false;
            for_each_combination(m - 1, c - 1, |idx| {
                if !hit {
                    for (b, &i) in buf.iter_mut().zip(idx) {
                        *b = prefix[i];
                    }
                    buf[c - 1] = prefix[m - 1];
                    hit = forbidden[rank_slice(&buf) as usize];
                }
            });
            hit
        }
    }
}
