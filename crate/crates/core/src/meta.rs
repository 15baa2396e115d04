//! General results: avoidance criterion, adjacent vs subword, stooge normalization.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::engine::{self, ClassDecomposition, EngineConfig};
use crate::error::{Error, Result};
use crate::perm::{factorial, rank_slice, unrank_into, Perm};
use crate::relation::{down_jumps, Mode, Partition};

pub use crate::invariants::{is_lefted, is_middled, is_righted};

/// Number of permutations of `n` with no factor in U.
pub fn count_u_avoiders(n: usize, k: &Partition) -> u64 {
    let c = k.c();
    let mut forbidden = vec![false; factorial(c) as usize];
    for q in k.u() {
        forbidden[q.rank() as usize] = true;
    }
    engine::count_avoiding(n, c, &forbidden, Mode::Factor)
}

/// Per-part lexicographic minima of the nontrivial parts.
pub fn global_minima(k: &Partition) -> Vec<Perm> {
    k.d()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountPair {
    pub n: usize,
    pub classes: u64,
    pub avoiders: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub partition: String,
    pub k: usize,
    pub c: usize,
    pub n_k: u64,
    pub a_k: u64,
    pub holds: bool,
    pub propagation_checked_to: usize,
    pub propagation_ok: bool,
    pub checked: Vec<CountPair>,
}

fn count_pair(n: usize, k: &Partition, cfg: &EngineConfig) -> Result<CountPair> {
    let dec = engine::enumerate_classes(n, k, Mode::Factor, cfg)?;
    Ok(CountPair { n, classes: dec.num_classes() as u64, avoiders: count_u_avoiders(n, k) })
}

/// Compares class and U-avoider counts at `k`, then up to `check_to` when they agree.
pub fn avoider_criterion(
    part: &Partition,
    k: usize,
    check_to: usize,
    cfg: &EngineConfig,
) -> Result<CriterionReport> {
    let c = part.c();
    if k + 1 < 2 * c {
        return Err(Error::Precondition(format!("k={k} is below 2c-1={}", 2 * c - 1)));
    }
    let base = count_pair(k, part, cfg)?;
    let holds = base.classes == base.avoiders;
    let mut checked = vec![base.clone()];
    let mut propagation_ok = holds;
    if holds {
        for n in k + 1..=check_to {
            let pair = count_pair(n, part, cfg)?;
            propagation_ok &= pair.classes == pair.avoiders;
            checked.push(pair);
        }
    }
    Ok(CriterionReport {
        partition: part.to_string(),
        k,
        c,
        n_k: base.classes,
        a_k: base.avoiders,
        holds,
        propagation_checked_to: if holds { check_to.max(k) } else { k },
        propagation_ok,
        checked,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "leftmost" => Ok(Strategy::Leftmost),
            "rightmost" => Ok(Strategy::Rightmost),
            _ => Err(Error::InvalidArgument(format!("unknown strategy {s:?}"))),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Leftmost => "leftmost",
            Strategy::Rightmost => "rightmost",
        })
    }
}

/// Applies down jumps until no U-hit remains. Returns the avoider and the step count.
pub fn repeated_down_jump(p: &Perm, k: &Partition, strategy: Strategy) -> (Perm, usize) {
    let mut cur = p.clone();
    let mut steps = 0;
    loop {
        let jumps = down_jumps(&cur, k);
        let next = match strategy {
            Strategy::Leftmost => jumps.into_iter().next(),
            Strategy::Rightmost => jumps.into_iter().last(),
        };
        match next {
            Some(t) => {
                cur = t.target;
                steps += 1;
            }
            None => return (cur, steps),
        }
    }
}

/// Permutations of `n` whose leftmost and rightmost down-jump results differ.
pub fn strategy_disagreements(n: usize, k: &Partition) -> Vec<Perm> {
    crate::perm::all_perms(n)
        .filter(|p| {
            repeated_down_jump(p, k, Strategy::Leftmost).0 != repeated_down_jump(p, k, Strategy::Rightmost).0
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityCheck {
    pub n: usize,
    pub factor_classes: usize,
    pub subword_classes: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EqualityReport {
    pub partition: String,
    pub k: usize,
    pub equal_at_k: bool,
    pub propagation_checked_to: usize,
    pub propagation_ok: bool,
    pub checked: Vec<EqualityCheck>,
}

fn equality_check(n: usize, k: &Partition, cfg: &EngineConfig) -> Result<EqualityCheck> {
    let a = engine::enumerate_classes(n, k, Mode::Factor, cfg)?;
    let b = engine::enumerate_classes(n, k, Mode::Subword, cfg)?;
    Ok(EqualityCheck {
        n,
        factor_classes: a.num_classes(),
        subword_classes: b.num_classes(),
        equal: a.class_ids() == b.class_ids(),
    })
}

/// Tests whether factor and subword classes coincide at `k`, then up to `check_to`.
pub fn adjacent_equals_subword(
    part: &Partition,
    k: usize,
    check_to: usize,
    cfg: &EngineConfig,
) -> Result<EqualityReport> {
    if k <= part.c() {
        return Err(Error::Precondition(format!("k={k} must exceed c={}", part.c())));
    }
    let base = equality_check(k, part, cfg)?;
    let equal_at_k = base.equal;
    let mut checked = vec![base];
    let mut ok = equal_at_k;
    if equal_at_k {
        for n in k + 1..=check_to {
            let e = equality_check(n, part, cfg)?;
            ok &= e.equal;
            checked.push(e);
        }
    }
    Ok(EqualityReport {
        partition: part.to_string(),
        k,
        equal_at_k,
        propagation_checked_to: if equal_at_k { check_to.max(k) } else { k },
        propagation_ok: ok,
        checked,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StoogeSets {
    pub n: usize,
    pub l: Vec<Perm>,
    pub r: Vec<Perm>,
    pub i: Vec<Perm>,
}

/// Smallest member of each class satisfying `pred`, indexed by class id.
fn minimal_by_class(dec: &ClassDecomposition, pred: impl Fn(&Perm) -> bool) -> Vec<Option<Perm>> {
    let n = dec.n();
    let mut best: Vec<Option<Perm>> = vec![None; dec.num_classes()];
    let mut buf = vec![0u8; n];
    for (r, &id) in dec.class_ids().iter().enumerate() {
        if best[id as usize].is_some() {
            continue;
        }
        unrank_into(r as u64, &mut buf);
        let p = Perm::from_vec_unchecked(buf.clone());
        if pred(&p) {
            best[id as usize] = Some(p);
        }
    }
    best
}

fn collect_sorted(v: Vec<Option<Perm>>) -> Vec<Perm> {
    let mut out: Vec<Perm> = v.into_iter().flatten().collect();
    out.sort();
    out
}

/// L_n, R_n and I_n; I_n is empty when n < c+2.
pub fn stooge_sets(n: usize, k: &Partition, cfg: &EngineConfig) -> Result<StoogeSets> {
    if n < k.c() + 1 {
        return Err(Error::Precondition(format!("n={n} must be at least c+1={}", k.c() + 1)));
    }
    let dec = engine::enumerate_classes(n, k, Mode::Factor, cfg)?;
    let i = if n >= k.c() + 2 {
        collect_sorted(minimal_by_class(&dec, |p| is_middled(p, k)))
    } else {
        Vec::new()
    };
    Ok(StoogeSets {
        n,
        l: collect_sorted(minimal_by_class(&dec, |p| is_lefted(p, k))),
        r: collect_sorted(minimal_by_class(&dec, |p| is_righted(p, k))),
        i,
    })
}

/// Rewrites windows of n-1 letters to their L_{n-1} / R_{n-1} members.
pub struct StoogeNormalizer {
    n: usize,
    k: Partition,
    dec: ClassDecomposition,
    left: Vec<Option<Perm>>,
    right: Vec<Option<Perm>>,
}

impl StoogeNormalizer {
    pub fn new(n: usize, k: &Partition, cfg: &EngineConfig) -> Result<StoogeNormalizer> {
        if n < k.c() + 2 {
            return Err(Error::Precondition(format!("n={n} must be at least c+2={}", k.c() + 2)));
        }
        let dec = engine::enumerate_classes(n - 1, k, Mode::Factor, cfg)?;
        let left = minimal_by_class(&dec, |p| is_lefted(p, k));
        let right = minimal_by_class(&dec, |p| is_righted(p, k));
        Ok(StoogeNormalizer { n, k: k.clone(), dec, left, right })
    }

    fn rewrite(&self, w: &mut [u8], table: &[Option<Perm>]) {
        let id = self.dec.class_ids()[rank_slice(w) as usize] as usize;
        let target = table[id].as_ref().expect("window is lefted or righted");
        let mut sorted = w.to_vec();
        sorted.sort_unstable();
        for (slot, &r) in w.iter_mut().zip(target.letters()) {
            *slot = sorted[r as usize - 1];
        }
    }

    /// Alternates l then r until neither changes the permutation.
    pub fn normalize(&self, p: &Perm) -> Result<Perm> {
        if p.len() != self.n {
            return Err(Error::InvalidArgument(format!("expected n={}, got {}", self.n, p.len())));
        }
        if !is_middled(p, &self.k) {
            return Err(Error::Precondition(format!("{p} is not middled")));
        }
        let n = self.n;
        let mut w = p.letters().to_vec();
        loop {
            let before = w.clone();
            self.rewrite(&mut w[..n - 1], &self.left);
            self.rewrite(&mut w[1..], &self.right);
            if w == before {
                return Ok(Perm::from_vec_unchecked(w));
            }
        }
    }
}

pub fn stooge_normalize(p: &Perm, k: &Partition, cfg: &EngineConfig) -> Result<Perm> {
    StoogeNormalizer::new(p.len(), k, cfg)?.normalize(p)
}
