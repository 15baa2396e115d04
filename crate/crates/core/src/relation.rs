//! Replacement partitions of `S_c` and the one-step rewriting relation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::engine::{self, EngineConfig};
use crate::error::{Error, Result};
use crate::perm::{factorial, for_each_combination, rank_slice, unrank_into, Perm};

/// Where a hit may sit: consecutive letters, or any increasing index tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Factor,
    Subword,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Factor => "factor",
            Mode::Subword => "subword",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "factor" => Ok(Mode::Factor),
            "subword" => Ok(Mode::Subword),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    /// Largest pattern length accepted when some part is nontrivial.
    pub max_c: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { max_c: 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    SingletonPart(String),
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::SingletonPart(p) => {
                write!(f, "part {{{p}}} has one element and is treated as trivial")
            }
        }
    }
}

/// A set partition of `S_c`.
#[derive(Clone, PartialEq, Eq)]
pub struct Partition {
    c: usize,
    // every part, singletons included, in canonical order
    parts: Vec<Vec<Perm>>,
    // pattern rank -> part index
    part_of: Vec<u32>,
    // part index -> member ranks, ascending
    members: Vec<Vec<u32>>,
    // pattern rank -> letters
    letters: Vec<Vec<u8>>,
}

impl Partition {
    /// Builds a partition from its nontrivial parts; anything unlisted is a singleton.
    pub fn from_parts(c: usize, listed: Vec<Vec<Perm>>) -> Result<Partition> {
        if c == 0 || c > 9 {
            return Err(Error::PartitionSyntax(format!("pattern length {c} not supported")));
        }
        let total = factorial(c) as usize;
        let mut seen = vec![false; total];
        let mut parts: Vec<Vec<Perm>> = Vec::new();
        for mut part in listed {
            for q in &part {
                if q.len() != c {
                    return Err(Error::MixedLengths(c, q.len()));
                }
                let r = q.rank() as usize;
                if seen[r] {
                    return Err(Error::DuplicatePattern(q.to_string()));
                }
                seen[r] = true;
            }
            if part.is_empty() {
                continue;
            }
            part.sort();
            parts.push(part);
        }
        let mut buf = vec![0u8; c];
        for (r, s) in seen.iter().enumerate() {
            if !s {
                unrank_into(r as u64, &mut buf);
                parts.push(vec![Perm::from_vec_unchecked(buf.clone())]);
            }
        }
        parts.sort_by(|a, b| a[0].cmp(&b[0]));
        let mut part_of = vec![0u32; total];
        let mut members = Vec::with_capacity(parts.len());
        for (i, part) in parts.iter().enumerate() {
            let ranks: Vec<u32> = part.iter().map(|q| q.rank() as u32).collect();
            for &r in &ranks {
                part_of[r as usize] = i as u32;
            }
            members.push(ranks);
        }
        let letters = (0..total as u64)
            .map(|r| {
                unrank_into(r, &mut buf);
                buf.clone()
            })
            .collect();
        Ok(Partition {
            c,
            parts,
            part_of,
            members,
            letters,
        })
    }

    /// The partition with no nontrivial part.
    pub fn discrete(c: usize) -> Result<Partition> {
        Partition::from_parts(c, Vec::new())
    }

    pub fn c(&self) -> usize {
        self.c
    }

    /// All parts in canonical order, singletons included.
    pub fn parts(&self) -> &[Vec<Perm>] {
        &self.parts
    }

    pub fn nontrivial_parts(&self) -> impl Iterator<Item = &Vec<Perm>> {
        self.parts.iter().filter(|p| p.len() > 1)
    }

    pub fn is_discrete(&self) -> bool {
        self.parts.iter().all(|p| p.len() == 1)
    }

    /// The part containing `pattern`.
    pub fn part_of(&self, pattern: &Perm) -> &[Perm] {
        &self.parts[self.part_of[pattern.rank() as usize] as usize]
    }

    pub fn is_nontrivial(&self, pattern: &Perm) -> bool {
        self.part_of(pattern).len() > 1
    }

    /// Lexicographic minimum of each nontrivial part.
    pub fn d(&self) -> Vec<Perm> {
        self.nontrivial_parts().map(|p| p[0].clone()).collect()
    }

    /// Nontrivial-part members other than the part minimum.
    pub fn u(&self) -> Vec<Perm> {
        self.nontrivial_parts()
            .flat_map(|p| p[1..].iter().cloned())
            .collect()
    }

    pub(crate) fn part_index(&self, pattern_rank: usize) -> usize {
        self.part_of[pattern_rank] as usize
    }

    pub(crate) fn members(&self, part: usize) -> &[u32] {
        &self.members[part]
    }

    pub(crate) fn pattern_letters(&self, rank: u32) -> &[u8] {
        &self.letters[rank as usize]
    }

    /// Applies a map to every pattern, keeping the grouping.
    pub fn map_patterns(&self, f: impl Fn(&Perm) -> Perm) -> Partition {
        let parts = self
            .nontrivial_parts()
            .map(|p| p.iter().map(&f).collect())
            .collect();
        Partition::from_parts(self.c, parts).expect("bijection on S_c keeps a partition")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_discrete() {
            return write!(f, "{{{}}}", Perm::identity(self.c));
        }
        for part in self.nontrivial_parts() {
            let s: Vec<String> = part.iter().map(|q| q.to_string()).collect();
            write!(f, "{{{}}}", s.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Partition> {
        parse_partition(s, ParseOptions::default()).map(|(k, _)| k)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses text such as `{123,321}{132,231}`; whitespace is ignored.
pub fn parse_partition(text: &str, opts: ParseOptions) -> Result<(Partition, Vec<ParseWarning>)> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::PartitionSyntax("empty partition".into()));
    }
    let mut rest = compact.as_str();
    let mut groups: Vec<Vec<Perm>> = Vec::new();
    let mut c: Option<usize> = None;
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('{')
            .and_then(|r| r.find('}').map(|end| (&r[..end], &r[end + 1..])))
            .ok_or_else(|| Error::PartitionSyntax(format!("expected {{...}} at {rest:?}")))?;
        rest = body.1;
        if body.0.is_empty() {
            return Err(Error::PartitionSyntax("empty part".into()));
        }
        let mut group = Vec::new();
        for tok in body.0.split(',') {
            if tok.is_empty() || !tok.chars().all(|ch| ch.is_ascii_digit()) {
                return Err(Error::PartitionSyntax(format!("bad pattern token {tok:?}")));
            }
            let q: Perm = tok
                .parse()
                .map_err(|_| Error::PartitionSyntax(format!("{tok} is not a permutation")))?;
            match c {
                None => c = Some(q.len()),
                Some(c0) if c0 != q.len() => return Err(Error::MixedLengths(c0, q.len())),
                _ => {}
            }
            group.push(q);
        }
        groups.push(group);
    }
    let c = c.expect("at least one token");
    let mut warnings = Vec::new();
    let mut listed = Vec::new();
    let mut all = BTreeSet::new();
    for g in groups {
        for q in &g {
            if !all.insert(q.clone()) {
                return Err(Error::DuplicatePattern(q.to_string()));
            }
        }
        if g.len() == 1 {
            warnings.push(ParseWarning::SingletonPart(g[0].to_string()));
        } else {
            listed.push(g);
        }
    }
    if !listed.is_empty() && c > opts.max_c {
        return Err(Error::PatternTooLong { c, max: opts.max_c });
    }
    Ok((Partition::from_parts(c, listed)?, warnings))
}

/// One rewrite of a hit inside its part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transformation {
    pub source: Perm,
    pub target: Perm,
    /// 1-based positions of the rewritten letters.
    pub positions: Vec<usize>,
    pub from_pattern: Perm,
    pub to_pattern: Perm,
}

impl Transformation {
    /// 1-based start of the rewritten letters.
    pub fn position(&self) -> usize {
        self.positions[0]
    }
}

/// 1-based start positions and patterns of every factor hit.
pub fn hits(p: &Perm, k: &Partition) -> Vec<(usize, Perm)> {
    let c = k.c;
    let w = p.letters();
    if c > w.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 0..=w.len() - c {
        let r = rank_slice(&w[i..i + c]) as usize;
        let part = k.part_index(r);
        if k.members(part).len() > 1 {
            out.push((i + 1, Perm::from_vec_unchecked(k.pattern_letters(r as u32).to_vec())));
        }
    }
    out
}

pub fn is_avoider(p: &Perm, k: &Partition) -> bool {
    has_no_hit(p.letters(), k, Mode::Factor)
}

pub(crate) fn has_no_hit(w: &[u8], k: &Partition, mode: Mode) -> bool {
    let c = k.c;
    if c > w.len() {
        return true;
    }
    match mode {
        Mode::Factor => (0..=w.len() - c)
            .all(|i| k.members(k.part_index(rank_slice(&w[i..i + c]) as usize)).len() == 1),
        Mode::Subword => {
            let mut buf = vec![0u8; c];
            let mut clean = true;
            for_each_combination(w.len(), c, |idx| {
                if clean {
                    for (b, &i) in buf.iter_mut().zip(idx) {
                        *b = w[i];
                    }
                    clean = k.members(k.part_index(rank_slice(&buf) as usize)).len() == 1;
                }
            });
            clean
        }
    }
}

/// Every permutation one transformation away from `p`.
pub fn neighbors(p: &Perm, k: &Partition, mode: Mode) -> Vec<Transformation> {
    let mut out = Vec::new();
    for_each_neighbor(p.letters(), k, mode, |idx, from, to, target| {
        out.push(Transformation {
            source: p.clone(),
            target: Perm::from_vec_unchecked(target.to_vec()),
            positions: idx.iter().map(|i| i + 1).collect(),
            from_pattern: Perm::from_vec_unchecked(k.pattern_letters(from).to_vec()),
            to_pattern: Perm::from_vec_unchecked(k.pattern_letters(to).to_vec()),
        });
    });
    out
}

/// Calls `f(indices, from_rank, to_rank, target)` for every rewrite of every hit.
pub(crate) fn for_each_neighbor(
    w: &[u8],
    k: &Partition,
    mode: Mode,
    mut f: impl FnMut(&[usize], u32, u32, &[u8]),
) {
    let c = k.c;
    if c > w.len() {
        return;
    }
    let mut target = w.to_vec();
    let mut window = vec![0u8; c];
    let mut sorted = vec![0u8; c];
    let mut visit = |idx: &[usize]| {
        for (b, &i) in window.iter_mut().zip(idx) {
            *b = w[i];
        }
        let from = rank_slice(&window) as u32;
        let part = k.part_index(from as usize);
        let members = k.members(part);
        if members.len() < 2 {
            return;
        }
        sorted.copy_from_slice(&window);
        sorted.sort_unstable();
        for &to in members {
            if to == from {
                continue;
            }
            for (t, &i) in idx.iter().enumerate() {
                target[i] = sorted[k.pattern_letters(to)[t] as usize - 1];
            }
            f(idx, from, to, &target);
        }
        for &i in idx {
            target[i] = w[i];
        }
    };
    match mode {
        Mode::Factor => {
            let mut idx: Vec<usize> = (0..c).collect();
            for start in 0..=w.len() - c {
                for (t, slot) in idx.iter_mut().enumerate() {
                    *slot = start + t;
                }
                visit(&idx);
            }
        }
        Mode::Subword => for_each_combination(w.len(), c, |idx| visit(idx)),
    }
}

/// Rewrites of a hit from U into its part's minimum (factor mode).
pub fn down_jumps(p: &Perm, k: &Partition) -> Vec<Transformation> {
    neighbors(p, k, Mode::Factor)
        .into_iter()
        .filter(|t| {
            let part = k.part_of(&t.from_pattern);
            t.to_pattern == part[0] && t.from_pattern != part[0]
        })
        .collect()
}

/// Orbit under reverse and complement applied to every pattern.
pub fn symmetry_orbit(k: &Partition) -> Vec<Partition> {
    let images = [
        k.clone(),
        k.map_patterns(Perm::reverse),
        k.map_patterns(Perm::complement),
        k.map_patterns(|q| q.reverse().complement()),
    ];
    let mut out: Vec<Partition> = Vec::new();
    for im in images {
        if !out.contains(&im) {
            out.push(im);
        }
    }
    out.sort_by_key(|a| a.to_string());
    out
}

/// The partition of `S_{c+1}` into its classes under `k`.
pub fn lift_partition(k: &Partition) -> Result<Partition> {
    let n = k.c + 1;
    let dec = engine::enumerate_classes(n, k, Mode::Factor, &EngineConfig::default())?;
    let mut parts: Vec<Vec<Perm>> = vec![Vec::new(); dec.num_classes()];
    let mut buf = vec![0u8; n];
    for (r, &id) in dec.class_ids().iter().enumerate() {
        unrank_into(r as u64, &mut buf);
        parts[id as usize].push(Perm::from_vec_unchecked(buf.clone()));
    }
    parts.retain(|p| p.len() > 1);
    Partition::from_parts(n, parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn k(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let part = k("{123,321}{132,231}");
        assert_eq!(part.c(), 3);
        assert_eq!(part.nontrivial_parts().count(), 2);
        assert_eq!(part.parts().len(), 4);
        assert_eq!(part.part_of(&p("213")), &[p("213")]);
        assert_eq!(k("{123,132,231}").nontrivial_parts().next().unwrap().len(), 3);
        assert_eq!(k("{12,21}").parts().len(), 1);
        assert_eq!(k(" { 231 ,132}{ 321,123 } ").to_string(), "{123,321}{132,231}");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("{123,12}".parse::<Partition>(), Err(Error::MixedLengths(3, 2))));
        assert!(matches!(
            "{123,132}{132,213}".parse::<Partition>(),
            Err(Error::DuplicatePattern(_))
        ));
        assert!(matches!("{123,113}".parse::<Partition>(), Err(Error::PartitionSyntax(_))));
        assert!("{123,132".parse::<Partition>().is_err());
        assert!("".parse::<Partition>().is_err());
        assert!(matches!(
            "{1234567,1234576}".parse::<Partition>(),
            Err(Error::PatternTooLong { c: 7, max: 6 })
        ));
        let (part, w) = parse_partition("{1234567,1234576}", ParseOptions { max_c: 7 }).unwrap();
        assert!(w.is_empty());
        assert_eq!(part.c(), 7);
    }

    #[test]
    fn singleton_part_warns() {
        let (part, w) = parse_partition("{123}", ParseOptions::default()).unwrap();
        assert!(part.is_discrete());
        assert_eq!(w, vec![ParseWarning::SingletonPart("123".into())]);
        assert_eq!(part.to_string(), "{123}");
    }

    #[test]
    fn d_and_u() {
        let part = k("{123,321}{132,231}");
        assert_eq!(part.d(), vec![p("123"), p("132")]);
        assert_eq!(part.u(), vec![p("321"), p("231")]);
    }

    #[test]
    fn hit_examples() {
        let part = k("{123,321}{132,231}");
        assert!(hits(&p("15324"), &part).contains(&(2, p("321"))));
        let (only231, _) = parse_partition("{231}", ParseOptions::default()).unwrap();
        assert!(hits(&p("3124"), &only231).is_empty());
        assert_eq!(hits(&Perm::identity(6), &k("{123,132}")).len(), 4);
    }

    #[test]
    fn avoiders_in_s3() {
        let part = k("{123,132,321}");
        let av: Vec<Perm> = crate::perm::all_perms(3).filter(|q| is_avoider(q, &part)).collect();
        assert_eq!(av, vec![p("213"), p("231"), p("312")]);
        assert!(is_avoider(&Perm::decreasing(6), &k("{123,132,231}")));
        assert!(!is_avoider(&p("12345"), &part));
    }

    #[test]
    fn neighbor_examples() {
        let part = k("{123,321}{132,231}");
        let ts = neighbors(&p("15324"), &part, Mode::Factor);
        let t = ts.iter().find(|t| t.target == p("12354")).unwrap();
        assert_eq!((t.position(), &t.from_pattern, &t.to_pattern), (2, &p("321"), &p("123")));
        assert!(neighbors(&p("12354"), &part, Mode::Factor)
            .iter()
            .any(|t| t.target == p("12453") && t.from_pattern == p("132")));
        assert!(neighbors(&p("213"), &part, Mode::Factor).is_empty());
    }

    #[test]
    fn subword_neighbors() {
        let part = k("{123,132}");
        let ts = neighbors(&p("1324"), &part, Mode::Subword);
        assert!(ts.iter().any(|t| t.target == p("1423") && t.positions == vec![1, 2, 4]));
        assert!(ts.iter().all(|t| t.positions.len() == 3));
    }

    #[test]
    fn down_jump_examples() {
        let part = k("{123,132}");
        let dj = down_jumps(&p("132"), &part);
        assert_eq!(dj.len(), 1);
        assert_eq!(dj[0].target, p("123"));
        assert!(down_jumps(&p("123"), &part).is_empty());
    }

    #[test]
    fn orbits() {
        let orbit = symmetry_orbit(&k("{123,132,231}"));
        assert!(orbit.contains(&k("{321,231,132}")));
        assert_eq!(orbit.len(), 4);
        assert!(symmetry_orbit(&k("{123,321}")).len() <= 2);
        let d = Partition::discrete(3).unwrap();
        assert_eq!(symmetry_orbit(&d), vec![d]);
    }

    #[test]
    fn lifting() {
        let lifted = lift_partition(&Partition::discrete(3).unwrap()).unwrap();
        assert!(lifted.is_discrete());
        assert_eq!(lifted.c(), 4);
        let lifted = lift_partition(&k("{123,132,213,231}")).unwrap();
        assert_eq!(lifted.parts().len(), 4);
    }
}
