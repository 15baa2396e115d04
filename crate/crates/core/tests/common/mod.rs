//! Naive reference implementation: BFS over `Vec<u8>` with hash maps.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

pub type Word = Vec<u8>;

pub fn parse_parts(text: &str) -> Vec<Vec<Word>> {
    text.trim_matches(|c| c == '{' || c == '}')
        .split("}{")
        .map(|g| g.split(',').map(|t| t.bytes().map(|b| b - b'0').collect()).collect())
        .collect()
}

pub fn pattern_of(w: &[u8]) -> Word {
    w.iter().map(|&x| 1 + w.iter().filter(|&&y| y < x).count() as u8).collect()
}

pub fn all_words(n: usize) -> Vec<Word> {
    fn rec(cur: &mut Word, used: &mut [bool], out: &mut Vec<Word>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v as u8 + 1);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn index_sets(n: usize, c: usize, subword: bool) -> Vec<Vec<usize>> {
    if !subword {
        return (0..=n.saturating_sub(c)).filter(|_| c <= n).map(|i| (i..i + c).collect()).collect();
    }
    let mut out = Vec::new();
    fn rec(start: usize, n: usize, c: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == c {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, c, cur, out);
            cur.pop();
        }
    }
    rec(0, n, c, &mut Vec::new(), &mut out);
    out
}

pub fn neighbors(w: &[u8], parts: &[Vec<Word>], subword: bool) -> Vec<Word> {
    let c = parts[0][0].len();
    let mut out = Vec::new();
    for idx in index_sets(w.len(), c, subword) {
        let sub: Word = idx.iter().map(|&i| w[i]).collect();
        let pat = pattern_of(&sub);
        let mut sorted = sub.clone();
        sorted.sort();
        for part in parts.iter().filter(|p| p.len() > 1 && p.contains(&pat)) {
            for q in part.iter().filter(|q| **q != pat) {
                let mut t = w.to_vec();
                for (k, &i) in idx.iter().enumerate() {
                    t[i] = sorted[q[k] as usize - 1];
                }
                out.push(t);
            }
        }
    }
    out
}

pub fn bfs_class(start: &[u8], parts: &[Vec<Word>], subword: bool) -> Vec<Word> {
    let mut seen: HashSet<Word> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.to_vec());
    queue.push_back(start.to_vec());
    while let Some(w) = queue.pop_front() {
        for t in neighbors(&w, parts, subword) {
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    let mut v: Vec<Word> = seen.into_iter().collect();
    v.sort();
    v
}

/// Class label (least member) of every permutation of `n`.
pub fn classes(n: usize, parts: &[Vec<Word>], subword: bool) -> HashMap<Word, Word> {
    let mut label = HashMap::new();
    for w in all_words(n) {
        if label.contains_key(&w) {
            continue;
        }
        let class = bfs_class(&w, parts, subword);
        let least = class[0].clone();
        for m in class {
            label.insert(m, least.clone());
        }
    }
    label
}

pub fn count_classes(n: usize, text: &str, subword: bool) -> usize {
    let parts = parse_parts(text);
    let label = classes(n, &parts, subword);
    label.values().collect::<HashSet<_>>().len()
}

pub fn is_avoider(w: &[u8], parts: &[Vec<Word>]) -> bool {
    neighbors(w, parts, false).is_empty()
}
