//! Closed forms and recursions for class counts, plus stored reference values.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::relation::Partition;

/// One row of the reference table: a relation and its class-count formula.
#[derive(Debug, Clone, Copy)]
pub struct Row {
    /// Canonical partition text.
    pub key: &'static str,
    pub formula: &'static str,
    /// Smallest n for which the formula is claimed.
    pub min_n: usize,
}

pub const ROWS: [Row; 20] = [
    Row { key: "{132,213,231}", formula: "2^(n-2)+2n-4", min_n: 3 },
    Row { key: "{123,132,231}", formula: "2^(n-1)", min_n: 3 },
    Row { key: "{123,132,321}", formula: "(n-1)!!+(n-2)!!+n-2", min_n: 5 },
    Row { key: "{123,132,312}", formula: "f(3)=4, f(4)=9, f(n)=f(n-1)+(n-2)f(n-2)+1", min_n: 3 },
    Row { key: "{123,132,213,231}", formula: "n", min_n: 3 },
    Row { key: "{123,132,231,321}", formula: "2", min_n: 4 },
    Row { key: "{132,213,231,312}", formula: "3", min_n: 5 },
    Row { key: "{123,132}{312,321}", formula: "2^(n-1)", min_n: 3 },
    Row { key: "{123,132}{213,231}", formula: "2^(n-1)", min_n: 3 },
    Row { key: "{123,231}{132,321}", formula: "2^(n-1)", min_n: 3 },
    Row { key: "{132,312}{213,321}", formula: "(n^2+n)/2-2", min_n: 3 },
    Row { key: "{123,231}{132,213}", formula: "n^2-3n+4", min_n: 3 },
    Row { key: "{123,321}{213,231}", formula: "3", min_n: 6 },
    Row { key: "{123,132}{231,312}", formula: "3*2^(n-3)+n-2", min_n: 6 },
    Row { key: "{123,132}{213,321}", formula: "M_0+M_1+...+M_(n-1)", min_n: 3 },
    Row { key: "{123,132}{213,312}", formula: "f(1)=1, f(2)=2, f(n)=f(n-1)+(n-1)f(n-2)", min_n: 3 },
    Row { key: "{123,321}{132,213}", formula: "C(n,n/2)+C(n-2,(n-2)/2)+3", min_n: 5 },
    Row { key: "{123,231}{213,321}", formula: "3n (n even), 3n-1 (n odd)", min_n: 6 },
    Row { key: "{123,321}{132,231}", formula: "sum x!C(n-x-1,h-1) + sum x!C(n-x-1,l-1)", min_n: 3 },
    Row { key: "{123,231}{213,312}", formula: "sum_k g(n+1,k)+n-2", min_n: 3 },
];

/// Class counts for `{132,231}{213,312}` at n = 3..=12.
pub const STORED_COUNTS: [(usize, u64); 10] = [
    (3, 4),
    (4, 10),
    (5, 26),
    (6, 76),
    (7, 234),
    (8, 782),
    (9, 2804),
    (10, 10972),
    (11, 47246),
    (12, 224648),
];

pub const STORED_KEY: &str = "{132,231}{213,312}";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Formula,
    Table,
}

/// Expected class counts of one relation over a range of n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTable {
    pub relation_key: String,
    pub values: BTreeMap<usize, BigUint>,
    pub provenance: Provenance,
}

fn canonical(key: &str) -> Result<String> {
    key.parse::<Partition>()
        .map(|k| k.to_string())
        .map_err(|_| Error::UnknownRelation(key.to_string()))
}

/// Looks up a row by any spelling of its partition.
pub fn find_row(key: &str) -> Result<&'static Row> {
    let want = canonical(key)?;
    ROWS.iter()
        .find(|r| r.key == want)
        .ok_or(Error::UnknownRelation(want))
}

pub fn expected_count(key: &str, n: usize) -> Result<BigUint> {
    let row = find_row(key)?;
    if n < row.min_n {
        return Err(Error::OutOfRange {
            relation: row.key.to_string(),
            n,
            min: row.min_n,
        });
    }
    let index = ROWS.iter().position(|r| r.key == row.key).unwrap();
    Ok(evaluate(index, n))
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

fn evaluate(row: usize, n: usize) -> BigUint {
    let nn = n as u64;
    match row {
        0 => pow2(n - 2) + big(2 * nn - 4),
        1 | 7 | 8 | 9 => pow2(n - 1),
        2 => double_factorial(n - 1) + double_factorial(n - 2) + big(nn - 2),
        3 => {
            let (mut a, mut b) = (big(4), big(9));
            if n == 3 {
                return a;
            }
            for m in 5..=n {
                let next = &b + big(m as u64 - 2) * &a + 1u32;
                a = std::mem::replace(&mut b, next);
            }
            b
        }
        4 => big(nn),
        5 => big(2),
        6 | 12 => big(3),
        10 => big((nn * nn + nn) / 2 - 2),
        11 => big(nn * nn - 3 * nn + 4),
        13 => big(3) * pow2(n - 3) + big(nn - 2),
        14 => motzkin_sum_count(n).expect("n >= 2"),
        15 => involution_count(n),
        16 => binomial(n, n / 2) + binomial(n - 2, (n - 2) / 2) + 3u32,
        17 => big(if n.is_multiple_of(2) { 3 * nn } else { 3 * nn - 1 }),
        18 => fall_count_formula(n),
        19 => compact_count(n),
        _ => unreachable!(),
    }
}

/// f(1)=1, f(2)=2, f(n)=f(n-1)+(n-1)f(n-2).
fn involution_count(n: usize) -> BigUint {
    let (mut a, mut b) = (big(1), big(1));
    for m in 1..=n {
        let next = &b + big(m as u64 - 1) * &a;
        a = std::mem::replace(&mut b, next);
    }
    b
}

pub fn factorial_big(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, x| acc * x)
}

pub fn double_factorial(n: usize) -> BigUint {
    (1..=n as u64).rev().step_by(2).fold(BigUint::one(), |acc, x| acc * x)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k as u64).fold(BigUint::one(), |acc, i| acc * (n as u64 - i) / (i + 1))
}

pub fn catalan(m: usize) -> BigUint {
    binomial(2 * m, m) / big(m as u64 + 1)
}

pub fn motzkin(m: usize) -> BigUint {
    (0..=m / 2).map(|k| binomial(m, 2 * k) * catalan(k)).sum()
}

/// f(2)=2, f(n)=f(n-1)+M_(n-1).
pub fn motzkin_sum_count(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("motzkin sum needs n >= 2, got {n}")));
    }
    // base fixed by brute force over S_2
    let mut f = big(2);
    for m in 3..=n {
        f += motzkin(m - 1);
    }
    Ok(f)
}

fn g_cache() -> &'static Mutex<HashMap<(usize, usize), BigUint>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), BigUint>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Number of compact permutations of `S_n` whose first part has `k` peaks.
pub fn g_recursion(n: usize, k: usize) -> Result<BigUint> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument(format!("g({n},{k}) is undefined")));
    }
    Ok(g(n, k))
}

fn g(n: usize, k: usize) -> BigUint {
    if n == 1 || n + 1 == 2 * k {
        return BigUint::one();
    }
    if let Some(v) = g_cache().lock().unwrap().get(&(n, k)) {
        return v.clone();
    }
    let v = if k == 1 {
        (1..=n.div_ceil(2)).map(|j| g(n - 1, j)).sum()
    } else {
        let mut total = BigUint::zero();
        for x in k - 1..=n.saturating_sub(k) {
            if n < 2 * k - 1 {
                break;
            }
            let coeff = binomial(x - 1, k - 2);
            for j in 1..=(n - k - x) {
                total += &coeff * g(n - 2 * k + 1, j);
            }
        }
        total
    };
    g_cache().lock().unwrap().insert((n, k), v.clone());
    v
}

/// Classes under `{123,231}{213,312}` made only of 123- and 231-avoiders.
pub fn avoiding_class_count(n: usize) -> BigUint {
    (1..=n / 2 + 1).map(|k| g(n + 1, k)).sum()
}

/// f(n) = sum over k of g(n+1,k), plus n-2.
pub fn compact_count(n: usize) -> BigUint {
    avoiding_class_count(n) + (n as u64 - 2)
}

/// (n-1)! divided by the product of adjacent j sums.
pub fn class_size_product(n: usize, j: &[u64]) -> Result<BigUint> {
    let num = factorial_big(n - 1);
    let den: BigUint = j.windows(2).map(|w| big(w[0] + w[1])).product();
    if den.is_zero() || !(&num % &den).is_zero() {
        return Err(Error::Inconsistent(format!("(n-1)! with n={n} not divisible by {den}")));
    }
    Ok(num / den)
}

/// Class count under `{123,321}{132,231}`.
pub fn fall_count_formula(n: usize) -> BigUint {
    let (l, h) = (n / 2, n.div_ceil(2));
    let a: BigUint = (1..=l).map(|x| factorial_big(x) * binomial(n - x - 1, h - 1)).sum();
    let b: BigUint = (1..=h).map(|x| factorial_big(x) * binomial(n - x - 1, l - 1)).sum();
    a + b
}

/// Size of a class under `{123,321}{132,231}` whose fall has `j` letters.
pub fn fall_class_size(n: usize, j: usize) -> Result<BigUint> {
    if j == 0 || j > n.div_ceil(2) {
        return Err(Error::InvalidArgument(format!("fall size {j} out of range for n={n}")));
    }
    Ok(factorial_big(n / 2) * factorial_big(n.div_ceil(2)) / factorial_big(j))
}

/// Identity class size under `{123,231}{132,321}`.
pub fn trivializable_count(n: usize) -> BigUint {
    let h = n.div_ceil(2);
    let sq = factorial_big(h) * factorial_big(h);
    if n.is_multiple_of(2) {
        sq
    } else {
        sq / big(h as u64)
    }
}

/// Odd/even counts of the small classes under `{123,231}{213,321}`, split by first step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HMatrix {
    pub n: usize,
    pub oi: u64,
    pub od: u64,
    pub ei: u64,
    pub ed: u64,
}

impl HMatrix {
    /// Sizes of the two large classes: (odd, even).
    pub fn big_classes(&self) -> (u64, u64) {
        let half = crate::perm::factorial(self.n) / 2;
        (half - self.oi - self.od, half - self.ei - self.ed)
    }
}

/// H_n by the mod-4 recursion from the base H_6.
pub fn h_matrices(n: usize) -> Result<HMatrix> {
    if n < 6 {
        return Err(Error::InvalidArgument(format!("H_n needs n >= 6, got {n}")));
    }
    let mut h = HMatrix { n: 6, oi: 18, od: 12, ei: 12, ed: 18 };
    for m in 7..=n as u64 {
        let p = h;
        h = match m % 4 {
            0 => HMatrix { n: 0, oi: p.od + m / 2, od: p.ei + m / 2, ei: p.ed + m + 1, ed: p.oi + m + 1 },
            1 => HMatrix { n: 0, oi: p.od, od: p.oi, ei: p.ed + m.div_ceil(2), ed: p.ei + m.div_ceil(2) },
            2 => HMatrix { n: 0, oi: p.od + m + 1, od: p.ei + m / 2, ei: p.ed + m / 2, ed: p.oi + m + 1 },
            _ => HMatrix { n: 0, oi: p.od, od: p.oi + m.div_ceil(2), ei: p.ed + m.div_ceil(2), ed: p.ei },
        };
        h.n = m as usize;
    }
    Ok(h)
}

/// H_n from the closed forms in k = n div 4.
pub fn h_closed_form(n: usize) -> Result<HMatrix> {
    if n < 6 {
        return Err(Error::InvalidArgument(format!("H_n needs n >= 6, got {n}")));
    }
    let k = (n / 4) as u64;
    let q = 4 * k * k;
    let (oi, od, ei, ed) = match n % 4 {
        0 => (q + 3 * k + 4, q + 3 * k + 4, q + 3 * k - 1, q + 3 * k - 1),
        1 => (q + 3 * k + 4, q + 3 * k + 4, q + 5 * k, q + 5 * k),
        2 => (q + 7 * k + 7, q + 7 * k + 1, q + 7 * k + 1, q + 7 * k + 7),
        _ => (q + 7 * k + 1, q + 9 * k + 9, q + 9 * k + 9, q + 7 * k + 1),
    };
    Ok(HMatrix { n, oi, od, ei, ed })
}

pub fn stored_count(n: usize) -> Result<u64> {
    STORED_COUNTS
        .iter()
        .find(|(m, _)| *m == n)
        .map(|&(_, v)| v)
        .ok_or(Error::OutOfRange {
            relation: STORED_KEY.to_string(),
            n,
            min: 3,
        })
}

/// Expected counts of a row (or of the stored table) for every valid n in `range`.
pub fn table(key: &str, range: std::ops::RangeInclusive<usize>) -> Result<SequenceTable> {
    if canonical(key)? == STORED_KEY {
        let values = range
            .filter_map(|n| stored_count(n).ok().map(|v| (n, big(v))))
            .collect();
        return Ok(SequenceTable {
            relation_key: STORED_KEY.to_string(),
            values,
            provenance: Provenance::Table,
        });
    }
    let row = find_row(key)?;
    let values = range
        .filter(|&n| n >= row.min_n)
        .map(|n| Ok((n, expected_count(row.key, n)?)))
        .collect::<Result<_>>()?;
    Ok(SequenceTable {
        relation_key: row.key.to_string(),
        values,
        provenance: Provenance::Formula,
    })
}

/// Convenience for callers that know the value fits.
pub fn to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(key: &str, n: usize) -> u64 {
        expected_count(key, n).unwrap().to_u64().unwrap()
    }

    #[test]
    fn rows_are_canonical() {
        for row in ROWS {
            assert_eq!(canonical(row.key).unwrap(), row.key);
        }
    }

    #[test]
    fn formula_examples() {
        assert_eq!(count("{123,132,321}", 6), 27);
        assert_eq!(count("{123,231}{321,213}", 6), 18);
        assert_eq!(count("{123,132,312}", 5), 22);
        assert_eq!(count("{213,231,132}", 3), 4);
        assert_eq!(count("{123,231}{213,312}", 8), 165);
        assert_eq!(count("{123,321}{132,231}", 4), 8);
    }

    #[test]
    fn range_and_lookup_errors() {
        assert!(matches!(expected_count("{123,132,321}", 4), Err(Error::OutOfRange { min: 5, .. })));
        assert!(matches!(expected_count("{123,132}", 5), Err(Error::UnknownRelation(_))));
        assert!(matches!(expected_count("nonsense", 5), Err(Error::UnknownRelation(_))));
    }

    #[test]
    fn motzkin_and_catalan() {
        let m: Vec<u64> = (0..6).map(|i| motzkin(i).to_u64().unwrap()).collect();
        assert_eq!(m, vec![1, 1, 2, 4, 9, 21]);
        assert_eq!(catalan(3), big(5));
        let sums: Vec<u64> = (3..=5).map(|n| motzkin_sum_count(n).unwrap().to_u64().unwrap()).collect();
        assert_eq!(sums, vec![4, 8, 17]);
    }

    #[test]
    fn g_values() {
        assert_eq!(g_recursion(1, 1).unwrap(), big(1));
        for k in 1..6 {
            assert_eq!(g_recursion(2 * k - 1, k).unwrap(), big(1));
        }
        assert!(g_recursion(0, 1).is_err());
        assert!(g_recursion(3, 0).is_err());
    }

    #[test]
    fn products_and_falls() {
        assert_eq!(class_size_product(5, &[3]).unwrap(), big(24));
        assert_eq!(class_size_product(5, &[1, 2]).unwrap(), big(8));
        assert!(class_size_product(5, &[2, 3]).is_err());
        assert_eq!(fall_class_size(4, 2).unwrap(), big(2));
        assert!(fall_class_size(4, 3).is_err());
        assert_eq!(trivializable_count(4), big(4));
        assert_eq!(trivializable_count(5), big(12));
    }

    #[test]
    fn h_matrix_forms_agree() {
        for n in 8..=40 {
            assert_eq!(h_matrices(n).unwrap(), h_closed_form(n).unwrap(), "n={n}");
        }
        let h8 = h_matrices(8).unwrap();
        assert_eq!((h8.oi, h8.od, h8.ei, h8.ed), (26, 26, 21, 21));
        assert_eq!(h_matrices(7).unwrap().big_classes(), (2486, 2486));
    }

    #[test]
    fn stored_lookup() {
        assert_eq!(stored_count(3).unwrap(), 4);
        assert_eq!(stored_count(7).unwrap(), 234);
        assert_eq!(stored_count(12).unwrap(), 224648);
        assert!(stored_count(13).is_err());
        let t = table("{213,312}{231,132}", 3..=5).unwrap();
        assert_eq!(t.provenance, Provenance::Table);
        assert_eq!(t.values.len(), 3);
    }
}
