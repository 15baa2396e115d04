use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use permclass::invariants::*;
use permclass::meta::stooge_sets;
use permclass::oracle;
use permclass::{all_perms, class_of, enumerate_classes, is_avoider, ClassDecomposition, EngineConfig, Mode, Partition, Perm};

fn k(s: &str) -> Partition {
    s.parse().unwrap()
}

fn dec(n: usize, key: &str) -> ClassDecomposition {
    enumerate_classes(n, &k(key), Mode::Factor, &EngineConfig::default()).unwrap()
}

/// `f` is constant on classes and separates them, over permutations kept by `keep`.
fn complete<T: Eq + Hash + Clone + std::fmt::Debug>(
    n: usize,
    key: &str,
    keep: impl Fn(&Perm) -> bool,
    f: impl Fn(&Perm) -> T,
) {
    let d = dec(n, key);
    let mut by_class: HashMap<u32, T> = HashMap::new();
    let mut by_value: HashMap<T, u32> = HashMap::new();
    for p in all_perms(n).filter(|p| keep(p)) {
        let id = d.class_id(&p);
        let v = f(&p);
        assert_eq!(by_class.entry(id).or_insert_with(|| v.clone()), &v, "{key}: {p} changes value");
        assert_eq!(*by_value.entry(v).or_insert(id), id, "{key}: {p} shares value across classes");
    }
}

/// Each class touched by `keep` contains exactly one member of `family`.
fn one_per_class(d: &ClassDecomposition, family: &[Perm], keep: impl Fn(u32) -> bool) {
    let mut hits: HashMap<u32, usize> = HashMap::new();
    for q in family {
        *hits.entry(d.class_id(q)).or_default() += 1;
    }
    for id in 0..d.num_classes() as u32 {
        if keep(id) {
            assert_eq!(hits.get(&id).copied().unwrap_or(0), 1, "class {id}");
        }
    }
    assert!(hits.keys().all(|&id| keep(id)));
}

#[test]
fn a_k_complete_on_non_avoiders() {
    let key = "{123,132,321}";
    let kk = k(key);
    for n in 5..=7 {
        complete(n, key, |p| !is_avoider(p, &kk), a_k_max);
    }
}

#[test]
fn odd_tailed_complete() {
    for n in 3..=7 {
        complete(n, "{123,132,231}", |_| true, odd_tailed_set);
    }
}

#[test]
fn fall_and_parities_complete() {
    for n in 3..=7 {
        complete(n, "{123,321}{132,231}", |_| true, |p| (parity_profile(p), fall_order(p)));
    }
}

#[test]
fn w_set_complete() {
    for n in 2..=7 {
        complete(n, "{312,321}{123,132}", |_| true, w_set);
    }
}

#[test]
fn origin_is_in_class() {
    let d = dec(6, "{312,321}{123,132}");
    for p in all_perms(6) {
        assert!(d.same_class(&p, &origin_permutation(&p)));
    }
}

#[test]
fn class_size_product_matches() {
    for n in 2..=7 {
        let d = dec(n, "{312,321}{123,132}");
        for p in all_perms(n) {
            assert_eq!(w_class_size(&p), d.class_size_of(&p).into(), "{p}");
        }
    }
}

#[test]
fn fall_class_sizes() {
    for n in 3..=7 {
        let d = dec(n, "{123,321}{132,231}");
        for p in all_perms(n) {
            let want = oracle::fall_class_size(n, fall(&p).len()).unwrap();
            assert_eq!(want, d.class_size_of(&p).into());
        }
    }
}

#[test]
fn b_and_c_are_stooge_sets() {
    let kk = k("{123,132,321}");
    for n in 5..=7 {
        let sets = stooge_sets(n, &kk, &EngineConfig::default()).unwrap();
        assert_eq!(sets.l, generate_b(n).unwrap(), "n={n}");
        assert_eq!(sets.r, generate_c(n).unwrap(), "n={n}");
    }
}

#[test]
fn b_one_per_nontrivial_class() {
    let kk = k("{123,132,321}");
    for n in 6..=7 {
        let d = dec(n, "{123,132,321}");
        let nontrivial: BTreeSet<u32> = all_perms(n).filter(|p| !is_avoider(p, &kk)).map(|p| d.class_id(&p)).collect();
        one_per_class(&d, &generate_b(n).unwrap(), |id| nontrivial.contains(&id));
    }
}

#[test]
fn bushy_tailed_one_per_class() {
    for n in 2..=8 {
        let d = dec(n, "{123,132}{213,321}");
        let bushy: Vec<Perm> = all_perms(n).filter(is_bushy_tailed).collect();
        assert_eq!(bushy.len(), d.num_classes(), "n={n}");
        assert_eq!(oracle::motzkin_sum_count(n).unwrap(), bushy.len().into());
        one_per_class(&d, &bushy, |_| true);
    }
}

#[test]
fn bushy_canonical_is_class_minimum() {
    for n in 1..=7 {
        let d = dec(n, "{123,132}{213,321}");
        let reps: HashMap<u32, Perm> = d.representatives().into_iter().map(|p| (d.class_id(&p), p)).collect();
        for p in all_perms(n) {
            let c = canonical_form(&p, CanonicalKind::Bushy);
            assert_eq!(c, reps[&d.class_id(&p)], "{p}");
            assert!(is_bushy_tailed(&c));
        }
    }
}

#[test]
fn v_permutations_one_per_class() {
    for key in ["{123,132,231}", "{123,132}{213,231}"] {
        for n in 2..=7 {
            let d = dec(n, key);
            let v: Vec<Perm> = all_perms(n).filter(is_v).collect();
            one_per_class(&d, &v, |_| true);
        }
    }
}

#[test]
fn v_canonical_forms() {
    for (key, kind) in [("{123,132,231}", CanonicalKind::VPerm), ("{123,132}{213,231}", CanonicalKind::VPermSplit)] {
        for n in 1..=7 {
            let d = dec(n, key);
            let mut seen: HashMap<u32, Perm> = HashMap::new();
            for p in all_perms(n) {
                let c = canonical_form(&p, kind);
                assert!(is_v(&c));
                assert!(d.same_class(&p, &c), "{key} {p} -> {c}");
                assert_eq!(seen.entry(d.class_id(&p)).or_insert_with(|| c.clone()), &c);
            }
        }
    }
}

#[test]
fn compact_one_per_avoiding_class() {
    let kk = k("{123,231}{213,312}");
    let avoid = k("{123,231}");
    for n in 2..=8 {
        let d = dec(n, "{123,231}{213,312}");
        let mut good = vec![true; d.num_classes()];
        for p in all_perms(n) {
            if !is_avoider(&p, &avoid) {
                good[d.class_id(&p) as usize] = false;
            }
        }
        let compact: Vec<Perm> = all_perms(n).filter(is_compact).collect();
        one_per_class(&d, &compact, |id| good[id as usize]);
        let count = good.iter().filter(|&&g| g).count();
        assert_eq!(oracle::avoiding_class_count(n), count.into(), "n={n}");
        for p in all_perms(n).filter(|p| good[d.class_id(p) as usize]) {
            let c = canonical_form(&p, CanonicalKind::Compact);
            assert!(is_compact(&c), "{p} -> {c}");
            assert!(d.same_class(&p, &c));
        }
        let _ = &kk;
    }
}

#[test]
fn root_form() {
    for n in 2..=7 {
        let d = dec(n, "{123,132}{213,312}");
        for p in all_perms(n) {
            let r = root_permutation(&p);
            assert!(r.position(n as u8) <= 1);
            assert!(d.same_class(&p, &r));
        }
    }
}

#[test]
fn root_prefix_separates_classes() {
    let d = dec(7, "{123,132}{213,312}");
    let mut prefix: HashMap<u32, Vec<u8>> = HashMap::new();
    for p in all_perms(7) {
        let r = root_permutation(&p);
        let head = r.letters()[..=r.position(7)].to_vec();
        assert_eq!(prefix.entry(d.class_id(&p)).or_insert_with(|| head.clone()), &head);
    }
}

#[test]
fn s_d_f_class_sizes() {
    let key = "{123,231}{213,321}";
    for n in [5, 7, 9] {
        let s = s_perm(n).unwrap();
        let class = class_of(&s, &k(key), Mode::Factor, 1000).unwrap();
        assert_eq!(class.len(), n.div_ceil(2));
        let sp = class_of(&s.complement(), &k(key), Mode::Factor, 1000).unwrap();
        assert_eq!(sp.len(), n.div_ceil(2));
    }
    let s5: Vec<Perm> = ["12534", "25134", "25341"].iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(class_of(&s_perm(5).unwrap(), &k(key), Mode::Factor, 100).unwrap(), s5);
    for n in [6, 8] {
        let d = class_of(&d_perm(n).unwrap(), &k(key), Mode::Factor, 1000).unwrap();
        assert_eq!(d.len(), n + 1);
        let f = class_of(&f_perm(n).unwrap(), &k(key), Mode::Factor, 1000).unwrap();
        assert_eq!(f.len(), n / 2);
        let fam = special_families(n).unwrap();
        let dp = class_of(fam.d_prime.as_ref().unwrap(), &k(key), Mode::Factor, 1000).unwrap();
        let fp = class_of(fam.f_prime.as_ref().unwrap(), &k(key), Mode::Factor, 1000).unwrap();
        assert_eq!(dp.len(), n / 2);
        assert_eq!(fp.len(), n + 1);
    }
}

/// Classes other than the two largest, split by sign and first step.
fn small_class_profile(n: usize) -> (oracle::HMatrix, Vec<Vec<Perm>>) {
    let d = dec(n, "{123,231}{213,321}");
    let mut order: Vec<u32> = (0..d.num_classes() as u32).collect();
    order.sort_by_key(|&id| std::cmp::Reverse(d.class_sizes()[id as usize]));
    let big = [order[0], order[1]];
    let mut h = oracle::HMatrix { n, oi: 0, od: 0, ei: 0, ed: 0 };
    let mut small: HashMap<u32, Vec<Perm>> = HashMap::new();
    for p in all_perms(n) {
        let id = d.class_id(&p);
        if big.contains(&id) {
            continue;
        }
        let inc = p.letters()[0] < p.letters()[1];
        match (p.is_even(), inc) {
            (false, true) => h.oi += 1,
            (false, false) => h.od += 1,
            (true, true) => h.ei += 1,
            (true, false) => h.ed += 1,
        }
        small.entry(id).or_default().push(p);
    }
    (h, small.into_values().collect())
}

#[test]
fn h_matrices_match_engine() {
    for n in 6..=8 {
        let (h, _) = small_class_profile(n);
        assert_eq!(h, oracle::h_matrices(n).unwrap(), "n={n}");
        assert_eq!(h, oracle::h_closed_form(n).unwrap(), "n={n}");
    }
}

#[test]
fn small_classes_hold_a_high_layered_member() {
    for n in 6..=7 {
        let (_, small) = small_class_profile(n);
        for class in small {
            let dec_start = class[0].letters()[0] > class[0].letters()[1];
            assert!(class.iter().all(|p| (p.letters()[0] > p.letters()[1]) == dec_start));
            let top = |p: &Perm| p.letters()[0] >= n as u8 - 1 || p.letters()[0] <= 2;
            assert!(class.iter().any(|p| is_layered(p) && top(p)), "{:?}", class[0]);
        }
    }
}

#[test]
fn t_and_e_families_form_classes() {
    let t = "{123,132}{231,312}";
    let e = "{123,132}{213,321}";
    for n in 4..=7 {
        let fam = t_family(n).unwrap();
        let _ = class_of(&fam[0], &k(t), Mode::Factor, 100_000).unwrap();
        let ef = e_family(n).unwrap();
        let _ = class_of(&ef[0], &k(e), Mode::Factor, 100_000).unwrap();
    }
}

#[test]
fn zipped_classes_are_singletons_or_downward() {
    let key = "{123,321}{132,213}";
    let kk = k(key);
    for n in 5..=7 {
        let d = dec(n, key);
        let zipped: Vec<Perm> = all_perms(n).filter(is_zipped).collect();
        let pz: Vec<Perm> = all_perms(n).filter(is_partially_zipped).collect();
        assert_eq!(zipped.len() as u64, oracle::binomial(n, n / 2).iter_u64_digits().next().unwrap_or(0));
        let mut ids: BTreeSet<u32> = zipped.iter().map(|p| d.class_id(p)).collect();
        assert_eq!(ids.len(), zipped.len());
        ids.extend(pz.iter().map(|p| d.class_id(p)));
        assert_eq!(ids.len(), zipped.len() + pz.len());
        assert_eq!(d.num_classes(), ids.len() + 3);
        for z in &zipped {
            for q in class_of(z, &kk, Mode::Factor, 100_000).unwrap() {
                assert!(dangerous_pairs(&q).is_empty(), "{q}");
            }
        }
    }
}

#[test]
fn hill_values_are_invariant() {
    for n in 4..=7 {
        let d = dec(n, "{123,231}{132,213}");
        let mut by_class: HashMap<u32, Option<usize>> = HashMap::new();
        for p in all_perms(n) {
            let v = hill_c_k(&p);
            assert_eq!(by_class.entry(d.class_id(&p)).or_insert(v), &v, "{p}");
        }
    }
}

#[test]
fn fronted_reductive_decent_shapes() {
    let kk = k("{132,213,231}");
    for n in 5..=7 {
        let d = dec(n, "{132,213,231}");
        let reductive: Vec<Perm> = all_perms(n).filter(is_reductive).collect();
        let ids: BTreeSet<u32> = reductive.iter().map(|p| d.class_id(p)).collect();
        assert_eq!(ids.len(), 1, "reductive permutations share a class");
        let decent: Vec<Perm> = all_perms(n).filter(is_decent).collect();
        let dids: BTreeSet<u32> = decent.iter().map(|p| d.class_id(p)).collect();
        assert_eq!(dids.len(), 1);
        assert!(all_perms(n).filter(is_fronted).all(|p| p.letters()[0] == n as u8 - 1 || p.letters()[1] == n as u8));
        let _ = &kk;
    }
}
