use proptest::prelude::*;

use permclass::invariants::*;
use permclass::meta::{repeated_down_jump, Strategy as Jump};
use permclass::{is_avoider, neighbors, Mode, Partition, Perm};

fn k(s: &str) -> Partition {
    s.parse().unwrap()
}

fn perm(n: usize) -> impl Strategy<Value = Perm> {
    Just((1..=n as u8).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|v| Perm::new(v).unwrap())
}

/// A random permutation and a random transformation of it, when one exists.
fn step(n: usize, key: &'static str) -> impl Strategy<Value = Option<(Perm, Perm)>> {
    (perm(n), any::<prop::sample::Index>()).prop_map(move |(p, i)| {
        let ts = neighbors(&p, &k(key), Mode::Factor);
        (!ts.is_empty()).then(|| (p, ts[i.index(ts.len())].target.clone()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn a_k_invariant(s in step(7, "{123,132,321}")) {
        if let Some((p, q)) = s {
            prop_assert_eq!(a_k_max(&p), a_k_max(&q));
        }
    }

    #[test]
    fn odd_tailed_invariant(s in step(7, "{123,132,231}")) {
        if let Some((p, q)) = s {
            prop_assert_eq!(odd_tailed_set(&p), odd_tailed_set(&q));
        }
    }

    #[test]
    fn w_set_invariant(s in step(7, "{312,321}{123,132}")) {
        if let Some((p, q)) = s {
            prop_assert_eq!(w_set(&p), w_set(&q));
            prop_assert_eq!(origin_permutation(&p), origin_permutation(&q));
        }
    }

    #[test]
    fn fall_invariant(s in step(7, "{123,321}{132,231}")) {
        if let Some((p, q)) = s {
            prop_assert_eq!(fall_order(&p), fall_order(&q));
            prop_assert_eq!(parity_profile(&p), parity_profile(&q));
        }
    }

    #[test]
    fn hills_invariant(s in step(7, "{123,231}{213,132}")) {
        if let Some((p, q)) = s {
            prop_assert_eq!(hill_c_k(&p), hill_c_k(&q));
        }
    }

    #[test]
    fn canonical_forms_invariant(s in step(7, "{123,132}{213,321}")) {
        if let Some((p, q)) = s {
            prop_assert_eq!(canonical_form(&p, CanonicalKind::Bushy), canonical_form(&q, CanonicalKind::Bushy));
        }
    }

    #[test]
    fn v_forms_invariant(s in step(8, "{123,132}{213,231}"), t in step(8, "{123,132,231}")) {
        if let Some((p, q)) = s {
            prop_assert_eq!(canonical_form(&p, CanonicalKind::VPermSplit), canonical_form(&q, CanonicalKind::VPermSplit));
        }
        if let Some((p, q)) = t {
            prop_assert_eq!(canonical_form(&p, CanonicalKind::VPerm), canonical_form(&q, CanonicalKind::VPerm));
        }
    }

    #[test]
    fn no_new_dangerous_pairs(p in perm(7), i in any::<prop::sample::Index>()) {
        let w = p.letters();
        let starts: Vec<usize> = (0..w.len() - 2).filter(|&s| w[s] > w[s + 1] && w[s + 1] > w[s + 2]).collect();
        if !starts.is_empty() {
            let s = starts[i.index(starts.len())];
            let mut v = w.to_vec();
            v[s..s + 3].reverse();
            let q = Perm::new(v).unwrap();
            let before = dangerous_pairs(&p);
            for pair in dangerous_pairs(&q) {
                prop_assert!(before.contains(&pair), "{} -> {} created {:?}", p, q, pair);
            }
        }
    }

    #[test]
    fn down_jumps_reach_avoiders(p in perm(7)) {
        let kk = k("{123,132}{213,231}");
        let u = k("{132,231}");
        let (a, steps) = repeated_down_jump(&p, &kk, Jump::Leftmost);
        prop_assert!(is_avoider(&a, &u));
        prop_assert!(steps as u64 <= p.rank());
        prop_assert!(a <= p);
        prop_assert_eq!(repeated_down_jump(&p, &kk, Jump::Rightmost).0, a);
    }

    #[test]
    fn symmetry_maps_w_set(p in perm(7)) {
        prop_assert_eq!(w_set(&p).len(), valleys_peaks(&p).len());
        prop_assert!(fall(&p).contains(&7));
    }
}
