use proptest::prelude::*;
use tsirelson::rational::{int, Q};
use tsirelson::schreier::{family_mass, is_admissible, member, tree_decompose, FamilyDescriptor, FinSet};
use tsirelson::C00Vector;

fn set(elements: Vec<usize>) -> FinSet {
    FinSet::from_unsorted(elements).unwrap()
}

fn subset_strategy(hi: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::btree_set(1..=hi, 0..10).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn hereditary(f in subset_strategy(30), mask in any::<u32>(), k in 0usize..=3) {
        let fam = FamilyDescriptor::Schreier(k);
        let g: Vec<usize> = f.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
        if member(&set(f.clone()), &fam) {
            prop_assert!(member(&set(g), &fam));
        }
    }

    #[test]
    fn spreading(f in subset_strategy(20), shifts in proptest::collection::vec(0usize..4, 10), k in 0usize..=3) {
        let fam = FamilyDescriptor::Schreier(k);
        let mut acc = 0;
        let spread: Vec<usize> = f.iter().zip(&shifts).map(|(&x, &s)| { acc += s; x + acc }).collect();
        if member(&set(f.clone()), &fam) {
            prop_assert!(member(&set(spread), &fam));
        }
    }

    #[test]
    fn omega_is_diagonal(f in subset_strategy(20)) {
        let s = set(f);
        let expected = match FinSet::min(&s) {
            None => true,
            Some(m) => member(&s, &FamilyDescriptor::Schreier(m)),
        };
        prop_assert_eq!(member(&s, &FamilyDescriptor::SchreierOmega), expected);
    }
}

fn admissible_strategy() -> impl Strategy<Value = Vec<FinSet>> {
    (1usize..6, proptest::collection::vec(1usize..4, 1..6)).prop_map(|(start, sizes)| {
        let mut next = start;
        sizes
            .into_iter()
            .map(|len| {
                let s = FinSet::range(next, next + len - 1);
                next += len;
                s
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn tree_decompose_respects_invariants(sets in admissible_strategy(), m in 1usize..=3) {
        let fam = FamilyDescriptor::Schreier(m);
        prop_assume!(is_admissible(&sets, &fam).unwrap());
        let tree = tree_decompose(&sets, m).unwrap();
        prop_assert!(tree.check_invariants());
        prop_assert!(tree.height() <= m);
        let leaves: Vec<FinSet> = tree.terminals().into_iter().cloned().collect();
        prop_assert_eq!(leaves, sets);
    }

    #[test]
    fn mass_matches_exhaustive(weights in proptest::collection::vec(0i64..5, 1..12), lo in 1usize..5, k in 0usize..=2) {
        let fam = FamilyDescriptor::Schreier(k);
        let x = C00Vector::from_mags(1, weights.iter().enumerate().map(|(i, &w)| (lo + i, int(w))));
        let idx: Vec<usize> = (0..weights.len()).map(|i| lo + i).collect();
        let mut best = Q::from_integer(0.into());
        for mask in 0u32..1 << idx.len() {
            let f: Vec<usize> = idx.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
            let s = set(f.clone());
            if member(&s, &fam) {
                let total: Q = f.iter().map(|i| x.get(*i).map(|e| e.mag.clone()).unwrap_or_default()).sum();
                if total > best {
                    best = total;
                }
            }
        }
        prop_assert_eq!(family_mass(&x, &fam).unwrap(), best);
    }
}
