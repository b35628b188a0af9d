use std::collections::HashSet;

use proptest::prelude::*;
use rank2d_core::{
    overlap_curve, overlap_fraction, subset_window_fraction, window_overlap, RankedList,
};

fn list(ids: &[u32]) -> RankedList {
    RankedList::new(ids.iter().map(|i| format!("p{i}")).collect()).unwrap()
}

/// Two distinct-name lists drawn from a shared pool of size `pool`.
fn two_lists(pool: u32) -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    let perm = Just((0..pool).collect::<Vec<u32>>()).prop_shuffle();
    (perm.clone(), perm, 1..=pool as usize, 1..=pool as usize).prop_map(|(mut a, mut b, la, lb)| {
        a.truncate(la);
        b.truncate(lb);
        (a, b)
    })
}

fn naive_fraction(a: &[u32], b: &[u32], ks: usize) -> f64 {
    let top: HashSet<u32> = a[..ks].iter().copied().collect();
    b[..ks].iter().filter(|x| top.contains(x)).count() as f64 / ks as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn fraction_properties((a, b) in two_lists(60)) {
        let (la, lb) = (list(&a), list(&b));
        let depth = a.len().min(b.len());
        let curve = overlap_curve(&la, &lb, depth).unwrap();
        let mut prev_shared = 0.0;
        for ks in 1..=depth {
            let f = overlap_fraction(&la, &lb, ks).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert_eq!(f, overlap_fraction(&lb, &la, ks).unwrap());
            prop_assert_eq!(f, naive_fraction(&a, &b, ks));
            prop_assert_eq!(curve.points[ks - 1], (ks as f64, f));
            // the shared count never shrinks
            let shared = f * ks as f64;
            prop_assert!(shared + 1e-9 >= prev_shared);
            prev_shared = shared;
        }
    }

    #[test]
    fn permuted_copy_agrees_at_full_depth(a in Just((0..40u32).collect::<Vec<_>>()).prop_shuffle(), b in Just((0..40u32).collect::<Vec<_>>()).prop_shuffle()) {
        prop_assert_eq!(overlap_fraction(&list(&a), &list(&b), 40).unwrap(), 1.0);
    }

    #[test]
    fn windows_tile_the_lists((a, b) in two_lists(80), w in 1usize..30) {
        let depth = a.len().min(b.len());
        prop_assume!(w <= depth);
        let series = window_overlap(&list(&a), &list(&b), w).unwrap();
        prop_assert_eq!(series.points.len(), depth / w);
        for (t, &(x, f)) in series.points.iter().enumerate() {
            let m = t * w;
            prop_assert_eq!(x, m as f64 + w as f64 / 2.0);
            let wa: HashSet<u32> = a[m..m + w].iter().copied().collect();
            let shared = b[m..m + w].iter().filter(|v| wa.contains(v)).count();
            prop_assert_eq!(f, shared as f64 / w as f64);
        }
    }
}

#[test]
fn subset_windows_count_members() {
    // a subset of 193 names spread through a ranking of 754
    let ranking: Vec<u32> = (0..754).collect();
    let members: Vec<String> = (0..193).map(|i| format!("p{}", i * 754 / 193)).collect();
    assert_eq!(members.iter().collect::<HashSet<_>>().len(), 193);

    let series = subset_window_fraction(&list(&ranking), &members, 20).unwrap();
    assert_eq!(series.points.len(), 754 / 20);
    let hits: f64 = series.points.iter().map(|p| p.1 * 20.0).sum();
    // members ranked beyond the last whole window are not counted
    let tail = members
        .iter()
        .filter(|m| m[1..].parse::<usize>().unwrap() >= 740)
        .count();
    assert!((hits - (193 - tail) as f64).abs() < 1e-9);

    let one = subset_window_fraction(&list(&ranking), &members, 754).unwrap();
    assert_eq!(one.points, vec![(377.0, 193.0 / 754.0)]);
}
