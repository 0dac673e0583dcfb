mod common;

use heapfpt::oracles::{brute_lhs, OracleBudget};
use heapfpt::sequences::{
    enumerate_refined_shapes, is_heapable, lhs_dp, lhs_length, lhs_reconstruct, prev_shapes, refine, Label, LhsStream,
    Sequence,
};
use proptest::prelude::*;

fn seq_strategy(max_k: Label, max_n: usize) -> impl Strategy<Value = (Label, Vec<Label>)> {
    (1..=max_k).prop_flat_map(move |k| (Just(k), prop::collection::vec(1..=k, 0..=max_n)))
}

fn longest_nondecreasing(s: &[Label]) -> usize {
    let mut best = vec![0usize; s.len()];
    for j in 0..s.len() {
        best[j] = 1 + (0..j).filter(|&i| s[i] <= s[j]).map(|i| best[i]).max().unwrap_or(0);
    }
    best.into_iter().max().unwrap_or(0)
}

proptest! {
    #[test]
    fn dp_matches_oracle((k, s) in seq_strategy(4, 10)) {
        let seq = Sequence::new(s.clone(), k).unwrap();
        let want = brute_lhs(&s, &OracleBudget::default()).unwrap();
        prop_assert_eq!(lhs_dp(&seq).unwrap().length, want);
    }

    #[test]
    fn stream_matches_batch((k, s) in seq_strategy(6, 200)) {
        let seq = Sequence::new(s.clone(), k).unwrap();
        let batch = lhs_dp(&seq).unwrap();
        let mut stream = LhsStream::new(k).unwrap();
        for (i, &a) in s.iter().enumerate() {
            let running = stream.feed(a).unwrap() as usize;
            let prefix = Sequence::new(s[..=i].to_vec(), k).unwrap();
            if i % 37 == 0 {
                prop_assert_eq!(running, lhs_length(&prefix).unwrap());
            }
        }
        prop_assert_eq!(stream.current_length() as usize, batch.length);
    }

    #[test]
    fn reconstruction_is_sound((k, s) in seq_strategy(5, 60)) {
        let seq = Sequence::new(s.clone(), k).unwrap();
        let lhs = lhs_dp(&seq).unwrap();
        let idx = lhs_reconstruct(&lhs.table, &seq);
        prop_assert_eq!(idx.len(), lhs.length);
        prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        let sub = seq.select(&idx);
        prop_assert!(is_heapable(&sub).unwrap());
        if sub.len() <= 12 {
            prop_assert_eq!(brute_lhs(sub.items(), &OracleBudget::default()).unwrap(), sub.len());
        }
    }

    #[test]
    fn shifting_labels_changes_nothing((k, s) in seq_strategy(5, 40), c in 1u32..=4) {
        let shifted: Vec<Label> = s.iter().map(|&a| a + c).collect();
        let a = lhs_length(&Sequence::new(s, k).unwrap()).unwrap();
        let b = lhs_length(&Sequence::new(shifted, k + c).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn compression_changes_nothing(values in prop::collection::vec(1u32..1000, 0..=12)) {
        let seq = Sequence::from_values(&values);
        prop_assume!(seq.k() as usize <= heapfpt::sequences::MAX_ALPHABET);
        prop_assert_eq!(lhs_length(&seq).unwrap(), brute_lhs(&values, &OracleBudget::default()).unwrap());
    }

    #[test]
    fn bounded_by_chain_and_length((k, s) in seq_strategy(6, 80)) {
        let len = lhs_length(&Sequence::new(s.clone(), k).unwrap()).unwrap();
        prop_assert!(len <= s.len());
        prop_assert!(len >= longest_nondecreasing(&s));
    }

    #[test]
    fn appending_never_shrinks((k, s) in seq_strategy(5, 40), extra in 1u32..=5) {
        let extra = extra.min(k);
        let a = lhs_length(&Sequence::new(s.clone(), k).unwrap()).unwrap();
        let mut longer = s;
        longer.push(extra);
        let b = lhs_length(&Sequence::new(longer, k).unwrap()).unwrap();
        prop_assert!(b == a || b == a + 1);
    }
}

#[test]
fn shape_count_bound() {
    for k in 1..=6 {
        let shapes = enumerate_refined_shapes(k).unwrap();
        let bound: usize = (1..=k + 1).product::<usize>() + 1;
        assert!(shapes.len() <= bound, "k={k}: {} shapes", shapes.len());
        for s in &shapes {
            assert_eq!(&refine(s.coords()), s, "refine is not idempotent on {:?}", s.coords());
        }
    }
}

#[test]
fn prev_shapes_inverts_insert() {
    for k in 1..=4usize {
        let shapes = enumerate_refined_shapes(k).unwrap();
        for target in &shapes {
            for label in 1..=k as Label {
                let mut want: Vec<_> = shapes
                    .iter()
                    .filter(|s| (0..=label).any(|p| s.insert(p, label).as_ref() == Some(target)))
                    .cloned()
                    .collect();
                want.sort();
                let mut got = prev_shapes(target, label).unwrap();
                got.sort();
                assert_eq!(got, want, "target {:?} label {label}", target.coords());
            }
        }
    }
}

#[test]
fn exhaustive_small_alphabets() {
    for (k, n) in [(2, 10), (3, 7), (4, 6)] {
        for s in common::all_sequences(k, n) {
            let seq = Sequence::new(s.clone(), k).unwrap();
            assert_eq!(lhs_dp(&seq).unwrap().length, brute_lhs(&s, &OracleBudget::default()).unwrap(), "{s:?}");
        }
    }
}

proptest! {
    #[test]
    fn table_invariants((k, s) in seq_strategy(4, 30)) {
        let seq = Sequence::new(s, k).unwrap();
        let table = lhs_dp(&seq).unwrap().table;
        let shapes = enumerate_refined_shapes(k as usize).unwrap();
        let empty = heapfpt::sequences::RefinedShape::empty(k as usize);
        for x in &shapes {
            let at0 = table.value(0, x);
            prop_assert_eq!(at0, if *x == empty { Some(0) } else { None });
        }
        for i in 1..table.prefixes() {
            for x in &shapes {
                if let Some(v) = table.value(i, x) {
                    prop_assert!(v as usize <= i);
                    if let Some(before) = table.value(i - 1, x) {
                        prop_assert!(v >= before);
                    }
                }
            }
        }
    }
}

#[test]
fn insertion_stays_in_the_space() {
    for k in 1..=5usize {
        let shapes = enumerate_refined_shapes(k).unwrap();
        for x in &shapes {
            for b in 1..=k as Label {
                for a in 0..=b {
                    if let Some(y) = x.insert(a, b) {
                        assert!(shapes.contains(&y), "{:?} -> {:?}", x.coords(), y.coords());
                    }
                }
            }
        }
    }
}
