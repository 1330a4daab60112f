//! Selection-sort variants with exact operation counters, and inversion counting.
//!
//! Neither sort is stable.

use serde::{Deserialize, Serialize};

/// Tallies for one sort execution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    pub comparisons: u64,
    pub interchanges: u64,
}

/// The swap-eagerly variant: for every pair `i < j`, swap when `a[i] > a[j]`.
///
/// Always performs `n(n-1)/2` comparisons. Equal items are never swapped.
pub fn exchange_selection_sort_in_place<T: PartialOrd>(items: &mut [T]) -> OpCounters {
    let n = items.len();
    let mut counters = OpCounters::default();
    for i in 0..n.saturating_sub(1) {
        for j in i + 1..n {
            counters.comparisons += 1;
            if items[i] > items[j] {
                items.swap(i, j);
                counters.interchanges += 1;
            }
        }
    }
    counters
}

pub fn exchange_selection_sort<T: PartialOrd + Clone>(items: &[T]) -> (Vec<T>, OpCounters) {
    let mut out = items.to_vec();
    let counters = exchange_selection_sort_in_place(&mut out);
    (out, counters)
}

/// Finds the minimum of each suffix and swaps it into place once per pass.
///
/// The swap is skipped when the minimum is already at the front of the suffix,
/// so interchanges never exceed `n - 1`.
pub fn textbook_selection_sort_in_place<T: PartialOrd>(items: &mut [T]) -> OpCounters {
    let n = items.len();
    let mut counters = OpCounters::default();
    for i in 0..n.saturating_sub(1) {
        let mut min = i;
        for j in i + 1..n {
            counters.comparisons += 1;
            if items[j] < items[min] {
                min = j;
            }
        }
        if min != i {
            items.swap(i, min);
            counters.interchanges += 1;
        }
    }
    counters
}

pub fn textbook_selection_sort<T: PartialOrd + Clone>(items: &[T]) -> (Vec<T>, OpCounters) {
    let mut out = items.to_vec();
    let counters = textbook_selection_sort_in_place(&mut out);
    (out, counters)
}

/// Number of pairs `i < j` with `items[i] > items[j]`. Ties do not count.
///
/// Merge-sort based, `O(n log n)`.
pub fn count_inversions<T: PartialOrd + Clone>(items: &[T]) -> u64 {
    let mut work = items.to_vec();
    let mut buf = items.to_vec();
    sort_count(&mut work, &mut buf)
}

fn sort_count<T: PartialOrd + Clone>(a: &mut [T], buf: &mut [T]) -> u64 {
    let n = a.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (left, right) = a.split_at_mut(mid);
        let (lbuf, rbuf) = buf.split_at_mut(mid);
        sort_count(left, lbuf) + sort_count(right, rbuf)
    };

    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        // `<=` keeps ties out of the count
        if a[i] <= a[j] {
            buf[k] = a[i].clone();
            i += 1;
        } else {
            buf[k] = a[j].clone();
            inv += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].clone_from_slice(&a[i..mid]);
    k += mid - i;
    buf[k..n].clone_from_slice(&a[j..n]);
    a.clone_from_slice(&buf[..n]);
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_inversions(a: &[u64]) -> u64 {
        let mut c = 0;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if a[i] > a[j] {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn exchange_hand_traces() {
        let (s, c) = exchange_selection_sort(&[3, 1, 2]);
        assert_eq!(s, vec![1, 2, 3]);
        assert_eq!(
            c,
            OpCounters {
                comparisons: 3,
                interchanges: 2
            }
        );

        let (_, c) = exchange_selection_sort(&[1, 2, 3]);
        assert_eq!(
            c,
            OpCounters {
                comparisons: 3,
                interchanges: 0
            }
        );

        let (_, c) = exchange_selection_sort(&[3, 2, 1]);
        assert_eq!(
            c,
            OpCounters {
                comparisons: 3,
                interchanges: 3
            }
        );

        let (_, c) = exchange_selection_sort(&[7, 7, 7, 7]);
        assert_eq!(
            c,
            OpCounters {
                comparisons: 6,
                interchanges: 0
            }
        );
    }

    #[test]
    fn empty_and_singleton() {
        let empty: [u64; 0] = [];
        assert_eq!(exchange_selection_sort(&empty).1, OpCounters::default());
        assert_eq!(textbook_selection_sort(&empty).1, OpCounters::default());
        assert_eq!(exchange_selection_sort(&[5]).1, OpCounters::default());
        assert_eq!(count_inversions(&empty), 0);
        assert_eq!(count_inversions(&[5]), 0);
    }

    #[test]
    fn textbook_hand_traces() {
        // pass 1: min 1 at index 1, swap -> [1,3,2]; pass 2: min 2 at index 2, swap
        let (s, c) = textbook_selection_sort(&[3, 1, 2]);
        assert_eq!(s, vec![1, 2, 3]);
        assert_eq!(
            c,
            OpCounters {
                comparisons: 3,
                interchanges: 2
            }
        );

        let (_, c) = textbook_selection_sort(&[1, 2, 3, 4]);
        assert_eq!(c.interchanges, 0);
        // [3,2,1]: swap 3<->1 gives [1,2,3], second pass already in place
        assert_eq!(textbook_selection_sort(&[3, 2, 1]).1.interchanges, 1);
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(count_inversions(&[2, 1]), 1);
        assert_eq!(count_inversions(&[1, 2, 3]), 0);
        assert_eq!(count_inversions(&[3, 2, 1]), 3);
        assert_eq!(count_inversions(&[2, 2, 1, 1]), 4);
        assert_eq!(count_inversions(&[0.5, 0.25]), 1);
    }

    #[test]
    fn float_items() {
        let (s, c) = exchange_selection_sort(&[0.9, 0.1, 0.5]);
        assert_eq!(s, vec![0.1, 0.5, 0.9]);
        assert_eq!(c.comparisons, 3);
    }

    proptest! {
        #[test]
        fn sorts_agree_and_preserve_multiset(v in prop::collection::vec(0u64..20, 0..60)) {
            let (a, ca) = exchange_selection_sort(&v);
            let (b, cb) = textbook_selection_sort(&v);
            let mut expect = v.clone();
            expect.sort_unstable();
            prop_assert_eq!(&a, &expect);
            prop_assert_eq!(&b, &expect);
            let n = v.len() as u64;
            prop_assert_eq!(ca.comparisons, n * n.saturating_sub(1) / 2);
            prop_assert_eq!(cb.comparisons, n * n.saturating_sub(1) / 2);
            prop_assert!(ca.interchanges <= ca.comparisons);
            prop_assert!(cb.interchanges <= n.saturating_sub(1));
        }

        #[test]
        fn inversions_match_brute_force(v in prop::collection::vec(0u64..10, 0..40)) {
            prop_assert_eq!(count_inversions(&v), brute_inversions(&v));
        }

        #[test]
        fn zero_inversions_iff_no_swaps(v in prop::collection::vec(0u64..5, 0..30)) {
            let inv = count_inversions(&v);
            let swaps = exchange_selection_sort(&v).1.interchanges;
            prop_assert_eq!(inv == 0, swaps == 0);
        }

        #[test]
        fn pair_swap_is_inversion(a in 0u64..4, b in 0u64..4) {
            let v = [a, b];
            prop_assert_eq!(exchange_selection_sort(&v).1.interchanges, count_inversions(&v));
        }
    }
}
