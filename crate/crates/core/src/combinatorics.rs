//! Binomial coefficients, combination enumeration and colex unranking.

/// `C(n, r)` exactly, `None` on `u128` overflow.
pub fn binomial(n: u64, r: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// `C(n, r)` as a float, for thresholds and expectations.
pub fn binomial_f64(n: f64, r: u64) -> f64 {
    if (r as f64) > n {
        return 0.0;
    }
    (0..r).fold(1.0, |acc, i| acc * (n - i as f64) / (i as f64 + 1.0))
}

/// Calls `f` on every `r`-subset of `items`, in lexicographic order of positions.
pub fn for_each_combination<T: Copy, F: FnMut(&[T])>(items: &[T], r: usize, mut f: F) {
    let n = items.len();
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        f(&buf);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        buf[i] = items[idx[i]];
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
            buf[j] = items[idx[j]];
        }
    }
}

/// The `rank`-th `r`-subset of `0..n` in colex order (sorted ascending).
///
/// Panics if `rank >= C(n, r)`.
pub fn unrank_colex(n: u64, r: u64, mut rank: u128) -> Vec<u32> {
    let mut out = vec![0u32; r as usize];
    let mut hi = n;
    for i in (1..=r).rev() {
        // largest c < hi with C(c, i) <= rank
        let (mut lo, mut up) = (i - 1, hi - 1);
        while lo < up {
            let mid = (lo + up).div_ceil(2);
            if binomial(mid, i).expect("rank bounded by C(n, r)") <= rank {
                lo = mid;
            } else {
                up = mid - 1;
            }
        }
        rank -= binomial(lo, i).expect("rank bounded by C(n, r)");
        out[i as usize - 1] = lo as u32;
        hi = lo;
    }
    assert_eq!(rank, 0, "rank out of range");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(100, 3), Some(161_700));
        assert_eq!(binomial(10_000, 2), Some(49_995_000));
        assert!(binomial(1_000_000, 60).is_none());
        assert!((binomial_f64(68.0, 1) - 68.0).abs() < 1e-12);
        assert!((binomial_f64(20.0, 2) - 190.0).abs() < 1e-9);
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut seen = Vec::new();
        for_each_combination(&[1, 2, 3, 4], 2, |c| seen.push(c.to_vec()));
        assert_eq!(
            seen,
            vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]
        );
        let mut count = 0;
        for_each_combination(&[0u32; 0], 0, |c| {
            assert!(c.is_empty());
            count += 1
        });
        assert_eq!(count, 1);
        for_each_combination(&[1, 2], 3, |_| panic!("no 3-subsets of a 2-set"));
    }

    #[test]
    fn unrank_is_bijective() {
        let (n, r) = (9u64, 3u64);
        let total = binomial(n, r).unwrap();
        let mut all: Vec<Vec<u32>> = (0..total).map(|k| unrank_colex(n, r, k)).collect();
        for c in &all {
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            assert!(*c.last().unwrap() < n as u32);
        }
        all.sort();
        all.dedup();
        assert_eq!(all.len() as u128, total);
        assert_eq!(unrank_colex(4, 2, 0), vec![0, 1]);
        assert_eq!(unrank_colex(4, 2, 5), vec![2, 3]);
    }
}
