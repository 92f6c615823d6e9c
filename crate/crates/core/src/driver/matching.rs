use num_complex::Complex64;

/// Largest entrywise distance between two rows of equal length.
pub fn row_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// A bijection `a[i] ↔ b[perm[i]]` minimizing the largest row distance, with that distance.
/// `None` when the row counts differ.
pub fn bottleneck_matching(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Option<(Vec<usize>, f64)> {
    let n = a.len();
    if n != b.len() {
        return None;
    }
    if n == 0 {
        return Some((Vec::new(), 0.0));
    }
    let dist: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| row_distance(x, y)).collect()).collect();
    let mut thresholds: Vec<f64> = dist.iter().flatten().copied().collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let (mut lo, mut hi) = (0, thresholds.len() - 1);
    if perfect_matching(&dist, thresholds[hi]).is_none() {
        return None;
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&dist, thresholds[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let perm = perfect_matching(&dist, thresholds[lo])?;
    Some((perm, thresholds[lo]))
}

/// Kuhn's augmenting-path matching on edges with `dist <= t`.
fn perfect_matching(dist: &[Vec<f64>], t: f64) -> Option<Vec<usize>> {
    let n = dist.len();
    let mut match_b = vec![usize::MAX; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, dist, t, &mut seen, &mut match_b) {
            return None;
        }
    }
    let mut perm = vec![0; n];
    for (j, &i) in match_b.iter().enumerate() {
        perm[i] = j;
    }
    Some(perm)
}

fn augment(i: usize, dist: &[Vec<f64>], t: f64, seen: &mut [bool], match_b: &mut [usize]) -> bool {
    for j in 0..dist.len() {
        if dist[i][j] <= t && !seen[j] {
            seen[j] = true;
            if match_b[j] == usize::MAX || augment(match_b[j], dist, t, seen, match_b) {
                match_b[j] = i;
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn finds_permutation() {
        let a = vec![row(&[1.0, 0.0]), row(&[0.0, 1.0]), row(&[2.0, 2.0])];
        let b = vec![row(&[2.0, 2.01]), row(&[1.0, 0.0]), row(&[0.0, 1.0])];
        let (perm, res) = bottleneck_matching(&a, &b).unwrap();
        assert_eq!(perm, vec![1, 2, 0]);
        assert!((res - 0.01).abs() < 1e-12);
    }

    #[test]
    fn bottleneck_beats_greedy() {
        // greedy would pair a0 with b0 (distance 0) and force a1-b1 (distance 10)
        let a = vec![row(&[0.0]), row(&[1.0])];
        let b = vec![row(&[0.0]), row(&[11.0])];
        let (_, res) = bottleneck_matching(&a, &b).unwrap();
        assert!((res - 10.0).abs() < 1e-12);
        let a = vec![row(&[0.0]), row(&[1.0])];
        let b = vec![row(&[0.5]), row(&[0.1])];
        let (perm, res) = bottleneck_matching(&a, &b).unwrap();
        assert_eq!(perm, vec![1, 0]);
        assert!((res - 0.5).abs() < 1e-12);
    }

    #[test]
    fn size_mismatch() {
        assert!(bottleneck_matching(&[row(&[1.0])], &[]).is_none());
        assert_eq!(bottleneck_matching(&[], &[]).unwrap().1, 0.0);
    }
}
