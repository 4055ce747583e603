//! Small combinatorial helpers shared by the pipeline and the oracle.

use num_bigint::BigInt;
use num_traits::One;

/// Partitions of `n` as non-increasing part lists, in reverse lexicographic
/// order (`[n]` first).
pub fn partitions_of(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, &mut cur, &mut out);
    out
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if rest == 0 {
        out.push(cur.clone());
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

/// All partitions with sum between `lo` and `hi`.
pub fn partitions_between(lo: u32, hi: u32) -> Vec<Vec<u32>> {
    (lo..=hi).flat_map(partitions_of).collect()
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

pub fn big_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Product of `m_i!` over the multiplicities of equal parts.
pub fn aut_order(parts: &[u32]) -> u64 {
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let mut total = 1;
    let mut run = 0;
    for (i, p) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == *p { run + 1 } else { 1 };
        total *= run;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(partitions_of(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn automorphisms() {
        assert_eq!(aut_order(&[1, 1, 1]), 6);
        assert_eq!(aut_order(&[2, 1, 2, 1]), 4);
        assert_eq!(aut_order(&[]), 1);
        assert_eq!(big_factorial(6), BigInt::from(720));
    }
}
