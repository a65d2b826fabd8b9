//! Admissible sequences, which index the disc classes with invariant one.

use serde::Serialize;

use super::{GwError, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdmissibleSequence {
    pub entries: Vec<u32>,
    pub center: usize,
}

/// Checks the conditions on `s_1..s_{m-1}` (1-based) with center `p`.
pub fn is_admissible(s: &[u32], p: usize) -> bool {
    let Some((&first, &last)) = s.first().zip(s.last()) else { return true };
    if first > 1 || last > 1 {
        return false;
    }
    (1..s.len()).all(|i| {
        let (a, b) = (s[i - 1], s[i]);
        if i < p {
            a <= b && b <= a + 1
        } else {
            a >= b && b + 1 >= a
        }
    })
}

/// All admissible sequences of length `m - 1` with center `p` and entry sum
/// at most `cap`, in lexicographic order. For `m = 1` this is the single
/// empty sequence.
pub fn enumerate_admissible(m: usize, p: usize, cap: u32) -> Result<Vec<AdmissibleSequence>> {
    if m == 0 {
        return Err(GwError::InvalidArgument("m must be at least 1".into()));
    }
    if m == 1 {
        return Ok(vec![AdmissibleSequence { entries: Vec::new(), center: p }]);
    }
    if p == 0 || p >= m {
        return Err(GwError::InvalidArgument(format!("center {p} outside 1..={}", m - 1)));
    }
    let len = m - 1;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn dfs(cur: &mut Vec<u32>, len: usize, p: usize, budget: u32, out: &mut Vec<AdmissibleSequence>) {
        let i = cur.len();
        if i == len {
            if *cur.last().unwrap() <= 1 {
                out.push(AdmissibleSequence { entries: cur.clone(), center: p });
            }
            return;
        }
        let range: Vec<u32> = match cur.last() {
            None => vec![0, 1],
            // moving from s_i (1-based index i) to s_{i+1}
            Some(&a) if i < p => vec![a, a + 1],
            Some(&a) => {
                if a == 0 {
                    vec![0]
                } else {
                    vec![a - 1, a]
                }
            }
        };
        // entries can never recover from exceeding what the tail can shed
        let remaining = (len - i - 1) as u32;
        for b in range {
            if b > budget || b > remaining + 1 {
                continue;
            }
            cur.push(b);
            dfs(cur, len, p, budget - b, out);
            cur.pop();
        }
    }
    dfs(&mut cur, len, p, cap, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn entries(v: Vec<AdmissibleSequence>) -> Vec<Vec<u32>> {
        v.into_iter().map(|s| s.entries).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(entries(enumerate_admissible(2, 1, 5).unwrap()), vec![vec![0], vec![1]]);
        assert_eq!(
            entries(enumerate_admissible(3, 1, 2).unwrap()),
            vec![vec![0, 0], vec![1, 0], vec![1, 1]]
        );
        assert_eq!(entries(enumerate_admissible(1, 0, 3).unwrap()), vec![Vec::<u32>::new()]);
        assert!(enumerate_admissible(3, 3, 2).is_err());
        assert!(enumerate_admissible(0, 0, 2).is_err());
    }

    #[test]
    fn matches_brute_force() {
        for m in 2..=6usize {
            for p in 1..m {
                for cap in 0..=6u32 {
                    let mut brute = Vec::new();
                    let len = m - 1;
                    let total = 5u32.pow(len as u32);
                    for code in 0..total {
                        let s: Vec<u32> = (0..len).map(|i| (code / 5u32.pow(i as u32)) % 5).collect();
                        if s.iter().sum::<u32>() <= cap && is_admissible(&s, p) {
                            brute.push(s);
                        }
                    }
                    brute.sort();
                    assert_eq!(entries(enumerate_admissible(m, p, cap).unwrap()), brute, "m={m} p={p} cap={cap}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn reflection_symmetry(m in 2usize..8, p_seed in 0usize..100, cap in 0u32..8) {
            let p = 1 + p_seed % (m - 1);
            let a = enumerate_admissible(m, p, cap).unwrap();
            let mut b: Vec<Vec<u32>> = enumerate_admissible(m, m - p, cap)
                .unwrap()
                .into_iter()
                .map(|s| s.entries.into_iter().rev().collect())
                .collect();
            b.sort();
            prop_assert_eq!(entries(a), b);
        }
    }
}
