//! Lyndon words over small alphabets and the necklace count of their number.

use num_integer::Integer;

/// A word is Lyndon iff it is strictly smaller than each of its proper
/// suffixes.
pub fn is_lyndon(word: &[u8]) -> bool {
    !word.is_empty() && (1..word.len()).all(|i| word < &word[i..])
}

/// Standard factorization `w = uv` where `v` is the longest proper Lyndon
/// suffix. Returns `None` for single letters.
pub fn standard_factorization(word: &[u8]) -> Option<(&[u8], &[u8])> {
    (1..word.len())
        .find(|&i| is_lyndon(&word[i..]))
        .map(|i| word.split_at(i))
}

/// All Lyndon words with the given letter multiplicities, in lexicographic
/// order.
pub fn lyndon_words_with_content(counts: &[u32]) -> Vec<Vec<u8>> {
    let mut word: Vec<u8> = counts
        .iter()
        .enumerate()
        .flat_map(|(letter, &c)| std::iter::repeat_n(letter as u8, c as usize))
        .collect();
    let mut out = Vec::new();
    if word.is_empty() {
        return out;
    }
    let total: u32 = counts.iter().sum();
    if total > 1 && counts.contains(&total) {
        return out;
    }
    // multiset permutations in increasing order; a Lyndon word starts with
    // its smallest letter, so stop once the first letter changes
    let first = word[0];
    loop {
        if word[0] != first {
            break;
        }
        if is_lyndon(&word) {
            out.push(word.clone());
        }
        if !next_permutation(&mut word) {
            break;
        }
    }
    out
}

fn next_permutation(w: &mut [u8]) -> bool {
    if w.len() < 2 {
        return false;
    }
    let mut i = w.len() - 1;
    while i > 0 && w[i - 1] >= w[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = w.len() - 1;
    while w[j] <= w[i - 1] {
        j -= 1;
    }
    w.swap(i - 1, j);
    w[i..].reverse();
    true
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn multinomial(parts: &[u64]) -> u128 {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &p in parts {
        for i in 1..=p as u128 {
            total += 1;
            // acc * total / i stays integral: acc * C(total, i) so far
            acc = acc.checked_mul(total).expect("multinomial overflow") / i;
        }
    }
    acc
}

/// Dimension of the free Lie algebra in the given fine degree:
/// `(1/L) * sum_{d | gcd} mu(d) * (L/d)! / prod (k_i/d)!`.
pub fn witt_dimension(counts: &[u32]) -> u128 {
    let len: u64 = counts.iter().map(|&c| c as u64).sum();
    if len == 0 {
        return 0;
    }
    let g = counts.iter().fold(0u64, |g, &c| g.gcd(&(c as u64)));
    let mut sum: i128 = 0;
    for d in 1..=g {
        if g % d != 0 {
            continue;
        }
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let parts: Vec<u64> = counts.iter().map(|&c| c as u64 / d).collect();
        sum += mu as i128 * multinomial(&parts) as i128;
    }
    debug_assert!(sum % len as i128 == 0);
    (sum / len as i128) as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_basics() {
        assert!(is_lyndon(&[0]));
        assert!(is_lyndon(&[0, 1]));
        assert!(!is_lyndon(&[1, 0]));
        assert!(!is_lyndon(&[0, 0]));
        assert!(is_lyndon(&[0, 0, 1]));
        assert!(!is_lyndon(&[0, 1, 0, 1]));
        assert_eq!(
            standard_factorization(&[0, 0, 1]),
            Some((&[0u8][..], &[0u8, 1][..]))
        );
        assert_eq!(
            standard_factorization(&[0, 1, 1]),
            Some((&[0u8, 1][..], &[1u8][..]))
        );
        assert_eq!(standard_factorization(&[0]), None);
    }

    #[test]
    fn witt_values() {
        assert_eq!(witt_dimension(&[2, 1]), 1);
        assert_eq!(witt_dimension(&[2]), 0);
        assert_eq!(witt_dimension(&[1]), 1);
        assert_eq!(witt_dimension(&[3, 3]), 3);
        assert_eq!(witt_dimension(&[1, 7, 7]), 3432);
        let len5: u128 = (0..=5).map(|a| witt_dimension(&[a, 5 - a])).sum();
        assert_eq!(len5, 6);
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(lyndon_words_with_content(&[2, 1]), vec![vec![0, 0, 1]]);
        assert!(lyndon_words_with_content(&[2, 0]).is_empty());
        assert_eq!(lyndon_words_with_content(&[0, 1]), vec![vec![1]]);
        assert_eq!(lyndon_words_with_content(&[1, 7, 7]).len(), 3432);
    }

    #[test]
    fn mobius_values() {
        let expected = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1];
        for (i, &e) in expected.iter().enumerate() {
            assert_eq!(mobius(i as u64 + 1), e);
        }
    }
}
