//! Lyndon words over `{L, R}` (with `L < R`), i.e. primitive necklaces in
//! their lexicographically minimal rotation, generated in lexicographic
//! order by Duval's algorithm.

use crate::map::Side;

/// All Lyndon words of length `1..=max_len`, in lexicographic order.
pub fn lyndon_words(max_len: usize) -> Vec<Vec<Side>> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    // 0 = L, 1 = R
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.iter().map(|&s| if s == 0 { Side::Left } else { Side::Right }).collect());
        let len = w.len();
        // extend periodically to max_len
        while w.len() < max_len {
            let c = w[w.len() - len];
            w.push(c);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
    out
}

pub fn word_string(word: &[Side]) -> String {
    word.iter().map(|s| s.symbol()).collect()
}

/// Number of binary Lyndon words of length `n`, by Moebius inversion.
pub fn lyndon_count(n: usize) -> usize {
    fn mobius(mut n: usize) -> i64 {
        let mut m = 1;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                n /= d;
                if n % d == 0 {
                    return 0;
                }
                m = -m;
            }
            d += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }
    let total: i64 = (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| mobius(n / d) * (1i64 << d))
        .sum();
    (total / n as i64) as usize
}
