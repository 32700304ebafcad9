use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Drops every whitespace character.
pub fn normalize_text(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Unit-cost edit distance over Unicode scalar values.
pub fn levenshtein(reference: &str, hyp: &str) -> usize {
    let a: Vec<char> = reference.chars().collect();
    let b: Vec<char> = hyp.chars().collect();
    if a.is_empty() || b.is_empty() {
        return a.len().max(b.len());
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        core::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Jaro similarity. Two empty strings are identical.
pub fn jaro(reference: &str, hyp: &str) -> f64 {
    let a: Vec<char> = reference.chars().collect();
    let b: Vec<char> = hyp.chars().collect();
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let window = (a.len().max(b.len()) / 2).saturating_sub(1);
    let mut b_used = vec![false; b.len()];
    let mut a_matches = Vec::new();
    for (i, &ca) in a.iter().enumerate() {
        let lo = i.saturating_sub(window);
        let hi = (i + window + 1).min(b.len());
        if let Some(j) = (lo..hi).find(|&j| !b_used[j] && b[j] == ca) {
            b_used[j] = true;
            a_matches.push(ca);
        }
    }
    let m = a_matches.len();
    if m == 0 {
        return 0.0;
    }
    let b_matches = b.iter().zip(&b_used).filter(|(_, &u)| u).map(|(&c, _)| c);
    let half_transpositions = a_matches.iter().zip(b_matches).filter(|(x, y)| **x != *y).count();
    let m = m as f64;
    let t = half_transpositions as f64 / 2.0;
    (m / a.len() as f64 + m / b.len() as f64 + (m - t) / m) / 3.0
}

/// Jaro similarity with the prefix bonus `0.1 * l * (1 - jaro)`, `l` being
/// the common prefix length capped at 4.
pub fn jaro_winkler(reference: &str, hyp: &str) -> f64 {
    let j = jaro(reference, hyp);
    let prefix = reference.chars().zip(hyp.chars()).take(4).take_while(|(x, y)| x == y).count();
    j + prefix as f64 * 0.1 * (1.0 - j)
}

/// Edit distance over the reference length; not clamped to 1.
pub fn cer(reference: &str, hyp: &str) -> Result<f64> {
    let n = reference.chars().count();
    if n == 0 {
        return Err(Error::EmptyReference);
    }
    Ok(levenshtein(reference, hyp) as f64 / n as f64)
}
