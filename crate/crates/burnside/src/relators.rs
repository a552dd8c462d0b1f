//! Rank of a primitive period by nesting depth of cyclically contained τ-powers.

use crate::config::Measure;
use crate::error::{Error, Result};
use crate::periodicity::runs;
use crate::words::{is_cyclically_reduced, is_primitive, min_rotation, Letter, Word};
use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

type RankKey = (i64, Vec<Letter>);

fn memo() -> &'static Mutex<HashMap<RankKey, u32>> {
    static MEMO: OnceLock<Mutex<HashMap<RankKey, u32>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedRelator {
    pub period: Word,
    pub rank: u32,
    pub n: i64,
}

/// Cyclic classes `a` (as least rotations) with `a^τ` a factor of a cyclic shift of `x`, `|a| < |x|`.
fn nested_powers(x: &[Letter], tau: i64) -> BTreeSet<Vec<Letter>> {
    let len = x.len();
    let mut out = BTreeSet::new();
    let tau = tau as usize;
    let max_p = (len / tau).min(len - 1);
    if max_p == 0 {
        return out;
    }
    let doubled: Vec<Letter> = x.iter().chain(x.iter()).copied().collect();
    for run in runs(&doubled, Measure::from_integer(tau as i64), max_p) {
        out.insert(min_rotation(&doubled[run.offset..run.offset + run.period_len]));
    }
    out
}

fn rank_of_class(class: &[Letter], tau: i64) -> u32 {
    if class.len() == 1 {
        return 1;
    }
    let key = (tau, class.to_vec());
    if let Some(&r) = memo().lock().unwrap().get(&key) {
        return r;
    }
    let inner = nested_powers(class, tau);
    let r = match inner.iter().map(|a| rank_of_class(a, tau)).max() {
        None => 2,
        Some(top) => (top + 1).max(3),
    };
    memo().lock().unwrap().insert(key, r);
    r
}

/// Rank of a primitive cyclically reduced period: 1 for letters, 2 when no τ-power is
/// cyclically contained, otherwise one more than the deepest contained τ-power (at least 3).
pub fn classify_rank(x: &Word, tau: i64) -> Result<u32> {
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !is_cyclically_reduced(x.letters()) {
        return Err(Error::NotCyclicallyReduced);
    }
    if !is_primitive(x.letters()) {
        return Err(Error::NotPrimitive);
    }
    Ok(period_rank(x.letters(), tau))
}

/// Rank of a block already known to be primitive and cyclically reduced.
pub fn period_rank(block: &[Letter], tau: i64) -> u32 {
    if block.len() == 1 {
        return 1;
    }
    rank_of_class(&min_rotation(block), tau)
}

pub fn ranked(x: &Word, tau: i64, n: i64) -> Result<RankedRelator> {
    Ok(RankedRelator {
        period: x.clone(),
        rank: classify_rank(x, tau)?,
        n,
    })
}

/// The chain of nested τ-powers that witnesses the rank, outermost first.
pub fn rank_witness(x: &Word, tau: i64) -> Result<Vec<(Word, u32)>> {
    let mut current = min_rotation(x.letters());
    let mut rank = classify_rank(x, tau)?;
    let mut chain = vec![(x.clone(), rank)];
    while rank >= 3 {
        let inner = nested_powers(&current, tau);
        let next = inner
            .into_iter()
            .map(|a| {
                let r = rank_of_class(&a, tau);
                (a, r)
            })
            .max_by_key(|(_, r)| *r)
            .expect("rank >= 3 has a nested power");
        current = next.0;
        rank = next.1;
        chain.push((Word::from_reduced(current.clone()), rank));
    }
    Ok(chain)
}

/// No factor of `a` is a fractional power of a rank-`rank` period with measure ≥ `threshold`.
pub fn is_tau_free(a: &Word, rank: u32, threshold: Measure, tau: i64) -> bool {
    !runs(a.letters(), threshold, usize::MAX)
        .iter()
        .any(|r| period_rank(&a.letters()[r.offset..r.offset + r.period_len], tau) == rank)
}

/// No factor `x^alpha` with `x` primitive of rank greater than `rank`.
pub fn is_alpha_free_modulo(a: &Word, rank: u32, alpha: Measure, tau: i64) -> bool {
    !runs(a.letters(), alpha, usize::MAX)
        .iter()
        .any(|r| period_rank(&a.letters()[r.offset..r.offset + r.period_len], tau) > rank)
}

/// Largest rank of a period having a τ-power factor in `a` (0 if none).
pub fn nesting_depth(a: &Word, tau: i64) -> u32 {
    runs(a.letters(), Measure::from_integer(tau), usize::MAX)
        .iter()
        .map(|r| period_rank(&a.letters()[r.offset..r.offset + r.period_len], tau))
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(classify_rank(&w("a"), 16), Ok(1));
        assert_eq!(classify_rank(&w("ab"), 16), Ok(2));
        assert_eq!(classify_rank(&w("a^16b"), 16), Ok(3));
        assert_eq!(classify_rank(&w("a^15b"), 16), Ok(2));
        assert_eq!(classify_rank(&w("(a^16b)^16 b"), 16), Ok(4));
        assert_eq!(classify_rank(&w("abab"), 16), Err(Error::NotPrimitive));
        assert_eq!(classify_rank(&w("abA"), 16), Err(Error::NotCyclicallyReduced));
        assert_eq!(classify_rank(&Word::empty(), 16), Err(Error::EmptyWord));
    }

    #[test]
    fn rank_is_cyclic_and_inverse_invariant() {
        let x = w("a^8 b a^8");
        assert_eq!(classify_rank(&x, 16), Ok(3));
        assert_eq!(classify_rank(&x.inverse(), 16), Ok(3));
        assert_eq!(classify_rank(&w("ba^16"), 16), Ok(3));
    }

    #[test]
    fn witnesses() {
        let chain = rank_witness(&w("a^16b"), 16).unwrap();
        assert_eq!(chain, vec![(w("a^16b"), 3), (w("a"), 1)]);
        let chain = rank_witness(&w("(a^16b)^16 b"), 16).unwrap();
        assert_eq!(chain.iter().map(|c| c.1).collect::<Vec<_>>(), vec![4, 3, 1]);
    }

    #[test]
    fn freeness() {
        let t = Measure::from_integer(16);
        assert!(is_tau_free(&w("a^15"), 1, t, 16));
        assert!(!is_tau_free(&w("ba^16b"), 1, t, 16));
        assert!(!is_tau_free(&w("(ab)^16"), 2, t, 16));
        assert!(is_alpha_free_modulo(&w("a^100"), 1, t, 16));
        assert!(!is_alpha_free_modulo(&w("(ab)^16"), 1, t, 16));
        assert!(is_alpha_free_modulo(&Word::empty(), 3, t, 16));
    }

    #[test]
    fn depth() {
        assert_eq!(nesting_depth(&w("aa(ab)^400aa"), 16), 2);
        assert_eq!(nesting_depth(&w("a^900"), 16), 1);
        assert_eq!(nesting_depth(&w("abaab"), 16), 0);
    }
}
