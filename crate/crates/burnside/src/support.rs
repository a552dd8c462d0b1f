//! The control sequence, cube-free words and brute-force oracles.

use crate::config::{Measure, Params};
use crate::occurrences::all_maximal_occurrences;
use crate::periodicity::{common_power_prefix, periodic_shifts};
use crate::relators::period_rank;
use crate::words::{is_cyclically_reduced, is_primitive, reduce, Letter, Word};
use num_integer::Integer;
use rand::Rng;
use serde::Serialize;
use std::collections::{BTreeSet, HashSet, VecDeque};

/// Thue–Morse value at `i − 1`, mapped 0 ↦ 1 and 1 ↦ 2. Indices start at 1.
pub fn control_m(i: u64) -> u8 {
    assert!(i >= 1, "control sequence is indexed from 1");
    1 + ((i - 1).count_ones() % 2) as u8
}

/// No factor `B·B·b` with `b` a non-empty prefix of `B`, i.e. no factor of length `2p+1` with period `p`.
pub fn is_bbb_free<T: PartialEq>(seq: &[T]) -> bool {
    let n = seq.len();
    for p in 1..=n / 2 {
        let mut streak = 0;
        for j in 0..n.saturating_sub(p) {
            if seq[j] == seq[j + p] {
                streak += 1;
                if streak > p {
                    return false;
                }
            } else {
                streak = 0;
            }
        }
    }
    true
}

fn has_cube_suffix(letters: &[Letter]) -> bool {
    let n = letters.len();
    (1..=n / 3).any(|p| (0..2 * p).all(|i| letters[n - 1 - i] == letters[n - 1 - i - p]))
}

pub fn is_cube_free(letters: &[Letter]) -> bool {
    (1..=letters.len()).all(|end| !has_cube_suffix(&letters[..end]))
}

/// All cube-free words of a given length over the positive letters `a < b`, in lexicographic order.
pub struct CubeFreeWords {
    length: usize,
    stack: Vec<usize>,
    letters: [Letter; 2],
    done: bool,
}

impl CubeFreeWords {
    pub fn new(length: usize) -> CubeFreeWords {
        CubeFreeWords {
            length,
            stack: Vec::new(),
            letters: [Letter::new(1, false), Letter::new(2, false)],
            done: length == 0,
        }
    }

    fn word(&self) -> Vec<Letter> {
        self.stack.iter().map(|&i| self.letters[i]).collect()
    }

    /// Advances the last position, popping exhausted ones; false when the search is over.
    fn bump(&mut self) -> bool {
        while let Some(last) = self.stack.pop() {
            if last + 1 < 2 {
                self.stack.push(last + 1);
                return true;
            }
        }
        false
    }
}

impl Iterator for CubeFreeWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if self.stack.is_empty() {
            self.stack.push(0);
        } else if !self.bump() {
            self.done = true;
            return None;
        }
        loop {
            if has_cube_suffix(&self.word()) {
                if !self.bump() {
                    self.done = true;
                    return None;
                }
            } else if self.stack.len() == self.length {
                return Some(Word::from_reduced(self.word()));
            } else {
                self.stack.push(0);
            }
        }
    }
}

pub fn cube_free_words(length: usize) -> CubeFreeWords {
    CubeFreeWords::new(length)
}

/// Balanced residue of `e` modulo odd `n`, in `(−n/2, n/2)`.
pub fn balanced_residue(e: i64, n: i64) -> i64 {
    let r = e.rem_euclid(n);
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

/// Normal form in the free product of cyclic groups of order `n` generated by the letters.
pub fn balanced_residue_oracle(a: &Word, n: i64) -> Word {
    let mut current = a.clone();
    loop {
        let mut out: Vec<Letter> = Vec::with_capacity(current.len());
        let letters = current.letters();
        let mut i = 0;
        while i < letters.len() {
            let g = letters[i].generator();
            let mut j = i;
            let mut e = 0i64;
            while j < letters.len() && letters[j].generator() == g {
                e += if letters[j].is_inverse() { -1 } else { 1 };
                j += 1;
            }
            let r = balanced_residue(e, n);
            let l = Letter::new(g, r < 0);
            out.extend(std::iter::repeat_n(l, r.unsigned_abs() as usize));
            i = j;
        }
        let next = reduce(out);
        if next == current {
            return next;
        }
        current = next;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Equivalence {
    Yes,
    Unknown,
}

/// All cyclic shifts of `pⁿ` and their inverses.
fn relator_words(periods: &[Word], n: i64) -> Vec<Word> {
    let mut set = BTreeSet::new();
    for p in periods {
        let full = p.pow(n);
        for s in full.cyclic_shifts() {
            set.insert(s.letters().to_vec());
            set.insert(s.inverse().letters().to_vec());
        }
    }
    set.into_iter().map(Word::from_reduced).collect()
}

/// Bidirectional search over insertions of relator conjugates; `Yes` is a proof of equality.
pub fn bfs_equivalent(a: &Word, b: &Word, periods: &[Word], n: i64, max_states: usize) -> Equivalence {
    if a == b {
        return Equivalence::Yes;
    }
    let relators = relator_words(periods, n);
    let longest = periods.iter().map(|p| p.len()).max().unwrap_or(0);
    let cap = a.len() + b.len() + 2 * n as usize * longest;
    let mut seen: [HashSet<Vec<Letter>>; 2] = [HashSet::new(), HashSet::new()];
    let mut queues: [VecDeque<Word>; 2] = [VecDeque::new(), VecDeque::new()];
    seen[0].insert(a.letters().to_vec());
    seen[1].insert(b.letters().to_vec());
    queues[0].push_back(a.clone());
    queues[1].push_back(b.clone());
    let mut states = 2;
    while !queues[0].is_empty() || !queues[1].is_empty() {
        let side = if queues[1].is_empty() || (!queues[0].is_empty() && queues[0].len() <= queues[1].len()) {
            0
        } else {
            1
        };
        let level = queues[side].len();
        for _ in 0..level {
            let Some(w) = queues[side].pop_front() else { break };
            let letters = w.letters();
            for pos in 0..=letters.len() {
                for r in &relators {
                    let next = reduce(letters[..pos].iter().chain(r.letters()).chain(&letters[pos..]).copied());
                    if next.len() > cap {
                        continue;
                    }
                    let key = next.letters().to_vec();
                    if seen[1 - side].contains(&key) {
                        return Equivalence::Yes;
                    }
                    if seen[side].insert(key) {
                        states += 1;
                        if states >= max_states {
                            return Equivalence::Unknown;
                        }
                        queues[side].push_back(next);
                    }
                }
            }
        }
    }
    Equivalence::Unknown
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub suite: String,
    pub checked: u64,
    pub failures: u64,
    /// The first few failures, for display.
    pub violations: Vec<String>,
}

impl OracleReport {
    fn new(suite: &str) -> OracleReport {
        OracleReport {
            suite: suite.to_string(),
            checked: 0,
            failures: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.violations.len() < 20 {
                self.violations.push(what());
            }
        }
    }
}

/// All reduced words of exactly `len` letters over `m` generators.
pub fn reduced_words(m: u32, len: usize) -> Vec<Word> {
    let alphabet: Vec<Letter> = (1..=m as u16).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect();
    let mut out: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet
                    .iter()
                    .filter(|l| w.last().is_none_or(|x| x.inverse() != **l))
                    .map(|l| {
                        let mut n = w.clone();
                        n.push(*l);
                        n
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out.into_iter().map(Word::from_reduced).collect()
}

/// Primitive cyclically reduced words with `1 ≤ |x| ≤ max_len`.
pub fn primitive_periods(m: u32, max_len: usize) -> Vec<Word> {
    (1..=max_len)
        .flat_map(|l| reduced_words(m, l))
        .filter(|w| is_cyclically_reduced(w.letters()) && is_primitive(w.letters()))
        .collect()
}

/// Common prefixes of powers of non-commuting periods stay below `|x| + |y| − gcd`.
pub fn finewilf_suite(max_len: usize) -> OracleReport {
    let mut report = OracleReport::new("finewilf");
    let periods = primitive_periods(2, max_len);
    for x in &periods {
        for y in &periods {
            if x == y {
                continue;
            }
            let Ok((c, bound)) = common_power_prefix(x, y) else { continue };
            // Independent recount against the explicit bound.
            let expected = x.len() + y.len() - x.len().gcd(&y.len());
            report.record(c.len() < bound && bound == expected, || format!("x={x} y={y} |c|={}", c.len()));
        }
    }
    report
}

/// Same-rank periods share prefixes shorter than `min(2|y|, (τ+1)|x|)`.
pub fn rank_prefix_suite<R: Rng>(tau: i64, samples: usize, max_len: usize, rng: &mut R) -> OracleReport {
    let mut report = OracleReport::new("rank-prefix");
    let periods = primitive_periods(2, max_len);
    let ranked: Vec<(Word, u32)> = periods
        .into_iter()
        .map(|p| {
            let r = period_rank(p.letters(), tau);
            (p, r)
        })
        .filter(|(_, r)| *r <= 2)
        .collect();
    let mut seen = BTreeSet::new();
    let mut attempts = 0;
    while seen.len() < samples && attempts < samples * 50 {
        attempts += 1;
        let i = rng.gen_range(0..ranked.len());
        let j = rng.gen_range(0..ranked.len());
        if i == j || ranked[i].1 != ranked[j].1 || !seen.insert((i.min(j), i.max(j))) {
            continue;
        }
        let (x, y) = if ranked[i].0.len() <= ranked[j].0.len() {
            (&ranked[i].0, &ranked[j].0)
        } else {
            (&ranked[j].0, &ranked[i].0)
        };
        let c = match common_power_prefix(x, y) {
            Ok((c, _)) => c.len(),
            Err(_) => {
                report.record(false, || format!("x={x} y={y} commute"));
                continue;
            }
        };
        let bound = (2 * y.len()).min((tau as usize + 1) * x.len());
        report.record(c < bound, || format!("x={x} y={y} |c|={c} bound={bound}"));
    }
    report
}

/// Every maximal occurrence inside `X^K` has at least `K − 2` periodic shifts.
pub fn shifts_suite(tau: i64, max_x: usize, max_k: usize) -> OracleReport {
    let mut report = OracleReport::new("shifts");
    for x in primitive_periods(2, max_x) {
        let class = crate::words::min_rotation(x.letters());
        for k in 3..=max_k {
            let host = x.pow(k as i64);
            for occ in all_maximal_occurrences(&host, Measure::from_integer(2), tau) {
                if crate::words::min_rotation(occ.period.letters()) == class {
                    continue;
                }
                let Ok(shifts) = periodic_shifts(&x, k, occ.offset, occ.length) else {
                    report.record(false, || format!("X={x} K={k} span rejected"));
                    continue;
                };
                report.record(shifts.len() + 2 >= k, || {
                    format!("X={x} K={k} u={} shifts={}", occ.word(), shifts.len())
                });
            }
        }
    }
    report
}

/// The first `len` control values contain no overlap.
pub fn control_suite(len: u64) -> OracleReport {
    let mut report = OracleReport::new("control");
    let seq: Vec<u8> = (1..=len).map(control_m).collect();
    report.record(is_bbb_free(&seq), || format!("overlap within the first {len} values"));
    report
}

/// Cube-free generator counts agree with brute-force filtering.
pub fn cubefree_suite(max_len: usize) -> OracleReport {
    let mut report = OracleReport::new("cubefree");
    for len in 1..=max_len {
        let generated: Vec<Word> = cube_free_words(len).collect();
        let brute = (0u32..1 << len)
            .filter(|bits| {
                let letters: Vec<Letter> = (0..len)
                    .map(|i| Letter::new(1 + ((bits >> (len - 1 - i)) & 1) as u16, false))
                    .collect();
                is_cube_free(&letters)
            })
            .count();
        report.record(generated.len() == brute && brute > 0, || {
            format!("length {len}: {} vs {brute}", generated.len())
        });
    }
    report
}

/// Rank-1 canonical forms agree with the balanced-residue oracle on random words.
pub fn rank1_suite<R: Rng>(params: &Params, count: usize, max_len: usize, rng: &mut R) -> OracleReport {
    let mut report = OracleReport::new("rank1");
    for _ in 0..count {
        let a = random_power_word(rng, params.m, max_len, params.n as usize * 3);
        let got = crate::canonical::can_1(params, &a);
        let want = balanced_residue_oracle(&a, params.n);
        report.record(got.as_ref() == Ok(&want), || a.to_compressed().to_string());
    }
    report
}

/// A uniformly random reduced word of the given length.
pub fn random_reduced<R: Rng>(rng: &mut R, m: u32, len: usize) -> Word {
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = Letter::new(rng.gen_range(1..=m as u16), rng.gen_bool(0.5));
        if letters.last().is_none_or(|x| x.inverse() != l) {
            letters.push(l);
        }
    }
    Word::from_reduced(letters)
}

/// Random product of letter powers, at most `max_len` letters before reduction.
pub fn random_power_word<R: Rng>(rng: &mut R, m: u32, max_len: usize, max_power: usize) -> Word {
    let mut raw: Vec<Letter> = Vec::new();
    let budget = rng.gen_range(1..=max_len.max(1));
    while raw.len() < budget {
        let l = Letter::new(rng.gen_range(1..=m as u16), rng.gen_bool(0.5));
        let room = budget - raw.len();
        let e = if rng.gen_bool(0.2) {
            rng.gen_range(1..=max_power.min(room).max(1))
        } else {
            rng.gen_range(1..=3.min(room))
        };
        raw.extend(std::iter::repeat_n(l, e));
    }
    reduce(raw)
}

/// Random word with short filler between injected long powers of `a` and `ab`.
pub fn random_injected_word<R: Rng>(rng: &mut R, max_a: i64, max_ab: i64) -> Word {
    let a = Word::parse("a").expect("letter");
    let ab = Word::parse("ab").expect("period");
    let mut parts: Vec<Word> = Vec::new();
    let pieces = rng.gen_range(1..=3);
    for _ in 0..pieces {
        let filler = rng.gen_range(0..6);
        parts.push(random_reduced(rng, 2, filler));
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let w = if rng.gen_bool(0.5) {
            a.pow(sign * rng.gen_range(1..=max_a))
        } else {
            ab.pow(sign * rng.gen_range(1..=max_ab))
        };
        parts.push(w);
    }
    let filler = rng.gen_range(0..6);
    parts.push(random_reduced(rng, 2, filler));
    let refs: Vec<&Word> = parts.iter().collect();
    Word::concat_all(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn control_values() {
        let first: Vec<u8> = (1..=8).map(control_m).collect();
        assert_eq!(first, vec![1, 2, 2, 1, 2, 1, 1, 2]);
        assert!(is_bbb_free(&(1..=64).map(control_m).collect::<Vec<_>>()));
        assert!(!is_bbb_free(&[1, 2, 1, 2, 1]));
        assert!(!is_bbb_free(&[1, 1, 1]));
    }

    #[test]
    fn cube_free_counts() {
        assert_eq!(cube_free_words(1).count(), 2);
        assert_eq!(cube_free_words(3).count(), 6);
        let five: Vec<Word> = cube_free_words(5).collect();
        assert!(five.windows(2).all(|p| p[0].letters() < p[1].letters()));
        assert!(cubefree_suite(10).passed());
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(balanced_residue_oracle(&w("a^900"), 593), w("a^-286"));
        assert_eq!(balanced_residue_oracle(&w("a^296"), 593), w("a^296"));
        assert!(balanced_residue_oracle(&w("b a^593 B"), 593).is_empty());
    }

    #[test]
    fn bfs_examples() {
        assert_eq!(
            bfs_equivalent(&w("(ab)^3"), &Word::empty(), &[w("ab")], 3, 10_000),
            Equivalence::Yes
        );
        assert_eq!(bfs_equivalent(&w("a"), &w("b"), &[w("a"), w("b")], 3, 5_000), Equivalence::Unknown);
        assert_eq!(bfs_equivalent(&w("aa"), &w("A"), &[w("a")], 3, 1_000), Equivalence::Yes);
    }

    #[test]
    fn small_suites() {
        assert!(finewilf_suite(3).passed());
        assert!(shifts_suite(16, 3, 5).passed());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(rank_prefix_suite(16, 200, 4, &mut rng).passed());
    }
}
