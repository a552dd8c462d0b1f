//! Fractional powers, Λ-measures, common prefixes of powers and periodic shifts.

use crate::config::Measure;
use crate::error::{Error, Result};
use crate::words::{is_cyclically_reduced, is_primitive, root_length, Letter, Word};
use num_integer::Integer;

/// `u = period^k · a1` with `a1` a proper prefix of `period`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalPower {
    pub u: Word,
    pub period: Word,
    pub k: usize,
    pub a1: Word,
}

impl FractionalPower {
    pub fn measure(&self) -> Measure {
        Measure::new(self.u.len() as i64, self.period.len() as i64)
    }

    pub fn recompose(&self) -> Word {
        self.period.pow(self.k as i64).mul(&self.a1)
    }

    /// The suffix `a2` with `period = a1 · a2`.
    pub fn a2(&self) -> Word {
        self.period.slice(self.a1.len(), self.period.len())
    }
}

pub fn measure_of(len: usize, period_len: usize) -> Measure {
    Measure::new(len as i64, period_len as i64)
}

/// Length of the longest prefix of `u` that agrees with `period^∞` read from `phase`.
fn periodic_match(u: &[Letter], period: &[Letter], phase: usize) -> usize {
    let p = period.len();
    u.iter().enumerate().take_while(|(i, l)| **l == period[(phase + i) % p]).count()
}

/// A maximal periodic factor: `length ≥ 2·period_len` and the block at `offset` is primitive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub offset: usize,
    pub length: usize,
    pub period_len: usize,
}

impl Run {
    pub fn end(&self) -> usize {
        self.offset + self.length
    }

    pub fn measure(&self) -> Measure {
        measure_of(self.length, self.period_len)
    }
}

/// Smallest integer length `L` with `L / p >= q`.
pub fn min_length_for(q: Measure, p: usize) -> usize {
    let v = q * Measure::from_integer(p as i64);
    let c = v.ceil().to_integer();
    c.max(0) as usize
}

/// All maximal runs of primitive period `p ≤ max_period` with measure at least `min_measure`
/// (and at least 2), ordered by offset, longer first on ties.
pub fn runs(letters: &[Letter], min_measure: Measure, max_period: usize) -> Vec<Run> {
    let n = letters.len();
    let mut out = Vec::new();
    let top = max_period.min(n / 2);
    for p in 1..=top {
        let need = min_length_for(min_measure, p).max(2 * p);
        if need > n {
            continue;
        }
        let mut j = 0;
        while j + p < n {
            if letters[j] != letters[j + p] {
                j += 1;
                continue;
            }
            let start = j;
            while j + p < n && letters[j] == letters[j + p] {
                j += 1;
            }
            let length = j - start + p;
            if length >= need && is_primitive(&letters[start..start + p]) {
                out.push(Run {
                    offset: start,
                    length,
                    period_len: p,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        a.offset
            .cmp(&b.offset)
            .then(b.length.cmp(&a.length))
            .then(a.period_len.cmp(&b.period_len))
    });
    out
}

/// Extends the factor `[start, end)` while it keeps period `p`.
pub fn prolong(letters: &[Letter], start: usize, end: usize, p: usize) -> (usize, usize) {
    let (mut s, mut e) = (start, end);
    while s > 0 && s - 1 + p < letters.len() && letters[s - 1] == letters[s - 1 + p] {
        s -= 1;
    }
    while e < letters.len() && e >= p && letters[e] == letters[e - p] {
        e += 1;
    }
    (s, e)
}

/// `|u| / |period|` provided `u` is a factor of some power of `period`.
pub fn lambda_measure(u: &Word, period: &Word) -> Result<Measure> {
    if period.is_empty() || !period.is_primitive() || !period.is_cyclically_reduced() {
        return Err(Error::PeriodNotPrimitive);
    }
    let p = period.len();
    if (0..p).any(|phase| periodic_match(u.letters(), period.letters(), phase) == u.len()) {
        Ok(measure_of(u.len(), p))
    } else {
        Err(Error::NotAFractionalPower)
    }
}

/// Longest common prefix of `x^∞` and `y^∞`, with the bound `|x| + |y| − gcd(|x|, |y|)`.
pub fn common_power_prefix(x: &Word, y: &Word) -> Result<(Word, usize)> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptyWord);
    }
    if !x.is_cyclically_reduced() || !y.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced);
    }
    let rx = &x.letters()[..root_length(x.letters())];
    let ry = &y.letters()[..root_length(y.letters())];
    if rx == ry {
        return Err(Error::CommutingPeriods);
    }
    let bound = x.len() + y.len() - x.len().gcd(&y.len());
    let limit = x.len() + y.len();
    let xs = x.letters();
    let ys = y.letters();
    let len = (0..limit).take_while(|&i| xs[i % xs.len()] == ys[i % ys.len()]).count();
    let prefix: Vec<Letter> = (0..len).map(|i| xs[i % xs.len()]).collect();
    Ok((Word::from_reduced(prefix), bound))
}

/// The unique `(k, a1)` with `u = period^k a1`, `a1` a proper prefix of `period`.
pub fn decompose(u: &Word, period: &Word) -> Result<FractionalPower> {
    if period.is_empty() {
        return Err(Error::EmptyWord);
    }
    if periodic_match(u.letters(), period.letters(), 0) != u.len() {
        return Err(Error::NotAPrefixOfPower);
    }
    let p = period.len();
    Ok(FractionalPower {
        u: u.clone(),
        period: period.clone(),
        k: u.len() / p,
        a1: period.slice(0, u.len() % p),
    })
}

/// All translates of the span `(offset, len)` by multiples of `|X|` inside `X^K`.
pub fn periodic_shifts(x: &Word, k: usize, offset: usize, len: usize) -> Result<Vec<usize>> {
    if k < 3 {
        return Err(Error::TooFewRepetitions(k));
    }
    if !is_primitive(x.letters()) || !is_cyclically_reduced(x.letters()) {
        return Err(Error::PeriodNotPrimitive);
    }
    let p = x.len();
    let total = p * k;
    if len == 0 || offset + len > total {
        return Err(Error::SpanOutOfRange);
    }
    let first = offset % p;
    Ok((first..=total - len).step_by(p).collect())
}
