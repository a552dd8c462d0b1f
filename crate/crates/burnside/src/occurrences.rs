//! Maximal occurrences of a given rank, complements and isolation.

use crate::config::{Measure, Params};
use crate::error::{Error, Result};
use crate::periodicity::{measure_of, prolong, runs, FractionalPower, Run};
use crate::relators::period_rank;
use crate::words::{Letter, Word};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub offset: usize,
    pub length: usize,
    /// The period as read from `offset`, so the factor is `period^k · a1`.
    pub period: Word,
    pub rank: u32,
    pub decomposition: FractionalPower,
    pub measure: Measure,
}

impl Occurrence {
    pub fn end(&self) -> usize {
        self.offset + self.length
    }

    pub fn word(&self) -> &Word {
        &self.decomposition.u
    }

    pub fn k(&self) -> usize {
        self.decomposition.k
    }

    pub fn a1(&self) -> &Word {
        &self.decomposition.a1
    }

    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// Builds the occurrence for a factor of `host` known to have period `p`.
    pub fn from_span(host: &Word, offset: usize, length: usize, p: usize, tau: i64) -> Occurrence {
        let letters = host.letters();
        let block = &letters[offset..offset + p];
        let period = Word::from_reduced(block.to_vec());
        let u = host.slice(offset, offset + length);
        let decomposition = FractionalPower {
            u,
            period: period.clone(),
            k: length / p,
            a1: Word::from_reduced(block[..length % p].to_vec()),
        };
        Occurrence {
            offset,
            length,
            rank: period_rank(block, tau),
            period,
            decomposition,
            measure: measure_of(length, p),
        }
    }

    fn from_run(host: &Word, run: &Run, tau: i64) -> Occurrence {
        Occurrence::from_span(host, run.offset, run.length, run.period_len, tau)
    }

    /// Least rotation of the period; equal for occurrences of the same relator.
    pub fn period_class(&self) -> Vec<Letter> {
        crate::words::min_rotation(self.period.letters())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IsolationClass {
    Isolated,
    StronglyIsolated,
    CloseNeighbours,
}

/// Maximal occurrences of the given rank with Λ ≥ `min_measure` (and Λ ≥ 2), left to right.
pub fn maximal_occurrences(a: &Word, rank: u32, min_measure: Measure, tau: i64) -> Vec<Occurrence> {
    let floor = min_measure.max(Measure::from_integer(2));
    let max_p = if rank == 1 {
        1
    } else {
        let f = floor.floor().to_integer().max(2) as usize;
        a.len() / f
    };
    runs(a.letters(), floor, max_p)
        .iter()
        .filter(|r| rank != 1 || r.period_len == 1)
        .filter(|r| period_rank(&a.letters()[r.offset..r.offset + r.period_len], tau) == rank)
        .map(|r| Occurrence::from_run(a, r, tau))
        .collect()
}

/// Occurrences of every rank with Λ ≥ `min_measure`.
pub fn all_maximal_occurrences(a: &Word, min_measure: Measure, tau: i64) -> Vec<Occurrence> {
    let floor = min_measure.max(Measure::from_integer(2));
    runs(a.letters(), floor, usize::MAX)
        .iter()
        .map(|r| Occurrence::from_run(a, r, tau))
        .collect()
}

/// The span still matches the host and cannot be prolonged with the same period.
pub fn is_maximal(a: &Word, occ: &Occurrence) -> bool {
    let letters = a.letters();
    if occ.end() > letters.len() || letters[occ.offset..occ.end()] != *occ.word().letters() {
        return false;
    }
    let p = occ.period_len();
    if occ.length < p {
        return false;
    }
    prolong(letters, occ.offset, occ.end(), p) == (occ.offset, occ.end())
}

/// The unique maximal occurrence containing the given periodic factor.
pub fn maximal_prolongation(a: &Word, offset: usize, length: usize, p: usize, tau: i64) -> Occurrence {
    let (s, e) = prolong(a.letters(), offset, offset + length, p);
    Occurrence::from_span(a, s, e - s, p, tau)
}

/// `v = a^{-n} u`, that is `a^{k-n} a1` for `k ≥ n` and `a^{k-n+1} a2⁻¹` otherwise.
pub fn complement(occ: &Occurrence, n: i64) -> Word {
    let fp = &occ.decomposition;
    let k = fp.k as i64;
    if k >= n {
        fp.period.pow(k - n).mul(&fp.a1)
    } else {
        fp.period.pow(k - n + 1).mul(&fp.a2().inverse())
    }
}

/// Period along which the complement is read from its first letter.
pub fn complement_period(occ: &Occurrence, n: i64) -> Word {
    if occ.k() as i64 >= n {
        occ.period.clone()
    } else {
        occ.period.inverse()
    }
}

/// Number of pairwise disjoint rank-`rank` τ-powers in `gap`, counted greedily up to `cap`.
fn disjoint_tau_powers(gap: &[Letter], rank: u32, tau: i64, cap: usize) -> usize {
    let t = tau as usize;
    let found: Vec<Run> = runs(gap, Measure::from_integer(tau), usize::MAX)
        .into_iter()
        .filter(|r| period_rank(&gap[r.offset..r.offset + r.period_len], tau) == rank)
        .collect();
    let mut pos = 0;
    let mut count = 0;
    while count < cap {
        let next = found
            .iter()
            .filter_map(|r| {
                let start = r.offset.max(pos);
                let end = start + t * r.period_len;
                (end <= r.end()).then_some(end)
            })
            .min();
        match next {
            Some(end) => {
                pos = end;
                count += 1;
            }
            None => break,
        }
    }
    count
}

/// Classifies the gap between `u` and `w` (with `u` starting first).
pub fn classify_isolation(a: &Word, u: &Occurrence, w: &Occurrence, rank: u32, tau: i64) -> Result<IsolationClass> {
    if w.offset < u.offset || (w.offset == u.offset && w.length == u.length) || w.end() > a.len() {
        return Err(Error::OverlappingSpansOrderedWrong);
    }
    if w.offset <= u.end() {
        return Ok(IsolationClass::CloseNeighbours);
    }
    let gap = &a.letters()[u.end()..w.offset];
    Ok(match disjoint_tau_powers(gap, rank, tau, 3) {
        0 => IsolationClass::CloseNeighbours,
        1 | 2 => IsolationClass::Isolated,
        _ => IsolationClass::StronglyIsolated,
    })
}

/// Whether some choice of sides makes one trial turn disturb the other occurrence.
pub fn are_essentially_non_isolated(params: &Params, a: &Word, u: &Occurrence, w: &Occurrence, rank: u32) -> Result<bool> {
    if w.offset <= u.offset {
        return Err(Error::OverlappingSpansOrderedWrong);
    }
    if classify_isolation(a, u, w, rank, params.tau)? == IsolationClass::StronglyIsolated {
        return Ok(false);
    }
    for turn_u in [false, true] {
        for turn_w in [false, true] {
            let base = crate::turns::apply_sides(params, a, &[u.clone(), w.clone()], &[turn_u, turn_w], rank)?;
            let (Some(fu), Some(fw)) = (&base.members[0], &base.members[1]) else {
                return Ok(true);
            };
            for (target, other) in [(&fu.occ, &fw.occ), (&fw.occ, &fu.occ)] {
                let tr = crate::turns::turn(params, &base.word, target, rank)?;
                match crate::turns::track(params, &tr, other, rank) {
                    Some(moved) if moved.occ.word() == other.word() => {}
                    _ => return Ok(true),
                }
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn one() -> Measure {
        Measure::from_integer(1)
    }

    #[test]
    fn listing_examples() {
        let occ = maximal_occurrences(&w("ba^5b"), 1, one(), 16);
        assert_eq!(occ.len(), 1);
        assert_eq!((occ[0].offset, occ[0].length, occ[0].measure), (1, 5, Measure::from_integer(5)));
        let occ = maximal_occurrences(&w("a^7"), 1, one(), 16);
        assert_eq!((occ.len(), occ[0].length), (1, 7));
        let host = w("aa(ab)^400aa");
        let occ = maximal_occurrences(&host, 2, Measure::from_integer(16), 16);
        assert_eq!(occ.len(), 1);
        assert_eq!(occ[0].measure, Measure::new(801, 2));
        assert_eq!(occ[0].period, w("ab"));
        assert!(is_maximal(&host, &occ[0]));
    }

    #[test]
    fn complements() {
        let occ = &maximal_occurrences(&w("a^300"), 1, one(), 16)[0];
        assert_eq!(complement(occ, 593), w("a^-293"));
        let occ = &maximal_occurrences(&w("a^600"), 1, one(), 16)[0];
        assert_eq!(complement(occ, 593), w("a^7"));
        let occ = &maximal_occurrences(&w("(ab)^400"), 2, one(), 16)[0];
        assert_eq!(complement(occ, 593), w("(ab)^-193"));
        let occ = &maximal_occurrences(&w("(ab)^296a"), 2, one(), 16)[0];
        let v = complement(occ, 593);
        assert_eq!(v, w("(ab)^-296 B"));
        assert_eq!(occ.word().mul(&v.inverse()), w("(ab)^593"));
    }

    #[test]
    fn isolation_classes() {
        let host = w("(ab)^20 (aab)^18 b (abb)^18 b (aabb)^18 (ab)^20");
        let occ = maximal_occurrences(&host, 2, Measure::from_integer(16), 16);
        let first = occ.first().unwrap();
        let last = occ.last().unwrap();
        assert_eq!(classify_isolation(&host, first, last, 2, 16), Ok(IsolationClass::StronglyIsolated));
        let host = w("(ab)^20 a^3 (ba)^20");
        let occ = maximal_occurrences(&host, 2, Measure::from_integer(16), 16);
        assert_eq!(
            classify_isolation(&host, &occ[0], &occ[1], 2, 16),
            Ok(IsolationClass::CloseNeighbours)
        );
        let host = w("(ab)^20 b (aab)^16 b (ab)^20");
        let occ = maximal_occurrences(&host, 2, Measure::from_integer(17), 16);
        assert_eq!(occ.len(), 2);
        assert_eq!(classify_isolation(&host, &occ[0], &occ[1], 2, 16), Ok(IsolationClass::Isolated));
        assert_eq!(
            classify_isolation(&host, &occ[1], &occ[0], 2, 16),
            Err(Error::OverlappingSpansOrderedWrong)
        );
    }
}
