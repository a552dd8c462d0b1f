//! Turns of rank r: replace a maximal occurrence by its complement and re-canonicalize.

use crate::canonical::can_r;
use crate::config::{Measure, Params};
use crate::error::{Error, Result};
use crate::occurrences::{
    classify_isolation, complement, complement_period, is_maximal, maximal_occurrences, maximal_prolongation, IsolationClass, Occurrence,
};
use crate::periodicity::{measure_of, prolong};
use crate::relators::is_tau_free;
use crate::words::{common_prefix_len, common_suffix_len, reduce, Word};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TurnType {
    Type1,
    Type2,
    Type3,
}

/// Three smoothing words on one side of a turn.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Triangle {
    pub first: Word,
    pub second: Word,
    pub third: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnResult {
    pub source: Word,
    pub occurrence: Occurrence,
    pub rank: u32,
    pub complement: Word,
    pub complement_period: Word,
    pub result: Word,
    pub type_tag: TurnType,
    /// The surviving factor `v′` of the complement; empty for Type 3.
    pub remainder: Word,
    /// Where `v′` starts in `result`.
    pub remainder_offset: usize,
    /// Where `v′` starts inside the complement.
    pub remainder_in_complement: usize,
    pub left_prefix: Word,
    pub right_suffix: Word,
    pub triangle_left: Triangle,
    pub triangle_right: Triangle,
}

impl TurnResult {
    pub fn remainder_measure(&self) -> Measure {
        measure_of(self.remainder.len(), self.complement_period.len())
    }

    /// The maximal prolongation `v̂` of the remainder, if there is at least one full period.
    pub fn prolonged_remainder(&self, tau: i64) -> Option<Occurrence> {
        let p = self.complement_period.len();
        if self.type_tag == TurnType::Type3 || self.remainder.len() < p || p == 0 {
            return None;
        }
        Some(maximal_prolongation(
            &self.result,
            self.remainder_offset,
            self.remainder.len(),
            p,
            tau,
        ))
    }

    fn delta(&self) -> isize {
        self.result.len() as isize - self.source.len() as isize
    }
}

/// Correspondent of an occurrence after a turn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tracked {
    pub occ: Occurrence,
    /// Start of the new occurrence measured in the old occurrence's coordinates.
    pub shift: isize,
    /// Length of the untouched piece the correspondent grew from.
    pub piece: usize,
}

/// A located occurrence together with the frame it is measured in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placed {
    pub occ: Occurrence,
    /// Start of `occ` in the coordinates of the original member (or of its complement once turned).
    pub origin: isize,
    pub turned: bool,
    /// Smallest surviving piece seen while tracking, in letters.
    pub min_piece: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applied {
    pub word: Word,
    pub members: Vec<Option<Placed>>,
}

/// Longest factor of `m` that is also a factor of `v`, where `v` reads `period` from phase 0.
/// Returns (start in m, length, start in v).
fn periodic_common_factor(m: &[crate::words::Letter], v_len: usize, period: &[crate::words::Letter]) -> Option<(usize, usize, usize)> {
    let p = period.len();
    if p == 0 || v_len == 0 || m.is_empty() {
        return None;
    }
    let mut best: Option<(usize, usize, usize)> = None;
    let mut consider = |start: usize, len: usize, phase: usize| {
        if len == 0 {
            return;
        }
        let better = match best {
            None => true,
            Some((s, l, _)) => len > l || (len == l && start < s),
        };
        if better {
            best = Some((start, len, phase));
        }
    };
    for c in 0..p {
        let mut j = 0;
        while j < m.len() {
            if m[j] != period[(j + c) % p] {
                j += 1;
                continue;
            }
            let x = j;
            while j < m.len() && m[j] == period[(j + c) % p] {
                j += 1;
            }
            let y = j;
            // Start at the run start, reading v from the matching phase.
            let phase = (x + c) % p;
            if phase < v_len {
                consider(x, (y - x).min(v_len - phase), phase);
            }
            // Start at the first phase-0 position, using all of v if possible.
            let first_zero = x + (p - phase) % p;
            if first_zero < y {
                consider(first_zero, (y - first_zero).min(v_len), 0);
            }
        }
    }
    best
}

/// Places `len` letters of the complement at a phase-compatible position, balancing both ends.
fn place_in_complement(v: &Word, len: usize, phase: usize, p: usize) -> usize {
    let rest = v.len() - len;
    let key = |i: usize| {
        let left = v.slice(0, i);
        let right_inv = v.slice(i + len, v.len()).inverse();
        if left.deglex_cmp(&right_inv).is_le() {
            (i.max(rest - i), left, right_inv)
        } else {
            (i.max(rest - i), right_inv, left)
        }
    };
    let better = |x: &(usize, Word, Word), y: &(usize, Word, Word)| {
        x.0.cmp(&y.0)
            .then_with(|| x.1.deglex_cmp(&y.1))
            .then_with(|| x.2.deglex_cmp(&y.2))
            .is_lt()
    };
    let mut best: Option<(usize, (usize, Word, Word))> = None;
    let mut i = phase;
    while i <= rest {
        let k = key(i);
        if best.as_ref().is_none_or(|(_, b)| better(&k, b)) {
            best = Some((i, k));
        }
        i += p;
    }
    best.map(|b| b.0).unwrap_or(phase.min(rest))
}

/// Turns the maximal occurrence `occ` of rank `rank` in `a`.
pub fn turn(params: &Params, a: &Word, occ: &Occurrence, rank: u32) -> Result<TurnResult> {
    if occ.rank != rank {
        return Err(Error::RankMismatch {
            expected: rank,
            found: occ.rank,
        });
    }
    let occ = if is_maximal(a, occ) {
        occ.clone()
    } else {
        let fits = occ.end() <= a.len() && a.letters()[occ.offset..occ.end()] == *occ.word().letters();
        if fits && occ.k() as i64 > params.tau {
            maximal_prolongation(a, occ.offset, occ.length, occ.period_len(), params.tau)
        } else {
            return Err(Error::NotMaximal);
        }
    };
    let v = complement(&occ, params.n);
    let vper = complement_period(&occ, params.n);
    let left = a.slice(0, occ.offset);
    let right = a.slice(occ.end(), a.len());
    let raw = reduce(left.letters().iter().chain(v.letters()).chain(right.letters()).copied());
    let result = if rank <= 1 { raw } else { can_r(params, &raw, rank - 1)? };

    let rl = result.letters();
    let pl = common_prefix_len(rl, left.letters());
    let ps = common_suffix_len(rl, right.letters()).min(rl.len() - pl);
    let middle = &rl[pl..rl.len() - ps];
    let d1 = left.slice(pl, left.len());
    let e1 = right.slice(0, right.len() - ps);
    let p = vper.len();

    let mut tr = TurnResult {
        source: a.clone(),
        occurrence: occ.clone(),
        rank,
        complement: v.clone(),
        complement_period: vper.clone(),
        result: result.clone(),
        type_tag: TurnType::Type3,
        remainder: Word::empty(),
        remainder_offset: pl,
        remainder_in_complement: 0,
        left_prefix: result.slice(0, pl),
        right_suffix: result.slice(rl.len() - ps, rl.len()),
        triangle_left: Triangle {
            first: d1.clone(),
            ..Triangle::default()
        },
        triangle_right: Triangle {
            first: e1.clone(),
            ..Triangle::default()
        },
    };

    if d1.is_empty() && e1.is_empty() && middle == v.letters() {
        tr.type_tag = TurnType::Type1;
        tr.remainder = v.clone();
    } else {
        match periodic_common_factor(middle, v.len(), vper.letters()) {
            Some((start, len, phase)) if len >= p => {
                let i = place_in_complement(&v, len, phase, p);
                tr.type_tag = TurnType::Type2;
                tr.remainder = Word::from_reduced(middle[start..start + len].to_vec());
                tr.remainder_offset = pl + start;
                tr.remainder_in_complement = i;
                tr.triangle_left.second = v.slice(0, i);
                tr.triangle_left.third = Word::from_reduced(middle[..start].to_vec());
                tr.triangle_right.second = v.slice(i + len, v.len());
                tr.triangle_right.third = Word::from_reduced(middle[start + len..].to_vec());
            }
            _ => {
                tr.triangle_left.second = v.clone();
                tr.triangle_left.third = Word::from_reduced(middle.to_vec());
            }
        }
    }
    if params.is_strict() {
        check_turn(params, &tr)?;
    }
    Ok(tr)
}

fn check_turn(params: &Params, tr: &TurnResult) -> Result<()> {
    let tau = params.tau;
    let bound = Measure::from_integer(3 * tau + 1);
    let r = tr.rank;
    for (name, side) in [
        ("D1", &tr.triangle_left.first),
        ("D3", &tr.triangle_left.third),
        ("E1", &tr.triangle_right.first),
        ("E3", &tr.triangle_right.third),
    ] {
        if !is_tau_free(side, r, bound, tau) {
            return Err(Error::InvariantViolation(format!("{name} is not (3tau+1)-free of rank {r}")));
        }
    }
    let lam = tr.occurrence.measure;
    let k = tr.occurrence.k() as i64;
    if k >= params.n + tau && tr.type_tag != TurnType::Type1 {
        return Err(Error::InvariantViolation("long occurrence did not give a Type 1 turn".into()));
    }
    let vm = measure_of(tr.complement.len(), tr.complement_period.len());
    let tau_m = params.tau_m();
    let n_m = Measure::from_integer(params.n);
    if lam >= tau_m && lam <= n_m - Measure::from_integer(2 * tau) {
        let ok = tr.type_tag != TurnType::Type3 && tr.remainder_measure() > vm - Measure::from_integer(2 * tau);
        if !ok {
            return Err(Error::InvariantViolation("mid-range turn lost too much of the complement".into()));
        }
    }
    if tr.type_tag == TurnType::Type2 {
        if let Some(hat) = tr.prolonged_remainder(tau) {
            let v1 = tr.remainder_offset - hat.offset;
            let v2 = hat.end() - (tr.remainder_offset + tr.remainder.len());
            let lmax = tr.triangle_left.second.len().max(tr.triangle_left.third.len());
            let rmax = tr.triangle_right.first.len().max(tr.triangle_right.third.len());
            if v1 > lmax || v2 > rmax {
                return Err(Error::InvariantViolation(format!(
                    "prolongation ({v1}, {v2}) exceeds triangle bounds ({lmax}, {rmax})"
                )));
            }
            if lam >= tau_m && lam <= n_m - Measure::from_integer(3 * tau + 1) {
                let hm = hat.measure;
                let half_plus = params.half() + tau_m;
                if hm >= n_m - lam + Measure::from_integer(2 * tau) || lam.min(hm) >= half_plus {
                    return Err(Error::InvariantViolation("neither side is below n/2 + tau".into()));
                }
            }
        }
    }
    Ok(())
}

/// Turns the prolonged remainder back; restores the source for invertible turns.
pub fn inverse_turn(params: &Params, tr: &TurnResult) -> Result<TurnResult> {
    if tr.type_tag == TurnType::Type3 || tr.remainder_measure() < params.tau_m() + Measure::from_integer(1) {
        return Err(Error::NoInverse);
    }
    let hat = tr.prolonged_remainder(params.tau).ok_or(Error::NoInverse)?;
    turn(params, &tr.result, &hat, tr.rank)
}

/// The occurrence corresponding to `occ` (an occurrence of `tr.source`) in `tr.result`.
pub fn track(params: &Params, tr: &TurnResult, occ: &Occurrence, _rank: u32) -> Option<Tracked> {
    if occ.offset == tr.occurrence.offset && occ.length == tr.occurrence.length {
        let hat = tr.prolonged_remainder(params.tau)?;
        let shift = tr.remainder_in_complement as isize + hat.offset as isize - tr.remainder_offset as isize;
        return Some(Tracked {
            occ: hat,
            shift,
            piece: tr.remainder.len(),
        });
    }
    let p = occ.period_len();
    let pl = tr.left_prefix.len();
    let src_len = tr.source.len();
    let suffix_start = src_len - tr.right_suffix.len();
    let left_piece = (occ.offset, occ.end().min(pl));
    let right_piece = (occ.offset.max(suffix_start), occ.end());
    let len_of = |(s, e): (usize, usize)| e.saturating_sub(s);
    let delta = tr.delta();
    let (piece, image_start) = if len_of(left_piece) >= len_of(right_piece) {
        (left_piece, left_piece.0 as isize)
    } else {
        (right_piece, right_piece.0 as isize + delta)
    };
    let plen = len_of(piece);
    if plen < p || plen == 0 {
        return None;
    }
    let start = image_start as usize;
    let (s, e) = prolong(tr.result.letters(), start, start + plen, p);
    let new = Occurrence::from_span(&tr.result, s, e - s, p, params.tau);
    // Offset of the old occurrence's start as carried along rigidly.
    let carried = image_start - (piece.0 as isize - occ.offset as isize);
    Some(Tracked {
        occ: new,
        shift: s as isize - carried,
        piece: plen,
    })
}

/// Turns the members flagged in `choices`, in the given order, tracking every member.
pub fn apply_sides_in_order(
    params: &Params,
    a: &Word,
    members: &[Occurrence],
    choices: &[bool],
    order: &[usize],
    rank: u32,
) -> Result<Applied> {
    let mut word = a.clone();
    let mut current: Vec<Option<Placed>> = members
        .iter()
        .map(|m| {
            Some(Placed {
                occ: m.clone(),
                origin: 0,
                turned: false,
                min_piece: m.length,
            })
        })
        .collect();
    for &idx in order {
        if !choices[idx] {
            continue;
        }
        let Some(target) = current[idx].clone() else {
            return Err(Error::NotStable(format!("member {idx} vanished before its turn")));
        };
        let tr = turn(params, &word, &target.occ, rank)?;
        for (j, slot) in current.iter_mut().enumerate() {
            let Some(placed) = slot.take() else { continue };
            if j == idx {
                *slot = track(params, &tr, &tr.occurrence, rank).map(|t| Placed {
                    occ: t.occ,
                    origin: t.shift,
                    turned: true,
                    min_piece: t.piece,
                });
            } else {
                *slot = track(params, &tr, &placed.occ, rank).map(|t| Placed {
                    origin: placed.origin + t.shift,
                    turned: placed.turned,
                    min_piece: placed.min_piece.min(t.piece),
                    occ: t.occ,
                });
            }
        }
        word = tr.result;
    }
    Ok(Applied { word, members: current })
}

/// Left-to-right version of [`apply_sides_in_order`].
pub fn apply_sides(params: &Params, a: &Word, members: &[Occurrence], choices: &[bool], rank: u32) -> Result<Applied> {
    let order: Vec<usize> = (0..members.len()).collect();
    apply_sides_in_order(params, a, members, choices, &order, rank)
}

/// A family of maximal occurrences whose turns commute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableSequence {
    pub host: Word,
    pub members: Vec<Occurrence>,
    pub rank: u32,
}

impl StableSequence {
    pub fn new(params: &Params, host: Word, members: Vec<Occurrence>, rank: u32) -> Result<StableSequence> {
        for (i, m) in members.iter().enumerate() {
            if m.rank != rank {
                return Err(Error::RankMismatch {
                    expected: rank,
                    found: m.rank,
                });
            }
            if !is_maximal(&host, m) {
                return Err(Error::NotStable(format!("member {i} is not maximal")));
            }
            if i > 0 && members[i - 1].offset >= m.offset {
                return Err(Error::OverlappingSpansOrderedWrong);
            }
        }
        let tau = params.tau;
        let lower = params.tau_m() + Measure::from_integer(1);
        for (i, m) in members.iter().enumerate() {
            let mut close = 0;
            if i > 0 && classify_isolation(&host, &members[i - 1], m, rank, tau)? == IsolationClass::CloseNeighbours {
                close += 1;
            }
            if i + 1 < members.len() && classify_isolation(&host, m, &members[i + 1], rank, tau)? == IsolationClass::CloseNeighbours {
                close += 1;
            }
            let upper = Measure::from_integer(params.n - (4 * tau + 1 + close * params.epsilon));
            if m.measure < lower || m.measure > upper {
                return Err(Error::NotStable(format!(
                    "member {i} has measure {} outside [{lower}, {upper}]",
                    m.measure
                )));
            }
        }
        let seq = StableSequence { host, members, rank };
        seq.check_solid(params)?;
        Ok(seq)
    }

    fn check_solid(&self, params: &Params) -> Result<()> {
        let t = self.members.len();
        let floor = (params.tau as usize + 1) as u64;
        for mask in 0u32..(1 << t) {
            let choices: Vec<bool> = (0..t).map(|i| mask & (1 << i) != 0).collect();
            let applied = apply_sides(params, &self.host, &self.members, &choices, self.rank)?;
            for (i, slot) in applied.members.iter().enumerate() {
                let ok = slot.as_ref().is_some_and(|pl| {
                    let p = pl.occ.period_len() as u64;
                    pl.min_piece as u64 >= floor * p
                });
                if !ok {
                    return Err(Error::NotStable(format!("member {i} is not solid under subset {mask:b}")));
                }
            }
        }
        Ok(())
    }
}

/// Turns exactly the members with `subset[i]` set, in the given order (default left to right).
pub fn multi_turn(params: &Params, seq: &StableSequence, subset: &[bool], order: Option<&[usize]>) -> Result<Word> {
    if subset.len() != seq.members.len() {
        return Err(Error::NotStable("subset length differs from the sequence".into()));
    }
    let default: Vec<usize> = (0..subset.len()).collect();
    let order = order.unwrap_or(&default);
    Ok(apply_sides_in_order(params, &seq.host, &seq.members, subset, order, seq.rank)?.word)
}

/// Sum of the measures of rank-`rank` maximal occurrences at or above the certification floor.
pub fn potential_d(params: &Params, a: &Word, rank: u32) -> Measure {
    maximal_occurrences(a, rank, params.cert_floor_m(), params.tau)
        .iter()
        .map(|o| o.measure)
        .sum()
}
