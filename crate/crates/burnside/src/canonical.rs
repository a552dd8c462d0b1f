//! Canonical forms of rank r, certification sequences and winner sides.

use crate::config::{Measure, Mode, Params};
use crate::error::{Error, Result};
use crate::occurrences::{all_maximal_occurrences, are_essentially_non_isolated, maximal_occurrences, Occurrence};
use crate::relators::{is_alpha_free_modulo, nesting_depth};
use crate::semican::{greedy_kappa, greedy_to, staged_descent};
use crate::support::control_m;
use crate::turns::{apply_sides, apply_sides_in_order, Placed};
use crate::words::{common_prefix_len, common_suffix_len, Letter, Word};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

type MemoKey = (i64, i64, Mode, u32, Vec<Letter>);

const MEMO_CAP: usize = 200_000;

fn memo() -> &'static Mutex<HashMap<MemoKey, Word>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Word>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertKind {
    Certification,
    UnCertification,
    /// No essentially non-isolated neighbour: `(u)` alone is both kinds.
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Keep,
    Turn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Basis {
    ForcedShort,
    ForcedLong,
    LengthCompare,
    DeglexTuples,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificationOutcome {
    pub direction: Direction,
    /// `u0, u1, …, ut` as occurrences of the input word.
    pub sequence: Vec<Occurrence>,
    /// `true` where the complement side was chosen.
    pub choices: Vec<bool>,
    pub witness: Word,
    pub kind: CertKind,
    /// Side of `u1` the outcome speaks about (`Turn` means the complement).
    pub certified_side: Side,
}

impl CertificationOutcome {
    pub fn certifies(&self) -> bool {
        self.kind == CertKind::Certification
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinnerDecision {
    pub side: Side,
    pub basis: Basis,
    pub u_len: Option<usize>,
    pub v_len: Option<usize>,
    pub tuples: Option<(Vec<Word>, Vec<Word>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    pub word: Word,
    pub rank: u32,
    /// Ranks computed on the way, `history[r] = can_r`.
    pub history: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub word: Word,
    pub left: Word,
    pub middle: Word,
    pub right: Word,
    pub middle_free: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerForm {
    pub prefix: Word,
    pub core: Word,
    pub offset: i64,
    pub suffix: Word,
}

/// Canonical form of rank `rank`, cascading through all lower ranks.
pub fn can_r(params: &Params, a: &Word, rank: u32) -> Result<Word> {
    if rank == 0 || a.len() <= 1 {
        return Ok(a.clone());
    }
    let key = (params.n, params.tau, params.mode, rank, a.letters().to_vec());
    if let Some(hit) = memo().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let below = can_r(params, a, rank - 1)?;
    let out = if rank == 1 {
        rank_one_step(params, &below)?
    } else {
        rank_step(params, &below, rank)?
    };
    let mut cache = memo().lock().unwrap();
    if cache.len() >= MEMO_CAP {
        cache.clear();
    }
    cache.insert(key, out.clone());
    Ok(out)
}

pub fn can_1(params: &Params, a: &Word) -> Result<Word> {
    can_r(params, a, 1)
}

fn rank_one_step(params: &Params, a: &Word) -> Result<Word> {
    let g = greedy_to(params, a, 1, greedy_kappa(params))?.word;
    let half = params.half();
    let flips: Vec<Occurrence> = maximal_occurrences(&g, 1, half, params.tau)
        .into_iter()
        .filter(|o| o.measure > half)
        .collect();
    if flips.is_empty() {
        return Ok(g);
    }
    let choices = vec![true; flips.len()];
    Ok(apply_sides(params, &g, &flips, &choices, 1)?.word)
}

fn decision_set(params: &Params, a: &Word, rank: u32) -> Vec<Occurrence> {
    let lo = params.window_lo;
    maximal_occurrences(a, rank, lo, params.tau)
        .into_iter()
        .filter(|o| o.measure > lo)
        .collect()
}

fn rank_step(params: &Params, a: &Word, rank: u32) -> Result<Word> {
    if decision_set(params, a, rank).is_empty() {
        return Ok(a.clone());
    }
    let g = greedy_to(params, a, rank, greedy_kappa(params))?.word;
    let mu1 = greedy_kappa(params);
    let s = staged_descent(params, &g, rank, mu1, params.lambda.max(params.half()))?.word;
    let occs = decision_set(params, &s, rank);
    if occs.is_empty() {
        return Ok(s);
    }
    let mut choices = Vec::with_capacity(occs.len());
    for occ in &occs {
        choices.push(winner_side(params, &s, occ, rank)?.side == Side::Turn);
    }
    Ok(apply_sides(params, &s, &occs, &choices, rank)?.word)
}

/// The stabilized canonical form: raise the rank until nothing above it can change the word.
pub fn can(params: &Params, a: &Word) -> Result<CanonicalForm> {
    let mut history = vec![a.clone()];
    let mut r = 1u32;
    loop {
        let current = can_r(params, a, r)?;
        let bound = nesting_depth(a, params.tau).max(nesting_depth(&current, params.tau)) + 2;
        let settled = current == history[r as usize - 1]
            && !all_maximal_occurrences(&current, params.window_lo, params.tau)
                .iter()
                .any(|o| o.rank > r && o.measure > params.window_lo);
        history.push(current.clone());
        if settled {
            let first = history.iter().position(|w| *w == current).unwrap_or(0) as u32;
            return Ok(CanonicalForm {
                word: current,
                rank: first.max(1),
                history,
            });
        }
        r += 1;
        if r > bound {
            return Err(Error::StabilizationWatchdog(bound));
        }
    }
}

/// `can_r(A·B)`, factored as `A′ · D · B′` with `A′` a prefix of `A` and `B′` a suffix of `B`.
pub fn mult_r(params: &Params, a: &Word, b: &Word, rank: u32) -> Result<Product> {
    let word = can_r(params, &a.mul(b), rank)?;
    let wl = word.letters();
    let pl = common_prefix_len(wl, a.letters());
    let ps = common_suffix_len(wl, b.letters()).min(wl.len() - pl);
    let middle = word.slice(pl, wl.len() - ps);
    let middle_free = is_alpha_free_modulo(&middle, rank, params.tau_m(), params.tau);
    Ok(Product {
        left: word.slice(0, pl),
        right: word.slice(wl.len() - ps, wl.len()),
        middle,
        middle_free,
        word,
    })
}

fn longest_run(letters: &[Letter], p: usize) -> (usize, usize) {
    let mut best = (0, 0);
    let mut j = 0;
    while j + p < letters.len() {
        if letters[j] != letters[j + p] {
            j += 1;
            continue;
        }
        let start = j;
        while j + p < letters.len() && letters[j] == letters[j + p] {
            j += 1;
        }
        let len = j - start + p;
        if len > best.1 {
            best = (start, len);
        }
    }
    best
}

/// `can_r(A^M) = W · core^{M−K} · Z`, checked on three consecutive exponents.
pub fn power_form(params: &Params, a: &Word, m: i64, rank: u32) -> Result<PowerForm> {
    let x = |k: i64| can_r(params, &a.pow(k), rank);
    let (x0, x1, x2) = (x(m)?, x(m + 1)?, x(m + 2)?);
    let delta = x1.len() as i64 - x0.len() as i64;
    if delta <= 0 || x2.len() as i64 - x1.len() as i64 != delta {
        return Err(Error::NotStabilized(format!(
            "lengths {} {} {} are not affine",
            x0.len(),
            x1.len(),
            x2.len()
        )));
    }
    let p = delta as usize;
    let (start, len) = longest_run(x1.letters(), p);
    let (start, len) = if len < p { (0, 0) } else { (start, len) };
    let reps = len / p;
    let core = x1.slice(start, start + p);
    let prefix = x1.slice(0, start);
    let suffix = x1.slice(start + reps * p, x1.len());
    let form = PowerForm {
        offset: m + 1 - reps as i64,
        prefix,
        core,
        suffix,
    };
    for (k, xk) in [(m, &x0), (m + 1, &x1), (m + 2, &x2)] {
        if expand(&form, k)? != *xk {
            return Err(Error::NotStabilized(format!("exponent {k} does not fit the form")));
        }
    }
    Ok(form)
}

fn expand(form: &PowerForm, m: i64) -> Result<Word> {
    let e = m - form.offset;
    if e < 0 {
        return Err(Error::NotStabilized(format!("negative core exponent at {m}")));
    }
    let mut letters = form.prefix.letters().to_vec();
    for _ in 0..e {
        letters.extend_from_slice(form.core.letters());
    }
    letters.extend_from_slice(form.suffix.letters());
    Ok(crate::words::reduce(letters))
}

/// Searches `M = 1, 2, 4, …` up to `max_m` for a stable power form.
pub fn find_power_form(params: &Params, a: &Word, rank: u32, max_m: i64) -> Result<(i64, PowerForm)> {
    let mut m = 1;
    while m <= max_m {
        if let Ok(form) = power_form(params, a, m, rank) {
            return Ok((m, form));
        }
        m *= 2;
    }
    Err(Error::NotStabilized(format!("no stable form up to exponent {max_m}")))
}

fn mirror(a_len: usize, inv: &Word, occ: &Occurrence, tau: i64) -> Occurrence {
    Occurrence::from_span(inv, a_len - occ.end(), occ.length, occ.period_len(), tau)
}

fn side_measure(slot: &Option<Placed>) -> Measure {
    slot.as_ref().map_or(Measure::from_integer(0), |p| p.occ.measure)
}

/// (Un-)certification outcomes for both sides of the nearest neighbour of `u` in the given direction.
pub fn certify(params: &Params, a: &Word, u: &Occurrence, direction: Direction, rank: u32) -> Result<Vec<CertificationOutcome>> {
    match direction {
        Direction::Right => certify_right(params, a, u, rank),
        Direction::Left => {
            let inv = a.inverse();
            let mu = mirror(a.len(), &inv, u, params.tau);
            let outcomes = certify_right(params, &inv, &mu, rank)?;
            Ok(outcomes
                .into_iter()
                .map(|o| CertificationOutcome {
                    direction: Direction::Left,
                    sequence: o.sequence.iter().map(|s| mirror(inv.len(), a, s, params.tau)).collect(),
                    witness: o.witness.inverse(),
                    ..o
                })
                .collect())
        }
    }
}

fn certify_right(params: &Params, a: &Word, u: &Occurrence, rank: u32) -> Result<Vec<CertificationOutcome>> {
    let floor = params.cert_floor_m();
    let chain: Vec<Occurrence> = maximal_occurrences(a, rank, floor, params.tau)
        .into_iter()
        .filter(|o| o.offset > u.offset && o.measure >= floor)
        .collect();
    let trivial = || {
        vec![CertificationOutcome {
            direction: Direction::Right,
            sequence: vec![u.clone()],
            choices: vec![false],
            witness: a.clone(),
            kind: CertKind::Trivial,
            certified_side: Side::Keep,
        }]
    };
    let Some(u1) = chain.first() else { return Ok(trivial()) };
    if !are_essentially_non_isolated(params, a, u, u1, rank)? {
        return Ok(trivial());
    }
    let mut members = vec![u.clone()];
    members.extend(chain.iter().cloned());
    let mut outcomes = Vec::new();
    for f1 in [false, true] {
        let measure_with =
            |c0: bool| -> Result<Measure> { Ok(side_measure(&apply_sides(params, a, &members[..2], &[c0, f1], rank)?.members[1])) };
        let (keep, turned) = (measure_with(false)?, measure_with(true)?);
        let c0 = turned < keep;
        let mut choices = vec![c0, f1];
        let mut t = 1;
        let (witness, certified) = loop {
            let applied = apply_sides(params, a, &members[..=t], &choices, rank)?;
            let status = side_measure(&applied.members[t]) <= params.lambda_for(control_m(t as u64));
            if t + 1 >= members.len() {
                break (applied.word, status);
            }
            let mut trial = choices.clone();
            trial.push(true);
            let after = apply_sides(params, a, &members[..=t + 1], &trial, rank)?;
            let status_after = side_measure(&after.members[t]) <= params.lambda_for(control_m(t as u64));
            if status_after == status {
                break (applied.word, status);
            }
            choices.push(!status);
            t += 1;
        };
        outcomes.push(CertificationOutcome {
            direction: Direction::Right,
            sequence: members[..=t].to_vec(),
            choices,
            witness,
            kind: if certified {
                CertKind::Certification
            } else {
                CertKind::UnCertification
            },
            certified_side: if f1 { Side::Turn } else { Side::Keep },
        });
    }
    Ok(outcomes)
}

/// Certified sides of the nearest neighbour: (neighbour, turn it?) pairs.
fn certified_sides(outcomes: &[CertificationOutcome]) -> Vec<(Occurrence, bool)> {
    outcomes
        .iter()
        .filter(|o| o.certifies() && o.sequence.len() > 1)
        .map(|o| (o.sequence[1].clone(), o.certified_side == Side::Turn))
        .collect()
}

/// Integer midpoint marker of the gap between two points: `(P, P′)` with `P′ − P ∈ {0, 1}`.
fn midpoint(x: i64, y: i64) -> (i64, i64) {
    let (lo, hi) = (x.min(y), x.max(y));
    let g = hi - lo;
    if g % 2 == 1 {
        (lo + (g - 1) / 2, lo + (g + 1) / 2)
    } else {
        (lo + g / 2, lo + g / 2)
    }
}

fn cycle_slice(cycle: &[Letter], from: i64, to: i64) -> Word {
    let n = cycle.len() as i64;
    let letters: Vec<Letter> = (from..to).map(|i| cycle[i.rem_euclid(n) as usize]).collect();
    Word::from_reduced(letters)
}

fn deglex_sorted(mut words: Vec<Word>) -> Vec<Word> {
    words.sort_by(|x, y| x.deglex_cmp(y));
    words
}

fn tuple_cmp(u: &[Word], v: &[Word]) -> Ordering {
    u.iter()
        .zip(v)
        .map(|(x, y)| x.deglex_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// The two sorted six-word tuples for a partition `aⁿ = u0 · d · v0⁻¹ · c`.
pub fn side_tuples(u0: &Word, c: &Word, d: &Word, v0: &Word) -> (Vec<Word>, Vec<Word>) {
    let ui = u0.inverse();
    let vi = v0.inverse();
    let u = deglex_sorted(vec![
        u0.clone(),
        ui.clone(),
        c.mul(u0),
        u0.mul(d),
        ui.mul(&c.inverse()),
        d.inverse().mul(&ui),
    ]);
    let v = deglex_sorted(vec![
        v0.clone(),
        vi.clone(),
        c.inverse().mul(v0),
        v0.mul(&d.inverse()),
        vi.mul(c),
        d.mul(&vi),
    ]);
    (u, v)
}

/// Decides whether `u` or its complement survives in the canonical form.
pub fn winner_side(params: &Params, a: &Word, u: &Occurrence, rank: u32) -> Result<WinnerDecision> {
    let forced = |side, basis| WinnerDecision {
        side,
        basis,
        u_len: None,
        v_len: None,
        tuples: None,
    };
    if u.measure <= params.window_lo {
        return Ok(forced(Side::Keep, Basis::ForcedShort));
    }
    if u.measure >= params.window_hi {
        return Ok(forced(Side::Turn, Basis::ForcedLong));
    }
    let right = certified_sides(&certify(params, a, u, Direction::Right, rank)?);
    let left = certified_sides(&certify(params, a, u, Direction::Left, rank)?);
    let options = |sides: Vec<(Occurrence, bool)>| -> Vec<Option<(Occurrence, bool)>> {
        if sides.is_empty() {
            vec![None]
        } else {
            sides.into_iter().map(Some).collect()
        }
    };
    let (left, right) = (options(left), options(right));

    let mut best_u: Option<(usize, isize)> = None;
    let mut best_v: Option<(usize, isize)> = None;
    for lo in &left {
        for ro in &right {
            let mut members = Vec::new();
            let mut choices = Vec::new();
            if let Some((q, turn_q)) = lo {
                members.push(q.clone());
                choices.push(*turn_q);
            }
            let ui = members.len();
            members.push(u.clone());
            choices.push(false);
            if let Some((q, turn_q)) = ro {
                members.push(q.clone());
                choices.push(*turn_q);
            }
            let kept = apply_sides(params, a, &members, &choices, rank)?;
            if let Some(pl) = &kept.members[ui] {
                let cand = (pl.occ.length, pl.origin);
                best_u = Some(best_u.map_or(cand, |b| b.min(cand)));
            }
            choices[ui] = true;
            let mut order = vec![ui];
            order.extend((0..members.len()).filter(|&i| i != ui));
            let turned = apply_sides_in_order(params, a, &members, &choices, &order, rank)?;
            if let Some(pl) = &turned.members[ui] {
                let cand = (pl.occ.length, pl.origin);
                best_v = Some(best_v.map_or(cand, |b| b.min(cand)));
            }
        }
    }
    let (Some((ul, uo)), Some((vl, vo))) = (best_u, best_v) else {
        let side = if best_u.is_none() { Side::Turn } else { Side::Keep };
        return Ok(WinnerDecision {
            side,
            basis: Basis::LengthCompare,
            u_len: best_u.map(|b| b.0),
            v_len: best_v.map(|b| b.0),
            tuples: None,
        });
    };
    if ul != vl {
        let side = if ul < vl { Side::Keep } else { Side::Turn };
        return Ok(WinnerDecision {
            side,
            basis: Basis::LengthCompare,
            u_len: Some(ul),
            v_len: Some(vl),
            tuples: None,
        });
    }

    let p = u.period_len();
    let big_n = params.n * p as i64;
    let cycle: Vec<Letter> = (0..big_n as usize).map(|i| u.period.letters()[i % p]).collect();
    let (uo, vo) = (uo as i64, vo as i64);
    let (i_u, f_u) = (uo, uo + ul as i64);
    // A point x of the complement (from its start) sits at N − x on the cycle.
    let (i_v, f_v) = (-vo, -(vo + vl as i64) + big_n);
    let (p1, p1b) = midpoint(i_u, i_v);
    let (p2, p2b) = midpoint(f_u, f_v);
    let c = cycle_slice(&cycle, p1, p1b);
    let d = cycle_slice(&cycle, p2, p2b);
    let u0 = cycle_slice(&cycle, p1b, p2);
    let v0 = cycle_slice(&cycle, p2b, p1 + big_n).inverse();
    let (ut, vt) = side_tuples(&u0, &c, &d, &v0);
    let side = match tuple_cmp(&ut, &vt) {
        Ordering::Less => Side::Keep,
        Ordering::Greater => Side::Turn,
        Ordering::Equal => {
            return Err(Error::InvariantViolation("tie-break tuples coincide".into()));
        }
    };
    Ok(WinnerDecision {
        side,
        basis: Basis::DeglexTuples,
        u_len: Some(ul),
        v_len: Some(vl),
        tuples: Some((ut, vt)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn rank_one_examples() {
        let p = Params::standard();
        assert_eq!(can_1(&p, &w("a^297")).unwrap(), w("a^-296"));
        assert_eq!(can_1(&p, &w("a^296")).unwrap(), w("a^296"));
        assert_eq!(can_1(&p, &w("a^900")).unwrap(), w("a^-286"));
        assert_eq!(can_1(&p, &w("a^592")).unwrap(), w("A"));
        assert_eq!(can_r(&p, &w("b"), 3).unwrap(), w("b"));
    }

    #[test]
    fn rank_two_example() {
        let p = Params::standard();
        let a = w("aa (ab)^400 aa");
        assert_eq!(can_r(&p, &a, 2).unwrap(), w("aa (ab)^-193 aa"));
        let c = can(&p, &a).unwrap();
        assert_eq!(c.word, w("aa (ab)^-193 aa"));
        assert_eq!(c.rank, 2);
        let c = can(&p, &w("a^900")).unwrap();
        assert_eq!((c.word, c.rank), (w("a^-286"), 1));
    }

    #[test]
    fn forced_decisions() {
        let p = Params::standard();
        let a = w("(ab)^214 a");
        let occ = maximal_occurrences(&a, 2, Measure::from_integer(2), 16).remove(0);
        assert_eq!(winner_side(&p, &a, &occ, 2).unwrap().basis, Basis::ForcedShort);
        let a = w("(ab)^400");
        let occ = maximal_occurrences(&a, 2, Measure::from_integer(2), 16).remove(0);
        let d = winner_side(&p, &a, &occ, 2).unwrap();
        assert_eq!((d.side, d.basis), (Side::Turn, Basis::ForcedLong));
    }

    #[test]
    fn products() {
        let p = Params::standard();
        assert_eq!(mult_r(&p, &w("a^296"), &w("a^296"), 1).unwrap().word, w("A"));
        let a = w("ab^3 a^-2");
        assert!(mult_r(&p, &a, &a.inverse(), 2).unwrap().word.is_empty());
        assert_eq!(mult_r(&p, &a, &Word::empty(), 2).unwrap().word, a);
    }

    #[test]
    fn power_forms() {
        let p = Params::standard();
        let f = power_form(&p, &w("ab"), 20, 1).unwrap();
        assert_eq!(
            f,
            PowerForm {
                prefix: Word::empty(),
                core: w("ab"),
                offset: 0,
                suffix: Word::empty()
            }
        );
        let f = power_form(&p, &w("a"), 1200, 1).unwrap();
        assert_eq!(f.core, w("a"));
        assert_eq!(f.offset, 1186);
    }

    #[test]
    fn midpoints() {
        assert_eq!(midpoint(0, 3), (1, 2));
        assert_eq!(midpoint(4, 0), (2, 2));
        assert_eq!(midpoint(-1, -1), (-1, -1));
    }
}
