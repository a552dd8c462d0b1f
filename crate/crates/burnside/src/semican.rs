//! κ-semicanonical forms: greedy descent, staged descent and seam products.

use crate::canonical::can_r;
use crate::config::{Measure, Params};
use crate::error::{Error, Result};
use crate::occurrences::{maximal_occurrences, Occurrence};
use crate::turns::{potential_d, turn, TurnType};
use crate::words::{common_prefix_len, common_suffix_len, Word};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub offset: usize,
    pub length: usize,
    pub period: String,
    pub measure: String,
    pub type_tag: TurnType,
}

impl TraceStep {
    fn new(occ: &Occurrence, type_tag: TurnType) -> TraceStep {
        TraceStep {
            offset: occ.offset,
            length: occ.length,
            period: occ.period.to_string(),
            measure: occ.measure.to_string(),
            type_tag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemicanonicalForm {
    pub word: Word,
    pub kappa: Measure,
    pub rank: u32,
    pub trace: Vec<TraceStep>,
}

/// Every maximal rank-`rank` occurrence has measure at most `kappa`.
pub fn is_semicanonical(params: &Params, a: &Word, rank: u32, kappa: Measure) -> bool {
    first_above(params, a, rank, kappa, 0).is_none()
}

fn first_above(params: &Params, a: &Word, rank: u32, kappa: Measure, from: usize) -> Option<Occurrence> {
    maximal_occurrences(a, rank, kappa, params.tau)
        .into_iter()
        .find(|o| o.measure > kappa && o.end() > from)
}

fn watchdog(a: &Word) -> usize {
    (10 * a.len()).max(10)
}

/// The greedy target: μ, raised to n/2 in lab mode where μ can be negative.
pub fn greedy_kappa(params: &Params) -> Measure {
    if params.is_strict() {
        params.mu
    } else {
        params.mu.max(params.half())
    }
}

/// Turns the left-most occurrence above `kappa` until none is left.
pub fn greedy_to(params: &Params, a: &Word, rank: u32, kappa: Measure) -> Result<SemicanonicalForm> {
    let mut word = a.clone();
    let mut trace = Vec::new();
    let limit = watchdog(a);
    let mut potential = potential_d(params, &word, rank);
    while let Some(occ) = first_above(params, &word, rank, kappa, 0) {
        if trace.len() >= limit {
            return Err(Error::Watchdog(format!("greedy descent exceeded {limit} turns")));
        }
        let tr = turn(params, &word, &occ, rank)?;
        trace.push(TraceStep::new(&tr.occurrence, tr.type_tag));
        word = tr.result;
        let next = potential_d(params, &word, rank);
        if params.is_strict() && next >= potential {
            return Err(Error::InvariantViolation(format!(
                "potential did not decrease ({potential} -> {next})"
            )));
        }
        potential = next;
    }
    Ok(SemicanonicalForm { word, kappa, rank, trace })
}

/// Greedy descent to μ-semicanonical form.
pub fn greedy_semicanonicalize(params: &Params, a: &Word, rank: u32) -> Result<SemicanonicalForm> {
    greedy_to(params, a, rank, greedy_kappa(params))
}

/// Left-to-right sweep turning occurrences above `mu2 − ε` until the word is `mu2`-semicanonical.
pub fn staged_descent(params: &Params, a: &Word, rank: u32, mu1: Measure, mu2: Measure) -> Result<SemicanonicalForm> {
    if params.is_strict() {
        let top = Measure::from_integer(params.n - 7 * params.tau - 3);
        if !(params.lambda <= mu2 && mu2 <= mu1 && mu1 <= top) {
            return Err(Error::BadRegime(format!("need lambda <= {mu2} <= {mu1} <= {top}")));
        }
        if !is_semicanonical(params, a, rank, mu1) {
            return Err(Error::BadRegime(format!("input is not {mu1}-semicanonical")));
        }
    }
    let threshold = mu2 - params.epsilon_m();
    let ceiling = mu1 + params.epsilon_m();
    let mut word = a.clone();
    let mut trace = Vec::new();
    let limit = watchdog(a);
    let mut pos = 0;
    loop {
        let Some(occ) = first_above(params, &word, rank, threshold, pos).or_else(|| {
            pos = 0;
            first_above(params, &word, rank, mu2, 0)
        }) else {
            break;
        };
        if trace.len() >= limit {
            return Err(Error::Watchdog(format!("staged descent exceeded {limit} turns")));
        }
        let tr = turn(params, &word, &occ, rank)?;
        trace.push(TraceStep::new(&tr.occurrence, tr.type_tag));
        pos = tr.prolonged_remainder(params.tau).map_or(tr.remainder_offset, |h| h.offset);
        word = tr.result;
        if params.is_strict() && !is_semicanonical(params, &word, rank, ceiling) {
            return Err(Error::InvariantViolation(format!("intermediate word exceeds {ceiling}")));
        }
    }
    Ok(SemicanonicalForm {
        word,
        kappa: mu2,
        rank,
        trace,
    })
}

/// Multiplies two κ-semicanonical words and removes the oversized seam occurrences.
pub fn seam_product(params: &Params, a: &Word, c: &Word, rank: u32, kappa: Measure) -> Result<SemicanonicalForm> {
    if params.is_strict() {
        let lo = params.half() + params.tau_m();
        let hi = Measure::from_integer(params.n - 7 * params.tau - 3);
        if kappa < lo || kappa > hi {
            return Err(Error::BadRegime(format!("kappa {kappa} outside [{lo}, {hi}]")));
        }
    }
    let product = a.mul(c);
    let mut word = if rank <= 1 { product } else { can_r(params, &product, rank - 1)? };
    let mut trace = Vec::new();
    let seam_floor = kappa + params.epsilon_m();
    let target = kappa + Measure::from_integer(3 * params.tau + 1);

    let pl = common_prefix_len(word.letters(), a.letters());
    let ps = common_suffix_len(word.letters(), c.letters()).min(word.len() - pl);
    let seam: Vec<Occurrence> = maximal_occurrences(&word, rank, seam_floor, params.tau)
        .into_iter()
        .filter(|o| o.measure >= seam_floor)
        .collect();
    if !seam.is_empty() {
        if seam.len() > 1 {
            return Err(Error::SeamNotLocal);
        }
        let occ = &seam[0];
        let reach = params.n as usize * occ.period_len();
        let lo = pl.saturating_sub(reach);
        let hi = (word.len() - ps) + reach;
        if occ.end() < lo || occ.offset > hi {
            return Err(Error::SeamNotLocal);
        }
        let tr = turn(params, &word, occ, rank)?;
        trace.push(TraceStep::new(&tr.occurrence, tr.type_tag));
        word = tr.result;
    }
    let limit = watchdog(&word);
    while let Some(occ) = first_above(params, &word, rank, target, 0) {
        if trace.len() >= limit {
            return Err(Error::Watchdog(format!("seam turns exceeded {limit}")));
        }
        let tr = turn(params, &word, &occ, rank)?;
        trace.push(TraceStep::new(&tr.occurrence, tr.type_tag));
        word = tr.result;
    }
    Ok(SemicanonicalForm {
        word,
        kappa: target,
        rank,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let p = Params::standard();
        let f = greedy_semicanonicalize(&p, &w("a^1200"), 1).unwrap();
        assert_eq!(f.word, w("a^14"));
        assert_eq!(f.trace.len(), 2);
        assert_eq!(greedy_semicanonicalize(&p, &w("a^300"), 1).unwrap().word, w("a^300"));
        assert!(greedy_semicanonicalize(&p, &Word::empty(), 1).unwrap().word.is_empty());
    }

    #[test]
    fn staged_examples() {
        let p = Params::standard();
        let f = staged_descent(&p, &w("a^460"), 1, p.mu, p.lambda).unwrap();
        assert_eq!(f.word, w("a^-133"));
        let f = staged_descent(&p, &w("a^300"), 1, p.mu, p.lambda).unwrap();
        assert_eq!(f.word, w("a^300"));
        assert!(f.trace.is_empty());
        assert!(matches!(
            staged_descent(&p, &w("a^300"), 1, p.mu, Measure::from_integer(100)),
            Err(Error::BadRegime(_))
        ));
    }

    #[test]
    fn seam_examples() {
        let p = Params::standard();
        let f = seam_product(&p, &w("a^296"), &w("a^296"), 1, p.lambda).unwrap();
        assert_eq!(f.word, w("A"));
        let f = seam_product(&p, &w("a^10"), &w("b^10"), 1, p.lambda).unwrap();
        assert_eq!(f.word, w("a^10 b^10"));
        assert!(f.trace.is_empty());
        let f = seam_product(&p, &w("a^10"), &w("a^-10"), 1, p.lambda).unwrap();
        assert!(f.word.is_empty());
    }
}
