use burnside::periodicity::periodic_shifts;
use burnside::support::{balanced_residue_oracle, control_m, cube_free_words, is_bbb_free};
use burnside::words::reduce;
use burnside::{can_1, can_r, Letter, Params, Word};
use proptest::prelude::*;

const N: i64 = 593;

fn letter_power(gen: u16, e: i64) -> Vec<Letter> {
    let l = Letter::new(gen, e < 0);
    vec![l; e.unsigned_abs() as usize]
}

/// Words built from a few letter powers, possibly cancelling.
fn power_words() -> impl Strategy<Value = Word> {
    prop::collection::vec((1u16..3, -1300i64..1300), 0..7).prop_map(|parts| reduce(parts.into_iter().flat_map(|(g, e)| letter_power(g, e))))
}

/// Words mixing letter powers with powers of short two-letter periods.
fn mixed_words() -> impl Strategy<Value = Word> {
    let period = prop::sample::select(vec!["ab", "aB", "aab", "abb", "a", "b"]);
    prop::collection::vec((period, -450i64..450), 1..5).prop_map(|parts| {
        let mut letters = Vec::new();
        for (p, e) in parts {
            letters.extend(Word::parse(p).unwrap().pow(e).into_letters());
        }
        reduce(letters)
    })
}

/// Normal form in the free product of cyclic groups of order `N`, by run-length rewriting.
fn residue_form(a: &Word) -> Word {
    let mut runs: Vec<(u16, i64)> = Vec::new();
    for l in a.letters() {
        let step = if l.is_inverse() { -1 } else { 1 };
        match runs.last_mut() {
            Some((g, e)) if *g == l.generator() => *e += step,
            _ => runs.push((l.generator(), step)),
        }
    }
    loop {
        let mut next: Vec<(u16, i64)> = Vec::new();
        for (g, e) in runs.iter().copied() {
            let mut r = e.rem_euclid(N);
            if 2 * r > N {
                r -= N;
            }
            if r == 0 {
                continue;
            }
            match next.last_mut() {
                Some((h, f)) if *h == g => *f += r,
                _ => next.push((g, r)),
            }
        }
        next.retain(|&(_, e)| e != 0);
        if next == runs {
            break;
        }
        runs = next;
    }
    Word::from_reduced(runs.into_iter().flat_map(|(g, e)| letter_power(g, e)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduction_is_idempotent(raw in prop::collection::vec((1u16..4, any::<bool>()), 0..60)) {
        let once = reduce(raw.iter().map(|&(g, inv)| Letter::new(g, inv)));
        let twice = reduce(once.letters().iter().copied());
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.mul(&once.inverse()).is_empty());
        prop_assert_eq!(once.inverse().inverse(), once);
    }

    #[test]
    fn rank_one_forms_match_the_residue_oracle(a in power_words()) {
        let params = Params::standard();
        let c = can_1(&params, &a).unwrap();
        prop_assert_eq!(&c, &residue_form(&a));
        prop_assert_eq!(&c, &balanced_residue_oracle(&a, N));
    }

    #[test]
    fn rank_one_forms_commute_with_inversion(a in power_words()) {
        let params = Params::standard();
        prop_assert_eq!(can_1(&params, &a.inverse()).unwrap(), can_1(&params, &a).unwrap().inverse());
    }

    #[test]
    fn canonical_forms_are_idempotent(a in mixed_words(), rank in 1u32..=2) {
        let params = Params::standard();
        let once = can_r(&params, &a, rank).unwrap();
        prop_assert_eq!(can_r(&params, &once, rank).unwrap(), once);
    }

    #[test]
    fn rank_two_forms_commute_with_inversion(a in mixed_words()) {
        let params = Params::standard();
        prop_assert_eq!(can_r(&params, &a.inverse(), 2).unwrap(), can_r(&params, &a, 2).unwrap().inverse());
    }

    #[test]
    fn residue_oracle_is_idempotent(a in mixed_words()) {
        let once = balanced_residue_oracle(&a, N);
        prop_assert_eq!(balanced_residue_oracle(&once, N), once.clone());
        prop_assert_eq!(balanced_residue_oracle(&a.inverse(), N), once.inverse());
    }

    #[test]
    fn control_windows_have_no_overlaps(start in 1u64..100_000, len in 2usize..96) {
        let window: Vec<u8> = (start..start + len as u64).map(control_m).collect();
        prop_assert!(is_bbb_free(&window));
    }

    #[test]
    fn long_factors_of_a_power_repeat(
        x in prop::sample::select(vec!["ab", "aab", "abb", "aabab", "abaab", "aB"]),
        k in 3usize..9,
        offset in 0usize..6,
        len in 1usize..10,
    ) {
        let period = Word::parse(x).unwrap();
        let total = period.len() * k;
        // a factor with a period of its own is shorter than two periods of x
        prop_assume!(offset + len <= total && len < 2 * period.len());
        let shifts = periodic_shifts(&period, k, offset, len).unwrap();
        prop_assert!(shifts.len() + 2 >= k);
        let host = period.pow(k as i64);
        let factor = host.slice(offset, offset + len);
        for s in shifts {
            prop_assert_eq!(host.slice(s, s + len), factor.clone());
        }
    }
}

#[test]
fn cube_free_stream_is_cube_free_and_distinct() {
    for len in 1..=14 {
        let words: Vec<Word> = cube_free_words(len).collect();
        assert!(!words.is_empty(), "length {len}");
        let mut seen = std::collections::BTreeSet::new();
        for word in &words {
            let s = word.to_expanded();
            assert_eq!(s.len(), len);
            let c: Vec<char> = s.chars().collect();
            for p in 1..=len / 3 {
                for i in 0..=len - 3 * p {
                    assert!((0..2 * p).any(|j| c[i + j] != c[i + j + p]), "{s} has a cube");
                }
            }
            assert!(seen.insert(s));
        }
    }
}
