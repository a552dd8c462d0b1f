//! Free-group words: reduction, cyclic operations, primitivity, deglex order, text syntax.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// A signed generator: `+g` is the g-th generator, `-g` its inverse (g is 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i16);

impl Letter {
    pub fn new(generator: u16, inverse: bool) -> Letter {
        assert!(generator >= 1, "generators are 1-based");
        let g = generator as i16;
        Letter(if inverse { -g } else { g })
    }

    pub fn generator(self) -> u16 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn raw(self) -> i16 {
        self.0
    }

    pub fn from_raw(raw: i16) -> Letter {
        assert!(raw != 0);
        Letter(raw)
    }

    /// Position in the fixed letter order a < A < b < B < ...
    pub fn order_key(self) -> u32 {
        2 * (self.generator() as u32 - 1) + self.is_inverse() as u32
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + (self.generator() - 1) as u8) as char
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a'..='z' => Some(Letter::new(c as u16 - 'a' as u16 + 1, false)),
            'A'..='Z' => Some(Letter::new(c as u16 - 'A' as u16 + 1, true)),
            _ => None,
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveRoot {
    pub root: Word,
    pub exponent: usize,
}

/// Free reduction of an arbitrary letter sequence.
pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
    let mut out: Vec<Letter> = Vec::new();
    for l in raw {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

pub fn is_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[0] != w[1].inverse())
}

pub fn is_cyclically_reduced(letters: &[Letter]) -> bool {
    is_reduced(letters) && (letters.len() < 2 || letters[0] != letters[letters.len() - 1].inverse())
}

/// Smallest period `p` dividing the length with `letters = block^(len/p)`.
pub fn root_length(letters: &[Letter]) -> usize {
    let n = letters.len();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| letters[i] == letters[i - p]))
        .unwrap_or(n)
}

pub fn is_primitive(letters: &[Letter]) -> bool {
    !letters.is_empty() && root_length(letters) == letters.len()
}

/// Least rotation under the letter order; identifies a cyclic class.
pub fn min_rotation(letters: &[Letter]) -> Vec<Letter> {
    let n = letters.len();
    if n == 0 {
        return Vec::new();
    }
    let mut best = 0;
    for start in 1..n {
        for k in 0..n {
            let a = letters[(start + k) % n];
            let b = letters[(best + k) % n];
            match a.cmp(&b) {
                Ordering::Less => {
                    best = start;
                    break;
                }
                Ordering::Greater => break,
                Ordering::Equal => {}
            }
        }
    }
    (0..n).map(|k| letters[(best + k) % n]).collect()
}

pub fn inverse_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// Length-first, then lexicographic comparison.
pub fn deglex_compare(c1: &[Letter], c2: &[Letter]) -> Ordering {
    c1.len().cmp(&c2.len()).then_with(|| c1.cmp(c2))
}

pub fn common_prefix_len(x: &[Letter], y: &[Letter]) -> usize {
    x.iter().zip(y).take_while(|(a, b)| a == b).count()
}

pub fn common_suffix_len(x: &[Letter], y: &[Letter]) -> usize {
    x.iter().rev().zip(y.iter().rev()).take_while(|(a, b)| a == b).count()
}

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// Wraps letters that are already known to be reduced.
    pub fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(is_reduced(&letters));
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(inverse_letters(&self.0))
    }

    pub fn mul(&self, other: &Word) -> Word {
        reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn concat_all(parts: &[&Word]) -> Word {
        reduce(parts.iter().flat_map(|w| w.0.iter().copied()))
    }

    /// `self^k`, negative exponents invert.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let reps = k.unsigned_abs() as usize;
        let mut raw = Vec::with_capacity(base.len() * reps);
        for _ in 0..reps {
            raw.extend_from_slice(&base.0);
        }
        reduce(raw)
    }

    /// Factor `[start, end)`; factors of reduced words are reduced.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        is_cyclically_reduced(&self.0)
    }

    /// Returns `(core, conjugator)` with `self = conjugator · core · conjugator⁻¹`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = &self.0;
        let mut i = 0;
        let mut j = w.len();
        while j >= i + 2 && w[i] == w[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        (Word(w[i..j].to_vec()), Word(w[..i].to_vec()))
    }

    pub fn primitive_root(&self) -> Result<PrimitiveRoot> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        let p = root_length(&self.0);
        Ok(PrimitiveRoot {
            root: Word(self.0[..p].to_vec()),
            exponent: self.len() / p,
        })
    }

    pub fn is_primitive(&self) -> bool {
        is_primitive(&self.0)
    }

    /// All rotations, starting with the word itself; `{empty}` for the empty word.
    pub fn cyclic_shifts(&self) -> Vec<Word> {
        let n = self.len();
        if n == 0 {
            return vec![Word::empty()];
        }
        (0..n).map(|s| Word((0..n).map(|k| self.0[(s + k) % n]).collect())).collect()
    }

    pub fn rotate(&self, s: usize) -> Word {
        let n = self.len();
        if n == 0 {
            return Word::empty();
        }
        Word((0..n).map(|k| self.0[(s + k) % n]).collect())
    }

    pub fn deglex_cmp(&self, other: &Word) -> Ordering {
        deglex_compare(&self.0, &other.0)
    }

    pub fn max_generator(&self) -> u16 {
        self.0.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    /// Parses the text syntax: `a..z` generators, `A..Z` inverses, `(w)^k`, `x^-k`,
    /// `1` or the empty string for the identity. Whitespace and `*`/`.` separators are ignored.
    pub fn parse(text: &str) -> Result<Word> {
        let mut parser = Parser {
            s: text.as_bytes(),
            pos: 0,
        };
        let raw = parser.sequence(0)?;
        if parser.pos != parser.s.len() {
            return Err(parser.err("unexpected ')'"));
        }
        Ok(reduce(raw))
    }

    /// Parses and checks every letter against an `m`-generator alphabet.
    pub fn parse_for(text: &str, m: u32) -> Result<Word> {
        let w = Word::parse(text)?;
        if let Some(l) = w.0.iter().find(|l| l.generator() as u32 > m) {
            return Err(Error::LetterOutOfRange { letter: l.to_char(), m });
        }
        Ok(w)
    }

    /// Fully expanded text.
    pub fn to_expanded(&self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.0.iter().map(|l| l.to_char()).collect()
    }

    /// Text with repeated blocks of length ≤ 8 written as powers.
    pub fn to_compressed(&self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        let w = &self.0;
        let mut out = String::new();
        let mut i = 0;
        while i < w.len() {
            let mut best: Option<(usize, usize)> = None;
            for p in 1..=8usize.min((w.len() - i) / 2) {
                if !is_primitive(&w[i..i + p]) {
                    continue;
                }
                let mut reps = 1;
                while i + (reps + 1) * p <= w.len() && w[i + reps * p..i + (reps + 1) * p] == w[i..i + p] {
                    reps += 1;
                }
                if reps >= 2 && best.is_none_or(|(bp, br)| reps * p > bp * br) {
                    best = Some((p, reps));
                }
            }
            match best {
                Some((p, reps)) if reps * p > p + 1 || p == 1 => {
                    out.push_str(&format_power(&w[i..i + p], reps));
                    i += p * reps;
                }
                _ => {
                    out.push(w[i].to_char());
                    i += 1;
                }
            }
        }
        out
    }

    pub fn render(&self, compress: bool) -> String {
        if compress {
            self.to_compressed()
        } else {
            self.to_expanded()
        }
    }
}

fn format_power(block: &[Letter], reps: usize) -> String {
    let all_inverse = block.iter().all(|l| l.is_inverse());
    let (shown, sign) = if all_inverse {
        (inverse_letters(block), "-")
    } else {
        (block.to_vec(), "")
    };
    let text: String = shown.iter().map(|l| l.to_char()).collect();
    if shown.len() == 1 {
        format!("{text}^{sign}{reps}")
    } else {
        format!("({text})^{sign}{reps}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expanded())
    }
}

impl std::str::FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && matches!(self.s[self.pos], b' ' | b'\t' | b'*' | b'.') {
            self.pos += 1;
        }
    }

    fn sequence(&mut self, depth: usize) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let Some(&c) = self.s.get(self.pos) else { break };
            let atom: Vec<Letter> = match c {
                b'(' => {
                    self.pos += 1;
                    let inner = self.sequence(depth + 1)?;
                    self.skip_ws();
                    if self.s.get(self.pos) != Some(&b')') {
                        return Err(self.err("missing ')'"));
                    }
                    self.pos += 1;
                    inner
                }
                b')' if depth > 0 => break,
                b')' => return Err(self.err("unbalanced ')'")),
                b'1' => {
                    self.pos += 1;
                    Vec::new()
                }
                _ => match Letter::from_char(c as char) {
                    Some(l) => {
                        self.pos += 1;
                        vec![l]
                    }
                    None => return Err(self.err(&format!("unexpected character {:?}", c as char))),
                },
            };
            self.skip_ws();
            if self.s.get(self.pos) == Some(&b'^') {
                self.pos += 1;
                self.skip_ws();
                let k = self.integer()?;
                let base = if k < 0 { inverse_letters(&atom) } else { atom };
                for _ in 0..k.unsigned_abs() {
                    out.extend_from_slice(&base);
                }
            } else {
                out.extend(atom);
            }
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        let k: i64 = text.parse().map_err(|_| self.err("expected an integer exponent"))?;
        if k.unsigned_abs() > 10_000_000 {
            return Err(self.err("exponent too large"));
        }
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("abBa"), w("aa"));
        assert_eq!(w("aA"), Word::empty());
        assert_eq!(w("bAaBc"), w("c"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w("baB").cyclic_reduce(), (w("a"), w("b")));
        assert_eq!(w("ab").cyclic_reduce(), (w("ab"), Word::empty()));
        assert_eq!(w("Baab").cyclic_reduce(), (w("aa"), w("B")));
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(
            w("abab").primitive_root().unwrap(),
            PrimitiveRoot {
                root: w("ab"),
                exponent: 2
            }
        );
        assert_eq!(
            w("aba").primitive_root().unwrap(),
            PrimitiveRoot {
                root: w("aba"),
                exponent: 1
            }
        );
        assert_eq!(w("aaa").primitive_root().unwrap(), PrimitiveRoot { root: w("a"), exponent: 3 });
        assert_eq!(Word::empty().primitive_root(), Err(Error::EmptyWord));
    }

    #[test]
    fn deglex_examples() {
        assert_eq!(w("ab").deglex_cmp(&w("b")), Ordering::Greater);
        assert_eq!(w("ab").deglex_cmp(&w("ab")), Ordering::Equal);
        assert_eq!(w("ab").deglex_cmp(&w("ba")), Ordering::Less);
        assert_eq!(w("a").deglex_cmp(&w("A")), Ordering::Less);
        assert_eq!(w("A").deglex_cmp(&w("b")), Ordering::Less);
    }

    #[test]
    fn shifts_and_inverse() {
        let shifts = w("aab").cyclic_shifts();
        assert_eq!(shifts, vec![w("aab"), w("aba"), w("baa")]);
        assert_eq!(w("ab").inverse(), w("BA"));
        assert_eq!(Word::empty().cyclic_shifts(), vec![Word::empty()]);
    }

    #[test]
    fn power_syntax() {
        assert_eq!(w("a^5"), w("aaaaa"));
        assert_eq!(w("(ab)^3"), w("ababab"));
        assert_eq!(w("(ab)^-2"), w("BABA"));
        assert_eq!(w("aa(ab)^400aa").len(), 804);
        assert_eq!(w("((ab)^2c)^2"), w("ababcababc"));
        assert_eq!(w("1"), Word::empty());
        assert!(Word::parse("a^").is_err());
        assert!(Word::parse("(ab").is_err());
        assert!(Word::parse("a)").is_err());
        assert!(Word::parse_for("c", 2).is_err());
    }

    #[test]
    fn compressed_output_round_trips() {
        for s in ["a^-286", "aa(ab)^-193aa", "(ab)^400a", "abc", "a^900b^-3(abb)^7", "1"] {
            let word = w(s);
            assert_eq!(w(&word.to_compressed()), word, "{s}");
        }
        assert_eq!(w("a^-286").to_compressed(), "a^-286");
        assert_eq!(w("(ab)^-193").to_compressed(), "(ab)^-193");
    }

    #[test]
    fn min_rotation_identifies_classes() {
        assert_eq!(min_rotation(w("baa").letters()), w("aab").into_letters());
        assert_eq!(min_rotation(w("Ba").letters()), w("aB").into_letters());
    }
}
