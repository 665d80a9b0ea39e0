//! Reduced words in a finitely generated free group.
//!
//! Words are stored run-length encoded: a sequence of syllables
//! `x_i^k` with `k != 0` and no two adjacent syllables on the same
//! generator. Every constructor reduces, so two words are equal as group
//! elements exactly when they are equal as values.
//!
//! Conjugation follows the right-action convention `w^g = g^-1 w g`
//! throughout the crate.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lex::Cursor;

/// One run `x_generator ^ exponent`. Generators are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub generator: u32,
    pub exponent: i64,
}

impl Syllable {
    pub fn new(generator: u32, exponent: i64) -> Self {
        Syllable {
            generator,
            exponent,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// The generator `x_i`. Panics on `i == 0`.
    pub fn generator(i: u32) -> Self {
        assert!(i >= 1, "generators are numbered from 1");
        Word {
            syllables: vec![Syllable::new(i, 1)],
        }
    }

    /// Freely reduce an arbitrary sequence of `(generator, exponent)` pairs.
    pub fn reduce<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, i64)>,
    {
        let mut w = Word::identity();
        for (g, e) in raw {
            if g == 0 {
                return Err(Error::GeneratorOutOfRange {
                    generator: 0,
                    rank: 0,
                });
            }
            w.push(Syllable::new(g, e));
        }
        Ok(w)
    }

    /// As [`Word::reduce`], rejecting generators outside `1..=rank`.
    pub fn reduce_in<I>(rank: usize, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, i64)>,
    {
        let mut w = Word::identity();
        for (g, e) in raw {
            if g == 0 || g as usize > rank {
                return Err(Error::GeneratorOutOfRange { generator: g, rank });
            }
            w.push(Syllable::new(g, e));
        }
        Ok(w)
    }

    /// Product `x_{g_1} x_{g_2} ...` of single letters.
    pub fn from_generators(gens: &[u32]) -> Self {
        let mut w = Word::identity();
        for &g in gens {
            assert!(g >= 1, "generators are numbered from 1");
            w.push(Syllable::new(g, 1));
        }
        w
    }

    // Stack-based free reduction step. Keeps the syllable invariants.
    fn push(&mut self, s: Syllable) {
        if s.exponent == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some(last) if last.generator == s.generator => {
                last.exponent += s.exponent;
                if last.exponent == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push(s),
        }
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn syllable_len(&self) -> usize {
        self.syllables.len()
    }

    /// Length counted in letters, `sum |exponent|`.
    pub fn letter_len(&self) -> u64 {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs())
            .sum()
    }

    pub fn max_generator(&self) -> u32 {
        self.syllables
            .iter()
            .map(|s| s.generator)
            .max()
            .unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &s in &other.syllables {
            w.push(s);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable::new(s.generator, -s.exponent))
                .collect(),
        }
    }

    /// `self^k` for any integer `k`, built from the cyclic decomposition
    /// `self = c^-1 u c` so the cost is linear in the output.
    pub fn pow(&self, k: i64) -> Word {
        if k == 0 || self.is_identity() {
            return Word::identity();
        }
        let (core, conj) = self.cyclic_reduce();
        let base = if k < 0 { core.inverse() } else { core };
        let n = k.unsigned_abs();
        let powered = if base.syllable_len() == 1 {
            let s = base.syllables[0];
            Word {
                syllables: vec![Syllable::new(s.generator, s.exponent * n as i64)],
            }
        } else {
            let mut syllables = Vec::with_capacity(base.syllable_len() * n as usize);
            for _ in 0..n {
                syllables.extend_from_slice(&base.syllables);
            }
            Word { syllables }
        };
        powered.conjugate(&conj)
    }

    /// `g^-1 · self · g`.
    pub fn conjugate(&self, g: &Word) -> Word {
        g.inverse().concat(self).concat(g)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.syllables.first(), self.syllables.last()) {
            (Some(a), Some(b)) if self.syllables.len() >= 2 => a.generator != b.generator,
            _ => true,
        }
    }

    /// Split into a cyclically reduced core and a conjugator with
    /// `self == core.conjugate(&conjugator)`.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut core = self.syllables.clone();
        // conjugator accumulated right-to-left: self = c^-1 core c
        let mut conj = Word::identity();
        while core.len() >= 2 {
            let first = core[0];
            let last = core[core.len() - 1];
            if first.generator != last.generator {
                break;
            }
            core.pop();
            let merged = first.exponent + last.exponent;
            if merged == 0 {
                core.remove(0);
            } else {
                core[0].exponent = merged;
            }
            conj = Word {
                syllables: vec![last],
            }
            .concat(&conj);
        }
        (Word { syllables: core }, conj)
    }

    /// Rotate a word by `k` letters: `a·b -> b·a` where `a` has `k`
    /// letters. The result is freely reduced and conjugate to `self`.
    pub fn rotate_letters(&self, k: u64) -> Word {
        let total = self.letter_len();
        if total == 0 {
            return Word::identity();
        }
        let k = k % total;
        if k == 0 {
            return self.clone();
        }
        let mut head = Vec::new();
        let mut tail = Vec::new();
        let mut seen = 0u64;
        for &s in &self.syllables {
            let len = s.exponent.unsigned_abs();
            if seen >= k {
                tail.push(s);
            } else if seen + len <= k {
                head.push(s);
            } else {
                let take = (k - seen) as i64 * s.exponent.signum();
                head.push(Syllable::new(s.generator, take));
                tail.push(Syllable::new(s.generator, s.exponent - take));
            }
            seen += len;
        }
        let mut w = Word {
            syllables: Vec::new(),
        };
        for s in tail.into_iter().chain(head) {
            w.push(s);
        }
        w
    }

    /// Replace every occurrence of `x_generator` by `image`.
    pub fn substitute(&self, generator: u32, image: &Word) -> Word {
        let mut w = Word::identity();
        for &s in &self.syllables {
            if s.generator == generator {
                for &t in image.pow(s.exponent).syllables() {
                    w.push(t);
                }
            } else {
                w.push(s);
            }
        }
        w
    }

    /// Number of letters on `generator` (either sign).
    pub fn occurrences(&self, generator: u32) -> u64 {
        self.syllables
            .iter()
            .filter(|s| s.generator == generator)
            .map(|s| s.exponent.unsigned_abs())
            .sum()
    }

    /// Exponent sums per generator, `rank` entries.
    pub fn abelianize(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for s in &self.syllables {
            if let Some(slot) = v.get_mut(s.generator as usize - 1) {
                *slot += s.exponent;
            }
        }
        v
    }

    pub fn cyclic_word(&self) -> CyclicWord {
        CyclicWord::from(self)
    }

    pub fn is_conjugate(&self, other: &Word) -> bool {
        self.cyclic_word() == other.cyclic_word()
    }
}

/// `reduce(w · w')`, for expression-style code.
impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.concat(rhs)
    }
}

/// Conjugacy class representative: the lexicographically least syllable
/// rotation of the cyclically reduced core, ordering syllables by
/// `(generator, exponent)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    word: Word,
}

impl CyclicWord {
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn into_word(self) -> Word {
        self.word
    }
}

impl From<&Word> for CyclicWord {
    fn from(w: &Word) -> Self {
        let (core, _) = w.cyclic_reduce();
        let syl = core.syllables;
        let n = syl.len();
        let best = (0..n)
            .min_by(|&a, &b| {
                let ra = syl[a..].iter().chain(&syl[..a]);
                let rb = syl[b..].iter().chain(&syl[..b]);
                ra.cmp(rb)
            })
            .unwrap_or(0);
        let mut rotated = Vec::with_capacity(n);
        rotated.extend_from_slice(&syl[best..]);
        rotated.extend_from_slice(&syl[..best]);
        CyclicWord {
            word: Word { syllables: rotated },
        }
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{}", s.generator)?;
            if s.exponent != 1 {
                write!(f, "^{}", s.exponent)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// `WORD := "1" | SYL ("*" SYL)*`, `SYL := "x" INT ["^" NONZERO-INT]`.
    fn from_str(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text);
        cur.skip_ws();
        if cur.eat('1') {
            cur.skip_ws();
            if !cur.at_end() {
                return Err(cur.error("trailing input after identity `1`"));
            }
            return Ok(Word::identity());
        }
        let mut w = Word::identity();
        loop {
            cur.skip_ws();
            if !cur.eat('x') {
                return Err(cur.error("expected generator `x<index>`"));
            }
            let at = cur.pos();
            let g = cur.unsigned()?;
            if g == 0 || g > u32::MAX as u64 {
                return Err(Error::parse(at, "generator index must be at least 1"));
            }
            let mut e = 1;
            cur.skip_ws();
            if cur.eat('^') {
                cur.skip_ws();
                let at = cur.pos();
                e = cur.signed()?;
                if e == 0 {
                    return Err(Error::parse(at, "exponent 0 is not allowed"));
                }
            }
            w.push(Syllable::new(g as u32, e));
            cur.skip_ws();
            if cur.at_end() {
                break;
            }
            cur.expect('*')?;
        }
        Ok(w)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Word::reduce([(1, 1), (1, -1)]).unwrap(), Word::identity());
        assert_eq!(Word::reduce([(2, -1), (2, 1), (3, 1)]).unwrap(), w("x3"));
        let lhs = w("x2^-1").concat(&w("x2*x3").inverse());
        assert_eq!(lhs.to_string(), "x2^-1*x3^-1*x2^-1");
        assert!(Word::reduce_in(3, [(4, 1)]).is_err());
        assert!(Word::reduce([(0, 1)]).is_err());
    }

    #[test]
    fn concat_examples() {
        assert!(w("x1").concat(&w("x1^-1")).is_identity());
        assert_eq!(w("x1*x2").concat(&w("x2^-1*x3")), w("x1*x3"));
        assert_eq!(w("x1*x2*x3").concat(&w("x1*x2*x3")).syllable_len(), 6);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("x1*x2").inverse(), w("x2^-1*x1^-1"));
        assert_eq!(Word::identity().inverse(), Word::identity());
        assert_eq!(w("x3^-2*x2^-1").inverse(), w("x2*x3^2"));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(w("x1").conjugate(&Word::identity()), w("x1"));
        assert_eq!(w("x2").conjugate(&w("x2^5")), w("x2"));
        assert_eq!(w("x1").conjugate(&w("x2")), w("x2^-1*x1*x2"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, conj) = w("x1^-1*x2*x1").cyclic_reduce();
        assert_eq!((core, conj), (w("x2"), w("x1")));
        let (core, conj) = w("x1*x2").cyclic_reduce();
        assert_eq!((core, conj), (w("x1*x2"), Word::identity()));
        let (core, conj) = w("x3^-1*x1*x2*x3").cyclic_reduce();
        assert_eq!((core.clone(), conj.clone()), (w("x1*x2"), w("x3")));
        assert_eq!(core.conjugate(&conj), w("x3^-1*x1*x2*x3"));
        // partial merge of end syllables
        let orig = w("x1^2*x2*x1^3");
        let (core, conj) = orig.cyclic_reduce();
        assert!(core.is_cyclically_reduced());
        assert_eq!(core.conjugate(&conj), orig);
    }

    #[test]
    fn conjugacy_examples() {
        assert!(w("x1*x2").is_conjugate(&w("x2*x1")));
        assert!(!w("x1").is_conjugate(&w("x2")));
        assert!(w("x1^2*x2").is_conjugate(&w("x2*x1^2")));
        assert!(w("x1^2*x2").is_conjugate(&w("x1*x2*x1")));
        assert!(!w("x1^2*x2").is_conjugate(&w("x1^-2*x2")));
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(w("x1^-1*x2*x1*x2").abelianize(3), vec![0, 2, 0]);
        assert_eq!(Word::identity().abelianize(3), vec![0, 0, 0]);
        assert_eq!(w("x3^-2*x2^-1*x3^-1*x2^-1").abelianize(3), vec![0, -2, -3]);
    }

    #[test]
    fn parse_and_serialize() {
        assert_eq!(w("x1^-1*x2*x3^2").syllable_len(), 3);
        assert_eq!(w("1"), Word::identity());
        assert_eq!(w("x1*x1").to_string(), "x1^2");
        assert_eq!(w(" x1 * x2 ^-1 ").to_string(), "x1*x2^-1");
        assert!(matches!(
            "x1^0".parse::<Word>(),
            Err(Error::Parse { position: 3, .. })
        ));
        assert!("x0".parse::<Word>().is_err());
        assert!("x1*".parse::<Word>().is_err());
        assert!("y1".parse::<Word>().is_err());
    }

    #[test]
    fn powers_and_rotation() {
        let a = w("x1*x2*x1^-1");
        assert_eq!(a.pow(3), w("x1*x2^3*x1^-1"));
        assert_eq!(w("x2*x3").pow(-2), w("x3^-1*x2^-1*x3^-1*x2^-1"));
        assert_eq!(w("x1*x2^2*x3").rotate_letters(2), w("x2*x3*x1*x2"));
        assert_eq!(w("x1*x2^2*x3").rotate_letters(4), w("x1*x2^2*x3"));
        assert_eq!(
            w("x1*x2*x1").substitute(1, &w("x3^-1")),
            w("x3^-1*x2*x3^-1")
        );
    }
}
