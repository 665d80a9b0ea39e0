//! Normal forms in the free product `Z2<D> * Z3<y>` and the epimorphism
//! from the 3-strand braid group onto it:
//! `s1 -> y^2 D`, `s2 -> D y^2`, which sends the half twist `s1 s2 s1`
//! to `D` and kills the full twist.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lex::Cursor;

/// A nontrivial element of one free factor. Declaration order gives the
/// total order `D < y < y^2` used for canonical rotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FpSyllable {
    D,
    Y(u8),
}

impl FpSyllable {
    fn same_factor(self, other: FpSyllable) -> bool {
        matches!(
            (self, other),
            (FpSyllable::D, FpSyllable::D) | (FpSyllable::Y(_), FpSyllable::Y(_))
        )
    }

    /// Product of two syllables from the same factor; `None` is identity.
    fn merge(self, other: FpSyllable) -> Option<FpSyllable> {
        match (self, other) {
            (FpSyllable::D, FpSyllable::D) => None,
            (FpSyllable::Y(a), FpSyllable::Y(b)) => y_power(i64::from(a) + i64::from(b)),
            _ => unreachable!("merge across factors"),
        }
    }

    fn inverse(self) -> FpSyllable {
        match self {
            FpSyllable::D => FpSyllable::D,
            FpSyllable::Y(k) => FpSyllable::Y(3 - k),
        }
    }
}

fn y_power(k: i64) -> Option<FpSyllable> {
    match k.rem_euclid(3) {
        0 => None,
        r => Some(FpSyllable::Y(r as u8)),
    }
}

/// An unreduced letter: `D^k` or `y^k` for any integer `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FpLetter {
    D(i64),
    Y(i64),
}

impl FpLetter {
    fn syllable(self) -> Option<FpSyllable> {
        match self {
            FpLetter::D(k) if k.rem_euclid(2) == 1 => Some(FpSyllable::D),
            FpLetter::D(_) => None,
            FpLetter::Y(k) => y_power(k),
        }
    }
}

/// Alternating normal form. No two adjacent syllables share a factor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpWord {
    syllables: Vec<FpSyllable>,
}

impl FpWord {
    pub fn identity() -> Self {
        FpWord::default()
    }

    pub fn delta() -> Self {
        FpWord {
            syllables: vec![FpSyllable::D],
        }
    }

    pub fn y(k: i64) -> Self {
        FpWord::reduce([FpLetter::Y(k)])
    }

    /// Normal form of an arbitrary letter sequence (exponents taken mod 2
    /// for `D` and mod 3 for `y`).
    pub fn reduce<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = FpLetter>,
    {
        let mut w = FpWord::identity();
        for letter in raw {
            if let Some(s) = letter.syllable() {
                w.push(s);
            }
        }
        w
    }

    fn push(&mut self, s: FpSyllable) {
        match self.syllables.last().copied() {
            Some(last) if last.same_factor(s) => {
                self.syllables.pop();
                if let Some(m) = last.merge(s) {
                    self.syllables.push(m);
                }
            }
            _ => self.syllables.push(s),
        }
    }

    pub fn syllables(&self) -> &[FpSyllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn concat(&self, other: &FpWord) -> FpWord {
        let mut w = self.clone();
        for &s in &other.syllables {
            w.push(s);
        }
        w
    }

    pub fn inverse(&self) -> FpWord {
        FpWord {
            syllables: self.syllables.iter().rev().map(|s| s.inverse()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> FpWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = FpWord::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `g^-1 · self · g`.
    pub fn conjugate(&self, g: &FpWord) -> FpWord {
        g.inverse().concat(self).concat(g)
    }

    pub fn cyclic_word(&self) -> FpCyclicWord {
        FpCyclicWord::from(self)
    }

    pub fn is_conjugate(&self, other: &FpWord) -> bool {
        self.cyclic_word() == other.cyclic_word()
    }
}

/// Cyclically reduced, canonically rotated normal form: first and last
/// syllables lie in different factors (or length <= 1), and the syllable
/// sequence is the least rotation under `D < y < y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpCyclicWord {
    word: FpWord,
}

impl FpCyclicWord {
    pub fn word(&self) -> &FpWord {
        &self.word
    }
}

impl From<&FpWord> for FpCyclicWord {
    fn from(w: &FpWord) -> Self {
        let mut syl = w.syllables.clone();
        while syl.len() >= 2 && syl[0].same_factor(syl[syl.len() - 1]) {
            let last = syl.pop().unwrap();
            match last.merge(syl[0]) {
                Some(m) => syl[0] = m,
                None => {
                    syl.remove(0);
                }
            }
        }
        let n = syl.len();
        let best = (0..n)
            .min_by(|&a, &b| {
                let ra = syl[a..].iter().chain(&syl[..a]);
                let rb = syl[b..].iter().chain(&syl[..b]);
                ra.cmp(rb)
            })
            .unwrap_or(0);
        syl.rotate_left(best);
        FpCyclicWord {
            word: FpWord { syllables: syl },
        }
    }
}

impl fmt::Display for FpCyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// Which of the two torus-type bases a cyclic word is an even power of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PowerBase {
    /// `y^2 D`
    #[serde(rename = "y^2*D")]
    Y2D,
    /// `D y`
    #[serde(rename = "D*y")]
    DY,
}

impl fmt::Display for PowerBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PowerBase::Y2D => f.write_str("y^2*D"),
            PowerBase::DY => f.write_str("D*y"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvenPowerForm {
    Yes { k: u64, base: PowerBase },
    No,
}

impl EvenPowerForm {
    pub fn is_yes(&self) -> bool {
        matches!(self, EvenPowerForm::Yes { .. })
    }
}

/// `YES (D*y)^(2*3)` or `NO`.
impl fmt::Display for EvenPowerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvenPowerForm::Yes { k, base } => write!(f, "YES ({base})^(2*{k})"),
            EvenPowerForm::No => f.write_str("NO"),
        }
    }
}

/// Whether the conjugacy class of `w` is `(y^2 D)^{2k}` or `(D y)^{2k}`
/// with `k >= 1`.
pub fn even_power_form(w: &FpWord) -> EvenPowerForm {
    let c = FpCyclicWord::from(w);
    let syl = c.word.syllables();
    if syl.is_empty() || syl.len() % 4 != 0 {
        return EvenPowerForm::No;
    }
    // canonical rotation starts with D whenever D occurs
    let y = syl[1];
    let shaped = syl
        .chunks(2)
        .all(|pair| pair[0] == FpSyllable::D && pair[1] == y);
    if !shaped {
        return EvenPowerForm::No;
    }
    let base = match y {
        FpSyllable::Y(1) => PowerBase::DY,
        FpSyllable::Y(2) => PowerBase::Y2D,
        _ => return EvenPowerForm::No,
    };
    EvenPowerForm::Yes {
        k: (syl.len() / 4) as u64,
        base,
    }
}

/// Three-part split `prefix · middle · suffix` of a normal form with
/// `prefix in {D y, y^2 D}`, `suffix in {y D, D y^2}` and a nonempty middle.
pub fn three_part_split(w: &FpWord) -> Option<(FpWord, FpWord, FpWord)> {
    use FpSyllable::{D, Y};
    let s = w.syllables();
    if s.len() < 5 {
        return None;
    }
    let head = [s[0], s[1]];
    let tail = [s[s.len() - 2], s[s.len() - 1]];
    let head_ok = head == [D, Y(1)] || head == [Y(2), D];
    let tail_ok = tail == [Y(1), D] || tail == [D, Y(2)];
    if !(head_ok && tail_ok) {
        return None;
    }
    let part = |r: &[FpSyllable]| FpWord {
        syllables: r.to_vec(),
    };
    Some((
        part(&s[..2]),
        part(&s[2..s.len() - 2]),
        part(&s[s.len() - 2..]),
    ))
}

/// A 3-strand braid word: signed generator indices, `+-1` for `s1^{+-1}`
/// and `+-2` for `s2^{+-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BraidWord {
    letters: Vec<i8>,
}

impl BraidWord {
    pub fn new(letters: Vec<i8>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&l| !matches!(l.abs(), 1 | 2)) {
            return Err(Error::Precondition(format!(
                "braid letter {bad} is not s1 or s2"
            )));
        }
        Ok(BraidWord { letters })
    }

    pub fn letters(&self) -> &[i8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn extend(&mut self, other: &BraidWord) {
        self.letters.extend_from_slice(&other.letters);
    }

    /// `letter^k` repeated literally.
    pub fn power_of(letter: i8, k: i64) -> BraidWord {
        let l = if k < 0 { -letter } else { letter };
        BraidWord {
            letters: vec![l; k.unsigned_abs() as usize],
        }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, &l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "s{}", l.abs())?;
            if l < 0 {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = Error;

    /// `"1" | SYL ("*" SYL)*` with `SYL := ("s1" | "s2") ["^" INT]`.
    /// Powers expand literally.
    fn from_str(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text);
        cur.skip_ws();
        if cur.eat('1') {
            cur.skip_ws();
            return if cur.at_end() {
                Ok(BraidWord::default())
            } else {
                Err(cur.error("trailing input after identity `1`"))
            };
        }
        let mut letters = Vec::new();
        loop {
            cur.skip_ws();
            if !cur.eat('s') {
                return Err(cur.error("expected `s1` or `s2`"));
            }
            let at = cur.pos();
            let g = cur.unsigned()?;
            if !(1..=2).contains(&g) {
                return Err(Error::parse(at, "3-strand braids only have s1 and s2"));
            }
            let mut e = 1;
            cur.skip_ws();
            if cur.eat('^') {
                cur.skip_ws();
                e = cur.signed()?;
            }
            letters.extend(BraidWord::power_of(g as i8, e).letters);
            cur.skip_ws();
            if cur.at_end() {
                break;
            }
            cur.expect('*')?;
        }
        Ok(BraidWord { letters })
    }
}

/// Image of a braid word under `s1 -> y^2 D`, `s2 -> D y^2`.
pub fn rho(word: &BraidWord) -> FpWord {
    let mut out = FpWord::identity();
    for &l in word.letters() {
        let image = match l {
            1 => [FpLetter::Y(2), FpLetter::D(1)],
            2 => [FpLetter::D(1), FpLetter::Y(2)],
            -1 => [FpLetter::D(1), FpLetter::Y(1)],
            -2 => [FpLetter::Y(1), FpLetter::D(1)],
            _ => unreachable!("validated braid letter"),
        };
        for letter in image {
            if let Some(s) = letter.syllable() {
                out.push(s);
            }
        }
    }
    out
}

impl fmt::Display for FpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match s {
                FpSyllable::D => f.write_str("D")?,
                FpSyllable::Y(1) => f.write_str("y")?,
                FpSyllable::Y(_) => f.write_str("y^2")?,
            }
        }
        Ok(())
    }
}

impl FromStr for FpWord {
    type Err = Error;

    /// `"1" | SYL ("*" SYL)*`, `SYL := "D" | "y" | "y^2"`. Input need not
    /// be in normal form; the result is.
    fn from_str(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text);
        cur.skip_ws();
        if cur.eat('1') {
            cur.skip_ws();
            return if cur.at_end() {
                Ok(FpWord::identity())
            } else {
                Err(cur.error("trailing input after identity `1`"))
            };
        }
        let mut letters = Vec::new();
        loop {
            cur.skip_ws();
            if cur.eat('D') {
                letters.push(FpLetter::D(1));
            } else if cur.eat('y') {
                if cur.eat('^') {
                    let at = cur.pos();
                    let k = cur.signed()?;
                    if k != 2 {
                        return Err(Error::parse(at, "only y^2 is allowed"));
                    }
                    letters.push(FpLetter::Y(2));
                } else {
                    letters.push(FpLetter::Y(1));
                }
            } else {
                return Err(cur.error("expected `D`, `y` or `y^2`"));
            }
            cur.skip_ws();
            if cur.at_end() {
                break;
            }
            cur.expect('*')?;
        }
        Ok(FpWord::reduce(letters))
    }
}

impl Serialize for FpWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FpWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
