//! Triviality certificates for finite presentations: abelian invariants
//! through the Smith normal form, then a bounded deterministic sequence
//! of Tietze moves.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::artin::Presentation;
use crate::error::{Error, Result};
use crate::word::Word;

pub const DEFAULT_BUDGET: u64 = 100_000;

/// Relator lengths past this are abandoned as `Unknown`.
const LENGTH_CAP: usize = 1 << 20;

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Diagonal of the Smith normal form of an integer matrix, nonnegative
/// and in divisibility order, zeros last. Length is `min(rows, cols)`.
pub fn smith_diagonal(matrix: &[Vec<i64>]) -> Vec<i64> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the remaining block becomes the pivot
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                diag.resize(rows.min(cols), 0);
                return finish(diag);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    let (top, rest) = a.split_at_mut(i);
                    for (x, y) in rest[0][t..cols].iter_mut().zip(&top[t][t..cols]) {
                        *x -= q * y;
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                diag.push(p.abs());
                break;
            }
        }
    }
    finish(diag)
}

// Turn a diagonal into the divisibility chain via gcd/lcm swaps.
fn finish(mut d: Vec<i128>) -> Vec<i64> {
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (d[i], d[j]);
            let g = gcd(a, b);
            if g == 0 {
                continue;
            }
            d[i] = g;
            d[j] = a / g * b;
        }
    }
    d.iter_mut().for_each(|v| *v = v.abs());
    let (mut nonzero, zeros): (Vec<i128>, Vec<i128>) = d.into_iter().partition(|&v| v != 0);
    nonzero.sort_unstable();
    nonzero.extend(zeros);
    nonzero
        .into_iter()
        .map(|v| i64::try_from(v).expect("divisor fits in i64"))
        .collect()
}

/// Elementary divisors of `H_1`, one per generator; `0` marks a free
/// factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub divisors: Vec<i64>,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.divisors.iter().all(|&d| d == 1)
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.divisors.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn abelian_invariants(pres: &Presentation) -> AbelianInvariants {
    let mut divisors = smith_diagonal(&pres.relation_matrix());
    divisors.resize(pres.rank, 0);
    AbelianInvariants { divisors }
}

/// One Tietze move. Relator indices refer to the presentation as it
/// stands when the move is applied; generators keep their input labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Cyclically reduce every relator.
    CyclicReduce,
    /// Delete an empty relator.
    DropEmpty { relator: usize },
    /// The relator is `x_g^{+-1}`: delete it and `x_g`, setting `x_g = 1`.
    KillGenerator { relator: usize, generator: u32 },
    /// `x_g` occurs once in the relator: solve for it, substitute, and
    /// delete both.
    Eliminate { relator: usize, generator: u32 },
    /// Replace `target` by the cyclic reduction of
    /// `rot(target, target_rotation) * rot(source^{+-1}, source_rotation)`,
    /// where `rot(w, k)` moves the first `k` letters to the end.
    Multiply {
        target: usize,
        source: usize,
        inverse: bool,
        target_rotation: usize,
        source_rotation: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrivialityTag {
    Trivial,
    NotTrivial,
    Unknown,
}

impl fmt::Display for TrivialityTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrivialityTag::Trivial => "Trivial",
            TrivialityTag::NotTrivial => "NotTrivial",
            TrivialityTag::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrivialityVerdict {
    pub tag: TrivialityTag,
    pub divisors: Vec<i64>,
    /// Certificate for `Trivial`; the moves tried so far otherwise.
    pub moves: Vec<Move>,
    pub budget_spent: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// Signed letters: `g` is `x_g`, `-g` is `x_g^-1`.
type Letters = Vec<i32>;

fn letters(w: &Word) -> Letters {
    let mut out = Vec::with_capacity(w.letter_len() as usize);
    for s in w.syllables() {
        let l = if s.exponent > 0 {
            s.generator as i32
        } else {
            -(s.generator as i32)
        };
        out.extend(std::iter::repeat_n(l, s.exponent.unsigned_abs() as usize));
    }
    out
}

fn to_word(l: &[i32]) -> Word {
    Word::reduce(l.iter().map(|&c| (c.unsigned_abs(), c.signum() as i64)))
        .expect("generators are positive")
}

fn free_reduce(it: impl IntoIterator<Item = i32>) -> Letters {
    let mut out: Letters = Vec::new();
    for c in it {
        if out.last() == Some(&-c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

fn cyclic_reduce(mut w: Letters) -> Letters {
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == -w[hi - 1] {
        lo += 1;
        hi -= 1;
    }
    w.truncate(hi);
    w.drain(..lo);
    w
}

fn is_cyclically_reduced(w: &[i32]) -> bool {
    w.windows(2).all(|p| p[0] != -p[1]) && !(w.len() >= 2 && w[0] == -w[w.len() - 1])
}

fn invert(w: &[i32]) -> Letters {
    w.iter().rev().map(|&c| -c).collect()
}

fn rotate(w: &[i32], k: usize) -> impl Iterator<Item = i32> + '_ {
    let k = if w.is_empty() { 0 } else { k % w.len() };
    w[k..].iter().chain(&w[..k]).copied()
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct State {
    generators: Vec<u32>,
    relators: Vec<Letters>,
}

impl State {
    fn new(pres: &Presentation) -> Self {
        State {
            generators: (1..=pres.rank as u32).collect(),
            relators: pres.relators.iter().map(letters).collect(),
        }
    }

    fn is_empty(&self) -> bool {
        self.generators.is_empty() && self.relators.is_empty()
    }

    fn total_len(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    fn substitute(&mut self, generator: u32, image: &[i32]) {
        let inv = invert(image);
        let g = generator as i32;
        for r in &mut self.relators {
            if r.iter().any(|c| c.abs() == g) {
                let expanded = r.iter().flat_map(|&c| match c {
                    c if c == g => image.to_vec(),
                    c if c == -g => inv.clone(),
                    c => vec![c],
                });
                *r = cyclic_reduce(free_reduce(expanded));
            }
        }
        self.generators.retain(|&x| x != generator);
    }

    /// Solution for `x_g` from relator `r`, which must contain it once.
    fn solve(&self, r: usize, generator: u32) -> Option<Letters> {
        let rel = &self.relators[r];
        let g = generator as i32;
        let mut hits = rel.iter().enumerate().filter(|(_, c)| c.abs() == g);
        let (pos, &sign) = hits.next()?;
        if hits.next().is_some() {
            return None;
        }
        // rot(r) = w x^s with x^s last, so x = w^{-s}
        let w: Letters = rotate(rel, pos + 1).take(rel.len() - 1).collect();
        Some(if sign > 0 { invert(&w) } else { w })
    }

    fn multiply(&self, m: &Move) -> Option<Letters> {
        let Move::Multiply {
            target,
            source,
            inverse,
            target_rotation,
            source_rotation,
        } = *m
        else {
            return None;
        };
        let t = self.relators.get(target)?;
        let s = self.relators.get(source)?;
        let s = if inverse { invert(s) } else { s.clone() };
        Some(cyclic_reduce(free_reduce(
            rotate(t, target_rotation).chain(rotate(&s, source_rotation)),
        )))
    }

    fn apply(&mut self, m: &Move) -> Result<()> {
        let bad = |why: &str| Err(Error::Precondition(format!("{m:?}: {why}")));
        match *m {
            Move::CyclicReduce => {
                for r in &mut self.relators {
                    *r = cyclic_reduce(free_reduce(r.iter().copied()));
                }
            }
            Move::DropEmpty { relator } => {
                if self.relators.get(relator).is_none_or(|r| !r.is_empty()) {
                    return bad("relator is not empty");
                }
                self.relators.remove(relator);
            }
            Move::KillGenerator { relator, generator } => {
                let g = generator as i32;
                match self.relators.get(relator) {
                    Some(r) if r.len() == 1 && r[0].abs() == g => {}
                    _ => return bad("relator is not a single letter on the generator"),
                }
                self.relators.remove(relator);
                self.substitute(generator, &[]);
            }
            Move::Eliminate { relator, generator } => {
                if relator >= self.relators.len() {
                    return bad("no such relator");
                }
                let Some(image) = self.solve(relator, generator) else {
                    return bad("generator does not occur exactly once");
                };
                self.relators.remove(relator);
                self.substitute(generator, &image);
            }
            Move::Multiply { target, source, .. } => {
                if target == source {
                    return bad("target equals source");
                }
                let Some(new) = self.multiply(m) else {
                    return bad("no such relator");
                };
                self.relators[target] = new;
            }
        }
        Ok(())
    }

    /// The next move of the deterministic strategy, if any.
    fn next_move(&self) -> Option<Move> {
        if !self.relators.iter().all(|r| is_cyclically_reduced(r)) {
            return Some(Move::CyclicReduce);
        }
        if let Some(relator) = self.relators.iter().position(Vec::is_empty) {
            return Some(Move::DropEmpty { relator });
        }
        if let Some(relator) = self.relators.iter().position(|r| r.len() == 1) {
            return Some(Move::KillGenerator {
                relator,
                generator: self.relators[relator][0].unsigned_abs(),
            });
        }
        if let Some(m) = self.best_elimination() {
            return Some(m);
        }
        self.best_multiplication()
    }

    /// Elimination giving the shortest total length; ties go to the
    /// lowest `(relator, generator)`.
    fn best_elimination(&self) -> Option<Move> {
        let mut best: Option<(usize, Move)> = None;
        for (r, rel) in self.relators.iter().enumerate() {
            for &g in &self.generators {
                if rel.iter().filter(|c| c.unsigned_abs() == g).count() != 1 {
                    continue;
                }
                let m = Move::Eliminate {
                    relator: r,
                    generator: g,
                };
                let mut next = self.clone();
                next.apply(&m).expect("elimination precondition checked");
                let len = next.total_len();
                if best.as_ref().is_none_or(|(l, _)| len < *l) {
                    best = Some((len, m));
                }
            }
        }
        best.map(|(_, m)| m)
    }

    /// Length-reducing multiplication with the shortest result; ties go
    /// to the lexicographically least move. Only rotations that cancel at
    /// the junction are tried.
    fn best_multiplication(&self) -> Option<Move> {
        let mut best: Option<(usize, Move)> = None;
        for (target, t) in self.relators.iter().enumerate() {
            for (source, s) in self.relators.iter().enumerate() {
                if source == target {
                    continue;
                }
                for inverse in [false, true] {
                    let s = if inverse { invert(s) } else { s.clone() };
                    for target_rotation in 0..t.len() {
                        let last = t[(target_rotation + t.len() - 1) % t.len()];
                        for (source_rotation, _) in
                            s.iter().enumerate().filter(|(_, &c)| c == -last)
                        {
                            let m = Move::Multiply {
                                target,
                                source,
                                inverse,
                                target_rotation,
                                source_rotation,
                            };
                            let len = cyclic_reduce(free_reduce(
                                rotate(t, target_rotation).chain(rotate(&s, source_rotation)),
                            ))
                            .len();
                            if len < t.len() && best.as_ref().is_none_or(|(l, _)| len < *l) {
                                best = Some((len, m));
                            }
                        }
                    }
                }
            }
        }
        best.map(|(_, m)| m)
    }
}

/// Run the deterministic simplifier for at most `budget` moves.
pub fn simplify(pres: &Presentation, budget: u64) -> TrivialityVerdict {
    let inv = abelian_invariants(pres);
    let verdict = |tag, moves, spent, note: Option<&str>| TrivialityVerdict {
        tag,
        divisors: inv.divisors.clone(),
        moves,
        budget_spent: spent,
        note: note.map(str::to_string),
    };
    if !inv.is_trivial() {
        return verdict(
            TrivialityTag::NotTrivial,
            Vec::new(),
            0,
            Some("nontrivial abelian invariants"),
        );
    }
    let mut state = State::new(pres);
    let mut moves = Vec::new();
    loop {
        if state.is_empty() {
            let n = moves.len() as u64;
            return verdict(TrivialityTag::Trivial, moves, n, None);
        }
        if moves.len() as u64 >= budget {
            return verdict(
                TrivialityTag::Unknown,
                moves,
                budget,
                Some("budget exhausted"),
            );
        }
        if state.total_len() > LENGTH_CAP {
            let n = moves.len() as u64;
            return verdict(TrivialityTag::Unknown, moves, n, Some("relators too long"));
        }
        let Some(m) = state.next_move() else {
            let n = moves.len() as u64;
            let note = if state.relators.is_empty() {
                "free group remains"
            } else {
                "no applicable move"
            };
            return verdict(TrivialityTag::Unknown, moves, n, Some(note));
        };
        state
            .apply(&m)
            .expect("strategy only proposes applicable moves");
        moves.push(m);
    }
}

/// Apply `moves` to `pres` from scratch and return the remaining
/// generators and relators.
pub fn replay(pres: &Presentation, moves: &[Move]) -> Result<(Vec<u32>, Vec<Word>)> {
    let mut state = State::new(pres);
    for m in moves {
        state.apply(m)?;
    }
    Ok((
        state.generators,
        state.relators.iter().map(|r| to_word(r)).collect(),
    ))
}

/// Whether `moves` takes `pres` to the empty presentation.
pub fn replay_is_trivial(pres: &Presentation, moves: &[Move]) -> bool {
    matches!(replay(pres, moves), Ok((g, r)) if g.is_empty() && r.is_empty())
}
