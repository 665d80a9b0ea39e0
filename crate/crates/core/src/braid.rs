//! Pure 3-braids `prod_i s1^{2e_i} s2^{2f_i} · (s1 s2 s1)^{2e}` and the
//! hyperbolicity decision for their closures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::free_product::{even_power_form, rho, BraidWord, EvenPowerForm, FpWord};
use crate::lex::Cursor;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PureBraid {
    /// `(e_i, f_i)` pairs: `s1^{2 e_i} s2^{2 f_i}`.
    pub blocks: Vec<(i64, i64)>,
    /// Full-twist exponent `e` in `(s1 s2 s1)^{2e}`.
    pub twist: i64,
}

impl PureBraid {
    pub fn new(blocks: Vec<(i64, i64)>, twist: i64) -> Self {
        PureBraid { blocks, twist }
    }

    /// Merge neighbouring blocks across zero exponents and drop empty
    /// blocks. The expanded braid word changes only by free cancellation.
    pub fn normalize(&self) -> PureBraid {
        let runs = self.runs();
        PureBraid {
            blocks: blocks_from_runs(&merge_runs(runs)),
            twist: self.twist,
        }
    }

    /// Like [`PureBraid::normalize`] but also merges around the closure
    /// point. Rotating the block list conjugates the braid (the full twist
    /// is central), so the closure is unchanged. Afterwards either there
    /// is at most one block or every block has both exponents nonzero.
    pub fn cyclic_normalize(&self) -> PureBraid {
        let mut runs = merge_runs(self.runs());
        while runs.len() >= 2 && runs[0].0 == runs[runs.len() - 1].0 {
            let (_, e) = runs.pop().unwrap();
            runs[0].1 += e;
            if runs[0].1 == 0 {
                runs.remove(0);
            }
        }
        // start on an s1 run when possible
        if runs.len() >= 2 && runs[0].0 == 2 {
            runs.rotate_left(1);
        }
        PureBraid {
            blocks: blocks_from_runs(&runs),
            twist: self.twist,
        }
    }

    /// Alternating `(generator, half-exponent)` runs, zero runs dropped.
    fn runs(&self) -> Vec<(u8, i64)> {
        self.blocks
            .iter()
            .flat_map(|&(e, f)| [(1u8, e), (2u8, f)])
            .filter(|r| r.1 != 0)
            .collect()
    }

    /// Literal expansion with `Delta = s1 s2 s1`.
    pub fn to_braid_word(&self) -> BraidWord {
        let mut w = BraidWord::default();
        for &(e, f) in &self.blocks {
            w.extend(&BraidWord::power_of(1, 2 * e));
            w.extend(&BraidWord::power_of(2, 2 * f));
        }
        let delta: Vec<i8> = if self.twist >= 0 {
            vec![1, 2, 1]
        } else {
            vec![-1, -2, -1]
        };
        for _ in 0..2 * self.twist.unsigned_abs() {
            w.extend(&BraidWord::new(delta.clone()).expect("valid letters"));
        }
        w
    }

    /// Blockwise image under `rho`, skipping the full twist (it maps to
    /// the identity).
    pub fn rho_blocks(&self) -> FpWord {
        let y2d: FpWord = "y^2*D".parse().expect("literal");
        let dy2: FpWord = "D*y^2".parse().expect("literal");
        self.blocks.iter().fold(FpWord::identity(), |acc, &(e, f)| {
            acc.concat(&y2d.pow(2 * e)).concat(&dy2.pow(2 * f))
        })
    }
}

fn merge_runs(runs: Vec<(u8, i64)>) -> Vec<(u8, i64)> {
    let mut out: Vec<(u8, i64)> = Vec::with_capacity(runs.len());
    for (g, e) in runs {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.0 == g => {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    out
}

fn blocks_from_runs(runs: &[(u8, i64)]) -> Vec<(i64, i64)> {
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < runs.len() {
        let (g, e) = runs[i];
        if g == 1 {
            match runs.get(i + 1) {
                Some(&(2, f)) => {
                    blocks.push((e, f));
                    i += 2;
                }
                _ => {
                    blocks.push((e, 0));
                    i += 1;
                }
            }
        } else {
            blocks.push((0, e));
            i += 1;
        }
    }
    blocks
}

impl fmt::Display for PureBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|(e, g)| format!("{e},{g}"))
            .collect();
        write!(f, "{} --twist {}", blocks.join(";"), self.twist)
    }
}

/// Parse the block list `"e1,f1;e2,f2;..."` (empty string for no blocks).
pub fn parse_blocks(text: &str) -> Result<Vec<(i64, i64)>> {
    let mut cur = Cursor::new(text);
    let mut blocks = Vec::new();
    cur.skip_ws();
    if cur.at_end() {
        return Ok(blocks);
    }
    loop {
        cur.skip_ws();
        let e = cur.signed()?;
        cur.skip_ws();
        cur.expect(',')?;
        cur.skip_ws();
        let f = cur.signed()?;
        blocks.push((e, f));
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        cur.expect(';')?;
    }
    Ok(blocks)
}

impl FromStr for PureBraid {
    type Err = Error;

    /// `"e1,f1;e2,f2 --twist e"`; the twist part is optional.
    fn from_str(text: &str) -> Result<Self> {
        let (blocks, twist) = match text.find("--twist") {
            Some(i) => {
                let t = text[i + "--twist".len()..].trim();
                let twist = t
                    .parse()
                    .map_err(|_| Error::parse(i, format!("bad twist exponent `{t}`")))?;
                (&text[..i], twist)
            }
            None => (text, 0),
        };
        Ok(PureBraid {
            blocks: parse_blocks(blocks)?,
            twist,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BraidTag {
    Hyperbolic,
    EssentialTorus,
    Splittable,
    ConnectedSum,
}

impl fmt::Display for BraidTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BraidTag::Hyperbolic => "Hyperbolic",
            BraidTag::EssentialTorus => "EssentialTorus",
            BraidTag::Splittable => "Splittable",
            BraidTag::ConnectedSum => "ConnectedSum",
        };
        f.write_str(s)
    }
}

/// Decision rule codes. The first entry of [`BraidClass::clauses`] is the
/// one that decided the tag; later entries also matched.
pub mod clause {
    /// Small case with a vanishing block exponent.
    pub const SMALL_ZERO_EXPONENT: &str = "Thm4.2-i";
    /// Small case with `e1 = f1 = +-1`.
    pub const SMALL_UNIT_BLOCK: &str = "Thm4.2-ii";
    /// Small case, both exponents nonzero, no full twist.
    pub const SMALL_CONNECTED_SUM: &str = "Thm4.2-iii";
    /// No blocks survive and no full twist.
    pub const SPLIT_EMPTY: &str = "Thm4.6-ii";
    /// Every block is `(1, 1)`.
    pub const ALL_PLUS_ONE: &str = "Thm4.6-iii";
    /// Every block is `(-1, -1)`.
    pub const ALL_MINUS_ONE: &str = "Thm4.6-iv";
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidClass {
    pub tag: BraidTag,
    pub clauses: Vec<String>,
    /// The braid after cyclic normalization.
    pub normalized: PureBraid,
}

impl BraidClass {
    pub fn clause(&self) -> Option<&str> {
        self.clauses.first().map(String::as_str)
    }
}

impl fmt::Display for BraidClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.clause() {
            Some(c) => write!(f, "{} {}", self.tag, c),
            None => write!(f, "{}", self.tag),
        }
    }
}

/// Classify the closure of `b` as hyperbolic or name the obstruction.
///
/// Rules, first match wins, on the cyclically normalized braid with `n`
/// blocks:
/// 1. `n = 0`, `e = 0`: splittable.
/// 2. `n <= 1` with a zero block exponent: essential torus (splittable
///    when `e = 0`).
/// 3. every block `(1,1)` or every block `(-1,-1)`: essential torus.
/// 4. `n = 1`, `e = 0`: connected sum.
/// 5. otherwise hyperbolic.
pub fn classify(b: &PureBraid) -> BraidClass {
    use clause::*;
    let normalized = b.cyclic_normalize();
    let n = normalized.blocks.len();
    let e = normalized.twist;
    let mut hits: Vec<(BraidTag, &str)> = Vec::new();

    if n == 0 && e == 0 {
        hits.push((BraidTag::Splittable, SPLIT_EMPTY));
    }
    let zero_exponent =
        n == 0 || (n == 1 && (normalized.blocks[0].0 == 0 || normalized.blocks[0].1 == 0));
    if zero_exponent {
        let tag = if e == 0 {
            BraidTag::Splittable
        } else {
            BraidTag::EssentialTorus
        };
        hits.push((tag, SMALL_ZERO_EXPONENT));
    }
    if n >= 1 {
        if normalized.blocks.iter().all(|&blk| blk == (1, 1)) {
            let c = if n == 1 {
                SMALL_UNIT_BLOCK
            } else {
                ALL_PLUS_ONE
            };
            hits.push((BraidTag::EssentialTorus, c));
        } else if normalized.blocks.iter().all(|&blk| blk == (-1, -1)) {
            let c = if n == 1 {
                SMALL_UNIT_BLOCK
            } else {
                ALL_MINUS_ONE
            };
            hits.push((BraidTag::EssentialTorus, c));
        }
    }
    if n == 1 && !zero_exponent && e == 0 {
        hits.push((BraidTag::ConnectedSum, SMALL_CONNECTED_SUM));
    }

    let tag = hits.first().map(|h| h.0).unwrap_or(BraidTag::Hyperbolic);
    BraidClass {
        tag,
        clauses: hits.into_iter().map(|h| h.1.to_string()).collect(),
        normalized,
    }
}

/// Whether the `rho`-image of the block product is conjugate to an even
/// power of `y^2 D` or `D y`. Requires every block exponent nonzero.
pub fn rho_torus_witness(b: &PureBraid) -> Result<EvenPowerForm> {
    if let Some(i) = b.blocks.iter().position(|&(e, f)| e == 0 || f == 0) {
        return Err(Error::Precondition(format!(
            "block {} has a zero exponent; normalize before asking for a witness",
            i + 1
        )));
    }
    Ok(even_power_form(&b.rho_blocks()))
}

/// `rho` applied to the literal braid word, full twist included.
pub fn rho_of_braid(b: &PureBraid) -> FpWord {
    rho(&b.to_braid_word())
}
