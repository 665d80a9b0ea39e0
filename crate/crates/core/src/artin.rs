//! Artin presentations from surgery data and hexatangle fillings, and the
//! two product identities that make a presentation Artin.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hexatangle::HexFilling;
use crate::word::Word;

/// Where a presentation came from, for report traceability.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filling: Option<HexFilling>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<SurgeryParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub rank: usize,
    pub relators: Vec<Word>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl Presentation {
    /// Checks that every relator lives in `F_rank`.
    pub fn new(rank: usize, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            let g = r.max_generator();
            if g as usize > rank {
                return Err(Error::GeneratorOutOfRange { generator: g, rank });
            }
        }
        Ok(Presentation {
            rank,
            relators,
            provenance: Provenance::default(),
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Relators joined by `", "`, the form used in reports.
    pub fn relators_string(&self) -> String {
        self.relators
            .iter()
            .map(Word::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Relator matrix: row `i` is the exponent-sum vector of relator `i`.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.abelianize(self.rank))
            .collect()
    }
}

/// `rank N` header followed by one relator per line. `#` starts a comment.
impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rank {}", self.rank)?;
        for r in &self.relators {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing `rank N` header"))?;
        let rank = header
            .strip_prefix("rank")
            .map(str::trim)
            .and_then(|n| n.parse::<usize>().ok())
            .ok_or_else(|| Error::parse(0, format!("bad header `{header}`, expected `rank N`")))?;
        let relators = lines.map(str::parse).collect::<Result<Vec<Word>>>()?;
        Presentation::new(rank, relators)
    }
}

/// Framings `(m, n, p)` on the closure of
/// `Delta^{2e} (s1^2)^{e1} (s2^2)^{f1}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurgeryParams {
    pub m: i64,
    pub n: i64,
    pub p: i64,
    pub e: i64,
    pub e1: i64,
    pub f1: i64,
}

impl SurgeryParams {
    pub fn new(m: i64, n: i64, p: i64, e: i64, e1: i64, f1: i64) -> Self {
        SurgeryParams { m, n, p, e, e1, f1 }
    }
}

impl fmt::Display for SurgeryParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let SurgeryParams { m, n, p, e, e1, f1 } = self;
        write!(f, "{m},{n},{p},{e},{e1},{f1}")
    }
}

impl FromStr for SurgeryParams {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<i64> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse()
                    .map_err(|_| Error::parse(0, format!("bad integer `{}`", t.trim())))
            })
            .collect::<Result<_>>()?;
        match v[..] {
            [m, n, p, e, e1, f1] => Ok(SurgeryParams { m, n, p, e, e1, f1 }),
            _ => Err(Error::parse(
                0,
                format!("expected m,n,p,e,e1,f1, got {} values", v.len()),
            )),
        }
    }
}

impl From<&crate::hexatangle::SurgerySpec> for SurgeryParams {
    fn from(s: &crate::hexatangle::SurgerySpec) -> Self {
        let (e1, f1) = s.braid.blocks.first().copied().unwrap_or((0, 0));
        let (m, n, p) = s.framings;
        SurgeryParams {
            m,
            n,
            p,
            e: s.braid.twist,
            e1,
            f1,
        }
    }
}

fn x(i: u32) -> Word {
    Word::generator(i)
}

fn x1x2x3() -> Word {
    Word::from_generators(&[1, 2, 3])
}

/// `x1 (x2x3)^{-k} x2 (x2x3)^{k}`.
fn block(k: i64) -> Word {
    let x23 = Word::from_generators(&[2, 3]);
    let mut w = x(1);
    w = &w * &x23.pow(-k);
    w = &w * &x(2);
    &w * &x23.pow(k)
}

fn product(parts: &[Word]) -> Word {
    parts.iter().fold(Word::identity(), |acc, w| &acc * w)
}

/// Artin presentation of surgery on a single-block closed pure 3-braid.
pub fn gen_from_params(s: &SurgeryParams) -> Presentation {
    let SurgeryParams { m, n, p, e, e1, f1 } = *s;
    let x23 = Word::from_generators(&[2, 3]);
    let tw = x1x2x3().pow(e);
    let blk = block(f1).pow(e1);
    let r1 = product(&[x(1).pow(m - e - e1), blk.clone(), tw.clone()]);
    let r2 = product(&[x(2).pow(n - e - e1 - f1), x23.pow(f1), blk, tw.clone()]);
    let r3 = product(&[x(3).pow(p - e - f1), x23.pow(f1), tw]);
    Presentation {
        rank: 3,
        relators: vec![r1, r2, r3],
        provenance: Provenance {
            params: Some(*s),
            ..Provenance::default()
        },
    }
}

/// Artin presentation of the double branched cover of a filled hexatangle.
pub fn gen_from_hex(h: &HexFilling) -> Presentation {
    let [alpha, beta, gamma, delta, epsilon, eta] = h.0;
    let x23 = Word::from_generators(&[2, 3]);
    let tw = x1x2x3().pow(-eta);
    let blk = block(-gamma).pow(-delta);
    let r1 = product(&[x(1).pow(-alpha), blk.clone(), tw.clone()]);
    let r2 = product(&[x(2).pow(-beta), x23.pow(-gamma), blk, tw.clone()]);
    let r3 = product(&[x(3).pow(-epsilon), x23.pow(-gamma), tw]);
    Presentation {
        rank: 3,
        relators: vec![r1, r2, r3],
        provenance: Provenance {
            filling: Some(*h),
            ..Provenance::default()
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtinCheck {
    /// `prod r_i^-1 x_i r_i = x_1 ... x_n`.
    pub w: bool,
    /// `prod r_i x_i r_i^-1 = x_1 ... x_n`.
    pub f: bool,
}

impl ArtinCheck {
    pub fn any(&self) -> bool {
        self.w || self.f
    }
}

/// Evaluate both Artin identities in the free group.
pub fn verify_artin(pres: &Presentation) -> Result<ArtinCheck> {
    if pres.relators.len() != pres.rank {
        return Err(Error::RankMismatch {
            expected: pres.rank,
            found: pres.relators.len(),
        });
    }
    let target = Word::from_generators(&(1..=pres.rank as u32).collect::<Vec<_>>());
    let mut w = Word::identity();
    let mut f = Word::identity();
    for (i, r) in pres.relators.iter().enumerate() {
        let xi = x(i as u32 + 1);
        w = &w * &xi.conjugate(r);
        f = &f * &xi.conjugate(&r.inverse());
    }
    Ok(ArtinCheck {
        w: w == target,
        f: f == target,
    })
}

/// Rat-group presentation: the last relator dropped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatGroup {
    pub presentation: Presentation,
    /// Why the input was not certified, if it wasn't.
    pub warnings: Vec<String>,
}

/// Drop the final relator. `trivial` is the caller's triviality
/// certificate; missing certification is a warning, not an error.
pub fn rat_group(pres: &Presentation, trivial: bool) -> RatGroup {
    let mut warnings = Vec::new();
    match verify_artin(pres) {
        Ok(c) if c.any() => {}
        Ok(_) => warnings.push("neither Artin identity holds".to_string()),
        Err(e) => warnings.push(e.to_string()),
    }
    if !trivial {
        warnings.push("presentation not certified trivial".to_string());
    }
    let mut relators = pres.relators.clone();
    relators.pop();
    let mut provenance = pres.provenance.clone();
    provenance.notes.push(format!(
        "rat-group: dropped relator r{}",
        pres.relators.len()
    ));
    RatGroup {
        presentation: Presentation {
            rank: pres.rank,
            relators,
            provenance,
        },
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| w.parse().unwrap()).collect()
    }

    #[test]
    fn params_examples() {
        let p = gen_from_params(&SurgeryParams::new(3, -2, 5, 0, 0, 0));
        assert_eq!(p.relators, words(&["x1^3", "x2^-2", "x3^5"]));
        let p = gen_from_params(&SurgeryParams::new(1, 1, 1, 1, 0, 0));
        assert_eq!(p.relators, words(&["x1*x2*x3"; 3]));
        let p = gen_from_params(&SurgeryParams::new(1, 1, 0, 0, 0, 1));
        assert_eq!(p.relators, words(&["x1", "x2*x3", "x3^-1*x2*x3"]));
        let c = verify_artin(&p).unwrap();
        assert!(c.w && !c.f);
    }

    #[test]
    fn hex_examples() {
        let p = gen_from_hex(&HexFilling::new(1, 1, 1, 0, 0, 0));
        assert_eq!(p.relators_string(), "x1^-1, x2^-1*x3^-1*x2^-1, x3^-1*x2^-1");
        let p = gen_from_hex(&HexFilling::default());
        assert!(p.relators.iter().all(Word::is_identity));
        let p = gen_from_hex(&HexFilling::new(1, 1, 0, 0, 1, 0));
        assert_eq!(p.relators, words(&["x1^-1", "x2^-1", "x3^-1"]));
    }

    #[test]
    fn open_book_example_is_f_artin() {
        let p = Presentation::new(
            3,
            words(&["x1*x2*x3*x1*x2*x1", "x1*x2*x3*x1*x2^2", "x1*x2*x3^2"]),
        )
        .unwrap();
        assert!(verify_artin(&p).unwrap().f);
    }

    #[test]
    fn powers_satisfy_both() {
        let p = Presentation::new(3, words(&["x1^4", "x2^-1", "x3^2"])).unwrap();
        assert_eq!(verify_artin(&p).unwrap(), ArtinCheck { w: true, f: true });
    }

    #[test]
    fn rank_mismatch() {
        let p = Presentation::new(3, words(&["x1", "x2"])).unwrap();
        assert_eq!(
            verify_artin(&p),
            Err(Error::RankMismatch {
                expected: 3,
                found: 2
            })
        );
        assert!(Presentation::new(2, words(&["x3"])).is_err());
    }

    #[test]
    fn file_format_round_trips() {
        let p = gen_from_hex(&HexFilling::new(1, 1, 1, 0, 0, 0));
        let text = p.to_string();
        assert_eq!(text, "rank 3\nx1^-1\nx2^-1*x3^-1*x2^-1\nx3^-1*x2^-1\n");
        let q: Presentation = text.parse().unwrap();
        assert_eq!(q.relators, p.relators);
        let e: Presentation = "rank 3\n1\n1\n1\n".parse().unwrap();
        assert_eq!(e.relators.len(), 3);
    }

    #[test]
    fn rat_group_drops_last() {
        let p = Presentation::new(3, words(&["x1^-1", "x2^-1", "x3^-1"])).unwrap();
        let r = rat_group(&p, true);
        assert_eq!(r.presentation.relators, words(&["x1^-1", "x2^-1"]));
        assert!(r.warnings.is_empty());
        let bad = Presentation::new(3, words(&["x1*x2", "x2", "x3"])).unwrap();
        assert!(!rat_group(&bad, false).warnings.is_empty());
    }
}
