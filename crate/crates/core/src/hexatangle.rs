//! Integral fillings of the hexatangle, its tetrahedral symmetries, the
//! correspondence with surgery on a closed pure 3-braid, and the
//! parametric table rows that list fillings giving the trivial knot.
//!
//! Fillings are always held in the canonical slot order
//! `(alpha, beta, gamma, delta, epsilon, eta)`; tables with a different
//! printed column order carry an explicit column map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::braid::PureBraid;
use crate::data;
use crate::error::{Error, Result};
use crate::lex::Cursor;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Epsilon,
    Eta,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::Alpha,
        Param::Beta,
        Param::Gamma,
        Param::Delta,
        Param::Epsilon,
        Param::Eta,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Beta => "beta",
            Param::Gamma => "gamma",
            Param::Delta => "delta",
            Param::Epsilon => "epsilon",
            Param::Eta => "eta",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Some(match s {
            "alpha" | "α" => Param::Alpha,
            "beta" | "β" => Param::Beta,
            "gamma" | "γ" => Param::Gamma,
            "delta" | "δ" => Param::Delta,
            "epsilon" | "ε" | "ϵ" => Param::Epsilon,
            "eta" | "η" => Param::Eta,
            _ => return None,
        })
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Param::from_name(s.trim())
            .ok_or_else(|| Error::parse(0, format!("unknown parameter `{s}`")))
    }
}

/// Six integer fillings in canonical order.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct HexFilling(pub [i64; 6]);

impl HexFilling {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64, epsilon: i64, eta: i64) -> Self {
        HexFilling([alpha, beta, gamma, delta, epsilon, eta])
    }

    pub fn get(&self, p: Param) -> i64 {
        self.0[p.index()]
    }

    pub fn set(&mut self, p: Param, v: i64) {
        self.0[p.index()] = v;
    }

    /// Mirror image: every integral tangle `n` becomes `-n`.
    pub fn mirror(&self) -> HexFilling {
        HexFilling(self.0.map(|v| -v))
    }

    /// The surgery description of the double branched cover: framings
    /// `(-a-d-h, -b-d-g-h, -e-g-h)` on the closure of
    /// `s1^{-2d} s2^{-2g} Delta^{-2h}` (letters abbreviate the six slots).
    pub fn to_surgery(&self) -> SurgerySpec {
        let [a, b, g, d, e, h] = self.0;
        SurgerySpec {
            braid: PureBraid::new(vec![(-d, -g)], -h),
            framings: (-a - d - h, -b - d - g - h, -e - g - h),
        }
    }
}

impl fmt::Display for HexFilling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d, e, h] = self.0;
        write!(f, "{a},{b},{c},{d},{e},{h}")
    }
}

impl FromStr for HexFilling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            return Err(Error::parse(
                0,
                format!("expected six comma-separated integers, got {}", parts.len()),
            ));
        }
        let mut v = [0i64; 6];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::parse(0, format!("bad integer `{p}`")))?;
        }
        Ok(HexFilling(v))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgerySpec {
    /// Single-block braid `(e1, f1) = (-delta, -gamma)`, twist `-eta`.
    pub braid: PureBraid,
    /// Framings `(m, n, p)`.
    pub framings: (i64, i64, i64),
}

/// Slot permutation: the new value of slot `s` is the old value at
/// `assignment[s]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HexSymmetry {
    pub index: usize,
    pub assignment: [Param; 6],
}

impl HexSymmetry {
    pub fn identity(index: usize) -> Self {
        HexSymmetry {
            index,
            assignment: Param::ALL,
        }
    }

    pub fn apply(&self, h: &HexFilling) -> HexFilling {
        HexFilling(self.assignment.map(|src| h.get(src)))
    }

    pub fn is_bijection(&self) -> bool {
        self.assignment.iter().collect::<BTreeSet<_>>().len() == 6
    }

    pub fn is_identity(&self) -> bool {
        self.assignment == Param::ALL
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &HexSymmetry) -> [Param; 6] {
        then.assignment.map(|p| self.assignment[p.index()])
    }

    pub fn inverse_assignment(&self) -> [Param; 6] {
        let mut inv = Param::ALL;
        for (slot, src) in Param::ALL.iter().zip(self.assignment) {
            inv[src.index()] = *slot;
        }
        inv
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryTable {
    pub rows: Vec<HexSymmetry>,
}

impl SymmetryTable {
    /// Parse a header naming the six column slots followed by one row per
    /// symmetry, each cell the name of the source slot.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::data("symmetries", "empty file"))?;
        let columns = parse_header(header, "symmetries")?;
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split_whitespace().collect();
            if cells.len() != 6 {
                return Err(Error::data(
                    "symmetries",
                    format!("row {} has {} cells", i + 1, cells.len()),
                ));
            }
            let mut assignment = Param::ALL;
            for (col, cell) in columns.iter().zip(&cells) {
                assignment[col.index()] = Param::from_name(cell).ok_or_else(|| {
                    Error::data(
                        "symmetries",
                        format!("row {}: unknown slot `{cell}`", i + 1),
                    )
                })?;
            }
            rows.push(HexSymmetry {
                index: i + 1,
                assignment,
            });
        }
        Ok(SymmetryTable { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, k: usize) -> Result<&HexSymmetry> {
        if k == 0 || k > self.rows.len() {
            return Err(Error::SymmetryIndex(k));
        }
        Ok(&self.rows[k - 1])
    }

    pub fn apply(&self, k: usize, h: &HexFilling) -> Result<HexFilling> {
        Ok(self.get(k)?.apply(h))
    }

    fn position(&self, assignment: &[Param; 6]) -> Option<usize> {
        self.rows.iter().position(|r| &r.assignment == assignment)
    }

    /// Images of `h` under every row, optionally with mirror images,
    /// deduplicated and sorted.
    pub fn orbit(&self, h: &HexFilling, include_mirror: bool) -> Vec<HexFilling> {
        let mut set = BTreeSet::new();
        for row in &self.rows {
            let img = row.apply(h);
            set.insert(img);
            if include_mirror {
                set.insert(img.mirror());
            }
        }
        set.into_iter().collect()
    }
}

/// The symmetry table bundled with the crate, stored as printed.
pub fn builtin_symmetries() -> &'static SymmetryTable {
    static TABLE: OnceLock<SymmetryTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        SymmetryTable::parse(data::SYMMETRIES).expect("bundled symmetry table parses")
    })
}

pub fn apply_symmetry(k: usize, h: &HexFilling) -> Result<HexFilling> {
    builtin_symmetries().apply(k, h)
}

pub fn orbit(h: &HexFilling, include_mirror: bool) -> Vec<HexFilling> {
    builtin_symmetries().orbit(h, include_mirror)
}

/// Vertex pair of the tetrahedron edge carrying each slot. Derived from
/// the linking matrix of the surgery description, which is the reduced
/// Laplacian of this edge-weighted `K4`.
pub fn tetrahedron_edge(p: Param) -> (usize, usize) {
    match p {
        Param::Alpha => (0, 1),
        Param::Beta => (1, 2),
        Param::Epsilon => (2, 3),
        Param::Delta => (0, 2),
        Param::Gamma => (1, 3),
        Param::Eta => (0, 3),
    }
}

fn edge_slot(a: usize, b: usize) -> Param {
    let key = (a.min(b), a.max(b));
    Param::ALL
        .into_iter()
        .find(|&p| tetrahedron_edge(p) == key)
        .expect("every vertex pair is an edge")
}

/// The 24 rotations and reflections of the tetrahedron acting on its
/// edges, generated from vertex permutations in lexicographic order.
pub fn tetrahedral_control() -> SymmetryTable {
    let mut rows = Vec::with_capacity(24);
    let mut perm = [0usize, 1, 2, 3];
    loop {
        let assignment = Param::ALL.map(|slot| {
            let (a, b) = tetrahedron_edge(slot);
            edge_slot(perm[a], perm[b])
        });
        rows.push(HexSymmetry {
            index: rows.len() + 1,
            assignment,
        });
        if !next_permutation(&mut perm) {
            break;
        }
    }
    SymmetryTable { rows }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n)
        .rev()
        .find(|&j| p[j] > p[i])
        .expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryCheck {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub checks: Vec<SymmetryCheck>,
    /// Pairings of the six slots preserved by every row.
    pub opposite_pairings: Vec<[(Param, Param); 3]>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&SymmetryCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SymmetryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{}\t{}", if c.passed { "PASS" } else { "FAIL" }, c.name)?;
            for d in &c.details {
                writeln!(f, "\t{d}")?;
            }
        }
        Ok(())
    }
}

const DETAIL_LIMIT: usize = 20;

fn check(name: &str, failures: Vec<String>) -> SymmetryCheck {
    let total = failures.len();
    let mut details: Vec<String> = failures.into_iter().take(DETAIL_LIMIT).collect();
    if total > DETAIL_LIMIT {
        details.push(format!("... {} more", total - DETAIL_LIMIT));
    }
    SymmetryCheck {
        name: name.to_string(),
        passed: total == 0,
        details,
    }
}

/// All 15 ways to split the six slots into three unordered pairs.
fn pairings() -> Vec<[(Param, Param); 3]> {
    fn rec(rest: &[Param], acc: &mut Vec<(Param, Param)>, out: &mut Vec<[(Param, Param); 3]>) {
        if rest.is_empty() {
            out.push([acc[0], acc[1], acc[2]]);
            return;
        }
        let first = rest[0];
        for i in 1..rest.len() {
            let other: Vec<Param> = rest[1..]
                .iter()
                .copied()
                .enumerate()
                .filter(|&(j, _)| j + 1 != i)
                .map(|(_, p)| p)
                .collect();
            acc.push((first, rest[i]));
            rec(&other, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(&Param::ALL, &mut Vec::new(), &mut out);
    out
}

fn preserves_pairing(row: &HexSymmetry, pairing: &[(Param, Param); 3]) -> bool {
    let pairs: BTreeSet<(Param, Param)> =
        pairing.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    pairing.iter().all(|&(a, b)| {
        let (x, y) = (row.assignment[a.index()], row.assignment[b.index()]);
        pairs.contains(&(x.min(y), x.max(y)))
    })
}

/// Group-axiom and geometry checks on a symmetry table. Failures are
/// report content, listing offending rows by index.
pub fn validate_symmetry_table(table: &SymmetryTable) -> SymmetryReport {
    let mut checks = Vec::new();
    let rows = &table.rows;

    checks.push(check(
        "bijection",
        rows.iter()
            .filter(|r| !r.is_bijection())
            .map(|r| format!("row {} repeats a slot", r.index))
            .collect(),
    ));
    checks.push(check(
        "order-24",
        if rows.len() == 24 {
            vec![]
        } else {
            vec![format!("{} rows", rows.len())]
        },
    ));
    checks.push(check(
        "identity",
        if rows.iter().any(HexSymmetry::is_identity) {
            vec![]
        } else {
            vec!["no identity row".into()]
        },
    ));

    let mut dups = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[i].assignment == rows[j].assignment {
                dups.push(format!(
                    "rows {} and {} coincide",
                    rows[i].index, rows[j].index
                ));
            }
        }
    }
    checks.push(check("distinct", dups));

    let mut open = Vec::new();
    for a in rows {
        for b in rows {
            if table.position(&a.then(b)).is_none() {
                open.push(format!(
                    "row {} then row {} is not in the table",
                    a.index, b.index
                ));
            }
        }
    }
    checks.push(check("closure", open));

    checks.push(check(
        "inverses",
        rows.iter()
            .filter(|r| table.position(&r.inverse_assignment()).is_none())
            .map(|r| format!("inverse of row {} is not in the table", r.index))
            .collect(),
    ));

    let all = pairings();
    let preserved: Vec<[(Param, Param); 3]> = all
        .iter()
        .filter(|p| rows.iter().all(|r| preserves_pairing(r, p)))
        .copied()
        .collect();
    let opposition = if preserved.is_empty() {
        // report the pairing broken by the fewest rows
        let best = all
            .iter()
            .min_by_key(|p| rows.iter().filter(|r| !preserves_pairing(r, p)).count())
            .expect("fifteen pairings");
        let mut msgs = vec![format!(
            "no pairing preserved; closest is {}",
            fmt_pairing(best)
        )];
        msgs.extend(
            rows.iter()
                .filter(|r| !preserves_pairing(r, best))
                .map(|r| format!("row {} breaks {}", r.index, fmt_pairing(best))),
        );
        msgs
    } else {
        vec![]
    };
    checks.push(check("opposition", opposition));

    let control = tetrahedral_control();
    checks.push(check(
        "tetrahedral",
        rows.iter()
            .filter(|r| control.position(&r.assignment).is_none())
            .map(|r| format!("row {} is not an edge action of the tetrahedron", r.index))
            .collect(),
    ));

    SymmetryReport {
        checks,
        opposite_pairings: preserved,
    }
}

pub fn fmt_pairing(p: &[(Param, Param); 3]) -> String {
    p.iter()
        .map(|(a, b)| format!("{{{a},{b}}}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// A printed table cell: an optional `±` on the constant, an integer
/// constant and at most one variable with coefficient `+-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearCell {
    pub pm: bool,
    pub constant: i64,
    pub coeff: i64,
    pub var: Option<Param>,
    /// Whether the variable term was printed before the constant.
    pub var_first: bool,
}

impl LinearCell {
    pub fn constant(c: i64) -> Self {
        LinearCell {
            pm: false,
            constant: c,
            coeff: 0,
            var: None,
            var_first: false,
        }
    }

    /// Value on the given `±` branch (`sign` is `+1` or `-1`).
    pub fn value(&self, sign: i64, assignment: &BTreeMap<Param, i64>) -> Result<i64> {
        let c = if self.pm {
            sign * self.constant
        } else {
            self.constant
        };
        match self.var {
            None => Ok(c),
            Some(v) => {
                let x = assignment
                    .get(&v)
                    .ok_or_else(|| Error::UnboundVariable(v.name().into()))?;
                Ok(c + self.coeff * x)
            }
        }
    }

    /// Both `±` branches (one value when there is no `±`).
    pub fn values(&self, assignment: &BTreeMap<Param, i64>) -> Result<Vec<i64>> {
        if self.pm {
            Ok(vec![
                self.value(1, assignment)?,
                self.value(-1, assignment)?,
            ])
        } else {
            Ok(vec![self.value(1, assignment)?])
        }
    }
}

impl FromStr for LinearCell {
    type Err = Error;

    /// `CELL := ["±"] TERM (("+"|"-") TERM)*`, `TERM := INT | VAR`.
    fn from_str(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text);
        cur.skip_ws();
        let pm = cur.eat('±') || cur.eat_str("+-");
        let mut cell = LinearCell {
            pm,
            constant: 0,
            coeff: 0,
            var: None,
            var_first: false,
        };
        let mut first = true;
        let mut saw_constant = false;
        loop {
            cur.skip_ws();
            let sign = if cur.eat('-') {
                -1
            } else if cur.eat('+') || first {
                1
            } else {
                return Err(cur.error("expected `+` or `-`"));
            };
            cur.skip_ws();
            let at = cur.pos();
            if matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                let v = cur.unsigned()? as i64;
                cell.constant += sign * v;
                saw_constant = true;
            } else if let Some(name) = cur.ident() {
                let p = Param::from_name(name)
                    .ok_or_else(|| Error::parse(at, format!("unknown variable `{name}`")))?;
                if cell.var.is_some() {
                    return Err(Error::parse(at, "at most one variable per cell"));
                }
                cell.var = Some(p);
                cell.coeff = sign;
                cell.var_first = !saw_constant;
            } else {
                return Err(cur.error("expected integer or variable"));
            }
            if first && pm && cell.var.is_some() {
                return Err(Error::parse(at, "`±` must apply to an integer constant"));
            }
            first = false;
            cur.skip_ws();
            if cur.at_end() {
                break;
            }
        }
        if pm && cell.constant == 0 {
            return Err(Error::parse(0, "`±` on a zero constant"));
        }
        Ok(cell)
    }
}

impl fmt::Display for LinearCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let constant = |f: &mut fmt::Formatter<'_>, leading: bool| -> fmt::Result {
            if self.pm {
                write!(f, "±{}", self.constant)
            } else if leading {
                write!(f, "{}", self.constant)
            } else if self.constant < 0 {
                write!(f, "-{}", -self.constant)
            } else {
                write!(f, "+{}", self.constant)
            }
        };
        let var = |f: &mut fmt::Formatter<'_>, v: Param, leading: bool| -> fmt::Result {
            match (self.coeff < 0, leading) {
                (true, _) => write!(f, "-{v}"),
                (false, true) => write!(f, "{v}"),
                (false, false) => write!(f, "+{v}"),
            }
        };
        match self.var {
            None => constant(f, true),
            Some(v) if self.constant == 0 && !self.pm => var(f, v, true),
            Some(v) if self.var_first => {
                var(f, v, true)?;
                constant(f, false)
            }
            Some(v) => {
                constant(f, true)?;
                var(f, v, false)
            }
        }
    }
}

pub fn parse_cell(text: &str) -> Result<LinearCell> {
    text.parse()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamRow {
    pub table: u8,
    pub row: usize,
    /// Printed column order.
    pub columns: [Param; 6],
    /// Cells in printed column order.
    pub cells: [LinearCell; 6],
}

/// One concrete filling produced by a table row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowInstance {
    pub assignment: BTreeMap<Param, i64>,
    /// One `+`/`-` per `±` cell in printed column order; empty if none.
    pub branch: String,
    pub filling: HexFilling,
}

impl ParamRow {
    pub fn free_vars(&self) -> BTreeSet<Param> {
        self.cells.iter().filter_map(|c| c.var).collect()
    }

    pub fn pm_count(&self) -> usize {
        self.cells.iter().filter(|c| c.pm).count()
    }

    /// Cells re-serialized in printed order, tab-separated.
    pub fn to_tsv(&self) -> String {
        self.cells
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("\t")
    }

    /// Every `±` branch of the row under `assignment`, in branch order
    /// `+` before `-`, reordered into canonical slot order.
    pub fn instantiate(&self, assignment: &BTreeMap<Param, i64>) -> Result<Vec<RowInstance>> {
        let pm = self.pm_count();
        let mut out = Vec::with_capacity(1 << pm);
        for mask in 0..(1u32 << pm) {
            let mut filling = HexFilling::default();
            let mut branch = String::with_capacity(pm);
            let mut k = 0;
            for (col, cell) in self.columns.iter().zip(&self.cells) {
                let sign = if cell.pm {
                    let minus = (mask >> (pm - 1 - k)) & 1 == 1;
                    k += 1;
                    branch.push(if minus { '-' } else { '+' });
                    if minus {
                        -1
                    } else {
                        1
                    }
                } else {
                    1
                };
                filling.set(*col, cell.value(sign, assignment)?);
            }
            out.push(RowInstance {
                assignment: assignment.clone(),
                branch,
                filling,
            });
        }
        Ok(out)
    }

    /// All assignments of the free variables over `lo..=hi`, in
    /// lexicographic order of the canonical variable order.
    pub fn assignments(&self, lo: i64, hi: i64) -> Vec<BTreeMap<Param, i64>> {
        let vars: Vec<Param> = self.free_vars().into_iter().collect();
        let mut out = vec![BTreeMap::new()];
        for v in vars {
            let mut next = Vec::new();
            for partial in &out {
                for x in lo..=hi {
                    let mut a = partial.clone();
                    a.insert(v, x);
                    next.push(a);
                }
            }
            out = next;
        }
        out
    }

    pub fn instantiate_range(&self, lo: i64, hi: i64) -> Vec<RowInstance> {
        self.assignments(lo, hi)
            .iter()
            .flat_map(|a| {
                self.instantiate(a)
                    .expect("assignment binds every free variable")
            })
            .collect()
    }
}

pub fn instantiate_row(
    row: &ParamRow,
    assignment: &BTreeMap<Param, i64>,
) -> Result<Vec<HexFilling>> {
    Ok(row
        .instantiate(assignment)?
        .into_iter()
        .map(|i| i.filling)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamTable {
    pub id: u8,
    pub columns: [Param; 6],
    pub rows: Vec<ParamRow>,
}

impl ParamTable {
    /// First line names the printed column order; each further line holds
    /// six tab-separated cells.
    pub fn parse(id: u8, text: &str) -> Result<Self> {
        let name = data::table_file_name(id);
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::data(&name, "empty file"))?;
        let columns = parse_header(header, &name)?;
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let raw: Vec<&str> = line.split('\t').map(str::trim).collect();
            if raw.len() != 6 {
                return Err(Error::data(
                    &name,
                    format!("row {} has {} cells", i + 1, raw.len()),
                ));
            }
            let mut cells = [LinearCell::constant(0); 6];
            for (slot, text) in cells.iter_mut().zip(&raw) {
                *slot = text.parse().map_err(|e| {
                    Error::data(&name, format!("row {}: cell `{text}`: {e}", i + 1))
                })?;
            }
            let row = ParamRow {
                table: id,
                row: i + 1,
                columns,
                cells,
            };
            if row.free_vars().len() > 2 {
                return Err(Error::data(
                    &name,
                    format!("row {} has more than two free variables", i + 1),
                ));
            }
            rows.push(row);
        }
        Ok(ParamTable { id, columns, rows })
    }

    pub fn load(source: &data::DataSource, id: u8) -> Result<Self> {
        ParamTable::parse(id, &source.read(&data::table_file_name(id))?)
    }

    pub fn header(&self) -> String {
        self.columns
            .iter()
            .map(|p| p.name())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn parse_header(line: &str, source: &str) -> Result<[Param; 6]> {
    let names: Vec<&str> = line.split_whitespace().collect();
    if names.len() != 6 {
        return Err(Error::data(
            source,
            format!("header names {} columns, expected 6", names.len()),
        ));
    }
    let mut cols = Param::ALL;
    for (slot, n) in cols.iter_mut().zip(&names) {
        *slot = Param::from_name(n)
            .ok_or_else(|| Error::data(source, format!("unknown column `{n}`")))?;
    }
    if cols.iter().collect::<BTreeSet<_>>().len() != 6 {
        return Err(Error::data(source, "header repeats a column"));
    }
    Ok(cols)
}
